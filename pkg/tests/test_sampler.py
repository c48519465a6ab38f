import math

import numpy as np
import pytest

from vbs_ge.core import Chain
from vbs_ge.ge import ge
from vbs_ge.sampler import SampleMode, SampleRecord, haar_vector, sample, summarize


def test_same_seed_same_samples():
    a = sample(Chain(2, 6), "unconstrained", 20, seed=9)
    b = sample(Chain(2, 6), "unconstrained", 20, seed=9)
    assert [r.value for r in a] == [r.value for r in b]
    c = sample(Chain(2, 6), "unconstrained", 20, seed=10)
    assert [r.value for r in a] != [r.value for r in c]


def test_workers_keep_order_and_values():
    a = sample(Chain(1, 8), "perm-invariant", 30, seed=1, workers=1)
    b = sample(Chain(1, 8), "perm-invariant", 30, seed=1, workers=4)
    assert [r.index for r in b] == list(range(30))
    assert [r.value for r in a] == [r.value for r in b]


def test_prefix_stability():
    short = sample(Chain(1, 6), "unconstrained", 5, seed=3)
    long = sample(Chain(1, 6), "unconstrained", 15, seed=3)
    assert [r.value for r in short] == [r.value for r in long[:5]]


def test_modes_shape_the_vectors():
    chain = Chain(2, 6)
    for rec in sample(chain, "perm-invariant", 5, seed=0):
        assert np.all(rec.vectors == rec.vectors[0])
    for rec in sample(chain, "unconstrained", 5, seed=0):
        np.testing.assert_allclose(np.linalg.norm(rec.vectors, axis=1), 1.0, atol=1e-14)
        assert not np.allclose(rec.vectors[0], rec.vectors[1])
    for rec in sample(chain, "boundary-random", 5, seed=0):
        assert np.all(rec.vectors[1:] == rec.vectors[1])
        assert rec.mode is SampleMode.BOUNDARY_RANDOM


def test_haar_vector_is_unit():
    rng = np.random.default_rng(0)
    for dim in (1, 3, 9):
        assert np.linalg.norm(haar_vector(rng, dim)) == pytest.approx(1.0)


def test_perm_invariant_spin1_ring_respects_bound():
    chain = Chain(1, 10)
    bound = ge(chain).eps
    recs = sample(chain, "perm-invariant", 300, seed=4)
    summ = summarize(recs, bound)
    assert summ.minimum >= bound - 1e-12


def test_sample_rejects_bad_arguments():
    with pytest.raises(ValueError):
        sample(Chain(1, 4), "unconstrained", 0, seed=0)
    with pytest.raises(ValueError):
        sample(Chain(1, 4), "everything", 3, seed=0)


def _rec(v):
    return SampleRecord(0, v, 0, SampleMode.UNCONSTRAINED, Chain(1, 2), np.zeros((1, 3)))


def test_summarize_basic():
    summ = summarize([_rec(1.0), _rec(2.0), _rec(1.04), _rec(math.inf)], bound=1.0)
    assert summ.minimum == 1.0
    assert summ.mean == pytest.approx((1.0 + 2.0 + 1.04) / 3)
    assert summ.fraction_within == pytest.approx(2 / 3)
    assert (summ.n_finite, summ.n_zero_overlap) == (3, 1)
    assert summarize([_rec(1.0)]).fraction_within is None


def test_summarize_all_zero_and_empty():
    summ = summarize([_rec(math.inf)], bound=1.0)
    assert summ.minimum == math.inf and summ.n_finite == 0
    with pytest.raises(ValueError):
        summarize([])


@pytest.mark.parametrize("s", [2, 3, 4])
@pytest.mark.parametrize("bc", ["pbc", "obc-avg"])
def test_boundary_random_gap_shrinks_with_length(s, bc):
    gaps = []
    for L in (4, 8, 16):
        chain = Chain(s, L, bc)
        bound = ge(chain).eps
        summ = summarize(sample(chain, "boundary-random", 200, seed=3), bound)
        gaps.append(summ.minimum - bound)
    assert all(b < a for a, b in zip(gaps, gaps[1:])), gaps
