import math

import numpy as np
import pytest

from vbs_ge.contraction import log2_lambda_sq
from vbs_ge.core import Chain, ProductAnsatz, sector_ansatz
from vbs_ge.dense import (
    DenseCapExceeded,
    dense_lambda_sq,
    dense_optimize,
    dense_overlap,
    dense_state,
    single_site_rdm,
)


def test_spin1_pbc_amplitudes_and_norm():
    st = dense_state(Chain(1, 2))
    amps = st.tensor()
    assert amps[1, 1] == pytest.approx(2.0)  # |0,0>
    assert st.norm_sq == pytest.approx(12.0)
    assert dense_state(Chain(1, 4)).norm_sq == pytest.approx(84.0)


def test_pbc_rdm_is_maximally_mixed():
    st = dense_state(Chain(1, 6))
    for site in range(6):
        np.testing.assert_allclose(single_site_rdm(st, site), np.eye(3) / 3, atol=1e-14)


def test_open_edge_state_has_polarised_end():
    rho = single_site_rdm(dense_state(Chain(1, 6, "obc", (1, 1))), 0)
    assert np.trace(rho) == pytest.approx(1.0)
    assert not np.allclose(rho, np.eye(3) / 3, atol=1e-3)


def test_rdm_site_out_of_range():
    with pytest.raises(IndexError):
        single_site_rdm(dense_state(Chain(1, 3)), 3)


def test_dense_state_rejects_edge_average():
    with pytest.raises(ValueError):
        dense_state(Chain(1, 4, "obc-avg"))


def test_dense_cap():
    with pytest.raises(DenseCapExceeded):
        dense_state(Chain(2, 12), cap=10**6)


@pytest.mark.parametrize(
    "chain",
    [Chain(1, 6), Chain(2, 5), Chain(3, 4), Chain(1, 5, "obc", (2, 1)), Chain(2, 4, "obc-avg")],
    ids=str,
)
def test_dense_agrees_with_transfer_matrix(chain):
    rng = np.random.default_rng(11)
    D = chain.phys_dim
    raw = rng.standard_normal((chain.L, D)) + 1j * rng.standard_normal((chain.L, D))
    ansatz = ProductAnsatz(chain.s, raw / np.linalg.norm(raw, axis=1, keepdims=True))
    for a in (ansatz, sector_ansatz(chain.s, "even"), sector_ansatz(chain.s, "odd")):
        d = dense_lambda_sq(chain, a)
        t = log2_lambda_sq(chain, a)
        if d == 0:
            assert t.exact_zero
        else:
            assert t.log2value == pytest.approx(math.log2(d), abs=1e-12)


def test_dense_overlap_single_vector_is_repeated():
    st = dense_state(Chain(2, 4))
    v = sector_ansatz(2, "even").vectors
    assert dense_overlap(st, v) == pytest.approx(dense_overlap(st, np.repeat(v, 4, axis=0)))


def test_optimizer_reaches_neel_value_on_spin1_square():
    best, state = dense_optimize(Chain(1, 4), restarts=10, seed=1)
    assert 4 / 21 - 1e-9 <= best <= 1.0
    assert dense_lambda_sq(Chain(1, 4), state) == pytest.approx(best, rel=1e-9)
    # uniform sector states only reach 4/84
    assert best > 4 / 84 + 0.1


def test_optimizer_monotone_in_restarts():
    chain = Chain(2, 4)
    a, _ = dense_optimize(chain, restarts=2, seed=5)
    b, _ = dense_optimize(chain, restarts=6, seed=5)
    assert b >= a


def test_optimizer_odd_length():
    best, _ = dense_optimize(Chain(1, 3), restarts=10, seed=0)
    assert best == pytest.approx(1 / 6, rel=1e-6)


def test_optimizer_needs_a_restart():
    with pytest.raises(ValueError):
        dense_optimize(Chain(1, 4), restarts=0)
