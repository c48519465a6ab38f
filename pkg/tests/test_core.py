import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vbs_ge.core import (
    Chain,
    DimensionError,
    InvalidSpinError,
    ProductAnsatz,
    boundary_tensor,
    coefficient_squared,
    contracted_row,
    exact_coefficient,
    local_tensor,
    sector_amplitude,
    sector_ansatz,
    sector_levels,
)

R2 = math.sqrt(2)


def test_local_tensor_spin1_entries():
    g = local_tensor(1)
    expected = {(1, 1): (-1.0, 0), (1, 2): (-R2, 1), (2, 1): (R2, -1), (2, 2): (1.0, 0)}
    for (p, q), (c, m) in expected.items():
        got_c, got_m = g.entry(p, q)
        assert got_m == m
        assert got_c == pytest.approx(c, abs=1e-15)


def test_local_tensor_spin2_corner():
    c, m = local_tensor(2).entry(1, 3)
    assert m == 2
    assert c == pytest.approx(math.sqrt(24), rel=1e-15)


def test_boundary_tensor_spin1_and_spin2():
    b = boundary_tensor(1)
    assert np.allclose(b.coeffs, [[1, R2], [R2, 1]], atol=1e-15)
    assert b.entry(2, 1)[1] == -1
    assert boundary_tensor(2).entry(2, 2) == (4.0, 0)


@pytest.mark.parametrize("s", range(1, 9))
def test_boundary_is_unsigned_local(s):
    assert np.array_equal(boundary_tensor(s).coeffs, np.abs(local_tensor(s).coeffs))


@pytest.mark.parametrize("s", range(1, 9))
def test_local_tensor_structure(s):
    g = local_tensor(s)
    d = s + 1
    assert g.coeffs.shape == (d, d)
    assert np.all(np.abs(g.levels) <= s)
    assert np.array_equal(np.abs(g.coeffs), np.abs(g.coeffs).T)
    for p in range(1, d + 1):
        sign = (-1) ** (s + p - 1)
        assert np.all(np.sign(g.coeffs[p - 1]) == sign)
        for q in range(1, d + 1):
            assert g.levels[p - 1, q - 1] == q - p


@given(st.integers(1, 8), st.data())
def test_coefficients_within_one_ulp_of_exact(s, data):
    p = data.draw(st.integers(1, s + 1))
    q = data.draw(st.integers(1, s + 1))
    exact_sq = coefficient_squared(s, p, q)
    got = abs(exact_coefficient(s, p, q))
    # the correctly rounded root is within half an ulp, so its neighbours bracket the exact root
    lo, hi = np.nextafter(got, 0), np.nextafter(got, np.inf)
    assert Fraction(lo) ** 2 <= exact_sq <= Fraction(hi) ** 2


def test_large_spin_coefficient_uses_wide_integers():
    s = 20
    val = exact_coefficient(s, 1, s + 1, signed=False)
    assert val == pytest.approx(math.sqrt(float(math.factorial(2 * s))), rel=1e-15)


@pytest.mark.parametrize("bad", [0, -1, 1.5, True])
def test_invalid_spin(bad):
    with pytest.raises(InvalidSpinError):
        local_tensor(bad)
    with pytest.raises(InvalidSpinError):
        boundary_tensor(bad)


def test_sector_levels_and_amplitudes():
    assert sector_levels(1, "even") == [0]
    assert sector_levels(1, "odd") == [-1, 1]
    assert sector_levels(2, "even") == [-2, 0, 2]
    assert sector_levels(3, "odd") == [-3, -1, 1, 3]
    assert sector_amplitude(1, "even") == 1.0
    assert sector_amplitude(1, "odd") == pytest.approx(1 / R2)
    assert sector_amplitude(2, "even") == pytest.approx(1 / math.sqrt(3))
    for s in range(1, 10):
        assert sector_amplitude(s, "even") == pytest.approx(1 / math.sqrt(1 + 2 * (s // 2)))
        assert sector_amplitude(s, "odd") == pytest.approx(1 / math.sqrt(2 * ((s + 1) // 2)))


def test_sector_ansatz_is_uniform_normalised_and_real():
    a = sector_ansatz(2, "even")
    assert a.uniform and a.sector == "even"
    np.testing.assert_allclose(a.vectors[0], [1, 0, 1, 0, 1] / np.sqrt(3))
    assert not np.iscomplexobj(a.vectors)


def test_ansatz_validation():
    with pytest.raises(ValueError):
        ProductAnsatz(1, np.array([[1.0, 1.0, 0.0]]))
    with pytest.raises(ValueError):
        ProductAnsatz(1, np.array([[1.0, 0.0, 0.0]]), sector="even")
    with pytest.raises(DimensionError):
        ProductAnsatz(1, np.array([[1.0, 0.0]]))


def test_contracted_row_spin1():
    g = local_tensor(1)
    np.testing.assert_array_equal(contracted_row(sector_ansatz(1, "even"), g), [[-1, 0], [0, 1]])
    np.testing.assert_allclose(contracted_row(sector_ansatz(1, "odd"), g), [[0, -1], [1, 0]], atol=1e-15)


def test_contracted_row_conjugates_complex_coefficients():
    vec = np.array([0, 0, 1j, 0, 0])
    row = contracted_row(ProductAnsatz(2, vec[None, :]), local_tensor(2))
    np.testing.assert_allclose(row, -1j * np.diag(np.diag(local_tensor(2).coeffs)))


@pytest.mark.parametrize("s", range(1, 9))
def test_contracted_row_parity_blocks(s):
    g = local_tensor(s)
    idx = np.arange(s + 1)
    same = (idx[:, None] - idx[None, :]) % 2 == 0
    even = contracted_row(sector_ansatz(s, "even"), g)
    odd = contracted_row(sector_ansatz(s, "odd"), g)
    assert np.all(even[~same] == 0)
    assert np.all(odd[same] == 0)
    if s % 2 == 1:
        # odd-index block equals minus the even-index block read in reverse order
        np.testing.assert_array_equal(even[0::2, 0::2], -even[1::2, 1::2][::-1, ::-1])


def test_contracted_row_spin_mismatch():
    with pytest.raises(DimensionError):
        contracted_row(sector_ansatz(1, "even"), local_tensor(2))


def test_chain_validation():
    assert Chain(1, 2).bc == "pbc"
    assert Chain(2, 5, "obc", (3, 1)).edge == (3, 1)
    with pytest.raises(ValueError):
        Chain(1, 1)
    with pytest.raises(ValueError):
        Chain(1, 4, "obc")
    with pytest.raises(ValueError):
        Chain(1, 4, "obc", (3, 1))
    with pytest.raises(ValueError):
        Chain(1, 4, "pbc", (1, 1))
    with pytest.raises(ValueError):
        Chain(1, 4, "open")
    with pytest.raises(InvalidSpinError):
        Chain(0, 4)
