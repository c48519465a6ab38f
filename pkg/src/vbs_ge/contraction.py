"""Norms and product-state overlaps of VBS chains by transfer-matrix contraction.

Chain products are accumulated in a normal form ``body * 2**log2scale`` with
the largest ``|body|`` entry in ``[1, 2)``.  Rescaling is by exact powers of
two, so the mantissas are the same as an unscaled product wherever the latter
would not under- or overflow.

Overlap traces that vanish because of the parity structure of the site
matrices are reported as exact zeros rather than as rounding residue: if one
signed permutation ``S`` with ``S M S = -M`` exists for every factor of an
odd-length chain, the trace of the product is zero identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .core import (
    Chain,
    DimensionError,
    ProductAnsatz,
    boundary_tensor,
    coefficient_squared,
    local_tensor,
    row_from_vector,
    sector_ansatz,
)

__all__ = [
    "ScaledMatrix",
    "NormResult",
    "scaled_product",
    "scaled_power",
    "transfer_matrix",
    "anticommuting_signature",
    "norm_pbc",
    "norm_obc",
    "obc_norm_table",
    "obc_norms_exact",
    "log2_c_L",
    "c_L_exact",
    "overlap_pbc",
    "overlap_obc",
    "log2_overlap_sq",
    "log2_lambda_sq",
]


def _ldexp(body: np.ndarray, shift: int) -> np.ndarray:
    if np.iscomplexobj(body):
        return np.ldexp(body.real, shift) + 1j * np.ldexp(body.imag, shift)
    return np.ldexp(body, shift)


@dataclass(frozen=True)
class ScaledMatrix:
    """A matrix stored as ``body * 2**log2scale``.

    ``is_zero`` marks an identically zero product; ``log2scale`` is then
    meaningless and kept at 0.
    """

    body: np.ndarray
    log2scale: float = 0.0
    is_zero: bool = False

    @classmethod
    def from_matrix(cls, matrix, log2scale: float = 0.0) -> "ScaledMatrix":
        body = np.array(matrix)
        peak = np.max(np.abs(body)) if body.size else 0.0
        if peak == 0:
            return cls(np.zeros_like(body), 0.0, True)
        exponent = math.frexp(float(peak))[1] - 1
        return cls(_ldexp(body, -exponent), log2scale + exponent, False)

    def __matmul__(self, other) -> "ScaledMatrix":
        if isinstance(other, ScaledMatrix):
            if self.is_zero or other.is_zero:
                return ScaledMatrix(np.zeros_like(self.body @ other.body), 0.0, True)
            return ScaledMatrix.from_matrix(self.body @ other.body, self.log2scale + other.log2scale)
        if self.is_zero:
            return self
        return ScaledMatrix.from_matrix(self.body @ other, self.log2scale)

    def __rmatmul__(self, other) -> "ScaledMatrix":
        if self.is_zero:
            return self
        return ScaledMatrix.from_matrix(other @ self.body, self.log2scale)

    def value(self) -> np.ndarray:
        """The represented matrix; may overflow or underflow for long chains."""
        if self.is_zero:
            return np.zeros_like(self.body)
        return self.body * 2.0**self.log2scale

    def log2_abs(self, x) -> float:
        return math.log2(abs(x)) + self.log2scale if x != 0 and not self.is_zero else -math.inf

    def log2_abs_trace(self) -> float:
        return self.log2_abs(np.trace(self.body))

    def log2_abs_entry(self, i: int, j: int) -> float:
        return self.log2_abs(self.body[i, j])

    def log2_sum_squares(self) -> float:
        """``log2`` of the sum of ``|entry|**2`` over all entries."""
        if self.is_zero:
            return -math.inf
        total = float(np.sum(np.abs(self.body) ** 2))
        return math.log2(total) + 2 * self.log2scale if total > 0 else -math.inf


def scaled_product(factors: Iterable[np.ndarray]) -> ScaledMatrix:
    """Left-to-right product of square matrices, renormalised after every step."""
    result = None
    dim = None
    for factor in factors:
        factor = np.asarray(factor)
        if factor.ndim != 2 or factor.shape[0] != factor.shape[1]:
            raise DimensionError(f"factors must be square, got shape {factor.shape}")
        if dim is None:
            dim = factor.shape[0]
            result = ScaledMatrix.from_matrix(factor)
            continue
        if factor.shape[0] != dim:
            raise DimensionError(f"factor of size {factor.shape[0]} in a chain of size {dim}")
        result = result @ factor
    if result is None:
        raise ValueError("scaled_product needs at least one factor")
    return result


def scaled_power(matrix: np.ndarray, n: int) -> ScaledMatrix:
    """``matrix**n`` by binary powering, renormalised after every multiplication."""
    if n < 1:
        raise ValueError("power must be >= 1")
    square = scaled_product([matrix])
    result = None
    while True:
        if n & 1:
            result = square if result is None else result @ square
        n >>= 1
        if not n:
            return result
        square = square @ square


@dataclass(frozen=True)
class NormResult:
    """Base-2 logarithm of a squared norm or overlap, or an exact zero."""

    log2value: float
    exact_zero: bool = False

    @classmethod
    def zero(cls) -> "NormResult":
        return cls(-math.inf, True)

    @property
    def value(self) -> float:
        return 0.0 if self.exact_zero else 2.0**self.log2value

    def __sub__(self, other: "NormResult") -> "NormResult":
        # ratio in log space
        if other.exact_zero:
            raise ZeroDivisionError("division by an exactly zero norm")
        if self.exact_zero:
            return self
        return NormResult(self.log2value - other.log2value)


def transfer_matrix(bra: np.ndarray, ket: np.ndarray) -> np.ndarray:
    """``E[(p,q),(p',q')] = sum_m conj(bra_m[p,p']) ket_m[q,q']`` from level slices."""
    d = bra.shape[1]
    return np.einsum("mij,mkl->ikjl", bra.conj(), ket).reshape(d * d, d * d)


# Candidate symmetries are signed permutations of the bond index: the parity
# signature, the reversal p -> s+2-p, and their composition.
def _signatures(d: int):
    idx = np.arange(d)
    parity = np.where(idx % 2 == 0, 1.0, -1.0)
    ones = np.ones(d)
    return (
        ("parity", idx, parity),
        ("reversal", idx[::-1], ones),
        ("parity-reversal", idx[::-1], parity),
    )


def anticommuting_signature(matrices: Sequence[np.ndarray]) -> str | None:
    """Name of a signed permutation ``S`` with ``S M S^-1 = -M`` for all matrices.

    Uses exact floating point equality: every candidate only permutes and
    negates entries, so a true symmetry of the inputs is reproduced bit for bit.
    """
    mats = [np.asarray(m) for m in matrices]
    d = mats[0].shape[0]
    for name, perm, signs in _signatures(d):
        sign_outer = signs[:, None] * signs[None, :]
        if all(np.array_equal(sign_outer * m[np.ix_(perm, perm)], -m) for m in mats):
            return name
    return None


def _chain_product(rows: Sequence[np.ndarray]) -> ScaledMatrix:
    # rows[1:] all the same object for uniform states: power it instead
    if len(rows) > 2 and all(r is rows[1] for r in rows[2:]):
        return scaled_product([rows[0]]) @ scaled_power(rows[1], len(rows) - 1)
    return scaled_product(rows)


def _trace_result(rows: Sequence[np.ndarray]) -> NormResult:
    if len(rows) % 2 == 1:
        distinct = _distinct(rows)
        if anticommuting_signature(distinct) is not None:
            return NormResult.zero()
    prod = _chain_product(rows)
    log2_tr = prod.log2_abs_trace()
    if log2_tr == -math.inf:
        return NormResult.zero()
    return NormResult(2 * log2_tr)


def _distinct(rows: Sequence[np.ndarray]) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for r in rows:
        if not any(r is o for o in out):
            out.append(r)
    return out


def _require(chain: Chain, *allowed: str):
    if chain.bc not in allowed:
        raise ValueError(f"expected boundary in {allowed}, got {chain.bc!r}")


def norm_pbc(chain: Chain) -> NormResult:
    """``log2 <VBS|VBS>`` of the periodic chain, the trace of ``E**L``."""
    _require(chain, "pbc")
    return NormResult(_log2_norm_pbc(chain.s, chain.L))


@lru_cache(maxsize=256)
def _log2_norm_pbc(s: int, L: int) -> float:
    g = local_tensor(s).slices()
    return scaled_power(transfer_matrix(g, g), L).log2_abs_trace()


def _obc_norm_product(s: int, L: int) -> ScaledMatrix:
    g = local_tensor(s).slices()
    gs = boundary_tensor(s).slices()
    e = transfer_matrix(g, g)
    return _chain_product([transfer_matrix(gs, gs)] + [e] * (L - 1))


@lru_cache(maxsize=256)
def obc_norm_table(s: int, L: int) -> np.ndarray:
    """``log2 <VBS;p,q|VBS;p,q>`` for all 0-based ``(p-1, q-1)``, shape ``(s+1, s+1)``."""
    d = s + 1
    prod = _obc_norm_product(s, L)
    out = np.empty((d, d))
    for p in range(d):
        for q in range(d):
            out[p, q] = prod.log2_abs_entry(p * d + p, q * d + q)
    out.setflags(write=False)
    return out


def norm_obc(chain: Chain) -> NormResult:
    """``log2 <VBS;p,q|VBS;p,q>``: diagonal element of ``E_start E**(L-1)``."""
    _require(chain, "obc")
    p, q = chain.edge
    return NormResult(float(obc_norm_table(chain.s, chain.L)[p - 1, q - 1]))


def obc_norms_exact(s: int, L: int) -> list[list[int]]:
    """Exact integer norms of all ``|VBS; p, q>`` (0-based nested lists).

    Each level string fixes a single bond path once ``p`` is chosen, so a norm
    is a sum over paths of squared coefficient products: the ``(p, q)`` entry
    of ``K**L`` with ``K[p, q] = g(p, q)**2``.
    """
    d = s + 1
    k = [[coefficient_squared(s, p + 1, q + 1) for q in range(d)] for p in range(d)]
    acc = [row[:] for row in k]
    for _ in range(L - 1):
        acc = [[sum(acc[i][j] * k[j][c] for j in range(d)) for c in range(d)] for i in range(d)]
    return acc


def c_L_exact(s: int, L: int) -> Fraction:
    """``(s+1) * ((2s+1)! / (s+1))**L`` as an exact rational."""
    return (s + 1) * Fraction(math.factorial(2 * s + 1), s + 1) ** L


def log2_c_L(s: int, L: int) -> float:
    return math.log2(s + 1) + L * (math.log2(math.factorial(2 * s + 1)) - math.log2(s + 1))


def _ansatz_rows(chain: Chain, ansatz: ProductAnsatz) -> list[np.ndarray]:
    if ansatz.s != chain.s:
        raise DimensionError(f"ansatz spin {ansatz.s} != chain spin {chain.s}")
    if not ansatz.uniform and ansatz.vectors.shape[0] != chain.L:
        raise DimensionError(f"{ansatz.vectors.shape[0]} site vectors for a chain of length {chain.L}")
    bulk = local_tensor(chain.s)
    if ansatz.uniform:
        row = row_from_vector(ansatz.vectors[0], bulk)
        rows = [row] * chain.L
        if chain.is_open:
            rows[0] = row_from_vector(ansatz.vectors[0], boundary_tensor(chain.s))
        return rows
    rows = [row_from_vector(v, bulk) for v in ansatz.vectors]
    if chain.is_open:
        rows[0] = row_from_vector(ansatz.vectors[0], boundary_tensor(chain.s))
    return rows


def log2_overlap_sq(chain: Chain, ansatz: ProductAnsatz) -> NormResult:
    """``log2 |<Phi|VBS>|**2`` (unnormalised) for ``pbc`` or a single ``obc`` edge."""
    _require(chain, "pbc", "obc")
    rows = _ansatz_rows(chain, ansatz)
    if chain.bc == "pbc":
        return _trace_result(rows)
    p, q = chain.edge
    val = _chain_product(rows).log2_abs_entry(p - 1, q - 1)
    return NormResult.zero() if val == -math.inf else NormResult(2 * val)


def overlap_pbc(chain: Chain, sector: str | None = None, ansatz: ProductAnsatz | None = None) -> NormResult:
    """``log2 |<Phi|VBS>|**2`` for a periodic chain, ``Phi`` the uniform sector state by default."""
    _require(chain, "pbc")
    if ansatz is None:
        ansatz = sector_ansatz(chain.s, sector)
    return log2_overlap_sq(chain, ansatz)


def _average_exact(chain: Chain, prod: ScaledMatrix) -> NormResult:
    d = chain.s + 1
    norms = obc_norm_table(chain.s, chain.L)
    terms = []
    for p in range(d):
        for q in range(d):
            val = prod.log2_abs_entry(p, q)
            if val != -math.inf:
                terms.append(2 * val - norms[p, q])
    if not terms:
        return NormResult.zero()
    return NormResult(float(np.logaddexp2.reduce(terms)) - 2 * math.log2(d))


def overlap_obc(
    chain: Chain,
    sector: str | None = None,
    mode: str = "exact",
    ansatz: ProductAnsatz | None = None,
) -> NormResult:
    """Boundary-averaged ``log2 |Lambda|**2`` of an open chain.

    ``mode='exact'`` averages ``|<VBS;p,q|Phi>|**2 / <VBS;p,q|VBS;p,q>`` over
    all ``(s+1)**2`` edges with exact norms.  ``mode='asymptotic'`` divides the
    sum of squared row-product entries by ``c_L`` instead.
    """
    _require(chain, "obc-avg")
    if ansatz is None:
        ansatz = sector_ansatz(chain.s, sector)
    prod = _chain_product(_ansatz_rows(chain, ansatz))
    if mode == "exact":
        return _average_exact(chain, prod)
    if mode == "asymptotic":
        total = prod.log2_sum_squares()
        if total == -math.inf:
            return NormResult.zero()
        return NormResult(total - log2_c_L(chain.s, chain.L))
    raise ValueError(f"mode must be 'exact' or 'asymptotic', got {mode!r}")


def log2_lambda_sq(chain: Chain, ansatz: ProductAnsatz, mode: str = "exact") -> NormResult:
    """Normalised ``log2 |<Phi|VBS>|**2 / <VBS|VBS>`` for any boundary."""
    if chain.bc == "pbc":
        return log2_overlap_sq(chain, ansatz) - norm_pbc(chain)
    if chain.bc == "obc":
        return log2_overlap_sq(chain, ansatz) - norm_obc(chain)
    return overlap_obc(chain, mode=mode, ansatz=ansatz)
