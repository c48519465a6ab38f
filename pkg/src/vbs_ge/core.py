"""Local tensors and parity-sector product states of the spin-s VBS chain.

The VBS state is written as a matrix product of ``(s+1) x (s+1)`` matrices
whose entries are single-site kets ``coefficient * |s; m>`` with
``m = q - p``.  Because every bond pair ``(p, q)`` carries exactly one level,
a tensor is stored as a dense coefficient matrix plus the fixed level map; the
per-level slices ``G_m`` used by the contractions are derived from it.

Bond indices are 1-based ``(p, q)`` in every public signature, matching the
usual way the boundary states ``|VBS; p, q>`` are labelled.  Arrays are
0-based internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "InvalidSpinError",
    "DimensionError",
    "Chain",
    "LocalTensor",
    "ProductAnsatz",
    "coefficient_squared",
    "exact_coefficient",
    "local_tensor",
    "boundary_tensor",
    "sector_levels",
    "sector_amplitude",
    "sector_ansatz",
    "contracted_row",
]

BOUNDARIES = ("pbc", "obc", "obc-avg")
SECTORS = ("even", "odd")


class InvalidSpinError(ValueError):
    """Raised for a spin magnitude that is not a positive integer."""


class DimensionError(ValueError):
    """Raised when tensors or states of different spin are combined."""


def _check_spin(s) -> int:
    if isinstance(s, bool) or not isinstance(s, (int, np.integer)) or s < 1:
        raise InvalidSpinError(f"spin must be a positive integer, got {s!r}")
    return int(s)


@dataclass(frozen=True)
class Chain:
    """A spin-s VBS chain of length L with a boundary condition.

    Parameters
    ----------
    s : int
        Spin magnitude, ``s >= 1``.  Physical dimension ``2s+1``, bond
        dimension ``s+1``.
    L : int
        Number of sites, ``L >= 2``.
    bc : {'pbc', 'obc', 'obc-avg'}
        Periodic chain, a single open-boundary state ``|VBS; p, q>``, or the
        average over all ``(s+1)**2`` open-boundary states.
    edge : tuple of int, optional
        The 1-based ``(p, q)`` boundary labels; required for ``bc='obc'``.
    """

    s: int
    L: int
    bc: str = "pbc"
    edge: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "s", _check_spin(self.s))
        if isinstance(self.L, bool) or not isinstance(self.L, (int, np.integer)) or self.L < 2:
            raise ValueError(f"chain length must be an integer >= 2, got {self.L!r}")
        object.__setattr__(self, "L", int(self.L))
        if self.bc not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}, got {self.bc!r}")
        if self.bc == "obc":
            if self.edge is None:
                raise ValueError("bc='obc' needs edge=(p, q)")
            p, q = (int(x) for x in self.edge)
            if not (1 <= p <= self.s + 1 and 1 <= q <= self.s + 1):
                raise ValueError(f"edge {self.edge} out of range 1..{self.s + 1}")
            object.__setattr__(self, "edge", (p, q))
        elif self.edge is not None:
            raise ValueError(f"edge is only meaningful for bc='obc', got bc={self.bc!r}")

    @property
    def phys_dim(self) -> int:
        return 2 * self.s + 1

    @property
    def bond_dim(self) -> int:
        return self.s + 1

    @property
    def is_open(self) -> bool:
        return self.bc != "pbc"

    def label(self) -> str:
        if self.bc == "obc":
            return f"obc({self.edge[0]},{self.edge[1]})"
        return self.bc


def coefficient_squared(s: int, p: int, q: int) -> int:
    """Exact square of the ``(p, q)`` tensor coefficient, as an integer."""
    return (
        math.comb(s, p - 1)
        * math.comb(s, q - 1)
        * math.factorial(s - p + q)
        * math.factorial(s + p - q)
    )


def _sqrt_int(n: int) -> float:
    # Correctly rounded below 2**53; above that the floor root carries 64
    # guard bits before the single int -> float rounding.
    if n < 1 << 53:
        return math.sqrt(n)
    return math.ldexp(float(math.isqrt(n << 128)), -64)


def exact_coefficient(s: int, p: int, q: int, signed: bool = True) -> float:
    """The ``(p, q)`` coefficient of the local (or, unsigned, boundary) tensor.

    Built from the exact integer ``C(s,p-1) C(s,q-1) (s-p+q)! (s+p-q)!`` and
    rounded to floating point once.
    """
    s = _check_spin(s)
    value = _sqrt_int(coefficient_squared(s, p, q))
    if signed and (s + p - 1) % 2:
        value = -value
    return value


@dataclass(frozen=True)
class LocalTensor:
    """Coefficient matrix of a VBS site tensor together with its level map.

    ``coeffs[p-1, q-1]`` multiplies the ket ``|s; levels[p-1, q-1]>`` where
    ``levels[p-1, q-1] == q - p``.
    """

    s: int
    coeffs: np.ndarray
    signed: bool = True
    levels: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        d = self.s + 1
        idx = np.arange(d)
        object.__setattr__(self, "levels", idx[None, :] - idx[:, None])
        self.coeffs.setflags(write=False)
        self.levels.setflags(write=False)

    @property
    def bond_dim(self) -> int:
        return self.s + 1

    def entry(self, p: int, q: int) -> tuple[float, int]:
        """``(coefficient, level)`` for 1-based bond indices."""
        return float(self.coeffs[p - 1, q - 1]), q - p

    def slices(self) -> np.ndarray:
        """Array ``G`` of shape ``(2s+1, s+1, s+1)`` with ``G[m+s]`` the level-m part."""
        return _slices(self.s, self.signed)


@lru_cache(maxsize=None)
def _coeff_matrix(s: int, signed: bool) -> np.ndarray:
    d = s + 1
    out = np.empty((d, d))
    for p in range(1, d + 1):
        for q in range(1, d + 1):
            out[p - 1, q - 1] = exact_coefficient(s, p, q, signed)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _slices(s: int, signed: bool) -> np.ndarray:
    d = s + 1
    coeffs = _coeff_matrix(s, signed)
    g = np.zeros((2 * s + 1, d, d))
    for p in range(d):
        for q in range(d):
            g[q - p + s, p, q] = coeffs[p, q]
    g.setflags(write=False)
    return g


def local_tensor(s: int) -> LocalTensor:
    """The bulk tensor ``g`` with entries ``(-1)**(s+p-1) * |g(p, q)|``."""
    s = _check_spin(s)
    return LocalTensor(s, _coeff_matrix(s, True), signed=True)


def boundary_tensor(s: int) -> LocalTensor:
    """The first-site tensor of an open chain: ``local_tensor`` without signs."""
    s = _check_spin(s)
    return LocalTensor(s, _coeff_matrix(s, False), signed=False)


def sector_levels(s: int, sector: str) -> list[int]:
    """Levels ``m`` with ``exp(i pi m) = +1`` (even) or ``-1`` (odd)."""
    s = _check_spin(s)
    if sector == "even":
        return [2 * k for k in range(-(s // 2), s // 2 + 1)]
    if sector == "odd":
        return [2 * k + 1 for k in range(-((s + 1) // 2), (s - 1) // 2 + 1)]
    raise ValueError(f"sector must be 'even' or 'odd', got {sector!r}")


def sector_amplitude(s: int, sector: str) -> float:
    """Uniform amplitude: ``1/sqrt(1 + 2[s/2])`` (even), ``1/sqrt(2[(s+1)/2])`` (odd)."""
    return 1.0 / math.sqrt(len(sector_levels(s, sector)))


@dataclass(frozen=True)
class ProductAnsatz:
    """A product state ``|phi_1> ... |phi_L>`` over the levels ``-s..s``.

    ``vectors`` has shape ``(1, 2s+1)`` for a uniform state (the same vector on
    every site) or ``(L, 2s+1)`` for per-site vectors.  Column ``m + s`` holds
    the amplitude of level ``m``.  ``sector`` is ``None`` for states that are
    not restricted to a parity sector.
    """

    s: int
    vectors: np.ndarray
    sector: str | None = None

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vectors))
        if v.ndim != 2 or v.shape[1] != 2 * self.s + 1:
            raise DimensionError(f"site vectors must have length {2 * self.s + 1}")
        norms = np.linalg.norm(v, axis=1)
        if not np.allclose(norms, 1.0, rtol=0, atol=1e-12):
            raise ValueError("site vectors must have unit norm")
        if self.sector is not None:
            allowed = np.zeros(2 * self.s + 1, dtype=bool)
            allowed[[m + self.s for m in sector_levels(self.s, self.sector)]] = True
            if np.any(v[:, ~allowed] != 0):
                raise ValueError(f"amplitude outside the {self.sector} sector")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def uniform(self) -> bool:
        return self.vectors.shape[0] == 1

    def site_vector(self, site: int) -> np.ndarray:
        return self.vectors[0] if self.uniform else self.vectors[site]

    def levels(self) -> list[int]:
        if self.sector is not None:
            return sector_levels(self.s, self.sector)
        return list(range(-self.s, self.s + 1))


def sector_ansatz(s: int, sector: str) -> ProductAnsatz:
    """Uniform real non-negative product state spread evenly over a parity sector."""
    s = _check_spin(s)
    vec = np.zeros(2 * s + 1)
    vec[[m + s for m in sector_levels(s, sector)]] = sector_amplitude(s, sector)
    return ProductAnsatz(s, vec[None, :], sector)


def contracted_row(ansatz: ProductAnsatz, tensor: LocalTensor, site: int = 0) -> np.ndarray:
    """Project a site tensor onto the (conjugated) ansatz vector of one site.

    Entry ``(p, q)`` is ``conj(c_{q-p}) * g(p, q)``.  The result is real when
    the ansatz vector is real.
    """
    if ansatz.s != tensor.s:
        raise DimensionError(f"ansatz spin {ansatz.s} != tensor spin {tensor.s}")
    vec = ansatz.site_vector(site)
    return row_from_vector(vec, tensor)


def row_from_vector(vec: np.ndarray, tensor: LocalTensor) -> np.ndarray:
    vec = np.asarray(vec)
    if vec.shape != (2 * tensor.s + 1,):
        raise DimensionError(f"vector length {vec.shape} does not match spin {tensor.s}")
    c = vec.conj() if np.iscomplexobj(vec) else vec
    return c[tensor.levels + tensor.s] * tensor.coeffs
