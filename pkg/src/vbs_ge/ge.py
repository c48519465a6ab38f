"""Geometric entanglement per site from the parity-sector product states."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .contraction import NormResult, c_L_exact, log2_lambda_sq, obc_norms_exact
from .core import Chain, sector_ansatz

__all__ = [
    "UndefinedGlobalGeError",
    "GeResult",
    "ExtrapolatedGe",
    "GlobalGe",
    "SweepRow",
    "ge",
    "extrapolate",
    "extrapolated_eps",
    "global_ge",
    "asymptotic_norm_error",
    "sweep",
    "default_workers",
]


class UndefinedGlobalGeError(ValueError):
    """The even-sector overlap vanishes, so ``eps_even * L`` is not finite."""


def _eps(lam: NormResult, L: int) -> float:
    return math.inf if lam.exact_zero else -lam.log2value / L


@dataclass(frozen=True)
class GeResult:
    """Per-site entanglement of both parity sectors for one chain.

    ``eps_*`` are in bits per site and are ``math.inf`` when the sector
    overlap is exactly zero.  ``lambda_sq_*`` hold the normalised
    ``log2 |Lambda|**2``.
    """

    chain: Chain
    lambda_sq_even: NormResult
    lambda_sq_odd: NormResult
    obc_mode: str = "exact"
    eps_even: float = field(init=False)
    eps_odd: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "eps_even", _eps(self.lambda_sq_even, self.chain.L))
        object.__setattr__(self, "eps_odd", _eps(self.lambda_sq_odd, self.chain.L))

    @property
    def eps(self) -> float:
        return min(self.eps_even, self.eps_odd)

    @property
    def best_sector(self) -> str:
        return "even" if self.eps_even <= self.eps_odd else "odd"

    @property
    def odd_length(self) -> bool:
        """Odd L is reported but not canonical: sector overlaps may vanish there."""
        return self.chain.L % 2 == 1

    def sector(self, name: str) -> tuple[NormResult, float]:
        if name == "even":
            return self.lambda_sq_even, self.eps_even
        if name == "odd":
            return self.lambda_sq_odd, self.eps_odd
        raise ValueError(f"unknown sector {name!r}")


def ge(chain: Chain, obc_mode: str = "exact") -> GeResult:
    """Both sector overlaps of the uniform sector states and the resulting ``eps``.

    ``obc_mode`` only matters for ``bc='obc-avg'``.
    """
    lam = {
        sector: log2_lambda_sq(chain, sector_ansatz(chain.s, sector), mode=obc_mode)
        for sector in ("even", "odd")
    }
    return GeResult(chain, lam["even"], lam["odd"], obc_mode)


@dataclass(frozen=True)
class ExtrapolatedGe:
    eps_infinity: float
    slope: float
    residual: float


def extrapolate(points) -> ExtrapolatedGe:
    """Least-squares fit of ``eps(L) = eps_infinity + slope / L``.

    Parameters
    ----------
    points : iterable of (L, eps)
        At least three finite values at distinct lengths of one parity.
    """
    pts = sorted((int(L), float(e)) for L, e in points)
    if len(pts) < 3:
        raise ValueError("extrapolation needs at least 3 points")
    lengths = np.array([L for L, _ in pts])
    values = np.array([e for _, e in pts])
    if len(set(lengths.tolist())) != len(lengths):
        raise ValueError("extrapolation needs distinct lengths")
    if len(set((lengths % 2).tolist())) != 1:
        raise ValueError("odd and even lengths cannot be mixed")
    if not np.all(np.isfinite(values)):
        raise ValueError("extrapolation needs finite eps values")
    design = np.column_stack([np.ones(len(lengths)), 1.0 / lengths])
    coef, *_ = np.linalg.lstsq(design, values, rcond=None)
    resid = values - design @ coef
    return ExtrapolatedGe(float(coef[0]), float(coef[1]), float(np.sqrt(np.mean(resid**2))))


def extrapolated_eps(
    s: int,
    lengths=tuple(range(100, 401, 20)),
    sector: str = "even",
    bc: str = "pbc",
    obc_mode: str = "exact",
) -> ExtrapolatedGe:
    """Large-L estimate of one sector's ``eps`` from a range of chain lengths."""
    points = [(L, ge(Chain(s, L, bc), obc_mode).sector(sector)[1]) for L in lengths]
    return extrapolate(points)


@dataclass(frozen=True)
class GlobalGe:
    value: float
    chain: Chain


def global_ge(chain: Chain, eps_even: float | None = None) -> GlobalGe:
    """Total entanglement ``eps_even * L`` in bits."""
    if eps_even is None:
        eps_even = ge(chain).eps_even
    if not math.isfinite(eps_even):
        raise UndefinedGlobalGeError(f"eps_even is infinite for {chain}")
    return GlobalGe(eps_even * chain.L, chain)


def asymptotic_norm_error(chain: Chain) -> float:
    """``log2(sum over edges of <VBS;p,q|VBS;p,q>) - log2(c_L)``.

    Evaluated with exact integers, so a vanishing error is reported as
    exactly ``0.0`` instead of rounding noise.
    """
    if not chain.is_open:
        raise ValueError("the c_L asymptote concerns open chains")
    total = sum(map(sum, obc_norms_exact(chain.s, chain.L)))
    ratio = Fraction(total) / c_L_exact(chain.s, chain.L)
    if ratio == 1:
        return 0.0
    return math.log2(ratio.numerator) - math.log2(ratio.denominator)


@dataclass(frozen=True)
class SweepRow:
    s: int
    L: int
    result: GeResult | None = None
    error: str | None = None


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("VBS_GE_THREADS", "1")))
    except ValueError:
        return 1


def _sweep_cell(s: int, L: int, bc: str, obc_mode: str) -> SweepRow:
    try:
        return SweepRow(s, L, ge(Chain(s, L, bc), obc_mode))
    except Exception as exc:  # per-row isolation
        return SweepRow(s, L, error=f"{type(exc).__name__}: {exc}")


def sweep(spins, lengths, bc: str = "pbc", obc_mode: str = "exact", workers: int | None = None) -> list[SweepRow]:
    """``ge`` over a grid, s-major then L; failing cells become error rows."""
    spins, lengths = list(spins), list(lengths)
    if not spins or not lengths:
        raise ValueError("sweep needs non-empty spin and length lists")
    cells = [(s, L) for s in spins for L in lengths]
    workers = default_workers() if workers is None else workers
    if workers <= 1:
        return [_sweep_cell(s, L, bc, obc_mode) for s, L in cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: _sweep_cell(c[0], c[1], bc, obc_mode), cells))
