"""Seeded random product states and their per-site log-overlaps with the VBS state.

Three sampling regimes:

``unconstrained``
    independent Haar-random vectors over all ``2s+1`` levels on every site;
``perm-invariant``
    one Haar-random vector repeated on every site;
``boundary-random``
    the uniform sector state on sites ``2..L`` with a Haar-random first site.

Sample ``i`` draws from the generator seeded by ``(seed, i)``, so a record
does not depend on how many samples precede it or on execution order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .contraction import NormResult, log2_lambda_sq
from .core import Chain, ProductAnsatz, sector_ansatz
from .ge import default_workers, ge

__all__ = ["SampleMode", "SampleRecord", "Summary", "haar_vector", "sample", "summarize"]


class SampleMode(str, Enum):
    UNCONSTRAINED = "unconstrained"
    PERM_INVARIANT = "perm-invariant"
    BOUNDARY_RANDOM = "boundary-random"


@dataclass(frozen=True)
class SampleRecord:
    """One sampled ``-log2 |<Phi|VBS>|**2 / L``; ``math.inf`` marks a zero overlap."""

    index: int
    value: float
    seed: int
    mode: SampleMode
    chain: Chain
    vectors: np.ndarray

    @property
    def overlap_zero(self) -> bool:
        return math.isinf(self.value)


def haar_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Uniformly random unit vector in ``C**dim``: normalised complex Gaussian."""
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def _vectors(chain: Chain, mode: SampleMode, rng: np.random.Generator, fixed: np.ndarray | None):
    D = chain.phys_dim
    if mode is SampleMode.UNCONSTRAINED:
        return np.array([haar_vector(rng, D) for _ in range(chain.L)])
    if mode is SampleMode.PERM_INVARIANT:
        return np.repeat(haar_vector(rng, D)[None, :], chain.L, axis=0)
    vecs = np.repeat(fixed[None, :].astype(complex), chain.L, axis=0)
    vecs[0] = haar_vector(rng, D)
    return vecs


def _value(lam: NormResult, L: int) -> float:
    return math.inf if lam.exact_zero else -lam.log2value / L


def sample(
    chain: Chain,
    mode: SampleMode | str,
    n: int,
    seed: int,
    sector: str | None = None,
    obc_mode: str = "exact",
    workers: int | None = None,
) -> list[SampleRecord]:
    """Draw ``n`` product states and evaluate each by exact contraction.

    ``sector`` selects the fixed bulk state of ``boundary-random`` sampling;
    by default the sector with the smaller ``eps`` for this chain.
    """
    mode = SampleMode(mode)
    if n < 1:
        raise ValueError("n must be >= 1")
    fixed = None
    if mode is SampleMode.BOUNDARY_RANDOM:
        if sector is None:
            sector = ge(chain, obc_mode).best_sector
        fixed = sector_ansatz(chain.s, sector).vectors[0]

    def one(i: int) -> SampleRecord:
        rng = np.random.default_rng([seed, i])
        vecs = _vectors(chain, mode, rng, fixed)
        lam = log2_lambda_sq(chain, ProductAnsatz(chain.s, vecs), mode=obc_mode)
        return SampleRecord(i, _value(lam, chain.L), seed, mode, chain, vecs)

    workers = default_workers() if workers is None else workers
    if workers <= 1:
        return [one(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        records = list(pool.map(one, range(n)))
    return sorted(records, key=lambda r: r.index)


@dataclass(frozen=True)
class Summary:
    minimum: float
    mean: float
    fraction_within: float | None
    n_finite: int
    n_zero_overlap: int


def summarize(records, bound: float | None = None, delta: float = 0.05) -> Summary:
    """Min and mean over finite values, and the share within ``delta`` above ``bound``."""
    records = list(records)
    if not records:
        raise ValueError("no records to summarise")
    finite = np.array([r.value for r in records if not r.overlap_zero])
    n_zero = len(records) - len(finite)
    if len(finite) == 0:
        return Summary(math.inf, math.inf, 0.0 if bound is not None else None, 0, n_zero)
    within = None
    if bound is not None:
        within = float(np.mean(finite <= bound + delta))
    return Summary(float(finite.min()), float(finite.mean()), within, len(finite), n_zero)
