"""Brute-force oracle: the full VBS amplitude vector and direct product-state optimisation.

Only usable for small chains; every quantity here is computed without any
transfer matrix so it can cross-check :mod:`vbs_ge.contraction`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Chain, ProductAnsatz, boundary_tensor, local_tensor

__all__ = [
    "DENSE_CAP",
    "DenseCapExceeded",
    "DenseState",
    "dense_state",
    "dense_overlap",
    "dense_lambda_sq",
    "dense_optimize",
    "single_site_rdm",
]

DENSE_CAP = 10**7


class DenseCapExceeded(MemoryError):
    """The requested dense state has more amplitudes than the configured cap."""


@dataclass(frozen=True)
class DenseState:
    """Amplitudes of a VBS chain indexed by the level string ``(m_1, ..., m_L)``.

    Site 1 is the most significant index; level ``m`` sits at position ``m + s``.
    """

    chain: Chain
    amplitudes: np.ndarray

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape([self.chain.phys_dim] * self.chain.L)


def dense_state(chain: Chain, cap: int = DENSE_CAP) -> DenseState:
    """Expand the matrix product site by site into the full amplitude vector."""
    if chain.bc == "obc-avg":
        raise ValueError("the boundary average is not a single state; use bc='obc' with an edge")
    s, L = chain.s, chain.L
    size = (2 * s + 1) ** L
    if size > cap:
        raise DenseCapExceeded(f"(2s+1)**L = {size} exceeds the dense cap {cap}")
    d = s + 1
    bulk = local_tensor(s).slices()
    first = boundary_tensor(s).slices() if chain.bc == "obc" else bulk

    if chain.bc == "obc":
        starts = [chain.edge[0] - 1]
    else:
        starts = range(d)
    amps = np.zeros(size)
    for a in starts:
        # rows[config, k] = [G_{m_1} ... G_{m_i}]_{a, k}
        rows = first[:, a, :]
        for _ in range(L - 1):
            rows = np.einsum("ck,mkl->cml", rows, bulk).reshape(-1, d)
        if chain.bc == "obc":
            amps += rows[:, chain.edge[1] - 1]
        else:
            amps += rows[:, a]
    amps.setflags(write=False)
    return DenseState(chain, amps)


def dense_overlap(state: DenseState, vectors) -> complex:
    """``<Phi|VBS>`` with ``Phi`` the product of the given site vectors (or one, repeated)."""
    L, D = state.chain.L, state.chain.phys_dim
    vectors = np.atleast_2d(vectors)
    if vectors.shape[0] == 1:
        vectors = np.repeat(vectors, L, axis=0)
    out = state.amplitudes.astype(complex)
    for v in vectors:
        out = v.conj() @ out.reshape(D, -1)
    return complex(out.reshape(()))


def dense_lambda_sq(chain: Chain, ansatz: ProductAnsatz, mode: str = "exact", cap: int = DENSE_CAP) -> float:
    """``|<Phi|VBS>|**2 / <VBS|VBS>``; for ``obc-avg`` the plain average over edges.

    Only the exact boundary average has a dense counterpart; ``mode`` exists
    for signature parity with the transfer-matrix path.
    """
    if mode != "exact":
        raise ValueError("the dense oracle only implements the exact boundary average")
    if chain.bc != "obc-avg":
        state = dense_state(chain, cap)
        return abs(dense_overlap(state, ansatz.vectors)) ** 2 / state.norm_sq
    d = chain.s + 1
    total = 0.0
    for p in range(1, d + 1):
        for q in range(1, d + 1):
            state = dense_state(Chain(chain.s, chain.L, "obc", (p, q)), cap)
            total += abs(dense_overlap(state, ansatz.vectors)) ** 2 / state.norm_sq
    return total / d**2


def _environment(psi: np.ndarray, vectors: list[np.ndarray], site: int) -> np.ndarray:
    L = psi.ndim
    operands = [psi, list(range(L))]
    for j, v in enumerate(vectors):
        if j != site:
            operands += [v.conj(), [j]]
    return np.einsum(*operands, [site], optimize=True)


def dense_optimize(
    chain: Chain,
    restarts: int = 20,
    seed: int = 0,
    max_sweeps: int = 1000,
    tol: float = 1e-15,
    cap: int = DENSE_CAP,
) -> tuple[float, ProductAnsatz]:
    """Maximise ``|<Phi|VBS>|**2 / <VBS|VBS>`` over all product states.

    Alternating single-site updates: with every other site fixed the overlap
    is ``<phi_i|env_i>``, maximised by ``phi_i = env_i / |env_i|``.  Each
    restart starts from Haar-random site vectors drawn from the sub-stream
    ``(seed, restart)``, so adding restarts never lowers the result.

    Returns
    -------
    best : float
        The largest normalised overlap found.
    state : ProductAnsatz
        Per-site vectors achieving it.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    state = dense_state(chain, cap)
    psi = (state.amplitudes / np.sqrt(state.norm_sq)).reshape([chain.phys_dim] * chain.L).astype(complex)
    best, best_vectors = -1.0, None
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        raw = rng.standard_normal((chain.L, chain.phys_dim, 2))
        vectors = [v / np.linalg.norm(v) for v in raw[..., 0] + 1j * raw[..., 1]]
        value = 0.0
        for _ in range(max_sweeps):
            previous = value
            for i in range(chain.L):
                env = _environment(psi, vectors, i)
                norm = np.linalg.norm(env)
                if norm > 0:
                    vectors[i] = env / norm
                value = float(norm**2)
            if value - previous <= tol * max(value, 1e-300):
                break
        if value > best:
            best, best_vectors = value, np.array(vectors)
    return best, ProductAnsatz(chain.s, best_vectors)


def single_site_rdm(state: DenseState, site: int) -> np.ndarray:
    """Reduced density matrix of one site, normalised to unit trace."""
    L, D = state.chain.L, state.chain.phys_dim
    if not 0 <= site < L:
        raise IndexError(f"site {site} out of range for L = {L}")
    psi = state.amplitudes.reshape(D**site, D, D ** (L - site - 1))
    rho = np.einsum("aib,ajb->ij", psi, psi.conj())
    return rho / np.trace(rho)
