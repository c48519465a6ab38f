"""Fit of ``f(s) = alpha * log(s + beta/s + gamma) + delta`` to per-site entanglement.

Even and odd spins follow separate curves, so every fit is restricted to one
parity of ``s``.
"""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass

import numpy as np

__all__ = [
    "DomainError",
    "FitParams",
    "FitReport",
    "PUBLISHED_PARAMS",
    "eval_f",
    "fit",
    "rms",
    "published_comparison",
]


class DomainError(ValueError):
    """The logarithm's argument ``s + beta/s + gamma`` is not positive."""


@dataclass(frozen=True)
class FitParams:
    alpha: float
    beta: float
    gamma: float
    delta: float
    log_base: float = 2.0

    def vector(self) -> np.ndarray:
        return np.array(astuple(self)[:4], dtype=float)

    def with_vector(self, x) -> "FitParams":
        return FitParams(*(float(v) for v in x), log_base=self.log_base)

    def with_base(self, base: float) -> "FitParams":
        return FitParams(self.alpha, self.beta, self.gamma, self.delta, base)


# Published parameter rows: even spins, odd spins.
PUBLISHED_PARAMS = {
    "even": FitParams(1.41, -0.39, 2.82, 0.83),
    "odd": FitParams(1.15, 1.67, -1.83, 1.33),
}


@dataclass(frozen=True)
class FitReport:
    params: FitParams
    rms_residual: float
    iterations: int
    converged: bool
    gradient_norm: float


def _argument(params: FitParams, s):
    return s + params.beta / s + params.gamma


def eval_f(params: FitParams, s):
    """``alpha * log_base(s + beta/s + gamma) + delta``; scalar or array ``s``."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr <= 0):
        raise DomainError("s must be positive")
    arg = _argument(params, s_arr)
    if np.any(arg <= 0):
        raise DomainError(f"log argument not positive for {params}")
    out = params.alpha * np.log(arg) / math.log(params.log_base) + params.delta
    return float(out) if out.ndim == 0 else out


def rms(params: FitParams, points) -> float:
    s, eps = _split(points)
    return float(np.sqrt(np.mean((eval_f(params, s) - eps) ** 2)))


def _split(points):
    pts = sorted((float(s), float(e)) for s, e in points)
    return np.array([p[0] for p in pts]), np.array([p[1] for p in pts])


def _residuals(x, base, s, eps):
    params = FitParams(*x, log_base=base)
    arg = _argument(params, s)
    if np.any(arg <= 0) or not np.all(np.isfinite(x)):
        return None
    return params.alpha * np.log(arg) / math.log(base) + params.delta - eps


def _jacobian(x, base, s, eps):
    cols = []
    for j in range(len(x)):
        h = 1e-6 * max(1.0, abs(x[j]))
        up, down = x.copy(), x.copy()
        up[j] += h
        down[j] -= h
        r_up = _residuals(up, base, s, eps)
        r_down = _residuals(down, base, s, eps)
        if r_up is None or r_down is None:
            # one-sided at the domain edge
            r0 = _residuals(x, base, s, eps)
            if r_up is not None:
                cols.append((r_up - r0) / h)
            elif r_down is not None:
                cols.append((r0 - r_down) / h)
            else:
                cols.append(np.zeros_like(s))
            continue
        cols.append((r_up - r_down) / (2 * h))
    return np.column_stack(cols)


def fit(
    points,
    init: FitParams | None = None,
    max_iter: int = 500,
    tol: float = 1e-12,
    parity: str | None = None,
    log_base: float | None = None,
) -> FitReport:
    """Damped Gauss-Newton (Levenberg-Marquardt) fit of ``f`` to ``(s, eps)`` points.

    Parameters
    ----------
    points : iterable of (s, eps)
        At least four points, all ``s`` of the same parity.
    init : FitParams, optional
        Starting parameters; defaults to the published row for the parity of
        the data, in ``log_base`` (default 2).
    max_iter : int
        Cap on Jacobian evaluations.  Hitting it returns the best parameters
        so far with ``converged=False``.
    tol : float
        Stop once the gradient norm or the relative change of the squared
        residual falls below ``tol``.
    """
    s, eps = _split(points)
    if len(s) < 4:
        raise ValueError("need at least 4 points for 4 parameters")
    if np.any(s != np.round(s)) or len(set((s.astype(int) % 2).tolist())) != 1:
        raise ValueError("all spins must be integers of one parity")
    data_parity = "even" if int(s[0]) % 2 == 0 else "odd"
    if parity is not None and parity != data_parity:
        raise ValueError(f"data are {data_parity} spins, not {parity}")
    if init is None:
        init = PUBLISHED_PARAMS[data_parity].with_base(log_base or 2.0)
    elif log_base is not None:
        init = init.with_base(log_base)
    base = init.log_base

    x = init.vector()
    r = _residuals(x, base, s, eps)
    if r is None:
        raise DomainError(f"initial parameters {init} leave the log domain")
    cost = float(r @ r)
    damping = 1e-3
    grad_norm = math.inf
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        jac = _jacobian(x, base, s, eps)
        grad = jac.T @ r
        grad_norm = float(np.linalg.norm(grad))
        if grad_norm < tol or cost == 0.0:
            converged = True
            break
        jtj = jac.T @ jac
        scale = np.diag(jtj).copy()
        scale[scale <= 0] = 1.0
        accepted = False
        while damping < 1e16:
            lhs = jtj + damping * np.diag(scale)
            try:
                step = np.linalg.solve(lhs, -grad)
            except np.linalg.LinAlgError:
                damping *= 10
                continue
            trial = x + step
            r_trial = _residuals(trial, base, s, eps)
            if r_trial is not None and float(r_trial @ r_trial) < cost:
                new_cost = float(r_trial @ r_trial)
                accepted = True
                break
            damping *= 10
        if not accepted:
            # no descent at any damping: stationary to working precision
            converged = True
            break
        change = (cost - new_cost) / cost
        x, r, cost = trial, r_trial, new_cost
        damping = max(damping / 10, 1e-12)
        if change < tol:
            converged = True
            break
    params = init.with_vector(x)
    return FitReport(params, math.sqrt(cost / len(s)), it, converged, grad_norm)


def published_comparison(points, bases=(2.0, math.e, 10.0)) -> list[dict]:
    """Published parameters and a refit from them, for each candidate log base."""
    s, _ = _split(points)
    parity = "even" if int(s[0]) % 2 == 0 else "odd"
    rows = []
    for base in bases:
        published = PUBLISHED_PARAMS[parity].with_base(base)
        try:
            published_rms = rms(published, points)
        except DomainError:
            published_rms = math.inf
        try:
            report = fit(points, init=published)
        except DomainError:
            report = None
        rows.append(
            {
                "parity": parity,
                "log_base": base,
                "published_rms": published_rms,
                "refit": report,
            }
        )
    return rows
