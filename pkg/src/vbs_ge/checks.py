"""Executable property suite: the exit criteria of the library plus module invariants.

Each check returns a :class:`CheckResult`; nothing here raises on a failed
property, so a full run always reports every line.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import closed_forms
from .contraction import (
    log2_overlap_sq,
    norm_obc,
    norm_pbc,
    overlap_obc,
    overlap_pbc,
    scaled_product,
)
from .core import Chain, contracted_row, local_tensor, sector_ansatz, sector_levels, exact_coefficient, coefficient_squared
from .dense import dense_lambda_sq, dense_optimize, dense_overlap, dense_state, single_site_rdm
from .ge import asymptotic_norm_error, extrapolate, extrapolated_eps, ge, global_ge
from .sampler import SampleMode, sample, summarize
from .scaling import FitParams, eval_f, fit, published_comparison

__all__ = ["CheckResult", "ACCEPTANCE", "INVARIANTS", "run_all"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    limit: float | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name} ({self.seconds:.2f}s) {self.detail}"


def _timed(name: str, limit: float | None = None):
    def wrap(fn):
        def run() -> CheckResult:
            t0 = time.perf_counter()
            ok, detail = fn()
            dt = time.perf_counter() - t0
            if limit is not None and dt >= limit:
                ok = False
                detail += f"; runtime {dt:.2f}s over the {limit:g}s limit"
            return CheckResult(name, bool(ok), detail, dt, limit)

        run.__name__ = fn.__name__
        run.check_name = name
        return run

    return wrap


# ---------------------------------------------------------------- acceptance


@_timed("1 s=1 periodic closed form and log2(3) limit", 1.0)
def criterion_1():
    worst = max(abs(ge(Chain(1, L)).eps_even - closed_forms.s1_pbc_eps(L)) for L in (10, 50, 200))
    ex = extrapolate([(L, ge(Chain(1, L)).eps_even) for L in range(20, 201, 20)])
    lim_err = abs(ex.eps_infinity - math.log2(3))
    return worst <= 1e-10 and lim_err <= 1e-4, f"max |eps - closed form| = {worst:.2e}; |eps_inf - log2 3| = {lim_err:.2e}"


@_timed("2 s=1 open-chain asymptotic overlap 3**-L", 1.0)
def criterion_2():
    worst = 0.0
    for L in range(2, 401):
        for sector in ("even", "odd"):
            lam = overlap_obc(Chain(1, L, "obc-avg"), sector, "asymptotic")
            worst = max(worst, abs(lam.log2value - closed_forms.s1_obc_asymptotic(L)))
    return worst <= 1e-10, f"max log2 deviation over L<=400 = {worst:.2e}"


@_timed("3 s=2 open-chain odd sector 3**L / c_L", 1.0)
def criterion_3():
    worst = max(
        abs(overlap_obc(Chain(2, L, "obc-avg"), "odd", "asymptotic").log2value - closed_forms.s2_odd_obc_published(L))
        for L in range(2, 101)
    )
    actual = max(
        abs(overlap_obc(Chain(2, L, "obc-avg"), "odd", "asymptotic").log2value - closed_forms.s2_odd_obc_sum_squares(L))
        for L in range(2, 101)
    )
    report = closed_forms.s2_even_report()
    return worst <= 1e-10, (
        f"max log2 deviation from 3^L/c_L = {worst:.6g} (2*12^L/c_L deviates by {actual:.2e}); "
        f"even-sector readings matching: {report['matching'] or 'none'}"
    )


@_timed("4 parity theorems: vanishing traces at odd L", 1.0)
def criterion_4():
    misses = []
    for s in range(1, 8):
        for L in range(3, 22, 2):
            if s % 2 == 1 and not overlap_pbc(Chain(s, L), "even").exact_zero:
                misses.append(("even", s, L))
            if not overlap_pbc(Chain(s, L), "odd").exact_zero:
                misses.append(("odd", s, L))
    return not misses, f"{len(misses)} non-vanishing cases {misses[:5]}"


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


@_timed("5 dense oracle equals transfer matrices", 30.0)
def criterion_5():
    worst = 0.0
    zero_mismatch = []
    worst_rdm = 0.0
    for s in (1, 2):
        for L in range(2, 7):
            pbc, edge, avg = Chain(s, L), Chain(s, L, "obc", (1, 1)), Chain(s, L, "obc-avg")
            for chain, norm in ((pbc, norm_pbc(pbc)), (edge, norm_obc(edge))):
                state = dense_state(chain)
                worst = max(worst, _rel(norm.value, state.norm_sq))
                for sector in ("even", "odd"):
                    a = sector_ansatz(s, sector)
                    tm = log2_overlap_sq(chain, a)
                    dn = abs(dense_overlap(state, a.vectors)) ** 2
                    if tm.exact_zero or dn <= 1e-20 * state.norm_sq:
                        if not (tm.exact_zero and dn <= 1e-20 * state.norm_sq):
                            zero_mismatch.append((s, L, chain.label(), sector))
                    else:
                        worst = max(worst, _rel(tm.value, dn))
                if chain is pbc:
                    eye = np.eye(2 * s + 1) / (2 * s + 1)
                    for site in range(L):
                        worst_rdm = max(worst_rdm, float(np.max(np.abs(single_site_rdm(state, site) - eye))))
            for sector in ("even", "odd"):
                a = sector_ansatz(s, sector)
                worst = max(worst, _rel(overlap_obc(avg, mode="exact", ansatz=a).value, dense_lambda_sq(avg, a)))
    ok = worst <= 1e-10 and not zero_mismatch and worst_rdm <= 1e-10
    return ok, f"max relative deviation {worst:.2e}; zero mismatches {zero_mismatch}; max |rdm - I/(2s+1)| {worst_rdm:.2e}"


@_timed("6 unconstrained optimum at s=1, L=4 is 1/21 in the even sector", 10.0)
def criterion_6():
    best, state = dense_optimize(Chain(1, 4), restarts=20, seed=0)
    odd_idx = [m + 1 for m in sector_levels(1, "odd")]
    odd_weight = float(np.max(np.sum(np.abs(state.vectors[:, odd_idx]) ** 2, axis=1)))
    ok = abs(best - 1 / 21) <= 1e-8 and odd_weight < 1e-6
    return ok, f"optimum {best:.12f} (1/21 = {1 / 21:.12f}, 4/21 = {4 / 21:.12f}); max odd-level weight per site {odd_weight:.3g}"


MC_CASES = ((1, 10), (2, 10), (3, 8))


@_timed("7 Monte Carlo samples never beat the analytic eps", 60.0)
def criterion_7(seed: int = 2024, n: int = 1000):
    violations = []
    for s, L in MC_CASES:
        for bc in ("pbc", "obc-avg"):
            chain = Chain(s, L, bc)
            bound = ge(chain).eps
            for mode in SampleMode:
                summ = summarize(sample(chain, mode, n, seed), bound)
                if summ.minimum < bound - 1e-9:
                    violations.append(f"s={s} L={L} {bc} {mode.value}: min {summ.minimum:.6f} < {bound:.6f}")
    return not violations, f"{len(violations)} violating cells" + (": " + "; ".join(violations) if violations else "")


@_timed("8 saturation, boundary independence, even below odd at L=400", 10.0)
def criterion_8():
    notes = []
    ok = True
    for s in range(1, 6):
        e400 = ge(Chain(s, 400))
        step = abs(e400.eps_even - ge(Chain(s, 398)).eps_even)
        bdiff = abs(e400.eps_even - ge(Chain(s, 400, "obc-avg")).eps_even)
        ok &= step < 5e-3 and bdiff < 1e-2
        if s >= 2:
            ok &= e400.eps_even < e400.eps_odd
        notes.append(f"s={s}: step {step:.1e}, pbc-obc {bdiff:.1e}, even<odd {e400.eps_even < e400.eps_odd}")
    return ok, "; ".join(notes)


def fit_datasets(lengths=tuple(range(100, 401, 20))) -> dict[str, list[tuple[int, float]]]:
    return {
        "even": [(s, extrapolated_eps(s, lengths).eps_infinity) for s in (2, 4, 6, 8)],
        "odd": [(s, extrapolated_eps(s, lengths).eps_infinity) for s in (1, 3, 5, 7)],
    }


@_timed("9 spin-scaling fit per parity", 5.0)
def criterion_9():
    data = fit_datasets()
    notes = []
    ok = True
    for parity, pts in data.items():
        rep = fit(pts, log_base=2.0)
        ok &= rep.converged and rep.rms_residual <= 0.02
        notes.append(f"{parity}: rms {rep.rms_residual:.2e} converged={rep.converged}")
        for row in published_comparison(pts):
            notes.append(f"{parity} published row, base {row['log_base']:.4g}: rms {row['published_rms']:.3f}")
    true = FitParams(1.2, 0.5, 1.0, 0.9)
    synth = [(s, eval_f(true, s)) for s in (2, 4, 6, 8, 10)]
    rt = fit(synth, init=FitParams(*(true.vector() * 1.1)))
    ok &= rt.rms_residual < 1e-8
    notes.append(f"synthetic round trip rms {rt.rms_residual:.1e}")
    return ok, "; ".join(notes)


@_timed("10 c_L asymptote error shrinks with L", 1.0)
def criterion_10():
    ok = True
    notes = []
    for s in (1, 2, 3):
        errs = [abs(asymptotic_norm_error(Chain(s, L, "obc-avg"))) for L in (10, 20, 40, 80)]
        ok &= all(b <= a for a, b in zip(errs, errs[1:]))
        notes.append(f"s={s}: {errs}")
    return ok, "|error| at L=10,20,40,80 (non-increasing required): " + "; ".join(notes)


ACCEPTANCE = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
]


# ---------------------------------------------------------------- invariants


@_timed("coefficients agree with exact integers to 1 ulp (s<=8)")
def invariant_coefficients():
    worst = 0.0
    for s in range(1, 9):
        for p in range(1, s + 2):
            for q in range(1, s + 2):
                exact = Fraction(coefficient_squared(s, p, q))
                got = abs(exact_coefficient(s, p, q))
                # |got^2 - exact| / exact ~ 2 * relative error of got
                rel = abs(Fraction(got) ** 2 - exact) / exact / 2
                worst = max(worst, float(rel) / np.finfo(float).eps)
    return worst <= 1.0, f"max error {worst:.2f} ulp"


@_timed("sector rows: even block-diagonal, odd block-antidiagonal, traces vanish")
def invariant_row_structure():
    bad = []
    for s in range(1, 9):
        g = local_tensor(s)
        even = contracted_row(sector_ansatz(s, "even"), g)
        odd = contracted_row(sector_ansatz(s, "odd"), g)
        idx = np.arange(s + 1)
        same = (idx[:, None] - idx[None, :]) % 2 == 0
        if np.any(even[~same] != 0) or np.any(odd[same] != 0):
            bad.append(s)
        # diagonal sums cancel only up to rounding
        tiny = 1e-12 * float(np.max(np.abs(g.coeffs)))
        if abs(np.trace(odd)) > tiny or (s % 2 == 1 and abs(np.trace(even)) > tiny):
            bad.append(s)
        if s % 2 == 1:
            a, b = even[0::2, 0::2], even[1::2, 1::2][::-1, ::-1]
            if not np.array_equal(a, -b):
                bad.append(s)
    return not bad, f"violations at s={sorted(set(bad))}"


@_timed("s=1 periodic norm equals 3^L + 3(-1)^L for L<=400")
def invariant_norm_pbc():
    worst = 0.0
    for L in range(2, 401):
        exact = 3**L + 3 * (-1) ** L
        worst = max(worst, abs(norm_pbc(Chain(1, L)).log2value - math.log2(exact)) / math.log2(exact))
    return worst <= 1e-12, f"max relative log2 deviation {worst:.2e}"


@_timed("scaled products equal exact rational products (N<=20)")
def invariant_scaled_product():
    rng = np.random.default_rng(7)
    worst = 0.0
    for n in range(1, 21):
        mats = [rng.uniform(0.1, 1.0, (3, 3)) for _ in range(n)]
        exact = [[Fraction(x) for x in row] for row in mats[0]]
        for m in mats[1:]:
            fm = [[Fraction(x) for x in row] for row in m]
            exact = [[sum(exact[i][k] * fm[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
        got = scaled_product(mats)
        for i in range(3):
            for j in range(3):
                val = Fraction(float(got.body[i, j])) * Fraction(2) ** int(got.log2scale)
                worst = max(worst, float(abs(val - exact[i][j]) / exact[i][j]))
    return worst <= 1e-12, f"max relative error {worst:.2e}"


@_timed("oracle optimum within [max sector overlap, 1] at even L")
def invariant_oracle_bounds():
    notes = []
    ok = True
    for s, L in ((1, 2), (1, 4), (2, 4)):
        best, _ = dense_optimize(Chain(s, L), restarts=5, seed=1)
        r = ge(Chain(s, L))
        floor = max(2.0 ** (-L * r.eps_even), 2.0 ** (-L * r.eps_odd))
        ok &= floor - 1e-9 <= best <= 1 + 1e-12
        notes.append(f"s={s} L={L}: {best:.6f} >= {floor:.6f}")
    return ok, "; ".join(notes)


@_timed("global GE grows with L")
def invariant_global_ge():
    vals = [global_ge(Chain(1, L)).value for L in (10, 20, 40, 80)]
    return all(b > a for a, b in zip(vals, vals[1:])), f"E_G at L=10,20,40,80: {[round(v, 4) for v in vals]}"


INVARIANTS = [
    invariant_coefficients,
    invariant_row_structure,
    invariant_norm_pbc,
    invariant_scaled_product,
    invariant_oracle_bounds,
    invariant_global_ge,
]


def run_all() -> list[CheckResult]:
    return [check() for check in ACCEPTANCE + INVARIANTS]
