"""Experiment driver: runs (scheme x problem x grid) cases, measures error
norms, convergence orders, and oscillation, and emits machine-readable
tables.

Blow-ups are recorded outcomes, not process failures: a case that loses
positivity or produces non-finite fluxes ends early and carries the step
and cell where it happened.  Case results are deterministic for a given
configuration; the wall-clock column is excluded from determinism
comparisons.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import euler as eu
from . import fastpath
from . import problems as pb
from .reconstruct import WeightingStrategy, scalar_rhs
from .timeint import StepPolicy, compute_dt, integrate, rk4_step, tvd_rk3_step

__all__ = [
    "CaseResult", "ErrorReport", "run_case", "convergence_study",
    "oscillation_metric", "emit_results", "RESULT_COLUMNS",
]

RESULT_COLUMNS = ("problem", "scheme", "N", "L1", "Linf", "order_L1",
                  "order_Linf", "oscillation", "blow_up_step", "wall_ms")


@dataclass
class CaseResult:
    problem: str
    scheme: str
    N: int
    field: np.ndarray | None      # scalar field or density for Euler
    state: np.ndarray | None      # full conserved state (Euler)
    x: np.ndarray | None
    L1: float = np.nan
    Linf: float = np.nan
    order_L1: float = np.nan
    order_Linf: float = np.nan
    oscillation: float = np.nan
    blow_up_step: int | None = None
    blow_up_cell: int | None = None
    wall_ms: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    @property
    def blew_up(self) -> bool:
        return self.blow_up_step is not None


@dataclass
class ErrorReport:
    problem: str
    scheme: str
    grids: list
    L1: list
    Linf: list
    orders_L1: list
    orders_Linf: list
    cases: list

    def asymptotic_order(self, norm: str = "Linf") -> float:
        orders = self.orders_Linf if norm == "Linf" else self.orders_L1
        return orders[-1] if orders else np.nan


def error_norms(field, ref, dx: float):
    diff = np.abs(np.asarray(field) - np.asarray(ref))
    return dx * diff.sum(), diff.max()


def oscillation_metric(field, ref, window: int = 6, jump_factor: float = 4.0) -> float:
    """Overshoot beyond the reference range plus total-variation excess in
    windows around reference discontinuities.

    Monotone smearing scores zero: dissipation is not oscillation.
    """
    field = np.asarray(field, dtype=float)
    ref = np.asarray(ref, dtype=float)
    over = max(0.0, field.max() - ref.max(), ref.min() - field.min())
    jumps = np.abs(np.diff(ref))
    scale = jumps.mean() + 1e-300
    locs = np.where(jumps > jump_factor * scale)[0]
    # merge adjacent jump cells into one window per discontinuity cluster
    tv_excess = 0.0
    i = 0
    while i < len(locs):
        j0 = locs[i]
        j1 = j0
        while i + 1 < len(locs) and locs[i + 1] - j1 <= window:
            i += 1
            j1 = locs[i]
        lo = max(0, j0 - window)
        hi = min(len(ref) - 1, j1 + 1 + window)
        tv_f = np.abs(np.diff(field[lo:hi + 1])).sum()
        tv_r = np.abs(np.diff(ref[lo:hi + 1])).sum()
        tv_excess += max(0.0, tv_f - tv_r)
        i += 1
    return over + tv_excess


def _scheme_name(strat: WeightingStrategy) -> str:
    return strat.name()


def run_case(problem_id: str, strat: WeightingStrategy, N: int,
             policy: StepPolicy | None = None,
             gas: eu.GasModel | None = None,
             t_final: float | None = None,
             eps_sw: float = 1e-6,
             problem_params: dict | None = None,
             compare_reference: bool = True) -> CaseResult:
    """Integrate one configuration to its final time (or record a blow-up).

    Scalar cases compare against the shifted initial profile; Euler cases
    against the cached fine-grid reference (density), unless
    compare_reference is off.
    """
    spec = pb.PROBLEMS[problem_id]
    gas = gas or eu.GasModel()
    policy = policy or spec.default_policy
    t_end = spec.t_final if t_final is None else t_final
    started = time.perf_counter()
    result = CaseResult(problem=problem_id, scheme=_scheme_name(strat), N=N,
                        field=None, state=None, x=None)

    if not spec.euler:
        u0, x, dx = pb.initialize(spec, N, gas, problem_params)
        if fastpath.supports(strat):
            # every scalar policy here reduces to a fixed step
            dt = compute_dt(policy, dx, strat.r, 1.0)
            u = fastpath.integrate_periodic(u0, strat, dx, dt, t_end,
                                            rk4=policy.mode == "accuracy")
            steps = int(np.ceil(t_end / dt - 1e-12))
        else:
            stepper = rk4_step if policy.mode == "accuracy" else tvd_rk3_step

            def rhs(v):
                return scalar_rhs(v, strat, dx)

            def dt_fn(v, t):
                return compute_dt(policy, dx, strat.r, 1.0)

            u, steps = integrate(u0, rhs, t_end, dt_fn, stepper)
        result.field = u
        result.x = x
        result.diagnostics = {"steps": steps, "min": float(u.min()),
                              "max": float(u.max())}
        if compare_reference:
            ref = pb.shifted_exact(spec, x, t_end, problem_params)
            result.L1, result.Linf = error_norms(u, ref, dx)
            result.oscillation = oscillation_metric(u, ref)
    else:
        U, x, dx = pb.initialize(spec, N, gas, problem_params)
        mins = {"rho": np.inf, "p": np.inf}

        def rhs(v):
            return eu.euler_rhs(v, strat, gas, dx, bc=spec.bc, eps_sw=eps_sw)

        def dt_fn(v, t):
            return compute_dt(policy, dx, strat.r, eu.max_wave_speed(v, gas))

        def monitor(v, t, step):
            rho, _, p = eu.cons_to_prim(v, gas, check=False)
            mins["rho"] = min(mins["rho"], float(rho.min()))
            mins["p"] = min(mins["p"], float(p.min()))

        steps = 0
        try:
            U, steps = integrate(U, rhs, t_end, dt_fn, tvd_rk3_step, monitor)
            rho, _, p = eu.cons_to_prim(U, gas, check=False)
            result.state = U
            result.field = rho
            result.x = x
        except eu.BlowUpError as exc:
            result.blow_up_step = steps + 1
            result.blow_up_cell = exc.cell
        except FloatingPointError:
            result.blow_up_step = steps + 1
        result.diagnostics = {"steps": steps, "min_rho": mins["rho"],
                              "min_p": mins["p"]}
        if compare_reference and not result.blew_up and spec.ref_N:
            ref = pb.reference(spec, gas=gas, t_final=t_end)
            ref_rho = pb.align_to_grid(ref, N)[:, 0]
            result.L1, result.Linf = error_norms(result.field, ref_rho, dx)
            result.oscillation = oscillation_metric(result.field, ref_rho)
    result.wall_ms = 1e3 * (time.perf_counter() - started)
    return result


def convergence_study(problem_id: str, strat: WeightingStrategy, grids,
                      policy: StepPolicy | None = None,
                      t_final: float | None = None,
                      problem_params: dict | None = None) -> ErrorReport:
    """Error norms and pairwise orders over a grid sequence (smooth scalar
    problems).  A blow-up aborts with the partial report."""
    cases, l1s, linfs = [], [], []
    used = []
    for N in grids:
        case = run_case(problem_id, strat, N, policy=policy, t_final=t_final,
                        problem_params=problem_params)
        cases.append(case)
        if case.blew_up:
            break
        used.append(N)
        l1s.append(case.L1)
        linfs.append(case.Linf)
    orders_l1 = [np.log2(a / b) for a, b in zip(l1s, l1s[1:])]
    orders_linf = [np.log2(a / b) for a, b in zip(linfs, linfs[1:])]
    for i, case in enumerate(cases[1:]):
        if i < len(orders_l1):
            case.order_L1 = orders_l1[i]
            case.order_Linf = orders_linf[i]
    return ErrorReport(problem_id, _scheme_name(strat), used, l1s, linfs,
                       orders_l1, orders_linf, cases)


def run_cases_parallel(configs, workers: int = 2):
    """Run independent configurations in processes; results keep the input
    order regardless of completion order."""
    if workers <= 1 or len(configs) <= 1:
        return [run_case(**cfg) for cfg in configs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(run_case, **cfg) for cfg in configs]
        return [f.result() for f in futures]


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        if np.isnan(v):
            return ""
        return repr(float(v))
    return str(v)


def results_rows(results) -> list[dict]:
    rows = []
    for c in results:
        rows.append({
            "problem": c.problem, "scheme": c.scheme, "N": c.N,
            "L1": c.L1, "Linf": c.Linf,
            "order_L1": c.order_L1, "order_Linf": c.order_Linf,
            "oscillation": c.oscillation,
            "blow_up_step": c.blow_up_step,
            "wall_ms": round(c.wall_ms, 3),
        })
    return rows


def emit_results(results, fmt: str = "csv", path=None) -> str:
    """Serialize results in the fixed column order; returns the text and
    optionally writes it."""
    rows = results_rows(results)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in RESULT_COLUMNS])
        text = buf.getvalue()
    elif fmt == "json":
        clean = [{k: (None if isinstance(v, float) and np.isnan(v) else v)
                  for k, v in row.items()} for row in rows]
        text = json.dumps(clean, indent=1, sort_keys=False) + "\n"
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
