"""Benchmark problem definitions, grids, and reference solutions.

Scalar advection problems live on vertex grids x_j = lo + j*dx covering one
period; the exact solution is the initial profile shifted by t.  Euler
problems use cell-center grids so no sample lands on an initial
discontinuity, and their references are fine-grid runs of the classical
fifth-order scheme cached on disk keyed by a content hash.  Reference grids
are odd multiples of the default grid so coarse centers coincide with
reference centers exactly.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import euler as eu
from .reconstruct import WeightingStrategy
from .timeint import StepPolicy, compute_dt, integrate, tvd_rk3_step

__all__ = [
    "ProblemSpec", "PROBLEMS", "grid", "initialize", "shifted_exact",
    "ReferenceSolution", "reference", "cache_dir",
]

CACHE_ENV = "PRMWENO_REF_CACHE"


# ---------------------------------------------------------------------------
# initial profiles
# ---------------------------------------------------------------------------

def swa1_profile(x, a=1.0):
    return np.sin(np.pi * x - np.sin(np.pi * x) / (a * np.pi))


def swa2_profile(x, a=0.32):
    return np.sin(np.pi * x - np.sin(np.pi * x) / (a * np.pi)) ** 3


_CW_A = 0.5
_CW_Z = -0.7
_CW_DELTA = 0.005
_CW_ALPHA = 10.0
_CW_BETA = np.log(2.0) / (36.0 * _CW_DELTA ** 2)


def combination_profile(x):
    """Gaussian pack, square, triangle, and half-ellipse on [-1, 1]."""
    x = np.asarray(x, dtype=float)

    def G(xx, z):
        return np.exp(-_CW_BETA * (xx - z) ** 2)

    def F(xx, a):
        return np.sqrt(np.maximum(1.0 - _CW_ALPHA ** 2 * (xx - a) ** 2, 0.0))

    u = np.zeros_like(x)
    m = (x >= -0.8) & (x <= -0.6)
    u[m] = (G(x[m], _CW_Z - _CW_DELTA) + G(x[m], _CW_Z + _CW_DELTA)
            + 4.0 * G(x[m], _CW_Z)) / 6.0
    m = (x >= -0.4) & (x <= -0.2)
    u[m] = 1.0
    m = (x >= 0.0) & (x <= 0.2)
    u[m] = 1.0 - np.abs(10.0 * (x[m] - 0.1))
    m = (x >= 0.4) & (x <= 0.6)
    u[m] = (F(x[m], _CW_A - _CW_DELTA) + F(x[m], _CW_A + _CW_DELTA)
            + 4.0 * F(x[m], _CW_A)) / 6.0
    return u


def _riemann2(x, left, right, x0):
    rho = np.where(x < x0, left[0], right[0])
    u = np.where(x < x0, left[1], right[1])
    p = np.where(x < x0, left[2], right[2])
    return rho, u, p


def strong_shock_prim(x, pr=1e6):
    return _riemann2(x, (1.0, 0.0, 0.1 * pr), (1.0, 0.0, 0.1), 0.0)


def blast_prim(x):
    rho = np.ones_like(x)
    u = np.zeros_like(x)
    p = np.where(x < 0.1, 1000.0, np.where(x <= 0.9, 0.01, 100.0))
    return rho, u, p


def shu_osher_prim(x):
    rho = np.where(x < -4.0, 3.857143, 1.0 + 0.2 * np.sin(5.0 * x))
    u = np.where(x < -4.0, 2.629369, 0.0)
    p = np.where(x < -4.0, 10.3333, 1.0)
    return rho, u, p


def titarev_toro_prim(x):
    rho = np.where(x < -4.5, 1.515695, 1.0 + 0.1 * np.sin(20.0 * np.pi * x))
    u = np.where(x < -4.5, 0.523346, 0.0)
    p = np.where(x < -4.5, 1.805, 1.0)
    return rho, u, p


# ---------------------------------------------------------------------------
# problem registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProblemSpec:
    id: str
    domain: tuple[float, float]
    t_final: float
    default_N: int
    bc: str
    euler: bool
    profile: Callable | None = None          # scalar initial profile
    prim: Callable | None = None             # Euler primitive initial data
    default_policy: StepPolicy = StepPolicy("cfl", 0.5)
    ref_N: int | None = None                 # fine-grid reference size
    params: dict | None = None

    @property
    def length(self) -> float:
        return self.domain[1] - self.domain[0]


PROBLEMS = {
    "swa1": ProblemSpec("swa1", (-1.0, 1.0), 2.0, 80, "periodic", False,
                        profile=swa1_profile,
                        default_policy=StepPolicy("accuracy", 0.9),
                        params={"a": 1.0}),
    "swa2": ProblemSpec("swa2", (-1.0, 1.0), 2.0, 80, "periodic", False,
                        profile=swa2_profile,
                        default_policy=StepPolicy("accuracy", 0.9),
                        params={"a": 0.32}),
    "combo": ProblemSpec("combo", (-1.0, 1.0), 200.0, 400, "periodic", False,
                         profile=combination_profile,
                         default_policy=StepPolicy("cfl", 0.1)),
    "strong_shock": ProblemSpec("strong_shock", (-5.0, 5.0), 0.01, 201,
                                "zero_gradient", True, prim=strong_shock_prim,
                                params={"pr": 1e6}),
    "blast": ProblemSpec("blast", (0.0, 1.0), 0.038, 200,
                         "reflective_wall", True, prim=blast_prim,
                         ref_N=200 * 51),
    "shu_osher": ProblemSpec("shu_osher", (-5.0, 5.0), 1.8, 200,
                             "zero_gradient", True, prim=shu_osher_prim,
                             ref_N=200 * 11),
    "titarev_toro": ProblemSpec("titarev_toro", (-5.0, 5.0), 5.0, 1000,
                                "zero_gradient", True, prim=titarev_toro_prim,
                                ref_N=1000 * 11),
}


def grid(spec: ProblemSpec, N: int):
    """(x, dx): vertex layout for periodic problems, cell centers otherwise."""
    lo, hi = spec.domain
    dx = (hi - lo) / N
    if spec.bc == "periodic":
        return lo + dx * np.arange(N), dx
    return lo + dx * (np.arange(N) + 0.5), dx


def initialize(spec: ProblemSpec, N: int, gas: eu.GasModel = eu.GasModel(),
               params: dict | None = None):
    """(state, x, dx): point samples of the initial condition.

    Scalar problems return a length-N field; Euler problems an (N, 3)
    conserved-state array.
    """
    if N < 8:
        raise ValueError("grid too coarse for the widest stencil")
    x, dx = grid(spec, N)
    p = dict(spec.params or {})
    p.update(params or {})
    if spec.euler:
        rho, u, pr = spec.prim(x, **p) if p else spec.prim(x)
        return eu.prim_to_cons(rho, u, pr, gas), x, dx
    u0 = spec.profile(x, **p) if p else spec.profile(x)
    return u0, x, dx


def shifted_exact(spec: ProblemSpec, x, t: float, params: dict | None = None):
    """Exact scalar-advection solution: the initial profile shifted by t,
    wrapped into the periodic domain.

    Whole-period shifts reuse the sample points directly; the wrap would
    otherwise perturb points sitting exactly on profile discontinuities by
    one ulp and flip their branch.
    """
    lo = spec.domain[0]
    s = np.mod(t, spec.length)
    if min(s, spec.length - s) < 1e-9 * max(1.0, spec.length):
        xs = np.asarray(x, dtype=float)
    else:
        xs = lo + np.mod(x - t - lo, spec.length)
    p = dict(spec.params or {})
    p.update(params or {})
    return spec.profile(xs, **p) if p else spec.profile(xs)


# ---------------------------------------------------------------------------
# fine-grid references
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReferenceSolution:
    kind: str                   # "analytic_shift" | "fine_grid"
    x: np.ndarray
    data: np.ndarray            # field samples (density etc. for Euler)
    N: int
    meta: dict


def cache_dir() -> Path:
    root = os.environ.get(CACHE_ENV)
    if root:
        return Path(root)
    return Path.home() / ".cache" / "prmweno" / "refs"


def _ref_key(spec: ProblemSpec, N_ref: int, gas: eu.GasModel, t_final: float) -> str:
    payload = json.dumps({
        "id": spec.id, "domain": spec.domain, "t": t_final, "N": N_ref,
        "gamma": gas.gamma, "scheme": "weno5-js", "cfl": 0.5,
        "params": spec.params,
    }, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def reference(spec: ProblemSpec, N_ref: int | None = None,
              gas: eu.GasModel = eu.GasModel(),
              t_final: float | None = None) -> ReferenceSolution:
    """Reference field for error norms.

    Scalar problems are exact by shifting; Euler problems run the classical
    fifth-order scheme on the fine grid (cached on disk).  A failed
    reference run propagates: without it the experiment is meaningless.
    """
    t_end = spec.t_final if t_final is None else t_final
    if not spec.euler:
        x, _ = grid(spec, N_ref or spec.default_N)
        return ReferenceSolution("analytic_shift", x,
                                 shifted_exact(spec, x, t_end),
                                 N_ref or spec.default_N,
                                 {"t": t_end})
    N_ref = N_ref or spec.ref_N
    if N_ref is None:
        raise ValueError(f"problem {spec.id} has no reference grid size")
    key = _ref_key(spec, N_ref, gas, t_end)
    path = cache_dir() / f"{spec.id}-{key}.npz"
    if path.exists():
        blob = np.load(path)
        return ReferenceSolution("fine_grid", blob["x"], blob["data"],
                                 int(blob["N"]), json.loads(str(blob["meta"])))
    U, x, dx = initialize(spec, N_ref, gas)
    strat = WeightingStrategy(r=3, base="js")
    policy = StepPolicy("cfl", 0.5)

    def rhs(u):
        return eu.euler_rhs(u, strat, gas, dx, bc=spec.bc)

    def dt_fn(u, t):
        return compute_dt(policy, dx, r=3, max_speed=eu.max_wave_speed(u, gas))

    U, _ = integrate(U, rhs, t_end, dt_fn, stepper=tvd_rk3_step)
    meta = {"scheme": "weno5-js", "N": N_ref, "t": t_end, "gamma": gas.gamma,
            "cfl": 0.5, "problem": spec.id}
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp.npz")
    np.savez(tmp, x=x, data=U, N=N_ref, meta=json.dumps(meta))
    os.replace(tmp, path)
    return ReferenceSolution("fine_grid", x, U, N_ref, meta)


def align_to_grid(ref: ReferenceSolution, N: int) -> np.ndarray:
    """Reference samples at the N cell centers.

    Exact index alignment when the reference grid is an odd multiple of N;
    otherwise nearest-point sampling (offset at most half a reference cell).
    """
    q, rem = divmod(ref.N, N)
    if rem == 0 and q % 2 == 1:
        idx = q * np.arange(N) + (q - 1) // 2
        return ref.data[idx]
    # nearest reference point per coarse center
    lo = ref.x[0] - 0.5 * (ref.x[1] - ref.x[0])
    hi = ref.x[-1] + 0.5 * (ref.x[1] - ref.x[0])
    dxc = (hi - lo) / N
    centers = lo + dxc * (np.arange(N) + 0.5)
    idx = np.clip(np.round((centers - ref.x[0]) / (ref.x[1] - ref.x[0])).astype(int),
                  0, ref.N - 1)
    return ref.data[idx]
