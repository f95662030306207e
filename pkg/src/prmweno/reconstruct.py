"""Interface-value reconstruction over whole grids.

A WeightingStrategy bundles the stencil order, the base weighting rule, an
optional per-sub-stencil mapping set, and the epsilon policy.  The batched
pipeline gathers sliding windows, evaluates candidates and indicators with
one matmul each, forms weights, and contracts to interface values; the
mirrored variant feeds reversed windows through the same formulas for
negative-wind reconstruction.

For long scalar-advection runs a numba kernel fuses the periodic
reconstruction into the time loop (classical or linear weights, optionally
remapped through the production piecewise-rational family); it is verified
against the numpy pipeline in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from . import zweights
from .mappings import MappingSpec, eval_mapping
from .tables import StencilTables, load_tables

__all__ = ["WeightingStrategy", "reconstruct_batch", "scalar_rhs", "indicators"]

_BASES = ("js", "linear", "z5", "p3", "f3", "nis5")


@dataclass(frozen=True)
class WeightingStrategy:
    """How nonlinear weights are produced for one scheme."""

    r: int
    base: str = "js"
    q: int = 1                      # z5 exponent
    mapping: tuple[MappingSpec, ...] | None = None
    eps: float | None = None
    upgrade3: bool = False          # r=2 with the wide-stencil indicators
    aim_grouped: bool = False       # couple the two wind groups' scales
    aim_c: float = 1e4
    nis_clamp: bool = True
    table_variant: str = "printed"
    label: str = ""

    def __post_init__(self):
        if self.base not in _BASES:
            raise ValueError(f"unknown weighting base {self.base!r}")
        if self.mapping is not None and self.base not in ("js",):
            raise ValueError("mappings combine with the classical base only")
        if self.upgrade3 and self.r != 2:
            raise ValueError("the indicator upgrade applies to r=2 only")
        if self.base in ("p3", "f3") and self.r != 2:
            raise ValueError(f"{self.base} is a three-point rule (r=2)")
        if self.base in ("z5", "nis5") and self.r != 3:
            raise ValueError(f"{self.base} is a five-point rule (r=3)")
        if self.mapping is not None and len(self.mapping) != self.r:
            raise ValueError("one mapping spec per sub-stencil required")

    @property
    def effective_eps(self) -> float:
        if self.eps is not None:
            return self.eps
        if self.base == "js" and self.mapping is None:
            return 1e-6
        return 1e-40

    @property
    def ghosts(self) -> int:
        return 3 if self.upgrade3 else self.r

    @property
    def tables(self) -> StencilTables:
        return load_tables(self.r, self.table_variant)

    @property
    def aim_adaptive(self) -> bool:
        return self.mapping is not None and self.mapping[0].family == "aim" \
            and self.mapping[0].s_mode == "adaptive"

    def name(self) -> str:
        if self.label:
            return self.label
        order = 2 * self.r - 1
        if self.base != "js":
            return f"weno{order}-{self.base}" + (f"q{self.q}" if self.base == "z5" else "")
        if self.mapping is None:
            tag = "js3u" if self.upgrade3 else "js"
            return f"weno{order}-{tag}"
        return f"weno{order}-{self.mapping[0].family}"


def _windows(fpad: np.ndarray, width: int, start: int, n: int, mirror: bool):
    view = sliding_window_view(fpad, width)
    if mirror:
        return view[start + 1: start + 1 + n][:, ::-1]
    return view[start: start + n]


def indicators(rows: np.ndarray, t: StencilTables) -> np.ndarray:
    bm = t.indicator_matrix()
    inner = np.einsum("kml,il->ikm", bm, rows)
    return (inner * inner) @ t.c


def _upgraded_indicators(fpad, n_if, g, mirror, t3: StencilTables):
    """Wide-stencil indicator pair for the r=2 scheme: the outermost
    five-point sub-indicators aligned with the two three-point candidates."""
    rows5 = _windows(fpad, 5, g - 3, n_if, False) if not mirror else None
    if mirror:
        view = sliding_window_view(fpad, 5)
        rows5 = view[g - 2: g - 2 + n_if][:, ::-1]
    is5 = indicators(rows5, t3)
    return np.stack([is5[:, 0], is5[:, 2]], axis=1)


def _base_weights(strat: WeightingStrategy, rows, IS, dx: float):
    t = strat.tables
    eps = strat.effective_eps
    if strat.base == "linear":
        return np.broadcast_to(t.d, IS.shape).copy()
    if strat.base == "js":
        alpha = t.d / (eps + IS) ** 2
        return alpha / alpha.sum(axis=-1, keepdims=True)
    if strat.base == "z5":
        return zweights.z5_weights(IS, t.d, strat.q, eps)
    if strat.base == "p3":
        return zweights.p3_weights(IS, rows, t.d, dx, eps)
    if strat.base == "f3":
        return zweights.f3_weights(IS, rows, t.d, eps)
    if strat.base == "nis5":
        return zweights.nis5_weights(rows, t, eps, strat.nis_clamp)
    raise AssertionError(strat.base)


def _apply_mapping(strat: WeightingStrategy, omega, IS, dx: float, lam=None):
    specs = strat.mapping
    if specs[0].family == "aim" and specs[0].s_mode == "adaptive":
        if lam is None:
            eps_m = dx ** 7
            lam = IS.min(axis=-1) / (IS.max(axis=-1) + eps_m)
        alpha = np.empty_like(omega)
        for k, spec in enumerate(specs):
            s = strat.aim_c / spec.dk * lam
            w = omega[:, k]
            tk = w - spec.dk
            den = tk ** spec.n + s * (w * (1.0 - w)) ** (spec.m + 1)
            alpha[:, k] = spec.dk + tk ** (spec.n + 1) / den
    else:
        alpha = np.empty_like(omega)
        for k, spec in enumerate(specs):
            alpha[:, k] = eval_mapping(spec, omega[:, k])
    return alpha / alpha.sum(axis=-1, keepdims=True)


def reconstruct_batch(strat: WeightingStrategy, fpad: np.ndarray, dx: float,
                      n_if: int, g: int, mirror: bool = False, lam=None):
    """Interface values f_hat at n_if consecutive interfaces.

    fpad carries g >= strat.ghosts ghost entries per side; interface i sits
    between cells i-1 and i of the unpadded field.  mirror=True reconstructs
    with reversed windows (negative wind).
    """
    t = strat.tables
    rows = _windows(fpad, t.width, g - strat.r, n_if, mirror)
    q = rows @ t.candidate_matrix().T
    if strat.upgrade3:
        IS = _upgraded_indicators(fpad, n_if, g, mirror, load_tables(3, strat.table_variant))
    else:
        IS = indicators(rows, t)
    omega = _base_weights(strat, rows, IS, dx)
    if strat.mapping is not None:
        omega = _apply_mapping(strat, omega, IS, dx, lam=lam)
    return np.sum(omega * q, axis=-1)


def wind_lambda(strat: WeightingStrategy, fpad: np.ndarray, dx: float,
                n_if: int, g: int, mirror: bool) -> np.ndarray:
    """min/max indicator ratio per interface, for the grouped adaptive scale."""
    t = strat.tables
    rows = _windows(fpad, t.width, g - strat.r, n_if, mirror)
    IS = indicators(rows, t)
    return IS.min(axis=-1) / (IS.max(axis=-1) + dx ** 7)


def scalar_rhs(u: np.ndarray, strat: WeightingStrategy, dx: float) -> np.ndarray:
    """Semi-discrete right side of u_t + u_x = 0 on a periodic grid."""
    g = strat.ghosts
    fpad = np.concatenate([u[-g:], u, u[:g]])
    fhat = reconstruct_batch(strat, fpad, dx, u.shape[0] + 1, g)
    return -(fhat[1:] - fhat[:-1]) / dx
