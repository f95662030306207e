"""Weight-mapping families for mapped WENO schemes.

Every mapping g maps [0, 1] onto itself with fixed points {0, dk, 1}, is
monotone for valid parameters, and is flat to prescribed order at dk so that
nonlinear weights near the linear weight are pushed onto it.  Families:

  gm    the classical single rational map (full domain)
  pm    piecewise polynomial, endpoint slope 0
  ppm   piecewise polynomial, endpoint slope 1, general (n, m)
  im    single rational with free amplification parameter A
  rm    single rational with prescribed orders at 0 and dk
  aim   single rational with scale s, fixed or solver-adaptive
  r     piecewise rational from the tabulated coefficient recipe
        (b-parameterized or with the denominator coefficient given directly)
  prm   piecewise rational with independent per-side control of flatness
        away from dk and of endpoint convergence

Piecewise families take the left branch for omega < dk and the right branch
for omega >= dk (both branches agree at dk).  Inputs are clamped to [0, 1]
before mapping; nonlinear weights are analytically inside the interval and
the clamp only guards last-bit drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

__all__ = [
    "MappingSpec",
    "MappingError",
    "eval_mapping",
    "left_from_right",
    "map_weights",
    "aim_scale",
    "production_prm_specs",
    "comparative_specs",
    "identity_spec",
    "gm_spec",
    "pm_spec",
    "ppm_spec",
    "im_spec",
    "rm_spec",
    "aim_spec",
    "r_spec",
    "prm_spec",
    "prm_general_spec",
    "branch_denominators",
    "check_singularity_free",
]

_FAMILIES = ("identity", "gm", "pm", "ppm", "im", "rm", "aim", "r", "prm")


class MappingError(ValueError):
    """Invalid mapping parameters (raised at construction, never at eval)."""


# ---------------------------------------------------------------------------
# tabulated recipe for the r family: n1 exponent, coefficients, b ranges
# ---------------------------------------------------------------------------

_R_N1 = {
    (1, 0): 0, (1, 1): 1,
    (2, 0): 0, (2, 1): 1, (2, 2): 2,
    (3, 0): 0, (3, 1): 1, (3, 2): 3, (3, 3): 3,
    (4, 0): 0, (4, 1): 1, (4, 2): 2, (4, 3): 4, (4, 4): 4,
}

_R_C3 = {
    (1, 0): 1, (1, 1): 0,
    (2, 0): 1, (2, 1): -1, (2, 2): 0,
    (3, 0): 1, (3, 1): -2, (3, 2): 0, (3, 3): 0,
    (4, 0): 1, (4, 1): -3, (4, 2): -1, (4, 3): 0, (4, 4): 0,
}


def _r_c1(n, m, dk):
    if m == 0:
        return 0.0
    if m == 1:
        return n * (1.0 - dk) ** (n - 1)
    if (n, m) == (4, 2):
        return 2.0 * (1.0 - dk) ** 2
    return 1.0


_R_C2 = {
    (1, 0): lambda b, dk: -b,
    (1, 1): lambda b, dk: b / (1.0 - b * dk),
    (2, 0): lambda b, dk: -b,
    (2, 1): lambda b, dk: b,
    (2, 2): lambda b, dk: -b / (1.0 - b * dk),
    (3, 0): lambda b, dk: -b,
    (3, 1): lambda b, dk: b,
    (3, 2): lambda b, dk: 1.0 - b,
    (3, 3): lambda b, dk: b / (1.0 - b * dk),
    (4, 0): lambda b, dk: -b,
    (4, 1): lambda b, dk: b,
    (4, 2): lambda b, dk: -b,
    (4, 3): lambda b, dk: -(1.0 - b),
    (4, 4): lambda b, dk: -b / (1.0 - b * dk),
}


def _r_c2_from_b(n, m, b, dk):
    return _R_C2[(n, m)](b, dk)


def _r_c4(n, m, dk):
    if (n, m) == (4, 2):
        return 4.0 * (1.0 - dk) ** 2
    return 0.0


def _r_b_valid(n, m, b, dk):
    d1 = 1.0 - dk
    table = {
        (1, 0): b < 1, (1, 1): 0 < b < 1 / dk,
        (2, 0): b < d1, (2, 1): b > 1, (2, 2): b < 0 or b > 1 / dk,
        (3, 0): b < d1 ** 2, (3, 1): b >= 3 * d1, (3, 2): b < 1,
        (3, 3): 0 < b < 1 / dk,
        (4, 0): b < d1 ** 3, (4, 1): b >= 6 * d1 ** 2, (4, 2): b < 3 * d1,
        (4, 3): b > 1, (4, 4): b < 0 or b > 1 / dk,
    }
    return table[(n, m)]


def _r_c2_valid(n, m, c2, dk):
    d1 = 1.0 - dk
    table = {
        (1, 0): c2 > -1, (1, 1): c2 > 0,
        (2, 0): c2 > -d1, (2, 1): c2 > 1, (2, 2): c2 > 0,
        (3, 0): c2 > -d1 ** 2, (3, 1): c2 >= 3 * d1, (3, 2): c2 > 0,
        (3, 3): c2 > 0,
        (4, 0): c2 > -d1 ** 3, (4, 1): c2 >= 3 * d1 ** 2, (4, 2): c2 > -3 * d1,
        (4, 3): c2 > 0, (4, 4): c2 > 0,
    }
    return table[(n, m)]


# ---------------------------------------------------------------------------
# spec
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MappingSpec:
    """Parameters of one mapping instance; only family-relevant fields are read.

    dk is the linear weight of the sub-stencil the mapping serves.  For the
    prm family (c1L, c2L, m1L) / (c1R, c2R, m1R) parameterize the two
    branches; n1 > 1 selects the general form with shared dk-ratio factors.
    For the r family either b is given (tabulated recipe) or c2L/c2R hold the
    free denominator coefficients of the two branches directly.  A is the im
    amplification, s the fixed aim scale (the solver substitutes an adaptive
    value where configured).
    """

    family: str
    dk: float
    n: int = 1
    m: int = 0
    n1: int = 1
    A: float = 1.0
    b: float | None = None
    s: float = 1.0
    c1L: float = 1.0
    c2L: float = 0.0
    m1L: int = 1
    c1R: float = 1.0
    c2R: float = 0.0
    m1R: int = 1
    general_form: bool = False
    s_mode: str = "fixed"

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise MappingError(f"unknown mapping family {self.family!r}")
        if not 0.0 < self.dk < 1.0:
            raise MappingError(f"dk={self.dk} outside (0, 1)")
        fam = self.family
        if fam in ("pm", "ppm", "im", "rm", "aim", "r", "prm") and self.n < 1:
            raise MappingError("order n must be >= 1")
        if fam == "ppm" and self.m < 0:
            raise MappingError("ppm endpoint order m must be >= 0")
        if fam == "im" and self.A <= 0:
            raise MappingError("im parameter A must be positive")
        if fam == "aim" and self.s < 0:
            raise MappingError("aim scale s must be >= 0")
        if self.s_mode not in ("fixed", "adaptive"):
            raise MappingError(f"unknown s_mode {self.s_mode!r}")
        if fam == "r":
            if (self.n, self.m) not in _R_N1:
                raise MappingError(f"r family has no tabulated recipe for (n, m)=({self.n}, {self.m})")
            if self.b is not None:
                if not _r_b_valid(self.n, self.m, self.b, self.dk):
                    raise MappingError(
                        f"r-family b={self.b} outside the valid range for "
                        f"(n, m, dk)=({self.n}, {self.m}, {self.dk})")
            else:
                for side, c2 in (("L", self.c2L), ("R", self.c2R)):
                    if not _r_c2_valid(self.n, self.m, c2, self.dk):
                        raise MappingError(
                            f"r-family c2{side}={c2} outside the valid range for "
                            f"(n, m, dk)=({self.n}, {self.m}, {self.dk})")
        if fam == "prm":
            if self.m > self.n:
                raise MappingError("prm requires m <= n")
            if self.n1 < 1 or self.m1L < 1 or self.m1R < 1:
                raise MappingError("prm exponents n1, m1 must be >= 1")
            if min(self.c1L, self.c1R) <= 0 or min(self.c2L, self.c2R) <= 0:
                raise MappingError("prm coefficients c1, c2 must be positive on both sides")


def identity_spec(dk: float) -> MappingSpec:
    return MappingSpec("identity", dk)


def gm_spec(dk: float) -> MappingSpec:
    return MappingSpec("gm", dk, n=2, m=0)


def pm_spec(n: int, dk: float) -> MappingSpec:
    return MappingSpec("pm", dk, n=n, m=1)


def ppm_spec(n: int, m: int, dk: float) -> MappingSpec:
    return MappingSpec("ppm", dk, n=n, m=m)


def im_spec(n: int, A: float, dk: float) -> MappingSpec:
    return MappingSpec("im", dk, n=n, m=0, A=A)


def rm_spec(n: int, m: int, dk: float) -> MappingSpec:
    return MappingSpec("rm", dk, n=n, m=m)


def aim_spec(n: int, m: int, s: float, dk: float, s_mode: str = "fixed") -> MappingSpec:
    return MappingSpec("aim", dk, n=n, m=m, s=s, s_mode=s_mode)


def r_spec(n: int, m: int, dk: float, b: float | None = None,
           c2L: float | None = None, c2R: float | None = None) -> MappingSpec:
    if b is None and (c2L is None or c2R is None):
        raise MappingError("r family needs either b or both direct coefficients")
    return MappingSpec("r", dk, n=n, m=m, n1=_R_N1[(n, m)], b=b,
                       c2L=0.0 if c2L is None else c2L,
                       c2R=0.0 if c2R is None else c2R)


def prm_spec(n: int, m: int, dk: float, c1L: float, c2L: float, m1L: int,
             c1R: float, c2R: float, m1R: int, n1: int = 1) -> MappingSpec:
    return MappingSpec("prm", dk, n=n, m=m, n1=n1,
                       c1L=c1L, c2L=c2L, m1L=m1L, c1R=c1R, c2R=c2R, m1R=m1R)


def prm_general_spec(n: int, m: int, n1: int, m1: int, c1: float, c2: float,
                     dk: float) -> MappingSpec:
    """General-form spec with shared coefficients; the mirrored branch keeps
    the dk-ratio factors instead of absorbing them."""
    return MappingSpec("prm", dk, n=n, m=m, n1=n1,
                       c1L=c1, c2L=c2, m1L=m1, c1R=c1, c2R=c2, m1R=m1,
                       general_form=True)


# ---------------------------------------------------------------------------
# deviation forms g(dk + t) - dk, the single source of truth for evaluation
# ---------------------------------------------------------------------------

def _ppm_coeffs(n, m):
    # a_i = prod_{j=0}^{m-1-i}(n+j) / (m-i)!  for i < m,  a_m = 1
    out = []
    for i in range(m):
        num = 1
        for j in range(m - i):
            num *= n + j
        out.append(num / math.factorial(m - i))
    out.append(1.0)
    return out


def _rm_poly_coeffs(n, m, dk):
    a = [(-1.0) ** (n + i) * math.comb(n + 1, i) * dk ** (n - i) for i in range(m + 1)]
    a.append((1.0 - dk) ** n - sum(a))
    return a


def deviation_at_dk(spec: MappingSpec, t):
    """g(dk + t) - dk evaluated without forming g itself.

    Near dk the mapped value agrees with dk to n+1 digits of contact, so
    g(dk + t) - dk computed naively is cancellation noise; every family here
    has a closed deviation form with full relative precision at any |t|.
    t may be a scalar or array with entries in [-dk, 1-dk]; negative t uses
    the left branch.
    """
    scalar = np.isscalar(t) or np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    fam, dk = spec.family, spec.dk
    w = dk + t

    if fam == "identity":
        out = t.copy()
    elif fam == "gm":
        out = t ** 3 / (dk * (1.0 - dk) + (1.0 - 2.0 * dk) * t)
    elif fam == "im":
        out = spec.A * t ** (spec.n + 1) / (spec.A * t ** spec.n + w * (1.0 - w))
    elif fam == "rm":
        a = _rm_poly_coeffs(spec.n, spec.m, dk)
        out = t ** (spec.n + 1) / sum(ai * w ** i for i, ai in enumerate(a))
    elif fam == "aim":
        out = t ** (spec.n + 1) / (t ** spec.n + spec.s * (w * (1.0 - w)) ** (spec.m + 1))
    elif fam == "pm":
        out = np.empty_like(t)
        lo = t < 0
        n = spec.n
        sgn = -1.0 if n % 2 else 1.0
        out[lo] = sgn * (n + 1.0) / dk ** (n + 1) * t[lo] ** (n + 1) * (w[lo] + dk / (n + 1.0))
        hi = ~lo
        out[hi] = -(n + 1.0) / (1.0 - dk) ** (n + 1) * t[hi] ** (n + 1) \
            * (w[hi] + (dk - (n + 2.0)) / (n + 1.0))
    elif fam == "ppm":
        n, m = spec.n, spec.m
        a = _ppm_coeffs(n, m)
        out = np.empty_like(t)
        lo = t < 0
        accL = sum(a[i] * w[lo] ** (m - i) * dk ** i for i in range(m + 1))
        sgn = -1.0 if n % 2 else 1.0
        out[lo] = sgn / dk ** (n + m) * t[lo] ** (n + 1) * accL
        hi = ~lo
        accR = sum(a[i] * (1.0 - w[hi]) ** (m - i) * (1.0 - dk) ** i for i in range(m + 1))
        out[hi] = 1.0 / (1.0 - dk) ** (n + m) * t[hi] ** (n + 1) * accR
    elif fam == "r":
        if spec.b is not None:
            c2L = c2R = _r_c2_from_b(spec.n, spec.m, spec.b, dk)
        else:
            c2L, c2R = spec.c2L, spec.c2R
        n1 = _R_N1[(spec.n, spec.m)]
        c1 = _r_c1(spec.n, spec.m, dk)
        c3 = _R_C3[(spec.n, spec.m)]
        c4 = _r_c4(spec.n, spec.m, dk)

        def dev_right(tt, c2slot):
            ww = dk + tt
            den = c1 * tt ** n1 + c2slot * (1.0 - ww) ** (spec.m + 1) \
                + c3 * (1.0 - dk) ** spec.n + c4 * (1.0 - ww) ** spec.m
            return tt ** (spec.n + 1) / den

        out = np.empty_like(t)
        lo = t < 0
        # mirrored branch: dev_L(t) = -dk/(1-dk) * dev_R(-(1-dk)/dk * t)
        out[lo] = -dk / (1.0 - dk) * dev_right(-(1.0 - dk) / dk * t[lo], c2L)
        out[~lo] = dev_right(t[~lo], c2R)
    elif fam == "prm":
        n, m, n1 = spec.n, spec.m, spec.n1
        out = np.empty_like(t)
        lo = t < 0
        tl, wl = t[lo], w[lo]
        if n1 == 1 and not spec.general_form:
            s_c2 = -1.0 if (1 + n) % 2 else 1.0
            s_c1 = -1.0 if n % 2 else 1.0
            denL = tl ** n + s_c2 * spec.c2L * tl * wl ** spec.m1L \
                + s_c1 * spec.c1L * wl ** (m + 1)
        else:
            ratio = (1.0 - dk) / dk
            s_c2 = -1.0 if (n1 + n) % 2 else 1.0
            s_c1 = -1.0 if n % 2 else 1.0
            denL = tl ** n + s_c2 * ratio ** (n1 + spec.m1L - n) * spec.c2L * tl ** n1 * wl ** spec.m1L \
                + s_c1 * ratio ** (m - n + 1) * spec.c1L * wl ** (m + 1)
        out[lo] = tl ** (n + 1) / denL
        hi = ~lo
        th, wh = t[hi], w[hi]
        denR = th ** n + spec.c2R * th ** n1 * (1.0 - wh) ** spec.m1R \
            + spec.c1R * (1.0 - wh) ** (m + 1)
        out[hi] = th ** (n + 1) / denR
    else:
        raise MappingError(fam)

    return float(out[0]) if scalar else out


def eval_mapping(spec: MappingSpec, omega):
    """g(omega) with the branch chosen per side of dk; omega is clamped to [0, 1].

    Accepts scalars or arrays and returns the matching shape.
    """
    scalar = np.isscalar(omega) or np.ndim(omega) == 0
    w = np.clip(np.asarray(omega, dtype=float), 0.0, 1.0)
    out = spec.dk + np.asarray(deviation_at_dk(spec, w - spec.dk))
    return float(out) if scalar else out


def identity_deviation_fn(spec: MappingSpec, at_one: bool):
    """(fn, stable): fn(u) = g(omega) - omega at omega = u (or 1-u when at_one).

    For the denominator-structured families the difference has the exact form
    -t * (den - t^n) / den with den - t^n free of cancellation, which keeps
    full relative precision however deep u goes; stable=False marks theplain
    evaluation fallback whose absolute noise is machine-epsilon scale.
    """
    dk = spec.dk
    fam = spec.family

    def plain(u):
        w = 1.0 - u if at_one else u
        return eval_mapping(spec, w) - w

    if fam == "prm":
        n, m, n1 = spec.n, spec.m, spec.n1
        if at_one:
            c1, c2, m1 = spec.c1R, spec.c2R, spec.m1R

            def fn(u):
                t = (1.0 - dk) - u
                rest = c2 * t ** n1 * u ** m1 + c1 * u ** (m + 1)
                return -t * rest / (t ** n + rest)
        else:
            c1, c2, m1 = spec.c1L, spec.c2L, spec.m1L
            s_c1 = -1.0 if n % 2 else 1.0
            if n1 == 1 and not spec.general_form:
                s_c2 = -1.0 if (1 + n) % 2 else 1.0
                k2 = k1 = 1.0
            else:
                ratio = (1.0 - dk) / dk
                s_c2 = -1.0 if (n1 + n) % 2 else 1.0
                k2 = ratio ** (n1 + m1 - n)
                k1 = ratio ** (m - n + 1)

            def fn(u):
                t = u - dk
                rest = s_c2 * k2 * c2 * t ** n1 * u ** m1 + s_c1 * k1 * c1 * u ** (m + 1)
                return -t * rest / (t ** n + rest)
        return fn, True

    if fam == "aim":
        n, m, s = spec.n, spec.m, spec.s

        def fn(u):
            w = 1.0 - u if at_one else u
            t = w - dk
            rest = s * (w * (1.0 - w)) ** (m + 1)
            return -t * rest / (t ** n + rest)
        return fn, True

    if fam in ("gm", "im"):
        n = 2 if fam == "gm" else spec.n
        A = 1.0 if fam == "gm" else spec.A

        def fn(u):
            w = 1.0 - u if at_one else u
            t = w - dk
            rest = w * (1.0 - w)
            return -t * rest / (A * t ** n + rest)
        return fn, True

    if fam == "r":
        n, m = spec.n, spec.m
        n1 = _R_N1[(n, m)]
        c3 = _R_C3[(n, m)]
        # stable only where the constant denominator term is absent and the
        # leading powers cancel structurally
        if c3 == 0 and n1 == n and _r_c1(n, m, dk) == 1.0 and _r_c4(n, m, dk) == 0.0:
            if spec.b is not None:
                c2L = c2R = _r_c2_from_b(n, m, spec.b, dk)
            else:
                c2L, c2R = spec.c2L, spec.c2R
            if at_one:
                def fn(u):
                    t = (1.0 - dk) - u
                    rest = c2R * u ** (m + 1)
                    return -t * rest / (t ** n + rest)
                return fn, True

            # the identity-deviation at 0 of the mirrored branch is exactly
            # the scaled deviation-at-1 of the generating branch: the linear
            # parts of the transform cancel algebraically
            ratio = (1.0 - dk) / dk

            def fn(u):
                v = ratio * u
                t = (1.0 - dk) - v
                rest = c2L * v ** (m + 1)
                return dk / (1.0 - dk) * t * rest / (t ** n + rest)

            return fn, True
        return plain, False

    return plain, False


def left_from_right(g_right: Callable, dk: float) -> Callable:
    """Mirror a right-branch mapping on [dk, 1] into its left branch on [0, dk]."""
    ratio = (1.0 - dk) / dk

    def g_left(w):
        return dk / (1.0 - dk) * (1.0 - g_right(1.0 - ratio * w))

    return g_left


def map_weights(omega: np.ndarray, specs) -> np.ndarray:
    """Remap normalized weights through one spec per sub-stencil and renormalize."""
    omega = np.asarray(omega, dtype=float)
    alpha = np.array([eval_mapping(spec, omega[..., k])
                      for k, spec in enumerate(specs)])
    alpha = np.moveaxis(alpha, 0, -1)
    total = alpha.sum(axis=-1, keepdims=True)
    if not (total > 0).all():
        raise MappingError("mapped weights summed to zero; mapping is broken")
    return alpha / total


def aim_scale(IS, dk: float, c: float, dx: float, grouped: bool = False,
              IS_other=None) -> float:
    """Adaptive aim scale s = (c / dk) * min(IS) / (max(IS) + dx**7).

    grouped=True takes the smaller ratio of this window and the opposite-wind
    window (IS_other), damping the mapping when either side is rough.
    """
    IS = np.asarray(IS, dtype=float)
    eps_m = dx ** 7
    lam = IS.min(axis=-1) / (IS.max(axis=-1) + eps_m)
    if grouped:
        if IS_other is None:
            raise ValueError("grouped aim scale needs the opposite-wind indicators")
        other = np.asarray(IS_other, dtype=float)
        lam_o = other.min(axis=-1) / (other.max(axis=-1) + eps_m)
        lam = np.minimum(lam, lam_o)
    return c / dk * lam


# ---------------------------------------------------------------------------
# production parameter sets
# ---------------------------------------------------------------------------

# (c1, c2, m1) per side, keyed by stencil order r, then sub-stencil k.
_PRODUCTION_PRM = {
    2: {
        0: {"L": (1.0, 7e7, 5), "R": (1.0, 3e6, 5)},
        1: {"L": (1.0, 1e5, 4), "R": (1.0, 3e6, 4)},
    },
    3: {
        0: {"L": (1.0, 1e9, 5), "R": (1.0, 5e4, 6)},
        1: {"L": (1.0, 6e5, 6), "R": (1.0, 6e7, 6)},
        2: {"L": (1.0, 3e8, 6), "R": (1.0, 2e5, 6)},
    },
    4: {
        0: {"L": (1.0, 1e11, 5), "R": (1.0, 5e2, 5)},
        1: {"L": (1.0, 3e4, 5), "R": (1.0, 3e3, 4)},
        2: {"L": (1.0, 1e4, 5), "R": (1.0, 2e4, 4)},
        3: {"L": (1.0, 5e7, 5), "R": (1.0, 5e2, 4)},
    },
}

_PRODUCTION_PRM_N = {2: 1, 3: 2, 4: 3}

# comparative piecewise-rational sets at the WENO5 linear weights
_COMPARATIVE_R322 = {
    0: {"L": 30090.0, "R": 676.6666},
    1: {"L": 1235.6790, "R": 8335.0},
    2: {"L": 12970.7047, "R": 929.2592},
}

_MIMIC_PM_SET = {"L": (26.0, 13.0, 2), "R": (40.0, 20.0, 2)}
_MIMIC_RM_SET = {"L": (1.0, 7500.0, 5), "R": (1000.0, 10000.0, 2)}

_D_BY_R = {
    2: (1 / 3, 2 / 3),
    3: (1 / 10, 6 / 10, 3 / 10),
    4: (1 / 35, 12 / 35, 18 / 35, 4 / 35),
    5: (1 / 126, 20 / 126, 60 / 126, 40 / 126, 5 / 126),
}


def production_prm_specs(r: int) -> list[MappingSpec]:
    """Production piecewise-rational specs, one per sub-stencil of order r."""
    if r not in _PRODUCTION_PRM:
        raise MappingError(
            f"no production piecewise-rational parameters for r={r}; supported: 2, 3, 4")
    n = _PRODUCTION_PRM_N[r]
    out = []
    for k, dk in enumerate(_D_BY_R[r]):
        c1L, c2L, m1L = _PRODUCTION_PRM[r][k]["L"]
        c1R, c2R, m1R = _PRODUCTION_PRM[r][k]["R"]
        out.append(prm_spec(n, n, dk, c1L, c2L, m1L, c1R, c2R, m1R))
    return out


def comparative_specs(variant: str):
    """Comparative parameter sets: the plain rational R322 set at the r=3
    linear weights, and the two imitation sets at dk = 6/10."""
    if variant == "r322":
        return [r_spec(2, 2, dk, c2L=_COMPARATIVE_R322[k]["L"], c2R=_COMPARATIVE_R322[k]["R"])
                for k, dk in enumerate(_D_BY_R[3])]
    if variant == "mimic_pm":
        c1L, c2L, m1L = _MIMIC_PM_SET["L"]
        c1R, c2R, m1R = _MIMIC_PM_SET["R"]
        return [prm_spec(2, 2, 0.6, c1L, c2L, m1L, c1R, c2R, m1R)]
    if variant == "mimic_rm":
        c1L, c2L, m1L = _MIMIC_RM_SET["L"]
        c1R, c2R, m1R = _MIMIC_RM_SET["R"]
        return [prm_spec(2, 2, 0.6, c1L, c2L, m1L, c1R, c2R, m1R)]
    raise MappingError(f"unknown comparative set {variant!r}")


# ---------------------------------------------------------------------------
# singularity scan
# ---------------------------------------------------------------------------

def branch_denominators(spec: MappingSpec):
    """[(label, denominator callable, (lo, hi))] for the rational families."""
    fam, dk = spec.family, spec.dk
    if fam == "gm":
        return [("full", lambda w: (1.0 - 2.0 * dk) * w + dk * dk, (0.0, 1.0))]
    if fam == "im":
        return [("full", lambda w: spec.A * (w - dk) ** spec.n + w * (1.0 - w), (0.0, 1.0))]
    if fam == "rm":
        a = _rm_poly_coeffs(spec.n, spec.m, dk)
        return [("full", lambda w: sum(ai * w ** i for i, ai in enumerate(a)), (0.0, 1.0))]
    if fam == "aim":
        return [("full",
                 lambda w: (w - dk) ** spec.n + spec.s * (w * (1.0 - w)) ** (spec.m + 1),
                 (0.0, 1.0))]
    if fam == "r":
        if spec.b is not None:
            c2L = c2R = _r_c2_from_b(spec.n, spec.m, spec.b, dk)
        else:
            c2L, c2R = spec.c2L, spec.c2R
        n1 = _R_N1[(spec.n, spec.m)]
        c1 = _r_c1(spec.n, spec.m, dk)
        c3 = _R_C3[(spec.n, spec.m)]
        c4 = _r_c4(spec.n, spec.m, dk)

        def den_r(w, c2slot=c2R):
            return c1 * (w - dk) ** n1 + c2slot * (1.0 - w) ** (spec.m + 1) \
                + c3 * (1.0 - dk) ** spec.n + c4 * (1.0 - w) ** spec.m

        ratio = (1.0 - dk) / dk
        return [("L", lambda w: den_r(1.0 - ratio * w, c2L), (0.0, dk)),
                ("R", den_r, (dk, 1.0))]
    if fam == "prm":
        n, m, n1 = spec.n, spec.m, spec.n1

        def den_left(w):
            t = w - dk
            if n1 == 1 and not spec.general_form:
                s_c2 = -1.0 if (1 + n) % 2 else 1.0
                s_c1 = -1.0 if n % 2 else 1.0
                return t ** n + s_c2 * spec.c2L * t * w ** spec.m1L \
                    + s_c1 * spec.c1L * w ** (m + 1)
            ratio = (1.0 - dk) / dk
            s_c2 = -1.0 if (n1 + n) % 2 else 1.0
            s_c1 = -1.0 if n % 2 else 1.0
            return t ** n + s_c2 * ratio ** (n1 + spec.m1L - n) * spec.c2L * t ** n1 * w ** spec.m1L \
                + s_c1 * ratio ** (m - n + 1) * spec.c1L * w ** (m + 1)

        def den_right(w):
            t = w - dk
            return t ** n + spec.c2R * t ** n1 * (1.0 - w) ** spec.m1R \
                + spec.c1R * (1.0 - w) ** (m + 1)

        return [("L", den_left, (0.0, dk)), ("R", den_right, (dk, 1.0))]
    raise MappingError(f"{fam} is not a rational family")


def check_singularity_free(spec: MappingSpec, samples: int = 10_000) -> bool:
    """True iff every branch denominator stays bounded away from zero on a
    dense sample of its domain (endpoints included)."""
    for _, den, (lo, hi) in branch_denominators(spec):
        w = np.linspace(lo, hi, samples + 2)
        vals = np.asarray(den(w), dtype=float)
        scale = np.abs(vals).max()
        if scale == 0.0 or not np.isfinite(vals).all():
            return False
        if np.abs(vals).min() <= 1e-12 * scale:
            return False
        if vals.max() > 0 > vals.min():  # sign change between samples
            return False
    return True
