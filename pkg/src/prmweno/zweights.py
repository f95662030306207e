"""Global-indicator ("tau") weighting rules used as comparison schemes.

All operate on the same candidate/indicator machinery as the classical
weights and return normalized weight vectors.  Windows follow the core
convention: entry index k+l belongs to sub-stencil k.  The batched forms
accept (..., r) indicator arrays and (..., 2r-1) windows.
"""

from __future__ import annotations

import numpy as np

from .tables import StencilTables

__all__ = [
    "z5_weights",
    "p3_weights",
    "f3_weights",
    "nis_indicators",
    "nis5_weights",
]


def _normalize(alpha):
    return alpha / alpha.sum(axis=-1, keepdims=True)


def z5_weights(IS, d, q: int, eps: float):
    """alpha_k = d_k * (1 + (tau/(IS_k + eps))^q), tau = |IS_0 - IS_2|.

    q=1 favors resolution, q=2 order preservation at first-order critical
    points.
    """
    if q not in (1, 2):
        raise ValueError("q must be 1 or 2")
    IS = np.asarray(IS, dtype=float)
    tau = np.abs(IS[..., 0] - IS[..., 2])[..., None]
    return _normalize(d * (1.0 + (tau / (IS + eps)) ** q))


def p3_weights(IS, window, d, dx: float, eps: float):
    """Three-point rule with the low-frequency damping term.

    tau = |(IS_0 + IS_1)/2 - (f_{i-1} - f_{i+1})^2/4|, and each weight gets
    the extra lam * (IS_k + eps)/(tau + eps) contribution with
    lam = dx^(1/6).  window holds (f_{i-1}, f_i, f_{i+1}).
    """
    IS = np.asarray(IS, dtype=float)
    w = np.asarray(window, dtype=float)
    lam = dx ** (1.0 / 6.0)
    tau = np.abs(0.5 * (IS[..., 0] + IS[..., 1])
                 - 0.25 * (w[..., 0] - w[..., 2]) ** 2)[..., None]
    alpha = d * (1.0 + tau / (IS + eps) + lam * (IS + eps) / (tau + eps))
    return _normalize(alpha)


def f3_weights(IS, window, d, eps: float):
    """Three-point rule built on the wide-stencil indicator.

    IS_3 = (f_{i-1} - 2 f_i + f_{i+1})^2/12 + (f_{i-1} - f_{i+1})^2/4,
    tau = |(IS_0 + IS_1)/2 - IS_3|^(3/2).
    """
    IS = np.asarray(IS, dtype=float)
    w = np.asarray(window, dtype=float)
    is3 = (w[..., 0] - 2.0 * w[..., 1] + w[..., 2]) ** 2 / 12.0 \
        + (w[..., 0] - w[..., 2]) ** 2 / 4.0
    tau = np.abs(0.5 * (IS[..., 0] + IS[..., 1]) - is3)[..., None] ** 1.5
    return _normalize(d * (1.0 + tau / (IS + eps)))


def nis_indicators(window, t: StencilTables):
    """Modified five-point indicators NIS_k = IS_k - |u_k * v_k| where u_k and
    v_k are the first- and second-difference inner sums of sub-stencil k.

    May go negative on rough data; the weighting below clamps at zero.
    """
    if t.r != 3:
        raise ValueError("modified indicators are defined for r=3 only")
    w = np.asarray(window, dtype=float)
    bm = t.indicator_matrix()
    inner = np.einsum("kml,...l->...km", bm, w)
    IS = (inner * inner) @ t.c
    return IS - np.abs(inner[..., 0] * inner[..., 1])


def nis5_weights(window, t: StencilTables, eps: float, clamp: bool = True):
    """Classical-form weights on the modified indicators."""
    nis = nis_indicators(window, t)
    if clamp:
        nis = np.maximum(nis, 0.0)
    alpha = t.d / (eps + nis) ** 2
    return _normalize(alpha)
