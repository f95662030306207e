"""Candidate reconstruction, smoothness indicators, and classical nonlinear
weights on a single flux window (or a batch of windows).

A window holds the 2r-1 point samples f(u_{j-r+1}) .. f(u_{j+r-1}) used to
reconstruct the interface value at j+1/2 under positive wind.  Negative-wind
reconstruction elsewhere reuses these routines on a reversed window.
"""

from __future__ import annotations

import numpy as np

from .tables import StencilTables

__all__ = [
    "candidates",
    "smoothness_indicators",
    "js_weights",
    "reconstruct",
]


def _check_window(window: np.ndarray, t: StencilTables) -> np.ndarray:
    w = np.asarray(window, dtype=float)
    if w.shape[-1] != t.width:
        raise ValueError(f"window length {w.shape[-1]} != 2r-1 = {t.width}")
    return w


def candidates(window: np.ndarray, t: StencilTables) -> np.ndarray:
    """Sub-stencil interface values q_k, k = 0..r-1 (leftmost stencil first)."""
    w = _check_window(window, t)
    return w @ t.candidate_matrix().T


def smoothness_indicators(window: np.ndarray, t: StencilTables) -> np.ndarray:
    """Indicator values IS_k >= 0 per sub-stencil.

    Evaluation order is fixed (inner dot products, square, then the outer
    scale) so golden files reproduce across platforms.
    """
    w = _check_window(window, t)
    bm = t.indicator_matrix()  # (r, r-1, 2r-1)
    inner = np.einsum("kml,...l->...km", bm, w)
    return (inner * inner) @ t.c


def js_weights(IS: np.ndarray, d: np.ndarray, eps: float) -> np.ndarray:
    """Normalized weights d_k / (eps + IS_k)^2 / (sum of same)."""
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    IS = np.asarray(IS, dtype=float)
    alpha = d / (eps + IS) ** 2
    return alpha / alpha.sum(axis=-1, keepdims=True)


def reconstruct(window: np.ndarray, weights: np.ndarray, t: StencilTables) -> np.ndarray:
    """Interface value sum_k w_k q_k."""
    q = candidates(window, t)
    return np.sum(np.asarray(weights, dtype=float) * q, axis=-1)
