"""One-dimensional compressible Euler equations: state conversions,
eigenvalue-split fluxes, and the semi-discrete right side.

States are (N, 3) arrays of conserved variables (density, momentum, total
energy).  Fluxes are split per signed eigenvalue (u-c, u, u+c) with an
optional smoothing floor so the split stays differentiable through sonic
points; reconstruction is component-wise on the split fluxes, left-biased
for the plus part and mirrored for the minus part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .reconstruct import WeightingStrategy, reconstruct_batch, wind_lambda

__all__ = [
    "GasModel", "StateError", "BlowUpError",
    "prim_to_cons", "cons_to_prim", "sound_speed", "max_wave_speed",
    "steger_warming_split", "apply_bc", "euler_rhs",
]

DEFAULT_GAMMA = 1.4


@dataclass(frozen=True)
class GasModel:
    gamma: float = DEFAULT_GAMMA

    def __post_init__(self):
        if self.gamma <= 1.0:
            raise ValueError("gamma must exceed 1")


class StateError(ValueError):
    """Nonpositive density or pressure."""


class BlowUpError(RuntimeError):
    """Non-finite flux or invalid state during a run; carries location info."""

    def __init__(self, message, cell=None, time=None, step=None):
        super().__init__(message)
        self.cell = cell
        self.time = time
        self.step = step


def prim_to_cons(rho, u, p, gas: GasModel = GasModel()) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    u = np.asarray(u, dtype=float)
    p = np.asarray(p, dtype=float)
    if (rho <= 0).any() or (p <= 0).any():
        raise StateError("nonpositive density or pressure")
    E = p / (gas.gamma - 1.0) + 0.5 * rho * u * u
    return np.stack([rho, rho * u, E], axis=-1)


def cons_to_prim(U, gas: GasModel = GasModel(), check: bool = True):
    U = np.asarray(U, dtype=float)
    rho = U[..., 0]
    u = U[..., 1] / rho
    p = (gas.gamma - 1.0) * (U[..., 2] - 0.5 * U[..., 1] * u)
    if check and ((rho <= 0).any() or (p <= 0).any()):
        raise StateError("nonpositive density or pressure")
    return rho, u, p


def sound_speed(U, gas: GasModel = GasModel()):
    rho, _, p = cons_to_prim(U, gas)
    return np.sqrt(gas.gamma * p / rho)


def max_wave_speed(U, gas: GasModel = GasModel()) -> float:
    rho, u, p = cons_to_prim(U, gas)
    return float((np.abs(u) + np.sqrt(gas.gamma * p / rho)).max())


def steger_warming_split(U, gas: GasModel = GasModel(), eps_sw: float = 0.0):
    """(Fplus, Fminus) with Fplus + Fminus equal to the physical flux.

    Eigenvalues are split as (lam +- sqrt(lam^2 + eps^2))/2 with
    eps = eps_sw * c, so eps_sw = 0 gives the exact positive/negative parts
    and a small eps_sw keeps the split smooth at sonic points.
    """
    U = np.asarray(U, dtype=float)
    rho, u, p = cons_to_prim(U, gas)
    c = np.sqrt(gas.gamma * p / rho)
    gm = gas.gamma
    lam = np.stack([u - c, u, u + c], axis=-1)
    smooth = (eps_sw * c)[..., None] if np.ndim(c) else eps_sw * c
    lp = 0.5 * (lam + np.sqrt(lam * lam + smooth * smooth))
    lm = lam - lp

    def assemble(l):
        l1, l2, l3 = l[..., 0], l[..., 1], l[..., 2]
        w = (3.0 - gm) / (2.0 * (gm - 1.0)) * (l1 + l3) * c * c
        f0 = 2.0 * (gm - 1.0) * l2 + l1 + l3
        f1 = 2.0 * (gm - 1.0) * l2 * u + l1 * (u - c) + l3 * (u + c)
        f2 = (gm - 1.0) * l2 * u * u + 0.5 * l1 * (u - c) ** 2 \
            + 0.5 * l3 * (u + c) ** 2 + w
        return rho[..., None] / (2.0 * gm) * np.stack([f0, f1, f2], axis=-1)

    return assemble(lp), assemble(lm)


def apply_bc(U, bc: str, g: int) -> np.ndarray:
    """Pad (N, 3) conserved states with g ghost cells per side.

    periodic wraps; zero_gradient copies the edge cells; reflective_wall
    mirrors density and energy and negates momentum.
    """
    U = np.asarray(U, dtype=float)
    if bc == "periodic":
        return np.concatenate([U[-g:], U, U[:g]], axis=0)
    if bc == "zero_gradient":
        return np.concatenate([np.repeat(U[:1], g, axis=0), U,
                               np.repeat(U[-1:], g, axis=0)], axis=0)
    if bc == "reflective_wall":
        left = U[:g][::-1].copy()
        right = U[-g:][::-1].copy()
        left[:, 1] *= -1.0
        right[:, 1] *= -1.0
        return np.concatenate([left, U, right], axis=0)
    raise ValueError(f"unknown boundary rule {bc!r}")


def euler_rhs(U, strat: WeightingStrategy, gas: GasModel, dx: float,
              bc: str = "zero_gradient", eps_sw: float = 1e-6) -> np.ndarray:
    """Semi-discrete right side -(fhat_{j+1/2} - fhat_{j-1/2})/dx.

    Component-wise reconstruction of the split fluxes: left-biased windows
    for the plus flux, mirrored windows for the minus flux.  Raises
    BlowUpError on invalid states or non-finite fluxes (cell index attached)
    so robustness runs can record failures.
    """
    U = np.asarray(U, dtype=float)
    N = U.shape[0]
    g = strat.ghosts
    Up = apply_bc(U, bc, g)
    rho = Up[:, 0]
    pres = (gas.gamma - 1.0) * (Up[:, 2] - 0.5 * Up[:, 1] ** 2 / Up[:, 0])
    if (rho <= 0).any() or (pres <= 0).any():
        bad = int(np.argmax((rho <= 0) | (pres <= 0))) - g
        raise BlowUpError("nonpositive density or pressure", cell=bad)
    Fp, Fm = steger_warming_split(Up, gas, eps_sw)

    n_if = N + 1
    lam = None
    if strat.aim_adaptive and strat.aim_grouped:
        lams = []
        for comp in range(3):
            lp = wind_lambda(strat, np.ascontiguousarray(Fp[:, comp]), dx, n_if, g, False)
            lm = wind_lambda(strat, np.ascontiguousarray(Fm[:, comp]), dx, n_if, g, True)
            lams.append(np.minimum(lp, lm))
        lam = lams

    fhat = np.empty((n_if, 3))
    for comp in range(3):
        lam_c = lam[comp] if lam is not None else None
        fp = reconstruct_batch(strat, np.ascontiguousarray(Fp[:, comp]),
                               dx, n_if, g, mirror=False, lam=lam_c)
        fm = reconstruct_batch(strat, np.ascontiguousarray(Fm[:, comp]),
                               dx, n_if, g, mirror=True, lam=lam_c)
        fhat[:, comp] = fp + fm
    if not np.isfinite(fhat).all():
        bad = int(np.argmax(~np.isfinite(fhat).all(axis=1)))
        raise BlowUpError("non-finite interface flux", cell=bad)
    return -(fhat[1:] - fhat[:-1]) / dx
