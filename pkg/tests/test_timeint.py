"""Integrator order checks and step-size policies."""

import numpy as np
import pytest

from prmweno.timeint import (StepPolicy, compute_dt, integrate, rk4_step,
                             tvd_rk3_step)


def test_zero_rhs_is_identity():
    u = np.array([1.0, -2.0, 3.0])
    zero = lambda v: np.zeros_like(v)
    assert np.array_equal(tvd_rk3_step(u, zero, 0.3), u)
    assert np.array_equal(rk4_step(u, zero, 0.3), u)


def test_rk3_matches_taylor_on_decay():
    # one step of u' = -u from 1: exactly the cubic Taylor polynomial
    dt = 0.1
    u = np.array([1.0])
    got = tvd_rk3_step(u, lambda v: -v, dt)[0]
    expected = 1.0 - dt + dt ** 2 / 2 - dt ** 3 / 6
    assert got == pytest.approx(expected, abs=1e-16)
    assert abs(got - np.exp(-dt)) < dt ** 4


def test_rk4_matches_taylor_on_decay():
    dt = 0.1
    got = rk4_step(np.array([1.0]), lambda v: -v, dt)[0]
    expected = 1.0 - dt + dt ** 2 / 2 - dt ** 3 / 6 + dt ** 4 / 24
    assert got == pytest.approx(expected, abs=1e-15)
    assert abs(got - np.exp(-dt)) < dt ** 5


def test_rk4_exact_for_cubic_forcing():
    # u' = t^3 integrated over one step is a degree-3 quadrature: exact
    dt = 0.7
    state = np.array([0.0, 0.0])  # (u, t)
    rhs = lambda v: np.array([v[1] ** 3, 1.0])
    got = rk4_step(state, rhs, dt)
    assert got[0] == pytest.approx(dt ** 4 / 4, rel=1e-15)


def test_rk3_amplification_factor_on_rotation():
    # two-component rotation has the symbol of an imaginary eigenvalue; one
    # step must match the cubic expansion of exp(i w dt)
    w = 1.3
    dt = 0.05
    rhs = lambda v: w * np.array([-v[1], v[0]])
    got = tvd_rk3_step(np.array([1.0, 0.0]), rhs, dt)
    z = 1j * w * dt
    sym = 1 + z + z ** 2 / 2 + z ** 3 / 6
    assert got[0] == pytest.approx(sym.real, abs=1e-15)
    assert got[1] == pytest.approx(sym.imag, abs=1e-15)


@pytest.mark.parametrize("stepper,order", [(tvd_rk3_step, 3), (rk4_step, 4)])
def test_measured_convergence_order(stepper, order):
    errs = []
    for nsteps in (8, 16, 32, 64):
        dt = 1.0 / nsteps
        u = np.array([1.0])
        for _ in range(nsteps):
            u = stepper(u, lambda v: -v, dt)
        errs.append(abs(u[0] - np.exp(-1.0)))
    rates = [np.log2(a / b) for a, b in zip(errs, errs[1:])]
    assert abs(rates[-1] - order) < 0.05


def test_integrate_lands_exactly_on_final_time():
    seen = []
    u, steps = integrate(np.array([1.0]), lambda v: -v, 1.0,
                         lambda v, t: 0.3, monitor=lambda v, t, s: seen.append(t))
    assert steps == 4
    assert seen[-1] == pytest.approx(1.0, abs=1e-14)
    assert seen[:3] == pytest.approx([0.3, 0.6, 0.9])


def test_compute_dt_policies():
    assert compute_dt(StepPolicy("fixed_dt", 1e-3), 0.1) == 1e-3
    assert compute_dt(StepPolicy("cfl", 0.1), 0.01, max_speed=1.0) == pytest.approx(1e-3)
    # accuracy rule with the stability cap
    got = compute_dt(StepPolicy("accuracy", 0.9), 0.1, r=3)
    assert got == pytest.approx(0.9 * 0.1 ** 1.25)
    got = compute_dt(StepPolicy("accuracy", 0.9), 0.00625, r=2)
    assert got == pytest.approx(0.9 * 0.00625)  # capped at the grid scale
    # zero wave speed falls back to the grid scale
    assert compute_dt(StepPolicy("cfl", 0.5), 0.01, max_speed=0.0) == pytest.approx(0.005)
    with pytest.raises(ValueError):
        StepPolicy("wrong", 1.0)
    with pytest.raises(ValueError):
        StepPolicy("cfl", -1.0)


def test_euler_dt_from_wave_speed():
    from prmweno.euler import GasModel, max_wave_speed, prim_to_cons
    gas = GasModel()
    U = np.stack([prim_to_cons(1.0, 0.0, 1.0, gas),
                  prim_to_cons(0.125, 0.0, 0.1, gas)])
    speed = max_wave_speed(U, gas)
    assert speed == pytest.approx(np.sqrt(1.4), rel=1e-13)
    dt = compute_dt(StepPolicy("cfl", 0.5), 0.01, max_speed=speed)
    assert dt == pytest.approx(0.5 * 0.01 / np.sqrt(1.4))
