"""Initial conditions, boundary rules, and reference machinery."""

import numpy as np
import pytest

from prmweno import euler as eu
from prmweno import problems as pb
from prmweno.harness import run_case
from prmweno.reconstruct import WeightingStrategy
from prmweno.timeint import StepPolicy


def test_swa1_odd_at_origin():
    assert pb.swa1_profile(np.array([0.0]))[0] == 0.0
    # odd around the origin
    x = np.linspace(-1, 1, 41)
    u = pb.swa1_profile(x)
    assert np.allclose(u, -u[::-1], atol=1e-15)


def test_swa1_two_first_order_critical_points_per_period():
    x = np.linspace(-1.0, 1.0, 200_001)
    u = pb.swa1_profile(x, a=1.0)
    signs = np.sign(np.diff(u))
    changes = np.count_nonzero(np.diff(signs) != 0)
    assert changes == 2


def test_combination_profile_piecewise_values():
    # inside the square wave the profile is one; in the gaps it vanishes
    vals = pb.combination_profile(np.array([-0.3, -0.5, 0.9, 0.1, -0.7]))
    assert vals[0] == 1.0          # inside the square
    assert vals[1] == 0.0          # gap between pack and square
    assert vals[2] == 0.0          # beyond the ellipse
    assert vals[3] == pytest.approx(1.0, abs=1e-12)   # triangle apex
    # pack center: (4 + 2 * 2**(-1/36)) / 6 by the smoothing average
    assert vals[4] == pytest.approx((4 + 2 * 2 ** (-1 / 36)) / 6, rel=1e-12)
    x = np.linspace(-1, 1, 20_001)
    u = pb.combination_profile(x)
    assert (u >= 0.0).all() and (u <= 1.0).all()
    tv = np.abs(np.diff(u)).sum()
    assert 7.5 < tv < 8.5          # four unit structures, each rising and falling


def test_strong_shock_states():
    rho, u, p = pb.strong_shock_prim(np.array([-1.0, 1.0]), pr=1e6)
    assert (rho[0], u[0], p[0]) == (1.0, 0.0, 1e5)
    assert (rho[1], u[1], p[1]) == (1.0, 0.0, 0.1)


def test_blast_and_resolution_states():
    rho, u, p = pb.blast_prim(np.array([0.05, 0.5, 0.95]))
    assert p.tolist() == [1000.0, 0.01, 100.0]
    rho, u, p = pb.shu_osher_prim(np.array([-4.5, 0.0]))
    assert rho[0] == pytest.approx(3.857143)
    assert p[1] == 1.0
    rho, u, p = pb.titarev_toro_prim(np.array([-4.8, 0.025]))
    assert rho[0] == pytest.approx(1.515695)
    assert rho[1] == pytest.approx(1.0 + 0.1 * np.sin(0.5 * np.pi), rel=1e-12)


def test_grids_avoid_euler_discontinuities():
    spec = pb.PROBLEMS["blast"]
    x, dx = pb.grid(spec, 200)
    assert not np.isclose(x, 0.1).any()
    assert not np.isclose(x, 0.9).any()
    # the odd default grid of the shock problem puts its middle center on
    # the jump; the initial condition assigns the right state there
    spec = pb.PROBLEMS["strong_shock"]
    x, dx = pb.grid(spec, 201)
    j = np.argmin(np.abs(x))
    assert x[j] == pytest.approx(0.0, abs=1e-12)
    rho, u, p = pb.strong_shock_prim(x, pr=1e6)
    assert p[j] == 0.1


def test_initialize_shapes_and_guard():
    u, x, dx = pb.initialize(pb.PROBLEMS["swa1"], 40)
    assert u.shape == (40,) and dx == pytest.approx(0.05)
    U, x, dx = pb.initialize(pb.PROBLEMS["shu_osher"], 100)
    assert U.shape == (100, 3)
    with pytest.raises(ValueError):
        pb.initialize(pb.PROBLEMS["swa1"], 4)


def test_shifted_exact_periodicity():
    spec = pb.PROBLEMS["swa1"]
    x, _ = pb.grid(spec, 64)
    u0 = pb.swa1_profile(x)
    assert np.allclose(pb.shifted_exact(spec, x, 2.0), u0, atol=1e-12)
    assert np.allclose(pb.shifted_exact(spec, x, 2000.0), u0, atol=1e-9)
    spec = pb.PROBLEMS["combo"]
    x, _ = pb.grid(spec, 100)
    assert np.allclose(pb.shifted_exact(spec, x, 2.0),
                       pb.combination_profile(x), atol=1e-12)


def test_wall_conserves_mass_per_step():
    spec = pb.PROBLEMS["blast"]
    gas = eu.GasModel()
    U, x, dx = pb.initialize(spec, 120, gas)
    strat = WeightingStrategy(r=3, mapping=None)
    masses = []
    from prmweno.timeint import compute_dt, integrate, tvd_rk3_step
    rhs = lambda v: eu.euler_rhs(v, strat, gas, dx, bc=spec.bc)
    dt_fn = lambda v, t: compute_dt(StepPolicy("cfl", 0.5), dx, 3,
                                    eu.max_wave_speed(v, gas))
    monitor = lambda v, t, s: masses.append(v[:, 0].sum() * dx)
    U, steps = integrate(U, rhs, 0.002, dt_fn, tvd_rk3_step, monitor)
    m0 = masses[0]
    assert np.abs(np.diff(masses)).max() < 1e-10 * m0 * len(masses)


def test_reference_cache_round_trip(tmp_path, monkeypatch):
    monkeypatch.setenv(pb.CACHE_ENV, str(tmp_path))
    spec = pb.PROBLEMS["shu_osher"]
    ref = pb.reference(spec, N_ref=220, t_final=0.02)
    assert ref.kind == "fine_grid"
    assert ref.N == 220
    files = list(tmp_path.glob("*.npz"))
    assert len(files) == 1
    again = pb.reference(spec, N_ref=220, t_final=0.02)
    assert np.array_equal(ref.data, again.data)
    assert len(list(tmp_path.glob("*.npz"))) == 1


def test_align_to_grid_odd_multiple_exact():
    spec = pb.PROBLEMS["shu_osher"]
    x_f, _ = pb.grid(spec, 600)
    ref = pb.ReferenceSolution("fine_grid", x_f,
                              np.stack([x_f, x_f, x_f], axis=1), 600, {})
    coarse = pb.align_to_grid(ref, 200)
    x_c, _ = pb.grid(spec, 200)
    assert np.allclose(coarse[:, 0], x_c, atol=1e-14)


def test_scalar_problem_smoke_cases():
    strat = WeightingStrategy(r=2, upgrade3=True,
                              mapping=None, eps=1e-40)
    case = run_case("swa1", strat, 40)
    assert not case.blew_up
    assert case.L1 < 0.1
