"""Mapping families: fixed points, monotonicity, equivalences, parameter
tables, singularity detection, and the symmetry transform."""

from fractions import Fraction

import numpy as np
import pytest

from prmweno import mappings as mp
from prmweno.tables import load_tables

ALL_DKS = [dk for r in (2, 3, 4, 5) for dk in mp._D_BY_R[r]]


def production_specs():
    """Every production parameter set, labeled."""
    out = []
    for r in (2, 3, 4):
        out += [(f"prm-r{r}-k{k}", s) for k, s in enumerate(mp.production_prm_specs(r))]
    for v in ("r322", "mimic_pm", "mimic_rm"):
        out += [(f"{v}-{k}", s) for k, s in enumerate(mp.comparative_specs(v))]
    for dk in mp._D_BY_R[3]:
        out.append((f"gm-{dk:.2f}", mp.gm_spec(dk)))
        out.append((f"pm61-{dk:.2f}", mp.pm_spec(6, dk)))
        out.append((f"im-{dk:.2f}", mp.im_spec(2, 0.1, dk)))
        out.append((f"rm260-{dk:.2f}", mp.rm_spec(6, 2, dk)))
        out.append((f"aim-{dk:.2f}", mp.aim_spec(4, 2, 1e4, dk)))
    for n in (1, 2, 4, 6):
        for m in (0, 1, 2, 3):
            for dk in (0.1, 0.6):
                out.append((f"ppm{n}{m}-{dk}", mp.ppm_spec(n, m, dk)))
    return out


def test_fixed_points_all_families_all_weights():
    for dk in ALL_DKS:
        specs = [mp.gm_spec(dk), mp.pm_spec(6, dk), mp.ppm_spec(4, 2, dk),
                 mp.im_spec(2, 0.1, dk), mp.rm_spec(6, 2, dk),
                 mp.aim_spec(4, 2, 1e4, dk), mp.identity_spec(dk),
                 mp.prm_spec(2, 2, dk, 1.0, 1e5, 6, 1.0, 1e5, 6)]
        for spec in specs:
            assert abs(mp.eval_mapping(spec, 0.0)) <= 1e-12
            assert abs(mp.eval_mapping(spec, dk) - dk) <= 1e-12
            assert abs(mp.eval_mapping(spec, 1.0) - 1.0) <= 1e-12


@pytest.mark.parametrize("label,spec", production_specs())
def test_production_specs_monotone_and_fixed(label, spec):
    w = np.linspace(0.0, 1.0, 10_001)
    g = mp.eval_mapping(spec, w)
    assert (np.diff(g) >= -1e-12).all(), label
    assert abs(g[0]) <= 1e-12 and abs(g[-1] - 1.0) <= 1e-12
    assert (g >= -1e-12).all() and (g <= 1.0 + 1e-12).all()


def test_gm_closed_form_oracle():
    # independent rational-arithmetic evaluation of the printed closed form
    dk = Fraction(3, 10)
    w = Fraction(1, 2)
    num = w * (w * w - 3 * dk * w + (dk + 1) * dk)
    den = (1 - 2 * dk) * w + dk * dk
    expected = float(num / den)
    assert mp.eval_mapping(mp.gm_spec(0.3), 0.5) == pytest.approx(expected, rel=1e-15)
    assert expected == pytest.approx(19 / 58)


def test_prm_left_branch_fraction_oracle():
    # independent evaluation of the absorbed left-branch formula at
    # n=m=2, dk=6/10, c1=1, c2=6e5, m1=6, omega=0.3
    dk, c1, c2, m1, n = Fraction(6, 10), Fraction(1), Fraction(600000), 6, 2
    w = Fraction(3, 10)
    t = w - dk
    den = t ** n - c2 * t * w ** m1 + c1 * w ** (n + 1)
    expected = float(dk + t ** (n + 1) / den)
    spec = mp.production_prm_specs(3)[1]
    assert spec.dk == pytest.approx(0.6)
    got = mp.eval_mapping(spec, 0.3)
    assert got == pytest.approx(expected, rel=1e-14)


def test_im_reduces_to_gm():
    for dk in mp._D_BY_R[3]:
        w = np.linspace(0.0, 1.0, 1001)
        a = mp.eval_mapping(mp.im_spec(2, 1.0, dk), w)
        b = mp.eval_mapping(mp.gm_spec(dk), w)
        assert np.abs(a - b).max() <= 1e-12


def test_r_family_with_matched_b_reproduces_gm_on_right_branch():
    for dk in mp._D_BY_R[3]:
        spec = mp.r_spec(2, 0, dk, b=1.0 - 2.0 * dk)
        w = np.linspace(dk, 1.0, 20)
        a = mp.eval_mapping(spec, w)
        b = mp.eval_mapping(mp.gm_spec(dk), w)
        assert np.abs(a - b).max() <= 1e-12


def test_left_from_right_transform():
    dk = 0.3
    # identity is a fixed point of the transform
    gl = mp.left_from_right(lambda w: w, dk)
    w = np.linspace(0.0, dk, 50)
    assert np.abs(gl(w) - w).max() <= 1e-15
    # endpoint algebra for an arbitrary admissible right branch
    spec = mp.rm_spec(6, 2, dk)
    gr = lambda x: mp.eval_mapping(spec, x)
    gl = mp.left_from_right(gr, dk)
    assert gl(0.0) == pytest.approx(0.0, abs=1e-14)
    assert gl(dk) == pytest.approx(dk, abs=1e-14)


def test_prm_general_left_branch_equals_transform():
    for n, m, n1, m1, c1, c2 in ((2, 2, 1, 6, 1.0, 6e5), (3, 3, 1, 5, 1.0, 3e4),
                                 (2, 1, 2, 4, 2.0, 100.0), (1, 1, 1, 4, 1.0, 100.0)):
        for dk in (0.1, 0.6, 18 / 35):
            spec = mp.prm_general_spec(n, m, n1, m1, c1, c2, dk)
            gr = lambda w: dk + mp.deviation_at_dk(spec, np.asarray(w) - dk)
            gl = mp.left_from_right(gr, dk)
            w = np.linspace(1e-9, dk - 1e-9, 100)
            assert np.abs(mp.eval_mapping(spec, w) - gl(w)).max() <= 1e-12


def test_map_weights_fixed_points_and_identity():
    specs = mp.production_prm_specs(3)
    d = load_tables(3).d
    assert np.allclose(mp.map_weights(d, specs), d, atol=1e-14)
    ident = [mp.identity_spec(dk) for dk in mp._D_BY_R[3]]
    w = np.array([0.2, 0.5, 0.3])
    assert np.allclose(mp.map_weights(w, ident), w, atol=1e-15)


def test_map_weights_dual_implementation_oracle():
    from prmweno.core import js_weights
    t = load_tables(3)
    om = js_weights(np.array([1.0, 0.0, 0.0]), t.d, 1e-40)
    specs = mp.production_prm_specs(3)
    got = mp.map_weights(om, specs)
    # independent elementwise evaluation through the deviation form
    alt = np.array([spec.dk + mp.deviation_at_dk(spec, om[k] - spec.dk)
                    for k, spec in enumerate(specs)])
    alt = alt / alt.sum()
    assert np.allclose(got, alt, rtol=1e-14)
    assert got.sum() == pytest.approx(1.0, abs=1e-14)


def test_argmax_preserved_under_a_common_monotone_mapping():
    rng = np.random.default_rng(11)
    spec = mp.production_prm_specs(3)[2]
    specs = (spec, spec, spec)
    for _ in range(10_000):
        w = rng.dirichlet(np.ones(3))
        mapped = mp.map_weights(w, specs)
        assert np.argmax(mapped) == np.argmax(w)


def test_aim_scale_cases():
    # equal indicators: ratio one
    s = mp.aim_scale(np.array([2.0, 2.0, 2.0]), 0.3, 1e4, 1e-3)
    assert s == pytest.approx(1e4 / 0.3, rel=1e-6)
    # a vanishing indicator collapses the scale
    assert mp.aim_scale(np.array([0.0, 1.0, 1.0]), 0.3, 1e4, 1e-3) == 0.0
    # hand-evaluated case
    s = mp.aim_scale(np.array([1.0, 2.0, 4.0]), 18 / 35, 1e4, 0.01)
    lam = 1.0 / (4.0 + 1e-14)
    assert s == pytest.approx(1e4 * 35 / 18 * lam, rel=1e-12)
    # grouped variant takes the smaller ratio
    s = mp.aim_scale(np.array([1.0, 2.0, 4.0]), 0.5, 10.0, 0.01,
                     grouped=True, IS_other=np.array([1.0, 100.0, 1.0]))
    assert s == pytest.approx(10.0 / 0.5 * (1.0 / 100.0), rel=1e-8)


def test_production_set_values_and_errors():
    specs = mp.production_prm_specs(3)
    s1 = specs[1]
    assert (s1.c1L, s1.c2L, s1.m1L) == (1.0, 6e5, 6)
    assert (s1.c1R, s1.c2R, s1.m1R) == (1.0, 6e7, 6)
    assert (s1.n, s1.m, s1.n1) == (2, 2, 1)
    s0 = mp.production_prm_specs(2)[0]
    assert (s0.c1L, s0.c2L, s0.m1L) == (1.0, 7e7, 5)
    s3 = mp.production_prm_specs(4)[3]
    assert (s3.c1R, s3.c2R, s3.m1R) == (1.0, 5e2, 4)
    with pytest.raises(mp.MappingError):
        mp.production_prm_specs(5)
    for r in (2, 3, 4):
        for spec in mp.production_prm_specs(r):
            assert mp.check_singularity_free(spec)


def test_comparative_set_values():
    r322 = mp.comparative_specs("r322")
    assert r322[0].c2L == pytest.approx(30090.0)
    assert r322[0].dk == pytest.approx(0.1)
    mimic_pm = mp.comparative_specs("mimic_pm")[0]
    assert (mimic_pm.c1L, mimic_pm.c2L, mimic_pm.m1L) == (26.0, 13.0, 2)
    mimic_rm = mp.comparative_specs("mimic_rm")[0]
    assert (mimic_rm.c1L, mimic_rm.c2L, mimic_rm.m1L) == (1.0, 7500.0, 5)
    for spec in mp.comparative_specs("mimic_pm") + mp.comparative_specs("mimic_rm"):
        assert mp.check_singularity_free(spec)


def test_singularity_detection():
    # ill-defined odd-order construction at the center linear weight
    assert not mp.check_singularity_free(mp.rm_spec(6, 1, 0.6))
    # direct-coefficient recipe inside the tabulated range is regular
    assert mp.check_singularity_free(mp.r_spec(2, 2, 0.3, c2L=5.0, c2R=5.0))
    # an out-of-range b is rejected at construction
    with pytest.raises(mp.MappingError):
        mp.r_spec(2, 0, 0.5, b=2.0)
    with pytest.raises(mp.MappingError):
        mp.r_spec(1, 1, 0.5, b=-0.5)


def test_invalid_parameters_rejected():
    with pytest.raises(mp.MappingError):
        mp.prm_spec(2, 2, 0.3, -1.0, 1e5, 6, 1.0, 1e5, 6)   # negative c1
    with pytest.raises(mp.MappingError):
        mp.prm_spec(2, 3, 0.3, 1.0, 1e5, 6, 1.0, 1e5, 6)    # m > n
    with pytest.raises(mp.MappingError):
        mp.MappingSpec("nope", 0.3)
    with pytest.raises(mp.MappingError):
        mp.im_spec(2, -0.1, 0.3)
    with pytest.raises(mp.MappingError):
        mp.MappingSpec("gm", 1.5)


def test_eval_clamps_out_of_range_inputs():
    spec = mp.gm_spec(0.3)
    assert mp.eval_mapping(spec, -1e-15) == pytest.approx(0.0, abs=1e-14)
    assert mp.eval_mapping(spec, 1.0 + 1e-15) == pytest.approx(1.0, abs=1e-13)
