"""Candidate reconstruction, indicators, and classical weights on single
windows, checked against brute-force oracles."""

from fractions import Fraction

import numpy as np
import pytest

from prmweno.core import candidates, js_weights, reconstruct, smoothness_indicators
from prmweno.tables import SUPPORTED_ORDERS, load_tables

# exact copies of the printed candidate rows for the brute-force oracle
_A3 = [[Fraction(2, 6), Fraction(-7, 6), Fraction(11, 6)],
       [Fraction(-1, 6), Fraction(5, 6), Fraction(2, 6)],
       [Fraction(2, 6), Fraction(5, 6), Fraction(-1, 6)]]
_B3 = [[[1, -4, 3], [1, -2, 1]],
       [[-1, 0, 1], [1, -2, 1]],
       [[3, -4, 1], [1, -2, 1]]]
_C3 = [Fraction(1, 4), Fraction(13, 12)]


def brute_candidates_r3(window):
    vals = [Fraction(v) for v in window]
    return [float(sum(a * vals[k + l] for l, a in enumerate(_A3[k]))) for k in range(3)]


def brute_indicators_r3(window):
    vals = [Fraction(v) for v in window]
    out = []
    for k in range(3):
        acc = Fraction(0)
        for m in range(2):
            inner = sum(_B3[k][m][l] * vals[k + l] for l in range(3))
            acc += _C3[m] * inner * inner
        out.append(float(acc))
    return out


def test_constant_window_consistency():
    for r in SUPPORTED_ORDERS:
        t = load_tables(r)
        w = np.full(2 * r - 1, 3.7)
        assert np.allclose(candidates(w, t), 3.7, atol=1e-14)
        IS = smoothness_indicators(w, t)
        if r == 5:
            # shipped-table defect: the center first-derivative row does not
            # annihilate constants; the symmetric variant does
            assert IS[2] == pytest.approx(3.7 ** 2 / 144.0, rel=1e-12)
            assert np.allclose(np.delete(IS, 2), 0.0, atol=1e-10)
            IS_fixed = smoothness_indicators(w, load_tables(5, "symmetric"))
            assert np.allclose(IS_fixed, 0.0, atol=1e-10)
        else:
            assert np.allclose(IS, 0.0, atol=1e-10)


def test_unit_slope_candidates_r3():
    t = load_tables(3)
    j = 5
    w = np.arange(j - 2, j + 3, dtype=float)
    q = candidates(w, t)
    assert np.allclose(q, j + 0.5, atol=1e-13)


def test_integer_window_candidates_r3_against_oracle():
    t = load_tables(3)
    w = np.array([1.0, 2.0, 4.0, 8.0, 16.0])
    assert np.allclose(candidates(w, t), brute_candidates_r3(w), atol=1e-13)


def test_unit_slope_indicators_r3():
    t = load_tables(3)
    w = np.arange(5, dtype=float)
    assert np.allclose(smoothness_indicators(w, t), 1.0, atol=1e-14)


def test_bump_indicators_r3_against_oracle():
    t = load_tables(3)
    w = np.array([0.0, 0.0, 1.0, 0.0, 0.0])
    IS = smoothness_indicators(w, t)
    assert np.allclose(IS, brute_indicators_r3(w), atol=1e-14)
    assert np.allclose(IS, [10 / 3, 13 / 3, 10 / 3], atol=1e-13)


def test_random_indicators_match_oracle_and_are_nonnegative():
    rng = np.random.default_rng(42)
    t = load_tables(3)
    for _ in range(200):
        w = rng.normal(size=5)
        IS = smoothness_indicators(w, t)
        assert np.allclose(IS, brute_indicators_r3(w), rtol=1e-12, atol=1e-12)
    for r in SUPPORTED_ORDERS:
        t = load_tables(r)
        w = rng.normal(size=(10_000, 2 * r - 1))
        assert (smoothness_indicators(w, t) >= 0).all()


def test_js_weights_properties_and_oracle():
    t = load_tables(3)
    d = t.d
    # equal indicators reproduce the linear weights exactly
    w = js_weights(np.array([2.0, 2.0, 2.0]), d, 1e-6)
    assert np.allclose(w, d, atol=0)
    w = js_weights(np.zeros(3), d, 1e-6)
    assert np.allclose(w, d, atol=0)
    # direct-formula oracle
    IS = np.array([1.0, 0.0, 0.0])
    eps = 1e-6
    alpha = [Fraction(1, 10) / Fraction(eps + 1.0) ** 2,
             Fraction(6, 10) / Fraction(eps) ** 2,
             Fraction(3, 10) / Fraction(eps) ** 2]
    total = sum(alpha)
    w = js_weights(IS, d, eps)
    assert np.allclose(w, [float(a / total) for a in alpha], rtol=1e-12)
    # normalization on random indicator vectors
    rng = np.random.default_rng(7)
    IS = rng.uniform(0, 5, size=(1000, 3))
    w = js_weights(IS, d, 1e-6)
    assert np.abs(w.sum(axis=1) - 1.0).max() < 1e-14
    assert (w >= 0).all()


def test_js_weights_requires_positive_eps():
    with pytest.raises(ValueError):
        js_weights(np.zeros(3), load_tables(3).d, 0.0)


def test_reconstruct_degenerate_and_constant():
    t = load_tables(3)
    w = np.array([1.0, 2.0, 4.0, 8.0, 16.0])
    q = candidates(w, t)
    assert reconstruct(w, np.array([1.0, 0.0, 0.0]), t) == pytest.approx(q[0], rel=1e-14)
    const = np.full(5, -2.2)
    assert reconstruct(const, t.d, t) == pytest.approx(-2.2, rel=1e-14)


def test_linear_weights_reconstruct_quadratic_exactly():
    # samples of x^2 at integers: the combination must equal the deconvolved
    # interface value h(1/2) = 1/4 - 1/12
    t = load_tables(3)
    w = np.array([4.0, 1.0, 0.0, 1.0, 4.0])
    val = reconstruct(w, t.d, t)
    assert val == pytest.approx(0.25 - 1 / 12, abs=1e-14)


def _cell_average(p):
    """Unit-cell sliding average of a polynomial, as a polynomial."""
    P = p.integ()
    xp = np.polynomial.Polynomial([0.5, 1.0])
    xm = np.polynomial.Polynomial([-0.5, 1.0])
    return P(xp) - P(xm)


def _deconvolve(p):
    """Polynomial h whose unit-cell average is p (Neumann iteration; the
    residual operator strictly lowers the degree, so this terminates)."""
    h = p
    for _ in range(p.degree() // 2 + 2):
        h = h + (p - _cell_average(h))
    return h


@pytest.mark.parametrize("r", SUPPORTED_ORDERS)
def test_polynomial_exactness_with_linear_weights(r):
    """Reconstruction with linear weights equals the deconvolved polynomial
    through degree 2r-2, and the flux difference is exact through 2r-1."""
    rng = np.random.default_rng(r)
    t = load_tables(r)
    for _ in range(20):
        deg = 2 * r - 2
        coef = rng.normal(size=deg + 1)
        poly = np.polynomial.Polynomial(coef)
        h = _deconvolve(poly)
        window = poly(np.arange(-r + 1, r, dtype=float))
        val = reconstruct(window, t.d, t)
        assert val == pytest.approx(h(0.5), rel=2e-12, abs=1e-12)
    # degree 2r-1: flux difference reproduces the derivative exactly
    for _ in range(20):
        coef = rng.normal(size=2 * r)
        poly = np.polynomial.Polynomial(coef)
        wr = poly(np.arange(-r + 1, r, dtype=float))
        wl = poly(np.arange(-r, r - 1, dtype=float))
        diff = reconstruct(wr, t.d, t) - reconstruct(wl, t.d, t)
        assert diff == pytest.approx(poly.deriv()(0.0), rel=1e-10, abs=1e-10)


def test_smooth_limit_weights_approach_linear():
    """Classical weights tend to the linear weights as the grid refines when
    the sampled function has no critical point in the window."""
    t = load_tables(3)
    x0 = 0.3  # away from extrema of sin
    prev = None
    for lvl in range(6, 12):
        dx = 2.0 ** -lvl
        w = np.sin(x0 + dx * np.arange(-2, 3))
        IS = smoothness_indicators(w, t)
        om = js_weights(IS, t.d, 1e-40)
        dev = np.abs(om - t.d).max()
        if prev is not None:
            assert dev < 0.6 * prev
        prev = dev
    assert prev < 1e-6
