import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfseries import mfdfa as M
from mfseries import synth
from mfseries.errors import ConfigError, DegeneracyError, InsufficientDataError, WidthUndefinedError
from mfseries.series import shuffle
from mfseries.spectrum import (SingularitySpectrum, compare_surrogate, fit_spectrum, legendre_transform)


def hurst_from_tau(q, tau, fit_range=(8, 64)):
    q = np.asarray(q, float)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = np.where(q == 0, 0.0, (np.asarray(tau) + 1) / q)
    if np.any(q == 0):
        # h(0) is irrelevant to tau(0) = -1; use a neighbour for a finite value
        i = int(np.flatnonzero(q == 0)[0])
        h[i] = h[i + 1] if i + 1 < q.size else h[i - 1]
    z = np.zeros_like(q)
    return M.HurstSpectrum(q, h, z, z, fit_range, np.array([8, 16, 32, 64]))


def spectrum_from_points(alpha, f):
    alpha = np.asarray(alpha, float)
    return SingularitySpectrum(alpha, np.asarray(f, float), np.arange(alpha.size, dtype=float),
                               np.ones(alpha.size, bool))


def test_monofractal_collapses():
    q = M.q_grid(-10, 10, 0.5)
    sp = legendre_transform(hurst_from_tau(q, 0.5 * q - 1))
    np.testing.assert_allclose(sp.alpha, 0.5, atol=1e-12)
    np.testing.assert_allclose(sp.f, 1.0, atol=1e-12)
    cp = fit_spectrum(sp, "quartic")
    assert cp.W == 0.0 and cp.alpha0 == pytest.approx(0.5)


@pytest.mark.parametrize("H, lam", [(0.6, 0.02), (0.8, 0.05), (0.5, 0.001)])
def test_quadratic_tau_closed_form(H, lam):
    q = M.q_grid(-5, 5, 0.5)
    sp = legendre_transform(hurst_from_tau(q, H * q - lam * q**2 / 2 - 1))
    inner = slice(1, -1)
    np.testing.assert_allclose(sp.alpha[inner], H - lam * q[inner], atol=1e-12)
    np.testing.assert_allclose(sp.f[inner], 1 - (sp.alpha[inner] - H) ** 2 / (2 * lam), atol=1e-12)
    assert sp.valid.all()


def test_weak_multifractal_width_small():
    q = M.q_grid(-10, 10, 0.5)
    sp = legendre_transform(hurst_from_tau(q, 0.5 * q - 0.001 * q**2 / 2 - 1))
    cp = fit_spectrum(sp, "quadratic")
    assert cp.W < 0.1
    assert cp.W == pytest.approx(2 * np.sqrt(2 * 0.001), rel=1e-3)


def test_legendre_consistency_on_cascade():
    q = M.q_grid(-5, 5, 0.5)
    tau = synth.cascade_tau(q, 0.6)
    sp = legendre_transform(hurst_from_tau(q, tau))
    # q alpha - f reproduces tau at interior points; error O(dq^2) from the central differences
    back = q * sp.alpha - sp.f
    np.testing.assert_allclose(back, tau, atol=1e-12)
    exact_alpha = np.gradient(tau, q)
    d3 = np.max(np.abs(np.gradient(np.gradient(exact_alpha, q), q)))
    true_alpha = -(0.6**q * np.log(0.6) + 0.4**q * np.log(0.4)) / ((0.6**q + 0.4**q) * np.log(2))
    assert np.max(np.abs(sp.alpha[1:-1] - true_alpha[1:-1])) <= d3 * 0.25 / 6 * 1.5 + 1e-12


def test_cascade_peak():
    q = M.q_grid(-5, 5, 0.5)
    sp = legendre_transform(hurst_from_tau(q, synth.cascade_tau(q, 0.6)))
    i = int(np.argmax(sp.f))
    assert sp.f[i] == pytest.approx(1.0, abs=1e-12)
    assert sp.alpha[i] == pytest.approx(synth.cascade_alpha0(0.6), abs=0.05)


def test_nonmonotone_points_flagged_not_dropped():
    q = M.q_grid(-3, 3, 0.5)
    tau = 0.6 * q - 0.02 * q**2 - 1
    tau[3] += 0.05  # kink
    sp = legendre_transform(hurst_from_tau(q, tau))
    assert len(sp) == q.size
    assert not sp.valid.all() and sp.valid.sum() >= q.size - 4


def test_legendre_needs_three_points():
    with pytest.raises(InsufficientDataError):
        legendre_transform(hurst_from_tau([0.0, 1.0], [-1.0, 0.0]))


def test_legendre_all_nonmonotone():
    q = np.array([-1.0, 0.0, 1.0])
    with pytest.raises(DegeneracyError):
        legendre_transform(hurst_from_tau(q, np.array([-0.5, -1.0, 0.0]) + q**2))


def test_symmetric_parabola():
    a = np.linspace(0.2, 1.0, 17)
    cp = fit_spectrum(spectrum_from_points(a, 1 - 4 * (a - 0.6) ** 2), "quadratic")
    assert cp.alpha0 == pytest.approx(0.6, abs=1e-9)
    assert cp.W == pytest.approx(1.0, abs=1e-9)
    assert cp.r == pytest.approx(1.0, abs=1e-9)
    assert cp.B == pytest.approx(0.0, abs=1e-9)
    assert (cp.alpha_min, cp.alpha_max) == pytest.approx((0.1, 1.1), abs=1e-9)


def planted_quartic(a0=0.55, A=1.0, C=-6.0, D=4.0, E=-9.0):
    a = np.linspace(a0 - 0.3, a0 + 0.35, 25)
    d = a - a0
    return a, A + C * d**2 + D * d**3 + E * d**4


def test_quartic_recovery():
    a, f = planted_quartic()
    cp = fit_spectrum(spectrum_from_points(a, f), "quartic")
    np.testing.assert_allclose(cp.coefficients, (1.0, 0.0, -6.0, 4.0, -9.0), atol=1e-9)
    assert cp.alpha0 == pytest.approx(0.55, abs=1e-9)
    assert cp.D == pytest.approx(4.0, abs=1e-9)


def _true_roots(a0, coef):
    A, B, C, D, E = coef
    roots = np.roots([E, D, C, B, A])
    roots = roots[np.abs(roots.imag) < 1e-12].real + a0
    return roots[roots < a0].max(), roots[roots > a0].min()


@given(st.floats(-8.0, 8.0), st.floats(-12.0, -1.0))
@settings(max_examples=40, deadline=None)
def test_skew_ratio_sign(D, E):
    a0, C = 0.6, -5.0
    a = np.linspace(a0 - 0.25, a0 + 0.25, 21)
    d = a - a0
    f = 1.0 + C * d**2 + D * d**3 + E * d**4
    try:
        cp = fit_spectrum(spectrum_from_points(a, f), "quartic")
    except WidthUndefinedError:
        return
    lo, hi = _true_roots(a0, (1.0, 0.0, C, D, E))
    assert (cp.alpha_min, cp.alpha_max) == pytest.approx((lo, hi), abs=1e-8)
    if abs((hi - a0) - (a0 - lo)) > 1e-6:
        assert (cp.r > 1) == ((hi - a0) > (a0 - lo))
    else:
        assert cp.r == pytest.approx(1.0, abs=1e-6)


def test_four_real_roots_takes_nearest():
    # quartic with zeros at 0.2, 0.4, 0.8, 1.1, positive between 0.4 and 0.8
    a = np.linspace(0.45, 0.75, 13)
    f = np.prod([a - r for r in (0.2, 0.4, 0.8, 1.1)], axis=0) * 50
    cp = fit_spectrum(spectrum_from_points(a, f), "quartic")
    assert cp.alpha_min == pytest.approx(0.4, abs=1e-9)
    assert cp.alpha_max == pytest.approx(0.8, abs=1e-9)


def test_width_undefined_carries_partial():
    a = np.linspace(0.4, 0.6, 11)
    with pytest.raises(WidthUndefinedError) as e:
        fit_spectrum(spectrum_from_points(a, 1 - 0.01 * (a - 0.5) ** 2), "quadratic")
    assert e.value.partial.alpha0 == pytest.approx(0.5, abs=1e-9)
    assert np.isnan(e.value.partial.W)


def test_center_q0_gives_asymmetry_coefficient():
    a = np.linspace(0.2, 1.0, 17)
    f = 1 - 4 * (a - 0.6) ** 2
    sp = SingularitySpectrum(a, f, np.linspace(-4, 4, 17), np.ones(17, bool))
    cp = fit_spectrum(sp, "quadratic", center="q0")
    assert cp.alpha0 == pytest.approx(0.6)
    a_shift = a + 0.05
    sp = SingularitySpectrum(a_shift, f, np.linspace(-4, 4, 17) - 0.5, np.ones(17, bool))
    cp = fit_spectrum(sp, "quadratic", center="q0")
    assert cp.B != pytest.approx(0.0, abs=1e-3)


def test_fit_spectrum_point_counts():
    a = np.linspace(0.2, 1.0, 6)
    sp = spectrum_from_points(a, 1 - 4 * (a - 0.6) ** 2)
    fit_spectrum(sp, "quadratic")
    with pytest.raises(InsufficientDataError):
        fit_spectrum(sp, "quartic")
    with pytest.raises(ConfigError):
        fit_spectrum(sp, "cubic")


def _hs(h, q=None, fit_range=(16, 1024)):
    q = M.q_grid(-2, 2, 1.0) if q is None else q
    h = np.broadcast_to(np.asarray(h, float), q.shape).copy()
    z = np.zeros_like(q)
    return M.HurstSpectrum(q, h, z, z, fit_range, np.array([16, 64, 256, 1024]))


def test_compare_self_is_fat_tail():
    hs = _hs([0.6, 0.55, 0.5, 0.45, 0.4])
    res = compare_surrogate((None, hs), (None, hs))
    assert res.mean_abs_delta_h == 0.0 and res.attribution == "fat-tail-dominated"
    np.testing.assert_array_equal(res.delta_h, 0.0)


@pytest.mark.parametrize("gap, verdict", [(0.2, "correlation-dominated"), (0.05, "mixed"),
                                          (0.01, "fat-tail-dominated")])
def test_compare_thresholds(gap, verdict):
    assert compare_surrogate((None, _hs(0.5 + gap)), (None, _hs(0.5))).attribution == verdict


def test_compare_incompatible():
    with pytest.raises(ConfigError):
        compare_surrogate((None, _hs(0.5)), (None, _hs(0.5, q=M.q_grid(-3, 3, 1.0))))
    with pytest.raises(ConfigError):
        compare_surrogate((None, _hs(0.5)), (None, _hs(0.5, fit_range=(10, 100))))


def test_fgn_vs_shuffle_correlation_dominated():
    n = 2**14
    g = M.GridSpec.default(n)
    x = synth.fgn(n, 0.8, 21)
    _, ho = M.mfdfa(x, g, (16, 1024))
    _, hsh = M.mfdfa(shuffle(x, 5), g, (16, 1024))
    res = compare_surrogate((None, ho), (None, hsh))
    assert res.attribution == "correlation-dominated"
    d2 = ho.h_at(2) - hsh.h_at(2)
    assert d2 == pytest.approx(0.3, abs=0.07)


@pytest.mark.parametrize("seed", range(3))
def test_student_t_vs_shuffle_fat_tail(seed):
    n = 2**14
    g = M.GridSpec(M.q_grid(-5, 5, 0.5), M.log_scales(6, n // 5), 2)
    x = np.random.default_rng(seed).standard_t(3, n)
    _, ho = M.mfdfa(x, g, (16, 1024))
    _, hsh = M.mfdfa(shuffle(x, seed + 100), g, (16, 1024))
    res = compare_surrogate((None, ho), (None, hsh))
    assert abs(ho.h_at(2) - hsh.h_at(2)) < 0.05
    assert res.attribution == "fat-tail-dominated"
