import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mfseries import mfdfa as M
from mfseries import synth
from mfseries.errors import ConfigError, DataError, DegeneracyError, InsufficientDataError
from mfseries.series import profile, shuffle


def f2_oracle(y, s, m):
    """Loop over the 2 N_s segments with numpy.polyfit on the raw index."""
    n = len(y)
    ns = n // s
    out = []
    starts = [p * s for p in range(ns)] + [n - (p + 1) * s for p in range(ns)]
    for a in starts:
        seg = y[a:a + s]
        i = np.arange(1, s + 1, dtype=float)
        fit = np.polyval(np.polyfit(i, seg, m), i)
        out.append(np.mean((seg - fit) ** 2))
    return np.array(out)


def fq_oracle(f2, q):
    if q == 0:
        return np.exp(np.sum(np.log(f2)) / (2 * f2.size))
    return np.mean(f2 ** (q / 2)) ** (1 / q)


def test_segment_layout_n10_s3():
    y = np.arange(1.0, 11.0) ** 3  # cubic: order-1 residuals are informative
    segs = M._segments(y, 3)
    assert segs.shape == (6, 3)
    covered_fwd = np.concatenate(segs[:3])
    covered_bwd = np.concatenate(segs[3:][::-1])
    np.testing.assert_array_equal(covered_fwd, y[0:9])   # i = 1..9
    np.testing.assert_array_equal(covered_bwd, y[1:10])  # i = 2..10
    assert M.segment_variances(y, 3, 1).size == 6


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("s", [5, 8, 13, 40])
def test_segment_variances_vs_polyfit(m, s):
    if s < m + 2:
        pytest.skip("scale below m + 2")
    y = profile(synth.gaussian_white(517, s * 10 + m)).cumulative
    np.testing.assert_allclose(M.segment_variances(y, s, m), f2_oracle(y, s, m), rtol=1e-8, atol=1e-14)


def test_quadratic_profile_annihilated():
    i = np.arange(1.0, 201.0)
    y = 3.0 - 0.2 * i + 0.01 * i**2
    assert np.all(M.segment_variances(y, 10, 2) < 1e-20)


def test_white_noise_variance_grows_linearly():
    # random-walk profile: <F^2(s)> ~ s^(2 h(2)) with h(2) = 1/2
    slopes = []
    for seed in range(5):
        y = profile(synth.gaussian_white(2**14, seed))
        sc = np.array([16, 32, 64, 128, 256, 512])
        f2 = [M.segment_variances(y, s, 2).mean() for s in sc]
        slopes.append(np.polyfit(np.log(sc), np.log(f2), 1)[0])
    assert np.mean(slopes) == pytest.approx(1.0, abs=0.1)


def test_scale_below_minimum():
    with pytest.raises(ConfigError):
        M.segment_variances(np.arange(50.0), 3, 2)
    with pytest.raises(ConfigError):
        M.GridSpec([0.0], [3, 10], 2)


def test_grid_rejects_large_scale():
    g = M.GridSpec([1.0, 2.0], [10, 30], 2)
    with pytest.raises(ConfigError):
        M.fluctuation_surface(np.arange(100.0), g)


def test_default_grid():
    g = M.GridSpec.default(7000)
    assert g.q_values[0] == -10 and g.q_values[-1] == 10 and g.q_values.size == 41
    assert 0.0 in g.q_values and 2.0 in g.q_values
    assert g.scales[0] == 6 and g.scales[-1] == 1400
    assert 25 <= g.scales.size <= 30
    assert np.all(np.diff(g.scales) > 0)


def test_q_grid_rejects_uneven():
    with pytest.raises(ConfigError):
        M.q_grid(-1, 1, 0.3)


def test_surface_matches_oracle():
    x = synth.pareto(3000, 2.5, 1)
    g = M.GridSpec(M.q_grid(-4, 4, 1.0), [8, 17, 50, 300], 2)
    surf = M.fluctuation_surface(profile(x), g)
    y = profile(x).cumulative
    for j, s in enumerate(g.scales):
        f2 = f2_oracle(y, s, 2)
        for i, q in enumerate(g.q_values):
            assert surf.values[i, j] == pytest.approx(fq_oracle(f2, q), rel=1e-8)
        assert surf.n_segments[j] == 2 * (3000 // s)


def test_generalized_mean_of_constant():
    v = 0.37
    out = M._generalized_mean(np.full(12, v), np.array([-10, -3, 0, 0.5, 2, 10.0]))
    np.testing.assert_allclose(out, np.sqrt(v), rtol=1e-14)


def test_q2_is_rms():
    f2 = np.random.default_rng(0).random(30)
    assert M._generalized_mean(f2, np.array([2.0]))[0] == pytest.approx(np.sqrt(f2.mean()), rel=1e-14)


@given(arrays(np.float64, st.integers(64, 300), elements=st.floats(-10, 10)))
@settings(max_examples=40, deadline=None)
def test_moment_monotonicity(x):
    if np.ptp(x) < 1e-3:
        return
    g = M.GridSpec(M.q_grid(-10, 10, 0.5), [5, 8, 16], 2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        try:
            surf = M.fluctuation_surface(x, g)
        except DegeneracyError:
            return
    assert np.all(np.diff(np.log(surf.values), axis=0) >= -1e-12)


def test_degenerate_segments_floored_and_flagged():
    # first 40 points of the profile are exactly quadratic -> zero residual in those segments
    x = np.concatenate([np.zeros(40), synth.gaussian_white(160, 1)])
    g = M.GridSpec(np.array([-2.0, 0.0, 2.0]), [10, 20], 2)
    with pytest.warns(RuntimeWarning, match="floored"):
        surf = M.fluctuation_surface(x, g)
    assert surf.flags[:2].all() and not surf.flags[2].any()
    assert np.all(np.isfinite(surf.values))


def test_all_zero_segments_raise():
    i = np.arange(200.0)
    with pytest.raises(DegeneracyError, match="s = 10"):
        M.fluctuation_surface(0.5 + 0.1 * i, M.GridSpec([1.0], [10, 20], 2))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_polynomial_trend_annihilation(m):
    # a degree m-1 trend in the series is a degree m trend in the profile
    n = 4096
    x = synth.gaussian_white(n, m)
    t = np.arange(n) / n
    trend = sum((0.7 * (-1) ** k) * t**k for k in range(m))
    g = M.GridSpec(M.q_grid(-5, 5, 1.0), M.log_scales(m + 2, n // 5, 20), m)
    a = M.fluctuation_surface(x, g).values
    b = M.fluctuation_surface(x + 3.0 * trend, g).values
    np.testing.assert_allclose(b, a, rtol=1e-6)


def test_per_scale_computation_bit_identical():
    x = synth.fgn(4096, 0.6, 3)
    g = M.GridSpec.default(4096)
    full = M.fluctuation_surface(x, g).values
    for j, s in enumerate(g.scales):
        one = M.fluctuation_surface(x, M.GridSpec(g.q_values, [s], 2)).values[:, 0]
        assert one.tobytes() == full[:, j].tobytes()


def _power_surface(h, c=2.5, q=None, scales=None):
    q = M.q_grid(-3, 3, 0.5) if q is None else q
    scales = np.array([8, 12, 20, 33, 60, 100, 170]) if scales is None else scales
    g = M.GridSpec(q, scales, 2)
    vals = c * np.broadcast_to(scales.astype(float) ** np.reshape(h, (-1, 1)), (q.size, scales.size))
    return M.FluctuationSurface(g, vals, np.zeros(scales.size, int), np.zeros(vals.shape, bool))


def test_fit_exact_power_law():
    hs = M.fit_hurst(_power_surface(0.7))
    np.testing.assert_allclose(hs.h, 0.7, atol=1e-9)
    np.testing.assert_allclose(hs.stderr, 0.0, atol=1e-9)
    np.testing.assert_allclose(np.exp(hs.intercept), 2.5, rtol=1e-9)


def test_fit_range_selection_and_identities():
    q = M.q_grid(-3, 3, 0.5)
    hq = 0.6 + 0.05 * np.tanh(q)
    hs = M.fit_hurst(_power_surface(hq, q=q), (12, 100))
    assert list(hs.scales_used) == [12, 20, 33, 60, 100]
    np.testing.assert_allclose(hs.h, hq, atol=1e-9)
    assert hs.tau[q == 0][0] == -1.0
    h2 = hs.h_at(2.0)
    assert hs.gamma == 2 - 2 * h2
    assert hs.beta == 2 * h2 - 1
    np.testing.assert_array_equal(hs.tau, q * hs.h - 1)


def test_fit_insufficient_scales():
    with pytest.raises(InsufficientDataError):
        M.fit_hurst(_power_surface(0.5), (8, 20))


def test_gamma_nan_without_q2():
    hs = M.fit_hurst(_power_surface(0.5, q=np.array([-1.0, 0.0, 1.0])))
    assert np.isnan(hs.gamma) and np.isnan(hs.beta)


def test_partition_uniform_measure():
    q = np.array([-3, -1, 0, 1, 2, 4.0])
    pt = M.partition_tau(np.full(1024, 1 / 1024), 2 ** np.arange(1, 9), q)
    np.testing.assert_allclose(pt.tau, q - 1, atol=1e-10)


def test_partition_tau1_zero_for_any_measure():
    x = np.random.default_rng(1).random(999)
    pt = M.partition_tau(x, [3, 9, 27, 111, 333], [1.0])
    assert abs(pt.tau[0]) < 1e-10


def test_partition_cascade_closed_form():
    q = np.arange(-5, 5.5, 0.5)
    for randomize in (False, True):
        x = synth.binomial_cascade(2**14, 0.6, seed=2, randomize=randomize)
        pt = M.partition_tau(x, 2 ** np.arange(0, 12), q)
        np.testing.assert_allclose(pt.tau, synth.cascade_tau(q, 0.6), atol=1e-9)


def test_partition_excludes_empty_boxes_for_negative_q():
    x = np.ones(256)
    x[:16] = 0.0
    pt = M.partition_tau(x, [4, 8, 16], [-2.0, 2.0])
    assert np.all(np.isfinite(pt.tau))
    with pytest.raises(DataError):
        M.partition_tau(-x, [4, 8], [1.0])
    with pytest.raises(DegeneracyError):
        M.partition_tau(np.zeros(64), [4, 8], [1.0])


def test_shuffled_long_memory_collapses_to_half():
    n = 2**14
    g = M.GridSpec.default(n)
    h2 = [M.mfdfa(shuffle(synth.fgn(n, 0.8, s), 1000 + s), g, (16, 1024))[1].h_at(2) for s in range(10)]
    assert abs(np.mean(h2) - 0.5) < 0.05


def test_mfdfa_hurst_tau_matches_partition_oracle(cascade, dyadic_grid):
    _, hs = M.mfdfa(cascade, dyadic_grid)
    q = dyadic_grid.q_values
    pt = M.partition_tau(cascade, 2 ** np.arange(3, 13), q)
    sel = np.isin(q, [-5, -3, -1, 1, 3, 5])
    np.testing.assert_allclose(hs.tau[sel], pt.tau[sel], atol=0.1)
    np.testing.assert_allclose(hs.h[sel], synth.cascade_hurst(q[sel], 0.6), atol=0.05)
