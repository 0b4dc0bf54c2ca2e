import math

import numpy as np
import pytest

from superres.bounds import diffraction_limit
from superres.detect import detect_1d
from superres.model import (draw_noise, fourier_transform, measure_1d,
                            synthesize, uniform_grid_1d)
from superres.oracle import (best_one_source_fit, empirical_two_point_limit,
                             one_source_admissible, sup_residual,
                             worst_case_noise)

OMEGA = 1.0
GRID = uniform_grid_1d(OMEGA, 513)


def _pair(d, m=1.0, phase=0.0, center=0.0):
    amp = m * np.exp(1j * phase)
    return measure_1d([center - d / 2, center + d / 2], [amp, amp])


def test_fit_recovers_single_source():
    mu = measure_1d([0.9], [1.7 * np.exp(0.3j)])
    fit = best_one_source_fit(synthesize(mu, GRID, OMEGA))
    assert fit.residual < 1e-6
    assert fit.amplitude == pytest.approx(1.7, abs=1e-6)
    assert fit.location == pytest.approx(0.9, abs=1e-5)
    wrap = (fit.phase - 0.3) % (2 * np.pi)
    assert min(wrap, 2 * np.pi - wrap) < 1e-5


def test_fit_matches_symmetric_pair_closed_form():
    # residual 2 m sin^2(d Omega / 4), attained near yhat = 0 with
    # a = m (1 + cos(d Omega / 2))
    for d in (0.5, 1.0, 2.0):
        m = 1.3
        fit = best_one_source_fit(synthesize(_pair(d, m), GRID, OMEGA))
        assert fit.residual == pytest.approx(2 * m * np.sin(d * OMEGA / 4) ** 2,
                                             rel=1e-6)
        assert fit.location == pytest.approx(0.0, abs=1e-6)
        assert fit.amplitude == pytest.approx(m * (1 + np.cos(d * OMEGA / 2)),
                                              rel=1e-6)
    fit = best_one_source_fit(synthesize(_pair(np.pi), GRID, OMEGA))
    assert fit.residual == pytest.approx(1.0, rel=1e-6)


def test_fit_residual_is_reported_sup():
    mu = measure_1d([-0.7, 0.4], [1.0, 0.8 * np.exp(1.1j)])
    meas = synthesize(mu, GRID, OMEGA)
    fit = best_one_source_fit(meas)
    assert fit.residual == pytest.approx(
        sup_residual(meas, fit.amplitude, fit.phase, fit.location), rel=1e-12)


def test_sup_residual_convex_in_amplitude():
    rng = np.random.default_rng(0)
    mu = measure_1d([-0.5, 0.6], [1.0, 1.2])
    meas = synthesize(mu, GRID, OMEGA)
    for _ in range(100):
        gamma = rng.uniform(0, 2 * np.pi)
        yhat = rng.uniform(-2, 2)
        a1, a2 = np.sort(rng.uniform(0, 4, size=2))
        t = rng.uniform()
        mid = t * a1 + (1 - t) * a2
        f1 = sup_residual(meas, a1, gamma, yhat)
        f2 = sup_residual(meas, a2, gamma, yhat)
        fm = sup_residual(meas, mid, gamma, yhat)
        assert fm <= t * f1 + (1 - t) * f2 + 1e-12


def _grid_search_fit(meas, n_y=41, n_g=48, n_a=60):
    """Independent brute-force oracle: (yhat, gamma) grid + amplitude line search."""
    om = meas.omega_1d()
    best = math.inf
    for yhat in np.linspace(-2 * np.pi / meas.cutoff, 2 * np.pi / meas.cutoff, n_y):
        rot = meas.values * np.exp(-1j * yhat * om)
        for gamma in np.linspace(0, 2 * np.pi, n_g, endpoint=False):
            proj = rot * np.exp(-1j * gamma)
            amax = np.abs(meas.values).max() * 1.5
            lo, hi = 0.0, 3 * amax
            for _ in range(n_a):
                m1 = lo + (hi - lo) / 3
                m2 = hi - (hi - lo) / 3
                f1 = np.abs(m1 - proj).max()
                f2 = np.abs(m2 - proj).max()
                if f1 <= f2:
                    hi = m2
                else:
                    lo = m1
            a = 0.5 * (lo + hi)
            best = min(best, float(np.abs(a - proj).max()))
    return best


def test_fit_beats_independent_grid_search():
    rng = np.random.default_rng(1)
    coarse = uniform_grid_1d(OMEGA, 65)
    for _ in range(5):
        d = rng.uniform(0.3, 2.5)
        a2 = rng.uniform(1.0, 2.0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        mu = measure_1d([-d / 2, d / 2], [1.0, a2])
        meas = synthesize(mu, coarse, OMEGA)
        fit = best_one_source_fit(meas)
        assert fit.residual <= _grid_search_fit(meas) + 1e-9


def test_admissibility_around_the_limit():
    sigma = 0.1
    limit = diffraction_limit(OMEGA, sigma)
    assert one_source_admissible(_pair(0.95 * limit), sigma, GRID)
    assert not one_source_admissible(_pair(1.05 * limit), sigma, GRID)


def test_admissibility_trivial_above_half_ratio():
    # sigma/m > 1/2: the construction w = m e^{i y2 w} stays below 2 sigma
    sigma = 0.51
    for d in (0.7, 2.0, 4.0):
        assert one_source_admissible(_pair(d), sigma, GRID)


def test_worst_case_noise_triangle_identity():
    sigma = 0.12
    limit = diffraction_limit(OMEGA, sigma)
    mu = _pair(0.8 * limit)
    nd = worst_case_noise(mu, sigma, GRID)
    assert np.abs(nd.values).max() < sigma
    fit = best_one_source_fit(synthesize(mu, GRID, OMEGA))
    assert fit.residual < 2 * sigma
    om = GRID[:, 0]
    model = fit.amplitude * np.exp(1j * (fit.phase + fit.location * om))
    measured = fourier_transform(mu, om) + nd.values
    assert np.abs(model - measured).max() < sigma


def test_worst_case_noise_zero_sigma():
    nd = worst_case_noise(_pair(1.0), 0.0, GRID)
    assert np.all(nd.values == 0.0)


def test_worst_case_noise_cannot_defeat_guaranteed_separation():
    sigma = 0.15
    limit = diffraction_limit(OMEGA, sigma)
    mu = _pair(1.1 * limit)
    nd = worst_case_noise(mu, sigma, GRID)
    meas = synthesize(mu, GRID, OMEGA, nd)
    assert detect_1d(meas, sigma).detected_n == 2


def test_worst_case_noise_defeats_detection_below_limit():
    sigma = 0.15
    limit = diffraction_limit(OMEGA, sigma)
    mu = _pair(0.9 * limit)
    nd = worst_case_noise(mu, sigma, GRID)
    meas = synthesize(mu, GRID, OMEGA, nd)
    assert detect_1d(meas, sigma).detected_n == 1


def test_empirical_limit_spot_values():
    got = empirical_two_point_limit(1.0, 1.0, 0.5, tolerance=0.003)
    assert got == pytest.approx(np.pi, rel=0.01)
    got = empirical_two_point_limit(1.0, 1.0, 0.1, tolerance=0.003)
    assert got == pytest.approx(4 * np.arcsin(np.sqrt(0.1)), rel=0.01)
    got = empirical_two_point_limit(1.0, 2.0, 0.25, tolerance=0.003)
    assert got == pytest.approx(np.pi / 3, rel=0.01)


def test_empirical_limit_validates_ratio():
    with pytest.raises(ValueError):
        empirical_two_point_limit(1.0, 1.0, 0.6)
    with pytest.raises(ValueError):
        empirical_two_point_limit(1.0, 1.0, 0.0)


def test_unequal_amplitudes_never_raise_the_transition():
    # positive pair with alpha >= 1: the transition separation is <= the
    # equal-amplitude one, equality at alpha = 1
    sigma = 0.2
    equal = empirical_two_point_limit(1.0, OMEGA, sigma, tolerance=0.003)

    def transition(alpha):
        lo, hi = 0.05 * equal, 2.0 * equal
        for _ in range(30):
            mid = 0.5 * (lo + hi)
            pair = measure_1d([-mid / 2, mid / 2], [alpha, 1.0])
            if one_source_admissible(pair, sigma, GRID):
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    for alpha in (1.0, 1.5, 3.0):
        assert transition(alpha) <= equal * 1.01
    assert transition(1.0) == pytest.approx(equal, rel=0.02)


def test_fit_rejects_empty_and_multidim():
    from superres.model import DiscreteMeasure, Measurement
    grid2 = np.array([[0.0, 0.0], [1.0, 0.0]])
    meas2 = Measurement(grid2, np.array([1.0 + 0j, 1.0 + 0j]), 1.0)
    with pytest.raises(ValueError):
        best_one_source_fit(meas2)
