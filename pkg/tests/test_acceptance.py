"""Acceptance suite: one test per criterion, each at its stated tolerance.

Every test prints a single PASS line (visible with pytest -s); a failed
assertion is the corresponding FAIL.  Seeds are fixed, so the whole suite is
deterministic.
"""

import math
import time

import numpy as np
import pytest

from superres.bounds import (diffraction_limit, location_bound,
                             number_detection_bound,
                             verify_appendix_inequalities,
                             verify_product_lower_bounds)
from superres.detect import detect_1d, detect_multid, default_directions
from superres.harness import (ExperimentConfig, run_amplitude_scaling,
                              run_music_compare, run_random_2d,
                              run_worst_case_1d)
from superres.identities import identity_amplitude, identity_location
from superres.model import (DiscreteMeasure, draw_noise, fourier_transform,
                            measure_1d, synthesize, uniform_grid_1d)
from superres.oracle import (empirical_two_point_limit, one_source_admissible,
                             worst_case_noise)

from test_identities import random_instance


def _report(name, detail=""):
    print(f"ACCEPTANCE {name}: PASS {detail}".rstrip())


def test_identity_exactness_1000_instances():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        mu, mu_hat, w_star = random_instance(rng)
        j = int(rng.integers(mu.n_sources))
        lhs, noise = identity_amplitude(mu, mu_hat, j, w_star)
        a_j = mu.amplitudes[j]
        r1 = abs(lhs - a_j - noise) / max(1.0, abs(a_j))
        lhs2, rhs2 = identity_location(mu, mu_hat, j, w_star)
        r2 = abs(lhs2 - rhs2) / max(1.0, abs(lhs2))
        worst = max(worst, r1, r2)
        assert r1 < 1e-9 and r2 < 1e-9
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    _report("identity-exactness", f"(worst residual {worst:.2e}, {elapsed:.2f} s)")


def test_closed_form_spot_values():
    assert abs(diffraction_limit(1.0, 0.5) - math.pi) < 1e-12
    assert abs(number_detection_bound(2, 1.0, 1 / 16) - math.pi / 3) < 1e-12
    assert abs(location_bound(2, 1.0, 1 / 8) - 3 * math.pi / 2) < 1e-12
    _report("closed-form-spot-values")


def test_oracle_formula_agreement():
    start = time.perf_counter()
    worst = 0.0
    for omega in (0.5, 1.0, 2.0):
        for ratio in np.geomspace(0.02, 0.5, 10):
            formula = diffraction_limit(omega, ratio)
            empirical = empirical_two_point_limit(1.0, omega, ratio,
                                                  tolerance=0.005)
            gap = abs(empirical - formula) / formula
            worst = max(worst, gap)
            assert gap < 0.02, (omega, ratio, gap)
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0
    _report("oracle-formula-agreement", f"(worst gap {worst:.4f}, {elapsed:.1f} s)")


def test_detection_guarantee_and_converse():
    omega = 1.0
    grid3 = np.array([[-omega], [0.0], [omega]])
    rng = np.random.default_rng(7)

    # guarantee: equal amplitudes, d >= 4 arcsin(sqrt(ratio))/Omega, any noise
    failures = 0
    for t in range(10_000):
        ratio = rng.uniform(0.0, 0.5)
        limit = diffraction_limit(omega, ratio)
        d = rng.uniform(limit, np.pi / omega)
        m = rng.uniform(1.0, 3.0)
        amp = m * np.exp(1j * rng.uniform(0, 2 * np.pi))
        center = rng.uniform(-np.pi / (2 * omega), np.pi / (2 * omega))
        mu = measure_1d([center - d / 2, center + d / 2], [amp, amp])
        sigma = ratio * m
        meas = synthesize(mu, grid3, omega, draw_noise(grid3, sigma, rng))
        if detect_1d(meas, sigma).detected_n != 2:
            failures += 1
    assert failures == 0

    # converse: one-source admissibility forces sigma2_hat < 2 sigma under
    # the adversarial construction
    grid = uniform_grid_1d(omega)
    fit_opts = dict(n_scan=41, refine_iters=28)
    violations = 0
    admissible_count = 0
    for t in range(10_000):
        ratio = rng.uniform(0.02, 0.5)
        limit = diffraction_limit(omega, ratio)
        d = rng.uniform(0.3, 1.1) * limit
        alpha = math.exp(rng.uniform(0.0, math.log(2.0)))
        phases = rng.uniform(0, 2 * np.pi, size=2)
        mu = measure_1d([-d / 2, d / 2],
                        [alpha * np.exp(1j * phases[0]), np.exp(1j * phases[1])])
        sigma = ratio  # m_min = 1
        if not one_source_admissible(mu, sigma, grid, omega, **fit_opts):
            continue
        admissible_count += 1
        noise = worst_case_noise(mu, sigma, grid, omega, **fit_opts)
        meas = synthesize(mu, grid, omega, noise)
        res = detect_1d(meas, sigma)
        if res.singular_values[0, 1] >= 2 * sigma:
            violations += 1
    assert admissible_count > 1000  # the implication is exercised, not vacuous
    assert violations == 0
    _report("detection-guarantee",
            f"(0/10000 failures; converse 0/{admissible_count} violations)")


def test_worst_case_phase_transition():
    start = time.perf_counter()
    cfg = ExperimentConfig(kind="worst-1d", trials=5000, seed=42)
    records = run_worst_case_1d(cfg)
    above = [r for r in records
             if r.d_min >= 1.05 * diffraction_limit(cfg.omega_max, r.ratio)]
    below = [r for r in records
             if r.d_min <= 0.95 * diffraction_limit(cfg.omega_max, r.ratio)]
    assert len(above) > 100 and len(below) > 100
    rate_above = sum(r.success for r in above) / len(above)
    rate_below = sum(r.success for r in below) / len(below)
    assert rate_above >= 0.99
    assert rate_below <= 0.01

    hopeless = ExperimentConfig(kind="impossible-regime", trials=1000, seed=43)
    bad = run_worst_case_1d(hopeless)
    assert not any(r.success for r in bad)
    elapsed = time.perf_counter() - start
    _report("worst-case-phase-transition",
            f"(above {rate_above:.4f}, below {rate_below:.4f}, "
            f"impossible 0/{len(bad)}, {elapsed:.1f} s)")


def test_multid_guarantee():
    omega = 1.0
    n_dir = 10
    aperture = math.cos(math.pi / (2 * n_dir))
    directions = default_directions(n_dir)
    rng = np.random.default_rng(11)
    sample_points = [np.zeros(2)]
    for v in directions:
        sample_points.append(-omega * v)
        sample_points.append(omega * v)
    sample_grid = np.asarray(sample_points)

    failures = 0
    for t in range(5000):
        ratio = rng.uniform(0.0, 0.49)
        limit = diffraction_limit(omega, ratio)
        lo = limit / aperture
        d = rng.uniform(lo, max(np.pi / omega, lo * 1.0000001))
        m = rng.uniform(1.0, 2.0)
        amp = m * np.exp(1j * rng.uniform(0, 2 * np.pi))
        center = rng.uniform(-np.pi / (2 * omega), np.pi / (2 * omega), size=2)
        angle = rng.uniform(0.0, np.pi)
        offset = 0.5 * d * np.array([np.cos(angle), np.sin(angle)])
        mu = DiscreteMeasure(np.stack([center - offset, center + offset]),
                             np.array([amp, amp]))
        sigma = ratio * m
        noise = draw_noise(sample_grid, sigma, rng)
        lookup = {pt.tobytes(): w for pt, w in zip(sample_grid, noise.values)}

        def field_fn(om, _lookup=lookup, _mu=mu):
            return fourier_transform(_mu, om) + _lookup[np.asarray(om).tobytes()]

        if detect_multid(field_fn, omega, sigma, directions).detected_n != 2:
            failures += 1
    assert failures == 0
    _report("multid-guarantee", "(0/5000 failures)")


def test_appendix_verification():
    report = verify_appendix_inequalities(30)
    assert report.all_nonnegative
    product = verify_product_lower_bounds(10_000, 6, rng_seed=99)
    assert product.total_violations == 0
    _report("appendix-verification",
            f"(min margin {report.min_margin:.3f}, 0 product violations)")


def test_amplitude_scaling_exponent():
    cfg = ExperimentConfig(kind="amplitude-scaling", trials=1)
    rows, slopes = run_amplitude_scaling(cfg)
    assert len(rows) == 8 and rows[0].srf == 2.0 and rows[-1].srf == 16.0
    assert abs(slopes["slope_fixed"] - 2.0) <= 0.5
    _report("amplitude-scaling", f"(slope {slopes['slope_fixed']:.3f})")


def test_music_contrast():
    cfg = ExperimentConfig(kind="music-compare", trials=10_000, seed=12,
                           max_cases=5)
    cases = run_music_compare(cfg)
    assert len(cases) >= 5
    for c in cases:
        assert c.detected_n == 2 and c.music_peaks == 1
    _report("music-contrast",
            f"({len(cases)} cases by draw {max(c.trial for c in cases)})")
