"""Brute-force minimax oracle for the exact two-point limit.

The oracle decides sigma-admissibility of a one-source explanation by solving

    min_{a >= 0, gamma, yhat}  max_w | a e^{i (gamma + yhat w)} - Y(w) |

over the measurement grid.  Writing c = a e^{i gamma} (polar coordinates cover
the whole complex plane), the inner problem at fixed yhat is

    min_c max_w | c - Y(w) e^{-i yhat w} |,

the Chebyshev center of a planar point set, solved exactly by a smallest
enclosing circle.  Only the trial location is searched: a coarse scan followed
by golden-section refinement.  The transition separation recovered by
bisection over this check reproduces the closed-form two-point limit; the
admissibility decision itself never consults that formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _minidisk
from .model import (DiscreteMeasure, Measurement, NoiseDraw, fourier_transform,
                    synthesize, uniform_grid_1d)

#: Coarse trial-location grid size over [-2 pi / Omega, 2 pi / Omega].
DEFAULT_SCAN_POINTS = 61
#: Golden-section refinement iterations on the trial location.
DEFAULT_REFINE_ITERS = 40
#: Pointwise clipping of the adversarial noise, keeping |w| < sigma strict.
CLIP_MARGIN = 1e-6


@dataclass
class OneSourceFit:
    """Best one-source explanation a e^{i(gamma + yhat w)} of a measurement."""

    amplitude: float
    phase: float
    location: float
    residual: float


def sup_residual(measurement: Measurement, amplitude: float, phase: float,
                 location: float) -> float:
    """Sup over the (unmasked) grid of |a e^{i(gamma + yhat w)} - Y(w)|."""
    active = measurement.active()
    om = measurement.omega_1d()[active]
    model = amplitude * np.exp(1j * (phase + location * om))
    return float(np.abs(model - measurement.values[active]).max())


def _chebyshev_center(values: np.ndarray, omegas: np.ndarray, location: float):
    rot = values * np.exp(-1j * location * omegas)
    xs = np.ascontiguousarray(rot.real)
    ys = np.ascontiguousarray(rot.imag)
    cx, cy, r = _minidisk.enclosing_circle(xs, ys)
    return complex(cx, cy), float(r)


def best_one_source_fit(measurement: Measurement,
                        n_scan: int = DEFAULT_SCAN_POINTS,
                        refine_iters: int = DEFAULT_REFINE_ITERS) -> OneSourceFit:
    """Approximately global minimizer of the one-source sup-residual.

    Trial locations are scanned on a uniform grid over [-2 pi/Omega, 2 pi/Omega]
    (ties keep the first index), the amplitude/phase pair is solved exactly at
    each location, and the location is polished by golden-section search around
    the best scan point.
    """
    if measurement.dim != 1:
        raise ValueError("the oracle fit is one-dimensional")
    active = measurement.active()
    om = np.ascontiguousarray(measurement.omega_1d()[active])
    vals = measurement.values[active]
    if om.shape[0] == 0:
        raise ValueError("measurement has no active samples")
    omega_max = measurement.cutoff

    shifts = np.linspace(-2 * np.pi / omega_max, 2 * np.pi / omega_max, n_scan)
    re = np.ascontiguousarray(vals.real)
    im = np.ascontiguousarray(vals.imag)
    best, _, _, radii = _minidisk.scan_rotations(re, im, om, shifts)

    lo = shifts[max(best - 1, 0)]
    hi = shifts[min(best + 1, n_scan - 1)]
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a = hi - inv_phi * (hi - lo)
    b = lo + inv_phi * (hi - lo)
    _, fa = _chebyshev_center(vals, om, a)
    _, fb = _chebyshev_center(vals, om, b)
    for _ in range(refine_iters):
        if fa <= fb:
            hi, b, fb = b, a, fa
            a = hi - inv_phi * (hi - lo)
            _, fa = _chebyshev_center(vals, om, a)
        else:
            lo, a, fa = a, b, fb
            b = lo + inv_phi * (hi - lo)
            _, fb = _chebyshev_center(vals, om, b)
    location = a if fa <= fb else b
    center, _ = _chebyshev_center(vals, om, location)
    if radii[best] < min(fa, fb):  # guard: refinement never beats the scan floor
        location = shifts[best]
        center, _ = _chebyshev_center(vals, om, location)

    amplitude = abs(center)
    phase = math.atan2(center.imag, center.real) % (2 * math.pi)
    residual = sup_residual(measurement, amplitude, phase, location)
    return OneSourceFit(amplitude, phase, location, residual)


def _noiseless(measure: DiscreteMeasure, grid, omega_max: float) -> Measurement:
    return synthesize(measure, grid, omega_max)


def one_source_admissible(measure: DiscreteMeasure, sigma: float, grid=None,
                          omega_max: float | None = None,
                          **fit_kwargs) -> bool:
    """Whether some admissible image of the two-source measure also admits a
    one-source explanation: true iff the minimax one-source residual against
    the noiseless data is < 2 sigma.
    """
    if measure.n_sources != 2:
        raise ValueError("one_source_admissible expects a two-source measure")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if grid is None:
        if omega_max is None:
            raise ValueError("pass a grid or omega_max")
        grid = uniform_grid_1d(omega_max)
    else:
        grid = np.asarray(grid, dtype=float)
        if omega_max is None:
            omega_max = float(np.abs(grid).max())
    fit = best_one_source_fit(_noiseless(measure, grid, omega_max), **fit_kwargs)
    return fit.residual < 2.0 * sigma


def worst_case_noise(measure: DiscreteMeasure, sigma: float, grid=None,
                     omega_max: float | None = None,
                     **fit_kwargs) -> NoiseDraw:
    """Adversarial bounded noise built from the best one-source fit.

    w(w) = (F[mu_hat*](w) - F[mu](w)) / 2, clipped pointwise to (1 - 1e-6) sigma.
    Whenever the fit residual is below 2 sigma, Y = F[mu] + w admits the
    one-source explanation mu_hat* within sigma, so number detection must fail.
    """
    if measure.n_sources != 2:
        raise ValueError("worst_case_noise expects a two-source measure")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if grid is None:
        if omega_max is None:
            raise ValueError("pass a grid or omega_max")
        grid = uniform_grid_1d(omega_max)
    else:
        grid = np.asarray(grid, dtype=float)
        if omega_max is None:
            omega_max = float(np.abs(grid).max())
    if sigma == 0.0:
        return NoiseDraw(np.zeros(grid.shape[0], dtype=complex), 0.0)
    target = _noiseless(measure, grid, omega_max)
    fit = best_one_source_fit(target, **fit_kwargs)
    om = target.omega_1d()
    model = fit.amplitude * np.exp(1j * (fit.phase + fit.location * om))
    w = 0.5 * (model - target.values)
    cap = (1.0 - CLIP_MARGIN) * sigma
    mags = np.abs(w)
    over = mags > cap
    w[over] *= cap / mags[over]
    return NoiseDraw(w, sigma)


def empirical_two_point_limit(m: float, omega_max: float, sigma: float,
                              tolerance: float = 0.01, grid_size: int | None = None,
                              **fit_kwargs) -> float:
    """Bisection over the separation of the equal-amplitude pair.

    Finds the transition separation where the one-source explanation stops
    being admissible; the result is within ``tolerance`` (relative) of the
    bisection bracket.  The initial bracket [0.1 hint, 2 hint] uses the closed
    form as a hint only; every admissibility decision comes from the fit.
    """
    if m <= 0 or omega_max <= 0:
        raise ValueError("m and omega_max must be positive")
    ratio = sigma / m
    if not 0 < ratio <= 0.5:
        raise ValueError("need 0 < sigma/m <= 1/2 for a finite transition")
    grid = uniform_grid_1d(omega_max) if grid_size is None \
        else uniform_grid_1d(omega_max, grid_size)

    def admissible(d: float) -> bool:
        pair = DiscreteMeasure(np.array([[-d / 2], [d / 2]]),
                               np.array([m, m], dtype=complex))
        return one_source_admissible(pair, sigma, grid, omega_max, **fit_kwargs)

    hint = 4.0 * math.asin(math.sqrt(ratio)) / omega_max
    lo, hi = 0.1 * hint, 2.0 * hint
    if not admissible(lo):
        raise ValueError("lower bracket endpoint is not admissible")
    if admissible(hi):
        raise ValueError("upper bracket endpoint is still admissible")
    while hi - lo > tolerance * 0.5 * (hi + lo):
        mid = 0.5 * (lo + hi)
        if admissible(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
