"""Seeded experiment campaigns: phase transitions, MUSIC contrast, scaling.

Every campaign derives one RNG per trial from (seed, trial index), so runs are
reproducible and would stay identical under parallel execution.  Results go to
CSV with a metadata header line carrying the seed, cutoff and package version.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ._version import __version__
from .bounds import diffraction_limit
from .detect import (MUSIC_GRID_SIZE, MUSIC_PROMINENCE, MUSIC_SCAN_SIZE,
                     default_directions, detect_1d, detect_multid, music_spectrum,
                     peak_count)
from .model import (DEFAULT_GRID_SIZE, DiscreteMeasure, draw_noise,
                    fourier_transform, measure_1d, synthesize, uniform_grid_1d)
from .oracle import empirical_two_point_limit, worst_case_noise

EXPERIMENT_KINDS = ("random-1d", "worst-1d", "impossible-regime", "random-2d",
                    "music-compare", "amplitude-scaling", "limit-sweep")


@dataclass
class ExperimentConfig:
    kind: str = "random-1d"
    trials: int = 5000
    omega_max: float = 1.0
    seed: int = 0
    out: str | None = None
    ratio_range: tuple[float, float] | None = None  # sigma / m_min
    d_range: tuple[float, float] | None = None      # separation, physical units
    n_directions: int = 10
    grid_size: int = DEFAULT_GRID_SIZE
    # amplitude-scaling
    sigma: float = 1e-4
    srf_range: tuple[float, float] = (2.0, 16.0)
    srf_points: int = 8
    # limit-sweep
    ratios: int = 10
    tolerance: float = 0.005
    # music-compare
    max_cases: int = 8
    d_fraction_range: tuple[float, float] = (0.6, 0.95)
    music_grid: int = MUSIC_GRID_SIZE
    music_scan: int = MUSIC_SCAN_SIZE
    music_prominence: float = MUSIC_PROMINENCE

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.omega_max <= 0:
            raise ValueError("omega_max must be positive")

    def resolved_ranges(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """Fill in the per-kind default ratio and separation ranges."""
        rayleigh = math.pi / self.omega_max
        if self.ratio_range is not None:
            ratio = self.ratio_range
        elif self.kind == "impossible-regime":
            ratio = (0.5, 1.0)
        elif self.kind == "music-compare":
            ratio = (0.08, 0.35)
        else:
            ratio = (0.0, 0.5)
        d = self.d_range if self.d_range is not None else (0.01 * rayleigh, rayleigh)
        return ratio, d


_CONFIG_KEYS = {
    "experiment": ("kind", str), "kind": ("kind", str),
    "trials": ("trials", int),
    "omega": ("omega_max", float), "omega_max": ("omega_max", float),
    "seed": ("seed", int),
    "out": ("out", str),
    "directions": ("n_directions", int),
    "grid": ("grid_size", int),
    "sigma": ("sigma", float),
    "srf_points": ("srf_points", int),
    "ratios": ("ratios", int),
    "tolerance": ("tolerance", float),
    "max_cases": ("max_cases", int),
    "music_grid": ("music_grid", int),
    "music_scan": ("music_scan", int),
    "music_prominence": ("music_prominence", float),
}

_RANGE_KEYS = {
    "ratio_low": ("ratio_range", 0), "ratio_high": ("ratio_range", 1),
    "d_low": ("d_range", 0), "d_high": ("d_range", 1),
    "srf_low": ("srf_range", 0), "srf_high": ("srf_range", 1),
    "d_frac_low": ("d_fraction_range", 0), "d_frac_high": ("d_fraction_range", 1),
}


def load_config(path) -> ExperimentConfig:
    """Parse a flat key=value config file ('#' starts a comment)."""
    values: dict = {}
    ranges: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, _, val = line.partition("=")
            key = key.strip().replace("-", "_")
            val = val.strip()
            if key in _CONFIG_KEYS:
                name, cast = _CONFIG_KEYS[key]
                values[name] = cast(val)
            elif key in _RANGE_KEYS:
                name, idx = _RANGE_KEYS[key]
                ranges.setdefault(name, [None, None])[idx] = float(val)
            else:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
    cfg = ExperimentConfig(**values)
    for name, pair in ranges.items():
        current = getattr(cfg, name)
        lo = pair[0] if pair[0] is not None else (current[0] if current else None)
        hi = pair[1] if pair[1] is not None else (current[1] if current else None)
        if lo is None or hi is None:
            raise ValueError(f"config range {name} needs both endpoints")
        cfg = replace(cfg, **{name: (lo, hi)})
    return cfg


@dataclass
class TrialRecord:
    trial: int
    ratio: float
    d_min: float
    true_n: int
    detected_n: int
    sigma2_hat: float
    threshold: float
    success: bool
    kind: str
    direction: int = -1

    def __post_init__(self):
        if self.success != (self.detected_n == self.true_n):
            raise ValueError("success flag must equal (detected == true)")


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng((seed, trial))


def _random_amplitudes(rng) -> np.ndarray:
    """Minimum modulus pinned to 1; the other modulus log-uniform in [1, 3]."""
    phases = rng.uniform(0.0, 2.0 * np.pi, size=2)
    scale = math.exp(rng.uniform(0.0, math.log(3.0)))
    return np.array([np.exp(1j * phases[0]), scale * np.exp(1j * phases[1])])


def run_random_1d(cfg: ExperimentConfig) -> list[TrialRecord]:
    """Random pairs, random admissible noise, three-sample detection."""
    ratio_rng, d_rng = cfg.resolved_ranges()
    omega = cfg.omega_max
    grid = np.array([[-omega], [0.0], [omega]])
    records = []
    for t in range(cfg.trials):
        rng = _trial_rng(cfg.seed, t)
        ratio = rng.uniform(*ratio_rng)
        d = rng.uniform(*d_rng)
        center = rng.uniform(-np.pi / (2 * omega), np.pi / (2 * omega))
        amps = _random_amplitudes(rng)
        mu = measure_1d([center - d / 2, center + d / 2], amps)
        sigma = ratio  # m_min == 1
        noise = draw_noise(grid, sigma, rng)
        meas = synthesize(mu, grid, omega, noise)
        res = detect_1d(meas, sigma)
        records.append(TrialRecord(t, ratio, d, 2, res.detected_n,
                                   float(res.singular_values[0, 1]), res.threshold,
                                   res.detected_n == 2, cfg.kind))
    return records


def run_worst_case_1d(cfg: ExperimentConfig) -> list[TrialRecord]:
    """Equal-amplitude symmetric pairs under the adversarial oracle noise."""
    ratio_rng, d_rng = cfg.resolved_ranges()
    omega = cfg.omega_max
    grid = uniform_grid_1d(omega, cfg.grid_size)
    records = []
    for t in range(cfg.trials):
        rng = _trial_rng(cfg.seed, t)
        ratio = rng.uniform(*ratio_rng)
        d = rng.uniform(*d_rng)
        amp = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
        mu = measure_1d([-d / 2, d / 2], [amp, amp])
        sigma = ratio
        noise = worst_case_noise(mu, sigma, grid, omega)
        meas = synthesize(mu, grid, omega, noise)
        res = detect_1d(meas, sigma)
        records.append(TrialRecord(t, ratio, d, 2, res.detected_n,
                                   float(res.singular_values[0, 1]), res.threshold,
                                   res.detected_n == 2, cfg.kind))
    return records


def run_random_2d(cfg: ExperimentConfig) -> list[TrialRecord]:
    """Random planar pairs, detection along a fan of unit directions."""
    ratio_rng, d_rng = cfg.resolved_ranges()
    omega = cfg.omega_max
    directions = default_directions(cfg.n_directions)
    sample_points = [np.zeros(2)]
    for v in directions:
        sample_points.append(-omega * v)
        sample_points.append(omega * v)
    sample_grid = np.asarray(sample_points)
    records = []
    for t in range(cfg.trials):
        rng = _trial_rng(cfg.seed, t)
        ratio = rng.uniform(*ratio_rng)
        d = rng.uniform(*d_rng)
        center = rng.uniform(-np.pi / (2 * omega), np.pi / (2 * omega), size=2)
        angle = rng.uniform(0.0, np.pi)
        offset = 0.5 * d * np.array([np.cos(angle), np.sin(angle)])
        amps = _random_amplitudes(rng)
        mu = DiscreteMeasure(np.stack([center - offset, center + offset]), amps)
        sigma = ratio
        noise = draw_noise(sample_grid, sigma, rng)
        lookup = {pt.tobytes(): w for pt, w in zip(sample_grid, noise.values)}

        def field_fn(om, _lookup=lookup, _mu=mu):
            key = np.asarray(om, dtype=float).tobytes()
            return fourier_transform(_mu, om) + _lookup[key]

        res = detect_multid(field_fn, omega, sigma, directions)
        s2 = float(res.singular_values[:, 1].max())
        records.append(TrialRecord(t, ratio, d, 2, res.detected_n, s2,
                                   res.threshold, res.detected_n == 2, cfg.kind,
                                   direction=int(res.direction_index)))
    return records


@dataclass
class MusicCase:
    case: int
    trial: int
    ratio: float
    d_min: float
    detected_n: int
    music_peaks: int
    spectrum: np.ndarray
    scan: np.ndarray


def run_music_compare(cfg: ExperimentConfig) -> list[MusicCase]:
    """Hunt for sub-limit cases where thresholding says 2 but MUSIC shows 1 peak.

    Up to cfg.trials candidates are drawn; collection stops after
    cfg.max_cases qualifying cases.
    """
    ratio_rng, _ = cfg.resolved_ranges()
    omega = cfg.omega_max
    grid = uniform_grid_1d(omega, cfg.music_grid)
    scan = np.linspace(-np.pi / omega, np.pi / omega, cfg.music_scan)
    cases = []
    for t in range(cfg.trials):
        if len(cases) >= cfg.max_cases:
            break
        rng = _trial_rng(cfg.seed, t)
        ratio = rng.uniform(*ratio_rng)
        limit = diffraction_limit(omega, ratio)
        d = rng.uniform(*cfg.d_fraction_range) * limit
        center = rng.uniform(-np.pi / (4 * omega), np.pi / (4 * omega))
        amp = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
        mu = measure_1d([center - d / 2, center + d / 2], [amp, amp])
        sigma = ratio
        meas = synthesize(mu, grid, omega, draw_noise(grid, sigma, rng))
        res = detect_1d(meas, sigma)
        if res.detected_n != 2:
            continue
        spec = music_spectrum(meas, 2, scan)
        peaks = peak_count(spec, cfg.music_prominence)
        if peaks == 1:
            cases.append(MusicCase(len(cases), t, ratio, d, res.detected_n,
                                   peaks, spec, scan))
    return cases


@dataclass
class ScalingRow:
    srf: float
    err_fixed: float
    err_perturbed: float


def _lstsq_amplitude_error(values, omegas, locations, truth, sigma):
    """Least-squares amplitudes at the candidate locations; the error of the
    first (target) amplitude, or None when the fit is not 2 sigma-admissible."""
    design = np.exp(1j * np.outer(omegas, locations))
    est, *_ = np.linalg.lstsq(design, values, rcond=None)
    if np.abs(design @ est - values).max() >= 2.0 * sigma:
        return None
    return float(abs(est[0] - truth[0]))


def run_amplitude_scaling(cfg: ExperimentConfig) -> tuple[list[ScalingRow], dict]:
    """Worst admissible amplitude error against the super-resolution factor.

    For each SRF, a unit equal-amplitude pair is sampled noiselessly; candidate
    measures keep the target location exact (``err_fixed``) or perturb both
    locations (``err_perturbed``), with amplitudes fit by least squares.  Only
    candidates whose sup-residual stays below 2 sigma (sigma-admissible for
    some noisy image) count; the worst target-amplitude error is recorded and
    the log-log slopes are returned alongside the rows.
    """
    omega = cfg.omega_max
    sigma = cfg.sigma
    om = uniform_grid_1d(omega, cfg.grid_size)[:, 0]
    srfs = np.geomspace(cfg.srf_range[0], cfg.srf_range[1], cfg.srf_points)
    truth = np.array([1.0 + 0j, 1.0 + 0j])
    rows = []
    for s in srfs:
        d = np.pi / (omega * s)
        y = np.array([-d / 2, d / 2])
        values = np.exp(1j * np.outer(om, y)) @ truth

        mags = np.geomspace(1e-6, 2 * d, 60)
        deltas = np.concatenate([-mags, [0.0], mags])
        err_fixed = 0.0
        for delta in deltas:
            err = _lstsq_amplitude_error(values, om, np.array([y[0], y[1] + delta]),
                                         truth, sigma)
            if err is not None:
                err_fixed = max(err_fixed, err)

        mags = np.geomspace(1e-6, 2 * d, 15)
        deltas = np.concatenate([-mags, [0.0], mags])
        err_pert = 0.0
        for d1 in deltas:
            for d2 in deltas:
                err = _lstsq_amplitude_error(values, om,
                                             np.array([y[0] + d1, y[1] + d2]),
                                             truth, sigma)
                if err is not None:
                    err_pert = max(err_pert, err)
        rows.append(ScalingRow(float(s), err_fixed, err_pert))

    slopes = {}
    for name in ("err_fixed", "err_perturbed"):
        errs = np.array([getattr(r, name) for r in rows])
        ok = errs > 0
        slopes["slope_" + name.removeprefix("err_")] = (
            float(np.polyfit(np.log(srfs[ok]), np.log(errs[ok]), 1)[0])
            if ok.sum() >= 2 else float("nan"))
    return rows, slopes


@dataclass
class SweepRow:
    ratio: float
    formula_limit: float
    empirical_limit: float
    rel_gap: float


def run_limit_sweep(cfg: ExperimentConfig) -> list[SweepRow]:
    """Empirical transition separation (bisected oracle) against the closed form."""
    ratio_rng, _ = cfg.resolved_ranges()
    lo = max(ratio_rng[0], 1e-4)
    hi = min(ratio_rng[1], 0.5)
    rows = []
    for ratio in np.geomspace(lo, hi, cfg.ratios):
        formula = diffraction_limit(cfg.omega_max, ratio)
        empirical = empirical_two_point_limit(1.0, cfg.omega_max, ratio,
                                              tolerance=cfg.tolerance,
                                              grid_size=cfg.grid_size)
        rows.append(SweepRow(float(ratio), formula, empirical,
                             abs(empirical - formula) / formula))
    return rows


# ---------------------------------------------------------------------------
# CSV persistence and the acceptance-property checks behind exit code 2.
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))  # shortest round-trip repr, never the numpy one
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _meta_line(cfg: ExperimentConfig, extra: dict | None = None) -> str:
    parts = [f"# resolve-limit v{__version__}", f"kind={cfg.kind}",
             f"seed={cfg.seed}", f"omega={_fmt(cfg.omega_max)}",
             f"trials={cfg.trials}"]
    for key, val in (extra or {}).items():
        parts.append(f"{key}={_fmt(val)}")
    return " ".join(parts)


def write_csv(path, columns, rows, meta: str) -> None:
    lines = [meta, ",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


TRIAL_COLUMNS = ("trial", "ratio", "d_min", "true_n", "detected_n",
                 "sigma2_hat", "threshold", "success")


def write_trials_csv(path, cfg: ExperimentConfig, records: list[TrialRecord]) -> None:
    columns = TRIAL_COLUMNS + (("direction",) if cfg.kind == "random-2d" else ())
    rows = []
    for r in records:
        row = [r.trial, r.ratio, r.d_min, r.true_n, r.detected_n, r.sigma2_hat,
               r.threshold, r.success]
        if cfg.kind == "random-2d":
            row.append(r.direction)
        rows.append(row)
    write_csv(path, columns, rows, _meta_line(cfg))


def guarantee_violations(cfg: ExperimentConfig, records: list[TrialRecord]) -> int:
    """Number of trials that contradict a proven guarantee.

    Above the diffraction limit (corrected by the direction-fan aperture in
    2-D) detection must succeed; under adversarial noise with sigma/m > 1/2 it
    must fail.
    """
    bad = 0
    aperture = 1.0
    if cfg.kind == "random-2d":
        aperture = math.cos(math.pi / (2 * cfg.n_directions))
    rayleigh = math.pi / cfg.omega_max
    for r in records:
        if r.ratio <= 0.5:
            limit = diffraction_limit(cfg.omega_max, r.ratio)
            if limit / aperture <= r.d_min <= rayleigh and not r.success:
                bad += 1
        elif cfg.kind in ("worst-1d", "impossible-regime") and r.success:
            bad += 1
    return bad


def run_experiment(cfg: ExperimentConfig) -> tuple[int, dict]:
    """Dispatch a campaign, write its CSV outputs, count property violations.

    Returns (violations, info); a nonzero violation count maps to exit code 2
    at the CLI.
    """
    info: dict = {}
    if cfg.kind in ("random-1d", "worst-1d", "impossible-regime", "random-2d"):
        runner = {"random-1d": run_random_1d, "worst-1d": run_worst_case_1d,
                  "impossible-regime": run_worst_case_1d,
                  "random-2d": run_random_2d}[cfg.kind]
        records = runner(cfg)
        if cfg.out:
            write_trials_csv(cfg.out, cfg, records)
        violations = guarantee_violations(cfg, records)
        info["records"] = records
        info["successes"] = sum(r.success for r in records)
        return violations, info

    if cfg.kind == "music-compare":
        cases = run_music_compare(cfg)
        info["cases"] = cases
        if cfg.out:
            rows = [[c.case, c.trial, c.ratio, c.d_min, c.detected_n, c.music_peaks]
                    for c in cases]
            write_csv(cfg.out, ("case", "trial", "ratio", "d_min", "detected_n",
                                "music_peaks"), rows,
                      _meta_line(cfg, {"scan_points": cfg.music_scan}))
            spectra = str(cfg.out)
            spectra = spectra[:-4] + "_spectra.csv" if spectra.endswith(".csv") \
                else spectra + "_spectra.csv"
            rows = [[c.case, y, p] for c in cases
                    for y, p in zip(c.scan, c.spectrum)]
            write_csv(spectra, ("case", "location", "power"), rows,
                      _meta_line(cfg, {"scan_points": cfg.music_scan}))
            info["spectra_path"] = spectra
        return 0, info

    if cfg.kind == "amplitude-scaling":
        rows, slopes = run_amplitude_scaling(cfg)
        info.update(slopes)
        info["rows"] = rows
        if cfg.out:
            write_csv(cfg.out, ("srf", "err_fixed", "err_perturbed"),
                      [[r.srf, r.err_fixed, r.err_perturbed] for r in rows],
                      _meta_line(cfg, {"sigma": cfg.sigma, **slopes}))
        return 0, info

    # limit-sweep
    rows = run_limit_sweep(cfg)
    info["rows"] = rows
    if cfg.out:
        write_csv(cfg.out, ("ratio", "formula_limit", "empirical_limit", "rel_gap"),
                  [[r.ratio, r.formula_limit, r.empirical_limit, r.rel_gap]
                   for r in rows], _meta_line(cfg, {"tolerance": cfg.tolerance}))
    violations = sum(r.rel_gap > 0.02 for r in rows)
    return violations, info
