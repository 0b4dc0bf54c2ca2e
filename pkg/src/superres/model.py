"""Discrete point-source measures and noisy band-limited Fourier measurements.

The measurement model is

    Y(w) = chi(w) * (F[mu](w) + W(w)),    ||w||_2 <= Omega,

where mu = sum_j a_j delta_{y_j} is a discrete measure, F[mu](w) =
sum_j a_j exp(i y_j . w), chi is an optional 0/1 sampling mask, and the
noise is bounded pointwise, |W(w)| < sigma.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: Default number of 1-D grid points on [-Omega, Omega].  The count is odd so
#: that w = 0 and w = +-Omega are always sampled exactly: the two-point
#: resolution is driven by the boundary and center frequencies.
DEFAULT_GRID_SIZE = 513

_EQ_TOL = 0.0  # exact coordinate equality unless the caller opts into a tolerance


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("points must be a nonempty (n, k) array")
    return pts


@dataclass
class DiscreteMeasure:
    """Point sources: locations in R^k plus nonzero complex amplitudes."""

    points: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        self.points = _as_points(self.points)
        self.amplitudes = np.atleast_1d(np.asarray(self.amplitudes, dtype=complex))
        if self.amplitudes.shape != (self.points.shape[0],):
            raise ValueError("amplitudes must match the number of points")
        if np.any(np.abs(self.amplitudes) == 0.0):
            raise ValueError("amplitudes must be nonzero")
        n = self.points.shape[0]
        for p in range(n):
            for q in range(p + 1, n):
                if np.all(self.points[p] == self.points[q]):
                    raise ValueError("points must be pairwise distinct")
        self.points.flags.writeable = False
        self.amplitudes.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def n_sources(self) -> int:
        return self.points.shape[0]

    @property
    def m_min(self) -> float:
        """Smallest amplitude modulus."""
        return float(np.min(np.abs(self.amplitudes)))

    @property
    def d_min(self) -> float:
        """Smallest pairwise separation; requires at least two sources."""
        if self.n_sources < 2:
            raise ValueError("d_min needs at least two sources")
        diffs = self.points[:, None, :] - self.points[None, :, :]
        dist = np.sqrt((diffs**2).sum(axis=2))
        return float(dist[np.triu_indices(self.n_sources, k=1)].min())

    def locations_1d(self) -> np.ndarray:
        if self.dim != 1:
            raise ValueError("measure is not one-dimensional")
        return self.points[:, 0]

    def shifted(self, x) -> "DiscreteMeasure":
        """Translate every source by the vector x."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return DiscreteMeasure(self.points + x[None, :], self.amplitudes.copy())


def measure_1d(locations, amplitudes) -> DiscreteMeasure:
    """Convenience constructor for 1-D measures."""
    return DiscreteMeasure(np.asarray(locations, dtype=float)[:, None],
                           np.asarray(amplitudes, dtype=complex))


def fourier_transform(measure: DiscreteMeasure, omega):
    """Evaluate F[mu](w) = sum_j a_j exp(i y_j . w).

    ``omega`` may be a scalar (1-D measures), a single k-vector, or a batch of
    shape (m, k); for 1-D measures a 1-D array is treated as a batch.
    """
    om = np.asarray(omega, dtype=float)
    scalar_in = om.ndim == 0 or (om.ndim == 1 and measure.dim > 1)
    if om.ndim == 0:
        om = om.reshape(1, 1)
    elif om.ndim == 1:
        om = om[None, :] if measure.dim > 1 else om[:, None]
    if om.shape[1] != measure.dim:
        raise ValueError(f"omega has dimension {om.shape[1]}, measure has {measure.dim}")
    phases = om @ measure.points.T  # (m, n)
    values = np.exp(1j * phases) @ measure.amplitudes
    return complex(values[0]) if scalar_in else values


def uniform_grid_1d(omega_max: float, n_points: int = DEFAULT_GRID_SIZE) -> np.ndarray:
    """Uniform (n, 1) grid on [-Omega, Omega]; n must be odd so 0 is on-grid."""
    if omega_max <= 0:
        raise ValueError("omega_max must be positive")
    if n_points < 3 or n_points % 2 == 0:
        raise ValueError("n_points must be odd and >= 3")
    return np.linspace(-omega_max, omega_max, n_points)[:, None]


def _as_grid(grid, dim: int | None = None) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    if g.ndim == 1:
        g = g[:, None]
    if g.ndim != 2 or g.shape[0] == 0:
        raise ValueError("grid must be a nonempty (m, k) array")
    if dim is not None and g.shape[1] != dim:
        raise ValueError(f"grid dimension {g.shape[1]} does not match {dim}")
    return g


def _grid_sort_order(grid: np.ndarray) -> np.ndarray:
    return np.lexsort(grid.T[::-1])  # lexicographic by coordinates


def _check_grid(grid: np.ndarray, omega_max: float) -> None:
    norms = np.sqrt((grid**2).sum(axis=1))
    if norms.max() > omega_max * (1 + 1e-12):
        raise ValueError("grid contains frequencies beyond the cutoff")
    if not np.any(norms == 0.0):
        raise ValueError("grid must contain omega = 0")
    if grid.shape[1] == 1:
        for b in (-omega_max, omega_max):
            if not np.any(grid[:, 0] == b):
                raise ValueError("1-D grid must contain omega = -Omega and +Omega")


def boundary_mask_points(grid: np.ndarray, omega_max: float) -> np.ndarray:
    """Boolean index of the points where the mask is forced true: 0 and ||w|| = Omega."""
    norms = np.sqrt((grid**2).sum(axis=1))
    return (norms == 0.0) | (np.abs(norms - omega_max) <= 1e-12 * omega_max)


@dataclass
class NoiseDraw:
    """Per-grid-point complex perturbation with |w| < sigma strictly."""

    values: np.ndarray
    sigma: float

    def __post_init__(self):
        self.values = np.atleast_1d(np.asarray(self.values, dtype=complex))
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        mags = np.abs(self.values)
        if self.sigma == 0.0:
            if np.any(mags != 0.0):
                raise ValueError("sigma = 0 requires an all-zero draw")
        elif mags.max() >= self.sigma:
            raise ValueError("noise draw violates |w| < sigma")
        self.values.flags.writeable = False


def draw_noise(grid, sigma: float, rng_seed) -> NoiseDraw:
    """Independent per-point draws: magnitude sigma*u with u ~ U[0,1), phase U[0,2pi).

    Deterministic for a fixed seed.  The draw fills the whole open disk, which
    stresses the strict bound |w| < sigma.
    """
    g = _as_grid(grid)
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    rng = np.random.default_rng(rng_seed)
    u = rng.random(g.shape[0])
    phase = 2.0 * np.pi * rng.random(g.shape[0])
    return NoiseDraw(sigma * u * np.exp(1j * phase), sigma)


@dataclass
class Measurement:
    """Sampled Fourier data on a frequency grid with cutoff Omega.

    The grid is stored in canonical (lexicographically sorted) order and must
    contain w = 0 and, in 1-D, w = +-Omega.  A mask, when present, is true at
    w = 0 and on the whole ||w|| = Omega boundary.
    """

    omega_grid: np.ndarray
    values: np.ndarray
    cutoff: float
    noise_level: float = 0.0
    mask: np.ndarray | None = None

    def __post_init__(self):
        self.omega_grid = _as_grid(self.omega_grid)
        self.values = np.atleast_1d(np.asarray(self.values, dtype=complex))
        if self.values.shape != (self.omega_grid.shape[0],):
            raise ValueError("values must match the grid size")
        if self.cutoff <= 0:
            raise ValueError("cutoff must be positive")
        if self.noise_level < 0:
            raise ValueError("noise_level must be nonnegative")
        order = _grid_sort_order(self.omega_grid)
        self.omega_grid = self.omega_grid[order]
        self.values = self.values[order]
        if self.mask is not None:
            self.mask = np.atleast_1d(np.asarray(self.mask, dtype=bool))[order]
            if self.mask.shape != (self.omega_grid.shape[0],):
                raise ValueError("mask must match the grid size")
            if not self.mask[boundary_mask_points(self.omega_grid, self.cutoff)].all():
                raise ValueError("mask must be true at omega = 0 and on the boundary")
            self.mask.flags.writeable = False
        _check_grid(self.omega_grid, self.cutoff)
        self.omega_grid.flags.writeable = False
        self.values.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.omega_grid.shape[1]

    @property
    def n_samples(self) -> int:
        return self.omega_grid.shape[0]

    def omega_1d(self) -> np.ndarray:
        if self.dim != 1:
            raise ValueError("measurement is not one-dimensional")
        return self.omega_grid[:, 0]

    def sample_at(self, omega) -> complex:
        """Value at an on-grid frequency (exact up to 1e-9*Omega)."""
        target = np.atleast_1d(np.asarray(omega, dtype=float))
        dist = np.abs(self.omega_grid - target[None, :]).max(axis=1)
        i = int(np.argmin(dist))
        if dist[i] > 1e-9 * self.cutoff:
            raise ValueError(f"measurement grid is missing omega = {target}")
        return complex(self.values[i])

    def active(self) -> np.ndarray:
        """Boolean index of the samples that carry information (mask true)."""
        if self.mask is None:
            return np.ones(self.n_samples, dtype=bool)
        return self.mask


def synthesize(measure: DiscreteMeasure, grid, omega_max: float,
               noise: NoiseDraw | None = None, mask=None) -> Measurement:
    """Sample Y(w) = chi(w) * (F[mu](w) + w(w)) on the given grid.

    Rejects grids that miss w = 0 or the boundary frequencies, and noise draws
    of the wrong length (the magnitude bound is enforced by NoiseDraw itself).
    """
    g = _as_grid(grid, measure.dim)
    _check_grid(g, omega_max)
    values = fourier_transform(measure, g)
    values = np.atleast_1d(np.asarray(values, dtype=complex))
    sigma = 0.0
    if noise is not None:
        if noise.values.shape != (g.shape[0],):
            raise ValueError("noise draw does not match the grid")
        values = values + noise.values
        sigma = noise.sigma
    if mask is not None:
        mask = np.atleast_1d(np.asarray(mask, dtype=bool))
        values = np.where(mask, values, 0.0)
    return Measurement(g, values, omega_max, sigma, mask)


# ---------------------------------------------------------------------------
# Line-oriented serialization.  Shared header "k Omega sigma n"; measure lines
# are "y_1 ... y_k re(a) im(a)" (k+2 fields), measurement lines append a 0/1
# mask flag ("w_1 ... w_k re im mask", k+3 fields).  Floats are written with
# repr() so the round-trip is bit-exact.
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def save_measure(path, measure: DiscreteMeasure, cutoff: float = 0.0,
                 noise_level: float = 0.0) -> None:
    lines = [f"{measure.dim} {_fmt(cutoff)} {_fmt(noise_level)} {measure.n_sources}"]
    for y, a in zip(measure.points, measure.amplitudes):
        coords = " ".join(_fmt(c) for c in y)
        lines.append(f"{coords} {_fmt(a.real)} {_fmt(a.imag)}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_measure(path) -> tuple[DiscreteMeasure, float, float]:
    """Returns (measure, cutoff, noise_level) as recorded in the header."""
    with open(path) as fh:
        rows = [ln.split() for ln in fh if ln.strip()]
    k, cutoff, sigma, n = int(rows[0][0]), float(rows[0][1]), float(rows[0][2]), int(rows[0][3])
    if len(rows) != n + 1:
        raise ValueError(f"expected {n} source lines, found {len(rows) - 1}")
    pts = np.empty((n, k))
    amps = np.empty(n, dtype=complex)
    for i, row in enumerate(rows[1:]):
        if len(row) != k + 2:
            raise ValueError(f"source line {i} has {len(row)} fields, expected {k + 2}")
        pts[i] = [float(v) for v in row[:k]]
        amps[i] = complex(float(row[k]), float(row[k + 1]))
    return DiscreteMeasure(pts, amps), cutoff, sigma


def save_measurement(path, meas: Measurement) -> None:
    lines = [f"{meas.dim} {_fmt(meas.cutoff)} {_fmt(meas.noise_level)} {meas.n_samples}"]
    mask = meas.active()
    for w, v, m in zip(meas.omega_grid, meas.values, mask):
        coords = " ".join(_fmt(c) for c in w)
        lines.append(f"{coords} {_fmt(v.real)} {_fmt(v.imag)} {int(m)}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_measurement(path) -> Measurement:
    with open(path) as fh:
        rows = [ln.split() for ln in fh if ln.strip()]
    k, cutoff, sigma, m = int(rows[0][0]), float(rows[0][1]), float(rows[0][2]), int(rows[0][3])
    if len(rows) != m + 1:
        raise ValueError(f"expected {m} grid lines, found {len(rows) - 1}")
    grid = np.empty((m, k))
    values = np.empty(m, dtype=complex)
    mask = np.empty(m, dtype=bool)
    for i, row in enumerate(rows[1:]):
        if len(row) != k + 3:
            raise ValueError(f"grid line {i} has {len(row)} fields, expected {k + 3}")
        grid[i] = [float(v) for v in row[:k]]
        values[i] = complex(float(row[k]), float(row[k + 1]))
        mask[i] = bool(int(row[k + 2]))
    return Measurement(grid, values, cutoff, sigma, mask if not mask.all() else mask)
