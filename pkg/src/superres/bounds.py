"""Closed-form resolution limits, combinatorial constants, and verifiers.

All factorial-bearing constants are evaluated through log-gamma so they stay
finite and reproducible far past the n ~ 20 overflow point of direct
factorials; a direct-factorial cross-check is exposed for small n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

#: Distinguished result of diffraction_limit when sigma/m_min > 1/2: a
#: one-source explanation exists no matter the separation, so the limit is
#: reported as an infinite length rather than an error.
NO_SUPER_RESOLUTION = math.inf


def _lfact(n: int) -> float:
    return math.lgamma(n + 1)


def log_zeta(n: int) -> float:
    """log of zeta(n): ((n-1)/2)!^2 for odd n, (n/2)!((n-2)/2)! for even n."""
    if n < 1:
        raise ValueError("zeta(n) needs n >= 1")
    if n % 2 == 1:
        return 2.0 * _lfact((n - 1) // 2)
    return _lfact(n // 2) + _lfact((n - 2) // 2)


def log_xi(n: int) -> float:
    """log of xi(n): 1/2 for n = 1, then factorial quotients by parity."""
    if n < 1:
        raise ValueError("xi(n) needs n >= 1")
    if n == 1:
        return -math.log(2.0)
    if n % 2 == 1:
        return _lfact((n - 1) // 2) + _lfact((n - 3) // 2) - math.log(4.0)
    return 2.0 * _lfact((n - 2) // 2) - math.log(4.0)


def log_lambda(n: int) -> float:
    """log of lambda(n): 1 for n = 2, xi(n-2) for n >= 3."""
    if n < 2:
        raise ValueError("lambda(n) needs n >= 2")
    if n == 2:
        return 0.0
    return log_xi(n - 2)


def log_c(n: int) -> float:
    """log of C(n) = 2^(2n-3/2) e^(2n-1) (max(sqrt(n-2), 1) pi)^(-1/2)."""
    if n < 2:
        raise ValueError("C(n) needs n >= 2")
    root = max(math.sqrt(n - 2), 1.0) if n > 2 else 1.0
    return (2 * n - 1.5) * math.log(2.0) + (2 * n - 1) - 0.5 * math.log(root * math.pi)


@dataclass(frozen=True)
class CombinatorialConstants:
    """Natural-log values of the stability constants for one n."""

    n: int
    log_zeta: float
    log_xi: float
    log_lambda: float | None
    log_c: float | None

    @property
    def zeta(self) -> float:
        return math.exp(self.log_zeta)

    @property
    def xi(self) -> float:
        return math.exp(self.log_xi)


def combinatorial_constants(n: int) -> CombinatorialConstants:
    if n < 1:
        raise ValueError("constants need n >= 1")
    return CombinatorialConstants(
        n=n,
        log_zeta=log_zeta(n),
        log_xi=log_xi(n),
        log_lambda=log_lambda(n) if n >= 2 else None,
        log_c=log_c(n) if n >= 2 else None,
    )


@dataclass(frozen=True)
class LimitQuery:
    """(n, Omega, sigma/m_min) triple fed to the limit formulas."""

    n: int
    omega_max: float
    sigma_over_m: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("limits are defined for n >= 2")
        if self.omega_max <= 0:
            raise ValueError("omega_max must be positive")
        if self.sigma_over_m < 0:
            raise ValueError("sigma/m_min must be nonnegative")


def rayleigh_limit(omega_max: float) -> float:
    return math.pi / omega_max


def diffraction_limit(omega_max: float, sigma_over_m: float) -> float:
    """Two-point diffraction limit 4 arcsin(sqrt(sigma/m)) / Omega.

    For sigma/m > 1/2 a one-source explanation exists at every separation, so
    the distinguished NO_SUPER_RESOLUTION value (inf) is returned.
    """
    if omega_max <= 0:
        raise ValueError("omega_max must be positive")
    if sigma_over_m < 0:
        raise ValueError("sigma/m_min must be nonnegative")
    if sigma_over_m > 0.5:
        return NO_SUPER_RESOLUTION
    return 4.0 * math.asin(math.sqrt(sigma_over_m)) / omega_max


def number_detection_bound_general(n: int, omega_max: float, sigma_over_m: float) -> float:
    """(2 e pi / Omega) (sigma/m)^(1/(2n-2)), valid for every n >= 2."""
    LimitQuery(n, omega_max, sigma_over_m)
    return 2.0 * math.e * math.pi / omega_max * sigma_over_m ** (1.0 / (2 * n - 2))


def number_detection_bound(n: int, omega_max: float, sigma_over_m: float) -> float:
    """Separation above which no admissible measure has fewer than n supports.

    Returns the tightest applicable form: the arcsin refinement for n = 2
    (domain 2 sqrt(sigma/m) <= 1, otherwise a ValueError so the caller can fall
    back to the general form explicitly), the quartic refinement for n = 3,
    and the general 1/(2n-2)-power form for n >= 4.
    """
    LimitQuery(n, omega_max, sigma_over_m)
    if n == 2:
        x = 2.0 * math.sqrt(sigma_over_m)
        if x > 1.0:
            raise ValueError("n = 2 refinement needs 2 sqrt(sigma/m) <= 1; "
                             "use number_detection_bound_general")
        return 2.0 * math.asin(x) / omega_max
    general = number_detection_bound_general(n, omega_max, sigma_over_m)
    if n == 3:
        quartic = 2.0 * math.pi / omega_max * (8.0 * sigma_over_m) ** 0.25
        return min(quartic, general)
    return general


def location_bound_general(n: int, omega_max: float, sigma_over_m: float) -> float:
    """(2.36 e pi / Omega) (sigma/m)^(1/(2n-1)), valid for every n >= 2."""
    LimitQuery(n, omega_max, sigma_over_m)
    return 2.36 * math.e * math.pi / omega_max * sigma_over_m ** (1.0 / (2 * n - 1))


def location_bound(n: int, omega_max: float, sigma_over_m: float) -> float:
    """Separation above which every n-support admissible measure stays within
    the d_min/2-neighborhood of the truth.

    n = 2 uses the refinement (3/Omega) arcsin(2 (sigma/m)^(1/3)), defined for
    2 (sigma/m)^(1/3) <= 1; out of that domain a ValueError is raised and the
    caller falls back to location_bound_general.
    """
    LimitQuery(n, omega_max, sigma_over_m)
    if n == 2:
        x = 2.0 * float(np.cbrt(sigma_over_m))
        if x > 1.0:
            raise ValueError("n = 2 refinement needs 2 (sigma/m)^(1/3) <= 1; "
                             "use location_bound_general")
        return 3.0 * math.asin(x) / omega_max
    return location_bound_general(n, omega_max, sigma_over_m)


def srf(omega_max: float, d_min: float) -> float:
    """Super-resolution factor pi / (Omega d_min)."""
    if d_min <= 0:
        raise ValueError("d_min must be positive")
    if omega_max <= 0:
        raise ValueError("omega_max must be positive")
    return math.pi / (omega_max * d_min)


def location_error_bound(n: int, omega_max: float, srf_value: float,
                         sigma_over_m: float) -> float:
    """|yhat_j - y_j| < C(n)/Omega * SRF^(2n-2) * sigma/m, in log domain."""
    LimitQuery(n, omega_max, sigma_over_m)
    if srf_value < 1.0:
        raise ValueError("SRF must be >= 1")
    if sigma_over_m == 0.0:
        return 0.0
    return math.exp(log_c(n) - math.log(omega_max)
                    + (2 * n - 2) * math.log(srf_value) + math.log(sigma_over_m))


# ---------------------------------------------------------------------------
# Numerical verifiers for the factorial inequalities and product lower bounds
# that underpin the closed-form constants.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InequalityMargins:
    """Log-domain margins (RHS - LHS in logs); every field must be >= 0."""

    n: int
    number_form: float
    location_form: float
    location_constant: float
    stirling_lower: float
    stirling_upper: float

    def min_margin(self) -> float:
        return min(self.number_form, self.location_form, self.location_constant,
                   self.stirling_lower, self.stirling_upper)


@dataclass
class AppendixReport:
    rows: list[InequalityMargins] = field(default_factory=list)

    @property
    def all_nonnegative(self) -> bool:
        return all(r.min_margin() >= 0.0 for r in self.rows)

    @property
    def min_margin(self) -> float:
        return min(r.min_margin() for r in self.rows)


def _stirling_margins(n: int) -> tuple[float, float]:
    log_fact = _lfact(n)
    lower = 0.5 * math.log(2 * math.pi) + (n + 0.5) * math.log(n) - n
    upper = 1.0 + (n + 0.5) * math.log(n) - n
    return log_fact - lower, upper - log_fact


def verify_appendix_inequalities(n_max: int) -> AppendixReport:
    """Check, in log domain for n = 2..n_max:

    (2/(zeta(n) xi(n-1)))^(1/(2n-2)) <= 2e/(n-1)
    (8/(zeta(n) lambda(n)))^(1/(2n-1)) <= 2.36e/(n - 1/2)
    (n-1/2)^(2n-2) / (zeta(n) (n-2)!) <= 2^(n-3/2) e^(2n-1) / (pi^(3/2) max(sqrt(n-2), 1))

    plus the Stirling sandwich sqrt(2 pi) n^(n+1/2) e^-n <= n! <= e n^(n+1/2) e^-n.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    report = AppendixReport()
    for n in range(2, n_max + 1):
        m1 = (math.log(2 * math.e) - math.log(n - 1)
              - (math.log(2.0) - log_zeta(n) - log_xi(n - 1)) / (2 * n - 2))
        m2 = (math.log(2.36 * math.e) - math.log(n - 0.5)
              - (math.log(8.0) - log_zeta(n) - log_lambda(n)) / (2 * n - 1))
        root = max(math.sqrt(n - 2), 1.0) if n > 2 else 1.0
        rhs = (n - 1.5) * math.log(2.0) + (2 * n - 1) - 1.5 * math.log(math.pi) - math.log(root)
        lhs = (2 * n - 2) * math.log(n - 0.5) - log_zeta(n) - _lfact(n - 2)
        m3 = rhs - lhs
        s_lo, s_hi = _stirling_margins(n)
        report.rows.append(InequalityMargins(n, m1, m2, m3, s_lo, s_hi))
    return report


@dataclass
class ProductBoundReport:
    trials: int
    checks: dict[str, int] = field(default_factory=dict)
    violations: dict[str, int] = field(default_factory=dict)

    @property
    def total_violations(self) -> int:
        return sum(self.violations.values())


_REL_SLACK = 1e-12  # floating-point slack when checking strict inequalities


def verify_product_lower_bounds(trials: int, k_max: int, rng_seed) -> ProductBoundReport:
    """Monte Carlo check of the unit-circle product lower bounds.

    Per trial, a sorted configuration theta_1 < ... < theta_k in [-pi/2, pi/2]
    is drawn and three facts are tested: the chord bound
    |e^{i u} - e^{i v}| >= (2/pi)|u - v|, the single-configuration product
    bound with zeta(k), and the mixed-configuration sup bound with xi(k)
    against arbitrary recovered angles.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    rng = np.random.default_rng(rng_seed)
    rep = ProductBoundReport(trials)
    for name in ("chord", "zeta_product", "xi_sup"):
        rep.checks[name] = 0
        rep.violations[name] = 0

    for _ in range(trials):
        k = int(rng.integers(2, k_max + 1))
        theta = np.sort(rng.uniform(-np.pi / 2, np.pi / 2, size=k))
        z = np.exp(1j * theta)
        gaps = np.abs(theta[:, None] - theta[None, :])
        theta_min = gaps[np.triu_indices(k, 1)].min()

        # chord inequality on all pairs
        chord = np.abs(z[:, None] - z[None, :])
        rep.checks["chord"] += 1
        iu = np.triu_indices(k, 1)
        if np.any(chord[iu] < (2 / np.pi) * gaps[iu] * (1 - _REL_SLACK)):
            rep.violations["chord"] += 1

        # zeta(k) product bound, every pivot j
        rhs = math.exp(log_zeta(k)) * (2 * theta_min / np.pi) ** (k - 1)
        rep.checks["zeta_product"] += 1
        for j in range(k):
            lhs = np.prod(np.delete(chord[j], j))
            if lhs < rhs * (1 - _REL_SLACK):
                rep.violations["zeta_product"] += 1
                break

        # xi(k) sup bound: k+1 sorted angles against k arbitrary ones
        kk = int(rng.integers(1, k_max))
        th = np.sort(rng.uniform(-np.pi / 2, np.pi / 2, size=kk + 1))
        th_min = np.diff(th).min()
        th_hat = rng.uniform(-np.pi, np.pi, size=kk)
        eta = np.prod(np.abs(np.exp(1j * th)[:, None] - np.exp(1j * th_hat)[None, :]),
                      axis=1)
        rhs = math.exp(log_xi(kk)) * (2 * th_min / np.pi) ** kk
        rep.checks["xi_sup"] += 1
        if eta.max() < rhs * (1 - _REL_SLACK):
            rep.violations["xi_sup"] += 1
    return rep
