"""Vandermonde inversion and the exact location-amplitude identities.

Given a true 1-D measure mu = sum_j a_j delta_{y_j} and a recovered measure
mu_hat = sum_l a_hat_l delta_{yhat_l} related by

    F[mu_hat](w) = F[mu](w) + w(w),

the recovered amplitude/location closest to a chosen true source satisfies two
exact algebraic relations driven by the rotated nodes exp(i q w*).  Both are
implemented here with the residual w computed directly as F[mu_hat] - F[mu] on
the arithmetic sampling progression {0, w*, 2 w*, ...}, so they hold to
floating-point accuracy and double as self-tests of the whole pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import DiscreteMeasure, fourier_transform

#: Two rotated nodes closer than this (in modulus of difference) are treated
#: as colliding.  The identities are the test subject, so collisions raise
#: instead of being perturbed away.
ROTATION_COLLISION_TOL = 1e-12


class DegenerateNodesError(ValueError):
    """Nodes coincide, or collide after rotation onto the unit circle."""


def phi_vector(t: complex, p: int, q: int) -> np.ndarray:
    """Geometric column (t^p, ..., t^q)."""
    if q < p:
        raise ValueError("need q >= p")
    return np.asarray(t, dtype=complex) ** np.arange(p, q + 1)


def vandermonde(nodes) -> np.ndarray:
    """Matrix with columns phi_{0,k-1}(t_i)."""
    t = np.asarray(nodes, dtype=complex)
    k = t.shape[0]
    return t[None, :] ** np.arange(k)[:, None]


def _check_distinct(nodes: np.ndarray, tol: float = ROTATION_COLLISION_TOL) -> None:
    k = nodes.shape[0]
    for p in range(k):
        for q in range(p + 1, k):
            if abs(nodes[p] - nodes[q]) < tol:
                raise DegenerateNodesError(
                    f"nodes {p} and {q} coincide within {tol:g}")


def monic_coeffs_ascending(roots) -> np.ndarray:
    """Ascending coefficients of prod_q (X - r_q); the empty product is (1,)."""
    r = np.asarray(roots, dtype=complex)
    c = np.array([1.0 + 0j])
    for root in r:
        nxt = np.zeros(c.shape[0] + 1, dtype=complex)
        nxt[1:] = c           # shift: X * old
        nxt[:-1] -= root * c  # minus root * old
        c = nxt
    return c


def sign_weighted_symmetric_vector(roots) -> np.ndarray:
    """The vector v: ascending coefficients of prod_{q in S}(X - e^{i q w*})."""
    return monic_coeffs_ascending(roots)


def vandermonde_inverse_row(nodes, j: int) -> np.ndarray:
    """Row j of V_k^{-1} via the elementary-symmetric closed form."""
    t = np.asarray(nodes, dtype=complex)
    _check_distinct(t)
    if not 0 <= j < t.shape[0]:
        raise IndexError("row index out of range")
    others = np.delete(t, j)
    coeffs = monic_coeffs_ascending(others)    # ascending, length k
    denom = np.prod(t[j] - others) if others.size else 1.0 + 0j
    return coeffs / denom


def lagrange_weight(nodes, j: int, t) -> complex:
    """Cardinal weight prod_{q != j} (t - t_q) / (t_j - t_q)."""
    z = np.asarray(nodes, dtype=complex)
    _check_distinct(z)
    others = np.delete(z, j)
    if others.size == 0:
        return 1.0 + 0j
    return complex(np.prod((t - others) / (z[j] - others)))


@dataclass
class IdentityContext:
    """Everything both identities share for one target source.

    ``clutter`` is the set S: the other true locations plus the recovered
    locations (excluding the matched one) that do not coincide with a true
    location.  ``v`` is the sign-weighted elementary-symmetric vector of the
    rotated clutter nodes, and ``denom`` = prod_{q in S}(e^{i y_j w*} - e^{i q w*}).
    """

    j: int
    j_prime: int
    y_j: float
    y_hat: float
    clutter: np.ndarray
    omega_star: float
    v: np.ndarray
    denom: complex


def build_identity_context(measure: DiscreteMeasure, recovered: DiscreteMeasure,
                           j: int, omega_star: float,
                           match_tol: float = 0.0) -> IdentityContext:
    """Match the recovered source to y_j, assemble S, v and the node products.

    ``match_tol`` widens the "equal to a true location" test for data that has
    been through a lossy round trip; the default demands exact equality.
    Ties for the closest recovered location go to the smaller index.
    """
    if measure.dim != 1 or recovered.dim != 1:
        raise ValueError("the identities are one-dimensional")
    if omega_star <= 0:
        raise ValueError("omega_star must be positive")
    y = measure.locations_1d()
    y_hat = recovered.locations_1d()
    if not 0 <= j < y.shape[0]:
        raise IndexError("target index out of range")
    j_prime = int(np.argmin(np.abs(y_hat - y[j])))  # argmin takes the first on ties

    clutter = [y[p] for p in range(y.shape[0]) if p != j]
    for l in range(y_hat.shape[0]):
        if l == j_prime:
            continue
        if np.min(np.abs(y[:] - y_hat[l])) <= match_tol:
            continue
        clutter.append(y_hat[l])
    clutter = np.asarray(clutter, dtype=float)

    nodes = np.exp(1j * omega_star * np.concatenate(([y[j]], clutter)))
    try:
        _check_distinct(nodes)
    except DegenerateNodesError as err:
        raise DegenerateNodesError(
            f"rotation by omega_star={omega_star:g} collides nodes: {err}") from None

    roots = nodes[1:]
    v = sign_weighted_symmetric_vector(roots)
    denom = complex(np.prod(nodes[0] - roots)) if roots.size else 1.0 + 0j
    return IdentityContext(j, j_prime, float(y[j]), float(y_hat[j_prime]),
                           clutter, float(omega_star), v, denom)


def _residual_samples(measure, recovered, omega_star, count):
    """w(m w*) = F[mu_hat](m w*) - F[mu](m w*) for m = 0..count-1."""
    ws = omega_star * np.arange(count)
    return fourier_transform(recovered, ws) - fourier_transform(measure, ws)


def identity_amplitude(measure: DiscreteMeasure, recovered: DiscreteMeasure,
                       j: int, omega_star: float, match_tol: float = 0.0):
    """Both sides of the amplitude identity.

    Returns (lhs, noise_term) with

        lhs = a_hat_{j'} prod_{q in S} (e^{i yhat w*} - e^{i q w*}) /
                                       (e^{i y_j w*} - e^{i q w*})
        noise_term = w_1^T v / prod_{q in S}(e^{i y_j w*} - e^{i q w*})

    so that lhs == a_j + noise_term exactly (up to floating point) when w is
    the exact Fourier residual.  Valid for 0 < w* <= Omega / #S.
    """
    ctx = build_identity_context(measure, recovered, j, omega_star, match_tol)
    s = ctx.clutter.shape[0]
    z_hat = np.exp(1j * omega_star * ctx.y_hat)
    roots = np.exp(1j * omega_star * ctx.clutter)
    a_hat = recovered.amplitudes[ctx.j_prime]
    lhs = a_hat * (np.prod((z_hat - roots)) / ctx.denom if s else 1.0)
    w1 = _residual_samples(measure, recovered, omega_star, s + 1)
    noise_term = (w1 @ ctx.v) / ctx.denom
    return complex(lhs), complex(noise_term)


def identity_location(measure: DiscreteMeasure, recovered: DiscreteMeasure,
                      j: int, omega_star: float, match_tol: float = 0.0):
    """Both sides of the location identity.

    Returns (lhs, rhs) with

        lhs = (e^{i yhat w*} - e^{i y_j w*}) a_j
        rhs = (w_2 - e^{i yhat w*} w_1)^T v / prod_{q in S}(e^{i y_j w*} - e^{i q w*})

    where w_1 = (w(0), ..., w(#S w*)) and w_2 = (w(w*), ..., w((#S+1) w*))
    follow the arithmetic sampling progression.  The sign of the right-hand
    side is the one the exact algebra produces (eliminate the recovered
    amplitude between the two shifted Vandermonde relations); magnitude bounds
    are unaffected by it.  Valid for 0 < w* <= Omega / (#S + 1).
    """
    ctx = build_identity_context(measure, recovered, j, omega_star, match_tol)
    s = ctx.clutter.shape[0]
    z_hat = np.exp(1j * omega_star * ctx.y_hat)
    z_j = np.exp(1j * omega_star * ctx.y_j)
    samples = _residual_samples(measure, recovered, omega_star, s + 2)
    w1, w2 = samples[:s + 1], samples[1:]
    lhs = (z_hat - z_j) * measure.amplitudes[j]
    rhs = ((w2 - z_hat * w1) @ ctx.v) / ctx.denom
    return complex(lhs), complex(rhs)
