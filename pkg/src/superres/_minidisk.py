"""Exact smallest enclosing circle of planar points (jit-compiled hot path).

The one-source minimax fit reduces, for a fixed trial location, to the
Chebyshev center of a few hundred points in the complex plane, so this kernel
runs tens of thousands of times per experiment campaign.  The incremental
Welzl construction is expected-linear once the input order is randomized; a
fixed-seed LCG shuffle keeps every call deterministic.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _shuffled_indices(n):
    idx = np.arange(n)
    state = np.uint64(0x9E3779B97F4A7C15)
    for i in range(n - 1, 0, -1):
        state = state * np.uint64(6364136223846793005) + np.uint64(1442695040888963407)
        j = int(state % np.uint64(i + 1))
        tmp = idx[i]
        idx[i] = idx[j]
        idx[j] = tmp
    return idx


@njit(cache=True)
def enclosing_circle(xs, ys):
    """Return (cx, cy, r) of the smallest circle containing all points."""
    n = xs.shape[0]
    idx = _shuffled_indices(n)
    eps = 1e-14

    cx = xs[idx[0]]
    cy = ys[idx[0]]
    r2 = 0.0
    for ii in range(1, n):
        i = idx[ii]
        dx = xs[i] - cx
        dy = ys[i] - cy
        if dx * dx + dy * dy <= r2 * (1.0 + eps) + 1e-300:
            continue
        # p_i must be on the boundary
        cx = xs[i]
        cy = ys[i]
        r2 = 0.0
        for jj in range(ii):
            j = idx[jj]
            dx = xs[j] - cx
            dy = ys[j] - cy
            if dx * dx + dy * dy <= r2 * (1.0 + eps) + 1e-300:
                continue
            # p_i and p_j on the boundary
            cx = 0.5 * (xs[i] + xs[j])
            cy = 0.5 * (ys[i] + ys[j])
            dx = xs[i] - cx
            dy = ys[i] - cy
            r2 = dx * dx + dy * dy
            for kk in range(jj):
                k = idx[kk]
                dx = xs[k] - cx
                dy = ys[k] - cy
                if dx * dx + dy * dy <= r2 * (1.0 + eps) + 1e-300:
                    continue
                # circumcircle of p_i, p_j, p_k
                ax = xs[i]; ay = ys[i]
                bx = xs[j]; by = ys[j]
                qx = xs[k]; qy = ys[k]
                det = 2.0 * (ax * (by - qy) + bx * (qy - ay) + qx * (ay - by))
                if abs(det) < 1e-30:
                    # nearly collinear support: widest diameter circle
                    best = -1.0
                    bx_ = 0.0; by_ = 0.0
                    for (px, py, sx, sy) in ((ax, ay, bx, by), (ax, ay, qx, qy),
                                             (bx, by, qx, qy)):
                        mx = 0.5 * (px + sx)
                        my = 0.5 * (py + sy)
                        ddx = px - mx
                        ddy = py - my
                        rr = ddx * ddx + ddy * ddy
                        if rr > best:
                            best = rr
                            bx_ = mx
                            by_ = my
                    cx = bx_; cy = by_; r2 = best
                else:
                    aa = ax * ax + ay * ay
                    bb = bx * bx + by * by
                    qq = qx * qx + qy * qy
                    cx = (aa * (by - qy) + bb * (qy - ay) + qq * (ay - by)) / det
                    cy = (aa * (qx - bx) + bb * (ax - qx) + qq * (bx - ax)) / det
                    dx = ax - cx
                    dy = ay - cy
                    r2 = dx * dx + dy * dy
    return cx, cy, np.sqrt(r2)


@njit(cache=True)
def scan_rotations(re, im, omegas, shifts):
    """For each trial location y, Chebyshev radius of {T(w) e^{-i y w}}.

    Returns (best_index, centers_x, centers_y, radii): the per-shift enclosing
    circles plus the index of the smallest radius (first index on ties).
    """
    m = omegas.shape[0]
    t = shifts.shape[0]
    radii = np.empty(t)
    cxs = np.empty(t)
    cys = np.empty(t)
    xs = np.empty(m)
    ys = np.empty(m)
    best = 0
    best_r = 1e300
    for s in range(t):
        y = shifts[s]
        for i in range(m):
            c = np.cos(y * omegas[i])
            sn = np.sin(y * omegas[i])
            # multiply by exp(-i y w)
            xs[i] = re[i] * c + im[i] * sn
            ys[i] = im[i] * c - re[i] * sn
        cx, cy, r = enclosing_circle(xs, ys)
        radii[s] = r
        cxs[s] = cx
        cys[s] = cy
        if r < best_r:
            best_r = r
            best = s
    return best, cxs, cys, radii
