"""Renderers for the four figure kinds.

Every renderer is read-only over its CSV input and returns the matplotlib
Figure before saving, so tests can inspect the canvas pixel-for-pixel.
"""

from __future__ import annotations

import numpy as np
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .figspec import FigureSpec, SchemaError, Table, read_csv

SUCCESS_COLOR = "#00a000"
FAILURE_COLOR = "#d00000"
CURVE_COLOR = "black"
SHADE_COLOR = "0.85"
NO_SR_RATIO = 0.5  # beyond sigma/m = 1/2 there is no finite limit


def _omega(table: Table) -> float:
    return float(table.meta.get("omega", 1.0))


def limit_curve(ratios, omega):
    return 4.0 * np.arcsin(np.sqrt(ratios)) / omega


def _apply_ranges(ax, spec: FigureSpec):
    r = spec.axis_ranges
    if "xmin" in r or "xmax" in r:
        ax.set_xlim(r.get("xmin", ax.get_xlim()[0]), r.get("xmax", ax.get_xlim()[1]))
    if "ymin" in r or "ymax" in r:
        ax.set_ylim(r.get("ymin", ax.get_ylim()[0]), r.get("ymax", ax.get_ylim()[1]))


def render_phase_scatter(table: Table, spec: FigureSpec):
    """Green/red detection outcomes over (sigma/m, d_min), limit curve overlaid.

    The overlay is drawn only for sigma/m <= 1/2; the hopeless region beyond
    is shaded and labeled (in gray: the curve is the only black element).
    """
    omega = _omega(table)
    fig, ax = plt.subplots(figsize=(7.2, 5.4), dpi=110)
    if len(table):
        ratio, d_min, success = table.require("ratio", "d_min", "success")
        ok = success > 0.5
        # crisp solid squares: the pixel-level verification samples these
        ax.scatter(ratio[~ok], d_min[~ok], s=5, c=FAILURE_COLOR, marker="s",
                   linewidths=0, antialiased=False, label="failure")
        ax.scatter(ratio[ok], d_min[ok], s=5, c=SUCCESS_COLOR, marker="s",
                   linewidths=0, antialiased=False, label="success")
        xmax = max(float(ratio.max()) * 1.03, 1e-6)
        ymax = max(float(d_min.max()) * 1.03, 1e-6)
    else:
        xmax, ymax = 1.0, np.pi / omega
    ax.set_xlim(0.0, xmax)
    ax.set_ylim(0.0, ymax)

    rr = np.linspace(0.0, NO_SR_RATIO, 400)
    ax.plot(rr, limit_curve(rr, omega), color=CURVE_COLOR, linewidth=1.8,
            label="diffraction limit", zorder=3)
    if xmax > NO_SR_RATIO:
        ax.axvspan(NO_SR_RATIO, xmax, color=SHADE_COLOR, zorder=0)
        ax.text(0.5 * (NO_SR_RATIO + xmax), 0.5 * ymax, "no super-resolution",
                color="0.35", ha="center", va="center", rotation=90, fontsize=9)
    ax.set_xlabel(r"$\sigma / m_{\min}$")
    ax.set_ylabel(r"$d_{\min}$")
    kind = table.meta.get("kind", "campaign")
    ax.set_title(f"Number detection outcomes ({kind})", pad=28)
    # keep the legend out of the data region: the pixel check samples points
    ax.legend(loc="lower center", bbox_to_anchor=(0.5, 1.0), ncols=3,
              frameon=False, fontsize=8, borderaxespad=0.2)
    _apply_ranges(ax, spec)
    fig.tight_layout()
    return fig, ax


def render_limit_curve(table: Table, spec: FigureSpec):
    """Formula vs empirical transition separation, with a relative-gap panel."""
    fig, (ax, gax) = plt.subplots(
        2, 1, figsize=(6.8, 6.4), dpi=110, sharex=True,
        gridspec_kw={"height_ratios": [3, 1]})
    if len(table):
        ratio, formula, empirical, gap = table.require(
            "ratio", "formula_limit", "empirical_limit", "rel_gap")
        ax.plot(ratio, formula, "-", color=CURVE_COLOR, label="closed form")
        ax.plot(ratio, empirical, "o", ms=4, color="#1060c0", label="oracle")
        gax.plot(ratio, 100 * gap, "o-", ms=3, color="#1060c0")
    ax.set_ylabel("transition separation")
    ax.set_title("Two-point limit: oracle vs closed form")
    ax.legend()
    gax.axhline(2.0, color="0.6", linestyle="--", linewidth=1)
    gax.set_ylabel("gap (%)")
    gax.set_xlabel(r"$\sigma / m_{\min}$")
    _apply_ranges(ax, spec)
    return fig, ax


def _peaks(power, prominence=0.2):
    floor = prominence * power.max()
    inner = power[1:-1]
    idx = np.nonzero((inner > power[:-2]) & (inner > power[2:]) & (inner > floor))[0]
    return idx + 1


def render_music_panel(table: Table, spec: FigureSpec):
    """One pseudospectrum per case, detected peaks marked."""
    if len(table):
        case, location, power = table.require("case", "location", "power")
        ids = sorted(set(int(c) for c in case))
    else:
        ids = []
    n = max(len(ids), 1)
    ncols = min(n, 3)
    nrows = (n + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(3.4 * ncols, 2.6 * nrows),
                             dpi=110, squeeze=False)
    for k, cid in enumerate(ids):
        ax = axes[k // ncols][k % ncols]
        sel = case == cid
        y, p = location[sel], power[sel]
        ax.plot(y, p, color="#1060c0", linewidth=1.0)
        pk = _peaks(p)
        ax.plot(y[pk], p[pk], "v", color=FAILURE_COLOR, ms=6)
        ax.set_title(f"case {cid}: {len(pk)} peak(s)", fontsize=9)
        ax.set_xlabel("location")
    for k in range(len(ids), nrows * ncols):
        axes[k // ncols][k % ncols].set_axis_off()
    fig.suptitle("MUSIC pseudospectra")
    fig.tight_layout()
    return fig, axes[0][0]


def render_scaling_loglog(table: Table, spec: FigureSpec):
    """Worst amplitude error vs SRF on log-log axes, fitted slopes annotated."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8), dpi=110)
    if len(table):
        (srf,) = table.require("srf")
        for column, color, label in (("err_fixed", "#1060c0", "target pinned"),
                                     ("err_perturbed", "#c07010", "both perturbed")):
            if column not in table.data:
                continue
            err = table.data[column]
            keep = err > 0
            if keep.sum() >= 2:
                slope = np.polyfit(np.log(srf[keep]), np.log(err[keep]), 1)[0]
                ax.loglog(srf[keep], err[keep], "o-", color=color,
                          label=f"{label} (slope {slope:.2f})")
    ax.set_xlabel("SRF")
    ax.set_ylabel("worst amplitude error")
    ax.set_title("Amplitude error scaling")
    ax.legend()
    _apply_ranges(ax, spec)
    return fig, ax


_RENDERERS = {
    "phase-scatter": render_phase_scatter,
    "limit-curve": render_limit_curve,
    "music-panel": render_music_panel,
    "scaling-loglog": render_scaling_loglog,
}


def render(spec: FigureSpec) -> str:
    """Render the figure described by the spec and write the image file."""
    table = read_csv(spec.input)
    fig, _ = _RENDERERS[spec.kind](table, spec)
    fig.savefig(spec.out)
    plt.close(fig)
    return spec.out
