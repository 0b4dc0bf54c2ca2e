"""Figure-package tests, including the pixel-level acceptance check.

Campaign CSVs are produced through the primary package's command-line
interface (the only coupling between the two packages is that CLI plus the
documented CSV schema).
"""

import subprocess
import sys

import numpy as np
import pytest

from resolvefigs.figspec import (FigureSpec, SchemaError, load_figure_spec,
                                 read_csv)
from resolvefigs.render import (limit_curve, render, render_phase_scatter)


def _run_primary(*args):
    cmd = [sys.executable, "-m", "superres.cli", *args]
    subprocess.run(cmd, check=True, capture_output=True, text=True)


@pytest.fixture(scope="session")
def campaign_dir(tmp_path_factory):
    base = tmp_path_factory.mktemp("campaigns")
    _run_primary("worst-1d", "--trials", "5000", "--seed", "42",
                 "--out", str(base / "worst.csv"))
    _run_primary("limit-sweep", "--out", str(base / "sweep.csv"))
    cfg = base / "music.cfg"
    cfg.write_text("experiment = music-compare\ntrials = 2000\nmax_cases = 4\n")
    _run_primary("music-compare", "--config", str(cfg), "--seed", "3",
                 "--out", str(base / "music.csv"))
    _run_primary("amplitude-scaling", "--out", str(base / "scaling.csv"))
    return base


# --------------------------------------------------------------------------
# spec and CSV parsing
# --------------------------------------------------------------------------

def test_figure_spec_parsing(tmp_path):
    spec_file = tmp_path / "fig.cfg"
    spec_file.write_text("""
kind = phase-scatter
input = data.csv     # comment
out = fig.png
xmax = 0.6
""")
    spec = load_figure_spec(spec_file)
    assert spec.kind == "phase-scatter"
    assert spec.input == "data.csv"
    assert spec.axis_ranges == {"xmax": 0.6}


def test_figure_spec_rejects_unknown(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("kind = phase-scatter\ninput = a.csv\nout = b.png\nwat = 1\n")
    with pytest.raises(ValueError):
        load_figure_spec(bad)
    bad.write_text("kind = pie-chart\ninput = a.csv\nout = b.png\n")
    with pytest.raises(ValueError):
        load_figure_spec(bad)


def test_read_csv_roundtrip(campaign_dir):
    table = read_csv(campaign_dir / "worst.csv")
    assert table.meta["kind"] == "worst-1d"
    assert table.meta["seed"] == "42"
    assert len(table) == 5000
    ratio, success = table.require("ratio", "success")
    assert set(np.unique(success)) <= {0.0, 1.0}
    with pytest.raises(SchemaError):
        table.require("no_such_column")


# --------------------------------------------------------------------------
# rendering
# --------------------------------------------------------------------------

def _pixel_classes(fig, ax, xs, ys):
    """Classify each data point from the rendered pixels: +1 green, -1 red.

    A 5x5 window around the point is sampled first; if no colored pixel lands
    there (occlusion by the overlay curve), the window widens once.
    """
    fig.canvas.draw()
    buf = np.asarray(fig.canvas.buffer_rgba()).astype(int)
    height = buf.shape[0]
    pts = ax.transData.transform(np.column_stack([xs, ys]))
    out = np.zeros(len(xs), dtype=int)
    for i, (px, py) in enumerate(pts):
        col, row = int(round(px)), int(round(height - 1 - py))
        for half in (2, 5):
            win = buf[max(row - half, 0):row + half + 1,
                      max(col - half, 0):col + half + 1]
            red = int((win[..., 0] > win[..., 1] + 30).sum())
            green = int((win[..., 1] > win[..., 0] + 30).sum())
            if green > red:
                out[i] = 1
                break
            if red > green:
                out[i] = -1
                break
    return out, buf


def test_phase_scatter_pixel_classification(campaign_dir, tmp_path):
    """[SECONDARY] acceptance: pixel classes match the success column >= 99%,
    and the overlay curve exists only for sigma/m <= 1/2."""
    table = read_csv(campaign_dir / "worst.csv")
    spec = FigureSpec("phase-scatter", str(campaign_dir / "worst.csv"),
                      str(tmp_path / "worst.png"))
    fig, ax = render_phase_scatter(table, spec)
    ratio, d_min, success = table.require("ratio", "d_min", "success")
    classes, buf = _pixel_classes(fig, ax, ratio, d_min)
    expected = np.where(success > 0.5, 1, -1)
    match = np.mean(classes == expected)
    assert match >= 0.99, f"only {match:.3%} of points classified correctly"

    # overlay: near-black pixels on the curve for ratio <= 1/2 ...
    omega = float(table.meta["omega"])
    height = buf.shape[0]
    dark = (buf[..., :3].max(axis=2) < 60)
    for r in np.linspace(0.05, 0.45, 9):
        px, py = ax.transData.transform((r, limit_curve(np.array([r]), omega)[0]))
        col, row = int(round(px)), int(round(height - 1 - py))
        assert dark[row - 3:row + 4, col - 3:col + 4].any(), f"no curve at {r:.2f}"
    # ... and nowhere inside the shaded sigma/m > 1/2 region
    ymax = ax.get_ylim()[1]
    for r in np.linspace(0.55, 0.95, 5):
        for y in np.linspace(0.1 * ymax, 0.9 * ymax, 7):
            px, py = ax.transData.transform((r, y))
            col, row = int(round(px)), int(round(height - 1 - py))
            assert not dark[row - 2:row + 3, col - 2:col + 3].any()
    import matplotlib.pyplot as plt
    plt.close(fig)
    print("ACCEPTANCE phase-scatter-rendering: PASS "
          f"(pixel match {match:.4f}, overlay curve confined to ratio <= 1/2)")


def test_render_all_kinds_via_cli(campaign_dir, tmp_path):
    from resolvefigs.cli import main
    jobs = [("phase-scatter", "worst.csv"), ("limit-curve", "sweep.csv"),
            ("music-panel", "music_spectra.csv"), ("scaling-loglog", "scaling.csv")]
    for kind, csv_name in jobs:
        spec_file = tmp_path / f"{kind}.cfg"
        out = tmp_path / f"{kind}.png"
        spec_file.write_text(f"kind = {kind}\ninput = {campaign_dir / csv_name}\n"
                             f"out = {out}\n")
        assert main([str(spec_file)]) == 0
        assert out.exists() and out.stat().st_size > 0


def test_render_is_deterministic(campaign_dir, tmp_path):
    spec1 = FigureSpec("limit-curve", str(campaign_dir / "sweep.csv"),
                       str(tmp_path / "a.png"))
    spec2 = FigureSpec("limit-curve", str(campaign_dir / "sweep.csv"),
                       str(tmp_path / "b.png"))
    render(spec1)
    render(spec2)
    assert (tmp_path / "a.png").read_bytes() == (tmp_path / "b.png").read_bytes()


def test_empty_trials_render_axes_only(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("# resolve-limit v0 kind=worst-1d seed=0 omega=1.0 trials=0\n"
                     "trial,ratio,d_min,true_n,detected_n,sigma2_hat,threshold,success\n")
    spec_file = tmp_path / "spec.cfg"
    out = tmp_path / "empty.png"
    spec_file.write_text(f"kind = phase-scatter\ninput = {empty}\nout = {out}\n")
    from resolvefigs.cli import main
    assert main([str(spec_file)]) == 0
    assert out.exists()


def test_schema_mismatch_exits_nonzero(campaign_dir, tmp_path, capsys):
    from resolvefigs.cli import main
    spec_file = tmp_path / "spec.cfg"
    out = tmp_path / "x.png"
    # feed the sweep CSV to the scatter renderer: wrong columns
    spec_file.write_text(f"kind = phase-scatter\ninput = {campaign_dir / 'sweep.csv'}\n"
                         f"out = {out}\n")
    assert main([str(spec_file)]) == 1
    err = capsys.readouterr().err
    assert "missing columns" in err and "d_min" in err
