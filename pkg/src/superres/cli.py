"""resolve-limit: command-line front end.

Subcommands:
  limits             table of closed-form bounds for (n, Omega, sigma/m)
  detect             source-number detection from a measurement file
  oracle             empirical two-point limit (single ratio or --sweep CSV)
  random-1d, worst-1d, impossible-regime, random-2d,
  music-compare, amplitude-scaling, limit-sweep
                     seeded experiment campaigns writing CSV

Exit code 0 on success, 2 when a campaign violates a proven guarantee.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

from ._version import __version__
from . import bounds
from .detect import default_directions, detect_1d, detect_multid, music_spectrum
from .harness import (EXPERIMENT_KINDS, ExperimentConfig, load_config,
                      run_experiment, write_csv)
from .model import load_measurement
from .oracle import empirical_two_point_limit


def _limits_rows(n: int, omega: float, ratio: float) -> list[tuple[str, str]]:
    rows = [("rayleigh_limit", repr(bounds.rayleigh_limit(omega))),
            ("diffraction_limit", repr(bounds.diffraction_limit(omega, ratio)))]
    try:
        rows.append(("number_detection_bound",
                     repr(bounds.number_detection_bound(n, omega, ratio))))
    except ValueError:
        rows.append(("number_detection_bound", "outside refinement domain"))
    rows.append(("number_detection_bound_general",
                 repr(bounds.number_detection_bound_general(n, omega, ratio))))
    try:
        rows.append(("location_bound", repr(bounds.location_bound(n, omega, ratio))))
    except ValueError:
        rows.append(("location_bound", "outside refinement domain"))
    rows.append(("location_bound_general",
                 repr(bounds.location_bound_general(n, omega, ratio))))
    rows.append(("location_error_constant_C", repr(math.exp(bounds.log_c(n)))))
    return rows


def _cmd_limits(args) -> int:
    rows = _limits_rows(args.n, args.omega, args.ratio)
    if args.csv is not None:
        lines = ["bound,value"] + [f"{k},{v}" for k, v in rows]
        text = "\n".join(lines) + "\n"
        if args.csv == "-":
            sys.stdout.write(text)
        else:
            with open(args.csv, "w") as fh:
                fh.write(text)
    else:
        width = max(len(k) for k, _ in rows)
        print(f"n={args.n}  omega={args.omega}  sigma/m={args.ratio}")
        for k, v in rows:
            print(f"  {k:<{width}}  {v}")
    return 0


def _cmd_detect(args) -> int:
    meas = load_measurement(args.measurement)
    if meas.dim == 1:
        res = detect_1d(meas, args.sigma)
    else:
        directions = default_directions(args.directions)

        def field_fn(om):
            return meas.sample_at(om)

        res = detect_multid(field_fn, meas.cutoff, args.sigma, directions)
    print(f"detected_n={res.detected_n}")
    print(f"sigma2_hat={res.singular_values[:, 1].max()!r} threshold={res.threshold!r}")
    if res.direction_index is not None:
        print(f"direction={res.direction_index}")
    if args.music:
        if meas.dim != 1:
            raise SystemExit("--music needs a one-dimensional measurement")
        import numpy as np
        scan = np.linspace(-np.pi / meas.cutoff, np.pi / meas.cutoff, args.music_scan)
        spec = music_spectrum(meas, args.assumed_n, scan)
        write_csv(args.music, ("location", "power"),
                  [[y, p] for y, p in zip(scan, spec)],
                  f"# resolve-limit v{__version__} kind=music-spectrum "
                  f"assumed_n={args.assumed_n}")
        print(f"music_spectrum -> {args.music}")
    return 0


def _cmd_oracle(args) -> int:
    if args.sweep:
        import numpy as np
        rows = []
        for ratio in np.geomspace(args.ratio_low, args.ratio_high, args.ratios):
            empirical = empirical_two_point_limit(args.m, args.omega,
                                                  ratio * args.m,
                                                  tolerance=args.tolerance)
            formula = bounds.diffraction_limit(args.omega, ratio)
            rows.append([float(ratio), empirical, formula])
        write_csv(args.sweep, ("ratio", "d_transition_empirical", "d_formula"),
                  rows, f"# resolve-limit v{__version__} kind=oracle-sweep "
                        f"omega={args.omega!r} m={args.m!r}")
        print(f"oracle sweep -> {args.sweep}")
        return 0
    empirical = empirical_two_point_limit(args.m, args.omega, args.sigma,
                                          tolerance=args.tolerance)
    print(f"empirical_two_point_limit={empirical!r}")
    print(f"formula={bounds.diffraction_limit(args.omega, args.sigma / args.m)!r}")
    return 0


def _cmd_experiment(kind: str, args) -> int:
    if args.config:
        cfg = load_config(args.config)
        if cfg.kind != kind:
            cfg = replace(cfg, kind=kind)
    else:
        cfg = ExperimentConfig(kind=kind)
    overrides = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["out"] = args.out
    if overrides:
        cfg = replace(cfg, **overrides)
    violations, info = run_experiment(cfg)
    if "successes" in info:
        n = len(info["records"])
        print(f"{kind}: {info['successes']}/{n} successes, "
              f"{violations} guarantee violations")
    elif "cases" in info:
        print(f"{kind}: {len(info['cases'])} contrast cases found")
    elif "rows" in info and kind == "limit-sweep":
        worst = max(r.rel_gap for r in info["rows"])
        print(f"{kind}: worst relative gap {worst:.4f}")
    elif kind == "amplitude-scaling":
        print(f"{kind}: slope_fixed={info['slope_fixed']:.3f} "
              f"slope_perturbed={info['slope_perturbed']:.3f}")
    if cfg.out:
        print(f"csv -> {cfg.out}")
    return 2 if violations else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="resolve-limit",
                                     description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("limits", help="closed-form bound table")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--ratio", type=float, required=True, help="sigma / m_min")
    p.add_argument("--csv", nargs="?", const="-", default=None,
                   help="CSV output (path, or '-' for stdout)")

    p = sub.add_parser("detect", help="detect the source number from a file")
    p.add_argument("measurement", help="measurement file")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--directions", type=int, default=10,
                   help="direction count for multi-D measurements")
    p.add_argument("--music", default=None, help="also write a MUSIC spectrum CSV")
    p.add_argument("--assumed-n", type=int, default=2)
    p.add_argument("--music-scan", type=int, default=2048)

    p = sub.add_parser("oracle", help="empirical two-point limit")
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--sigma", type=float, default=0.1)
    p.add_argument("--tolerance", type=float, default=0.005)
    p.add_argument("--sweep", default=None, help="write a ratio-sweep CSV here")
    p.add_argument("--ratios", type=int, default=10)
    p.add_argument("--ratio-low", type=float, default=0.02)
    p.add_argument("--ratio-high", type=float, default=0.5)

    for kind in EXPERIMENT_KINDS:
        p = sub.add_parser(kind, help=f"run the {kind} campaign")
        p.add_argument("--config", default=None, help="key=value config file")
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None, help="output CSV path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "limits":
        return _cmd_limits(args)
    if args.command == "detect":
        return _cmd_detect(args)
    if args.command == "oracle":
        return _cmd_oracle(args)
    return _cmd_experiment(args.command, args)


if __name__ == "__main__":
    sys.exit(main())
