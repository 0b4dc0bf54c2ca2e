"""render_figs <figure-spec file>: render one figure from experiment CSV data."""

from __future__ import annotations

import argparse
import sys

from .figspec import SchemaError, load_figure_spec
from .render import render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="render_figs",
                                     description=__doc__.splitlines()[0])
    parser.add_argument("spec", help="key=value figure spec file")
    args = parser.parse_args(argv)
    try:
        spec = load_figure_spec(args.spec)
        out = render(spec)
    except SchemaError as err:
        print(f"render_figs: CSV schema mismatch: {err}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as err:
        print(f"render_figs: {err}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
