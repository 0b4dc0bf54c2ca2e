"""Figure specs and the resolve-limit CSV dialect.

A figure spec is the same flat key=value format the experiment configs use:

    kind = phase-scatter        # phase-scatter | limit-curve | music-panel | scaling-loglog
    input = worst.csv           # campaign CSV (music-panel: the spectra CSV)
    out = figure.png
    xmin = 0                    # optional axis ranges
    xmax = 0.6

CSV files start with one '#' metadata line (seed, omega, version, ...),
then a column-header row, then data rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FIGURE_KINDS = ("phase-scatter", "limit-curve", "music-panel", "scaling-loglog")


class SchemaError(ValueError):
    """A CSV does not carry the columns a renderer needs."""


@dataclass
class FigureSpec:
    kind: str
    input: str
    out: str
    axis_ranges: dict = field(default_factory=dict)  # xmin/xmax/ymin/ymax

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; "
                             f"expected one of {FIGURE_KINDS}")


def load_figure_spec(path) -> FigureSpec:
    values: dict = {}
    ranges: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key in ("kind", "input", "out"):
                values[key] = val
            elif key in ("xmin", "xmax", "ymin", "ymax"):
                ranges[key] = float(val)
            else:
                raise ValueError(f"{path}:{lineno}: unknown spec key {key!r}")
    for required in ("kind", "input", "out"):
        if required not in values:
            raise ValueError(f"figure spec is missing {required!r}")
    return FigureSpec(values["kind"], values["input"], values["out"], ranges)


@dataclass
class Table:
    meta: dict
    columns: list[str]
    data: dict  # column -> float ndarray

    def __len__(self):
        return 0 if not self.columns else len(self.data[self.columns[0]])

    def require(self, *names):
        missing = [n for n in names if n not in self.data]
        if missing:
            raise SchemaError(f"missing columns {missing}; file has {self.columns}")
        return [self.data[n] for n in names]


def read_csv(path) -> Table:
    meta: dict = {}
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines:
        raise SchemaError(f"{path}: empty file")
    if lines[0].startswith("#"):
        for token in lines[0].lstrip("# ").split():
            if "=" in token:
                k, _, v = token.partition("=")
                meta[k] = v
        lines = lines[1:]
    if not lines:
        raise SchemaError(f"{path}: no header row")
    columns = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    for i, row in enumerate(rows):
        if len(row) != len(columns):
            raise SchemaError(f"{path}: row {i} has {len(row)} fields, "
                              f"expected {len(columns)}")
    data = {}
    for j, name in enumerate(columns):
        data[name] = np.array([float(r[j]) for r in rows], dtype=float)
    return Table(meta, columns, data)
