"""Figure-pair rendering from trajectory CSVs.

Input CSVs follow the solver harness schema
(`iter,primal,fw_gap,active_set_size,...`). Two panels come out: active
set size vs iteration, and primal value plus FW gap vs iteration on a
log-linear scale, optionally with values shifted so the smallest plotted
primal reaches 1e-8.
"""

import csv
import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

REQUIRED_COLUMNS = ("iter", "primal", "fw_gap", "active_set_size")
SHIFT_FLOOR = 1e-8
FIGSIZE = (6.0, 4.0)


class SchemaError(Exception):
    """The CSV does not carry the trajectory schema (or has no rows)."""


@dataclass
class Series:
    label: str
    iters: list
    primal: list
    fw_gap: list
    active_set_size: list


@dataclass
class PlotSpec:
    series: list  # (csv path, label) pairs
    out: str
    shift: bool


def load_csv(path, label):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file")
        missing = [c for c in REQUIRED_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise SchemaError(f"{path}: missing columns {missing}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    try:
        return Series(
            label=label,
            iters=[int(r["iter"]) for r in rows],
            primal=[float(r["primal"]) for r in rows],
            fw_gap=[float(r["fw_gap"]) for r in rows],
            active_set_size=[int(r["active_set_size"]) for r in rows],
        )
    except ValueError as exc:
        raise SchemaError(f"{path}: malformed value ({exc})") from exc


def parse_spec_file(path):
    series = []
    out = None
    shift = False
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = dict(
                part.split("=", 1) for part in line.split() if "=" in part
            )
            if "csv" in fields:
                if "label" not in fields:
                    raise ValueError(f"{path}:{lineno}: csv line needs a label")
                series.append((fields["csv"], fields["label"]))
            elif "out" in fields:
                out = fields["out"]
            elif "shift" in fields:
                if fields["shift"] not in ("true", "false"):
                    raise ValueError(f"{path}:{lineno}: shift must be true|false")
                shift = fields["shift"] == "true"
            else:
                raise ValueError(f"{path}:{lineno}: unrecognized line {line!r}")
    if not series:
        raise ValueError(f"{path}: no csv lines")
    if out is None:
        raise ValueError(f"{path}: no out line")
    return PlotSpec(series=series, out=out, shift=shift)


def _panel_paths(out):
    stem, ext = os.path.splitext(out)
    if not ext:
        ext = ".svg"
    return stem + "_sparsity" + ext, stem + "_trajectory" + ext


def render(spec):
    """Render both panels; returns (figures, written paths)."""
    loaded = [load_csv(path, label) for path, label in spec.series]
    # reproducible SVG output: content-derived ids, no embedded date
    plt.rcParams["svg.hashsalt"] = "fwplots"

    fig_sparse, ax = plt.subplots(figsize=FIGSIZE)
    for s in loaded:
        ax.plot(s.iters, s.active_set_size, label=s.label)
    ax.set_xlabel("iteration")
    ax.set_ylabel("active set size")
    ax.legend()
    fig_sparse.tight_layout()

    fig_traj, ax2 = plt.subplots(figsize=FIGSIZE)
    offset = 0.0
    if spec.shift:
        lowest = min(min(s.primal) for s in loaded)
        offset = SHIFT_FLOOR - lowest
    for s in loaded:
        vals = [v + offset for v in s.primal]
        ax2.plot(s.iters, vals, label=f"{s.label} value")
        ax2.plot(s.iters, s.fw_gap, linestyle="--", label=f"{s.label} gap")
    ax2.set_yscale("log")
    ax2.set_xlabel("iteration")
    ax2.set_ylabel("shifted value / gap" if spec.shift else "value / gap")
    ax2.legend()
    fig_traj.tight_layout()

    sparse_path, traj_path = _panel_paths(spec.out)
    fig_sparse.savefig(sparse_path, metadata={"Date": None})
    fig_traj.savefig(traj_path, metadata={"Date": None})
    return (fig_sparse, fig_traj), (sparse_path, traj_path)
