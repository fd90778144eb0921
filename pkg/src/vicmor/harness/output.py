"""CSV emission and stand-alone plot scripts for sweep results."""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Sequence

from .sweep import RECORD_FIELDS, SpectrumRecord

AXIS_LABELS = {
    "delta": r"$\delta/\gamma$",
    "B": r"$B/\gamma$",
    "G": r"$G/\gamma$",
    "theta": r"$\theta$ (rad)",
    "alpha": r"$\alpha$ (rad)",
}


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if math.isnan(value):
        return ""
    return format(float(value), ".17g")


def emit_csv(records: Sequence[SpectrumRecord], destination: str | Path) -> Path:
    """Write records with a header row; numbers keep 17 significant digits and
    failed rows leave their numeric cells empty."""
    if not records:
        raise ValueError("no records to write")
    path = Path(destination)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RECORD_FIELDS)
        for rec in records:
            writer.writerow([_fmt(getattr(rec, name)) for name in RECORD_FIELDS])
    return path


def read_csv(path: str | Path) -> list[SpectrumRecord]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            kwargs = {k: (float(v) if v != "" else math.nan) for k, v in row.items() if k != "error"}
            out.append(SpectrumRecord(error=row["error"], **kwargs))
    return out


_SCRIPT = '''\
"""Plot {title} from {csv_name}. Run: python {script_name}"""
import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent
CSV_PATH = HERE / {csv_name!r}
OUT_PATH = Path(sys.argv[1]) if len(sys.argv) > 1 else HERE / {png_name!r}
LAYOUT = {layout!r}


def column(rows, name):
    return [float(r[name]) for r in rows]


with open(CSV_PATH, newline="") as fh:
    rows = [r for r in csv.DictReader(fh) if not r["error"]]
x = column(rows, "axis_value")

if LAYOUT == "spectrum":
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.plot(x, column(rows, "re_rho_plus"), ":", color="tab:blue", label=r"Re $\\rho_+$")
    ax.plot(x, column(rows, "im_rho_plus"), "-", color="tab:blue", label=r"Im $\\rho_+$")
    ax.plot(x, column(rows, "re_rho_minus"), ":", color="black", label=r"Re $\\rho_-$")
    ax.plot(x, column(rows, "im_rho_minus"), "-", color="black", label=r"Im $\\rho_-$")
    ax.legend(frameon=False, fontsize=8)
    axes = [ax]
elif LAYOUT == "difference":
    fig, axes = plt.subplots(2, 1, sharex=True, figsize=(5.0, 5.0))
    axes[0].plot(x, column(rows, "birefringence"), "-", color="black")
    axes[0].set_ylabel(r"Re($\\rho_- - \\rho_+$)")
    axes[1].plot(x, column(rows, "dichroism"), "-", color="black")
    axes[1].set_ylabel(r"Im($\\rho_- - \\rho_+$)")
elif LAYOUT == "resonance":
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.plot(x, column(rows, "birefringence"), "-", color="black", label=r"Re($\\rho_- - \\rho_+$)")
    ax.plot(x, column(rows, "dichroism"), "--", color="black", label=r"Im($\\rho_- - \\rho_+$)")
    ax.legend(frameon=False, fontsize=8)
    axes = [ax]
else:
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.plot(x, column(rows, "theta_rad"), "-", color="black", label=r"$\\Theta$ (rad)")
    ax.plot(x, column(rows, "dichroism"), ":", color="black", label=r"Im($\\rho_- - \\rho_+$)")
    ax.legend(frameon=False, fontsize=8)
    axes = [ax]

axes[-1].set_xlabel({axis_label!r})
axes[0].set_title({title!r}, fontsize=9)
fig.tight_layout()
fig.savefig(OUT_PATH, dpi=150)
print(OUT_PATH)
'''


def emit_plot_script(
    records: Sequence[SpectrumRecord],
    destination: str | Path,
    csv_name: str,
    layout: str = "spectrum",
    axis: str = "delta",
    title: str = "",
) -> Path:
    """Write a self-contained matplotlib script that redraws the figure from
    ``csv_name`` (resolved next to the script)."""
    if not records:
        raise ValueError("no records to plot")
    path = Path(destination)
    text = _SCRIPT.format(
        title=title or Path(csv_name).stem,
        csv_name=csv_name,
        script_name=path.name,
        png_name=Path(csv_name).with_suffix(".png").name,
        layout=layout,
        axis_label=AXIS_LABELS.get(axis, axis),
    )
    path.write_text(text, encoding="utf-8")
    return path
