"""Render sweep records to image files (dispersion dotted, absorption solid)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .output import AXIS_LABELS  # noqa: E402
from .sweep import SpectrumRecord  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.2,
    "savefig.dpi": 150,
}

PLUS_COLOR = "tab:blue"
MINUS_COLOR = "black"


def _col(rows, name):
    return [getattr(r, name) for r in rows]


def render_figure(
    records: Sequence[SpectrumRecord],
    destination: str | Path,
    layout: str = "spectrum",
    axis: str = "delta",
    title: str = "",
) -> Path:
    rows = [r for r in records if r.ok]
    if not rows:
        raise ValueError("no successful records to plot")
    x = _col(rows, "axis_value")
    with plt.rc_context(STYLE):
        if layout == "difference":
            fig, axes = plt.subplots(2, 1, sharex=True, figsize=(5.0, 5.0))
            axes[0].plot(x, _col(rows, "birefringence"), "-", color=MINUS_COLOR)
            axes[0].set_ylabel(r"Re($\rho_- - \rho_+$)")
            axes[1].plot(x, _col(rows, "dichroism"), "-", color=MINUS_COLOR)
            axes[1].set_ylabel(r"Im($\rho_- - \rho_+$)")
        else:
            fig, ax = plt.subplots(figsize=(5.0, 3.4))
            axes = [ax]
            if layout == "spectrum":
                ax.plot(x, _col(rows, "re_rho_plus"), ":", color=PLUS_COLOR, label=r"Re $\rho_+$")
                ax.plot(x, _col(rows, "im_rho_plus"), "-", color=PLUS_COLOR, label=r"Im $\rho_+$")
                ax.plot(x, _col(rows, "re_rho_minus"), ":", color=MINUS_COLOR, label=r"Re $\rho_-$")
                ax.plot(x, _col(rows, "im_rho_minus"), "-", color=MINUS_COLOR, label=r"Im $\rho_-$")
            elif layout == "resonance":
                ax.plot(x, _col(rows, "birefringence"), "-", color=MINUS_COLOR, label=r"Re($\rho_- - \rho_+$)")
                ax.plot(x, _col(rows, "dichroism"), "--", color=MINUS_COLOR, label=r"Im($\rho_- - \rho_+$)")
            elif layout == "mor":
                ax.plot(x, _col(rows, "theta_rad"), "-", color=MINUS_COLOR, label=r"$\Theta$ (rad)")
                ax.plot(x, _col(rows, "dichroism"), ":", color=MINUS_COLOR, label=r"Im($\rho_- - \rho_+$)")
            else:
                plt.close(fig)
                raise ValueError(f"unknown layout {layout!r}")
            ax.legend(frameon=False)
        axes[-1].set_xlabel(AXIS_LABELS.get(axis, axis))
        if title:
            axes[0].set_title(title)
        fig.tight_layout()
        path = Path(destination)
        fig.savefig(path)
        plt.close(fig)
    return path
