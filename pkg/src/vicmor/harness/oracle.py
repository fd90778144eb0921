"""Cross-checks between the closed forms, the exact first-order solve, and
time integration with the zeroth-order block pinned."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ..errors import VicmorError
from ..liouvillian import IntegratorConfig, frozen_linear_response, pinned_probe_response
from ..params import Manifold, SystemParams, validate_params
from ..perturbative import manifold_coherence

CLOSED_FORM_TOL = 1e-6
INTEGRATION_TOL = 1e-2


def relative_deviation(value: complex, reference: complex) -> float:
    scale = abs(reference)
    return abs(value - reference) / scale if scale > 0 else abs(value - reference)


@dataclass
class ClosedFormRow:
    delta: float
    manifold: str
    linear: complex
    closed: complex | None
    rel_dev: float | None
    error: str = ""


@dataclass
class IntegrationRow:
    delta: float
    manifold: str
    linear: complex
    integrated: complex
    rel_dev: float


@dataclass
class OracleReport:
    params: SystemParams
    closed_form: list[ClosedFormRow] = field(default_factory=list)
    integration: list[IntegrationRow] = field(default_factory=list)

    @property
    def max_closed_form_dev(self) -> tuple[float, ClosedFormRow | None]:
        rows = [r for r in self.closed_form if r.rel_dev is not None]
        if not rows:
            return math.nan, None
        worst = max(rows, key=lambda r: r.rel_dev)
        return worst.rel_dev, worst

    @property
    def closed_form_errors(self) -> list[ClosedFormRow]:
        return [r for r in self.closed_form if r.error]

    @property
    def closed_form_passed(self) -> bool:
        dev, _ = self.max_closed_form_dev
        return not self.closed_form_errors and dev <= CLOSED_FORM_TOL

    @property
    def max_integration_dev(self) -> float:
        return max((r.rel_dev for r in self.integration), default=0.0)

    @property
    def integration_passed(self) -> bool:
        return self.max_integration_dev <= INTEGRATION_TOL

    def to_text(self) -> str:
        p = self.params
        dev, worst = self.max_closed_form_dev
        lines = [
            "oracle check",
            f"parameters: G={p.G} B={p.B} theta={p.theta} Delta={p.Delta} gamma30={p.gamma30} "
            f"g=({p.g1}, {p.g2}; {p.g1p}, {p.g2p}) alpha={p.alpha}",
            "",
            f"closed form vs linear solve ({len(self.closed_form)} evaluations, threshold {CLOSED_FORM_TOL:g})",
        ]
        if worst is not None:
            lines.append(f"  max relative deviation {dev:.6e} at delta={worst.delta:.17g} ({worst.manifold})")
        if self.closed_form_errors:
            lines.append(f"  closed form failed at {len(self.closed_form_errors)} points, first: "
                         f"delta={self.closed_form_errors[0].delta:.17g}: {self.closed_form_errors[0].error}")
        lines.append(f"  result: {'PASS' if self.closed_form_passed else 'DIVERGENT'}")
        lines.append("")
        lines.append(f"linear solve vs pinned integration ({len(self.integration)} spot checks, "
                     f"threshold {INTEGRATION_TOL:g})")
        for r in self.integration:
            lines.append(f"  delta={r.delta:+.6f} {r.manifold:5s} rel dev {r.rel_dev:.3e}")
        lines.append(f"  result: {'PASS' if self.integration_passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def write_csv(self, path: str | Path) -> Path:
        path = Path(path)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["check", "delta", "manifold", "re_linear", "im_linear", "re_other", "im_other", "rel_dev", "error"])
            for r in self.closed_form:
                other = ["", ""] if r.closed is None else [format(r.closed.real, ".17g"), format(r.closed.imag, ".17g")]
                w.writerow(["closed_form", format(r.delta, ".17g"), r.manifold,
                            format(r.linear.real, ".17g"), format(r.linear.imag, ".17g"), *other,
                            "" if r.rel_dev is None else format(r.rel_dev, ".17g"), r.error])
            for r in self.integration:
                w.writerow(["integration", format(r.delta, ".17g"), r.manifold,
                            format(r.linear.real, ".17g"), format(r.linear.imag, ".17g"),
                            format(r.integrated.real, ".17g"), format(r.integrated.imag, ".17g"),
                            format(r.rel_dev, ".17g"), ""])
        return path


def spot_detunings(grid: Sequence[float], count: int = 5) -> list[float]:
    grid = list(grid)
    if len(grid) <= count:
        return grid
    idx = np.unique(np.linspace(0, len(grid) - 1, count + 2).round().astype(int)[1:-1])
    return [grid[i] for i in idx]


def oracle_check(
    p: SystemParams,
    grid: Sequence[float],
    spots: int = 5,
    g_probe: float = 1e-3,
    cfg: IntegratorConfig = IntegratorConfig(sample_every=200.0),
) -> OracleReport:
    """Compare the three first-order routes over a detuning grid.

    Every grid point compares the closed forms with the linear solve, per
    manifold. ``spots`` interior points additionally compare the linear solve
    with a pinned-population time integration at probe strength ``g_probe``.
    """
    validate_params(p)
    report = OracleReport(params=p)
    for delta in grid:
        q = p.with_(delta=float(delta))
        for m in Manifold:
            try:
                linear = manifold_coherence(q, m, "linear_solve")
            except VicmorError as exc:
                report.closed_form.append(ClosedFormRow(float(delta), m.value, complex("nan"), None, None,
                                                        f"linear solve: {exc}"))
                continue
            try:
                closed = manifold_coherence(q, m, "closed_form")
            except VicmorError as exc:
                report.closed_form.append(ClosedFormRow(float(delta), m.value, linear, None, None,
                                                        f"{type(exc).__name__}: {exc}"))
                continue
            report.closed_form.append(
                ClosedFormRow(float(delta), m.value, linear, closed, relative_deviation(closed, linear))
            )
    for delta in spot_detunings(grid, spots):
        q = p.with_(delta=float(delta))
        for m in Manifold:
            try:
                linear = sum(frozen_linear_response(q, m))
            except VicmorError:
                continue
            integrated = sum(pinned_probe_response(q, m, g_probe, cfg))
            report.integration.append(
                IntegrationRow(float(delta), m.value, linear, integrated, relative_deviation(integrated, linear))
            )
    return report
