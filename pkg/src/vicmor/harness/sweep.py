"""Parameter sweeps and the figure presets."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from functools import partial
from typing import Any, Mapping

import numpy as np

from ..errors import ParameterError, VicmorError
from ..observables import MediumParams, mor_angle
from ..params import SystemParams, validate_params
from ..perturbative import COEFFICIENT_SOURCES, total_coherence

AXES = ("delta", "B", "G", "theta", "alpha")


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    min: float
    max: float
    points: int
    base: SystemParams = field(default_factory=SystemParams)
    medium: MediumParams = field(default_factory=MediumParams)
    coefficient_source: str = "linear_solve"
    name: str = ""

    def __post_init__(self):
        bad = []
        if self.axis not in AXES:
            bad.append(("axis", self.axis, f"axis must be one of {AXES}"))
        if not self.min < self.max:
            bad.append(("min", self.min, f"min ({self.min}) must be < max ({self.max})"))
        if int(self.points) != self.points or self.points < 2:
            bad.append(("points", self.points, "points must be an integer >= 2"))
        if self.coefficient_source not in COEFFICIENT_SOURCES:
            bad.append(("coefficient_source", self.coefficient_source, f"must be one of {COEFFICIENT_SOURCES}"))
        if bad:
            raise ParameterError(bad)

    def axis_values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, int(self.points))


@dataclass(frozen=True)
class SpectrumRecord:
    axis_value: float
    re_rho_plus: float = math.nan
    im_rho_plus: float = math.nan
    re_rho_minus: float = math.nan
    im_rho_minus: float = math.nan
    birefringence: float = math.nan
    dichroism: float = math.nan
    theta_rad: float = math.nan
    theta_deg: float = math.nan
    error: str = ""

    @property
    def ok(self) -> bool:
        return not self.error


RECORD_FIELDS = [f.name for f in fields(SpectrumRecord)]


def evaluate_point(spec: SweepSpec, value: float) -> SpectrumRecord:
    value = float(value)
    try:
        p = validate_params(spec.base.with_(**{spec.axis: value}))
        pair = total_coherence(p, spec.coefficient_source)
        mor = mor_angle(pair, spec.medium)
    except VicmorError as exc:
        return SpectrumRecord(axis_value=value, error=f"{type(exc).__name__}: {exc}")
    return SpectrumRecord(
        axis_value=value,
        re_rho_plus=pair.rho_plus.real,
        im_rho_plus=pair.rho_plus.imag,
        re_rho_minus=pair.rho_minus.real,
        im_rho_minus=pair.rho_minus.imag,
        birefringence=mor.birefringence,
        dichroism=mor.dichroism,
        theta_rad=mor.theta,
        theta_deg=mor.theta_deg,
    )


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[SpectrumRecord]:
    """Evaluate ``spec`` at every axis value, in axis order.

    Failures at individual points are recorded in the row's ``error`` field.
    With ``jobs > 1`` points are spread over worker processes; every point is
    computed independently, so the result does not depend on ``jobs``.
    """
    validate_params(spec.base)
    values = spec.axis_values()
    work = partial(evaluate_point, spec)
    if jobs <= 1:
        return [work(v) for v in values]
    chunk = max(1, len(values) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(work, values, chunksize=chunk))


# -- figure presets ------------------------------------------------------------

DELTA_RANGE = (-10.0, 10.0, 2001)
FIELD_RANGE = (0.0, 5.0, 501)


@dataclass(frozen=True)
class Preset:
    axis: str
    layout: str  # spectrum | difference | resonance | mor
    title: str
    params: Mapping[str, Any]
    medium: Mapping[str, Any] = field(default_factory=dict)


PRESETS: dict[str, Preset] = {
    "fig3a": Preset("delta", "spectrum", "G = 0, B = 0", {"G": 0.0}),
    "fig3b": Preset("delta", "spectrum", "G = 0.5, B = 0", {"G": 0.5}),
    "fig3c": Preset("delta", "spectrum", "G = 5, B = 0", {"G": 5.0}),
    "fig4": Preset("delta", "spectrum", "G = 1, B = 0.5", {"G": 1.0, "B": 0.5}),
    "fig5a": Preset("delta", "difference", "G = 0.5, B = 1", {"G": 0.5, "B": 1.0}),
    "fig5b": Preset("delta", "difference", "G = 5, B = 1", {"G": 5.0, "B": 1.0}),
    "fig6a": Preset("delta", "difference", "G = 1, B = 0.5", {"G": 1.0, "B": 0.5}),
    "fig6b": Preset("delta", "difference", "G = 1, B = 5", {"G": 1.0, "B": 5.0}),
    "fig7a": Preset("B", "resonance", "delta = 0, G = 1", {"G": 1.0, "delta": 0.0}),
    "fig7b": Preset("G", "resonance", "delta = 0, B = 1", {"B": 1.0, "delta": 0.0}),
    "fig8a": Preset("delta", "mor", "theta = 0, G = B = 1", {"theta": 0.0, "G": 1.0, "B": 1.0}, {"C": 3.5}),
    "fig8b": Preset("delta", "mor", "theta = pi/2, G = B = 1", {"theta": math.pi / 2, "G": 1.0, "B": 1.0}, {"C": 3.5}),
}


def figure_preset(name: str) -> SweepSpec:
    """Sweep reproducing one figure panel. Every preset shares the
    defaults of :class:`SystemParams` and overrides only what differs."""
    try:
        preset = PRESETS[name]
    except KeyError:
        raise ParameterError([("figure", name, f"unknown figure '{name}'; valid names: {', '.join(PRESETS)}")])
    lo, hi, n = DELTA_RANGE if preset.axis == "delta" else FIELD_RANGE
    return SweepSpec(
        axis=preset.axis,
        min=lo,
        max=hi,
        points=n,
        base=SystemParams(**preset.params),
        medium=MediumParams(**preset.medium),
        name=name,
    )


# -- config documents ----------------------------------------------------------

MEDIUM_KEYS = ("C", "kappa")
SWEEP_KEYS = ("name", "axis", "min", "max", "points", "coefficient_source")


def split_config(data: Mapping[str, Any]) -> tuple[SystemParams, MediumParams, dict | None]:
    """Split a config document into system, medium and (optional) sweep parts."""
    data = dict(data)
    sweep = data.pop("sweep", None)
    medium = MediumParams.from_dict({k: data.pop(k) for k in MEDIUM_KEYS if k in data})
    system = SystemParams.from_dict(data)
    if sweep is not None:
        unknown = sorted(set(sweep) - set(SWEEP_KEYS))
        if unknown:
            raise ParameterError([(k, sweep[k], f"unknown sweep key '{k}'") for k in unknown])
        sweep = dict(sweep)
    return system, medium, sweep


def spec_to_config(spec: SweepSpec) -> dict[str, Any]:
    doc = spec.base.to_dict()
    doc.update(spec.medium.to_dict())
    doc["sweep"] = {
        "name": spec.name,
        "axis": spec.axis,
        "min": spec.min,
        "max": spec.max,
        "points": int(spec.points),
        "coefficient_source": spec.coefficient_source,
    }
    return doc


def spec_from_config(data: Mapping[str, Any]) -> SweepSpec:
    system, medium, sweep = split_config(data)
    if sweep is None:
        raise ParameterError([("sweep", None, "config has no 'sweep' section")])
    missing = [k for k in ("axis", "min", "max", "points") if k not in sweep]
    if missing:
        raise ParameterError([(k, None, f"sweep section is missing '{k}'") for k in missing])
    return SweepSpec(
        axis=sweep["axis"],
        min=float(sweep["min"]),
        max=float(sweep["max"]),
        points=int(sweep["points"]),
        base=system,
        medium=medium,
        coefficient_source=sweep.get("coefficient_source", "linear_solve"),
        name=sweep.get("name", ""),
    )
