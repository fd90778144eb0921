"""Measurable quantities built from the first-order coherences."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Any, Callable, Mapping

from .errors import NumericalError, ParameterError
from .params import SystemParams, nonparallel_rabi
from .perturbative import CoherencePair, total_coherence

__all__ = [
    "MediumParams",
    "MorResult",
    "SensitivityResult",
    "mor_angle",
    "nonparallel_rabi",
    "rotation_slope",
    "sensitivity",
    "shot_noise_limit",
    "susceptibility",
    "wrap_angle",
]


@dataclass(frozen=True)
class MediumParams:
    """``C`` scales birefringence to rotation angle; ``kappa`` converts a
    coherence to a susceptibility. Both lump density, dipole strength and
    path length into one dimensionless number."""

    C: float = 3.5
    kappa: float = 1.0

    def __post_init__(self):
        bad = [(n, getattr(self, n), f"{n} must be >= 0") for n in ("C", "kappa") if not getattr(self, n) >= 0]
        if bad:
            raise ParameterError(bad)

    def to_dict(self) -> dict[str, float]:
        return {"C": self.C, "kappa": self.kappa}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "MediumParams":
        names = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ParameterError([(k, data[k], f"unknown medium parameter '{k}'") for k in unknown])
        return cls(**{k: float(v) for k, v in data.items()})


@dataclass(frozen=True)
class MorResult:
    theta_raw: float
    theta: float
    dichroism: float
    birefringence: float

    @property
    def theta_deg(self) -> float:
        return math.degrees(self.theta)


def susceptibility(coh: complex, m: MediumParams = MediumParams()) -> complex:
    return m.kappa * coh


def wrap_angle(angle: float) -> float:
    """Map ``angle`` into [0, pi); negative angles wrap upward."""
    wrapped = angle % math.pi
    # a tiny negative input rounds up to exactly pi
    return 0.0 if wrapped >= math.pi else wrapped


def mor_angle(pair: CoherencePair, m: MediumParams = MediumParams()) -> MorResult:
    diff = pair.rho_minus - pair.rho_plus
    raw = m.C * diff.real
    return MorResult(theta_raw=raw, theta=wrap_angle(raw), dichroism=diff.imag, birefringence=diff.real)


@dataclass(frozen=True)
class SensitivityResult:
    delta_B: float
    slope: float
    slope_fine: float  # central difference at step/10, for a Richardson-style check

    @property
    def slope_rel_change(self) -> float:
        return abs(self.slope - self.slope_fine) / abs(self.slope_fine)


def shot_noise_limit(slope: float, n_ph: float) -> float:
    """Smallest resolvable field change for rotation slope ``slope`` and
    ``n_ph`` detected photons."""
    if not n_ph > 0:
        raise ParameterError([("n_ph", n_ph, "photon number must be positive")])
    if abs(slope) < 1e-12:
        raise NumericalError(f"rotation is insensitive to B here (slope {slope:.3e})")
    return 1.0 / (math.sqrt(n_ph) * abs(slope))


def rotation_slope(angle_of_B: Callable[[float], float], B: float, dB: float) -> float:
    if not dB > 0:
        raise ParameterError([("dB", dB, "finite-difference step must be positive")])
    return (angle_of_B(B + dB) - angle_of_B(B - dB)) / (2 * dB)


def sensitivity(
    p: SystemParams,
    m: MediumParams = MediumParams(),
    n_ph: float = 1e6,
    dB: float = 1e-3,
    source: str = "linear_solve",
    angle_of_B: Callable[[float], float] | None = None,
) -> SensitivityResult:
    """Shot-noise-limited field sensitivity at ``p.B``.

    The slope is taken from the unwrapped rotation angle; pass ``angle_of_B``
    to differentiate some other angle-versus-field curve instead.
    """
    if angle_of_B is None:

        def angle_of_B(B):
            return mor_angle(total_coherence(p.with_(B=B), source), m).theta_raw

    slope = rotation_slope(angle_of_B, p.B, dB)
    slope_fine = rotation_slope(angle_of_B, p.B, dB / 10)
    return SensitivityResult(delta_B=shot_noise_limit(slope, n_ph), slope=slope, slope_fine=slope_fine)
