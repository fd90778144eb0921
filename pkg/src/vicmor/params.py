"""Physical parameters of the four-level model and the rates derived from them.

Everything is dimensionless: frequencies and rates are in units of the
reference decay rate gamma (= gamma10 by default), angles in radians.

Level labels: |0> ground, |1>, |2> the near-degenerate excited pair probed by
the circular components, |3> the auxiliary level driven by the control field.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .errors import ParameterError

LEVELS = (0, 1, 2, 3)


class Manifold(enum.Enum):
    """Which circular probe component (and Zeeman manifold) is simulated."""

    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self) -> int:
        return 1 if self is Manifold.PLUS else -1

    @classmethod
    def parse(cls, value) -> "Manifold":
        if isinstance(value, cls):
            return value
        aliases = {"+": cls.PLUS, "sigma+": cls.PLUS, "-": cls.MINUS, "sigma-": cls.MINUS}
        key = str(value).strip().lower()
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ParameterError([("manifold", value, f"unknown manifold {value!r}; use +, -, plus or minus")]) from None


RHO21_ZEEMAN_CHOICES = ("as_printed", "zero")
RHO03_FORM_CHOICES = ("steady_state", "as_printed")


@dataclass(frozen=True)
class SystemParams:
    """Every physical input of the model.

    ``g1, g2`` (``g1p, g2p``) are half-Rabi frequencies of the sigma+ (sigma-)
    probe couplings to |1>, |2>; ``G`` is the half-Rabi frequency of the
    control field and may be complex. ``pop0..pop3`` are the frozen
    zeroth-order populations used by the perturbative layer.

    Three switches select between readings of the model:

    * ``alpha`` -- when set, the probe couplings are replaced by the
      nonparallel-dipole values for dipole orientation ``alpha`` (see
      :func:`nonparallel_rabi`); ``None`` uses the couplings as given.
    * ``rho21_zeeman`` -- ``"zero"`` (default) gives |1> and |2> the same
      Zeeman shift, so their coherence does not rotate; ``"as_printed"`` adds
      the ``-2iB`` rotation on the |2><1| line. That extra term is
      not of Lindblad form and lets populations go negative when B != 0.
    * ``rho03_form`` -- ``"steady_state"`` takes the zeroth-order control
      coherence from the stationary point of the equations of motion,
      ``"as_printed"`` uses the literal closed form (extra factor of i).
    """

    gamma10: float = 1.0
    gamma20: float = 1.0
    gamma30: float = 0.1
    gamma13: float = 0.0
    gamma23: float = 0.0
    gamma_coll: float = 0.0
    theta: float = 0.0
    g1: float = 0.1
    g2: float = 0.1
    g1p: float = 0.1
    g2p: float = 0.1
    G: complex = 0.0
    B: float = 0.0
    delta: float = 0.0
    Delta: float = 0.0
    pop0: float = 1.0
    pop1: float = 0.0
    pop2: float = 0.0
    pop3: float = 0.0
    alpha: float | None = None
    rho21_zeeman: str = "zero"
    rho03_form: str = "steady_state"

    @property
    def populations(self) -> tuple[float, float, float, float]:
        return (self.pop0, self.pop1, self.pop2, self.pop3)

    def with_(self, **changes) -> "SystemParams":
        return replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        G = complex(self.G)
        out["G"] = G.real if G.imag == 0 else [G.real, G.imag]
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SystemParams":
        names = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ParameterError([(k, data[k], f"unknown parameter '{k}'") for k in unknown])
        kwargs = dict(data)
        if "G" in kwargs:
            kwargs["G"] = _parse_complex(kwargs["G"])
        return cls(**kwargs)


def _parse_complex(value) -> complex | float:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ParameterError([("G", value, "complex G must be [re, im]")])
        z = complex(float(value[0]), float(value[1]))
    elif isinstance(value, Mapping):
        z = complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    else:
        z = complex(value)
    return z.real if z.imag == 0 else z


def load_params(path: str | Path) -> SystemParams:
    """Read a JSON document whose keys are :class:`SystemParams` field names."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return validate_params(SystemParams.from_dict(data))


def validate_params(p: SystemParams) -> SystemParams:
    """Return ``p`` unchanged, or raise :class:`ParameterError` listing every
    violated invariant."""
    bad = []
    for name in ("gamma10", "gamma20", "gamma30", "gamma13", "gamma23", "gamma_coll"):
        value = getattr(p, name)
        if not math.isfinite(value) or value < 0:
            bad.append((name, value, f"negative decay rate: {name} = {value}"))
    pops = p.populations
    for i, value in enumerate(pops):
        if not (0.0 <= value <= 1.0):
            bad.append((f"pop{i}", value, f"population pop{i} = {value} outside [0, 1]"))
    total = math.fsum(pops)
    if abs(total - 1.0) > 1e-9:
        bad.append(("pop*", total, f"populations sum to {total:.12g}"))
    if not (0.0 <= p.theta <= math.pi):
        bad.append(("theta", p.theta, f"theta = {p.theta} outside [0, pi]"))
    for name in ("g1", "g2", "g1p", "g2p", "B", "delta", "Delta"):
        value = getattr(p, name)
        if not math.isfinite(value):
            bad.append((name, value, f"{name} is not finite"))
    if not np.isfinite(complex(p.G)):
        bad.append(("G", p.G, "G is not finite"))
    if p.alpha is not None and not math.isfinite(p.alpha):
        bad.append(("alpha", p.alpha, "alpha is not finite"))
    if p.rho21_zeeman not in RHO21_ZEEMAN_CHOICES:
        bad.append(("rho21_zeeman", p.rho21_zeeman, f"rho21_zeeman must be one of {RHO21_ZEEMAN_CHOICES}"))
    if p.rho03_form not in RHO03_FORM_CHOICES:
        bad.append(("rho03_form", p.rho03_form, f"rho03_form must be one of {RHO03_FORM_CHOICES}"))
    if bad:
        raise ParameterError(bad)
    return p


def vic_rate(gamma01: float, gamma02: float, theta: float) -> float:
    """Cross-damping rate sqrt(gamma01*gamma02)*cos(theta) between |1> and |2>."""
    if gamma01 < 0 or gamma02 < 0:
        raise ParameterError([("gamma", min(gamma01, gamma02), "negative decay rate")])
    return math.sqrt(gamma01 * gamma02) * math.cos(theta)


def _decay_out_of(level: int, p: SystemParams) -> float:
    # gamma_ki is the rate from level i into level k; only these are nonzero.
    return {
        0: 0.0,
        1: p.gamma10 + p.gamma13,
        2: p.gamma20 + p.gamma23,
        3: p.gamma30,
    }[level]


def dephasing_rate(i: int, j: int, p: SystemParams) -> float:
    """Coherence damping rate Gamma_ij: half the total decay out of both
    levels plus the collisional rate."""
    if i not in LEVELS or j not in LEVELS:
        raise ParameterError([("level", (i, j), f"levels must be in {LEVELS}")])
    if i == j:
        raise ParameterError([("level", (i, j), "dephasing rate needs two distinct levels")])
    return 0.5 * (_decay_out_of(i, p) + _decay_out_of(j, p)) + p.gamma_coll


def complex_detuning(level: int, manifold, p: SystemParams) -> complex:
    """Complex detuning Delta_j0 = delta_j0 + i Gamma_j0.

    Levels 1 and 2 see the probe detuning shifted by +B (sigma+) or -B
    (sigma-); level 3 sees the control detuning in either manifold.
    """
    manifold = Manifold.parse(manifold)
    if level in (1, 2):
        return complex(p.delta + manifold.sign * p.B, dephasing_rate(level, 0, p))
    if level == 3:
        return complex(p.Delta, dephasing_rate(3, 0, p))
    raise ParameterError([("level", level, "complex detuning is defined for levels 1, 2, 3")])


@dataclass(frozen=True)
class DerivedRates:
    gamma12: float
    Gamma: np.ndarray  # 4x4 symmetric; diagonal unused and set to 0
    Delta10: complex
    Delta20: complex
    Delta30: complex


def derived_rates(p: SystemParams, manifold=Manifold.PLUS) -> DerivedRates:
    Gamma = np.zeros((4, 4))
    for i in LEVELS:
        for j in LEVELS:
            if i != j:
                Gamma[i, j] = dephasing_rate(i, j, p)
    return DerivedRates(
        gamma12=vic_rate(p.gamma10, p.gamma20, p.theta),
        Gamma=Gamma,
        Delta10=complex_detuning(1, manifold, p),
        Delta20=complex_detuning(2, manifold, p),
        Delta30=complex_detuning(3, manifold, p),
    )


def nonparallel_rabi(alpha: float, theta: float, g_plus: float, g_minus: float) -> tuple[float, float]:
    """Probe couplings of |1> and |2> for dipoles at angle ``theta`` to each
    other, the first at angle ``alpha`` to the sigma+ axis.

    At ``alpha = pi/4`` the parallel case ``theta = 0`` leaves both couplings
    unchanged, while ``theta = pi/2`` leaves only |1> coupled.
    """
    s = (math.sin(alpha) + math.sin(alpha + theta)) / math.sqrt(2.0)
    c = (math.cos(alpha) + math.cos(alpha + theta)) / math.sqrt(2.0)
    return s * g_plus, c * g_minus


def probe_couplings(p: SystemParams, manifold) -> tuple[float, float]:
    """Couplings (to |1>, |2>) of the probe component driving ``manifold``."""
    manifold = Manifold.parse(manifold)
    g1, g2 = (p.g1, p.g2) if manifold is Manifold.PLUS else (p.g1p, p.g2p)
    if p.alpha is not None:
        g1, g2 = nonparallel_rabi(p.alpha, p.theta, g1, g2)
    return g1, g2
