"""Zeroth-order (probe-free) coherences around the frozen populations."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SingularityError
from .params import Manifold, SystemParams, complex_detuning, vic_rate


@dataclass(frozen=True)
class ZerothOrderState:
    rho12_0: complex
    rho03_0: complex
    populations: tuple[float, float, float, float]

    @property
    def rho21_0(self) -> complex:
        return self.rho12_0.conjugate()

    @property
    def rho30_0(self) -> complex:
        return self.rho03_0.conjugate()


def zeroth_coherence_12(p: SystemParams, manifold=Manifold.PLUS) -> complex:
    """Vacuum-induced |1>-|2> coherence sustained by the excited populations."""
    D10 = complex_detuning(1, manifold, p)
    D20 = complex_detuning(2, manifold, p)
    den = D10.conjugate() - D20
    if den == 0:
        raise SingularityError("rho12(0) is singular: Delta10* = Delta20", where=p)
    g12 = vic_rate(p.gamma10, p.gamma20, p.theta)
    return 1j * g12 * (p.pop1 + p.pop2) / (2 * den)


def zeroth_coherence_03(p: SystemParams) -> complex:
    """Control-field coherence between |0> and |3>.

    ``p.rho03_form == "steady_state"`` gives ``-G* (rho00 - rho33) / Delta30*``,
    the stationary value of the |3><0| equation of motion without probe.
    ``"as_printed"`` multiplies this by i, as in the published closed form.
    """
    D30c = complex_detuning(3, Manifold.PLUS, p).conjugate()
    if D30c == 0:
        raise SingularityError("rho03(0) is singular: Delta = Gamma30 = 0", where=p)
    G = complex(p.G)
    value = -G.conjugate() * (p.pop0 - p.pop3) / D30c
    if p.rho03_form == "as_printed":
        value *= 1j
    return value


def zeroth_order_state(p: SystemParams, manifold=Manifold.PLUS) -> ZerothOrderState:
    return ZerothOrderState(
        rho12_0=zeroth_coherence_12(p, manifold),
        rho03_0=zeroth_coherence_03(p),
        populations=p.populations,
    )
