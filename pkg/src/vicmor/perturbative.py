"""Analytic weak-probe steady state: zeroth-order coherences, the literal
closed-form first-order coefficients, and the total sigma+/sigma- coherences.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SingularityError
from .liouvillian import frozen_linear_response
from .params import Manifold, SystemParams, complex_detuning, probe_couplings, vic_rate
from .zeroth import ZerothOrderState, zeroth_coherence_03, zeroth_coherence_12, zeroth_order_state

__all__ = [
    "CoherencePair",
    "ZerothOrderState",
    "closed_form_first_order",
    "total_coherence",
    "manifold_coherence",
    "zeroth_coherence_03",
    "zeroth_coherence_12",
    "zeroth_order_state",
]

COEFFICIENT_SOURCES = ("linear_solve", "closed_form")
DENOMINATOR_FLOOR = 1e-12


@dataclass(frozen=True)
class CoherencePair:
    rho_plus: complex
    rho_minus: complex


def closed_form_first_order(i: int, p: SystemParams, manifold=Manifold.PLUS) -> tuple[complex, complex]:
    """Coefficients of rho_i0 multiplying the probe coupling of |i> (``+1``)
    and of the other excited level (``-1``), term by term in their literal form.

    Both share one denominator; it is reproduced exactly, including the
    ``gamma_ij**2/4`` inside ``Delta_i0 (Delta30* - Delta_i0 + ...)``, which is
    dimensionally suspect. Away from ``theta = pi/2`` these values therefore
    disagree with :func:`vicmor.liouvillian.frozen_linear_response`.
    """
    if i not in (1, 2):
        raise ValueError("i must be 1 or 2")
    j = 3 - i
    manifold = Manifold.parse(manifold)
    Di = complex_detuning(i, manifold, p)
    Dj = complex_detuning(j, manifold, p)
    D3c = complex_detuning(3, manifold, p).conjugate()
    G = complex(p.G)
    G2 = abs(G) ** 2
    gij = vic_rate(p.gamma10, p.gamma20, p.theta)
    q = gij**2 / 4
    z = zeroth_order_state(p, manifold)
    rho_ij = z.rho12_0 if i == 1 else z.rho21_0
    rho_ji = rho_ij.conjugate()
    pops = z.populations
    n_i = pops[0] - pops[i]
    n_j = pops[0] - pops[j]

    bracket_a = Dj * (D3c - Di) * (D3c - Dj) + G2 * (D3c - Di) + Dj * q
    bracket_b = (D3c - Di) * (D3c - Dj) + G2 + q

    num_own = (
        -bracket_a * n_i
        - 1j * gij / 2 * bracket_b * rho_ji
        + G * (Dj * (D3c - Dj) + G2 + q) * z.rho03_0
    )
    num_other = (
        bracket_a * rho_ij
        + 1j * gij / 2 * bracket_b * n_j
        + 1j * G * gij / 2 * (Di + Dj - D3c) * z.rho03_0
    )
    den = (Di * Dj + q) * ((D3c - Di) * (D3c - Dj)) + G2 * (
        Di * (D3c - Di + q) + Dj * (D3c - Dj) + G2 + q
    )
    if abs(den) < DENOMINATOR_FLOOR:
        raise SingularityError(
            f"closed-form denominator |{den:.3e}| < {DENOMINATOR_FLOOR:g} at "
            f"delta={p.delta}, B={p.B}, G={p.G}, theta={p.theta}, manifold={manifold.value}",
            where=p,
        )
    return num_own / den, num_other / den


def manifold_coherence(p: SystemParams, manifold=Manifold.PLUS, source: str = "linear_solve") -> complex:
    """Total first-order coherence rho_10 + rho_20 of one manifold."""
    manifold = Manifold.parse(manifold)
    if source == "linear_solve":
        r10, r20 = frozen_linear_response(p, manifold)
        return r10 + r20
    if source == "closed_form":
        g1, g2 = probe_couplings(p, manifold)
        own1, other1 = closed_form_first_order(1, p, manifold)
        own2, other2 = closed_form_first_order(2, p, manifold)
        # each level's "+1" coefficient multiplies its own coupling
        return (g1 * own1 + g2 * other1) + (g2 * own2 + g1 * other2)
    raise ValueError(f"unknown coefficient source {source!r}; expected one of {COEFFICIENT_SOURCES}")


def total_coherence(p: SystemParams, source: str = "linear_solve") -> CoherencePair:
    return CoherencePair(
        rho_plus=manifold_coherence(p, Manifold.PLUS, source),
        rho_minus=manifold_coherence(p, Manifold.MINUS, source),
    )
