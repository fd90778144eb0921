"""Rotating-frame master equation of the four-level system.

This is the brute-force side of the package: the full 4x4 density-matrix
equations of motion, a fixed-step RK4 integrator, a direct stationary-state
solve, and the exact first-order (weak-probe) response around frozen
zeroth-order populations. The perturbative closed forms are checked against
these routes.

Density matrices are ``(4, 4)`` complex arrays with ``rho[a, b]`` the slowly
varying amplitude of |a><b|. Vectorisation is row-major (index ``4*a + b``).
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DivergenceError, MultiplicityError, NumericalError, ResonanceDegeneracyError
from .params import Manifold, SystemParams, dephasing_rate, probe_couplings, vic_rate
from .zeroth import ZerothOrderState, zeroth_order_state

log = logging.getLogger(__name__)

DIM = 4
PAIRS = [(1, 0), (2, 0), (3, 0), (2, 1), (3, 1), (3, 2)]
TRACE_VEC = np.eye(DIM).reshape(-1)


def ground_state() -> np.ndarray:
    rho = np.zeros((DIM, DIM), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def pure_state(amplitudes) -> np.ndarray:
    psi = np.asarray(amplitudes, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 1e-3
    t_end: float = 200.0
    sample_every: float = 1.0

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.t_end >= self.dt:
            raise ValueError(f"t_end ({self.t_end}) must be >= dt ({self.dt})")
        if not self.sample_every > 0:
            raise ValueError("sample_every must be positive")


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n_samples, 4, 4)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


class _Coeffs:
    """Constants entering one set of lines of the equations of motion.

    The conjugate lines (upper triangle) are the same expressions with every
    complex constant conjugated, evaluated on the transposed matrix.
    """

    def __init__(self, p: SystemParams, manifold: Manifold, conj: bool):
        cj = np.conj if conj else (lambda z: z)
        g1, g2 = probe_couplings(p, manifold)
        G = complex(p.G)
        s = manifold.sign
        self.i = cj(1j)
        self.g1, self.g2, self.G = cj(complex(g1)), cj(complex(g2)), cj(G)
        self.g1s, self.g2s, self.Gs = cj(np.conj(complex(g1))), cj(np.conj(complex(g2))), cj(G.conjugate())
        self.zee = cj(-2j * s * p.B) if p.rho21_zeeman == "as_printed" else 0.0
        self.d10 = self.d20 = p.delta + s * p.B
        self.d30 = p.Delta
        self.g10, self.g20, self.g30 = p.gamma10, p.gamma20, p.gamma30
        self.g12 = vic_rate(p.gamma10, p.gamma20, p.theta)
        self.G10 = dephasing_rate(1, 0, p)
        self.G20 = dephasing_rate(2, 0, p)
        self.G30 = dephasing_rate(3, 0, p)
        self.G21 = dephasing_rate(2, 1, p)
        self.G31 = dephasing_rate(3, 1, p)
        self.G32 = dephasing_rate(3, 2, p)


def _lines(r: np.ndarray, k: _Coeffs) -> dict:
    i, g1, g2, G = k.i, k.g1, k.g2, k.G
    g1s, g2s, Gs = k.g1s, k.g2s, k.Gs
    h = k.g12 / 2
    return {
        (1, 1): -k.g10 * r[1, 1] - h * (r[1, 2] + r[2, 1]) + i * (g1 * r[0, 1] - g1s * r[1, 0]),
        (2, 2): -k.g20 * r[2, 2] - h * (r[1, 2] + r[2, 1]) + i * (g2 * r[0, 2] - g2s * r[2, 0]),
        (3, 3): -k.g30 * r[3, 3] + i * (G * r[0, 3] - Gs * r[3, 0]),
        (2, 1): (k.zee - k.G21) * r[2, 1] - h * (r[1, 1] + r[2, 2]) + i * (g2 * r[0, 1] - g1s * r[2, 0]),
        (1, 0): (i * k.d10 - k.G10) * r[1, 0] - h * r[2, 0]
        + i * g1 * (1 - r[2, 2] - 2 * r[1, 1] - r[3, 3]) - i * g2 * r[1, 2] - i * G * r[1, 3],
        (2, 0): (i * k.d20 - k.G20) * r[2, 0] - h * r[1, 0]
        + i * g2 * (1 - r[1, 1] - 2 * r[2, 2] - r[3, 3]) - i * g1 * r[2, 1] - i * G * r[2, 3],
        (3, 0): (i * k.d30 - k.G30) * r[3, 0]
        + i * G * (1 - r[1, 1] - 2 * r[3, 3] - r[2, 2]) - i * g1 * r[3, 1] - i * g2 * r[3, 2],
        (3, 1): (i * (k.d30 - k.d10) - k.G31) * r[3, 1] - h * r[3, 2] + i * G * r[0, 1] - i * g1s * r[3, 0],
        (3, 2): (i * (k.d30 - k.d20) - k.G32) * r[3, 2] - h * r[3, 1] + i * G * r[0, 2] - i * g2s * r[3, 0],
    }


def rhs(rho: np.ndarray, p: SystemParams, manifold=Manifold.PLUS) -> np.ndarray:
    """Time derivative of ``rho`` under the rotating-wave equations of motion.

    The lower-triangle coherences and the excited populations follow the
    reference equation set line by line; the upper triangle is its conjugate
    and the ground population closes the trace. The drive terms of the
    |1><0|, |2><0|, |3><0| lines use the trace-closed form ``1 - ...``, so the
    map is affine and agrees with the physical generator on unit-trace states.
    """
    manifold = Manifold.parse(manifold)
    rho = np.asarray(rho, dtype=complex)
    lo = _lines(rho, _Coeffs(p, manifold, conj=False))
    hi = _lines(rho.T, _Coeffs(p, manifold, conj=True))
    out = np.zeros((DIM, DIM), dtype=complex)
    for n in (1, 2, 3):
        out[n, n] = lo[(n, n)]
    out[0, 0] = -(out[1, 1] + out[2, 2] + out[3, 3])
    for a, b in PAIRS:
        out[a, b] = lo[(a, b)]
        out[b, a] = hi[(a, b)]
    return out


def affine_generator(p: SystemParams, manifold=Manifold.PLUS, pinned=()) -> tuple[np.ndarray, np.ndarray]:
    """``(L, c)`` with ``rhs(rho) = L @ vec(rho) + c`` exactly.

    Entries listed in ``pinned`` (``(a, b)`` index pairs) get zero derivative.
    """
    c = rhs(np.zeros((DIM, DIM)), p, manifold).reshape(-1)
    L = np.empty((DIM * DIM, DIM * DIM), dtype=complex)
    for k in range(DIM * DIM):
        e = np.zeros(DIM * DIM, dtype=complex)
        e[k] = 1.0
        L[:, k] = rhs(e.reshape(DIM, DIM), p, manifold).reshape(-1) - c
    for a, b in pinned:
        L[DIM * a + b, :] = 0.0
        c[DIM * a + b] = 0.0
    return L, c


def generator(p: SystemParams, manifold=Manifold.PLUS) -> np.ndarray:
    """Homogeneous 16x16 generator: the constant drive is multiplied by the
    trace, so ``generator @ vec(rho) == vec(rhs(rho))`` whenever tr(rho) = 1."""
    L, c = affine_generator(p, manifold)
    return L + np.outer(c, TRACE_VEC)


def rk4_step(rho: np.ndarray, dt: float, p: SystemParams, manifold=Manifold.PLUS) -> np.ndarray:
    """One classical RK4 step of :func:`rhs` (reference implementation)."""
    k1 = rhs(rho, p, manifold)
    k2 = rhs(rho + 0.5 * dt * k1, p, manifold)
    k3 = rhs(rho + 0.5 * dt * k2, p, manifold)
    k4 = rhs(rho + dt * k3, p, manifold)
    return rho + dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6


def rk4_map(L: np.ndarray, c: np.ndarray, dt: float) -> np.ndarray:
    """One RK4 step of ``y' = L y + c`` as a 17x17 matrix on ``[y, 1]``.

    For a linear autonomous system RK4 is exactly the degree-4 Taylor
    polynomial of ``exp(dt A)``, so this reproduces :func:`rk4_step`.
    """
    n = L.shape[0]
    A = np.zeros((n + 1, n + 1), dtype=complex)
    A[:n, :n] = L
    A[:n, n] = c
    hA = dt * A
    M = np.eye(n + 1, dtype=complex)
    term = np.eye(n + 1, dtype=complex)
    for order in range(1, 5):
        term = term @ hA / order
        M = M + term
    return M


def integrate(
    rho0: np.ndarray,
    cfg: IntegratorConfig,
    p: SystemParams,
    manifold=Manifold.PLUS,
    pinned=(),
) -> Trajectory:
    """Fixed-step RK4 from ``rho0`` to ``cfg.t_end``, sampled every
    ``cfg.sample_every`` (plus t = 0 and the final time).

    Steps between samples are applied as a block, i.e. the one-step RK4 map
    raised to the number of steps per sample.
    """
    manifold = Manifold.parse(manifold)
    n_steps = int(round(cfg.t_end / cfg.dt))
    per_sample = max(1, int(round(cfg.sample_every / cfg.dt)))
    L, c = affine_generator(p, manifold, pinned)
    step = rk4_map(L, c, cfg.dt)
    block = np.linalg.matrix_power(step, per_sample)

    y = np.append(np.asarray(rho0, dtype=complex).reshape(-1), 1.0)
    times = [0.0]
    states = [y[:-1].copy()]
    done = 0
    while done < n_steps:
        k = min(per_sample, n_steps - done)
        y = block @ y if k == per_sample else np.linalg.matrix_power(step, k) @ y
        done += k
        if not np.all(np.isfinite(y)):
            raise DivergenceError(done * cfg.dt)
        times.append(done * cfg.dt)
        states.append(y[:-1].copy())
    return Trajectory(np.array(times), np.array(states).reshape(-1, DIM, DIM))


def steady_state_by_integration(
    p: SystemParams,
    manifold=Manifold.PLUS,
    rho0=None,
    dt: float = 1e-3,
    t_max: float = 2000.0,
    window: float = 10.0,
    tol: float = 1e-9,
    pinned=(),
) -> tuple[np.ndarray, float, bool]:
    """Integrate until ``max|rho(t) - rho(t - window)| <= tol`` or ``t_max``.

    Returns ``(rho, t_reached, converged)``.
    """
    L, c = affine_generator(p, manifold, pinned)
    block = np.linalg.matrix_power(rk4_map(L, c, dt), int(round(window / dt)))
    y = np.append(np.asarray(ground_state() if rho0 is None else rho0, dtype=complex).reshape(-1), 1.0)
    t = 0.0
    while t < t_max:
        y_new = block @ y
        t += window
        if not np.all(np.isfinite(y_new)):
            raise DivergenceError(t)
        delta = np.max(np.abs(y_new - y))
        y = y_new
        if delta <= tol:
            return y[:-1].reshape(DIM, DIM), t, True
    return y[:-1].reshape(DIM, DIM), t, False


def steady_state_by_nullspace(p: SystemParams, manifold=Manifold.PLUS, null_tol: float = 1e-10) -> np.ndarray:
    """Stationary state of the full (self-consistent) equations of motion.

    Raises :class:`MultiplicityError` when the generator has more than one
    zero mode, e.g. a non-decaying dark superposition of |1> and |2>.
    """
    Lg = generator(p, manifold)
    sv = np.linalg.svd(Lg, compute_uv=False)
    nullity = int(np.sum(sv <= null_tol * sv[0]))
    if nullity > 1:
        raise MultiplicityError(nullity)
    A = Lg.copy()
    A[0, :] = TRACE_VEC
    b = np.zeros(DIM * DIM, dtype=complex)
    b[0] = 1.0
    rho = np.linalg.solve(A, b).reshape(DIM, DIM)
    residual = np.max(np.abs(rhs(rho, p, manifold)))
    if residual > 1e-10:
        raise NumericalError(f"stationary solve residual {residual:.3e} exceeds 1e-10")
    return rho


# -- first-order response around frozen populations ---------------------------

FIRST_ORDER_VARS = ("rho10", "rho20", "rho13", "rho23")
PINNED_ZEROTH = [(a, a) for a in range(DIM)] + [(1, 2), (2, 1), (0, 3), (3, 0)]


def first_order_system(
    p: SystemParams, manifold=Manifold.PLUS, zeroth: ZerothOrderState | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """``(M, s)`` such that the stationary first-order coherences
    ``x = (rho10, rho20, rho13, rho23)`` satisfy ``M x + s = 0``.

    Built by hand from the |1><0|, |2><0| lines and the conjugates of the
    |3><1|, |3><2| lines with populations, rho12 and rho03 held at their
    zeroth-order values.
    """
    manifold = Manifold.parse(manifold)
    z = zeroth if zeroth is not None else zeroth_order_state(p, manifold)
    g1, g2 = probe_couplings(p, manifold)
    G = complex(p.G)
    h = vic_rate(p.gamma10, p.gamma20, p.theta) / 2
    d1 = d2 = p.delta + manifold.sign * p.B
    d3 = p.Delta
    r0, r1, r2, r3 = z.populations
    M = np.array(
        [
            [1j * d1 - dephasing_rate(1, 0, p), -h, -1j * G, 0.0],
            [-h, 1j * d2 - dephasing_rate(2, 0, p), 0.0, -1j * G],
            [-1j * G.conjugate(), 0.0, -1j * (d3 - d1) - dephasing_rate(3, 1, p), -h],
            [0.0, -1j * G.conjugate(), -h, -1j * (d3 - d2) - dephasing_rate(3, 2, p)],
        ],
        dtype=complex,
    )
    s = np.array(
        [
            1j * g1 * (1 - r2 - 2 * r1 - r3) - 1j * g2 * z.rho12_0,
            1j * g2 * (1 - r1 - 2 * r2 - r3) - 1j * g1 * z.rho21_0,
            1j * g1 * z.rho03_0,
            1j * g2 * z.rho03_0,
        ],
        dtype=complex,
    )
    return M, s


def frozen_linear_response(
    p: SystemParams, manifold=Manifold.PLUS, zeroth: ZerothOrderState | None = None, cond_limit: float = 1e12
) -> tuple[complex, complex]:
    """First-order coherences ``(rho10, rho20)`` from the exact 4x4 solve.

    A singular but consistent system (a dark combination that the probe does
    not drive, e.g. parallel dipoles with equal couplings and no control) is
    solved in the minimum-norm sense, which is the continuous limit of the
    neighbouring regular points. An inconsistent one raises
    :class:`ResonanceDegeneracyError`.
    """
    M, s = first_order_system(p, manifold, zeroth)
    cond = np.linalg.cond(M)
    if cond < cond_limit:
        x = np.linalg.solve(M, -s)
    else:
        x, *_ = np.linalg.lstsq(M, -s, rcond=None)
        scale = max(np.max(np.abs(s)), np.finfo(float).tiny)
        if np.max(np.abs(M @ x + s)) > 1e-10 * scale:
            raise ResonanceDegeneracyError("first-order system is singular and the probe drives its null space", cond)
        log.debug("singular but consistent first-order system (cond %.3e); using minimum-norm solution", cond)
    return complex(x[0]), complex(x[1])


def frozen_initial_state(p: SystemParams, manifold=Manifold.PLUS) -> np.ndarray:
    """Density matrix holding the zeroth-order block and no first-order coherence."""
    z = zeroth_order_state(p, manifold)
    rho = np.diag(np.array(z.populations, dtype=complex))
    rho[1, 2], rho[2, 1] = z.rho12_0, z.rho21_0
    rho[0, 3], rho[3, 0] = z.rho03_0, z.rho30_0
    return rho


def pinned_probe_response(
    p: SystemParams,
    manifold=Manifold.PLUS,
    g_probe: float = 1e-3,
    cfg: IntegratorConfig = IntegratorConfig(),
) -> tuple[complex, complex]:
    """First-order coherences extracted from a time integration with the
    zeroth-order block pinned and the probe scaled to ``g_probe``."""
    g1, g2 = probe_couplings(p, manifold)
    g_max = max(abs(g1), abs(g2))
    if g_max == 0:
        return 0j, 0j
    scale = g_probe / g_max
    weak = p.with_(g1=p.g1 * scale, g2=p.g2 * scale, g1p=p.g1p * scale, g2p=p.g2p * scale)
    traj = integrate(frozen_initial_state(p, manifold), cfg, weak, manifold, pinned=PINNED_ZEROTH)
    final = traj.final
    return complex(final[1, 0]) / scale, complex(final[2, 0]) / scale


# -- diagnostics and export ---------------------------------------------------


def hermiticity_defect(rho: np.ndarray) -> float:
    return float(np.max(np.abs(rho - rho.conj().T)))


def trace_drift(rho: np.ndarray) -> float:
    return float(abs(np.trace(rho) - 1.0))


def min_eigenvalue(rho: np.ndarray) -> float:
    return float(np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))))


def check_density_matrix(rho: np.ndarray, herm_tol=1e-10, trace_tol=1e-10, eig_tol=1e-8) -> list[str]:
    """Return a list of violated density-matrix invariants (empty if none)."""
    problems = []
    if (d := hermiticity_defect(rho)) > herm_tol:
        problems.append(f"not Hermitian (defect {d:.3e})")
    if (d := trace_drift(rho)) > trace_tol:
        problems.append(f"trace differs from 1 by {d:.3e}")
    if (e := min_eigenvalue(rho)) < -eig_tol:
        problems.append(f"negative eigenvalue {e:.3e}")
    return problems


TRAJECTORY_ENTRIES = [(a, a) for a in range(DIM)] + [(a, b) for a in range(DIM) for b in range(a + 1, DIM)]


def write_trajectory_csv(traj: Trajectory, path: str | Path) -> Path:
    path = Path(path)
    header = ["t"]
    for a, b in TRAJECTORY_ENTRIES:
        header += [f"re_rho{a}{b}", f"im_rho{a}{b}"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for t, rho in zip(traj.times, traj.states):
            row = [format(float(t), ".17g")]
            for a, b in TRAJECTORY_ENTRIES:
                row += [format(rho[a, b].real, ".17g"), format(rho[a, b].imag, ".17g")]
            w.writerow(row)
    return path
