"""Master-equation dynamics and the numerical steady-state oracle.

Superoperators act on column-stacked (Fortran-order) density matrices:
``vec(rho)[i + 8*j] = rho[i, j]``. With this convention
``vec(A rho B) = (B^T kron A) vec(rho)``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSteadyStateError, DensityError, IntegrationDivergedError
from .model import FridgeParams, bath_states, total_hamiltonian
from .qops import DensityMatrix, QOperator, tensor, trace_distance, validate_density

DIM = 8
KERNEL_GAP = 1e-8
KERNEL_RESIDUAL = 1e-11
STEP_SCALE = 0.05
TRACE_STEP_TOL = 1e-12
DEFAULT_HORIZON = 20.0

TRAJECTORY_HEADER = ["t"] + [f"p{b:03b}" for b in range(8)] + ["re_c", "im_c"]


def stack(rho) -> np.ndarray:
    m = rho.entries if isinstance(rho, QOperator) else np.asarray(rho)
    return m.reshape(-1, order="F")


def unstack(vec: np.ndarray) -> np.ndarray:
    n = int(round(math.sqrt(vec.shape[0])))
    return np.asarray(vec).reshape(n, n, order="F")


def _reset(rho: np.ndarray, tau: np.ndarray, i: int) -> np.ndarray:
    """``tau_i (x) Tr_i rho`` on three qubits, with ``tau_i`` re-inserted at position ``i``."""
    t = rho.reshape((2,) * 6)
    red = np.trace(t, axis1=i - 1, axis2=i + 2)
    sub = "abcdef"
    keep = sub.replace(sub[i - 1], "").replace(sub[i + 2], "")
    out = np.einsum(f"{sub[i - 1]}{sub[i + 2]},{keep}->{sub}", tau, red)
    return out.reshape(DIM, DIM)


def master_rhs(rho: QOperator, params: FridgeParams) -> QOperator:
    """Time derivative of ``rho``: coherent part plus reset dissipation on each qubit."""
    m = rho.entries if isinstance(rho, QOperator) else np.asarray(rho, dtype=complex)
    H = total_hamiltonian(params).entries
    out = -1j * (H @ m - m @ H)
    for i, (tau, p) in enumerate(zip(bath_states(params), params.rates), start=1):
        out += p * (_reset(m, tau.entries, i) - m)
    return QOperator(out, (1, 2, 3))


@dataclass(frozen=True, eq=False)
class Superoperator:
    entries: np.ndarray

    def apply(self, rho) -> QOperator:
        return QOperator(unstack(self.entries @ stack(rho)), (1, 2, 3))

    def trace_defect(self) -> float:
        """Largest entry of ``vec(I)^T L``; zero for a trace-preserving generator."""
        return float(np.max(np.abs(stack(np.eye(DIM)) @ self.entries)))


def _embed(op: np.ndarray, i: int) -> np.ndarray:
    factors = [np.eye(2)] * 3
    factors[i - 1] = op
    return np.kron(np.kron(factors[0], factors[1]), factors[2])


def liouvillian_matrix(params: FridgeParams) -> Superoperator:
    """Matrix of the generator, assembled from Kronecker identities.

    The reset term is written in Kraus form,
    ``tau_i (x) Tr_i rho = sum_{k,l} tau_i[k,k] K_kl rho K_kl^H`` with
    ``K_kl = |k><l|`` on qubit ``i``, so this path shares no code with
    :func:`master_rhs`.
    """
    H = total_hamiltonian(params).entries
    eye = np.eye(DIM)
    L = -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    for i, (tau, p) in enumerate(zip(bath_states(params), params.rates), start=1):
        reset = np.zeros((DIM * DIM, DIM * DIM), dtype=complex)
        for k in range(2):
            for l in range(2):
                unit = np.zeros((2, 2))
                unit[k, l] = 1.0
                K = _embed(unit, i)
                reset += tau.entries[k, k].real * np.kron(K.conj(), K)
        L += p * (reset - np.eye(DIM * DIM))
    return Superoperator(L)


def kernel_spectrum(params: FridgeParams) -> np.ndarray:
    """Singular values of the Liouvillian, descending."""
    return np.linalg.svd(liouvillian_matrix(params).entries, compute_uv=False)


def steady_state_numeric(params: FridgeParams) -> DensityMatrix:
    """Stationary state from the null space of the Liouvillian (smallest right singular vector)."""
    L = liouvillian_matrix(params).entries
    _, s, vh = np.linalg.svd(L)
    if s[-2] < KERNEL_GAP * s[0]:
        raise DegenerateSteadyStateError(
            f"kernel is not one-dimensional: second-smallest singular value {s[-2]:.3e} "
            f"< {KERNEL_GAP:g} x largest {s[0]:.3e}"
        )
    v = vh[-1].conj()
    m = unstack(v)
    m = 0.5 * (m + m.conj().T)
    m = m / np.trace(m).real
    residual = np.linalg.norm(L @ stack(m))
    if residual > KERNEL_RESIDUAL * s[0]:
        raise DegenerateSteadyStateError(f"kernel residual {residual:.3e} exceeds {KERNEL_RESIDUAL:g} x |L|")
    return validate_density(QOperator(m, (1, 2, 3)))


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: tuple[DensityMatrix, ...]
    params: FridgeParams
    step: float = 0.0
    max_trace_drift: float = 0.0

    def __len__(self):
        return len(self.times)

    @property
    def final(self) -> DensityMatrix:
        return self.states[-1]

    def rows(self) -> list[list[float]]:
        out = []
        for t, s in zip(self.times, self.states):
            m = s.entries
            c = m[2, 5]
            out.append([float(t), *m.diagonal().real.tolist(), float(c.real), float(c.imag)])
        return out

    def write_csv(self, fh, digits: int = 12):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRAJECTORY_HEADER)
        for row in self.rows():
            w.writerow([f"{x:.{digits}g}" for x in row])


def max_step(params: FridgeParams) -> float:
    return STEP_SCALE / max(params.E2, params.q, params.g)


def default_horizon(params: FridgeParams) -> float:
    return DEFAULT_HORIZON / min(params.rates)


def rk4_step(rho: np.ndarray, params: FridgeParams, h: float) -> np.ndarray:
    """One classical Runge-Kutta step, evaluated with :func:`master_rhs`."""
    f = lambda x: master_rhs(x, params).entries
    k1 = f(rho)
    k2 = f(rho + 0.5 * h * k1)
    k3 = f(rho + 0.5 * h * k2)
    k4 = f(rho + h * k3)
    return rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def rk4_propagator(L: np.ndarray, h: float) -> np.ndarray:
    """Matrix of one RK4 step for the linear system ``d vec/dt = L vec``.

    For a constant generator the four stages collapse to the degree-4
    Taylor polynomial of ``h L``; applying it is the same arithmetic as
    stepping, and powers of it advance many steps at once.
    """
    A = h * L
    eye = np.eye(L.shape[0])
    return eye + A @ (eye + A @ (eye / 2 + A @ (eye / 6 + A / 24)))


def _trace_project(B: np.ndarray) -> np.ndarray:
    """Rank-one round-off correction making ``vec(I)^T B = vec(I)^T`` exact."""
    t = stack(np.eye(DIM))
    return B + np.outer(t / DIM, t - t @ B)


def _advance(P: np.ndarray, n: int) -> np.ndarray:
    if n <= 0:
        return np.eye(P.shape[0])
    return _trace_project(np.linalg.matrix_power(P, n))


def evolve(
    rho0: QOperator,
    params: FridgeParams,
    t_end: float,
    sample_every: float | None = None,
    step: float | None = None,
) -> Trajectory:
    """Fixed-step RK4 integration of the master equation from ``rho0`` to ``t_end``.

    States are recorded at ``0, sample_every, 2*sample_every, ...`` and at
    ``t_end``. The step is the largest value not exceeding ``step`` (default
    :func:`max_step`) that divides ``sample_every`` evenly.

    Raises
    ------
    IntegrationDivergedError
        If a sampled state stops being a valid density matrix, or the
        per-step trace drift exceeds ``TRACE_STEP_TOL``.
    """
    if not t_end > 0:
        raise ValueError(f"t_end must be > 0, got {t_end}")
    if sample_every is None:
        sample_every = t_end / 100
    if not sample_every > 0:
        raise ValueError(f"sample_every must be > 0, got {sample_every}")
    sample_every = min(sample_every, t_end)
    h_max = max_step(params) if step is None else step
    n_sub = max(1, math.ceil(sample_every / h_max - 1e-9))
    h = sample_every / n_sub

    L = liouvillian_matrix(params).entries
    P = rk4_propagator(L, h)
    trace_row = stack(np.eye(DIM))
    # bound on |tr(P v) - tr(v)| for any density matrix (sum |rho_ij| <= 8)
    drift = float(np.max(np.abs(trace_row @ P - trace_row))) * DIM
    if drift > TRACE_STEP_TOL:
        raise IntegrationDivergedError(0.0, f"per-step trace drift bound {drift:.3e} exceeds {TRACE_STEP_TOL:g}")
    block = _advance(P, n_sub)

    n_full = int(math.floor(t_end / sample_every + 1e-9))
    times = [0.0]
    v = stack(validate_density(rho0)).astype(complex)
    states = [validate_density(QOperator(unstack(v), (1, 2, 3)))]
    for n in range(1, n_full + 1):
        v = block @ v
        t = n * sample_every
        states.append(_checked_state(v, t))
        times.append(t)
    rest = t_end - n_full * sample_every
    if rest > 1e-12 * t_end:
        m = max(1, math.ceil(rest / h_max - 1e-9))
        v = _advance(rk4_propagator(L, rest / m), m) @ v
        states.append(_checked_state(v, t_end))
        times.append(t_end)
    return Trajectory(np.array(times), tuple(states), params, step=h, max_trace_drift=drift)


def _checked_state(v: np.ndarray, t: float) -> DensityMatrix:
    m = unstack(v)
    if not np.all(np.isfinite(m)):
        raise IntegrationDivergedError(t, "non-finite entries")
    try:
        return validate_density(QOperator(m, (1, 2, 3)))
    except DensityError as exc:
        raise IntegrationDivergedError(t, str(exc)) from exc


def thermal_product(params: FridgeParams) -> DensityMatrix:
    return validate_density(tensor(*bath_states(params)))


def distance_to(traj: Trajectory, target: QOperator) -> np.ndarray:
    return np.array([trace_distance(s, target) for s in traj.states])
