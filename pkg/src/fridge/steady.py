"""Closed-form stationary state of the three-qubit refrigerator.

The stationary state is the thermal product ``tau1 tau2 tau3`` plus ``gamma``
times a fixed combination of Pauli-like operators supported on the
``{|010>, |101>}`` swap. Everything here is evaluated from closed forms;
the numerical kernel solve that checks it lives in :mod:`fridge.dynamics`.

The overlap factors ``Omega_jk`` that enter ``gamma`` come in three
variants selected by ``omega_variant``:

``"paired"`` (default)
    ``r'_j r'_k + rbar'_j rbar'_k``. This is the population difference
    between ``|010>`` and ``|101>`` carried by the ``Q_jk`` terms, and the
    only variant for which the assembled state is annihilated by the
    master-equation generator (residual at round-off for all ``g``, ``p_i``).
``"literal"``
    ``r'_j rbar'_k + rbar'_j r_k``, the commonly printed form.
``"symmetrized"``
    ``r'_j rbar'_k + rbar'_j r'_k``.

Primes swap ground and excited populations of qubit 2 only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DensityError, DomainError
from .model import FridgeParams, bath_populations, bath_states, pauli_like_operators
from .qops import DensityMatrix, QOperator, tensor, validate_density

OMEGA_VARIANTS = ("paired", "literal", "symmetrized")
DEFAULT_OMEGA = "paired"

PAIRS = ((2, 3), (1, 3), (1, 2))
DIAG_TOL = 1e-10
EQUAL_POP_TOL = 1e-14


class RateCoefficients(NamedTuple):
    q: float
    q1: float
    q2: float
    q3: float
    Q23: float
    Q13: float
    Q12: float

    def qi(self, i: int) -> float:
        return (self.q1, self.q2, self.q3)[i - 1]

    def Q(self, j: int, k: int) -> float:
        return {(2, 3): self.Q23, (1, 3): self.Q13, (1, 2): self.Q12}[tuple(sorted((j, k)))]


@dataclass(frozen=True)
class SteadyCoefficients:
    q: float
    q1: float
    q2: float
    q3: float
    Q23: float
    Q13: float
    Q12: float
    Delta: float
    Omega23: float
    Omega13: float
    Omega12: float
    gamma: float


def rate_coefficients(p1: float, p2: float, p3: float) -> RateCoefficients:
    """Rate-only coefficients ``q``, ``q_i`` and ``Q_jk``."""
    p = (p1, p2, p3)
    if any(not x > 0 for x in p):
        raise DomainError(f"all reset rates must be > 0, got {p}")
    q = p1 + p2 + p3
    # q - p_i is the sum of the other two rates; summing them directly avoids cancellation
    qi = (p1 / (p2 + p3), p2 / (p1 + p3), p3 / (p1 + p2))
    Q = {}
    for j, k in PAIRS:
        i = 6 - j - k
        Q[(j, k)] = (p[j - 1] * qi[k - 1] + p[k - 1] * qi[j - 1]) / p[i - 1]
    return RateCoefficients(q, *qi, Q[(2, 3)], Q[(1, 3)], Q[(1, 2)])


def delta(params: FridgeParams) -> float:
    """``r1 rbar2 r3 - rbar1 r2 rbar3``; negative exactly in the cooling regime.

    Evaluated through ``expm1`` of the exponent difference so that the sign
    is reliable arbitrarily close to the cooling boundary.
    """
    (r1, _), (r2, _), (r3, _) = bath_populations(params)
    x1, x2, x3 = (E / T for E, T in zip(params.energies, params.temperatures))
    s = x2 - x1 - x3
    if abs(s) < 1.0:
        return -r1 * r2 * r3 * math.exp(-x2) * math.expm1(s)
    return r1 * r2 * r3 * (math.exp(-x2) - math.exp(-x1 - x3))


def _primed(params: FridgeParams):
    pops = bath_populations(params)
    r = [pops[0].r, pops[1].r_bar, pops[2].r]
    rb = [pops[0].r_bar, pops[1].r, pops[2].r_bar]
    unprimed = [x.r for x in pops]
    return r, rb, unprimed


def omega(params: FridgeParams, variant: str = DEFAULT_OMEGA) -> tuple[float, float, float]:
    """``(Omega23, Omega13, Omega12)`` for the chosen variant."""
    if variant not in OMEGA_VARIANTS:
        raise ValueError(f"unknown omega variant {variant!r}; choose from {OMEGA_VARIANTS}")
    r, rb, r0 = _primed(params)
    out = []
    for j, k in PAIRS:
        j, k = j - 1, k - 1
        if variant == "paired":
            out.append(r[j] * r[k] + rb[j] * rb[k])
        elif variant == "literal":
            out.append(r[j] * rb[k] + rb[j] * r0[k])
        else:
            out.append(r[j] * rb[k] + rb[j] * r[k])
    return tuple(out)


def gamma(params: FridgeParams, variant: str = DEFAULT_OMEGA) -> float:
    """Amplitude of the deviation from the thermal product state.

    ``g = 0`` returns exactly 0 (the ``q^2 / 2g^2`` term in the denominator
    diverges).
    """
    if params.g == 0:
        return 0.0
    c = rate_coefficients(*params.rates)
    om = omega(params, variant)
    rest = 2.0 + c.q1 + c.q2 + c.q3 + c.Q23 * om[0] + c.Q13 * om[1] + c.Q12 * om[2]
    g2 = params.g * params.g
    # -Delta / (rest + q^2/(2 g^2)), scaled by 2 g^2 to stay finite for tiny g
    return -delta(params) * 2.0 * g2 / (2.0 * g2 * rest + c.q * c.q)


def steady_coefficients(params: FridgeParams, variant: str = DEFAULT_OMEGA) -> SteadyCoefficients:
    c = rate_coefficients(*params.rates)
    om = omega(params, variant)
    return SteadyCoefficients(
        q=c.q, q1=c.q1, q2=c.q2, q3=c.q3, Q23=c.Q23, Q13=c.Q13, Q12=c.Q12,
        Delta=delta(params), Omega23=om[0], Omega13=om[1], Omega12=om[2],
        gamma=gamma(params, variant),
    )


def steady_state_operator(params: FridgeParams, variant: str = DEFAULT_OMEGA) -> QOperator:
    """The closed-form stationary state without density-matrix validation."""
    t1, t2, t3 = bath_states(params)
    product = tensor(t1, t2, t3)
    if params.g == 0:
        # gamma ~ g^2 so even the q/(2g) Y123 term vanishes in the limit
        return product
    c = rate_coefficients(*params.rates)
    ops = pauli_like_operators()
    gam = gamma(params, variant)
    correction = (
        c.Q23 * tensor(ops["Z1"], t2, t3)
        + c.Q13 * tensor(t1, ops["Z2"], t3)
        + c.Q12 * tensor(t1, t2, ops["Z3"])
        + c.q1 * tensor(t1, ops["Z23"])
        + c.q2 * tensor(t2, ops["Z13"])
        + c.q3 * tensor(ops["Z12"], t3)
        + ops["Z123"]
        + (c.q / (2.0 * params.g)) * ops["Y123"]
    )
    return product + gam * correction


def steady_state(params: FridgeParams, variant: str = DEFAULT_OMEGA) -> DensityMatrix:
    return validate_density(steady_state_operator(params, variant))


def reduced_steady_state(params: FridgeParams, i: int) -> DensityMatrix:
    """Stationary state of qubit ``i`` alone: ``tau_i + (q gamma / p_i) Z_i``."""
    if i not in (1, 2, 3):
        raise DomainError(f"qubit index must be 1, 2 or 3, got {i}")
    tau = bath_states(params)[i - 1]
    Zi = pauli_like_operators()[f"Z{i}"]
    shift = params.q * gamma(params) / params.rates[i - 1]
    return validate_density(tau + shift * Zi)


def effective_temperature(state: QOperator, E: float) -> float:
    """Temperature at which a qubit with gap ``E`` would have the populations of ``state``.

    Signed: negative under population inversion. Returns ``inf`` when the
    populations are equal and ``0.0`` when the excited population vanishes.
    """
    m = state.entries if isinstance(state, QOperator) else np.asarray(state)
    if m.shape != (2, 2):
        raise DensityError("shape", float(m.shape[0]), f"expected a single-qubit state, got shape {m.shape}")
    off = float(max(abs(m[0, 1]), abs(m[1, 0])))
    if off > DIAG_TOL:
        raise DensityError("shape", off, f"state is not diagonal: |off-diagonal| = {off:.3e}")
    if not E > 0:
        raise DomainError(f"energy gap must be > 0, got {E}")
    p0, p1 = float(m[0, 0].real), float(m[1, 1].real)
    if abs(p0 - p1) <= EQUAL_POP_TOL:
        return math.inf
    if p1 <= 0:
        return 0.0
    if p0 <= 0:
        return -0.0
    return E / math.log(p0 / p1)


def stationary_temperature(params: FridgeParams, i: int = 1) -> float:
    return effective_temperature(reduced_steady_state(params, i), params.energies[i - 1])
