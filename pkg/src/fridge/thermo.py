"""Heat currents, efficiency and the three-bath Carnot reference.

Sign convention: every current is the heat flowing from a bath into the
machine. At stationarity ``Qc + Qr + Qh = 0``, and the room current is
negative when the machine cools (heat is dumped into the room bath).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRegimeError, DomainError, NotARefrigeratorError
from .model import FridgeParams, bath_states, local_hamiltonian
from .qops import QOperator, partial_trace
from .steady import gamma

FIRST_LAW_TOL = 1e-12
EFFICIENCY_TOL = 1e-12


@dataclass(frozen=True)
class HeatCurrents:
    Qc: float
    Qr: float
    Qh: float

    @property
    def total(self) -> float:
        return self.Qc + self.Qr + self.Qh

    def first_law_defect(self) -> float:
        """``|Qc + Qr + Qh|`` relative to the current magnitudes (0 when all vanish)."""
        scale = abs(self.Qc) + abs(self.Qr) + abs(self.Qh)
        if scale == 0:
            return 0.0
        return abs(self.total) / scale

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.Qc, self.Qr, self.Qh)


def heat_current_numeric(rho: QOperator, params: FridgeParams, i: int) -> float:
    """``p_i Tr(H_i (tau_i - rho_i))`` for an arbitrary three-qubit state."""
    if i not in (1, 2, 3):
        raise DomainError(f"qubit index must be 1, 2 or 3, got {i}")
    rho_i = partial_trace(rho, (i,))
    tau_i = bath_states(params)[i - 1]
    H_i = local_hamiltonian(params, i)
    return float(params.rates[i - 1] * np.trace(H_i.entries @ (tau_i.entries - rho_i.entries)).real)


def heat_currents(params: FridgeParams) -> HeatCurrents:
    qg = params.q * gamma(params)
    return HeatCurrents(qg * params.E1, -qg * params.E2, qg * params.E3)


def _check_ordering(Tc: float, Tr: float, Th: float):
    if min(Tc, Tr, Th) <= 0:
        raise DomainError(f"temperatures must be > 0, got {(Tc, Tr, Th)}")
    if Tr <= Tc:
        raise DegenerateRegimeError(f"need Tr > Tc for a finite bound, got Tc={Tc}, Tr={Tr}")
    if Tr > Th:
        raise DomainError(f"need Tr <= Th, got Tr={Tr}, Th={Th}")


def _bound(Tc: float, Tr: float, Th: float) -> float:
    return (1.0 - Tr / Th) / (Tr / Tc - 1.0)


def carnot_efficiency(Tc: float, Tr: float, Th: float) -> float:
    """Reversible three-bath bound on ``Qc/Qh``.

    Obtained by feeding the work of a Carnot engine between ``Th`` and ``Tr``
    into a Carnot heat pump between ``Tc`` and ``Tr``: per unit of heat from
    the hot bath the engine delivers ``W = 1 - Tr/Th``, and the pump moves
    ``W / (Tr/Tc - 1)`` out of the cold bath. Zero at ``Tr = Th``; diverges
    as ``Tr -> Tc``, which is rejected.
    """
    _check_ordering(Tc, Tr, Th)
    engine_work = 1.0 - Tr / Th
    pump_heat_per_work = Tr / Tc - 1.0
    return engine_work / pump_heat_per_work


def max_quantum_efficiency(Tc: float, Tr: float, Th: float) -> float:
    """Supremum of ``E1/E3`` over the cooling regime, i.e. the cooling bound itself."""
    _check_ordering(Tc, Tr, Th)
    return _bound(Tc, Tr, Th)


def cooling_condition(params: FridgeParams) -> tuple[bool, float]:
    """``(cooling, margin)`` with ``margin = bound - E1/E3``."""
    Tc, Tr, Th = params.temperatures
    if Tr <= Tc:
        raise DegenerateRegimeError(f"need Tr > Tc for the cooling bound, got Tc={Tc}, Tr={Tr}")
    margin = _bound(Tc, Tr, Th) - params.E1 / params.E3
    return margin > 0, margin


def critical_E1(E3: float, Tc: float, Tr: float, Th: float) -> float:
    """Largest ``E1`` (exclusive) for which the machine still cools."""
    if Tr <= Tc:
        raise DegenerateRegimeError(f"need Tr > Tc, got Tc={Tc}, Tr={Tr}")
    return E3 * _bound(Tc, Tr, Th)


def efficiency(params: FridgeParams) -> float:
    """Coefficient of performance ``Qc/Qh``, which equals ``E1/E3``.

    Raises :class:`NotARefrigeratorError` outside the cooling regime.
    """
    g = gamma(params)
    if not g > 0:
        raise NotARefrigeratorError(f"gamma = {g:.3e} <= 0: parameters do not describe a refrigerator")
    eta = params.E1 / params.E3
    cur = heat_currents(params)
    ratio = cur.Qc / cur.Qh
    if abs(ratio - eta) > EFFICIENCY_TOL * max(1.0, eta):
        raise ArithmeticError(f"Qc/Qh = {ratio!r} disagrees with E1/E3 = {eta!r}")
    return eta


def entropy_production_rate(params: FridgeParams) -> float:
    """``-(Qc/Tc + Qr/Tr + Qh/Th) = q gamma (E2/Tr - E1/Tc - E3/Th)``."""
    return params.q * gamma(params) * (params.E2 / params.Tr - params.E1 / params.Tc - params.E3 / params.Th)


def is_cooling(params: FridgeParams) -> bool:
    try:
        return cooling_condition(params)[0]
    except DegenerateRegimeError:
        return False

