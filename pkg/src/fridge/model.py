"""Physical parameters, thermal qubit states and the refrigerator Hamiltonians.

Units throughout: hbar = k_B = 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import InitVar, asdict, dataclass
from typing import Mapping, NamedTuple

import numpy as np

from .errors import DomainError
from .qops import QOperator, partial_trace, validate_density, DensityMatrix

PARAM_KEYS = ("E1", "E3", "g", "p1", "p2", "p3", "Tc", "Tr", "Th")

# "g << E_i" made concrete; only drives a warning flag.
WEAK_COUPLING_RATIO = 0.01


@dataclass(frozen=True)
class FridgeParams:
    """The nine inputs of the three-qubit refrigerator.

    The middle qubit's gap ``E2`` is derived as ``E1 + E3`` and never stored.
    Construction enforces positive energies, rates and temperatures and the
    ordering ``Tc <= Tr <= Th``. Pass ``checked=False`` (or use
    :meth:`unchecked`) to skip these checks for exploratory sweeps.
    """

    E1: float
    E3: float
    g: float
    p1: float
    p2: float
    p3: float
    Tc: float
    Tr: float
    Th: float
    checked: InitVar[bool] = True

    def __post_init__(self, checked):
        for k in PARAM_KEYS:
            v = getattr(self, k)
            if isinstance(v, bool) or not isinstance(v, (int, float, np.floating, np.integer)):
                raise DomainError(f"{k} must be a number, got {v!r}")
            v = float(v)
            if not math.isfinite(v):
                raise DomainError(f"{k} must be finite, got {v}")
            object.__setattr__(self, k, v)
        if not checked:
            return
        for k in ("E1", "E3", "p1", "p2", "p3", "Tc", "Tr", "Th"):
            if getattr(self, k) <= 0:
                raise DomainError(f"{k} must be > 0, got {getattr(self, k)}")
        if self.g < 0:
            raise DomainError(f"g must be >= 0, got {self.g}")
        if not self.Tc <= self.Tr <= self.Th:
            raise DomainError(
                f"temperatures must satisfy Tc <= Tr <= Th, got Tc={self.Tc}, Tr={self.Tr}, Th={self.Th}"
            )

    @classmethod
    def unchecked(cls, **kwargs) -> FridgeParams:
        return cls(**kwargs, checked=False)

    @property
    def E2(self) -> float:
        return self.E1 + self.E3

    @property
    def energies(self) -> tuple[float, float, float]:
        return (self.E1, self.E2, self.E3)

    @property
    def rates(self) -> tuple[float, float, float]:
        return (self.p1, self.p2, self.p3)

    @property
    def temperatures(self) -> tuple[float, float, float]:
        return (self.Tc, self.Tr, self.Th)

    @property
    def q(self) -> float:
        return self.p1 + self.p2 + self.p3

    @property
    def weak_coupling_ok(self) -> bool:
        scale = WEAK_COUPLING_RATIO * min(self.E1, self.E3)
        return self.g <= scale and max(self.rates) <= scale

    def replace(self, checked: bool = True, **changes) -> FridgeParams:
        d = self.to_dict()
        d.update(changes)
        return type(self)(**d, checked=checked)

    def to_dict(self) -> dict[str, float]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_mapping(cls, data: Mapping) -> FridgeParams:
        if not isinstance(data, Mapping):
            raise DomainError("parameters must be a JSON object")
        unknown = sorted(set(data) - set(PARAM_KEYS))
        if unknown:
            raise DomainError(f"unknown parameter key(s): {', '.join(unknown)}")
        missing = [k for k in PARAM_KEYS if k not in data]
        if missing:
            raise DomainError(f"missing parameter key(s): {', '.join(missing)}")
        return cls(**{k: data[k] for k in PARAM_KEYS})

    @classmethod
    def from_json(cls, text: str) -> FridgeParams:
        return cls.from_mapping(json.loads(text))


class ThermalQubit(NamedTuple):
    r: float
    r_bar: float


def thermal_populations(E: float, T: float) -> ThermalQubit:
    """Ground and excited Boltzmann populations of a qubit with gap ``E`` at temperature ``T``."""
    if not T > 0:
        raise DomainError(f"temperature must be > 0, got {T}")
    if E < 0:
        raise DomainError(f"energy gap must be >= 0, got {E}")
    x = E / T
    # exp(-x) underflows to 0.0 for large x, which is the intended clamp
    w = math.exp(-x)
    return ThermalQubit(1.0 / (1.0 + w), w / (1.0 + w))


def thermal_state(E: float, T: float, label: int = 1) -> DensityMatrix:
    r, rb = thermal_populations(E, T)
    return validate_density(QOperator(np.diag([r, rb]), (label,)))


def bath_populations(params: FridgeParams) -> tuple[ThermalQubit, ThermalQubit, ThermalQubit]:
    """Thermal populations of qubits 1, 2, 3 at their own bath temperatures."""
    return tuple(thermal_populations(E, T) for E, T in zip(params.energies, params.temperatures))


def bath_states(params: FridgeParams) -> tuple[DensityMatrix, DensityMatrix, DensityMatrix]:
    return tuple(
        thermal_state(E, T, label=i)
        for i, (E, T) in enumerate(zip(params.energies, params.temperatures), start=1)
    )


def _occupations(b: int) -> tuple[int, int, int]:
    return ((b >> 2) & 1, (b >> 1) & 1, b & 1)


def free_hamiltonian(params: FridgeParams) -> QOperator:
    E = params.energies
    diag = [sum(e * n for e, n in zip(E, _occupations(b))) for b in range(8)]
    return QOperator(np.diag(diag), (1, 2, 3))


def local_hamiltonian(params: FridgeParams, i: int) -> QOperator:
    """``E_i |1><1|`` on qubit ``i`` alone."""
    if i not in (1, 2, 3):
        raise DomainError(f"qubit index must be 1, 2 or 3, got {i}")
    return QOperator(np.diag([0.0, params.energies[i - 1]]), (i,))


IDX_010 = 2
IDX_101 = 5


def interaction_hamiltonian(g: float) -> QOperator:
    """``g (|010><101| + |101><010|)``: swaps the two degenerate levels."""
    if g < 0:
        raise DomainError(f"coupling must be >= 0, got {g}")
    m = np.zeros((8, 8))
    m[IDX_010, IDX_101] = m[IDX_101, IDX_010] = g
    return QOperator(m, (1, 2, 3))


def total_hamiltonian(params: FridgeParams) -> QOperator:
    return free_hamiltonian(params) + interaction_hamiltonian(params.g)


def pauli_like_operators() -> dict[str, QOperator]:
    """The Pauli-like operators on the ``{|010>, |101>}`` subspace and their marginals.

    Keys: ``Z123``, ``Y123``, ``Z12``, ``Z13``, ``Z23``, ``Z1``, ``Z2``, ``Z3``.
    Lower-order ``Z`` operators are partial traces of ``Z123``; note
    ``Z1 = -Z2 = Z3 = diag(1, -1)``.
    """
    z = np.zeros((8, 8), dtype=complex)
    z[IDX_010, IDX_010] = 1.0
    z[IDX_101, IDX_101] = -1.0
    y = np.zeros((8, 8), dtype=complex)
    y[IDX_101, IDX_010] = 1j
    y[IDX_010, IDX_101] = -1j
    Z123 = QOperator(z, (1, 2, 3))
    ops = {"Z123": Z123, "Y123": QOperator(y, (1, 2, 3))}
    for keep in ((1, 2), (1, 3), (2, 3), (1,), (2,), (3,)):
        ops["Z" + "".join(map(str, keep))] = partial_trace(Z123, keep)
    return ops
