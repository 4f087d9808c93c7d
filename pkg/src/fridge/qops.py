"""Dense operator algebra on up to three qubits.

Basis convention: for an operator on qubits ``labels`` (ascending), the
computational-basis index is the binary number formed by the qubit
occupations with the lowest label as most significant bit. On all three
qubits this is ``b = 4*q1 + 2*q2 + q3``, so ``|010>`` is index 2 and
``|101>`` is index 5. ``|0>`` is the ground state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import (
    DegenerateRequestError,
    DensityError,
    DimensionMismatchError,
    LabelCollisionError,
)

HERM_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

QUBITS = (1, 2, 3)


@dataclass(frozen=True, eq=False)
class QOperator:
    """Square complex matrix acting on the qubits listed in ``labels``."""

    entries: np.ndarray
    labels: tuple[int, ...]

    def __post_init__(self):
        labels = tuple(int(x) for x in self.labels)
        if list(labels) != sorted(set(labels)) or not set(labels) <= set(QUBITS):
            raise ValueError(f"labels must be ascending distinct qubits from {QUBITS}, got {labels}")
        m = np.array(self.entries, dtype=complex)
        n = 2 ** len(labels)
        if m.shape != (n, n):
            raise DimensionMismatchError(f"entries of shape {m.shape} do not fit labels {labels}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def nqubits(self) -> int:
        return len(self.labels)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def dag(self) -> QOperator:
        return QOperator(self.entries.conj().T, self.labels)

    def __add__(self, other: QOperator) -> QOperator:
        _check_same_space(self, other)
        return QOperator(self.entries + other.entries, self.labels)

    def __sub__(self, other: QOperator) -> QOperator:
        _check_same_space(self, other)
        return QOperator(self.entries - other.entries, self.labels)

    def __neg__(self) -> QOperator:
        return QOperator(-self.entries, self.labels)

    def __mul__(self, scalar) -> QOperator:
        return QOperator(scalar * self.entries, self.labels)

    __rmul__ = __mul__

    def __matmul__(self, other: QOperator) -> QOperator:
        _check_same_space(self, other)
        return QOperator(self.entries @ other.entries, self.labels)

    def __repr__(self):
        return f"{type(self).__name__}(labels={self.labels}, dim={self.dim})"


class DensityMatrix(QOperator):
    """A QOperator that passed :func:`validate_density`.

    Construct through :func:`validate_density`; the constructor itself does
    not re-check the invariants.
    """

    @property
    def op(self) -> QOperator:
        return QOperator(self.entries, self.labels)

    def populations(self) -> np.ndarray:
        return self.entries.diagonal().real.copy()


def _check_same_space(a: QOperator, b: QOperator):
    if a.labels != b.labels:
        raise DimensionMismatchError(f"operators act on {a.labels} and {b.labels}")


def operator(entries, labels: Iterable[int]) -> QOperator:
    return QOperator(np.asarray(entries), tuple(labels))


def identity(labels: Iterable[int]) -> QOperator:
    labels = tuple(labels)
    return QOperator(np.eye(2 ** len(labels)), labels)


def _permute(entries: np.ndarray, labels: tuple[int, ...], target: tuple[int, ...]) -> np.ndarray:
    n = len(labels)
    perm = [labels.index(t) for t in target]
    t = entries.reshape((2,) * (2 * n))
    t = t.transpose(perm + [n + k for k in perm])
    return t.reshape(2**n, 2**n)


def tensor(a: QOperator, b: QOperator, *rest: QOperator) -> QOperator:
    """Tensor product with qubit labels merged into ascending order."""
    if rest:
        return tensor(tensor(a, b), *rest)
    if set(a.labels) & set(b.labels):
        raise LabelCollisionError(f"labels {a.labels} and {b.labels} overlap")
    joined = a.labels + b.labels
    target = tuple(sorted(joined))
    return QOperator(_permute(np.kron(a.entries, b.entries), joined, target), target)


def partial_trace(a: QOperator, keep: Iterable[int]) -> QOperator:
    """Trace out every qubit of ``a`` not listed in ``keep``."""
    keep = tuple(sorted(set(keep)))
    if not keep:
        raise DegenerateRequestError("partial trace must keep at least one qubit")
    if not set(keep) <= set(a.labels):
        raise DegenerateRequestError(f"cannot keep {keep}: operator acts on {a.labels}")
    labels = list(a.labels)
    t = a.entries.reshape((2,) * (2 * len(labels)))
    for lab in reversed(a.labels):
        if lab in keep:
            continue
        k = labels.index(lab)
        t = np.trace(t, axis1=k, axis2=k + len(labels))
        labels.pop(k)
    n = 2 ** len(labels)
    return QOperator(t.reshape(n, n), tuple(labels))


def commutator(a: QOperator, b: QOperator) -> QOperator:
    _check_same_space(a, b)
    return QOperator(a.entries @ b.entries - b.entries @ a.entries, a.labels)


def hermiticity_defect(a: QOperator | np.ndarray) -> float:
    m = a.entries if isinstance(a, QOperator) else np.asarray(a)
    return float(np.max(np.abs(m - m.conj().T)))


def trace_distance(a: QOperator, b: QOperator) -> float:
    """Half the trace norm of ``a - b``."""
    _check_same_space(a, b)
    d = a.entries - b.entries
    d = 0.5 * (d + d.conj().T)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(d))))


def validate_density(a: QOperator | np.ndarray, labels: Iterable[int] | None = None) -> DensityMatrix:
    """Return ``a`` as a :class:`DensityMatrix` or raise :class:`DensityError`.

    Checks Hermiticity (``HERM_TOL``), unit trace (``TRACE_TOL``) and
    positivity (minimum eigenvalue >= ``-PSD_TOL``).
    """
    if not isinstance(a, QOperator):
        m = np.asarray(a)
        if labels is None:
            n = int(round(np.log2(m.shape[0]))) if m.ndim == 2 and m.shape[0] > 0 else 0
            labels = QUBITS[:n]
        a = QOperator(m, tuple(labels))
    m = a.entries
    herm = hermiticity_defect(m)
    if herm > HERM_TOL:
        raise DensityError("hermiticity", herm, f"not Hermitian: max |A - A^H| = {herm:.3e}")
    tr = np.trace(m)
    dev = abs(tr - 1.0)
    if dev > TRACE_TOL:
        raise DensityError("trace", dev, f"trace {tr.real:.15g} deviates from 1 by {dev:.3e}")
    lam = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])
    if lam < -PSD_TOL:
        raise DensityError("positivity", -lam, f"negative eigenvalue {lam:.3e}")
    return DensityMatrix(m, a.labels)
