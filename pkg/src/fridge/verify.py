"""Randomised cross-check of every closed form against the numerical oracles.

Parameter sets are drawn with NumPy's ``Generator(PCG64)`` seeded from the
user seed, in this order per sample:

* ``E1, E3`` uniform in ``[0.1, 10]``
* three temperatures uniform in ``[0.1, 20]``, sorted into ``Tc <= Tr <= Th``
* ``g`` uniform in ``[1e-4, 1e-2] * min(E1, E3)``
* ``p1, p2, p3`` uniform in ``[1e-5, 1e-3] * min(E1, E3)``
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import kernel_spectrum, master_rhs, steady_state_numeric
from .errors import DegenerateRegimeError, FridgeError
from .model import FridgeParams
from .steady import gamma, steady_state
from .thermo import cooling_condition, entropy_production_rate, heat_currents

ORACLE_TOL = 1e-10
RESIDUAL_TOL = 1e-10  # times q
FIRST_LAW_TOL = 1e-12
SECOND_LAW_TOL = 1e-14
RATIO_TOL = 1e-12
SIGN_MARGIN = 1e-9
KERNEL_GAP_RATIO = 1e8

RANGES = {
    "E": (0.1, 10.0),
    "T": (0.1, 20.0),
    "g": (1e-4, 1e-2),
    "p": (1e-5, 1e-3),
}


def sample_params(rng: np.random.Generator) -> FridgeParams:
    E1, E3 = rng.uniform(*RANGES["E"], size=2)
    Tc, Tr, Th = np.sort(rng.uniform(*RANGES["T"], size=3))
    scale = min(E1, E3)
    g = rng.uniform(*RANGES["g"]) * scale
    p1, p2, p3 = rng.uniform(*RANGES["p"], size=3) * scale
    return FridgeParams(E1=E1, E3=E3, g=g, p1=p1, p2=p2, p3=p3, Tc=Tc, Tr=Tr, Th=Th)


def sample_many(n: int, seed: int) -> list[FridgeParams]:
    rng = np.random.Generator(np.random.PCG64(seed))
    return [sample_params(rng) for _ in range(n)]


@dataclass
class SampleReport:
    params: FridgeParams
    oracle_distance: float = math.nan
    residual: float = math.nan
    first_law: float = math.nan
    entropy_production: float = math.nan
    ratio_error: float = 0.0
    sign_agrees: bool = True
    kernel_gap: float = math.nan
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def check_sample(params: FridgeParams) -> SampleReport:
    rep = SampleReport(params)
    try:
        rho = steady_state(params)
        rho_num = steady_state_numeric(params)
    except FridgeError as exc:
        rep.failures.append(f"steady state: {exc}")
        return rep

    rep.oracle_distance = float(np.max(np.abs(rho.entries - rho_num.entries)))
    if not rep.oracle_distance <= ORACLE_TOL:
        rep.failures.append(f"analytic vs kernel distance {rep.oracle_distance:.3e} > {ORACLE_TOL:g}")

    rep.residual = float(np.max(np.abs(master_rhs(rho, params).entries)))
    if not rep.residual <= RESIDUAL_TOL * params.q:
        rep.failures.append(f"master equation residual {rep.residual:.3e} > {RESIDUAL_TOL:g} q")

    cur = heat_currents(params)
    rep.first_law = cur.first_law_defect()
    if not rep.first_law <= FIRST_LAW_TOL:
        rep.failures.append(f"first law defect {rep.first_law:.3e}")

    rep.entropy_production = entropy_production_rate(params)
    if not rep.entropy_production >= -SECOND_LAW_TOL:
        rep.failures.append(f"negative entropy production {rep.entropy_production:.3e}")

    gam = gamma(params)
    eta = params.E1 / params.E3
    if gam != 0:
        rep.ratio_error = abs(cur.Qc / cur.Qh - eta) / max(1.0, eta)
        if not rep.ratio_error <= RATIO_TOL:
            rep.failures.append(f"Qc/Qh deviates from E1/E3 by {rep.ratio_error:.3e}")

    try:
        _, margin = cooling_condition(params)
    except DegenerateRegimeError:
        margin = 0.0
    if abs(margin) > SIGN_MARGIN:
        rep.sign_agrees = np.sign(gam) == np.sign(margin)
        if not rep.sign_agrees:
            rep.failures.append(f"sign(gamma)={np.sign(gam):+.0f} but cooling margin {margin:+.3e}")

    s = kernel_spectrum(params)
    rep.kernel_gap = float(s[-2] / s[-1]) if s[-1] > 0 else math.inf
    if not rep.kernel_gap >= KERNEL_GAP_RATIO:
        rep.failures.append(f"kernel singular-value gap {rep.kernel_gap:.3e} < {KERNEL_GAP_RATIO:g}")
    return rep


def run_verification(samples: int, seed: int, extra: list[FridgeParams] = ()) -> list[SampleReport]:
    """Check ``extra`` followed by ``samples`` seeded random parameter sets."""
    return [check_sample(p) for p in [*extra, *sample_many(samples, seed)]]
