"""Three-qubit self-contained quantum absorption refrigerator.

Closed-form stationary state, master-equation dynamics, heat currents and
efficiency, with numerical oracles for every closed form.
"""

from .model import FridgeParams, free_hamiltonian, interaction_hamiltonian, thermal_populations
from .steady import gamma, reduced_steady_state, steady_coefficients, steady_state
from .dynamics import evolve, liouvillian_matrix, master_rhs, steady_state_numeric
from .thermo import (
    carnot_efficiency,
    cooling_condition,
    efficiency,
    heat_currents,
    max_quantum_efficiency,
)

__version__ = "0.1.0"
