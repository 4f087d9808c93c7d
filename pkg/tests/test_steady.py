import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fridge.dynamics import master_rhs, steady_state_numeric
from fridge.errors import DensityError, DomainError
from fridge.model import FridgeParams, bath_populations, bath_states, pauli_like_operators, thermal_populations
from fridge.qops import partial_trace, tensor, validate_density
from fridge.steady import (
    OMEGA_VARIANTS,
    delta,
    effective_temperature,
    gamma,
    omega,
    rate_coefficients,
    reduced_steady_state,
    stationary_temperature,
    steady_coefficients,
    steady_state,
    steady_state_operator,
)
from fridge.thermo import cooling_condition, critical_E1
from conftest import CANONICAL, fridge_params


def residual(rho, p):
    return np.max(np.abs(master_rhs(rho, p).entries))


class TestRateCoefficients:
    def test_symmetric(self):
        c = rate_coefficients(1, 1, 1)
        assert c.q == 3
        assert (c.q1, c.q2, c.q3) == (0.5, 0.5, 0.5)
        assert (c.Q23, c.Q13, c.Q12) == (1.0, 1.0, 1.0)

    def test_asymmetric(self):
        c = rate_coefficients(1, 2, 3)
        assert c.q == 6
        assert (c.q1, c.q2, c.q3) == pytest.approx((0.2, 0.5, 1.0), abs=1e-15)
        assert c.Q23 == pytest.approx(3.5, abs=1e-15)
        # Q13 = (p1 q3 + p3 q1)/p2, Q12 = (p1 q2 + p2 q1)/p3
        assert c.Q13 == pytest.approx((1 * 1.0 + 3 * 0.2) / 2, abs=1e-15)
        assert c.Q12 == pytest.approx((1 * 0.5 + 2 * 0.2) / 3, abs=1e-15)

    def test_zero_rate(self):
        with pytest.raises(DomainError):
            rate_coefficients(1, 0, 1)

    @given(st.lists(st.floats(1e-6, 10), min_size=3, max_size=3))
    def test_positive(self, p):
        c = rate_coefficients(*p)
        assert min(c[1:]) > 0


class TestDelta:
    def test_equilibrium(self):
        p = FridgeParams(**{**CANONICAL, "Tr": 1.0, "Th": 1.0})
        assert abs(delta(p)) <= 1e-17

    def test_cooling_sign(self):
        p = FridgeParams(**{**CANONICAL, "Tc": 1.0, "Tr": 2.0, "Th": 10.0})
        assert delta(p) < 0
        # same sign as the Boltzmann-factor comparison
        assert math.exp(-1 / 1) * math.exp(-2 / 10) > math.exp(-3 / 2)

    def test_beyond_bound(self):
        p = FridgeParams(**{**CANONICAL, "E1": 1.7})
        assert delta(p) > 0
        assert math.exp(-1.7 / 1) * math.exp(-2 / 10) < math.exp(-3.7 / 2)

    @settings(max_examples=100, deadline=None)
    @given(fridge_params())
    def test_matches_product_form(self, p):
        (r1, b1), (r2, b2), (r3, b3) = bath_populations(p)
        direct = r1 * b2 * r3 - b1 * r2 * b3
        assert delta(p) == pytest.approx(direct, rel=1e-9, abs=1e-15)


class TestOmega:
    def test_literal_symmetric_reduction(self):
        p = FridgeParams(**{**CANONICAL, "E3": 1.0, "Tr": 1.0, "Th": 1.0})
        r1, b1 = thermal_populations(1.0, 1.0)
        assert omega(p, "literal")[1] == pytest.approx(2 * r1 * b1, abs=1e-16)

    def test_paired_symmetric_reduction(self):
        p = FridgeParams(**{**CANONICAL, "E3": 1.0, "Tr": 1.0, "Th": 1.0})
        r1, b1 = thermal_populations(1.0, 1.0)
        assert omega(p, "paired")[1] == pytest.approx(r1 * r1 + b1 * b1, abs=1e-16)

    @pytest.mark.parametrize("variant", OMEGA_VARIANTS)
    @settings(max_examples=30, deadline=None)
    @given(p=fridge_params())
    def test_unit_interval(self, variant, p):
        w = omega(p, variant)
        assert all(0 <= x <= 1 for x in w)
        if max(E / T for E, T in zip(p.energies, p.temperatures)) < 30:
            # strict once no population has rounded to 0 or 1
            assert all(0 < x < 1 for x in w)

    def test_paired_is_population_difference(self, strong):
        """Omega_jk equals the |010>/|101> population difference of the Q_jk term."""
        t = bath_states(strong)
        ops = pauli_like_operators()
        terms = [tensor(ops["Z1"], t[1], t[2]), tensor(t[0], ops["Z2"], t[2]), tensor(t[0], t[1], ops["Z3"])]
        diffs = [(x.entries[2, 2] - x.entries[5, 5]).real for x in terms]
        assert omega(strong, "paired") == pytest.approx(diffs, abs=1e-15)

    def test_unknown_variant(self, canonical):
        with pytest.raises(ValueError):
            omega(canonical, "other")

    def test_variant_selection(self, strong):
        """Only the paired variant yields a stationary state; the printed ones do not."""
        q = strong.q
        res = {v: residual(steady_state_operator(strong, v), strong) for v in OMEGA_VARIANTS}
        assert res["paired"] <= 1e-14 * q
        assert res["literal"] > 1e-4 * q
        assert res["symmetrized"] > 1e-4 * q


class TestGamma:
    def test_equilibrium(self):
        assert gamma(FridgeParams(**{**CANONICAL, "Tr": 1.0, "Th": 1.0})) == 0

    def test_zero_coupling(self):
        assert gamma(FridgeParams(**{**CANONICAL, "g": 0.0})) == 0.0

    def test_cooling_positive(self, canonical):
        assert gamma(canonical) > 0

    @settings(max_examples=30, deadline=None)
    @given(fridge_params())
    def test_matches_oracle_shift(self, p):
        """q gamma / p_1 is the ground-population shift of qubit 1 in the kernel solution."""
        rho1 = partial_trace(steady_state_numeric(p), [1]).entries[0, 0].real
        r1 = bath_populations(p)[0].r
        assert gamma(p) == pytest.approx((rho1 - r1) * p.p1 / p.q, abs=1e-10 * p.p1 / p.q)

    @settings(max_examples=100, deadline=None)
    @given(fridge_params())
    def test_sign_of_minus_delta(self, p):
        c = steady_coefficients(p)
        assert np.sign(c.gamma) == np.sign(-c.Delta)


class TestSteadyState:
    def test_equilibrium_is_product(self):
        p = FridgeParams(**{**CANONICAL, "Tr": 1.0, "Th": 1.0})
        prod = tensor(*bath_states(p))
        assert np.array_equal(steady_state(p).entries, prod.entries)

    def test_zero_coupling_is_product(self):
        p = FridgeParams(**{**CANONICAL, "g": 0.0})
        assert np.array_equal(steady_state(p).entries, tensor(*bath_states(p)).entries)

    def test_matches_oracle(self, canonical, strong):
        for p in (canonical, strong):
            assert np.max(np.abs(steady_state(p).entries - steady_state_numeric(p).entries)) <= 1e-10

    def test_coherence_support(self, strong):
        m = steady_state(strong).entries
        mask = np.ones((8, 8), bool)
        np.fill_diagonal(mask, False)
        mask[2, 5] = mask[5, 2] = False
        assert np.max(np.abs(m[mask])) == 0
        assert abs(m[2, 5]) > 0

    def test_exact_beyond_weak_coupling(self):
        """Stationarity holds at round-off even with g and p_i comparable to the gaps."""
        for g, p in [(0.3, (0.1, 0.2, 0.15)), (2.0, (1.0, 0.5, 3.0)), (1e-6, (5.0, 5.0, 5.0))]:
            params = FridgeParams(E1=1.0, E3=2.0, g=g, p1=p[0], p2=p[1], p3=p[2], Tc=1.0, Tr=2.0, Th=10.0)
            assert residual(steady_state(params), params) <= 1e-14 * params.q

    @settings(max_examples=60, deadline=None)
    @given(fridge_params())
    def test_residual(self, p):
        assert residual(steady_state(p), p) <= 1e-10 * p.q

    @settings(max_examples=40, deadline=None)
    @given(fridge_params())
    def test_marginals_diagonal(self, p):
        rho = steady_state(p)
        for keep in ((1, 2), (1, 3), (2, 3), (1,), (2,), (3,)):
            m = partial_trace(rho, keep).entries
            assert np.max(np.abs(m - np.diag(np.diag(m)))) <= 1e-12


class TestReducedState:
    def test_equilibrium(self):
        p = FridgeParams(**{**CANONICAL, "Tr": 1.0, "Th": 1.0})
        for i in (1, 2, 3):
            assert np.array_equal(reduced_steady_state(p, i).entries, bath_states(p)[i - 1].entries)

    def test_cooling_increases_ground(self, canonical):
        r1 = bath_populations(canonical)[0].r
        assert reduced_steady_state(canonical, 1).entries[0, 0].real > r1

    @settings(max_examples=40, deadline=None)
    @given(fridge_params())
    def test_matches_partial_trace(self, p):
        rho = steady_state(p)
        for i in (1, 2, 3):
            diff = reduced_steady_state(p, i).entries - partial_trace(rho, [i]).entries
            assert np.max(np.abs(diff)) <= 1e-12

    def test_bad_index(self, canonical):
        with pytest.raises(DomainError):
            reduced_steady_state(canonical, 4)


class TestEffectiveTemperature:
    @pytest.mark.parametrize("E,T", [(1.0, 1.0), (2.5, 0.3), (0.1, 17.0)])
    def test_round_trip(self, E, T):
        r, rb = thermal_populations(E, T)
        state = validate_density(np.diag([r, rb]))
        assert effective_temperature(state, E) == pytest.approx(T, rel=1e-12)

    def test_equal_populations(self):
        assert effective_temperature(validate_density(np.diag([0.5, 0.5])), 1.0) == math.inf

    def test_ground_state(self):
        assert effective_temperature(validate_density(np.diag([1.0, 0.0])), 1.0) == 0.0

    def test_inverted(self):
        assert effective_temperature(validate_density(np.diag([0.3, 0.7])), 1.0) < 0

    def test_non_diagonal(self):
        with pytest.raises(DensityError):
            effective_temperature(validate_density(np.array([[0.5, 0.1], [0.1, 0.5]])), 1.0)

    def test_cold_qubit(self, canonical):
        assert stationary_temperature(canonical, 1) < canonical.Tc


class TestSignLaw:
    @settings(max_examples=200, deadline=None)
    @given(fridge_params())
    def test_gamma_margin_temperature(self, p):
        if p.Tr <= p.Tc:
            return
        cooling, margin = cooling_condition(p)
        if abs(margin) <= 1e-9:
            return
        g = gamma(p)
        assert (g > 0) == cooling
        assert (stationary_temperature(p, 1) < p.Tc) == cooling

    def test_boundary_approach(self, canonical):
        E1s = critical_E1(canonical.E3, *canonical.temperatures) * (1 - np.logspace(-1, -6, 30))
        gs = [gamma(canonical.replace(E1=x)) for x in E1s]
        Ts = [stationary_temperature(canonical.replace(E1=x), 1) for x in E1s]
        assert all(g > 0 for g in gs)
        assert np.all(np.diff(gs) < 0)
        assert np.all(np.diff(Ts) > 0)
        assert Ts[-1] < canonical.Tc
        assert canonical.Tc - Ts[-1] < 1e-5
