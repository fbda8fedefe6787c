"""
Tests for the Hamilton-Jacobi residuals.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scale_dynamics.errors import DomainError, UnsupportedConfigurationError
from scale_dynamics.fields import ScalarField
from scale_dynamics.hamilton_jacobi import (
    ActionField,
    hamiltonian_pair,
    hj_residual_general,
    hj_split_residuals,
    velocities_from_action,
)
from scale_dynamics.kepler import (
    KeplerSystem,
    ground_state_action,
    ground_state_energy,
    kepler_potential_field,
    sqrtP_linear,
)
from scale_dynamics.scale_regime import (
    ETA_MINUS_ONE,
    ETA_PLUS_ONE,
    EtaParameter,
    LambdaForm,
    ScaleRegime,
)
from shared.test_utils import random_point, random_smooth_field

ZERO = ScalarField.constant(0.0, 3)


def _free_action(p: np.ndarray, m: float) -> ScalarField:
    """p.x - p^2 t / 2m."""
    energy = float(np.dot(p, p)) / (2.0 * m)
    return ScalarField(
        value=lambda t, x: float(np.dot(p, x)) - energy * t,
        dimension=3,
        gradient_fn=lambda t, x: p.astype(np.complex128),
        hessian_fn=lambda t, x: np.zeros((3, 3), dtype=np.complex128),
        time_fn=lambda t, x: -energy,
    )


class TestGeneralResidual:
    def test_free_particle(self) -> None:
        m = 1.7
        action = ActionField(_free_action(np.array([0.3, -1.2, 0.5]), m), ZERO, ETA_MINUS_ONE)
        residual = hj_residual_general(
            action, ZERO, ScaleRegime.linear(3), m, 0.4, [1.0, 2.0, -0.5]
        )
        assert abs(residual) < 1e-14

    def test_constant_action_returns_potential(self) -> None:
        action = ActionField(ScalarField.constant(2.0, 3), ZERO, ETA_MINUS_ONE)
        regime = ScaleRegime.uniform(0.5, 1.0, 0.5, 3)
        potential = ScalarField.constant(-0.75, 3)
        residual = hj_residual_general(action, potential, regime, 1.0, 0.0, [1.0, 0.0, 0.0])
        assert residual == -0.75

    @pytest.mark.parametrize("r", [0.3, 1.0, 2.5, 10.0])
    def test_kepler_ground_state(self, r: float, heavy_system: KeplerSystem) -> None:
        state = sqrtP_linear(heavy_system)
        action = ground_state_action(heavy_system, state)
        residual = hj_residual_general(
            action,
            kepler_potential_field(heavy_system),
            heavy_system.regime(),
            heavy_system.m,
            0.7,
            r * np.array([0.0, 0.6, 0.8]),
        )
        scale = ground_state_energy(heavy_system).oracle
        assert abs(residual) / scale < 1e-10

    def test_dimension_mismatch(self) -> None:
        with pytest.raises(DomainError):
            ActionField(ZERO, ScalarField.constant(0.0, 2), ETA_MINUS_ONE)


class TestSplitResiduals:
    """The general residual recombines as first + i*eta*second."""

    @given(
        seed=st.integers(min_value=0, max_value=10_000),
        plus=st.floats(0.0, 2.0),
        minus=st.floats(0.0, 2.0),
        m=st.floats(0.1, 10.0),
        eta=st.sampled_from([ETA_PLUS_ONE, ETA_MINUS_ONE]),
        form=st.sampled_from(list(LambdaForm)),
    )
    @settings(max_examples=60, deadline=None)
    def test_recombination(
        self,
        seed: int,
        plus: float,
        minus: float,
        m: float,
        eta: EtaParameter,
        form: LambdaForm,
    ) -> None:
        S = random_smooth_field(seed)
        R = random_smooth_field(seed + 1)
        U = random_smooth_field(seed + 2)
        regime = ScaleRegime.uniform(0.5, plus, minus, 3, eta, form)
        point = random_point(seed + 3)
        general = hj_residual_general(ActionField(S, R, eta), U, regime, m, 0.3, point)
        first, second = hj_split_residuals(S, R, U, regime, m, 0.3, point)
        combined = first + 1j * eta.value * second
        assert abs(general - combined) <= 1e-12 * max(1.0, abs(general))

    @pytest.mark.parametrize("eta", [ETA_PLUS_ONE, ETA_MINUS_ONE])
    def test_vanishing_phase(self, eta: EtaParameter) -> None:
        R = random_smooth_field(11)
        regime = ScaleRegime.uniform(0.5, 1.0, 1.0, 3, eta)
        point = random_point(12)
        general = hj_residual_general(ActionField(ZERO, R, eta), ZERO, regime, 2.0, 0.0, point)
        first, second = hj_split_residuals(ZERO, R, ZERO, regime, 2.0, 0.0, point)
        assert general == pytest.approx(first + 1j * eta.value * second, abs=1e-12)

    def test_imaginary_eta_is_unsupported(self) -> None:
        regime = ScaleRegime.uniform(0.5, 1.0, 1.0, 3, EtaParameter(1j))
        with pytest.raises(UnsupportedConfigurationError):
            hj_split_residuals(ZERO, ZERO, ZERO, regime, 1.0, 0.0, [1.0, 0.0, 0.0])


class TestDerivedQuantities:
    def test_hamiltonian_pair(self) -> None:
        m = 2.0
        p = np.array([1.0, 0.0, 2.0])
        pair = hamiltonian_pair(_free_action(p, m), ZERO)
        h_s, h_r = pair.at(1.0, [0.1, 0.2, 0.3])
        assert h_s == pytest.approx(1.25, rel=1e-8)
        assert h_r == 0

    def test_velocities(self) -> None:
        m = 2.0
        p = np.array([1.0, -3.0, 2.0])
        action = ActionField(_free_action(p, m), ZERO, ETA_MINUS_ONE)
        v, u = velocities_from_action(action, m)
        assert v(0.0, [0.5, 0.5, 0.5]) == pytest.approx(p / m)
        assert np.all(u(0.0, [0.5, 0.5, 0.5]) == 0)
