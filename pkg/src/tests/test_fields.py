"""
Tests for fields and the differentiation engine.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scale_dynamics.errors import (
    DomainError,
    SingularFieldError,
    UnsupportedConfigurationError,
)
from scale_dynamics.fields import (
    BoxDomain,
    DiffEngine,
    Profile,
    ScalarField,
    VectorField,
    bilinear_square,
    convergence_ratio,
    divergence,
    gradient,
    laplacian,
    mixed_partial,
    richardson_gap,
)
from shared.test_utils import (
    random_point,
    random_positive_field,
    random_smooth_field,
)


def _sum_of_squares() -> ScalarField:
    return ScalarField(value=lambda t, x: float(np.dot(x, x)), dimension=3)


def _decay(beta: float) -> Profile:
    return Profile(
        value=lambda r: math.exp(-beta * r),
        first=lambda r: -beta * math.exp(-beta * r),
        second=lambda r: beta * beta * math.exp(-beta * r),
        lower=0.0,
    )


class TestGradient:
    def test_sum_of_squares(self) -> None:
        result = gradient(_sum_of_squares(), 0.0, [1.0, 2.0, 3.0])
        assert result == pytest.approx(np.array([2.0, 4.0, 6.0]), abs=1e-8)

    def test_radial_decay(self) -> None:
        field = ScalarField.from_radial(_decay(1.0))
        point = np.array([2.0, 0.0, 0.0])
        analytic = gradient(field, 0.0, point)
        engine = DiffEngine(stencil_order=4, use_analytic=False)
        numeric = gradient(field, 0.0, point, engine)
        assert analytic[0] == pytest.approx(-math.exp(-2.0), rel=1e-14)
        assert numeric[0] == pytest.approx(-math.exp(-2.0), rel=1e-9)

    def test_constant_field(self) -> None:
        field = ScalarField.constant(3.0, 2)
        assert np.all(gradient(field, 0.0, [0.3, -0.2]) == 0)

    def test_outside_domain(self) -> None:
        field = ScalarField(
            value=lambda t, x: float(np.sum(x)),
            dimension=1,
            domain=BoxDomain(lower=(0.0,), upper=(1.0,)),
        )
        with pytest.raises(DomainError):
            gradient(field, 0.0, [1e-9])

    def test_radial_field_rejects_origin(self) -> None:
        field = ScalarField.from_radial(_decay(1.0))
        with pytest.raises(DomainError):
            gradient(field, 0.0, [0.0, 0.0, 0.0])


class TestSecondOrderOperators:
    def test_laplacian_of_sum_of_squares(self) -> None:
        assert laplacian(_sum_of_squares(), 0.0, [0.5, -1.0, 2.0]) == pytest.approx(
            6.0, abs=1e-6
        )

    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0, 5.0])
    def test_radial_laplacian_ratio(self, r: float, fd4_engine: DiffEngine) -> None:
        beta = 1.3
        profile = _decay(beta)
        field = ScalarField.from_radial(profile)
        point = r * np.array([0.6, 0.0, 0.8])
        expected = beta * beta - 2.0 * beta / r
        analytic = laplacian(field, 0.0, point) / field(0.0, point)
        radial = DiffEngine(mode="radial").radial_laplacian(profile, r) / profile(r)
        numeric = laplacian(field, 0.0, point, fd4_engine) / field(0.0, point)
        assert analytic == pytest.approx(expected, rel=1e-13)
        assert radial == pytest.approx(expected, rel=1e-13)
        assert numeric == pytest.approx(expected, rel=1e-6)

    def test_divergence_of_identity(self) -> None:
        field = VectorField.from_function(lambda t, x: x, 3)
        assert divergence(field, 0.0, [0.1, 0.2, 0.3]) == pytest.approx(3.0, abs=1e-8)

    def test_mixed_partial_of_product(self) -> None:
        field = ScalarField(value=lambda t, x: x[0] * x[1] * x[1], dimension=2)
        value = mixed_partial(field, (0, 1, 1), 0.0, [0.7, 0.4], DiffEngine(step=1e-3))
        assert value == pytest.approx(2.0, abs=1e-5)

    def test_fifth_order_is_unsupported(self) -> None:
        with pytest.raises(UnsupportedConfigurationError):
            mixed_partial(_sum_of_squares(), (0, 0, 0, 0, 0), 0.0, [1.0, 1.0, 1.0])

    def test_radial_mode_needs_profile(self) -> None:
        with pytest.raises(UnsupportedConfigurationError):
            DiffEngine(mode="radial").laplacian(_sum_of_squares(), 0.0, [1.0, 0.0, 0.0])

    def test_time_derivative(self) -> None:
        field = ScalarField(value=lambda t, x: t * t * x[0], dimension=1)
        assert DiffEngine().time_derivative(field, 1.5, [2.0]) == pytest.approx(
            6.0, rel=1e-8
        )


class TestAnalyticAgreement:
    """Analytic partials agree with finite differences."""

    @given(seed=st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=25, deadline=None)
    def test_richardson_gap(self, seed: int) -> None:
        field = random_smooth_field(seed, complex_valued=True)
        assert richardson_gap(field, 0.3, random_point(seed + 1), 1e-3) < 1e-8

    @given(seed=st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=25, deadline=None)
    def test_hessian_matches_fd(self, seed: int) -> None:
        field = random_smooth_field(seed)
        point = random_point(seed + 2)
        engine = DiffEngine(stencil_order=4, use_analytic=False)
        hessian = field.analytic_hessian(0.0, point)
        assert hessian is not None
        for i in range(3):
            for j in range(3):
                assert engine.mixed_partial(field, (i, j), 0.0, point) == pytest.approx(
                    hessian[i, j], abs=1e-7
                )

    def test_order_two_convergence(self) -> None:
        field = ScalarField.from_radial(_decay(1.0))
        ratio = convergence_ratio(field, 0.0, [0.6, 0.8, 1.2], axis=1, step=1e-2)
        assert ratio == pytest.approx(4.0, rel=0.05)

    def test_order_four_convergence(self) -> None:
        field = ScalarField.from_radial(_decay(1.0))
        ratio = convergence_ratio(
            field, 0.0, [0.6, 0.8, 1.2], axis=1, step=4e-2, stencil_order=4
        )
        assert ratio == pytest.approx(16.0, rel=0.1)


class TestFieldAlgebra:
    @given(seed=st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=25, deadline=None)
    def test_exp_log_partials(self, seed: int) -> None:
        base = random_smooth_field(seed, complex_valued=True, scale=0.5)
        point = random_point(seed + 3)
        fd = DiffEngine(stencil_order=4, use_analytic=False)
        fields = (base.exp(), random_positive_field(seed).log(), base + base.scaled(2j))
        for field in fields:
            analytic = gradient(field, 0.2, point)
            assert analytic == pytest.approx(gradient(field, 0.2, point, fd), abs=1e-8)
            assert laplacian(field, 0.2, point) == pytest.approx(
                laplacian(field, 0.2, point, fd), abs=1e-6
            )

    def test_profile_power_and_log(self) -> None:
        profile = _decay(2.0).scaled(3.0)
        engine = DiffEngine(stencil_order=4, use_analytic=False)
        for derived in (profile.power(2.0), profile.log(), profile.power(0.5)):
            exact = DiffEngine().profile_derivatives(derived, 0.7)
            numeric = engine.profile_derivatives(derived, 0.7)
            assert exact[1] == pytest.approx(numeric[1], rel=1e-9)
            assert exact[2] == pytest.approx(numeric[2], rel=1e-6, abs=1e-8)

    def test_log_of_non_positive_profile(self) -> None:
        profile = Profile(value=lambda s: s - 1.0)
        with pytest.raises(SingularFieldError):
            profile.log()(0.5)

    def test_bilinear_square_is_not_modulus(self) -> None:
        assert bilinear_square(np.array([1j, 1.0])) == 0

    def test_dimension_mismatch(self) -> None:
        with pytest.raises(DomainError):
            _ = ScalarField.constant(1.0, 2) + ScalarField.constant(1.0, 3)
