"""Residuals of the fractional Hamilton-Jacobi equation and its real/imaginary split."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from scale_dynamics.errors import DomainError
from scale_dynamics.fields import (
    ComplexVector,
    DiffEngine,
    PointLike,
    RealVector,
    ScalarField,
    VectorField,
    as_point,
    bilinear_square,
)
from scale_dynamics.scale_ops import check_regime, scale_correction
from scale_dynamics.scale_regime import EtaParameter, ScaleRegime

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ActionField:
    """Complex action A = S + i*eta*R built from two real fields."""

    S: ScalarField
    R: ScalarField
    eta: EtaParameter

    def __post_init__(self) -> None:
        if self.S.dimension != self.R.dimension:
            raise DomainError("S and R must share a dimension")

    @property
    def dimension(self) -> int:
        return self.S.dimension

    @property
    def complex_action(self) -> ScalarField:
        return self.S + self.R.scaled(1j * self.eta.value)

    def __call__(self, t: float, x: PointLike) -> complex:
        point = as_point(x)
        return complex(self.S.value(t, point)) + 1j * self.eta.value * complex(
            self.R.value(t, point)
        )


@dataclass(frozen=True)
class HamiltonianPair:
    """H_S = -dS/dt and H_R = -dR/dt."""

    H_S: ScalarField
    H_R: ScalarField

    def at(self, t: float, x: PointLike) -> Tuple[complex, complex]:
        return self.H_S(t, x), self.H_R(t, x)


def _negated_time_derivative(f: ScalarField, diff: DiffEngine) -> ScalarField:
    def value(t: float, x: RealVector) -> complex:
        return -diff.time_derivative(f, t, x)

    return ScalarField(value=value, dimension=f.dimension, domain=f.domain)


def hamiltonian_pair(
    S: ScalarField, R: ScalarField, engine: Optional[DiffEngine] = None
) -> HamiltonianPair:
    diff = engine if engine is not None else DiffEngine()
    return HamiltonianPair(
        H_S=_negated_time_derivative(S, diff), H_R=_negated_time_derivative(R, diff)
    )


def velocities_from_action(
    action: ActionField, m: float, engine: Optional[DiffEngine] = None
) -> Tuple[VectorField, VectorField]:
    """v = grad S / m and u = grad R / m."""
    return (
        VectorField.from_gradient(action.S, 1.0 / m, engine),
        VectorField.from_gradient(action.R, 1.0 / m, engine),
    )


def hj_residual_general(
    action: ActionField,
    potential: ScalarField,
    regime: ScaleRegime,
    m: float,
    t: float,
    x: PointLike,
    engine: Optional[DiffEngine] = None,
) -> complex:
    """dA/dt + (grad A)^2/2m + sum lambda/j! d^j A + U."""
    diff = engine if engine is not None else DiffEngine()
    point = as_point(x)
    a_field = action.complex_action
    grad = diff.gradient(a_field, t, point)
    return (
        diff.time_derivative(a_field, t, point)
        + bilinear_square(grad) / (2.0 * m)
        + scale_correction(a_field, regime, t, point, diff)
        + complex(potential.value(t, point))
    )


def hj_split_residuals(
    S: ScalarField,
    R: ScalarField,
    potential: ScalarField,
    regime: ScaleRegime,
    m: float,
    t: float,
    x: PointLike,
    engine: Optional[DiffEngine] = None,
) -> Tuple[float, float]:
    """Real and eta-imaginary parts of the Hamilton-Jacobi residual.

    Each per-index constant is written lambda = lambda_re + i*eta*lambda_im, so
    the first residual collects lambda_re d^j S - eta^2 lambda_im d^j R and the
    second lambda_im d^j S + lambda_re d^j R. For the uniform order-2 regime
    these are the Laplacian terms (lambda_re/2) Lap S - eta^2 (lambda_im/2) Lap R
    and (lambda_im/2) Lap S + (lambda_re/2) Lap R.

    Raises UnsupportedConfigurationError for eta = +-i.
    """
    check_regime(regime, S)
    eta = regime.eta
    sign = eta.real_sign()
    eta_sq = eta.eta_squared()
    diff = engine if engine is not None else DiffEngine()
    point = as_point(x)

    grad_s: ComplexVector = diff.gradient(S, t, point)
    grad_r: ComplexVector = diff.gradient(R, t, point)
    first = (
        diff.time_derivative(S, t, point)
        + bilinear_square(grad_s) / (2.0 * m)
        - eta_sq * bilinear_square(grad_r) / (2.0 * m)
        + complex(potential.value(t, point))
    )
    second = diff.time_derivative(R, t, point) + complex(np.sum(grad_s * grad_r)) / m

    if not regime.is_linear:
        first_corr = 0j
        second_corr = 0j
        for index in itertools.product(range(regime.dimension), repeat=regime.j_alpha):
            weight = regime.weight(index)
            if weight == 0:
                continue
            lam_re = weight.real
            lam_im = weight.imag * sign
            d_s = diff.mixed_partial(S, index, t, point)
            d_r = diff.mixed_partial(R, index, t, point)
            first_corr += lam_re * d_s - eta_sq * lam_im * d_r
            second_corr += lam_im * d_s + lam_re * d_r
        factorial = math.factorial(regime.j_alpha)
        first += first_corr / factorial
        second += second_corr / factorial

    return first.real, second.real
