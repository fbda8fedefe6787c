"""Wave-function change of variable and the Schrodinger-type residuals.

psi = exp((-eta R + i S) / K) turns the order-2 Hamilton-Jacobi equation into
a nonlinear Schrodinger equation whose nonlinear term vanishes for K = m Lambda.
The separated (stationary, radial, polar, azimuthal) residuals and the
logarithm identity used to rewrite the density terms live here as well.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from scale_dynamics.errors import DomainError, SingularFieldError
from scale_dynamics.fields import (
    ComplexVector,
    DiffEngine,
    PointLike,
    Profile,
    RealVector,
    ScalarField,
    as_point,
    bilinear_square,
)
from scale_dynamics.scale_regime import EtaDecomposition, EtaParameter

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WaveField:
    """psi with its constant K; for real eta |psi| is sqrt(P) = exp(-eta R / K)."""

    psi: ScalarField
    K: float
    eta: EtaParameter

    def __post_init__(self) -> None:
        if self.K == 0.0:
            raise DomainError("K must be non-zero")

    def __call__(self, t: float, x: PointLike) -> complex:
        return self.psi(t, x)

    def action_at(self, t: float, x: PointLike) -> Tuple[float, float]:
        return action_from_psi(self.psi(t, x), self.K, self.eta)

    def sqrt_density(self, t: float, x: PointLike) -> float:
        return abs(self.psi(t, x))


@dataclass(frozen=True)
class SeparatedState:
    """psi(t, x) = exp(-i E t / K) * Psi(x)."""

    E: float
    Psi: ScalarField
    K: float

    def time_factor(self, t: float) -> complex:
        return cmath.exp(-1j * self.E * t / self.K)

    def as_wave(self, eta: EtaParameter) -> WaveField:
        spatial = self.Psi
        energy, k_const = self.E, self.K

        def value(t: float, x: RealVector) -> complex:
            return cmath.exp(-1j * energy * t / k_const) * complex(spatial.value(t, x))

        def gradient(t: float, x: RealVector) -> ComplexVector:
            g = spatial.analytic_gradient(t, x)
            assert g is not None
            return cmath.exp(-1j * energy * t / k_const) * g

        def hessian(t: float, x: RealVector) -> ComplexVector:
            h = spatial.analytic_hessian(t, x)
            assert h is not None
            return cmath.exp(-1j * energy * t / k_const) * h

        def time(t: float, x: RealVector) -> complex:
            return (-1j * energy / k_const) * value(t, x)

        psi = ScalarField(
            value=value,
            dimension=spatial.dimension,
            gradient_fn=None if spatial.gradient_fn is None else gradient,
            hessian_fn=None if spatial.hessian_fn is None else hessian,
            time_fn=time,
            domain=spatial.domain,
        )
        return WaveField(psi=psi, K=self.K, eta=eta)


@dataclass(frozen=True)
class SeparationParameters:
    """Constants of the separated equations; ``potential`` is U(r)."""

    m: float
    K: float
    Lambda: float
    potential: Callable[[float], float]

    @property
    def nonlinear_factor(self) -> float:
        """K/(m Lambda) - 1, exactly zero when K = m Lambda."""
        return (self.K - self.m * self.Lambda) / (self.m * self.Lambda)

    @property
    def energy_factor(self) -> float:
        return 2.0 / (self.K * self.Lambda)


def psi_from_action(
    S: ScalarField, R: ScalarField, K: float, eta: EtaParameter
) -> WaveField:
    if K == 0.0:
        raise DomainError("K must be non-zero")
    exponent = S.scaled(1j / K) + R.scaled(-eta.value / K)
    return WaveField(psi=exponent.exp(), K=K, eta=eta)


def action_from_psi(psi: complex, K: float, eta: EtaParameter) -> Tuple[float, float]:
    """(S, R) from A = -iK ln psi on the principal branch, S in (-pi K, pi K]."""
    if psi == 0:
        raise SingularFieldError("psi vanishes; the action is undefined")
    sign = eta.real_sign()
    phase = cmath.phase(psi)
    if phase == -math.pi:
        phase = math.pi
    S = K * phase
    R = -sign * K * math.log(abs(psi))
    return S, R


def nonlinear_coefficient(m: float, K: float, Lambda: float) -> float:
    """K/m - Lambda, written so that K = m Lambda gives exactly zero."""
    return (K - m * Lambda) / m


def _psi_terms(
    wave: WaveField, t: float, x: RealVector, diff: DiffEngine
) -> Tuple[complex, complex, complex, complex]:
    """(psi, dpsi/dt, Lap psi, (grad psi)^2 / psi)."""
    value = wave.psi(t, x)
    if value == 0:
        raise SingularFieldError(f"psi vanishes at {x.tolist()}")
    grad = diff.gradient(wave.psi, t, x)
    return (
        value,
        diff.time_derivative(wave.psi, t, x),
        diff.laplacian(wave.psi, t, x),
        bilinear_square(grad) / value,
    )


def nls_residual(
    wave: WaveField,
    potential: ScalarField,
    m: float,
    lam: complex,
    t: float,
    x: PointLike,
    engine: Optional[DiffEngine] = None,
) -> complex:
    """iK dpsi/dt + (iK lambda/2) Lap psi + ((grad psi)^2/psi)(K/m - i lambda)(K/2) - U psi."""
    diff = engine if engine is not None else DiffEngine()
    point = as_point(x)
    K = wave.K
    psi, psi_t, lap, grad_sq = _psi_terms(wave, t, point, diff)
    return (
        1j * K * psi_t
        + (1j * K * lam / 2.0) * lap
        + grad_sq * (K / m - 1j * lam) * (K / 2.0)
        - complex(potential.value(t, point)) * psi
    )


def nls_residual_eta_minus1(
    wave: WaveField,
    potential: ScalarField,
    m: float,
    Lambda: float,
    t: float,
    x: PointLike,
    engine: Optional[DiffEngine] = None,
) -> complex:
    """The eta = -1 form with lambda = -i Lambda folded in."""
    diff = engine if engine is not None else DiffEngine()
    point = as_point(x)
    K = wave.K
    psi, psi_t, lap, grad_sq = _psi_terms(wave, t, point, diff)
    return (
        1j * K * psi_t
        + (K * Lambda / 2.0) * lap
        + grad_sq * nonlinear_coefficient(m, K, Lambda) * (K / 2.0)
        - complex(potential.value(t, point)) * psi
    )


def linear_schrodinger_residual(
    wave: WaveField,
    potential: ScalarField,
    m: float,
    Lambda: float,
    t: float,
    x: PointLike,
    engine: Optional[DiffEngine] = None,
) -> complex:
    """i m Lambda dpsi/dt + (m Lambda^2/2) Lap psi - U psi."""
    diff = engine if engine is not None else DiffEngine()
    point = as_point(x)
    psi, psi_t, lap, _ = _psi_terms(wave, t, point, diff)
    return (
        1j * m * Lambda * psi_t
        + (m * Lambda * Lambda / 2.0) * lap
        - complex(potential.value(t, point)) * psi
    )


def hj3_split_residuals(
    S: ScalarField,
    P: ScalarField,
    potential: ScalarField,
    m: float,
    K: float,
    lam: EtaDecomposition,
    t: float,
    x: PointLike,
    engine: Optional[DiffEngine] = None,
) -> Tuple[float, float]:
    """Hamilton-Jacobi / continuity pair written with the density P.

    dS/dt + (grad S)^2/2m + (lam_re/2) Lap S - (K^2/2m) Lap sqrtP/sqrtP
        + (K/2)(K/m + eta lam_im) Lap ln sqrtP + U
    dP/dt + div(P grad S/m) - P (Lap S/m)(1 + eta m lam_im/K)
        + (K lam_re/2) Lap ln sqrtP
    """
    if K == 0.0:
        raise DomainError("K must be non-zero")
    sign = lam.eta.real_sign()
    diff = engine if engine is not None else DiffEngine()
    point = as_point(x)

    density = complex(P.value(t, point)).real
    if density <= 0.0:
        raise SingularFieldError(f"P must be positive, got {density} at {point.tolist()}")
    grad_p = diff.gradient(P, t, point).real
    lap_p = diff.laplacian(P, t, point).real
    grad_s = diff.gradient(S, t, point).real
    lap_s = diff.laplacian(S, t, point).real
    # relative gradient; P itself may be far below sqrt(tiny) at large r
    rel_grad = grad_p / density
    rel_grad_sq = float(np.dot(rel_grad, rel_grad))
    half_rel_lap = lap_p / (2.0 * density)

    sqrt_ratio = half_rel_lap - rel_grad_sq / 4.0
    lap_log_sqrt = half_rel_lap - rel_grad_sq / 2.0
    lam_re, lam_im = lam.re_part, lam.im_part

    first = (
        diff.time_derivative(S, t, point).real
        + float(np.dot(grad_s, grad_s)) / (2.0 * m)
        + 0.5 * lam_re * lap_s
        - K * K / (2.0 * m) * sqrt_ratio
        + (K / 2.0) * ((K + sign * m * lam_im) / m) * lap_log_sqrt
        + complex(potential.value(t, point)).real
    )
    divergence = (float(np.dot(grad_p, grad_s)) + density * lap_s) / m
    second = (
        diff.time_derivative(P, t, point).real
        + divergence
        - density * (lap_s / m) * ((K + sign * m * lam_im) / K)
        + 0.5 * K * lam_re * lap_log_sqrt
    )
    return first, second


def stationary_residual(
    Psi: ScalarField,
    E: float,
    potential: ScalarField,
    m: float,
    K: float,
    Lambda: float,
    x: PointLike,
    engine: Optional[DiffEngine] = None,
    t: float = 0.0,
) -> complex:
    """Lap Psi + ((grad Psi)^2/Psi)(K/(m Lambda) - 1) + (2/(K Lambda))(E - U) Psi."""
    diff = engine if engine is not None else DiffEngine()
    point = as_point(x)
    value = Psi(t, point)
    if value == 0:
        raise SingularFieldError(f"Psi vanishes at {point.tolist()}")
    grad = diff.gradient(Psi, t, point)
    factor = (K - m * Lambda) / (m * Lambda)
    return (
        diff.laplacian(Psi, t, point)
        + bilinear_square(grad) / value * factor
        + (2.0 / (K * Lambda)) * (E - complex(potential.value(t, point))) * value
    )


def radial_residual_terms(
    profile: Profile,
    E: float,
    C_prime: float,
    params: SeparationParameters,
    r: float,
    engine: Optional[DiffEngine] = None,
) -> Tuple[complex, ...]:
    """The five terms of the radial equation, in order of appearance."""
    if r <= 0.0:
        raise DomainError(f"r must be positive, got {r}")
    diff = engine if engine is not None else DiffEngine()
    value, first, second = diff.profile_derivatives(profile, r)
    if value == 0:
        raise SingularFieldError(f"R(r) vanishes at r={r}")
    return (
        second,
        2.0 * first / r,
        params.nonlinear_factor * first * first / value,
        params.energy_factor * (E - params.potential(r)) * value,
        -C_prime / (r * r) * value,
    )


def radial_residual(
    profile: Profile,
    E: float,
    C_prime: float,
    params: SeparationParameters,
    r: float,
    engine: Optional[DiffEngine] = None,
    normalize: bool = False,
) -> complex:
    """R'' + (2/r)R' + (K/(m Lambda) - 1) R'^2/R + ((2/(K Lambda))(E - U) - C'/r^2) R.

    With ``normalize`` the sum is divided by the sum of the term magnitudes.
    """
    terms = radial_residual_terms(profile, E, C_prime, params, r, engine)
    total = sum(terms, 0j)
    if not normalize:
        return total
    scale = sum(abs(term) for term in terms)
    return total / scale if scale > 0.0 else total


def theta_residual(
    profile: Profile,
    C: float,
    C_prime: float,
    params: SeparationParameters,
    theta: float,
    engine: Optional[DiffEngine] = None,
) -> complex:
    """Th'' + Th'/tan(theta) + (K/(m Lambda) - 1) Th'^2/Th + (C' - C/sin^2 theta) Th."""
    sin_theta = math.sin(theta)
    if abs(sin_theta) < 1e-12:
        raise SingularFieldError(f"the polar equation is singular at theta={theta}")
    diff = engine if engine is not None else DiffEngine()
    value, first, second = diff.profile_derivatives(profile, theta)
    if value == 0:
        raise SingularFieldError(f"Theta vanishes at theta={theta}")
    return (
        second
        + first * math.cos(theta) / sin_theta
        + params.nonlinear_factor * first * first / value
        + (C_prime - C / (sin_theta * sin_theta)) * value
    )


def phi_residual(
    profile: Profile,
    C: float,
    params: SeparationParameters,
    phi: float,
    engine: Optional[DiffEngine] = None,
) -> complex:
    """Ph'' + (K/(m Lambda) - 1) Ph'^2/Ph - C Ph."""
    diff = engine if engine is not None else DiffEngine()
    value, first, second = diff.profile_derivatives(profile, phi)
    if value == 0:
        raise SingularFieldError(f"Phi vanishes at phi={phi}")
    return second + params.nonlinear_factor * first * first / value - C * value


def log_identity_gap(
    f: ScalarField,
    x: PointLike,
    t: float = 0.0,
    engine: Optional[DiffEngine] = None,
) -> complex:
    """(grad ln f)^2 + Lap ln f - Lap f / f for a positive field."""
    diff = engine if engine is not None else DiffEngine()
    point = as_point(x)
    value = f(t, point)
    if value.imag != 0.0 or value.real <= 0.0:
        raise SingularFieldError(f"f must be positive, got {value} at {point.tolist()}")
    log_f = f.log()
    grad_log = diff.gradient(log_f, t, point)
    return (
        bilinear_square(grad_log)
        + diff.laplacian(log_f, t, point)
        - diff.laplacian(f, t, point) / value
    )
