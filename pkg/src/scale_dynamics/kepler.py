"""Kepler system in the scale regime: ground states, extra potential, rotation speed.

With U = -k/r, eta = -1 and uniform constants lambda_plus = lambda_minus = Lambda,
the separated radial equation has a ground state sqrt(P) ~ exp(-2r/r0) whose
extra potential -(m Lambda^2/2) Lap sqrtP/sqrtP makes the orbital speed
independent of r.
"""

from __future__ import annotations

import logging
import math
import sys as _sys
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np
from scipy import optimize

from scale_dynamics.errors import DomainError
from scale_dynamics.exp_integral import exp_integral
from scale_dynamics.fields import (
    ComplexVector,
    DiffEngine,
    Profile,
    RealVector,
    ScalarField,
    VectorField,
    bilinear_square,
)
from scale_dynamics.hamilton_jacobi import ActionField
from scale_dynamics.scale_regime import (
    ETA_MINUS_ONE,
    EtaDecomposition,
    EtaParameter,
    LambdaForm,
    ScaleRegime,
    diagonal_lambda,
)
from scale_dynamics.schrodinger import (
    SeparatedState,
    SeparationParameters,
    WaveField,
    nonlinear_coefficient,
    radial_residual,
)
from shared import defaults as DEFAULTS

logger = logging.getLogger(__name__)

GAMMA_KEPLER = -1.0

# Off-axis direction for evaluating radial flows in three dimensions.
_VIRIAL_DIRECTION = np.array([1.0, 2.0, 2.0], dtype=np.float64) / 3.0


@dataclass(frozen=True)
class KeplerSystem:
    """Central mass M, orbiting mass m and scale constant Lambda.

    ``Kconst`` is the constant of the wave-function change of variable; None
    means m * Lambda.
    """

    G: float
    M: float
    m: float
    Lambda: float
    Kconst: Optional[float] = None
    eta: EtaParameter = field(default=ETA_MINUS_ONE)

    def __post_init__(self) -> None:
        for name in ("G", "M", "m"):
            value = getattr(self, name)
            if not value > 0.0 or not math.isfinite(value):
                raise DomainError(f"{name} must be positive and finite, got {value}")
        if self.Lambda == 0.0 or not math.isfinite(self.Lambda):
            raise DomainError(f"Lambda must be non-zero and finite, got {self.Lambda}")
        if self.Kconst is not None and self.Kconst == 0.0:
            raise DomainError("Kconst must be non-zero")

    @classmethod
    def from_gm(
        cls,
        gm: float,
        m: float,
        Lambda: float,
        Kconst: Optional[float] = None,
        eta: EtaParameter = ETA_MINUS_ONE,
    ) -> KeplerSystem:
        return cls(G=1.0, M=gm, m=m, Lambda=Lambda, Kconst=Kconst, eta=eta)

    @property
    def K(self) -> float:
        return self.Kconst if self.Kconst is not None else self.m * self.Lambda

    @property
    def gm(self) -> float:
        return self.G * self.M

    @property
    def k(self) -> float:
        return self.G * self.M * self.m

    @property
    def r0(self) -> float:
        return 2.0 * self.Lambda**2 / self.gm

    @property
    def beta(self) -> float:
        """Decay rate 2/r0 of the linear ground state."""
        return 2.0 / self.r0

    @property
    def E0_paper(self) -> float:
        return self.k**2 / (2.0 * self.m**2 * self.Lambda**2)

    @property
    def nonlinear_exponent(self) -> float:
        """m Lambda / K, the power relating sqrt(P) to the linearized amplitude."""
        return self.m * self.Lambda / self.K

    @property
    def lambda_value(self) -> complex:
        return diagonal_lambda(self.Lambda, self.Lambda, self.eta)

    @property
    def lambda_decomposition(self) -> EtaDecomposition:
        return EtaDecomposition.from_complex(self.lambda_value, self.eta)

    def regime(self) -> ScaleRegime:
        return ScaleRegime.uniform(
            0.5, self.Lambda, self.Lambda, 3, self.eta, LambdaForm.UNIFORM
        )

    def separation_parameters(self, K: Optional[float] = None) -> SeparationParameters:
        return SeparationParameters(
            m=self.m,
            K=self.K if K is None else K,
            Lambda=self.Lambda,
            potential=lambda r: kepler_potential(self, r),
        )


class GroundStateKind(str, Enum):
    LINEAR = "linear"
    NONLINEAR = "nonlinear"


@dataclass(frozen=True)
class GroundStateEnergy:
    paper: float
    oracle: float

    @property
    def ratio(self) -> float:
        return self.oracle / self.paper


@dataclass(frozen=True)
class GroundState:
    """Radial sqrt(P) with its integration constants and validity interval (r_min, r_max)."""

    kind: GroundStateKind
    C1: float
    C2: float
    profile: Profile
    r_min: float = 0.0
    r_max: float = math.inf
    amplitude: Optional[float] = None

    def contains(self, r: float) -> bool:
        return self.r_min < r < self.r_max

    def sqrt_density(self, r: float) -> float:
        if not self.contains(r):
            raise DomainError(
                f"r={r} outside the ground-state domain ({self.r_min}, {self.r_max})"
            )
        return self.profile(r).real

    def field(self, dimension: int = 3) -> ScalarField:
        return ScalarField.from_radial(self.profile, dimension)

    def density_field(self, dimension: int = 3) -> ScalarField:
        return ScalarField.from_radial(self.profile.power(2.0), dimension)


def _require_radius(r: float) -> None:
    if not r > 0.0:
        raise DomainError(f"r must be positive, got {r}")


def kepler_potential(sys: KeplerSystem, r: float) -> float:
    _require_radius(r)
    return -sys.k / r


def kepler_potential_field(sys: KeplerSystem, dimension: int = 3) -> ScalarField:
    k = sys.k
    profile = Profile(
        value=lambda r: -k / r,
        first=lambda r: k / (r * r),
        second=lambda r: -2.0 * k / (r * r * r),
        lower=0.0,
    )
    return ScalarField.from_radial(profile, dimension)


def _unit_linear_profile(beta: float) -> Profile:
    return Profile(
        value=lambda r: math.exp(-beta * r),
        first=lambda r: -beta * math.exp(-beta * r),
        second=lambda r: beta * beta * math.exp(-beta * r),
        lower=0.0,
    )


def ground_state_energy(sys: KeplerSystem) -> GroundStateEnergy:
    """Printed E0 and the E0 that makes the radial residual of exp(-2r/r0) vanish.

    The residual is evaluated with C' = 0 and K = m Lambda at r = r0; it is
    linear in E, so a bracketing root finder recovers the energy to rounding.
    """
    params = sys.separation_parameters(K=sys.m * sys.Lambda)
    profile = _unit_linear_profile(sys.beta)
    r = sys.r0

    def residual(energy: float) -> float:
        return radial_residual(profile, energy, 0.0, params, r).real

    scale = sys.E0_paper
    lower = -scale
    for _ in range(DEFAULTS.DOMAIN_SCAN_MAX_DOUBLINGS):
        if residual(lower) * residual(0.0) < 0.0:
            break
        lower *= 2.0
    else:
        raise DomainError("could not bracket the ground-state energy")
    root = optimize.brentq(
        residual,
        lower,
        0.0,
        xtol=1e-300,
        rtol=4.0 * _sys.float_info.epsilon,
        maxiter=200,
    )
    oracle = -float(root)
    logger.debug(
        "ground-state energy",
        extra={"E0_paper": sys.E0_paper, "E0_oracle": oracle, "bracket": lower},
    )
    return GroundStateEnergy(paper=sys.E0_paper, oracle=oracle)


def sqrtP_linear(
    sys: KeplerSystem, C1: Optional[float] = None, C2: float = 0.0
) -> GroundState:
    """((C1 + C2)/(m Lambda^2)) exp(-2r/r0); C1 defaults to m Lambda^2."""
    c1 = sys.m * sys.Lambda**2 if C1 is None else C1
    amplitude = (c1 + C2) / (sys.m * sys.Lambda**2)
    if not amplitude > 0.0:
        raise DomainError(f"ground-state amplitude must be positive, got {amplitude}")
    profile = _unit_linear_profile(sys.beta).scaled(amplitude)
    return GroundState(
        kind=GroundStateKind.LINEAR,
        C1=c1,
        C2=C2,
        profile=profile,
        amplitude=amplitude,
    )


def nonlinear_log_argument(sys: KeplerSystem, C2: float, r: float) -> float:
    """Lambda^2 e^{4r/r0} - 2GM r Ei(4r/r0) - C2 Lambda^2 r."""
    _require_radius(r)
    y = 2.0 * sys.beta * r
    lam_sq = sys.Lambda**2
    return lam_sq * math.exp(y) - 2.0 * sys.gm * r * exp_integral(y) - C2 * lam_sq * r


def _nonlinear_domain(sys: KeplerSystem, C2: float) -> float:
    """Upper end of (0, r*) where the log argument stays positive."""

    def h(r: float) -> float:
        return nonlinear_log_argument(sys, C2, r)

    lower = sys.r0 / 8.0
    for _ in range(DEFAULTS.DOMAIN_SCAN_MAX_DOUBLINGS):
        if h(lower) > 0.0:
            break
        lower /= 2.0
    else:
        raise DomainError("log argument is not positive near the origin")
    upper = 2.0 * lower
    for _ in range(DEFAULTS.DOMAIN_SCAN_MAX_DOUBLINGS):
        if h(upper) <= 0.0:
            break
        lower, upper = upper, 2.0 * upper
    else:
        raise DomainError("log argument never changes sign")
    root = optimize.bisect(
        h, lower, upper, xtol=1e-300, rtol=DEFAULTS.ROOT_RELATIVE_TOLERANCE, maxiter=400
    )
    logger.debug(
        "nonlinear ground-state domain", extra={"C2": C2, "r_upper": float(root)}
    )
    return float(root)


def sqrtP_nonlinear(
    sys: KeplerSystem, C1: Optional[float] = None, C2: float = 0.0
) -> GroundState:
    """C1 exp(-p beta r - p ln r + p ln h(r)) with p = m Lambda / K and beta = 2/r0.

    h is :func:`nonlinear_log_argument`. Equivalently sqrt(P) = C1 w^p with
    w = Lambda^2 e^{beta r}/r - e^{-beta r}(2GM Ei(2 beta r) + C2 Lambda^2), the
    second radial solution of the linearized equation.
    """
    c1 = sys.m * sys.Lambda**2 if C1 is None else C1
    if not c1 > 0.0:
        raise DomainError(f"C1 must be positive, got {c1}")
    p = sys.nonlinear_exponent
    beta = sys.beta
    lam_sq = sys.Lambda**2
    gm = sys.gm
    r_upper = _nonlinear_domain(sys, C2)

    def check(r: float) -> None:
        if not 0.0 < r < r_upper:
            raise DomainError(
                f"r={r} outside the nonlinear ground-state domain (0, {r_upper})"
            )

    def tail(r: float) -> float:
        return math.exp(-beta * r) * (2.0 * gm * exp_integral(2.0 * beta * r) + C2 * lam_sq)

    def value(r: float) -> float:
        check(r)
        h = nonlinear_log_argument(sys, C2, r)
        return c1 * math.exp(-p * beta * r - p * math.log(r) + p * math.log(h))

    def w(r: float) -> float:
        return lam_sq * math.exp(beta * r) / r - tail(r)

    def w_first(r: float) -> float:
        return lam_sq * math.exp(beta * r) * (-beta / r - 1.0 / (r * r)) + beta * tail(r)

    def w_second(r: float) -> float:
        return (
            lam_sq * math.exp(beta * r) * (beta * beta / r + 2.0 / (r * r * r))
            - beta * beta * tail(r)
        )

    def first(r: float) -> float:
        check(r)
        return c1 * p * w(r) ** (p - 1.0) * w_first(r)

    def second(r: float) -> float:
        check(r)
        base = w(r)
        return (
            c1
            * p
            * (
                base ** (p - 1.0) * w_second(r)
                + (p - 1.0) * base ** (p - 2.0) * w_first(r) ** 2
            )
        )

    profile = Profile(value=value, first=first, second=second, lower=0.0, upper=r_upper)
    return GroundState(
        kind=GroundStateKind.NONLINEAR,
        C1=c1,
        C2=C2,
        profile=profile,
        r_max=r_upper,
    )


def u_add_closed(sys: KeplerSystem, r: float) -> float:
    """-(GMm/r0)(1 - r0/r)."""
    _require_radius(r)
    return -(sys.gm * sys.m / sys.r0) * (1.0 - sys.r0 / r)


def u_add_from_density(
    sys: KeplerSystem,
    state: GroundState,
    r: float,
    engine: Optional[DiffEngine] = None,
) -> float:
    """Extra potential read off the density amplitude.

    Linear state: -(m Lambda^2/2) Lap sqrtP/sqrtP. Nonlinear state:
    -(K^2/2m) Lap sqrtP/sqrtP + (K/2)(K/m - Lambda) Lap ln sqrtP.
    """
    _require_radius(r)
    diff = engine if engine is not None else DiffEngine()
    value, d1, d2 = diff.profile_derivatives(state.profile, r)
    value_r = value.real
    if value_r <= 0.0:
        raise DomainError(f"sqrt(P) must be positive, got {value_r} at r={r}")
    lap_ratio = (d2.real + 2.0 * d1.real / r) / value_r
    if state.kind is GroundStateKind.LINEAR:
        return -(sys.m * sys.Lambda**2 / 2.0) * lap_ratio
    log_first = d1.real / value_r
    lap_log = d2.real / value_r - log_first**2 + 2.0 * log_first / r
    K = sys.K
    return -(K * K / (2.0 * sys.m)) * lap_ratio + (K / 2.0) * nonlinear_coefficient(
        sys.m, K, sys.Lambda
    ) * lap_log


def virial_equilibrium_residual(
    kinetic: complex,
    U: float,
    divV: complex,
    lam: complex,
    m: float,
    gamma: float,
) -> complex:
    """2K + lambda m div V - gamma U, with K the kinetic energy."""
    return 2.0 * kinetic + lam * m * divV - gamma * U


def orbital_speed(sys: KeplerSystem) -> float:
    return math.sqrt(sys.gm / sys.r0)


@dataclass(frozen=True)
class VirialRow:
    """Real-part virial balance at one radius."""

    r: float
    two_kinetic: float
    gamma_u: float
    scale_term: float
    residual: float


def virial_balance(
    sys: KeplerSystem,
    r: float,
    state: Optional[GroundState] = None,
    engine: Optional[DiffEngine] = None,
) -> VirialRow:
    """m v^2 from the flat speed, gamma U, and the scale term of the ground-state flow.

    The scale term is the real part of (m V.V + lambda m div V)/2 for the
    velocity field V = grad A/m of ``state`` (the linear ground state by
    default), evaluated at distance r. For K = m Lambda it equals
    -(m Lambda^2/2) Lap sqrtP/sqrtP, so the residual m v^2 + scale - gamma U
    vanishes only when the density carries the extra potential.
    """
    _require_radius(r)
    linear = replace(sys, Kconst=None)
    ground = sqrtP_linear(linear) if state is None else state
    diff = engine if engine is not None else DiffEngine()
    flow_field = ground_state_velocity_field(linear, ground, diff)
    point = r * _VIRIAL_DIRECTION
    flow = flow_field(0.0, point)
    div_flow = diff.divergence(flow_field, 0.0, point)
    m = linear.m
    lam = linear.lambda_value
    scale_term = 0.5 * (m * bilinear_square(flow) + lam * m * div_flow)

    potential = kepler_potential(sys, r)
    two_kinetic = m * orbital_speed(sys) ** 2
    gamma_u = GAMMA_KEPLER * potential
    residual = two_kinetic + scale_term.real - gamma_u
    logger.debug(
        "virial balance",
        extra={"r": r, "scale_term": scale_term.real, "residual": residual},
    )
    return VirialRow(
        r=r,
        two_kinetic=two_kinetic,
        gamma_u=gamma_u,
        scale_term=scale_term.real,
        residual=residual,
    )


@dataclass(frozen=True)
class SpeedSquared:
    """Contributions to v^2: -U/m, -U_add/m and their sum."""

    kepler: float
    extra: float
    total: float


def speed_squared_decomposition(sys: KeplerSystem, r: float) -> SpeedSquared:
    _require_radius(r)
    kepler = sys.gm / r
    extra = (sys.gm / sys.r0) * (1.0 - sys.r0 / r)
    return SpeedSquared(kepler=kepler, extra=extra, total=kepler + extra)


@dataclass(frozen=True)
class RotationCurveRow:
    r: float
    v_kepler: float
    v_scale: float
    u_over_m: float
    uadd_over_m: float
    vsq_total: float


def rotation_curve(sys: KeplerSystem, r_grid: Sequence[float]) -> List[RotationCurveRow]:
    radii = [float(r) for r in r_grid]
    if any(not r > 0.0 for r in radii):
        raise DomainError("rotation-curve radii must be positive")
    if any(later <= earlier for earlier, later in zip(radii, radii[1:])):
        raise DomainError("rotation-curve radii must be strictly increasing")
    speed = orbital_speed(sys)
    rows = []
    for r in radii:
        parts = speed_squared_decomposition(sys, r)
        rows.append(
            RotationCurveRow(
                r=r,
                v_kepler=math.sqrt(sys.gm / r),
                v_scale=speed,
                u_over_m=parts.kepler,
                uadd_over_m=parts.extra,
                vsq_total=parts.total,
            )
        )
    return rows


def radial_grid(r_min: float, r_max: float, samples: int, kind: str) -> List[float]:
    """``samples`` radii from r_min to r_max, evenly spaced on a linear or log scale."""
    if not 0.0 < r_min < r_max:
        raise DomainError(f"need 0 < r_min < r_max, got {r_min}, {r_max}")
    if samples < 1:
        raise DomainError(f"samples must be at least 1, got {samples}")
    if samples == 1:
        return [r_min]
    if kind == "log":
        grid = np.geomspace(r_min, r_max, samples)
    elif kind == "linear":
        grid = np.linspace(r_min, r_max, samples)
    else:
        raise DomainError(f"unknown grid kind {kind!r}")
    return [float(v) for v in grid]


def _time_linear_action(energy: float, dimension: int) -> ScalarField:
    def gradient(t: float, x: RealVector) -> ComplexVector:  # pylint: disable=unused-argument
        return np.zeros(dimension, dtype=np.complex128)

    def hessian(t: float, x: RealVector) -> ComplexVector:  # pylint: disable=unused-argument
        return np.zeros((dimension, dimension), dtype=np.complex128)

    return ScalarField(
        value=lambda t, x: -energy * t,
        dimension=dimension,
        gradient_fn=gradient,
        hessian_fn=hessian,
        time_fn=lambda t, x: -energy,
    )


def ground_state_action(
    sys: KeplerSystem, state: GroundState, energy: Optional[float] = None
) -> ActionField:
    """S = -E t and R = -eta K ln sqrt(P); E defaults to -E0_oracle."""
    e = -ground_state_energy(sys).oracle if energy is None else energy
    R = ScalarField.from_radial(state.profile.log().scaled(-sys.eta.value * sys.K))
    return ActionField(S=_time_linear_action(e, 3), R=R, eta=sys.eta)


def ground_state_wave(
    sys: KeplerSystem, state: GroundState, energy: Optional[float] = None
) -> WaveField:
    """psi = exp(-i E t / K) sqrt(P)."""
    e = -ground_state_energy(sys).oracle if energy is None else energy
    return SeparatedState(E=e, Psi=state.field(), K=sys.K).as_wave(sys.eta)


def ground_state_velocity_field(
    sys: KeplerSystem, state: GroundState, engine: Optional[DiffEngine] = None
) -> VectorField:
    """V = grad A / m."""
    action = ground_state_action(sys, state)
    return VectorField.from_gradient(action.complex_action, 1.0 / sys.m, engine)
