"""Residual suite run by the ``residuals`` command.

Each check reports the largest residual magnitude over its sample points and
the tolerance it must stay below. Ground-state energies are taken from the
root-found value, multiplied by ``energy_factor``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Dict, Iterable, List, Sequence

import numpy as np

from scale_dynamics.errors import ScaleDynamicsError
from scale_dynamics.fields import DiffEngine, Profile, RealVector
from scale_dynamics.hamilton_jacobi import hj_residual_general
from scale_dynamics.kepler import (
    GroundState,
    KeplerSystem,
    ground_state_action,
    ground_state_energy,
    ground_state_wave,
    kepler_potential_field,
    radial_grid,
    sqrtP_linear,
    sqrtP_nonlinear,
    u_add_closed,
    u_add_from_density,
    virial_balance,
)
from scale_dynamics.scale_regime import EtaParameter
from scale_dynamics.schrodinger import (
    hj3_split_residuals,
    nls_residual,
    nls_residual_eta_minus1,
    phi_residual,
    radial_residual,
    stationary_residual,
    theta_residual,
)
from shared import defaults as DEFAULTS
from shared.config import RunConfig

logger = logging.getLogger(__name__)

# Direction off the coordinate axes for 3-d evaluation points.
_DIRECTION = np.array([1.0, 2.0, 2.0], dtype=np.float64) / 3.0


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.value) and self.value < self.tolerance


def kepler_system_from_config(config: RunConfig) -> KeplerSystem:
    return KeplerSystem.from_gm(
        gm=config.gm,
        m=config.mass,
        Lambda=config.lambda_scale,
        Kconst=config.k_value,
        eta=EtaParameter(config.eta),
    )


def grid_from_config(config: RunConfig) -> List[float]:
    return radial_grid(config.r_min, config.r_max, config.samples, config.grid)


def _sup(values: Iterable[complex]) -> float:
    return max((abs(v) for v in values), default=0.0)


def _point(r: float) -> RealVector:
    return np.asarray(r * _DIRECTION, dtype=np.float64)


def _usable_radii(state: GroundState, radii: Sequence[float]) -> List[float]:
    # far-out points where sqrt(P) underflows carry no information
    return [r for r in radii if state.profile(r).real > 1e-250]


def _inner_radii(state: GroundState, samples: int) -> List[float]:
    margin = 0.5 * (1.0 - DEFAULTS.RESIDUAL_INNER_FRACTION) * state.r_max
    grid = np.linspace(margin, state.r_max - margin, samples)
    return [float(r) for r in grid]


def _linear_checks(
    system: KeplerSystem, config: RunConfig, radii: Sequence[float], energy: float
) -> List[CheckResult]:
    system = replace(system, Kconst=None)
    state = sqrtP_linear(system, config.c1, config.c2)
    usable = _usable_radii(state, radii)
    params = system.separation_parameters(K=system.m * system.Lambda)
    potential = kepler_potential_field(system)
    regime = system.regime()
    action = ground_state_action(system, state, energy)
    wave = ground_state_wave(system, state, energy)
    density = state.density_field()
    S = action.S
    lam = system.lambda_value
    fd_engine = DiffEngine(stencil_order=4, step=config.fd_step, use_analytic=False)
    energy_scale = system.gm * system.m / system.r0

    hj3 = [
        hj3_split_residuals(
            S,
            density,
            potential,
            system.m,
            system.K,
            system.lambda_decomposition,
            0.0,
            _point(r),
        )
        for r in usable
    ]
    results = [
        CheckResult(
            "radial_linear",
            _sup(
                radial_residual(state.profile, energy, 0.0, params, r, normalize=True).real
                for r in usable
            ),
            DEFAULTS.TOLERANCE_RADIAL_RESIDUAL,
        ),
        CheckResult(
            "stationary_linear",
            _sup(
                stationary_residual(
                    state.field(),
                    energy,
                    potential,
                    system.m,
                    system.K,
                    system.Lambda,
                    _point(r),
                )
                for r in usable
            ),
            DEFAULTS.TOLERANCE_LINEAR_RESIDUAL,
        ),
        CheckResult(
            "hj_general",
            _sup(
                hj_residual_general(action, potential, regime, system.m, 0.0, _point(r))
                for r in usable
            ),
            DEFAULTS.TOLERANCE_LINEAR_RESIDUAL,
        ),
        CheckResult(
            "nls",
            _sup(
                nls_residual(wave, potential, system.m, lam, 0.0, _point(r))
                for r in usable
            ),
            DEFAULTS.TOLERANCE_LINEAR_RESIDUAL,
        ),
        CheckResult(
            "nls_eta_minus1",
            _sup(
                nls_residual_eta_minus1(
                    wave, potential, system.m, system.Lambda, 0.0, _point(r)
                )
                for r in usable
            ),
            DEFAULTS.TOLERANCE_LINEAR_RESIDUAL,
        ),
        CheckResult(
            "hj3_first", _sup(first for first, _ in hj3), DEFAULTS.TOLERANCE_LINEAR_RESIDUAL
        ),
        CheckResult(
            "hj3_second",
            _sup(second for _, second in hj3),
            DEFAULTS.TOLERANCE_LINEAR_RESIDUAL,
        ),
        CheckResult(
            "u_add_fd",
            _sup(
                (u_add_from_density(system, state, r, fd_engine) - u_add_closed(system, r))
                / energy_scale
                for r in usable
                if r > 2.0 * fd_engine.step_size(r, 2)
            ),
            DEFAULTS.TOLERANCE_U_ADD_FD,
        ),
    ]
    return results


def _nonlinear_checks(
    system: KeplerSystem, config: RunConfig, energy: float
) -> List[CheckResult]:
    state = sqrtP_nonlinear(system, config.c1, config.c2)
    radii = _inner_radii(state, DEFAULTS.RESIDUAL_NONLINEAR_SAMPLES)
    params = system.separation_parameters()
    fd_engine = DiffEngine(
        stencil_order=4, step=DEFAULTS.RESIDUAL_NONLINEAR_FD_STEP, use_analytic=False
    )
    energy_scale = system.gm * system.m / system.r0
    return [
        CheckResult(
            "radial_nonlinear",
            _sup(
                radial_residual(
                    state.profile, energy, 0.0, params, r, fd_engine, normalize=True
                ).real
                for r in radii
            ),
            DEFAULTS.TOLERANCE_NONLINEAR_RADIAL,
        ),
        CheckResult(
            "u_add_nonlinear",
            _sup(
                (u_add_from_density(system, state, r) - u_add_closed(system, r))
                / energy_scale
                for r in radii
            ),
            DEFAULTS.TOLERANCE_U_ADD_NONLINEAR,
        ),
    ]


def _angular_checks(system: KeplerSystem) -> List[CheckResult]:
    # sin(theta) with C = 1, C' = 2 and exp(phi) with C = 1 solve the K = m Lambda equations
    params = system.separation_parameters(K=system.m * system.Lambda)
    theta_profile = Profile(
        value=math.sin,
        first=math.cos,
        second=lambda s: -math.sin(s),
        lower=0.0,
        upper=math.pi,
    )
    phi_profile = Profile(value=math.exp, first=math.exp, second=math.exp)
    thetas = np.linspace(0.1, math.pi - 0.1, 16)
    phis = np.linspace(0.0, 2.0 * math.pi, 16)
    return [
        CheckResult(
            "theta",
            _sup(
                theta_residual(theta_profile, 1.0, 2.0, params, float(t)) for t in thetas
            ),
            DEFAULTS.TOLERANCE_LINEAR_RESIDUAL,
        ),
        CheckResult(
            "phi",
            _sup(
                phi_residual(phi_profile, 1.0, params, float(p)) / math.exp(float(p))
                for p in phis
            ),
            DEFAULTS.TOLERANCE_LINEAR_RESIDUAL,
        ),
    ]


def _virial_check(system: KeplerSystem, radii: Sequence[float]) -> CheckResult:
    return CheckResult(
        "virial",
        _sup(virial_balance(system, r).residual for r in radii),
        DEFAULTS.TOLERANCE_VIRIAL,
    )


def _guarded(name: str, build: Callable[[], List[CheckResult]]) -> List[CheckResult]:
    try:
        return build()
    except (ScaleDynamicsError, ArithmeticError) as exc:
        logger.warning(
            "check could not be evaluated", extra={"check": name, "error": str(exc)}
        )
        return [CheckResult(name, math.inf, 0.0)]


def run_residual_suite(config: RunConfig) -> List[CheckResult]:
    system = kepler_system_from_config(config)
    radii = grid_from_config(config)
    energy = -ground_state_energy(system).oracle * config.energy_factor
    results: List[CheckResult] = []
    results += _guarded("linear", lambda: _linear_checks(system, config, radii, energy))
    results += _guarded("nonlinear", lambda: _nonlinear_checks(system, config, energy))
    results += _guarded("angular", lambda: _angular_checks(system))
    results += _guarded("virial", lambda: [_virial_check(system, radii)])
    for result in results:
        if not result.passed:
            logger.warning(
                "residual above tolerance",
                extra={
                    "check": result.name,
                    "value": result.value,
                    "tolerance": result.tolerance,
                },
            )
    return results


def summarize(results: Sequence[CheckResult]) -> Dict[str, float]:
    return {result.name: result.value for result in results}
