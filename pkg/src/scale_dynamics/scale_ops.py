"""Extended derivatives along asymptotic trajectories and the Newton residual.

The regular part of a trajectory is piecewise C1 with explicit breakpoints;
its right and left derivatives come from the adjacent segments. The deviant
part never enters numerically: only the regime's comparison constants do,
through order-j_alpha partial-derivative corrections.
"""

from __future__ import annotations

import bisect
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Literal, Optional, Sequence

import numpy as np

from scale_dynamics.errors import DomainError, UnsupportedConfigurationError
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
from scale_dynamics.scale_regime import EtaParameter, ScaleRegime
from shared import defaults as DEFAULTS

logger = logging.getLogger(__name__)

Side = Literal["plus", "minus"]


@dataclass(frozen=True)
class TrajectorySegment:
    """One smooth piece of a regular part: position and its derivative."""

    position: Callable[[float], Any]
    velocity: Callable[[float], Any]


@dataclass(frozen=True)
class AsymptoticTrajectory:
    segments: Sequence[TrajectorySegment]
    regime: ScaleRegime
    breakpoints: Sequence[float] = ()
    t_min: float = -math.inf
    t_max: float = math.inf

    def __post_init__(self) -> None:
        segments = tuple(self.segments)
        breakpoints = tuple(float(b) for b in self.breakpoints)
        if len(segments) != len(breakpoints) + 1:
            raise DomainError(
                f"{len(breakpoints)} breakpoints need {len(breakpoints) + 1} segments, "
                f"got {len(segments)}"
            )
        if any(later <= earlier for earlier, later in zip(breakpoints, breakpoints[1:])):
            raise DomainError("breakpoints must be strictly increasing")
        if not self.t_min < self.t_max:
            raise DomainError("trajectory domain must satisfy t_min < t_max")
        object.__setattr__(self, "segments", segments)
        object.__setattr__(self, "breakpoints", breakpoints)

    @classmethod
    def smooth(
        cls,
        position: Callable[[float], Any],
        velocity: Callable[[float], Any],
        regime: ScaleRegime,
        t_min: float = -math.inf,
        t_max: float = math.inf,
    ) -> AsymptoticTrajectory:
        return cls((TrajectorySegment(position, velocity),), regime, (), t_min, t_max)

    @property
    def dimension(self) -> int:
        return self.regime.dimension

    def _check_time(self, t: float) -> None:
        if not self.t_min <= t <= self.t_max:
            raise DomainError(f"t={t} outside trajectory domain [{self.t_min}, {self.t_max}]")

    def _vector(self, raw: Any) -> RealVector:
        vector = np.atleast_1d(np.asarray(raw, dtype=np.float64))
        if vector.shape != (self.dimension,):
            raise DomainError(
                f"trajectory value has shape {vector.shape}, regime dimension is {self.dimension}"
            )
        return vector

    def position(self, t: float) -> RealVector:
        self._check_time(t)
        segment = self.segments[bisect.bisect_right(self.breakpoints, t)]
        return self._vector(segment.position(t))

    def right_derivative(self, t: float) -> RealVector:
        self._check_time(t)
        segment = self.segments[bisect.bisect_right(self.breakpoints, t)]
        return self._vector(segment.velocity(t))

    def left_derivative(self, t: float) -> RealVector:
        self._check_time(t)
        segment = self.segments[bisect.bisect_left(self.breakpoints, t)]
        return self._vector(segment.velocity(t))


def delta_derivative(traj: AsymptoticTrajectory, t: float) -> RealVector:
    return traj.right_derivative(t)


def nabla_derivative(traj: AsymptoticTrajectory, t: float) -> RealVector:
    return traj.left_derivative(t)


def box_time(
    traj: AsymptoticTrajectory, t: float, eta: Optional[EtaParameter] = None
) -> ComplexVector:
    """1/2 (d+ + d-) + i eta/2 (d+ - d-) of the regular part."""
    eta_value = (eta if eta is not None else traj.regime.eta).value
    right = traj.right_derivative(t)
    left = traj.left_derivative(t)
    return np.asarray(
        0.5 * (right + left) + 0.5j * eta_value * (right - left), dtype=np.complex128
    )


def velocity(
    traj: AsymptoticTrajectory, t: float, regime: Optional[ScaleRegime] = None
) -> ComplexVector:
    """V(t) = box_time of the regular part at time t.

    A trajectory velocity depends on t alone, so it is returned pointwise as a
    complex vector; ``regime`` overrides the eta of the trajectory's regime.
    """
    eta = regime.eta if regime is not None else None
    return box_time(traj, t, eta)


def check_regime(regime: ScaleRegime, f: ScalarField) -> None:
    if regime.j_alpha > DEFAULTS.MAX_J_ALPHA:
        raise UnsupportedConfigurationError(
            f"j_alpha={regime.j_alpha} exceeds the supported order {DEFAULTS.MAX_J_ALPHA}"
        )
    if regime.dimension != f.dimension:
        raise DomainError(
            f"regime dimension {regime.dimension} does not match field dimension {f.dimension}"
        )


def scale_correction(
    f: ScalarField,
    regime: ScaleRegime,
    t: float,
    x: PointLike,
    engine: Optional[DiffEngine] = None,
) -> complex:
    """Sum over multi-indices of weight / j! * mixed partial of order j_alpha."""
    check_regime(regime, f)
    if regime.is_linear:
        return 0j
    diff = engine if engine is not None else DiffEngine()
    point = as_point(x)
    total = 0j
    for index in itertools.product(range(regime.dimension), repeat=regime.j_alpha):
        weight = regime.weight(index)
        if weight == 0:
            continue
        total += weight * diff.mixed_partial(f, index, t, point)
    return total / math.factorial(regime.j_alpha)


def one_sided_correction(
    f: ScalarField,
    regime: ScaleRegime,
    side: Side,
    t: float,
    x: PointLike,
    engine: Optional[DiffEngine] = None,
) -> complex:
    """Correction of the right (plus) or left (minus) extended derivative.

    The left correction carries the sign (-1)**(j_alpha - 1).
    """
    check_regime(regime, f)
    if regime.is_linear:
        return 0j
    diff = engine if engine is not None else DiffEngine()
    point = as_point(x)
    total = 0j
    for index in itertools.product(range(regime.dimension), repeat=regime.j_alpha):
        plus, minus = regime.one_sided_weights(index)
        weight = plus if side == "plus" else minus
        if weight == 0.0:
            continue
        total += weight * diff.mixed_partial(f, index, t, point)
    sign = 1.0 if side == "plus" or regime.j_alpha % 2 == 1 else -1.0
    return sign * total / math.factorial(regime.j_alpha)


def box_along(
    f: ScalarField,
    regime: ScaleRegime,
    t: float,
    x: PointLike,
    box_velocity: ComplexVector,
    engine: Optional[DiffEngine] = None,
) -> complex:
    """df/dt along a path with complex velocity ``box_velocity``, plus the scale correction."""
    diff = engine if engine is not None else DiffEngine()
    point = as_point(x)
    classical = diff.time_derivative(f, t, point) + complex(
        np.sum(diff.gradient(f, t, point) * box_velocity)
    )
    return classical + scale_correction(f, regime, t, point, diff)


def box_of_function(
    f: ScalarField,
    traj: AsymptoticTrajectory,
    t: float,
    regime: Optional[ScaleRegime] = None,
    engine: Optional[DiffEngine] = None,
) -> complex:
    active = regime if regime is not None else traj.regime
    return box_along(
        f, active, t, traj.position(t), box_time(traj, t, active.eta), engine
    )


def box_of_field(
    vector: VectorField,
    traj: AsymptoticTrajectory,
    t: float,
    regime: Optional[ScaleRegime] = None,
    engine: Optional[DiffEngine] = None,
) -> ComplexVector:
    return np.array(
        [box_of_function(c, traj, t, regime, engine) for c in vector.components],
        dtype=np.complex128,
    )


def _one_sided_of_function(
    f: ScalarField,
    traj: AsymptoticTrajectory,
    t: float,
    side: Side,
    regime: Optional[ScaleRegime],
    engine: Optional[DiffEngine],
) -> complex:
    active = regime if regime is not None else traj.regime
    diff = engine if engine is not None else DiffEngine()
    point = traj.position(t)
    path_velocity = (
        traj.right_derivative(t) if side == "plus" else traj.left_derivative(t)
    )
    classical = diff.time_derivative(f, t, point) + complex(
        np.sum(diff.gradient(f, t, point) * path_velocity)
    )
    return classical + one_sided_correction(f, active, side, t, point, diff)


def delta_of_function(
    f: ScalarField,
    traj: AsymptoticTrajectory,
    t: float,
    regime: Optional[ScaleRegime] = None,
    engine: Optional[DiffEngine] = None,
) -> complex:
    return _one_sided_of_function(f, traj, t, "plus", regime, engine)


def nabla_of_function(
    f: ScalarField,
    traj: AsymptoticTrajectory,
    t: float,
    regime: Optional[ScaleRegime] = None,
    engine: Optional[DiffEngine] = None,
) -> complex:
    return _one_sided_of_function(f, traj, t, "minus", regime, engine)


def moment_of_inertia(m: float, x: PointLike) -> float:
    point = as_point(x)
    return float(m * np.dot(point, point))


def _material_derivative(
    vector: VectorField,
    t: float,
    x: RealVector,
    flow: ComplexVector,
    diff: DiffEngine,
) -> ComplexVector:
    return np.array(
        [
            diff.time_derivative(c, t, x) + complex(np.sum(diff.gradient(c, t, x) * flow))
            for c in vector.components
        ],
        dtype=np.complex128,
    )


def box_squared_inertia(
    vector: VectorField,
    regime: ScaleRegime,
    m: float,
    t: float,
    x: PointLike,
    engine: Optional[DiffEngine] = None,
) -> complex:
    """Second extended derivative of I = m X.X along the flow of ``vector``.

    2m V.V + 2m X.[dV/dt + (lambda/2) Lap V] + 2m lambda div V, with the
    material derivative taken along V itself.
    """
    if not regime.is_linear and regime.j_alpha != 2:
        raise UnsupportedConfigurationError(
            "the moment-of-inertia identity is stated for j_alpha = 2"
        )
    diff = engine if engine is not None else DiffEngine()
    point = as_point(x)
    lam = regime.uniform_lambda()
    flow = vector(t, point)
    material = _material_derivative(vector, t, point, flow, diff)
    lap = np.array(
        [diff.laplacian(c, t, point) for c in vector.components], dtype=np.complex128
    )
    div = diff.divergence(vector, t, point)
    return (
        2.0 * m * bilinear_square(flow)
        + 2.0 * m * complex(np.sum(point * (material + 0.5 * lam * lap)))
        + 2.0 * m * lam * div
    )


def newton_residual(
    vector: VectorField,
    potential: ScalarField,
    regime: ScaleRegime,
    m: float,
    t: float,
    x: PointLike,
    engine: Optional[DiffEngine] = None,
) -> ComplexVector:
    """m * box derivative of V along its own flow + grad U."""
    diff = engine if engine is not None else DiffEngine()
    point = as_point(x)
    flow = vector(t, point)
    box = np.array(
        [box_along(c, regime, t, point, flow, diff) for c in vector.components],
        dtype=np.complex128,
    )
    return np.asarray(m * box + diff.gradient(potential, t, point), dtype=np.complex128)
