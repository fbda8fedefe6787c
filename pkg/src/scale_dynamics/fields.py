"""Scalar and vector fields with analytic or finite-difference calculus.

Every residual evaluator in the package reads derivatives through a
``DiffEngine``. Analytic partials attached to a field are preferred; central
finite differences of order 2 or 4 are the fallback. Complex-valued fields are
differentiated directly, which is componentwise on (re, im) since the
stencils are linear.
"""

from __future__ import annotations

import cmath
import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from scale_dynamics.errors import (
    DomainError,
    SingularFieldError,
    UnsupportedConfigurationError,
)
from shared import defaults as DEFAULTS

logger = logging.getLogger(__name__)

RealVector = npt.NDArray[np.float64]
ComplexVector = npt.NDArray[np.complex128]
PointLike = Union[npt.NDArray[Any], Sequence[float]]

ValueFn = Callable[[float, RealVector], Any]
ProfileFn = Callable[[float], Any]

_EPS = sys.float_info.epsilon

# (offset, weight) pairs; first derivatives divide by h, second by h**2
_FIRST_STENCIL: Dict[int, Tuple[Tuple[int, float], ...]] = {
    2: ((-1, -0.5), (1, 0.5)),
    4: ((-2, 1.0 / 12.0), (-1, -2.0 / 3.0), (1, 2.0 / 3.0), (2, -1.0 / 12.0)),
}
_SECOND_STENCIL: Dict[int, Tuple[Tuple[int, float], ...]] = {
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    4: (
        (-2, -1.0 / 12.0),
        (-1, 4.0 / 3.0),
        (0, -5.0 / 2.0),
        (1, 4.0 / 3.0),
        (2, -1.0 / 12.0),
    ),
}
_STENCIL_REACH = {2: 1, 4: 2}


def as_point(x: PointLike) -> RealVector:
    point = np.array(x, dtype=np.float64)
    if point.ndim != 1 or point.size == 0:
        raise DomainError(f"expected a non-empty coordinate vector, got shape {point.shape}")
    return point


@dataclass(frozen=True)
class BoxDomain:
    """Axis-aligned box; ``None`` bounds are unbounded."""

    lower: Optional[Tuple[float, ...]] = None
    upper: Optional[Tuple[float, ...]] = None

    def contains(self, x: RealVector, margin: float = 0.0) -> bool:
        if self.lower is not None and np.any(x - margin < np.asarray(self.lower)):
            return False
        if self.upper is not None and np.any(x + margin > np.asarray(self.upper)):
            return False
        return True


@dataclass(frozen=True)
class RadialDomain:
    """Open radial interval (r_min, r_max)."""

    r_min: float = 0.0
    r_max: float = math.inf

    def contains_radius(self, r: float, margin: float = 0.0) -> bool:
        return r - margin > self.r_min and r + margin < self.r_max

    def contains(self, x: RealVector, margin: float = 0.0) -> bool:
        return self.contains_radius(float(np.linalg.norm(x)), margin)


Domain = Union[BoxDomain, RadialDomain]


@dataclass(frozen=True)
class Profile:
    """A function of one variable with optional analytic first/second derivatives.

    Used for radial factors R(r), angular factors Theta, Phi and for the radial
    amplitude of spherically symmetric fields.
    """

    value: ProfileFn
    first: Optional[ProfileFn] = None
    second: Optional[ProfileFn] = None
    lower: float = -math.inf
    upper: float = math.inf

    def __call__(self, s: float) -> complex:
        return complex(self.value(s))

    def contains(self, s: float, margin: float = 0.0) -> bool:
        return s - margin > self.lower and s + margin < self.upper

    @property
    def has_analytic_derivatives(self) -> bool:
        return self.first is not None and self.second is not None

    def with_domain(self, lower: float, upper: float) -> Profile:
        return Profile(self.value, self.first, self.second, lower, upper)

    def scaled(self, factor: complex) -> Profile:
        first, second = self.first, self.second
        return Profile(
            value=lambda s: factor * complex(self.value(s)),
            first=None if first is None else (lambda s: factor * complex(first(s))),
            second=None if second is None else (lambda s: factor * complex(second(s))),
            lower=self.lower,
            upper=self.upper,
        )

    def _positive(self, s: float) -> float:
        v = complex(self.value(s))
        if v.imag != 0.0 or v.real <= 0.0:
            raise SingularFieldError(f"profile must be positive, got {v} at {s}")
        return v.real

    def log(self) -> Profile:
        first, second = self.first, self.second

        def log_first(s: float) -> float:
            assert first is not None
            return complex(first(s)).real / self._positive(s)

        def log_second(s: float) -> float:
            assert first is not None and second is not None
            v = self._positive(s)
            d1 = complex(first(s)).real
            return complex(second(s)).real / v - (d1 / v) ** 2

        return Profile(
            value=lambda s: math.log(self._positive(s)),
            first=None if first is None else log_first,
            second=None if first is None or second is None else log_second,
            lower=self.lower,
            upper=self.upper,
        )

    def power(self, exponent: float) -> Profile:
        first, second = self.first, self.second

        def power_first(s: float) -> float:
            assert first is not None
            v = self._positive(s)
            return exponent * v ** (exponent - 1.0) * complex(first(s)).real

        def power_second(s: float) -> float:
            assert first is not None and second is not None
            v = self._positive(s)
            d1 = complex(first(s)).real
            d2 = complex(second(s)).real
            return exponent * (
                v ** (exponent - 1.0) * d2
                + (exponent - 1.0) * v ** (exponent - 2.0) * d1 * d1
            )

        return Profile(
            value=lambda s: self._positive(s) ** exponent,
            first=None if first is None else power_first,
            second=None if first is None or second is None else power_second,
            lower=self.lower,
            upper=self.upper,
        )


def _zero_time(t: float, x: RealVector) -> complex:  # pylint: disable=unused-argument
    return 0j


@dataclass(frozen=True)
class ScalarField:
    """A (possibly complex) field f(t, x) on a d-dimensional domain.

    ``gradient_fn``, ``hessian_fn`` and ``time_fn`` are optional analytic
    partials. ``profile`` is set for spherically symmetric fields so that
    radial-mode engines can differentiate the one-dimensional amplitude.
    """

    value: ValueFn
    dimension: int
    gradient_fn: Optional[ValueFn] = None
    hessian_fn: Optional[ValueFn] = None
    time_fn: Optional[ValueFn] = None
    domain: Domain = field(default_factory=BoxDomain)
    profile: Optional[Profile] = None

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise DomainError(f"dimension must be positive, got {self.dimension}")

    def __call__(self, t: float, x: PointLike) -> complex:
        return complex(self.value(t, as_point(x)))

    def analytic_gradient(self, t: float, x: RealVector) -> Optional[ComplexVector]:
        if self.gradient_fn is None:
            return None
        return np.asarray(self.gradient_fn(t, x), dtype=np.complex128).reshape(
            self.dimension
        )

    def analytic_hessian(self, t: float, x: RealVector) -> Optional[ComplexVector]:
        if self.hessian_fn is None:
            return None
        return np.asarray(self.hessian_fn(t, x), dtype=np.complex128).reshape(
            self.dimension, self.dimension
        )

    @classmethod
    def constant(cls, value: complex, dimension: int) -> ScalarField:
        def gradient(t: float, x: RealVector) -> ComplexVector:  # pylint: disable=unused-argument
            return np.zeros(dimension, dtype=np.complex128)

        def hessian(t: float, x: RealVector) -> ComplexVector:  # pylint: disable=unused-argument
            return np.zeros((dimension, dimension), dtype=np.complex128)

        return cls(
            value=lambda t, x: value,
            dimension=dimension,
            gradient_fn=gradient,
            hessian_fn=hessian,
            time_fn=_zero_time,
        )

    @classmethod
    def from_radial(cls, profile: Profile, dimension: int = 3) -> ScalarField:
        """Lift a radial profile f(r) to f(|x|) with analytic Cartesian partials."""
        first, second = profile.first, profile.second

        def radius(x: RealVector) -> float:
            r = float(np.linalg.norm(x))
            if r <= 0.0:
                raise DomainError("radial fields are singular at the origin")
            return r

        def gradient(t: float, x: RealVector) -> ComplexVector:  # pylint: disable=unused-argument
            assert first is not None
            r = radius(x)
            return complex(first(r)) * x.astype(np.complex128) / r

        def hessian(t: float, x: RealVector) -> ComplexVector:  # pylint: disable=unused-argument
            assert first is not None and second is not None
            r = radius(x)
            unit = x / r
            outer = np.outer(unit, unit)
            d1 = complex(first(r))
            d2 = complex(second(r))
            return np.asarray(
                d2 * outer + (d1 / r) * (np.eye(dimension) - outer),
                dtype=np.complex128,
            )

        return cls(
            value=lambda t, x: profile(radius(x)),
            dimension=dimension,
            gradient_fn=None if first is None else gradient,
            hessian_fn=None if first is None or second is None else hessian,
            time_fn=_zero_time,
            domain=RadialDomain(max(profile.lower, 0.0), profile.upper),
            profile=profile,
        )

    def _require_same_dimension(self, other: ScalarField) -> None:
        if other.dimension != self.dimension:
            raise DomainError(
                f"cannot combine fields of dimension {self.dimension} and {other.dimension}"
            )

    def __add__(self, other: ScalarField) -> ScalarField:
        self._require_same_dimension(other)
        left, right = self, other

        def pair(
            a: Optional[ValueFn], b: Optional[ValueFn], as_array: bool
        ) -> Optional[ValueFn]:
            if a is None or b is None:
                return None
            if as_array:
                return lambda t, x: np.asarray(a(t, x), dtype=np.complex128) + np.asarray(
                    b(t, x), dtype=np.complex128
                )
            return lambda t, x: complex(a(t, x)) + complex(b(t, x))

        return ScalarField(
            value=lambda t, x: complex(left.value(t, x)) + complex(right.value(t, x)),
            dimension=self.dimension,
            gradient_fn=pair(left.gradient_fn, right.gradient_fn, True),
            hessian_fn=pair(left.hessian_fn, right.hessian_fn, True),
            time_fn=pair(left.time_fn, right.time_fn, False),
            domain=left.domain,
        )

    def scaled(self, factor: complex) -> ScalarField:
        base = self

        def scale(fn: Optional[ValueFn], as_array: bool) -> Optional[ValueFn]:
            if fn is None:
                return None
            if as_array:
                return lambda t, x: factor * np.asarray(fn(t, x), dtype=np.complex128)
            return lambda t, x: factor * complex(fn(t, x))

        return ScalarField(
            value=lambda t, x: factor * complex(base.value(t, x)),
            dimension=self.dimension,
            gradient_fn=scale(base.gradient_fn, True),
            hessian_fn=scale(base.hessian_fn, True),
            time_fn=scale(base.time_fn, False),
            domain=base.domain,
            profile=None if base.profile is None else base.profile.scaled(factor),
        )

    def exp(self) -> ScalarField:
        base = self

        def gradient(t: float, x: RealVector) -> ComplexVector:
            g = base.analytic_gradient(t, x)
            assert g is not None
            return cmath.exp(complex(base.value(t, x))) * g

        def hessian(t: float, x: RealVector) -> ComplexVector:
            g = base.analytic_gradient(t, x)
            h = base.analytic_hessian(t, x)
            assert g is not None and h is not None
            return cmath.exp(complex(base.value(t, x))) * (np.outer(g, g) + h)

        def time(t: float, x: RealVector) -> complex:
            assert base.time_fn is not None
            return cmath.exp(complex(base.value(t, x))) * complex(base.time_fn(t, x))

        return ScalarField(
            value=lambda t, x: cmath.exp(complex(base.value(t, x))),
            dimension=self.dimension,
            gradient_fn=None if base.gradient_fn is None else gradient,
            hessian_fn=None
            if base.gradient_fn is None or base.hessian_fn is None
            else hessian,
            time_fn=None if base.time_fn is None else time,
            domain=base.domain,
        )

    def log(self) -> ScalarField:
        """Principal logarithm; partials follow the chain rule of any local branch."""
        base = self

        def nonzero(t: float, x: RealVector) -> complex:
            v = complex(base.value(t, x))
            if v == 0:
                raise SingularFieldError(f"cannot take the logarithm of zero at {x}")
            return v

        def gradient(t: float, x: RealVector) -> ComplexVector:
            g = base.analytic_gradient(t, x)
            assert g is not None
            return g / nonzero(t, x)

        def hessian(t: float, x: RealVector) -> ComplexVector:
            g = base.analytic_gradient(t, x)
            h = base.analytic_hessian(t, x)
            assert g is not None and h is not None
            v = nonzero(t, x)
            return h / v - np.outer(g, g) / (v * v)

        def time(t: float, x: RealVector) -> complex:
            assert base.time_fn is not None
            return complex(base.time_fn(t, x)) / nonzero(t, x)

        return ScalarField(
            value=lambda t, x: cmath.log(nonzero(t, x)),
            dimension=self.dimension,
            gradient_fn=None if base.gradient_fn is None else gradient,
            hessian_fn=None
            if base.gradient_fn is None or base.hessian_fn is None
            else hessian,
            time_fn=None if base.time_fn is None else time,
            domain=base.domain,
            profile=None if base.profile is None else base.profile.log(),
        )


def _component_value(
    fn: Callable[[float, RealVector], ComplexVector], axis: int, scale: complex
) -> ValueFn:
    return lambda t, x: scale * complex(fn(t, x)[axis])


@dataclass(frozen=True)
class VectorField:
    """d component ScalarFields over a d-dimensional domain."""

    components: Sequence[ScalarField]

    def __post_init__(self) -> None:
        components = tuple(self.components)
        if not components:
            raise DomainError("a vector field needs at least one component")
        for component in components:
            if component.dimension != len(components):
                raise DomainError(
                    f"component of dimension {component.dimension} in a "
                    f"{len(components)}-component field"
                )
        object.__setattr__(self, "components", components)

    @property
    def dimension(self) -> int:
        return len(self.components)

    def __call__(self, t: float, x: PointLike) -> ComplexVector:
        point = as_point(x)
        return np.array(
            [complex(c.value(t, point)) for c in self.components], dtype=np.complex128
        )

    @classmethod
    def constant(cls, values: Sequence[complex]) -> VectorField:
        return cls(tuple(ScalarField.constant(v, len(values)) for v in values))

    @classmethod
    def from_function(
        cls,
        value_fn: Callable[[float, RealVector], Any],
        dimension: int,
        jacobian_fn: Optional[Callable[[float, RealVector], Any]] = None,
        domain: Optional[Domain] = None,
    ) -> VectorField:
        """Split a vector-valued function into components; jacobian rows are gradients."""

        def as_vector(t: float, x: RealVector) -> ComplexVector:
            return np.asarray(value_fn(t, x), dtype=np.complex128).reshape(dimension)

        def row(axis: int) -> Optional[ValueFn]:
            if jacobian_fn is None:
                return None
            jac = jacobian_fn
            return lambda t, x: np.asarray(jac(t, x), dtype=np.complex128)[axis]

        return cls(
            tuple(
                ScalarField(
                    value=_component_value(as_vector, axis, 1.0),
                    dimension=dimension,
                    gradient_fn=row(axis),
                    domain=domain if domain is not None else BoxDomain(),
                )
                for axis in range(dimension)
            )
        )

    @classmethod
    def from_gradient(
        cls,
        f: ScalarField,
        scale: complex = 1.0,
        engine: Optional[DiffEngine] = None,
    ) -> VectorField:
        """scale * grad f; analytic hessian rows become component gradients."""
        diff = engine if engine is not None else DiffEngine()

        def grad(t: float, x: RealVector) -> ComplexVector:
            return diff.gradient(f, t, x)

        def hessian_row(axis: int) -> Optional[ValueFn]:
            hessian_fn = f.hessian_fn
            if hessian_fn is None:
                return None
            return lambda t, x: scale * np.asarray(
                hessian_fn(t, x), dtype=np.complex128
            )[axis]

        return cls(
            tuple(
                ScalarField(
                    value=_component_value(grad, axis, scale),
                    dimension=f.dimension,
                    gradient_fn=hessian_row(axis),
                    domain=f.domain,
                )
                for axis in range(f.dimension)
            )
        )


@dataclass(frozen=True)
class DiffEngine:
    """Differentiation policy: stencil order, step and coordinate mode.

    With ``step=None`` an order-2 engine picks h = eps**(1/(n+2)) * max(1, |x_k|)
    for an n-th derivative (cbrt(eps) scaling for gradients); an order-4
    engine uses the fixed ``FD_ORDER4_STEP``.
    """

    stencil_order: int = DEFAULTS.FD_DEFAULT_STENCIL_ORDER
    step: Optional[float] = None
    mode: str = "cartesian"
    use_analytic: bool = True

    def __post_init__(self) -> None:
        if self.stencil_order not in _FIRST_STENCIL:
            raise DomainError(f"stencil_order must be 2 or 4, got {self.stencil_order}")
        if self.step is not None and not self.step > 0.0:
            raise DomainError(f"finite-difference step must be positive, got {self.step}")
        if self.mode not in ("cartesian", "radial"):
            raise DomainError(f"mode must be 'cartesian' or 'radial', got {self.mode!r}")

    def step_size(self, coordinate: float, derivative_order: int) -> float:
        if self.step is not None:
            return self.step
        if self.stencil_order == 4:
            return DEFAULTS.FD_ORDER4_STEP
        return _EPS ** (1.0 / (derivative_order + 2)) * max(1.0, abs(coordinate))

    def _margin(self, x: RealVector, derivative_order: int) -> float:
        if derivative_order == 0:
            return 0.0
        h = max(self.step_size(float(c), derivative_order) for c in x)
        return _STENCIL_REACH[self.stencil_order] * derivative_order * h

    def _require_inside(self, f: ScalarField, x: RealVector, derivative_order: int) -> None:
        margin = self._margin(x, derivative_order)
        if not f.domain.contains(x, margin):
            raise DomainError(
                f"point {x.tolist()} is not interior to the field domain by {margin:.3g}"
            )

    def _fd(
        self,
        func: Callable[[RealVector], complex],
        x: RealVector,
        axes: Tuple[int, ...],
        total_order: int,
    ) -> complex:
        if not axes:
            return func(x)
        if len(axes) >= 2 and axes[0] == axes[1]:
            stencil, consumed, power = _SECOND_STENCIL[self.stencil_order], 2, 2
        else:
            stencil, consumed, power = _FIRST_STENCIL[self.stencil_order], 1, 1
        axis, rest = axes[0], axes[consumed:]
        h = self.step_size(float(x[axis]), total_order)
        total = 0j
        for offset, weight in stencil:
            shifted = x.copy()
            shifted[axis] += offset * h
            total += weight * self._fd(func, shifted, rest, total_order)
        return total / h**power

    def gradient(self, f: ScalarField, t: float, x: PointLike) -> ComplexVector:
        point = as_point(x)
        if self.use_analytic and f.gradient_fn is not None:
            self._require_inside(f, point, 0)
            analytic = f.analytic_gradient(t, point)
            assert analytic is not None
            return analytic
        self._require_inside(f, point, 1)
        return np.array(
            [
                self._fd(lambda p: complex(f.value(t, p)), point, (axis,), 1)
                for axis in range(f.dimension)
            ],
            dtype=np.complex128,
        )

    def mixed_partial(
        self, f: ScalarField, index: Sequence[int], t: float, x: PointLike
    ) -> complex:
        """Partial derivative along the 0-based multi-index ``index`` (order <= 4)."""
        point = as_point(x)
        axes = tuple(int(k) for k in index)
        if len(axes) > DEFAULTS.FD_MAX_MIXED_ORDER:
            raise UnsupportedConfigurationError(
                f"mixed partials are supported up to order {DEFAULTS.FD_MAX_MIXED_ORDER}"
            )
        if any(k < 0 or k >= f.dimension for k in axes):
            raise DomainError(f"multi-index {axes} out of range for dimension {f.dimension}")
        hessian_fn, gradient_fn = f.hessian_fn, f.gradient_fn

        def from_hessian(p: RealVector) -> complex:
            assert hessian_fn is not None
            return complex(np.asarray(hessian_fn(t, p))[axes[0], axes[1]])

        def from_gradient(p: RealVector) -> complex:
            assert gradient_fn is not None
            return complex(np.asarray(gradient_fn(t, p))[axes[0]])

        def from_value(p: RealVector) -> complex:
            return complex(f.value(t, p))

        base: Callable[[RealVector], complex] = from_value
        rest = axes
        if self.use_analytic and len(axes) >= 2 and hessian_fn is not None:
            base, rest = from_hessian, axes[2:]
        elif self.use_analytic and len(axes) >= 1 and gradient_fn is not None:
            base, rest = from_gradient, axes[1:]
        self._require_inside(f, point, len(rest))
        return self._fd(base, point, rest, len(rest))

    def laplacian(self, f: ScalarField, t: float, x: PointLike) -> complex:
        point = as_point(x)
        if self.mode == "radial":
            if f.profile is None:
                raise UnsupportedConfigurationError(
                    "radial mode needs a spherically symmetric field"
                )
            r = float(np.linalg.norm(point))
            return self.radial_laplacian(f.profile, r, f.dimension)
        if self.use_analytic and f.hessian_fn is not None:
            self._require_inside(f, point, 0)
            hessian = f.analytic_hessian(t, point)
            assert hessian is not None
            return complex(np.trace(hessian))
        return sum(
            (self.mixed_partial(f, (axis, axis), t, point) for axis in range(f.dimension)),
            0j,
        )

    def divergence(self, vector: VectorField, t: float, x: PointLike) -> complex:
        point = as_point(x)
        return sum(
            (
                self.mixed_partial(component, (axis,), t, point)
                for axis, component in enumerate(vector.components)
            ),
            0j,
        )

    def time_derivative(self, f: ScalarField, t: float, x: PointLike) -> complex:
        point = as_point(x)
        if self.use_analytic and f.time_fn is not None:
            return complex(f.time_fn(t, point))
        h = self.step_size(t, 1)
        total = 0j
        for offset, weight in _FIRST_STENCIL[self.stencil_order]:
            total += weight * complex(f.value(t + offset * h, point))
        return total / h

    def profile_derivatives(
        self, profile: Profile, s: float
    ) -> Tuple[complex, complex, complex]:
        """(value, first, second) of a one-dimensional profile at ``s``."""
        if self.use_analytic and profile.has_analytic_derivatives:
            if not profile.contains(s):
                raise DomainError(f"{s} is outside the profile domain")
            assert profile.first is not None and profile.second is not None
            return profile(s), complex(profile.first(s)), complex(profile.second(s))
        h = self.step_size(s, 2)
        if not profile.contains(s, _STENCIL_REACH[self.stencil_order] * h):
            raise DomainError(
                f"{s} is not interior to the profile domain by the stencil reach"
            )
        first = sum(
            (w * profile(s + o * h) for o, w in _FIRST_STENCIL[self.stencil_order]), 0j
        ) / h
        second = sum(
            (w * profile(s + o * h) for o, w in _SECOND_STENCIL[self.stencil_order]), 0j
        ) / (h * h)
        return profile(s), first, second

    def radial_laplacian(self, profile: Profile, r: float, dimension: int = 3) -> complex:
        """f'' + (d - 1) f'/r for a radial amplitude."""
        if r <= 0.0:
            raise DomainError("the radial Laplacian is singular at r = 0")
        _, first, second = self.profile_derivatives(profile, r)
        return second + (dimension - 1) * first / r


_DEFAULT_ENGINE = DiffEngine()


def _engine(engine: Optional[DiffEngine]) -> DiffEngine:
    return engine if engine is not None else _DEFAULT_ENGINE


def gradient(
    f: ScalarField, t: float, x: PointLike, engine: Optional[DiffEngine] = None
) -> ComplexVector:
    return _engine(engine).gradient(f, t, x)


def laplacian(
    f: ScalarField, t: float, x: PointLike, engine: Optional[DiffEngine] = None
) -> complex:
    return _engine(engine).laplacian(f, t, x)


def divergence(
    vector: VectorField, t: float, x: PointLike, engine: Optional[DiffEngine] = None
) -> complex:
    return _engine(engine).divergence(vector, t, x)


def mixed_partial(
    f: ScalarField,
    index: Sequence[int],
    t: float,
    x: PointLike,
    engine: Optional[DiffEngine] = None,
) -> complex:
    return _engine(engine).mixed_partial(f, index, t, x)


def time_derivative(
    f: ScalarField, t: float, x: PointLike, engine: Optional[DiffEngine] = None
) -> complex:
    return _engine(engine).time_derivative(f, t, x)


def bilinear_square(vector: ComplexVector) -> complex:
    """Sum of squared components, not of squared moduli."""
    return complex(np.sum(vector * vector))


def richardson_gap(f: ScalarField, t: float, x: PointLike, step: float) -> float:
    """Largest gap between the analytic gradient and a Richardson-extrapolated FD gradient."""
    point = as_point(x)
    analytic = f.analytic_gradient(t, point)
    if analytic is None:
        raise UnsupportedConfigurationError("field has no analytic gradient to check")
    coarse = DiffEngine(stencil_order=2, step=step, use_analytic=False).gradient(
        f, t, point
    )
    fine = DiffEngine(stencil_order=2, step=step / 2.0, use_analytic=False).gradient(
        f, t, point
    )
    extrapolated = (4.0 * fine - coarse) / 3.0
    gap = float(np.max(np.abs(extrapolated - analytic)))
    logger.debug("Richardson gap", extra={"step": step, "gap": gap})
    return gap


def convergence_ratio(
    f: ScalarField,
    t: float,
    x: PointLike,
    axis: int,
    step: float,
    stencil_order: int = 2,
) -> float:
    """Error ratio FD(h)/FD(h/2) of the first derivative along ``axis``."""
    point = as_point(x)
    analytic = f.analytic_gradient(t, point)
    if analytic is None:
        raise UnsupportedConfigurationError("field has no analytic gradient to compare")
    errors = []
    for h in (step, step / 2.0):
        engine = DiffEngine(stencil_order=stencil_order, step=h, use_analytic=False)
        errors.append(abs(engine.mixed_partial(f, (axis,), t, point) - analytic[axis]))
    return float(errors[0] / errors[1])
