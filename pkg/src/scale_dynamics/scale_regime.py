"""Scale-regime parameters and the complex comparison-constant algebra.

A regime is described by its order ``alpha`` (and the derived integer
``j_alpha``), the per-axis comparison constants ``lambda_plus`` and
``lambda_minus``, and the parameter ``eta`` which folds the right and left
extended derivatives into one complex operator.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Sequence, Tuple

from scale_dynamics.errors import DomainError, UnsupportedConfigurationError

logger = logging.getLogger(__name__)

_ETA_TEXT: Dict[complex, str] = {1 + 0j: "+1", -1 + 0j: "-1", 1j: "+i", -1j: "-i"}
_TEXT_ETA: Dict[str, complex] = {
    "+1": 1 + 0j,
    "1": 1 + 0j,
    "-1": -1 + 0j,
    "+i": 1j,
    "i": 1j,
    "-i": -1j,
}


@dataclass(frozen=True)
class EtaParameter:
    """One of the four admitted constants {+1, -1, +i, -i}."""

    value: complex

    def __post_init__(self) -> None:
        normalized = complex(self.value)
        if normalized not in _ETA_TEXT:
            raise DomainError(f"eta must be one of +1, -1, +i, -i, got {self.value!r}")
        object.__setattr__(self, "value", normalized)

    @classmethod
    def from_text(cls, text: str) -> EtaParameter:
        key = text.strip().lower().replace(" ", "")
        if key not in _TEXT_ETA:
            raise DomainError(f"cannot parse eta from {text!r}")
        return cls(_TEXT_ETA[key])

    def to_text(self) -> str:
        return _ETA_TEXT[self.value]

    @property
    def is_real(self) -> bool:
        return self.value.imag == 0.0

    def eta_squared(self) -> float:
        """+1 for eta = ±1 and -1 for eta = ±i."""
        return 1.0 if self.is_real else -1.0

    def real_sign(self) -> float:
        """The real value of a real eta; split systems only accept ±1."""
        if not self.is_real:
            raise UnsupportedConfigurationError(
                f"eta={self.to_text()} has no real/imaginary split"
            )
        return self.value.real


ETA_PLUS_ONE = EtaParameter(1)
ETA_MINUS_ONE = EtaParameter(-1)


@dataclass(frozen=True)
class EtaDecomposition:
    """A complex constant written as re_part + i*eta*im_part."""

    re_part: float
    im_part: float
    eta: EtaParameter

    def as_complex(self) -> complex:
        return self.re_part + 1j * self.eta.value * self.im_part

    @classmethod
    def from_complex(cls, value: complex, eta: EtaParameter) -> EtaDecomposition:
        sign = eta.real_sign()
        # for eta = ±1, 1/eta = eta
        return cls(re_part=value.real, im_part=value.imag * sign, eta=eta)


class LambdaForm(str, Enum):
    """How per-index comparison constants are formed.

    PRODUCT multiplies the per-axis constants along the multi-index. UNIFORM
    keeps only diagonal indices with the per-axis constant itself, which is
    the uniform, independent-component form used by the Kepler pipeline.
    """

    PRODUCT = "product"
    UNIFORM = "uniform"


def j_alpha_of(alpha: float) -> int:
    """Integer part of 1/alpha for 0 < alpha <= 1."""
    if not 0.0 < alpha <= 1.0 or math.isnan(alpha):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    return int(math.floor(1.0 / alpha))


def _fold(plus: float, minus: float, j_alpha: int, eta: EtaParameter) -> complex:
    sign = -1.0 if j_alpha % 2 == 0 else 1.0  # (-1)**(j_alpha - 1)
    return 0.5 * (plus + sign * minus) + 0.5j * eta.value * (plus - sign * minus)


def diagonal_lambda(
    lambda_plus: float, lambda_minus: float, eta: EtaParameter
) -> complex:
    """Uniform constant (lambda_plus - lambda_minus)/2 + i*eta*(lambda_plus + lambda_minus)/2."""
    return 0.5 * (lambda_plus - lambda_minus) + 0.5j * eta.value * (
        lambda_plus + lambda_minus
    )


@dataclass(frozen=True)
class ScaleRegime:
    alpha: float
    lambda_plus: Sequence[float]
    lambda_minus: Sequence[float]
    eta: EtaParameter = field(default=ETA_MINUS_ONE)
    lambda_form: LambdaForm = LambdaForm.PRODUCT

    def __post_init__(self) -> None:
        j_alpha_of(self.alpha)
        plus = tuple(float(v) for v in self.lambda_plus)
        minus = tuple(float(v) for v in self.lambda_minus)
        if not plus:
            raise DomainError("a scale regime needs at least one axis")
        if len(plus) != len(minus):
            raise DomainError(
                f"lambda_plus has {len(plus)} axes but lambda_minus has {len(minus)}"
            )
        object.__setattr__(self, "lambda_plus", plus)
        object.__setattr__(self, "lambda_minus", minus)

    @classmethod
    def uniform(
        cls,
        alpha: float,
        lambda_plus: float,
        lambda_minus: float,
        dimension: int,
        eta: EtaParameter = ETA_MINUS_ONE,
        lambda_form: LambdaForm = LambdaForm.UNIFORM,
    ) -> ScaleRegime:
        return cls(
            alpha=alpha,
            lambda_plus=(lambda_plus,) * dimension,
            lambda_minus=(lambda_minus,) * dimension,
            eta=eta,
            lambda_form=lambda_form,
        )

    @classmethod
    def linear(cls, dimension: int, eta: EtaParameter = ETA_MINUS_ONE) -> ScaleRegime:
        return cls.uniform(1.0, 0.0, 0.0, dimension, eta, LambdaForm.PRODUCT)

    @property
    def j_alpha(self) -> int:
        return j_alpha_of(self.alpha)

    @property
    def dimension(self) -> int:
        return len(self.lambda_plus)

    @property
    def is_linear(self) -> bool:
        """alpha = 1: every lambda correction vanishes downstream."""
        return self.alpha == 1.0

    def validate_index(self, index: Sequence[int]) -> Tuple[int, ...]:
        ordered = tuple(sorted(int(k) for k in index))
        if len(ordered) != self.j_alpha:
            raise DomainError(
                f"multi-index has order {len(ordered)}, regime needs {self.j_alpha}"
            )
        if ordered and (ordered[0] < 0 or ordered[-1] >= self.dimension):
            raise DomainError(
                f"multi-index {tuple(index)} out of range for dimension {self.dimension}"
            )
        return ordered

    def one_sided_weights(self, index: Sequence[int]) -> Tuple[float, float]:
        """(plus, minus) constants attached to ``index`` before sign folding."""
        ordered = self.validate_index(index)
        if self.is_linear:
            return 0.0, 0.0
        if self.lambda_form is LambdaForm.UNIFORM:
            if ordered[0] != ordered[-1]:
                return 0.0, 0.0
            axis = ordered[0]
            return self.lambda_plus[axis], self.lambda_minus[axis]
        plus = math.prod(self.lambda_plus[k] for k in ordered)
        minus = math.prod(self.lambda_minus[k] for k in ordered)
        return plus, minus

    def weight(self, index: Sequence[int]) -> complex:
        """Complex constant multiplying the mixed partial of ``index``."""
        plus, minus = self.one_sided_weights(index)
        if plus == 0.0 and minus == 0.0:
            return 0j
        return _fold(plus, minus, self.j_alpha, self.eta)

    def uniform_lambda(self) -> complex:
        """The single complex constant of a regime with identical axes."""
        if len(set(self.lambda_plus)) != 1 or len(set(self.lambda_minus)) != 1:
            raise UnsupportedConfigurationError(
                "a single lambda needs identical constants on every axis"
            )
        value = self.weight((0,) * self.j_alpha)
        if self.lambda_form is LambdaForm.UNIFORM and self.j_alpha > 1:
            logger.debug(
                "uniform lambda differs from the product form",
                extra={
                    "uniform": str(value),
                    "product": str(combine_lambda(self, (0,) * self.j_alpha)),
                },
            )
        return value

    def lambda_decomposition(self) -> EtaDecomposition:
        return EtaDecomposition.from_complex(self.uniform_lambda(), self.eta)

    def to_text(self) -> str:
        lines = [
            f"alpha={self.alpha!r}",
            f"eta={self.eta.to_text()}",
            "lambda_plus=" + ",".join(repr(v) for v in self.lambda_plus),
            "lambda_minus=" + ",".join(repr(v) for v in self.lambda_minus),
            f"lambda_form={self.lambda_form.value}",
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> ScaleRegime:
        values: Dict[str, str] = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise DomainError(f"malformed regime line: {raw!r}")
            values[key.strip()] = value.strip()
        missing = {"alpha", "eta", "lambda_plus", "lambda_minus"} - values.keys()
        if missing:
            raise DomainError(f"regime text is missing keys: {sorted(missing)}")
        try:
            return cls(
                alpha=float(values["alpha"]),
                lambda_plus=tuple(float(v) for v in values["lambda_plus"].split(",")),
                lambda_minus=tuple(
                    float(v) for v in values["lambda_minus"].split(",")
                ),
                eta=EtaParameter.from_text(values["eta"]),
                lambda_form=LambdaForm(values.get("lambda_form", "product")),
            )
        except ValueError as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"malformed regime text: {exc}") from exc


def combine_lambda(regime: ScaleRegime, index: Sequence[int]) -> complex:
    """General combined constant for a 0-based multi-index.

    1/2 (prod lambda_plus + (-1)^(j-1) prod lambda_minus)
    + i eta/2 (prod lambda_plus + (-1)^j prod lambda_minus)

    The index is sorted before the products are taken, so the result is
    bit-for-bit invariant under permutation.
    """
    ordered = regime.validate_index(index)
    plus = math.prod(regime.lambda_plus[k] for k in ordered)
    minus = math.prod(regime.lambda_minus[k] for k in ordered)
    return _fold(plus, minus, regime.j_alpha, regime.eta)
