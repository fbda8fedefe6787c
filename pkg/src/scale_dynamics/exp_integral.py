"""The exponential integral Ei(x), principal value of the integral of e^t/t up to x."""

from __future__ import annotations

import logging
import math
import sys

from scipy import integrate

from scale_dynamics.errors import DomainError
from shared import defaults as DEFAULTS

logger = logging.getLogger(__name__)

EULER_GAMMA = 0.57721566490153286061
_EPS = sys.float_info.epsilon
_TINY = sys.float_info.min / _EPS


def _check_argument(x: float) -> None:
    if x == 0.0 or math.isnan(x):
        raise DomainError(f"Ei has a logarithmic singularity at 0, got x={x}")


def _power_series(x: float) -> float:
    # gamma + ln|x| + sum x^k / (k k!)
    total = 0.0
    term = 1.0
    for k in range(1, DEFAULTS.EI_SERIES_MAX_TERMS + 1):
        term *= x / k
        contribution = term / k
        total += contribution
        if k > abs(x) and abs(contribution) < _EPS * abs(total):
            break
    return EULER_GAMMA + math.log(abs(x)) + total


def _asymptotic_series(x: float) -> float:
    total = 1.0
    term = 1.0
    for k in range(1, int(x) + 1):
        next_term = term * k / x
        if next_term > term or next_term < _EPS * total:
            break
        term = next_term
        total += term
    return math.exp(x) / x * total


def _e1_continued_fraction(y: float) -> float:
    """E1(y) for y > 1 by the modified Lentz algorithm."""
    b = y + 1.0
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, DEFAULTS.EI_CONTINUED_FRACTION_MAX_ITER + 1):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    else:
        logger.warning("E1 continued fraction did not converge", extra={"y": y})
    return h * math.exp(-y)


def exp_integral(x: float) -> float:
    """Standard Ei(x) for x != 0.

    Power series for -1 <= x <= 40, the continued fraction of E1 for x < -1
    and the asymptotic series for x > 40.
    """
    _check_argument(x)
    if x < -DEFAULTS.EI_SERIES_NEGATIVE_LIMIT:
        return -_e1_continued_fraction(-x)
    if x <= DEFAULTS.EI_ASYMPTOTIC_THRESHOLD:
        return _power_series(x)
    return _asymptotic_series(x)


def _integrand(t: float) -> float:
    return math.exp(t) / t


def exp_integral_oracle(x: float) -> float:
    """Ei(x) by adaptive quadrature, independent of :func:`exp_integral`.

    For x > 0 the singular part is integrated with the Cauchy principal-value
    weight on [-1, x].
    """
    _check_argument(x)
    options = {
        "epsabs": 0.0,
        "epsrel": DEFAULTS.EI_ORACLE_EPSREL,
        "limit": DEFAULTS.EI_ORACLE_LIMIT,
    }
    if x < 0.0:
        value, _ = integrate.quad(_integrand, -math.inf, x, **options)
        return float(value)
    tail, _ = integrate.quad(_integrand, -math.inf, -1.0, **options)
    principal, _ = integrate.quad(
        math.exp, -1.0, x, weight="cauchy", wvar=0.0, **options
    )
    return float(tail + principal)
