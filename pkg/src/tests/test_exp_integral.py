"""
Tests for the exponential integral.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from scale_dynamics.errors import DomainError
from scale_dynamics.exp_integral import exp_integral, exp_integral_oracle
from shared import defaults as DEFAULTS

REFERENCE_POINTS = [-50.0, -5.0, -1.0, -0.3, 0.5, 1.0, 2.0, 5.0, 10.0, 39.0, 41.0, 120.0]


class TestExpIntegral:
    @pytest.mark.parametrize("x", REFERENCE_POINTS)
    def test_matches_scipy(self, x: float) -> None:
        assert exp_integral(x) == pytest.approx(float(special.expi(x)), rel=1e-12)

    @pytest.mark.parametrize("x", [-5.0, -1.0, 0.5, 1.0, 2.0, 5.0, 10.0])
    def test_matches_quadrature(self, x: float) -> None:
        assert exp_integral(x) == pytest.approx(exp_integral_oracle(x), rel=1e-10)

    def test_known_values(self) -> None:
        assert exp_integral(1.0) == pytest.approx(1.8951178163559368, rel=1e-14)
        assert exp_integral(-1.0) == pytest.approx(-0.21938393439552029, rel=1e-14)

    @pytest.mark.parametrize("x", [0.0, -0.0, math.nan])
    def test_singular_argument(self, x: float) -> None:
        with pytest.raises(DomainError):
            exp_integral(x)
        with pytest.raises(DomainError):
            exp_integral_oracle(x)

    def test_continuity_at_asymptotic_threshold(self) -> None:
        threshold = DEFAULTS.EI_ASYMPTOTIC_THRESHOLD
        below = exp_integral(float(np.nextafter(threshold, 0.0)))
        above = exp_integral(float(np.nextafter(threshold, math.inf)))
        assert abs(above - below) / abs(below) < 1e-11

    def test_continuity_at_continued_fraction_threshold(self) -> None:
        limit = -DEFAULTS.EI_SERIES_NEGATIVE_LIMIT
        inside = exp_integral(limit)
        outside = exp_integral(float(np.nextafter(limit, -math.inf)))
        assert abs(outside - inside) / abs(inside) < 1e-11

    def test_small_argument_is_logarithmic(self) -> None:
        x = 1e-12
        assert exp_integral(x) == pytest.approx(0.5772156649015329 + math.log(x), rel=1e-12)

    @given(x=st.floats(min_value=1e-3, max_value=600.0))
    @settings(max_examples=100, deadline=None)
    def test_increasing_for_positive_argument(self, x: float) -> None:
        assert exp_integral(x * 1.01) > exp_integral(x)

    @given(x=st.floats(min_value=-600.0, max_value=-1e-3))
    @settings(max_examples=100, deadline=None)
    def test_decreasing_for_negative_argument(self, x: float) -> None:
        assert exp_integral(x * 0.99) <= exp_integral(x)
