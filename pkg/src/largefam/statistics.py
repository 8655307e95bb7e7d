# Copyright 2026 The largefam Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================
"""Statistical fits for power-law growth of exact integer sequences."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np


def log_exact(value: int | float) -> float:
    """Natural logarithm of a positive integer of any size.

    ``math.log`` accepts arbitrarily large Python integers, unlike
    ``numpy.log`` which would overflow on conversion to float64.

    Raises:
        ValueError: If ``value`` is not positive.
    """
    if value <= 0:
        raise ValueError(f"Logarithm of non-positive value {value}")
    return math.log(value)


def fit_loglog_slope(
    xs: Sequence[int | float], log_ys: Sequence[float]
) -> tuple[float, float]:
    """Least-squares line through ``(log x, log y)``.

    Args:
        xs: Positive abscissae.
        log_ys: Natural logarithms of the ordinates.

    Returns:
        Tuple of (slope, intercept).

    Raises:
        ValueError: If fewer than two points or all abscissae coincide.
    """
    if len(xs) != len(log_ys):
        raise ValueError("xs and log_ys must have the same length")
    if len(xs) < 2:
        raise ValueError("Cannot fit a line through fewer than two points")
    log_xs = np.array([log_exact(x) for x in xs], dtype=np.float64)
    if np.ptp(log_xs) == 0.0:
        raise ValueError("Cannot fit a line through a single abscissa")
    slope, intercept = np.polyfit(log_xs, np.asarray(log_ys, dtype=np.float64), 1)
    return float(slope), float(intercept)


def power_law_ratios(
    xs: Sequence[int], ys: Sequence[int], exponent: float
) -> np.ndarray:
    """Return ``y / x**exponent`` for every point, evaluated through logs."""
    log_ratios = np.array(
        [log_exact(y) - exponent * log_exact(x) for x, y in zip(xs, ys)],
        dtype=np.float64,
    )
    return np.exp(log_ratios)


def extrapolate_crossing(slope: float, intercept: float, log_level: float) -> float:
    """Abscissa where the fitted line ``intercept + slope log x`` hits a level.

    Returns ``math.inf`` when the line never reaches the level going right.
    """
    if slope >= 0.0:
        return math.inf if intercept >= log_level else 0.0
    return math.exp((log_level - intercept) / slope)
