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
"""Utility functions for exact values, rounding and hashing."""

from __future__ import annotations

import hashlib
import json
from decimal import ROUND_HALF_UP, Decimal, localcontext
from fractions import Fraction
from typing import Any


def compute_hash(data: bytes) -> str:
    """Compute SHA-256 hash of raw bytes.

    Args:
        data: Raw bytes to hash.

    Returns:
        64-character lowercase hex string of the SHA-256 digest.
    """
    return hashlib.sha256(data).hexdigest()


def compute_json_hash(obj: Any) -> str:
    """Compute SHA-256 hash of the canonical JSON form of ``obj``.

    Keys are sorted and separators are compact, so equal documents hash
    equally regardless of how they were built.
    """
    canonical = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return compute_hash(canonical.encode("utf-8"))


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"``, an integer or a finite decimal string exactly.

    Raises:
        ValueError: If ``text`` is not a rational literal.
    """
    if isinstance(text, bool):
        raise ValueError(f"Not a rational number: {text!r}")
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"Not a rational number: {text!r}") from exc


def rounded_power(base: int, exponent: Fraction, precision: int = 50) -> int:
    """Round ``base ** exponent`` to the nearest integer, ties rounded up.

    The power is evaluated in ``precision``-digit decimal arithmetic (exactly
    for nonnegative integral exponents). Only integer parameters are chosen
    this way; certified quantities never go through it.

    Raises:
        ValueError: If ``base`` is not positive.
    """
    if base <= 0:
        raise ValueError(f"Base must be positive, got {base}")
    if exponent.denominator == 1 and exponent >= 0:
        return base**exponent.numerator
    with localcontext() as ctx:
        # Integer digits of the result come on top of the requested precision.
        ctx.prec = precision + len(str(base)) * (abs(int(exponent)) + 1)
        power = Decimal(base) ** (
            Decimal(exponent.numerator) / Decimal(exponent.denominator)
        )
        return int(power.quantize(Decimal(1), rounding=ROUND_HALF_UP))


def format_real(value: float, precision: int) -> str:
    """Format a real as a fixed-point decimal string with ``precision`` digits."""
    text = f"{value:.{precision}f}"
    # No negative zero.
    if float(text) == 0.0:
        text = f"{0.0:.{precision}f}"
    return text
