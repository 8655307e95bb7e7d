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
"""Tests for largefam.utils module."""

from __future__ import annotations

from fractions import Fraction

import pytest

from largefam.utils import (
    compute_hash,
    compute_json_hash,
    format_real,
    parse_rational,
    rounded_power,
)


class TestComputeHash:
    """Tests for compute_hash function."""

    def test_empty_input(self) -> None:
        """SHA-256 of empty bytes."""
        assert (
            compute_hash(b"")
            == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        )

    def test_abc(self) -> None:
        """SHA-256 of b'abc'."""
        assert (
            compute_hash(b"abc")
            == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        )


class TestComputeJsonHash:
    """Tests for compute_json_hash function."""

    def test_canonical_form(self) -> None:
        """Keys are sorted and separators compact."""
        assert compute_json_hash({"b": 1, "a": [2, 3]}) == compute_hash(
            b'{"a":[2,3],"b":1}'
        )

    def test_key_order_irrelevant(self) -> None:
        """Equal mappings hash equally."""
        assert compute_json_hash({"x": 1, "y": 2}) == compute_json_hash(
            {"y": 2, "x": 1}
        )

    def test_big_integers(self) -> None:
        """Integers beyond 64 bits are hashed exactly."""
        assert compute_json_hash([2**100]) != compute_json_hash([2**100 + 1])


class TestParseRational:
    """Tests for parse_rational function."""

    def test_fraction_literal(self) -> None:
        """'p/q' is parsed exactly."""
        assert parse_rational("9/2") == Fraction(9, 2)

    def test_decimal_literal(self) -> None:
        """Finite decimals are exact."""
        assert parse_rational("0.1") == Fraction(1, 10)

    def test_passthrough(self) -> None:
        """Integers and Fractions are accepted as is."""
        assert parse_rational(7) == 7
        assert parse_rational(Fraction(1, 3)) == Fraction(1, 3)

    def test_rejects_bool(self) -> None:
        """Booleans are not numbers here."""
        with pytest.raises(ValueError, match="Not a rational"):
            parse_rational(True)

    def test_rejects_garbage(self) -> None:
        """Non-numeric text and zero denominators are rejected."""
        with pytest.raises(ValueError, match="Not a rational"):
            parse_rational("pi")
        with pytest.raises(ValueError, match="Not a rational"):
            parse_rational("1/0")


class TestRoundedPower:
    """Tests for rounded_power function."""

    def test_integer_exponent_exact(self) -> None:
        """Nonnegative integral exponents are computed exactly."""
        assert rounded_power(10, Fraction(2)) == 100
        assert rounded_power(123456789, Fraction(3)) == 123456789**3

    def test_perfect_roots(self) -> None:
        """Exact roots come back exactly."""
        assert rounded_power(8, Fraction(1, 3)) == 2
        assert rounded_power(16, Fraction(3, 4)) == 8
        assert rounded_power(10**6, Fraction(3, 2)) == 10**9

    def test_rounds_to_nearest(self) -> None:
        """sqrt(2) rounds to 1, sqrt(3) to 2."""
        assert rounded_power(2, Fraction(1, 2)) == 1
        assert rounded_power(3, Fraction(1, 2)) == 2

    def test_ties_round_up(self) -> None:
        """4^(-1/2) = 0.5 rounds up to 1."""
        assert rounded_power(4, Fraction(-1, 2)) == 1

    def test_rejects_nonpositive_base(self) -> None:
        """The base must be positive."""
        with pytest.raises(ValueError, match="positive"):
            rounded_power(0, Fraction(1, 2))


class TestFormatReal:
    """Tests for format_real function."""

    def test_fixed_digits(self) -> None:
        """Values are printed with exactly the declared digits."""
        assert format_real(1 / 3, 6) == "0.333333"
        assert format_real(-0.25, 2) == "-0.25"

    def test_no_negative_zero(self) -> None:
        """Tiny negatives print as zero without a sign."""
        assert format_real(-1e-9, 3) == "0.000"
