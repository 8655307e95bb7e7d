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
"""Common JSON document envelope and exact value encoding.

Every file written by largefam is a JSON object with a ``format`` tag, a
``metadata`` block and a format-specific body. Integers are written as JSON
integers of arbitrary length, rationals as ``[numerator, denominator]`` pairs
in lowest terms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any

TOOL_NAME = "largefam"

BOUND_FORMAT = "largefam.bound/1"
SCHEDULE_FORMAT = "largefam.schedule/1"
CERTIFICATE_FORMAT = "largefam.certificate/1"
VALIDATION_FORMAT = "largefam.validation/1"
CB_FORMAT = "largefam.cb/1"
DRY_FORMAT = "largefam.dry/1"


def encode_rational(value: Fraction | int) -> list[int]:
    """Encode a rational as ``[numerator, denominator]``."""
    value = Fraction(value)
    return [value.numerator, value.denominator]


def decode_rational(obj: Any) -> Fraction:
    """Decode a ``[numerator, denominator]`` pair.

    Raises:
        ValueError: If ``obj`` is not a pair of integers with nonzero
            denominator.
    """
    if (
        not isinstance(obj, list)
        or len(obj) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in obj)
    ):
        raise ValueError(f"Expected [numerator, denominator], got {obj!r}")
    if obj[1] == 0:
        raise ValueError("Rational with zero denominator")
    return Fraction(obj[0], obj[1])


def decode_int(obj: Any) -> int:
    """Decode a JSON integer, rejecting booleans and floats."""
    if not isinstance(obj, int) or isinstance(obj, bool):
        raise ValueError(f"Expected an integer, got {obj!r}")
    return obj


@dataclass
class Metadata:
    """Document metadata. ``timestamp`` is ignored by every checker."""

    tool: str
    version: str
    timestamp: str

    @classmethod
    def create(cls) -> Metadata:
        from largefam import __version__

        return cls(
            tool=TOOL_NAME,
            version=__version__,
            timestamp=datetime.now(timezone.utc).isoformat(),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "tool": self.tool,
            "version": self.version,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Metadata:
        return cls(
            tool=str(data.get("tool", "")),
            version=str(data.get("version", "")),
            timestamp=str(data.get("timestamp", "")),
        )


@dataclass
class Document:
    """A tagged JSON document."""

    format: str
    body: dict[str, Any] = field(default_factory=dict)
    metadata: Metadata | None = None

    def to_dict(self) -> dict[str, Any]:
        result: dict[str, Any] = {"format": self.format}
        if self.metadata is not None:
            result["metadata"] = self.metadata.to_dict()
        result.update(self.body)
        return result

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str, expected_format: str) -> Document:
        """Parse a document and check its format tag.

        Raises:
            ValueError: If the text is not a JSON object of the expected
                format.
        """
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"Invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ValueError("Document must be a JSON object")
        fmt = data.pop("format", None)
        if fmt != expected_format:
            raise ValueError(f"Expected format {expected_format!r}, got {fmt!r}")
        raw_metadata = data.pop("metadata", None)
        metadata = (
            Metadata.from_dict(raw_metadata) if isinstance(raw_metadata, dict) else None
        )
        return cls(format=fmt, body=data, metadata=metadata)
