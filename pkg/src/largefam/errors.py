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
"""Exception types shared by all largefam modules."""

from __future__ import annotations


class PreconditionError(ValueError):
    """An input violates a mathematical precondition of an operation.

    Attributes:
        condition: Short description of the violated condition, suitable for
            a one-line diagnostic (e.g. ``"t <= 4s: the large-family
            construction requires t > 4s"``).
    """

    def __init__(self, condition: str) -> None:
        super().__init__(condition)
        self.condition = condition


class ScheduleError(PreconditionError):
    """Schedule construction failed at a specific index ``m``."""

    def __init__(self, m: int, condition: str) -> None:
        super().__init__(f"m={m}: {condition}")
        self.m = m


class InvariantError(ArithmeticError):
    """A closed formula produced a value its invariants rule out."""


class CertificateFormatError(ValueError):
    """A certificate document is malformed.

    Attributes:
        diagnostics: One entry per offending field.
    """

    def __init__(self, diagnostics: list[str]) -> None:
        super().__init__("; ".join(diagnostics))
        self.diagnostics = diagnostics
