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
"""Discriminants and the existence bound for stable bundles.

With ``L = a L0`` and ``c1 = b L0`` the existence bound for an ``L``-stable
rank ``r`` bundle with Chern classes ``(c1, c2)`` reads::

    alpha = (r-1) [1 + M + 4 (r-1)^2 L^2] + (r-1) c1.L - r(r-1)/2 L^2
    M     = max(pg, h0(O_S(rL - c1 + K_S)))

and every ``c2 >= alpha`` is realized, provided ``r L^2 > K_S . L``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from largefam.errors import PreconditionError
from largefam.schema import encode_rational
from largefam.surface_lattice import (
    SurfaceInvariants,
    h0_adjoint_twist,
    require_valid,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChernData:
    """Rank and Chern numbers of a candidate bundle.

    Attributes:
        r: Rank.
        a: Polarization multiple, ``L = a L0``.
        b: First Chern multiple, ``c1 = b L0``.
        c2: Second Chern number; ``None`` when it is to be determined.
    """

    r: int
    a: int
    b: int
    c2: int | None = None

    @property
    def c(self) -> int:
        """The adjoint-twist multiple ``r a - b``."""
        return self.r * self.a - self.b

    def check(self) -> None:
        """Raise ``PreconditionError`` unless ``r >= 2``, ``a >= 1``, ``c >= 1``."""
        if self.r < 2:
            raise PreconditionError(f"r = {self.r} < 2: the bound needs rank >= 2")
        if self.a < 1:
            raise PreconditionError(f"a = {self.a} < 1: L = aL0 must be ample")
        if self.c < 1:
            raise PreconditionError(
                f"ra - b = {self.c} < 1: h0(rL - c1 + K_S) is only exact "
                "for an ample twist"
            )


@dataclass(frozen=True)
class BoundReport:
    """Existence bound for one ``(r, a, b)``.

    Attributes:
        alpha: Exact bound.
        alpha_ceiling: Least integer ``c2`` with ``c2 >= alpha``.
        precondition_ok: Whether ``r L^2 > K_S . L``.
        max_term: ``max(pg, h0(O_S(rL - c1 + K_S)))``.
    """

    alpha: Fraction
    alpha_ceiling: int
    precondition_ok: bool
    max_term: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "alpha": encode_rational(self.alpha),
            "alpha_ceiling": self.alpha_ceiling,
            "precondition_ok": self.precondition_ok,
            "max_term": self.max_term,
        }


def discriminant(r: int, c1_sq: int, c2: int) -> int:
    """``Delta = 2 r c2 - (r-1) c1^2``.

    Raises:
        PreconditionError: If ``r < 1``.
    """
    if r < 1:
        raise PreconditionError(f"r = {r} < 1: rank must be positive")
    return 2 * r * c2 - (r - 1) * c1_sq


def slope_precondition(inv: SurfaceInvariants, r: int, a: int) -> bool:
    """Whether ``r L^2 > K_S . L`` for ``L = a L0``."""
    return r * a * a * inv.e > a * inv.k


def rescale_for_precondition(inv: SurfaceInvariants, r: int, a: int = 1) -> int:
    """Least multiple ``a' >= a`` such that ``r (a' L0)^2 > K_S . a' L0``.

    Raises:
        PreconditionError: If ``r < 2`` or ``a < 1``.
    """
    if r < 2 or a < 1:
        raise PreconditionError(f"r = {r}, a = {a}: need r >= 2 and a >= 1")
    # r a e > k  <=>  a > k / (r e)
    return max(a, inv.k // (r * inv.e) + 1)


def chern_numbers(inv: SurfaceInvariants, cd: ChernData) -> dict[str, int]:
    """Intersection numbers ``c1^2``, ``c1 . L`` and ``L^2`` of ``cd``."""
    return {
        "c1_sq": cd.b * cd.b * inv.e,
        "c1_dot_l": cd.a * cd.b * inv.e,
        "l_sq": cd.a * cd.a * inv.e,
    }


def li_qin_alpha(inv: SurfaceInvariants, cd: ChernData) -> BoundReport:
    """Existence bound for ``cd`` on ``inv``.

    The slope precondition is reported in ``precondition_ok`` but not
    enforced, so a caller can see how rescaling ``a`` restores it.

    Raises:
        PreconditionError: If ``inv`` is invalid or ``cd`` violates
            ``r >= 2``, ``a >= 1``, ``ra - b >= 1``.
    """
    require_valid(inv)
    cd.check()
    r, a, b = cd.r, cd.a, cd.b
    l_sq = a * a * inv.e
    max_term = max(inv.pg, h0_adjoint_twist(inv, cd.c))
    alpha = (
        (r - 1) * (1 + max_term + 4 * (r - 1) ** 2 * l_sq)
        + (r - 1) * a * b * inv.e
        - Fraction(r * (r - 1), 2) * l_sq
    )
    report = BoundReport(
        alpha=alpha,
        alpha_ceiling=math.ceil(alpha),
        precondition_ok=slope_precondition(inv, r, a),
        max_term=max_term,
    )
    logger.debug("alpha(r=%d, a=%d, b=%d) = %s", r, a, b, alpha)
    return report


def min_c2(inv: SurfaceInvariants, r: int, a: int, b: int) -> int:
    """Least integer ``c2`` for which the existence bound applies.

    Raises:
        PreconditionError: As for ``li_qin_alpha``.
    """
    return li_qin_alpha(inv, ChernData(r=r, a=a, b=b)).alpha_ceiling


def dry_defect(inv: SurfaceInvariants, r: int, c1_sq: int, c2: int) -> Fraction:
    """``2 r c2 - (r-1) c1^2 - r^2 c2(S) / 12``; negative values violate the
    improved Bogomolov inequality.

    Raises:
        PreconditionError: If the Euler number of the surface is unknown or
            ``r < 1``.
    """
    if inv.euler_c2 is None:
        raise PreconditionError(
            "c2(S) unknown: the improved Bogomolov inequality needs the "
            "topological Euler number"
        )
    return discriminant(r, c1_sq, c2) - Fraction(r * r * inv.euler_c2, 12)
