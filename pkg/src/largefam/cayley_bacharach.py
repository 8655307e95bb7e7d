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
"""Cayley-Bacharach checks for reduced 0-cycles in the projective plane.

A Serre extension of ``O(l) (x) I_Z`` by ``O(l')`` on ``P^2`` is locally free
iff ``Z`` has the Cayley-Bacharach property for plane curves of degree
``d = l - l' - 3``: every such curve through all points of ``Z`` but one
passes through the last one. For a direct sum of twisted ideal sheaves the
property is required factor by factor.

Forms of degree ``d`` are coefficient vectors over the monomial basis; the
forms vanishing on a point set are the kernel of its evaluation matrix, which
is computed in exact rational arithmetic with sympy.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Any, Iterable, Sequence

import sympy

from largefam.errors import PreconditionError
from largefam.utils import parse_rational

logger = logging.getLogger(__name__)

ORACLE_MAX_POINTS = 12
ORACLE_MAX_DEGREE = 5


@dataclass(frozen=True)
class ProjectivePoint:
    """A rational point of ``P^2``, scaled so its last nonzero coordinate is 1."""

    x: Fraction
    y: Fraction
    z: Fraction

    def __post_init__(self) -> None:
        coords = [Fraction(v) for v in (self.x, self.y, self.z)]
        pivot = next((v for v in reversed(coords) if v != 0), None)
        if pivot is None:
            raise PreconditionError("(0 : 0 : 0) is not a projective point")
        for name, value in zip(("x", "y", "z"), coords):
            object.__setattr__(self, name, value / pivot)

    @property
    def coordinates(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.x, self.y, self.z)

    def __str__(self) -> str:
        return f"({self.x} : {self.y} : {self.z})"


@dataclass(frozen=True)
class ZeroCycle:
    """A reduced 0-cycle: distinct points, kept in insertion order."""

    points: tuple[ProjectivePoint, ...] = ()

    def __post_init__(self) -> None:
        points = tuple(self.points)
        if len(set(points)) != len(points):
            raise PreconditionError("a reduced 0-cycle has pairwise distinct points")
        object.__setattr__(self, "points", points)

    def __len__(self) -> int:
        return len(self.points)

    def without(self, point: ProjectivePoint) -> ZeroCycle:
        return ZeroCycle(tuple(p for p in self.points if p != point))


@dataclass(frozen=True)
class CBQuery:
    """Cayley-Bacharach question for ``cycle`` against plane curves of degree ``d``."""

    cycle: ZeroCycle
    d: int


def make_cycle(coords: Iterable[Sequence[Any]]) -> ZeroCycle:
    """Build a cycle from coordinate triples (ints, Fractions or ``"p/q"``)."""
    points = []
    for triple in coords:
        if len(triple) != 3:
            raise ValueError(f"Expected a coordinate triple, got {triple!r}")
        points.append(ProjectivePoint(*(parse_rational(v) for v in triple)))
    return ZeroCycle(tuple(points))


def grid_cycle(k: int) -> ZeroCycle:
    """The ``k x k`` grid ``{(i : j : 1)}``, cut out by two degree-``k`` forms."""
    return make_cycle((i, j, 1) for i in range(k) for j in range(k))


def cycle_from_text(text: str) -> ZeroCycle:
    """Parse the JSON cycle format: a list of coordinate triples.

    Raises:
        ValueError: On malformed input or a non-reduced cycle.
    """
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("A cycle file holds a JSON list of coordinate triples")
    return make_cycle(data)


def cycle_to_text(cycle: ZeroCycle) -> str:
    """Serialize a cycle; integers stay integers, other rationals become ``"p/q"``."""

    def encode(v: Fraction) -> int | str:
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    return json.dumps([[encode(v) for v in p.coordinates] for p in cycle.points]) + "\n"


def monomials(d: int) -> list[tuple[int, int, int]]:
    """Exponent vectors of the degree-``d`` monomials in ``x, y, z``."""
    if d < 0:
        return []
    return [(i, j, d - i - j) for i in range(d, -1, -1) for j in range(d - i, -1, -1)]


def _evaluate(point: ProjectivePoint, exps: tuple[int, int, int]) -> sympy.Rational:
    value = Fraction(1)
    for coord, power in zip(point.coordinates, exps):
        value *= coord**power
    return sympy.Rational(value.numerator, value.denominator)


def evaluation_matrix(points: Sequence[ProjectivePoint], d: int) -> sympy.Matrix:
    """Rows are points, columns degree-``d`` monomials."""
    basis = monomials(d)
    return sympy.Matrix(
        len(points), len(basis), [_evaluate(p, mono) for p in points for mono in basis]
    )


def vanishing_dim(cycle: ZeroCycle, d: int) -> int:
    """Dimension of the space of degree-``d`` forms vanishing on ``cycle``."""
    if d < 0:
        return 0
    total = comb(d + 2, 2)
    if not cycle.points:
        return total
    return total - evaluation_matrix(cycle.points, d).rank()


def satisfies_cb(query: CBQuery) -> bool:
    """Cayley-Bacharach property, by comparing kernel dimensions.

    Every form through ``Z - {p}`` vanishes at ``p`` exactly when dropping
    ``p`` does not enlarge the space of forms vanishing on the cycle.
    """
    if query.d < 0:
        return True
    full = vanishing_dim(query.cycle, query.d)
    for point in query.cycle.points:
        if vanishing_dim(query.cycle.without(point), query.d) != full:
            logger.debug("CB fails at %s in degree %d", point, query.d)
            return False
    return True


def cb_oracle(query: CBQuery) -> bool:
    """Cayley-Bacharach property, by evaluating a kernel basis at each point.

    Raises:
        PreconditionError: For more than 12 points or degree above 5.
    """
    if len(query.cycle) > ORACLE_MAX_POINTS or query.d > ORACLE_MAX_DEGREE:
        raise PreconditionError(
            f"oracle limited to {ORACLE_MAX_POINTS} points and degree "
            f"{ORACLE_MAX_DEGREE}"
        )
    if query.d < 0:
        return True
    basis = monomials(query.d)
    for point in query.cycle.points:
        rest = query.cycle.without(point).points
        if rest:
            kernel = evaluation_matrix(rest, query.d).nullspace()
        else:
            kernel = [sympy.eye(len(basis)).col(i) for i in range(len(basis))]
        at_point = [_evaluate(point, mono) for mono in basis]
        for form in kernel:
            if sum(coef * val for coef, val in zip(form, at_point)) != 0:
                return False
    return True


def cb_diagnostics(query: CBQuery) -> dict[str, Any]:
    """Kernel dimensions behind ``satisfies_cb``, for reporting."""
    full = vanishing_dim(query.cycle, query.d)
    failing = [
        str(p)
        for p in query.cycle.points
        if query.d >= 0 and vanishing_dim(query.cycle.without(p), query.d) != full
    ]
    return {
        "d": query.d,
        "points": len(query.cycle),
        "forms": comb(query.d + 2, 2) if query.d >= 0 else 0,
        "vanishing_dim": full,
        "failing_points": failing,
        "satisfied": not failing,
    }


def serre_degree(l_i: int, l_prime: int) -> int:
    """Degree of the curves governing local freeness of a plane Serre extension."""
    return l_i - l_prime - 3


def cb_for_direct_sum(
    cycles: Sequence[ZeroCycle], l_list: Sequence[int], l_prime: int
) -> bool:
    """Whether ``Ext^1(sum O(l_i) (x) I_{Z_i}, O(l'))`` has a locally free member.

    Raises:
        PreconditionError: If ``cycles`` and ``l_list`` differ in length or
            are empty.
    """
    if len(cycles) != len(l_list):
        raise PreconditionError(
            f"{len(cycles)} cycles but {len(l_list)} twists: one twist per cycle"
        )
    if not cycles:
        raise PreconditionError("a direct sum needs at least one summand")
    return all(
        satisfies_cb(CBQuery(cycle, serre_degree(l_i, l_prime)))
        for cycle, l_i in zip(cycles, l_list)
    )
