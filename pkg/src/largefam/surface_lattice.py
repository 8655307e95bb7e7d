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
"""Numerical invariants of a polarized surface.

Only the rank-one sublattice spanned by the polarization ``L0`` is modeled:
a class ``n L0`` pairs with ``m L0`` to ``n m e`` and with the canonical class
to ``n k``. Cohomology of adjoint twists ``n L0 + K_S`` with ``n >= 1`` equals
the Riemann-Roch value, since Kodaira vanishing kills ``h^1`` and ``h^2``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import comb
from pathlib import Path
from typing import Any

from largefam.errors import InvariantError, PreconditionError

logger = logging.getLogger(__name__)

CATALOG_FORMAT = "largefam.catalog/1"


@dataclass(frozen=True)
class SurfaceInvariants:
    """Numerical data of a surface polarized by a very ample ``L0``.

    Attributes:
        e: Self-intersection ``L0^2``.
        k: Intersection ``K_S . L0``.
        chi: Euler characteristic of the structure sheaf.
        pg: Geometric genus.
        q: Irregularity.
        ksq: ``K_S^2`` if known.
        euler_c2: Topological Euler number if known.
        name: Catalog name, empty for inline data.
    """

    e: int
    k: int
    chi: int
    pg: int
    q: int
    ksq: int | None = None
    euler_c2: int | None = None
    name: str = ""

    def to_dict(self) -> dict[str, Any]:
        result: dict[str, Any] = {
            "e": self.e,
            "k": self.k,
            "chi": self.chi,
            "pg": self.pg,
            "q": self.q,
        }
        if self.ksq is not None:
            result["ksq"] = self.ksq
        if self.euler_c2 is not None:
            result["euler_c2"] = self.euler_c2
        if self.name:
            result["name"] = self.name
        return result

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SurfaceInvariants:
        """Build invariants from a catalog record.

        Raises:
            ValueError: If a required key is missing or not an integer.
        """
        values: dict[str, int | None] = {}
        for key in ("e", "k", "chi", "pg", "q", "ksq", "euler_c2"):
            raw = data.get(key)
            if raw is None:
                if key in ("ksq", "euler_c2"):
                    values[key] = None
                    continue
                raise ValueError(f"Surface record is missing {key!r}")
            if not isinstance(raw, int) or isinstance(raw, bool):
                raise ValueError(f"Surface field {key!r} must be an integer")
            values[key] = raw
        return cls(
            e=values["e"],  # type: ignore[arg-type]
            k=values["k"],  # type: ignore[arg-type]
            chi=values["chi"],  # type: ignore[arg-type]
            pg=values["pg"],  # type: ignore[arg-type]
            q=values["q"],  # type: ignore[arg-type]
            ksq=values["ksq"],
            euler_c2=values["euler_c2"],
            name=str(data.get("name", "")),
        )


@dataclass(frozen=True)
class DivisorMultiple:
    """The class ``n L0``."""

    n: int


def validate(inv: SurfaceInvariants) -> list[str]:
    """Return a description of every violated invariant (empty iff valid)."""
    violations: list[str] = []
    if inv.e < 1:
        violations.append(f"L0^2 = {inv.e} must be positive (L0 very ample)")
    if (inv.e + inv.k) % 2 != 0:
        violations.append(
            f"parity violation: e + k = {inv.e + inv.k} is odd "
            "(adjunction forces L0^2 + K.L0 even)"
        )
    if inv.pg < 0:
        violations.append(f"pg = {inv.pg} must be nonnegative")
    if inv.q < 0:
        violations.append(f"q = {inv.q} must be nonnegative")
    if inv.chi != 1 - inv.q + inv.pg:
        violations.append(
            f"chi = {inv.chi} differs from 1 - q + pg = {1 - inv.q + inv.pg}"
        )
    if inv.euler_c2 is not None and inv.euler_c2 < 0:
        violations.append(f"c2(S) = {inv.euler_c2} must be nonnegative")
    if inv.ksq is not None and inv.euler_c2 is not None:
        if 12 * inv.chi != inv.ksq + inv.euler_c2:
            violations.append(
                f"Noether violation: 12 chi = {12 * inv.chi} differs from "
                f"K^2 + c2(S) = {inv.ksq + inv.euler_c2}"
            )
    return violations


def require_valid(inv: SurfaceInvariants) -> None:
    """Raise ``PreconditionError`` listing every violation of ``inv``."""
    violations = validate(inv)
    if violations:
        raise PreconditionError("invalid surface invariants: " + "; ".join(violations))


def pair(inv: SurfaceInvariants, d1: DivisorMultiple, d2: DivisorMultiple) -> int:
    """Intersection number ``(n1 L0) . (n2 L0)``."""
    return d1.n * d2.n * inv.e


def chi_adjoint_twist(inv: SurfaceInvariants, n: int) -> int:
    """Riemann-Roch value ``chi(O_S(n L0 + K_S)) = chi + (n^2 e + n k) / 2``.

    Raises:
        InvariantError: If the value is not an integer, which happens only
            for data violating the parity invariant.
    """
    value = inv.chi + Fraction(n * n * inv.e + n * inv.k, 2)
    if value.denominator != 1:
        raise InvariantError(
            f"chi(O_S({n}L0 + K_S)) = {value} is not an integer; "
            f"e + k = {inv.e + inv.k} must be even"
        )
    return value.numerator


def h0_adjoint_twist(inv: SurfaceInvariants, n: int) -> int:
    """``h^0(O_S(n L0 + K_S))`` for ``n >= 1``.

    Raises:
        PreconditionError: If ``n < 1`` (no vanishing theorem applies).
        InvariantError: If the Riemann-Roch value is negative.
    """
    if n < 1:
        raise PreconditionError(
            f"n = {n} < 1: h0 of nL0 + K_S is only computed for ample nL0"
        )
    value = chi_adjoint_twist(inv, n)
    if value < 0:
        raise InvariantError(
            f"h0(O_S({n}L0 + K_S)) = {value} < 0; surface data are inconsistent"
        )
    return value


def hypersurface(d: int) -> SurfaceInvariants:
    """Invariants of a smooth degree-``d`` surface in ``P^3``, ``L0 = O(1)``.

    Raises:
        PreconditionError: If ``d < 1``.
    """
    if d < 1:
        raise PreconditionError(f"degree {d} < 1: no surface of that degree")
    pg = comb(d - 1, 3)
    return SurfaceInvariants(
        e=d,
        k=d * (d - 4),
        chi=1 + pg,
        pg=pg,
        q=0,
        ksq=d * (d - 4) ** 2,
        euler_c2=d * (d * d - 4 * d + 6),
        name=f"hypersurface-{d}",
    )


def abelian_surface(e: int) -> SurfaceInvariants:
    """Invariants of an abelian surface polarized with ``L0^2 = e``.

    Raises:
        PreconditionError: If ``e`` is not a positive even integer.
    """
    if e < 2 or e % 2:
        raise PreconditionError(
            f"L0^2 = {e}: an abelian surface polarization has positive even square"
        )
    return SurfaceInvariants(
        e=e, k=0, chi=0, pg=1, q=2, ksq=0, euler_c2=0, name=f"abelian-{e}"
    )


def parse_inline(text: str) -> SurfaceInvariants:
    """Parse ``"e,k,chi,pg,q[,ksq,euler_c2]"``.

    Raises:
        ValueError: On a malformed field list.
    """
    fields = [f.strip() for f in text.split(",")]
    if len(fields) not in (5, 7):
        raise ValueError(
            "Inline invariants take 5 or 7 comma-separated integers: "
            "e,k,chi,pg,q[,ksq,euler_c2]"
        )
    try:
        numbers = [int(f) for f in fields]
    except ValueError as exc:
        raise ValueError(f"Inline invariants must be integers: {text!r}") from exc
    ksq, euler_c2 = (numbers[5], numbers[6]) if len(numbers) == 7 else (None, None)
    return SurfaceInvariants(*numbers[:5], ksq=ksq, euler_c2=euler_c2)


def load_catalog(path: str | Path | None = None) -> dict[str, SurfaceInvariants]:
    """Load a surface catalog, by default the one shipped with the package.

    Raises:
        ValueError: If the file is not a catalog document.
    """
    if path is None:
        text = resources.files("largefam").joinpath("data/surfaces.json").read_text()
    else:
        text = Path(path).read_text()
    data = json.loads(text)
    if not isinstance(data, dict) or data.get("format") != CATALOG_FORMAT:
        raise ValueError(f"Not a surface catalog (expected {CATALOG_FORMAT!r})")
    catalog: dict[str, SurfaceInvariants] = {}
    for record in data.get("surfaces", []):
        inv = SurfaceInvariants.from_dict(record)
        if not inv.name:
            raise ValueError("Catalog record without a name")
        catalog[inv.name] = inv
    logger.debug("Loaded %d catalog surfaces", len(catalog))
    return catalog


def get_surface(
    name: str, catalog: dict[str, SurfaceInvariants] | None = None
) -> SurfaceInvariants:
    """Look up a surface by catalog name.

    Besides catalog entries, ``hypersurface-D`` and ``abelian-E`` are
    generated from closed formulas.

    Raises:
        KeyError: If the name is unknown.
    """
    if catalog is None:
        catalog = load_catalog()
    if name in catalog:
        return catalog[name]
    prefix, _, suffix = name.rpartition("-")
    if suffix.isdigit():
        if prefix == "hypersurface":
            return hypersurface(int(suffix))
        if prefix == "abelian":
            return abelian_surface(int(suffix))
    raise KeyError(f"Unknown surface {name!r}; known: {', '.join(sorted(catalog))}")
