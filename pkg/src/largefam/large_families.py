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
"""Parameter schedules of large families and verification of their order.

A schedule fixes ``c = r a - b`` and lets the rank and the polarization
multiple grow as ``r_m ~ m^s`` and ``a_m ~ m^x``. Every member takes the
least second Chern number allowed by the existence bound, which gives
``Delta_m ~ 8 r^4 a^2 e ~ m^(4s + 2x)``. The order of the family is
therefore ``(s, t)`` with ``t = 4s + 2x``, and any ``t > 4s`` is reached.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from largefam.errors import PreconditionError, ScheduleError
from largefam.existence_bounds import (
    ChernData,
    discriminant,
    dry_defect,
    li_qin_alpha,
)
from largefam.schema import decode_int, decode_rational, encode_rational
from largefam.statistics import fit_loglog_slope, log_exact, power_law_ratios
from largefam.surface_lattice import SurfaceInvariants, require_valid
from largefam.utils import (
    compute_json_hash,
    format_real,
    parse_rational,
    rounded_power,
)

logger = logging.getLogger(__name__)

DEFAULT_C = 3
DEFAULT_M_MIN = 10
DEFAULT_M_MAX = 200
DEFAULT_TOL_SLOPE = 0.1
DEFAULT_TOL_RATIO = 3.0

TABLE_COLUMNS = ("m", "r", "a", "b", "c2", "delta")


@dataclass(frozen=True)
class FamilyParams:
    """Exponents and index range of a schedule.

    Attributes:
        s: Rank exponent, ``r_m ~ m^s``.
        x: Polarization exponent, ``a_m ~ m^x``.
        c: Fixed value of ``r a - b``.
        m_min: First index.
        m_max: Last index (inclusive).
    """

    s: Fraction
    x: Fraction
    c: int = DEFAULT_C
    m_min: int = DEFAULT_M_MIN
    m_max: int = DEFAULT_M_MAX

    def __post_init__(self) -> None:
        object.__setattr__(self, "s", Fraction(self.s))
        object.__setattr__(self, "x", Fraction(self.x))
        if self.s <= 0:
            raise PreconditionError(f"s = {self.s} <= 0: the rank must grow")
        if self.x <= 0:
            raise PreconditionError(
                f"t = {self.t} <= 4s = {4 * self.s}: "
                "the large-family construction requires t > 4s"
            )
        if self.c < 1:
            raise PreconditionError(f"c = {self.c} < 1: ra - b must be at least 1")
        if self.m_min < 2:
            raise PreconditionError(f"m_min = {self.m_min} < 2")
        if self.m_max <= self.m_min:
            raise PreconditionError(
                f"m_max = {self.m_max} must exceed m_min = {self.m_min}"
            )

    @property
    def t(self) -> Fraction:
        """Discriminant exponent ``4s + 2x``."""
        return 4 * self.s + 2 * self.x

    def to_dict(self) -> dict[str, Any]:
        return {
            "s": encode_rational(self.s),
            "x": encode_rational(self.x),
            "t": encode_rational(self.t),
            "c": self.c,
            "m_min": self.m_min,
            "m_max": self.m_max,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> FamilyParams:
        return cls(
            s=decode_rational(data["s"]),
            x=decode_rational(data["x"]),
            c=decode_int(data["c"]),
            m_min=decode_int(data["m_min"]),
            m_max=decode_int(data["m_max"]),
        )


def family_from_order(
    s: Fraction | str | int,
    t: Fraction | str | int,
    c: int = DEFAULT_C,
    m_min: int = DEFAULT_M_MIN,
    m_max: int = DEFAULT_M_MAX,
) -> FamilyParams:
    """Parameters of a family of order ``(s, t)``.

    Raises:
        PreconditionError: If ``t <= 4s`` or the other parameters are out of
            range.
    """
    s_q, t_q = parse_rational(s), parse_rational(t)
    if t_q <= 4 * s_q:
        raise PreconditionError(
            f"t = {t_q} <= 4s = {4 * s_q}: the large-family construction "
            "requires t > 4s"
        )
    return FamilyParams(s=s_q, x=(t_q - 4 * s_q) / 2, c=c, m_min=m_min, m_max=m_max)


@dataclass(frozen=True)
class FamilyMember:
    """One bundle of the family, described by its numerical data."""

    m: int
    r: int
    a: int
    b: int
    c2: int
    delta: int
    alpha_ceiling: int
    precondition_ok: bool

    def row(self) -> list[int]:
        return [self.m, self.r, self.a, self.b, self.c2, self.delta]


@dataclass
class FamilySchedule:
    """Members of a family indexed by consecutive ``m``."""

    params: FamilyParams
    surface: SurfaceInvariants
    members: list[FamilyMember] = field(default_factory=list)

    def to_table(self) -> dict[str, Any]:
        return {
            "columns": list(TABLE_COLUMNS),
            "rows": [member.row() for member in self.members],
        }

    def digest(self) -> str:
        """SHA-256 of the canonical schedule table."""
        return compute_json_hash(self.to_table())

    def to_dict(self) -> dict[str, Any]:
        return {
            "params": self.params.to_dict(),
            "surface": self.surface.to_dict(),
            "table": self.to_table(),
            "digest": self.digest(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> FamilySchedule:
        """Rebuild a schedule document, recomputing the derived columns.

        Raises:
            ValueError: If the table disagrees with a recomputation: ``r a - b``
                differs from ``params.c``, ``c2`` is not the least admissible
                value, the slope precondition fails, or ``delta`` is wrong.
        """
        params = FamilyParams.from_dict(data["params"])
        surface = SurfaceInvariants.from_dict(data["surface"])
        rows = parse_schedule_table(data["table"])
        members = []
        for m, r, a, b, c2, delta in rows:
            if r * a - b != params.c:
                raise ValueError(f"Row m={m}: r a - b differs from c = {params.c}")
            report = li_qin_alpha(surface, ChernData(r=r, a=a, b=b))
            if c2 != report.alpha_ceiling:
                raise ValueError(
                    f"Row m={m}: c2 = {c2} is not the least admissible value "
                    f"{report.alpha_ceiling}"
                )
            if not report.precondition_ok:
                raise ValueError(f"Row m={m}: r L^2 > K.L fails")
            member = FamilyMember(
                m=m,
                r=r,
                a=a,
                b=b,
                c2=c2,
                delta=delta,
                alpha_ceiling=report.alpha_ceiling,
                precondition_ok=report.precondition_ok,
            )
            if delta != discriminant(r, b * b * surface.e, c2):
                raise ValueError(f"Row m={m}: delta does not match r, b, c2")
            members.append(member)
        schedule = cls(params=params, surface=surface, members=members)
        if "digest" in data and data["digest"] != schedule.digest():
            raise ValueError("Schedule digest does not match its table")
        return schedule


def parse_schedule_table(table: dict[str, Any]) -> list[tuple[int, ...]]:
    """Parse the exported ``{"columns": [...], "rows": [...]}`` table.

    Raises:
        ValueError: If the columns differ from ``TABLE_COLUMNS`` or a row is
            not a list of integers.
    """
    if tuple(table.get("columns", ())) != TABLE_COLUMNS:
        raise ValueError(f"Schedule table columns must be {list(TABLE_COLUMNS)}")
    rows = []
    for row in table.get("rows", []):
        if not isinstance(row, list) or len(row) != len(TABLE_COLUMNS):
            raise ValueError(f"Malformed schedule row {row!r}")
        rows.append(tuple(decode_int(v) for v in row))
    return rows


def _member_at(
    inv: SurfaceInvariants, params: FamilyParams, m: int, r: int, a: int
) -> FamilyMember:
    b = r * a - params.c
    report = li_qin_alpha(inv, ChernData(r=r, a=a, b=b))
    if not report.precondition_ok:
        raise ScheduleError(
            m,
            f"r L^2 = {r * a * a * inv.e} <= K.L = {a * inv.k}: the existence "
            "bound requires r L^2 > K.L; raise x or c",
        )
    c2 = report.alpha_ceiling
    return FamilyMember(
        m=m,
        r=r,
        a=a,
        b=b,
        c2=c2,
        delta=discriminant(r, b * b * inv.e, c2),
        alpha_ceiling=report.alpha_ceiling,
        precondition_ok=True,
    )


def make_schedule(
    inv: SurfaceInvariants, params: FamilyParams, workers: int = 1
) -> FamilySchedule:
    """Build the family ``m_min <= m <= m_max`` on ``inv``.

    ``r_m = max(2, round(m^s))`` made nondecreasing by a running maximum,
    ``a_m = max(1, round(m^x))``, ``b_m = r_m a_m - c`` and ``c2`` the least
    admissible value. Members are independent, so ``workers > 1`` computes
    them concurrently; the result is identical to the sequential one.

    Raises:
        PreconditionError: If ``inv`` is invalid.
        ScheduleError: If the slope precondition fails at some index.
    """
    require_valid(inv)
    indices = range(params.m_min, params.m_max + 1)
    ranks: list[int] = []
    running = 2
    for m in indices:
        running = max(running, rounded_power(m, params.s))
        ranks.append(running)
    multiples = [max(1, rounded_power(m, params.x)) for m in indices]

    def build(job: tuple[int, int, int]) -> FamilyMember:
        return _member_at(inv, params, *job)

    jobs = list(zip(indices, ranks, multiples))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            members = list(pool.map(build, jobs))
    else:
        members = [build(job) for job in jobs]
    logger.info(
        "Built schedule of %d members on %s (s=%s, x=%s, c=%d)",
        len(members),
        inv.name or "inline surface",
        params.s,
        params.x,
        params.c,
    )
    return FamilySchedule(params=params, surface=inv, members=members)


@dataclass(frozen=True)
class OrderVerdict:
    """Outcome of an order check.

    Attributes:
        accepted: Whether both the slope and the ratio spread are in bounds.
        exponent: Exponent tested against.
        slope: Least-squares slope of ``log v`` against ``log m``.
        ratio_min: Least ``v / m^exponent``.
        ratio_max: Greatest ``v / m^exponent``.
        reasons: Why the sequence was rejected, empty when accepted.
    """

    accepted: bool
    exponent: float
    slope: float
    ratio_min: float
    ratio_max: float
    reasons: tuple[str, ...] = ()

    def to_dict(self, precision: int = 6) -> dict[str, Any]:
        return {
            "accepted": self.accepted,
            "exponent": format_real(self.exponent, precision),
            "slope": format_real(self.slope, precision),
            "ratio_min": format_real(self.ratio_min, precision),
            "ratio_max": format_real(self.ratio_max, precision),
            "precision": precision,
            "reasons": list(self.reasons),
        }


def verify_order(
    seq: Sequence[tuple[int, int]],
    t: float | Fraction,
    tol_slope: float = DEFAULT_TOL_SLOPE,
    tol_ratio: float = DEFAULT_TOL_RATIO,
) -> OrderVerdict:
    """Check that ``v_m`` grows like ``m^t`` in both directions.

    Raises:
        PreconditionError: With fewer than 10 points, a multiplicative range
            ``m_max / m_min < 5`` or nonpositive values.
    """
    if len(seq) < 10:
        raise PreconditionError(f"{len(seq)} points: order checks need at least 10")
    ms = [m for m, _ in seq]
    vs = [v for _, v in seq]
    if min(ms) <= 0 or min(vs) <= 0:
        raise PreconditionError("order checks need positive indices and values")
    if max(ms) < 5 * min(ms):
        raise PreconditionError(
            f"index range [{min(ms)}, {max(ms)}] spans less than a factor 5"
        )
    exponent = float(t)
    slope, _ = fit_loglog_slope(ms, [log_exact(v) for v in vs])
    ratios = power_law_ratios(ms, vs, exponent)
    ratio_min, ratio_max = float(ratios.min()), float(ratios.max())
    reasons = []
    if abs(slope - exponent) > tol_slope:
        reasons.append(
            f"slope {slope:.4f} differs from {exponent:.4f} by more than {tol_slope}"
        )
    if ratio_max / ratio_min > tol_ratio:
        reasons.append(
            f"ratio spread {ratio_max / ratio_min:.4f} exceeds {tol_ratio}"
        )
    return OrderVerdict(
        accepted=not reasons,
        exponent=exponent,
        slope=slope,
        ratio_min=ratio_min,
        ratio_max=ratio_max,
        reasons=tuple(reasons),
    )


def leading_term_ratio(inv: SurfaceInvariants, member: FamilyMember) -> Fraction:
    """``Delta / (8 r (r-1)^3 a^2 e)``, exactly.

    Raises:
        PreconditionError: If ``r < 2``.
    """
    if member.r < 2:
        raise PreconditionError(f"r = {member.r} < 2: leading term vanishes")
    r, a = member.r, member.a
    return Fraction(member.delta, 8 * r * (r - 1) ** 3 * a * a * inv.e)


def dry_profile(schedule: FamilySchedule) -> list[Fraction]:
    """Improved-Bogomolov defect of every member, in schedule order.

    Raises:
        PreconditionError: If the surface has no Euler number.
    """
    e = schedule.surface.e
    return [
        dry_defect(schedule.surface, mb.r, mb.b * mb.b * e, mb.c2)
        for mb in schedule.members
    ]
