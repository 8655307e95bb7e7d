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
"""Tests for largefam.large_families module."""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import pytest

from largefam.errors import PreconditionError, ScheduleError
from largefam.existence_bounds import ChernData, discriminant, dry_defect, li_qin_alpha
from largefam.large_families import (
    FamilyMember,
    FamilyParams,
    FamilySchedule,
    dry_profile,
    family_from_order,
    leading_term_ratio,
    make_schedule,
    parse_schedule_table,
    verify_order,
)
from largefam.surface_lattice import (
    SurfaceInvariants,
    get_surface,
    hypersurface,
    load_catalog,
)

PLANE = get_surface("plane")


def oracle_c2(inv: SurfaceInvariants, r: int, a: int, b: int) -> int:
    """Least c2 >= alpha, re-derived with integer arithmetic only."""
    c = r * a - b
    h0 = inv.chi + (c * c * inv.e + c * inv.k) // 2
    twice_alpha = (
        2 * (r - 1) * (1 + max(inv.pg, h0) + 4 * (r - 1) ** 2 * a * a * inv.e)
        + 2 * (r - 1) * a * b * inv.e
        - r * (r - 1) * a * a * inv.e
    )
    return -(-twice_alpha // 2)


@pytest.fixture(scope="module")
def plane_schedule() -> FamilySchedule:
    return make_schedule(PLANE, family_from_order(1, 5, c=3, m_min=10, m_max=200))


class TestFamilyParams:
    """Tests for FamilyParams and family_from_order."""

    def test_order(self) -> None:
        """t = 4s + 2x."""
        assert FamilyParams(s=1, x=1).t == 6
        assert FamilyParams(s=2, x=Fraction(3, 4)).t == Fraction(19, 2)

    def test_from_order(self) -> None:
        """x = (t - 4s) / 2."""
        params = family_from_order(1, 5)
        assert params.x == Fraction(1, 2)
        assert params.t == 5

    def test_from_order_rational(self) -> None:
        """Orders may be given as rational strings."""
        params = family_from_order("3/2", "13/2")
        assert params.s == Fraction(3, 2)
        assert params.x == Fraction(1, 4)

    def test_rejects_t_equal_4s(self) -> None:
        """t = 4s is outside the construction."""
        with pytest.raises(PreconditionError, match="requires t > 4s"):
            family_from_order(1, 4)
        with pytest.raises(PreconditionError, match="requires t > 4s"):
            FamilyParams(s=1, x=0)

    def test_rejects_bad_range(self) -> None:
        """The index range must be nonempty and start at 2 or later."""
        with pytest.raises(PreconditionError, match="m_min = 1"):
            FamilyParams(s=1, x=1, m_min=1)
        with pytest.raises(PreconditionError, match="must exceed"):
            FamilyParams(s=1, x=1, m_min=10, m_max=10)

    def test_rejects_nonpositive_c(self) -> None:
        """ra - b is at least 1."""
        with pytest.raises(PreconditionError, match="c = 0"):
            FamilyParams(s=1, x=1, c=0)

    def test_dict_round_trip(self) -> None:
        """Exponents survive serialization exactly."""
        params = FamilyParams(s=Fraction(5, 3), x=Fraction(7, 11), c=2)
        assert FamilyParams.from_dict(params.to_dict()) == params


class TestMakeSchedule:
    """Tests for make_schedule function."""

    def test_pinned_triples_x_one(self) -> None:
        """(s, x) = (1, 1) on the plane gives r = a = m and b = m^2 - 3."""
        schedule = make_schedule(PLANE, FamilyParams(s=1, x=1, c=3, m_min=2, m_max=4))
        triples = [(mb.r, mb.a, mb.b) for mb in schedule.members]
        assert triples == [(2, 2, 1), (3, 3, 6), (4, 4, 13)]

    def test_pinned_members_x_one(self) -> None:
        """Least c2, Delta and digest of the (1, 1) plane family on [2, 4]."""
        schedule = make_schedule(PLANE, FamilyParams(s=1, x=1, c=3, m_min=2, m_max=4))
        assert [(mb.c2, mb.delta) for mb in schedule.members] == [
            (16, 63),
            (301, 1734),
            (1794, 13845),
        ]
        assert schedule.digest() == (
            "97be04908dc508769ac6928e04bc9f2fd8479bc3e538e0fdbdfca14cc7496e01"
        )

    def test_pinned_triples_order_five(self) -> None:
        """Order (1, 5) on the plane uses a = round(sqrt(m))."""
        schedule = make_schedule(PLANE, family_from_order(1, 5, c=3, m_min=2, m_max=4))
        triples = [(mb.r, mb.a, mb.b) for mb in schedule.members]
        assert triples == [(2, 1, -1), (3, 2, 3), (4, 2, 5)]
        first = schedule.members[0]
        assert (first.c2, first.delta) == (4, 15)

    def test_members_match_oracle(self, plane_schedule: FamilySchedule) -> None:
        """Every c2 and Delta agrees with an independent derivation."""
        for mb in plane_schedule.members:
            c2 = oracle_c2(PLANE, mb.r, mb.a, mb.b)
            assert mb.c2 == c2
            assert mb.delta == 2 * mb.r * c2 - (mb.r - 1) * mb.b * mb.b * PLANE.e

    def test_member_count(self) -> None:
        """m in [10, 100] gives 91 members, all satisfying the precondition."""
        schedule = make_schedule(
            PLANE, family_from_order(1, 5, c=3, m_min=10, m_max=100)
        )
        assert len(schedule.members) == 91
        assert all(mb.precondition_ok for mb in schedule.members)
        assert [mb.m for mb in schedule.members] == list(range(10, 101))

    def test_fixed_c(self, plane_schedule: FamilySchedule) -> None:
        """ra - b stays equal to c along the family."""
        assert all(mb.r * mb.a - mb.b == 3 for mb in plane_schedule.members)

    def test_ranks_nondecreasing(self) -> None:
        """Rounded ranks never decrease, even for fractional s."""
        schedule = make_schedule(
            PLANE, FamilyParams(s=Fraction(1, 3), x=1, m_min=2, m_max=60)
        )
        ranks = [mb.r for mb in schedule.members]
        assert ranks == sorted(ranks)
        assert ranks[0] == 2

    def test_positive_discriminants(self) -> None:
        """Delta > 0 on every catalog surface."""
        params = family_from_order(1, 5, c=3, m_min=10, m_max=60)
        for inv in load_catalog().values():
            schedule = make_schedule(inv, params)
            assert all(mb.delta > 0 for mb in schedule.members), inv.name

    def test_workers_identical(self) -> None:
        """Concurrent construction returns the sequential result."""
        params = family_from_order(2, 9, c=3, m_min=10, m_max=80)
        sequential = make_schedule(PLANE, params)
        concurrent = make_schedule(PLANE, params, workers=4)
        assert concurrent.members == sequential.members
        assert concurrent.digest() == sequential.digest()

    def test_precondition_failure_names_index(self) -> None:
        """A septic with a = 1 fails r L^2 > K.L at the first index."""
        params = FamilyParams(s=1, x=Fraction(1, 10), m_min=2, m_max=20)
        with pytest.raises(ScheduleError, match="m=2") as exc_info:
            make_schedule(hypersurface(7), params)
        assert exc_info.value.m == 2

    def test_rejects_invalid_surface(self) -> None:
        """Invalid invariants are refused."""
        inv = SurfaceInvariants(e=2, k=-3, chi=1, pg=0, q=0)
        with pytest.raises(PreconditionError, match="parity"):
            make_schedule(inv, family_from_order(1, 5))


class TestScheduleTable:
    """Tests for the exported schedule table."""

    def test_round_trip(self, plane_schedule: FamilySchedule) -> None:
        """from_dict rebuilds an equal schedule."""
        rebuilt = FamilySchedule.from_dict(plane_schedule.to_dict())
        assert rebuilt == plane_schedule

    def test_digest_is_stable(self, plane_schedule: FamilySchedule) -> None:
        """The digest depends only on the table."""
        assert len(plane_schedule.digest()) == 64
        assert plane_schedule.digest() == plane_schedule.digest()

    def test_tampered_delta(self, plane_schedule: FamilySchedule) -> None:
        """A changed Delta no longer matches r, b and c2."""
        data = plane_schedule.to_dict()
        data["table"]["rows"][5][5] += 1
        with pytest.raises(ValueError, match="delta does not match"):
            FamilySchedule.from_dict(data)

    def test_tampered_c2(self, plane_schedule: FamilySchedule) -> None:
        """A larger c2 with a matching Delta is still not the least value."""
        data = plane_schedule.to_dict()
        row = data["table"]["rows"][5]
        row[4] += 1
        row[5] += 2 * row[1]
        with pytest.raises(ValueError, match="least admissible"):
            FamilySchedule.from_dict(data)

    def test_tampered_b(self, plane_schedule: FamilySchedule) -> None:
        """Every row keeps r a - b equal to c."""
        data = plane_schedule.to_dict()
        data["table"]["rows"][0][3] -= 1
        with pytest.raises(ValueError, match="differs from c = 3"):
            FamilySchedule.from_dict(data)

    def test_failing_slope_precondition(self) -> None:
        """A row violating r L^2 > K.L is refused."""
        sextic = hypersurface(6)
        params = FamilyParams(s=1, x=Fraction(1, 10), c=3, m_min=2, m_max=4)
        r, a = 2, 1
        report = li_qin_alpha(sextic, ChernData(r=r, a=a, b=r * a - 3))
        assert not report.precondition_ok
        c2 = report.alpha_ceiling
        b = r * a - 3
        data = {
            "params": params.to_dict(),
            "surface": sextic.to_dict(),
            "table": {
                "columns": ["m", "r", "a", "b", "c2", "delta"],
                "rows": [[2, r, a, b, c2, discriminant(r, b * b * sextic.e, c2)]],
            },
        }
        with pytest.raises(ValueError, match="K.L fails"):
            FamilySchedule.from_dict(data)

    def test_tampered_digest(self, plane_schedule: FamilySchedule) -> None:
        """A wrong digest is detected."""
        data = plane_schedule.to_dict()
        data["digest"] = "0" * 64
        with pytest.raises(ValueError, match="digest"):
            FamilySchedule.from_dict(data)

    def test_parse_rejects_wrong_columns(self) -> None:
        """Column names are fixed."""
        with pytest.raises(ValueError, match="columns"):
            parse_schedule_table({"columns": ["m", "r"], "rows": []})

    def test_parse_rejects_floats(self) -> None:
        """Rows hold integers only."""
        table = {
            "columns": ["m", "r", "a", "b", "c2", "delta"],
            "rows": [[10, 10, 3, 27, 1.5, 7]],
        }
        with pytest.raises(ValueError, match="integer"):
            parse_schedule_table(table)


class TestVerifyOrder:
    """Tests for verify_order function."""

    def test_exact_power_law(self) -> None:
        """7 m^5 has slope 5 and constant ratio 7."""
        seq = [(m, 7 * m**5) for m in range(10, 101)]
        verdict = verify_order(seq, 5, tol_slope=0.01, tol_ratio=1.001)
        assert verdict.accepted
        assert verdict.slope == pytest.approx(5.0, abs=1e-9)
        assert verdict.ratio_min == pytest.approx(7.0)
        assert verdict.ratio_max == pytest.approx(7.0)
        assert verdict.reasons == ()

    def test_wrong_exponent(self) -> None:
        """m^3 is rejected against t = 5."""
        seq = [(m, m**3) for m in range(10, 101)]
        verdict = verify_order(seq, 5, tol_slope=0.1, tol_ratio=1e9)
        assert not verdict.accepted
        assert verdict.slope == pytest.approx(3.0, abs=1e-9)
        assert "slope" in verdict.reasons[0]

    @pytest.mark.parametrize("name", ["plane", "k3-quartic"])
    def test_discriminant_order(self, name: str) -> None:
        """Delta of an order (1, 5) family grows like m^5."""
        schedule = make_schedule(
            get_surface(name), family_from_order(1, 5, c=3, m_min=10, m_max=200)
        )
        verdict = verify_order(
            [(mb.m, mb.delta) for mb in schedule.members], 5, 0.1, 3.0
        )
        assert verdict.accepted, verdict.reasons

    def test_rank_order_on_catalog(self) -> None:
        """Ranks grow like m^s on every catalog surface."""
        params = family_from_order(1, 5, c=3, m_min=10, m_max=200)
        for inv in load_catalog().values():
            schedule = make_schedule(inv, params)
            verdict = verify_order([(mb.m, mb.r) for mb in schedule.members], 1)
            assert verdict.accepted, inv.name

    def test_rank_order_fractional(self) -> None:
        """s = 3/2 ranks pass the order check."""
        schedule = make_schedule(
            PLANE, family_from_order("3/2", 7, c=3, m_min=10, m_max=200)
        )
        verdict = verify_order(
            [(mb.m, mb.r) for mb in schedule.members], Fraction(3, 2)
        )
        assert verdict.accepted, verdict.reasons

    def test_ratio_spread_rejected(self) -> None:
        """A sequence jumping by a factor 10 fails the ratio test."""
        seq = [(m, m**2 * (10 if m % 2 else 1)) for m in range(10, 101)]
        verdict = verify_order(seq, 2, tol_slope=1.0, tol_ratio=3.0)
        assert not verdict.accepted
        assert any("ratio spread" in reason for reason in verdict.reasons)

    def test_too_few_points(self) -> None:
        """At least ten points are needed."""
        with pytest.raises(PreconditionError, match="at least 10"):
            verify_order([(m, m) for m in range(10, 15)], 1)

    def test_narrow_range(self) -> None:
        """The index range must span a factor 5."""
        with pytest.raises(PreconditionError, match="factor 5"):
            verify_order([(m, m) for m in range(10, 40)], 1)

    def test_nonpositive_values(self) -> None:
        """Values must be positive."""
        with pytest.raises(PreconditionError, match="positive"):
            verify_order([(m, m - 50) for m in range(10, 101)], 1)

    def test_to_dict_uses_declared_precision(self) -> None:
        """Reals are written as fixed-point strings."""
        seq = [(m, 7 * m**5) for m in range(10, 101)]
        data = verify_order(seq, 5).to_dict(precision=3)
        assert data["slope"] == "5.000"
        assert data["ratio_min"] == "7.000"
        assert data["precision"] == 3


class TestLeadingTermRatio:
    """Tests for leading_term_ratio and dry_profile."""

    def test_rank_two_example(self) -> None:
        """Delta = 15 at r = 2, a = 1 on the plane gives 15/16."""
        schedule = make_schedule(PLANE, family_from_order(1, 5, c=3, m_min=2, m_max=4))
        assert leading_term_ratio(PLANE, schedule.members[0]) == Fraction(15, 16)

    def test_exact_one(self) -> None:
        """Delta = 16 at r = 2, a = 1, e = 1 gives 1."""
        member = FamilyMember(
            m=2, r=2, a=1, b=0, c2=4, delta=16, alpha_ceiling=4, precondition_ok=True
        )
        assert leading_term_ratio(PLANE, member) == 1

    def test_rejects_rank_one(self) -> None:
        """The leading term vanishes in rank one."""
        member = FamilyMember(
            m=2, r=1, a=1, b=0, c2=0, delta=0, alpha_ceiling=0, precondition_ok=True
        )
        with pytest.raises(PreconditionError, match="r = 1"):
            leading_term_ratio(PLANE, member)

    def test_tends_to_one(self) -> None:
        """Along a family with r >= 100 and a >= 10 the ratio is near 1."""
        schedule = make_schedule(
            PLANE, family_from_order(1, 5, c=3, m_min=100, m_max=200)
        )
        for mb in schedule.members:
            assert 0.9 <= leading_term_ratio(PLANE, mb) <= 1.1

    def test_dry_profile(self, plane_schedule: FamilySchedule) -> None:
        """One defect per member, equal to dry_defect on its data."""
        profile = dry_profile(plane_schedule)
        assert len(profile) == len(plane_schedule.members)
        first = plane_schedule.members[0]
        assert profile[0] == dry_defect(PLANE, first.r, first.b * first.b, first.c2)
        assert all(value > 0 for value in profile)

    def test_dry_profile_needs_euler_number(self) -> None:
        """Surfaces without c2(S) have no defect."""
        inv = replace(PLANE, ksq=None, euler_c2=None)
        schedule = make_schedule(inv, family_from_order(1, 5, m_min=2, m_max=4))
        with pytest.raises(PreconditionError, match="c2\\(S\\)"):
            dry_profile(schedule)


def test_discriminant_of_members_is_exact() -> None:
    """Delta is recomputed from the members with the library discriminant."""
    schedule = make_schedule(PLANE, family_from_order(1, 6, m_min=2, m_max=12))
    for mb in schedule.members:
        assert mb.delta == discriminant(mb.r, mb.b * mb.b, mb.c2)
