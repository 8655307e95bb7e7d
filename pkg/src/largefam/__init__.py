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
"""largefam - Exact bounds and large families of stable bundles on surfaces."""

__version__ = "0.1.0"

from largefam.cayley_bacharach import (
    CBQuery,
    ProjectivePoint,
    ZeroCycle,
    cb_for_direct_sum,
    cb_oracle,
    satisfies_cb,
    serre_degree,
    vanishing_dim,
)
from largefam.errors import (
    CertificateFormatError,
    InvariantError,
    PreconditionError,
    ScheduleError,
)
from largefam.existence_bounds import (
    BoundReport,
    ChernData,
    discriminant,
    dry_defect,
    li_qin_alpha,
    min_c2,
    slope_precondition,
)
from largefam.large_families import (
    FamilyMember,
    FamilyParams,
    FamilySchedule,
    OrderVerdict,
    family_from_order,
    leading_term_ratio,
    make_schedule,
    verify_order,
)
from largefam.sbi_falsifier import (
    SBICertificate,
    SBIQuery,
    check_certificate,
    choose_exponents,
    falsify,
)
from largefam.surface_lattice import (
    DivisorMultiple,
    SurfaceInvariants,
    chi_adjoint_twist,
    get_surface,
    h0_adjoint_twist,
    pair,
    validate,
)

__all__ = [
    "__version__",
    "BoundReport",
    "CBQuery",
    "CertificateFormatError",
    "ChernData",
    "DivisorMultiple",
    "FamilyMember",
    "FamilyParams",
    "FamilySchedule",
    "InvariantError",
    "OrderVerdict",
    "PreconditionError",
    "ProjectivePoint",
    "SBICertificate",
    "SBIQuery",
    "ScheduleError",
    "SurfaceInvariants",
    "ZeroCycle",
    "cb_for_direct_sum",
    "cb_oracle",
    "check_certificate",
    "chi_adjoint_twist",
    "choose_exponents",
    "discriminant",
    "dry_defect",
    "falsify",
    "family_from_order",
    "get_surface",
    "h0_adjoint_twist",
    "leading_term_ratio",
    "li_qin_alpha",
    "make_schedule",
    "min_c2",
    "pair",
    "satisfies_cb",
    "serre_degree",
    "slope_precondition",
    "validate",
    "vanishing_dim",
    "verify_order",
]
