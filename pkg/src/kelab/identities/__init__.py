# Copyright 2022 Akamai Technologies, Inc
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

"""
Verification of the identities and bounds of Kähler-Einstein potentials.
"""

from ._checks import (
    BoundsContext,
    EigenframeData,
    check_algebraic,
    check_bounds,
    check_examples,
    check_laplacian,
    check_Q_and_frame,
    check_theorem,
    eigenframe_data,
    growth_constant,
)
from ._cubic import CubicMax, cubic_max, orthonormal_third
from ._maximum_principle import check_prop54
from ._report import (
    REPORT_COLUMNS,
    CheckKind,
    CheckResult,
    CheckSet,
    PointRecord,
    ResidualReport,
)
from ._suite import SUITES, bounds_context, growth_exponent, parse_suites, run_suite

__all__ = (
    "BoundsContext",
    "CheckKind",
    "CheckResult",
    "CheckSet",
    "CubicMax",
    "EigenframeData",
    "PointRecord",
    "REPORT_COLUMNS",
    "ResidualReport",
    "SUITES",
    "bounds_context",
    "check_Q_and_frame",
    "check_algebraic",
    "check_bounds",
    "check_examples",
    "check_laplacian",
    "check_prop54",
    "check_theorem",
    "cubic_max",
    "eigenframe_data",
    "growth_constant",
    "growth_exponent",
    "orthonormal_third",
    "parse_suites",
    "run_suite",
)
