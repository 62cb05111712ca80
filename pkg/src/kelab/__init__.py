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

from ._configuration import SamplingConfig, ShootingConfig, SolverConfig, Thresholds
from ._exceptions import (
    BallEscapeError,
    ConvexityError,
    DegenerateJetError,
    JetError,
    KELabError,
    OutsideRegionError,
    ShootingError,
    SolverError,
    UnsupportedOrderError,
    ValidationError,
    VerificationError,
)
from ._typing import FloatArray, PointLike

__version__ = "0.1.dev"

__all__ = (
    "SamplingConfig",
    "ShootingConfig",
    "SolverConfig",
    "Thresholds",
    "BallEscapeError",
    "ConvexityError",
    "DegenerateJetError",
    "JetError",
    "KELabError",
    "OutsideRegionError",
    "ShootingError",
    "SolverError",
    "UnsupportedOrderError",
    "ValidationError",
    "VerificationError",
    "FloatArray",
    "PointLike",
)
