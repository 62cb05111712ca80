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
Geodesics and geodesic balls of the Hessian metric.
"""

from ._balls import (
    BallAreas,
    CurvatureEstimate,
    ball_area,
    cap_area,
    curvature_from_areas,
    geodesic_balls,
)
from ._diagnostics import (
    BallDiagnostics,
    ball_diagnostics,
    curvature_closed,
    curvature_usual,
    sphere_constant,
)
from ._geodesics import GeodesicPath, geodesic

__all__ = (
    "BallAreas",
    "BallDiagnostics",
    "CurvatureEstimate",
    "GeodesicPath",
    "ball_area",
    "ball_diagnostics",
    "cap_area",
    "curvature_closed",
    "curvature_usual",
    "curvature_from_areas",
    "geodesic",
    "geodesic_balls",
    "sphere_constant",
)
