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
Convex bodies in the plane (and boxes and simplices in any dimension).
"""

from ._bodies import (
    BodyKind,
    ConvexBody,
    area,
    barycenter,
    contains,
    gauge,
    hull_polygon,
    load_body,
    make_body,
    outer_radius,
    random_polygon,
    recenter,
    regular_polygon,
    support,
    support_values,
)

__all__ = (
    "BodyKind",
    "ConvexBody",
    "area",
    "barycenter",
    "contains",
    "gauge",
    "hull_polygon",
    "load_body",
    "make_body",
    "outer_radius",
    "random_polygon",
    "recenter",
    "regular_polygon",
    "support",
    "support_values",
)
