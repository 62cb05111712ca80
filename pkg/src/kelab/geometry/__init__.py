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
Differential geometry of the Hessian metric of a potential.
"""

from ._covariant import (
    HessianFields,
    TensorKind,
    covariant_Q,
    fd_hessian,
    weighted_laplacian_scalar,
    weighted_laplacian_tensor,
)
from ._point import (
    DEGENERATE_GAP,
    DELTA_GRAD,
    Frame,
    PointGeometry,
    contract,
    point_geometry,
)

__all__ = (
    "DEGENERATE_GAP",
    "DELTA_GRAD",
    "Frame",
    "HessianFields",
    "PointGeometry",
    "TensorKind",
    "contract",
    "covariant_Q",
    "fd_hessian",
    "point_geometry",
    "weighted_laplacian_scalar",
    "weighted_laplacian_tensor",
)
