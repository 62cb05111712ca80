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
Potentials solving the Kähler-Einstein equation and their jets.
"""

from __future__ import annotations

from ._base import MetricData, Potential, jet_at
from ._closed_forms import (
    CubePotential,
    SimplexPotential,
    cube_potential,
    cube_profile,
    simplex_potential,
)
from ._grid import GridPotential, fd_weights
from ._jets import Jet, JetSource, multi_index_key, parse_multi_index, symmetrize
from ._radial import RadialPotential, RadialProfile, ball_profile, default_ball_profile
from ._registry import PotentialRegistry, potential_registry
from ._taylor import TaylorAlgebra

__all__ = (
    "CubePotential",
    "GridPotential",
    "Jet",
    "JetSource",
    "MetricData",
    "Potential",
    "PotentialRegistry",
    "RadialPotential",
    "RadialProfile",
    "SimplexPotential",
    "TaylorAlgebra",
    "ball_profile",
    "cube_potential",
    "cube_profile",
    "default_ball_profile",
    "fd_weights",
    "jet_at",
    "multi_index_key",
    "parse_multi_index",
    "potential_registry",
    "simplex_potential",
    "symmetrize",
)
