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
Finite-difference solver of :math:`e^{-\\Phi} = \\det D^2\\Phi` in the plane.
"""

from ._asymptotics import asymptotic_values, mass_constant, polar_normals
from ._solver import (
    ResidualField,
    body_symmetries,
    boundary_data,
    initial_guess,
    ke_residual,
    oracle_potential,
    smoothed_support,
    solve,
    symmetry_defect,
    truncated_mass,
)
from ._stencils import GridStencils, is_convex
from ._study import STUDY_COLUMNS, StudyRow, convergence_study

__all__ = (
    "GridStencils",
    "ResidualField",
    "STUDY_COLUMNS",
    "StudyRow",
    "asymptotic_values",
    "body_symmetries",
    "boundary_data",
    "convergence_study",
    "initial_guess",
    "is_convex",
    "ke_residual",
    "mass_constant",
    "oracle_potential",
    "polar_normals",
    "smoothed_support",
    "solve",
    "symmetry_defect",
    "truncated_mass",
)
