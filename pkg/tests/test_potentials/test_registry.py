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

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest
from helpers import square_body

from kelab import ValidationError
from kelab.potentials import (
    CubePotential,
    GridPotential,
    Potential,
    PotentialRegistry,
    RadialPotential,
    SimplexPotential,
    potential_registry,
)


class TestPotentialRegistry:
    @pytest.mark.parametrize(
        "descriptor, cls, dim",
        [
            ("closed:simplex", SimplexPotential, 2),
            ("closed:simplex:3", SimplexPotential, 3),
            ("closed:cube", CubePotential, 2),
            ("closed:cube:4", CubePotential, 4),
            ("radial:ball", RadialPotential, 2),
        ],
    )
    def test_resolve(self, descriptor: str, cls: type, dim: int) -> None:
        potential = potential_registry.resolve(descriptor)
        assert isinstance(potential, cls)
        assert potential.dim == dim
        assert potential.descriptor == descriptor

    def test_resolve_grid(self, tmp_path: Path) -> None:
        values = np.add.outer(np.linspace(-1, 1, 9) ** 2, np.linspace(-1, 1, 9) ** 2)
        GridPotential(4.0, values, square_body()).save(tmp_path)
        potential = potential_registry.resolve(f"grid:{tmp_path}")
        assert isinstance(potential, GridPotential)
        assert potential.descriptor == f"grid:{tmp_path}"

    @pytest.mark.parametrize(
        "descriptor",
        [
            pytest.param("symbolic:simplex", id="unknown family"),
            pytest.param("closed:hexagon", id="unknown closed form"),
            pytest.param("closed:cube:x", id="invalid dimension"),
            pytest.param("radial:cube", id="unknown radial"),
            pytest.param("grid:", id="grid without path"),
        ],
    )
    def test_invalid(self, descriptor: str) -> None:
        with pytest.raises(ValidationError):
            potential_registry.resolve(descriptor)

    def test_custom_factory(self) -> None:
        def factory(argument: str) -> Potential:
            return CubePotential(int(argument))

        registry = PotentialRegistry()
        registry.load_defaults()
        registry.factories["product"] = factory
        assert registry.resolve("product:3").dim == 3
        assert registry.resolve("closed:simplex").dim == 2

    def test_empty_registry(self) -> None:
        with pytest.raises(ValidationError):
            PotentialRegistry().resolve("closed:simplex")
