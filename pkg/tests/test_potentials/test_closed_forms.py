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

import math
from typing import Any

import numpy as np
import pytest

from kelab import (
    OutsideRegionError,
    SamplingConfig,
    UnsupportedOrderError,
    ValidationError,
)
from kelab._sampling import sample_points
from kelab.bodies import contains
from kelab.potentials import (
    CubePotential,
    JetSource,
    Potential,
    SimplexPotential,
    cube_potential,
    cube_profile,
    jet_at,
    simplex_potential,
)


@pytest.fixture(
    name="potential",
    params=["simplex", "simplex:3", "cube", "cube:3", "box"],
)
def _potential(request: Any) -> Potential:
    if request.param == "simplex":
        return simplex_potential()
    if request.param == "simplex:3":
        return simplex_potential(3)
    if request.param == "cube":
        return cube_potential()
    if request.param == "cube:3":
        return cube_potential(3)
    return CubePotential(2, halfwidths=[1.0, 2.5])


def points_for(potential: Potential, count: int = 20) -> Any:
    return sample_points(SamplingConfig(count=count, radius=4.0), dim=potential.dim)


class TestClosedForms:
    def test_kahler_einstein(self, potential: Potential) -> None:
        for x in points_for(potential):
            jet = potential.jet_at(x, 2)
            det = np.linalg.det(jet.hessian)
            assert det == pytest.approx(math.exp(-jet.value), rel=1e-10)

    def test_gradient_in_body(self, potential: Potential) -> None:
        body = potential.body
        for x in points_for(potential):
            assert contains(body, potential.jet_at(x, 1).gradient)

    def test_values(self, potential: Potential) -> None:
        points = points_for(potential, 5)
        values = potential.values(points)
        for x, value in zip(points, values):
            assert potential.value(x) == pytest.approx(value, rel=1e-13)
            assert potential.jet_at(x, 0).value == pytest.approx(value, rel=1e-12)

    def test_minimum(self, potential: Potential) -> None:
        origin = np.zeros(potential.dim)
        assert potential.value(origin) == pytest.approx(potential.minimum())
        assert np.allclose(potential.jet_at(origin, 1).gradient, 0.0, atol=1e-14)

    def test_metric_data(self, potential: Potential) -> None:
        for x in points_for(potential, 10):
            jet = potential.jet_at(x, 3)
            data = potential.metric_data(x)
            assert np.allclose(data.gradient, jet.gradient, atol=1e-11)
            assert np.allclose(data.hessian, jet.hessian, atol=1e-11)
            assert np.allclose(data.third, jet.derivs[3], atol=1e-11)

    def test_symmetric_jets(self, potential: Potential) -> None:
        jet = potential.jet_at(np.full(potential.dim, 0.3), 5)
        assert jet.symmetry_defect() < 1e-12
        assert jet.source is JetSource.CLOSED_FORM

    def test_jet_at(self, potential: Potential) -> None:
        x = points_for(potential, count=1)[0]
        jet = jet_at(potential, x, 2)
        assert jet.value == pytest.approx(potential.value(x), rel=1e-12)
        assert np.allclose(jet.hessian, potential.jet_at(x, 2).hessian)

    def test_order_zero(self, potential: Potential) -> None:
        x = points_for(potential, count=1)[0]
        jet = potential.jet_at(x, 0)
        assert jet.order == 0
        assert jet.value == pytest.approx(potential.value(x), rel=1e-12)

    def test_order_too_high(self, potential: Potential) -> None:
        with pytest.raises(UnsupportedOrderError):
            potential.jet_at(np.zeros(potential.dim), 6)

    def test_wrong_dimension(self, potential: Potential) -> None:
        with pytest.raises(OutsideRegionError):
            potential.jet_at(np.zeros(potential.dim + 1), 2)


class TestSimplex:
    def test_constant(self) -> None:
        assert SimplexPotential(2).constant == pytest.approx(-2 * math.log(3))
        assert SimplexPotential(2).minimum() == pytest.approx(math.log(3))

    def test_derivative_formulas(self) -> None:
        x = np.array([0.4, -1.1])
        jet = SimplexPotential(2).jet_at(x, 2)
        p = 3 * np.exp(x) / (1 + np.sum(np.exp(x)))
        assert np.allclose(jet.gradient, p - 1)
        assert np.allclose(jet.hessian, np.diag(p) - np.outer(p, p) / 3)

    def test_off_center(self) -> None:
        jet = SimplexPotential(2).jet_at((6.0, -5.0), 3)
        assert np.all(np.isfinite(jet.derivs[3]))
        expected = math.exp(-jet.value)
        assert np.linalg.det(jet.hessian) == pytest.approx(expected, rel=1e-8)

    def test_descriptor(self) -> None:
        assert SimplexPotential(2).descriptor == "closed:simplex"
        assert SimplexPotential(3).descriptor == "closed:simplex:3"

    def test_invalid_dimension(self) -> None:
        with pytest.raises(ValidationError):
            SimplexPotential(0)


class TestCube:
    def test_profile(self) -> None:
        t = np.linspace(-30, 30, 61)
        expected = np.log(2 * np.cosh(t / 2) ** 2)
        assert np.allclose(cube_profile(t), expected, rtol=1e-13)

    def test_profile_equation(self) -> None:
        jet = CubePotential(1).jet_at((0.8,), 4)
        assert float(jet.hessian[0, 0]) == pytest.approx(math.exp(-jet.value))
        assert float(jet.gradient[0]) == pytest.approx(math.tanh(0.4))

    def test_product_structure(self) -> None:
        jet = CubePotential(2).jet_at((0.7, -1.3), 4)
        assert jet.hessian[0, 1] == pytest.approx(0.0, abs=1e-14)
        assert jet.derivs[3][0, 0, 1] == pytest.approx(0.0, abs=1e-14)
        assert jet.derivs[4][0, 0, 1, 1] == pytest.approx(0.0, abs=1e-14)

    def test_halfwidths(self) -> None:
        potential = CubePotential(2, halfwidths=[1.0, 2.5])
        assert potential.body.halfwidths == (1.0, 2.5)
        assert "halfwidths" in potential.descriptor

    def test_invalid_halfwidths(self) -> None:
        with pytest.raises(ValidationError):
            CubePotential(2, halfwidths=[1.0, -1.0])
