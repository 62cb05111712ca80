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

import numpy as np
import pytest
from helpers import square_body

from kelab import UnsupportedOrderError, ValidationError
from kelab.geometry import covariant_Q, point_geometry
from kelab.identities import (
    CheckSet,
    bounds_context,
    check_algebraic,
    check_bounds,
    check_examples,
    check_laplacian,
    check_prop54,
    check_Q_and_frame,
    check_theorem,
    eigenframe_data,
    growth_constant,
)
from kelab.potentials import CubePotential, GridPotential, Potential, SimplexPotential

POINTS = [(0.8, -0.3), (-1.2, 0.4), (1.5, 1.1)]


@pytest.fixture(name="simplex")
def _simplex() -> SimplexPotential:
    return SimplexPotential(2)


@pytest.fixture(name="cube")
def _cube() -> CubePotential:
    return CubePotential(2)


@pytest.fixture(name="potential", params=["simplex", "cube"])
def _potential(request: pytest.FixtureRequest) -> Potential:
    if request.param == "simplex":
        return SimplexPotential(2)
    return CubePotential(2)


def assert_passed(checks: CheckSet) -> None:
    failed = [name for name, result in checks.results.items() if not result.passed]
    assert failed == []


class TestAlgebraic:
    @pytest.mark.parametrize("x", POINTS)
    def test_closed_forms(self, potential: Potential, x: tuple[float, float]) -> None:
        jet = potential.jet_at(x, 3)
        checks = check_algebraic(point_geometry(jet), jet)
        assert_passed(checks)
        assert "frame_nn" in checks
        assert "lambda_chain_upper" in checks

    def test_critical_point(self, cube: CubePotential) -> None:
        jet = cube.jet_at((0.0, 0.0), 3)
        checks = check_algebraic(point_geometry(jet), jet)
        assert_passed(checks)
        assert checks.skipped["frame_nn"] == "low gradient"
        assert "hessian_det" in checks

    def test_simplex_examples(self, simplex: SimplexPotential) -> None:
        jet = simplex.jet_at((0.3, 0.2), 3)
        checks = check_examples(simplex, point_geometry(jet))
        assert_passed(checks)
        assert set(checks.results) == {"simplex_g", "simplex_lambda", "simplex_ricci"}
        assert checks.skipped["cube_flat"] == "not applicable"

    def test_cube_examples(self, cube: CubePotential) -> None:
        jet = cube.jet_at((0.3, -2.0), 3)
        checks = check_examples(cube, point_geometry(jet))
        assert_passed(checks)
        assert set(checks.results) == {"cube_third_order", "cube_flat"}


class TestLaplacian:
    @pytest.mark.parametrize("x", POINTS)
    def test_closed_forms(self, potential: Potential, x: tuple[float, float]) -> None:
        assert_passed(check_laplacian(potential.jet_at(x, 5)))

    def test_metric_laplacian(self, potential: Potential) -> None:
        # The free indices of the quadratic terms stay covariant.
        checks = check_laplacian(potential.jet_at((1.5, -0.8), 5))
        assert checks["laplacian_g"].abs_residual < 1e-10

    def test_order_required(self, simplex: SimplexPotential) -> None:
        with pytest.raises(UnsupportedOrderError):
            check_laplacian(simplex.jet_at((0.0, 0.0), 4))

    def test_grid_jets(self, cube: CubePotential) -> None:
        x = np.linspace(-4.0, 4.0, 65)
        X, Y = np.meshgrid(x, x, indexing="ij")
        grid = GridPotential(4.0, cube.values(np.stack([X, Y], axis=-1)), square_body())
        jet = grid.jet_at((0.0, 0.0), 4)
        with pytest.raises(UnsupportedOrderError):
            check_laplacian(jet)
        with pytest.raises(UnsupportedOrderError):
            check_theorem(jet)


class TestQFrame:
    @pytest.mark.parametrize("x", POINTS)
    def test_closed_forms(self, potential: Potential, x: tuple[float, float]) -> None:
        jet = potential.jet_at(x, 5)
        checks = check_Q_and_frame(point_geometry(jet), covariant_Q(jet), jet)
        assert_passed(checks)
        assert "Q_eeuu_formula" in checks
        assert "lambda_gradient_square" in checks

    def test_low_gradient(self, simplex: SimplexPotential) -> None:
        jet = simplex.jet_at((0.0, 0.0), 4)
        checks = check_Q_and_frame(point_geometry(jet), covariant_Q(jet), jet)
        assert checks.results == {}
        assert set(checks.skipped.values()) == {"low gradient"}

    def test_eigenframe_data(self, cube: CubePotential) -> None:
        pg = point_geometry(cube.jet_at((1.0, 0.2), 3))
        data = eigenframe_data(pg, np.zeros(2))
        assert data.Lambda_e == pytest.approx(1 + np.sinh(0.5) ** 2)
        assert data.phi_euu == pytest.approx(0.0, abs=1e-12)
        assert data.C**2 + data.D**2 == pytest.approx(pg.grad_norm2)

    def test_degenerate_eigenframe(self, cube: CubePotential) -> None:
        pg = point_geometry(cube.jet_at((0.0, 0.0), 3))
        with pytest.raises(ValidationError):
            eigenframe_data(pg, np.zeros(2))


class TestTheorem:
    @pytest.mark.parametrize("x", POINTS)
    def test_closed_forms(self, potential: Potential, x: tuple[float, float]) -> None:
        checks = check_theorem(potential.jet_at(x, 5))
        assert_passed(checks)
        assert set(checks.results) == {"laplacian_lambda_Q", "laplacian_lambda"}

    def test_simplex_sides_vanish(self, simplex: SimplexPotential) -> None:
        result = check_theorem(simplex.jet_at((0.5, -1.0), 5))["laplacian_lambda"]
        assert result.lhs == pytest.approx(0.0, abs=1e-8)
        assert result.rhs == pytest.approx(0.0, abs=1e-8)


class TestBounds:
    def test_growth_constant(self) -> None:
        assert growth_constant(2.0, 2) == pytest.approx(24.0)
        with pytest.raises(ValidationError):
            growth_constant(1.0, 2)

    @pytest.mark.parametrize("x", POINTS + [(0.0, 0.0)])
    def test_closed_forms(self, potential: Potential, x: tuple[float, float]) -> None:
        jet = potential.jet_at(x, 3)
        checks = check_bounds(point_geometry(jet), jet, bounds_context(potential))
        assert_passed(checks)
        assert checks["riemannian_convexity"].margin >= -1e-9

    def test_simplex_is_extremal(self, simplex: SimplexPotential) -> None:
        jet = simplex.jet_at((0.4, 0.1), 3)
        checks = check_bounds(point_geometry(jet), jet, bounds_context(simplex))
        assert checks["lambda_upper"].margin == pytest.approx(0.0, abs=1e-9)


class TestMaximumPrinciple:
    @pytest.mark.parametrize("x", POINTS)
    def test_simplex(self, simplex: SimplexPotential, x: tuple[float, float]) -> None:
        checks = check_prop54(simplex, x)
        assert_passed(checks)
        assert set(checks.results) | set(checks.skipped) == {
            "third_maximum",
            "third_maximum_square",
            "g_maximum",
        }

    def test_absolute_tolerance(self, simplex: SimplexPotential) -> None:
        results = [
            result
            for x in POINTS
            for result in check_prop54(simplex, x, tolerance=2e-4).results.values()
        ]
        assert results
        assert {result.threshold for result in results} == {2e-4}

    def test_cube_origin_skipped(self, cube: CubePotential) -> None:
        checks = check_prop54(cube, (0.0, 0.0))
        assert checks.results == {}
        assert set(checks.skipped.values()) == {"non-unique maximizer"}

    def test_grid_rejected(self, cube: CubePotential) -> None:
        x = np.linspace(-4.0, 4.0, 33)
        X, Y = np.meshgrid(x, x, indexing="ij")
        grid = GridPotential(4.0, cube.values(np.stack([X, Y], axis=-1)), square_body())
        with pytest.raises(UnsupportedOrderError):
            check_prop54(grid, (0.0, 0.0))
