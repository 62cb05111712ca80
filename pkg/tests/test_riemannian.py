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

import numpy as np
import pytest
from helpers import square_body

from kelab import BallEscapeError, ValidationError
from kelab.potentials import (
    CubePotential,
    GridPotential,
    RadialProfile,
    SimplexPotential,
    default_ball_profile,
)
from kelab.riemannian import (
    ball_area,
    ball_diagnostics,
    cap_area,
    curvature_closed,
    curvature_from_areas,
    curvature_usual,
    geodesic,
    geodesic_balls,
    sphere_constant,
)


@pytest.fixture(name="cube")
def _cube() -> CubePotential:
    return CubePotential(2)


@pytest.fixture(name="grid")
def _grid(cube: CubePotential) -> GridPotential:
    x = np.linspace(-4.0, 4.0, 65)
    X, Y = np.meshgrid(x, x, indexing="ij")
    return GridPotential(4.0, cube.values(np.stack([X, Y], axis=-1)), square_body())


@pytest.fixture(name="profile")
def _profile() -> RadialProfile:
    return default_ball_profile(2)


class TestGeodesic:
    def test_cube_axis(self, cube: CubePotential) -> None:
        # φ''(0) = 1/2 and the distance to the origin along the axis is √2 gd(x/2).
        path = geodesic(cube, (0.0, 0.0), (math.sqrt(2), 0.0), 1.0)
        assert path.complete
        assert path.length == pytest.approx(1.0)
        end = path.positions[-1]
        expected = 2 * math.atanh(math.sin(1 / math.sqrt(2)))
        assert end[0] == pytest.approx(expected, abs=1e-7)
        assert end[1] == pytest.approx(0.0, abs=1e-12)
        assert path.speed_drift < 1e-8

    def test_simplex_speed(self) -> None:
        simplex = SimplexPotential(2)
        x0 = np.array([0.3, -0.2])
        metric = simplex.metric_data(x0).hessian
        v0 = np.array([1.0, 1.0])
        v0 /= math.sqrt(v0 @ metric @ v0)
        path = geodesic(simplex, x0, v0, 2.0, samples=21)
        assert path.complete
        assert len(path.rows()) == 21
        assert len(path.rows()[0]) == 6
        assert path.speed_drift < 1e-8

    def test_leaves_grid(self, grid: GridPotential) -> None:
        x0 = np.array([2.0, 0.0])
        metric = grid.metric_data(x0).hessian
        path = geodesic(grid, x0, (1 / math.sqrt(metric[0, 0]), 0.0), 3.0)
        assert not path.complete
        assert path.length < 3.0

    def test_invalid(self, cube: CubePotential) -> None:
        with pytest.raises(ValidationError, match="unit length"):
            geodesic(cube, (0.0, 0.0), (1.0, 0.0), 1.0)
        with pytest.raises(ValidationError):
            geodesic(cube, (0.0, 0.0), (math.sqrt(2), 0.0), 0.0)


class TestBalls:
    def test_flat_area(self, cube: CubePotential) -> None:
        area = ball_area(cube, (0.5, -0.3), 0.3, rays=64)
        assert area == pytest.approx(math.pi * 0.09, rel=1e-5)

    def test_areas_table(self, cube: CubePotential) -> None:
        balls = geodesic_balls(cube, (0.0, 0.0), [0.4, 0.2], rays=32)
        assert balls.radii.tolist() == [0.2, 0.4]
        assert all(balls.embedded)
        rows = balls.rows()
        assert rows[1][1] == pytest.approx(rows[1][2], rel=1e-4)

    def test_simplex_curvature(self) -> None:
        estimate = curvature_from_areas(SimplexPotential(2), (0.0, 0.0), rays=128)
        assert estimate.estimate == pytest.approx(1 / 12, abs=5e-3)
        assert np.allclose(estimate.cap_margins, 0.0, atol=1e-4)
        assert estimate.to_json()["embedded"] == [True] * 5

    def test_cap_area(self) -> None:
        r = 0.01
        assert cap_area(r) == pytest.approx(math.pi * r**2, rel=1e-5)

    def test_invalid_radii(self, cube: CubePotential) -> None:
        with pytest.raises(ValidationError):
            geodesic_balls(cube, (0.0, 0.0), [0.0, 1.0])

    def test_escape(self, grid: GridPotential) -> None:
        with pytest.raises(BallEscapeError):
            geodesic_balls(grid, (2.0, 0.0), [2.0], rays=16)


class TestBallDiagnostics:
    def test_sphere_constant(self) -> None:
        assert sphere_constant(2) == pytest.approx(2 * math.pi)
        assert sphere_constant(3) == pytest.approx(4 * math.pi)

    def test_curvature_formulas(self, profile: RadialProfile) -> None:
        r = np.linspace(0.5, 5.0, 7)
        usual = curvature_usual(profile, r)
        assert np.allclose(usual, curvature_closed(profile, r), atol=1e-6)

    def test_diagnostics(self, profile: RadialProfile) -> None:
        diagnostics = ball_diagnostics(profile)
        assert diagnostics.n == 2
        assert 0 < diagnostics.D < math.inf
        assert 0 <= diagnostics.D_tail < 1e-3
        assert diagnostics.sphere_sizes_increasing
        assert diagnostics.lambda_origin <= 1 / 3 + 1e-6
        assert diagnostics.H_deviation < 1e-5
        assert len(diagnostics.H_jets) == len(diagnostics.comparison_radii) == 10
        assert all(r < profile.r_max for r in diagnostics.far_radii)
        assert len(diagnostics.rows()) == 12
        assert diagnostics.to_json()["n"] == 2
