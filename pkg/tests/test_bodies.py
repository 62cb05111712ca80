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
from pathlib import Path
from typing import Any

import numpy as np
import pytest
from helpers import square_body, triangle_body, write_body

from kelab import ValidationError
from kelab.bodies import (
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


@pytest.fixture(
    name="body",
    params=["triangle", "square", "disk", "pentagon", "hexagon"],
)
def _body(request: Any) -> ConvexBody:
    if request.param == "triangle":
        return triangle_body()
    if request.param == "square":
        return square_body()
    if request.param == "disk":
        return make_body({"kind": "disk", "radius": 1.5})
    if request.param == "pentagon":
        return regular_polygon(5)
    return recenter(random_polygon(6, seed=3))


class TestMakeBody:
    def test_simplex(self) -> None:
        body = make_body({"kind": "simplex"})
        assert body.kind is BodyKind.SIMPLEX
        assert body.vertices == ((-1.0, -1.0), (2.0, -1.0), (-1.0, 2.0))

    def test_simplex_dimension(self) -> None:
        body = make_body({"kind": "simplex", "n": 3})
        assert body.dim == 3
        assert len(body.vertices) == 4

    def test_json_document(self) -> None:
        body = make_body('{"kind": "disk", "radius": 2}')
        assert body.radius == 2.0
        assert body.center == (0.0, 0.0)

    @pytest.mark.parametrize(
        "descriptor",
        [
            pytest.param({"kind": "hexagon"}, id="unknown kind"),
            pytest.param({"kind": "disk", "radius": -1}, id="negative radius"),
            pytest.param({"kind": "box", "halfwidths": []}, id="empty box"),
            pytest.param({"kind": "box", "halfwidths": [1, 0]}, id="flat box"),
            pytest.param(
                {"kind": "polygon", "vertices": [[0, 0], [1, 0]]}, id="two vertices"
            ),
            pytest.param(
                {"kind": "polygon", "vertices": [[0, 0], [0, 1], [1, 0]]},
                id="clockwise",
            ),
            pytest.param(
                {"kind": "polygon", "vertices": [[0, 0], [1, 0], [2, 0], [0, 1]]},
                id="collinear",
            ),
            pytest.param(
                {"kind": "polygon", "vertices": [[0, 0], [1, 0], [1, 0], [0, 1]]},
                id="repeated",
            ),
            pytest.param({"kind": "simplex", "n": 0}, id="zero dimension"),
            pytest.param("[1, 2]", id="not an object"),
            pytest.param("{", id="invalid json"),
        ],
    )
    def test_invalid(self, descriptor: Any) -> None:
        with pytest.raises(ValidationError):
            make_body(descriptor)

    def test_validation_error_is_value_error(self) -> None:
        with pytest.raises(ValueError):
            make_body({"kind": "disk"})

    def test_round_trip(self, body: ConvexBody, tmp_path: Path) -> None:
        loaded = load_body(write_body(tmp_path / "body.json", body))
        directions = np.array([[1.0, 0.0], [0.6, 0.8], [-0.8, 0.6], [0.0, -1.0]])
        assert loaded.kind == body.kind or body.kind is BodyKind.SIMPLEX
        expected = support_values(body, directions)
        assert np.allclose(support_values(loaded, directions), expected)

    def test_load_missing(self, tmp_path: Path) -> None:
        with pytest.raises(ValidationError):
            load_body(tmp_path / "missing.json")


class TestMeasures:
    @pytest.mark.parametrize(
        "descriptor, expected",
        [
            pytest.param({"kind": "simplex"}, 4.5, id="triangle"),
            pytest.param({"kind": "simplex", "n": 3}, 64 / 6, id="simplex 3D"),
            pytest.param({"kind": "box", "halfwidths": [1, 2]}, 8.0, id="box"),
            pytest.param({"kind": "disk", "radius": 2}, 4 * math.pi, id="disk"),
        ],
    )
    def test_area(self, descriptor: dict[str, Any], expected: float) -> None:
        assert area(make_body(descriptor)) == pytest.approx(expected)

    def test_regular_polygon_area(self) -> None:
        m = 7
        expected = m / 2 * math.sin(2 * math.pi / m)
        assert area(regular_polygon(m)) == pytest.approx(expected)

    def test_triangle_barycenter(self) -> None:
        assert np.allclose(barycenter(triangle_body()), 0.0)

    def test_recenter(self) -> None:
        vertices = [[1, 1], [3, 1], [3, 2], [1, 2]]
        body = make_body({"kind": "polygon", "vertices": vertices})
        centered = recenter(body)
        assert np.allclose(barycenter(centered), 0.0, atol=1e-14)
        assert area(centered) == pytest.approx(area(body))

    def test_recenter_disk(self) -> None:
        body = make_body({"kind": "disk", "radius": 1, "center": [0.5, 0.0]})
        assert recenter(body).center == (0.0, 0.0)

    def test_outer_radius(self) -> None:
        assert outer_radius(triangle_body()) == pytest.approx(math.sqrt(5))
        assert outer_radius(square_body()) == pytest.approx(math.sqrt(2))


class TestSupport:
    def test_triangle(self) -> None:
        body = triangle_body()
        assert support(body, (1.0, 0.0)) == pytest.approx(2.0)
        assert support(body, (-1.0, 0.0)) == pytest.approx(1.0)
        s = 1 / math.sqrt(2)
        assert support(body, (s, s)) == pytest.approx(s)

    def test_box(self) -> None:
        body = make_body({"kind": "box", "halfwidths": [1, 2]})
        assert support(body, (0.6, -0.8)) == pytest.approx(0.6 + 1.6)

    def test_disk(self) -> None:
        body = make_body({"kind": "disk", "radius": 2, "center": [1, 0]})
        assert support(body, (1.0, 0.0)) == pytest.approx(3.0)
        assert support(body, (0.0, 1.0)) == pytest.approx(2.0)

    def test_homogeneous(self, body: ConvexBody) -> None:
        x = np.array([[0.3, -1.2], [2.0, 0.5]])
        assert np.allclose(support_values(body, 3 * x), 3 * support_values(body, x))

    def test_sublinear(self, body: ConvexBody) -> None:
        rng = np.random.default_rng(0)
        x, y = rng.normal(size=(2, 50, 2))
        lhs = support_values(body, x + y)
        rhs = support_values(body, x) + support_values(body, y)
        assert np.all(lhs <= rhs + 1e-12)

    @pytest.mark.parametrize(
        "direction",
        [
            pytest.param((0.0, 0.0), id="zero"),
            pytest.param((1.0, 1.0), id="not unit"),
        ],
    )
    def test_invalid_direction(self, direction: tuple[float, float]) -> None:
        with pytest.raises(ValidationError):
            support(square_body(), direction)


class TestMembership:
    def test_contains(self, body: ConvexBody) -> None:
        assert contains(body, (0.0, 0.0))
        assert not contains(body, (10.0, 0.0))

    def test_dilation(self) -> None:
        body = square_body()
        assert not contains(body, (1.04, 0.0))
        assert contains(body, (1.04, 0.0), dilation=1.05)

    def test_gauge_boundary(self, body: ConvexBody) -> None:
        theta = np.linspace(0, 2 * np.pi, 17)
        directions = np.column_stack([np.cos(theta), np.sin(theta)])
        points = directions / gauge(body, directions)[:, None]
        assert np.allclose(gauge(body, points), 1.0)
        assert np.all(contains(body, points, tolerance=1e-9))

    def test_gauge_triangle(self) -> None:
        body = triangle_body()
        assert gauge(body, (1.0, 0.0)) == pytest.approx(1.0)
        assert gauge(body, (-2.0, 0.0)) == pytest.approx(2.0)

    def test_gauge_outside_origin(self) -> None:
        body = make_body({"kind": "disk", "radius": 1, "center": [2, 0]})
        with pytest.raises(ValidationError):
            gauge(body, (1.0, 0.0))


class TestPolygons:
    def test_hull_drops_interior_points(self) -> None:
        body = hull_polygon([[0, 0], [2, 0], [2, 2], [0, 2], [1, 1]])
        assert len(body.vertices) == 4
        assert area(body) == pytest.approx(4.0)

    def test_hull_degenerate(self) -> None:
        with pytest.raises(ValidationError):
            hull_polygon([[0, 0], [1, 1], [2, 2]])

    def test_random_polygon_is_reproducible(self) -> None:
        assert random_polygon(6, seed=1).vertices == random_polygon(6, seed=1).vertices
        assert len(random_polygon(6, seed=1).vertices) == 6

    def test_regular_polygon_too_small(self) -> None:
        with pytest.raises(ValidationError):
            regular_polygon(2)
