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

import dataclasses
import enum
import json
import logging
import math
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np
from scipy.spatial import ConvexHull
from scipy.special import factorial

from .._exceptions import ValidationError
from .._typing import FloatArray, PointLike

logger = logging.getLogger("kelab.bodies")


class BodyKind(str, enum.Enum):
    POLYGON = "polygon"
    BOX = "box"
    DISK = "disk"
    SIMPLEX = "simplex"


@dataclasses.dataclass(frozen=True, eq=False)
class ConvexBody:
    """
    A convex body.

    Polygons and simplices are stored by their vertices,
    boxes by half-widths and disks by radius.
    Boxes and disks also carry a center, so that they can be translated.

    Instances are immutable; use :func:`make_body` to construct them.
    """

    #: Kind of the body.
    kind: BodyKind

    #: Ambient dimension.
    dim: int

    #: Vertices in counterclockwise order (polygons and simplices).
    vertices: tuple[tuple[float, ...], ...] = ()

    #: Half-widths (boxes).
    halfwidths: tuple[float, ...] = ()

    #: Radius (disks).
    radius: float = 0.0

    #: Center (boxes and disks).
    center: tuple[float, ...] = ()

    @property
    def vertex_array(self) -> FloatArray:
        """Vertices as an ``(m, dim)`` array."""
        return np.array(self.vertices, dtype=float).reshape(-1, self.dim)

    @property
    def center_array(self) -> FloatArray:
        if not self.center:
            return np.zeros(self.dim)
        return np.array(self.center, dtype=float)

    def to_json(self) -> dict[str, Any]:
        """
        Serialize as a body descriptor.
        """
        data: dict[str, Any] = {"kind": self.kind.value}
        if self.kind is BodyKind.POLYGON:
            data["vertices"] = [list(v) for v in self.vertices]
        elif self.kind is BodyKind.SIMPLEX:
            data["n"] = self.dim
            if self.dim == 2:
                data["vertices"] = [list(v) for v in self.vertices]
        elif self.kind is BodyKind.BOX:
            data["halfwidths"] = list(self.halfwidths)
            data["center"] = list(self.center)
        else:
            data["radius"] = self.radius
            data["center"] = list(self.center)
        return data

    def __str__(self) -> str:
        if self.kind is BodyKind.POLYGON:
            return f"polygon with {len(self.vertices)} vertices"
        if self.kind is BodyKind.SIMPLEX:
            return f"simplex (n={self.dim})"
        if self.kind is BodyKind.BOX:
            return f"box {list(self.halfwidths)}"
        return f"disk of radius {self.radius}"

    def __repr__(self) -> str:
        return f"<{type(self).__name__}: {str(self)!r}>"


def _polygon_vertices(points: Any) -> FloatArray:
    try:
        vertices = np.array(points, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"Invalid polygon vertices: {points!r}") from exc
    if vertices.ndim != 2 or vertices.shape[1] != 2:
        raise ValidationError("Polygon vertices must be a list of 2D points.")
    if len(vertices) < 3:
        raise ValidationError("A polygon needs at least 3 vertices.")
    if not np.all(np.isfinite(vertices)):
        raise ValidationError("Polygon vertices must be finite.")
    edges = np.roll(vertices, -1, axis=0) - vertices
    lengths = np.linalg.norm(edges, axis=1)
    scale = float(np.max(lengths))
    if np.any(lengths <= 1e-12 * max(scale, 1.0)):
        raise ValidationError("Polygon has repeated vertices.")
    turns = edges[:, 0] * np.roll(edges, -1, axis=0)[:, 1]
    turns -= edges[:, 1] * np.roll(edges, -1, axis=0)[:, 0]
    if np.any(np.abs(turns) <= 1e-12 * scale**2):
        raise ValidationError("Polygon has collinear consecutive vertices.")
    if np.any(turns < 0):
        raise ValidationError(
            "Polygon vertices must be in strictly convex counterclockwise position."
        )
    # Strictly positive turns can still wind around twice.
    angles = np.arctan2(edges[:, 1], edges[:, 0])
    winding = np.sum(np.mod(np.diff(np.append(angles, angles[0])), 2 * np.pi))
    if not math.isclose(winding, 2 * np.pi, rel_tol=1e-9):
        raise ValidationError("Polygon vertices wind around more than once.")
    return vertices


def _positive(value: Any, name: str) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"Invalid {name}: {value!r}") from exc
    if not number > 0 or not math.isfinite(number):
        raise ValidationError(f"The {name} must be positive, got: {value!r}")
    return number


def _simplex_vertices(n: int) -> FloatArray:
    vertices = -np.ones((n + 1, n))
    for i in range(n):
        vertices[i + 1, i] = n
    return vertices


def make_body(descriptor: Mapping[str, Any] | str | ConvexBody) -> ConvexBody:
    """
    Construct a body from a descriptor.

    The descriptor is a mapping (or a JSON document) with a ``kind`` key:

    * ``{"kind": "polygon", "vertices": [[x, y], ...]}``
    * ``{"kind": "box", "halfwidths": [a, b, ...], "center": [...]}``
    * ``{"kind": "disk", "radius": r, "center": [x, y]}``
    * ``{"kind": "simplex", "n": k}``

    The body is returned as given, not recentered.

    :raises ValidationError: for malformed or degenerate descriptors
    """
    if isinstance(descriptor, ConvexBody):
        return descriptor
    if isinstance(descriptor, str):
        try:
            descriptor = json.loads(descriptor)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"Invalid body descriptor: {exc}") from exc
    if not isinstance(descriptor, Mapping):
        raise ValidationError(f"Body descriptor must be an object, got: {descriptor!r}")
    try:
        kind = BodyKind(descriptor.get("kind"))
    except ValueError as exc:
        raise ValidationError(f"Unknown body kind: {descriptor.get('kind')!r}") from exc

    if kind is BodyKind.POLYGON:
        vertices = _polygon_vertices(descriptor.get("vertices"))
        return ConvexBody(kind, 2, vertices=_tuples(vertices))

    if kind is BodyKind.SIMPLEX:
        n = descriptor.get("n", 2)
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ValidationError(
                f"Simplex dimension must be a positive integer: {n!r}"
            )
        return ConvexBody(kind, n, vertices=_tuples(_simplex_vertices(n)))

    if kind is BodyKind.BOX:
        halfwidths = descriptor.get("halfwidths")
        if not isinstance(halfwidths, (list, tuple)) or not halfwidths:
            raise ValidationError("A box needs a non-empty list of half-widths.")
        widths = tuple(_positive(a, "half-width") for a in halfwidths)
        center = _center(descriptor.get("center"), len(widths))
        return ConvexBody(kind, len(widths), halfwidths=widths, center=center)

    radius = _positive(descriptor.get("radius"), "radius")
    center = _center(descriptor.get("center"), 2)
    return ConvexBody(kind, 2, radius=radius, center=center)


def load_body(path: Path) -> ConvexBody:
    """
    Load a body descriptor from a JSON file.
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"Cannot read body file {path}: {exc}") from exc
    return make_body(text)


def _center(value: Any, dim: int) -> tuple[float, ...]:
    if value is None:
        return (0.0,) * dim
    try:
        center = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"Invalid center: {value!r}") from exc
    if center.shape != (dim,) or not np.all(np.isfinite(center)):
        raise ValidationError(f"Center must be a finite {dim}D point: {value!r}")
    return tuple(float(c) for c in center)


def _tuples(array: FloatArray) -> tuple[tuple[float, ...], ...]:
    return tuple(tuple(float(c) for c in row) for row in array)


def regular_polygon(m: int, radius: float = 1.0, *, phase: float = 0.0) -> ConvexBody:
    """
    Regular polygon with ``m`` vertices on the circle of the given radius.
    """
    if m < 3:
        raise ValidationError(f"A polygon needs at least 3 vertices, got: {m}")
    angle = phase + 2 * np.pi * np.arange(m) / m
    points = radius * np.column_stack([np.cos(angle), np.sin(angle)])
    return make_body({"kind": "polygon", "vertices": points.tolist()})


def hull_polygon(points: PointLike | Sequence[PointLike]) -> ConvexBody:
    """
    Convex hull of planar points as a counterclockwise polygon.
    """
    array = np.asarray(points, dtype=float)
    if array.ndim != 2 or array.shape[1] != 2 or len(array) < 3:
        raise ValidationError("The hull needs at least three 2D points.")
    try:
        hull = ConvexHull(array)
    except Exception as exc:  # scipy raises QhullError for flat input
        raise ValidationError(f"Degenerate point set: {exc}") from exc
    # Qhull lists 2D hull vertices counterclockwise.
    return make_body({"kind": "polygon", "vertices": array[hull.vertices].tolist()})


def random_polygon(m: int, *, seed: int = 0, radius: float = 1.0) -> ConvexBody:
    """
    Random convex polygon with ``m`` vertices on a circle.

    Consecutive angles are at least a quarter of the mean gap apart.
    """
    if m < 3:
        raise ValidationError(f"A polygon needs at least 3 vertices, got: {m}")
    rng = np.random.default_rng(seed)
    gaps = 0.25 + rng.random(m)
    angle = 2 * np.pi * np.cumsum(gaps) / np.sum(gaps)
    points = radius * np.column_stack([np.cos(angle), np.sin(angle)])
    return hull_polygon(points)


def area(body: ConvexBody) -> float:
    """
    Area (volume) of the body.
    """
    if body.kind is BodyKind.POLYGON:
        return _polygon_area_centroid(body.vertex_array)[0]
    if body.kind is BodyKind.SIMPLEX:
        n = body.dim
        return float((n + 1) ** n / factorial(n, exact=True))
    if body.kind is BodyKind.BOX:
        return float(np.prod(2 * np.array(body.halfwidths)))
    return math.pi * body.radius**2


def _polygon_area_centroid(vertices: FloatArray) -> tuple[float, FloatArray]:
    # Shifting by the first vertex keeps the triangle fan well conditioned.
    origin = vertices[0]
    v = vertices - origin
    w = np.roll(v, -1, axis=0)
    cross = v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]
    twice_area = float(np.sum(cross))
    centroid = np.sum((v + w) * cross[:, None], axis=0) / (3 * twice_area)
    return twice_area / 2, centroid + origin


def barycenter(body: ConvexBody) -> FloatArray:
    """
    Barycenter (center of mass of the uniform measure) of the body.
    """
    if body.kind is BodyKind.POLYGON:
        return _polygon_area_centroid(body.vertex_array)[1]
    if body.kind is BodyKind.SIMPLEX:
        return np.mean(body.vertex_array, axis=0)
    return body.center_array


def recenter(body: ConvexBody) -> ConvexBody:
    """
    Translate the body so that its barycenter is the origin.
    """
    shift = barycenter(body)
    if not np.any(shift):
        return body
    logger.debug(f"Recentering {body} by {shift.tolist()}")
    if body.kind in (BodyKind.POLYGON, BodyKind.SIMPLEX):
        vertices = body.vertex_array - shift
        if body.kind is BodyKind.SIMPLEX:
            # A translated simplex is a polygon (or a general polytope).
            if body.dim != 2:
                raise ValidationError("Only canonical simplices exist in n > 2.")
            return ConvexBody(BodyKind.POLYGON, 2, vertices=_tuples(vertices))
        return dataclasses.replace(body, vertices=_tuples(vertices))
    return dataclasses.replace(body, center=(0.0,) * body.dim)


def support_values(body: ConvexBody, x: PointLike | FloatArray) -> FloatArray:
    """
    Support function :math:`h_K(x) = \\max_{y \\in K} \\langle x, y \\rangle`
    evaluated at arbitrary (not necessarily unit) vectors.

    Accepts an array of shape ``(..., dim)`` and returns shape ``(...)``.
    """
    points = np.asarray(x, dtype=float)
    if points.shape[-1] != body.dim:
        raise ValidationError(f"Expected {body.dim}D vectors, got shape {points.shape}")
    if body.kind in (BodyKind.POLYGON, BodyKind.SIMPLEX):
        return np.max(points @ body.vertex_array.T, axis=-1)
    offset = points @ body.center_array
    if body.kind is BodyKind.BOX:
        return offset + np.abs(points) @ np.array(body.halfwidths)
    return offset + body.radius * np.linalg.norm(points, axis=-1)


def support(body: ConvexBody, direction: PointLike) -> float:
    """
    Support function of the body in a unit direction.

    :raises ValidationError: if the direction is zero or not a unit vector
    """
    theta = np.asarray(direction, dtype=float)
    norm = float(np.linalg.norm(theta))
    if norm == 0:
        raise ValidationError("Support direction must be nonzero.")
    if abs(norm - 1) > 1e-12:
        raise ValidationError(f"Support direction must be a unit vector, |θ| = {norm}")
    return float(support_values(body, theta))


def outer_radius(body: ConvexBody) -> float:
    """
    Smallest :math:`R` such that the body lies in the ball :math:`B_R(0)`.
    """
    if body.kind in (BodyKind.POLYGON, BodyKind.SIMPLEX):
        return float(np.max(np.linalg.norm(body.vertex_array, axis=1)))
    if body.kind is BodyKind.BOX:
        corner = np.abs(body.center_array) + np.array(body.halfwidths)
        return float(np.linalg.norm(corner))
    return float(np.linalg.norm(body.center_array)) + body.radius


def contains(
    body: ConvexBody,
    points: PointLike | FloatArray,
    *,
    dilation: float = 1.0,
    tolerance: float = 1e-12,
) -> Any:
    """
    Test membership in the body dilated about the origin.

    Accepts an array of shape ``(..., dim)``; returns booleans of shape ``(...)``.
    """
    p = np.asarray(points, dtype=float)
    if body.kind is BodyKind.POLYGON or (
        body.kind is BodyKind.SIMPLEX and body.dim == 2
    ):
        v = dilation * body.vertex_array
        w = np.roll(v, -1, axis=0)
        edge = w - v
        rel = p[..., None, :] - v
        cross = edge[:, 0] * rel[..., 1] - edge[:, 1] * rel[..., 0]
        scale = np.linalg.norm(edge, axis=1)
        return np.all(cross >= -tolerance * scale, axis=-1)
    if body.kind is BodyKind.SIMPLEX:
        return (np.sum(p, axis=-1) <= dilation + tolerance) & np.all(
            p >= -dilation - tolerance, axis=-1
        )
    if body.kind is BodyKind.BOX:
        rel = np.abs(p - dilation * body.center_array)
        return np.all(rel <= dilation * np.array(body.halfwidths) + tolerance, axis=-1)
    dist = np.linalg.norm(p - dilation * body.center_array, axis=-1)
    return dist <= dilation * body.radius + tolerance


def gauge(body: ConvexBody, points: PointLike | FloatArray) -> FloatArray:
    """
    Minkowski gauge: the smallest :math:`t \\ge 0` with :math:`p \\in tK`.

    The origin must be an interior point of the body.
    Accepts an array of shape ``(..., dim)``; returns shape ``(...)``.
    """
    p = np.asarray(points, dtype=float)
    if body.kind is BodyKind.POLYGON or (
        body.kind is BodyKind.SIMPLEX and body.dim == 2
    ):
        v = body.vertex_array
        edge = np.roll(v, -1, axis=0) - v
        normals = np.column_stack([edge[:, 1], -edge[:, 0]])
        offsets = np.sum(normals * v, axis=1)
        if np.any(offsets <= 0):
            raise ValidationError("The origin is not an interior point of the body.")
        return np.max((p @ normals.T) / offsets, axis=-1)  # type: ignore[no-any-return]
    if body.kind is BodyKind.SIMPLEX:
        return (  # type: ignore[no-any-return]
            np.maximum(np.sum(p, axis=-1), np.max(-p, axis=-1))
        )
    c = body.center_array
    if body.kind is BodyKind.BOX:
        a = np.array(body.halfwidths)
        if np.any(np.abs(c) >= a):
            raise ValidationError("The origin is not an interior point of the body.")
        return (  # type: ignore[no-any-return]
            np.max(np.maximum(p / (c + a), -p / (a - c)), axis=-1)
        )
    k = body.radius**2 - float(c @ c)
    if k <= 0:
        raise ValidationError("The origin is not an interior point of the body.")
    pc = p @ c
    return (  # type: ignore[no-any-return]
        (np.sqrt(pc**2 + k * np.sum(p**2, axis=-1)) - pc) / k
    )
