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

import logging

import numpy as np

from .._exceptions import SolverError, ValidationError
from .._typing import FloatArray
from ..bodies import BodyKind, ConvexBody, area
from ..potentials import RadialPotential, default_ball_profile

logger = logging.getLogger("kelab.solver")

#: Newton iterations allowed for the Legendre transform.
LEGENDRE_ITERATIONS = 200

#: A Legendre step covers at most this fraction of the distance to a facet.
FRACTION_TO_BOUNDARY = 0.9

#: Convergence threshold on the squared Newton decrement.
DECREMENT_TOLERANCE = 1e-20

#: Gauss-Legendre nodes per direction on each triangle of the fan.
QUADRATURE_NODES = 24


def polygon_vertices(body: ConvexBody) -> FloatArray:
    """
    Counterclockwise vertices of a planar polygon, simplex or box.
    """
    if body.dim != 2 or body.kind is BodyKind.DISK:
        raise ValidationError(f"Expected a planar polygon, got {body}.")
    if body.kind is BodyKind.BOX:
        a, b = body.halfwidths
        corners = np.array([[a, b], [-a, b], [-a, -b], [a, -b]])
        return body.center_array + corners  # type: ignore[no-any-return]
    return body.vertex_array


def polar_normals(body: ConvexBody) -> FloatArray:
    """
    Facet normals :math:`n_i` scaled so that the body is
    :math:`\\{p : \\langle p, n_i \\rangle \\le 1\\}`.

    :raises ValidationError: if the origin is not an interior point
    """
    v = polygon_vertices(body)
    edge = np.roll(v, -1, axis=0) - v
    normals = np.column_stack([edge[:, 1], -edge[:, 0]])
    offsets = np.sum(normals * v, axis=1)
    if np.any(offsets <= 0):
        raise ValidationError("The origin is not an interior point of the body.")
    return normals / offsets[:, None]  # type: ignore[no-any-return]


def _hessian(normals: FloatArray, slack: FloatArray) -> FloatArray:
    return np.einsum(  # type: ignore[no-any-return]
        "...i,ia,ib->...ab", 1 / slack, normals, normals
    )


def legendre_points(normals: FloatArray, points: FloatArray) -> FloatArray:
    """
    Solve :math:`\\nabla u(p) = x` for :math:`u(p) = \\sum_i \\ell_i \\log \\ell_i`,
    where :math:`\\ell_i = 1 - \\langle p, n_i \\rangle`.

    Damped Newton iteration from the origin, vectorized over the points;
    steps are shortened so that every :math:`\\ell_i` stays positive.

    :raises SolverError: if some point does not converge
    """
    x = np.asarray(points, dtype=float).reshape(-1, 2)
    p = np.zeros_like(x)
    for iteration in range(LEGENDRE_ITERATIONS):
        slack = 1 - p @ normals.T
        gradient = -(np.log(slack) + 1) @ normals - x
        hessian = _hessian(normals, slack)
        step = -np.linalg.solve(hessian, gradient[..., None])[..., 0]
        decrement = -np.sum(gradient * step, axis=-1)
        if np.max(decrement) < DECREMENT_TOLERANCE:
            logger.debug(f"Legendre transform converged after {iteration} steps")
            return p.reshape(np.shape(points))
        rate = step @ normals.T
        with np.errstate(divide="ignore"):
            limit = np.where(rate > 0, slack / rate, np.inf)
        length = np.minimum(1.0, FRACTION_TO_BOUNDARY * np.min(limit, axis=-1))
        p = p + length[:, None] * step
    raise SolverError(
        f"The Legendre transform did not converge in {LEGENDRE_ITERATIONS} steps."
    )


def _mass_density(normals: FloatArray, p: FloatArray) -> FloatArray:
    # e^{-phi} det D^2 phi pulled back to the body, smooth up to the facets.
    slack = 1 - p @ normals.T
    hessian = _hessian(normals, slack)
    return (  # type: ignore[no-any-return]
        np.exp(p @ np.sum(normals, axis=0))
        * np.prod(slack, axis=-1)
        * np.linalg.det(hessian)
    )


def mass_constant(body: ConvexBody) -> float:
    """
    The constant :math:`c` with :math:`\\int e^{-(\\phi + c)} = |K|`,
    where :math:`\\phi` is the Legendre transform of :math:`u`.

    The integral is computed on the body, over a fan of triangles
    from the origin with collapsed Gauss-Legendre rules.
    """
    normals = polar_normals(body)
    nodes, weights = np.polynomial.legendre.leggauss(QUADRATURE_NODES)
    s = (nodes + 1) / 2
    S, T = np.meshgrid(s, s, indexing="ij")
    W = np.outer(weights, weights) / 4 * S
    vertices = polygon_vertices(body)
    total = 0.0
    for a, b in zip(vertices, np.roll(vertices, -1, axis=0)):
        points = S[..., None] * (a + T[..., None] * (b - a))
        jacobian = abs(a[0] * b[1] - a[1] * b[0])
        total += jacobian * float(np.sum(W * _mass_density(normals, points)))
    return float(np.log(total / area(body)))


def asymptotic_values(body: ConvexBody, points: FloatArray) -> FloatArray:
    """
    Smooth strictly convex model of the Kähler-Einstein potential with
    the right behaviour at infinity: gradients fill the body and
    :math:`\\log\\det D^2\\Phi + \\Phi` stays bounded.

    Polygons use :math:`\\phi(x) + c`, where :math:`\\phi` is the Legendre
    transform of :math:`\\sum_i \\ell_i \\log \\ell_i` and :math:`c`
    normalizes the mass to :math:`|K|`; the model is exact for the
    canonical triangle and for centered boxes.
    Centered disks use the radial potential.

    Accepts an array of shape ``(..., 2)`` and returns shape ``(...)``.

    :raises ValidationError: for disks off the origin, bodies not containing
        the origin, or non-planar bodies
    """
    points = np.asarray(points, dtype=float)
    if body.kind is BodyKind.DISK:
        if body.dim != 2 or np.any(body.center_array):
            raise ValidationError(f"Expected a centered disk, got {body}.")
        return RadialPotential(default_ball_profile(2), scale=body.radius).values(
            points
        )
    normals = polar_normals(body)
    p = legendre_points(normals, points)
    slack = 1 - p @ normals.T
    u = np.sum(slack * np.log(slack), axis=-1)
    values = np.sum(points * p, axis=-1) - u + mass_constant(body)
    return values  # type: ignore[no-any-return]
