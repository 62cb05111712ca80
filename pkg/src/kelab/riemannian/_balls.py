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
import logging
import math
from typing import Any, Sequence

import numpy as np
import scipy.fft

from .._exceptions import BallEscapeError, ValidationError
from .._parallel import parallel_map
from .._typing import FloatArray, PointLike
from ..potentials import Potential
from ._geodesics import integrate_geodesic, metric_or_none

logger = logging.getLogger("kelab.riemannian")

#: Gauss-Legendre nodes per radius.
RADIAL_NODES = 16

#: Integration tolerances of the geodesics of a fan.
FAN_RTOL = 1e-9
FAN_ATOL = 1e-10


def cap_area(r: float) -> float:
    """
    Area of the geodesic ball of radius ``r`` on the sphere of
    curvature 1/12: :math:`24\\pi(1 - \\cos(r/\\sqrt{12}))`.
    """
    return 24 * math.pi * (1 - math.cos(r / math.sqrt(12)))


@dataclasses.dataclass(frozen=True)
class BallAreas:
    """
    Areas of geodesic balls about one center.
    """

    center: FloatArray
    radii: FloatArray
    areas: FloatArray

    #: Whether the geodesic fan is embedded up to each radius.
    embedded: tuple[bool, ...]

    #: Number of rays.
    rays: int

    def rows(self) -> list[tuple[float, float, float, bool]]:
        return [
            (float(r), float(a), float(math.pi * r * r), e)
            for r, a, e in zip(self.radii, self.areas, self.embedded)
        ]


def _shoot(
    potential: Potential, center: FloatArray, velocity: FloatArray, s_eval: FloatArray
) -> tuple[FloatArray, FloatArray]:
    result = integrate_geodesic(
        potential, center, velocity, s_eval, rtol=FAN_RTOL, atol=FAN_ATOL
    )
    if result.status != 0 or result.y.shape[1] != len(s_eval):
        raise BallEscapeError(
            f"A geodesic from {center.tolist()} leaves the supported region "
            f"before length {s_eval[-1]}"
        )
    dim = potential.dim
    return result.y[:dim].T, result.y[dim:].T


def geodesic_balls(
    potential: Potential,
    x: PointLike,
    radii: Sequence[float],
    *,
    rays: int = 360,
    workers: int = 1,
) -> BallAreas:
    """
    Areas of the geodesic balls :math:`B(x, r)` of the Hessian metric.

    A fan of ``rays`` geodesics is shot once to the largest radius.
    The area is the integral of
    :math:`\\sqrt{\\det D^2\\Phi}\\,|\\det(\\partial_\\rho X, \\partial_\\theta X)|`
    over polar coordinates :math:`(\\rho, \\theta)` of the
    exponential map, by Gauss-Legendre quadrature in :math:`\\rho` and the
    trapezoidal rule in :math:`\\theta`, with the angular derivative by FFT.

    :raises BallEscapeError: if a ray leaves the supported region
    """
    center = np.asarray(x, dtype=float)
    if potential.dim != 2:
        raise ValidationError("Geodesic balls are computed in the plane.")
    radii_array = np.asarray(sorted(radii), dtype=float)
    if radii_array.size == 0 or radii_array[0] <= 0:
        raise ValidationError(f"Radii must be positive, got: {list(radii)}")
    data = metric_or_none(potential, center)
    if data is None:
        raise BallEscapeError(
            f"{potential.descriptor} has no metric at {center.tolist()}"
        )

    nodes, weights = np.polynomial.legendre.leggauss(RADIAL_NODES)
    s_nodes = [(nodes + 1) * r / 2 for r in radii_array]
    s_eval = np.unique(np.concatenate([[0.0], *s_nodes]))

    basis = np.linalg.inv(np.linalg.cholesky(data.hessian)).T
    theta = 2 * np.pi * np.arange(rays) / rays
    velocities = [basis @ np.array([math.cos(t), math.sin(t)]) for t in theta]
    fan = parallel_map(
        lambda v: _shoot(potential, center, v, s_eval), velocities, workers=workers
    )
    X = np.stack([positions for positions, _ in fan], axis=1)  # (s, ray, 2)
    V = np.stack([velocity for _, velocity in fan], axis=1)
    frequencies = scipy.fft.fftfreq(rays, d=1.0 / rays)
    spectrum = scipy.fft.fft(X, axis=1)
    dtheta = np.real(
        scipy.fft.ifft(1j * frequencies[None, :, None] * spectrum, axis=1)
    )
    jacobian = V[..., 0] * dtheta[..., 1] - V[..., 1] * dtheta[..., 0]
    volume = np.array(
        [
            [math.sqrt(max(np.linalg.det(_metric(potential, p)), 0.0)) for p in row]
            for row in X
        ]
    )
    density = volume * np.abs(jacobian)

    areas = []
    embedded = []
    for r, s in zip(radii_array, s_nodes):
        index = np.searchsorted(s_eval, s)
        radial = np.sum(density[index], axis=1) * (2 * np.pi / rays)
        areas.append(float(np.sum(weights * radial) * r / 2))
        upto = s_eval <= r
        inside = bool(np.all(jacobian[upto][1:] > 0))
        if not inside:
            logger.warning(
                f"Geodesic fan at {center.tolist()} is not embedded at radius {r}"
            )
        embedded.append(inside)
    return BallAreas(center, radii_array, np.array(areas), tuple(embedded), rays)


def _metric(potential: Potential, x: FloatArray) -> FloatArray:
    data = metric_or_none(potential, x)
    if data is None:
        raise BallEscapeError(f"No metric at {x.tolist()}")
    return data.hessian


def ball_area(
    potential: Potential, x: PointLike, r: float, *, rays: int = 360, workers: int = 1
) -> float:
    """
    Area of the geodesic ball :math:`B(x, r)`; see :func:`geodesic_balls`.
    """
    return float(geodesic_balls(potential, x, [r], rays=rays, workers=workers).areas[0])


@dataclasses.dataclass(frozen=True)
class CurvatureEstimate:
    """
    Curvature at a point from the area defect of small geodesic balls.
    """

    center: FloatArray
    radii: FloatArray

    #: :math:`12(\pi r^2 - A(r)) / (\pi r^4)` per radius.
    defects: FloatArray

    #: Defects extrapolated to :math:`r = 0`.
    estimate: float

    cap_radii: FloatArray

    #: :math:`A(r) - 24\pi(1 - \cos(r/\sqrt{12}))` per cap radius.
    cap_margins: FloatArray

    areas: BallAreas

    def to_json(self) -> dict[str, Any]:
        return {
            "center": self.center.tolist(),
            "radii": self.radii.tolist(),
            "defects": self.defects.tolist(),
            "estimate": self.estimate,
            "cap_radii": self.cap_radii.tolist(),
            "cap_margins": self.cap_margins.tolist(),
            "embedded": list(self.areas.embedded),
        }


def curvature_from_areas(
    potential: Potential,
    x: PointLike,
    radii: Sequence[float] = (0.2, 0.4, 0.6),
    cap_radii: Sequence[float] = (0.5, 1.0),
    *,
    rays: int = 360,
    workers: int = 1,
) -> CurvatureEstimate:
    """
    Estimate the sectional curvature :math:`R(x)` from
    :math:`A(r) = \\pi r^2 (1 - R r^2/12 + O(r^4))`, extrapolating the
    defects polynomially in :math:`r^2`, and compare the areas at
    ``cap_radii`` with spherical caps of curvature 1/12.
    """
    radii_array = np.asarray(radii, dtype=float)
    caps = np.asarray(cap_radii, dtype=float)
    all_radii = np.concatenate([radii_array, caps]).tolist()
    balls = geodesic_balls(potential, x, all_radii, rays=rays, workers=workers)
    area_of = dict(zip(balls.radii.tolist(), balls.areas.tolist()))
    areas = np.array([area_of[r] for r in radii_array.tolist()])
    defects = 12 * (np.pi * radii_array**2 - areas) / (np.pi * radii_array**4)
    if len(radii_array) > 1:
        coefficients = np.polyfit(radii_array**2, defects, len(radii_array) - 1)
        estimate = float(coefficients[-1])
    else:
        estimate = float(defects[0])
    margins = np.array([area_of[r] - cap_area(r) for r in caps.tolist()])
    logger.info(f"Curvature from areas at {balls.center.tolist()}: {estimate:.6f}")
    return CurvatureEstimate(
        balls.center, radii_array, defects, estimate, caps, margins, balls
    )
