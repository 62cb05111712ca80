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
from typing import Any

import numpy as np
from scipy.integrate import solve_ivp

from .._exceptions import JetError, ValidationError
from .._typing import FloatArray, PointLike
from ..potentials import MetricData, Potential

logger = logging.getLogger("kelab.riemannian")

#: Allowed deviation of the initial speed from one.
UNIT_SPEED_TOLERANCE = 1e-8


def metric_or_none(potential: Potential, x: FloatArray) -> MetricData | None:
    """
    Metric data at ``x``, or ``None`` outside the supported region.
    """
    try:
        return potential.metric_data(x)
    except (JetError, ValidationError):
        return None


def speed(data: MetricData, velocity: FloatArray) -> float:
    """
    :math:`|v|_h`.
    """
    return float(np.sqrt(velocity @ data.hessian @ velocity))


def geodesic_rhs(potential: Potential) -> Any:
    """
    First-order form of the geodesic equation
    :math:`\\ddot\\gamma^k = -\\Gamma^k_{ij}\\dot\\gamma^i\\dot\\gamma^j`
    with :math:`\\Gamma^k_{ij} = \\frac12 \\Phi^{kl}\\Phi_{lij}`.

    Returns zeros outside the supported region; callers stop there
    with :func:`exit_event`.
    """
    dim = potential.dim

    def rhs(s: float, y: FloatArray) -> FloatArray:
        x, v = y[:dim], y[dim:]
        data = metric_or_none(potential, x)
        if data is None:
            return np.zeros_like(y)
        force = np.einsum("lij,i,j->l", data.third, v, v)
        acceleration = -np.linalg.solve(data.hessian, force)
        return np.concatenate([v, acceleration / 2])

    return rhs


def exit_event(potential: Potential) -> Any:
    def event(s: float, y: FloatArray) -> float:
        return 1.0 if potential.supports(y[: potential.dim]) else -1.0

    event.terminal = True  # type: ignore[attr-defined]
    event.direction = -1  # type: ignore[attr-defined]
    return event


@dataclasses.dataclass(frozen=True, eq=False)
class GeodesicPath:
    """
    Samples of a unit-speed geodesic.
    """

    #: Arc length parameter.
    s: FloatArray

    positions: FloatArray

    velocities: FloatArray

    #: :math:`|\dot\gamma|_h` at the samples.
    speed: FloatArray

    #: Whether the path reached the requested length inside the supported region.
    complete: bool

    @property
    def length(self) -> float:
        return float(self.s[-1])

    @property
    def speed_drift(self) -> float:
        return float(np.max(np.abs(self.speed - self.speed[0])))

    def rows(self) -> list[tuple[float, ...]]:
        """
        Rows ``(s, x1, x2, v1, v2, speed)`` for CSV output.
        """
        return [
            (float(s), *map(float, x), *map(float, v), float(c))
            for s, x, v, c in zip(self.s, self.positions, self.velocities, self.speed)
        ]


def integrate_geodesic(
    potential: Potential,
    x0: FloatArray,
    v0: FloatArray,
    s_eval: FloatArray,
    *,
    rtol: float = 1e-11,
    atol: float = 1e-12,
) -> Any:
    """
    Integrate a geodesic with DOP853 and return the ``solve_ivp`` result.
    """
    return solve_ivp(
        geodesic_rhs(potential),
        (0.0, float(s_eval[-1])),
        np.concatenate([x0, v0]),
        method="DOP853",
        t_eval=s_eval,
        events=exit_event(potential),
        rtol=rtol,
        atol=atol,
    )


def geodesic(
    potential: Potential,
    x0: PointLike,
    v0: PointLike,
    length: float,
    *,
    samples: int = 101,
) -> GeodesicPath:
    """
    Geodesic of the Hessian metric from ``x0`` with unit initial velocity ``v0``.

    A path that leaves the supported region is truncated and marked
    incomplete.

    :raises ValidationError: if ``|v0|_h`` is not one or ``x0`` is not supported
    """
    x = np.asarray(x0, dtype=float)
    v = np.asarray(v0, dtype=float)
    if length <= 0:
        raise ValidationError(f"Length must be positive, got: {length}")
    data = metric_or_none(potential, x)
    if data is None:
        raise ValidationError(f"{potential.descriptor} has no metric at {x.tolist()}")
    if abs(speed(data, v) - 1) > UNIT_SPEED_TOLERANCE:
        raise ValidationError(
            f"Initial velocity must have unit length, got {speed(data, v)}"
        )

    result = integrate_geodesic(potential, x, v, np.linspace(0.0, length, samples))
    complete = result.status == 0
    if not complete:
        logger.warning(f"Geodesic from {x.tolist()} left the supported region")
    dim = potential.dim
    positions, velocities = result.y[:dim].T, result.y[dim:].T
    speeds = []
    for p, w in zip(positions, velocities):
        point_data = metric_or_none(potential, p)
        speeds.append(np.nan if point_data is None else speed(point_data, w))
    return GeodesicPath(result.t, positions, velocities, np.array(speeds), complete)
