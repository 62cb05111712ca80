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
import math
from typing import Callable

import numpy as np
import scipy.linalg

from .._exceptions import UnsupportedOrderError
from .._typing import FloatArray, PointLike
from ..geometry import fd_hessian
from ..potentials import JetSource, Potential
from ._cubic import cubic_max, orthonormal_third
from ._report import CheckSet

logger = logging.getLogger("kelab.identities")

#: Margins down to minus this value pass (finite-difference error).
FD_TOLERANCE = 1e-4

#: The maximizer is unique if the next local maximum is lower by this much.
MIN_GAP = 1e-6

#: Largest angle between maximizers across the stencil, in radians.
MAX_TURN = 0.1

MAXIMUM_CHECKS = ("third_maximum", "third_maximum_square", "g_maximum")


class _Maximum:
    def __init__(self, potential: Potential, x: FloatArray) -> None:
        data = potential.metric_data(x)
        basis, T = orthonormal_third(data.hessian, data.third)
        result = cubic_max(T)
        #: :math:`f = \max_{|e| = 1} \Phi_{eee}`.
        self.f = result.value
        self.gap = result.gap
        direction = basis @ result.v
        self.direction = direction / np.linalg.norm(direction)
        self.metric = data.hessian
        inverse = np.linalg.inv(data.hessian)
        g = np.einsum("iab,ac,bd,jcd->ij", data.third, inverse, inverse, data.third)
        #: Largest eigenvalue of :math:`g` against the metric.
        self.g_norm = float(scipy.linalg.eigh(g, data.hessian, eigvals_only=True)[-1])


def check_prop54(
    potential: Potential,
    x: PointLike,
    step: float = 1e-3,
    *,
    tolerance: float = FD_TOLERANCE,
) -> CheckSet:
    """
    Maximum-principle inequalities for :math:`f = \\max_{|e| = 1} \\Phi_{eee}`:

    .. math::

        Lf \\ge \\tfrac12 f + \\tfrac14 f^3, \\qquad
        L(f^2) \\ge \\tfrac12 f^4, \\qquad
        L\\|g\\| \\ge \\|g\\| + \\tfrac12 \\|g\\|^2,

    with :math:`L = \\Phi^{ij}\\partial_i\\partial_j` by central differences
    of the metric data. Points where the maximizer is not unique, or turns
    across the stencil, are skipped.

    :raises UnsupportedOrderError: for grid potentials
    """
    if potential.source is JetSource.GRID:
        raise UnsupportedOrderError(
            "Maximum-principle checks need analytic metric data."
        )
    point = np.asarray(x, dtype=float)
    checks = CheckSet(tolerance)
    center = _Maximum(potential, point)
    if potential.dim != 2 or center.gap < MIN_GAP * max(1.0, center.f):
        checks.skip_all(MAXIMUM_CHECKS, "non-unique maximizer")
        return checks

    cache: dict[tuple[float, ...], _Maximum] = {}

    def maximum(y: FloatArray) -> _Maximum:
        key = tuple(y.tolist())
        if key not in cache:
            cache[key] = _Maximum(potential, y)
        return cache[key]

    def field(select: Callable[[_Maximum], float]) -> Callable[[FloatArray], float]:
        return lambda y: select(maximum(y))

    hessian_f = fd_hessian(field(lambda m: m.f), point, center.f, step)
    for m in cache.values():
        turn = math.acos(min(1.0, abs(float(m.direction @ center.direction))))
        if turn > MAX_TURN or m.gap < MIN_GAP * max(1.0, m.f):
            logger.debug(f"Maximizer switches near {point.tolist()}")
            checks.skip_all(MAXIMUM_CHECKS, "maximizer switches across the stencil")
            return checks

    inverse = np.linalg.inv(center.metric)
    f = center.f
    lap_f = float(np.sum(inverse * hessian_f))
    hessian_f2 = fd_hessian(field(lambda m: m.f**2), point, f**2, step)
    lap_f2 = float(np.sum(inverse * hessian_f2))
    g = center.g_norm
    hessian_g = fd_hessian(field(lambda m: m.g_norm), point, g, step)
    lap_g = float(np.sum(inverse * hessian_g))

    checks.bound("third_maximum", f / 2 + f**3 / 4, lap_f, tolerance=tolerance)
    checks.bound("third_maximum_square", f**4 / 2, lap_f2, tolerance=tolerance)
    checks.bound("g_maximum", g + g**2 / 2, lap_g, tolerance=tolerance)
    return checks
