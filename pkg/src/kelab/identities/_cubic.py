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
import math

import numpy as np

from .._exceptions import ValidationError
from .._typing import FloatArray
from ..geometry import contract

#: Angles of the initial search.
GRID_ANGLES = 720

_POLISH_STEPS = 8


@dataclasses.dataclass(frozen=True)
class CubicMax:
    """
    Maximum of :math:`T(e, e, e)` over unit vectors of the plane.
    """

    #: Maximizer.
    v: FloatArray

    #: Unit vector orthogonal to :attr:`v`.
    a: FloatArray

    #: :math:`T(v, v, v)`, never negative.
    value: float

    #: :math:`T(a, v, v)`, zero at a critical point.
    first_order: float

    #: :math:`T(v, v, v) - 2T(v, a, a)`, non-negative at a maximum.
    margin: float

    #: Distance of :attr:`value` to the next local maximum
    #: (to the minimum if there is no other one); zero if ``T = 0``.
    gap: float


def _frame(theta: float) -> tuple[FloatArray, FloatArray]:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([c, s]), np.array([-s, c])


def _polish(T: FloatArray, theta: float) -> float:
    for _ in range(_POLISH_STEPS):
        e, a = _frame(theta)
        first = 3 * float(contract(T, a, e, e))
        second = 6 * float(contract(T, a, a, e)) - 3 * float(contract(T, e, e, e))
        if second >= 0:
            break
        step = first / second
        theta -= step
        if abs(step) < 1e-15:
            break
    return theta


def cubic_max(T: FloatArray) -> CubicMax:
    """
    Maximize :math:`p(\\theta) = T(e_\\theta, e_\\theta, e_\\theta)` for a
    symmetric 3-tensor in the plane.

    :math:`p` is a trigonometric polynomial of degree 3: its maxima are
    bracketed on a grid of :data:`GRID_ANGLES` angles and polished by
    Newton's method on :math:`p' = 3T(a, e, e)`,
    :math:`p'' = 6T(a, a, e) - 3T(e, e, e)`.
    """
    T = np.asarray(T, dtype=float)
    if T.shape != (2, 2, 2):
        raise ValidationError(f"Expected a 2D 3-tensor, got shape {T.shape}")
    if not np.any(T):
        v, a = _frame(0.0)
        return CubicMax(v, a, 0.0, 0.0, 0.0, 0.0)

    theta = 2 * np.pi * np.arange(GRID_ANGLES) / GRID_ANGLES
    E = np.column_stack([np.cos(theta), np.sin(theta)])
    p = np.einsum("ijk,ni,nj,nk->n", T, E, E, E)
    peaks = np.flatnonzero((p > np.roll(p, 1)) & (p >= np.roll(p, -1)))
    if peaks.size == 0:
        peaks = np.array([int(np.argmax(p))])

    maxima = []
    for k in peaks:
        angle = _polish(T, float(theta[k]))
        e, _ = _frame(angle)
        polished = float(contract(T, e, e, e))
        if polished < p[k]:
            angle, polished = float(theta[k]), float(p[k])
        maxima.append((polished, angle))
    maxima.sort(reverse=True)
    value, angle = maxima[0]
    if len(maxima) > 1:
        gap = value - maxima[1][0]
    else:
        gap = value - float(np.min(p))

    v, a = _frame(angle)
    return CubicMax(
        v=v,
        a=a,
        value=value,
        first_order=float(contract(T, a, v, v)),
        margin=value - 2 * float(contract(T, v, a, a)),
        gap=gap,
    )


def orthonormal_third(
    metric: FloatArray, third: FloatArray
) -> tuple[FloatArray, FloatArray]:
    """
    Components of :math:`\\Phi_{ijk}` in an orthonormal basis of the metric.

    Returns the basis (as columns) and the transformed tensor.
    """
    cholesky = np.linalg.cholesky(metric)
    basis = np.linalg.inv(cholesky).T
    return basis, np.einsum("abc,ai,bj,ck->ijk", third, basis, basis, basis)
