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
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .._exceptions import ValidationError
from .._typing import FloatArray, PointLike
from ..bodies import ConvexBody, make_body
from ._base import MetricData, Potential
from ._jets import Jet, JetSource
from ._taylor import TaylorAlgebra

# Rounding of the nested algorithmic differentiation.
_AD_ERROR = 1e-13


class ClosedFormPotential(Potential):
    source = JetSource.CLOSED_FORM
    max_order = 5

    def __init__(self, n: int) -> None:
        if not isinstance(n, int) or n < 1:
            raise ValidationError(f"Dimension must be a positive integer, got: {n!r}")
        self.dim = n

    def supports(self, x: PointLike) -> bool:
        return bool(np.all(np.isfinite(np.asarray(x, dtype=float))))

    def _field(self, algebra: TaylorAlgebra, x: FloatArray) -> FloatArray:
        raise NotImplementedError

    def _jet(self, x: FloatArray, order: int) -> Jet:
        algebra = TaylorAlgebra.get(self.dim, order)
        derivs = algebra.derivatives(self._field(algebra, x))
        return Jet(
            point=x,
            order=order,
            derivs=tuple(derivs),
            source=self.source,
            est_error=(_AD_ERROR,) * (order + 1),
        )


class SimplexPotential(ClosedFormPotential):
    """
    Potential of the simplex
    :math:`\\{\\sum x_i \\le 1, x_i \\ge -1\\}`:

    .. math::

        \\Phi = (n+1)\\log\\Bigl(1 + \\sum e^{x_i}\\Bigr) - \\sum x_i + c(n),
        \\qquad c(n) = -n \\log(n+1).

    The constant makes :math:`e^{-\\Phi} = \\det D^2\\Phi` hold exactly
    (at the origin :math:`\\det D^2\\Phi = 1/(n+1)` and :math:`\\nabla\\Phi = 0`).
    """

    @property
    def descriptor(self) -> str:
        return "closed:simplex" if self.dim == 2 else f"closed:simplex:{self.dim}"

    @property
    def body(self) -> ConvexBody:
        return make_body({"kind": "simplex", "n": self.dim})

    @property
    def constant(self) -> float:
        return -self.dim * math.log(self.dim + 1)

    def minimum(self) -> float:
        return math.log(self.dim + 1)

    def value(self, x: PointLike) -> float:
        return float(self.values(np.asarray(x, dtype=float)))

    def values(self, points: FloatArray) -> FloatArray:
        x = np.asarray(points, dtype=float)
        padded = np.concatenate([x, np.zeros(x.shape[:-1] + (1,))], axis=-1)
        lse = logsumexp(padded, axis=-1)
        return (  # type: ignore[no-any-return]
            (self.dim + 1) * lse - np.sum(x, axis=-1) + self.constant
        )

    def _field(self, algebra: TaylorAlgebra, x: FloatArray) -> FloatArray:
        n = self.dim
        shift = max(0.0, float(np.max(x)))
        coords = algebra.point(x)
        total = algebra.constant(math.exp(-shift))
        for coord in coords:
            shifted = np.array(coord)
            shifted[0] -= shift
            total = total + algebra.exp(shifted)
        field = (n + 1) * (algebra.log(total) + algebra.constant(shift))
        field = field - sum(coords) + algebra.constant(self.constant)
        return field  # type: ignore[no-any-return]

    def metric_data(self, x: PointLike) -> MetricData:
        x = np.asarray(x, dtype=float)
        n = self.dim
        # p_i = Φ_i + 1
        p = (n + 1) * np.exp(x - logsumexp(np.append(x, 0.0)))
        eye = np.eye(n)
        hessian = np.diag(p) - np.outer(p, p) / (n + 1)
        third = (
            np.einsum("ik,ij->ijk", hessian, eye)
            - np.einsum("ik,j->ijk", hessian, p) / (n + 1)
            - np.einsum("jk,i->ijk", hessian, p) / (n + 1)
        )
        return MetricData(p - 1, hessian, third)


def cube_profile(t: FloatArray | float) -> FloatArray:
    """
    :math:`\\varphi(t) = \\log(2\\cosh^2(t/2))`, evaluated stably.
    """
    a = np.abs(np.asarray(t, dtype=float))
    return a + 2 * np.log1p(np.exp(-a)) - math.log(2)  # type: ignore[no-any-return]


class CubePotential(ClosedFormPotential):
    """
    Potential of the cube :math:`[-1, 1]^n`:
    :math:`\\Phi(x) = \\sum \\varphi(x_i)`, where
    :math:`\\varphi(t) = \\log(2\\cosh^2(t/2))` solves
    :math:`\\varphi'' = e^{-\\varphi}`.

    With ``halfwidths`` :math:`a`, this is the potential of the box
    :math:`\\prod [-a_i, a_i]`:
    :math:`\\Phi(x) = \\sum \\varphi(a_i x_i) - 2\\sum \\log a_i`.
    """

    def __init__(self, n: int, *, halfwidths: Sequence[float] | None = None) -> None:
        super().__init__(n)
        a = np.ones(n) if halfwidths is None else np.asarray(halfwidths, dtype=float)
        if a.shape != (n,) or np.any(a <= 0):
            raise ValidationError(
                f"Expected {n} positive half-widths, got: {halfwidths!r}"
            )
        self.halfwidths = a
        self._shift = -2 * float(np.sum(np.log(a)))

    @property
    def descriptor(self) -> str:
        name = "closed:cube" if self.dim == 2 else f"closed:cube:{self.dim}"
        if np.all(self.halfwidths == 1):
            return name
        return f"{name} (halfwidths {self.halfwidths.tolist()})"

    @property
    def body(self) -> ConvexBody:
        return make_body({"kind": "box", "halfwidths": self.halfwidths.tolist()})

    def minimum(self) -> float:
        return self.dim * math.log(2) + self._shift

    def value(self, x: PointLike) -> float:
        return float(self.values(np.asarray(x, dtype=float)))

    def values(self, points: FloatArray) -> FloatArray:
        scaled = np.asarray(points, dtype=float) * self.halfwidths
        return (  # type: ignore[no-any-return]
            np.sum(cube_profile(scaled), axis=-1) + self._shift
        )

    def _field(self, algebra: TaylorAlgebra, x: FloatArray) -> FloatArray:
        field = algebra.constant(self._shift - self.dim * math.log(2))
        for a, coord in zip(self.halfwidths, algebra.point(x)):
            # With u = -|t| + ..., φ = -u + 2 log(1 + e^u) - log 2.
            u = a * coord if coord[0] < 0 else -a * coord
            field = field - u + 2 * algebra.log(algebra.constant(1.0) + algebra.exp(u))
        return field

    def metric_data(self, x: PointLike) -> MetricData:
        a = self.halfwidths
        t = np.asarray(x, dtype=float) * a
        d1 = np.tanh(t / 2)
        d2 = np.exp(-cube_profile(t))
        d3 = -d1 * d2
        third = np.zeros((self.dim,) * 3)
        for i in range(self.dim):
            third[i, i, i] = a[i] ** 3 * d3[i]
        return MetricData(a * d1, np.diag(a**2 * d2), third)


def simplex_potential(n: int = 2) -> SimplexPotential:
    """
    Closed-form potential of the simplex.
    """
    return SimplexPotential(n)


def cube_potential(n: int = 2) -> CubePotential:
    """
    Closed-form potential of the cube.
    """
    return CubePotential(n)
