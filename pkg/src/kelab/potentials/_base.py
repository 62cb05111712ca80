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

from abc import ABCMeta, abstractmethod
from typing import NamedTuple

import numpy as np

from .._exceptions import OutsideRegionError, UnsupportedOrderError
from .._typing import FloatArray, PointLike
from ..bodies import ConvexBody
from ._jets import Jet, JetSource


class MetricData(NamedTuple):
    """
    First three derivatives of a potential at a point.
    """

    gradient: FloatArray
    hessian: FloatArray
    third: FloatArray


class Potential(metaclass=ABCMeta):
    """
    Convex potential solving :math:`e^{-\\Phi} = \\det D^2\\Phi`,
    with derivatives available through :meth:`jet_at`.
    """

    #: Kind of derivative data this potential provides.
    source: JetSource

    #: Highest derivative order supported by :meth:`jet_at`.
    max_order: int

    #: Ambient dimension.
    dim: int

    @property
    @abstractmethod
    def descriptor(self) -> str:
        """
        Descriptor of this potential, such as ``"closed:simplex"``.
        """
        raise NotImplementedError

    @property
    @abstractmethod
    def body(self) -> ConvexBody:
        """
        The gradient image :math:`\\nabla\\Phi(\\mathbb{R}^n)`.
        """
        raise NotImplementedError

    @abstractmethod
    def minimum(self) -> float:
        """
        :math:`m = \\min \\Phi`.
        """
        raise NotImplementedError

    @abstractmethod
    def supports(self, x: PointLike) -> bool:
        """
        Whether jets are available at the point.
        """
        raise NotImplementedError

    @abstractmethod
    def _jet(self, x: FloatArray, order: int) -> Jet:
        raise NotImplementedError

    def value(self, x: PointLike) -> float:
        """
        :math:`\\Phi(x)`.
        """
        return self.jet_at(x, 0).value

    def values(self, points: FloatArray) -> FloatArray:
        """
        :math:`\\Phi` at an array of points of shape ``(..., dim)``.
        """
        points = np.asarray(points, dtype=float)
        flat = points.reshape(-1, self.dim)
        result = np.array([self.value(p) for p in flat])
        return result.reshape(points.shape[:-1])

    def jet_at(self, x: PointLike, order: int) -> Jet:
        """
        Derivatives of orders ``0..order`` at ``x``.

        :raises UnsupportedOrderError: if ``order`` exceeds :attr:`max_order`
        :raises OutsideRegionError: if the point is not supported
        :raises DegenerateJetError: if the Hessian is not positive definite
        """
        point = np.asarray(x, dtype=float)
        if point.shape != (self.dim,):
            raise OutsideRegionError(
                f"Expected a {self.dim}D point, got {point.tolist()}"
            )
        if not 0 <= order <= self.max_order:
            raise UnsupportedOrderError(
                f"{self.descriptor} supports orders up to {self.max_order}, got {order}"
            )
        if not self.supports(point):
            raise OutsideRegionError(
                f"{self.descriptor} has no jets at {point.tolist()}"
            )
        jet = self._jet(point, order)
        jet.check_convex()
        return jet

    def metric_data(self, x: PointLike) -> MetricData:
        """
        Gradient, Hessian and third derivatives at ``x``.
        """
        jet = self.jet_at(x, 3)
        return MetricData(jet.derivs[1], jet.derivs[2], jet.derivs[3])

    def __repr__(self) -> str:
        return f"<{type(self).__name__}: {self.descriptor!r}>"


def jet_at(potential: Potential, x: PointLike, order: int) -> Jet:
    """
    Derivatives of ``potential`` at ``x`` up to ``order``.
    """
    return potential.jet_at(x, order)
