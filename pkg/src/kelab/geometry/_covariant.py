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

import enum
import functools
from typing import Callable, Union

import numpy as np

from .._exceptions import JetError, UnsupportedOrderError, ValidationError
from .._typing import FloatArray, PointLike
from ..potentials import Jet, JetSource, TaylorAlgebra
from ..potentials._taylor import index_letters

#: Largest deviation from full symmetry tolerated in a covariant Q tensor.
Q_SYMMETRY_TOLERANCE = 1e-10


class TensorKind(str, enum.Enum):
    PHI_I = "Phi_i"
    PHI_IAB = "Phi_iab"
    G_IJ = "g_ij"


class HessianFields:
    """
    Taylor expansions of the metric data around the point of a jet.

    With a jet of order ``k`` the fields have degree ``k - 3``:
    the third derivatives are known to that degree and so is everything
    built from them. Each covariant derivative costs one degree.
    """

    def __init__(self, jet: Jet) -> None:
        if jet.order < 3:
            raise UnsupportedOrderError(
                f"Fields need third derivatives, got order {jet.order}"
            )
        self.jet = jet
        self.dim = jet.dim
        self.degree = jet.order - 3
        algebra = TaylorAlgebra.get(self.dim, self.degree)
        self.algebra = algebra
        #: :math:`\Phi_i`
        self.gradient = algebra.from_derivatives(jet.derivs, 1)
        #: :math:`\Phi_{ij}`
        self.metric = algebra.from_derivatives(jet.derivs, 2)
        #: :math:`\Phi_{ijk}`
        self.third = algebra.from_derivatives(jet.derivs, 3)
        #: :math:`\Phi^{ij}`
        self.inverse = algebra.inverse(self.metric)
        #: :math:`\Gamma^k_{ij}`
        self.christoffel = algebra.einsum("kl,lij->kij", self.inverse, self.third) / 2

    def _require(self, degree: int, what: str) -> None:
        if self.degree < degree:
            raise UnsupportedOrderError(
                f"{what} needs a jet of order {degree + 3}, got {self.jet.order}"
            )

    def value(self, field: FloatArray) -> FloatArray:
        return self.algebra.value(field)

    @functools.cached_property
    def grad_vector(self) -> FloatArray:
        """:math:`\\Phi^i`"""
        return self.algebra.einsum("ij,j->i", self.inverse, self.gradient)

    @functools.cached_property
    def g(self) -> FloatArray:
        """:math:`g_{ij} = \\Phi_{iab}\\Phi_j^{ab}`"""
        a = self.algebra
        return a.einsum(
            "iab,ac,bd,jcd->ij", self.third, self.inverse, self.inverse, self.third
        )

    @functools.cached_property
    def grad_norm2(self) -> FloatArray:
        """:math:`|\\nabla\\Phi|^2`"""
        return self.algebra.einsum("i,i->", self.grad_vector, self.gradient)

    @functools.cached_property
    def trace_g(self) -> FloatArray:
        """:math:`\\mathrm{Tr}\\, g = \\Phi_{abc}\\Phi^{abc}`"""
        return self.algebra.einsum("ij,ij->", self.inverse, self.g)

    @functools.cached_property
    def lam(self) -> FloatArray:
        """
        :math:`\\lambda` as a field, from the trace of the Ricci tensor
        of the Riemann tensor.
        """
        a = self.algebra
        # Φ^{ik} Riem_ijkl Φ^{jl}, with Riem from the third derivatives.
        first = a.einsum(
            "ila,ab,bjk,ik,jl->",
            self.third,
            self.inverse,
            self.third,
            self.inverse,
            self.inverse,
        )
        second = a.einsum(
            "ika,ab,bjl,ik,jl->",
            self.third,
            self.inverse,
            self.third,
            self.inverse,
            self.inverse,
        )
        return (first - second) / self.dim  # type: ignore[no-any-return]

    def covariant_derivative(self, field: FloatArray) -> FloatArray:
        """
        :math:`\\nabla_p T_{i_1 \\ldots i_r}`, with the new index ``p`` first.

        The result is exact to one degree less than the field.
        """
        rank = field.ndim - 1
        letters = index_letters(rank + 2)
        p, k, slots = letters[0], letters[1], letters[2:]
        result = self.algebra.gradient(field)
        for s in range(rank):
            replaced = slots[:s] + k + slots[s + 1 :]
            result = result - self.algebra.einsum(
                f"{k}{p}{slots[s]},{replaced}->{p}{slots}", self.christoffel, field
            )
        return result

    def gradient_of(self, field: FloatArray) -> FloatArray:
        """
        Partial derivatives of a scalar field at the point.
        """
        self._require(1, "A gradient")
        return self.value(self.algebra.gradient(field))

    def laplacian_scalar(self, field: FloatArray) -> float:
        """
        :math:`Lf = \\Phi^{ij} f_{ij}` for a scalar field.
        """
        self._require(2, "A scalar Laplacian")
        a = self.algebra
        second = np.stack([a.gradient(a.diff(field, i)) for i in range(self.dim)])
        return float(np.sum(self.value(self.inverse) * self.value(second)))

    def laplacian_tensor(self, field: FloatArray) -> FloatArray:
        """
        :math:`LT = \\Phi^{pq}\\nabla_p\\nabla_q T - \\frac12 \\Phi^k \\nabla_k T`
        at the point.
        """
        self._require(2, "A tensor Laplacian")
        first = self.covariant_derivative(field)
        second = self.covariant_derivative(first)
        h = self.value(self.inverse)
        rough = np.tensordot(h, self.value(second), axes=([0, 1], [0, 1]))
        grad_vector = self.value(self.grad_vector)
        drift = np.tensordot(grad_vector, self.value(first), axes=(0, 0))
        return rough - drift / 2  # type: ignore[no-any-return]

    def tensor_field(self, which: TensorKind | str) -> FloatArray:
        kind = TensorKind(which)
        if kind is TensorKind.PHI_I:
            return self.gradient
        if kind is TensorKind.PHI_IAB:
            return self.third
        return self.g


def _reject_grid(jet: Jet) -> None:
    if jet.source is JetSource.GRID:
        raise UnsupportedOrderError(
            "Tensor Laplacians are not available from grid jets."
        )


def covariant_Q(jet: Jet) -> FloatArray:
    """
    The fully symmetric tensor :math:`Q_{abcd} = \\nabla_a\\Phi_{bcd}`:

    .. math::

        Q_{abcd} = \\Phi_{abcd} - \\frac12 (\\Phi^k_{ab}\\Phi_{kcd}
        + \\Phi^k_{ac}\\Phi_{kbd} + \\Phi^k_{ad}\\Phi_{kbc}).

    :raises UnsupportedOrderError: for jets of order below 4
    :raises JetError: if the result is not symmetric to ``1e-10``
    """
    if jet.order < 4:
        raise UnsupportedOrderError(
            f"Q needs fourth derivatives, got order {jet.order}"
        )
    third, fourth = jet.derivs[3], jet.derivs[4]
    inverse = np.linalg.inv(jet.hessian)
    up = np.einsum("kl,lab->kab", inverse, third)
    q = fourth - (
        np.einsum("kab,kcd->abcd", up, third)
        + np.einsum("kac,kbd->abcd", up, third)
        + np.einsum("kad,kbc->abcd", up, third)
    ) / 2
    symmetric = sum(
        np.transpose(q, perm) for perm in _PERMUTATIONS
    ) / len(_PERMUTATIONS)
    scale = max(1.0, float(np.max(np.abs(q))))
    defect = float(np.max(np.abs(q - symmetric)))
    if defect > Q_SYMMETRY_TOLERANCE * scale:
        raise JetError(f"Q is not symmetric at {jet.point.tolist()}: defect {defect}")
    return symmetric  # type: ignore[no-any-return]


_PERMUTATIONS = [
    (a, b, c, d)
    for a in range(4)
    for b in range(4)
    for c in range(4)
    for d in range(4)
    if len({a, b, c, d}) == 4
]


def weighted_laplacian_tensor(jet: Jet, which: TensorKind | str) -> FloatArray:
    """
    Covariant weighted Laplacian of :math:`\\Phi_i`, :math:`\\Phi_{iab}` or
    :math:`g_{ij}` from a jet of order 5.

    :raises UnsupportedOrderError: for grid jets and jets of order below 5
    """
    _reject_grid(jet)
    if jet.order < 5:
        raise UnsupportedOrderError(f"Tensor Laplacians need order 5, got {jet.order}")
    fields = HessianFields(jet)
    return fields.laplacian_tensor(fields.tensor_field(which))


#: A scalar field returns its value, or a jet of order at least 2, at a point.
ScalarField = Callable[[FloatArray], Union[float, Jet]]


def weighted_laplacian_scalar(
    field: ScalarField,
    x: PointLike,
    inverse_metric: FloatArray,
    *,
    step: float = 1e-3,
) -> float:
    """
    :math:`Lf = \\Phi^{ij} f_{ij}` at ``x``.

    If ``field`` returns jets, their Hessians are used. If it returns values,
    the second derivatives are central differences with the given step.

    :raises JetError: if the field returns a jet of order below 2
    """
    point = np.asarray(x, dtype=float)
    inverse = np.asarray(inverse_metric, dtype=float)
    if inverse.shape != (len(point), len(point)):
        raise ValidationError(
            f"Inverse metric of shape {inverse.shape} at a {len(point)}D point"
        )
    center = field(point)
    if isinstance(center, Jet):
        if center.order < 2:
            raise JetError(
                f"Need second derivatives, got a jet of order {center.order}"
            )
        return float(np.sum(inverse * center.hessian))
    hessian = fd_hessian(
        lambda y: float(field(y)), point, float(center), step  # type: ignore[arg-type]
    )
    return float(np.sum(inverse * hessian))


def fd_hessian(
    f: Callable[[FloatArray], float], x: FloatArray, center: float, step: float
) -> FloatArray:
    """
    Hessian by second-order central differences.
    """
    dim = len(x)
    eye = np.eye(dim) * step
    hessian = np.zeros((dim, dim))
    for i in range(dim):
        hessian[i, i] = (f(x + eye[i]) - 2 * center + f(x - eye[i])) / step**2
        for j in range(i):
            mixed = (
                f(x + eye[i] + eye[j])
                - f(x + eye[i] - eye[j])
                - f(x - eye[i] + eye[j])
                + f(x - eye[i] - eye[j])
            ) / (4 * step**2)
            hessian[i, j] = hessian[j, i] = mixed
    return hessian
