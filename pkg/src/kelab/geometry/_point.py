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
import itertools
import logging
from typing import Any

import numpy as np
import scipy.linalg

from .._exceptions import UnsupportedOrderError
from .._typing import FloatArray
from ..potentials import Jet, JetSource

logger = logging.getLogger("kelab.geometry")

#: Below this norm of the gradient the ``(n, v)`` frame is not formed.
DELTA_GRAD = 1e-8

#: Eigenvalue gap below which the eigenframe is considered degenerate.
DEGENERATE_GAP = 1e-8


def contract(tensor: FloatArray, *vectors: FloatArray) -> Any:
    """
    Contract the leading axes of a tensor with vectors:
    ``contract(T, a, b)`` is :math:`T_{ij\\ldots} a^i b^j`.
    """
    result = np.asarray(tensor)
    for vector in vectors:
        result = np.tensordot(vector, result, axes=(0, 0))
    return result


def _tensor_map(tensor: FloatArray, *, symmetric: bool) -> dict[str, float]:
    dim = tensor.shape[0] if tensor.ndim else 0
    if symmetric:
        indices = itertools.combinations_with_replacement(range(dim), tensor.ndim)
    else:
        indices = itertools.product(range(dim), repeat=tensor.ndim)
    return {
        "".join(str(i + 1) for i in index): float(tensor[index]) for index in indices
    }


@dataclasses.dataclass(frozen=True)
class Frame:
    """
    Orthonormal frame in the Hessian metric, in coordinate components.
    """

    first: FloatArray
    second: FloatArray

    @property
    def matrix(self) -> FloatArray:
        """Frame vectors as columns."""
        return np.column_stack([self.first, self.second])

    def rotated(self, angle: float) -> Frame:
        c, s = np.cos(angle), np.sin(angle)
        first = c * self.first + s * self.second
        return Frame(first, -s * self.first + c * self.second)


@dataclasses.dataclass(frozen=True, eq=False)
class PointGeometry:
    """
    Geometry of the Hessian metric :math:`h = \\Phi_{ij} dx^i dx^j` at a point.

    Index conventions: ``christoffel[k, i, j]`` is :math:`\\Gamma^k_{ij}`,
    ``riemann[i, j, k, l]`` is :math:`\\mathrm{Riem}_{ijkl}` with
    :math:`\\mathrm{Riem}_{ijkl} = R(\\Phi_{ik}\\Phi_{jl} - \\Phi_{il}\\Phi_{jk})`
    in the plane, and :math:`\\mathrm{Ric}_{jl} = \\Phi^{ik}\\mathrm{Riem}_{ijkl}`.
    """

    #: Coordinates of the point.
    point: FloatArray

    #: Source of the underlying jet.
    source: JetSource

    #: Order of the underlying jet.
    order: int

    #: :math:`\Phi`.
    value: float

    #: :math:`\Phi_i`.
    gradient: FloatArray

    #: :math:`\Phi_{ij}`.
    metric: FloatArray

    #: :math:`\Phi^{ij}`.
    inverse: FloatArray

    #: :math:`\Phi_{ijk}`.
    third: FloatArray

    #: :math:`\Gamma^k_{ij} = \frac12 \Phi^k_{ij}`.
    christoffel: FloatArray

    #: Riemann tensor (all indices down).
    riemann: FloatArray

    #: Ricci tensor.
    ricci: FloatArray

    #: :math:`\lambda = 4R`, the projection of :math:`4\mathrm{Ric}` onto the metric.
    lam: float

    #: Norm of :math:`\mathrm{Ric} - (\lambda/4)\Phi_{ij}` in the metric.
    anisotropy: float

    #: :math:`g_{ij} = \Phi_{iab}\Phi_j^{ab}`.
    g: FloatArray

    #: Gradient vector :math:`\Phi^i = \Phi^{ij}\Phi_j`.
    grad_vector: FloatArray

    #: :math:`|\nabla\Phi|^2 = \Phi^i\Phi_i`.
    grad_norm2: float

    #: Riemannian Hessian
    #: :math:`\nabla^2\Phi_{ij} = \Phi_{ij} - \frac12\Phi_{ijk}\Phi^k`.
    hessian_h: FloatArray

    #: Eigenvalues of the Riemannian Hessian against the metric, decreasing.
    eigenvalues: FloatArray

    #: Frame ``(n, v)``, unset at critical points.
    nv: Frame | None

    #: Eigenframe ``(e, u)`` of the Riemannian Hessian, unset if degenerate.
    eigenframe: Frame | None

    @property
    def dim(self) -> int:
        return len(self.point)

    @property
    def grad_norm(self) -> float:
        return float(np.sqrt(max(self.grad_norm2, 0.0)))

    @property
    def bakry_emery(self) -> FloatArray:
        """
        :math:`\\mathrm{Ric} + \\nabla^2 P` with :math:`P = \\Phi/2`.
        """
        return self.ricci + self.hessian_h / 2  # type: ignore[no-any-return]

    @property
    def riemann_norm2(self) -> float:
        """
        :math:`\\mathrm{Riem}_{abcd}\\mathrm{Riem}^{abcd}`.
        """
        h = self.inverse
        raised = np.einsum("ia,jb,kc,ld,abcd->ijkl", h, h, h, h, self.riemann)
        return float(np.sum(raised * self.riemann))

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])

    def norm2(self, tensor: FloatArray) -> float:
        """
        Squared norm of a covariant tensor in the metric.
        """
        raised = tensor
        for axis in range(tensor.ndim):
            contracted = np.tensordot(self.inverse, raised, axes=(1, axis))
            raised = np.moveaxis(contracted, 0, axis)
        return float(np.sum(raised * tensor))

    def g_of_gradient(self) -> float:
        """
        :math:`g(\\nabla\\Phi, \\nabla\\Phi) = g_{ij}\\Phi^i\\Phi^j`.
        """
        return float(self.grad_vector @ self.g @ self.grad_vector)

    def g_nn(self) -> float:
        if self.nv is None:
            return float("nan")
        return float(contract(self.g, self.nv.first, self.nv.first))

    def to_json(self) -> dict[str, Any]:
        """
        JSON record with tensors keyed by one-based index strings.
        """
        return {
            "point": self.point.tolist(),
            "source": self.source.value,
            "order": self.order,
            "phi": self.value,
            "gradient": self.gradient.tolist(),
            "metric": _tensor_map(self.metric, symmetric=True),
            "third": _tensor_map(self.third, symmetric=True),
            "christoffel": _tensor_map(self.christoffel, symmetric=False),
            "riemann": _tensor_map(self.riemann, symmetric=False),
            "ricci": _tensor_map(self.ricci, symmetric=True),
            "g": _tensor_map(self.g, symmetric=True),
            "hessian_h": _tensor_map(self.hessian_h, symmetric=True),
            "lambda": self.lam,
            "anisotropy": self.anisotropy,
            "grad_norm2": self.grad_norm2,
            "eigenvalues": self.eigenvalues.tolist(),
            "nv": None if self.nv is None else self.nv.matrix.T.tolist(),
            "eigenframe": (
                None if self.eigenframe is None else self.eigenframe.matrix.T.tolist()
            ),
        }

    def row(self) -> dict[str, float]:
        """
        Flat record for plot-ready CSV output.
        """
        record = {f"x{i + 1}": float(c) for i, c in enumerate(self.point)}
        record.update(
            phi=self.value,
            lam=self.lam,
            grad_norm2=self.grad_norm2,
            Lambda_e=float(self.eigenvalues[0]),
            Lambda_u=float(self.eigenvalues[-1]),
            g_nn=self.g_nn(),
            trace_g=float(np.sum(self.inverse * self.g)),
            anisotropy=self.anisotropy,
        )
        return record

    def __repr__(self) -> str:
        return f"<{type(self).__name__}: λ={self.lam!r} at {self.point.tolist()}>"


def _orient(vector: FloatArray, gradient: FloatArray, grad_norm: float) -> FloatArray:
    if grad_norm >= DELTA_GRAD:
        return vector if vector @ gradient >= 0 else -vector
    lead = vector[np.flatnonzero(np.abs(vector) > 1e-14)[0]]
    return vector if lead > 0 else -vector


def _nv_frame(metric: FloatArray, grad_vector: FloatArray, grad_norm: float) -> Frame:
    n = grad_vector / grad_norm
    w = np.array([-n[1], n[0]])
    w = w - (w @ metric @ n) * n
    return Frame(n, w / np.sqrt(w @ metric @ w))


def point_geometry(jet: Jet) -> PointGeometry:
    """
    Compute the geometry of the Hessian metric from a jet of order at least 3.

    :raises UnsupportedOrderError: if the jet has order below 3
    :raises DegenerateJetError: if the Hessian is not positive definite
    """
    if jet.order < 3:
        raise UnsupportedOrderError(
            f"Geometry needs third derivatives, got order {jet.order}"
        )
    jet.check_convex()
    dim = jet.dim
    gradient, metric, third = jet.derivs[1], jet.derivs[2], jet.derivs[3]
    inverse = np.linalg.inv(metric)
    inverse = (inverse + inverse.T) / 2

    christoffel = np.einsum("kl,lij->kij", inverse, third) / 2
    riemann = (
        np.einsum("ila,ab,bjk->ijkl", third, inverse, third)
        - np.einsum("ika,ab,bjl->ijkl", third, inverse, third)
    ) / 4
    ricci = np.einsum("ik,ijkl->jl", inverse, riemann)
    lam = 4 * float(np.sum(inverse * ricci)) / dim
    deviation = ricci - lam / 4 * metric
    squared = np.einsum("ia,jb,ij,ab->", inverse, inverse, deviation, deviation)
    anisotropy = float(np.sqrt(max(squared, 0.0)))
    g = np.einsum("iab,ac,bd,jcd->ij", third, inverse, inverse, third)

    grad_vector = inverse @ gradient
    grad_norm2 = float(gradient @ grad_vector)
    grad_norm = float(np.sqrt(max(grad_norm2, 0.0)))
    hessian_h = metric - np.einsum("ijk,k->ij", third, grad_vector) / 2
    hessian_h = (hessian_h + hessian_h.T) / 2

    values, vectors = scipy.linalg.eigh(hessian_h, metric)
    eigenvalues = values[::-1]

    nv: Frame | None = None
    eigenframe: Frame | None = None
    if dim == 2:
        if grad_norm >= DELTA_GRAD:
            nv = _nv_frame(metric, grad_vector, grad_norm)
        if eigenvalues[0] - eigenvalues[1] >= DEGENERATE_GAP:
            e = _orient(vectors[:, 1], gradient, grad_norm)
            u = vectors[:, 0]
            if e[0] * u[1] - e[1] * u[0] < 0:
                u = -u
            eigenframe = Frame(e, u)
        else:
            logger.debug(f"Degenerate eigenframe at {jet.point.tolist()}")

    return PointGeometry(
        point=jet.point,
        source=jet.source,
        order=jet.order,
        value=jet.value,
        gradient=gradient,
        metric=metric,
        inverse=inverse,
        third=third,
        christoffel=christoffel,
        riemann=riemann,
        ricci=ricci,
        lam=lam,
        anisotropy=anisotropy,
        g=g,
        grad_vector=grad_vector,
        grad_norm2=grad_norm2,
        hessian_h=hessian_h,
        eigenvalues=eigenvalues,
        nv=nv,
        eigenframe=eigenframe,
    )
