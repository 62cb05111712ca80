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
import itertools
from typing import Any, Callable, Sequence

import numpy as np

from .._exceptions import DegenerateJetError, ValidationError
from .._typing import FloatArray


class JetSource(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    RADIAL = "radial"
    GRID = "grid"


def multi_index_key(index: Sequence[int]) -> str:
    """
    One-based multi-index string, e.g. ``(0, 0, 1)`` -> ``"112"``.
    """
    return "".join(str(i + 1) for i in sorted(index))


def parse_multi_index(key: str) -> tuple[int, ...]:
    """
    Inverse of :func:`multi_index_key`.
    """
    try:
        return tuple(int(c) - 1 for c in key)
    except ValueError as exc:
        raise ValidationError(f"Invalid multi-index: {key!r}") from exc


def symmetric_tensor(
    dim: int, order: int, component: Callable[[tuple[int, ...]], float]
) -> FloatArray:
    """
    Fill a symmetric tensor from its sorted components.
    """
    tensor = np.zeros((dim,) * order)
    for index in itertools.combinations_with_replacement(range(dim), order):
        value = component(index)
        for perm in set(itertools.permutations(index)):
            tensor[perm] = value
    return tensor


def symmetrize(tensor: FloatArray) -> FloatArray:
    """
    Average of a tensor over all permutations of its axes.
    """
    order = tensor.ndim
    if order < 2:
        return np.array(tensor)
    perms = list(itertools.permutations(range(order)))
    return (  # type: ignore[no-any-return]
        sum(np.transpose(tensor, p) for p in perms) / len(perms)
    )


@dataclasses.dataclass(frozen=True, eq=False)
class Jet:
    """
    Partial derivatives of a potential at a point.

    ``derivs[k]`` is the full symmetric tensor :math:`D^k\\Phi`
    of shape ``(dim,) * k``, for ``k`` up to ``order``.
    """

    #: Coordinates of the point.
    point: FloatArray

    #: Highest available derivative order.
    order: int

    #: Derivative tensors of orders ``0..order``.
    derivs: tuple[FloatArray, ...]

    #: Where the derivatives come from.
    source: JetSource

    #: Estimated absolute error per order.
    est_error: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.derivs) != self.order + 1 or len(self.est_error) != self.order + 1:
            raise ValidationError(
                "Jet needs one tensor and one error estimate per order."
            )

    @property
    def dim(self) -> int:
        return len(self.point)

    @property
    def value(self) -> float:
        return float(self.derivs[0])

    @property
    def gradient(self) -> FloatArray:
        return self.derivs[1]

    @property
    def hessian(self) -> FloatArray:
        return self.derivs[2]

    def tensor(self, k: int) -> FloatArray:
        """
        Derivative tensor of order ``k``.
        """
        if k > self.order:
            raise ValidationError(f"Jet of order {self.order} has no order {k} tensor.")
        return self.derivs[k]

    def component(self, key: str) -> float:
        """
        Single derivative by multi-index string, e.g. ``"112"``.
        """
        index = parse_multi_index(key)
        return float(self.tensor(len(index))[index])

    def truncate(self, order: int) -> Jet:
        """
        The same jet restricted to lower orders.
        """
        if order > self.order:
            raise ValidationError(
                f"Cannot extend a jet of order {self.order} to {order}."
            )
        return dataclasses.replace(
            self,
            order=order,
            derivs=self.derivs[: order + 1],
            est_error=self.est_error[: order + 1],
        )

    def check_convex(self) -> None:
        """
        :raises DegenerateJetError: unless the Hessian is positive definite
        """
        if self.order < 2:
            return
        eigenvalues = np.linalg.eigvalsh(self.hessian)
        if not np.all(eigenvalues > 0):
            raise DegenerateJetError(
                f"Hessian at {self.point.tolist()} is not positive definite: "
                f"eigenvalues {eigenvalues.tolist()}"
            )

    def symmetry_defect(self) -> float:
        """
        Largest deviation of any stored tensor from its symmetrization.
        """
        defects = [
            float(np.max(np.abs(t - symmetrize(t)))) for t in self.derivs[2:]
        ]
        return max(defects, default=0.0)

    def to_json(self) -> dict[str, Any]:
        """
        JSON record keyed by multi-index strings.
        """
        derivs: dict[str, float] = {"": self.value}
        for k in range(1, self.order + 1):
            for index in itertools.combinations_with_replacement(range(self.dim), k):
                derivs[multi_index_key(index)] = float(self.derivs[k][index])
        return {
            "point": self.point.tolist(),
            "order": self.order,
            "source": self.source.value,
            "derivs": derivs,
            "est_error": list(self.est_error),
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> Jet:
        try:
            point = np.array(data["point"], dtype=float)
            order = int(data["order"])
            source = JetSource(data["source"])
            components = data["derivs"]
            dim = len(point)
            derivs = [np.array(float(components[""]))]
            for k in range(1, order + 1):
                derivs.append(
                    symmetric_tensor(
                        dim, k, lambda index: float(components[multi_index_key(index)])
                    )
                )
            est_error = tuple(float(e) for e in data["est_error"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"Invalid jet record: {exc}") from exc
        return cls(point, order, tuple(derivs), source, est_error)

    def __repr__(self) -> str:
        return (
            f"<{type(self).__name__}: {self.source.value} "
            f"order {self.order} at {self.point.tolist()}>"
        )
