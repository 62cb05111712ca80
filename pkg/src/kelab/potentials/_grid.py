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

import functools
import itertools
import json
import logging
from pathlib import Path
from typing import Any

import numpy as np
from scipy.interpolate import RectBivariateSpline

from .._exceptions import OutsideRegionError, ValidationError
from .._serialization import read_csv, write_csv, write_json
from .._typing import BoolArray, FloatArray, PointLike
from ..bodies import ConvexBody, make_body
from ._base import MetricData, Potential
from ._jets import Jet, JetSource, symmetric_tensor

logger = logging.getLogger("kelab.potentials")

#: Jets need this many stencil half-widths between the node and the boundary.
STENCIL_MARGIN = 5


@functools.lru_cache(maxsize=None)
def fd_weights(derivative: int, half_width: int) -> tuple[float, ...]:
    """
    Centered finite-difference weights on offsets ``-p..p`` (unit spacing).

    The weights are exact for polynomials of degree ``2p``.
    """
    offsets = np.arange(-half_width, half_width + 1, dtype=float)
    powers = np.arange(2 * half_width + 1)
    vandermonde = offsets[None, :] ** powers[:, None]
    rhs = np.zeros(len(powers))
    rhs[derivative] = float(np.prod(np.arange(1, derivative + 1)))
    return tuple(np.linalg.solve(vandermonde, rhs).tolist())


def accuracy(order: int) -> int:
    """
    Consistency order of grid stencils for derivatives of the given order.
    """
    return 4 if order <= 2 else 2


def half_width(derivative: int, order: int) -> int:
    if derivative == 0:
        return 0
    return (derivative + accuracy(order) - 1) // 2


class GridPotential(Potential):
    """
    Potential sampled on the nodes of a uniform grid on :math:`[-L, L]^2`.

    ``node_values[i, j]`` is the value at ``(x[i], x[j])``.
    Jets are available at nodes; derivatives of orders up to two use
    fourth-order stencils, orders three and four second-order stencils.
    Off-node metric data come from a quintic spline.
    """

    source = JetSource.GRID
    max_order = 4
    dim = 2

    def __init__(
        self,
        L: float,
        values: FloatArray,
        body: ConvexBody,
        *,
        boundary: FloatArray | None = None,
        diagnostics: dict[str, Any] | None = None,
        origin: str = "",
    ) -> None:
        values = np.asarray(values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValidationError(f"Grid values must be square, got {values.shape}")
        self.L = float(L)
        self.N = values.shape[0]
        self.node_values = values
        self._body = body
        if boundary is None:
            boundary = values[self.boundary_mask()]
        #: Dirichlet data on the boundary nodes, in :meth:`boundary_mask` order.
        self.boundary = boundary
        #: Solver diagnostics.
        self.diagnostics = dict(diagnostics or {})
        self._origin = origin

    @property
    def descriptor(self) -> str:
        return f"grid:{self._origin}" if self._origin else "grid"

    @property
    def body(self) -> ConvexBody:
        return self._body

    @property
    def h(self) -> float:
        return 2 * self.L / (self.N - 1)

    @property
    def x(self) -> FloatArray:
        return np.linspace(-self.L, self.L, self.N)

    def boundary_mask(self) -> BoolArray:
        mask = np.zeros((self.N, self.N), dtype=bool)
        mask[0, :] = mask[-1, :] = mask[:, 0] = mask[:, -1] = True
        return mask

    def minimum(self) -> float:
        return float(np.min(self.node_values))

    def minimizer(self) -> FloatArray:
        i, j = np.unravel_index(np.argmin(self.node_values), self.node_values.shape)
        return np.array([self.x[i], self.x[j]])

    def nearest_node(self, x: PointLike) -> tuple[int, int]:
        point = np.asarray(x, dtype=float)
        index = np.rint((point + self.L) / self.h).astype(int)
        return int(index[0]), int(index[1])

    def margin(self, order: int = 4) -> int:
        """
        Minimal distance (in nodes) from the boundary of nodes with jets.
        """
        widest = max(half_width(k, k) for k in range(1, order + 1)) if order else 0
        return max(STENCIL_MARGIN * widest, 2 * widest + 1)

    def supports(self, x: PointLike) -> bool:
        i, j = self.nearest_node(x)
        m = self.margin()
        return m <= i < self.N - m and m <= j < self.N - m

    def node_point(self, i: int, j: int) -> FloatArray:
        return np.array([self.x[i], self.x[j]])

    def value(self, x: PointLike) -> float:
        point = np.asarray(x, dtype=float)
        if np.any(np.abs(point) > self.L):
            raise OutsideRegionError(f"Point {point.tolist()} is outside the grid.")
        return float(self._spline.ev(point[0], point[1]))

    def values(self, points: FloatArray) -> FloatArray:
        points = np.asarray(points, dtype=float)
        if np.any(np.abs(points) > self.L):
            raise OutsideRegionError("Some points are outside the grid.")
        return (  # type: ignore[no-any-return]
            self._spline.ev(points[..., 0], points[..., 1])
        )

    def _derivative(
        self, i: int, j: int, index: tuple[int, ...], spacing: int
    ) -> float:
        order = len(index)
        a, b = index.count(0), index.count(1)
        pa, pb = half_width(a, order), half_width(b, order)
        wa, wb = fd_weights(a, pa), fd_weights(b, pb)
        total = 0.0
        for (ka, ca), (kb, cb) in itertools.product(
            zip(range(-pa, pa + 1), wa), zip(range(-pb, pb + 1), wb)
        ):
            if ca and cb:
                total += ca * cb * self.node_values[i + spacing * ka, j + spacing * kb]
        return total / (spacing * self.h) ** order

    def _tensors(self, i: int, j: int, order: int, spacing: int) -> list[FloatArray]:
        return [
            symmetric_tensor(2, k, lambda index: self._derivative(i, j, index, spacing))
            for k in range(order + 1)
        ]

    def _jet(self, x: FloatArray, order: int, spacing: int = 1) -> Jet:
        i, j = self.nearest_node(x)
        fine = self._tensors(i, j, order, spacing)
        coarse = self._tensors(i, j, order, 2 * spacing)
        est_error = tuple(
            float(np.max(np.abs(f - c))) / (2 ** accuracy(k) - 1) if k else 0.0
            for k, (f, c) in enumerate(zip(fine, coarse))
        )
        return Jet(self.node_point(i, j), order, tuple(fine), self.source, est_error)

    def coarse_jet_at(self, x: PointLike, order: int) -> Jet:
        """
        Jet at the nearest node computed with twice the grid spacing.
        """
        self.jet_at(x, order)
        jet = self._jet(np.asarray(x, dtype=float), order, spacing=2)
        jet.check_convex()
        return jet

    @functools.cached_property
    def _spline(self) -> RectBivariateSpline:
        return RectBivariateSpline(self.x, self.x, self.node_values, kx=5, ky=5, s=0)

    def metric_data(self, x: PointLike) -> MetricData:
        point = np.asarray(x, dtype=float)
        if np.any(np.abs(point) > self.L - self.margin(3) * self.h):
            raise OutsideRegionError(f"No metric data at {point.tolist()}")

        def component(index: tuple[int, ...]) -> float:
            dx, dy = index.count(0), index.count(1)
            return float(self._spline.ev(point[0], point[1], dx=dx, dy=dy))

        tensors = [symmetric_tensor(2, k, component) for k in (1, 2, 3)]
        return MetricData(*tensors)

    # Serialization

    def rows(self) -> list[tuple[float, float, float]]:
        x = self.x
        return [
            (float(x[i]), float(x[j]), float(self.node_values[i, j]))
            for i in range(self.N)
            for j in range(self.N)
        ]

    def save(self, directory: Path) -> list[Path]:
        """
        Write ``potential.csv`` (columns ``x, y, phi``) and ``body.json``.
        """
        directory.mkdir(parents=True, exist_ok=True)
        return [
            write_csv(directory / "potential.csv", ("x", "y", "phi"), self.rows()),
            write_json(directory / "body.json", self.body.to_json()),
        ]

    @classmethod
    def load(cls, path: Path) -> GridPotential:
        """
        Load a potential written by :meth:`save`.

        ``path`` is either the output directory or the CSV file,
        with ``body.json`` next to it.
        """
        csv_path = path / "potential.csv" if path.is_dir() else path
        body_path = csv_path.parent / "body.json"
        try:
            header, rows = read_csv(csv_path)
            body = make_body(json.loads(body_path.read_text(encoding="utf-8")))
        except (OSError, StopIteration, json.JSONDecodeError) as exc:
            raise ValidationError(
                f"Cannot load grid potential from {path}: {exc}"
            ) from exc
        if header[:3] != ["x", "y", "phi"]:
            raise ValidationError(f"Unexpected columns in {csv_path}: {header}")
        data = np.array([[float(v) for v in row[:3]] for row in rows])
        N = int(round(np.sqrt(len(data))))
        if N * N != len(data):
            raise ValidationError(f"{csv_path} does not hold a square grid.")
        L = float(np.max(data[:, 0]))
        values = data[:, 2].reshape(N, N)
        logger.info(f"Loaded {N}x{N} grid potential from {csv_path}")
        return cls(L, values, body, origin=str(path))
