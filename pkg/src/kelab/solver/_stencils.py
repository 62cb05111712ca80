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

import numpy as np
import scipy.sparse as sparse

from .._typing import BoolArray, FloatArray


class GridStencils:
    """
    Second-order finite differences on the nodes of :math:`[-L, L]^2`.

    Grid functions are flattened in C order, so that node ``(i, j)``
    at :math:`(x_i, x_j)` has index ``i * N + j``.
    The operators act on full grid functions and return values at
    interior nodes; the mixed derivative together with the two pure
    ones forms the nine-point stencil.
    """

    def __init__(self, L: float, N: int) -> None:
        self.L = L
        self.N = N
        self.h = 2 * L / (N - 1)
        self.x = np.linspace(-L, L, N)
        mask = np.zeros((N, N), dtype=bool)
        mask[1:-1, 1:-1] = True
        #: Interior nodes, as a flat mask.
        self.interior: BoolArray = mask.ravel()
        #: Boundary nodes, as a flat mask.
        self.boundary: BoolArray = ~self.interior
        rows = np.flatnonzero(self.interior)

        h = self.h
        d1 = sparse.diags([-1.0, 1.0], [-1, 1], shape=(N, N)) / (2 * h)
        d2 = sparse.diags([1.0, -2.0, 1.0], [-1, 0, 1], shape=(N, N)) / h**2
        eye = sparse.identity(N)
        self.dx = sparse.kron(d1, eye, format="csr")[rows]
        self.dy = sparse.kron(eye, d1, format="csr")[rows]
        self.dxx = sparse.kron(d2, eye, format="csr")[rows]
        self.dyy = sparse.kron(eye, d2, format="csr")[rows]
        self.dxy = sparse.kron(d1, d1, format="csr")[rows]

    @functools.cached_property
    def points(self) -> FloatArray:
        """
        Node coordinates, shape ``(N, N, 2)``.
        """
        X, Y = np.meshgrid(self.x, self.x, indexing="ij")
        return np.stack([X, Y], axis=-1)

    def hessian(self, values: FloatArray) -> tuple[FloatArray, FloatArray, FloatArray]:
        """
        Discrete :math:`(\\Phi_{11}, \\Phi_{12}, \\Phi_{22})` at interior nodes.
        """
        u = np.ravel(values)
        return self.dxx @ u, self.dxy @ u, self.dyy @ u

    def gradient(self, values: FloatArray) -> FloatArray:
        """
        Discrete gradient at interior nodes, shape ``(M, 2)``.
        """
        u = np.ravel(values)
        return np.column_stack([self.dx @ u, self.dy @ u])

    def to_grid(self, interior_values: FloatArray) -> FloatArray:
        """
        Embed interior values in an ``(N, N)`` array, NaN on the boundary.
        """
        grid = np.full(self.N * self.N, np.nan)
        grid[self.interior] = interior_values
        return grid.reshape(self.N, self.N)


def is_convex(a: FloatArray, b: FloatArray, c: FloatArray) -> BoolArray:
    """
    Positive definiteness of the discrete Hessians ``[[a, b], [b, c]]``.
    """
    return (a > 0) & (a * c - b * b > 0)  # type: ignore[no-any-return]
