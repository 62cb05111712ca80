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

import numpy as np
import pytest

from kelab.potentials import (
    TaylorAlgebra,
    multi_index_key,
    parse_multi_index,
    symmetrize,
)


class TestTaylorAlgebra:
    def test_shared_instances(self) -> None:
        assert TaylorAlgebra.get(2, 3) is TaylorAlgebra.get(2, 3)

    def test_size(self) -> None:
        assert TaylorAlgebra(2, 3).size == 10
        assert TaylorAlgebra(3, 2).size == 10

    def test_polynomial_derivatives(self) -> None:
        algebra = TaylorAlgebra(2, 3)
        x, y = algebra.point([1.0, 2.0])
        f = algebra.mul(algebra.mul(x, x), y)
        value, gradient, hessian, third = algebra.derivatives(f)
        assert float(value) == pytest.approx(2.0)
        assert np.allclose(gradient, [4.0, 1.0])
        assert np.allclose(hessian, [[4.0, 2.0], [2.0, 0.0]])
        expected = np.zeros((2, 2, 2))
        expected[0, 0, 1] = expected[0, 1, 0] = expected[1, 0, 0] = 2.0
        assert np.allclose(third, expected)

    def test_degree_zero(self) -> None:
        algebra = TaylorAlgebra(2, 0)
        x, y = algebra.point([1.0, 2.0])
        assert x.tolist() == [1.0]
        (value,) = algebra.derivatives(algebra.exp(algebra.mul(x, y)))
        assert float(value) == pytest.approx(np.exp(2.0))

    def test_exp_log(self) -> None:
        algebra = TaylorAlgebra(2, 4)
        x, y = algebra.point([0.3, -0.2])
        f = algebra.mul(x, y) + x
        assert np.allclose(algebra.log(algebra.exp(f)), f)

    def test_exp_derivatives(self) -> None:
        algebra = TaylorAlgebra(1, 5)
        (t,) = algebra.point([0.7])
        derivs = algebra.derivatives(algebra.exp(t))
        assert np.allclose([float(np.ravel(d)[0]) for d in derivs], np.exp(0.7))

    def test_sqrt(self) -> None:
        algebra = TaylorAlgebra(2, 3)
        x, y = algebra.point([1.5, 0.5])
        f = algebra.mul(x, x) + algebra.mul(y, y)
        root = algebra.sqrt(f)
        assert np.allclose(algebra.mul(root, root), f)

    def test_reciprocal(self) -> None:
        algebra = TaylorAlgebra(2, 4)
        x, _ = algebra.point([2.0, 0.0])
        assert np.allclose(algebra.mul(x, algebra.reciprocal(x)), algebra.constant(1.0))

    def test_matrix_inverse(self) -> None:
        algebra = TaylorAlgebra(2, 3)
        x, y = algebra.point([0.5, 0.25])
        one = algebra.constant(1.0)
        matrix = np.stack([np.stack([one + x, y]), np.stack([y, 2 * one])])
        product = algebra.einsum("ij,jk->ik", matrix, algebra.inverse(matrix))
        assert np.allclose(product, algebra.constant(np.eye(2)))

    def test_from_derivatives(self) -> None:
        algebra = TaylorAlgebra(2, 2)
        x, y = algebra.point([0.1, 0.2])
        source = TaylorAlgebra(2, 4)
        sx, sy = source.point([0.1, 0.2])
        tensors = source.derivatives(source.exp(source.mul(sx, sy)))
        field = algebra.from_derivatives(tensors, 1)
        expected = algebra.gradient(algebra.exp(algebra.mul(x, y)))
        # Differentiation loses the top degree.
        low = algebra.degrees < algebra.degree
        assert np.allclose(field[..., low], expected[..., low])

    def test_reserved_letters(self) -> None:
        algebra = TaylorAlgebra(2, 2)
        x, _ = algebra.point([0.0, 0.0])
        with pytest.raises(ValueError):
            algebra.einsum("X,X->", x, x)


class TestMultiIndex:
    @pytest.mark.parametrize(
        "index, key",
        [
            ((0,), "1"),
            ((1, 0), "12"),
            ((0, 0, 1), "112"),
            ((1, 1, 0, 1), "1222"),
        ],
    )
    def test_key(self, index: tuple[int, ...], key: str) -> None:
        assert multi_index_key(index) == key
        assert parse_multi_index(key) == tuple(sorted(index))

    def test_symmetrize(self) -> None:
        tensor = np.zeros((2, 2, 2))
        tensor[0, 0, 1] = 3.0
        symmetric = symmetrize(tensor)
        assert symmetric[0, 1, 0] == pytest.approx(1.0)
        assert symmetric[1, 0, 0] == pytest.approx(1.0)
        assert np.allclose(symmetrize(symmetric), symmetric)
