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
from helpers import cubic_form, random_symmetric_tensor

from kelab import ValidationError
from kelab.identities import cubic_max, orthonormal_third


class TestCubicMax:
    @pytest.mark.parametrize("seed", range(5))
    def test_matches_brute_force(self, seed: int) -> None:
        tensor = random_symmetric_tensor(np.random.default_rng(seed))
        angles = np.linspace(0, 2 * np.pi, 100_000, endpoint=False)
        brute = float(np.max(cubic_form(tensor, angles)))
        result = cubic_max(tensor)
        assert result.value == pytest.approx(brute, abs=1e-8)
        assert result.value >= brute - 1e-12
        assert result.first_order == pytest.approx(0.0, abs=1e-10)
        assert result.margin >= -1e-10
        assert result.v @ result.a == pytest.approx(0.0)
        assert np.linalg.norm(result.v) == pytest.approx(1.0)

    def test_single_maximum(self) -> None:
        tensor = np.zeros((2, 2, 2))
        tensor[0, 0, 0] = 1.0
        result = cubic_max(tensor)
        assert result.value == pytest.approx(1.0)
        assert np.allclose(np.abs(result.v), [1.0, 0.0])
        assert result.gap == pytest.approx(2.0)

    def test_equal_maxima(self) -> None:
        tensor = np.zeros((2, 2, 2))
        tensor[0, 0, 0] = 1.0
        tensor[0, 1, 1] = tensor[1, 0, 1] = tensor[1, 1, 0] = -1.0
        result = cubic_max(tensor)
        assert result.value == pytest.approx(1.0)
        assert result.gap == pytest.approx(0.0, abs=1e-10)

    def test_zero_tensor(self) -> None:
        result = cubic_max(np.zeros((2, 2, 2)))
        assert result.value == 0.0
        assert result.gap == 0.0

    def test_shape(self) -> None:
        with pytest.raises(ValidationError):
            cubic_max(np.zeros((3, 3, 3)))


class TestOrthonormalThird:
    def test_basis(self) -> None:
        metric = np.array([[2.0, 0.5], [0.5, 1.0]])
        tensor = random_symmetric_tensor(np.random.default_rng(7))
        basis, transformed = orthonormal_third(metric, tensor)
        assert np.allclose(basis.T @ metric @ basis, np.eye(2))
        e = basis[:, 0]
        expected = np.einsum("ijk,i,j,k->", tensor, e, e, e)
        assert transformed[0, 0, 0] == pytest.approx(expected)
