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
from helpers import square_body

from kelab import FloatArray, UnsupportedOrderError, ValidationError
from kelab.geometry import (
    Frame,
    HessianFields,
    TensorKind,
    contract,
    covariant_Q,
    fd_hessian,
    point_geometry,
    weighted_laplacian_scalar,
    weighted_laplacian_tensor,
)
from kelab.potentials import CubePotential, GridPotential, JetSource, SimplexPotential


@pytest.fixture(name="simplex")
def _simplex() -> SimplexPotential:
    return SimplexPotential(2)


@pytest.fixture(name="cube")
def _cube() -> CubePotential:
    return CubePotential(2)


def random_points(count: int, seed: int = 0) -> FloatArray:
    return np.random.default_rng(seed).uniform(-3, 3, size=(count, 2))


class TestPointGeometry:
    def test_simplex_constant_curvature(self, simplex: SimplexPotential) -> None:
        for x in random_points(10):
            geometry = point_geometry(simplex.jet_at(x, 3))
            assert geometry.lam == pytest.approx(1 / 3, abs=1e-9)
            assert geometry.anisotropy < 1e-9
            assert np.allclose(geometry.ricci, geometry.metric / 12, atol=1e-9)

    def test_cube_is_flat(self, cube: CubePotential) -> None:
        for x in random_points(10, seed=1):
            geometry = point_geometry(cube.jet_at(x, 3))
            assert np.allclose(geometry.riemann, 0.0, atol=1e-12)
            assert geometry.lam == pytest.approx(0.0, abs=1e-12)
            assert geometry.riemann_norm2 == pytest.approx(0.0, abs=1e-20)

    def test_cube_eigenvalues(self, cube: CubePotential) -> None:
        geometry = point_geometry(cube.jet_at((1.0, -0.5), 3))
        expected = [1 + np.sinh(0.5) ** 2, 1 + np.sinh(0.25) ** 2]
        assert np.allclose(geometry.eigenvalues, expected, atol=1e-10)
        assert geometry.min_eigenvalue >= 5 / 6

    def test_simplex_is_geodesically_convex(self, simplex: SimplexPotential) -> None:
        for x in random_points(20, seed=2):
            assert point_geometry(simplex.jet_at(x, 3)).min_eigenvalue >= 5 / 6 - 1e-9

    def test_critical_point(self, cube: CubePotential) -> None:
        geometry = point_geometry(cube.jet_at((0.0, 0.0), 3))
        assert geometry.grad_norm == 0.0
        assert geometry.nv is None
        assert geometry.eigenframe is None
        assert np.isnan(geometry.g_nn())
        assert geometry.to_json()["nv"] is None

    def test_frames(self, simplex: SimplexPotential) -> None:
        geometry = point_geometry(simplex.jet_at((0.7, -1.2), 3))
        assert geometry.nv is not None
        assert geometry.eigenframe is not None
        for frame in (geometry.nv, geometry.eigenframe):
            gram = frame.matrix.T @ geometry.metric @ frame.matrix
            assert np.allclose(gram, np.eye(2), atol=1e-10)
        n = geometry.nv.first
        assert np.allclose(n * geometry.grad_norm, geometry.grad_vector)
        assert geometry.eigenframe.first @ geometry.gradient >= 0
        assert np.linalg.det(geometry.eigenframe.matrix) > 0

    def test_eigenframe_diagonalizes(self, simplex: SimplexPotential) -> None:
        geometry = point_geometry(simplex.jet_at((1.5, 0.5), 3))
        frame = geometry.eigenframe
        assert frame is not None
        hessian = frame.matrix.T @ geometry.hessian_h @ frame.matrix
        assert np.allclose(hessian, np.diag(geometry.eigenvalues), atol=1e-10)

    def test_trace_identity(self, simplex: SimplexPotential) -> None:
        for x in random_points(5, seed=3):
            geometry = point_geometry(simplex.jet_at(x, 3))
            trace_g = float(np.sum(geometry.inverse * geometry.g))
            expected = trace_g - geometry.grad_norm2
            assert 2 * geometry.lam == pytest.approx(expected, abs=1e-9)

    def test_records(self, simplex: SimplexPotential) -> None:
        geometry = point_geometry(simplex.jet_at((0.5, 0.25), 3))
        record = geometry.to_json()
        assert record["source"] == "closed_form"
        assert set(record["metric"]) == {"11", "12", "22"}
        assert set(record["third"]) == {"111", "112", "122", "222"}
        assert len(record["christoffel"]) == 8
        assert record["lambda"] == pytest.approx(1 / 3)
        row = geometry.row()
        assert list(row)[:3] == ["x1", "x2", "phi"]
        assert row["Lambda_e"] >= row["Lambda_u"]

    def test_order_too_low(self, simplex: SimplexPotential) -> None:
        with pytest.raises(UnsupportedOrderError):
            point_geometry(simplex.jet_at((0.0, 0.0), 2))


class TestFrame:
    def test_rotation(self) -> None:
        frame = Frame(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
        rotated = frame.rotated(np.pi / 2)
        assert np.allclose(rotated.first, [0.0, 1.0])
        assert np.allclose(rotated.second, [-1.0, 0.0])

    def test_contract(self) -> None:
        tensor = np.arange(8.0).reshape(2, 2, 2)
        a, b = np.array([1.0, 2.0]), np.array([0.5, -1.0])
        expected = np.einsum("ijk,i,j->k", tensor, a, b)
        assert np.allclose(contract(tensor, a, b), expected)


class TestHessianFields:
    def test_lambda_field(self, simplex: SimplexPotential) -> None:
        fields = HessianFields(simplex.jet_at((0.3, -0.4), 5))
        assert fields.degree == 2
        assert float(fields.value(fields.lam)) == pytest.approx(1 / 3, abs=1e-9)
        assert np.allclose(fields.gradient_of(fields.lam), 0.0, atol=1e-8)
        assert fields.laplacian_scalar(fields.lam) == pytest.approx(0.0, abs=1e-7)

    def test_metric_is_parallel(self, simplex: SimplexPotential) -> None:
        fields = HessianFields(simplex.jet_at((1.0, 0.5), 4))
        derivative = fields.value(fields.covariant_derivative(fields.metric))
        assert np.allclose(derivative, 0.0, atol=1e-10)

    def test_degree_required(self, simplex: SimplexPotential) -> None:
        fields = HessianFields(simplex.jet_at((0.0, 0.0), 3))
        with pytest.raises(UnsupportedOrderError):
            fields.laplacian_scalar(fields.lam)

    def test_covariant_Q_symmetry(self, simplex: SimplexPotential) -> None:
        q = covariant_Q(simplex.jet_at((0.2, 0.9), 4))
        assert q.shape == (2, 2, 2, 2)
        assert np.allclose(q, np.transpose(q, (1, 0, 2, 3)))
        assert np.allclose(q, np.transpose(q, (3, 2, 1, 0)))

    def test_cube_Q_has_no_cross_terms(self, cube: CubePotential) -> None:
        q = covariant_Q(cube.jet_at((0.4, -1.1), 4))
        assert q[0, 0, 1, 1] == pytest.approx(0.0, abs=1e-12)
        assert q[0, 1, 1, 1] == pytest.approx(0.0, abs=1e-12)

    def test_tensor_laplacian_sources(self, cube: CubePotential) -> None:
        x = np.linspace(-4.0, 4.0, 65)
        X, Y = np.meshgrid(x, x, indexing="ij")
        grid = GridPotential(4.0, cube.values(np.stack([X, Y], axis=-1)), square_body())
        origin = (0.0, 0.0)
        assert grid.jet_at(origin, 4).source is JetSource.GRID
        with pytest.raises(UnsupportedOrderError):
            weighted_laplacian_tensor(grid.jet_at(origin, 4), TensorKind.PHI_I)
        with pytest.raises(UnsupportedOrderError):
            weighted_laplacian_tensor(cube.jet_at(origin, 4), "Phi_i")

    @pytest.mark.parametrize("which", list(TensorKind))
    def test_tensor_laplacian_shapes(
        self, cube: CubePotential, which: TensorKind
    ) -> None:
        laplacian = weighted_laplacian_tensor(cube.jet_at((0.5, 0.5), 5), which)
        rank = {TensorKind.PHI_I: 1, TensorKind.PHI_IAB: 3, TensorKind.G_IJ: 2}[which]
        assert laplacian.shape == (2,) * rank


class TestScalarLaplacian:
    def test_from_jets(self, simplex: SimplexPotential) -> None:
        x = np.array([0.5, -0.5])
        inverse = np.linalg.inv(simplex.jet_at(x, 2).hessian)
        value = weighted_laplacian_scalar(lambda y: simplex.jet_at(y, 2), x, inverse)
        assert value == pytest.approx(2.0)

    def test_from_values(self, simplex: SimplexPotential) -> None:
        x = np.array([0.5, -0.5])
        inverse = np.linalg.inv(simplex.jet_at(x, 2).hessian)
        value = weighted_laplacian_scalar(simplex.value, x, inverse)
        assert value == pytest.approx(2.0, abs=1e-5)

    def test_shape_mismatch(self, simplex: SimplexPotential) -> None:
        with pytest.raises(ValidationError):
            weighted_laplacian_scalar(simplex.value, (0.0, 0.0), np.eye(3))

    def test_fd_hessian(self) -> None:
        def f(y: FloatArray) -> float:
            return float(y[0] ** 2 + 3 * y[0] * y[1] - y[1] ** 2)

        x = np.array([0.3, 0.7])
        hessian = fd_hessian(f, x, f(x), 1e-2)
        assert np.allclose(hessian, [[2.0, 3.0], [3.0, -2.0]], atol=1e-8)
