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

import numpy as np
import pytest

from kelab import ShootingConfig, ShootingError
from kelab.potentials import (
    JetSource,
    RadialPotential,
    RadialProfile,
    ball_profile,
    default_ball_profile,
)


@pytest.fixture(name="profile")
def _profile() -> RadialProfile:
    return default_ball_profile(2)


def radial_points(count: int = 8) -> list[np.ndarray]:
    radii = np.linspace(0.5, 5.0, count)
    angles = np.linspace(0.1, 2 * np.pi, count, endpoint=False)
    return [r * np.array([math.cos(a), math.sin(a)]) for r, a in zip(radii, angles)]


class TestProfile:
    def test_far_field(self, profile: RadialProfile) -> None:
        assert profile.r_max == pytest.approx(30.0)
        assert 1 - 1e-6 < profile.dphi[-1] < 1

    def test_monotone(self, profile: RadialProfile) -> None:
        assert np.all(np.diff(profile.dphi) > 0)
        assert np.all(profile.ddphi > 0)
        assert np.all(np.diff(profile.t) > 0)

    def test_ode_residual(self, profile: RadialProfile) -> None:
        assert profile.ode_residual() < 1e-12

    def test_evaluate_near_origin(self, profile: RadialProfile) -> None:
        phi, dphi, ddphi, _ = profile.evaluate([0.0, 1e-5])
        assert phi[0] == pytest.approx(profile.phi0)
        assert dphi[0] == 0.0
        assert ddphi[0] == pytest.approx(math.exp(-profile.phi0 / 2))

    def test_evaluate_outside(self, profile: RadialProfile) -> None:
        with pytest.raises(ValueError):
            profile.evaluate(31.0)

    def test_taylor_coefficients(self, profile: RadialProfile) -> None:
        coefficients = profile.taylor_coefficients(2.0, 4)
        phi, dphi, ddphi, _ = profile.evaluate(2.0)
        assert coefficients[0] == pytest.approx(phi[0])
        assert coefficients[1] == pytest.approx(dphi[0])
        assert coefficients[2] == pytest.approx(ddphi[0] / 2)
        assert 6 * coefficients[3] == pytest.approx(
            profile.third_derivative(2.0)[0], rel=1e-8
        )

    def test_cached(self) -> None:
        assert default_ball_profile(2) is default_ball_profile(2)

    def test_attempt_limit(self) -> None:
        with pytest.raises(ShootingError) as info:
            ball_profile(2, config=ShootingConfig(max_attempts=3, nodes=100))
        assert len(info.value.trace) == 3


class TestRadialPotential:
    def test_kahler_einstein(self, profile: RadialProfile) -> None:
        potential = RadialPotential(profile)
        for x in radial_points():
            jet = potential.jet_at(x, 2)
            det = float(np.linalg.det(jet.hessian))
            assert det == pytest.approx(math.exp(-jet.value), rel=1e-8)

    def test_gradient_in_disk(self, profile: RadialProfile) -> None:
        potential = RadialPotential(profile, scale=2.0)
        for x in radial_points():
            assert np.linalg.norm(potential.jet_at(x, 1).gradient) < 2.0

    def test_scaled_kahler_einstein(self, profile: RadialProfile) -> None:
        potential = RadialPotential(profile, scale=2.0)
        x = np.array([0.4, 0.9])
        jet = potential.jet_at(x, 2)
        expected = math.exp(-jet.value)
        assert np.linalg.det(jet.hessian) == pytest.approx(expected, rel=1e-8)
        assert potential.body.radius == 2.0

    def test_metric_data(self, profile: RadialProfile) -> None:
        potential = RadialPotential(profile)
        for x in radial_points(4):
            jet = potential.jet_at(x, 3)
            data = potential.metric_data(x)
            assert np.allclose(data.gradient, jet.gradient, atol=1e-9)
            assert np.allclose(data.hessian, jet.hessian, atol=1e-9)
            assert np.allclose(data.third, jet.derivs[3], atol=1e-7)

    def test_rotation_invariance(self, profile: RadialProfile) -> None:
        potential = RadialPotential(profile)
        a = potential.jet_at((1.5, 0.0), 4)
        b = potential.jet_at((0.0, 1.5), 4)
        assert a.value == pytest.approx(b.value, rel=1e-12)
        assert a.hessian[0, 0] == pytest.approx(b.hessian[1, 1], rel=1e-10)
        expected = b.derivs[4][1, 1, 1, 1]
        assert a.derivs[4][0, 0, 0, 0] == pytest.approx(expected, rel=1e-8)

    def test_supports(self, profile: RadialProfile) -> None:
        potential = RadialPotential(profile)
        assert not potential.supports((1e-4, 0.0))
        assert potential.supports((1.0, 0.0))
        assert not potential.supports((40.0, 0.0))

    def test_source(self, profile: RadialProfile) -> None:
        jet = RadialPotential(profile).jet_at((1.0, 1.0), 5)
        assert jet.source is JetSource.RADIAL
        assert jet.order == 5
