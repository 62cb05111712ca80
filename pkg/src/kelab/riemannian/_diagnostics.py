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
import logging
import math
from typing import Any, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma

from .._exceptions import JetError
from .._typing import FloatArray
from ..geometry import point_geometry
from ..potentials import RadialPotential, RadialProfile

logger = logging.getLogger("kelab.riemannian")

#: Radii where the explicit curvature is compared with the jets.
COMPARISON_RADII = tuple(np.linspace(0.5, 5.0, 10).tolist())

#: Radii where the large-radius behaviour of the curvature is recorded.
FAR_RADII = (6.0, 8.0, 10.0, 12.0, 15.0, 20.0)


def sphere_constant(n: int) -> float:
    """
    :math:`\\kappa_n = n\\pi^{n/2} / \\Gamma(1 + n/2)`, the area of the unit sphere.
    """
    return float(n * math.pi ** (n / 2) / gamma(1 + n / 2))


def curvature_usual(profile: RadialProfile, r: FloatArray) -> FloatArray:
    """
    Gaussian curvature of :math:`E\\,dr^2 + G\\,d\\theta^2` with
    :math:`E = \\varphi''`, :math:`G = r\\varphi'`:
    :math:`H = -\\frac{1}{2\\sqrt{EG}} \\frac{d}{dr}\\frac{G_r}{\\sqrt{EG}}`.
    """
    _, d1, d2, _ = profile.evaluate(r)
    d3 = profile.third_derivative(r)
    G_r = d1 + r * d2
    G_rr = 2 * d2 + r * d3
    W = np.sqrt(r * d1 * d2)
    W_r = (d1 * d2 + r * d2**2 + r * d1 * d3) / (2 * W)
    return -(G_rr * W - G_r * W_r) / (2 * W**3)  # type: ignore[no-any-return]


def curvature_closed(profile: RadialProfile, r: FloatArray) -> FloatArray:
    """
    The same curvature simplified with :math:`\\varphi'\\varphi'' = r e^{-\\varphi}`.
    """
    phi, d1, _, _ = profile.evaluate(r)
    return (  # type: ignore[no-any-return]
        -(d1**2) * np.exp(phi) / (4 * r**2)
        + 0.25
        + np.exp(phi) * d1 / (2 * r**3)
        - 1 / (r * d1)
        + r * np.exp(-phi) / (2 * d1**3)
    )


@dataclasses.dataclass
class BallDiagnostics:
    """
    Riemannian quantities of the ball potential.
    """

    n: int

    #: :math:`D_n = \int_0^\infty \sqrt{\varphi''}\,dr`.
    D: float

    #: Estimated remainder beyond ``r_max`` included in :attr:`D`.
    D_tail: float

    #: Euclidean radii of the sphere-size table.
    sphere_radii: list[float]

    #: Riemannian radii :math:`t(r)`.
    sphere_t: list[float]

    #: :math:`\kappa_n (r\varphi')^{(n-1)/2}`.
    sphere_sizes: list[float]

    sphere_sizes_increasing: bool

    #: :math:`\lambda(0)`, extrapolated from the jets.
    lambda_origin: float

    #: Curvature comparison radii.
    comparison_radii: list[float] = dataclasses.field(default_factory=list)

    #: Explicit curvature by the usual formula.
    H_usual: list[float] = dataclasses.field(default_factory=list)

    #: Explicit curvature by the simplified formula.
    H_closed: list[float] = dataclasses.field(default_factory=list)

    #: :math:`\lambda/4` from the jets.
    H_jets: list[float] = dataclasses.field(default_factory=list)

    #: Largest deviation between the three curvature computations.
    H_deviation: float = math.nan

    far_radii: list[float] = dataclasses.field(default_factory=list)
    H_far: list[float] = dataclasses.field(default_factory=list)
    H_far_decreasing: bool = False

    #: :math:`|\nabla\Phi|^2 = e^{\varphi}\varphi'^{n+1}/r^{n-1}` at the far radii.
    gradient_far: list[float] = dataclasses.field(default_factory=list)

    #: :math:`(|\nabla\Phi|^2/8) / (-H)` at the far radii.
    gradient_curvature_ratio: list[float] = dataclasses.field(default_factory=list)

    def to_json(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    def rows(self) -> list[tuple[float, float, float]]:
        """
        Sphere-size table ``(r, t, size)``.
        """
        return list(zip(self.sphere_radii, self.sphere_t, self.sphere_sizes))


def _tail(profile: RadialProfile) -> float:
    phi_max = float(profile.phi[-1])
    r_max = profile.r_max
    exponent = (profile.n - 1) / 2
    integral, _ = quad(lambda s: math.exp(-s / 2) * (r_max + s) ** exponent, 0, np.inf)
    return math.exp(-phi_max / 2) * integral


def _lambda(potential: RadialPotential, r: float) -> float:
    point = np.zeros(potential.dim)
    point[0] = r
    return point_geometry(potential.jet_at(point, 3)).lam


def ball_diagnostics(
    profile: RadialProfile, sphere_radii: Sequence[float] | None = None
) -> BallDiagnostics:
    """
    :math:`D_n`, the growth of Riemannian spheres, :math:`\\lambda(0)` and,
    in the plane, the explicit curvature of the ball metric against the jets.
    """
    n = profile.n
    potential = RadialPotential(profile)
    tail = _tail(profile)
    D = float(profile.t[-1]) + tail

    if sphere_radii is None:
        sphere_radii = np.linspace(1.0, 0.9 * profile.r_max, 12).tolist()
    radii = np.asarray(sphere_radii, dtype=float)
    _, d1, _, t = profile.evaluate(radii)
    sizes = sphere_constant(n) * (radii * d1) ** ((n - 1) / 2)

    # Richardson extrapolation of λ(r) = λ(0) + O(r²).
    lambda_origin = (4 * _lambda(potential, 0.01) - _lambda(potential, 0.02)) / 3

    diagnostics = BallDiagnostics(
        n=n,
        D=D,
        D_tail=tail,
        sphere_radii=radii.tolist(),
        sphere_t=t.tolist(),
        sphere_sizes=sizes.tolist(),
        sphere_sizes_increasing=bool(np.all(np.diff(sizes) > 0)),
        lambda_origin=lambda_origin,
    )
    if n != 2:
        return diagnostics

    comparison = np.array(COMPARISON_RADII)
    usual = curvature_usual(profile, comparison)
    closed = curvature_closed(profile, comparison)
    jets = []
    for r in comparison:
        try:
            jets.append(_lambda(potential, float(r)) / 4)
        except JetError as exc:
            logger.warning(f"No jets at r={r}: {exc}")
            jets.append(math.nan)
    H_jets = np.array(jets)
    far = np.array([r for r in FAR_RADII if r < profile.r_max])
    H_far = curvature_closed(profile, far)
    phi, d1, _, _ = profile.evaluate(far)
    gradient = np.exp(phi) * d1 ** (n + 1) / far ** (n - 1)

    diagnostics.comparison_radii = comparison.tolist()
    diagnostics.H_usual = usual.tolist()
    diagnostics.H_closed = closed.tolist()
    diagnostics.H_jets = H_jets.tolist()
    diagnostics.H_deviation = float(
        max(np.nanmax(np.abs(usual - closed)), np.nanmax(np.abs(closed - H_jets)))
    )
    diagnostics.far_radii = far.tolist()
    diagnostics.H_far = H_far.tolist()
    diagnostics.H_far_decreasing = bool(np.all(np.diff(H_far) < 0))
    diagnostics.gradient_far = gradient.tolist()
    diagnostics.gradient_curvature_ratio = (gradient / 8 / -H_far).tolist()
    logger.info(
        f"Ball diagnostics: D_{n} = {D:.10f}, λ(0) = {lambda_origin:.10f}, "
        f"curvature deviation {diagnostics.H_deviation:.3e}"
    )
    return diagnostics
