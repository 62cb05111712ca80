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
import functools
import logging
import math
from typing import Any, Callable, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from .._configuration import ShootingConfig
from .._exceptions import ShootingError, ValidationError
from .._typing import FloatArray, PointLike
from ..bodies import ConvexBody, make_body
from ._base import MetricData, Potential
from ._jets import Jet, JetSource
from ._taylor import TaylorAlgebra

logger = logging.getLogger("kelab.potentials")

_State = Tuple[float, float, float]


def _rhs(n: int) -> Callable[[float, FloatArray], FloatArray]:
    def rhs(r: float, y: FloatArray) -> FloatArray:
        phi, dphi, _ = y
        ddphi = math.exp(-phi) * (r / dphi) ** (n - 1)
        return np.array([dphi, ddphi, math.sqrt(ddphi)])

    return rhs


def _series_start(n: int, phi0: float, r: float) -> _State:
    # φ ≈ φ(0) + c r²/2 with cⁿ = e^{-φ(0)}
    c = math.exp(-phi0 / n)
    return phi0 + c * r**2 / 2, c * r, math.sqrt(c) * r


def _saturation_event(r: float, y: FloatArray) -> float:
    return float(y[1] - 1.0)


_saturation_event.terminal = True  # type: ignore[attr-defined]
_saturation_event.direction = 1  # type: ignore[attr-defined]


def _shoot(n: int, phi0: float, config: ShootingConfig, dense: bool = False) -> Any:
    start = _series_start(n, phi0, config.r_start)
    return solve_ivp(
        _rhs(n),
        (config.r_start, config.r_max),
        np.array(start),
        method="DOP853",
        rtol=config.rtol,
        atol=config.atol,
        events=_saturation_event,
        dense_output=dense,
    )


def _overshoots(result: Any) -> bool:
    # φ' reaching one at finite r means φ(0) is too small.
    return result.status == 1 or not result.success


@dataclasses.dataclass(frozen=True, eq=False)
class RadialProfile:
    """
    Solution of :math:`(\\varphi'/r)^{n-1}\\varphi'' = e^{-\\varphi}` with
    :math:`\\varphi'(0) = 0` and :math:`\\varphi'(\\infty) = 1`, sampled on a grid.
    """

    #: Dimension.
    n: int

    #: Shooting value :math:`\varphi(0)`.
    phi0: float

    #: Increasing radii in :math:`(0, r_{max}]`.
    r: FloatArray

    #: :math:`\varphi` at the radii.
    phi: FloatArray

    #: :math:`\varphi'` at the radii.
    dphi: FloatArray

    #: :math:`\varphi''` at the radii.
    ddphi: FloatArray

    #: Riemannian distance :math:`t(r) = \int_0^r \sqrt{\varphi''}` from the origin.
    t: FloatArray

    #: Configuration used by the shooter.
    config: ShootingConfig

    #: Continuous extension of the integrator.
    solution: Callable[[FloatArray], FloatArray] = dataclasses.field(repr=False)

    #: Order of the continuous extension.
    interpolation_order: int = 7

    @property
    def r_max(self) -> float:
        return float(self.r[-1])

    def evaluate(
        self, r: FloatArray | float
    ) -> tuple[FloatArray, FloatArray, FloatArray, FloatArray]:
        """
        :math:`(\\varphi, \\varphi', \\varphi'', t)` at arbitrary radii
        in :math:`[0, r_{max}]`.
        """
        radii = np.atleast_1d(np.asarray(r, dtype=float))
        if np.any(radii < 0) or np.any(radii > self.r_max * (1 + 1e-12)):
            raise ValidationError(f"Radius outside [0, {self.r_max}]")
        phi = np.empty_like(radii)
        dphi = np.empty_like(radii)
        t = np.empty_like(radii)
        near = radii < self.config.r_start
        for k in np.flatnonzero(near):
            phi[k], dphi[k], t[k] = _series_start(self.n, self.phi0, radii[k])
        if np.any(~near):
            values = self.solution(radii[~near])
            phi[~near], dphi[~near], t[~near] = values
        c = math.exp(-self.phi0 / self.n)
        with np.errstate(divide="ignore", invalid="ignore"):
            ddphi = np.where(
                radii > 0, np.exp(-phi) * (radii / dphi) ** (self.n - 1), c
            )
        return phi, dphi, ddphi, t

    def third_derivative(self, r: FloatArray | float) -> FloatArray:
        """
        The profile's third derivative,
        :math:`\\varphi''' = \\varphi''((n-1)(1/r - \\varphi''/\\varphi') - \\varphi')`.
        """
        radii = np.atleast_1d(np.asarray(r, dtype=float))
        _, dphi, ddphi, _ = self.evaluate(radii)
        return (  # type: ignore[no-any-return]
            ddphi * ((self.n - 1) * (1 / radii - ddphi / dphi) - dphi)
        )

    def ode_residual(self) -> float:
        """
        Largest :math:`|(\\varphi'/r)^{n-1}\\varphi'' - e^{-\\varphi}|` on the grid.
        """
        lhs = (self.dphi / self.r) ** (self.n - 1) * self.ddphi
        return float(np.max(np.abs(lhs - np.exp(-self.phi))))

    def rows(self) -> list[tuple[float, ...]]:
        """
        Table rows ``(r, phi, dphi, ddphi, t)`` for CSV output.
        """
        columns = (self.r, self.phi, self.dphi, self.ddphi, self.t)
        return list(zip(*(a.tolist() for a in columns)))

    def taylor_coefficients(self, r0: float, degree: int) -> FloatArray:
        """
        Taylor coefficients of :math:`\\varphi` at ``r0`` up to ``degree``,
        obtained by Picard iteration of the ODE in truncated Taylor arithmetic.
        """
        phi, dphi, _, _ = self.evaluate(r0)
        algebra = TaylorAlgebra.get(1, degree)
        f = algebra.constant(float(phi[0]))
        if degree >= 1:
            f[1] = float(dphi[0])
        radius = algebra.variable(0, r0)
        for _ in range(degree):
            quotient = algebra.mul(radius, algebra.reciprocal(algebra.diff(f, 0)))
            rhs = algebra.mul(algebra.exp(-f), algebra.power(quotient, self.n - 1))
            for k in range(degree - 1):
                f[k + 2] = rhs[k] / ((k + 1) * (k + 2))
        return f


def ball_profile(
    n: int = 2,
    r_max: float | None = None,
    tol: float | None = None,
    *,
    config: ShootingConfig | None = None,
) -> RadialProfile:
    """
    Solve the radial equation of the ball by shooting on :math:`\\varphi(0)`.

    Each trial integrates from a series start near the origin.
    A trial whose :math:`\\varphi'` reaches one at a finite radius has
    :math:`\\varphi(0)` too small; a trial that stays below one has it too large.
    The bracket is widened until it contains a sign change
    and then bisected down to ``config.bisection_tolerance``.
    The profile of the upper end is returned.

    :raises ShootingError: if no bracket is found or the far field is not reached
    """
    if n < 2:
        raise ValidationError(f"The ball equation needs n >= 2, got: {n}")
    config = (config or ShootingConfig()).clone()
    if r_max is not None:
        config.r_max = r_max
    if tol is not None:
        config.far_tolerance = tol
    config.validate()

    trace: list[tuple[float, str]] = []

    def overshoots(phi0: float) -> bool:
        if len(trace) >= config.max_attempts:
            raise ShootingError(
                f"No convergence within {config.max_attempts} attempts", trace
            )
        verdict = _overshoots(_shoot(n, phi0, config))
        trace.append((phi0, "overshoot" if verdict else "saturates"))
        return verdict

    lo, hi = config.bracket
    width = hi - lo
    while not overshoots(lo):
        lo -= width
        width *= 2
        if lo < -1e3:
            raise ShootingError("No value of φ(0) makes φ' reach one.", trace)
    width = hi - lo
    while overshoots(hi):
        hi += width
        width *= 2
        if hi > 1e3:
            raise ShootingError("No value of φ(0) keeps φ' below one.", trace)
    logger.debug(f"Shooting bracket for n={n}: [{lo}, {hi}]")

    while hi - lo > config.bisection_tolerance:
        mid = (lo + hi) / 2
        if mid in (lo, hi):
            break
        if overshoots(mid):
            lo = mid
        else:
            hi = mid

    result = _shoot(n, hi, config, dense=True)
    if result.status != 0:
        raise ShootingError(f"Final integration failed: {result.message}", trace)
    far = float(result.y[1, -1])
    if not 1 - config.far_tolerance < far < 1:
        raise ShootingError(
            f"φ'(r_max) = {far} is not within {config.far_tolerance} of one; "
            f"increase r_max",
            trace,
        )

    m = config.nodes // 4
    r = np.unique(
        np.concatenate(
            [
                np.geomspace(config.r_start, 1.0, m),
                np.linspace(1.0, config.r_max, config.nodes - m),
            ]
        )
    )
    phi, dphi, t = result.sol(r)
    ddphi = np.exp(-phi) * (r / dphi) ** (n - 1)
    logger.info(
        f"Ball profile n={n}: φ(0) = {hi!r} after {len(trace)} shots, "
        f"φ'({config.r_max}) = {far!r}"
    )
    return RadialProfile(
        n=n,
        phi0=hi,
        r=r,
        phi=phi,
        dphi=dphi,
        ddphi=ddphi,
        t=t,
        config=config,
        solution=result.sol,
    )


@functools.lru_cache(maxsize=8)
def default_ball_profile(n: int = 2) -> RadialProfile:
    """
    Ball profile with the default shooting configuration,
    computed once per dimension.
    """
    return ball_profile(n)


class RadialPotential(Potential):
    """
    Radial potential :math:`\\Phi(x) = \\varphi(s|x|) - 2n\\log s`
    of the ball of radius ``s``.

    Jets are computed by the chain rule for :math:`f(|x|)` in truncated
    Taylor arithmetic, for :math:`r_{min} \\le s|x| \\le r_{max}`.
    """

    source = JetSource.RADIAL
    max_order = 5

    def __init__(self, profile: RadialProfile, *, scale: float = 1.0) -> None:
        if scale <= 0:
            raise ValidationError(f"Scale must be positive, got: {scale}")
        self.profile = profile
        self.scale = scale
        self.dim = profile.n
        self._shift = -2 * profile.n * math.log(scale)

    @property
    def descriptor(self) -> str:
        name = "radial:ball" if self.dim == 2 else f"radial:ball:{self.dim}"
        return name if self.scale == 1 else f"{name} (radius {self.scale})"

    @property
    def body(self) -> ConvexBody:
        if self.dim != 2:
            raise ValidationError("Only the disk is available as a body.")
        return make_body({"kind": "disk", "radius": self.scale})

    def minimum(self) -> float:
        return self.profile.phi0 + self._shift

    def supports(self, x: PointLike) -> bool:
        r = self.scale * float(np.linalg.norm(np.asarray(x, dtype=float)))
        return self.profile.config.r_min <= r <= self.profile.r_max

    def value(self, x: PointLike) -> float:
        r = self.scale * float(np.linalg.norm(np.asarray(x, dtype=float)))
        return float(self.profile.evaluate(r)[0][0]) + self._shift

    def values(self, points: FloatArray) -> FloatArray:
        points = np.asarray(points, dtype=float)
        r = self.scale * np.linalg.norm(points, axis=-1)
        phi = self.profile.evaluate(r.ravel())[0]
        return phi.reshape(r.shape) + self._shift  # type: ignore[no-any-return]

    def _jet(self, x: FloatArray, order: int) -> Jet:
        s = self.scale
        r0 = s * float(np.linalg.norm(x))
        coefficients = self.profile.taylor_coefficients(r0, order)
        algebra = TaylorAlgebra.get(self.dim, order)
        coords = [s * c for c in algebra.point(x)]
        squares = sum(algebra.mul(c, c) for c in coords)
        radius = algebra.sqrt(squares)  # type: ignore[arg-type]
        field = algebra.power_series(radius, coefficients)
        field[0] += self._shift
        derivs = algebra.derivatives(field)
        tol = self.profile.config.rtol
        est_error = tuple(
            tol * max(1.0, float(np.max(np.abs(d)))) for d in derivs
        )
        return Jet(x, order, tuple(derivs), self.source, est_error)

    def metric_data(self, x: PointLike) -> MetricData:
        x = np.asarray(x, dtype=float)
        s = self.scale
        r = s * float(np.linalg.norm(x))
        n = self.dim
        eye = np.eye(n)
        if r < 1e-8:
            c = math.exp(-self.profile.phi0 / n)
            return MetricData(s**2 * c * x, s**2 * c * eye, np.zeros((n, n, n)))
        _, d1, d2, _ = (float(v[0]) for v in self.profile.evaluate(r))
        d3 = float(self.profile.third_derivative(r)[0])
        u = s * x / r
        uu = np.outer(u, u)
        gradient = s * d1 * u
        hessian = s**2 * (d2 * uu + d1 / r * (eye - uu))
        a = d2 - d1 / r
        sym = (
            np.einsum("ij,k->ijk", eye, u)
            + np.einsum("ik,j->ijk", eye, u)
            + np.einsum("jk,i->ijk", eye, u)
        )
        uuu = np.einsum("i,j,k->ijk", u, u, u)
        third = s**3 * (d3 * uuu + a / r * (sym - 3 * uuu))
        return MetricData(gradient, hessian, third)
