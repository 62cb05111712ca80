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

"""
Both sides of the identities and bounds of the Hessian metric,
evaluated independently at a point.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
import scipy.linalg

from .._configuration import Thresholds
from .._exceptions import UnsupportedOrderError, ValidationError
from .._typing import FloatArray
from ..geometry import (
    DELTA_GRAD,
    Frame,
    HessianFields,
    PointGeometry,
    contract,
    covariant_Q,
    point_geometry,
)
from ..potentials import (
    CubePotential,
    Jet,
    JetSource,
    Potential,
    RadialPotential,
    SimplexPotential,
    cube_profile,
)
from ._cubic import cubic_max, orthonormal_third
from ._report import CheckSet

#: Denominators :math:`8\lambda + |\nabla\Phi|^2` below this are degenerate.
DENOMINATOR_FLOOR = 1e-10

#: Directions of the directional gradient bound.
DIRECTIONS = 36

ALGEBRAIC_CHECKS = (
    "ke_trace",
    "lambda_trace",
    "ricci_formula",
    "einstein",
    "riemann_square",
    "bakry_emery",
    "hessian_trace",
    "hessian_norm",
    "hessian_det",
    "hessian_decomposition",
    "g_norm",
    "lambda_lower",
    "frame_nn",
    "frame_vv",
    "frame_nv",
    "frame_g_vv",
    "lambda_chain_upper",
    "lambda_chain_lower",
)

EXAMPLE_CHECKS = (
    "simplex_g",
    "simplex_lambda",
    "simplex_ricci",
    "cube_third_order",
    "cube_flat",
    "ball_gradient",
)

LAPLACIAN_CHECKS = (
    "laplacian_gradient",
    "laplacian_third",
    "laplacian_g",
    "laplacian_grad_norm",
    "laplacian_trace_g",
    "laplacian_forms",
    "Q_trace",
    "Q_lambda_gradient",
)

QFRAME_CHECKS = (
    "eigen_cross",
    "Lambda_e_formula",
    "Q_frame_trace",
    "Q_linear_e",
    "Q_linear_u",
    "Q_eeuu_formula",
    "Q_eeeu_formula",
    "CD_norm",
    "lambda_frame_eigen",
    "lambda_frame_nv",
    "lambda_frame_rotated",
    "lambda_gradient_e",
    "lambda_gradient_u",
    "lambda_gradient_frame",
    "lambda_gradient_square",
)

THEOREM_CHECKS = ("laplacian_lambda_Q", "laplacian_lambda")

BOUND_CHECKS = (
    "lambda_upper",
    "riemannian_convexity",
    "gradient_body",
    "gradient_growth",
    "directional_growth",
    "third_growth",
    "g_growth",
)


def _check_set(
    source: JetSource, order: int, thresholds: Thresholds | None
) -> CheckSet:
    thresholds = thresholds or Thresholds()
    return CheckSet(
        thresholds.threshold(source.value, order),
        relative=thresholds.relative(source.value),
    )


def _trace(pg: PointGeometry, tensor: FloatArray) -> float:
    return float(np.sum(pg.inverse * tensor))


def check_algebraic(
    pg: PointGeometry, jet: Jet, *, thresholds: Thresholds | None = None
) -> CheckSet:
    """
    Pointwise identities between the first three derivatives.
    """
    checks = _check_set(jet.source, 3, thresholds)
    n = pg.dim
    grad2 = pg.grad_norm2
    g_grad = pg.g_of_gradient()

    trace = np.einsum("abc,ab->c", pg.third, pg.inverse)
    checks.identity("ke_trace", trace, -pg.gradient)
    checks.identity("lambda_trace", 2 * pg.lam, _trace(pg, pg.g) - grad2)
    drift = np.einsum("ijk,k->ij", pg.third, pg.grad_vector)
    checks.identity("ricci_formula", 4 * pg.ricci, pg.g + drift)
    checks.identity("bakry_emery", pg.bakry_emery, pg.g / 4 + pg.metric / 2)
    checks.identity("hessian_trace", _trace(pg, pg.hessian_h), n + grad2 / 2)
    checks.identity("hessian_norm", pg.norm2(pg.hessian_h), n + grad2 + g_grad / 4)
    checks.bound("lambda_lower", -grad2 / 8, pg.lam)

    if n != 2:
        checks.skip_all(ALGEBRAIC_CHECKS, "planar identity")
        return checks

    checks.identity("einstein", pg.ricci, pg.lam / 4 * pg.metric)
    checks.identity("riemann_square", pg.riemann_norm2, pg.lam**2 / 4)
    checks.identity(
        "hessian_det",
        np.linalg.det(pg.inverse @ pg.hessian_h),
        1 + grad2 / 2 + (grad2**2 - g_grad) / 8,
    )
    checks.identity(
        "hessian_decomposition", pg.hessian_h, pg.g / 2 + (1 - pg.lam / 2) * pg.metric
    )
    checks.identity(
        "g_norm", pg.norm2(pg.g), 2 * pg.lam**2 + 2 * pg.lam * grad2 + g_grad
    )

    if pg.nv is None:
        checks.skip_all(ALGEBRAIC_CHECKS, "low gradient")
        return checks
    nv, gn = pg.nv, pg.grad_norm
    n_, v = nv.first, nv.second
    third = pg.third
    vvn = float(contract(third, v, v, n_))
    vnn = float(contract(third, v, n_, n_))
    nnn = float(contract(third, n_, n_, n_))
    checks.identity("frame_nn", float(contract(pg.g, n_, n_)) + nnn * gn, pg.lam)
    checks.identity("frame_vv", float(contract(pg.g, v, v)) + vvn * gn, pg.lam)
    checks.identity("frame_nv", float(contract(pg.g, n_, v)) + vnn * gn, 0.0)
    checks.identity(
        "frame_g_vv",
        float(contract(pg.g, v, v)),
        float(contract(third, v, v, v)) ** 2 + 2 * vvn**2 + vnn**2,
    )
    chain = 2 * vvn**2 + vvn * gn
    checks.bound("lambda_chain_upper", chain, pg.lam)
    checks.bound("lambda_chain_lower", -grad2 / 8, chain)
    return checks


def check_examples(
    potential: Potential, pg: PointGeometry, *, thresholds: Thresholds | None = None
) -> CheckSet:
    """
    Formulas particular to the simplex, the cube and the ball.
    """
    checks = _check_set(pg.source, 3, thresholds)
    n = pg.dim
    if isinstance(potential, SimplexPotential):
        p = pg.gradient + 1
        eye = np.eye(n)
        g = (
            eye * (1 - 2 * p / (n + 1))
            + (n + 3) / (n + 1) ** 2 * np.outer(p, p)
            - (p[:, None] + p[None, :]) / (n + 1)
        )
        checks.identity("simplex_g", pg.g, g)
        checks.identity("simplex_lambda", pg.lam, (n - 1) / (n + 1))
        checks.identity("simplex_ricci", pg.ricci, (n - 1) / (4 * (n + 1)) * pg.metric)
    elif isinstance(potential, CubePotential):
        t = potential.halfwidths * pg.point
        expected = float(np.sum(np.exp(cube_profile(t)) * np.tanh(t / 2) ** 2))
        sides = [_trace(pg, pg.g), pg.grad_norm2]
        checks.identity("cube_third_order", sides, [expected] * 2)
        curvature = [float(np.max(np.abs(pg.riemann))), pg.lam]
        checks.identity("cube_flat", curvature, [0.0, 0.0])
    elif isinstance(potential, RadialPotential):
        r = potential.scale * float(np.linalg.norm(pg.point))
        phi, dphi, _, _ = (float(a[0]) for a in potential.profile.evaluate(r))
        expected = math.exp(phi) * dphi ** (n + 1) / r ** (n - 1)
        checks.identity("ball_gradient", pg.grad_norm2, expected)
    checks.skip_all(EXAMPLE_CHECKS, "not applicable")
    return checks


def _require_analytic(jet: Jet, order: int, what: str) -> None:
    if jet.source is JetSource.GRID:
        raise UnsupportedOrderError(f"{what} is not available from grid jets.")
    if jet.order < order:
        raise UnsupportedOrderError(
            f"{what} needs a jet of order {order}, got {jet.order}"
        )


def _raise_all(tensor: FloatArray, inverse: FloatArray) -> FloatArray:
    raised = tensor
    for axis in range(tensor.ndim):
        raised = np.moveaxis(np.tensordot(inverse, raised, axes=(1, axis)), 0, axis)
    return raised


def check_laplacian(
    jet: Jet,
    *,
    pg: PointGeometry | None = None,
    fields: HessianFields | None = None,
    Q: FloatArray | None = None,
    thresholds: Thresholds | None = None,
) -> CheckSet:
    """
    Weighted Laplacians of :math:`\\Phi_i`, :math:`\\Phi_{iab}`, :math:`g_{ij}`,
    :math:`|\\nabla\\Phi|^2` and :math:`\\mathrm{Tr}\\, g`, against their
    expressions in lower-order quantities.

    ``pg``, ``fields`` and ``Q`` may be passed when already computed
    from the same jet.

    :raises UnsupportedOrderError: for grid jets and jets of order below 5
    """
    _require_analytic(jet, 5, "The Laplacian suite")
    checks = _check_set(jet.source, 5, thresholds)
    pg = pg or point_geometry(jet)
    fields = fields or HessianFields(jet)
    Q = covariant_Q(jet) if Q is None else Q
    h = pg.inverse
    n = pg.dim
    g, third = pg.g, pg.third
    grad2 = pg.grad_norm2

    lap_gradient = fields.laplacian_tensor(fields.gradient)
    expected = pg.gradient / 2 + g @ pg.grad_vector / 4
    checks.identity("laplacian_gradient", lap_gradient, expected)

    up = np.einsum("lp,pik->lik", h, third)
    cubic = np.einsum("lik,mal,kbm->iab", up, up, up)
    g_up = g @ h
    mixed = (
        np.einsum("ik,kab->iab", g_up, third)
        + np.einsum("ak,kib->iab", g_up, third)
        + np.einsum("bk,kia->iab", g_up, third)
    )
    checks.identity(
        "laplacian_third",
        fields.laplacian_tensor(fields.third),
        third / 2 - cubic / 2 + mixed / 4,
    )

    # contracted indices are raised, the free pair stays covariant
    QQ = np.einsum("piab,pc,ad,be,cjde->ij", Q, h, h, h, Q)
    RR = np.einsum("iabc,ad,be,cf,jdef->ij", pg.riemann, h, h, h, pg.riemann)
    checks.identity(
        "laplacian_g",
        fields.laplacian_tensor(fields.g),
        g + g @ h @ g / 2 + 2 * QQ + 8 * RR,
    )

    lap_grad2 = fields.laplacian_scalar(fields.grad_norm2)
    checks.identity(
        "laplacian_grad_norm", lap_grad2, 2 * n + 3 * grad2 + pg.g_of_gradient()
    )
    checks.identity(
        "laplacian_trace_g",
        fields.laplacian_scalar(fields.trace_g),
        _trace(pg, g) + pg.norm2(g) / 2 + 8 * pg.riemann_norm2 + 2 * pg.norm2(Q),
    )
    checks.identity(
        "laplacian_forms", float(fields.laplacian_tensor(fields.grad_norm2)), lap_grad2
    )
    checks.identity("Q_trace", np.einsum("abcd,cd->ab", Q, h), -pg.hessian_h)
    checks.identity(
        "Q_lambda_gradient",
        np.einsum("pabc,abc->p", Q, _raise_all(third, h)),
        pg.hessian_h @ pg.grad_vector + fields.gradient_of(fields.lam),
    )
    return checks


@dataclasses.dataclass(frozen=True)
class EigenframeData:
    """
    Components of the derivatives of :math:`\\Phi` in the eigenframe ``(e, u)``.
    """

    frame: Frame
    Lambda_e: float
    Lambda_u: float
    phi_e: float
    phi_u: float
    phi_euu: float
    phi_eeu: float
    lam_e: float
    lam_u: float

    @property
    def A(self) -> float:
        return -self.phi_euu * self.Lambda_e + self.lam_e

    @property
    def B(self) -> float:
        return -self.phi_eeu * self.Lambda_u + self.lam_u

    @property
    def C(self) -> float:
        return 4 * self.phi_euu + self.phi_e

    @property
    def D(self) -> float:
        return 4 * self.phi_eeu + self.phi_u

    def Q_closed_form(self) -> tuple[float, float]:
        """
        :math:`(Q_{eeuu}, Q_{eeeu})` from the two linear equations
        :math:`CQ_{eeuu} + DQ_{eeeu} = A`, :math:`DQ_{eeuu} - CQ_{eeeu} = B`.
        """
        A, B, C, D = self.A, self.B, self.C, self.D
        norm = C * C + D * D
        return (A * C + B * D) / norm, (A * D - B * C) / norm


def eigenframe_data(pg: PointGeometry, lambda_gradient: FloatArray) -> EigenframeData:
    if pg.eigenframe is None:
        raise ValidationError(f"Degenerate eigenframe at {pg.point.tolist()}")
    e, u = pg.eigenframe.first, pg.eigenframe.second
    return EigenframeData(
        frame=pg.eigenframe,
        Lambda_e=float(pg.eigenvalues[0]),
        Lambda_u=float(pg.eigenvalues[1]),
        phi_e=float(pg.gradient @ e),
        phi_u=float(pg.gradient @ u),
        phi_euu=float(contract(pg.third, e, u, u)),
        phi_eeu=float(contract(pg.third, e, e, u)),
        lam_e=float(lambda_gradient @ e),
        lam_u=float(lambda_gradient @ u),
    )


def _lambda_in_frame(pg: PointGeometry, frame: Frame) -> float:
    e, u = frame.first, frame.second
    euu = float(contract(pg.third, e, u, u))
    eeu = float(contract(pg.third, e, e, u))
    phi_e, phi_u = float(pg.gradient @ e), float(pg.gradient @ u)
    return 2 * (euu**2 + eeu**2) + phi_e * euu + phi_u * eeu


def check_Q_and_frame(
    pg: PointGeometry,
    Q: FloatArray,
    jet: Jet,
    *,
    fields: HessianFields | None = None,
    thresholds: Thresholds | None = None,
) -> CheckSet:
    """
    The Q-tensor in the eigenframe of the Riemannian Hessian and the
    frame expressions of :math:`\\lambda` and its gradient.

    Needs a planar jet of order at least 4; frame checks are skipped
    at critical points and where the eigenframe is degenerate.
    """
    checks = _check_set(jet.source, 4, thresholds)
    if pg.dim != 2:
        checks.skip_all(QFRAME_CHECKS, "planar identity")
        return checks
    if pg.grad_norm < DELTA_GRAD:
        checks.skip_all(QFRAME_CHECKS, "low gradient")
        return checks
    assert pg.nv is not None
    checks.identity("lambda_frame_nv", _lambda_in_frame(pg, pg.nv), pg.lam)
    rotated = _lambda_in_frame(pg, pg.nv.rotated(0.7))
    checks.identity("lambda_frame_rotated", rotated, pg.lam)
    if pg.eigenframe is None:
        checks.skip_all(QFRAME_CHECKS, "degenerate eigenframe")
        return checks

    fields = fields or HessianFields(jet)
    lambda_gradient = fields.gradient_of(fields.lam)
    data = eigenframe_data(pg, lambda_gradient)
    e, u = data.frame.first, data.frame.second
    Le, Lu = data.Lambda_e, data.Lambda_u
    q_eeee = float(contract(Q, e, e, e, e))
    q_eeeu = float(contract(Q, e, e, e, u))
    q_eeuu = float(contract(Q, e, e, u, u))
    q_euuu = float(contract(Q, e, u, u, u))
    q_uuuu = float(contract(Q, u, u, u, u))

    checks.identity("eigen_cross", float(contract(pg.third, e, u, pg.grad_vector)), 0.0)
    checks.identity(
        "Lambda_e_formula",
        Le,
        1
        + data.phi_e**2 / 2
        + (data.phi_e * data.phi_euu - data.phi_u * data.phi_eeu) / 2,
    )
    checks.identity(
        "Q_frame_trace",
        [q_eeee + q_eeuu, q_eeeu + q_euuu, q_eeuu + q_uuuu],
        [-Le, 0.0, -Lu],
    )
    checks.identity("Q_linear_e", data.C * q_eeuu + data.D * q_eeeu, data.A)
    checks.identity("Q_linear_u", data.D * q_eeuu - data.C * q_eeeu, data.B)

    grad2 = pg.grad_norm2
    denominator = 8 * pg.lam + grad2
    checks.identity("CD_norm", data.C**2 + data.D**2, denominator)
    if abs(denominator) < DENOMINATOR_FLOOR:
        checks.skip("Q_eeuu_formula", "degenerate denominator")
        checks.skip("Q_eeeu_formula", "degenerate denominator")
    else:
        closed_eeuu, closed_eeeu = data.Q_closed_form()
        checks.identity("Q_eeuu_formula", q_eeuu, closed_eeuu)
        checks.identity("Q_eeeu_formula", q_eeeu, closed_eeeu)

    checks.identity("lambda_frame_eigen", _lambda_in_frame(pg, data.frame), pg.lam)
    checks.identity(
        "lambda_gradient_e", pg.lam * data.phi_e, 2 * data.phi_euu * (Le - Lu)
    )
    checks.identity(
        "lambda_gradient_u", pg.lam * data.phi_u, 2 * data.phi_eeu * (Lu - Le)
    )
    grad_dot = float(pg.grad_vector @ lambda_gradient)
    checks.identity(
        "lambda_gradient_frame",
        2 * (data.lam_e * data.phi_euu - data.lam_u * data.phi_eeu) * (Lu - Le)
        + pg.lam * grad_dot,
        0.0,
    )
    A, B, C, D = data.A, data.B, data.C, data.D
    lam_grad2 = data.lam_e**2 + data.lam_u**2
    checks.identity(
        "lambda_gradient_square",
        16 * (A * A + B * B) + 2 * (4 + grad2) * (A * C + B * D),
        pg.lam * (grad2 * (pg.lam - grad2) - 6 * grad2 - 8)
        + 16 * lam_grad2
        + 2 * (4 * (1 - pg.lam) + grad2) * grad_dot,
    )
    return checks


def check_theorem(
    jet: Jet,
    *,
    pg: PointGeometry | None = None,
    fields: HessianFields | None = None,
    Q: FloatArray | None = None,
    thresholds: Thresholds | None = None,
) -> CheckSet:
    """
    The weighted Laplacian of :math:`\\lambda`, in terms of the Q-tensor
    and in closed form:

    .. math::

        2L\\lambda = (3\\lambda - 1)(\\lambda + 1)
        + \\frac{|\\nabla\\Phi|^2 (3\\lambda - 1)^2 + 16|\\nabla\\lambda|^2
        + 2(4(1 - \\lambda) + |\\nabla\\Phi|^2)
        \\langle\\nabla\\Phi, \\nabla\\lambda\\rangle}
        {8\\lambda + |\\nabla\\Phi|^2}.

    :raises UnsupportedOrderError: for grid jets and jets of order below 5
    """
    _require_analytic(jet, 5, "The curvature Laplacian")
    checks = _check_set(jet.source, 5, thresholds)
    pg = pg or point_geometry(jet)
    if pg.dim != 2:
        checks.skip_all(THEOREM_CHECKS, "planar identity")
        return checks
    if pg.grad_norm < DELTA_GRAD:
        checks.skip_all(THEOREM_CHECKS, "low gradient")
        return checks

    fields = fields or HessianFields(jet)
    lap = 2 * fields.laplacian_scalar(fields.lam)
    lambda_gradient = fields.gradient_of(fields.lam)
    lam, grad2 = pg.lam, pg.grad_norm2
    lam_grad2 = float(lambda_gradient @ pg.inverse @ lambda_gradient)
    grad_dot = float(pg.grad_vector @ lambda_gradient)

    if pg.eigenframe is None:
        checks.skip("laplacian_lambda_Q", "degenerate eigenframe")
    else:
        Q = covariant_Q(jet) if Q is None else Q
        e, u = pg.eigenframe.first, pg.eigenframe.second
        q_eeuu = float(contract(Q, e, e, u, u))
        q_eeeu = float(contract(Q, e, e, e, u))
        checks.identity(
            "laplacian_lambda_Q",
            lap,
            2 * lam
            + 3 * lam**2
            + lam * grad2
            + 16 * (q_eeuu**2 + q_eeeu**2)
            + 2 * q_eeuu * (4 + grad2),
        )

    denominator = 8 * lam + grad2
    if abs(denominator) < DENOMINATOR_FLOOR:
        checks.skip("laplacian_lambda", "degenerate denominator")
        return checks
    checks.identity(
        "laplacian_lambda",
        lap,
        (3 * lam - 1) * (lam + 1)
        + (
            grad2 * (3 * lam - 1) ** 2
            + 16 * lam_grad2
            + 2 * (4 * (1 - lam) + grad2) * grad_dot
        )
        / denominator,
    )
    return checks


@dataclasses.dataclass(frozen=True)
class BoundsContext:
    """
    Global data of a potential entering the pointwise bounds.
    """

    #: Radius of a ball about the origin containing the body.
    outer_radius: float

    #: :math:`m = \min \Phi`.
    minimum: float


def growth_constant(alpha: float, n: int) -> float:
    """
    :math:`\\alpha(n + 4)n / (1 - \\alpha)^2`.
    """
    if alpha <= 1:
        raise ValidationError(f"The growth exponent must exceed 1, got: {alpha}")
    return alpha * (n + 4) * n / (1 - alpha) ** 2


def check_bounds(
    pg: PointGeometry,
    jet: Jet,
    context: BoundsContext,
    alpha: float = 2.0,
    *,
    lam_tolerance: float | None = None,
    thresholds: Thresholds | None = None,
) -> CheckSet:
    """
    Curvature, convexity and gradient bounds at a point.

    ``lam_tolerance`` widens the curvature bound, e.g. by the
    jet error of grid potentials. Bounds with an unknown constant are
    recorded as growth ratios against :math:`e^{\\alpha(\\Phi - m)}`.
    """
    checks = _check_set(jet.source, 3, thresholds)
    n = pg.dim
    constant = growth_constant(alpha, n)
    weight = math.exp(alpha * (pg.value - context.minimum))

    checks.bound("lambda_upper", pg.lam, 1 / 3, tolerance=lam_tolerance)
    checks.bound("riemannian_convexity", 5 / 6, pg.min_eigenvalue)
    checks.bound(
        "gradient_body",
        pg.grad_norm2,
        2 ** (n - 1) * context.outer_radius ** (2 * n) * math.exp(pg.value),
    )
    checks.bound("gradient_growth", pg.grad_norm2, constant * weight)

    if n == 2:
        theta = np.pi * np.arange(DIRECTIONS) / DIRECTIONS
        E = np.column_stack([np.cos(theta), np.sin(theta)])
        ratios = (E @ pg.gradient) ** 2 / np.einsum("ni,ij,nj->n", E, pg.metric, E)
        checks.bound("directional_growth", float(np.max(ratios)), constant * weight)
        _, T = orthonormal_third(pg.metric, pg.third)
        f = cubic_max(T).value
        checks.growth("third_growth", f**2, weight)
    else:
        checks.skip("directional_growth", "planar bound")
        checks.skip("third_growth", "planar bound")
    g_norm = float(scipy.linalg.eigh(pg.g, pg.metric, eigvals_only=True)[-1])
    checks.growth("g_growth", g_norm, weight)
    return checks
