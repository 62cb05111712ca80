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
from typing import Any, NamedTuple

import numpy as np
import scipy.sparse as sparse
from scipy.sparse.linalg import spsolve
from scipy.special import logsumexp

from .._configuration import SolverConfig
from .._exceptions import ConvexityError, SolverError, ValidationError
from .._typing import FloatArray
from ..bodies import BodyKind, ConvexBody, area, gauge, support_values
from ..potentials import (
    CubePotential,
    GridPotential,
    Potential,
    RadialPotential,
    SimplexPotential,
    default_ball_profile,
)
from ._asymptotics import asymptotic_values
from ._stencils import GridStencils, is_convex

logger = logging.getLogger("kelab.solver")

#: Sufficient decrease constant of the line search.
ARMIJO = 1e-4

#: Discrete gradients must lie in the body dilated by this factor.
GRADIENT_DILATION = 1.05

_D4 = tuple(
    np.array(m)
    for m in (
        [[0, -1], [1, 0]],
        [[-1, 0], [0, -1]],
        [[0, 1], [-1, 0]],
        [[1, 0], [0, -1]],
        [[-1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1], [-1, 0]],
    )
)


class _State(NamedTuple):
    #: Newton function at interior nodes.
    F: FloatArray
    a: FloatArray
    b: FloatArray
    c: FloatArray
    #: Discrete determinants plus the cushion.
    det: FloatArray
    #: Derivative of the source term, the diagonal of the Newton matrix.
    weight: FloatArray


def smoothed_support(body: ConvexBody, points: FloatArray, scale: float) -> FloatArray:
    """
    Convex smoothing of the support function at the given scale.

    Polygons use a soft maximum over the vertices, which lies above
    :math:`h_K` by at most ``scale * log(m)``.
    """
    points = np.asarray(points, dtype=float)
    if body.kind is BodyKind.DISK:
        norm = np.sqrt(np.sum(points**2, axis=-1) + scale**2)
        return (  # type: ignore[no-any-return]
            points @ body.center_array + body.radius * norm
        )
    if body.kind is BodyKind.BOX:
        a = np.array(body.halfwidths)
        signs = np.array(np.meshgrid(*([[-1.0, 1.0]] * body.dim), indexing="ij"))
        vertices = body.center_array + signs.reshape(body.dim, -1).T * a
    else:
        vertices = body.vertex_array
    return (  # type: ignore[no-any-return]
        scale * logsumexp(points @ vertices.T / scale, axis=-1)
    )


def _is_canonical_simplex(body: ConvexBody) -> bool:
    if body.kind is BodyKind.SIMPLEX:
        return body.dim == 2
    if body.kind is not BodyKind.POLYGON or len(body.vertices) != 3:
        return False
    canonical = sorted([(-1.0, -1.0), (-1.0, 2.0), (2.0, -1.0)])
    vertices = sorted(body.vertices)
    return bool(np.allclose(vertices, canonical, rtol=0, atol=1e-12))


def oracle_potential(body: ConvexBody) -> Potential | None:
    """
    A closed-form (or radial) potential of the body, if one is known:
    the canonical triangle, centered boxes and centered disks.
    """
    if _is_canonical_simplex(body):
        return SimplexPotential(2)
    if body.kind is BodyKind.BOX and not np.any(body.center_array):
        return CubePotential(body.dim, halfwidths=body.halfwidths)
    if body.kind is BodyKind.DISK and not np.any(body.center_array):
        return RadialPotential(default_ball_profile(2), scale=body.radius)
    return None


def _oracle(body: ConvexBody) -> Potential:
    oracle = oracle_potential(body)
    if oracle is None:
        raise ValidationError(f"No closed-form potential is known for {body}.")
    return oracle


def boundary_data(
    body: ConvexBody,
    stencils: GridStencils,
    config: SolverConfig,
    *,
    model: FloatArray | None = None,
) -> FloatArray:
    """
    Dirichlet data at every node of the grid; the solver uses the boundary nodes.

    ``model`` may pass precomputed :func:`asymptotic_values` at the nodes.
    """
    points = stencils.points.reshape(-1, 2)
    if config.boundary == "oracle":
        return _oracle(body).values(points)
    if config.boundary == "support":
        return support_values(body, points)
    return asymptotic_values(body, points) if model is None else model


def initial_guess(
    body: ConvexBody,
    stencils: GridStencils,
    config: SolverConfig,
    data: FloatArray,
    *,
    model: FloatArray | None = None,
) -> FloatArray:
    """
    Starting grid function of the Newton iteration, equal to ``data`` on the
    boundary and admissible for :func:`solve` at every interior node.

    A guess that is not admissible is blended towards the asymptotic model
    with doubling weight, starting from ``config.blend``.

    :raises ConvexityError: if even the asymptotic model is not admissible
    """
    points = stencils.points.reshape(-1, 2)
    if model is None:
        model = asymptotic_values(body, points)
    if config.initial_guess == "oracle":
        guess = _oracle(body).values(points)
    elif config.initial_guess == "smoothed_support":
        guess = smoothed_support(body, points, config.smoothing)
        guess = guess + math.log(area(body))
    else:
        guess = model.copy()
    cushion = config.cushion * stencils.h**2
    weight = 0.0
    while True:
        candidate = guess + weight * (model - guess)
        candidate[stencils.boundary] = data[stencils.boundary]
        if _ke_state(stencils, candidate, cushion) is not None:
            if weight:
                logger.info(
                    f"Initial guess blended towards the asymptotic model "
                    f"with weight {weight:g}"
                )
            return candidate
        if weight >= 1:
            raise ConvexityError("The initial guess is not discretely convex.")
        weight = min(1.0, max(2 * weight, config.blend))


def _ke_state(stencils: GridStencils, u: FloatArray, cushion: float) -> _State | None:
    a, b, c = stencils.hessian(u)
    det = a * c - b * b + cushion
    if not np.all((a > 0) & (c > 0) & (det > 0)):
        return None
    interior = u[stencils.interior]
    if cushion > 0:
        source = np.logaddexp(-interior, math.log(cushion))
    else:
        source = -interior
    return _State(np.log(det) - source, a, b, c, det, np.exp(-interior - source))


def _max_residual(stencils: GridStencils, u: FloatArray, state: _State) -> float:
    det = state.a * state.c - state.b**2
    return float(np.max(np.abs(det * np.exp(u[stencils.interior]) - 1)))


def _line_search(
    stencils: GridStencils,
    u: FloatArray,
    delta: FloatArray,
    state: _State,
    config: SolverConfig,
    history: list[float],
) -> tuple[FloatArray, _State]:
    cushion = config.cushion * stencils.h**2
    norm = float(np.linalg.norm(state.F))
    step = config.damping
    admissible = False
    while step >= config.min_step:
        trial = u.copy()
        trial[stencils.interior] += step * delta
        trial_state = _ke_state(stencils, trial, cushion)
        if trial_state is not None:
            admissible = True
            if np.linalg.norm(trial_state.F) <= (1 - ARMIJO * step) * norm:
                logger.debug(f"Accepted step length {step:g}")
                return trial, trial_state
        step *= config.backtrack
    if not admissible:
        raise ConvexityError(
            "No step along the Newton direction keeps the discrete Hessian "
            "positive definite",
            history,
        )
    raise SolverError(
        f"No step longer than {config.min_step:g} decreases the residual norm",
        history,
    )


def _newton_matrix(stencils: GridStencils, state: _State) -> Any:
    jacobian = (
        sparse.diags(state.c / state.det) @ stencils.dxx
        - sparse.diags(2 * state.b / state.det) @ stencils.dxy
        + sparse.diags(state.a / state.det) @ stencils.dyy
    )
    columns = np.flatnonzero(stencils.interior)
    return (jacobian.tocsc()[:, columns] + sparse.diags(state.weight)).tocsc()


def solve(body: ConvexBody, config: SolverConfig | None = None) -> GridPotential:
    """
    Solve :math:`e^{-\\Phi} = \\det D^2\\Phi` on :math:`[-L, L]^2`.

    Damped Newton iteration at interior nodes on

    .. math::

        F(\\Phi) = \\log(\\det D^2\\Phi + \\epsilon) - \\log(e^{-\\Phi} + \\epsilon),

    whose zeros are those of :math:`\\log\\det D^2\\Phi + \\Phi`, with
    :math:`\\epsilon` = ``config.cushion`` :math:`\\cdot h^2`.
    Dirichlet data on the boundary of the box come from
    :func:`boundary_data` and the iteration starts from :func:`initial_guess`.
    Each step is backtracked from ``config.damping`` by ``config.backtrack``
    until the stencil Hessian stays admissible and the Armijo condition
    holds for :math:`\\|F\\|_2`.
    Iteration stops when :math:`\\max |\\det D^2\\Phi \\, e^{\\Phi} - 1|`
    drops below ``config.tolerance``.

    :raises ValidationError: for non-planar bodies or an oracle mode without an oracle
    :raises ConvexityError: if no step keeps the iterate discretely convex
    :raises SolverError: if no step decreases the residual or the iteration
        does not converge
    """
    config = config or SolverConfig()
    config.validate()
    if body.dim != 2:
        raise ValidationError(f"The solver works in the plane, got a {body.dim}D body.")
    if "oracle" in (config.boundary, config.initial_guess):
        _oracle(body)

    stencils = GridStencils(config.L, config.N)
    model = asymptotic_values(body, stencils.points.reshape(-1, 2))
    data = boundary_data(body, stencils, config, model=model)
    u = initial_guess(body, stencils, config, data, model=model)
    logger.info(f"Solving for {body} on [-{config.L}, {config.L}]² with N={config.N}")

    cushion = config.cushion * stencils.h**2
    state = _ke_state(stencils, u, cushion)
    assert state is not None
    history: list[float] = []
    for iteration in range(config.max_iterations + 1):
        residual = _max_residual(stencils, u, state)
        history.append(residual)
        logger.debug(f"Newton iteration {iteration}: residual {residual:.3e}")
        if residual < config.tolerance:
            break
        if iteration == config.max_iterations:
            raise SolverError(
                f"No convergence within {config.max_iterations} iterations "
                f"(residual {residual:.3e})",
                history,
            )
        delta = spsolve(_newton_matrix(stencils, state), -state.F)
        if not np.all(np.isfinite(delta)):
            raise SolverError("The Newton system is singular.", history)
        u, state = _line_search(stencils, u, delta, state, config, history)

    values = u.reshape(config.N, config.N)
    diagnostics = solver_diagnostics(body, stencils, values)
    diagnostics.update(
        iterations=len(history) - 1,
        residual=history[-1],
        residual_history=history,
        config=config.to_json(),
    )
    logger.info(
        f"Converged after {len(history) - 1} iterations: residual {history[-1]:.3e}, "
        f"mass ratio {diagnostics['mass_ratio']:.6f}"
    )
    boundary = data[stencils.boundary]
    return GridPotential(
        config.L, values, body, boundary=boundary, diagnostics=diagnostics
    )


def body_symmetries(body: ConvexBody) -> list[FloatArray]:
    """
    Non-trivial symmetries of the square grid that preserve the body.
    """
    theta = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    directions = np.column_stack([np.cos(theta), np.sin(theta)])
    reference = support_values(body, directions)
    tolerance = 1e-12 * (1 + float(np.max(np.abs(reference))))
    return [
        m
        for m in _D4
        if np.max(np.abs(support_values(body, directions @ m.T) - reference))
        <= tolerance
    ]


def symmetry_defect(values: FloatArray, symmetries: list[FloatArray]) -> float:
    """
    Largest change of a grid function under the given symmetries.
    """
    N = values.shape[0]
    half = (N - 1) // 2
    k = np.arange(N) - half
    KI, KJ = np.meshgrid(k, k, indexing="ij")
    defect = 0.0
    for m in symmetries:
        TI = m[0, 0] * KI + m[0, 1] * KJ + half
        TJ = m[1, 0] * KI + m[1, 1] * KJ + half
        defect = max(defect, float(np.max(np.abs(values[TI, TJ] - values))))
    return defect


def _minimizer(stencils: GridStencils, values: FloatArray) -> FloatArray:
    i, j = np.unravel_index(np.argmin(values), values.shape)
    node = np.array([stencils.x[i], stencils.x[j]])
    if not (0 < i < stencils.N - 1 and 0 < j < stencils.N - 1):
        return node
    h = stencils.h
    u = values
    gradient = np.array([u[i + 1, j] - u[i - 1, j], u[i, j + 1] - u[i, j - 1]])
    gradient /= 2 * h
    a = (u[i + 1, j] - 2 * u[i, j] + u[i - 1, j]) / h**2
    c = (u[i, j + 1] - 2 * u[i, j] + u[i, j - 1]) / h**2
    b = (u[i + 1, j + 1] - u[i + 1, j - 1] - u[i - 1, j + 1] + u[i - 1, j - 1]) / (
        4 * h**2
    )
    hessian = np.array([[a, b], [b, c]])
    if a <= 0 or a * c - b * b <= 0:
        return node
    return node - np.linalg.solve(hessian, gradient)  # type: ignore[no-any-return]


def truncated_mass(stencils: GridStencils, values: FloatArray) -> float:
    """
    Trapezoidal rule for :math:`\\int_{[-L, L]^2} e^{-\\Phi}` over all nodes.
    """
    edge = np.ones(stencils.N)
    edge[[0, -1]] = 0.5
    weights = np.outer(edge, edge)
    return float(np.sum(weights * np.exp(-values)) * stencils.h**2)


def solver_diagnostics(
    body: ConvexBody, stencils: GridStencils, values: FloatArray
) -> dict[str, Any]:
    """
    Minimizer, pushforward mass, gradient range and symmetry defect
    of a grid solution.
    """
    mass = truncated_mass(stencils, values)
    body_area = area(body)
    gauges = gauge(body, stencils.gradient(values))
    symmetries = body_symmetries(body)
    return {
        "minimizer": _minimizer(stencils, values).tolist(),
        "minimum": float(np.min(values)),
        "mass": mass,
        "area": body_area,
        "mass_ratio": mass / body_area,
        "max_gradient_gauge": float(np.max(gauges)),
        "gradient_in_dilated_body": bool(np.max(gauges) <= GRADIENT_DILATION),
        "symmetries": len(symmetries),
        "symmetry_defect": symmetry_defect(values, symmetries),
    }


@dataclasses.dataclass(frozen=True, eq=False)
class ResidualField:
    """
    Kähler-Einstein residual :math:`\\det D^2\\Phi \\, e^{\\Phi} - 1` at the
    nodes of a grid, NaN on the boundary and at indefinite nodes.
    """

    #: Half-width of the grid.
    L: float

    #: Residual per node, shape ``(N, N)``.
    values: FloatArray

    #: Number of interior nodes with an indefinite discrete Hessian.
    indefinite: int

    @property
    def x(self) -> FloatArray:
        return np.linspace(-self.L, self.L, self.values.shape[0])

    @property
    def max_abs(self) -> float:
        finite = np.abs(self.values[np.isfinite(self.values)])
        return float(np.max(finite)) if finite.size else float("nan")

    @property
    def worst_point(self) -> list[float] | None:
        magnitude = np.where(np.isfinite(self.values), np.abs(self.values), -1.0)
        if np.max(magnitude) < 0:
            return None
        i, j = np.unravel_index(np.argmax(magnitude), magnitude.shape)
        return [float(self.x[i]), float(self.x[j])]

    def summary(self) -> dict[str, Any]:
        return {
            "max_abs": self.max_abs,
            "worst_point": self.worst_point,
            "indefinite_nodes": self.indefinite,
        }

    def rows(self) -> list[tuple[float, float, float]]:
        x = self.x
        N = len(x)
        return [
            (float(x[i]), float(x[j]), float(self.values[i, j]))
            for i in range(N)
            for j in range(N)
        ]


def ke_residual(potential: GridPotential) -> ResidualField:
    """
    Per-node residual of the Kähler-Einstein equation with the solver's stencils.
    """
    stencils = GridStencils(potential.L, potential.N)
    a, b, c = stencils.hessian(potential.node_values)
    convex = is_convex(a, b, c)
    interior = potential.node_values.ravel()[stencils.interior]
    with np.errstate(over="ignore", invalid="ignore"):
        residual = (a * c - b * b) * np.exp(interior) - 1
    residual[~convex] = np.nan
    indefinite = int(np.count_nonzero(~convex))
    if indefinite:
        logger.warning(f"{indefinite} interior nodes have indefinite discrete Hessians")
    return ResidualField(potential.L, stencils.to_grid(residual), indefinite)
