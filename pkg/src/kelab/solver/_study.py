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
from typing import Sequence

import numpy as np

from .._configuration import SolverConfig
from .._exceptions import JetError
from .._parallel import parallel_map
from .._typing import FloatArray
from ..bodies import ConvexBody
from ..geometry import point_geometry
from ..potentials import GridPotential
from ._solver import ke_residual, oracle_potential, solve

logger = logging.getLogger("kelab.solver")

#: Column names of :meth:`StudyRow.row`.
STUDY_COLUMNS = (
    "N",
    "L",
    "h",
    "iterations",
    "max_residual",
    "error",
    "error_ratio",
    "window_change",
    "lambda_min",
    "lambda_max",
    "lambda_mean",
    "lambda_origin",
    "mass_ratio",
)


@dataclasses.dataclass
class StudyRow:
    """
    One solve of a convergence study.
    """

    N: int
    L: float
    h: float
    iterations: int

    #: Max-norm Kähler-Einstein residual of the solution.
    max_residual: float

    #: Max-norm error against the closed-form potential in the window (NaN without one).
    error: float

    #: Error of the previous row divided by this one.
    error_ratio: float

    #: Max-norm change in the window against the previous row.
    window_change: float

    lambda_min: float
    lambda_max: float
    lambda_mean: float
    lambda_origin: float
    mass_ratio: float

    def row(self) -> tuple[float, ...]:
        return tuple(getattr(self, name) for name in STUDY_COLUMNS)


def _window_nodes(potential: GridPotential, window: float) -> FloatArray:
    half = min(window, potential.L / 2)
    x = potential.x
    inner = x[np.abs(x) <= half + 1e-12]
    X, Y = np.meshgrid(inner, inner, indexing="ij")
    return np.stack([X, Y], axis=-1).reshape(-1, 2)


def _lambda_samples(potential: GridPotential, window: float, count: int) -> FloatArray:
    half = min(window, potential.L / 2)
    axis = np.linspace(-half, half, count)
    values = []
    for x in axis:
        for y in axis:
            node = potential.node_point(*potential.nearest_node((x, y)))
            if not potential.supports(node):
                continue
            try:
                values.append(point_geometry(potential.jet_at(node, 3)).lam)
            except JetError as exc:
                logger.debug(f"No λ at {node.tolist()}: {exc}")
    return np.array(values)


def convergence_study(
    body: ConvexBody,
    configs: Sequence[SolverConfig],
    *,
    window: float = 4.0,
    lambda_nodes: int = 9,
    workers: int = 1,
) -> list[StudyRow]:
    """
    Solve once per configuration and tabulate errors and λ statistics.

    Errors against a closed-form potential (when the body has one) and
    changes against the previous solve are measured at the nodes of the
    window :math:`|x|_\\infty \\le \\min(window, L/2)`.
    λ statistics come from grid jets at ``lambda_nodes²`` nodes of that window.
    Solver errors propagate.
    """
    potentials = parallel_map(
        lambda config: solve(body, config), list(configs), workers=workers
    )
    oracle = oracle_potential(body)
    rows: list[StudyRow] = []
    previous: GridPotential | None = None
    for config, potential in zip(configs, potentials):
        nodes = _window_nodes(potential, window)
        values = potential.values(nodes)
        error = float("nan")
        if oracle is not None:
            error = float(np.max(np.abs(values - oracle.values(nodes))))
        error_ratio = window_change = float("nan")
        if previous is not None:
            if error > 0:
                error_ratio = rows[-1].error / error
            shared = np.all(np.abs(nodes) <= previous.L, axis=-1)
            window_change = float(
                np.max(np.abs(values[shared] - previous.values(nodes[shared])))
            )
        lam = _lambda_samples(potential, window, lambda_nodes)
        try:
            lam_origin = point_geometry(potential.jet_at((0.0, 0.0), 3)).lam
        except JetError:
            lam_origin = float("nan")
        has_lam = lam.size > 0
        row = StudyRow(
            N=config.N,
            L=config.L,
            h=config.h,
            iterations=potential.diagnostics["iterations"],
            max_residual=ke_residual(potential).max_abs,
            error=error,
            error_ratio=error_ratio,
            window_change=window_change,
            lambda_min=float(np.min(lam)) if has_lam else float("nan"),
            lambda_max=float(np.max(lam)) if has_lam else float("nan"),
            lambda_mean=float(np.mean(lam)) if has_lam else float("nan"),
            lambda_origin=lam_origin,
            mass_ratio=potential.diagnostics["mass_ratio"],
        )
        logger.info(
            f"N={row.N} L={row.L}: error {row.error:.3e}, "
            f"change {row.window_change:.3e}"
        )
        rows.append(row)
        previous = potential
    return rows
