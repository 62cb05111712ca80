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
import logging
from typing import Sequence

import numpy as np

from .._configuration import Thresholds
from .._exceptions import BallEscapeError, JetError, ValidationError
from .._parallel import parallel_map
from .._typing import FloatArray
from ..bodies import outer_radius
from ..geometry import HessianFields, PointGeometry, covariant_Q, point_geometry
from ..potentials import GridPotential, Jet, Potential
from ..riemannian import curvature_from_areas
from ._checks import (
    ALGEBRAIC_CHECKS,
    BOUND_CHECKS,
    EXAMPLE_CHECKS,
    LAPLACIAN_CHECKS,
    QFRAME_CHECKS,
    THEOREM_CHECKS,
    BoundsContext,
    check_algebraic,
    check_bounds,
    check_examples,
    check_laplacian,
    check_Q_and_frame,
    check_theorem,
)
from ._maximum_principle import MAXIMUM_CHECKS, check_prop54
from ._report import CheckSet, PointRecord, ResidualReport

logger = logging.getLogger("kelab.identities")

RIEMANNIAN_CHECKS = ("area_curvature", "cap_comparison")

#: Check names per suite.
SUITES: dict[str, tuple[str, ...]] = {
    "algebraic": ALGEBRAIC_CHECKS + EXAMPLE_CHECKS,
    "laplacian": LAPLACIAN_CHECKS,
    "qframe": QFRAME_CHECKS,
    "theorem": THEOREM_CHECKS,
    "bounds": BOUND_CHECKS,
    "prop54": MAXIMUM_CHECKS,
    "riemannian": RIEMANNIAN_CHECKS,
}

#: Jet order needed by each suite.
SUITE_ORDERS = {
    "algebraic": 3,
    "laplacian": 5,
    "qframe": 4,
    "theorem": 5,
    "bounds": 3,
    "prop54": 3,
    "riemannian": 3,
}

#: Tolerance of the area-based curvature estimate.
AREA_CURVATURE_TOLERANCE = 5e-3

#: Geodesics per fan of the area-based curvature estimate.
SUITE_RAYS = 64


def parse_suites(names: Sequence[str]) -> tuple[str, ...]:
    """
    Expand ``"all"`` and validate suite names, keeping the canonical order.
    """
    wanted: set[str] = set()
    for name in names:
        if name == "all":
            wanted.update(SUITES)
        elif name in SUITES:
            wanted.add(name)
        else:
            raise ValidationError(
                f"Unknown suite: {name!r} (expected one of {', '.join(SUITES)}, all)"
            )
    return tuple(name for name in SUITES if name in wanted)


def bounds_context(potential: Potential) -> BoundsContext:
    return BoundsContext(outer_radius(potential.body), potential.minimum())


def grid_points(potential: GridPotential, points: FloatArray) -> FloatArray:
    """
    Snap points to grid nodes of the inner half-window, without duplicates.
    """
    half = potential.L / 2
    nodes = []
    seen: set[tuple[int, int]] = set()
    for x in points:
        if np.any(np.abs(x) > half):
            continue
        index = potential.nearest_node(x)
        if index not in seen:
            seen.add(index)
            nodes.append(potential.node_point(*index))
    return np.array(nodes).reshape(-1, 2)


class _Derived:
    """
    Quantities shared by several suites at one point, computed once.
    """

    def __init__(self, jet: Jet) -> None:
        self.jet = jet

    @functools.cached_property
    def fields(self) -> HessianFields:
        return HessianFields(self.jet)

    @functools.cached_property
    def Q(self) -> FloatArray:
        return covariant_Q(self.jet)


class _PointTask:
    def __init__(
        self,
        potential: Potential,
        suites: tuple[str, ...],
        alpha: float,
        thresholds: Thresholds,
    ) -> None:
        self.potential = potential
        self.suites = suites
        self.alpha = alpha
        self.thresholds = thresholds
        self.context = bounds_context(potential)
        self.order = min(max(SUITE_ORDERS[s] for s in suites), potential.max_order)
        self.names = [name for suite in suites for name in SUITES[suite]]

    def __call__(self, x: FloatArray) -> PointRecord:
        potential = self.potential
        checks = CheckSet(self.thresholds.threshold(potential.source.value, 3))
        try:
            jet = potential.jet_at(x, self.order)
            pg = point_geometry(jet)
        except JetError as exc:
            logger.warning(f"Skipping {x.tolist()}: {exc}")
            checks.skip_all(self.names, f"unsupported point: {exc}")
            return PointRecord.from_checks(x, potential.source.value, checks)

        quantities = {
            "phi": pg.value,
            "lam": pg.lam,
            "grad_norm2": pg.grad_norm2,
            "trace_g": float(np.sum(pg.inverse * pg.g)),
        }
        derived = _Derived(jet)
        for suite in self.suites:
            if SUITE_ORDERS[suite] > jet.order:
                checks.skip_all(SUITES[suite], "order unavailable")
                continue
            try:
                checks.update(self._run(suite, jet, pg, derived))
            except JetError as exc:
                checks.skip_all(SUITES[suite], f"unavailable: {exc}")
            except BallEscapeError as exc:
                checks.skip_all(SUITES[suite], f"ball escapes: {exc}")
            checks.skip_all(SUITES[suite], "not applicable")
        record = PointRecord.from_checks(jet.point, potential.source.value, checks)
        record.quantities = quantities
        return record

    def _run(
        self, suite: str, jet: Jet, pg: PointGeometry, derived: _Derived
    ) -> CheckSet:
        thresholds = self.thresholds
        if suite == "algebraic":
            checks = check_algebraic(pg, jet, thresholds=thresholds)
            checks.update(check_examples(self.potential, pg, thresholds=thresholds))
            return checks
        if suite == "laplacian":
            return check_laplacian(
                jet,
                pg=pg,
                fields=derived.fields,
                Q=derived.Q,
                thresholds=thresholds,
            )
        if suite == "qframe":
            return check_Q_and_frame(
                pg, derived.Q, jet, fields=derived.fields, thresholds=thresholds
            )
        if suite == "theorem":
            return check_theorem(
                jet,
                pg=pg,
                fields=derived.fields,
                Q=derived.Q,
                thresholds=thresholds,
            )
        if suite == "bounds":
            return check_bounds(
                pg,
                jet,
                self.context,
                self.alpha,
                lam_tolerance=self._lambda_tolerance(jet, pg),
                thresholds=thresholds,
            )
        if suite == "prop54":
            return check_prop54(self.potential, jet.point)
        return self._riemannian(jet, pg)

    def _lambda_tolerance(self, jet: Jet, pg: PointGeometry) -> float | None:
        if not isinstance(self.potential, GridPotential):
            return None
        coarse = point_geometry(self.potential.coarse_jet_at(jet.point, 3))
        return abs(pg.lam - coarse.lam) / 3

    def _riemannian(self, jet: Jet, pg: PointGeometry) -> CheckSet:
        checks = CheckSet(AREA_CURVATURE_TOLERANCE)
        estimate = curvature_from_areas(self.potential, jet.point, rays=SUITE_RAYS)
        checks.identity("area_curvature", estimate.estimate, pg.lam / 4)
        checks.bound(
            "cap_comparison",
            -float(np.min(estimate.cap_margins)),
            0.0,
            tolerance=AREA_CURVATURE_TOLERANCE,
        )
        return checks


def growth_exponent(report: ResidualReport) -> float:
    """
    Least-squares slope of :math:`\\log \\mathrm{Tr}\\, g` against :math:`\\Phi`
    over the points of a report.
    """
    pairs = [
        (record.quantities["phi"], np.log(record.quantities["trace_g"]))
        for record in report.records
        if record.quantities.get("trace_g", 0.0) > 0
    ]
    if len(pairs) < 2:
        return float("nan")
    phi, log_trace = np.array(pairs).T
    if np.ptp(phi) == 0:
        return float("nan")
    return float(np.polyfit(phi, log_trace, 1)[0])


def run_suite(
    potential: Potential,
    points: FloatArray,
    suites: Sequence[str] = ("all",),
    *,
    alpha: float = 2.0,
    thresholds: Thresholds | None = None,
    workers: int = 1,
) -> ResidualReport:
    """
    Run verification suites at sample points.

    Grid potentials are checked at the nodes nearest to the points
    within the inner half-window. Every check of the selected suites is
    either evaluated or recorded as skipped at every point.
    """
    selected = parse_suites(suites)
    thresholds = thresholds or Thresholds()
    thresholds.validate()
    points = np.asarray(points, dtype=float).reshape(-1, potential.dim)
    if isinstance(potential, GridPotential):
        points = grid_points(potential, points)
    task = _PointTask(potential, selected, alpha, thresholds)
    logger.info(
        f"Verifying {potential.descriptor} at {len(points)} points: "
        f"{', '.join(selected)}"
    )
    records = parallel_map(task, list(points), workers=workers)
    report = ResidualReport(
        potential.descriptor,
        records,
        extras={
            "suites": list(selected),
            "alpha": alpha,
            "thresholds": thresholds.to_json(),
        },
    )
    report.extras["growth_exponent"] = growth_exponent(report)
    failures = report.failures()
    if failures:
        logger.warning(f"Failed checks: {', '.join(failures)}")
    logger.info(
        f"Verification of {potential.descriptor} finished: passed={report.passed}"
    )
    return report
