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

from kelab import Thresholds, ValidationError
from kelab.geometry import HessianFields
from kelab.identities import (
    SUITES,
    CheckSet,
    PointRecord,
    ResidualReport,
    growth_exponent,
    parse_suites,
    run_suite,
)
from kelab.potentials import CubePotential, GridPotential, Jet, SimplexPotential


class TestParseSuites:
    def test_all(self) -> None:
        assert parse_suites(["all"]) == tuple(SUITES)

    def test_canonical_order(self) -> None:
        suites = parse_suites(["theorem", "algebraic", "theorem"])
        assert suites == ("algebraic", "theorem")

    def test_unknown(self) -> None:
        with pytest.raises(ValidationError, match="Unknown suite"):
            parse_suites(["algebra"])


class TestRunSuite:
    def test_simplex(self) -> None:
        points = np.array([[0.8, -0.3], [-1.2, 0.4], [0.0, 0.0]])
        suites = ("algebraic", "qframe", "theorem", "bounds")
        report = run_suite(SimplexPotential(2), points, suites)
        assert report.passed
        assert report.descriptor == "closed:simplex"
        assert len(report.records) == 3
        names = {name for suite in suites for name in SUITES[suite]}
        for record in report.records:
            assert set(record.checks) | set(record.skipped) == names
            assert record.quantities["lam"] == pytest.approx(1 / 3)
        origin = report.records[2]
        assert origin.skipped["laplacian_lambda"] == "low gradient"
        assert report.extras["suites"] == list(suites)

    def test_examples_not_applicable(self) -> None:
        report = run_suite(CubePotential(2), np.array([[0.5, 1.0]]), ["algebraic"])
        (record,) = report.records
        assert record.skipped["simplex_lambda"] == "not applicable"
        assert record.checks["cube_flat"].passed

    def test_strict_thresholds_fail(self) -> None:
        thresholds = Thresholds(closed_form=1e-30)
        points = np.array([[0.7, 0.2]])
        simplex = SimplexPotential(2)
        report = run_suite(simplex, points, ["algebraic"], thresholds=thresholds)
        assert report.extras["thresholds"]["closed_form"] == 1e-30
        assert not report.passed
        assert report.failures()

    def test_fields_shared_across_suites(self, monkeypatch: pytest.MonkeyPatch) -> None:
        built: list[Jet] = []

        def fields(jet: Jet) -> HessianFields:
            built.append(jet)
            return HessianFields(jet)

        monkeypatch.setattr("kelab.identities._suite.HessianFields", fields)
        suites = ["laplacian", "qframe", "theorem"]
        report = run_suite(SimplexPotential(2), np.array([[0.8, -0.3]]), suites)
        assert report.passed
        assert len(built) == 1

    def test_riemannian(self) -> None:
        report = run_suite(SimplexPotential(2), np.zeros((1, 2)), ["riemannian"])
        (record,) = report.records
        assert record.checks["area_curvature"].passed
        assert record.checks["area_curvature"].rhs == pytest.approx(1 / 12)
        assert record.checks["cap_comparison"].passed

    def test_invalid_thresholds(self) -> None:
        with pytest.raises(ValidationError):
            thresholds = Thresholds(grid=0.0)
            run_suite(SimplexPotential(2), np.zeros((1, 2)), thresholds=thresholds)

    def test_grid_points(self) -> None:
        x = np.linspace(-4.0, 4.0, 65)
        X, Y = np.meshgrid(x, x, indexing="ij")
        values = CubePotential(2).values(np.stack([X, Y], axis=-1))
        grid = GridPotential(4.0, values, square_body(), origin="sampled")
        points = np.array([[0.5, 0.5], [0.52, 0.5], [3.0, 0.0]])
        report = run_suite(grid, points, ["algebraic", "laplacian", "prop54"])
        (record,) = report.records
        assert record.point.tolist() == [0.5, 0.5]
        assert record.source == "grid"
        assert record.skipped["laplacian_gradient"] == "order unavailable"
        assert record.skipped["third_maximum"].startswith("unavailable")

    def test_workers(self) -> None:
        points = np.array([[0.8, -0.3], [-1.2, 0.4]])
        serial = run_suite(SimplexPotential(2), points, ["algebraic"])
        parallel = run_suite(SimplexPotential(2), points, ["algebraic"], workers=2)
        assert serial.summary() == parallel.summary()


class TestGrowthExponent:
    def test_slope(self) -> None:
        records = []
        for phi in (1.0, 2.0, 3.0):
            record = PointRecord.from_checks(np.zeros(2), "closed_form", CheckSet(1e-8))
            record.quantities = {"phi": phi, "trace_g": float(np.exp(2 * phi + 1))}
            records.append(record)
        assert growth_exponent(ResidualReport("test", records)) == pytest.approx(2.0)

    def test_too_few_points(self) -> None:
        record = PointRecord.from_checks(np.zeros(2), "closed_form", CheckSet(1e-8))
        record.quantities = {"phi": 1.0, "trace_g": 1.0}
        assert np.isnan(growth_exponent(ResidualReport("test", [record])))
