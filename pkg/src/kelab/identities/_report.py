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

import collections
import dataclasses
import enum
import math
from typing import Any, Iterable

import numpy as np

from .._typing import FloatArray


class CheckKind(str, enum.Enum):
    #: Both sides must agree.
    IDENTITY = "identity"
    #: The left side must not exceed the right side.
    BOUND = "bound"
    #: Informational ratio of the left side to the right side.
    GROWTH = "growth"


def _magnitude(value: Any) -> float:
    array = np.asarray(value, dtype=float)
    if array.ndim == 0:
        return float(array)
    return float(np.linalg.norm(array))


@dataclasses.dataclass(frozen=True)
class CheckResult:
    """
    Both sides of one check at one point.

    Array-valued sides are reported by their Euclidean norms;
    residuals are componentwise maxima.
    """

    name: str
    kind: CheckKind
    lhs: float
    rhs: float
    abs_residual: float
    rel_residual: float
    threshold: float
    passed: bool

    #: ``rhs - lhs`` for bounds, ``lhs / rhs`` for growth checks.
    margin: float | None = None

    def to_json(self) -> dict[str, Any]:
        data = dataclasses.asdict(self)
        data["kind"] = self.kind.value
        return data


class CheckSet:
    """
    Collects the results of one group of checks at one point.

    Residuals are compared with the threshold directly, or when
    ``relative`` is set (grid jets) with the threshold scaled by the
    larger side, at least one.
    """

    def __init__(self, threshold: float, *, relative: bool = False) -> None:
        self.threshold = threshold
        self.relative = relative
        self.results: dict[str, CheckResult] = {}
        self.skipped: dict[str, str] = {}

    def identity(
        self, name: str, lhs: Any, rhs: Any, *, threshold: float | None = None
    ) -> CheckResult:
        """
        Record ``lhs == rhs``; passes if the absolute residual is within
        the threshold, scaled as in :meth:`bound` for relative sets.
        """
        threshold = self.threshold if threshold is None else threshold
        left = np.asarray(lhs, dtype=float)
        right = np.asarray(rhs, dtype=float)
        abs_residual = float(np.max(np.abs(left - right)))
        scale = max(float(np.max(np.abs(left))), float(np.max(np.abs(right))))
        if scale > 0:
            rel_residual = abs_residual / scale
        else:
            rel_residual = 0.0 if abs_residual == 0 else math.inf
        tolerance = threshold * max(1.0, scale) if self.relative else threshold
        passed = bool(np.isfinite(abs_residual) and abs_residual <= tolerance)
        return self._add(
            CheckResult(
                name,
                CheckKind.IDENTITY,
                _magnitude(left),
                _magnitude(right),
                abs_residual,
                rel_residual,
                threshold,
                passed,
            )
        )

    def bound(
        self, name: str, lhs: float, rhs: float, *, tolerance: float | None = None
    ) -> CheckResult:
        """
        Record ``lhs <= rhs``, up to ``tolerance``: by default the
        threshold, scaled by the larger side for relative sets.
        """
        lhs, rhs = float(lhs), float(rhs)
        scale = max(1.0, abs(lhs), abs(rhs))
        if tolerance is None:
            tolerance = self.threshold * scale if self.relative else self.threshold
        margin = rhs - lhs
        violation = max(0.0, -margin)
        return self._add(
            CheckResult(
                name,
                CheckKind.BOUND,
                lhs,
                rhs,
                violation,
                violation / scale,
                tolerance,
                bool(margin >= -tolerance),
                margin,
            )
        )

    def growth(self, name: str, lhs: float, rhs: float) -> CheckResult:
        """
        Record the ratio ``lhs / rhs`` without a pass criterion.
        """
        lhs, rhs = float(lhs), float(rhs)
        ratio = lhs / rhs if rhs else math.inf
        return self._add(
            CheckResult(
                name, CheckKind.GROWTH, lhs, rhs, 0.0, 0.0, math.inf, True, ratio
            )
        )

    def skip(self, name: str, reason: str) -> None:
        self.skipped[name] = reason

    def skip_all(self, names: Iterable[str], reason: str) -> None:
        for name in names:
            if name not in self.results:
                self.skipped.setdefault(name, reason)

    def update(self, other: CheckSet) -> None:
        for result in other.results.values():
            self._add(result)
        for name, reason in other.skipped.items():
            if name not in self.results:
                self.skipped[name] = reason

    def _add(self, result: CheckResult) -> CheckResult:
        self.results[result.name] = result
        self.skipped.pop(result.name, None)
        return result

    def __getitem__(self, name: str) -> CheckResult:
        return self.results[name]

    def __contains__(self, name: object) -> bool:
        return name in self.results

    def __repr__(self) -> str:
        failed = sum(not r.passed for r in self.results.values())
        return (
            f"<{type(self).__name__}: {len(self.results)} checks, "
            f"{failed} failed, {len(self.skipped)} skipped>"
        )


@dataclasses.dataclass
class PointRecord:
    """
    All checks at one point.
    """

    point: FloatArray
    source: str
    checks: dict[str, CheckResult] = dataclasses.field(default_factory=dict)
    skipped: dict[str, str] = dataclasses.field(default_factory=dict)

    #: Potential, curvature, squared gradient and trace of g at the point.
    quantities: dict[str, float] = dataclasses.field(default_factory=dict)

    @classmethod
    def from_checks(
        cls, point: FloatArray, source: str, checks: CheckSet
    ) -> PointRecord:
        point = np.asarray(point, dtype=float)
        return cls(point, source, dict(checks.results), dict(checks.skipped))

    def to_json(self) -> dict[str, Any]:
        return {
            "point": self.point.tolist(),
            "source": self.source,
            "checks": {name: result.to_json() for name, result in self.checks.items()},
            "skipped": self.skipped,
            "quantities": self.quantities,
        }


#: Columns of :meth:`ResidualReport.rows`.
REPORT_COLUMNS = (
    "x1",
    "x2",
    "source",
    "check",
    "kind",
    "lhs",
    "rhs",
    "abs_residual",
    "rel_residual",
    "margin",
    "passed",
    "skip_reason",
)


@dataclasses.dataclass
class ResidualReport:
    """
    Per-point results of a verification run and their summary.
    """

    #: Descriptor of the verified potential.
    descriptor: str

    records: list[PointRecord]

    #: Run-level quantities, such as fitted growth exponents.
    extras: dict[str, Any] = dataclasses.field(default_factory=dict)

    def check_names(self) -> list[str]:
        names: set[str] = set()
        for record in self.records:
            names.update(record.checks)
            names.update(record.skipped)
        return sorted(names)

    def summary(self) -> dict[str, dict[str, Any]]:
        """
        Per check: worst residuals, the worst point, skips and the verdict.
        """
        summary: dict[str, dict[str, Any]] = {}
        for name in self.check_names():
            results = [
                (r.point, r.checks[name]) for r in self.records if name in r.checks
            ]
            reasons = collections.Counter(
                r.skipped[name] for r in self.records if name in r.skipped
            )
            entry: dict[str, Any] = {
                "n_points": len(results),
                "n_skipped": sum(reasons.values()),
                "skip_reasons": dict(sorted(reasons.items())),
                "max_abs": None,
                "max_rel": None,
                "worst_point": None,
                "pass": all(result.passed for _, result in results),
            }
            if results:
                kind = results[0][1].kind
                entry["kind"] = kind.value
                worst_point, worst = max(results, key=lambda item: item[1].abs_residual)
                entry["max_abs"] = worst.abs_residual
                entry["max_rel"] = max(result.rel_residual for _, result in results)
                entry["worst_point"] = worst_point.tolist()
                margins = [r.margin for _, r in results if r.margin is not None]
                if kind is CheckKind.BOUND:
                    entry["min_margin"] = min(margins)
                elif kind is CheckKind.GROWTH:
                    entry["fitted_constant"] = max(margins)
            summary[name] = entry
        return summary

    @property
    def passed(self) -> bool:
        return all(
            result.passed
            for record in self.records
            for result in record.checks.values()
        )

    def failures(self) -> list[str]:
        return [name for name, entry in self.summary().items() if not entry["pass"]]

    def to_json(self) -> dict[str, Any]:
        return {
            "descriptor": self.descriptor,
            "passed": self.passed,
            "summary": self.summary(),
            "extras": self.extras,
            "points": [record.to_json() for record in self.records],
        }

    def rows(self) -> list[tuple[Any, ...]]:
        """
        One row per point and check, for plotting residual fields.
        """
        rows: list[tuple[Any, ...]] = []
        for record in self.records:
            x = record.point.tolist() + [float("nan")] * (2 - len(record.point))
            for name in sorted(record.checks):
                r = record.checks[name]
                rows.append(
                    (
                        *x[:2],
                        record.source,
                        name,
                        r.kind.value,
                        r.lhs,
                        r.rhs,
                        r.abs_residual,
                        r.rel_residual,
                        r.margin,
                        r.passed,
                        "",
                    )
                )
            for name in sorted(record.skipped):
                reason = record.skipped[name]
                empty = (None,) * 6
                rows.append((*x[:2], record.source, name, "", *empty, reason))
        return rows

    def __repr__(self) -> str:
        name = type(self).__name__
        return f"<{name}: {self.descriptor!r}, {len(self.records)} points>"
