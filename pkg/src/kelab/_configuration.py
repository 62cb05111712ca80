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
import json
from typing import Any, Type, TypeVar

from ._exceptions import ValidationError

_C = TypeVar("_C", bound="_Config")


class _Config:
    def clone(self: _C) -> _C:
        """
        Clone this instance.
        """
        return dataclasses.replace(self)  # type: ignore[type-var]

    def validate(self) -> None:
        """
        Raise :class:`.ValidationError` if this configuration is not valid.
        """

    def to_json(self) -> dict[str, Any]:
        """
        Serialize this configuration as a JSON-compatible dict.
        """
        return dataclasses.asdict(self)  # type: ignore[call-overload, no-any-return]

    @classmethod
    def from_json(cls: Type[_C], data: dict[str, Any] | str) -> _C:
        """
        Load a configuration from a JSON dict (or a JSON document).

        Unknown keys are rejected.
        """
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"Invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ValidationError(f"Expected a JSON object, got: {data!r}")
        names = {f.name for f in dataclasses.fields(cls)}  # type: ignore[arg-type]
        unknown = sorted(set(data) - names)
        if unknown:
            raise ValidationError(f"Unknown {cls.__name__} keys: {', '.join(unknown)}")
        try:
            config = cls(**data)
        except TypeError as exc:
            raise ValidationError(str(exc)) from exc
        config.validate()
        return config


@dataclasses.dataclass
class SolverConfig(_Config):
    """
    Configuration of the Monge-Ampère solver.
    """

    #: Half-width of the computational box :math:`[-L, L]^2`.
    L: float = 8.0

    #: Grid size per axis (odd, so that the origin is a node).
    N: int = 129

    #: Initial Newton step length before backtracking, in (0, 1].
    damping: float = 1.0

    #: Max-norm tolerance for the Kähler-Einstein residual.
    tolerance: float = 1e-7

    #: Maximum number of Newton iterations.
    max_iterations: int = 60

    #: Initial guess: ``"asymptotic"`` (the asymptotic model of the body),
    #: ``"smoothed_support"`` (the mollified support function plus
    #: ``log(area)``) or ``"oracle"``.
    initial_guess: str = "asymptotic"

    #: Dirichlet data: ``"asymptotic"`` (the asymptotic model of the body),
    #: ``"support"`` (the support function of the body) or ``"oracle"``
    #: (a closed-form potential of the same body).
    boundary: str = "asymptotic"

    #: Mollification scale of the smoothed support function.
    smoothing: float = 0.5

    #: First weight of the blend towards the asymptotic model that makes
    #: an inadmissible initial guess discretely convex.
    blend: float = 0.05

    #: Offset of the discrete determinants in the Newton function,
    #: in units of :math:`h^2`.
    cushion: float = 0.5

    #: Backtracking factor of the line search.
    backtrack: float = 0.5

    #: Smallest step length tried by the line search.
    min_step: float = 1e-4

    @property
    def h(self) -> float:
        """Grid spacing."""
        return 2 * self.L / (self.N - 1)

    def validate(self) -> None:
        if self.N < 5 or self.N % 2 == 0:
            raise ValidationError(
                f"Grid size must be odd and at least 5, got: {self.N}"
            )
        if self.L < 4:
            raise ValidationError(f"Box half-width must be at least 4, got: {self.L}")
        if not 0 < self.damping <= 1:
            raise ValidationError(f"Damping must be in (0, 1], got: {self.damping}")
        if self.tolerance <= 0:
            raise ValidationError(f"Tolerance must be positive, got: {self.tolerance}")
        if self.max_iterations < 1:
            raise ValidationError("At least one iteration is required.")
        if self.initial_guess not in ("asymptotic", "smoothed_support", "oracle"):
            raise ValidationError(f"Unknown initial guess: {self.initial_guess!r}")
        if self.boundary not in ("asymptotic", "support", "oracle"):
            raise ValidationError(f"Unknown boundary data: {self.boundary!r}")
        if self.smoothing <= 0 or not 0 < self.blend <= 1 or self.cushion < 0:
            raise ValidationError(
                "Smoothing must be positive, the blend in (0, 1] "
                "and the cushion non-negative."
            )
        if not 0 < self.backtrack < 1 or not 0 < self.min_step <= 1:
            raise ValidationError("Invalid line search parameters.")


@dataclasses.dataclass
class ShootingConfig(_Config):
    """
    Configuration of the radial shooting method.
    """

    #: Outer radius of the integration interval.
    r_max: float = 30.0

    #: Required closeness of :math:`\varphi'(r_{max})` to one.
    far_tolerance: float = 1e-6

    #: Bisection stops when the bracket on :math:`\varphi(0)` is this narrow.
    bisection_tolerance: float = 1e-12

    #: Jets are available for :math:`|x| \ge r_{min}`.
    r_min: float = 1e-3

    #: Radius where the series start hands over to the integrator.
    r_start: float = 1e-4

    #: Initial bracket for :math:`\varphi(0)`.
    bracket: tuple[float, float] = (-2.0, 4.0)

    #: Relative tolerance of the integrator.
    rtol: float = 1e-12

    #: Absolute tolerance of the integrator.
    atol: float = 1e-14

    #: Upper bound on shooting attempts (bracketing plus bisection).
    max_attempts: int = 200

    #: Number of nodes of the stored profile.
    nodes: int = 3001

    def validate(self) -> None:
        if not 0 < self.r_start < self.r_min < self.r_max:
            raise ValidationError("Expected 0 < r_start < r_min < r_max.")
        if not 0 < self.far_tolerance < 1:
            raise ValidationError(f"Invalid far-field tolerance: {self.far_tolerance}")
        if self.bisection_tolerance <= 0 or self.rtol <= 0 or self.atol <= 0:
            raise ValidationError("Tolerances must be positive.")
        lo, hi = self.bracket
        if not lo < hi:
            raise ValidationError(f"Invalid bracket: {self.bracket}")
        if self.nodes < 10:
            raise ValidationError("The profile needs at least 10 nodes.")


@dataclasses.dataclass
class SamplingConfig(_Config):
    """
    Configuration of quasi-random sample points.
    """

    #: Number of sample points.
    count: int = 100

    #: Seed of the scrambled Halton sequence.
    seed: int = 0

    #: Points are drawn from the disk of this radius.
    radius: float = 6.0

    def validate(self) -> None:
        if self.count < 1:
            raise ValidationError(f"Sample count must be positive, got: {self.count}")
        if self.radius <= 0:
            raise ValidationError(f"Sample radius must be positive, got: {self.radius}")


@dataclasses.dataclass
class Thresholds(_Config):
    """
    Pass thresholds of identity checks, per jet source.

    Closed-form and radial thresholds bound the absolute residual;
    the grid threshold bounds the residual relative to the larger side.
    """

    #: Closed-form jets.
    closed_form: float = 1e-8

    #: Radial jets, checks using derivatives up to order 4.
    radial: float = 1e-6

    #: Radial jets, checks using fifth derivatives.
    radial_order5: float = 1e-5

    #: Grid jets (relative).
    grid: float = 1e-2

    def threshold(self, source: str, order: int) -> float:
        """
        Return the threshold for a check on a jet source
        using derivatives up to the given order.
        """
        if source == "closed_form":
            return self.closed_form
        if source == "radial":
            return self.radial_order5 if order >= 5 else self.radial
        if source == "grid":
            return self.grid
        raise ValidationError(f"Unknown jet source: {source!r}")

    @staticmethod
    def relative(source: str) -> bool:
        """
        Whether checks on a jet source compare relative residuals.
        """
        return source == "grid"

    def validate(self) -> None:
        values = (self.closed_form, self.radial, self.radial_order5, self.grid)
        if min(values) <= 0:
            raise ValidationError("Thresholds must be positive.")
