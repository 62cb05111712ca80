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

from typing import Sequence


class KELabError(Exception):
    """
    Base class for all errors raised by this package.
    """


class ValidationError(KELabError, ValueError):
    """
    Invalid input: a malformed descriptor, configuration or argument.
    """


class ShootingError(KELabError):
    """
    The radial shooting method could not bracket the initial value.
    """

    def __init__(self, message: str, trace: Sequence[tuple[float, str]] = ()) -> None:
        super().__init__(message)
        #: Tried initial values with the verdict for each.
        self.trace = list(trace)


class SolverError(KELabError):
    """
    The Monge-Ampère solver failed to converge.
    """

    def __init__(self, message: str, history: Sequence[float] = ()) -> None:
        super().__init__(message)
        #: Max-norm residual after each Newton iteration.
        self.history = list(history)


class ConvexityError(SolverError):
    """
    A Newton step left the cone of discretely convex grid functions
    and backtracking could not restore it.
    """


class JetError(KELabError):
    pass


class UnsupportedOrderError(JetError):
    """
    The requested derivative order is not available from a source.
    """


class OutsideRegionError(JetError):
    """
    The point lies outside the region supported by a source.
    """


class DegenerateJetError(JetError):
    """
    The Hessian at the point is not positive definite.
    """


class BallEscapeError(KELabError):
    """
    A geodesic ball leaves the region where the metric is available.
    """


class VerificationError(KELabError):
    """
    At least one evaluated check failed its threshold.
    """

    def __init__(self, message: str, failures: Sequence[str] = ()) -> None:
        super().__init__(message)
        #: Names of the failed checks.
        self.failures = list(failures)
