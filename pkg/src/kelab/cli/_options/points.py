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

import argparse
import dataclasses
from pathlib import Path

import numpy as np

from ..._configuration import SamplingConfig
from ..._exceptions import ValidationError
from ..._sampling import sample_points
from ..._serialization import read_csv
from ..._typing import FloatArray
from ...potentials import GridPotential, Potential
from .common import positive_int


def read_points(path: Path, dim: int) -> FloatArray:
    """
    Read points from a CSV file with a header row.

    The first ``dim`` columns are the coordinates.
    """
    try:
        _, rows = read_csv(path)
    except (OSError, StopIteration) as exc:
        raise ValidationError(f"Cannot read points from {path}: {exc}") from exc
    try:
        points = np.array([[float(v) for v in row[:dim]] for row in rows if row])
    except ValueError as exc:
        raise ValidationError(f"Invalid point in {path}: {exc}") from exc
    if points.size == 0:
        raise ValidationError(f"No points in {path}")
    if points.ndim != 2 or points.shape[1] != dim:
        raise ValidationError(f"Points in {path} need {dim} coordinates.")
    return points


@dataclasses.dataclass
class PointOptions:
    """
    Command-line options selecting analysis points
    """

    points_file: Path | None
    sampling: SamplingConfig
    radius_given: bool

    @classmethod
    def parse(cls, parser: argparse.ArgumentParser) -> None:
        group = parser.add_mutually_exclusive_group()
        group.add_argument(
            "--points",
            type=Path,
            metavar="FILE",
            help="CSV file with one point per row (after a header row).",
        )
        group.add_argument(
            "--sample",
            type=positive_int,
            default=SamplingConfig.count,
            metavar="K",
            help="Number of quasi-random points (default: %(default)s).",
        )
        parser.add_argument(
            "--seed",
            type=int,
            default=SamplingConfig.seed,
            help="Seed of the scrambled Halton sequence (default: %(default)s).",
        )
        parser.add_argument(
            "--radius",
            type=float,
            default=None,
            help=(
                "Radius of the sampling disk "
                f"(default: {SamplingConfig.radius}, half the box for grids)."
            ),
        )

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> PointOptions:
        radius = SamplingConfig.radius if args.radius is None else args.radius
        sampling = SamplingConfig(count=args.sample, seed=args.seed, radius=radius)
        sampling.validate()
        return cls(args.points, sampling, args.radius is not None)

    def points(self, potential: Potential) -> FloatArray:
        if self.points_file is not None:
            return read_points(self.points_file, potential.dim)
        sampling = self.sampling
        if isinstance(potential, GridPotential) and not self.radius_given:
            sampling = dataclasses.replace(sampling, radius=potential.L / 2)
        return sample_points(sampling, dim=potential.dim)
