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
import logging
from typing import Any, Union

from ..._exceptions import JetError, ValidationError
from ..._parallel import parallel_map
from ..._serialization import write_csv, write_json
from ..._typing import FloatArray
from ...geometry import PointGeometry, point_geometry
from ...potentials import Potential
from .._manifest import RunManifest
from .._options.common import LoggingOptions, OutputOptions, WorkerOptions
from .._options.points import PointOptions
from .._options.potential import input_files, resolve_potential
from .base import Command, ExitCode

logger = logging.getLogger("kelab.cli")

_Outcome = Union[PointGeometry, str]


@dataclasses.dataclass
class AnalyzeCommand(Command):
    """Computes the curvature of the Hessian metric at sample points."""

    help = __doc__

    logging: LoggingOptions
    workers: WorkerOptions
    output: OutputOptions
    potential: Potential
    points: FloatArray
    order: int
    manifest: RunManifest

    @classmethod
    def parse(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--potential",
            required=True,
            metavar="DESCRIPTOR",
            help="closed:simplex, closed:cube, radial:ball or grid:PATH.",
        )
        PointOptions.parse(parser)
        parser.add_argument(
            "--order",
            type=int,
            default=3,
            help="Jet order, at least 3 (default: %(default)s).",
        )
        OutputOptions.parse(parser)
        WorkerOptions.parse(parser)
        LoggingOptions.parse(parser)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> AnalyzeCommand:
        manifest = RunManifest.from_args("analyze", args)
        potential = resolve_potential(args.potential)
        if not 3 <= args.order <= potential.max_order:
            raise ValidationError(
                f"Order must be between 3 and {potential.max_order} "
                f"for {potential.descriptor}, got: {args.order}"
            )
        for path in input_files(args.potential):
            manifest.add_input(path)
        options = PointOptions.from_args(args)
        if options.points_file is not None:
            manifest.add_input(options.points_file)
        manifest.config["sampling"] = options.sampling.to_json()
        return cls(
            logging=LoggingOptions.from_args(args),
            workers=WorkerOptions.from_args(args),
            output=OutputOptions.from_args(args),
            potential=potential,
            points=options.points(potential),
            order=args.order,
            manifest=manifest,
        )

    def _analyze(self, x: FloatArray) -> _Outcome:
        try:
            return point_geometry(self.potential.jet_at(x, self.order))
        except JetError as exc:
            logger.warning(f"Skipping {x.tolist()}: {exc}")
            return str(exc)

    def run(self) -> ExitCode:
        self.logging.configure()
        directory = self.output.prepare()
        outcomes = parallel_map(
            self._analyze, list(self.points), workers=self.workers.workers
        )
        geometries = [o for o in outcomes if isinstance(o, PointGeometry)]
        skipped = [
            {"point": x.tolist(), "reason": o}
            for x, o in zip(self.points, outcomes)
            if isinstance(o, str)
        ]
        records = [pg.row() for pg in geometries]
        header = [f"x{i + 1}" for i in range(self.potential.dim)]
        if records:
            header = list(records[0])
        document: dict[str, Any] = {
            "descriptor": self.potential.descriptor,
            "order": self.order,
            "points": [pg.to_json() for pg in geometries],
            "skipped": skipped,
        }
        outputs = [
            write_csv(
                directory / "geometry.csv",
                header,
                ([record[key] for key in header] for record in records),
            ),
            write_json(directory / "geometry.json", document),
        ]
        self.manifest.add_outputs(outputs)
        self.manifest.write(directory)
        logger.info(
            f"Analyzed {len(geometries)} points of {self.potential.descriptor}, "
            f"skipped {len(skipped)}"
        )
        return ExitCode.OK

