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
import sys
from pathlib import Path

from ..._configuration import Thresholds
from ..._exceptions import ValidationError, VerificationError
from ..._serialization import write_csv, write_json
from ..._typing import FloatArray
from ...identities import REPORT_COLUMNS, SUITES, parse_suites, run_suite
from ...potentials import Potential
from .._manifest import RunManifest
from .._options.common import (
    LoggingOptions,
    OutputOptions,
    WorkerOptions,
    read_config,
)
from .._options.points import PointOptions
from .._options.potential import CASES, input_files, resolve_potential
from .base import Command, ExitCode
from .report import format_summary

logger = logging.getLogger("kelab.cli")


@dataclasses.dataclass
class VerifyCommand(Command):
    """Verifies curvature identities and bounds of a potential."""

    help = __doc__

    logging: LoggingOptions
    workers: WorkerOptions
    output: OutputOptions
    potential: Potential
    points: FloatArray
    suites: tuple[str, ...]
    alpha: float
    thresholds: Thresholds
    manifest: RunManifest

    @classmethod
    def parse(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--case",
            required=True,
            help=f"{', '.join(CASES)}, grid:PATH or any potential descriptor.",
        )
        parser.add_argument(
            "--suite",
            nargs="+",
            default=["all"],
            choices=(*SUITES, "all"),
            help="Suites to run (default: all).",
        )
        parser.add_argument(
            "--alpha",
            type=float,
            default=2.0,
            help="Exponent of the growth bounds, above 1 (default: %(default)s).",
        )
        parser.add_argument(
            "--thresholds",
            type=Path,
            metavar="FILE",
            help="JSON file overriding the pass thresholds.",
        )
        PointOptions.parse(parser)
        OutputOptions.parse(parser)
        WorkerOptions.parse(parser)
        LoggingOptions.parse(parser)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> VerifyCommand:
        manifest = RunManifest.from_args("verify", args)
        if not args.alpha > 1:
            raise ValidationError(f"Alpha must be above 1, got: {args.alpha}")
        potential = resolve_potential(args.case)
        for path in input_files(args.case):
            manifest.add_input(path)
        options = PointOptions.from_args(args)
        if options.points_file is not None:
            manifest.add_input(options.points_file)
        thresholds = Thresholds()
        if args.thresholds is not None:
            thresholds = read_config(Thresholds, args.thresholds)
            manifest.add_input(args.thresholds)
        thresholds.validate()
        manifest.config["sampling"] = options.sampling.to_json()
        manifest.config["thresholds"] = thresholds.to_json()
        return cls(
            logging=LoggingOptions.from_args(args),
            workers=WorkerOptions.from_args(args),
            output=OutputOptions.from_args(args),
            potential=potential,
            points=options.points(potential),
            suites=parse_suites(args.suite),
            alpha=args.alpha,
            thresholds=thresholds,
            manifest=manifest,
        )

    def run(self) -> ExitCode:
        self.logging.configure()
        directory = self.output.prepare()
        report = run_suite(
            self.potential,
            self.points,
            self.suites,
            alpha=self.alpha,
            thresholds=self.thresholds,
            workers=self.workers.workers,
        )
        document = report.to_json()
        outputs = [
            write_json(directory / "report.json", document),
            write_csv(directory / "report.csv", REPORT_COLUMNS, report.rows()),
        ]
        self.manifest.add_outputs(outputs)
        self.manifest.write(directory)
        sys.stdout.write(format_summary(document))
        failures = report.failures()
        if failures:
            raise VerificationError(
                f"{len(failures)} checks failed on {self.potential.descriptor}",
                failures,
            )
        return ExitCode.OK
