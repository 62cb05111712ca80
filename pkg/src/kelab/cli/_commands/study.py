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

from ..._configuration import SolverConfig
from ..._serialization import write_csv, write_json
from ...bodies import ConvexBody, load_body
from ...solver import STUDY_COLUMNS, convergence_study
from .._manifest import RunManifest
from .._options.common import LoggingOptions, OutputOptions, WorkerOptions, positive_int
from .base import Command, ExitCode
from .solve import parse_solver_options, solver_config

logger = logging.getLogger("kelab.cli")


@dataclasses.dataclass
class StudyCommand(Command):
    """Solves on a sequence of grids and tabulates convergence."""

    help = __doc__

    logging: LoggingOptions
    workers: WorkerOptions
    output: OutputOptions
    body: ConvexBody
    configs: list[SolverConfig]
    window: float
    lambda_nodes: int
    manifest: RunManifest

    @classmethod
    def parse(cls, parser: argparse.ArgumentParser) -> None:
        parse_solver_options(parser)
        parser.add_argument(
            "--n",
            type=positive_int,
            nargs="+",
            default=[65, 129, 257],
            help="Grid sizes per axis, odd (default: %(default)s).",
        )
        parser.add_argument(
            "--window",
            type=float,
            default=4.0,
            help="Half-width of the error window (default: %(default)s).",
        )
        parser.add_argument(
            "--lambda-nodes",
            type=positive_int,
            default=9,
            help="Nodes per axis of the curvature samples (default: %(default)s).",
        )
        OutputOptions.parse(parser)
        WorkerOptions.parse(parser)
        LoggingOptions.parse(parser)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> StudyCommand:
        manifest = RunManifest.from_args("study", args)
        body = load_body(args.body)
        manifest.add_input(args.body)
        if args.config:
            manifest.add_input(args.config)
        base = solver_config(args)
        configs = []
        for n in args.n:
            config = dataclasses.replace(base, N=n)
            config.validate()
            configs.append(config)
        manifest.config["solver"] = [config.to_json() for config in configs]
        return cls(
            logging=LoggingOptions.from_args(args),
            workers=WorkerOptions.from_args(args),
            output=OutputOptions.from_args(args),
            body=body,
            configs=configs,
            window=args.window,
            lambda_nodes=args.lambda_nodes,
            manifest=manifest,
        )

    def run(self) -> ExitCode:
        self.logging.configure()
        directory = self.output.prepare()
        rows = convergence_study(
            self.body,
            self.configs,
            window=self.window,
            lambda_nodes=self.lambda_nodes,
            workers=self.workers.workers,
        )
        document = {
            "body": self.body.to_json(),
            "window": self.window,
            "rows": [dataclasses.asdict(row) for row in rows],
        }
        outputs = [
            write_csv(
                directory / "study.csv", STUDY_COLUMNS, (row.row() for row in rows)
            ),
            write_json(directory / "study.json", document),
        ]
        self.manifest.add_outputs(outputs)
        self.manifest.write(directory)
        logger.info(f"Convergence study of {self.body} written to {directory}")
        return ExitCode.OK
