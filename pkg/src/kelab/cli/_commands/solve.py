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
from pathlib import Path
from typing import Any

from ..._configuration import SolverConfig
from ..._serialization import write_csv, write_json
from ...bodies import ConvexBody, load_body
from ...solver import ke_residual, solve
from .._manifest import RunManifest
from .._options.common import LoggingOptions, OutputOptions, positive_int, read_config
from .base import Command, ExitCode

logger = logging.getLogger("kelab.cli")


def parse_solver_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--body",
        type=Path,
        required=True,
        metavar="FILE",
        help="JSON body descriptor.",
    )
    parser.add_argument(
        "--config",
        type=Path,
        metavar="FILE",
        help="JSON solver configuration; flags below override it.",
    )
    parser.add_argument("--L", type=float, help="Half-width of the box.")
    parser.add_argument("--tol", type=float, help="Residual tolerance.")
    parser.add_argument(
        "--max-iterations", type=positive_int, help="Maximum number of Newton steps."
    )
    parser.add_argument(
        "--boundary",
        choices=("asymptotic", "support", "oracle"),
        help="Dirichlet data: asymptotic model, support function or closed form.",
    )


def solver_config(args: argparse.Namespace) -> SolverConfig:
    """
    Solver configuration from ``--config`` and the override flags.
    """
    config = read_config(SolverConfig, args.config) if args.config else SolverConfig()
    overrides: dict[str, Any] = {
        "L": args.L,
        "tolerance": args.tol,
        "max_iterations": args.max_iterations,
        "boundary": args.boundary,
    }
    n = getattr(args, "n", None)
    if isinstance(n, int):
        overrides["N"] = n
    config = dataclasses.replace(
        config, **{k: v for k, v in overrides.items() if v is not None}
    )
    config.validate()
    return config


@dataclasses.dataclass
class SolveCommand(Command):
    """Solves the Kähler-Einstein equation of a convex body on a grid."""

    help = __doc__

    logging: LoggingOptions
    output: OutputOptions
    body: ConvexBody
    config: SolverConfig
    manifest: RunManifest

    @classmethod
    def parse(cls, parser: argparse.ArgumentParser) -> None:
        parse_solver_options(parser)
        parser.add_argument("--n", type=positive_int, help="Grid size per axis (odd).")
        OutputOptions.parse(parser)
        LoggingOptions.parse(parser)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> SolveCommand:
        manifest = RunManifest.from_args("solve", args)
        body = load_body(args.body)
        manifest.add_input(args.body)
        config = solver_config(args)
        if args.config:
            manifest.add_input(args.config)
        manifest.config["solver"] = config.to_json()
        return cls(
            logging=LoggingOptions.from_args(args),
            output=OutputOptions.from_args(args),
            body=body,
            config=config,
            manifest=manifest,
        )

    def run(self) -> ExitCode:
        self.logging.configure()
        directory = self.output.prepare()
        potential = solve(self.body, self.config)
        residual = ke_residual(potential)
        outputs = potential.save(directory)
        columns = ("x", "y", "residual")
        outputs.append(write_csv(directory / "residual.csv", columns, residual.rows()))
        outputs.append(
            write_json(
                directory / "solver.json",
                {"diagnostics": potential.diagnostics, "residual": residual.summary()},
            )
        )
        self.manifest.add_outputs(outputs)
        self.manifest.write(directory)
        logger.info(f"Wrote {len(outputs)} files to {directory}")
        return ExitCode.OK
