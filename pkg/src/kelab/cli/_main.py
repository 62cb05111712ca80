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
import logging
import sys
from pathlib import Path
from typing import Any, NoReturn, Sequence, Type

from .. import __version__ as version
from .._exceptions import (
    KELabError,
    ShootingError,
    SolverError,
    ValidationError,
    VerificationError,
)
from .._serialization import dumps_json, write_json
from ._commands.analyze import AnalyzeCommand
from ._commands.base import Command, ExitCode
from ._commands.report import ReportCommand
from ._commands.solve import SolveCommand
from ._commands.study import StudyCommand
from ._commands.verify import VerifyCommand

logger = logging.getLogger("kelab.cli")

COMMANDS: dict[str, Type[Command]] = {
    "solve": SolveCommand,
    "analyze": AnalyzeCommand,
    "verify": VerifyCommand,
    "report": ReportCommand,
    "study": StudyCommand,
}


class ArgumentParser(argparse.ArgumentParser):
    """
    Argument parser raising :class:`.ValidationError` on invalid options,
    so that usage errors share the exit code of other invalid input.
    """

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        raise ValidationError(message)


def exit_code(exc: KELabError) -> ExitCode:
    if isinstance(exc, VerificationError):
        return ExitCode.VERIFICATION_FAILURE
    if isinstance(exc, (SolverError, ShootingError)):
        return ExitCode.SOLVER_FAILURE
    return ExitCode.INVALID


def error_record(exc: KELabError) -> dict[str, Any]:
    """
    Machine-readable description of a failed run.
    """
    record: dict[str, Any] = {
        "error": type(exc).__name__,
        "message": str(exc),
        "exit_code": int(exit_code(exc)),
    }
    if isinstance(exc, SolverError):
        record["residual_history"] = exc.history
    if isinstance(exc, ShootingError):
        record["trace"] = [list(item) for item in exc.trace]
    if isinstance(exc, VerificationError):
        record["failures"] = exc.failures
    return record


def report_error(exc: KELabError, out: Path | None) -> ExitCode:
    """
    Write ``error.json`` to the output directory (or the record to stderr).
    """
    code = exit_code(exc)
    record = error_record(exc)
    logger.error(f"{type(exc).__name__}: {exc}")
    if out is not None:
        try:
            out.mkdir(parents=True, exist_ok=True)
            write_json(out / "error.json", record)
            return code
        except OSError as write_exc:
            logger.error(f"Cannot write {out / 'error.json'}: {write_exc}")
    sys.stderr.write(dumps_json(record))
    return code


def run(argv: Sequence[str] | None = None, *, prog: str | None = None) -> int:
    """
    Main entry point of a command-line utility.

    :param argv: Command-line arguments (defaults to ``sys.argv[1:]``)
    :param prog: Program name, included in help output
    :return: Exit code
    """
    parser = ArgumentParser(
        prog=prog,
        description="Numerical lab for Kähler-Einstein potentials of convex bodies.",
        allow_abbrev=False,
    )
    parser.add_argument("--version", action="version", version=f"kelab {version}")

    def default_command(args: argparse.Namespace) -> ExitCode:
        parser.print_usage()
        return ExitCode.OK

    parser.set_defaults(command=default_command)
    subparsers = parser.add_subparsers()
    for name, cls in COMMANDS.items():
        subparser = subparsers.add_parser(
            name,
            help=cls.help,  # For root command help
            description=cls.help,  # For subcommand help
            allow_abbrev=False,
        )
        cls.parse(subparser)
        subparser.set_defaults(command=cls.run_from_args)

    try:
        args = parser.parse_args(argv)
    except ValidationError as exc:
        return int(report_error(exc, None))
    try:
        return int(args.command(args))
    except KELabError as exc:
        return int(report_error(exc, getattr(args, "out", None)))
