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
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from ..._exceptions import ValidationError
from ..._serialization import format_float, read_csv
from .._options.common import LoggingOptions
from .base import Command, ExitCode

SUMMARY_COLUMNS = ("check", "kind", "points", "skipped", "max_abs", "max_rel", "result")


def _text(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "pass" if value else "FAIL"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def format_table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """
    Left-aligned plain-text table.
    """
    cells = [list(header)] + [[_text(value) for value in row] for row in rows]
    widths = [max(len(row[k]) for row in cells) for k in range(len(header))]
    lines = [
        "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells
    ]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def format_summary(document: dict[str, Any]) -> str:
    """
    Summary table of a ``report.json`` document.
    """
    rows = [
        (
            name,
            entry.get("kind"),
            entry["n_points"],
            entry["n_skipped"],
            entry["max_abs"],
            entry["max_rel"],
            entry["pass"] if entry["n_points"] else None,
        )
        for name, entry in sorted(document["summary"].items())
    ]
    verdict = "passed" if document["passed"] else "FAILED"
    lines = [
        f"{document['descriptor']}: {verdict}",
        format_table(SUMMARY_COLUMNS, rows),
    ]
    growth = document.get("extras", {}).get("growth_exponent")
    if growth is not None:
        lines.append(f"growth exponent: {_text(growth)}\n")
    return "\n".join(lines)


def format_solver(document: dict[str, Any]) -> str:
    diagnostics = document["diagnostics"]
    keys = ("iterations", "residual", "minimum", "mass_ratio", "symmetry_defect")
    rows = [(key, diagnostics.get(key)) for key in keys]
    rows.append(("max_abs_residual", document["residual"]["max_abs"]))
    return format_table(("solver", "value"), rows)


def _read_json(path: Path) -> dict[str, Any]:
    try:
        return (  # type: ignore[no-any-return]
            json.loads(path.read_text(encoding="utf-8"))
        )
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"Cannot read {path}: {exc}") from exc


@dataclasses.dataclass
class ReportCommand(Command):
    """Prints a summary of the outputs in a run directory."""

    help = __doc__

    logging: LoggingOptions
    directory: Path

    @classmethod
    def parse(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--in",
            dest="input",
            type=Path,
            required=True,
            metavar="DIR",
            help="Output directory of solve, verify or study.",
        )
        LoggingOptions.parse(parser)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> ReportCommand:
        if not args.input.is_dir():
            raise ValidationError(f"Not a directory: {args.input}")
        return cls(logging=LoggingOptions.from_args(args), directory=args.input)

    def sections(self) -> list[str]:
        sections = []
        if (self.directory / "solver.json").is_file():
            sections.append(format_solver(_read_json(self.directory / "solver.json")))
        if (self.directory / "study.csv").is_file():
            header, rows = read_csv(self.directory / "study.csv")
            sections.append(format_table(header, rows))
        if (self.directory / "report.json").is_file():
            sections.append(format_summary(_read_json(self.directory / "report.json")))
        if not sections:
            raise ValidationError(
                f"No solver, study or report output in {self.directory}"
            )
        return sections

    def run(self) -> ExitCode:
        self.logging.configure()
        sys.stdout.write("\n".join(self.sections()))
        return ExitCode.OK
