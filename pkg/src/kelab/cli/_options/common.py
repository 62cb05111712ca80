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
from typing import Type, TypeVar

from ..._configuration import _Config
from ..._exceptions import ValidationError

_C = TypeVar("_C", bound=_Config)


def positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer: {value!r}") from None
    if number < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {value!r}")
    return number


def read_config(cls: Type[_C], path: Path) -> _C:
    """
    Load a configuration object from a JSON file.
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"Cannot read {path}: {exc}") from exc
    return cls.from_json(text)


@dataclasses.dataclass
class LoggingOptions:
    """
    Command-line options for logging configuration
    """

    log_level: str

    @classmethod
    def parse(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--log-level",
            default="WARNING",
            choices=("DEBUG", "INFO", "WARNING", "ERROR"),
            help="Logging level.",
        )

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> LoggingOptions:
        return cls(log_level=args.log_level)

    def configure(self) -> None:
        logging.basicConfig(format="%(asctime)s %(name)s %(levelname)s: %(message)s")
        logging.getLogger("kelab").setLevel(self.log_level)


@dataclasses.dataclass
class WorkerOptions:
    """
    Command-line options for the worker pool
    """

    workers: int

    @classmethod
    def parse(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--workers",
            type=positive_int,
            default=1,
            help="Number of worker threads (1 runs sequentially).",
        )

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> WorkerOptions:
        return cls(workers=args.workers)


@dataclasses.dataclass
class OutputOptions:
    """
    Command-line options for the output directory
    """

    out: Path

    @classmethod
    def parse(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--out",
            type=Path,
            required=True,
            metavar="DIR",
            help="Output directory (created if missing).",
        )

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> OutputOptions:
        return cls(out=args.out)

    def prepare(self) -> Path:
        try:
            self.out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ValidationError(f"Cannot create {self.out}: {exc}") from exc
        return self.out
