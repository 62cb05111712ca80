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
import datetime
import hashlib
import os
from pathlib import Path
from typing import Any, Iterable

from .. import __version__
from .._serialization import to_jsonable, write_json

MANIFEST_NAME = "manifest.json"


def timestamp() -> str:
    """
    Current UTC time in ISO format.

    ``SOURCE_DATE_EPOCH`` overrides the clock, so that manifests
    of repeated runs can be compared byte by byte.
    """
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None and epoch.isdigit():
        moment = datetime.datetime.fromtimestamp(int(epoch), datetime.timezone.utc)
    else:
        moment = datetime.datetime.now(datetime.timezone.utc)
    return moment.isoformat(timespec="seconds")


def file_digest(path: Path) -> str:
    """
    SHA-256 of a file, as a hex string.
    """
    digest = hashlib.sha256()
    with path.open("rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def echo_arguments(args: argparse.Namespace) -> dict[str, Any]:
    """
    Command-line options as JSON-compatible values.
    """
    echo: dict[str, Any] = {}
    for key, value in sorted(vars(args).items()):
        if callable(value):
            continue
        echo[key] = str(value) if isinstance(value, Path) else to_jsonable(value)
    return echo


@dataclasses.dataclass
class RunManifest:
    """
    Record of one command run: what went in and what came out.
    """

    #: Name of the subcommand.
    command: str

    #: Echo of the command-line options.
    arguments: dict[str, Any] = dataclasses.field(default_factory=dict)

    #: Echo of the effective configuration objects, by name.
    config: dict[str, Any] = dataclasses.field(default_factory=dict)

    #: SHA-256 of every input file, by path.
    inputs: dict[str, str] = dataclasses.field(default_factory=dict)

    #: Names of the files written to the output directory.
    outputs: list[str] = dataclasses.field(default_factory=list)

    version: str = __version__
    started: str = dataclasses.field(default_factory=timestamp)
    finished: str | None = None

    @classmethod
    def from_args(cls, command: str, args: argparse.Namespace) -> RunManifest:
        return cls(command, echo_arguments(args))

    def add_input(self, path: Path) -> None:
        """
        Hash an input file, or the solver output files of a directory.
        """
        if path.is_dir():
            for name in ("potential.csv", "body.json"):
                if (path / name).is_file():
                    self.add_input(path / name)
            return
        self.inputs[str(path)] = file_digest(path)

    def add_outputs(self, paths: Iterable[Path]) -> None:
        for path in paths:
            if path.name not in self.outputs:
                self.outputs.append(path.name)

    def write(self, directory: Path) -> Path:
        """
        Stamp the finish time and write ``manifest.json``.
        """
        self.finished = timestamp()
        self.outputs.sort()
        return write_json(directory / MANIFEST_NAME, dataclasses.asdict(self))
