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

from pathlib import Path

from ...potentials import Potential, potential_registry

#: Shorthands of ``verify --case``.
CASES = {
    "simplex": "closed:simplex",
    "cube": "closed:cube",
    "ball": "radial:ball",
}


def case_descriptor(case: str) -> str:
    """
    Expand a case name, passing full descriptors through.
    """
    return CASES.get(case, case)


def resolve_potential(descriptor: str) -> Potential:
    return potential_registry.resolve(case_descriptor(descriptor))


def input_files(descriptor: str) -> list[Path]:
    """
    Files read when resolving a descriptor.
    """
    family, _, argument = case_descriptor(descriptor).partition(":")
    if family != "grid" or not argument:
        return []
    path = Path(argument)
    if path.is_dir():
        return [path]
    return [p for p in (path, path.parent / "body.json") if p.is_file()]
