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

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import importlib_metadata

from .._exceptions import ValidationError
from ._base import Potential
from ._closed_forms import CubePotential, SimplexPotential
from ._grid import GridPotential
from ._radial import RadialPotential, default_ball_profile

#: Builds a potential from the part of a descriptor after the family name.
PotentialFactory = Callable[[str], Potential]


def load_entry_points(factories: dict[str, Any], group: str) -> None:
    entry_points = importlib_metadata.entry_points(group=group)
    for entry_point in entry_points:
        factories[entry_point.name] = entry_point.load()


def _split_dimension(argument: str) -> tuple[str, int]:
    name, _, dim = argument.partition(":")
    if not dim:
        return name, 2
    try:
        return name, int(dim)
    except ValueError as exc:
        raise ValidationError(f"Invalid dimension in {argument!r}") from exc


def closed_form_factory(argument: str) -> Potential:
    """
    ``simplex`` or ``cube``, optionally followed by ``:n``.
    """
    name, n = _split_dimension(argument)
    if name == "simplex":
        return SimplexPotential(n)
    if name == "cube":
        return CubePotential(n)
    raise ValidationError(f"Unknown closed form: {name!r}")


def radial_factory(argument: str) -> Potential:
    """
    ``ball``, optionally followed by ``:n``.
    """
    name, n = _split_dimension(argument)
    if name != "ball":
        raise ValidationError(f"Unknown radial potential: {name!r}")
    return RadialPotential(default_ball_profile(n))


def grid_factory(argument: str) -> Potential:
    """
    Path to a solver output directory or a ``potential.csv`` file.
    """
    if not argument:
        raise ValidationError("A grid potential needs a path: grid:PATH")
    return GridPotential.load(Path(argument))


@dataclass
class PotentialRegistry:
    """
    Registry of potential sources, keyed by descriptor family
    (the part of a descriptor before the first colon).
    """

    #: Factories of potentials.
    factories: dict[str, PotentialFactory] = field(default_factory=dict)

    def load(self) -> None:
        """
        Load known sources.

        Combines :meth:`.load_defaults` and :meth:`.load_entry_points`.
        """
        self.load_defaults()
        self.load_entry_points()

    def load_defaults(self) -> None:
        """
        Load the built-in closed-form, radial and grid sources.
        """
        self.factories["closed"] = closed_form_factory
        self.factories["radial"] = radial_factory
        self.factories["grid"] = grid_factory

    def load_entry_points(self, prefix: str = "kelab.potentials") -> None:
        """
        Load sources registered with setuptools entrypoints.

        Name of the entrypoint is the descriptor family.
        Value of the entrypoint must be in the format ``"<module>:<attr>"``,
        where ``<attr>`` is a callable taking the rest of the descriptor.
        """
        load_entry_points(self.factories, prefix)

    def resolve(self, descriptor: str) -> Potential:
        """
        Build a potential from a descriptor such as ``"closed:simplex"``.

        :raises ValidationError: for unknown families or arguments
        """
        family, _, argument = descriptor.partition(":")
        try:
            factory = self.factories[family]
        except KeyError:
            known = ", ".join(sorted(self.factories))
            raise ValidationError(
                f"Unknown potential family {family!r} (known: {known})"
            ) from None
        return factory(argument)


potential_registry = PotentialRegistry()
potential_registry.load()
