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

import numpy as np
from scipy.stats import qmc

from ._configuration import SamplingConfig
from ._typing import FloatArray


def sample_points(config: SamplingConfig | None = None, *, dim: int = 2) -> FloatArray:
    """
    Quasi-random points in the ball of radius ``config.radius``.

    Points of a scrambled Halton sequence in the unit cube are mapped
    to the ball by an area-preserving polar map (``dim == 2``) or by
    rejection from the enclosing cube (other dimensions).
    The result depends only on the configuration.
    """
    if config is None:
        config = SamplingConfig()
    config.validate()
    if dim == 2:
        unit = qmc.Halton(d=2, scramble=True, seed=config.seed).random(config.count)
        radius = config.radius * np.sqrt(unit[:, 0])
        angle = 2 * np.pi * unit[:, 1]
        return np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
    sampler = qmc.Halton(d=dim, scramble=True, seed=config.seed)
    points: list[FloatArray] = []
    while len(points) < config.count:
        candidate = config.radius * (2 * sampler.random(1)[0] - 1)
        if np.linalg.norm(candidate) <= config.radius:
            points.append(candidate)
    return np.array(points)


def unit_directions(count: int, *, offset: float = 0.0) -> FloatArray:
    """
    Equally spaced unit vectors in the plane.
    """
    angle = offset + 2 * np.pi * np.arange(count) / count
    return np.column_stack([np.cos(angle), np.sin(angle)])
