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

import json
from pathlib import Path

import numpy as np

from kelab import FloatArray, SolverConfig
from kelab.bodies import ConvexBody, make_body


def square_body(halfwidth: float = 1.0) -> ConvexBody:
    return make_body({"kind": "box", "halfwidths": [halfwidth, halfwidth]})


def triangle_body() -> ConvexBody:
    return make_body({"kind": "simplex", "n": 2})


def write_body(path: Path, body: ConvexBody) -> Path:
    path.write_text(json.dumps(body.to_json()), encoding="utf-8")
    return path


def small_solver_config(**changes: object) -> SolverConfig:
    """
    Solver configuration small enough for unit tests.
    """
    config = SolverConfig(L=4.0, N=33, tolerance=1e-9, max_iterations=40)
    for key, value in changes.items():
        setattr(config, key, value)
    return config


def wide_solver_config(**changes: object) -> SolverConfig:
    """
    Solver configuration on the default box with a coarse grid.
    """
    config = SolverConfig(L=8.0, N=65)
    for key, value in changes.items():
        setattr(config, key, value)
    return config


def random_symmetric_tensor(rng: np.random.Generator) -> FloatArray:
    """
    Random fully symmetric 2x2x2 tensor.
    """
    a, b, c, d = rng.normal(size=4)
    tensor = np.empty((2, 2, 2))
    tensor[0, 0, 0] = a
    tensor[0, 0, 1] = tensor[0, 1, 0] = tensor[1, 0, 0] = b
    tensor[0, 1, 1] = tensor[1, 0, 1] = tensor[1, 1, 0] = c
    tensor[1, 1, 1] = d
    return tensor


def cubic_form(tensor: FloatArray, angles: FloatArray) -> FloatArray:
    """
    :math:`T(e, e, e)` for unit vectors at the given angles.
    """
    e = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    return np.einsum("ijk,ni,nj,nk->n", tensor, e, e, e)  # type: ignore[no-any-return]
