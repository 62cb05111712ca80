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

import functools
from typing import Callable, Sequence, TypeVar

import anyio
import anyio.to_thread

_T = TypeVar("_T")
_R = TypeVar("_R")


async def map_in_threads(
    func: Callable[[_T], _R],
    items: Sequence[_T],
    *,
    workers: int,
) -> list[_R]:
    """
    Apply ``func`` to every item in worker threads.

    At most ``workers`` calls run at once.
    Results are returned in the order of ``items``.
    """
    limiter = anyio.CapacityLimiter(workers)
    results: list[_R | None] = [None] * len(items)

    async def worker(index: int) -> None:
        results[index] = await anyio.to_thread.run_sync(
            func, items[index], limiter=limiter
        )

    async with anyio.create_task_group() as tg:
        for index in range(len(items)):
            tg.start_soon(worker, index)
    return results  # type: ignore[return-value]


def parallel_map(
    func: Callable[[_T], _R],
    items: Sequence[_T],
    *,
    workers: int = 1,
) -> list[_R]:
    """
    Synchronous front end of :func:`map_in_threads`.

    With a single worker, items are processed in the calling thread.
    """
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    return anyio.run(
        functools.partial(map_in_threads, func, items, workers=workers)
    )
