"""Order-preserving sharded map over a process pool.

Results come back in shard order whatever the scheduling, so callers that
merge them canonically produce output independent of the worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def chunk(items: Sequence[T], n: int) -> list[Sequence[T]]:
    n = max(1, min(n, len(items)))
    size, extra = divmod(len(items), n)
    out = []
    start = 0
    for i in range(n):
        stop = start + size + (1 if i < extra else 0)
        out.append(items[start:stop])
        start = stop
    return out


def map_shards(fn: Callable[..., R], shards: Sequence, workers: int = 1, *args) -> list[R]:
    """Apply ``fn(shard, *args)`` to every shard; results in shard order."""
    if workers <= 1 or len(shards) <= 1:
        return [fn(s, *args) for s in shards]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, s, *args) for s in shards]
        return [f.result() for f in futures]
