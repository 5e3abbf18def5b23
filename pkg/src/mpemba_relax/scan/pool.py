"""Thread-pool evaluation of independent scan nodes."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import TYPE_CHECKING, TypeVar, cast

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

log = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def map_nodes(
    fn: Callable[[T], R],
    nodes: Sequence[T],
    threads: int = 1,
    progress: Callable[[int, int], None] | None = None,
) -> list[R]:
    """Evaluate `fn` on every node; results are returned in node order.

    `progress(done, total)` is called after each node completes, in completion order.
    """
    total = len(nodes)
    results: list[R | None] = [None] * total
    if threads <= 1 or total <= 1:
        for i, node in enumerate(nodes):
            results[i] = fn(node)
            if progress:
                progress(i + 1, total)
        return cast("list[R]", results)

    log.debug("evaluating %d nodes on %d threads", total, threads)
    with ThreadPoolExecutor(max_workers=threads) as executor:
        futures = {executor.submit(fn, node): i for i, node in enumerate(nodes)}
        for done, future in enumerate(as_completed(futures), start=1):
            results[futures[future]] = future.result()
            if progress:
                progress(done, total)
    return cast("list[R]", results)
