"""Small internal helpers shared across modules."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

__all__ = ["chunked_map"]


def chunked_map(fn, items, workers=1):
    """Map ``fn`` over ``items``, optionally in a thread pool, preserving order.

    The work split is a pure function of ``items``; the worker count only
    changes scheduling, never results, so outputs are identical for any
    ``workers``.
    """
    items = list(items)
    if workers is None or workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
