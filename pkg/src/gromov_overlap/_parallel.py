"""Ordered data-parallel map capped by ``OVERLAP_THREADS``."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    raw = os.environ.get("OVERLAP_THREADS", "").strip()
    if not raw:
        return os.cpu_count() or 1
    value = int(raw)
    if value < 1:
        raise ValueError("OVERLAP_THREADS must be a positive integer")
    return value


def pmap(func, items):
    """``list(map(func, items))``, possibly threaded; order is preserved."""
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
