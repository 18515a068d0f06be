""" Internal parallelism cap, read from FKT_THREADS. """

from concurrent.futures import ThreadPoolExecutor
from os import getenv
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def thread_count() -> int:
    """Worker count; 0 or 1 means sequential (the deterministic default)."""
    try:
        return max(0, int(getenv("FKT_THREADS", "0") or 0))
    except ValueError:
        return 0


def ordered_map(func: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """Map over items, in threads when allowed; results keep input order."""
    workers = thread_count()
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
