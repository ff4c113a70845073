"""
Worker pool helpers.

Grid cells are evaluated concurrently but always reduced in submission
order, so results do not depend on the worker count.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from .env_loader import get_thread_cap

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(requested: Optional[int] = None) -> int:
    """Clamp a requested worker count to the HG_THREADS cap."""
    cap = get_thread_cap()
    if requested is None:
        return cap
    return max(1, min(int(requested), cap))


def ordered_map(func: Callable[[T], R], items: Iterable[T],
                workers: Optional[int] = None) -> List[R]:
    """
    Apply `func` to every item and return results in input order.

    Args:
        func: Pure function of one item
        items: Work items
        workers: Requested worker count (capped by HG_THREADS)

    Returns:
        List of results aligned with `items`
    """
    items = list(items)
    count = resolve_workers(workers)
    if count == 1 or len(items) < 2:
        return [func(item) for item in items]

    logger.debug("evaluating %d cells on %d workers", len(items), count)
    with ThreadPoolExecutor(max_workers=count) as pool:
        return list(pool.map(func, items))
