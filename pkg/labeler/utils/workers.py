"""
Bounded worker pool for per-sequence work items
"""
import concurrent.futures
from typing import Callable, List, Sequence, TypeVar

from .errors import UsageError

T = TypeVar("T")
R = TypeVar("R")


def run_pool(fn: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> List[R]:
    """
    Apply fn to every item on at most `jobs` threads.
    Results come back in input order; the first failure is re-raised.
    """
    if int(jobs) != jobs or jobs < 1:
        raise UsageError(f"--jobs must be a positive integer, got {jobs}")
    if jobs == 1 or len(items) <= 1:
        return [fn(item) for item in items]

    with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as executor:
        futures = [executor.submit(fn, item) for item in items]
        return [fut.result() for fut in futures]
