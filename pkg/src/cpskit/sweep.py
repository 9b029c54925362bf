"""Parameter grids and deterministic parallel evaluation."""

import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

import numpy as np

from .series import InvalidPolicyError
from .states import DomainError, check_mean_n

THREADS_ENV = "CPSKIT_THREADS"

T = TypeVar("T")
R = TypeVar("R")


def resolve_thread_count() -> int:
    """Resolve the worker count from the CPSKIT_THREADS env var.

    Unset uses every CPU, a positive integer uses that many workers and an
    empty value disables threading.

    Raises:
        InvalidPolicyError: If the variable is set to anything else.
    """
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    if not raw.strip():
        return 1
    try:
        count = int(raw)
    except ValueError as e:
        raise InvalidPolicyError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from e
    if count < 1:
        raise InvalidPolicyError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return count


def parallel_map(fn: Callable[[T], R], items: Iterable[T], *, threads: int | None = None) -> list[R]:
    """Apply fn to every item, returning results in input order.

    Args:
        fn: Pure function of one item.
        items: Inputs.
        threads: Worker count; defaults to :func:`resolve_thread_count`.
    """
    items = list(items)
    workers = resolve_thread_count() if threads is None else threads
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def mean_n_grid(start: float, stop: float, points: int, *, log: bool = False) -> np.ndarray:
    """Ascending grid of mean quantum numbers, linear or logarithmic."""
    start, stop = check_mean_n(start), check_mean_n(stop)
    if points < 1:
        raise DomainError(f"points must be positive, got {points}")
    if stop < start:
        raise DomainError(f"grid must be ascending, got [{start}, {stop}]")
    if log:
        if start <= 0.0:
            raise DomainError("a logarithmic grid needs a positive start")
        return np.geomspace(start, stop, points)
    return np.linspace(start, stop, points)


def eps2_grid(start: float, stop: float, points: int) -> np.ndarray:
    """Ascending linear grid of |eps|^2 values in [0, 1)."""
    if not 0.0 <= start <= stop < 1.0:
        raise DomainError(f"|eps|^2 grid must satisfy 0 <= start <= stop < 1, got [{start}, {stop}]")
    if points < 1:
        raise DomainError(f"points must be positive, got {points}")
    return np.linspace(start, stop, points)
