from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """Apply ``func`` to every item with a bounded thread pool.

    Results come back in input order, so aggregation downstream does not
    depend on scheduling or on the number of workers.

    Args:
        func (Callable): Function applied to each item.
        items (Iterable): Work items.
        workers (int): Pool size; 1 runs inline. Defaults to 1.

    Returns:
        List: ``[func(item) for item in items]``.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
