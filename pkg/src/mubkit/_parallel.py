import os
from concurrent.futures import ThreadPoolExecutor


def max_threads():
    """Thread cap from MUBKIT_THREADS (default 1: run serially)."""
    try:
        n = int(os.environ.get("MUBKIT_THREADS", "1"))
    except ValueError:
        n = 1
    return max(n, 1)


def ordered_map(fn, items, threads=None):
    """map() that may run concurrently but always returns results in input order."""
    items = list(items)
    threads = max_threads() if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
