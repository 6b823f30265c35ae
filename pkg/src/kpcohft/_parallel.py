"""Optional process-level parallelism, capped by ``KPCOHFT_THREADS``."""
import os
from concurrent.futures import ProcessPoolExecutor


def worker_count():
    raw = os.environ.get("KPCOHFT_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    return max(1, min(n, os.cpu_count() or 1))


def pmap(func, items, min_items=64):
    """``list(map(func, items))``, spread over worker processes when allowed."""
    items = list(items)
    n = worker_count()
    if n <= 1 or len(items) < min_items:
        return [func(x) for x in items]
    chunk = max(1, len(items) // (4 * n))
    with ProcessPoolExecutor(max_workers=n) as ex:
        return list(ex.map(func, items, chunksize=chunk))
