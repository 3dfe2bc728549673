import os
from concurrent.futures import ProcessPoolExecutor

ENV_THREADS = "STRATSUM_THREADS"


def resolve_workers(workers=None) -> int:
    if workers is None:
        workers = int(os.environ.get(ENV_THREADS, "1") or 1)
    return max(1, int(workers))


def ordered_map(fn, items, workers=1):
    """``list(map(fn, items))`` spread over processes; output order is input order."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as ex:
        return list(ex.map(fn, items))


def chunked(seq, size):
    seq = list(seq)
    return [seq[i : i + size] for i in range(0, len(seq), size)]
