"""Schedule-independent parallel sweeps.

``first_failure`` returns the smallest index whose item fails the predicate,
whatever the number of workers, so reports do not depend on ``--jobs``.
Workers are forked and inherit the predicate (no pickling of closures).
"""

from __future__ import annotations

import multiprocessing as mp

_PRED = None


def _scan(chunk):
    for k, item in chunk:
        if not _PRED(item):
            return k
    return None


def first_failure(pred, items: list, jobs: int = 1) -> int | None:
    global _PRED
    indexed = list(enumerate(items))
    if jobs <= 1 or len(indexed) < 2 or "fork" not in mp.get_all_start_methods():
        _PRED = pred
        try:
            return _scan(indexed)
        finally:
            _PRED = None
    jobs = min(jobs, len(indexed))
    # contiguous blocks keep each worker's memo caches warm
    size = -(-len(indexed) // (4 * jobs))
    chunks = [indexed[i:i + size] for i in range(0, len(indexed), size)]
    _PRED = pred
    try:
        with mp.get_context("fork").Pool(jobs) as pool:
            hits = [k for k in pool.map(_scan, chunks) if k is not None]
    finally:
        _PRED = None
    return min(hits) if hits else None
