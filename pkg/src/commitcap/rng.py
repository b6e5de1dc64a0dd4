"""Deterministic seed derivation for reproducible simulations.

Every random stream is derived from a user seed plus integer tags (trial
chunk, codeword pair, protocol stage), so results do not depend on how work
is split across threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")

CHUNK = 1000
MAX_SEED = 2**64 - 1


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError("seeds are unsigned 64-bit integers")
    return seed


def derive_seed(seed: int, *tags: int) -> int:
    ss = np.random.SeedSequence([check_seed(seed), *[int(t) for t in tags]])
    return int(ss.generate_state(1, np.uint64)[0])


def rng_for(seed: int, *tags: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([check_seed(seed), *[int(t) for t in tags]]))


def chunk_sizes(trials: int, chunk: int = CHUNK) -> list[int]:
    full, rest = divmod(trials, chunk)
    return [chunk] * full + ([rest] if rest else [])


def map_ordered(fn: Callable[..., T], items: Sequence, threads: int = 1) -> list[T]:
    """``[fn(i) for i in items]``, optionally on a thread pool; order is preserved."""
    if threads <= 1 or len(items) <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
