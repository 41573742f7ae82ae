from __future__ import annotations
from typing import TypeVar

import logging
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from cutoff_kit.config import DEFAULT_CHUNK_SIZE
from cutoff_kit.markov_core.types import SeedSpec
from cutoff_kit.utils.progress_bar import ProgressBar


__all__ = ['chunk_slices', 'run_chunks']


logger = logging.getLogger(__name__)

T = TypeVar('T')


def chunk_slices(n_items: int, chunk_size: int = DEFAULT_CHUNK_SIZE) -> list[slice]:
    if n_items < 0:
        raise ValueError(f'n_items must be >= 0, got {n_items}')
    if chunk_size < 1:
        raise ValueError(f'chunk_size must be >= 1, got {chunk_size}')
    return [slice(start, min(start + chunk_size, n_items)) for start in range(0, n_items, chunk_size)]


def run_chunks(
    fn: Callable[[slice, np.random.Generator], T],
    n_items: int,
    seed: SeedSpec | int,
    *,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    threads: int = 1,
    description: str = 'Simulating',
    progress: bool = False,
) -> list[T]:
    '''Run fn over fixed-size item chunks and return the results in chunk order.

    Chunk c always draws from seed.chunk(c), so the output depends on
    (seed, chunk_size) but not on the thread count.
    '''
    seed = SeedSpec.coerce(seed)
    slices = chunk_slices(n_items, chunk_size)
    workers = max(1, min(threads, len(slices)))
    logger.debug('%s: %d items in %d chunks on %d threads', description, n_items, len(slices), workers)
    results: list[T] = []
    with ProgressBar(total=len(slices), description=description, disable=not progress) as bar:
        if workers == 1:
            for c, sl in enumerate(slices):
                results.append(fn(sl, seed.chunk(c).generator()))
                bar.advance()
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(fn, sl, seed.chunk(c).generator()) for c, sl in enumerate(slices)]
                for future in futures:
                    results.append(future.result())
                    bar.advance()
    return results
