"""Counter-based random streams and batch statistics."""
from typing import Callable, List, NamedTuple, TypeVar

import numpy as np

from ..utils.parallel import ordered_map
from .config import MonteCarloConfig

T = TypeVar("T")


class Estimate(NamedTuple):
    value: float
    stderr: float


def block_generator(seed: int, block: int) -> np.random.Generator:
    """Philox stream for one block of draws.

    The block index occupies the top counter word, so streams of different
    blocks never overlap and depend only on (seed, block).
    """
    return np.random.Generator(np.random.Philox(key=int(seed), counter=int(block) << 192))


def block_ranges(mc: MonteCarloConfig) -> List[range]:
    n, size = mc.n_samples, mc.block_size
    return [range(start, min(start + size, n)) for start in range(0, n, size)]


def map_blocks(func: Callable[[np.random.Generator, range], T], mc: MonteCarloConfig) -> List[T]:
    """Run ``func(rng, draws)`` for every block, results in block order."""
    blocks = block_ranges(mc)
    return ordered_map(lambda b: func(block_generator(mc.seed, b[0]), b[1]),
                       list(enumerate(blocks)), mc.workers)


def batch_index(draws: np.ndarray, n_samples: int, n_batches: int) -> np.ndarray:
    return (np.asarray(draws, dtype=np.int64) * n_batches) // n_samples


def batch_counts(n_samples: int, n_batches: int) -> np.ndarray:
    return np.bincount(batch_index(np.arange(n_samples), n_samples, n_batches), minlength=n_batches)


def batch_estimates(per_draw_total: np.ndarray, draws: np.ndarray, n_samples: int,
                    n_batches: int) -> np.ndarray:
    """Mean contribution per draw within each contiguous batch."""
    idx = batch_index(draws, n_samples, n_batches)
    sums = np.bincount(idx, weights=per_draw_total, minlength=n_batches)
    return sums / batch_counts(n_samples, n_batches)


def batch_means(per_draw_total: np.ndarray, draws: np.ndarray, n_samples: int,
                n_batches: int) -> Estimate:
    """Mean per draw and its batch-means standard error.

    Args:
        per_draw_total (np.ndarray): Contributions, several may share a draw.
        draws (np.ndarray): Draw index of each contribution.
        n_samples (int): Total number of draws (including empty ones).
        n_batches (int): Number of contiguous batches.
    """
    means = batch_estimates(per_draw_total, draws, n_samples, n_batches)
    value = float(np.sum(per_draw_total) / n_samples)
    stderr = float(np.std(means, ddof=1) / np.sqrt(n_batches))
    return Estimate(value, stderr)
