"""Sequential (restaurant-style) sampling view of the partition law.

The one-step predictive rule is defined as the ratio of partition-law values
before and after seating the next observation, not taken on authority; the
sequential-product identity test pins it to the exact law.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import LogProb, Partition, PYParams, partition_from_allocations

__all__ = [
    "SeatingState",
    "crp_predictive",
    "crp_sample_partition",
    "sequential_log_prob",
    "sample_label_matrix",
]


@dataclass(frozen=True)
class SeatingState:
    """Sizes of currently occupied blocks, in the order they were opened."""

    block_sizes: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for s in self.block_sizes:
            if not isinstance(s, int) or s < 1:
                raise ValueError(f"block sizes must be integers >= 1, got {s!r}")

    @property
    def n_seated(self) -> int:
        return sum(self.block_sizes)

    @property
    def n_blocks(self) -> int:
        return len(self.block_sizes)


def crp_predictive(params: PYParams, state: SeatingState) -> np.ndarray:
    """Probabilities for the next observation: one entry per open block plus a
    final entry for opening a new block.

    Existing block j gets (size_j - d) / (alpha + n); a new block gets
    (alpha + k d) / (alpha + n).  The entries sum to one analytically since
    the block weights total n - k d.  The very first observation always opens
    a block, so the empty state returns [1.0].
    """
    k = state.n_blocks
    if k == 0:
        return np.array([1.0])
    denom = params.alpha + state.n_seated
    out = np.empty(k + 1)
    out[:k] = (np.asarray(state.block_sizes, dtype=float) - params.d) / denom
    out[k] = (params.alpha + k * params.d) / denom
    return out


def crp_sample_partition(params: PYParams, n: int, rng: np.random.Generator) -> Partition:
    """Draw one partition of [n] by seating observations 1..n sequentially.

    Identical seeds yield identical partitions.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    sizes: list[int] = []
    labels: list[int] = []
    for i in range(n):
        if i == 0:
            choice = 0
            sizes.append(1)
        else:
            # walk the unnormalized weights; total is exactly alpha + i
            target = rng.random() * (params.alpha + i)
            acc = 0.0
            choice = len(sizes)
            for j, s in enumerate(sizes):
                acc += s - params.d
                if target < acc:
                    choice = j
                    break
            if choice == len(sizes):
                sizes.append(1)
            else:
                sizes[choice] += 1
        labels.append(choice + 1)
    return partition_from_allocations(labels)


def sequential_log_prob(params: PYParams, partition: Partition) -> LogProb:
    """log of the product of one-step predictive probabilities accumulated by
    seating observations 1, ..., n into their blocks of `partition`.

    Because canonical blocks are ordered by least element, the canonical block
    order coincides with opening order along the walk.
    """
    block_of: dict[int, int] = {}
    for b, block in enumerate(partition.blocks):
        for e in block:
            block_of[e] = b
    seen_sizes = [0] * partition.num_blocks
    opened = 0
    total = 0.0
    for i in range(1, partition.n + 1):
        b = block_of[i]
        if seen_sizes[b] == 0:
            # the first observation opens its block with probability one
            if i > 1:
                total += math.log(params.alpha + opened * params.d)
                total -= math.log(params.alpha + i - 1)
            opened += 1
        else:
            total += math.log(seen_sizes[b] - params.d)
            total -= math.log(params.alpha + i - 1)
        seen_sizes[b] += 1
    return total


def sample_label_matrix(
    params: PYParams, n: int, trials: int, rng: np.random.Generator
) -> np.ndarray:
    """Vectorized restaurant sampler across independent trials.

    Returns a (trials, n) integer matrix whose rows are 0-based block labels
    in first-appearance order (a restricted growth string per row).  Row
    distributions match crp_sample_partition exactly; trials only share the
    random stream.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    alpha, d = params.alpha, params.d
    labels = np.zeros((trials, n), dtype=np.int64)
    counts = np.zeros((trials, n), dtype=float)
    counts[:, 0] = 1.0
    k = np.ones(trials, dtype=np.int64)
    rows = np.arange(trials)
    for i in range(1, n):
        w = counts[:, : i + 1] - d * (counts[:, : i + 1] > 0)
        np.put_along_axis(w, k[:, None], (alpha + k * d)[:, None], axis=1)
        csum = np.cumsum(w, axis=1)
        target = rng.random(trials) * (alpha + i)
        choice = (csum < target[:, None]).sum(axis=1)
        np.minimum(choice, k, out=choice)  # guard against rounding past the new-block column
        opened = choice == k
        labels[:, i] = choice
        counts[rows, choice] += 1.0
        k += opened
    return labels
