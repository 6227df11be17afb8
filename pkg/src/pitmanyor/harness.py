"""Monte Carlo experiments, comparison metrics, and partition text I/O.

Trials run in fixed-size vectorized batches whose random streams are spawned
from the base seed, one child stream per batch.  A batch's output depends
only on its own stream, and results are merged in batch order, so every
experiment is bit-reproducible for a given seed whether batches run serially
or on a process pool.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import Partition, PYParams, enumerate_partitions, partition_from_allocations
from .crp import sample_label_matrix
from .eppf import MAX_NORMALIZATION_N, eppf_log_prob
from .stickbreak import sample_partition_labels_batch

__all__ = [
    "SAMPLERS",
    "EmpiricalPartitionDist",
    "GrowthRecord",
    "format_partition",
    "parse_partition",
    "sample_partitions",
    "run_monte_carlo",
    "tv_distance",
    "growth_experiment",
    "MAX_GROWTH_N",
]

SAMPLERS = ("stick", "crp")
BATCH_TRIALS = 1 << 15
MAX_GROWTH_N = 100_000


def format_partition(partition: Partition) -> str:
    """Render canonical text: blocks joined by '|', elements by ','  (e.g. '1,3|2')."""
    return "|".join(",".join(str(e) for e in block) for block in partition.blocks)


def parse_partition(text: str) -> Partition:
    """Parse the '1,3|2' format, canonicalize, and validate the cover of 1..n."""
    blocks = []
    for chunk in text.split("|"):
        elems = []
        for token in chunk.split(","):
            token = token.strip()
            if not token:
                raise ValueError(f"empty element in partition spec {text!r}")
            try:
                elems.append(int(token))
            except ValueError:
                raise ValueError(f"bad element {token!r} in partition spec {text!r}") from None
        blocks.append(elems)
    return Partition.from_blocks(blocks)


@dataclass(frozen=True)
class EmpiricalPartitionDist:
    """Frequency table of sampled partitions, keyed by canonical partition."""

    counts: dict[Partition, int]
    trials: int
    seed: int
    params: PYParams
    sampler: str
    n: int

    def freq(self, partition: Partition) -> float:
        return self.counts.get(partition, 0) / self.trials


def _canonical_label_rows(z: np.ndarray) -> np.ndarray:
    """Relabel each row by first appearance (restricted growth form)."""
    trials, n = z.shape
    out = np.zeros_like(z)
    rows = np.arange(trials)
    for j in range(1, n):
        earlier = z[:, :j]
        match = earlier == z[:, j : j + 1]
        seen = match.any(axis=1)
        first = match.argmax(axis=1)
        high = out[:, :j].max(axis=1)
        out[:, j] = np.where(seen, out[rows, first], high + 1)
    return out


def _batch_plan(trials: int, seed: int):
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    n_batches = -(-trials // BATCH_TRIALS)
    children = np.random.SeedSequence(seed).spawn(n_batches)
    sizes = [BATCH_TRIALS] * (n_batches - 1)
    sizes.append(trials - BATCH_TRIALS * (n_batches - 1))
    return list(zip(children, sizes))


def _batch_labels(params, n, size, sampler, child):
    """Canonical 0-based label matrix for one batch stream."""
    rng = np.random.default_rng(child)
    if sampler == "stick":
        return _canonical_label_rows(sample_partition_labels_batch(params, n, size, rng))
    return sample_label_matrix(params, n, size, rng)


def _batch_tally(args):
    params, n, size, sampler, child = args
    labels = _batch_labels(params, n, size, sampler, child)
    rows, counts = np.unique(labels, axis=0, return_counts=True)
    return [(tuple(int(v) for v in row), int(c)) for row, c in zip(rows, counts)]


def _label_batches(params, n, trials, sampler, seed):
    """Yield canonical 0-based label matrices, one per spawned batch stream."""
    if sampler not in SAMPLERS:
        raise ValueError(f"sampler must be one of {SAMPLERS}, got {sampler!r}")
    for child, size in _batch_plan(trials, seed):
        yield _batch_labels(params, n, size, sampler, child)


def sample_partitions(
    params: PYParams, n: int, trials: int, sampler: str, seed: int
) -> list[Partition]:
    """Sampled partitions in sampling order; deterministic for a given seed."""
    if n > MAX_NORMALIZATION_N:
        raise ValueError(f"n must be at most {MAX_NORMALIZATION_N}, got {n}")
    out: list[Partition] = []
    for labels in _label_batches(params, n, trials, sampler, seed):
        rows, inverse = np.unique(labels, axis=0, return_inverse=True)
        parts = [partition_from_allocations([int(v) + 1 for v in row]) for row in rows]
        out.extend(parts[i] for i in np.ravel(inverse))
    return out


def run_monte_carlo(
    params: PYParams, n: int, trials: int, sampler: str, seed: int, workers: int | None = None
) -> EmpiricalPartitionDist:
    """Tabulate sampled partitions of [n]; n is capped so the frequency table
    stays comparable against exhaustive enumeration.

    Batches are distributed over a process pool (`workers` defaults to the
    CPU count).  Each batch depends only on its own spawned stream and merge
    order is fixed, so the result is identical however batches are scheduled.
    """
    if sampler not in SAMPLERS:
        raise ValueError(f"sampler must be one of {SAMPLERS}, got {sampler!r}")
    if n > MAX_NORMALIZATION_N:
        raise ValueError(
            f"n must be at most {MAX_NORMALIZATION_N} for exact comparison, got {n}"
        )
    plan = _batch_plan(trials, seed)
    jobs = [(params, n, size, sampler, child) for child, size in plan]
    if workers is None:
        workers = min(os.cpu_count() or 1, len(jobs))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batch_tallies = list(pool.map(_batch_tally, jobs))
    else:
        batch_tallies = [_batch_tally(job) for job in jobs]
    tally: dict[tuple, int] = {}
    for part in batch_tallies:
        for key, count in part:
            tally[key] = tally.get(key, 0) + count
    counts = {
        partition_from_allocations([v + 1 for v in key]): count
        for key, count in sorted(tally.items())
    }
    return EmpiricalPartitionDist(counts, trials, seed, params, sampler, n)


def tv_distance(emp: EmpiricalPartitionDist, params: PYParams | None = None) -> float:
    """Total variation distance between the empirical table and the exact law:
    half the L1 gap summed over every partition of [n], sampled or not.

    `params` defaults to the parameters the table was sampled under and, if
    given, must match them; comparing a table against a different law is
    almost always a bug.
    """
    if params is None:
        params = emp.params
    elif params != emp.params:
        raise ValueError(
            f"parameter mismatch: table sampled under {emp.params}, asked for {params}"
        )
    if emp.n > MAX_NORMALIZATION_N:
        raise ValueError(f"n must be at most {MAX_NORMALIZATION_N}, got {emp.n}")
    gap = 0.0
    for partition in enumerate_partitions(emp.n):
        exact = math.exp(eppf_log_prob(params, partition))
        gap += abs(emp.counts.get(partition, 0) / emp.trials - exact)
    return 0.5 * gap


@dataclass(frozen=True)
class GrowthRecord:
    """Monte Carlo mean block count at one sample size."""

    n: int
    mean_kn: float
    se: float
    trials: int


def growth_experiment(
    params: PYParams, n_grid: list[int], trials: int, seed: int
) -> tuple[list[GrowthRecord], float]:
    """Mean block count along n_grid, plus the least-squares slope of
    log(mean) against log(n) fitted on the upper half of the grid (the lower
    half is dropped to reduce pre-asymptotic bias).

    Only the block-count chain is simulated: under the sequential predictive
    the chance of opening block k+1 after i observations is
    (alpha + k d)/(alpha + i), which depends on the state only through the
    block count, so the chain has exactly the law of the block count of a
    full restaurant run (the tests cross-check this against the full
    sampler).  That keeps the experiment cheap at n = 10^5.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    grid = list(n_grid)
    if len(grid) < 1 or any(not isinstance(v, int) or v < 1 for v in grid):
        raise ValueError(f"degenerate grid {n_grid!r}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError(f"grid must be strictly increasing, got {n_grid!r}")
    if grid[-1] > MAX_GROWTH_N:
        raise ValueError(f"grid exceeds the {MAX_GROWTH_N} ceiling: {n_grid!r}")

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    wanted = set(grid)
    k = np.ones(trials)
    records = []

    def snapshot(n_now: int) -> None:
        se = float(k.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
        records.append(GrowthRecord(n_now, float(k.mean()), se, trials))

    if 1 in wanted:
        snapshot(1)
    for i in range(1, grid[-1]):
        p_new = (params.alpha + k * params.d) / (params.alpha + i)
        k += rng.random(trials) < p_new
        if (i + 1) in wanted:
            snapshot(i + 1)

    if len(records) >= 2:
        cut = min(len(records) - 2, len(records) // 2)
        xs = np.log([r.n for r in records[cut:]])
        ys = np.log([r.mean_kn for r in records[cut:]])
        exponent = float(np.polyfit(xs, ys, 1)[0])
    else:
        exponent = float("nan")
    return records, exponent
