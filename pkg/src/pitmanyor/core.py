"""Shared numeric and combinatorial primitives.

Parameter validation, canonical set partitions, log-space rising factorials
and exhaustive partition enumeration.  Everything here is a pure function and
safe to call from any number of threads.
"""

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

__all__ = [
    "LogProb",
    "PYParams",
    "Partition",
    "log_rising_factorial",
    "enumerate_partitions",
    "partition_from_allocations",
    "MAX_ENUMERATION_N",
]

# Log-domain probability: a float <= 0, with -inf marking an impossible event.
LogProb = float

# Bell(12) = 4,213,597 is the practical ceiling for exhaustive enumeration.
MAX_ENUMERATION_N = 12

# Below this the rising factorial is a direct sum of logs (exact for the small
# arguments that dominate the test paths); above it, a log-gamma difference.
_LGAMMA_CROSSOVER = 64


@dataclass(frozen=True)
class PYParams:
    """Concentration alpha and discount d of the two-parameter clustering prior.

    Valid range: 0 <= d < 1 and alpha > -d.  d = 0 selects the one-parameter
    (Dirichlet) special case, which forces alpha > 0.
    """

    alpha: float
    d: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and math.isfinite(self.d)):
            raise ValueError("alpha and d must be finite numbers")
        if not 0.0 <= self.d < 1.0:
            raise ValueError(f"discount d must lie in [0, 1), got {self.d}")
        if not self.alpha > -self.d:
            raise ValueError(
                f"alpha must exceed -d, got alpha={self.alpha}, d={self.d}"
            )

    @property
    def is_dirichlet(self) -> bool:
        return self.d == 0.0


@dataclass(frozen=True)
class Partition:
    """Set partition of {1, ..., n} in canonical form.

    Blocks are ordered by their least element and each block is strictly
    increasing, so equality is structural and instances work as dict keys
    for empirical frequency counting.
    """

    blocks: tuple[tuple[int, ...], ...]
    n: int

    def __post_init__(self) -> None:
        seen: set[int] = set()
        prev_least = 0
        for block in self.blocks:
            if not block:
                raise ValueError("blocks must be nonempty")
            if block[0] <= prev_least:
                raise ValueError("blocks must be ordered by least element")
            prev_least = block[0]
            last = 0
            for e in block:
                if not isinstance(e, int) or e < 1:
                    raise ValueError(f"elements must be integers >= 1, got {e!r}")
                if e <= last:
                    raise ValueError("block elements must be strictly increasing")
                last = e
                if e in seen:
                    raise ValueError(f"element {e} appears in more than one block")
                seen.add(e)
        if seen != set(range(1, self.n + 1)):
            raise ValueError(f"blocks must cover 1..{self.n} exactly")

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[int]]) -> "Partition":
        """Canonicalize arbitrary block order / element order and validate."""
        sorted_blocks = sorted((sorted(b) for b in blocks), key=lambda b: b[0] if b else 0)
        n = sum(len(b) for b in sorted_blocks)
        return cls(tuple(tuple(b) for b in sorted_blocks), n)

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)


def log_rising_factorial(x: float, n: int) -> float:
    """log of x * (x+1) * ... * (x+n-1); the empty product (n = 0) gives 0.

    Every factor must be strictly positive.  Callers are expected to have
    cancelled any non-positive leading factor beforehand (see the partition
    law evaluator), so a non-positive factor here is a domain error.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n == 0:
        return 0.0
    if n <= _LGAMMA_CROSSOVER:
        total = 0.0
        for j in range(n):
            factor = x + j
            if factor <= 0.0:
                raise ValueError(f"nonpositive factor {factor} at x={x}, j={j}")
            total += math.log(factor)
        return total
    if x <= 0.0:
        raise ValueError(f"x must be positive for large n, got x={x}")
    return math.lgamma(x + n) - math.lgamma(x)


def partition_from_allocations(z: Sequence[int]) -> Partition:
    """Partition of [n] grouping equal labels: i, j share a block iff z_i = z_j.

    Label values are irrelevant beyond equality, so any injective relabeling
    of z yields the same partition.
    """
    if len(z) == 0:
        raise ValueError("allocation vector must be nonempty")
    blocks: dict[int, list[int]] = {}
    for i, label in enumerate(z, start=1):
        if label < 1:
            raise ValueError(f"labels must be >= 1, got {label}")
        blocks.setdefault(label, []).append(i)
    # first-appearance grouping already orders blocks by least element
    ordered = sorted(blocks.values(), key=lambda b: b[0])
    return Partition(tuple(tuple(b) for b in ordered), len(z))


def enumerate_partitions(n: int) -> Iterator[Partition]:
    """Yield every set partition of [n] exactly once, in canonical form.

    Generation walks restricted growth strings (first label fixed, each next
    label at most one above the running maximum), which produces canonical
    representatives directly.  Lazily evaluated; each iterator instance is
    single-consumer.
    """
    if not isinstance(n, int) or not 1 <= n <= MAX_ENUMERATION_N:
        raise ValueError(
            f"n must be an integer in 1..{MAX_ENUMERATION_N}, got {n!r}"
        )

    blocks: list[list[int]] = []

    def grow(i: int) -> Iterator[Partition]:
        if i > n:
            yield Partition(tuple(tuple(b) for b in blocks), n)
            return
        for j in range(len(blocks)):
            blocks[j].append(i)
            yield from grow(i + 1)
            blocks[j].pop()
        blocks.append([i])
        yield from grow(i + 1)
        blocks.pop()

    yield from grow(1)
