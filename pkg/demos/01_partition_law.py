"""Evaluating the two-parameter partition law.

A draw from the process clusters observations 1..n into a random partition.
This script evaluates the law exactly (in log space), checks that it is a
probability distribution by exhaustive enumeration, and shows the Dirichlet
special case at d = 0.
"""

import math

from pitmanyor import (
    Partition,
    PYParams,
    dp_log_prob,
    enumerate_partitions,
    eppf_log_prob,
    format_partition,
    normalization_check,
)

params = PYParams(alpha=1.0, d=0.5)

print(f"alpha = {params.alpha}, d = {params.d}")
print()
print("All partitions of [3] and their probabilities:")
for partition in enumerate_partitions(3):
    prob = math.exp(eppf_log_prob(params, partition))
    print(f"  {format_partition(partition):<12} {prob:.6f}")

# The five probabilities above must sum to one; the same holds for any n.
for n in (3, 6, 8):
    total = normalization_check(params, n)
    print(f"sum over all partitions of [{n}]: {total:.15f}")
print()

# The law depends only on block sizes: any two partitions with the same size
# multiset get identical probability (here both are a pair plus a singleton).
a = Partition.from_blocks([[1, 2], [3]])
b = Partition.from_blocks([[1, 3], [2]])
print("exchangeability:",
      eppf_log_prob(params, a) == eppf_log_prob(params, b))
print()

# d = 0 is the Dirichlet (one-parameter) case; the dedicated evaluator and
# the general one agree there by construction.
dp_params = PYParams(alpha=2.0, d=0.0)
partition = Partition.from_blocks([[1, 2], [3]])
print("Dirichlet branch at alpha=2, partition 1,2|3:")
print(f"  general evaluator: {math.exp(eppf_log_prob(dp_params, partition)):.10f}")
print(f"  dedicated branch:  {math.exp(dp_log_prob(2.0, partition)):.10f}")

# Negative concentration is fine as long as alpha > -d.
neg = PYParams(alpha=-0.3, d=0.5)
print()
print(f"alpha = {neg.alpha}, d = {neg.d} (negative concentration):")
print(f"  sum over partitions of [6]: {normalization_check(neg, 6):.15f}")
