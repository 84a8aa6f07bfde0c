"""Count vectors, orbits, and sequence/count conversions.

A count vector records how many of the r draws landed on each of the d
outcomes; a sequence records the ordered draws themselves.  Both are plain
tuples of non-negative ints:

  CountVector = (n_1, ..., n_d)   with sum = r   (the "degree")
  Sequence    = (t_1, ..., t_r)   with each t_i in [0, d)

Every enumeration in the package uses one fixed total order on count
vectors of a given degree: lexicographic, descending (so the first
coordinate decreases first).  For r=2, d=2 that is (2,0), (1,1), (0,2).
"""

from __future__ import annotations

import math
from functools import lru_cache

from .errors import DomainError

CountVector = tuple[int, ...]
Sequence = tuple[int, ...]


def validate_counts(n: CountVector) -> None:
    """Raise DomainError unless n is a valid count vector."""
    if len(n) < 1:
        raise DomainError("count vector needs at least one outcome")
    if any(not isinstance(v, int) or v < 0 for v in n):
        raise DomainError(f"count vector entries must be non-negative integers: {n}")


def degree(n: CountVector) -> int:
    """Total number of draws recorded by the count vector."""
    return sum(n)


def num_compositions(r: int, d: int) -> int:
    """Number of count vectors of degree r over d outcomes: C(r+d-1, d-1)."""
    if d < 1:
        raise DomainError("d must be >= 1")
    if r < 0:
        raise DomainError("degree must be >= 0")
    return math.comb(r + d - 1, d - 1)


@lru_cache(maxsize=None)
def _compositions(r: int, d: int) -> tuple[CountVector, ...]:
    if d == 1:
        return ((r,),)
    out = []
    for v in range(r, -1, -1):
        for tail in _compositions(r - v, d - 1):
            out.append((v,) + tail)
    return tuple(out)


def compositions(r: int, d: int) -> list[CountVector]:
    """All count vectors of degree r over d outcomes, lex-descending.

    The list has num_compositions(r, d) elements, no duplicates, and is
    strictly decreasing under tuple comparison.
    """
    if d < 1:
        raise DomainError("d must be >= 1")
    if r < 0:
        raise DomainError("degree must be >= 0")
    return list(_compositions(r, d))


def orbit_size(n: CountVector) -> int:
    """Number of distinct sequences with counts n: r! / (n_1! ... n_d!).

    Exact for all inputs (Python integers do not overflow).
    """
    validate_counts(n)
    size = math.factorial(sum(n))
    for v in n:
        size //= math.factorial(v)
    return size


def sequence_to_counts(seq: Sequence, d: int) -> CountVector:
    """Count the occurrences of each outcome in an ordered sequence."""
    if d < 1:
        raise DomainError("d must be >= 1")
    counts = [0] * d
    for t in seq:
        if not 0 <= t < d:
            raise DomainError(f"outcome {t} out of range [0, {d})")
        counts[t] += 1
    return tuple(counts)


def rank(n: CountVector) -> int:
    """Position of n within compositions(degree(n), len(n))."""
    validate_counts(n)
    d = len(n)
    remaining = sum(n)
    k = 0
    for i in range(d - 1):
        # count vectors whose i-th coordinate exceeds n[i] (prefix fixed) come first
        slots = d - i - 1
        for v in range(remaining, n[i], -1):
            k += num_compositions(remaining - v, slots)
        remaining -= n[i]
    return k


def unrank(k: int, r: int, d: int) -> CountVector:
    """Inverse of rank: the k-th count vector of degree r over d outcomes."""
    if not 0 <= k < num_compositions(r, d):
        raise DomainError(f"rank {k} out of range for degree {r}, d={d}")
    out = []
    remaining = r
    for i in range(d - 1):
        slots = d - i - 1
        for v in range(remaining, -1, -1):
            block = num_compositions(remaining - v, slots)
            if k < block:
                out.append(v)
                remaining -= v
                break
            k -= block
    out.append(remaining)
    return tuple(out)


def sequences(r: int, d: int) -> list[Sequence]:
    """All d**r ordered sequences of length r, in row-major order."""
    if d < 1:
        raise DomainError("d must be >= 1")
    out: list[Sequence] = [()]
    for _ in range(r):
        out = [seq + (t,) for seq in out for t in range(d)]
    return out


def sequence_index(seq: Sequence, d: int) -> int:
    """Row-major position of a sequence in the d**r tensor basis."""
    idx = 0
    for t in seq:
        if not 0 <= t < d:
            raise DomainError(f"outcome {t} out of range [0, {d})")
        idx = idx * d + t
    return idx


def orbit_sequences(n: CountVector) -> list[Sequence]:
    """All distinct orderings of the multiset described by n."""
    validate_counts(n)
    d = len(n)
    out: list[Sequence] = []

    def extend(prefix: tuple[int, ...], left: list[int]) -> None:
        if sum(left) == 0:
            out.append(prefix)
            return
        for t in range(d):
            if left[t] > 0:
                left[t] -= 1
                extend(prefix + (t,), left)
                left[t] += 1

    extend((), list(n))
    return out
