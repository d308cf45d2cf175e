"""Partition counts by two independent methods: explicit enumeration and DP.

Neither method touches the q-series engine, so they serve as oracles for it.
"""

from __future__ import annotations

from enum import Enum

from .errors import EnumerationLimitError

ENUM_LIMIT = 40


class PartitionClass(Enum):
    NOT_DIV_4 = "parts not divisible by 4"
    MOD5_PM1 = "parts congruent to 1 or 4 mod 5"
    MOD5_PM2 = "parts congruent to 2 or 3 mod 5"
    SUPERDISTINCT = "distinct parts with pairwise gaps at least 2"
    SUPERDISTINCT_MIN2 = "distinct parts with gaps at least 2, smallest part at least 2"

    @property
    def tag(self) -> str:
        return self.name

    @property
    def description(self) -> str:
        return self.value


_ALLOWED_PART = {
    PartitionClass.NOT_DIV_4: lambda p: p % 4 != 0,
    PartitionClass.MOD5_PM1: lambda p: p % 5 in (1, 4),
    PartitionClass.MOD5_PM2: lambda p: p % 5 in (2, 3),
}


def parse_class(name: str) -> PartitionClass:
    try:
        return PartitionClass[name.upper()]
    except KeyError:
        raise ValueError(f"unknown partition class {name!r}; expected one of "
                         f"{[c.name for c in PartitionClass]}") from None


def count_dp(c: PartitionClass, N: int) -> list[int]:
    """Counts for ``n = 0..N``."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if c in _ALLOWED_PART:
        # product of 1/(1 - q^p) over allowed parts p
        ok = _ALLOWED_PART[c]
        counts = [1] + [0] * N
        for p in range(1, N + 1):
            if ok(p):
                for n in range(p, N + 1):
                    counts[n] += counts[n - p]
        return counts
    # last[n][m]: partitions of n with gaps >= 2 whose largest part is exactly m
    smallest = 2 if c is PartitionClass.SUPERDISTINCT_MIN2 else 1
    last = [[0] * (N + 1) for _ in range(N + 1)]
    # below[n][m] = sum of last[n][j] for j <= m, plus the empty partition at n = 0
    below = [[0] * (N + 1) for _ in range(N + 1)]
    below[0] = [1] * (N + 1)
    for n in range(1, N + 1):
        for m in range(smallest, n + 1):
            rest = n - m
            if rest == 0:
                last[n][m] = 1
            elif m >= 2:
                last[n][m] = below[rest][m - 2]
        acc = 0
        for m in range(N + 1):
            acc += last[n][m]
            below[n][m] = acc
    return [1] + [below[n][N] for n in range(1, N + 1)]


def _admissible(c: PartitionClass, parts: list[int]) -> bool:
    if c in _ALLOWED_PART:
        return all(_ALLOWED_PART[c](p) for p in parts)
    if any(a - b < 2 for a, b in zip(parts, parts[1:])):
        return False
    return not (c is PartitionClass.SUPERDISTINCT_MIN2 and parts and parts[-1] < 2)


def _partitions(n: int, largest: int):
    """All partitions of ``n`` into parts ``<= largest``, parts non-increasing."""
    if n == 0:
        yield []
        return
    for p in range(min(n, largest), 0, -1):
        for rest in _partitions(n - p, p):
            yield [p] + rest


def count_enumerate(c: PartitionClass, n: int, limit: int = ENUM_LIMIT) -> int:
    """Count by listing every partition of ``n`` and filtering."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > limit:
        raise EnumerationLimitError(f"n = {n} exceeds the enumeration limit {limit}")
    return sum(1 for parts in _partitions(n, n) if _admissible(c, parts))
