"""Exact combinatorial number kernel.

Binomials follow the convention that a coefficient is zero as soon as either parameter
is negative, so ``binomial(-1, 0) == 0``. Stirling numbers of both kinds come from
memoized triangular tables that grow on demand and are safe to share between threads.
"""

import logging
import math
import threading
from typing import Callable

from app.errors import ParameterRangeError

logger = logging.getLogger(__name__)


def binomial(n: int, k: int) -> int:
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def factorial(n: int) -> int:
    if n < 0:
        raise ParameterRangeError(f"factorial of negative number {n}")
    return math.factorial(n)


def falling(x: int, k: int) -> int:
    """x(x-1)...(x-k+1), the empty product when k == 0."""
    if k < 0:
        raise ParameterRangeError(f"falling factorial needs k >= 0, got {k}")
    return math.prod(x - i for i in range(k))


def rising(x: int, k: int) -> int:
    """x(x+1)...(x+k-1), the empty product when k == 0."""
    if k < 0:
        raise ParameterRangeError(f"rising factorial needs k >= 0, got {k}")
    return math.prod(x + i for i in range(k))


class StirlingTable:
    """Triangular table for a recurrence T(m+1, k) = T(m, k-1) + w(m, k) * T(m, k).

    Row ``m`` stores T(m, 0..m). Rows are appended under a lock; a row never changes
    once appended, so lookups of existing rows need no locking.
    """

    def __init__(self, name: str, weight: Callable[[int, int], int]) -> None:
        self.name = name
        self._weight = weight
        self._rows: list[list[int]] = [[1]]
        self._lock = threading.Lock()

    def __call__(self, n: int, k: int) -> int:
        if n < 0 or k < 0 or k > n:
            return 0
        if n >= len(self._rows):
            self._grow(n)
        return self._rows[n][k]

    def _grow(self, n: int) -> None:
        with self._lock:
            start = len(self._rows)
            while len(self._rows) <= n:
                m = len(self._rows) - 1
                prev = self._rows[m]
                row = [0] * (m + 2)
                for k in range(1, m + 2):
                    below = prev[k] if k <= m else 0
                    row[k] = prev[k - 1] + self._weight(m, k) * below
                self._rows.append(row)
            if len(self._rows) > start:
                logger.debug("%s table grown to %d rows", self.name, len(self._rows))


# {m+1, k} = {m, k-1} + k {m, k}
_partition_table = StirlingTable("stirling_partition", lambda m, k: k)
# [m+1, k] = [m, k-1] + m [m, k]
_cycle_table = StirlingTable("stirling_cycle", lambda m, k: m)


def stirling_partition(n: int, k: int) -> int:
    """Number of partitions of an n-set into k nonempty blocks (second kind)."""
    return _partition_table(n, k)


def stirling_cycle(n: int, k: int) -> int:
    """Number of permutations of an n-set with exactly k cycles (unsigned first kind)."""
    return _cycle_table(n, k)


def surjection_count(n: int, r: int) -> int:
    """Ordered partitions of an n-set into r nonempty blocks, r! {n, r}."""
    if r < 0:
        return 0
    return factorial(r) * stirling_partition(n, r)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| by trial division; factorize(1) == {}."""
    if n == 0:
        raise ParameterRangeError("cannot factorize 0")
    n = abs(n)
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def p_adic_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ParameterRangeError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v
