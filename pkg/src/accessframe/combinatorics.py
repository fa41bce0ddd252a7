"""Exact combinatorial primitives: binomials, falling factorials,
2-associated Stirling numbers, and the hypergeometric pmf.

Everything here is integer or rational arithmetic on Python ints, so
results are exact at any magnitude.  Counts are plain ``int``;
probabilities are ``fractions.Fraction`` and therefore always reduced.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

__all__ = [
    "binomial",
    "falling_factorial",
    "StirlingTable",
    "stirling2_assoc",
    "hypergeometric_pmf",
]


def binomial(n: int, k: int) -> int:
    """Binomial coefficient C(n, k), with C(n, k) = 0 for k < 0 or k > n."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def falling_factorial(t: int, s: int) -> int:
    """Product of the s descending terms t * (t-1) * ... * (t-s+1).

    The empty product (s = 0) is 1; once a factor reaches zero (s > t)
    the result is 0.
    """
    if t < 0 or s < 0:
        raise ValueError(f"arguments must be non-negative, got ({t}, {s})")
    return math.perm(t, s)


class StirlingTable:
    """Lazily grown table of 2-associated Stirling numbers of the second kind.

    ``value(n, k)`` counts the partitions of an n-element set into exactly
    k blocks, each holding at least two elements.  Interior values follow

        S(n + 1, k) = k * S(n, k) + n * S(n - 1, k - 1)

    and S(n, k) = 0 whenever k > floor(n / 2), n <= 0 or k <= 0, with the
    single exception S(0, 0) = 1 (the empty partition).  That exception is
    what lets the recurrence reproduce S(2, 1) = 1 and keeps distributions
    built on these counts normalized.

    Growth is monotone and idempotent.  New rows are staged in a local
    dict and published with a single ``dict.update`` before ``max_n`` is
    advanced, so concurrent readers observe either the old or the new
    complete state (grow-then-publish); reads never block.
    """

    def __init__(self) -> None:
        self._entries: dict[tuple[int, int], int] = {}
        self._max_n = 1  # rows 0 and 1 contain no interior entries

    @property
    def max_n(self) -> int:
        """Highest n for which all interior entries are materialized."""
        return self._max_n

    @property
    def entries(self) -> dict[tuple[int, int], int]:
        """Copy of the stored interior entries (all are positive)."""
        return dict(self._entries)

    def value(self, n: int, k: int) -> int:
        if n == 0 and k == 0:
            return 1
        if n <= 0 or k <= 0 or k > n // 2:
            return 0
        if n > self._max_n:
            self._grow(n)
        return self._entries[(n, k)]

    def _grow(self, n: int) -> None:
        staged: dict[tuple[int, int], int] = {}

        def get(r: int, k: int) -> int:
            if r == 0 and k == 0:
                return 1
            if r <= 0 or k <= 0 or k > r // 2:
                return 0
            if (r, k) in staged:
                return staged[(r, k)]
            return self._entries[(r, k)]

        for r in range(self._max_n + 1, n + 1):
            for k in range(1, r // 2 + 1):
                staged[(r, k)] = k * get(r - 1, k) + (r - 1) * get(r - 2, k - 1)
        self._entries.update(staged)
        self._max_n = max(self._max_n, n)

    def to_json(self) -> str:
        """Serialize as decimal strings (test-fixture friendly)."""
        payload = {
            "max_n": self._max_n,
            "entries": {f"{n},{k}": str(v) for (n, k), v in sorted(self._entries.items())},
        }
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "StirlingTable":
        payload = json.loads(text)
        table = cls()
        for key, dec in payload["entries"].items():
            n_str, k_str = key.split(",")
            table._entries[(int(n_str), int(k_str))] = int(dec)
        table._max_n = int(payload["max_n"])
        return table


_SHARED_TABLE = StirlingTable()


def stirling2_assoc(n: int, k: int, table: StirlingTable | None = None) -> int:
    """Number of partitions of an n-set into k blocks of size at least two.

    Out-of-range (n, k) return 0 per the boundary rules on
    :class:`StirlingTable`; results are memoized into ``table`` (a shared
    module-level table when omitted).
    """
    return (_SHARED_TABLE if table is None else table).value(n, k)


def hypergeometric_pmf(s: int, c: int, k: int, d: int) -> Fraction:
    """Probability of drawing exactly d of the s marked items when k items
    are drawn without replacement from a pool of s + c.

    Exact value C(s, d) * C(c, k - d) / C(s + c, k); zero outside the
    support max(0, k - c) <= d <= min(s, k).  Drawing the whole pool
    (k = s + c) leaves d = s as the only outcome.
    """
    if s < 0 or c < 0 or k < 0:
        raise ValueError(f"s, c, k must be non-negative, got ({s}, {c}, {k})")
    if k > s + c:
        raise ValueError(f"cannot draw {k} items from a pool of {s + c}")
    numerator = binomial(s, d) * binomial(c, k - d)
    if numerator == 0:
        return Fraction(0)
    return Fraction(numerator, binomial(s + c, k))
