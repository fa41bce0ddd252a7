"""Closed-form distribution of data-phase successes in one access frame.

Model: ``users`` stations each activate one of ``tokens`` contention
tokens uniformly and independently.  The base station only sees which
tokens are active (not how many users chose each), grants a uniformly
random subset of min(active, data_slots) of them a data slot, and a
granted token delivers its packet iff exactly one user activated it.

:func:`success_pmf` evaluates the exact distribution of the number of
delivered packets per frame by summing, over every split of the active
tokens into s singles and c collisions, the probability of that split
times the hypergeometric probability that d of the granted slots land on
singles.  All reference-path arithmetic is exact rational; the terms of
the sum span many orders of magnitude and exact normalization is part of
the contract.  :func:`success_pmf_float` is an optional log-domain fast
path for configurations where big-rational arithmetic gets slow.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from operator import index as as_int

from .combinatorics import (
    StirlingTable,
    binomial,
    falling_factorial,
    stirling2_assoc,
)

__all__ = [
    "SystemConfig",
    "ContentionOutcome",
    "PmfKind",
    "SuccessPmf",
    "PrecisionLossError",
    "outcome_probability",
    "success_pmf",
    "success_pmf_float",
    "DEFAULT_LOG_BUDGET",
]


@dataclass(frozen=True)
class SystemConfig:
    """One access-frame scenario: tokens M, data slots K, users T.

    M and K are free of any ordering constraint; the analysis holds for
    M > K and M <= K alike.
    """

    tokens: int
    data_slots: int
    users: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "tokens", as_int(self.tokens))
        object.__setattr__(self, "data_slots", as_int(self.data_slots))
        object.__setattr__(self, "users", as_int(self.users))
        if self.tokens < 1:
            raise ValueError(f"tokens must be >= 1, got {self.tokens}")
        if self.data_slots < 1:
            raise ValueError(f"data_slots must be >= 1, got {self.data_slots}")
        if self.users < 0:
            raise ValueError(f"users must be >= 0, got {self.users}")

    @property
    def max_successes(self) -> int:
        """Largest possible number of data-phase successes."""
        return min(self.tokens, self.data_slots, self.users)

    @property
    def frame_slots(self) -> int:
        """Total frame length: one contention slot plus the data slots."""
        return self.data_slots + 1


@dataclass(frozen=True)
class ContentionOutcome:
    """A realized contention split: ``singles`` tokens picked by exactly
    one user, ``collisions`` tokens picked by two or more."""

    config: SystemConfig
    singles: int
    collisions: int

    def __post_init__(self) -> None:
        s, c = self.singles, self.collisions
        if s < 0 or c < 0:
            raise ValueError("singles and collisions must be non-negative")
        if s + c > self.config.tokens:
            raise ValueError(
                f"{s} singles + {c} collisions exceed {self.config.tokens} tokens"
            )
        if s > self.config.users or s + 2 * c > self.config.users:
            raise ValueError(
                f"split ({s}, {c}) needs more than {self.config.users} users"
            )

    @property
    def slots_drawn(self) -> int:
        """Tokens actually granted a slot: min(active, data_slots)."""
        return min(self.singles + self.collisions, self.config.data_slots)

    @property
    def max_active(self) -> int:
        """Upper bound on active tokens, min(tokens, users)."""
        return min(self.config.tokens, self.config.users)

    def probability(self, table: StirlingTable | None = None) -> Fraction:
        return outcome_probability(self.config, self.singles, self.collisions, table)

    @classmethod
    def from_counts(cls, config: SystemConfig, counts) -> "ContentionOutcome":
        """Build from per-token user counts (e.g. a simulated frame)."""
        counts = list(counts)
        if len(counts) != config.tokens or sum(counts) != config.users:
            raise ValueError("counts must cover every token and sum to users")
        return cls(
            config,
            singles=sum(1 for n in counts if n == 1),
            collisions=sum(1 for n in counts if n >= 2),
        )


class PmfKind(str, Enum):
    EXACT = "exact"
    FLOAT = "float"
    EMPIRICAL = "empirical"


class PrecisionLossError(ArithmeticError):
    """The log-domain path cannot certify the requested accuracy."""


#: Largest log magnitude any intermediate quantity may reach on the
#: float path.  A mass's relative error is bounded by the absolute
#: error of its terms' log representations, which grows with machine
#: epsilon times the largest log magnitude handled times the depth of
#: the partition-count recurrence.  1e3 keeps every mass within the
#: 1e-10 relative-error contract with at least 4x margin, measured
#: against the exact path at the budget boundary.
DEFAULT_LOG_BUDGET = 1.0e3


def outcome_probability(
    config: SystemConfig,
    singles: int,
    collisions: int,
    table: StirlingTable | None = None,
) -> Fraction:
    """Exact probability that contention splits the active tokens into
    exactly ``singles`` single-user tokens and ``collisions`` multi-user
    tokens.

    Infeasible splits (for example singles + 2*collisions > users) have
    probability zero; a split claiming more tokens than exist is an error.
    """
    if singles < 0 or collisions < 0:
        raise ValueError("singles and collisions must be non-negative")
    if singles + collisions > config.tokens:
        raise ValueError(
            f"{singles} + {collisions} active tokens exceed {config.tokens}"
        )
    weight = _outcome_weight(config, singles, collisions, table)
    if weight == 0:
        return Fraction(0)
    return Fraction(weight, config.tokens**config.users)


def _outcome_weight(
    config: SystemConfig, s: int, c: int, table: StirlingTable | None = None
) -> int:
    """Number of user-to-token assignments realizing the split (s, c)."""
    t = config.users
    return (
        binomial(config.tokens, s)
        * falling_factorial(t, s)
        * binomial(config.tokens - s, c)
        * stirling2_assoc(t - s, c, table)
        * math.factorial(c)
    )


def success_pmf(config: SystemConfig, table: StirlingTable | None = None) -> "SuccessPmf":
    """Exact pmf of the number of data-phase successes, over
    d = 0 .. min(tokens, data_slots, users).

    Every mass is accumulated as integers over one common denominator and
    reduced once, so the result is exact however wildly the terms differ
    in magnitude.  With no users the pmf is a point mass at zero.
    """
    t, big_m, big_k = config.users, config.tokens, config.data_slots
    m = min(big_m, t)

    # (weight, s, c, draw size, subset count) for every split that can occur
    terms: list[tuple[int, int, int, int, int]] = []
    for s in range(m + 1):
        for c in range(m - s + 1):
            weight = _outcome_weight(config, s, c, table)
            if weight == 0:
                continue
            k = min(s + c, big_k)
            terms.append((weight, s, c, k, math.comb(s + c, k)))

    common = math.lcm(*(subsets for *_rest, subsets in terms)) if terms else 1
    acc = [0] * (config.max_successes + 1)
    for weight, s, c, k, subsets in terms:
        scale = weight * (common // subsets)
        for d in range(max(0, k - c), min(s, k) + 1):
            acc[d] += scale * math.comb(s, d) * math.comb(c, k - d)

    denominator = big_m**t * common
    mass = tuple(Fraction(a, denominator) for a in acc)
    return SuccessPmf(config=config, mass=mass, kind=PmfKind.EXACT)


def success_pmf_float(
    config: SystemConfig, log_budget: float = DEFAULT_LOG_BUDGET
) -> "SuccessPmf":
    """Log-domain evaluation of the same pmf in float arithmetic.

    Every factor is carried as a log (lgamma for binomials and falling
    factorials, a log-space recurrence for the partition counts), terms
    are exponentiated and summed per mass.  Raises
    :class:`PrecisionLossError` when any term's log magnitude exceeds
    ``log_budget``, beyond which the usual 1e-10 relative agreement with
    :func:`success_pmf` can no longer be certified.
    """
    t, big_m, big_k = config.users, config.tokens, config.data_slots
    m = min(big_m, t)
    log_assignments = t * math.log(big_m)
    if log_assignments > log_budget:
        raise PrecisionLossError(
            f"log magnitude {log_assignments:.3g} exceeds budget "
            f"{log_budget:.3g}; use the exact path"
        )

    mass = [0.0] * (config.max_successes + 1)
    worst = log_assignments
    for s in range(m + 1):
        lg_choose_singles, mag1 = _log_binomial(big_m, s)
        lg_pick_users, mag2 = _log_falling(t, s)
        for c in range(m - s + 1):
            lg_part = _log_stirling2(t - s, c)
            if lg_part == -math.inf:
                continue
            lg_collided, mag3 = _log_binomial(big_m - s, c)
            lg_weight = (
                lg_choose_singles
                + lg_pick_users
                + lg_collided
                + lg_part
                + math.lgamma(c + 1)
            )
            k = min(s + c, big_k)
            lg_subsets, mag4 = _log_binomial(s + c, k)
            lg_denom = log_assignments + lg_subsets
            worst = max(worst, mag1, mag2, mag3, mag4, lg_denom)
            for d in range(max(0, k - c), min(s, k) + 1):
                lg_s, mag5 = _log_binomial(s, d)
                lg_c, mag6 = _log_binomial(c, k - d)
                lg_num = lg_weight + lg_s + lg_c
                worst = max(worst, mag5, mag6, lg_num)
                mass[d] += math.exp(lg_num - lg_denom)

    if worst > log_budget:
        raise PrecisionLossError(
            f"log magnitude {worst:.3g} exceeds budget {log_budget:.3g}; "
            "use the exact path"
        )
    return SuccessPmf(config=config, mass=tuple(mass), kind=PmfKind.FLOAT)


#: Above this many factors the direct log-product falls back to lgamma.
_DIRECT_LOG_FACTORS = 64

_LOG_BINOMIAL: dict[tuple[int, int], float] = {}
_LOG_FALLING: dict[tuple[int, int], float] = {}


def _log_binomial(n: int, k: int) -> tuple[float, float]:
    """(log C(n, k), magnitude to charge against the precision budget).

    The small side of the binomial is usually tiny here (it is capped by
    the token count), so the log is formed as a short sum of small logs,
    whose rounding error is negligible no matter how large n gets.  The
    lgamma fallback for a large small-side is accurate relative to
    lgamma(n+1), so that full magnitude is what the budget must cover.
    Callers guarantee 0 <= k <= n.
    """
    small = min(k, n - k)
    if small <= _DIRECT_LOG_FACTORS:
        key = (n, small)
        value = _LOG_BINOMIAL.get(key)
        if value is None:
            value = sum(math.log(n - i) for i in range(small)) - math.lgamma(small + 1)
            _LOG_BINOMIAL[key] = value
        return value, abs(value)
    value = (
        math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    )
    return value, math.lgamma(n + 1)


def _log_falling(t: int, s: int) -> tuple[float, float]:
    """(log of t(t-1)...(t-s+1), budget magnitude); same scheme as
    :func:`_log_binomial`.  Callers guarantee 0 <= s <= t."""
    if s <= _DIRECT_LOG_FACTORS:
        key = (t, s)
        value = _LOG_FALLING.get(key)
        if value is None:
            value = sum(math.log(t - i) for i in range(s))
            _LOG_FALLING[key] = value
        return value, abs(value)
    value = math.lgamma(t + 1) - math.lgamma(t - s + 1)
    return value, math.lgamma(t + 1)


_LOG_STIRLING2: dict[tuple[int, int], float] = {}
_LOG_STIRLING2_ROWS = 1
_LOG_STIRLING2_COLS = 1


def _log_stirling2(n: int, k: int) -> float:
    """log of the min-block-size-2 partition count, -inf where it is zero.

    Same recurrence as :class:`StirlingTable` run in log space; error
    grows only linearly with n, far inside the float path's budget.

    Memoized over a rectangle of rows 2..ROWS and columns 1..COLS rather
    than full triangular rows: block counts are capped by the token
    count, so large-population queries touch only a thin strip and full
    rows would cost quadratic time and memory.  The rectangle is closed
    under the recurrence (row r, col kk needs only smaller r and kk).
    On frontier growth a fresh rectangle is staged and the module dict
    rebound in one step, so concurrent readers always see a complete
    rectangle.
    """
    global _LOG_STIRLING2, _LOG_STIRLING2_ROWS, _LOG_STIRLING2_COLS
    if n == 0 and k == 0:
        return 0.0
    if n <= 0 or k <= 0 or k > n // 2:
        return -math.inf

    if n > _LOG_STIRLING2_ROWS or k > _LOG_STIRLING2_COLS:
        rows = max(n, _LOG_STIRLING2_ROWS)
        cols = max(k, _LOG_STIRLING2_COLS)
        staged: dict[tuple[int, int], float] = {}

        def get(r: int, kk: int) -> float:
            if r == 0 and kk == 0:
                return 0.0
            if r <= 0 or kk <= 0 or kk > r // 2:
                return -math.inf
            return staged[(r, kk)]

        for r in range(2, rows + 1):
            for kk in range(1, min(r // 2, cols) + 1):
                a = math.log(kk) + get(r - 1, kk)
                b = math.log(r - 1) + get(r - 2, kk - 1)
                if a == -math.inf:
                    staged[(r, kk)] = b
                elif b == -math.inf:
                    staged[(r, kk)] = a
                else:
                    hi, lo = (a, b) if a >= b else (b, a)
                    staged[(r, kk)] = hi + math.log1p(math.exp(lo - hi))
        _LOG_STIRLING2 = staged
        _LOG_STIRLING2_ROWS = rows
        _LOG_STIRLING2_COLS = cols
    return _LOG_STIRLING2[(n, k)]


@dataclass(frozen=True)
class SuccessPmf:
    """Distribution of the per-frame success count S, indexed d = 0 ..
    min(tokens, data_slots, users).

    ``kind`` records provenance: "exact" (rational masses summing to
    exactly 1), "float" (log-domain path), or "empirical" (simulated
    frequencies, exact multiples of 1/N).
    """

    config: SystemConfig
    mass: tuple
    kind: PmfKind

    def __len__(self) -> int:
        return len(self.mass)

    def __getitem__(self, d: int):
        return self.mass[d]

    def mean(self):
        """Expected number of successes per frame."""
        return sum(d * p for d, p in enumerate(self.mass))

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(p) for p in self.mass)

    def total(self):
        return sum(self.mass)

    def to_json_dict(self) -> dict:
        if self.kind is PmfKind.FLOAT:
            rendered = [float(p) for p in self.mass]
        else:
            rendered = [f"{p.numerator}/{p.denominator}" for p in self.mass]
        return {
            "M": self.config.tokens,
            "K": self.config.data_slots,
            "T": self.config.users,
            "kind": self.kind.value,
            "mass": rendered,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "SuccessPmf":
        payload = json.loads(text)
        config = SystemConfig(
            tokens=payload["M"], data_slots=payload["K"], users=payload["T"]
        )
        kind = PmfKind(payload["kind"])
        if kind is PmfKind.FLOAT:
            mass = tuple(float(p) for p in payload["mass"])
        else:
            mass = tuple(Fraction(p) for p in payload["mass"])
        return cls(config=config, mass=mass, kind=kind)

    def to_csv(self) -> str:
        lines = ["d,probability"]
        lines += [f"{d},{float(p):.12g}" for d, p in enumerate(self.mass)]
        return "\n".join(lines) + "\n"
