"""Exact combinatorial primitives against independent enumeration."""

from __future__ import annotations

from fractions import Fraction

import pytest

from accessframe.combinatorics import (
    StirlingTable,
    binomial,
    falling_factorial,
    hypergeometric_pmf,
    stirling2_assoc,
)
from oracles import (
    hypergeometric_by_enumeration,
    min_size2_partition_counts,
    pascal_triangle,
)


def test_binomial_matches_pascal_triangle():
    triangle = pascal_triangle(40)
    for n in range(41):
        for k in range(n + 1):
            assert binomial(n, k) == triangle[n][k]


def test_binomial_out_of_range_is_zero():
    assert binomial(5, -1) == 0
    assert binomial(5, 6) == 0
    assert binomial(0, 0) == 1


def test_binomial_rejects_negative_n():
    with pytest.raises(ValueError):
        binomial(-1, 0)


def test_falling_factorial_values():
    assert falling_factorial(5, 0) == 1
    assert falling_factorial(5, 2) == 20
    assert falling_factorial(5, 5) == 120
    assert falling_factorial(3, 4) == 0  # more factors than items


def test_falling_factorial_rejects_negatives():
    with pytest.raises(ValueError):
        falling_factorial(-1, 1)
    with pytest.raises(ValueError):
        falling_factorial(3, -1)


def test_stirling_base_case():
    assert stirling2_assoc(2, 1) == 1


def test_stirling_empty_set_convention():
    # one way to split nothing into no blocks; this choice is what makes
    # the recurrence reproduce the base case and the pmf sum to 1
    assert stirling2_assoc(0, 0) == 1


def test_stirling_zero_rules():
    assert stirling2_assoc(0, 1) == 0
    assert stirling2_assoc(3, 0) == 0
    assert stirling2_assoc(5, 3) == 0  # 3 blocks of size >= 2 need 6 elements
    assert stirling2_assoc(7, 4) == 0
    assert stirling2_assoc(1, 1) == 0


def test_stirling_hand_values():
    assert stirling2_assoc(4, 2) == 3
    assert stirling2_assoc(5, 2) == 10
    assert stirling2_assoc(6, 3) == 15
    assert stirling2_assoc(7, 2) == 56
    assert stirling2_assoc(7, 3) == 105
    assert stirling2_assoc(8, 4) == 105


def test_stirling_matches_partition_enumeration():
    for n in range(13):
        counts = min_size2_partition_counts(n)
        for k in range(n + 1):
            assert stirling2_assoc(n, k) == counts.get(k, 0), (n, k)


def test_stirling_table_grows_monotonically():
    table = StirlingTable()
    assert table.value(6, 2) == 25
    first = table.max_n
    assert table.value(10, 4) == 9450
    assert table.max_n >= max(first, 10)
    # growth never invalidates earlier answers
    assert table.value(6, 2) == 25


def test_stirling_table_rows_are_complete():
    table = StirlingTable()
    table.value(9, 2)
    for n in range(2, table.max_n + 1):
        for k in range(1, n // 2 + 1):
            assert (n, k) in table.entries


def test_stirling_table_json_round_trip():
    table = StirlingTable()
    table.value(11, 3)
    clone = StirlingTable.from_json(table.to_json())
    assert clone.max_n == table.max_n
    assert clone.entries == table.entries
    assert clone.value(12, 2) == stirling2_assoc(12, 2)


def test_stirling_explicit_table_agrees_with_shared():
    table = StirlingTable()
    for n in range(13):
        for k in range(7):
            assert stirling2_assoc(n, k, table) == stirling2_assoc(n, k)


def test_hypergeometric_hand_values():
    # 2 singles, 1 collision, 2 slots drawn
    assert hypergeometric_pmf(2, 1, 2, 1) == Fraction(2, 3)
    assert hypergeometric_pmf(2, 1, 2, 2) == Fraction(1, 3)
    assert hypergeometric_pmf(2, 1, 2, 0) == 0
    assert hypergeometric_pmf(3, 2, 5, 3) == 1  # draw everything


def test_hypergeometric_matches_enumeration():
    for s in range(5):
        for c in range(5):
            for k in range(s + c + 1):
                expected = hypergeometric_by_enumeration(s, c, k)
                for d in range(k + 1):
                    assert hypergeometric_pmf(s, c, k, d) == expected.get(
                        d, Fraction(0)
                    ), (s, c, k, d)


def test_hypergeometric_sums_to_one():
    for s in range(6):
        for c in range(6):
            for k in range(s + c + 1):
                total = sum(hypergeometric_pmf(s, c, k, d) for d in range(k + 1))
                assert total == 1, (s, c, k)


def test_hypergeometric_rejects_bad_arguments():
    with pytest.raises(ValueError):
        hypergeometric_pmf(-1, 0, 0, 0)
    with pytest.raises(ValueError):
        hypergeometric_pmf(0, -1, 0, 0)
    with pytest.raises(ValueError):
        hypergeometric_pmf(1, 1, -1, 0)
    with pytest.raises(ValueError):
        hypergeometric_pmf(1, 1, 3, 1)  # cannot draw more than s + c
