import pytest

from qrr.partitions import PartitionClass, count_dp
from qrr.recursion import (
    f_coefficients,
    first_divergence,
    recursion_tables,
    series_coefficients,
)

from oracles import count_gap2, count_parts


def test_seed_and_first_values():
    t = recursion_tables(1)
    assert t.g == (1, 1) and t.h == (1, 0)


def test_spot_values():
    t = recursion_tables(10)
    assert t.g[4] == 2 and t.g[6] == 3 and t.h[6] == 2 and t.h[1] == 0
    assert t.f[5] == 6


def test_invariants():
    t = recursion_tables(120)
    assert t.f[0] == t.g[0] == t.h[0] == 1
    assert min(t.f + t.g + t.h) >= 0


def test_f_is_not_divisible_by_four_count():
    assert f_coefficients(20) == count_dp(PartitionClass.NOT_DIV_4, 20)


def test_agrees_with_series_routes():
    N = 200
    t = recursion_tables(N)
    for name, seq in (("G", t.g), ("tildeG", t.g), ("H", t.h), ("tildeH", t.h)):
        assert first_divergence(seq, series_coefficients(name, N)) is None, name


def test_agrees_with_enumeration():
    t = recursion_tables(25)
    assert list(t.g) == [count_gap2(n) for n in range(26)]
    assert list(t.h) == [count_parts(n, lambda p: p % 5 in (2, 3)) for n in range(26)]


def test_perturbed_seed_diverges():
    N = 50
    t = recursion_tables(N, override={("g", 1): 2})
    n = first_divergence(t.g, series_coefficients("tildeG", N))
    assert n is not None and n <= 50


def test_odd_h_recursion_needs_h():
    N = 40
    wrong = recursion_tables(N, h_odd_source="g")
    assert first_divergence(wrong.h, series_coefficients("H", N)) == 19


def test_rejects_negative():
    with pytest.raises(ValueError):
        recursion_tables(-1)
