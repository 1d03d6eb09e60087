"""Grid separation: distance tables, the galloping sort, the rounding
map, preimage counting, block bisection, and lifting."""

from __future__ import annotations

import random
from fractions import Fraction
from math import inf

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projsolve.dyadic import Dyadic
from projsolve.errors import NoPreimageError
from projsolve.gridsep import (
    BisectionStats,
    DiffEntry,
    DiffTable,
    MergeStats,
    build_diff_tables,
    find_separating_block,
    lift,
    preimage_count,
    round_fraction,
    sort_diffs,
)
from projsolve.isolation import isolate
from projsolve.polynomials import UniPoly
from conftest import random_rational_roots, unipoly_with_roots


def naive_tail_merge(left, right):
    """Classical element-at-a-time merge from the tails; returns the
    comparison count (the baseline the galloping merge beats)."""
    a, b = list(left), list(right)
    comparisons = 0
    out = []
    while a and b:
        comparisons += 1
        if a[-1] > b[-1]:
            out.append(a.pop())
        else:
            out.append(b.pop())
    out.extend(reversed(a or b))
    return comparisons


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------


def test_build_tables_examples():
    x01 = isolate(unipoly_with_roots([Fraction(0), Fraction(1)]), 8)
    nu, _ = build_diff_tables(x01, x01, 1)
    assert len(nu.entries) == 1
    assert abs(float(nu.entries[0].approx) - 1) < 0.01

    x013 = isolate(unipoly_with_roots([Fraction(0), Fraction(1), Fraction(3)]), 8)
    nu3, _ = build_diff_tables(x013, x013, 1)
    assert nu3.sorted
    values = [float(e.approx) for e in nu3.entries]
    assert len(values) == 3
    for got, want in zip(values, (1.0, 2.0, 3.0)):
        assert abs(got - want) < 0.01

    single = isolate(unipoly_with_roots([Fraction(5)]), 8)
    nu1, _ = build_diff_tables(single, x01, 1)
    assert len(nu1.entries) == 0


def test_table_quality_contract(rng):
    for _ in range(20):
        roots = random_rational_roots(rng, rng.randint(2, 5))
        rs = isolate(unipoly_with_roots(roots), 8)
        nu, _ = build_diff_tables(rs, rs, 1)
        rel = Fraction(1, 1 << nu.quality)
        exact = sorted(
            abs(a - b) for i, a in enumerate(roots) for b in roots[i + 1 :]
        )
        got = sorted(e.approx.to_fraction() for e in nu.entries)
        assert len(got) == len(exact)
        for approx, true in zip(got, exact):
            assert abs(approx - true) <= rel * true
            assert abs(approx - true) <= 1


# ---------------------------------------------------------------------------
# sorting
# ---------------------------------------------------------------------------


def entries_from_values(values):
    return tuple(DiffEntry(Dyadic(v, -2), 1, 0, i) for i, v in enumerate(values))


def test_sort_already_sorted_identity():
    table = DiffTable(entries_from_values([1, 2, 3, 5]), 4)
    out = sort_diffs(table)
    assert [e.approx for e in out.entries] == [e.approx for e in table.entries]
    assert sort_diffs(out) is out


@given(st.lists(st.integers(min_value=0, max_value=10**6), min_size=0, max_size=200))
@settings(max_examples=150)
def test_sort_matches_builtin(values):
    table = DiffTable(entries_from_values(values), 4)
    out = sort_diffs(table)
    assert [e.approx.to_fraction() for e in out.entries] == sorted(
        Fraction(v, 4) for v in values
    )


def test_sort_reverse_16_comparison_budget():
    table = DiffTable(entries_from_values(list(range(16, 0, -1))), 4)
    stats = MergeStats()
    out = sort_diffs(table, stats)
    assert [e.approx.to_fraction() for e in out.entries] == sorted(
        Fraction(v, 4) for v in range(16, 0, -1)
    )
    assert stats.total <= 2 * 16 * 4  # 2 log2(16) per element per level


def test_two_block_adversarial_merge():
    k = 12
    n = 1 << k
    half = n // 2
    values = list(range(half)) + list(range(10**6, 10**6 + half))
    table = DiffTable(entries_from_values(values), 4)
    stats = MergeStats()
    out = sort_diffs(table, stats)
    assert [e.approx.to_fraction() for e in out.entries] == sorted(
        Fraction(v, 4) for v in values
    )
    largest = out.entries[-1]
    assert stats.top_merge_counts.get(id(largest), 0) <= 2 * k + 2
    assert stats.total <= 4 * k * n
    naive = naive_tail_merge(sorted(values[:half]), sorted(values[half:]))
    assert naive >= half  # the baseline really is linear in the block size


# ---------------------------------------------------------------------------
# the rounding map
# ---------------------------------------------------------------------------


def test_round_fraction_regimes():
    assert round_fraction(Dyadic(5), Dyadic(1), 4, 1) == 5
    assert round_fraction(Dyadic(1, -40), Dyadic(1), 4, 1) == 0
    assert round_fraction(Dyadic(1, 60), Dyadic(1), 4, 1) == inf


def test_round_fraction_ties_go_down():
    assert round_fraction(Dyadic(5, -1), Dyadic(1), 4, 1) == 2  # 2.5 -> 2
    assert round_fraction(Dyadic(7, -1), Dyadic(1), 4, 1) == 3  # 3.5 -> 3
    assert round_fraction(Dyadic(11, -2), Dyadic(1), 4, 1) == 3  # 2.75 -> 3


def test_round_fraction_exact_integer_ratios(rng):
    """Distances with an exact small integer ratio round to exactly that
    integer once the tables are built at the mandated quality."""
    for ratio in list(range(1, 26)) + [27, 30, 32]:
        x_set = isolate(unipoly_with_roots([Fraction(0), Fraction(ratio)]), 8)
        y_set = isolate(unipoly_with_roots([Fraction(0), Fraction(1)]), 8)
        nu, delta = build_diff_tables(x_set, y_set, 1)
        d = max(x_set.polynomial.degree, y_set.polynomial.degree)
        got = round_fraction(nu.entries[0].approx, delta.entries[0].approx, d, 1)
        assert got == ratio, (ratio, got)


@given(
    st.integers(min_value=1, max_value=2**24),
    st.integers(min_value=-12, max_value=12),
    st.integers(min_value=1, max_value=2**24),
    st.integers(min_value=-12, max_value=12),
    st.integers(min_value=1, max_value=2**24),
    st.integers(min_value=-12, max_value=12),
)
@settings(max_examples=300)
def test_round_fraction_monotone_in_nu(m1, e1, m2, e2, md, ed):
    nu_a = Dyadic(m1, e1)
    nu_b = Dyadic(m2, e2)
    if nu_a > nu_b:
        nu_a, nu_b = nu_b, nu_a
    delta = Dyadic(md, ed)
    ra = round_fraction(nu_a, delta, 4, 2)
    rb = round_fraction(nu_b, delta, 4, 2)
    assert ra <= rb


# ---------------------------------------------------------------------------
# preimage counts
# ---------------------------------------------------------------------------


def brute_preimage(nu_table, delta_table, s_lo, s_hi, d, c):
    count = 0
    for ne in nu_table.entries:
        for de in delta_table.entries:
            value = round_fraction(ne.approx, de.approx, d, c)
            if value != inf and s_lo <= value <= s_hi:
                count += 1
    return count


def test_preimage_count_examples():
    x_set = isolate(unipoly_with_roots([Fraction(0), Fraction(1), Fraction(2)]), 8)
    y_set = isolate(unipoly_with_roots([Fraction(0), Fraction(1)]), 8)
    nu, delta = build_diff_tables(x_set, y_set, 1)
    d = 4
    assert preimage_count(nu, delta, 1, 1, d, 1) == 2
    assert preimage_count(nu, delta, 2, 2, d, 1) == 1
    assert preimage_count(nu, delta, 1000, 1001, d, 1) == 0
    with pytest.raises(ValueError):
        preimage_count(nu, delta, 3, 2, d, 1)


def test_preimage_count_matches_brute_force(rng):
    for _ in range(25):
        xr = random_rational_roots(rng, rng.randint(2, 5))
        yr = random_rational_roots(rng, rng.randint(2, 5))
        x_set = isolate(unipoly_with_roots(xr), 8)
        y_set = isolate(unipoly_with_roots(yr), 8)
        nu, delta = build_diff_tables(x_set, y_set, 1)
        d = max(x_set.polynomial.degree, y_set.polynomial.degree)
        hi = 8 * (max(1, d) ** 4)
        for _ in range(5):
            s_lo = rng.randint(1, hi)
            s_hi = rng.randint(s_lo, hi)
            assert preimage_count(nu, delta, s_lo, s_hi, d, 1) == brute_preimage(
                nu, delta, s_lo, s_hi, d, 1
            )


# ---------------------------------------------------------------------------
# separating blocks
# ---------------------------------------------------------------------------


def check_block_by_brute_force(x_roots, y_roots, block):
    """Exact rational verification of injectivity and the quarter slack."""
    grid = [(x, y) for x in x_roots for y in y_roots]
    for s in range(block.s_star, block.s_star + block.block_length):
        values = {}
        for (x, y) in grid:
            v = x + s * y
            assert v not in values, (s, x, y)
            values[v] = (x, y)
        for i, (x, y) in enumerate(grid):
            for (x2, y2) in grid[i + 1 :]:
                lhs = abs((x + s * y) - (x2 + s * y2))
                assert lhs >= Fraction(abs(y - y2), 4)


def test_separating_block_examples():
    pm1 = isolate(UniPoly((-1, 0, 1)), 8)
    block = find_separating_block(pm1, pm1, 1)
    # the only ratio is 2/2 = 1, so the block must avoid 1 by at least 1/4
    assert block.s_star != 1
    check_block_by_brute_force([Fraction(-1), Fraction(1)], [Fraction(-1), Fraction(1)], block)

    single = isolate(unipoly_with_roots([Fraction(3)]), 8)
    assert find_separating_block(single, pm1, 1).s_star == 1
    assert find_separating_block(pm1, single, 1).s_star == 1

    x06 = isolate(unipoly_with_roots([Fraction(0), Fraction(6)]), 8)
    x01 = isolate(unipoly_with_roots([Fraction(0), Fraction(1)]), 8)
    block2 = find_separating_block(x01, x06, 1)
    check_block_by_brute_force([Fraction(0), Fraction(1)], [Fraction(0), Fraction(6)], block2)


def test_bisection_halves_preimage_counts(rng):
    for _ in range(10):
        xr = random_rational_roots(rng, 4)
        yr = random_rational_roots(rng, 4)
        stats = BisectionStats()
        find_separating_block(
            isolate(unipoly_with_roots(xr), 8),
            isolate(unipoly_with_roots(yr), 8),
            1,
            stats=stats,
        )
        counts = stats.preimage_counts
        assert counts[-1] == 0
        for before, after in zip(counts, counts[1:]):
            assert 2 * after <= before or before == after == 0


def test_block_lengths_round_up_to_power_of_two(rng):
    xr = random_rational_roots(rng, 3)
    x_set = isolate(unipoly_with_roots(xr), 8)
    block = find_separating_block(x_set, x_set, 5)
    assert block.block_length == 8
    check_block_by_brute_force(xr, xr, block)


# ---------------------------------------------------------------------------
# lifting
# ---------------------------------------------------------------------------


def test_lift_four_point_grid():
    xy = isolate(unipoly_with_roots([Fraction(0), Fraction(1)]), 8)
    z_poly = unipoly_with_roots([Fraction(0), Fraction(1), Fraction(2), Fraction(3)])
    z_set = isolate(z_poly, 8)
    pairs, xq, yq = lift(z_set, xy, xy, 2, 16)
    decoded = []
    for pair in pairs:
        xv = 0 if pair.x_box.contains_point(Fraction(0)) else 1
        yv = 0 if pair.y_box.contains_point(Fraction(0)) else 1
        decoded.append((xv, yv))
    assert decoded == [(0, 0), (1, 0), (0, 1), (1, 1)]


def test_lift_singleton():
    zero = isolate(UniPoly((0, 1)), 8)
    pairs, _, _ = lift(zero, zero, zero, 1, 12)
    assert pairs[0].x_index == 0 and pairs[0].y_index == 0


def test_lift_no_preimage():
    xy = isolate(unipoly_with_roots([Fraction(0), Fraction(1)]), 8)
    bad = isolate(unipoly_with_roots([Fraction(5)]), 8)
    with pytest.raises(NoPreimageError):
        lift(bad, xy, xy, 2, 12)


def test_lift_project_identity_random(rng):
    for _ in range(30):
        xr = random_rational_roots(rng, rng.randint(2, 4))
        yr = random_rational_roots(rng, rng.randint(2, 4))
        x_set = isolate(unipoly_with_roots(xr), 8)
        y_set = isolate(unipoly_with_roots(yr), 8)
        block = find_separating_block(x_set, y_set, 1)
        s = block.s_star
        chosen = [(x, y) for x in xr for y in yr if rng.random() < 0.6]
        if not chosen:
            chosen = [(xr[0], yr[0])]
        z_values = [x + s * y for (x, y) in chosen]
        z_set = isolate(unipoly_with_roots(sorted(set(z_values))), 8)
        pairs, xq, yq = lift(z_set, x_set, y_set, s, 20)
        for z_idx, pair in enumerate(pairs):
            zv = sorted(set(z_values))[z_idx]
            x_val = xr[pair.x_index]
            y_val = yr[pair.y_index]
            assert x_val + s * y_val == zv
            assert pair.x_box.contains_point(x_val)
            assert pair.y_box.contains_point(y_val)
