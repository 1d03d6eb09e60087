"""Separating integers for two-dimensional root grids, and lifting
projected values back onto the grid.

Given root sets X and Y, an integer s separates the grid X x Y when
(x, y) -> x + s*y is injective on it.  Bad integers are the near-integer
values of ratios |x - x'| / |y - y'|, so the search works on tables of
dyadic approximations of those pairwise root distances: round each ratio
to an integer (or to 0 / infinity when the magnitudes are far apart) and
binary-search a block of consecutive integers whose preimage under that
rounding is empty.  A bisection over a power-of-two range halves the
preimage count per level, so a block is always found.

Every returned s also satisfies the quantitative slack
|(x + s y) - (x' + s y')| >= |y - y'| / 4 for distinct grid points,
which is what makes the lifting loop terminate: candidate preimages are
pruned with interval tests at doubling precision until exactly one pair
survives.

Comparisons of table entries cost bits, not units, so the merge sort
gallops: when one run's tail dominates, a back-to-front exponential-
then-binary search moves a whole block at once, keeping every element
to O(log) comparisons per merge level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import inf

from .dyadic import ComplexBox, Dyadic, DyadicInterval, bit_magnitude, interval_sqrt
from .errors import NoPreimageError, RefinementError
from .isolation import RootSet, refine_aligned
from .polynomials import UniPoly

__all__ = [
    "DiffEntry",
    "DiffTable",
    "MergeStats",
    "SeparatingInterval",
    "BisectionStats",
    "LiftedPair",
    "build_diff_tables",
    "sort_diffs",
    "round_fraction",
    "preimage_count",
    "find_separating_block",
    "lift",
]


@dataclass(frozen=True, slots=True)
class DiffEntry:
    """One approximated pairwise root distance."""

    approx: Dyadic
    bit_mag: int
    i: int
    j: int


@dataclass(frozen=True)
class DiffTable:
    """Relative-quality approximations of the pairwise distances of a root
    set.  Each entry has relative error below 2**-quality and absolute
    error at most 1 against its exact distance."""

    entries: tuple[DiffEntry, ...]
    quality: int
    sorted: bool = False


@dataclass
class MergeStats:
    """Comparison instrumentation for the galloping merge sort."""

    total: int = 0
    top_merge_counts: dict[int, int] = field(default_factory=dict)

    def record(self, a: DiffEntry, b: DiffEntry, top: bool) -> None:
        self.total += 1
        if top:
            self.top_merge_counts[id(a)] = self.top_merge_counts.get(id(a), 0) + 1
            self.top_merge_counts[id(b)] = self.top_merge_counts.get(id(b), 0) + 1


@dataclass(frozen=True, slots=True)
class SeparatingInterval:
    """Block {s_star, ..., s_star + block_length - 1} of separating
    integers inside {1, ..., search_range_max}."""

    s_star: int
    block_length: int
    search_range_max: int


@dataclass
class BisectionStats:
    preimage_counts: list[int] = field(default_factory=list)


@dataclass(frozen=True, slots=True)
class LiftedPair:
    x_index: int
    y_index: int
    x_box: "ComplexBox"
    y_box: "ComplexBox"


def _pow2_at_least(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def _table_degree(x_set: RootSet, y_set: RootSet, c2: int = 1) -> int:
    """Degree scale of the search, a power of two: the larger input degree,
    raised if needed so the block length stays within its eighth power
    (a larger scale only widens the sound search range)."""
    d = max(x_set.polynomial.degree, y_set.polynomial.degree, 1)
    d2 = _pow2_at_least(d)
    while c2 > d2**8:
        d2 *= 2
    return d2


# ---------------------------------------------------------------------------
# distance tables
# ---------------------------------------------------------------------------


def _distance_interval(a, b, precision: int) -> DyadicInterval:
    return interval_sqrt((a - b).abs_square(), precision)


def build_diff_tables(
    x_set: RootSet, y_set: RootSet, c: int = 1
) -> tuple[DiffTable, DiffTable]:
    """Tables for the pairwise distances within X and within Y, at relative
    quality log2(64 * d^4 * c) with d, c rounded up to powers of two.  The
    X table comes back sorted."""
    c2 = _pow2_at_least(max(1, c))
    d2 = _table_degree(x_set, y_set, c2)
    rel_quality = 6 + 4 * (d2.bit_length() - 1) + (c2.bit_length() - 1)
    nu = _build_table(x_set, rel_quality)
    delta = _build_table(y_set, rel_quality)
    return sort_diffs(nu), delta


def _build_table(rs: RootSet, rel_quality: int) -> DiffTable:
    n = len(rs.roots)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    entries: list[DiffEntry | None] = [None] * len(pairs)
    pending = list(range(len(pairs)))
    current = rs
    precision = max(8, rel_quality + 8)
    while pending:
        current = refine_aligned(current, precision)
        boxes = current.boxes()
        still = []
        for k in pending:
            i, j = pairs[k]
            enc = _distance_interval(boxes[i], boxes[j], precision + 4)
            width = enc.width()
            # relative target: width/2 < 2**-(rel_quality+1) * lo keeps the
            # midpoint within relative error 2**-rel_quality of the true
            # distance; the absolute cap keeps it within 1 as well
            if (
                enc.lo.man > 0
                and width.scale2(rel_quality + 1) < enc.lo
                and width < Dyadic(1, -3)
            ):
                mid = enc.midpoint()
                entries[k] = DiffEntry(mid, bit_magnitude(mid), i, j)
            else:
                still.append(k)
        pending = still
        precision *= 2
    return DiffTable(tuple(entries), rel_quality, sorted=False)


# ---------------------------------------------------------------------------
# galloping merge sort
# ---------------------------------------------------------------------------


def _gallop_split(run, limit: Dyadic, stats, probe_entry, top):
    """Smallest index k in `run` (ascending) with run[k].approx > limit,
    searching from the tail by doubling steps then binary search."""
    n = len(run)

    def gt(idx: int) -> bool:
        if stats is not None:
            stats.record(probe_entry, run[idx], top)
        return run[idx].approx > limit

    if not gt(n - 1):
        return n
    step = 1
    lo = n - 1
    while lo - step >= 0 and gt(lo - step):
        lo -= step
        step *= 2
    hi = lo
    lo = max(0, lo - step)
    # invariant: run[hi] > limit, run[lo-1]... binary search in (lo-1, hi]
    left, right = lo, hi
    while left < right:
        mid = (left + right) // 2
        if gt(mid):
            right = mid
        else:
            left = mid + 1
    return left


def _merge(left_run, right_run, stats, top):
    out = []
    a, b = list(left_run), list(right_run)
    while a and b:
        if stats is not None:
            stats.record(a[-1], b[-1], top)
        if a[-1].approx > b[-1].approx:
            k = _gallop_split(a, b[-1].approx, stats, b[-1], top)
            out.extend(reversed(a[k:]))
            del a[k:]
            out.append(b.pop())
        else:
            k = _gallop_split(b, a[-1].approx, stats, a[-1], top)
            out.extend(reversed(b[k:]))
            del b[k:]
            out.append(a.pop())
    out.extend(reversed(a or b))
    out.reverse()
    return out


def sort_diffs(table: DiffTable, stats: MergeStats | None = None) -> DiffTable:
    """Merge sort whose merge stage moves dominated blocks wholesale via
    exponential-then-binary search from the tails."""
    if table.sorted:
        return table
    entries = list(table.entries)
    if len(entries) <= 1:
        return DiffTable(tuple(entries), table.quality, sorted=True)
    runs = [[e] for e in entries]
    while len(runs) > 1:
        top = len(runs) == 2
        merged = []
        for i in range(0, len(runs) - 1, 2):
            merged.append(_merge(runs[i], runs[i + 1], stats, top))
        if len(runs) % 2:
            merged.append(runs[-1])
        runs = merged
    return DiffTable(tuple(runs[0]), table.quality, sorted=True)


# ---------------------------------------------------------------------------
# the rounding map and its preimage counts
# ---------------------------------------------------------------------------


def round_fraction(nu: Dyadic, delta: Dyadic, d: int, c: int):
    """Round the ratio nu/delta: 0 when nu is far below delta, +inf when far
    above (relative to the 8*d^4*c scale), otherwise the nearest integer
    with ties broken downward."""
    d2 = _pow2_at_least(max(1, d))
    c2 = _pow2_at_least(max(1, c))
    e1 = nu.floor_log2()
    e2 = delta.floor_log2()
    if e1 + 4 - e2 <= 0:
        return 0
    big_bits = 3 + 4 * (d2.bit_length() - 1) + (c2.bit_length() - 1)  # log2(8 d^4 c)
    if e1 - e2 - 1 >= big_bits:
        return inf
    # nearest integer to nu/delta with ties down: ceil(nu/delta - 1/2)
    num = nu.scale2(1) - delta
    den = delta.scale2(1)
    shift = num.exp - den.exp
    a, b = num.man, den.man
    if shift >= 0:
        a <<= shift
    else:
        b <<= -shift
    return -((-a) // b)


def preimage_count(
    nu_table: DiffTable, delta_table: DiffTable, s_lo: int, s_hi: int, d: int, c: int
) -> int:
    """Number of pairs whose rounded ratio lands in {s_lo, ..., s_hi}; two
    binary searches on the sorted nu table per delta entry, using the
    monotonicity of the rounding in nu."""
    if not nu_table.sorted:
        raise ValueError("nu table must be sorted")
    if s_lo < 1 or s_lo > s_hi:
        raise ValueError("bad query range")
    nus = nu_table.entries
    total = 0
    for de in delta_table.entries:
        lo_idx = _first_at_least(nus, de.approx, s_lo, d, c)
        hi_idx = _first_at_least(nus, de.approx, s_hi + 1, d, c)
        total += hi_idx - lo_idx
    return total


def _first_at_least(nus, delta: Dyadic, s: int, d: int, c: int) -> int:
    left, right = 0, len(nus)
    while left < right:
        mid = (left + right) // 2
        if round_fraction(nus[mid].approx, delta, d, c) >= s:
            right = mid
        else:
            left = mid + 1
    return left


# ---------------------------------------------------------------------------
# the separating block search
# ---------------------------------------------------------------------------


def find_separating_block(
    x_set: RootSet,
    y_set: RootSet,
    c: int = 1,
    stats: BisectionStats | None = None,
) -> SeparatingInterval:
    """A block of c consecutive integers all separating for X x Y, found by
    bisecting {1, ..., d^4 c} on preimage counts (d and c rounded up to
    powers of two).  The initial count is below d^4, so halving it per
    level leaves an empty preimage after log2(d^4) levels."""
    c2 = _pow2_at_least(max(1, c))
    d2 = _table_degree(x_set, y_set, c2)
    nu_table, delta_table = build_diff_tables(x_set, y_set, c2)
    levels = 4 * (d2.bit_length() - 1)
    s, s_hi = 1, d2**4 * c2
    count = preimage_count(nu_table, delta_table, s, s_hi, d2, c2)
    if stats is not None:
        stats.preimage_counts.append(count)
    for _ in range(levels):
        theta = (s + s_hi - 1) // 2
        left = preimage_count(nu_table, delta_table, s, theta, d2, c2)
        right = preimage_count(nu_table, delta_table, theta + 1, s_hi, d2, c2)
        assert left + right == count, "preimage bisection must partition"
        if left <= right:
            s, s_hi, count = s, theta, left
        else:
            s, s_hi, count = theta + 1, s_hi, right
        assert 2 * count <= (left + right), "preimage count must halve"
        if stats is not None:
            stats.preimage_counts.append(count)
    assert s_hi - s + 1 == c2
    assert count == 0, "final block must have empty preimage"
    return SeparatingInterval(s, c2, d2**4 * c2)


# ---------------------------------------------------------------------------
# lifting
# ---------------------------------------------------------------------------


def lift(
    z_set: RootSet,
    x_set: RootSet,
    y_set: RootSet,
    s: int,
    quality: int,
    z_indices: list[int] | None = None,
) -> tuple[list[LiftedPair], RootSet, RootSet]:
    """For each z in Z find the unique (x, y) in X x Y with x + s*y = z.

    Candidate pairs are kept while |z - s*y - x| cannot be bounded away
    from 2**-L ("possibly in"), with L doubling each round; the
    separation slack of s guarantees that exactly one candidate survives
    for a value in the image.  A value with no preimage empties its
    candidate set and raises NoPreimageError.  Returns the pairs plus the
    X and Y root sets refined (order-aligned) to `quality`."""
    if z_indices is None:
        z_indices = list(range(len(z_set.roots)))
    pending: dict[int, list[tuple[int, int]]] = {
        k: [(i, j) for j in range(len(y_set.roots)) for i in range(len(x_set.roots))]
        for k in z_indices
    }
    resolved: dict[int, tuple[int, int]] = {}
    level = 1
    zc, xc, yc = z_set, x_set, y_set
    s_bits = max(1, abs(s).bit_length())
    while pending:
        threshold = Dyadic(1, -level)
        precision = level + s_bits + 4
        zc = refine_aligned(zc, precision)
        xc = refine_aligned(xc, precision)
        yc = refine_aligned(yc, precision)
        zb, xb, yb = zc.boxes(), xc.boxes(), yc.boxes()
        done = []
        for k, cands in pending.items():
            keep = []
            for (i, j) in cands:
                diff = zb[k] - yb[j].scale_int(s) - xb[i]
                lower = interval_sqrt(diff.abs_square(), precision).lo
                if lower < threshold:
                    keep.append((i, j))
            if not keep:
                raise NoPreimageError(
                    f"projected value #{k} has no preimage on the grid", index=k
                )
            pending[k] = keep
            if len(keep) == 1:
                resolved[k] = keep[0]
                done.append(k)
        for k in done:
            del pending[k]
        level *= 2
    xq = refine_aligned(xc, quality)
    yq = refine_aligned(yc, quality)
    pairs = [
        LiftedPair(i, j, xq.roots[i].box, yq.roots[j].box)
        for (i, j) in (resolved[k] for k in z_indices)
    ]
    return pairs, xq, yq
