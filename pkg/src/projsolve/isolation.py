"""Certified isolation and refinement of all complex roots of an integer
polynomial.

The algorithm deflates to the squarefree part, then runs a quadtree
subdivision over a root-bound square.  Boxes are discarded when exact
interval evaluation excludes zero; a connected component of surviving
boxes is accepted once a Pellet coefficient test on a covering disk
(after an exact integer center-shift-and-scale of the polynomial)
certifies that the disk holds exactly one root and the disk is disjoint
from every other surviving box and every previously accepted region.
Multiplicities are recovered afterwards from the exact squarefree
decomposition.  Precision only enters in the final box output; every
test along the way is integer arithmetic.

Subdivision order is fixed (SW, SE, NW, NE) and nothing here is
randomized, so identical inputs give identical outputs, independent of
any scheduling of the independent subtrees.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .dyadic import ComplexBox, Dyadic, DyadicInterval
from .errors import RefinementError
from .polynomials import UniPoly, squarefree_decomposition, squarefree_part

__all__ = [
    "RootSet",
    "IsolatedRoot",
    "isolate",
    "refine",
    "refine_aligned",
    "cauchy_bound",
    "mahler_bound",
    "root_bound_bits",
    "gamma_bits",
]


@dataclass(frozen=True, slots=True)
class IsolatedRoot:
    box: ComplexBox
    multiplicity: int


@dataclass(frozen=True)
class RootSet:
    """Sorted isolating boxes for the distinct roots of `polynomial`.

    Invariants: boxes are pairwise disjoint, each contains exactly one
    distinct root, multiplicities sum to deg(polynomial), every box has
    half-width below 2**-quality, and the order is lexicographic by
    (re.lo, im.lo)."""

    polynomial: UniPoly
    squarefree: UniPoly
    roots: tuple[IsolatedRoot, ...]
    quality: int

    def __len__(self) -> int:
        return len(self.roots)

    def boxes(self) -> list[ComplexBox]:
        return [r.box for r in self.roots]


# ---------------------------------------------------------------------------
# root magnitude bounds
# ---------------------------------------------------------------------------


def cauchy_bound(f: UniPoly) -> int:
    """Bits g with every root strictly inside |z| < 2**g, from Cauchy's
    bound 1 + max_k |c_k| / |lead|; always at least 1."""
    if f.is_zero():
        raise ValueError("root bound of the zero polynomial")
    d = f.degree
    if d <= 0:
        return 1
    m = max(abs(c) for c in f.coeffs[:-1])
    lead = abs(f.leading)
    g = 1
    while ((1 << g) - 1) * lead < m:
        g += 1
    return g


def root_bound_bits(f: UniPoly) -> int:
    """Certified bits g with all roots inside |z| < 2**g; the minimum of the
    Cauchy bound and a Fujiwara-style leading-ratio bound, which is far
    tighter when only low-order coefficients are large."""
    g_cauchy = cauchy_bound(f)
    d = f.degree
    if d <= 0:
        return 1
    lead_bits = abs(f.leading).bit_length()
    worst = 0
    for k in range(d):
        c = abs(f.coeffs[k])
        if c == 0:
            continue
        # |c_k/c_d|**(1/(d-k)) <= 2**ceil((bits_k - lead_bits + 1)/(d - k))
        num = c.bit_length() - lead_bits + 1
        worst = max(worst, -(-num // (d - k)))
    g_fuji = worst + 2  # Fujiwara: |z| <= 2 * max ratio
    return max(1, min(g_cauchy, g_fuji))


def gamma_bits(f: UniPoly) -> int:
    """ceil(log2(1 + max|coeff|)): bounds both |root| and 1/|root| for the
    nonzero roots of a primitive integer polynomial."""
    if f.is_zero():
        raise ValueError("gamma of the zero polynomial")
    return max(1, f.norm_inf().bit_length())


def mahler_bound(f: UniPoly) -> int:
    """ceil(log2 ||f||_2), an upper bound on the log Mahler measure."""
    if f.is_zero():
        raise ValueError("mahler bound of the zero polynomial")
    s = f.two_norm_sq()
    k = (s.bit_length() + 1) // 2
    while k > 0 and 4 ** (k - 1) >= s:
        k -= 1
    return k


# ---------------------------------------------------------------------------
# exact Gaussian-integer shift-and-scale plus the Pellet test
# ---------------------------------------------------------------------------


def _scaled_coeffs(f: UniPoly, p: int, q: int, r: int, e: int) -> list[tuple[int, int]]:
    """Gaussian-integer coefficients of a positive multiple of
    f(2**e * (p + q*i + r*x)).  Exactness is all that matters; the overall
    positive factor drops out of the coefficient comparisons."""
    d = f.degree
    pad = max(0, -e) * d
    coeffs: list[tuple[int, int]] = []
    for k, c in enumerate(f.coeffs):
        shift = e * k + pad
        coeffs.append((c << shift, 0))
    # Taylor shift by p + qi (synthetic division based)
    for i in range(d):
        for j in range(d - 1, i - 1, -1):
            re1, im1 = coeffs[j + 1]
            re0, im0 = coeffs[j]
            coeffs[j] = (re0 + re1 * p - im1 * q, im0 + re1 * q + im1 * p)
    # scale x -> r*x
    power = 1
    for k in range(d + 1):
        re0, im0 = coeffs[k]
        coeffs[k] = (re0 * power, im0 * power)
        power *= r
    return coeffs


def _pellet_one_root(coeffs: list[tuple[int, int]]) -> bool:
    """True when the scaled polynomial certifiably has exactly one root in
    the closed unit disk: |g_1| dominates the sum of all other coefficient
    moduli (integer-sqrt norms, outer bounds on the far side)."""
    if len(coeffs) < 2:
        return False
    norms = [isqrt(re * re + im * im) for re, im in coeffs]
    others = sum(n + 1 for i, n in enumerate(norms) if i != 1)
    return norms[1] > others


def _pellet_no_root(coeffs: list[tuple[int, int]]) -> bool:
    """True when the scaled polynomial certifiably has no root in the
    closed unit disk: |g_0| dominates the sum of the others."""
    norms = [isqrt(re * re + im * im) for re, im in coeffs]
    others = sum(n + 1 for n in norms[1:])
    return norms[0] > others


def _box_disk_params(box: ComplexBox) -> tuple[int, int, int, int]:
    """Integer (p, q, r, e) with the disk of center (p + q i) * 2**e and
    radius r * 2**e covering the box (center at the box midpoint, radius
    3/4 of the larger side length, at least the half-diagonal)."""
    mx, my = box.midpoint()
    width = max(box.re.width(), box.im.width())
    radius = Dyadic(3 * width.man, width.exp - 2)
    e = min(mx.exp, my.exp, radius.exp)
    return mx.man << (mx.exp - e), my.man << (my.exp - e), radius.man << (radius.exp - e), e


# ---------------------------------------------------------------------------
# subdivision
# ---------------------------------------------------------------------------


def _grid_box(a: int, b: int, e: int) -> ComplexBox:
    return ComplexBox(
        DyadicInterval(Dyadic(a - 1, e), Dyadic(a + 1, e)),
        DyadicInterval(Dyadic(b - 1, e), Dyadic(b + 1, e)),
    )


def _components_grid(cells: list[tuple[int, int]]) -> list[list[tuple[int, int]]]:
    """Group unit-step grid cells whose closed boxes touch (centers within
    two units in both coordinates)."""
    remaining = sorted(cells)
    comps = []
    cellset = set(remaining)
    seen = set()
    for start in remaining:
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        stack = [start]
        while stack:
            a, b = stack.pop()
            for da in (-2, -1, 0, 1, 2):
                for db in (-2, -1, 0, 1, 2):
                    nb = (a + da, b + db)
                    if nb in cellset and nb not in seen:
                        seen.add(nb)
                        comp.append(nb)
                        stack.append(nb)
        comps.append(sorted(comp))
    return comps


def _disk_disjoint_from_box(cx: Dyadic, cy: Dyadic, radius: Dyadic, box: ComplexBox) -> bool:
    zero = Dyadic(0)
    dx = max(zero, box.re.lo - cx, cx - box.re.hi)
    dy = max(zero, box.im.lo - cy, cy - box.im.hi)
    return dx * dx + dy * dy > radius * radius


def _interval_excludes(f: UniPoly, box: ComplexBox) -> bool:
    """No-root certificate for the closed box: exact shift of f to the box
    midpoint, scaled to a disk covering the box, then the constant
    coefficient must dominate (an interval bound on the centered form,
    immune to the width blow-up of raw Horner far from the origin)."""
    p, q, r, e = _box_disk_params(box)
    return _pellet_no_root(_scaled_coeffs(f, p, q, r, e))


def _cell_excludes(f: UniPoly, a: int, b: int, e: int) -> bool:
    """Grid-cell variant: center (a + b i) * 2**e, covering radius 3/2 of
    the half-width."""
    return _pellet_no_root(_scaled_coeffs(f, 2 * a, 2 * b, 3, e - 1))


def _isolate_squarefree(fsf: UniPoly) -> list[ComplexBox]:
    """Pairwise disjoint boxes, one around each distinct root of the
    squarefree polynomial fsf."""
    d = fsf.degree
    if d <= 0:
        return []
    gamma = root_bound_bits(fsf)
    level = gamma
    active: list[tuple[int, int]] = [(0, 0)]
    results: list[ComplexBox] = []
    while active:
        level -= 1
        children = []
        for a, b in active:
            ca, cb = 2 * a, 2 * b
            children.extend(
                [(ca - 1, cb - 1), (ca + 1, cb - 1), (ca - 1, cb + 1), (ca + 1, cb + 1)]
            )
        survivors = [
            cell for cell in children if not _cell_excludes(fsf, *cell, level)
        ]
        active = []
        for comp in _components_grid(survivors):
            emitted = _try_certify(fsf, comp, level, survivors, results)
            if emitted is not None:
                results.append(emitted)
            else:
                active.extend(comp)
    return results


def _try_certify(
    fsf: UniPoly,
    comp: list[tuple[int, int]],
    level: int,
    survivors: list[tuple[int, int]],
    results: list[ComplexBox],
) -> ComplexBox | None:
    min_a = min(a for a, _ in comp)
    max_a = max(a for a, _ in comp)
    min_b = min(b for _, b in comp)
    max_b = max(b for _, b in comp)
    # disk center on the half-step grid; radius three half-extents covers
    # twice the circumscribed disk of the bounding box
    p = min_a + max_a
    q = min_b + max_b
    extent = max(max_a - min_a, max_b - min_b) + 2
    r = 3 * extent
    cx, cy = Dyadic(p, level - 1), Dyadic(q, level - 1)
    radius = Dyadic(r, level - 1)
    compset = set(comp)
    for cell in survivors:
        if cell in compset:
            continue
        if not _disk_disjoint_from_box(cx, cy, radius, _grid_box(*cell, level)):
            return None
    for box in results:
        if not _disk_disjoint_from_box(cx, cy, radius, box):
            return None
    if not _pellet_one_root(_scaled_coeffs(fsf, p, q, r, level - 1)):
        return None
    return ComplexBox(
        DyadicInterval(Dyadic(min_a - 1, level), Dyadic(max_a + 1, level)),
        DyadicInterval(Dyadic(min_b - 1, level), Dyadic(max_b + 1, level)),
    )


def _split_box(box: ComplexBox) -> list[ComplexBox]:
    mx = box.re.midpoint()
    my = box.im.midpoint()
    re_lo = DyadicInterval(box.re.lo, mx)
    re_hi = DyadicInterval(mx, box.re.hi)
    im_bottom = DyadicInterval(box.im.lo, my)
    im_top = DyadicInterval(my, box.im.hi)
    return [
        ComplexBox(re_lo, im_bottom),
        ComplexBox(re_hi, im_bottom),
        ComplexBox(re_lo, im_top),
        ComplexBox(re_hi, im_top),
    ]


def _bounding_box(boxes: list[ComplexBox]) -> ComplexBox:
    return ComplexBox(
        DyadicInterval(min(b.re.lo for b in boxes), max(b.re.hi for b in boxes)),
        DyadicInterval(min(b.im.lo for b in boxes), max(b.im.hi for b in boxes)),
    )


def _components_boxes(boxes: list[ComplexBox]) -> list[list[int]]:
    n = len(boxes)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = True
        stack = [s]
        while stack:
            i = stack.pop()
            for j in range(n):
                if not seen[j] and boxes[i].intersects(boxes[j]):
                    seen[j] = True
                    comp.append(j)
                    stack.append(j)
        comps.append(comp)
    return comps


def _refine_box(fsf: UniPoly, box: ComplexBox, target_bits: int) -> ComplexBox:
    """Shrink an isolating box (exactly one root of fsf inside, counted in
    the closed box) until its half-width drops below 2**-target_bits."""
    threshold = Dyadic(1, -target_bits)
    active = [box]
    while True:
        comps = _components_boxes(active)
        if len(comps) == 1:
            bbox = _bounding_box(active)
            if bbox.half_width() < threshold:
                return bbox
        children = []
        for b in active:
            children.extend(_split_box(b))
        active = [c for c in children if not _interval_excludes(fsf, c)]


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------


def isolate(f: UniPoly, quality: int) -> RootSet:
    """Isolating boxes, sorted lexicographically by (re.lo, im.lo), with
    multiplicities; every box half-width below 2**-quality."""
    if f.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    if quality < 1:
        raise ValueError("quality must be at least 1")
    fp = f.primitive()
    if fp.degree <= 0:
        return RootSet(f, UniPoly((1,)), (), quality)
    parts = squarefree_decomposition(fp)
    fsf = UniPoly((1,))
    for g, _ in parts:
        fsf = fsf * g
    fsf = fsf.primitive()
    raw = _isolate_squarefree(fsf)
    refined = [_refine_box(fsf, b, quality) for b in raw]
    roots = []
    if len(parts) == 1:
        mult = parts[0][1]
        roots = [IsolatedRoot(b, mult) for b in refined]
    else:
        for b in refined:
            bits = quality
            while True:
                hits = [m for g, m in parts if not _interval_excludes(g, b)]
                if len(hits) == 1:
                    roots.append(IsolatedRoot(b, hits[0]))
                    break
                bits *= 2
                b = _refine_box(fsf, b, bits)
    roots.sort(key=lambda r: (r.box.re.lo, r.box.im.lo))
    total = sum(r.multiplicity for r in roots)
    assert total == fp.degree, "multiplicities must sum to the degree"
    return RootSet(f, fsf, tuple(roots), quality)


def refine_aligned(rs: RootSet, quality: int) -> RootSet:
    """Refine boxes in place of their positions (no re-sorting), so callers
    holding indices into the root list keep valid references."""
    if quality <= rs.quality:
        return rs
    threshold = Dyadic(1, -quality)
    new_roots = []
    for r in rs.roots:
        if r.box.half_width() < threshold:
            new_roots.append(r)
        else:
            new_roots.append(
                IsolatedRoot(_refine_box(rs.squarefree, r.box, quality), r.multiplicity)
            )
    return RootSet(rs.polynomial, rs.squarefree, tuple(new_roots), quality)


def refine(rs: RootSet, quality: int) -> RootSet:
    """Same roots and multiplicities at a finer quality; output re-sorted
    lexicographically at the achieved quality."""
    if quality <= rs.quality:
        return rs
    aligned = refine_aligned(rs, quality)
    roots = sorted(aligned.roots, key=lambda r: (r.box.re.lo, r.box.im.lo))
    return RootSet(rs.polynomial, rs.squarefree, tuple(roots), quality)
