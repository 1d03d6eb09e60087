"""Elimination polynomials along linear forms via hidden-variable
Macaulay resultants.

To project the solutions of a square system along a form with unit
pivot coefficient, the pivot variable is sheared into the direction of
the form, then hidden: the system becomes n polynomials over Z[x] in the
remaining variables, which are homogenized at their generic degrees.
The classical Macaulay matrix of that homogeneous system has
determinant Res * det S, where S is the square submatrix on the
monomials divisible by more than one of the assigned variable powers.
Both determinants are recovered exactly by evaluating the hidden
variable at small integers, computing integer determinants by modular
elimination plus Chinese remaindering, and interpolating; the quotient
is the elimination polynomial.  When det S vanishes identically, the
generalized characteristic polynomial fallback divides the trailing
t-coefficients of det(M - tI) and det(S - tI) instead.

All matrix evaluations across (point, prime) pairs are independent and
deterministically combined; given the same seed, the whole oracle is a
pure function of its inputs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations_with_replacement
from math import prod

from .determinant import det_bareiss, det_crt
from .errors import NotZeroDimensionalError
from .polynomials import MultiPoly, PolynomialSystem, UniPoly, homogenize, restrict_to_infinity

__all__ = [
    "LinearForm",
    "FormFamily",
    "Strongness",
    "EliminationResult",
    "MacaulayMatrix",
    "ShearChoice",
    "shear_system",
    "build_macaulay",
    "hidden_var_resultant",
    "choose_shear",
    "check_no_infinity",
    "forms_resultant_nonzero",
    "certify_strong",
]


@dataclass(frozen=True, slots=True)
class LinearForm:
    """sum l_i x_i with integer coefficients and l_pivot = 1."""

    coefficients: tuple[int, ...]
    pivot: int

    def __post_init__(self):
        if not (0 <= self.pivot < len(self.coefficients)):
            raise ValueError("pivot out of range")
        if self.coefficients[self.pivot] != 1:
            raise ValueError("pivot coefficient must be exactly 1")

    @classmethod
    def coordinate(cls, n: int, idx: int) -> "LinearForm":
        coeffs = [0] * n
        coeffs[idx] = 1
        return cls(tuple(coeffs), idx)

    @classmethod
    def embedded(cls, n: int, indices: tuple[int, ...], block_coeffs) -> "LinearForm":
        """Place block coefficients at the given variable indices, zero
        elsewhere; the pivot is the first block variable."""
        coeffs = [0] * n
        for idx, c in zip(indices, block_coeffs):
            coeffs[idx] = c
        return cls(tuple(coeffs), indices[0])

    @property
    def bitsize(self) -> int:
        return max(abs(c).bit_length() for c in self.coefficients)

    def value_at(self, point) -> Fraction:
        return sum((Fraction(c) * Fraction(x) for c, x in zip(self.coefficients, point)),
                   Fraction(0))


@dataclass(frozen=True, slots=True)
class FormFamily:
    """One-parameter family of forms: coefficients a0_i + a1_i * lam, with a
    fixed unit pivot (a0_pivot = 1, a1_pivot = 0)."""

    a0: tuple[int, ...]
    a1: tuple[int, ...]
    pivot: int

    def __post_init__(self):
        if self.a0[self.pivot] != 1 or self.a1[self.pivot] != 0:
            raise ValueError("family pivot must stay at coefficient 1")

    def instantiate(self, lam: int) -> LinearForm:
        return LinearForm(
            tuple(a + b * lam for a, b in zip(self.a0, self.a1)), self.pivot
        )


class Strongness(Enum):
    CERTIFIED_STRONG = "certified-strong"
    UNKNOWN = "unknown"
    CERTIFIED_NOT_STRONG = "certified-not-strong"


@dataclass(frozen=True)
class EliminationResult:
    """A univariate elimination polynomial along a form: its roots contain
    the projections of all solutions; when certified strong, they are
    exactly the projections."""

    polynomial: UniPoly
    along: LinearForm
    strong: Strongness = Strongness.UNKNOWN
    shear_lambda: int | None = None


@dataclass(frozen=True)
class ShearChoice:
    lambda_star: int
    candidate_set_size: int
    form: LinearForm
    sheared: tuple[MultiPoly, ...]


def shear_system(system: PolynomialSystem, form: LinearForm) -> PolynomialSystem:
    """Substitute x_pivot <- x_pivot - sum_{i != pivot} l_i x_i in every
    polynomial, so the form's value becomes the pivot coordinate."""
    return PolynomialSystem(
        tuple(p.substitute_linear(form.pivot, form.coefficients) for p in system.polys)
    )


# ---------------------------------------------------------------------------
# Macaulay matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MacaulayMatrix:
    """Classical Macaulay matrix of n homogeneous polynomials in n
    variables, with entries in Z[x] (the hidden variable).

    Columns (and rows) are indexed by the monomials of degree
    degree_param; the monomial is assigned to the polynomial of smallest
    index whose matched variable power divides it, and the row holds the
    cofactor multiple of that polynomial.  s_indices marks the monomials
    divisible by at least two of the matched powers; the principal
    submatrix on them is the extraneous-factor block S (empty for two
    polynomials, where the construction is the Sylvester matrix)."""

    dimension: int
    degree_param: int
    col_monomials: tuple[tuple[int, ...], ...]
    assignments: tuple[int, ...]
    entries: tuple[tuple[UniPoly, ...], ...]
    s_indices: tuple[int, ...]

    def s_submatrix(self) -> list[list[UniPoly]]:
        return [[self.entries[i][j] for j in self.s_indices] for i in self.s_indices]

    def eval_matrix(self, rows: list[list[UniPoly]], xi: int) -> list[list[int]]:
        return [[e.eval_int(xi) for e in row] for row in rows]

    def full(self) -> list[list[UniPoly]]:
        return [list(row) for row in self.entries]


def _monomials_of_degree(nv: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of the given total degree, in a fixed
    deterministic order."""
    if nv == 0:
        return [()] if degree == 0 else []
    out = []
    for bars in combinations_with_replacement(range(nv), degree):
        e = [0] * nv
        for b in bars:
            e[b] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def build_macaulay(
    hidden_polys: list[dict[tuple[int, ...], UniPoly]], degrees: list[int]
) -> MacaulayMatrix:
    """hidden_polys[i] maps full (homogenized) exponent tuples to their
    Z[x] coefficients; degrees[i] is the homogeneous degree of polynomial
    i.  Polynomial i is matched with variable slot i for the monomial
    assignment."""
    n = len(hidden_polys)
    if not hidden_polys or any(not p for p in hidden_polys):
        raise NotZeroDimensionalError("zero polynomial in the hidden system")
    nv = len(next(iter(hidden_polys[0])))
    if nv != n:
        raise ValueError("hidden system must be square")
    big_n = sum(d - 1 for d in degrees) + 1
    if big_n < 0:
        raise NotZeroDimensionalError(
            "degenerate degrees after hiding: system is not zero-dimensional "
            "along this direction"
        )
    monomials = _monomials_of_degree(nv, big_n)
    index = {mono: k for k, mono in enumerate(monomials)}
    zero = UniPoly(())
    assignments = []
    s_indices = []
    for mono in monomials:
        owners = [i for i in range(n) if mono[i] >= degrees[i]]
        if not owners:
            raise AssertionError("every degree-N monomial must have an owner")
        assignments.append(owners[0])
        if len(owners) >= 2:
            s_indices.append(index[mono])
    entries = []
    for k, mono in enumerate(monomials):
        i = assignments[k]
        cofactor = list(mono)
        cofactor[i] -= degrees[i]
        row = [zero] * len(monomials)
        for exps, coeff in hidden_polys[i].items():
            target = tuple(a + b for a, b in zip(cofactor, exps))
            col = index.get(target)
            if col is not None:
                row[col] = coeff
        entries.append(tuple(row))
    return MacaulayMatrix(
        dimension=len(monomials),
        degree_param=big_n,
        col_monomials=tuple(monomials),
        assignments=tuple(assignments),
        entries=tuple(entries),
        s_indices=tuple(s_indices),
    )


def _hide_and_homogenize(
    system: PolynomialSystem, pivot: int
) -> tuple[list[dict[tuple[int, ...], UniPoly]], list[int]]:
    """View each polynomial over Z[x_pivot] and homogenize in the remaining
    variables at the generic degrees."""
    hidden = []
    degrees = []
    for p in system.polys:
        if p.is_zero():
            raise NotZeroDimensionalError("zero polynomial in the system")
        grouped = p.coefficients_in(pivot)
        d_prime = max(sum(e) for e in grouped)
        full = {}
        for exps, coeff in grouped.items():
            full[exps + (d_prime - sum(exps),)] = coeff
        hidden.append(full)
        degrees.append(d_prime)
    return hidden, degrees


# ---------------------------------------------------------------------------
# exact interpolation
# ---------------------------------------------------------------------------


def _eval_points(count: int):
    pts = [0]
    k = 1
    while len(pts) < count:
        pts.append(k)
        if len(pts) < count:
            pts.append(-k)
        k += 1
    return pts[:count]


def _interpolate_integer_poly(xs: list[int], ys: list[int]) -> UniPoly:
    """Newton interpolation over the rationals; the result must have
    integer coefficients."""
    k = len(xs)
    divided = [Fraction(y) for y in ys]
    for level in range(1, k):
        for i in range(k - 1, level - 1, -1):
            divided[i] = (divided[i] - divided[i - 1]) / (xs[i] - xs[i - level])
    # Horner expansion of the Newton form
    acc = [divided[k - 1]]
    for i in range(k - 2, -1, -1):
        # acc = acc * (x - xs[i]) + divided[i]
        nxt = [Fraction(0)] * (len(acc) + 1)
        for j, c in enumerate(acc):
            nxt[j + 1] += c
            nxt[j] -= c * xs[i]
        nxt[0] += divided[i]
        acc = nxt
    ints = []
    for c in acc:
        if c.denominator != 1:
            raise ArithmeticError("interpolation produced a non-integer coefficient")
        ints.append(c.numerator)
    return UniPoly(tuple(ints))


def _row_degree_bound(rows: list[list[UniPoly]]) -> int:
    total = 0
    for row in rows:
        total += max((e.degree for e in row if not e.is_zero()), default=0)
    return total


def _interpolated_det(rows: list[list[UniPoly]], degree_bound: int,
                      verify_extra: int = 2) -> UniPoly:
    """det of a Z[x]-entry matrix by evaluation at degree_bound+1 integer
    points, exact CRT determinants, and interpolation; a couple of extra
    points double-check the degree bound."""
    m = len(rows)
    if m == 0:
        return UniPoly((1,))
    pts = _eval_points(degree_bound + 1 + verify_extra)
    base, extra = pts[: degree_bound + 1], pts[degree_bound + 1 :]
    values = [det_crt([[e.eval_int(x) for e in row] for row in rows]) for x in base]
    poly = _interpolate_integer_poly(base, values)
    for x in extra:
        check = det_crt([[e.eval_int(x) for e in row] for row in rows])
        if poly.eval_int(x) != check:
            raise ArithmeticError("degree bound violated in determinant interpolation")
    return poly


# ---------------------------------------------------------------------------
# the oracle
# ---------------------------------------------------------------------------


def hidden_var_resultant(
    system: PolynomialSystem, form: LinearForm, seed: int = 0
) -> EliminationResult:
    """Elimination polynomial for the system along the form.

    The pivot variable is sheared into the form's direction and hidden;
    the Macaulay determinant quotient det M(x) / det S(x) is computed by
    evaluation, exact modular determinants, and interpolation.  The
    number of evaluation points for det M is the Bezout bound plus the
    true degree of det S (checked at spare points), so det S is computed
    first.  A vanishing det S switches to the generalized characteristic
    polynomial quotient.  The result is primitive with positive leading
    coefficient; an identically zero resultant raises
    NotZeroDimensionalError."""
    n = system.num_vars
    for p in system.polys:
        if p.is_zero():
            raise NotZeroDimensionalError("zero polynomial in the system")
    if n == 1:
        poly = system.polys[0].to_unipoly().primitive()
        return EliminationResult(poly, form, Strongness.UNKNOWN)
    sheared = shear_system(system, form)
    hidden, degrees = _hide_and_homogenize(sheared, form.pivot)
    mac = build_macaulay(hidden, degrees)
    bezout = prod(max(p.total_degree, 0) for p in system.polys)
    s_rows = mac.s_submatrix()
    det_s = _interpolated_det(s_rows, _row_degree_bound(s_rows))
    if det_s.is_zero():
        rpoly = _gcp_quotient(mac)
    else:
        full = mac.full()
        bound = min(bezout + det_s.degree, _row_degree_bound(full))
        try:
            det_m = _interpolated_det(full, bound)
        except ArithmeticError:
            det_m = _interpolated_det(full, _row_degree_bound(full))
        if det_m.is_zero():
            raise NotZeroDimensionalError(
                "resultant vanishes identically: system is not zero-dimensional "
                "along this direction"
            )
        rpoly = det_m.exact_div(det_s)
    rpoly = rpoly.primitive()
    if rpoly.degree > bezout:
        raise NotZeroDimensionalError(
            "elimination polynomial exceeds the Bezout bound"
        )
    return EliminationResult(rpoly, form, Strongness.UNKNOWN)


def _char_poly_in_t(rows: list[list[UniPoly]], xi: int) -> list[int]:
    """Coefficients (in t) of det(M(xi) - t I) via interpolation at m+1
    integer values of t."""
    m = len(rows)
    base = [[e.eval_int(xi) for e in row] for row in rows]
    ts = _eval_points(m + 1)
    vals = []
    for t in ts:
        shifted = [
            [base[i][j] - (t if i == j else 0) for j in range(m)] for i in range(m)
        ]
        vals.append(det_crt(shifted))
    return list(_interpolate_integer_poly(ts, vals).coeffs)


def _gcp_quotient(mac: MacaulayMatrix) -> UniPoly:
    """Generalized characteristic polynomial fallback: the quotient of the
    trailing t-coefficients of det(M - tI) and det(S - tI), each
    recovered over a grid of (hidden variable, t) evaluations."""
    full = mac.full()
    s_rows = mac.s_submatrix()

    def trailing_coeff(rows: list[list[UniPoly]]) -> UniPoly:
        m = len(rows)
        if m == 0:
            return UniPoly((1,))
        x_bound = _row_degree_bound(rows)
        xs = _eval_points(x_bound + 1)
        per_point = [_char_poly_in_t(rows, xi) for xi in xs]
        for k in range(m + 1):
            ys = [cp[k] if k < len(cp) else 0 for cp in per_point]
            if any(ys):
                return _interpolate_integer_poly(xs, ys)
        raise AssertionError("characteristic polynomial cannot vanish identically")

    t_m = trailing_coeff(full)
    t_s = trailing_coeff(s_rows)
    return t_m.exact_div(t_s)


# ---------------------------------------------------------------------------
# solutions at infinity and strongness
# ---------------------------------------------------------------------------


def leading_forms(system: PolynomialSystem) -> list[MultiPoly]:
    """Top-degree homogeneous parts: the restriction to infinity of the
    homogenized system."""
    return [restrict_to_infinity(homogenize(p, p.total_degree)) for p in system.polys]


def forms_resultant_nonzero(forms: list[MultiPoly]) -> bool:
    """Macaulay resultant test for n homogeneous forms in n variables:
    True when the resultant is nonzero, so the forms share only the
    trivial zero."""
    if any(f.is_zero() for f in forms):
        return False
    hidden = []
    degrees = []
    for f in forms:
        hidden.append({e: UniPoly((c,)) for e, c in f.terms.items()})
        degrees.append(f.total_degree)
    mac = build_macaulay(hidden, degrees)
    s_rows = mac.s_submatrix()
    det_s = det_bareiss([[e.eval_int(0) for e in row] for row in s_rows])
    if det_s != 0:
        det_m = det_crt([[e.eval_int(0) for e in row] for row in mac.full()])
        return det_m != 0
    # GCP: resultant is the constant term of det(M - tI)/det(S - tI)
    phi_m = _char_poly_in_t(mac.full(), 0)
    phi_s = _char_poly_in_t(s_rows, 0)
    quotient = UniPoly(tuple(phi_m)).exact_div(UniPoly(tuple(phi_s)))
    return bool(quotient.coeffs) and quotient.coeffs[0] != 0


def check_no_infinity(system: PolynomialSystem) -> bool:
    """True when the homogenized system has no solution at infinity, which
    holds exactly when the Macaulay resultant of the leading forms is
    nonzero."""
    return forms_resultant_nonzero(leading_forms(system))


def _has_pivot_free_top_term(poly: MultiPoly, pivot: int) -> bool:
    d = poly.total_degree
    return any(sum(e) == d and e[pivot] == 0 for e in poly.terms)


def choose_shear(
    system: PolynomialSystem,
    family: FormFamily,
    lam_set: list[int],
    rng: random.Random,
) -> ShearChoice:
    """Las Vegas selection of lam in lam_set such that every sheared
    polynomial keeps a top-degree term free of the pivot variable; at
    least half the candidates work, so a few draws suffice (a
    deterministic scan backstops the sampling)."""
    if len(lam_set) < 1:
        raise ValueError("empty candidate set")

    def attempt(lam: int) -> ShearChoice | None:
        form = family.instantiate(lam)
        sheared = tuple(
            p.substitute_linear(form.pivot, form.coefficients) for p in system.polys
        )
        if all(
            _has_pivot_free_top_term(q, form.pivot) for q in sheared
        ):
            return ShearChoice(lam, len(lam_set), form, sheared)
        return None

    for _ in range(64 * len(lam_set)):
        choice = attempt(lam_set[rng.randrange(len(lam_set))])
        if choice is not None:
            return choice
    for lam in lam_set:
        choice = attempt(lam)
        if choice is not None:
            return choice
    raise NotZeroDimensionalError(
        "no shear in the candidate set exposes pivot-free top terms"
    )


def certify_strong(result: EliminationResult, system: PolynomialSystem) -> Strongness:
    """Certified-strong when (a) the sheared system has no solution at
    infinity and (b) every sheared polynomial has a top-degree term free
    of the pivot; otherwise unknown."""
    if system.num_vars == 1:
        return Strongness.CERTIFIED_STRONG
    sheared = shear_system(system, result.along)
    if not all(
        _has_pivot_free_top_term(q, result.along.pivot) for q in sheared.polys
    ):
        return Strongness.UNKNOWN
    if not check_no_infinity(sheared):
        return Strongness.UNKNOWN
    return Strongness.CERTIFIED_STRONG
