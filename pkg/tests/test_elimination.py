"""The elimination oracle: Macaulay construction against the Sylvester
matrix, hidden-variable resultants against an independent determinant
expansion, strongness certificates, and the infinity check."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from projsolve.dyadic import ComplexBox, Dyadic, DyadicInterval
from projsolve.elimination import (
    FormFamily,
    LinearForm,
    Strongness,
    build_macaulay,
    certify_strong,
    check_no_infinity,
    choose_shear,
    hidden_var_resultant,
    shear_system,
)
from projsolve.errors import NotZeroDimensionalError
from projsolve.polynomials import (
    MultiPoly,
    PolynomialSystem,
    UniPoly,
    parse_polynomial,
    parse_system_text,
)
from conftest import random_multipoly


# ---------------------------------------------------------------------------
# an independent Sylvester-resultant oracle (subset-DP determinant over
# exact polynomial entries; shares nothing with the modular path)
# ---------------------------------------------------------------------------


def sylvester_matrix(f_coeffs: list[UniPoly], g_coeffs: list[UniPoly]):
    """Rows of x^k * f and x^k * g in the monomial basis; entries in Z[x1].
    f_coeffs / g_coeffs are coefficient lists in the eliminated variable
    (constant first) with entries in Z[x1]."""
    m = len(f_coeffs) - 1
    k = len(g_coeffs) - 1
    size = m + k
    zero = UniPoly(())
    rows = []
    for shift in range(k):
        row = [zero] * size
        for i, c in enumerate(reversed(f_coeffs)):
            row[shift + i] = c
        rows.append(row)
    for shift in range(m):
        row = [zero] * size
        for i, c in enumerate(reversed(g_coeffs)):
            row[shift + i] = c
        rows.append(row)
    return rows


def poly_det_dp(rows) -> UniPoly:
    """Determinant by Laplace expansion with column-subset memoization;
    exact polynomial arithmetic throughout."""
    size = len(rows)
    if size == 0:
        return UniPoly((1,))
    table = {0: UniPoly((1,))}
    for r in range(size):
        nxt = {}
        for mask, value in table.items():
            sign = 1
            for col in range(size):
                bit = 1 << col
                if mask & bit:
                    continue
                entry = rows[r][col]
                if not entry.is_zero():
                    contrib = value * entry
                    if sign < 0:
                        contrib = -contrib
                    new_mask = mask | bit
                    acc = nxt.get(new_mask)
                    nxt[new_mask] = contrib if acc is None else acc + contrib
                sign = -sign
        table = nxt
    return table.get((1 << size) - 1, UniPoly(()))


def sylvester_resultant_x2(system: PolynomialSystem) -> UniPoly:
    """Resultant of a bivariate system with respect to x2, as a polynomial
    in x1."""
    coeff_lists = []
    for p in system.polys:
        deg2 = p.degree_in(1)
        cl = [UniPoly(()) for _ in range(deg2 + 1)]
        for exps, coeff in p.terms.items():
            e1, e2 = exps
            arr = list(cl[e2].coeffs)
            if len(arr) < e1 + 1:
                arr += [0] * (e1 + 1 - len(arr))
            arr[e1] += coeff
            cl[e2] = UniPoly(tuple(arr))
        coeff_lists.append(cl)
    return poly_det_dp(sylvester_matrix(coeff_lists[0], coeff_lists[1]))


# ---------------------------------------------------------------------------
# Macaulay construction
# ---------------------------------------------------------------------------


def test_macaulay_bivariate_is_sylvester_shaped():
    # two binary forms a*x2 + b*x3, c*x2 + e*x3
    hidden = [
        {(1, 0): UniPoly((3,)), (0, 1): UniPoly((4,))},
        {(1, 0): UniPoly((5,)), (0, 1): UniPoly((7,))},
    ]
    mac = build_macaulay(hidden, [1, 1])
    assert mac.dimension == 2
    assert mac.s_indices == ()
    from projsolve.determinant import det_bareiss

    det = det_bareiss([[e.eval_int(0) for e in row] for row in mac.full()])
    assert det in (3 * 7 - 4 * 5, -(3 * 7 - 4 * 5))


def test_macaulay_degrees_and_s_block():
    # three quadratic forms in three variables: N = 4, S nonempty
    rng = random.Random(5)
    hidden = []
    for _ in range(3):
        terms = {}
        for e in [(2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1)]:
            terms[e] = UniPoly((rng.randint(-9, 9),))
        hidden.append(terms)
    mac = build_macaulay(hidden, [2, 2, 2])
    assert mac.degree_param == 4
    assert mac.dimension == 15  # monomials of degree 4 in 3 variables
    assert len(mac.s_indices) > 0
    for idx in mac.s_indices:
        mono = mac.col_monomials[idx]
        assert sum(1 for i in range(3) if mono[i] >= 2) >= 2


def test_macaulay_rejects_zero_poly():
    with pytest.raises(NotZeroDimensionalError):
        build_macaulay([{}, {(1, 0): UniPoly((1,))}], [0, 1])


# ---------------------------------------------------------------------------
# hidden-variable resultants
# ---------------------------------------------------------------------------


def test_resultant_examples():
    sys1 = parse_system_text("x1^2 + x2^2 - 1\nx1 - x2")
    r = hidden_var_resultant(sys1, LinearForm.coordinate(2, 0))
    assert r.polynomial.coeffs == (-1, 0, 2)

    sys2 = parse_system_text("x1 - 3\nx2 - 5")
    r2 = hidden_var_resultant(sys2, LinearForm.coordinate(2, 0))
    assert r2.polynomial.coeffs == (-3, 1)

    sys3 = parse_system_text("vars 2\nx1\nx1")
    with pytest.raises(NotZeroDimensionalError):
        hidden_var_resultant(sys3, LinearForm.coordinate(2, 0))


def test_resultant_agrees_with_sylvester_100_random(rng):
    agreements = 0
    for _ in range(100):
        f = random_multipoly(rng, 2, 4, 8, min_terms=2, max_terms=7)
        g = random_multipoly(rng, 2, 4, 8, min_terms=2, max_terms=7)
        if f.degree_in(1) < 1 or g.degree_in(1) < 1:
            continue
        system = PolynomialSystem((f, g))
        oracle = sylvester_resultant_x2(system)
        try:
            res = hidden_var_resultant(system, LinearForm.coordinate(2, 0))
        except NotZeroDimensionalError:
            assert oracle.is_zero()
            continue
        expect = oracle.primitive()
        got = res.polynomial
        assert got == expect or got == -expect
        agreements += 1
    assert agreements >= 60


def test_resultant_root_containment(rng):
    """Every known solution's projection along the form is a root of the
    elimination polynomial."""
    for _ in range(20):
        a_vals = rng.sample(range(-5, 6), 2)
        b_vals = rng.sample(range(-5, 6), 2)
        f = parse_polynomial(
            f"x1^2 - {a_vals[0] + a_vals[1]}*x1 + {a_vals[0] * a_vals[1]}".replace(
                "- -", "+ "
            ).replace("+ -", "- "),
            2,
        )
        g = parse_polynomial(
            f"x2^2 - {b_vals[0] + b_vals[1]}*x2 + {b_vals[0] * b_vals[1]}".replace(
                "- -", "+ "
            ).replace("+ -", "- "),
            2,
        )
        system = PolynomialSystem((f, g))
        coeffs = (1, rng.randint(-4, 4))
        form = LinearForm(coeffs, 0)
        res = hidden_var_resultant(system, form)
        for av in a_vals:
            for bv in b_vals:
                value = Fraction(av + coeffs[1] * bv)
                assert res.polynomial.eval_fraction(value) == 0


def test_resultant_degree_bound(rng):
    for _ in range(25):
        f = random_multipoly(rng, 2, 3, 6)
        g = random_multipoly(rng, 2, 3, 6)
        if f.total_degree < 1 or g.total_degree < 1:
            continue
        system = PolynomialSystem((f, g))
        try:
            res = hidden_var_resultant(system, LinearForm.coordinate(2, 0))
        except NotZeroDimensionalError:
            continue
        assert res.polynomial.degree <= system.bezout_bound


def test_evaluation_identity(rng):
    """det M(xi) * det S = det M interpolated then evaluated, when S is
    constant and nonsingular (the bivariate case: det S = 1)."""
    from projsolve.determinant import det_crt
    from projsolve.elimination import _hide_and_homogenize

    for _ in range(10):
        f = random_multipoly(rng, 2, 3, 5)
        g = random_multipoly(rng, 2, 3, 5)
        if f.degree_in(1) < 1 or g.degree_in(1) < 1:
            continue
        system = PolynomialSystem((f, g))
        sheared = shear_system(system, LinearForm.coordinate(2, 0))
        hidden, degrees = _hide_and_homogenize(sheared, 0)
        mac = build_macaulay(hidden, degrees)
        oracle = sylvester_resultant_x2(system)
        for xi in (0, 1, -2, 3):
            direct = det_crt([[e.eval_int(xi) for e in row] for row in mac.full()])
            assert abs(direct) == abs(oracle.eval_int(xi))


# ---------------------------------------------------------------------------
# shear selection, infinity, strongness
# ---------------------------------------------------------------------------


def test_choose_shear_examples():
    rng = random.Random(3)
    # f = x1*x2: every nonzero lambda works (term -lam*x2^2 appears)
    system = PolynomialSystem(
        (parse_polynomial("x1*x2 - 2", 2), parse_polynomial("x2^2 - 1", 2))
    )
    family = FormFamily((1, 0), (0, 1), 0)
    choice = choose_shear(system, family, list(range(9)), rng)
    assert choice.lambda_star != 0

    # f = x2^2 alone satisfies the condition for every lambda, including 0
    easy = PolynomialSystem(
        (parse_polynomial("x2^2 - 3", 2), parse_polynomial("x2 - x1", 2))
    )
    ok_zero = choose_shear(easy, family, [0], rng)
    assert ok_zero.lambda_star == 0

    # f = x1^2 needs lambda != 0 (term lam^2 x2^2)
    hard = PolynomialSystem(
        (parse_polynomial("x1^2 - 2", 2), parse_polynomial("x2^2 - 1", 2))
    )
    choice2 = choose_shear(hard, family, list(range(6)), rng)
    assert choice2.lambda_star != 0


def test_check_no_infinity_examples():
    assert check_no_infinity(parse_system_text("x1 - 1\nx2 - 1")) is True
    assert check_no_infinity(parse_system_text("x1*x2 - 1\nx2 - 1")) is False
    assert check_no_infinity(parse_system_text("x1^2 + x2^2 - 1\nx1 - x2")) is True


def test_certify_strong_cases():
    # both hypotheses hold: top terms free of x1, no infinite solutions
    good = parse_system_text(
        "x1^2 + 2*x1*x2 + x2^2 - 3*x1 - 3*x2 + 2\nx2^2 - 3*x2"
    )
    res = hidden_var_resultant(good, LinearForm.coordinate(2, 0))
    assert certify_strong(res, good) is Strongness.CERTIFIED_STRONG

    # top term depends on the pivot: hypothesis fails
    term_fail = parse_system_text("x1^2 - x1\nx2^2 - x2")
    res2 = hidden_var_resultant(term_fail, LinearForm.coordinate(2, 0))
    assert certify_strong(res2, term_fail) is Strongness.UNKNOWN

    # solutions at infinity
    inf_sys = parse_system_text("x1*x2 - 1\nx2 - 1")
    res3 = hidden_var_resultant(inf_sys, LinearForm.coordinate(2, 1))
    assert certify_strong(res3, inf_sys) is Strongness.UNKNOWN


def test_strong_root_counts_match_projections(rng):
    """Criterion-5-style check at module level: on systems satisfying both
    hypotheses, the distinct roots of the elimination polynomial are
    exactly the distinct projections of the known solutions."""
    from projsolve.isolation import isolate
    from projsolve.polynomials import squarefree_part

    for _ in range(5):
        a_vals = sorted(rng.sample(range(-6, 7), 2))
        b_vals = sorted(rng.sample(range(-6, 7), 2))
        # f1 = prod (x1 + x2 - a), f2 = prod (x2 - b)
        f1 = MultiPoly.constant(2, 1)
        for a in a_vals:
            f1 = f1 * MultiPoly(2, {(1, 0): 1, (0, 1): 1, (0, 0): -a})
        f2 = MultiPoly.constant(2, 1)
        for b in b_vals:
            f2 = f2 * MultiPoly(2, {(0, 1): 1, (0, 0): -b})
        system = PolynomialSystem((f1, f2))
        res = hidden_var_resultant(system, LinearForm.coordinate(2, 0))
        assert certify_strong(res, system) is Strongness.CERTIFIED_STRONG
        projections = {Fraction(a - b) for a in a_vals for b in b_vals}
        roots = isolate(squarefree_part(res.polynomial), 10)
        assert len(roots) == len(projections)
        for val in projections:
            assert res.polynomial.eval_fraction(val) == 0
