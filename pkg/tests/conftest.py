"""Shared builders for the test suite: random polynomials, systems with
known rational solutions, and exact reference computations."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from projsolve.polynomials import MultiPoly, PolynomialSystem, UniPoly


def random_unipoly(rng: random.Random, max_degree: int, tau: int, monic: bool = False) -> UniPoly:
    d = rng.randint(1, max_degree)
    coeffs = [rng.randint(-(2**tau), 2**tau) for _ in range(d)]
    lead = 1 if monic else rng.randint(1, 2**tau)
    return UniPoly(tuple(coeffs) + (lead,))


def unipoly_with_roots(roots: list[Fraction]) -> UniPoly:
    """prod (q_i x - p_i): integer polynomial whose roots are exactly the
    given rationals."""
    poly = UniPoly((1,))
    for r in roots:
        poly = poly * UniPoly((-r.numerator, r.denominator))
    return poly


def random_rational_roots(rng: random.Random, count: int, num_bound: int = 12,
                          den_bound: int = 4) -> list[Fraction]:
    out: set[Fraction] = set()
    while len(out) < count:
        out.add(
            Fraction(rng.randint(-num_bound, num_bound), rng.randint(1, den_bound))
        )
    return sorted(out)


def random_multipoly(rng: random.Random, n: int, max_degree: int, tau: int,
                     min_terms: int = 2, max_terms: int = 6) -> MultiPoly:
    terms = {}
    for _ in range(rng.randint(min_terms, max_terms)):
        exps = [0] * n
        budget = rng.randint(0, max_degree)
        for _ in range(budget):
            exps[rng.randrange(n)] += 1
        c = 0
        while c == 0:
            c = rng.randint(-(2**tau), 2**tau)
        terms[tuple(exps)] = terms.get(tuple(exps), 0) + c
    poly = MultiPoly(n, terms)
    if poly.is_zero():
        return MultiPoly.constant(n, 1)
    return poly


def product_grid_system(values: list[list[int]]) -> PolynomialSystem:
    """f_i = prod_j (x_i - values[i][j]): solution set is the full grid."""
    n = len(values)
    polys = []
    for i, vals in enumerate(values):
        poly = MultiPoly.constant(n, 1)
        for v in vals:
            factor = MultiPoly(
                n,
                {
                    tuple(1 if k == i else 0 for k in range(n)): 1,
                    (0,) * n: -v,
                },
            )
            poly = poly * factor
        polys.append(poly)
    return PolynomialSystem(tuple(polys))


def grid_solutions(values: list[list[int]]) -> list[tuple[Fraction, ...]]:
    sols = [()]
    for vals in values:
        sols = [s + (Fraction(v),) for s in sols for v in vals]
    return sols


@pytest.fixture
def rng():
    return random.Random(20260809)
