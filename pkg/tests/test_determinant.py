"""Exact modular determinants against the fraction-free reference."""

from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from projsolve.determinant import det_bareiss, det_crt, det_mod_prime, prime_pool


def test_prime_pool_is_prime_and_descending():
    primes = prime_pool(25)
    assert len(set(primes)) == 25
    assert all(primes[i] > primes[i + 1] for i in range(24))
    for p in primes:
        assert p < 2**31
        assert all(p % q for q in range(2, 1000))


def test_small_matrices():
    assert det_crt([]) == 1
    assert det_bareiss([]) == 1
    assert det_crt([[7]]) == 7
    assert det_crt([[1, 2], [3, 4]]) == -2
    assert det_crt([[0, 1], [1, 0]]) == -1
    assert det_crt([[1, 2], [2, 4]]) == 0


def test_crt_matches_bareiss_50_random(rng):
    for _ in range(50):
        m = rng.randint(1, 12)
        mat = [[rng.randint(-(2**32), 2**32) for _ in range(m)] for _ in range(m)]
        assert det_crt(mat) == det_bareiss(mat)


def test_singular_and_structured(rng):
    for _ in range(10):
        m = rng.randint(2, 8)
        mat = [[rng.randint(-100, 100) for _ in range(m)] for _ in range(m)]
        mat[m - 1] = list(mat[0])  # repeated row
        assert det_crt(mat) == 0
    # triangular: product of the diagonal
    m = 9
    mat = [[0] * m for _ in range(m)]
    expected = 1
    for i in range(m):
        mat[i][i] = (i + 2) * (-1) ** i
        expected *= mat[i][i]
        for j in range(i + 1, m):
            mat[i][j] = rng.randint(-50, 50)
    assert det_crt(mat) == expected


@given(st.integers(min_value=0, max_value=2**31 - 1))
@settings(max_examples=50)
def test_det_mod_prime_consistency(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 7)
    mat = [[rng.randint(-(2**20), 2**20) for _ in range(m)] for _ in range(m)]
    p = prime_pool(3)[seed % 3]
    assert det_mod_prime(mat, p) == det_bareiss(mat) % p
