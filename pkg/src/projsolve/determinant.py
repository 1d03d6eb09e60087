"""Exact integer determinants via modular Gaussian elimination plus
Chinese remaindering.

The prime pool is a fixed, deterministically generated list of primes
just below 2**31, small enough that multiplier*entry products stay
inside int64 for vectorized row updates.  The number of primes is chosen
from the Hadamard bound, so the Chinese remainder reconstruction is
exact, never a guess.  A fraction-free Bareiss elimination is kept
alongside as an independent slow path.

Determinant jobs across evaluation points and primes are independent of
each other; results are combined deterministically.
"""

from __future__ import annotations

from math import isqrt

import numpy as np

__all__ = ["prime_pool", "det_crt", "det_bareiss", "hadamard_bits", "det_mod_prime"]

_PRIME_CEILING = (1 << 31) - 1
_pool: list[int] = []


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic Miller-Rabin witnesses, valid far beyond 2**31
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_pool(count: int) -> list[int]:
    """The first `count` primes below 2**31, descending."""
    candidate = _pool[-1] - 2 if _pool else _PRIME_CEILING
    while len(_pool) < count:
        if _is_prime(candidate):
            _pool.append(candidate)
        candidate -= 2
    return _pool[:count]


def hadamard_bits(matrix: list[list[int]]) -> int:
    """Upper bound, in bits, on |det|."""
    total = 0
    for row in matrix:
        s = sum(c * c for c in row)
        if s == 0:
            return 0
        total += isqrt(s - 1).bit_length() + 1
    return total


def det_mod_prime(matrix: list[list[int]], p: int) -> int:
    """Determinant modulo p by vectorized elimination; p below 2**31 keeps
    all intermediate products within int64."""
    m = len(matrix)
    if m == 0:
        return 1 % p
    a = np.array([[c % p for c in row] for row in matrix], dtype=np.int64)
    det = 1
    sign = 1
    for k in range(m):
        col = a[k:, k]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            return 0
        r = k + int(nz[0])
        if r != k:
            a[[k, r]] = a[[r, k]]
            sign = -sign
        pivot = int(a[k, k])
        det = det * pivot % p
        if k + 1 < m:
            inv = pow(pivot, p - 2, p)
            factors = (a[k + 1 :, k] * inv) % p
            a[k + 1 :, k:] = (a[k + 1 :, k:] - np.outer(factors, a[k, k:])) % p
    return det * sign % p


def det_crt(matrix: list[list[int]]) -> int:
    """Exact determinant: modular images plus Chinese remaindering with a
    prime count taken from the Hadamard bound."""
    m = len(matrix)
    if m == 0:
        return 1
    if m <= 3:
        return det_bareiss(matrix)
    bits = hadamard_bits(matrix)
    if bits == 0:
        return 0
    count = (bits + 2) // 30 + 1
    primes = prime_pool(count)
    residue = 0
    modulus = 1
    for p in primes:
        rp = det_mod_prime(matrix, p)
        # combine: residue mod modulus, rp mod p
        inc = (rp - residue) * pow(modulus, -1, p) % p
        residue += modulus * inc
        modulus *= p
    if residue > modulus // 2:
        residue -= modulus
    return residue


def det_bareiss(matrix: list[list[int]]) -> int:
    """Fraction-free exact determinant; the independent reference for the
    modular path and the fast path for tiny matrices."""
    m = len(matrix)
    if m == 0:
        return 1
    a = [list(row) for row in matrix]
    sign = 1
    prev = 1
    for k in range(m - 1):
        if a[k][k] == 0:
            for r in range(k + 1, m):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, m):
            for j in range(k + 1, m):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[m - 1][m - 1]
