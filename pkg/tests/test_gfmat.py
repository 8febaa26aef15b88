import random

import numpy as np
import pytest

from fatpoints import gfmat
from fatpoints.gfmat import (DEFAULT_PRIME, GFMatrix, field_inverse, is_prime,
                             legendre, rank, rational_rank, sqrt_mod)

PRIMES = [101, 32003, DEFAULT_PRIME]


def brute_inverse(a, p):
    # independent oracle: scan for the inverse
    for b in range(1, p):
        if a * b % p == 1:
            return b
    raise AssertionError


def test_is_prime():
    assert is_prime(2) and is_prime(3) and is_prime(101)
    assert is_prime(DEFAULT_PRIME)
    assert not is_prime(1) and not is_prime(0) and not is_prime(-7)
    assert not is_prime(DEFAULT_PRIME + 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2,3,5,7


def test_field_inverse_identity():
    assert field_inverse(1, 101) == 1


def test_field_inverse_minus_one():
    for p in PRIMES:
        assert field_inverse(p - 1, p) == p - 1


def test_field_inverse_brute_force():
    # frozen from the scan oracle
    assert brute_inverse(3, 101) == 34
    assert field_inverse(3, 101) == 34


def test_field_inverse_zero_raises():
    with pytest.raises(ZeroDivisionError):
        field_inverse(0, 101)
    with pytest.raises(ZeroDivisionError):
        field_inverse(101, 101)


def test_field_inverse_involution_exhaustive():
    for p in [3, 5, 7, 11, 101, 211, 499, 997]:
        for a in range(1, p):
            assert field_inverse(field_inverse(a, p), p) == a


def test_rank_identity():
    assert rank(GFMatrix(np.eye(3, dtype=np.int64), 101)) == 3


def test_rank_zero_matrix():
    assert rank(GFMatrix(np.zeros((4, 7), dtype=np.int64), 101)) == 0
    assert rank(GFMatrix(np.zeros((0, 5), dtype=np.int64), 101)) == 0


def test_rank_matches_rational_oracle():
    rng = random.Random(7)
    for _ in range(30):
        rows, cols = rng.randint(1, 8), rng.randint(1, 8)
        M = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
        rq = rational_rank(M)
        for p in PRIMES:
            rp = rank(GFMatrix(np.array(M), p))
            assert rp <= rq
        # entries are tiny, so no pivot minor is divisible by the big prime
        assert rank(GFMatrix(np.array(M), DEFAULT_PRIME)) == rq


def test_rational_rank_proportional_rows():
    assert rational_rank([[1, 2], [2, 4]]) == 1


def test_rational_rank_identity():
    assert rational_rank([[1 if i == j else 0 for j in range(4)] for i in range(4)]) == 4


def test_rational_rank_vandermonde():
    nodes = [1, 2, 3, 5, 8]
    V = [[x ** j for j in range(5)] for x in nodes]
    assert rational_rank(V) == 5


def test_rank_permutation_and_scaling_invariance():
    rng = random.Random(11)
    p = 32003
    for _ in range(100):
        rows, cols = rng.randint(1, 7), rng.randint(1, 7)
        M = np.array([[rng.randrange(p) for _ in range(cols)] for _ in range(rows)])
        r0 = rank(GFMatrix(M, p))
        assert r0 <= min(rows, cols)
        perm = list(range(rows))
        rng.shuffle(perm)
        assert rank(GFMatrix(M[perm], p)) == r0
        cperm = list(range(cols))
        rng.shuffle(cperm)
        assert rank(GFMatrix(M[:, cperm], p)) == r0
        scaled = M.copy()
        scaled[rng.randrange(rows)] = scaled[rng.randrange(rows)] * rng.randint(1, p - 1) % p
        # scaling a row by a nonzero constant
        i = rng.randrange(rows)
        scaled = M.copy()
        scaled[i] = scaled[i] * rng.randint(1, p - 1) % p
        assert rank(GFMatrix(scaled, p)) == r0


def test_rank_rectangular_random_vs_oracle():
    rng = random.Random(3)
    M = [[rng.randint(-20, 20) for _ in range(6)] for _ in range(8)]
    assert rank(GFMatrix(np.array(M), DEFAULT_PRIME)) == rational_rank(M)


def test_sqrt_mod():
    rng = random.Random(5)
    for p in [101, 32003, DEFAULT_PRIME, 97, 113]:  # both p % 4 classes
        for _ in range(20):
            a = rng.randrange(p)
            if legendre(a, p) == 1 or a == 0:
                r = sqrt_mod(a, p)
                assert r * r % p == a % p
            else:
                with pytest.raises(gfmat.GFMatError):
                    sqrt_mod(a, p)


def test_bad_modulus_rejected():
    with pytest.raises(gfmat.GFMatError):
        GFMatrix([[1]], 100)
    with pytest.raises(gfmat.GFMatError):
        GFMatrix([[1]], 2)
