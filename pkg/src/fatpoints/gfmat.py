"""Exact dense linear algebra over GF(p), plus an integer rank oracle.

Everything here is deterministic: rank is computed by plain Gaussian
elimination with first-nonzero pivoting (any nonzero pivot is exact over a
field), and the rational oracle uses fraction-free Bareiss elimination with
Python big integers.
"""

from __future__ import annotations

import numpy as np

# Largest prime below 2^31.  Products of two reduced residues fit in int64,
# so the elimination inner loop can run vectorized without overflow.
DEFAULT_PRIME = 2147483629


class GFMatError(Exception):
    pass


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3 * 10^24."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
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


def check_modulus(p: int) -> None:
    if p <= 2 or not is_prime(p):
        raise GFMatError(f"modulus {p} is not an odd prime")


def field_inverse(a: int, p: int) -> int:
    """Multiplicative inverse of a mod p; a must be nonzero mod p."""
    a %= p
    if a == 0:
        raise ZeroDivisionError("inverse of 0 mod %d" % p)
    return pow(a, -1, p)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) in {-1, 0, 1} via Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return -1 if t == p - 1 else 1


def sqrt_mod(a: int, p: int) -> int:
    """A square root of a mod p (odd prime), by Tonelli-Shanks.

    Raises GFMatError if a is a quadratic non-residue.
    """
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        raise GFMatError(f"{a} is not a quadratic residue mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p - 1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c = s, pow(z, q, p)
    t, r = pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = tt * tt % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


class GFMatrix:
    """Dense row-major matrix over GF(p), entries fully reduced int64."""

    def __init__(self, data, p: int = DEFAULT_PRIME):
        check_modulus(p)
        arr = np.asarray(data, dtype=np.int64)
        if arr.ndim != 2:
            arr = arr.reshape(arr.shape[0] if arr.size else 0, -1)
        self.p = p
        self.data = np.mod(arr, p)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __repr__(self):
        return f"GFMatrix({self.rows}x{self.cols} mod {self.p})"


def rank(M: GFMatrix) -> int:
    """Rank of M over GF(p).

    First-nonzero pivoting; the result does not depend on row or column
    order.  The input matrix is not modified.
    """
    return _rank_mod(M.data, M.p)


def _rank_mod(data: np.ndarray, p: int) -> int:
    a = np.mod(np.asarray(data, dtype=np.int64), p).copy()
    nrows, ncols = a.shape if a.ndim == 2 else (0, 0)
    if nrows == 0 or ncols == 0:
        return 0
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        # normalize the pivot row once, then clear the column below
        a[r, c:] = a[r, c:] * inv % p
        factors = a[r + 1:, c]
        if factors.any():
            a[r + 1:, c:] = (a[r + 1:, c:] - factors[:, None] * a[r, c:]) % p
        r += 1
    return r


def rational_rank(M) -> int:
    """Exact rank over the rationals of an integer matrix.

    Fraction-free Bareiss elimination on Python big integers; intended for
    modest sizes (the cross-validation oracle), not performance.
    """
    a = [[int(x) for x in row] for row in np.asarray(M).tolist()] if not isinstance(M, list) else [
        [int(x) for x in row] for row in M]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    if nrows == 0 or ncols == 0:
        return 0
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
    return r
