"""Elementary number theory helpers used across the package.

Everything here is exact integer / rational arithmetic.  The only
mildly nonstandard items are the Kronecker symbol (needed for
quadratic characters of theta series and eta quotients) and the
cyclotomic polynomials (needed both for the coefficient field and for
reading off cycle types from characteristic polynomials).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) = x*a + y*b and g >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def lcm(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return abs(a // gcd(a, b) * b)


@lru_cache(maxsize=None)
def prime_factors(n: int) -> tuple[tuple[int, int], ...]:
    """Factor |n| by trial division; returns ((p, e), ...) sorted."""
    n = abs(n)
    if n <= 1:
        return ()
    out = []
    for p in range(2, isqrt(n) + 1):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        if p * p > n:
            break
    if n > 1:
        out.append((n, 1))
    return tuple(sorted(out))


def divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        raise ValueError("divisors of 0")
    ds = [1]
    for p, e in prime_factors(n):
        ds = [d * p**i for d in ds for i in range(e + 1)]
    return sorted(ds)


def moebius(n: int) -> int:
    if n < 1:
        raise ValueError("moebius needs n >= 1")
    mu = 1
    for _, e in prime_factors(n):
        if e > 1:
            return 0
        mu = -mu
    return mu


def totient(n: int) -> int:
    if n < 1:
        raise ValueError("totient needs n >= 1")
    phi = n
    for p, _ in prime_factors(n):
        phi -= phi // p
    return phi


def psi_index(m: int) -> int:
    """Index [SL2(Z) : Gamma_0(m)] = m * prod_{p | m} (1 + 1/p)."""
    if m < 1:
        raise ValueError("psi needs m >= 1")
    val = m
    for p, _ in prime_factors(m):
        val += val // p
    return val


def squarefree_part(x: Fraction | int) -> int:
    """The squarefree integer representing the square class of x != 0.

    For a rational x, the square class of p/q equals that of p*q.
    """
    x = Fraction(x)
    if x == 0:
        raise ValueError("square class of 0")
    n = x.numerator * x.denominator
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    for p, e in prime_factors(n):
        if e % 2:
            out *= p
    return sign * out


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a / n), defined for all integers n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    if n < 0:
        return (-1 if a < 0 else 1) * kronecker(a, -n)
    # strip factors of 2 from n
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t and a % 2 == 0:
        return 0
    # (a/2)^t factor: (a/2) = (2/a) = (-1)^((a^2-1)/8)
    result = 1
    if t % 2 == 1:
        r = a % 8
        if r in (3, 5):
            result = -result
    a %= n
    # Jacobi symbol (a/n) for odd n > 0 by reciprocity
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_divexact(a: list[int], b: list[int]) -> list[int]:
    """Exact division of integer polynomials (ascending coefficients)."""
    a = list(a)
    db, da = len(b) - 1, len(a) - 1
    if da < db:
        if any(a):
            raise ValueError("inexact polynomial division")
        return [0]
    out = [0] * (da - db + 1)
    for i in range(da - db, -1, -1):
        c, r = divmod(a[i + db], b[db])
        if r:
            raise ValueError("inexact polynomial division")
        out[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    if any(a):
        raise ValueError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the n-th cyclotomic polynomial.

    Computed from Phi_n(q) = prod_{d | n} (q^d - 1)^{mu(n/d)}.
    """
    if n < 1:
        raise ValueError("cyclotomic_poly needs n >= 1")
    num: list[int] = [1]
    den: list[int] = [1]
    for d in divisors(n):
        mu = moebius(n // d)
        if mu == 0:
            continue
        f = [-1] + [0] * (d - 1) + [1]  # q^d - 1
        if mu == 1:
            num = _poly_mul(num, f)
        else:
            den = _poly_mul(den, f)
    return tuple(_poly_divexact(num, den))
