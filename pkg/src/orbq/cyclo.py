"""Exact arithmetic in cyclotomic fields Q(zeta_M).

An element is stored as a sparse formal combination of roots of unity
(a group-algebra representative), which makes multiplying by phases
cheap.  Canonical reduction into the power basis modulo the M-th
cyclotomic polynomial happens lazily, only for equality tests, zero
tests and extraction of rational values.  Elements of different orders
mix freely; binary operations lift both operands into the lcm field.

All the phases e(q) := exp(2*pi*i*q) with rational q live here, as do
the square roots of positive rationals (via Gauss sums) picked up by
eta transformations.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from math import gcd

from .nt import cyclotomic_poly, kronecker, lcm, prime_factors

_Rat = (int, Fraction)

# per-order reduction data: order -> (degree, phi_coeffs, rows dict)
_REDUCTION_CACHE: dict[int, tuple[int, tuple[int, ...], dict[int, tuple[int, ...]]]] = {}


def _reduction_rows(order: int):
    data = _REDUCTION_CACHE.get(order)
    if data is None:
        phi = cyclotomic_poly(order)
        data = (len(phi) - 1, phi, {})
        _REDUCTION_CACHE[order] = data
    return data


_REDUCTION_TOP: dict[int, int] = {}


def _row_for(order: int, e: int) -> tuple[int, ...]:
    """Power-basis expansion of zeta^e modulo Phi_order, for e >= deg."""
    deg, phi, rows = _reduction_rows(order)
    base = rows.get(deg)
    if base is None:
        base = tuple(-c for c in phi[:deg])
        rows[deg] = base
        _REDUCTION_TOP[order] = deg
    if e in rows:
        return rows[e]
    start = _REDUCTION_TOP[order]
    row = list(rows[start])
    for f in range(start + 1, e + 1):
        top = row[deg - 1]
        row = [0] + row[: deg - 1]
        if top:
            red = rows[deg]
            row = [r + top * s for r, s in zip(row, red)]
        rows[f] = tuple(row)
    _REDUCTION_TOP[order] = max(start, e)
    return rows[e]


class Cyclo:
    """An element of Q(zeta_M) with M = self.order."""

    __slots__ = ("order", "terms", "_canon")

    def __init__(self, order: int, terms: dict):
        self.order = order
        self.terms = {e % order: c for e, c in terms.items() if c}
        self._canon = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rational(c) -> "Cyclo":
        c = Fraction(c)
        return Cyclo(1, {0: c} if c else {})

    @staticmethod
    def root_of_unity(order: int, k: int) -> "Cyclo":
        k %= order
        g = gcd(k, order)
        return Cyclo(order // g, {k // g: 1})

    @staticmethod
    def e(q) -> "Cyclo":
        """The phase e(q) = exp(2*pi*i*q) for rational q."""
        q = Fraction(q)
        return Cyclo(q.denominator, {q.numerator % q.denominator: 1})

    @staticmethod
    def sqrt_rational(x) -> "Cyclo":
        """Exact square root of a positive rational, as a cyclotomic number.

        Uses sqrt(2) = e(1/8) + e(-1/8) and quadratic Gauss sums
        g_p = sum_a (a|p) zeta_p^a, which equal sqrt(p) for p = 1 mod 4
        and i*sqrt(p) for p = 3 mod 4.
        """
        x = Fraction(x)
        if x <= 0:
            raise ValueError("sqrt_rational needs a positive argument")
        n = x.numerator * x.denominator
        rat = Fraction(1, x.denominator)
        for p, ex in prime_factors(n):
            rat *= p ** (ex // 2)
        result = Cyclo.from_rational(rat)
        for p, ex in prime_factors(n):
            if ex % 2 == 0:
                continue
            if p == 2:
                root = Cyclo(8, {1: 1, 7: 1})
            else:
                g = Cyclo(p, {a: kronecker(a, p) for a in range(1, p)})
                if p % 4 == 3:
                    g = g * Cyclo(4, {3: 1})  # g_p = i*sqrt(p): divide by i
                root = g
            result = result * root
        return result

    # -- canonical form ------------------------------------------------

    def canonical(self) -> tuple:
        """Coefficient vector in the power basis of Q(zeta_order)."""
        if self._canon is not None:
            return self._canon
        deg, _, _ = _reduction_rows(self.order)
        vec = [Fraction(0)] * deg
        for e, c in self.terms.items():
            if e < deg:
                vec[e] += c
            else:
                row = _row_for(self.order, e)
                for i, r in enumerate(row):
                    if r:
                        vec[i] += c * r
        self._canon = tuple(vec)
        return self._canon

    def is_zero(self) -> bool:
        if not self.terms:
            return True
        return all(c == 0 for c in self.canonical())

    def is_rational(self) -> bool:
        if not self.terms:
            return True
        if self.order == 1:
            return True
        vec = self.canonical()
        return all(c == 0 for c in vec[1:])

    def rational(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if self.order == 1:
            return Fraction(sum(self.terms.values()))
        vec = self.canonical()
        if any(c != 0 for c in vec[1:]):
            raise ValueError("not a rational number")
        return Fraction(vec[0])

    def simplify(self):
        """Return a Fraction when the value is rational, else self."""
        return self.rational() if self.is_rational() else self

    # -- arithmetic ----------------------------------------------------

    def _lift(self, order: int) -> "Cyclo":
        if order == self.order:
            return self
        step = order // self.order
        return Cyclo(order, {e * step: c for e, c in self.terms.items()})

    @staticmethod
    def _pair(x, y):
        m = lcm(x.order, y.order)
        return x._lift(m), y._lift(m)

    def __add__(self, other):
        if isinstance(other, _Rat):
            other = Cyclo.from_rational(other)
        elif not isinstance(other, Cyclo):
            return NotImplemented
        a, b = Cyclo._pair(self, other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Cyclo(a.order, terms)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.order, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, _Rat):
            other = Cyclo.from_rational(other)
        elif not isinstance(other, Cyclo):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, _Rat):
            if not other:
                return Cyclo(1, {})
            return Cyclo(self.order, {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, Cyclo):
            return NotImplemented
        a, b = Cyclo._pair(self, other)
        order = a.order
        terms: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = (e1 + e2) % order
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        return Cyclo(order, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = Cyclo.from_rational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "Cyclo":
        if len(self.terms) == 1:
            (e, c), = self.terms.items()
            return Cyclo(self.order, {(-e) % self.order: Fraction(1) / c})
        deg, phi, _ = _reduction_rows(self.order)
        a = list(self.canonical())
        if all(c == 0 for c in a):
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        inv = _poly_modinv(a, [Fraction(c) for c in phi])
        return Cyclo(self.order, {i: c for i, c in enumerate(inv) if c})

    def __truediv__(self, other):
        if isinstance(other, _Rat):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, Cyclo):
            return self * other.inverse()
        return NotImplemented

    def galois(self, k: int) -> "Cyclo":
        """Apply the automorphism zeta -> zeta^k (k coprime to the order)."""
        if gcd(k, self.order) != 1:
            raise ValueError("galois exponent must be coprime to the order")
        return Cyclo(self.order, {(e * k) % self.order: c for e, c in self.terms.items()})

    def conjugate(self) -> "Cyclo":
        return self.galois(self.order - 1) if self.order > 1 else self

    # -- comparisons / conversions --------------------------------------

    def __eq__(self, other):
        if isinstance(other, _Rat):
            return self.is_rational() and self.rational() == other
        if not isinstance(other, Cyclo):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # compare through canonical forms, not hashes

    def __bool__(self):
        return not self.is_zero()

    def numeric(self) -> complex:
        w = 2j * cmath.pi / self.order
        return sum(float(c) * cmath.exp(w * e) for e, c in self.terms.items()) + 0j

    def __repr__(self):
        if not self.terms:
            return "Cyclo(0)"
        parts = [f"{c}*e({e}/{self.order})" for e, c in sorted(self.terms.items())]
        return " + ".join(parts)


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(num: list[Fraction], den: list[Fraction]):
    num = list(num)
    q = [Fraction(0)] * max(1, len(num) - len(den) + 1)
    while _poly_trim(num) and len(num) >= len(den):
        shift = len(num) - len(den)
        f = num[-1] / den[-1]
        q[shift] = f
        for i, d in enumerate(den):
            num[shift + i] -= f * d
        _poly_trim(num)
    return _poly_trim(q), num


def _poly_modinv(a: list[Fraction], m: list[Fraction]) -> list[Fraction]:
    """Inverse of a modulo m in Q[x] via extended Euclid."""
    r0, r1 = _poly_trim(list(m)), _poly_trim(list(a))
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while r1:
        q, r = _poly_divmod(r0, r1)
        prod = [Fraction(0)] * (len(q) + len(s1))
        for i, qi in enumerate(q):
            if qi:
                for j, sj in enumerate(s1):
                    prod[i + j] += qi * sj
        width = max(len(s0), len(prod))
        s = [(s0[i] if i < len(s0) else 0) - (prod[i] if i < len(prod) else 0)
             for i in range(width)]
        r0, r1 = r1, r
        s0, s1 = s1, _poly_trim(s)
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible")
    c = r0[0]
    return [x / c for x in s0]


def e(q) -> Cyclo:
    """Shorthand for the phase e(q) = exp(2*pi*i*q)."""
    return Cyclo.e(q)
