"""Truncated Puiseux series in q with exact coefficients.

A series is a finite map {exponent -> coefficient} together with a
truncation bound: exponents are rationals, coefficients are integers,
rationals or cyclotomic numbers, and every exponent >= trunc is
unknown.  trunc = None means the series is known exactly at all
orders (polynomials, finite theta sums below their bound, ...).

Truncation propagates conservatively: an unknown coefficient is never
reported as known.  For a product the validity bound is
min(trunc_a + lead_b, trunc_b + lead_a).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .cyclo import Cyclo


class EmptySeriesError(ValueError):
    """Inversion of a series with no known nonzero term."""


class TruncationError(ValueError):
    """A coefficient beyond the truncation bound was requested."""


class NonIntegralExponent(ValueError):
    pass


class NonRationalCoefficient(ValueError):
    pass


class NonIntegerCoefficient(ValueError):
    pass


def _norm_coeff(c):
    """Canonical scalar: ints preferred, rational Cyclos demoted; None if zero.

    Demotion runs the power-basis reduction, which is expensive in large
    cyclotomic orders; those are kept symbolic here and collapsed by an
    explicit rationalize() once assembly is finished.
    """
    if isinstance(c, Cyclo):
        if not c.terms:
            return None
        if c.order <= 48:
            if c.is_rational():
                c = c.rational()
            else:
                return c
        else:
            return c
    if isinstance(c, Fraction):
        if c == 0:
            return None
        return int(c) if c.denominator == 1 else c
    return c if c else None


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class PuiseuxSeries:
    __slots__ = ("terms", "trunc")

    def __init__(self, terms: dict, trunc=None):
        clean = {}
        for e, c in terms.items():
            e = Fraction(e)
            if trunc is not None and e >= trunc:
                continue
            c = _norm_coeff(c)
            if c is not None:
                clean[e] = c
        self.terms = clean
        self.trunc = Fraction(trunc) if trunc is not None else None

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(trunc=None) -> "PuiseuxSeries":
        return PuiseuxSeries({}, trunc)

    @staticmethod
    def one(trunc=None) -> "PuiseuxSeries":
        return PuiseuxSeries({Fraction(0): 1}, trunc)

    @staticmethod
    def monomial(coeff, exponent, trunc=None) -> "PuiseuxSeries":
        return PuiseuxSeries({Fraction(exponent): coeff}, trunc)

    # -- inspection -------------------------------------------------------

    def lead_exponent(self):
        """Smallest stored exponent (None for a zero/unknown series)."""
        return min(self.terms) if self.terms else None

    def _exponent_floor(self):
        """A certified lower bound for any (possibly unknown) term exponent."""
        if self.terms:
            return min(self.terms)
        return self.trunc  # all terms, if any, sit at or beyond trunc

    def exponent_denominator(self) -> int:
        n = 1
        for e in self.terms:
            n = n * e.denominator // gcd(n, e.denominator)
        return n

    def coeff(self, exponent):
        e = Fraction(exponent)
        if self.trunc is not None and e >= self.trunc:
            raise TruncationError(f"coefficient of q^{e} is beyond O(q^{self.trunc})")
        return self.terms.get(e, 0)

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items())

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Cyclo)):
            other = PuiseuxSeries({Fraction(0): other})
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        trunc = _min_trunc(self.trunc, other.trunc)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            terms[e] = s
        return PuiseuxSeries(terms, trunc)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries({e: -c for e, c in self.terms.items()}, self.trunc)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Cyclo)):
            other = PuiseuxSeries({Fraction(0): other})
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "PuiseuxSeries":
        """Multiply every coefficient by the scalar c."""
        if isinstance(c, (int, Fraction)) and c == 0:
            return PuiseuxSeries({}, self.trunc)
        return PuiseuxSeries({e: v * c for e, v in self.terms.items()}, self.trunc)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyclo)):
            return self.scale(other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        bounds = []
        fa, fb = self._exponent_floor(), other._exponent_floor()
        if self.trunc is not None:
            if fb is None:  # other is exactly zero
                return PuiseuxSeries({}, None)
            bounds.append(self.trunc + fb)
        if other.trunc is not None:
            if fa is None:
                return PuiseuxSeries({}, None)
            bounds.append(other.trunc + fa)
        trunc = min(bounds) if bounds else None
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if trunc is not None and e >= trunc:
                    continue
                s = terms.get(e, 0) + c1 * c2
                terms[e] = s
        return PuiseuxSeries(terms, trunc)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "PuiseuxSeries":
        if k < 0:
            return self.invert() ** (-k)
        result = PuiseuxSeries.one(None)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def invert(self, trunc=None) -> "PuiseuxSeries":
        """Multiplicative inverse, valid to the propagated truncation.

        For an exactly-known series (trunc None) a target truncation must
        be supplied unless the series is a monomial.
        """
        if not self.terms:
            raise EmptySeriesError("cannot invert a series with no known terms")
        e0 = self.lead_exponent()
        c0 = self.terms[e0]
        inv0 = c0.inverse() if isinstance(c0, Cyclo) else Fraction(1) / Fraction(c0)
        if len(self.terms) == 1 and self.trunc is None and trunc is None:
            return PuiseuxSeries({-e0: inv0}, None)
        if self.trunc is not None:
            rel = self.trunc - e0  # validity of 1 + (higher terms)
        else:
            rel = None
        if trunc is not None:
            rel = _min_trunc(rel, Fraction(trunc) + e0)
        if rel is None:
            raise EmptySeriesError("invert needs a truncation bound for exact series")
        # normalized series 1 + sum a_f q^f with f > 0
        tail = {}
        den = 1
        for e, c in self.terms.items():
            if e == e0:
                continue
            f = e - e0
            tail[f] = c * inv0
            den = den * f.denominator // gcd(den, f.denominator)
        out = {Fraction(0): 1}
        if tail:
            step = Fraction(1, den)
            n = 1
            while n * step < rel:
                f = n * step
                acc = 0
                for g, a in tail.items():
                    if g <= f:
                        prev = out.get(f - g)
                        if prev is not None:
                            acc = acc + a * prev
                if not (isinstance(acc, (int, Fraction)) and acc == 0):
                    val = _norm_coeff(-acc)
                    if val is not None:
                        out[f] = val
                n += 1
        shifted = {f - e0: c for f, c in out.items()}
        result = PuiseuxSeries(shifted, rel - e0 if rel is not None else None)
        return result.scale(inv0)

    def rescale(self, r, s=0) -> "PuiseuxSeries":
        """Substitute q -> q^r and shift by q^s: exponents become r*e + s."""
        r, s = Fraction(r), Fraction(s)
        if r <= 0:
            raise ValueError("rescale needs r > 0")
        trunc = r * self.trunc + s if self.trunc is not None else None
        return PuiseuxSeries({r * e + s: c for e, c in self.terms.items()}, trunc)

    def truncate(self, trunc) -> "PuiseuxSeries":
        return PuiseuxSeries(self.terms, _min_trunc(self.trunc, Fraction(trunc)))

    def map_coefficients(self, fn) -> "PuiseuxSeries":
        return PuiseuxSeries({e: fn(c) for e, c in self.terms.items()}, self.trunc)

    # -- predicates / extraction -------------------------------------------

    def agrees_with(self, other: "PuiseuxSeries", upto=None) -> bool:
        """Exact equality of all coefficients on the common validity range."""
        bound = _min_trunc(self.trunc, other.trunc)
        if upto is not None:
            bound = _min_trunc(bound, Fraction(upto))
        for e in set(self.terms) | set(other.terms):
            if bound is not None and e >= bound:
                continue
            a, b = self.terms.get(e, 0), other.terms.get(e, 0)
            if isinstance(a, Cyclo) or isinstance(b, Cyclo):
                a = a if isinstance(a, Cyclo) else Cyclo.from_rational(a)
                if not (a == b):
                    return False
            elif a != b:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.agrees_with(other)

    __hash__ = None

    def rationalize(self) -> "PuiseuxSeries":
        """Certify all coefficients rational (cyclotomic parts must cancel)."""
        out = {}
        for e, c in self.terms.items():
            if isinstance(c, Cyclo):
                if not c.is_rational():
                    raise NonRationalCoefficient(
                        f"coefficient of q^{e} is irrational: {c!r}")
                c = c.rational()
            out[e] = c
        return PuiseuxSeries(out, self.trunc)

    def assert_integral(self) -> "PuiseuxSeries":
        """Certify integer coefficients at integer exponents; return the result."""
        out = {}
        for e, c in sorted(self.terms.items()):
            if e.denominator != 1:
                raise NonIntegralExponent(f"exponent {e} is not an integer")
            if isinstance(c, Cyclo):
                if not c.is_rational():
                    raise NonRationalCoefficient(
                        f"coefficient of q^{e} is irrational: {c!r}")
                c = c.rational()
            c = Fraction(c)
            if c.denominator != 1:
                raise NonIntegerCoefficient(f"coefficient of q^{e} is {c}")
            out[e] = int(c)
        return PuiseuxSeries(out, self.trunc)

    # -- display -------------------------------------------------------------

    def __repr__(self):
        return f"PuiseuxSeries({self.format()})"

    def format(self, max_terms=12) -> str:
        """Paper-style rendering: q^{-2} + 48q^{-1} + 1224 + O(q)."""
        parts = []
        for e, c in self.items()[:max_terms]:
            if isinstance(c, Cyclo):
                cs = f"({c!r})"
            elif c == 1 and e != 0:
                cs = ""
            else:
                cs = str(c)
            if e == 0:
                parts.append(cs or "1")
            elif e == 1:
                parts.append(f"{cs}q")
            else:
                es = str(e) if e.denominator == 1 else f"{e}"
                parts.append(f"{cs}q^{es}")
        if not parts:
            parts = ["0"]
        body = " + ".join(parts).replace("+ -", "- ")
        if len(self.terms) > max_terms:
            body += " + ..."
        if self.trunc is not None:
            t = self.trunc
            ts = "q" if t == 1 else (f"q^{t}")
            body += f" + O({ts})"
        return body


# Functional aliases matching the operation names used elsewhere.

def series_mul(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    return a * b


def series_invert(a: PuiseuxSeries, trunc=None) -> PuiseuxSeries:
    return a.invert(trunc)


def series_rescale(a: PuiseuxSeries, r, s=0) -> PuiseuxSeries:
    return a.rescale(r, s)


def assert_integral(a: PuiseuxSeries) -> PuiseuxSeries:
    return a.assert_integral()
