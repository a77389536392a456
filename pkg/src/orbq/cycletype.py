"""Cycle types of lattice isometries and formal eta-quotient exponents.

A cycle type prod_{t} t^{b_t} encodes the characteristic polynomial
prod_t (q^t - 1)^{b_t} of a finite-order integer isometry.  The same
exponent data also labels the eta quotient prod_t eta(t*tau)^{b_t},
so the class below doubles as the exponent vector of an eta quotient
(where degree and rank have no lattice meaning).
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce

from .nt import divisors, lcm, moebius
from .linalg import charpoly, mat_pow


class CycleType:
    """Immutable multiset {t: b_t} with nonzero integer exponents."""

    __slots__ = ("pairs",)

    def __init__(self, data):
        if isinstance(data, CycleType):
            pairs = data.pairs
        else:
            items = data.items() if isinstance(data, dict) else data
            merged: dict[int, int] = {}
            for t, b in items:
                t, b = int(t), int(b)
                if t < 1:
                    raise ValueError(f"cycle-type part {t} must be positive")
                merged[t] = merged.get(t, 0) + b
            pairs = tuple(sorted((t, b) for t, b in merged.items() if b))
        object.__setattr__(self, "pairs", pairs)

    def __setattr__(self, *a):
        raise AttributeError("CycleType is immutable")

    # -- parsing / formatting -------------------------------------------

    @staticmethod
    def parse(text: str) -> "CycleType":
        """Parse '1^-48 2^48', '1^{-48}2^{48}' or '6^8' style strings."""
        text = text.strip()
        if not text:
            return CycleType(())
        token = re.compile(r"\s*(\d+)(?:\^(?:\{(-?\d+)\}|(-?\d+)))?\s*")
        pos = 0
        pairs = []
        while pos < len(text):
            m = token.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse cycle type {text!r}")
            pos = m.end()
            pairs.append((int(m.group(1)), int(m.group(2) or m.group(3) or 1)))
        return CycleType(pairs)

    def __str__(self):
        return " ".join(f"{t}^{b}" for t, b in self.pairs) or "1^0"

    def __repr__(self):
        return f"CycleType({self})"

    # -- basic data -------------------------------------------------------

    def exponent(self, t: int) -> int:
        for s, b in self.pairs:
            if s == t:
                return b
        return 0

    def support(self) -> tuple[int, ...]:
        return tuple(t for t, _ in self.pairs)

    @property
    def order(self) -> int:
        """Order of any isometry with this cycle type (lcm of the parts)."""
        return reduce(lcm, self.support(), 1)

    @property
    def rank(self) -> int:
        """sum b_t = rank of the fixed-point space."""
        return sum(b for _, b in self.pairs)

    @property
    def degree(self) -> int:
        """sum t*b_t = degree of the characteristic polynomial."""
        return sum(t * b for t, b in self.pairs)

    @property
    def eta_weight(self) -> Fraction:
        """Weight (1/2) sum b_t of the eta quotient."""
        return Fraction(self.rank, 2)

    @property
    def eta_lead(self) -> Fraction:
        """Leading q-exponent (1/24) sum t*b_t of the eta quotient."""
        return Fraction(self.degree, 24)

    # -- algebra -----------------------------------------------------------

    def __mul__(self, other: "CycleType") -> "CycleType":
        return CycleType(list(self.pairs) + list(other.pairs))

    def __truediv__(self, other: "CycleType") -> "CycleType":
        return CycleType(list(self.pairs) + [(t, -b) for t, b in other.pairs])

    def inverse(self) -> "CycleType":
        return CycleType([(t, -b) for t, b in self.pairs])

    def __eq__(self, other):
        return isinstance(other, CycleType) and self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def power(self, k: int) -> "CycleType":
        """The cycle type of the k-th power: prod (t/(t,k))^{(t,k) b_t}."""
        from math import gcd
        if k < 1:
            raise ValueError("power needs k >= 1")
        return CycleType([(t // gcd(t, k), gcd(t, k) * b) for t, b in self.pairs])


def cycle_power(c: CycleType, k: int) -> CycleType:
    return c.power(k)


def cycle_type_of_matrix(a, k: int = 1) -> CycleType:
    """Cycle type of the k-th power of a finite-order integer matrix.

    The characteristic polynomial of a finite-order isometry factors as
    prod_t Phi_t^{n_t}; Moebius inversion of Phi_t = prod_{d|t}(q^d-1)^{mu(t/d)}
    turns the Phi-exponents into the (q^t - 1)-exponents b_t.
    """
    m = mat_pow(a, k) if k != 1 else [list(r) for r in a]
    chi = charpoly(m)
    d = len(m)
    # peel off cyclotomic factors by exact polynomial division
    from .nt import cyclotomic_poly, _poly_divexact
    n_t: dict[int, int] = {}
    rem = list(chi)
    t = 1
    while len(rem) > 1:
        phi = list(cyclotomic_poly(t))
        count = 0
        while True:
            try:
                cand = _poly_divexact(rem, phi)
            except ValueError:
                break
            rem = cand
            count += 1
        if count:
            n_t[t] = count
        t += 1
        if t > 4 * d * d + 2 and len(rem) > 1:
            raise ArithmeticError("matrix does not have finite order")
    b: dict[int, int] = {}
    for t, n in n_t.items():
        for s in divisors(t):
            b[s] = b.get(s, 0) + n * moebius(t // s)
    ct = CycleType(b)
    if ct.degree != d:
        raise ArithmeticError("cycle type degree mismatch")
    return ct
