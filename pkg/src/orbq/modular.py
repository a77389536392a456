"""Dedekind eta, its multiplier system, and SL2(Z)-transforms of eta quotients.

The transformation engine implements the classical decomposition: for an
integer matrix P = (p q; r s) of positive determinant there are
M' in SL2(Z) and alpha, beta, gamma with P*tau = M'((alpha*tau+beta)/gamma),
so eta(P*tau) = theta(M') * ((R*tau+S)/gamma)^(1/2) * eta((alpha*tau+beta)/gamma)
where (R, S) is the bottom row of P.  For a quotient prod eta(t*tau)^{b_t}
all automorphy factors share the same R*tau+S, so a weight-zero quotient
transforms with an exactly computable cyclotomic prefactor (the gamma^{-b/2}
contribute square roots of rationals, handled by Gauss sums).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from .cyclo import Cyclo
from .cycletype import CycleType
from .nt import psi_index, totient, xgcd
from .qseries import PuiseuxSeries


class NonCoprime(ValueError):
    pass


# ---------------------------------------------------------------------------
# SL2(Z)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SL2:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self} is not 1")

    @staticmethod
    def identity() -> "SL2":
        return SL2(1, 0, 0, 1)

    @staticmethod
    def S() -> "SL2":
        return SL2(0, -1, 1, 0)

    @staticmethod
    def T(k: int = 1) -> "SL2":
        return SL2(1, k, 0, 1)

    def __matmul__(self, o: "SL2") -> "SL2":
        return SL2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                   self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def inv(self) -> "SL2":
        return SL2(self.d, -self.b, -self.c, self.a)

    def __neg__(self) -> "SL2":
        return SL2(-self.a, -self.b, -self.c, -self.d)

    def acts_on(self, tau: complex) -> complex:
        return (self.a * tau + self.b) / (self.c * tau + self.d)


# ---------------------------------------------------------------------------
# Dedekind sums and the eta multiplier
# ---------------------------------------------------------------------------

def dedekind_sum(d: int, c: int) -> Fraction:
    """s(d, c) = sum_{0<=n<c} (n/c)((dn/c) - [dn/c] - 1/2) for gcd(d,c)=1."""
    if c <= 0:
        raise ValueError("dedekind_sum needs c > 0")
    if gcd(d, c) != 1:
        raise NonCoprime(f"gcd({d}, {c}) != 1")
    if c == 1:
        return Fraction(0)
    total = 0
    for n in range(1, c):
        total += n * ((d * n) % c)
    return Fraction(total, c * c) - Fraction(c - 1, 4)


def eta_multiplier(m: SL2) -> Cyclo:
    """The multiplier theta(M) in eta(M tau) = theta(M) (c tau + d)^(1/2) eta(tau).

    Matrices with c < 0 (or c = 0, a < 0) are replaced by -M first; the
    value is always a 24th root of unity.
    """
    a, b, c, d = m.a, m.b, m.c, m.d
    if c < 0 or (c == 0 and a < 0):
        a, b, c, d = -a, -b, -c, -d
    if c == 0:
        ex = Fraction(b, 24)
    else:
        ex = Fraction(a + d - 3 * c, 24 * c) - dedekind_sum(d, c) / 2
    if 24 % ex.denominator:
        raise ArithmeticError(f"eta multiplier exponent {ex} not a 24th root")
    return Cyclo.e(ex)


# ---------------------------------------------------------------------------
# Expansions
# ---------------------------------------------------------------------------

def euler_series(trunc) -> PuiseuxSeries:
    """prod_{n>=1}(1 - q^n) by the pentagonal number theorem."""
    trunc = Fraction(trunc)
    terms = {Fraction(0): 1}
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 >= trunc and g2 >= trunc:
            break
        sign = -1 if k % 2 else 1
        if g1 < trunc:
            terms[Fraction(g1)] = sign
        if g2 < trunc:
            terms[Fraction(g2)] = sign
        k += 1
    return PuiseuxSeries(terms, trunc)


@lru_cache(maxsize=None)
def _euler_power(b: int, trunc_num: int) -> PuiseuxSeries:
    trunc = Fraction(trunc_num)
    base = euler_series(trunc)
    if b >= 0:
        return base ** b
    return base.invert() ** (-b)


def euler_power(b: int, trunc) -> PuiseuxSeries:
    """prod (1 - q^n)^b, valid below trunc."""
    n = int(Fraction(trunc).__ceil__())
    return _euler_power(b, max(n, 1)).truncate(trunc)


def eta_power_series(b: int, trunc) -> PuiseuxSeries:
    """eta(tau)^b = q^{b/24} prod (1-q^n)^b, valid below trunc."""
    shift = Fraction(b, 24)
    return euler_power(b, Fraction(trunc) - shift).rescale(1, shift)


def eta_expand(cycle: CycleType, trunc) -> PuiseuxSeries:
    """Exact expansion of the eta quotient prod_t eta(t tau)^{b_t}."""
    trunc = Fraction(trunc)
    lead = cycle.eta_lead
    rel = trunc - lead  # validity needed for the product of Euler factors
    out = PuiseuxSeries.one(None)
    for t, b in cycle.pairs:
        factor = euler_power(b, rel / t).rescale(t)
        out = out * factor
    if out.trunc is None:
        out = out.truncate(rel)
    return out.rescale(1, lead)


# ---------------------------------------------------------------------------
# Transformation of eta quotients
# ---------------------------------------------------------------------------

def decompose_eta_argument(p: int, q: int, r: int, s: int):
    """Write (p q; r s) (det > 0) as M' * (alpha beta; 0 gamma), M' in SL2(Z).

    Returns (M', alpha, beta, gamma) with alpha, gamma > 0 and M' normalized
    to c >= 0 (c = 0 implies a = 1).  For p*M with the matrix entries
    (tA, tB; C, D) this reproduces the classical recipe
    alpha = (tA, C), gamma = t/alpha, a = tA/alpha, c = C/alpha,
    d = a^{-1} mod c, b = (ad-1)/c, beta = tBd - Db.
    """
    det = p * s - q * r
    if det <= 0:
        raise ValueError("decompose_eta_argument needs positive determinant")
    if r < 0 or (r == 0 and p < 0):
        p, q, r, s = -p, -q, -r, -s
    if r == 0:
        return SL2.identity(), p, q, s
    alpha = gcd(p, r)
    a, c = p // alpha, r // alpha
    d = pow(a, -1, c) if c > 1 else 0
    b = (a * d - 1) // c
    beta = d * q - b * s
    gamma = det // alpha
    return SL2(a, b, c, d), alpha, beta, gamma


@dataclass(frozen=True)
class TransformedEtaFactor:
    """eta((alpha tau + beta)/gamma)^power together with its series expansion."""
    alpha: int
    beta: int
    gamma: int
    power: int

    def lead_exponent(self) -> Fraction:
        return Fraction(self.power * self.alpha, 24 * self.gamma)

    def base_series(self, trunc) -> PuiseuxSeries:
        """eta((alpha tau + beta)/gamma) expanded in q^{1/(24 gamma)}.

        Substituting q -> e(beta/gamma) q^{alpha/gamma} in the eta product:
        each pentagonal term q^{g} picks up the phase e(g beta / gamma).
        """
        a, b, g = self.alpha, self.beta, self.gamma
        lead = Fraction(a, 24 * g)
        rel = Fraction(trunc) - lead
        terms = {Fraction(0): 1}
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if Fraction(g1 * a, g) >= rel and Fraction(g2 * a, g) >= rel:
                break
            sign = -1 if k % 2 else 1
            for gk in (g1, g2):
                ex = Fraction(gk * a, g)
                if ex < rel:
                    terms[ex] = Cyclo.e(Fraction(gk * b, g)) * sign
            k += 1
        series = PuiseuxSeries(terms, rel)
        prefix = Cyclo.e(Fraction(b, 24 * g))
        return series.rescale(1, lead).scale(prefix)

    def series(self, trunc) -> PuiseuxSeries:
        trunc = Fraction(trunc)
        lead = Fraction(self.alpha, 24 * self.gamma)
        if trunc <= self.power * lead:
            # nothing sits below the leading exponent, which we do know
            return PuiseuxSeries.zero(self.power * lead)
        if self.power >= 0:
            base = self.base_series(trunc - (self.power - 1) * lead)
            return (base ** self.power).truncate(trunc)
        p = -self.power
        base = self.base_series(trunc + (p + 1) * lead)
        inv = base.invert()  # valid below trunc + (p - 1) * lead
        return (inv ** p).truncate(trunc)


@dataclass(frozen=True)
class TransformedEtaProduct:
    """Image of an eta quotient under an SL2(Z) substitution.

    The full transform is
        prefactor * sqrt(gamma_ratio) * (C tau + D)^automorphy_weight
                  * prod_i eta((alpha_i tau + beta_i)/gamma_i)^{power_i},
    where (C, D) is the bottom row of the acting matrix.  prefactor collects
    the eta multipliers (a root of unity); gamma_ratio = prod gamma_i^{-power_i}.
    """
    factors: tuple[TransformedEtaFactor, ...]
    prefactor: Cyclo
    gamma_ratio: Fraction
    automorphy_weight: Fraction

    def scalar(self) -> Cyclo:
        return self.prefactor * Cyclo.sqrt_rational(self.gamma_ratio)

    def lead_exponent(self) -> Fraction:
        return sum((f.lead_exponent() for f in self.factors), Fraction(0))

    def expand(self, trunc) -> PuiseuxSeries:
        """Exact Puiseux expansion including the scalar prefactor.

        The automorphy power (C tau + D)^w is *not* included; callers
        assembling weight-zero combinations have w = 0.
        """
        trunc = Fraction(trunc)
        total_lead = self.lead_exponent()
        out = PuiseuxSeries.one(None)
        for f in self.factors:
            f_trunc = trunc - (total_lead - f.lead_exponent())
            out = out * f.series(f_trunc)
        out = out.truncate(trunc)
        return out.scale(self.scalar())


def transform_eta_quotient(cycle: CycleType, m: SL2) -> TransformedEtaProduct:
    """Transform prod_t eta(t tau)^{b_t} by tau -> M tau."""
    factors = []
    prefactor = Cyclo.from_rational(1)
    gamma_ratio = Fraction(1)
    for t, b in cycle.pairs:
        mp, alpha, beta, gamma = decompose_eta_argument(
            t * m.a, t * m.b, m.c, m.d)
        prefactor = prefactor * (eta_multiplier(mp) ** b)
        gamma_ratio *= Fraction(gamma) ** (-b)
        factors.append(TransformedEtaFactor(alpha, beta, gamma, b))
    return TransformedEtaProduct(tuple(factors), prefactor, gamma_ratio,
                                 cycle.eta_weight)


def expand_transformed(product: TransformedEtaProduct, trunc) -> PuiseuxSeries:
    return product.expand(trunc)


# ---------------------------------------------------------------------------
# Coset representatives for Gamma_0(m) \ SL2(Z)
# ---------------------------------------------------------------------------

def _projective_classes(m: int) -> list[tuple[int, int]]:
    units = [u for u in range(1, m) if gcd(u, m) == 1]
    seen = set()
    classes = []
    for c in range(m):
        for d in range(m):
            if gcd(gcd(c, d), m) != 1:
                continue
            key = min(((u * c) % m, (u * d) % m) for u in units)
            if key not in seen:
                seen.add(key)
                classes.append(key)
    classes.sort(key=lambda cd: (cd[0] != 0, cd))
    return classes


def coset_reps_gamma0(m: int) -> list[SL2]:
    """One representative per class of Gamma_0(m) \\ SL2(Z); psi(m) many.

    Classes correspond to the projective line P^1(Z/m) through the bottom
    row (c : d).  For prime p this gives the classes of {id} + {S T^i}.
    """
    if m < 1:
        raise ValueError("coset_reps_gamma0 needs m >= 1")
    if m == 1:
        return [SL2.identity()]
    reps = []
    for c0, d0 in _projective_classes(m):
        if c0 == 0:
            reps.append(SL2.identity())
            continue
        c = c0
        d = next(d0 + k * m for k in range(m + 1) if gcd(c, d0 + k * m) == 1)
        g, x, y = xgcd(d, c)
        assert g == 1
        reps.append(SL2(x, -y, c, d))
    assert len(reps) == psi_index(m)
    return reps


def same_gamma0_coset(m1: SL2, m2: SL2, m: int) -> bool:
    """Whether Gamma_0(m) m1 = Gamma_0(m) m2."""
    delta = m1 @ m2.inv()
    return delta.c % m == 0
