"""Eta multiplier system, quotient transforms, coset representatives."""

import cmath
import random
from fractions import Fraction as F

import pytest

from orbq.cyclo import Cyclo
from orbq.cycletype import CycleType
from orbq.modular import (SL2, NonCoprime, coset_reps_gamma0, dedekind_sum,
                          decompose_eta_argument, eta_expand, eta_multiplier,
                          euler_series, same_gamma0_coset,
                          transform_eta_quotient)
from orbq.nt import psi_index


def random_sl2(rng, size=12):
    m = SL2.identity()
    for _ in range(rng.randint(1, 8)):
        if rng.random() < 0.5:
            m = m @ SL2.T(rng.randint(-size, size))
        else:
            m = m @ SL2.S()
    return m


class TestDedekind:
    def test_values(self):
        assert dedekind_sum(5, 1) == 0
        assert dedekind_sum(1, 2) == 0
        assert dedekind_sum(1, 3) == F(1, 18)

    def test_noncoprime(self):
        with pytest.raises(NonCoprime):
            dedekind_sum(2, 4)

    def test_reciprocity(self):
        # s(d,c) + s(c,d) = -1/4 + (c/d + d/c + 1/(cd)) / 12
        for d, c in [(3, 5), (7, 11), (4, 9), (5, 12)]:
            lhs = dedekind_sum(d, c) + dedekind_sum(c, d)
            rhs = F(-1, 4) + (F(c, d) + F(d, c) + F(1, c * d)) / 12
            assert lhs == rhs


class TestMultiplier:
    def test_generators(self):
        assert eta_multiplier(SL2.T()) == Cyclo.e(F(1, 24))
        assert eta_multiplier(SL2.identity()) == 1
        assert eta_multiplier(SL2.S()) == Cyclo.e(F(-1, 8))

    def test_functional_equation_numeric(self):
        """eta(M tau) = theta(M) (c tau + d)^(1/2) eta(tau) at sample points."""
        def eta_num(tau, terms=1500):
            q = cmath.exp(2j * cmath.pi * tau)
            val = cmath.exp(2j * cmath.pi * tau / 24)
            prod = 1.0 + 0j
            for n in range(1, terms):
                f = q**n
                prod *= 1 - f
                if abs(f) < 1e-19:
                    break
            return val * prod

        rng = random.Random(7)
        tau = 0.13 + 0.9j
        checked = 0
        while checked < 25:
            m = random_sl2(rng, size=3)
            if m.acts_on(tau).imag < 0.15:
                continue  # float eta evaluation is unreliable near the real axis
            lhs = eta_num(m.acts_on(tau))
            a, b, c, d = m.a, m.b, m.c, m.d
            if c < 0 or (c == 0 and a < 0):
                a, b, c, d = -a, -b, -c, -d
            rhs = eta_multiplier(m).numeric() * cmath.sqrt(c * tau + d) * eta_num(tau)
            assert abs(lhs / rhs - 1) < 1e-8
            checked += 1

    def test_cocycle_on_weight_zero_quotients(self):
        """Transforming by M1 M2 equals transforming by M2 then M1.

        Restricted to quotients with even exponents (per-factor square
        roots are then unambiguous) and total weight zero.
        """
        rng = random.Random(2024)
        quotients = [CycleType({1: 2, 2: -2}), CycleType({1: -4, 3: 4}),
                     CycleType({2: 6, 4: -6}), CycleType({1: 2, 6: -2})]
        for trial in range(200):
            q = quotients[trial % len(quotients)]
            m1, m2 = random_sl2(rng, 6), random_sl2(rng, 6)
            one_shot = transform_eta_quotient(q, m1 @ m2)
            lhs = one_shot.expand(F(2))
            rhs = _two_step_expand(q, m1, m2, F(2))
            assert lhs.agrees_with(rhs), (q, m1, m2)


def _two_step_expand(quotient, m1, m2, trunc):
    """eta_Q((m1 m2) tau) computed as eta_Q(m1 w), w = m2 tau.

    Independent of TransformedEtaProduct.expand's one-shot path: the
    step-1 factors eta((a w + b)/g) are pushed through m2 by a second
    argument decomposition, with all square roots exact because every
    exponent is even and the total weight vanishes.
    """
    step1 = transform_eta_quotient(quotient, m1)
    prefactor = step1.prefactor
    sqrt_ratio = step1.gamma_ratio  # prod gamma^{-b}
    factors = []
    for f in step1.factors:
        # argument matrix (alpha beta; 0 gamma) m2
        mp, a2, b2, g2 = decompose_eta_argument(
            f.alpha * m2.a + f.beta * m2.c, f.alpha * m2.b + f.beta * m2.d,
            f.gamma * m2.c, f.gamma * m2.d)
        prefactor = prefactor * (eta_multiplier(mp) ** f.power)
        sqrt_ratio *= F(f.gamma, g2) ** f.power
        from orbq.modular import TransformedEtaFactor
        factors.append(TransformedEtaFactor(a2, b2, g2, f.power))
    from orbq.modular import TransformedEtaProduct
    prod = TransformedEtaProduct(tuple(factors), prefactor, sqrt_ratio, F(0))
    return prod.expand(trunc)


class TestTransforms:
    def test_decomposition_items(self):
        # t = 2, M = S: (alpha, beta, gamma) = (1, 0, 2), matrix part S
        mp, a, b, g = decompose_eta_argument(0, -2, 1, 0)
        assert (a, b, g) == (1, 0, 2)
        assert mp == SL2.S()
        # t = 1, M = S: identity decomposition eta(S tau)
        mp, a, b, g = decompose_eta_argument(0, -1, 1, 0)
        assert (a, b, g) == (1, 0, 1)
        # t = 3, M = S -> eta(tau/3)
        mp, a, b, g = decompose_eta_argument(0, -3, 1, 0)
        assert (a, b, g) == (1, 0, 3)

    def test_eta_half_argument(self):
        # eta(tau/2) = q^{1/48}(1 - q^{1/2} - q + ...)
        from orbq.modular import TransformedEtaFactor
        f = TransformedEtaFactor(1, 0, 2, 1)
        s = f.series(F(2))
        assert s.coeff(F(1, 48)) == 1
        assert s.coeff(F(1, 48) + F(1, 2)) == -1
        assert s.coeff(F(1, 48) + 1) == -1

    def test_eta_shifted_argument_phases(self):
        # eta((tau+1)/2): each q^m picks up e(m/2) relative to eta(tau/2)
        from orbq.modular import TransformedEtaFactor
        plain = TransformedEtaFactor(1, 0, 2, 1).series(F(2))
        shifted = TransformedEtaFactor(1, 1, 2, 1).series(F(2))
        phase0 = Cyclo.e(F(1, 48))
        for e, c in plain.terms.items():
            rel = (e - F(1, 48)) * 1  # exponent above the lead, in q^{1/2} units
            expect = phase0 * Cyclo.e(rel) * c
            got = shifted.terms.get(e, 0)
            got = got if isinstance(got, Cyclo) else Cyclo.from_rational(got)
            assert got == expect

    def test_leech_twisted_sector(self):
        # 1/eta_{1^{-24}2^{24}} | S = 2^12 q^{1/2} (1 + ...)
        prod = transform_eta_quotient(CycleType.parse("1^24 2^-24"), SL2.S())
        series = prod.expand(F(2))
        assert series.coeff(F(1, 2)) == 4096
        assert series.coeff(F(1)) == 98304

    def test_weight_bookkeeping(self):
        c = CycleType.parse("1^-48 2^48")
        prod = transform_eta_quotient(c, SL2.S())
        assert prod.automorphy_weight == c.eta_weight == 0
        c2 = CycleType.parse("1^24")
        assert transform_eta_quotient(c2, SL2.S()).automorphy_weight == 12


class TestEtaExpansion:
    def test_pentagonal(self):
        e = eta_expand(CycleType.parse("1^1"), F(2))
        assert e.coeff(F(1, 24)) == 1
        assert e.coeff(F(25, 24)) == -1

    def test_quotient_lead(self):
        # oracle: brute-force product expansion of q^2 (1-q^n)^-48 (1-q^2n)^48
        from orbq.qseries import PuiseuxSeries
        brute = PuiseuxSeries.one(F(3))
        for n in range(1, 4):
            brute = brute * (PuiseuxSeries({F(0): 1, F(n): -1}).invert(trunc=F(3)) ** 48)
            brute = brute * (PuiseuxSeries({F(0): 1, F(2 * n): -1}) ** 48)
        c = CycleType.parse("1^-48 2^48")
        e = eta_expand(c, F(5))
        assert e.lead_exponent() == 2
        assert e.coeff(2) == 1 and e.coeff(3) == 48
        assert e.coeff(4) == brute.coeff(2) == 1176

    def test_euler_series_matches_bruteforce(self):
        pent = euler_series(F(30))
        brute = None
        from orbq.qseries import PuiseuxSeries
        brute = PuiseuxSeries.one(F(30))
        for n in range(1, 31):
            brute = brute * PuiseuxSeries({F(0): 1, F(n): -1})
        assert pent.agrees_with(brute)


class TestCosetReps:
    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6, 8, 9, 12])
    def test_counts_and_inequivalence(self, m):
        reps = coset_reps_gamma0(m)
        assert len(reps) == psi_index(m)
        for i, a in enumerate(reps):
            for b in reps[i + 1:]:
                assert not same_gamma0_coset(a, b, m)

    def test_counts_up_to_60(self):
        for m in range(1, 61):
            assert len(coset_reps_gamma0(m)) == psi_index(m)

    def test_prime_matches_st_powers(self):
        # {id} + {S T^i} represents Gamma_0(p) \ Gamma for prime p
        for p in (2, 3, 5, 7):
            reps = coset_reps_gamma0(p)
            classic = [SL2.identity()] + [SL2.S() @ SL2.T(i) for i in range(p)]
            for c in classic:
                assert sum(1 for r in reps if same_gamma0_coset(c, r, p)) == 1
