"""Tests for exact Puiseux-series and cyclotomic arithmetic."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from orbq.cyclo import Cyclo, e
from orbq.qseries import (
    EmptySeriesError,
    NonIntegerCoefficient,
    NonIntegralExponent,
    PuiseuxSeries,
    TruncationError,
    assert_integral,
    series_invert,
    series_mul,
    series_rescale,
)


def geom(trunc):
    """1 + q + q^2 + ... below trunc."""
    return PuiseuxSeries({F(n): 1 for n in range(trunc)}, F(trunc))


def euler_product(trunc):
    """prod_{n>=1} (1 - q^n) expanded brute force to the given order."""
    out = PuiseuxSeries.one(F(trunc))
    for n in range(1, trunc + 1):
        out = out * PuiseuxSeries({F(0): 1, F(n): -1})
    return out.truncate(trunc)


class TestCyclo:
    def test_root_of_unity_reduction(self):
        z = Cyclo.root_of_unity(3, 1)
        assert (z**3) == 1
        assert (1 + z + z * z).is_zero()

    def test_cyclotomic_relation(self):
        # Phi_12(zeta_12) = 0: zeta^4 - zeta^2 + 1 = 0
        z = e(F(1, 12))
        assert (z**4 - z**2 + 1).is_zero()

    def test_embedding_commutes(self):
        a = e(F(1, 3)) + 2
        b = e(F(1, 4))
        lifted = (a * b) * (a + b)
        direct = (a * b) * (a + b)
        assert lifted == direct
        # mixing with order 6 representative of the same number
        a6 = e(F(2, 6)) + 2
        assert a == a6
        assert a * b == a6 * b

    def test_rational_detection(self):
        z = e(F(1, 5))
        s = z + z**2 + z**3 + z**4
        assert s.is_rational() and s.rational() == -1
        assert not (z + z**2).is_rational()

    def test_inverse(self):
        z = e(F(1, 7))
        x = 1 + z + 3 * z**5
        assert (x * x.inverse()) == 1

    def test_sqrt_rational(self):
        for r in [F(2), F(3), F(5), F(12), F(1, 2), F(49), F(75, 4)]:
            s = Cyclo.sqrt_rational(r)
            assert (s * s) == r
            assert abs(s.numeric().imag) < 1e-9
            assert s.numeric().real > 0

    @given(st.integers(-30, 30), st.integers(-30, 30), st.integers(1, 24),
           st.integers(1, 24))
    @settings(max_examples=60, deadline=None)
    def test_phase_multiplication(self, a, b, m, n):
        assert e(F(a, m)) * e(F(b, n)) == e(F(a, m) + F(b, n))


class TestSeriesRing:
    def test_telescoping(self):
        one_minus_q = PuiseuxSeries({F(0): 1, F(1): -1})
        prod = one_minus_q * geom(30)
        assert prod.agrees_with(PuiseuxSeries.one())
        assert prod.trunc == 30

    def test_half_exponents_merge(self):
        h = PuiseuxSeries.monomial(1, F(1, 2))
        assert (h * h).terms == {F(1): 1}
        assert (h * h).exponent_denominator() == 1

    def test_eta_pentagonal_vs_product(self):
        # Euler's pentagonal series times the partition generating series is 1
        from orbq.modular import euler_series
        pent = euler_series(F(50))
        assert pent.agrees_with(euler_product(50))
        inv = euler_product(50).invert()
        assert (pent * inv).agrees_with(PuiseuxSeries.one())

    def test_invert_simple(self):
        one_minus_q = PuiseuxSeries({F(0): 1, F(1): -1})
        inv = one_minus_q.invert(trunc=12)
        assert inv.agrees_with(geom(12))
        assert (one_minus_q * inv).agrees_with(PuiseuxSeries.one())

    def test_invert_leading_exponent(self):
        # invert(q^{1/24} * (1 - q)): leading exponent -1/24
        a = PuiseuxSeries({F(1, 24): 1, F(25, 24): -1}, F(4))
        inv = a.invert()
        assert inv.lead_exponent() == F(-1, 24)
        assert (a * inv).agrees_with(PuiseuxSeries.one())

    def test_invert_eta24_expansion(self):
        # invert(eta series)^24 = q^{-1} + 24 + 324 q + 3200 q^2 + ...
        from orbq.modular import eta_power_series
        f = eta_power_series(-24, F(4))
        assert f.coeff(F(-1)) == 1
        assert f.coeff(F(0)) == 24
        assert f.coeff(F(1)) == 324
        assert f.coeff(F(2)) == 3200

    def test_invert_empty_raises(self):
        with pytest.raises(EmptySeriesError):
            PuiseuxSeries.zero(F(3)).invert()

    def test_rescale(self):
        a = PuiseuxSeries({F(0): 1, F(1): 1})
        assert series_rescale(a, 2).terms == {F(0): 1, F(2): 1}
        b = PuiseuxSeries({F(1, 24): 1, F(25, 24): -1})
        assert series_rescale(b, 2).terms == {F(1, 12): 1, F(25, 12): -1}
        c = series_rescale(b, F(1, 3))
        assert c.exponent_denominator() == 72

    def test_rescale_composes(self):
        a = PuiseuxSeries({F(1, 2): 3, F(2): -1}, F(5))
        both = series_rescale(series_rescale(a, F(2, 3), F(1, 5)), F(3), F(-1))
        once = series_rescale(a, F(2), F(3) * F(1, 5) + F(-1))
        assert both == once

    def test_truncation_propagation(self):
        a = PuiseuxSeries({F(0): 1}, F(3))       # 1 + O(q^3)
        b = PuiseuxSeries({F(2): 1}, F(10))      # q^2 + O(q^10)
        assert (a * b).trunc == F(5)
        assert (a + b).trunc == F(3)

    def test_coeff_beyond_trunc_raises(self):
        a = PuiseuxSeries({F(0): 1}, F(3))
        with pytest.raises(TruncationError):
            a.coeff(3)

    def test_assert_integral(self):
        good = PuiseuxSeries({F(0): 1, F(1): 2})
        assert assert_integral(good).terms == {F(0): 1, F(1): 2}
        z = e(F(1, 3))
        vanishing = PuiseuxSeries({F(1): z + z**2 + 1})
        assert assert_integral(vanishing).is_zero()
        with pytest.raises(NonIntegralExponent):
            assert_integral(PuiseuxSeries({F(1, 2): 1, F(0): 1}))
        with pytest.raises(NonIntegerCoefficient):
            assert_integral(PuiseuxSeries({F(1): F(1, 2)}))

    def test_cyclotomic_coefficients_demote(self):
        z = e(F(1, 8))
        s = PuiseuxSeries({F(1): z}) * PuiseuxSeries({F(1): z**7})
        assert s.terms == {F(2): 1}


def random_series(draw_exps, draw_coeffs):
    terms = {F(e, 4): c for e, c in zip(draw_exps, draw_coeffs)}
    return PuiseuxSeries(terms, F(6))


small_series = st.builds(
    random_series,
    st.lists(st.integers(-4, 20), min_size=0, max_size=6),
    st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6),
             min_size=6, max_size=6),
)


class TestRingAxioms:
    @given(small_series, small_series, small_series)
    @settings(max_examples=80, deadline=None)
    def test_mul_associative_on_known_range(self, a, b, c):
        assert ((a * b) * c).agrees_with(a * (b * c))

    @given(small_series, small_series, small_series)
    @settings(max_examples=80, deadline=None)
    def test_distributive(self, a, b, c):
        lhs = a * (b + c)
        rhs = a * b + a * c
        assert lhs.agrees_with(rhs)

    @given(small_series, small_series)
    @settings(max_examples=80, deadline=None)
    def test_mul_commutative(self, a, b):
        assert (a * b) == (b * a)

    @given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4),
                    min_size=5, max_size=5),
           st.fractions(min_value=F(1, 3), max_value=3, max_denominator=3))
    @settings(max_examples=60, deadline=None)
    def test_invert_two_sided(self, coeffs, lead):
        terms = {F(0): lead}
        for i, c in enumerate(coeffs, start=1):
            if c:
                terms[F(i, 2)] = c
        a = PuiseuxSeries(terms, F(8))
        inv = a.invert()
        assert (a * inv).agrees_with(PuiseuxSeries.one())
        assert (inv * a).agrees_with(PuiseuxSeries.one())
