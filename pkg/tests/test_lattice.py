"""Lattices: enumeration, theta series, duals, kernels, inversion formula."""

import random
from fractions import Fraction as F

import pytest

from orbq import linalg
from orbq.fixtures import a1, a2, e8, leech, minus_identity
from orbq.lattice import (GramLattice, NotAnIsometry, NotEven, PhaseCharacter,
                          ShiftedCoset, Sublattice, direct_sum,
                          fixed_sublattice, kernel_of_character,
                          min_norm_coset)
from orbq.shortvec import _enumerate_exact, norm_histogram
from orbq.theta import (DivergentTail, enumerate_by_norm, eval_numeric,
                        extremal_theta, theta, theta_growth)


def random_pos_def(rng, d, spread=3):
    """Random even positive-definite Gram via B^T B + diagonal padding."""
    while True:
        b = [[rng.randint(-spread, spread) for _ in range(d)] for _ in range(d)]
        g = linalg.mat_mul(b, linalg.transpose(b))
        for i in range(d):
            g[i][i] += 2
        g2 = [[2 * g[i][j] if False else g[i][j] + g[j][i] for j in range(d)]
              for i in range(d)]  # symmetrize-and-evenize
        try:
            lat = GramLattice(g2)
        except ValueError:
            continue
        if lat.is_even:
            return lat


def random_unimodular(rng, d, steps=6):
    u = linalg.identity(d)
    for _ in range(steps):
        i, j = rng.randrange(d), rng.randrange(d)
        if i == j:
            continue
        c = rng.randint(-2, 2)
        for t in range(d):
            u[i][t] += c * u[j][t]
    return u


class TestEnumeration:
    def test_a1(self):
        assert enumerate_by_norm(a1(), 2) == {F(0): 1, F(2): 2}

    def test_e8_kissing(self):
        assert enumerate_by_norm(e8(), 2) == {F(0): 1, F(2): 240}

    def test_leech_kissing(self):
        assert enumerate_by_norm(leech(), 4) == {F(0): 1, F(4): 196560}

    def test_basis_invariance(self):
        rng = random.Random(3)
        for _ in range(20):
            d = rng.randint(2, 8)
            lat = random_pos_def(rng, d)
            u = random_unimodular(rng, d)
            g2 = linalg.mat_mul(linalg.mat_mul(u, [list(r) for r in lat.gram]),
                                linalg.transpose(u))
            assert enumerate_by_norm(lat, 8) == \
                enumerate_by_norm(GramLattice(g2), 8)

    def test_backends_agree(self):
        rng = random.Random(4)
        for _ in range(10):
            d = rng.randint(2, 6)
            lat = random_pos_def(rng, d)
            exact = _enumerate_exact([[F(v) for v in r] for r in lat.gram],
                                     F(10), None, None, 1)
            from orbq.shortvec import _enumerate_fast
            fast = _enumerate_fast([[int(v) for v in r] for r in lat.gram],
                                   10, None, 1)
            assert exact == fast

    def test_character_classes(self):
        hist = norm_histogram(a1().gram, 4, cvec=[1], m=2)
        assert hist == {(F(0), 0): 1, (F(2), 1): 2}


class TestThetaSeries:
    def test_a2(self):
        t = theta(a2(), F(5))
        assert [t.coeff(k) for k in range(5)] == [1, 6, 0, 6, 6]

    def test_shifted(self):
        t = theta(a1(), F(3), shift=[F(1, 2)])
        assert t.coeff(F(1, 4)) == 2 and t.coeff(F(9, 4)) == 2

    def test_twisted(self):
        t = theta(a1(), F(5), phase=PhaseCharacter([F(1, 2)]))
        assert t.coeff(0) == 1 and t.coeff(1) == -2 and t.coeff(4) == 2

    def test_direct_sum_multiplicativity(self):
        rng = random.Random(9)
        for _ in range(5):
            l1 = random_pos_def(rng, rng.randint(1, 3))
            l2 = random_pos_def(rng, rng.randint(1, 3))
            lhs = theta(direct_sum(l1, l2), F(6))
            rhs = theta(l1, F(6)) * theta(l2, F(6))
            assert lhs.agrees_with(rhs)

    def test_extremal_theta_values(self):
        x24 = extremal_theta(24, F(4))
        assert x24.coeff(2) == 196560 and x24.coeff(3) == 16773120
        x48 = extremal_theta(48, F(4))
        assert x48.coeff(1) == 0 and x48.coeff(2) == 0 and x48.coeff(3) == 52416000
        x72 = extremal_theta(72, F(5))
        assert all(x72.coeff(k) == 0 for k in (1, 2, 3))
        assert x72.coeff(4) > 0


class TestStructure:
    def test_dual(self):
        assert e8().dual().gram == e8().dual().gram
        assert a1().dual().gram == ((F(1, 2),),)
        assert GramLattice([[2, 0], [0, 2]]).dual().det == F(1, 4)
        assert a1().dual().det == F(1, 2)

    def test_levels(self):
        assert e8().level() == 1
        assert a1().level() == 4
        assert GramLattice([[8]]).level() == 16
        with pytest.raises(NotEven):
            GramLattice([[1]]).level()

    def test_fixed_sublattice(self):
        z2 = GramLattice([[2, 0], [0, 2]])
        sw = [[0, 1], [1, 0]]
        sub = fixed_sublattice(z2, sw)
        assert sub.rank == 1 and sub.lattice.gram == ((4,),)
        assert fixed_sublattice(e8(), linalg.identity(8)).rank == 8
        assert fixed_sublattice(e8(), minus_identity(8)).rank == 0

    def test_not_isometry(self):
        with pytest.raises(NotAnIsometry):
            fixed_sublattice(a2(), [[1, 1], [0, 1]])

    def test_kernel_of_character(self):
        sub = Sublattice.full(a1())
        k = kernel_of_character(sub, PhaseCharacter([F(1, 2)]))
        assert k.lattice.gram == ((8,),)
        assert k.det == 4 * a1().det
        z2 = Sublattice.full(GramLattice([[2, 0], [0, 2]]))
        k = kernel_of_character(z2, PhaseCharacter([F(1, 2), F(0)]))
        assert k.det == 8

    def test_kernel_determinant_law(self):
        """det(ker u) = m^2 det(L) for a character with cyclic image of order m."""
        rng = random.Random(21)
        done = 0
        while done < 30:
            d = rng.randint(1, 4)
            lat = random_pos_def(rng, d)
            m = rng.choice([2, 3, 4, 5, 6])
            vals = [F(rng.randrange(m), m) for _ in range(d)]
            char = PhaseCharacter(vals)
            if char.order != m:
                continue
            sub = Sublattice.full(lat)
            k = kernel_of_character(sub, char)
            assert k.det == m * m * lat.det
            done += 1

    def test_min_norm_coset(self):
        assert min_norm_coset(ShiftedCoset(a1(), [0])) == 0
        assert min_norm_coset(ShiftedCoset(a1().dual(), [F(1, 2)])) == F(1, 8)
        z2 = GramLattice([[1, 0], [0, 1]])
        assert min_norm_coset(ShiftedCoset(z2, [F(1, 2), F(1, 2)])) == F(1, 2)

    def test_min_norm_shift_invariance(self):
        rng = random.Random(13)
        for _ in range(10):
            lat = random_pos_def(rng, rng.randint(1, 3))
            lam = [F(rng.randrange(4), 4) for _ in range(lat.dim)]
            shift2 = [v + rng.randint(-2, 2) for v in lam]
            assert min_norm_coset(ShiftedCoset(lat, lam)) == \
                min_norm_coset(ShiftedCoset(lat, shift2))


class TestInversionFormula:
    """theta^beta_L(-1/tau) = det(L)^{-1/2} (-i tau)^{d/2} theta_{L'+beta}(tau)."""

    @pytest.mark.parametrize("tau", [1j, 1 + 1j, 2j / 3])
    def test_random_even_lattices(self, tau):
        import cmath
        rng = random.Random(int(abs(tau) * 100))
        for _ in range(10):
            d = rng.randint(1, 6)
            lat = random_pos_def(rng, d)
            vals = tuple(F(rng.randrange(4), 4) for _ in range(d))
            trunc = F(26)
            twisted = theta(lat, trunc, phase=PhaseCharacter(vals))
            # beta in dual coordinates equals the character value vector
            dual = lat.dual()
            shifted = theta(dual, trunc, shift=list(vals))
            lhs, err1 = eval_numeric(twisted, -1 / tau,
                                     growth=theta_growth(lat))
            rv, err2 = eval_numeric(shifted, tau, growth=theta_growth(dual))
            scale = (float(lat.det)) ** -0.5 * (-1j * tau) ** (d / 2)
            rhs = scale * rv
            assert err1 + abs(scale) * err2 < 5e-9
            assert abs(lhs - rhs) < 1e-8

    def test_divergent_tail_guard(self):
        t = theta(e8(), F(3))
        with pytest.raises(DivergentTail):
            eval_numeric(t, 0.001j, growth=theta_growth(e8()))

    def test_constant_series_exact(self):
        from orbq.qseries import PuiseuxSeries
        val, err = eval_numeric(PuiseuxSeries({F(0): 5}), 0.3 + 0.4j)
        assert val == 5 and err == 0.0

    def test_self_consistency_two_truncations(self):
        tau = 1j
        a, ea = eval_numeric(theta(a1(), F(9)), tau, growth=theta_growth(a1()))
        b, eb = eval_numeric(theta(a1(), F(16)), tau, growth=theta_growth(a1()))
        assert abs(a - b) <= ea + eb


class TestCache:
    def test_disk_roundtrip(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ORBQ_CACHE_DIR", str(tmp_path))
        import orbq.theta as th
        th._memory_cache.clear()
        h1 = th.theta_histogram(a2().gram, 6)
        files = list(tmp_path.iterdir())
        assert len(files) == 1
        assert files[0].read_text().startswith("# gram=")
        th._memory_cache.clear()
        h2 = th.theta_histogram(a2().gram, 6)  # now read back from disk
        assert h1 == h2
        th._memory_cache.clear()

    def test_needs_cache_guard(self, monkeypatch):
        monkeypatch.delenv("ORBQ_CACHE_DIR", raising=False)
        import orbq.theta as th
        big = [[2 * int(i == j) for j in range(30)] for i in range(30)]
        with pytest.raises(th.NeedsCache):
            th.theta_histogram(big, 2)
