"""Lattice automorphisms and their lifts to the lattice VOA.

A finite-order isometry nu of an even lattice L lifts to an automorphism
of the lattice VOA; the lift is determined (for character purposes) by a
vector beta in the fixed subspace: it acts on the group-algebra part by
e_a -> e(<beta, a>) u~(a) e_{nu a} with u~ trivial on the fixed-point
sublattice (beta = 0 is the standard lift).  On the fixed lattice of
nu^k the k-th power acts by the phase

    w_k(a) = e(<beta, (1 + nu + ... + nu^{k-1}) a>)
             * (-1)^{<a, nu^{k/2} a>}   [only when n and k are both even]

and everything downstream (orders, conformal weights, types, kernels)
is computed from these characters.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from . import linalg
from .cycletype import CycleType, cycle_type_of_matrix
from .lattice import (GramLattice, PhaseCharacter, ShiftedCoset, Sublattice,
                      check_isometry, fixed_sublattice, min_norm_coset)
from .nt import divisors, lcm


class NotFiniteOrder(ValueError):
    pass


class NonIntegralType(ArithmeticError):
    pass


class SearchExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class LatticeAutomorphism:
    lattice: GramLattice
    matrix: tuple

    def __init__(self, lattice: GramLattice, matrix):
        rows = tuple(tuple(int(v) for v in row) for row in matrix)
        check_isometry(lattice, rows)
        object.__setattr__(self, "lattice", lattice)
        object.__setattr__(self, "matrix", rows)

    @cached_property
    def cycle_type(self) -> CycleType:
        ct = cycle_type_of_matrix(self.matrix)
        n = ct.order
        if not linalg.mat_eq(linalg.mat_pow(self.matrix, n),
                             linalg.identity(self.lattice.dim)):
            raise NotFiniteOrder("matrix is not semisimple of finite order")
        return ct

    @property
    def order(self) -> int:
        return self.cycle_type.order

    def power(self, k: int):
        return linalg.mat_pow(self.matrix, k % self.order if self.order else 0)

    @lru_cache(maxsize=None)
    def power_sum(self, k: int):
        """The matrix 1 + nu + ... + nu^{k-1}."""
        d = self.lattice.dim
        out = [[0] * d for _ in range(d)]
        p = linalg.identity(d)
        for _ in range(k):
            for i in range(d):
                for j in range(d):
                    out[i][j] += p[i][j]
            p = linalg.mat_mul(p, self.matrix)
        return out

    @lru_cache(maxsize=None)
    def fixed(self, k: int = 1) -> Sublattice:
        """Saturated fixed-point sublattice of nu^k."""
        e = k % self.order
        if e == 0:
            return Sublattice.full(self.lattice)
        return fixed_sublattice(self.lattice, self.power(e))

    def cycle_type_of_power(self, k: int) -> CycleType:
        e = k % self.order
        if e == 0:
            return CycleType({1: self.lattice.dim})
        return cycle_type_of_matrix(self.power(e))


def cycle_type_of(aut: LatticeAutomorphism, k: int = 1) -> CycleType:
    return aut.cycle_type_of_power(k)


def _project_fixed(aut: LatticeAutomorphism, beta) -> tuple:
    """Orthogonal projection of beta onto the fixed subspace of nu."""
    n = aut.order
    s = aut.power_sum(n)
    return tuple(sum(Fraction(s[i][j]) * Fraction(beta[j])
                     for j in range(aut.lattice.dim)) / n
                 for i in range(aut.lattice.dim))


@dataclass(frozen=True)
class LiftSpec:
    """A lift of the base automorphism, labelled by beta in the fixed subspace."""

    base: LatticeAutomorphism
    beta: tuple

    def __init__(self, base: LatticeAutomorphism, beta=None):
        object.__setattr__(self, "base", base)
        d = base.lattice.dim
        vec = tuple(Fraction(v) for v in (beta or [0] * d))
        if len(vec) != d:
            raise ValueError("beta has the wrong length")
        if any(vec):
            vec = _project_fixed(base, vec)
        object.__setattr__(self, "beta", vec)

    @property
    def is_standard(self) -> bool:
        return not any(self.beta)

    def beta_pairing(self, vector) -> Fraction:
        """<beta, v> through the Gram form, for an ambient coordinate vector."""
        g = self.base.lattice.gram
        d = self.base.lattice.dim
        return sum(self.beta[i] * Fraction(g[i][j]) * Fraction(vector[j])
                   for i in range(d) for j in range(d))

    @cached_property
    def hat_order(self) -> int:
        return lift_order(self)

    def classification(self) -> str:
        """The table-section label for this lift."""
        if not self.is_standard:
            return "Non-standard lift"
        if self.hat_order == 2 * self.base.order:
            return "Standard lift with order doubling"
        return "Standard lift without order doubling"


def _doubling_values(aut: LatticeAutomorphism) -> list[Fraction]:
    """Values (1/2) <e_i, nu^{n/2} e_i> mod 1 of the doubling character on L."""
    n = aut.order
    d = aut.lattice.dim
    if n % 2:
        return [Fraction(0)] * d
    half = aut.power(n // 2)
    g = aut.lattice.gram
    vals = []
    for i in range(d):
        pairing = sum(Fraction(g[i][j]) * half[j][i] for j in range(d))
        vals.append(Fraction(pairing, 2) % 1)
    return vals


def lift_order(spec: LiftSpec) -> int:
    """Order of the lifted automorphism.

    nu^ has order n * r where r is the order of the character
    a -> e(n <beta, a> + (1/2) <a, nu^{n/2} a>)  on L (the sign part only
    for even n); for the standard lift this reduces to the classical
    doubling criterion, checked on a basis (parity is linear there since
    the cross terms <a, nu^{n/2} b> + <b, nu^{n/2} a> are even).
    """
    aut = spec.base
    n = aut.order
    d = aut.lattice.dim
    doubling = _doubling_values(aut)
    r = 1
    for i in range(d):
        basis_vec = [1 if j == i else 0 for j in range(d)]
        v = (n * spec.beta_pairing(basis_vec) + doubling[i]) % 1
        r = lcm(r, v.denominator)
    return n * r


def w_on_fixed(spec: LiftSpec, k: int) -> PhaseCharacter:
    """The phase character of nu^^k restricted to the fixed lattice of nu^k.

    Values are with respect to the basis of spec.base.fixed(k).
    """
    aut = spec.base
    n = aut.order
    sub = aut.fixed(k)
    if sub.rank == 0:
        return PhaseCharacter(())
    s_k = aut.power_sum(k)
    sign = n % 2 == 0 and k % 2 == 0
    half = aut.power((k // 2) % n) if sign else None
    g = aut.lattice.gram
    d = aut.lattice.dim
    vals = []
    for row in sub.basis_matrix:
        v = spec.beta_pairing(linalg.mat_vec(s_k, list(row)))
        if sign:
            hrow = linalg.mat_vec(half, list(row))
            pairing = sum(Fraction(g[i][j]) * row[i] * hrow[j]
                          for i in range(d) for j in range(d))
            v += Fraction(pairing, 2)
        vals.append(v % 1)
    char = PhaseCharacter(vals)
    _assert_homomorphism(sub, spec, k, char)
    return char


def _assert_homomorphism(sub: Sublattice, spec: LiftSpec, k: int,
                         char: PhaseCharacter) -> None:
    """w_k(a+b) = w_k(a) w_k(b) on all basis pairs (sign part included)."""
    aut = spec.base
    n = aut.order
    sign = n % 2 == 0 and k % 2 == 0
    if not sign:
        return  # the beta part is linear by construction
    half = aut.power((k // 2) % n)
    g = aut.lattice.gram
    d = aut.lattice.dim
    s_k = aut.power_sum(k)
    def value(coords):
        amb = [sum(coords[i] * sub.basis_matrix[i][j] for i in range(sub.rank))
               for j in range(d)]
        v = spec.beta_pairing(linalg.mat_vec(s_k, amb))
        hrow = linalg.mat_vec(half, amb)
        v += Fraction(sum(Fraction(g[i][j]) * amb[i] * hrow[j]
                          for i in range(d) for j in range(d)), 2)
        return v % 1
    r = sub.rank
    for i in range(r):
        ei = [1 if t == i else 0 for t in range(r)]
        for j in range(i, r):
            ej = [1 if t == j else 0 for t in range(r)]
            s = [a + b for a, b in zip(ei, ej)]
            if (value(s) - value(ei) - value(ej)) % 1 != 0:
                raise ArithmeticError(
                    f"w_{k} is not a homomorphism on the fixed lattice")


def sector_weight(spec: LiftSpec, i: int = 1) -> Fraction:
    """Conformal weight of the nu^^i-twisted module.

    rho = c/24 - (1/24) sum_t b_t / t + (1/2) min(F' + beta_i), where F is
    the fixed lattice of nu^i, F' its dual, and beta_i realizes the phase
    character w_i on F (its coordinates in the dual basis are exactly the
    character values).
    """
    aut = spec.base
    c = aut.lattice.dim
    ct = aut.cycle_type_of_power(i) if i % aut.order else CycleType({1: c})
    total = Fraction(c, 24)
    total -= sum(Fraction(b, 24 * t) for t, b in ct.pairs)
    sub = aut.fixed(i)
    if sub.rank:
        char = w_on_fixed(spec, i)
        dual = sub.lattice.dual()
        coset = ShiftedCoset(dual, list(char.values))
        total += min_norm_coset(coset) / 2
    return total


def conformal_weight(spec: LiftSpec) -> Fraction:
    rho = sector_weight(spec, 1)
    n2 = spec.hat_order ** 2
    if (n2 * rho).denominator != 1:
        raise NonIntegralType(f"conformal weight {rho} not in (1/{n2})Z")
    return rho


def orbifold_type(spec: LiftSpec) -> int:
    """n^2 rho mod n for the lift order n."""
    n = spec.hat_order
    rho = conformal_weight(spec)
    val = n * n * rho
    if val.denominator != 1:
        raise NonIntegralType(f"n^2 rho = {val} is not an integer")
    return int(val) % n


def power_profile(spec: LiftSpec) -> list[dict]:
    """Cycle type, fixed rank and phase order of nu^^k for k = 0..N-1."""
    aut = spec.base
    out = []
    for k in range(spec.hat_order):
        ct = aut.cycle_type_of_power(k) if k % aut.order else \
            CycleType({1: aut.lattice.dim})
        sub = aut.fixed(k)
        char = w_on_fixed(spec, k) if k else PhaseCharacter([Fraction(0)] * sub.rank)
        out.append({"k": k, "cycle_type": ct, "fixed_rank": sub.rank,
                    "phase_order": char.order})
    return out


def suggest_type0_beta(aut: LatticeAutomorphism,
                       multipliers=(1, 2, 3, 4, 6),
                       max_candidates: int = 5000) -> list[LiftSpec]:
    """Lifts of type 0, searched over beta in (1/r) dual(L^nu) mod L^nu.

    Candidates are labelled by their character values (c_j / r) on the
    fixed-lattice basis; each defines beta = sum (c_j/r) d_j in terms of
    the dual basis.  Results are ordered by lift order.
    """
    from itertools import product
    sub = aut.fixed(1)
    if sub.rank == 0:
        raise ValueError("fixed-point sublattice is zero: only the standard "
                         "lift exists")
    # dual basis vectors of the fixed lattice, as ambient rational rows
    ginv = linalg.mat_inverse(sub.lattice.gram)
    dual_rows = linalg.mat_mul(ginv, [list(r) for r in sub.basis_matrix])
    found = []
    seen_values = set()
    tried = 0
    for r in multipliers:
        for cs in product(range(r), repeat=sub.rank):
            vals = tuple(Fraction(c, r) % 1 for c in cs)
            if vals in seen_values:
                continue
            seen_values.add(vals)
            tried += 1
            if tried > max_candidates:
                raise SearchExhausted(
                    f"no type-0 lift within {max_candidates} candidates")
            beta = [sum(Fraction(v) * dual_rows[j][t] for j, v in enumerate(vals))
                    for t in range(aut.lattice.dim)]
            spec = LiftSpec(aut, beta)
            try:
                if orbifold_type(spec) == 0:
                    found.append(spec)
            except NonIntegralType:
                continue
    if not found:
        raise SearchExhausted("no type-0 lift found in the searched range")
    found.sort(key=lambda s: s.hat_order)
    return found
