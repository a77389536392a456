"""Spaces of modular forms spanned by eta quotients.

An eta quotient prod eta(t tau)^{b_t} with all t | N is a holomorphic
modular form on Gamma_0(N) of weight (1/2) sum b_t with character
((-1)^k s / .), s = prod t^{b_t}, provided sum b_t is even,
sum t b_t = 0 mod 24, sum (N/t) b_t = 0 mod 24 and all cusp orders are
nonnegative (Ligozat).  Bases of whole spaces come from a shipped table
(the ones needed by the orbifold pipeline) with a bounded search as a
fallback; membership of a form is decided by exact linear algebra up to
the Sturm bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import gcd

from .cycletype import CycleType
from .linalg import solve_exact
from .modular import eta_expand
from .nt import divisors, kronecker, prime_factors, psi_index, squarefree_part, totient


class BadDivisor(ValueError):
    pass


class NotInSpace(ValueError):
    pass


class InsufficientPrecision(ValueError):
    pass


class BasisNotFound(RuntimeError):
    pass


@dataclass(frozen=True)
class LigozatResult:
    weight: Fraction
    character_disc: int
    cusp_orders: dict
    conditions_hold: bool
    valid: bool


def cusp_order(cycle: CycleType, n: int, d: int) -> Fraction:
    """Order of vanishing of the quotient at the cusp c/d of Gamma_0(n)."""
    total = Fraction(0)
    for t, b in cycle.pairs:
        g = gcd(d, t)
        total += Fraction(g * g * b, gcd(d, n // d) * d * t)
    return Fraction(n, 24) * total


def ligozat_validate(cycle: CycleType, n: int) -> LigozatResult:
    """Check the Ligozat conditions for the quotient at level n."""
    for t, _ in cycle.pairs:
        if n % t:
            raise BadDivisor(f"part {t} does not divide the level {n}")
    rank = cycle.rank
    cond1 = rank % 2 == 0
    cond2 = cycle.degree % 24 == 0
    cond3 = sum((n // t) * b for t, b in cycle.pairs) % 24 == 0
    weight = Fraction(rank, 2)
    s = Fraction(1)
    for t, b in cycle.pairs:
        s *= Fraction(t) ** b
    disc = squarefree_part(s * (-1 if weight % 2 else 1)) if cond1 else 0
    orders = {d: cusp_order(cycle, n, d) for d in divisors(n)}
    conditions = cond1 and cond2 and cond3
    valid = conditions and all(v >= 0 for v in orders.values())
    return LigozatResult(weight, disc, orders, conditions, valid)


def sturm_bound(k, n: int) -> int:
    """Coefficients q^0..q^B determine a form in M_k(Gamma_0(n))."""
    return int(Fraction(k) * psi_index(n) / 12) + 1


def characters_equal(d1: int, d2: int, n: int) -> bool:
    """Whether Kronecker characters (d1/.) and (d2/.) agree on (Z/n')^*.

    n' absorbs the conductors, so equality is tested on enough residues.
    """
    if d1 == d2:
        return True
    mod = 8 * abs(d1 * d2) * n
    return all(kronecker(d1, a) == kronecker(d2, a)
               for a in range(1, mod + 1) if gcd(a, mod) == 1)


def dim_modular_forms(n: int, k: int):
    """dim M_k(Gamma_0(n)) for trivial character and even k >= 0.

    Returns None for weights/characters outside the classical formula.
    """
    if k < 0:
        return 0
    if k == 0:
        return 1
    if k % 2:
        return None
    eps_inf = sum(totient(gcd(d, n // d)) for d in divisors(n))
    if n % 4 == 0:
        eps2 = 0
    else:
        eps2 = 1
        for p, _ in prime_factors(n):
            eps2 *= 1 if p == 2 else (2 if p % 4 == 1 else 0)
    if n % 9 == 0:
        eps3 = 0
    else:
        eps3 = 1
        for p, _ in prime_factors(n):
            eps3 *= 1 if p == 3 else (2 if p % 3 == 1 else 0)
    g = 1 + Fraction(psi_index(n), 12) - Fraction(eps2, 4) - Fraction(eps3, 3) \
        - Fraction(eps_inf, 2)
    dim = (k - 1) * (g - 1) + (k // 4) * eps2 + (k // 3) * eps3 \
        + Fraction(k, 2) * eps_inf
    assert dim.denominator == 1
    return int(dim)


@dataclass(frozen=True)
class BasisElement:
    """An eta quotient times an invariant Eisenstein power: E4^a * eta_C.

    Pure eta quotients have e4_power = 0.  The E4 factor only appears in
    level-1 bases (E4 itself is not an eta quotient); it is SL2(Z)-invariant
    up to automorphy, so downstream transforms multiply by the plain E4
    expansion.
    """
    cycle: CycleType
    e4_power: int = 0

    def expand(self, trunc):
        out = eta_expand(self.cycle, trunc)
        if self.e4_power:
            from .theta import eisenstein_e4
            out = out * eisenstein_e4(Fraction(trunc) - self.cycle.eta_lead) \
                ** self.e4_power
        return out.truncate(trunc)

    @property
    def weight(self) -> Fraction:
        return self.cycle.eta_weight + 4 * self.e4_power

    def __str__(self):
        tag = f"E4^{self.e4_power} * " if self.e4_power else ""
        return tag + str(self.cycle)


def _as_element(x) -> BasisElement:
    return x if isinstance(x, BasisElement) else BasisElement(x)


@dataclass(frozen=True)
class FormSpace:
    level: int
    weight: Fraction
    character_disc: int
    basis: tuple

    def elements(self) -> list[BasisElement]:
        return [_as_element(x) for x in self.basis]

    def expansions(self, trunc=None):
        bound = Fraction(sturm_bound(self.weight, self.level) + 1)
        if trunc is not None:
            bound = max(bound, Fraction(trunc))
        return [el.expand(bound) for el in self.elements()]

    def verify(self) -> None:
        """Ligozat validity of every member and linear independence."""
        for el in self.elements():
            if el.e4_power:
                if el.weight != self.weight:
                    raise ValueError(f"{el} has the wrong weight")
                continue
            c = el.cycle
            res = ligozat_validate(c, self.level)
            if not res.valid:
                raise ValueError(f"{c} is not holomorphic of level {self.level}")
            if res.weight != self.weight:
                raise ValueError(f"{c} has weight {res.weight}, not {self.weight}")
            if not characters_equal(res.character_disc, self.character_disc,
                                    self.level):
                raise ValueError(f"{c} has the wrong character")
        if _independent_count(self.expansions()) != len(self.basis):
            raise ValueError("basis expansions are linearly dependent")


def _independent_count(expansions) -> int:
    exps = sorted({e for f in expansions for e in f.terms})
    pivots: list[list[Fraction]] = []
    for f in expansions:
        row = [Fraction(f.terms.get(e, 0)) for e in exps]
        for p in pivots:
            j = next(i for i, v in enumerate(p) if v)
            if row[j]:
                fac = row[j] / p[j]
                row = [a - fac * b for a, b in zip(row, p)]
        if any(row):
            pivots.append(row)
    return len(pivots)


@lru_cache(maxsize=1)
def _basis_table() -> dict:
    table = {}
    text = resources.files("orbq.data").joinpath("eta_bases.txt").read_text()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, _, body = line.partition(":")
        n_s, k_s, chi_s = head.split()
        basis = tuple(CycleType.parse(q) for q in body.split(";"))
        table[(int(n_s), Fraction(k_s), int(chi_s))] = basis
    return table


def table_rows() -> list[tuple[int, Fraction, int, tuple]]:
    return [(n, k, chi, basis) for (n, k, chi), basis in sorted(
        _basis_table().items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2]))]


def basis_for_space(n: int, k, character_disc: int = 1,
                    search_bound: int | None = None) -> FormSpace:
    """A basis of M_k(Gamma_0(n), chi) made of eta quotients.

    Table rows are used when available; otherwise a bounded search over
    exponent vectors collects dimension-many independent valid quotients.
    """
    k = Fraction(k)
    for (tn, tk, tchi), basis in _basis_table().items():
        if tn == n and tk == k and characters_equal(tchi, character_disc, n):
            return FormSpace(n, k, character_disc, basis)
    if n == 1 and character_disc == 1 and k.denominator == 1 and k % 4 == 0:
        elements = []
        for b in range(int(k) // 12 + 1):
            a = (int(k) - 12 * b) // 4
            if 4 * a + 12 * b == k and a >= 0:
                elements.append(BasisElement(CycleType({1: 24 * b}), a))
        if elements:
            return FormSpace(1, k, 1, tuple(elements))
    if n == 1 and k == 0 and character_disc == 1:
        return FormSpace(1, k, 1, (CycleType(()),))
    return _search_basis(n, k, character_disc, search_bound)


def _search_basis(n: int, k: Fraction, character_disc: int,
                  search_bound: int | None) -> FormSpace:
    if k.denominator != 1:
        raise BasisNotFound(f"half-integral weight {k} is not supported")
    divs = divisors(n)
    m = len(divs)
    if search_bound is None:
        search_bound = 60 if m <= 3 else (20 if m == 4 else 8)
    target_dim = dim_modular_forms(n, int(k)) if character_disc == 1 else None
    twok = 2 * int(k)
    candidates = []

    def rec(i, partial):
        if i == m - 1:
            b_last = twok - sum(partial)
            if abs(b_last) > search_bound:
                return
            vec = partial + [b_last]
            cycle = CycleType(list(zip(divs, vec)))
            res = ligozat_validate(cycle, n)
            if res.valid and characters_equal(res.character_disc, character_disc, n):
                candidates.append(cycle)
            return
        for b in range(-search_bound, search_bound + 1):
            rec(i + 1, partial + [b])

    rec(0, [])
    candidates.sort(key=lambda c: (sum(abs(b) for _, b in c.pairs), c.pairs))
    bound = Fraction(sturm_bound(k, n) + 1)
    chosen: list[CycleType] = []
    chosen_exp = []
    for c in candidates:
        trial = chosen_exp + [eta_expand(c, bound)]
        if _independent_count(trial) == len(trial):
            chosen.append(c)
            chosen_exp = trial
            if target_dim is not None and len(chosen) == target_dim:
                break
    if target_dim is not None and len(chosen) != target_dim:
        raise BasisNotFound(
            f"found {len(chosen)} independent quotients, need {target_dim} "
            f"for M_{k}(Gamma_0({n}))")
    if not chosen:
        raise BasisNotFound(f"no valid eta quotients at level {n}, weight {k}")
    return FormSpace(n, k, character_disc, tuple(chosen))


def fit_in_basis(f, space: FormSpace) -> list[Fraction]:
    """Exact coefficients x with f = sum x_i basis_i, verified everywhere.

    f must be known past the Sturm bound of the space; every known
    coefficient of f participates in the (overdetermined) exact solve, so a
    nonzero residual anywhere raises NotInSpace.
    """
    need = Fraction(sturm_bound(space.weight, space.level) + 1)
    if f.trunc is not None and f.trunc < need:
        raise InsufficientPrecision(
            f"series known below q^{f.trunc}, need q^{need} for level "
            f"{space.level} weight {space.weight}")
    expansions = space.expansions(trunc=f.trunc)
    cutoff = f.trunc if f.trunc is not None else need
    exps = sorted({e for g in expansions for e in g.terms if e < cutoff}
                  | {e for e in f.terms if e < cutoff})
    for e in exps:
        if e.denominator != 1 or e < 0:
            raise NotInSpace(f"exponent {e} cannot appear in a holomorphic form")
    rows = [[Fraction(g.terms.get(e, 0)) for g in expansions] for e in exps]
    rhs = [Fraction(f.terms.get(e, 0)) for e in exps]
    x = solve_exact(rows, rhs)
    if x is None:
        raise NotInSpace("series does not lie in the spanned space")
    return x
