"""Assembly of cyclic-orbifold characters.

For a type-0 lift of order N the orbifold character is

    ch = (1/N) sum_{t | N} C_t,      C_t = sum over Gamma_0(N/t)\\SL2(Z)
                                           of Z(M)^{-1} (D_t | M),

where D_t = sum_{(j,N)=t} T(0,j) collects the untwisted traces
T(0,j) = theta_{L^{nu^j}, w_j} / eta_{nu^j}.  Each numerator
F_t = eta_{nu^t} D_t is computed two independent ways (direct
character-weighted sums and the Moebius/kernel form) and cross-asserted,
then expressed exactly in an eta-quotient basis so that its SL2(Z)
images are computable in closed form.  Z(M) is the central-charge
character of the modular-invariance theorem; it is trivial when 24 | c.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .autlift import LiftSpec, conformal_weight, orbifold_type, sector_weight, w_on_fixed
from .cyclo import Cyclo
from .cycletype import CycleType
from .lattice import PhaseCharacter, Sublattice
from .modforms import basis_for_space, fit_in_basis, sturm_bound
from .modular import SL2, coset_reps_gamma0, eta_expand, transform_eta_quotient
from .nt import divisors, moebius, totient
from .qseries import PuiseuxSeries
from .theta import eisenstein_e4, extremal_theta, norm_bound_below, theta_histogram


class NotType0(RuntimeError):
    pass


class MismatchedForms(ArithmeticError):
    pass


class BadCentralCharge(ValueError):
    pass


class UnsupportedPhases(RuntimeError):
    """Individual trace functions requested for an irrational-phase case."""


def zm_character(m: SL2, c: int) -> Cyclo:
    """The character Z(M) of the modular-invariance theorem (8 | c).

    Z(M) = e((-c/24)(b - c)d) when 3 does not divide d, and
    e((-c/24)(b + (a+1)c)) when 3 | d; identically 1 when 24 | c.
    """
    if c % 8:
        raise BadCentralCharge("central charge must be divisible by 8")
    al, be, ga, de = m.a, m.b, m.c, m.d
    if de % 3:
        ex = Fraction(-c, 24) * (be - ga) * de
    else:
        ex = Fraction(-c, 24) * (be + (al + 1) * ga)
    return Cyclo.e(ex)


@dataclass(frozen=True)
class TraceFunction:
    sector: tuple          # (i, j) mod N
    series: PuiseuxSeries
    provenance: str        # "formula" or "modular image"


@dataclass
class OrbifoldReport:
    character: PuiseuxSeries
    dims: dict
    type: int
    hat_order: int
    central_charge: int
    classification: str
    sector_weights: dict
    coset_counts: dict
    seconds: float = 0.0

    def format_character(self) -> str:
        return self.character.format()


# ---------------------------------------------------------------------------
# sector data: the numerator of one D_t and its eta-quotient decomposition
# ---------------------------------------------------------------------------

@dataclass
class SectorDecomposition:
    t: int
    m: int                                  # N / t
    cycle: CycleType                        # cycle type of nu^t
    terms: list                             # [(Fraction, CycleType, e4_power)]
    numerator: PuiseuxSeries | None = None  # F_t, when computed explicitly
    phase_order: int = 1

    def d_series(self, trunc) -> PuiseuxSeries:
        """D_t = sum coef * E4^a * eta_{quotient} expanded below trunc."""
        trunc = Fraction(trunc)
        out = PuiseuxSeries.zero(trunc)
        for coef, quotient, e4 in self.terms:
            part = eta_expand(quotient, trunc)
            if e4:
                part = (part * eisenstein_e4(trunc - quotient.eta_lead) ** e4)
                part = part.truncate(trunc)
            out = out + part.scale(coef)
        return out

    def image_series(self, mat: SL2, trunc) -> PuiseuxSeries:
        """(D_t | mat) expanded below trunc (automorphy weight is zero)."""
        trunc = Fraction(trunc)
        out = PuiseuxSeries.zero(trunc)
        for coef, quotient, e4 in self.terms:
            prod = transform_eta_quotient(quotient, mat)
            if prod.automorphy_weight + 4 * e4 != 0:
                raise ArithmeticError("transformed term is not weight-free")
            part = prod.expand(trunc)
            if e4:
                part = (part * eisenstein_e4(trunc - prod.lead_exponent()) ** e4)
                part = part.truncate(trunc)
            out = out + part.scale(coef)
        return out


def _theta_series_from_hist(hist, trunc, weight_fn) -> PuiseuxSeries:
    terms: dict = {}
    trunc = Fraction(trunc)
    for (norm, j), cnt in hist.items():
        ex = norm / 2
        if ex >= trunc:
            continue
        w = weight_fn(j)
        if w:
            terms[ex] = terms.get(ex, 0) + w * cnt
    return PuiseuxSeries(terms, trunc)


def sector_numerator(spec: LiftSpec, t: int, trunc,
                     theta_full: PuiseuxSeries | None = None,
                     allow_large: bool = False) -> SectorDecomposition:
    """The numerator F_t = eta_{nu^t} D_t, cross-checked in both forms.

    F_t = sum_{k in (Z/m)*} theta_{L^{nu^t}, w_t^k}
        = sum_{d | m} mu(d) (m/d) theta_{ker(w_t^d)}.

    When theta_full is supplied and the fixed lattice of nu^t is all of L
    with trivial phase, the enumerated theta is replaced by it.
    """
    aut = spec.base
    n_hat = spec.hat_order
    m = n_hat // t
    sub = aut.fixed(t)
    ct = aut.cycle_type_of_power(t)
    char = w_on_fixed(spec, t)
    r = char.order
    if m % r:
        raise ArithmeticError(f"phase order {r} does not divide {m} at t={t}")
    trunc = Fraction(trunc)

    if sub.rank == sub.parent.dim and char.is_trivial and theta_full is not None:
        f = theta_full.truncate(trunc).scale(totient(m))
        return SectorDecomposition(t, m, ct, [], numerator=f, phase_order=1)

    cvec, order = (None, 1)
    if not char.is_trivial:
        cvec, order = char.class_vector()
    hist = theta_histogram(sub.lattice.gram,
                           norm_bound_below(sub.lattice.gram, 2 * trunc),
                           cvec=cvec, m=order, allow_large=allow_large)

    # direct form (a): sum over k coprime to m of the w^k-twisted theta
    units = [k for k in range(1, m + 1) if gcd(k, m) == 1]
    def direct_weight(j):
        total = Cyclo.from_rational(0)
        for k in units:
            total = total + Cyclo.e(Fraction(j * k, order))
        return total.simplify()
    weights_direct = {j: direct_weight(j) for j in range(order)}
    f_direct = _theta_series_from_hist(hist, trunc, lambda j: weights_direct[j])

    # kernel form (b): sum_{d | m} mu(d) (m/d) theta_{ker(w^d)}
    kernel_weight = {}
    for j in range(order):
        w = 0
        for d in divisors(m):
            md = moebius(d)
            if md and (j * d) % order == 0:
                w += md * (m // d)
        kernel_weight[j] = w
    f_kernel = _theta_series_from_hist(hist, trunc, lambda j: kernel_weight[j])

    if not f_direct.rationalize().agrees_with(f_kernel):
        raise MismatchedForms(
            f"direct and Moebius/kernel forms of F_{t} disagree")
    return SectorDecomposition(t, m, ct, [], numerator=f_kernel,
                               phase_order=r)


def kernel_sublattice(spec: LiftSpec, t: int, d: int) -> Sublattice:
    """K_{t,d} = ker(w_t^d) inside the fixed lattice of nu^t."""
    from .lattice import kernel_of_character
    sub = spec.base.fixed(t)
    char = w_on_fixed(spec, t).power(d)
    return kernel_of_character(sub, char)


def compute_Dt(spec: LiftSpec, t: int, trunc,
               theta_full: PuiseuxSeries | None = None,
               allow_large: bool = False) -> PuiseuxSeries:
    """D_t = F_t / eta_{nu^t}, both numerator forms cross-asserted."""
    dec = sector_numerator(spec, t, Fraction(trunc) + _eta_lead(spec, t),
                           theta_full=theta_full, allow_large=allow_large)
    inv = eta_expand(dec.cycle.inverse(), Fraction(trunc))
    return (dec.numerator * inv).truncate(trunc)


def _eta_lead(spec: LiftSpec, t: int) -> Fraction:
    return spec.base.cycle_type_of_power(t).eta_lead


def _fit_level(spec: LiftSpec, t: int) -> int:
    """lcm of the Hecke-Schoenberg levels of all kernels K_{t,d} and N/t."""
    from .nt import lcm
    m = spec.hat_order // t
    level = m
    sub = spec.base.fixed(t)
    char = w_on_fixed(spec, t)
    for d in divisors(m):
        if moebius(d) == 0:
            continue
        k = kernel_sublattice(spec, t, d) if not char.is_trivial else sub
        if k.rank:
            level = lcm(level, k.lattice.level())
    return level


def sector_decomposition(spec: LiftSpec, t: int,
                         theta_full: PuiseuxSeries | None = None,
                         allow_large: bool = False) -> SectorDecomposition:
    """Express eta_{nu^t} D_t exactly in an eta-quotient basis.

    Returns term list [(coef, quotient, e4_power)] with quotient the basis
    cycle type divided by the cycle type of nu^t (a weight-zero object
    once the E4 power is counted).
    """
    aut = spec.base
    m = spec.hat_order // t
    sub = aut.fixed(t)
    ct = aut.cycle_type_of_power(t)
    if sub.rank == 0:
        dec = SectorDecomposition(t, m, ct, [(Fraction(totient(m)),
                                              ct.inverse(), 0)])
        return dec
    if sub.rank % 2:
        raise ArithmeticError(
            f"fixed lattice of nu^{t} has odd rank {sub.rank}; half-integral "
            f"weight eta fitting is not supported")
    weight = Fraction(sub.rank, 2)
    level = _fit_level(spec, t)
    from .nt import squarefree_part
    disc = squarefree_part(sub.lattice.det * (-1 if weight % 2 else 1))
    space = basis_for_space(level, weight, disc)
    need = Fraction(sturm_bound(weight, level) + 1)
    dec = sector_numerator(spec, t, need, theta_full=theta_full,
                           allow_large=allow_large)
    coeffs = fit_in_basis(dec.numerator, space)
    terms = []
    for x, el in zip(coeffs, space.elements()):
        if x:
            terms.append((x, el.cycle / ct, el.e4_power))
    dec.terms = terms
    return dec


def compute_Ct(spec: LiftSpec, t: int, trunc,
               theta_full: PuiseuxSeries | None = None,
               allow_large: bool = False,
               reps: list[SL2] | None = None) -> PuiseuxSeries:
    """C_t = sum over Gamma_0(N/t) cosets of Z(M)^{-1} (D_t | M)."""
    n_hat = spec.hat_order
    m = n_hat // t
    trunc = Fraction(trunc)
    c = spec.base.lattice.dim
    if m == 1:
        return compute_Dt(spec, t, trunc, theta_full=theta_full,
                          allow_large=allow_large)
    dec = sector_decomposition(spec, t, theta_full=theta_full,
                               allow_large=allow_large)
    out = PuiseuxSeries.zero(trunc)
    for mat in (reps if reps is not None else coset_reps_gamma0(m)):
        img = dec.image_series(mat, trunc)
        z = zm_character(mat, c)
        if not (z == 1):
            img = img.scale(z.inverse())
        out = out + img
    return out


def untwisted_trace(spec: LiftSpec, j: int, trunc,
                    theta_full: PuiseuxSeries | None = None,
                    allow_large: bool = False) -> TraceFunction:
    """T(0,j) = theta_{L^{nu^j}, w_j} / eta_{nu^j}."""
    aut = spec.base
    trunc = Fraction(trunc)
    j = j % spec.hat_order
    sub = aut.fixed(j)
    ct = aut.cycle_type_of_power(j)
    char = w_on_fixed(spec, j)
    lead = ct.eta_lead
    if sub.rank == sub.parent.dim and char.is_trivial and theta_full is not None:
        th = theta_full.truncate(trunc + lead)
    else:
        cvec, order = (None, 1)
        if not char.is_trivial:
            cvec, order = char.class_vector()
        hist = theta_histogram(sub.lattice.gram,
                               norm_bound_below(sub.lattice.gram,
                                                2 * (trunc + lead)),
                               cvec=cvec, m=order, allow_large=allow_large)
        th = _theta_series_from_hist(
            hist, trunc + lead,
            (lambda jj: Cyclo.e(Fraction(jj, order)).simplify()) if order > 1
            else (lambda jj: 1))
    inv = eta_expand(ct.inverse(), trunc)
    return TraceFunction((0, j), (th * inv).truncate(trunc), "formula")


def orbifold_character(spec: LiftSpec, trunc_weight: int = 4,
                       theta_full: PuiseuxSeries | None = None,
                       use_extremal: bool = False,
                       allow_large: bool = False,
                       rep_sets: dict | None = None) -> OrbifoldReport:
    """The graded character of the cyclic orbifold defined by the lift.

    Requires type 0.  theta_full (or use_extremal for extremal lattices
    of dimension 24/48/72) supplies the full-lattice theta series; all
    other thetas come from enumeration through the cache.
    """
    started = time.time()
    ty = orbifold_type(spec)
    if ty != 0:
        raise NotType0(f"lift has type {ty}, not 0")
    c = spec.base.lattice.dim
    if theta_full is None and use_extremal:
        theta_full = extremal_theta(c, Fraction(trunc_weight + 1))
    n_hat = spec.hat_order
    trunc = Fraction(trunc_weight) - Fraction(c, 24)
    total = PuiseuxSeries.zero(trunc)
    coset_counts = {}
    for t in divisors(n_hat):
        m = n_hat // t
        reps = (rep_sets or {}).get(m)
        ct_series = compute_Ct(spec, t, trunc, theta_full=theta_full,
                               allow_large=allow_large, reps=reps)
        coset_counts[t] = len(reps) if reps is not None else \
            len(coset_reps_gamma0(m))
        total = total + ct_series
    ch = total.scale(Fraction(1, n_hat)).rationalize()
    shifted = ch.rescale(1, Fraction(c, 24)).assert_integral()
    if shifted.coeff(0) != 1:
        raise ArithmeticError(
            f"vacuum coefficient is {shifted.coeff(0)}, expected 1")
    if any(v < 0 for v in shifted.terms.values()):
        raise ArithmeticError("character has negative coefficients")
    dims = extract_dims(ch, c, upto=min(3, trunc_weight - 1))
    weights = {i: sector_weight(spec, i) for i in divisors(n_hat)}
    return OrbifoldReport(
        character=ch, dims=dims, type=ty, hat_order=n_hat, central_charge=c,
        classification=spec.classification(), sector_weights=weights,
        coset_counts=coset_counts, seconds=time.time() - started)


def extract_dims(ch: PuiseuxSeries, c: int, upto: int = 3) -> dict:
    """Graded dimensions: dim V_(k) = coefficient of q^{k - c/24}."""
    out = {}
    for k in range(upto + 1):
        out[k] = int(ch.coeff(Fraction(k) - Fraction(c, 24)))
    return out


def module_characters(spec: LiftSpec, trunc_weight: int = 4,
                      theta_full: PuiseuxSeries | None = None,
                      use_extremal: bool = False,
                      allow_large: bool = False) -> dict:
    """Characters of all N^2 irreducible modules W^{(i,j)} of the fixed VOA.

    Supported when every w_t is trivial on the fixed lattice of nu^t (all
    T(0,j) with gcd(j,N) = t then coincide); individual traces in the
    phase cases are not rational eta combinations and are representative-
    dependent, so UnsupportedPhases is raised there.
    """
    ty = orbifold_type(spec)
    if ty != 0:
        raise NotType0(f"lift has type {ty}, not 0")
    c = spec.base.lattice.dim
    if theta_full is None and use_extremal:
        theta_full = extremal_theta(c, Fraction(trunc_weight + 1))
    n_hat = spec.hat_order
    trunc = Fraction(trunc_weight) - Fraction(c, 24)
    for t in divisors(n_hat):
        if not w_on_fixed(spec, t).is_trivial:
            raise UnsupportedPhases(
                f"w_{t} is nontrivial; individual traces are not "
                f"eta-quotient combinations")
    # T(i,k) for all pairs, from modular images of T(0,t), t = gcd(i,k,N)
    traces: dict = {}
    for t in divisors(n_hat):
        m = n_hat // t
        if m == 1:
            traces[(0, 0)] = compute_Dt(spec, t, trunc, theta_full=theta_full,
                                        allow_large=allow_large)
            continue
        dec = sector_decomposition(spec, t, theta_full=theta_full,
                                   allow_large=allow_large)
        phi = totient(m)
        for mat in coset_reps_gamma0(m):
            img = dec.image_series(mat, trunc).scale(Fraction(1, phi))
            z = zm_character(mat, c)
            if not (z == 1):
                img = img.scale(z.inverse())
            for j in range(1, n_hat + 1):
                if gcd(j, n_hat) == t:
                    key = ((j * mat.c) % n_hat, (j * mat.d) % n_hat)
                    if key in traces:
                        raise ArithmeticError(f"trace {key} produced twice")
                    traces[key] = img
    if len(traces) != n_hat * n_hat:
        raise ArithmeticError("incomplete trace table")
    out = {}
    for i in range(n_hat):
        for j in range(n_hat):
            acc = PuiseuxSeries.zero(trunc)
            for k in range(n_hat):
                phase = Cyclo.e(Fraction(-j * k, n_hat)).simplify()
                acc = acc + traces[(i, k)].scale(phase)
            out[(i, j)] = acc.scale(Fraction(1, n_hat))
    return out


# ---------------------------------------------------------------------------
# abstract driver: fixed-point-free cycle types with a supplied full theta
# ---------------------------------------------------------------------------

class NotFixedPointFree(ValueError):
    pass


def fixed_point_free_orbifold(cycle: CycleType, theta_full: PuiseuxSeries,
                              trunc_weight: int = 4) -> OrbifoldReport:
    """Orbifold character determined by the cycle type alone.

    Valid when every proper power of the automorphism is fixed-point
    free; then all lifts are standard, there is no order doubling, all
    twisted numerators are constants, and theta_full (e.g. the extremal
    fit) is the only lattice input.
    """
    started = time.time()
    n = cycle.order
    c = cycle.degree
    if c % 8:
        raise BadCentralCharge("central charge must be divisible by 8")
    for k in range(1, n):
        if cycle.power(k).rank != 0:
            raise NotFixedPointFree(
                f"power {k} has fixed rank {cycle.power(k).rank}")
    if n % 2 == 0:
        # nu^{n/2} is a fixed-point-free involution, hence -1: no doubling
        pass
    # type check: rho = c/24 - (1/24) sum b_t/t, with no shift term
    rho = Fraction(c, 24) - sum(Fraction(b, 24 * t) for t, b in cycle.pairs)
    ty = (n * n * rho)
    if ty.denominator != 1:
        raise NotType0(f"n^2 rho = {ty} is not an integer")
    ty = int(ty) % n
    if ty != 0:
        raise NotType0(f"cycle type has type {ty}, not 0")
    trunc = Fraction(trunc_weight) - Fraction(c, 24)
    total = PuiseuxSeries.zero(trunc)
    coset_counts = {}
    weights = {}
    for t in divisors(n):
        m = n // t
        ct = cycle.power(t) if t < n else CycleType({1: c})
        weights[t] = Fraction(c, 24) - sum(Fraction(b, 24 * s)
                                           for s, b in ct.pairs)
        if m == 1:
            inv = eta_expand(ct.inverse(), trunc)
            total = total + (theta_full.truncate(trunc + ct.eta_lead) * inv)
            coset_counts[t] = 1
            continue
        dec = SectorDecomposition(t, m, ct, [(Fraction(totient(m)),
                                              ct.inverse(), 0)])
        for mat in coset_reps_gamma0(m):
            img = dec.image_series(mat, trunc)
            z = zm_character(mat, c)
            if not (z == 1):
                img = img.scale(z.inverse())
            total = total + img
        coset_counts[t] = len(coset_reps_gamma0(m))
    ch = total.scale(Fraction(1, n)).rationalize()
    shifted = ch.rescale(1, Fraction(c, 24)).assert_integral()
    if shifted.coeff(0) != 1:
        raise ArithmeticError(
            f"vacuum coefficient is {shifted.coeff(0)}, expected 1")
    if any(v < 0 for v in shifted.terms.values()):
        raise ArithmeticError("character has negative coefficients")
    dims = extract_dims(ch, c, upto=min(3, trunc_weight - 1))
    return OrbifoldReport(
        character=ch, dims=dims, type=0, hat_order=n, central_charge=c,
        classification="Standard lift without order doubling",
        sector_weights=weights, coset_counts=coset_counts,
        seconds=time.time() - started)
