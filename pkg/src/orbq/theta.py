"""Theta series: plain, shifted, phase-twisted; extremal fits; numerics.

theta_histogram is the single enumeration entry point.  Its results are
cached in memory and optionally on disk (ORBQ_CACHE_DIR), keyed by the
full problem data (Gram, shift, character, bound); repeated D_t
assemblies hit the cache instead of re-enumerating, which is the
dominant cost of the whole pipeline.
"""

from __future__ import annotations

import hashlib
import os
from fractions import Fraction
from functools import lru_cache

from .cyclo import Cyclo
from .lattice import GramLattice, PhaseCharacter, ShiftedCoset, Sublattice
from .modular import eta_power_series
from .qseries import PuiseuxSeries
from .shortvec import norm_histogram


class NeedsCache(RuntimeError):
    """Enumeration judged infeasible at desk scale and no cache entry exists."""


_ENUM_DIM_GUARD = 26

_memory_cache: dict[str, dict] = {}


def cache_dir() -> str | None:
    return os.environ.get("ORBQ_CACHE_DIR") or None


def _cache_key_text(gram, bound, shift, cvec, m) -> str:
    rows = ";".join(",".join(str(Fraction(v)) for v in row) for row in gram)
    sh = ",".join(str(Fraction(v)) for v in shift) if shift else "-"
    cv = ",".join(str(int(v)) for v in cvec) if cvec else "-"
    return f"gram=[{rows}] shift=[{sh}] char=[{cv}] order={m} bound={Fraction(bound)}"


def _cache_path(key_text: str) -> str | None:
    d = cache_dir()
    if not d:
        return None
    h = hashlib.sha256(key_text.encode()).hexdigest()[:32]
    return os.path.join(d, f"{h}.theta")


def _write_cache_file(path: str, key_text: str, hist: dict) -> None:
    os.makedirs(os.path.dirname(path), exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(f"# {key_text}\n")
        for (norm, j), cnt in sorted(hist.items()):
            fh.write(f"{norm.numerator}/{norm.denominator} {j} {cnt}\n")
    os.replace(tmp, path)


def _read_cache_file(path: str) -> dict | None:
    if not os.path.exists(path):
        return None
    hist = {}
    with open(path) as fh:
        for line in fh:
            if line.startswith("#") or not line.strip():
                continue
            norm_s, j_s, cnt_s = line.split()
            num, den = norm_s.split("/")
            hist[(Fraction(int(num), int(den)), int(j_s))] = int(cnt_s)
    return hist


def theta_histogram(gram, bound, shift=None, cvec=None, m: int = 1,
                    force_exact: bool = False, allow_large: bool = False) -> dict:
    """Cached (norm, class) histogram for the given enumeration problem."""
    key = _cache_key_text(gram, bound, shift, cvec, m)
    if key in _memory_cache:
        return _memory_cache[key]
    path = _cache_path(key)
    if path:
        hist = _read_cache_file(path)
        if hist is not None:
            _memory_cache[key] = hist
            return hist
    if len(gram) > _ENUM_DIM_GUARD and not allow_large:
        raise NeedsCache(
            f"enumeration in dimension {len(gram)} exceeds the desk-scale guard; "
            f"provide a cache entry or pass allow_large")
    hist = norm_histogram(gram, bound, shift=shift, cvec=cvec, m=m,
                          force_exact=force_exact)
    _memory_cache[key] = hist
    if path:
        _write_cache_file(path, key, hist)
    return hist


def norm_bound_below(gram, x) -> Fraction:
    """Largest value on the norm grid of `gram` strictly below x.

    Norms of an exact Gram matrix lie in (1/den)Z for den the lcm of the
    entry denominators; enumerating past the bound would visit a whole
    extra shell for nothing.
    """
    from math import gcd
    den = 1
    for row in gram:
        for v in row:
            dv = Fraction(v).denominator
            den = den * dv // gcd(den, dv)
    scaled = Fraction(x) * den
    if scaled.denominator == 1:
        out = Fraction(scaled.numerator - 1, den)
    else:
        out = Fraction(scaled.numerator // scaled.denominator, den)
    if den == 1 and out.numerator % 2:
        # even lattices have no odd shells; check cheaply and shrink
        if all(Fraction(v).denominator == 1 for row in gram for v in row) and \
           all(int(gram[i][i]) % 2 == 0 for i in range(len(gram))):
            out -= 1
    return out


def _gram_of(lattice) -> tuple:
    if isinstance(lattice, Sublattice):
        return lattice.lattice.gram
    if isinstance(lattice, GramLattice):
        return lattice.gram
    return tuple(tuple(v for v in row) for row in lattice)


def enumerate_by_norm(lattice, bound, **kw) -> dict[Fraction, int]:
    """Exact counts {<x,x>: #} over vectors with <x,x> <= bound.

    Counts are keyed by the squared norm; the zero vector appears at
    norm 0.
    """
    hist = theta_histogram(_gram_of(lattice), Fraction(bound), **kw)
    out: dict[Fraction, int] = {}
    for (norm, _), cnt in hist.items():
        out[norm] = out.get(norm, 0) + cnt
    return dict(sorted(out.items()))


def theta(lattice, trunc, shift=None, phase: PhaseCharacter | None = None,
          phase_power: int = 1, force_exact: bool = False,
          allow_large: bool = False) -> PuiseuxSeries:
    """Theta series sum u(x)^k q^{<x+s, x+s>/2}, valid below trunc.

    `lattice` may be a GramLattice, a Sublattice (its induced Gram is
    used; coordinates of shift/phase refer to the sublattice basis), or a
    raw Gram matrix.  Supplying both a shift and a phase is not supported.
    """
    trunc = Fraction(trunc)
    gram = _gram_of(lattice)
    if len(gram) == 0:
        return PuiseuxSeries({Fraction(0): 1}, None)
    if phase is not None and shift is not None:
        raise ValueError("shifted phase-twisted theta is not supported")
    cvec, m = (None, 1)
    if phase is not None and not phase.is_trivial:
        cvec, m = phase.class_vector()
    bound = norm_bound_below(gram, 2 * trunc)
    if shift is not None:
        bound = 2 * trunc  # shifted norms live off the lattice grid
    hist = theta_histogram(gram, bound, shift=shift, cvec=cvec, m=m,
                           force_exact=force_exact, allow_large=allow_large)
    terms: dict = {}
    for (norm, j), cnt in hist.items():
        ex = norm / 2
        if ex >= trunc:
            continue
        if m == 1:
            coeff = cnt
        else:
            coeff = Cyclo.e(Fraction(j * phase_power, m)) * cnt
        terms[ex] = terms.get(ex, 0) + coeff
    return PuiseuxSeries(terms, trunc)


def theta_of_coset(coset: ShiftedCoset, trunc, **kw) -> PuiseuxSeries:
    return theta(coset.lattice, trunc, shift=list(coset.shift), **kw)


# ---------------------------------------------------------------------------
# Extremal theta series (analytic fit, no enumeration)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _sigma3_series(n: int) -> tuple:
    out = [0] * n
    for d in range(1, n):
        for k in range(d, n, d):
            out[k] += d**3
    return tuple(out)


def eisenstein_e4(trunc) -> PuiseuxSeries:
    """E4 = 1 + 240 sum sigma_3(n) q^n."""
    trunc = Fraction(trunc)
    n = max(1, int(trunc.__ceil__()))
    sig = _sigma3_series(n)
    terms = {Fraction(0): 1}
    for k in range(1, n):
        terms[Fraction(k)] = 240 * sig[k]
    return PuiseuxSeries(terms, trunc)


def delta_series(trunc) -> PuiseuxSeries:
    """The discriminant form Delta = eta^24 = q prod (1-q^n)^24."""
    return eta_power_series(24, trunc)


def extremal_theta(d: int, trunc=None) -> PuiseuxSeries:
    """Theta series of an extremal even unimodular lattice of dimension d.

    The unique weight-d/2 level-1 form 1 + O(q^{d/24 + 1}), solved exactly
    in the monomial basis {E4^a Delta^b : 4a + 12b = d/2}.
    """
    if d % 24 or d <= 0:
        raise ValueError("extremal_theta needs d divisible by 24")
    k = d // 2
    width = d // 24 + 1  # number of monomials and of pinned coefficients
    if trunc is None:
        trunc = Fraction(width + 1)
    trunc = Fraction(trunc)
    work = max(trunc, Fraction(width + 1))
    e4 = eisenstein_e4(work)
    delta = delta_series(work)
    monomials = []
    for b in range(width):
        a = (k - 12 * b) // 4
        if 4 * a + 12 * b != k or a < 0:
            raise ArithmeticError("no E4^a Delta^b basis for this weight")
        monomials.append(e4**a * delta**b)
    from .linalg import solve_exact
    rows = [[mon.coeff(Fraction(i)) for mon in monomials] for i in range(width)]
    rhs = [1] + [0] * (width - 1)
    x = solve_exact(rows, rhs)
    if x is None:
        raise ArithmeticError("extremal theta system is inconsistent")
    out = PuiseuxSeries.zero(work)
    for xi, mon in zip(x, monomials):
        out = out + mon.scale(xi)
    return out.assert_integral().truncate(trunc)


# ---------------------------------------------------------------------------
# Certified numeric evaluation (for the inversion-formula check)
# ---------------------------------------------------------------------------

class DivergentTail(ArithmeticError):
    pass


def theta_growth(lattice) -> tuple[float, float]:
    """Certified coefficient bound: #\\{x : <x,x> = n\\} <= C (1+n)^{d/2}.

    Via the box bound prod_i (2 sqrt(n / q_i) + 1) from the exact LDL
    pivots q_i, rounded up.
    """
    from .linalg import ldl_decomposition
    gram = _gram_of(lattice)
    d = len(gram)
    if d == 0:
        return 1.0, 0.0
    q, _ = ldl_decomposition([[Fraction(v) for v in row] for row in gram])
    c = 1.0
    for qi in q:
        c *= 2.0 / float(qi) ** 0.5 + 1.0
    return c * 1.0000001, d / 2.0


def eval_numeric(series: PuiseuxSeries, tau: complex,
                 growth: tuple[float, float] = (1.0, 0.0)) -> tuple[complex, float]:
    """(partial sum at q = e(tau), rigorous tail bound).

    growth = (C, r) certifies |coefficient of q^e| <= C (1 + 2e)^r for all
    exponents e >= trunc (theta-type growth).  Exponents must be bounded
    below and the series must have a finite truncation to have a tail.
    """
    import cmath
    import math
    y = tau.imag
    if y <= 0:
        raise ValueError("tau must lie in the upper half plane")
    val = 0j
    for e, c in series.terms.items():
        cval = c.numeric() if isinstance(c, Cyclo) else complex(Fraction(c))
        val += cval * cmath.exp(2j * cmath.pi * float(e) * tau)
    if series.trunc is None:
        return val, 0.0
    C, r = growth
    t0 = float(series.trunc)
    if t0 < 0:
        raise ValueError("tail bound requires a nonnegative truncation exponent")
    x = math.exp(-2 * math.pi * y)
    # grid step: exponents lie in (1/N) Z
    step = 1.0 / series.exponent_denominator()
    # sum_{k>=0} C (1 + 2(t0 + k step))^r x^(t0+k step), ratio-bounded
    term = C * (1 + 2 * t0) ** r * x ** t0
    ratio = x ** step * ((1 + 2 * (t0 + step)) / (1 + 2 * t0)) ** r
    if ratio >= 0.999:
        raise DivergentTail("tail ratio too close to 1; increase Im(tau) or trunc")
    bound = term / (1 - ratio) * 1.0000001
    return val, bound
