"""Short-vector enumeration (Fincke-Pohst) for positive-definite forms.

Two backends produce identical exact histograms {(norm, class) -> count}:

* an exact backend working entirely in rational arithmetic (the
  reference; used for small dimensions and whenever a coset shift is
  present), and
* a fast backend for integral Grams that prunes the search tree in
  float64 with a certified safety margin and verifies every candidate
  leaf with exact integer arithmetic.

The fast backend can only *over*-enumerate: pruning bounds are inflated
by `margin`, and a rigorous bound on the accumulated float error is
computed from the exact data at setup; if that bound does not stay well
below the margin the code falls back to the exact backend.  Every
reported vector passes an exact integer norm check, so the histogram is
exact either way.  The top-level sign symmetry x -> -x is exploited
(class j maps to -j).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from .linalg import ldl_decomposition

_EXACT_DIM_LIMIT = 13
_MARGIN = 1e-4


def _floor_add_sqrt(a: Fraction, r: Fraction) -> int:
    """floor(a + sqrt(r)) computed exactly (r >= 0)."""
    if r < 0:
        raise ValueError("negative radicand")
    # initial guess from integer sqrt, then exact adjustment
    guess = (a.numerator // a.denominator) + isqrt(int(r)) if r >= 1 else (a.numerator // a.denominator)
    n = guess - 2
    def le(k):  # k - a <= sqrt(r)?
        diff = k - a
        return diff <= 0 or diff * diff <= r
    while le(n + 1):
        n += 1
    return n


def _ceil_sub_sqrt(a: Fraction, r: Fraction) -> int:
    """ceil(a - sqrt(r)) computed exactly (r >= 0)."""
    return -_floor_add_sqrt(-a, r)


def _enumerate_exact(gram, bound: Fraction, shift=None, cvec=None, m: int = 1) -> dict:
    """Reference enumeration; returns {(norm, class): count} including 0."""
    d = len(gram)
    bound = Fraction(bound)
    if d == 0:
        return {(Fraction(0), 0): 1} if bound >= 0 else {}
    q, mu = ldl_decomposition(gram)
    lam = [Fraction(x) for x in (shift or [0] * d)]
    c = [int(x) for x in (cvec or [0] * d)]
    counts: dict = {}
    use_sign = shift is None or all(x == 0 for x in lam)

    def record(norm, j, weight):
        key = (norm, j % m)
        counts[key] = counts.get(key, 0) + weight

    x = [0] * d

    def rec(i: int, remaining: Fraction, all_zero_above: bool):
        center = lam[i] + sum(mu[i][j] * (x[j] + lam[j]) for j in range(i + 1, d))
        r = remaining / q[i]
        lo = _ceil_sub_sqrt(-center, r)
        hi = _floor_add_sqrt(-center, r)
        if use_sign and all_zero_above:
            lo = max(lo, 0)
        for xi in range(lo, hi + 1):
            x[i] = xi
            y = xi + center
            rem2 = remaining - q[i] * y * y
            if rem2 < 0:
                continue
            if i == 0:
                norm = bound - rem2
                j = sum(ci * xj for ci, xj in zip(c, x)) % m
                if use_sign:
                    if all(v == 0 for v in x):
                        record(norm, 0, 1)
                    else:
                        record(norm, j, 1)
                        record(norm, -j, 1)
                else:
                    record(norm, j, 1)
            else:
                rec(i - 1, rem2, all_zero_above and xi == 0)
        x[i] = 0

    rec(d - 1, bound, True)
    return counts


# ---------------------------------------------------------------------------
# fast integral backend
# ---------------------------------------------------------------------------

def _float_error_bound(gram, q, mu, bound) -> float:
    """Rigorous (crude) bound on float64 evaluation error in the pruning tree.

    Every partial assignment (x_i, ..., x_{d-1}) visited by the tree is the
    coordinate vector of a projected-lattice vector of norm <= bound, so
    |x_j| <= sqrt(bound * (G^{-1})_{jj}) (block-inverse identity for Schur
    complements).  No compounding across levels.
    """
    from .linalg import mat_inverse
    d = len(q)
    inv = mat_inverse(gram)
    xabs = [Fraction(isqrt(int(Fraction(bound) * inv[j][j])) + 2) for j in range(d)]
    mmax = Fraction(bound)
    for i in range(d):
        center = sum(abs(mu[i][j]) * xabs[j] for j in range(i + 1, d))
        mmax = max(mmax, q[i] * (xabs[i] + center) ** 2, center)
    ops = d * d + 16 * d + 64
    return ops * 2.3e-16 * max(float(mmax), 1.0) * 8


def _python_fast(qf, muf, bound_f, margin, gram, cvec, m, bound_int):
    """Float-pruned tree walk with exact integer leaf data (no numba)."""
    import math
    d = len(qf)
    counts: dict = {}
    x = [0] * d
    s = [0] * d        # exact: s[i] = sum_{j>i} G[i][j] x[j]
    nsuf = [0] * (d + 1)  # exact suffix norm of (x_i..x_{d-1})
    jsuf = [0] * (d + 1)

    def rec(i, rem, all_zero):
        center = 0.0
        for j in range(i + 1, d):
            center += muf[i][j] * x[j]
        si = 0
        for j in range(i + 1, d):
            si += gram[i][j] * x[j]
        r = rem / qf[i]
        if r < 0:
            r = 0.0
        w = math.sqrt(r) + margin
        lo = math.ceil(-center - w)
        hi = math.floor(-center + w)
        if all_zero:
            lo = max(lo, 0)
        gii = gram[i][i]
        for xi in range(lo, hi + 1):
            y = xi + center
            rem2 = rem - qf[i] * y * y
            if rem2 < -margin:
                continue
            x[i] = xi
            nsuf[i] = nsuf[i + 1] + 2 * xi * si + gii * xi * xi
            jsuf[i] = jsuf[i + 1] + cvec[i] * xi
            if i == 0:
                if nsuf[0] > bound_int:  # exact full norm check at the leaf
                    continue
                nz = any(x)
                j = jsuf[0] % m
                key = (nsuf[0], j)
                if nz:
                    counts[key] = counts.get(key, 0) + 1
                    key2 = (nsuf[0], (-j) % m)
                    counts[key2] = counts.get(key2, 0) + 1
                else:
                    counts[key] = counts.get(key, 0) + 1
            else:
                rec(i - 1, rem2, all_zero and xi == 0)
        x[i] = 0

    rec(d - 1, bound_f + margin, True)
    return counts


_NUMBA_KERNEL = None


def _get_numba_kernel():
    global _NUMBA_KERNEL
    if _NUMBA_KERNEL is not None:
        return _NUMBA_KERNEL
    try:
        import numba
        import numpy as np
    except ImportError:
        _NUMBA_KERNEL = False
        return False

    @numba.njit(cache=False)
    def kernel(qf, muf, bound_f, margin, gram, cvec, m, bound_int):
        d = qf.shape[0]
        counts = np.zeros((bound_int + 1, m), dtype=np.int64)
        x = np.zeros(d, dtype=np.int64)
        svals = np.zeros(d, dtype=np.int64)
        centers = np.zeros(d, dtype=np.float64)
        rems = np.zeros(d + 1, dtype=np.float64)
        nsuf = np.zeros(d + 1, dtype=np.int64)
        jsuf = np.zeros(d + 1, dtype=np.int64)
        lo = np.zeros(d, dtype=np.int64)
        hi = np.zeros(d, dtype=np.int64)
        azero = np.zeros(d + 1, dtype=np.bool_)

        def setup(i):
            c = 0.0
            s = 0
            for j in range(i + 1, d):
                c += muf[i, j] * x[j]
                s += gram[i, j] * x[j]
            centers[i] = c
            svals[i] = s
            r = rems[i + 1] / qf[i]
            if r < 0.0:
                r = 0.0
            w = np.sqrt(r) + margin
            l = int(np.ceil(-c - w))
            h = int(np.floor(-c + w))
            if azero[i + 1] and l < 0:
                l = 0
            lo[i] = l
            hi[i] = h
            x[i] = l - 1

        i = d - 1
        rems[d] = bound_f + margin
        azero[d] = True
        setup(i)
        while True:
            x[i] += 1
            if x[i] > hi[i]:
                i += 1
                if i >= d:
                    break
                continue
            xi = x[i]
            y = xi + centers[i]
            rem2 = rems[i + 1] - qf[i] * y * y
            if rem2 < -margin:
                continue
            n2 = nsuf[i + 1] + 2 * xi * svals[i] + gram[i, i] * xi * xi
            j2 = jsuf[i + 1] + cvec[i] * xi
            if i == 0:
                if n2 > bound_int:  # exact full norm check at the leaf
                    continue
                jj = j2 % m
                nz = False
                for t in range(d):
                    if x[t] != 0:
                        nz = True
                        break
                if nz:
                    counts[n2, jj] += 1
                    counts[n2, (m - jj) % m] += 1
                else:
                    counts[n2, 0] += 1
            else:
                rems[i] = rem2
                nsuf[i] = n2
                jsuf[i] = j2
                azero[i] = azero[i + 1] and xi == 0
                i -= 1
                setup(i)
        return counts

    _NUMBA_KERNEL = kernel
    return kernel


def _enumerate_fast(gram_int, bound_int: int, cvec, m: int) -> dict:
    import numpy as np
    d = len(gram_int)
    gram_frac = [[Fraction(v) for v in row] for row in gram_int]
    q, mu = ldl_decomposition(gram_frac)
    err = _float_error_bound(gram_frac, q, mu, bound_int)
    if err >= _MARGIN / 10:
        return _enumerate_exact(gram_frac, Fraction(bound_int), None, cvec, m)
    # int64 overflow guard on exact leaf bookkeeping
    gmax = max(abs(v) for row in gram_int for v in row)
    xmax = 2 + max(isqrt(int(Fraction(bound_int) / qi)) + 1 for qi in q)
    if gmax * xmax * xmax * d * 4 > 2**60:
        return _enumerate_exact(gram_frac, Fraction(bound_int), None, cvec, m)

    qf = np.array([float(v) for v in q])
    muf = np.array([[float(v) for v in row] for row in mu])
    garr = np.array(gram_int, dtype=np.int64)
    carr = np.array([int(v) % m for v in (cvec or [0] * d)], dtype=np.int64)

    kernel = _get_numba_kernel()
    if kernel:
        table = kernel(qf, muf, float(bound_int), _MARGIN, garr, carr, m, bound_int)
        out = {}
        nz = table.nonzero()
        for n, j in zip(*nz):
            out[(Fraction(int(n)), int(j))] = int(table[n, j])
        return out
    return {
        (Fraction(n), j): c
        for (n, j), c in _python_fast(
            [float(v) for v in q], [[float(v) for v in row] for row in mu],
            float(bound_int), _MARGIN, [list(map(int, r)) for r in gram_int],
            [int(v) % m for v in (cvec or [0] * d)], m, bound_int).items()
    }


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------

def norm_histogram(gram, bound, shift=None, cvec=None, m: int = 1,
                   force_exact: bool = False) -> dict:
    """Counts of lattice vectors by (squared norm, character class).

    gram: symmetric positive-definite rational matrix; bound: include all
    x (plus the optional rational shift) with norm <= bound; cvec/m: an
    integral character x -> sum(c_i x_i) mod m classifying each vector.
    Returns {(Fraction norm, int class): count}; the zero vector is
    included at norm 0.
    """
    d = len(gram)
    bound = Fraction(bound)
    if bound < 0:
        return {}
    if d == 0:
        return {(Fraction(0), 0): 1}
    if m < 1:
        raise ValueError("character order must be >= 1")
    if shift is not None and all(Fraction(v) == 0 for v in shift):
        shift = None
    if force_exact or shift is not None or d <= _EXACT_DIM_LIMIT:
        gram_frac = [[Fraction(v) for v in row] for row in gram]
        if d > 6 and shift is None:
            u, reduced, _ = _reduced_form(_gram_key(gram))
            cvec = _transform_cvec(u, cvec, m, d)
            return _enumerate_exact(reduced, bound, None, cvec, m)
        return _enumerate_exact(gram_frac, bound, shift, cvec, m)
    u, reduced, den = _reduced_form(_gram_key(gram))
    cvec = _transform_cvec(u, cvec, m, d)
    gram_int = [[int(v * den) for v in row] for row in reduced]
    bscaled = bound * den
    bound_int = bscaled.numerator // bscaled.denominator
    raw = _enumerate_fast(gram_int, bound_int, cvec, m)
    out = {}
    for (n, j), c in raw.items():
        norm = Fraction(n, den)
        if norm <= bound:
            out[(norm, j)] = out.get((norm, j), 0) + c
    return out


def _gram_key(gram):
    return tuple(tuple(Fraction(v) for v in row) for row in gram)


def _transform_cvec(u, cvec, m, d):
    if cvec is None or all(int(v) % m == 0 for v in cvec):
        return cvec
    from .linalg import mat_vec
    return [v % m for v in mat_vec(u, [int(x) for x in cvec])]


from functools import lru_cache  # noqa: E402


@lru_cache(maxsize=64)
def _reduced_form(gram_key):
    """LLL-reduced form of a Gram matrix: (U, G' = U G U^T, denominator)."""
    from .linalg import lll_gram
    u, reduced = lll_gram([list(r) for r in gram_key])
    den = 1
    for row in reduced:
        for v in row:
            dv = Fraction(v).denominator
            den = den * dv // gcd(den, dv)
    return u, reduced, den
