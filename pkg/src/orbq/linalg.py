"""Exact linear algebra over Z and Q.

Matrices are plain sequences of sequences (rows).  Everything returns
new lists; nothing is done in place on caller data.  The routines here
are the workhorses behind sublattice computations (Hermite forms,
integer kernels), Gram handling (exact LDL decomposition for
enumeration and positive-definiteness checks) and characteristic
polynomials for cycle types.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence]


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> list[list]:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            aik = ai[k]
            if aik:
                bk = b[k]
                for j in range(cols):
                    oi[j] += aik * bk[j]
    return out


def mat_vec(a: Matrix, v: Sequence) -> list:
    return [sum(ai[j] * v[j] for j in range(len(v))) for ai in a]


def transpose(a: Matrix) -> list[list]:
    return [list(col) for col in zip(*a)]


def mat_pow(a: Matrix, k: int) -> list[list]:
    n = len(a)
    result = identity(n)
    base = [list(r) for r in a]
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return all(tuple(ra) == tuple(rb) for ra, rb in zip(a, b))


def det_bareiss(m: Matrix) -> int:
    """Fraction-free determinant of an integer matrix."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def det_fraction(m: Matrix) -> Fraction:
    """Determinant of a rational matrix by exact Gaussian elimination."""
    a = [[Fraction(x) for x in r] for r in m]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = None
        for i in range(k, n):
            if a[i][k]:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] * inv
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


def mat_inverse(m: Matrix) -> list[list[Fraction]]:
    """Exact inverse of a rational matrix."""
    n = len(m)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(m)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [row[n:] for row in a]


def hnf(rows: Matrix) -> list[list[int]]:
    """Row Hermite normal form (positive pivots, reduced above pivots).

    Zero rows are dropped, so the result is a basis of the row space
    over Z.
    """
    work = [list(map(int, r)) for r in rows if any(r)]
    if not work:
        return []
    ncols = len(rows[0])
    basis: list[list[int]] = []
    pivots: list[int] = []
    for vec in work:
        vec = list(vec)
        for b, j in zip(basis, pivots):
            if vec[j]:
                a, bv = b[j], vec[j]
                if bv % a == 0:
                    q = bv // a
                    for t in range(ncols):
                        vec[t] -= q * b[t]
                else:
                    from .nt import xgcd
                    g, x, y = xgcd(a, bv)
                    bg, vg = a // g, bv // g
                    for t in range(ncols):
                        bt, vt = b[t], vec[t]
                        b[t] = x * bt + y * vt
                        vec[t] = -vg * bt + bg * vt
        if any(vec):
            j = next(t for t in range(ncols) if vec[t])
            if vec[j] < 0:
                vec = [-x for x in vec]
            where = 0
            while where < len(pivots) and pivots[where] < j:
                where += 1
            basis.insert(where, vec)
            pivots.insert(where, j)
    # reduce entries above each pivot
    for i in range(len(basis) - 1, -1, -1):
        j = pivots[i]
        p = basis[i][j]
        for k in range(i):
            if basis[k][j]:
                q = basis[k][j] // p
                if q:
                    for t in range(ncols):
                        basis[k][t] -= q * basis[i][t]
    return basis


def integer_kernel(m: Matrix) -> list[list[int]]:
    """Basis (rows) of {x in Z^n : M x = 0} for an integer matrix M.

    The kernel of an integer matrix is automatically saturated, so the
    result is a primitive sublattice basis.
    """
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    # Row-reduce [M^T | I] over Z; rows whose M^T-part vanish give the kernel.
    aug = [[m[i][j] for i in range(nrows)] + [int(i == j) for i in range(ncols)]
           for j in range(ncols)]
    from .nt import xgcd
    basis: list[list[int]] = []
    pivots: list[int] = []
    width = nrows + ncols
    for vec in aug:
        vec = list(vec)
        for b, j in zip(basis, pivots):
            if j < nrows and vec[j]:
                a, bv = b[j], vec[j]
                if bv % a == 0:
                    q = bv // a
                    for t in range(width):
                        vec[t] -= q * b[t]
                else:
                    g, x, y = xgcd(a, bv)
                    bg, vg = a // g, bv // g
                    for t in range(width):
                        bt, vt = b[t], vec[t]
                        b[t] = x * bt + y * vt
                        vec[t] = -vg * bt + bg * vt
        lead = next((t for t in range(nrows) if vec[t]), None)
        if lead is not None:
            where = 0
            while where < len(pivots) and pivots[where] < lead:
                where += 1
            basis.insert(where, vec)
            pivots.insert(where, lead)
        elif any(vec):
            basis.append(vec)
            pivots.append(nrows)  # sentinel: kernel row
    kernel = [row[nrows:] for row, j in zip(basis, pivots) if j == nrows]
    return hnf(kernel) if kernel else []


def charpoly(m: Matrix) -> list[int]:
    """Characteristic polynomial det(qI - M), ascending coefficients.

    Faddeev-LeVerrier over exact rationals; the result of an integer
    matrix is certified integral.
    """
    n = len(m)
    a = [[Fraction(x) for x in r] for r in m]
    coeffs = [Fraction(1)]  # leading coefficient of q^n
    b = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        ak = mat_mul(a, b)
        ck = -sum(ak[i][i] for i in range(n)) / k
        coeffs.append(ck)
        b = [[ak[i][j] + (ck if i == j else 0) for j in range(n)] for i in range(n)]
    out = []
    for c in reversed(coeffs):
        if c.denominator != 1:
            raise ArithmeticError("non-integral characteristic polynomial")
        out.append(int(c))
    return out


def ldl_decomposition(gram: Matrix) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Exact LDL^T of a symmetric positive-definite rational matrix.

    Returns (d, mu) with x^T G x = sum_i d[i] * (x_i + sum_{j>i} mu[i][j] x_j)^2.
    Raises ValueError when G is not positive definite.
    """
    n = len(gram)
    g = [[Fraction(x) for x in r] for r in gram]
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i):
            if g[j][i] != g[i][j]:
                raise ValueError("matrix is not symmetric")
    # Build the decomposition from the last coordinate backwards so that
    # mu[i][j] (j > i) multiplies the coordinates fixed first during
    # enumeration.
    l = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            s = g[i][j] - sum(l[i][k] * l[j][k] * d[k] for k in range(j))
            if i == j:
                if s <= 0:
                    raise ValueError("matrix is not positive definite")
                d[i] = s
                l[i][i] = Fraction(1)
            else:
                l[i][j] = s / d[j]
    for i in range(n):
        for j in range(i + 1, n):
            mu[i][j] = l[j][i]
    return d, mu


def lll_gram(gram: Matrix, delta=Fraction(3, 4)) -> tuple[list[list[int]], list[list[Fraction]]]:
    """Exact LLL reduction of a positive-definite quadratic form.

    Returns (U, G') with G' = U G U^T, U unimodular.  Used purely as an
    enumeration preconditioner: counts are basis-invariant.
    """
    n = len(gram)
    g = [[Fraction(x) for x in row] for row in gram]
    u = identity(n)
    if n <= 1:
        return u, g

    mu = [[Fraction(0)] * n for _ in range(n)]
    bstar = [Fraction(0)] * n

    def gso_upto(m):
        for i in range(m + 1):
            for j in range(i):
                mu[i][j] = (g[i][j] - sum(mu[i][t] * mu[j][t] * bstar[t]
                                          for t in range(j))) / bstar[j]
            bstar[i] = g[i][i] - sum(mu[i][t] ** 2 * bstar[t] for t in range(i))
            if bstar[i] <= 0:
                raise ValueError("form is not positive definite")

    def red(k, l):
        q = mu[k][l]
        if 2 * abs(q) <= 1:
            return
        r = int((q + Fraction(1, 2)).__floor__())
        if r == 0:
            return
        for t in range(n):
            u[k][t] -= r * u[l][t]
        # G <- E G E^T with E = I - r e_k e_l^T
        gkk = g[k][k] - 2 * r * g[k][l] + r * r * g[l][l]
        for t in range(n):
            g[k][t] -= r * g[l][t]
        for t in range(n):
            g[t][k] -= r * g[t][l]
        g[k][k] = gkk
        for j in range(l):
            mu[k][j] -= r * mu[l][j]
        mu[k][l] -= r

    def swap(k):
        g[k], g[k - 1] = g[k - 1], g[k]
        for row in g:
            row[k], row[k - 1] = row[k - 1], row[k]
        u[k], u[k - 1] = u[k - 1], u[k]

    gso_upto(n - 1)
    k = 1
    while k < n:
        gso_upto(k)
        red(k, k - 1)
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
        else:
            swap(k)
            k = max(k - 1, 1)
    gso_upto(n - 1)
    return u, g


def solve_exact(a: Matrix, b: Sequence) -> list[Fraction] | None:
    """Solve A x = b exactly over Q (A may be overdetermined).

    Returns one solution with free variables set to 0, or None when the
    system is inconsistent.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if aug[i][cols]:
            return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = aug[i][cols]
    return x
