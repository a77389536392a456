"""Integral lattices from Gram matrices: duals, sublattices, characters.

Coordinates are always with respect to the basis implicit in the Gram
matrix.  A Sublattice stores integer coordinate rows in its parent's
basis together with the induced Gram; kernels and fixed-point
sublattices are saturated by construction (integer kernels of integer
matrices are primitive).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce

from . import linalg
from .nt import lcm
from .shortvec import norm_histogram


class NotSymmetric(ValueError):
    pass


class NotPositiveDefinite(ValueError):
    pass


class NotAnIsometry(ValueError):
    pass


class NotEven(ValueError):
    pass


def _freeze(mat):
    return tuple(tuple(Fraction(v) if Fraction(v).denominator != 1 else int(Fraction(v))
                       for v in row) for row in mat)


@dataclass(frozen=True)
class GramLattice:
    """A positive-definite lattice given by an exact Gram matrix."""

    gram: tuple

    def __init__(self, gram):
        gram = _freeze(gram)
        n = len(gram)
        for row in gram:
            if len(row) != n:
                raise NotSymmetric("Gram matrix is not square")
        for i in range(n):
            for j in range(i):
                if gram[i][j] != gram[j][i]:
                    raise NotSymmetric(f"entries ({i},{j}) and ({j},{i}) differ")
        if n:
            linalg.ldl_decomposition(gram)  # raises on non-positive-definite
        object.__setattr__(self, "gram", gram)

    @property
    def dim(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> Fraction:
        if self.dim == 0:
            return Fraction(1)
        return linalg.det_fraction(self.gram)

    @cached_property
    def is_integral(self) -> bool:
        return all(Fraction(v).denominator == 1 for row in self.gram for v in row)

    @cached_property
    def is_even(self) -> bool:
        return self.is_integral and all(int(self.gram[i][i]) % 2 == 0
                                        for i in range(self.dim))

    @cached_property
    def is_unimodular(self) -> bool:
        return self.det == 1

    def bilinear(self, x, y) -> Fraction:
        return Fraction(sum(x[i] * self.gram[i][j] * y[j]
                            for i in range(self.dim) for j in range(self.dim)))

    def norm(self, x) -> Fraction:
        return self.bilinear(x, x)

    def dual(self) -> "GramLattice":
        """The dual lattice, in its dual basis (Gram = G^{-1})."""
        if self.dim == 0:
            return self
        return GramLattice(linalg.mat_inverse(self.gram))

    def level(self) -> int:
        """Least N with N * G^{-1} integral and of even diagonal."""
        if not self.is_even:
            raise NotEven("level is defined for even lattices")
        if self.dim == 0:
            return 1
        inv = linalg.mat_inverse(self.gram)
        n = reduce(lcm, (Fraction(v).denominator for row in inv for v in row), 1)
        if any((n * Fraction(inv[i][i])).numerator % 2 for i in range(self.dim)):
            n *= 2
        return n

    def histogram(self, bound, shift=None, cvec=None, m=1, force_exact=False):
        return norm_histogram(self.gram, bound, shift=shift, cvec=cvec, m=m,
                              force_exact=force_exact)


def direct_sum(*lattices: GramLattice) -> GramLattice:
    dims = [l.dim for l in lattices]
    total = sum(dims)
    g = [[0] * total for _ in range(total)]
    off = 0
    for l in lattices:
        for i in range(l.dim):
            for j in range(l.dim):
                g[off + i][off + j] = l.gram[i][j]
        off += l.dim
    return GramLattice(g)


@dataclass(frozen=True)
class Sublattice:
    """Sublattice of `parent` spanned by the integer rows of basis_matrix."""

    parent: GramLattice
    basis_matrix: tuple

    def __init__(self, parent: GramLattice, basis_matrix):
        rows = tuple(tuple(int(v) for v in row) for row in basis_matrix)
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "basis_matrix", rows)
        if rows:
            # full row rank exactly when the induced Gram is nonsingular
            if linalg.det_fraction(self._induced()) == 0:
                raise ValueError("sublattice basis is not of full row rank")

    def _induced(self):
        b = [list(r) for r in self.basis_matrix]
        g = [list(r) for r in self.parent.gram]
        return linalg.mat_mul(linalg.mat_mul(b, g), linalg.transpose(b))

    @property
    def rank(self) -> int:
        return len(self.basis_matrix)

    @cached_property
    def lattice(self) -> GramLattice:
        """The sublattice as an abstract Gram lattice (B G B^T)."""
        if self.rank == 0:
            return GramLattice(())
        return GramLattice(self._induced())

    @cached_property
    def det(self) -> Fraction:
        return self.lattice.det

    def to_ambient(self, coords):
        """Coordinates in the sublattice basis -> parent-basis coordinates."""
        return [sum(coords[i] * self.basis_matrix[i][j] for i in range(self.rank))
                for j in range(self.parent.dim)]

    @staticmethod
    def full(parent: GramLattice) -> "Sublattice":
        return Sublattice(parent, linalg.identity(parent.dim))


@dataclass(frozen=True)
class PhaseCharacter:
    """Homomorphism from a lattice to Q/Z, given by values on basis vectors.

    The value r means the character sends that basis vector to e(r).
    """

    values: tuple

    def __init__(self, values):
        vals = tuple(Fraction(v) % 1 for v in values)
        object.__setattr__(self, "values", vals)

    @property
    def order(self) -> int:
        return reduce(lcm, (v.denominator for v in self.values), 1)

    @property
    def is_trivial(self) -> bool:
        return all(v == 0 for v in self.values)

    def power(self, k: int) -> "PhaseCharacter":
        return PhaseCharacter(tuple((k * v) % 1 for v in self.values))

    def value(self, coords) -> Fraction:
        return sum((Fraction(c) * v for c, v in zip(coords, self.values)),
                   Fraction(0)) % 1

    def class_vector(self) -> tuple[list[int], int]:
        """Integer vector c and order m with value(x) = (sum c_i x_i)/m mod 1."""
        m = self.order
        return [int(v * m) % m for v in self.values], m


def fixed_sublattice(parent: GramLattice, a, power: int = 1) -> Sublattice:
    """Saturated fixed-point sublattice of the isometry matrix a (or a^power)."""
    check_isometry(parent, a)
    m = linalg.mat_pow(a, power) if power != 1 else [list(r) for r in a]
    d = parent.dim
    delta = [[m[i][j] - (1 if i == j else 0) for j in range(d)] for i in range(d)]
    # fixed vectors are ROW vectors x with x (A - I) = 0 when A acts on rows;
    # here we treat A as acting on coordinate columns: A x = x
    kernel = linalg.integer_kernel(delta)
    return Sublattice(parent, kernel)


def check_isometry(parent: GramLattice, a) -> None:
    d = parent.dim
    if len(a) != d or any(len(r) != d for r in a):
        raise NotAnIsometry("matrix dimension mismatch")
    if any(int(v) != v for row in a for v in row):
        raise NotAnIsometry("matrix is not integral")
    det = linalg.det_bareiss([[int(v) for v in row] for row in a])
    if det not in (1, -1):
        raise NotAnIsometry("matrix is not invertible over Z")
    g = [list(r) for r in parent.gram]
    at = linalg.transpose(a)
    if not linalg.mat_eq(linalg.mat_mul(linalg.mat_mul(at, g), a), g):
        raise NotAnIsometry("matrix does not preserve the Gram form")


def kernel_of_character(sub: Sublattice, char: PhaseCharacter) -> Sublattice:
    """The sublattice {x : char(x) = 1}, via an integer congruence kernel.

    Coordinates of char are with respect to sub's basis; the result is
    again a sublattice of sub.parent.
    """
    r = sub.rank
    if len(char.values) != r:
        raise ValueError("character length does not match sublattice rank")
    if char.is_trivial or r == 0:
        return sub
    c, m = char.class_vector()
    # solutions of c . x = 0 mod m: integer kernel of [c | m] projected
    rows = linalg.integer_kernel([c + [m]])
    coords = [row[:r] for row in rows]  # drop the auxiliary coefficient
    basis = linalg.hnf(coords)
    parent_rows = [
        [sum(row[i] * sub.basis_matrix[i][j] for i in range(r))
         for j in range(sub.parent.dim)]
        for row in basis
    ]
    return Sublattice(sub.parent, parent_rows)


@dataclass(frozen=True)
class ShiftedCoset:
    """lattice + shift, with the shift written in the lattice's own basis."""

    lattice: GramLattice
    shift: tuple

    def __init__(self, lattice: GramLattice, shift):
        object.__setattr__(self, "lattice", lattice)
        object.__setattr__(self, "shift", tuple(Fraction(v) for v in shift))
        if len(self.shift) != lattice.dim:
            raise ValueError("shift length does not match lattice dimension")


def min_norm_coset(coset: ShiftedCoset) -> Fraction:
    """Minimum of <v, v> over v in L + shift, by closest-vector enumeration."""
    lat, lam = coset.lattice, list(coset.shift)
    if lat.dim == 0 or all(v == 0 for v in lam):
        return Fraction(0)
    if all(v.denominator == 1 for v in lam):
        return Fraction(0)
    # initial bound: try rounding the shift to the nearest lattice point
    x0 = [-round(v) for v in lam]
    y0 = [x + v for x, v in zip(x0, lam)]
    bound = lat.norm(y0)
    if bound == 0:
        return Fraction(0)
    hist = norm_histogram(lat.gram, bound, shift=lam, force_exact=True)
    return min(n for (n, _), cnt in hist.items() if cnt)
