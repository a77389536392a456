"""Built-in lattices: A1, A2, E8, the Leech lattice, and small test isometries.

Everything here is constructed programmatically and verified by the test
suite (evenness, determinant, minimal norm).  The Leech lattice is built
from the extended binary Golay code in its standard construction: vectors
x in Z^24 (in units of 1/sqrt(8)) with

    x = m (mod 2) componentwise,  (x - m)/2 mod 2 in G24,
    sum(x) = 4m (mod 8),

for m in {0, 1}; the Golay code is the parity extension of the cyclic
quadratic-residue code of length 23.
"""

from __future__ import annotations

from functools import lru_cache

from . import linalg
from .lattice import GramLattice

A1_GRAM = ((2,),)
A2_GRAM = ((2, 1), (1, 2))

# Standard even unimodular E8 Gram (Cartan matrix of the E8 root system).
E8_GRAM = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, 0),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, -1),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, 0, 0, -1, 0, 0, 2),
)


def a1() -> GramLattice:
    return GramLattice(A1_GRAM)


def a2() -> GramLattice:
    return GramLattice(A2_GRAM)


def e8() -> GramLattice:
    return GramLattice(E8_GRAM)


@lru_cache(maxsize=None)
def golay_generator() -> tuple[tuple[int, ...], ...]:
    """Generator rows of the [24,12,8] extended binary Golay code."""
    # quadratic residues mod 23
    residues = {(i * i) % 23 for i in range(1, 23)}
    # generator polynomial of the QR code: g(x) = prod_{r in QR} (x - a^r)
    # has the well-known coefficient list below (degree 11)
    g = [1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1]  # ascending: 1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11
    rows = []
    for i in range(12):
        word = [0] * 23
        for j, c in enumerate(g):
            word[(i + j) % 23] ^= c
        word.append(sum(word) % 2)  # extend by overall parity
        rows.append(tuple(word))
    # sanity: dimension 12 over GF(2)
    assert _gf2_rank([list(r) for r in rows]) == 12
    return tuple(rows)


def _gf2_rank(rows) -> int:
    rank = 0
    ncols = len(rows[0])
    pivot_rows = []
    for row in rows:
        row = list(row)
        for p in pivot_rows:
            j = next(t for t, v in enumerate(p) if v)
            if row[j]:
                row = [(a + b) % 2 for a, b in zip(row, p)]
        if any(row):
            pivot_rows.append(row)
            rank += 1
    return rank


@lru_cache(maxsize=None)
def golay_codewords() -> tuple[tuple[int, ...], ...]:
    gen = golay_generator()
    words = {(0,) * 24}
    for row in gen:
        words |= {tuple((w[i] + row[i]) % 2 for i in range(24)) for w in words}
    return tuple(sorted(words))


@lru_cache(maxsize=None)
def leech_basis() -> tuple[tuple[int, ...], ...]:
    """Basis rows of the Leech lattice in 1/sqrt(8) coordinates."""
    gens = []
    for row in golay_generator():
        gens.append([2 * v for v in row])
    for i in range(1, 24):
        gens.append([4 if j in (0, i) else 0 for j in range(24)])
    gens.append([8] + [0] * 23)
    gens.append([-3] + [1] * 23)
    basis = linalg.hnf(gens)
    assert len(basis) == 24
    return tuple(tuple(r) for r in basis)


@lru_cache(maxsize=None)
def leech() -> GramLattice:
    """Even unimodular Gram matrix of the Leech lattice."""
    b = [list(r) for r in leech_basis()]
    gram = linalg.mat_mul(b, linalg.transpose(b))
    scaled = [[v // 8 for v in row] for row in gram]
    for row, orig in zip(scaled, gram):
        assert all(8 * s == o for s, o in zip(row, orig)), "Leech Gram not divisible by 8"
    lat = GramLattice(scaled)
    assert lat.is_even and lat.det == 1
    return lat


def minus_identity(dim: int):
    return [[-1 if i == j else 0 for j in range(dim)] for i in range(dim)]


def swap_pair_automorphism(dim_half: int):
    """The isometry of L (+) L exchanging the two summands."""
    d = 2 * dim_half
    return [[1 if (j == i + dim_half or j == i - dim_half) else 0
             for j in range(d)] for i in range(d)]


def permutation_isometry(perm, signs=None):
    """Signed permutation matrix (an isometry of any rescaled Z^n form)."""
    n = len(perm)
    signs = signs or [1] * n
    m = [[0] * n for _ in range(n)]
    for i, p in enumerate(perm):
        m[p][i] = signs[i]
    return m
