#!/usr/bin/env python3
"""Regenerate the shipped lattice data files from the programmatic fixtures."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from orbq import fixtures  # noqa: E402
from orbq.gramio import write_matrix_file  # noqa: E402

OUT = Path(__file__).resolve().parents[1] / "src" / "orbq" / "data" / "lattices"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    write_matrix_file(OUT / "a1.gram", fixtures.a1().gram)
    write_matrix_file(OUT / "a2.gram", fixtures.a2().gram)
    write_matrix_file(OUT / "e8.gram", fixtures.e8().gram)
    write_matrix_file(OUT / "leech.gram", fixtures.leech().gram)
    write_matrix_file(OUT / "leech_minus.aut", fixtures.minus_identity(24))
    write_matrix_file(OUT / "a2_swap.aut", [[0, 1], [1, 0]])
    for p in sorted(OUT.iterdir()):
        print(p)


if __name__ == "__main__":
    main()
