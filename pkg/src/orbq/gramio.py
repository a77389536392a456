"""File formats: Gram/automorphism matrices, job specs, reports.

Matrix files are plain text: first line the dimension d, then d lines of
d whitespace-separated integers (or rationals p/q, e.g. for dual
lattices).  Automorphism files use the same layout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .lattice import GramLattice, NotPositiveDefinite, NotSymmetric


class ParseError(ValueError):
    def __init__(self, path, line, message):
        self.path, self.line = path, line
        super().__init__(f"{path}:{line}: {message}")


def parse_matrix_file(path) -> list[list[Fraction]]:
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise ParseError(path, 0, f"cannot read file: {exc}") from exc
    rows_text = [(i + 1, ln.strip()) for i, ln in enumerate(lines)
                 if ln.strip() and not ln.strip().startswith("#")]
    if not rows_text:
        raise ParseError(path, 1, "empty matrix file")
    lineno, head = rows_text[0]
    try:
        d = int(head)
    except ValueError:
        raise ParseError(path, lineno, f"expected the dimension, got {head!r}")
    if d < 0:
        raise ParseError(path, lineno, "dimension must be nonnegative")
    if len(rows_text) - 1 != d:
        raise ParseError(path, lineno,
                         f"expected {d} matrix rows, found {len(rows_text) - 1}")
    out = []
    for lineno, text in rows_text[1:]:
        entries = text.split()
        if len(entries) != d:
            raise ParseError(path, lineno,
                             f"expected {d} entries, found {len(entries)}")
        row = []
        for col, tok in enumerate(entries, start=1):
            try:
                row.append(Fraction(tok))
            except ValueError:
                raise ParseError(path, lineno,
                                 f"column {col}: bad entry {tok!r}")
        out.append(row)
    return out


def parse_gram_file(path) -> GramLattice:
    """Parse and validate a Gram-matrix file (symmetric positive definite)."""
    mat = parse_matrix_file(path)
    try:
        return GramLattice(mat)
    except NotSymmetric as exc:
        raise NotSymmetric(f"{path}: {exc}") from exc
    except ValueError as exc:
        raise NotPositiveDefinite(f"{path}: {exc}") from exc


def parse_automorphism_file(path) -> list[list[int]]:
    mat = parse_matrix_file(path)
    for i, row in enumerate(mat):
        for j, v in enumerate(row):
            if v.denominator != 1:
                raise ParseError(path, i + 2,
                                 f"column {j + 1}: automorphism entries must "
                                 f"be integers, got {v}")
    return [[int(v) for v in row] for row in mat]


def format_matrix(mat) -> str:
    def fmt(v):
        v = Fraction(v)
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    lines = [str(len(mat))]
    for row in mat:
        lines.append(" ".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_matrix_file(path, mat) -> None:
    Path(path).write_text(format_matrix(mat))


@dataclass
class JobSpec:
    """A single orbifold computation, as read from a JSON job file.

    Either (lattice, automorphism) paths or the abstract form
    (cycle_type, central_charge) with theta = "extremal" must be given.
    """
    lattice: str | None = None
    automorphism: str | None = None
    beta: list | None = None
    cycle_type: str | None = None
    central_charge: int | None = None
    theta: str = "auto"          # "auto" | "extremal" | "enumerate"
    trunc_weight: int = 4
    report: str | None = None
    allow_large: bool = False

    def __post_init__(self):
        if self.trunc_weight < 1:
            raise ValueError("trunc_weight must be >= 1")
        concrete = self.lattice is not None and self.automorphism is not None
        abstract = self.cycle_type is not None and self.central_charge is not None
        if not (concrete or abstract):
            raise ValueError("job needs lattice+automorphism paths or "
                             "cycle_type+central_charge")

    @staticmethod
    def load(path) -> "JobSpec":
        data = json.loads(Path(path).read_text())
        allowed = {f for f in JobSpec.__dataclass_fields__}
        unknown = set(data) - allowed
        if unknown:
            raise ValueError(f"unknown job fields: {sorted(unknown)}")
        return JobSpec(**data)


def report_text(report) -> str:
    """Human-readable report in the table style of the writeup."""
    lines = [
        f"central charge    : {report.central_charge}",
        f"lift order        : {report.hat_order}",
        f"classification    : {report.classification}",
        f"type              : {report.type}",
        "conformal weights : " + ", ".join(
            f"rho({i}) = {w}" for i, w in sorted(report.sector_weights.items())),
        f"character         : {report.format_character()}",
        "graded dimensions : " + ", ".join(
            f"dim V_({k}) = {v}" for k, v in sorted(report.dims.items())),
    ]
    return "\n".join(lines) + "\n"


def report_json(report) -> dict:
    coeffs = [[e.numerator, e.denominator, int(c)]
              for e, c in report.character.items()]
    return {
        "central_charge": report.central_charge,
        "hat_order": report.hat_order,
        "classification": report.classification,
        "type": report.type,
        "conformal_weights": {str(i): str(w)
                              for i, w in sorted(report.sector_weights.items())},
        "character_coefficients": coeffs,
        "dims": {str(k): v for k, v in sorted(report.dims.items())},
        "seconds": round(report.seconds, 3),
    }


def write_report(report, path) -> None:
    path = Path(path)
    path.write_text(report_text(report))
    path.with_suffix(path.suffix + ".json").write_text(
        json.dumps(report_json(report), indent=1) + "\n")
