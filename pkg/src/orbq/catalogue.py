"""Fetching Gram matrices of the known extremal lattices.

The catalogue entries name the extremal even unimodular lattices in
dimensions 48 and 72.  Download format varies, so the adapter simply
extracts all integers from the payload and validates the result hard:
symmetry, evenness, determinant 1, advertised dimension, and (when
feasible) the extremal minimal norm by bounded enumeration.  Validation
is the contract; a fetched file that fails any check is rejected.
"""

from __future__ import annotations

import re
import urllib.error
import urllib.request
from dataclasses import dataclass
from pathlib import Path

from .gramio import write_matrix_file
from .lattice import GramLattice
from .theta import enumerate_by_norm


class NetworkError(RuntimeError):
    pass


class ValidationFailed(ValueError):
    pass


_BASE = "https://www.math.rwth-aachen.de/~Gabriele.Nebe/LATTICES/"

KNOWN_LATTICES = {
    "P48m": {"dim": 48, "url": _BASE + "P48m.html"},
    "P48n": {"dim": 48, "url": _BASE + "P48n.html"},
    "P48p": {"dim": 48, "url": _BASE + "P48p.html"},
    "P48q": {"dim": 48, "url": _BASE + "P48q.html"},
    "Gamma72": {"dim": 72, "url": _BASE + "Gamma72.html"},
}


@dataclass(frozen=True)
class CatalogueRef:
    name: str
    dim: int
    url: str
    cache_path: str

    @staticmethod
    def known(name: str, cache_dir) -> "CatalogueRef":
        if name not in KNOWN_LATTICES:
            raise KeyError(f"unknown catalogue lattice {name!r}; "
                           f"known: {sorted(KNOWN_LATTICES)}")
        info = KNOWN_LATTICES[name]
        return CatalogueRef(name, info["dim"], info["url"],
                            str(Path(cache_dir) / f"{name}.gram"))


def _extract_matrix(text: str, dim: int) -> list[list[int]]:
    """Pull the first dim*dim integers out of a loosely formatted payload."""
    numbers = re.findall(r"-?\d+", text)
    # tolerate a leading dimension marker
    if numbers and numbers[0] == str(dim) and len(numbers) >= dim * dim + 1:
        numbers = numbers[1:]
    if len(numbers) < dim * dim:
        raise ValidationFailed(
            f"payload holds {len(numbers)} integers, need {dim * dim}")
    vals = [int(x) for x in numbers[:dim * dim]]
    return [vals[i * dim:(i + 1) * dim] for i in range(dim)]


def validate_gram(gram, dim: int, min_norm: int | None = None) -> GramLattice:
    lat = GramLattice(gram)
    if lat.dim != dim:
        raise ValidationFailed(f"dimension {lat.dim} != {dim}")
    if not lat.is_even:
        raise ValidationFailed("lattice is not even")
    if lat.det != 1:
        raise ValidationFailed(f"det = {lat.det} != 1")
    if min_norm is not None and dim <= 26:
        hist = enumerate_by_norm(lat, min_norm - 2)
        nontrivial = {n: c for n, c in hist.items() if n > 0 and c}
        if nontrivial:
            raise ValidationFailed(
                f"vectors below the extremal bound: {nontrivial}")
    return lat


def fetch_lattice(ref: CatalogueRef, timeout: float = 30.0,
                  offline: bool = False) -> GramLattice:
    """Fetch (or reuse from cache) and validate a catalogue Gram matrix."""
    cache = Path(ref.cache_path)
    if cache.exists():
        from .gramio import parse_matrix_file
        gram = parse_matrix_file(cache)
        return validate_gram(gram, ref.dim,
                             min_norm=2 + 2 * (ref.dim // 24))
    if offline:
        raise NetworkError(f"offline and no cached copy at {cache}")
    try:
        with urllib.request.urlopen(ref.url, timeout=timeout) as resp:
            text = resp.read().decode("utf-8", errors="replace")
    except (urllib.error.URLError, OSError, ValueError) as exc:
        raise NetworkError(f"cannot fetch {ref.url}: {exc}") from exc
    gram = _extract_matrix(text, ref.dim)
    lat = validate_gram(gram, ref.dim, min_norm=2 + 2 * (ref.dim // 24))
    cache.parent.mkdir(parents=True, exist_ok=True)
    write_matrix_file(cache, lat.gram)
    return lat
