"""Enumeration of small posets, topologies, and algebras, plus persistence.

Everything is up to isomorphism with explicit canonical forms: posets use
the least packed relation matrix over relabelings, topologies the least
family mask over point permutations.  Heyting algebras ride on Birkhoff
duality, so deduplicating them is deduplicating their join-irreducible
posets and needs no extra work.  Catalogs persist as JSON with named,
validated entries.
"""

from __future__ import annotations

import functools
import itertools
import json
import pathlib
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CapExceeded, InputError
from .finlat import (
    FinitePoset,
    HeytingAlgebra,
    canonical_key,
    downset_masks,
    downset_heyting,
    poset_from_key,
    validate_heyting,
)
from .modal import ModalAlgebra, validate_modal

FORMAT_VERSION = 1
POSET_POINT_CAP = 7
TOPOLOGY_POINT_CAP = 4

_DATA_DIR = pathlib.Path(__file__).parent / "data"


@dataclass
class AlgebraCatalog:
    """A finite homogeneous family of algebras, read as its generated class."""

    kind: str  # "heyting" | "modal"
    members: tuple
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("heyting", "modal"):
            raise InputError("catalog kind must be 'heyting' or 'modal'")
        want = HeytingAlgebra if self.kind == "heyting" else ModalAlgebra
        if any(not isinstance(m, want) for m in self.members):
            raise InputError(f"catalog members must all be {self.kind} algebras")
        self.members = tuple(self.members)


@dataclass
class CatalogFile:
    version: int
    entries: dict[str, dict]

    def decoded(self) -> dict[str, object]:
        return {name: decode_entry(rec) for name, rec in self.entries.items()}


def decode_entry(rec: dict):
    if not isinstance(rec, dict):
        raise InputError("catalog entry is not an object")
    kind = rec.get("kind")
    if kind == "poset":
        return FinitePoset.from_record(rec)
    if kind == "heyting":
        return HeytingAlgebra.from_record(rec)
    if kind == "modal":
        return ModalAlgebra.from_record(rec)
    raise InputError(f"unknown entry kind {kind!r}")


def _validate_entry(name: str, obj) -> None:
    if isinstance(obj, FinitePoset):
        bad = obj.validate()
        if bad:
            raise InputError(f"catalog entry {name!r}: invalid poset: {bad}")
    elif isinstance(obj, HeytingAlgebra):
        rep = validate_heyting(obj)
        if not rep.ok:
            raise InputError(
                f"catalog entry {name!r}: invalid Heyting algebra: "
                f"{rep.malformed or rep.violations}"
            )
    elif isinstance(obj, ModalAlgebra):
        rep = validate_modal(obj)
        if rep.malformed or not rep.k:
            raise InputError(
                f"catalog entry {name!r}: box table violates K: "
                f"{rep.malformed or rep.violations}"
            )


def save(path, entries: dict[str, object]) -> None:
    """Write named records (objects with to_record, or raw record dicts)."""
    recs = {}
    for name, obj in entries.items():
        recs[name] = obj if isinstance(obj, dict) else obj.to_record()
    doc = {"version": FORMAT_VERSION, "entries": recs}
    text = json.dumps(doc, indent=1, sort_keys=True)
    pathlib.Path(path).write_text(text + "\n")


def load(path) -> CatalogFile:
    """Read and re-validate a catalog file; errors name the offending entry."""
    try:
        doc = json.loads(pathlib.Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read catalog {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("version") != FORMAT_VERSION:
        raise InputError(
            f"catalog {path}: expected version {FORMAT_VERSION}, "
            f"got {doc.get('version') if isinstance(doc, dict) else 'no object'}"
        )
    entries = doc.get("entries")
    if not isinstance(entries, dict):
        raise InputError(f"catalog {path}: entries must be an object")
    out = CatalogFile(FORMAT_VERSION, entries)
    for name, obj in out.decoded().items():
        _validate_entry(name, obj)
    return out


# ---------------------------------------------------------------------------
# Posets


@functools.lru_cache(maxsize=None)
def enumerate_posets(n: int) -> tuple[FinitePoset, ...]:
    """One poset per isomorphism class on n points, in canonical-key order.

    Built inductively: every n-point poset is an (n-1)-point poset with a
    new maximal point placed over one of its downsets.  Each candidate is
    replaced by the representative of its canonical key.
    """
    if n < 0:
        raise InputError("point count must be nonnegative")
    if n > POSET_POINT_CAP:
        raise InputError(f"poset enumeration supports at most {POSET_POINT_CAP} points")
    if n == 0:
        return (FinitePoset(0, np.zeros((0, 0), dtype=bool)),)
    keys: set[int] = set()
    for base in enumerate_posets(n - 1):
        for down in downset_masks(base):
            mat = np.zeros((n, n), dtype=bool)
            mat[: n - 1, : n - 1] = base.leq
            mat[n - 1, n - 1] = True
            for i in range(n - 1):
                if (down >> i) & 1:
                    mat[i, n - 1] = True
            keys.add(canonical_key(FinitePoset(n, mat)))
    return tuple(poset_from_key(n, key) for key in sorted(keys))


# ---------------------------------------------------------------------------
# Topologies and interior algebras


def _permute_mask(mask: int, perm) -> int:
    out = 0
    for i, p in enumerate(perm):
        if (mask >> i) & 1:
            out |= 1 << p
    return out


def _canonical_family(family: int, k: int, perms) -> int:
    best = family
    for perm in perms:
        moved = 0
        rest = family
        while rest:
            s = (rest & -rest).bit_length() - 1
            moved |= 1 << _permute_mask(s, perm)
            rest &= rest - 1
        if moved < best:
            best = moved
    return best


@functools.lru_cache(maxsize=None)
def enumerate_topologies(k: int) -> tuple[int, ...]:
    """Topologies on k points up to homeomorphism, as canonical family masks.

    A family mask has bit s set when the subset mask s is open.
    """
    if k < 0:
        raise InputError("point count must be nonnegative")
    if k > TOPOLOGY_POINT_CAP:
        raise InputError(
            f"topology enumeration supports at most {TOPOLOGY_POINT_CAP} points"
        )
    valid = kernels.topology_valid(k)
    perms = list(itertools.permutations(range(k)))
    reps: set[int] = set()
    for family in np.nonzero(valid)[0]:
        reps.add(_canonical_family(int(family), k, perms))
    return tuple(sorted(reps))


def interior_from_topology(k: int, family: int) -> ModalAlgebra:
    """Interior algebra of a family of open sets: box(S) = largest open in S."""
    size = 1 << k
    opens = [s for s in range(size) if (family >> s) & 1]
    box = np.zeros(size, dtype=np.int64)
    masks = np.arange(size, dtype=np.int64)
    for o in opens:
        box[(masks & o) == o] |= o
    return ModalAlgebra(k, box)


def enumerate_interior(k: int) -> list[ModalAlgebra]:
    """One interior algebra per topology on k points up to homeomorphism."""
    return [interior_from_topology(k, fam) for fam in enumerate_topologies(k)]


# ---------------------------------------------------------------------------
# Heyting algebras


def enumerate_heyting(max_size: int) -> list[HeytingAlgebra]:
    """All Heyting algebras with at most max_size elements up to isomorphism.

    Downset algebras of the poset representatives; distinct poset classes
    give non-isomorphic algebras by Birkhoff duality, so no deduplication
    is needed.  A poset on n points has at least n+1 downsets, which bounds
    the poset sizes to scan.
    """
    if max_size < 1:
        raise InputError("max_size must be at least 1")
    if max_size - 1 > POSET_POINT_CAP:
        raise CapExceeded(
            f"max_size {max_size} needs posets beyond {POSET_POINT_CAP} points"
        )
    found: list[tuple[int, int, HeytingAlgebra]] = []
    for n in range(0, max_size):
        for poset in enumerate_posets(n):
            try:
                masks = downset_masks(poset, cap=max_size)
            except CapExceeded:
                continue
            found.append((len(masks), canonical_key(poset), downset_heyting(poset)))
    found.sort(key=lambda item: (item[0], item[1]))
    return [alg for _, _, alg in found]


# ---------------------------------------------------------------------------
# The built-in catalogs the acceptance checks run over


def interior_catalog(max_points: int) -> AlgebraCatalog:
    """Interior algebras of all topologies on at most max_points points."""
    members = []
    for k in range(max_points + 1):
        members.extend(enumerate_interior(k))
    return AlgebraCatalog("modal", tuple(members), f"interior<={max_points}pts")


def heyting_catalog(max_size: int) -> AlgebraCatalog:
    return AlgebraCatalog(
        "heyting", tuple(enumerate_heyting(max_size)), f"heyting<={max_size}"
    )


def grz_members(cat: AlgebraCatalog) -> list[ModalAlgebra]:
    if cat.kind != "modal":
        raise InputError("grz_members expects a modal catalog")
    return [m for m in cat.members if validate_modal(m).grz]


# ---------------------------------------------------------------------------
# Golden files


def poset_entries(max_points: int) -> dict[str, FinitePoset]:
    out = {}
    for n in range(max_points + 1):
        for i, poset in enumerate(enumerate_posets(n)):
            out[f"poset_{n}_{i}"] = poset
    return out


def interior_entries(max_points: int) -> dict[str, ModalAlgebra]:
    out = {}
    for k in range(max_points + 1):
        for i, alg in enumerate(enumerate_interior(k)):
            out[f"interior_{k}_{i}"] = alg
    return out


def builtin_catalog(name: str) -> CatalogFile:
    """Load one of the golden files shipped with the package."""
    path = _DATA_DIR / f"{name}.json"
    if not path.exists():
        raise InputError(f"no builtin catalog named {name!r}")
    return load(path)


def write_golden_files(data_dir=None) -> list[str]:
    """Regenerate the shipped golden files; returns the paths written."""
    base = pathlib.Path(data_dir) if data_dir is not None else _DATA_DIR
    base.mkdir(parents=True, exist_ok=True)
    written = []
    for name, entries in (
        ("posets_n3", poset_entries(3)),
        ("interior_k3", interior_entries(3)),
    ):
        path = base / f"{name}.json"
        save(path, entries)
        written.append(str(path))
    return written
