"""Finite modal and interior algebras on powerset carriers.

A modal algebra here is the full powerset of a finite atom set with a box
table; elements are bitmask integers, so the Boolean operations are machine
operations and only box is data.  (Every finite Boolean algebra has this
form, so nothing is lost.)  On top of that: axiom validation with least
witnesses, open filters and quotients, Boolean and modal subalgebras,
homomorphism search by atom maps, the stable-witness construction, and the
subalgebra/quotient characterization of the Grzegorczyk inequality via the
two standard small algebras.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CapExceeded, InputError, InternalCheckError

ATOM_CAP = 12

MODES = ("any", "injective", "surjective", "iso")
HOM_KINDS = ("boolean", "stable", "box_partial", "modal")


@dataclass
class ModalAlgebra:
    """Powerset modal algebra: ``box[e]`` is the box of the mask ``e``."""

    atoms: int
    box: np.ndarray

    def __post_init__(self):
        if self.atoms < 0:
            raise InputError("atom count must be nonnegative")
        if self.atoms > ATOM_CAP:
            raise CapExceeded(f"atom count {self.atoms} exceeds the cap of {ATOM_CAP}")
        tab = np.array(self.box, dtype=np.int64)
        if tab.shape != (1 << self.atoms,):
            raise InputError(
                f"box table has {tab.shape} entries, expected {1 << self.atoms}"
            )
        tab.setflags(write=False)
        self.box = tab

    @property
    def size(self) -> int:
        return 1 << self.atoms

    @property
    def top(self) -> int:
        return (1 << self.atoms) - 1

    def neg(self, a: int) -> int:
        return self.top ^ a

    def le(self, a: int, b: int) -> bool:
        return a & b == a

    def imp(self, a: int, b: int) -> int:
        return (self.top ^ a) | b

    def box_of(self, a: int) -> int:
        return int(self.box[a])

    def open_elements(self) -> list[int]:
        """Elements fixed by box, in increasing order."""
        idx = np.arange(self.size, dtype=np.int64)
        return [int(a) for a in idx[self.box == idx]]

    def is_open(self, a: int) -> bool:
        return int(self.box[a]) == a

    def to_record(self) -> dict:
        return {"kind": "modal", "atoms": self.atoms, "box": self.box.tolist()}

    @classmethod
    def from_record(cls, rec: dict) -> "ModalAlgebra":
        if not isinstance(rec, dict) or rec.get("kind") != "modal":
            raise InputError("expected a 'modal' record")
        atoms = rec.get("atoms")
        if not isinstance(atoms, int) or isinstance(atoms, bool) or atoms < 0:
            raise InputError("modal record: atoms must be a nonnegative integer")
        box = rec.get("box")
        if not isinstance(box, list) or len(box) != (1 << atoms):
            raise InputError("modal record: box must list 2^atoms entries")
        for v in box:
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < (1 << atoms):
                raise InputError("modal record: box entries must be element masks")
        return cls(atoms, np.array(box, dtype=np.int64))


def trivial_modal() -> ModalAlgebra:
    return ModalAlgebra(0, np.zeros(1, dtype=np.int64))


def make_standard(name: str) -> ModalAlgebra:
    """The two small interior algebras every non-Grz algebra points at.

    "S2": two atoms, box collapses everything but top to bottom.
    "S12": three atoms with atom index 2 open; box sends top to top,
    anything between the open atom and top to that atom, the rest to bottom.
    """
    if name == "S2":
        return ModalAlgebra(2, np.array([0, 0, 0, 3], dtype=np.int64))
    if name == "S12":
        box = np.zeros(8, dtype=np.int64)
        box[7] = 7
        for a in (4, 5, 6):
            box[a] = 4
        return ModalAlgebra(3, box)
    raise InputError(f"unknown standard algebra {name!r}; use 'S2' or 'S12'")


def complex_algebra(poset, cap: int = ATOM_CAP) -> ModalAlgebra:
    """Powerset algebra of a poset: box(S) = largest downset inside S."""
    poset.require_valid()
    if poset.size > cap:
        raise CapExceeded(f"poset has {poset.size} points, atom cap is {cap}")
    size = 1 << poset.size
    box = np.zeros(size, dtype=np.int64)
    masks = np.arange(size, dtype=np.int64)
    for j in range(poset.size):
        down = poset.down_mask(j)
        box[(masks & down) == down] |= 1 << j
    return ModalAlgebra(poset.size, box)


@dataclass
class ModalReport:
    """Axiom scan outcome with least witnesses per failed axiom."""

    k: bool
    interior: bool
    grz: bool
    grz_witness: int | None
    malformed: list[str]
    violations: list[tuple[str, tuple[int, ...]]]

    @property
    def classification(self) -> dict:
        return {
            "K": self.k,
            "interior": self.interior,
            "grz": self.grz,
            "grz_witness": self.grz_witness,
        }


def grz_violations(alg: ModalAlgebra) -> np.ndarray:
    """Elements where box(box(a -> box a) -> a) fails to sit below a."""
    masks = np.arange(alg.size, dtype=np.int64)
    top = alg.top
    t = ((top ^ alg.box[(top ^ masks) | alg.box]) | masks)
    bad = (alg.box[t] & ~masks) != 0
    return masks[bad]


def validate_modal(alg: ModalAlgebra) -> ModalReport:
    """Check K, the interior axioms, and the Grzegorczyk inequality."""
    malformed: list[str] = []
    tab = alg.box
    if tab.size and (tab.min() < 0 or tab.max() > alg.top):
        malformed.append("box entries outside the carrier")
    if malformed:
        return ModalReport(False, False, False, None, malformed, [])

    violations: list[tuple[str, tuple[int, ...]]] = []
    if int(tab[alg.top]) != alg.top:
        violations.append(("box-top", ()))
    packed = kernels.k_axiom_witness(tab)
    if packed >= 0:
        violations.append(("k", (packed // alg.size, packed % alg.size)))
    k_ok = not violations

    masks = np.arange(alg.size, dtype=np.int64)
    bad = np.nonzero((tab & ~masks) != 0)[0]
    defl_ok = bad.size == 0
    if not defl_ok:
        violations.append(("deflation", (int(bad[0]),)))
    bad = np.nonzero(tab[tab] != tab)[0]
    idem_ok = bad.size == 0
    if not idem_ok:
        violations.append(("idempotence", (int(bad[0]),)))
    interior = k_ok and defl_ok and idem_ok

    grz = False
    grz_witness = None
    if interior:
        viol = grz_violations(alg)
        if viol.size:
            grz_witness = int(viol[0])
            violations.append(("grz", (grz_witness,)))
        else:
            grz = True
    return ModalReport(k_ok, interior, grz, grz_witness, [], violations)


def require_interior(alg: ModalAlgebra) -> None:
    rep = validate_modal(alg)
    if not rep.interior:
        raise InputError(f"not an interior algebra: {rep.malformed or rep.violations}")


def require_grz(alg: ModalAlgebra) -> None:
    rep = validate_modal(alg)
    if not rep.grz:
        raise InputError(
            f"not a Grzegorczyk algebra: {rep.malformed or rep.violations}"
        )


# ---------------------------------------------------------------------------
# Filters and quotients


@dataclass
class Filter:
    """A filter given by its member set; open filters are box-closed."""

    algebra: ModalAlgebra
    members: frozenset[int]
    kind: str  # "boolean" | "open"

    def validate(self) -> list[str]:
        out: list[str] = []
        alg = self.algebra
        if self.kind not in ("boolean", "open"):
            out.append(f"unknown filter kind {self.kind!r}")
        if any(not 0 <= m <= alg.top for m in self.members):
            out.append("member outside the carrier")
            return out
        if alg.top not in self.members:
            out.append("top missing")
        for m in self.members:
            for b in range(alg.size):
                if m & b == m and b not in self.members:
                    out.append(f"not upward closed at ({m}, {b})")
                    break
            else:
                continue
            break
        for m in self.members:
            for b in self.members:
                if m & b not in self.members:
                    out.append(f"not meet closed at ({m}, {b})")
                    break
            else:
                continue
            break
        if self.kind == "open":
            for m in self.members:
                if int(alg.box[m]) not in self.members:
                    out.append(f"not box closed at {m}")
                    break
        return out

    def least(self) -> int:
        out = self.algebra.top
        for m in self.members:
            out &= m
        return out


def upset_filter(alg: ModalAlgebra, a: int, kind: str = "boolean") -> Filter:
    members = frozenset(b for b in range(alg.size) if a & b == a)
    return Filter(alg, members, kind)


def open_filter(alg: ModalAlgebra, a: int) -> Filter:
    """The least open filter containing a: everything above box(a)."""
    return upset_filter(alg, int(alg.box[a]), "open")


def open_filters(alg: ModalAlgebra) -> list[Filter]:
    """All open filters, one per open element, by increasing least element."""
    return [upset_filter(alg, u, "open") for u in alg.open_elements()]


def quotient(alg: ModalAlgebra, filt: Filter) -> tuple[ModalAlgebra, "Homomorphism"]:
    """Quotient by an open filter, realized on the atoms under its least element."""
    if filt.algebra is not alg:
        raise InputError("filter belongs to a different algebra")
    if filt.kind != "open":
        raise InputError("quotient requires an open filter")
    bad = filt.validate()
    if bad:
        raise InputError(f"invalid filter: {bad}")
    u = filt.least()
    bits = [i for i in range(alg.atoms) if (u >> i) & 1]

    def compress(b: int) -> int:
        out = 0
        for t, i in enumerate(bits):
            if (b >> i) & 1:
                out |= 1 << t
        return out

    def expand(t: int) -> int:
        out = 0
        for pos, i in enumerate(bits):
            if (t >> pos) & 1:
                out |= 1 << i
        return out

    q_size = 1 << len(bits)
    q_box = np.zeros(q_size, dtype=np.int64)
    for t in range(q_size):
        q_box[t] = compress(int(alg.box[expand(t)]) & u)
    q = ModalAlgebra(len(bits), q_box)
    values = {b: compress(b & u) for b in range(alg.size)}
    return q, Homomorphism(alg, q, "modal", values)


def classify_structure(alg: ModalAlgebra) -> dict:
    """Subdirect irreducibility and simplicity, read off the open elements."""
    opens = alg.open_elements()
    non_top = [u for u in opens if u != alg.top]
    si = any(all(o & u == o for o in non_top) for u in non_top)
    return {"subdirectly_irreducible": si, "simple": len(opens) == 2}


# ---------------------------------------------------------------------------
# Boolean subalgebras


@dataclass
class BooleanSubalgebra:
    """A Boolean subalgebra of a powerset algebra, as its atom partition."""

    algebra: ModalAlgebra
    blocks: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(sorted(int(b) for b in self.blocks))
        union = 0
        for b in blocks:
            if b <= 0 or union & b:
                raise InputError("blocks must be disjoint nonempty atom sets")
            union |= b
        if union != self.algebra.top:
            raise InputError("blocks must cover the atom set")
        self.blocks = blocks

    @property
    def elements(self) -> tuple[int, ...]:
        """All block unions, ascending."""
        out = [0]
        for b in self.blocks:
            out.extend([x | b for x in out])
        return tuple(sorted(out))

    def contains(self, x: int) -> bool:
        for b in self.blocks:
            inter = x & b
            if inter and inter != b:
                return False
        return True

    @property
    def box_closed(self) -> bool:
        return all(self.contains(int(self.algebra.box[e])) for e in self.elements)

    def open_members(self) -> list[int]:
        return [e for e in self.elements if self.algebra.is_open(e)]


def subalgebra_from_elements(alg: ModalAlgebra, elems) -> BooleanSubalgebra:
    """The subalgebra with exactly the given elements (checked for closure)."""
    elems = sorted(set(int(e) for e in elems))
    sub = generated_subalgebra(alg, elems, "boolean")
    if list(sub.elements) != elems:
        raise InputError("element set is not closed under the Boolean operations")
    return sub


def generated_subalgebra(alg: ModalAlgebra, seeds, kind: str = "boolean") -> BooleanSubalgebra:
    """Least Boolean (or box-closed) subalgebra containing the seeds.

    Works on the atom partition: atoms are merged when no generator
    separates them, and for kind="modal" the box values of the current
    closure are fed back in until the partition stabilizes.
    """
    if kind not in ("boolean", "modal"):
        raise InputError("kind must be 'boolean' or 'modal'")
    gens = sorted(set(int(s) for s in seeds))
    for s in gens:
        if not 0 <= s <= alg.top:
            raise InputError(f"seed {s} outside the carrier")
    while True:
        sub = _partition_subalgebra(alg, gens)
        if kind == "boolean":
            return sub
        boxes = sorted({int(alg.box[e]) for e in sub.elements})
        if all(sub.contains(b) for b in boxes):
            return sub
        gens = sorted(set(gens) | set(boxes))


def _partition_subalgebra(alg: ModalAlgebra, gens: list[int]) -> BooleanSubalgebra:
    if alg.atoms == 0:
        return BooleanSubalgebra(alg, ())
    sigs: dict[tuple[int, ...], int] = {}
    masks = []
    for i in range(alg.atoms):
        sig = tuple((g >> i) & 1 for g in gens)
        if sig in sigs:
            masks[sigs[sig]] |= 1 << i
        else:
            sigs[sig] = len(masks)
            masks.append(1 << i)
    return BooleanSubalgebra(alg, tuple(masks))


def set_partitions(n: int):
    """Partitions of range(n) as restricted-growth strings, lexicographic."""
    if n == 0:
        yield ()
        return
    rgs = [0] * n

    def rec(i: int, maxcode: int):
        if i == n:
            yield tuple(rgs)
            return
        for c in range(maxcode + 2):
            rgs[i] = c
            yield from rec(i + 1, max(maxcode, c))

    yield from rec(1, 0)


def all_boolean_subalgebras(alg: ModalAlgebra) -> list[BooleanSubalgebra]:
    """Every Boolean subalgebra, one per atom partition, deterministic order."""
    out = []
    for rgs in set_partitions(alg.atoms):
        nblocks = (max(rgs) + 1) if rgs else 0
        masks = [0] * nblocks
        for i, c in enumerate(rgs):
            masks[c] |= 1 << i
        out.append(BooleanSubalgebra(alg, tuple(masks)))
    return out


def all_modal_subalgebras(alg: ModalAlgebra) -> list[BooleanSubalgebra]:
    return [s for s in all_boolean_subalgebras(alg) if s.box_closed]


def subalgebra_as_algebra(
    sub: BooleanSubalgebra,
) -> tuple[ModalAlgebra, dict[int, int], list[int]]:
    """A box-closed subalgebra as a standalone algebra on its blocks.

    Returns (algebra, encode, decode): encode maps subalgebra elements of
    the ambient carrier to masks of the standalone one; decode is the
    block list, i.e. the reverse map on atoms.
    """
    if not sub.box_closed:
        raise InputError("subalgebra is not box closed")
    blocks = list(sub.blocks)
    k = len(blocks)

    def encode(e: int) -> int:
        out = 0
        for t, b in enumerate(blocks):
            if e & b == b:
                out |= 1 << t
        return out

    box = np.zeros(1 << k, dtype=np.int64)
    for t in range(1 << k):
        e = 0
        for pos, b in enumerate(blocks):
            if (t >> pos) & 1:
                e |= b
        box[t] = encode(int(sub.algebra.box[e]))
    alg = ModalAlgebra(k, box)
    enc = {e: encode(e) for e in sub.elements}
    return alg, enc, blocks


# ---------------------------------------------------------------------------
# Homomorphisms


@dataclass
class Homomorphism:
    """A map between modal algebras, possibly on a declared subalgebra only.

    ``values`` covers the full source carrier unless ``domain`` is set, in
    which case it covers exactly the subalgebra's elements.  ``kind`` says
    which preservation contract ``verify`` should hold it to.
    """

    source: ModalAlgebra
    target: ModalAlgebra
    kind: str
    values: dict[int, int]
    domain: BooleanSubalgebra | None = None

    def __call__(self, a: int) -> int:
        return self.values[a]

    def domain_elements(self) -> tuple[int, ...]:
        if self.domain is not None:
            return self.domain.elements
        return tuple(range(self.source.size))

    def verify(self) -> list[tuple[str, tuple[int, ...]]]:
        """Witnessed violations of the Boolean and box conditions."""
        out: list[tuple[str, tuple[int, ...]]] = []
        if self.kind not in HOM_KINDS:
            return [("kind", ())]
        if self.kind == "box_partial" and self.domain is None:
            return [("missing-domain", ())]
        src, tgt = self.source, self.target
        dom = self.domain_elements()
        dom_set = set(dom)
        if set(self.values) != dom_set:
            return [("malformed", ())]
        if any(not 0 <= v <= tgt.top for v in self.values.values()):
            return [("malformed", ())]
        f = self.values
        if f[0] != 0:
            out.append(("bot", ()))
        if f[src.top] != tgt.top:
            out.append(("top", ()))
        for a in dom:
            if f[src.top ^ a] != tgt.top ^ f[a]:
                out.append(("neg", (a,)))
                break
        done = False
        for a in dom:
            for b in dom:
                if f[a & b] != f[a] & f[b]:
                    out.append(("meet", (a, b)))
                    done = True
                    break
            if done:
                break
        if self.kind == "stable":
            for a in dom:
                ba = int(src.box[a])
                if f[ba] & ~int(tgt.box[f[a]]):
                    out.append(("stable-box", (a,)))
                    break
        elif self.kind == "modal":
            for a in dom:
                if f[int(src.box[a])] != int(tgt.box[f[a]]):
                    out.append(("box", (a,)))
                    break
        elif self.kind == "box_partial":
            for a in dom:
                ba = int(src.box[a])
                if ba in dom_set and f[ba] != int(tgt.box[f[a]]):
                    out.append(("box", (a,)))
                    break
        return out

    @property
    def injective(self) -> bool:
        vals = list(self.values.values())
        return len(set(vals)) == len(vals)

    @property
    def surjective(self) -> bool:
        return len(set(self.values.values())) == self.target.size

    def table(self) -> list[int]:
        return [self.values[e] for e in self.domain_elements()]

    def to_certificate(self) -> dict:
        cert = {"map": self.table()}
        if self.domain is not None:
            cert["domain"] = list(self.domain_elements())
        return cert


def compose(g: Homomorphism, f: Homomorphism, kind: str) -> Homomorphism:
    """g after f; caller names the kind the composite is claimed to satisfy."""
    values = {a: g.values[v] for a, v in f.values.items()}
    return Homomorphism(f.source, g.target, kind, values, f.domain)


def identity_hom(alg: ModalAlgebra, kind: str = "modal") -> Homomorphism:
    return Homomorphism(alg, alg, kind, {a: a for a in range(alg.size)})


def hom_search(
    source: ModalAlgebra,
    target: ModalAlgebra,
    kind: str = "modal",
    constraints: dict[int, int] | None = None,
    mode: str = "any",
    domain: BooleanSubalgebra | None = None,
    max_candidates: int = 10**7,
) -> list[Homomorphism]:
    """All homomorphisms of the given kind and mode, in value-table order.

    Boolean homomorphisms out of a powerset (sub)algebra correspond to
    functions from the target's atoms to the source's blocks: f(S) collects
    the target atoms whose block lands inside S.  The search enumerates
    those functions, prunes with the constraints per target atom, and then
    filters by the box condition of the requested kind.  Injectivity of f
    is surjectivity of the atom map and vice versa.
    """
    if kind not in HOM_KINDS:
        raise InputError(f"kind must be one of {HOM_KINDS}")
    if mode not in MODES:
        raise InputError(f"mode must be one of {MODES}")
    if kind == "box_partial" and domain is None:
        raise InputError("box_partial search needs a declared domain subalgebra")
    if domain is not None and domain.algebra is not source:
        raise InputError("domain subalgebra belongs to a different algebra")
    if domain is not None and kind in ("stable", "modal"):
        raise InputError(f"kind={kind} is a full-carrier contract; no domain allowed")

    blocks = domain.blocks if domain is not None else tuple(
        1 << i for i in range(source.atoms)
    )
    dom_elements = domain.elements if domain is not None else tuple(range(source.size))
    dom_set = set(dom_elements)
    nb = len(blocks)
    ka = target.atoms

    allowed: list[list[int]] = [list(range(nb)) for _ in range(ka)]
    for s, v in (constraints or {}).items():
        if s not in dom_set:
            raise InputError(f"constraint key {s} outside the (sub)algebra")
        if not 0 <= v <= target.top:
            raise InputError(f"constraint value {v} outside the target")
        for y in range(ka):
            want = bool((v >> y) & 1)
            allowed[y] = [
                bi for bi in allowed[y] if ((blocks[bi] & s) == blocks[bi]) == want
            ]

    count = 1
    for opts in allowed:
        count *= len(opts)
        if count > max_candidates:
            raise CapExceeded(
                f"homomorphism search space exceeds {max_candidates} candidates"
            )

    results: list[Homomorphism] = []
    for h in itertools.product(*allowed):
        if mode in ("injective", "iso") and len(set(h)) != nb:
            continue
        if mode in ("surjective", "iso") and len(set(h)) != ka:
            continue
        values: dict[int, int] = {}
        for e in dom_elements:
            img = 0
            for y in range(ka):
                if blocks[h[y]] & e == blocks[h[y]]:
                    img |= 1 << y
            values[e] = img
        if kind == "stable":
            if any(
                values[int(source.box[e])] & ~int(target.box[values[e]])
                for e in dom_elements
            ):
                continue
        elif kind == "modal":
            if any(
                values[int(source.box[e])] != int(target.box[values[e]])
                for e in dom_elements
            ):
                continue
        elif kind == "box_partial":
            bad = False
            for e in dom_elements:
                be = int(source.box[e])
                if be in dom_set and values[be] != int(target.box[values[e]]):
                    bad = True
                    break
            if bad:
                continue
        results.append(Homomorphism(source, target, kind, values, domain))
    results.sort(key=lambda hom: hom.table())
    return results


def are_isomorphic(a: ModalAlgebra, b: ModalAlgebra) -> bool:
    """Modal isomorphism via atom permutations."""
    if a.atoms != b.atoms:
        return False
    for perm in itertools.permutations(range(a.atoms)):
        ok = True
        for e in range(a.size):
            pe = _apply_perm(e, perm)
            if _apply_perm(int(a.box[e]), perm) != int(b.box[pe]):
                ok = False
                break
        if ok:
            return True
    return False


def _apply_perm(mask: int, perm) -> int:
    out = 0
    for i, p in enumerate(perm):
        if (mask >> i) & 1:
            out |= 1 << p
    return out


def modal_product(factors: list[ModalAlgebra], cap: int = ATOM_CAP) -> ModalAlgebra:
    """Product on the disjoint atom union; factor 0 takes the low bits."""
    total = sum(f.atoms for f in factors)
    if total > cap:
        raise CapExceeded(f"product would have {total} atoms, cap is {cap}")
    if not factors:
        return trivial_modal()
    size = 1 << total
    masks = np.arange(size, dtype=np.int64)
    box = np.zeros(size, dtype=np.int64)
    off = 0
    for f in factors:
        sub = (masks >> off) & f.top
        box |= f.box[sub] << off
        off += f.atoms
    return ModalAlgebra(total, box)


# ---------------------------------------------------------------------------
# Stable witnesses and the Grzegorczyk characterization


def _grz_term(alg: ModalAlgebra, a: int) -> int:
    """t(a) = box(a -> box a) -> a."""
    return alg.imp(int(alg.box[alg.imp(a, int(alg.box[a]))]), a)


def grz_fails_at(alg: ModalAlgebra, a: int) -> bool:
    return bool(int(alg.box[_grz_term(alg, a)]) & ~a)


def _maximal_open_filter(alg: ModalAlgebra, a: int) -> Filter:
    """Largest open filter containing t(a) but not a; least witness on ties.

    Filters grow as their least elements shrink, so the maximal valid
    filters sit at the minimal opens below t(a) that are not below a.
    """
    ta = _grz_term(alg, a)
    candidates = [u for u in alg.open_elements() if u & ta == u and u & a != u]
    if not candidates:
        raise InternalCheckError("no open filter separates t(a) from a")
    minimal = [
        u for u in candidates if not any(v != u and v & u == v for v in candidates)
    ]
    return upset_filter(alg, min(minimal), "open")


def stable_witness_construct(alg: ModalAlgebra, a: int) -> Homomorphism:
    """The three-stage stable surjection onto the four-element standard algebra.

    Quotient by a maximal open filter separating t(a) from a, then by the
    Boolean filter generated by the complement of box of the image of a,
    then map onto the standard algebra by the least Boolean surjection
    sending the image of a to a coatom.  Requires the Grzegorczyk
    inequality to fail at a.
    """
    require_interior(alg)
    if not 0 <= a <= alg.top:
        raise InputError(f"element {a} outside the carrier")
    if not grz_fails_at(alg, a):
        raise InputError(
            f"the Grzegorczyk inequality holds at {a}; the construction needs a failure"
        )
    s2 = make_standard("S2")

    g_filter = _maximal_open_filter(alg, a)
    m1, proj1 = quotient(alg, g_filter)
    a1 = proj1(a)

    w = m1.top ^ int(m1.box[a1])
    bits = [i for i in range(m1.atoms) if (w >> i) & 1]
    m = len(bits)

    def compress(b: int) -> int:
        out = 0
        for t, i in enumerate(bits):
            if (b >> i) & 1:
                out |= 1 << t
        return out

    a2 = compress(a1 & w)
    if not (0 < a2 < (1 << m) - 1):
        raise InternalCheckError("image of a is not strictly between the bounds")

    best: list[int] | None = None
    for h0, h1 in itertools.product(range(m), repeat=2):
        if h0 == h1:
            continue
        table = [
            (((e >> h0) & 1) | (((e >> h1) & 1) << 1)) for e in range(1 << m)
        ]
        if table[a2] not in (1, 2):
            continue
        if best is None or table < best:
            best = table
    if best is None:
        raise InternalCheckError("no Boolean surjection with a coatom image exists")

    values = {b: best[compress(proj1(b) & w)] for b in range(alg.size)}
    hom = Homomorphism(alg, s2, "stable", values)
    problems = hom.verify()
    if problems or not hom.surjective or values[a] not in (1, 2):
        raise InternalCheckError(f"constructed witness fails its checks: {problems}")
    return hom


@dataclass
class BlokWitness:
    """A subalgebra-with-quotient presentation of a standard algebra inside M."""

    subalgebra: BooleanSubalgebra
    sub_algebra: ModalAlgebra
    encode: dict[int, int]
    filter: Filter
    quotient: ModalAlgebra
    projection: Homomorphism
    iso: Homomorphism
    target_name: str

    def verify(self) -> list[str]:
        out: list[str] = []
        if not self.subalgebra.box_closed:
            out.append("subalgebra not box closed")
        bad = self.filter.validate()
        if bad or self.filter.kind != "open":
            out.append(f"filter invalid: {bad}")
        target = make_standard(self.target_name)
        if self.iso.source is not self.quotient or self.iso.target.atoms != target.atoms:
            out.append("iso endpoints wrong")
        if self.iso.verify() or not (self.iso.injective and self.iso.surjective):
            out.append("iso fails the modal isomorphism check")
        if not np.array_equal(self.iso.target.box, target.box):
            out.append("target is not the named standard algebra")
        return out


@dataclass
class BlokResult:
    is_grz: bool
    witness: BlokWitness | None


def blok_characterization(alg: ModalAlgebra) -> BlokResult:
    """Decide Grz by brute subalgebra/quotient search; witness by the proof route.

    The boolean answer scans every box-closed subalgebra and every open
    filter quotient for a copy of one of the two standard algebras, which
    keeps it independent of the inequality scan in validate_modal.  The
    witness, when one is due, is built the constructive way: quotient by a
    maximal open filter, generate from the image of the least failing
    element, pull back.
    """
    require_interior(alg)
    s2 = make_standard("S2")
    s12 = make_standard("S12")

    found_bad = False
    for sub in all_modal_subalgebras(alg):
        sub_alg, _, _ = subalgebra_as_algebra(sub)
        for filt in open_filters(sub_alg):
            q, _ = quotient(sub_alg, filt)
            if q.atoms == 2 and are_isomorphic(q, s2):
                found_bad = True
                break
            if q.atoms == 3 and are_isomorphic(q, s12):
                found_bad = True
                break
        if found_bad:
            break
    if not found_bad:
        return BlokResult(True, None)

    viol = grz_violations(alg)
    if viol.size == 0:
        raise InternalCheckError(
            "subalgebra/quotient search found a standard algebra but the "
            "inequality holds everywhere"
        )
    a = int(viol[0])
    g_filter = _maximal_open_filter(alg, a)
    m1, proj1 = quotient(alg, g_filter)
    a1 = proj1(a)
    p_sub = generated_subalgebra(m1, [a1], "modal")
    box_a1 = int(m1.box[a1])
    if box_a1 == 0:
        target_name = "S2"
    elif box_a1 != a1 and a1 != m1.top:
        target_name = "S12"
    else:
        raise InternalCheckError("image element does not match either proof case")

    # Pull the quotient-side subalgebra back along the projection.
    p_elems = set(p_sub.elements)
    n_elems = [b for b in range(alg.size) if proj1(b) in p_elems]
    n_sub = subalgebra_from_elements(alg, n_elems)
    n_alg, enc, _ = subalgebra_as_algebra(n_sub)
    u_g = g_filter.least()
    filt = upset_filter(n_alg, enc[u_g], "open")
    q, proj = quotient(n_alg, filt)
    target = make_standard(target_name)
    isos = hom_search(q, target, kind="modal", mode="iso")
    if not isos:
        raise InternalCheckError(f"quotient is not isomorphic to {target_name}")
    witness = BlokWitness(n_sub, n_alg, enc, filt, q, proj, isos[0], target_name)
    problems = witness.verify()
    if problems:
        raise InternalCheckError(f"witness failed verification: {problems}")
    return BlokResult(False, witness)
