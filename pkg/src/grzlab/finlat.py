"""Finite posets and finite Heyting algebras, linked by downset duality.

Algebras are operation tables over element indices 0..n-1.  The order is
always derived from the meet table (a <= b iff a meet b = a), so a table
that lies about its order is caught by the axiom scan rather than trusted.

Every finite distributive lattice is the downset lattice of the poset of
its join-irreducible elements; ``downset_heyting`` and
``join_irreducible_poset`` implement the two directions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CapExceeded, InputError

ELEMENT_CAP = 4096

MODES = ("any", "injective", "surjective", "iso")


@dataclass
class FinitePoset:
    """A finite partially ordered set: ``leq[i, j]`` means i lies below j.

    Construction freezes the matrix but does not validate; ``validate``
    reports witnessed axiom failures so broken inputs can be examined.
    """

    size: int
    leq: np.ndarray

    def __post_init__(self):
        mat = np.array(self.leq, dtype=bool)
        if mat.shape != (self.size, self.size):
            raise InputError(
                f"leq matrix has shape {mat.shape}, expected {(self.size, self.size)}"
            )
        mat.setflags(write=False)
        self.leq = mat

    def validate(self) -> list[tuple[str, tuple[int, ...]]]:
        """Witnessed violations of reflexivity, antisymmetry, transitivity."""
        out: list[tuple[str, tuple[int, ...]]] = []
        leq = self.leq
        refl = np.nonzero(~np.diag(leq))[0] if self.size else np.empty(0, int)
        if refl.size:
            out.append(("reflexivity", (int(refl[0]),)))
        anti = np.nonzero(leq & leq.T & ~np.eye(self.size, dtype=bool))
        if anti[0].size:
            out.append(("antisymmetry", (int(anti[0][0]), int(anti[1][0]))))
        closure = leq @ leq
        trans = np.nonzero(closure & ~leq)
        if trans[0].size:
            i, k = int(trans[0][0]), int(trans[1][0])
            j = int(np.nonzero(leq[i] & leq[:, k])[0][0])
            out.append(("transitivity", (i, j, k)))
        return out

    def require_valid(self) -> None:
        bad = self.validate()
        if bad:
            raise InputError(f"not a poset: {bad}")

    def down_mask(self, j: int) -> int:
        """Bitmask of points lying below point j (j included)."""
        return _mask_from_bools(self.leq[:, j])

    def is_isomorphic(self, other: "FinitePoset") -> bool:
        if self.size != other.size:
            return False
        if self.size <= 7:
            return canonical_key(self) == canonical_key(other)
        return _poset_iso_exists(self, other)

    def to_record(self) -> dict:
        return {
            "kind": "poset",
            "size": self.size,
            "leq": [[bool(x) for x in row] for row in self.leq],
        }

    @classmethod
    def from_record(cls, rec: dict) -> "FinitePoset":
        _require_kind(rec, "poset")
        size = _require_int(rec, "size")
        leq = rec.get("leq")
        if not isinstance(leq, list) or len(leq) != size:
            raise InputError("poset record: leq must be a size x size matrix")
        for row in leq:
            if not isinstance(row, list) or len(row) != size:
                raise InputError("poset record: leq must be a size x size matrix")
        return cls(size, np.array(leq, dtype=bool).reshape(size, size))


def _mask_from_bools(col) -> int:
    mask = 0
    for i, v in enumerate(col):
        if v:
            mask |= 1 << i
    return mask


def _require_kind(rec: dict, kind: str) -> None:
    if not isinstance(rec, dict) or rec.get("kind") != kind:
        raise InputError(f"expected a {kind!r} record")


def _require_int(rec: dict, key: str) -> int:
    v = rec.get(key)
    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
        raise InputError(f"record key {key!r} must be a nonnegative integer")
    return v


def linear_extension(poset: FinitePoset) -> list[int]:
    """Points in an order compatible with leq; least index first among minima."""
    leq = poset.leq
    remaining = set(range(poset.size))
    out: list[int] = []
    while remaining:
        for p in sorted(remaining):
            if all(q == p or q not in remaining for q in np.nonzero(leq[:, p])[0]):
                break
        else:
            raise InputError("leq is cyclic, no linear extension")
        out.append(p)
        remaining.discard(p)
    return out


def downset_masks(poset: FinitePoset, cap: int = ELEMENT_CAP) -> list[int]:
    """All downsets of the poset as point bitmasks, ascending."""
    poset.require_valid()
    if poset.size > 62:
        raise CapExceeded("downset masks need the poset to fit in 62 bits")
    downs = [poset.down_mask(j) for j in range(poset.size)]
    sets = [0]
    for p in linear_extension(poset):
        need = downs[p] & ~(1 << p)
        added = [d | (1 << p) for d in sets if d & need == need]
        sets.extend(added)
        if len(sets) > cap:
            raise CapExceeded(f"more than {cap} downsets")
    sets.sort()
    return sets


@dataclass
class HeytingAlgebra:
    """A finite Heyting algebra as meet/join/imp tables over 0..size-1."""

    size: int
    meet: np.ndarray
    join: np.ndarray
    imp: np.ndarray
    bot: int
    top: int
    _leq: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        for name in ("meet", "join", "imp"):
            tab = np.array(getattr(self, name), dtype=np.int32)
            if tab.shape != (self.size, self.size):
                raise InputError(
                    f"{name} table has shape {tab.shape}, expected {(self.size, self.size)}"
                )
            tab.setflags(write=False)
            setattr(self, name, tab)

    @property
    def leq(self) -> np.ndarray:
        """Derived order: a <= b iff a meet b == a."""
        if self._leq is None:
            mat = self.meet == np.arange(self.size, dtype=np.int32)[:, None]
            mat.setflags(write=False)
            self._leq = mat
        return self._leq

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def neg(self, a: int) -> int:
        return int(self.imp[a, self.bot])

    def to_record(self) -> dict:
        return {
            "kind": "heyting",
            "size": self.size,
            "meet": self.meet.tolist(),
            "join": self.join.tolist(),
            "imp": self.imp.tolist(),
            "bot": self.bot,
            "top": self.top,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "HeytingAlgebra":
        _require_kind(rec, "heyting")
        size = _require_int(rec, "size")
        if size < 1:
            raise InputError("heyting record: size must be at least 1")
        tabs = {}
        for name in ("meet", "join", "imp"):
            tab = rec.get(name)
            if not isinstance(tab, list) or len(tab) != size:
                raise InputError(f"heyting record: {name} must be a size x size matrix")
            for row in tab:
                if not isinstance(row, list) or len(row) != size:
                    raise InputError(f"heyting record: {name} must be a size x size matrix")
            tabs[name] = np.array(tab, dtype=np.int32).reshape(size, size)
        bot = _require_int(rec, "bot")
        top = _require_int(rec, "top")
        if bot >= size or top >= size:
            raise InputError("heyting record: bot/top out of range")
        return cls(size, tabs["meet"], tabs["join"], tabs["imp"], bot, top)


@dataclass
class HeytingReport:
    """Outcome of validate_heyting: table problems and witnessed axiom failures."""

    ok: bool
    malformed: list[str]
    violations: list[tuple[str, tuple[int, ...]]]


def validate_heyting(alg: HeytingAlgebra) -> HeytingReport:
    """Check the lattice and residuation axioms, reporting least witnesses.

    Malformed tables (out-of-range entries) short-circuit: axiom scanning
    over garbage indices would be meaningless.
    """
    malformed: list[str] = []
    n = alg.size
    if n < 1:
        malformed.append("size must be at least 1")
    for name in ("meet", "join", "imp"):
        tab = getattr(alg, name)
        if tab.size and (tab.min() < 0 or tab.max() >= n):
            malformed.append(f"{name} table has entries outside 0..{n - 1}")
    for name in ("bot", "top"):
        v = getattr(alg, name)
        if not 0 <= v < n:
            malformed.append(f"{name} index {v} outside 0..{n - 1}")
    if malformed:
        return HeytingReport(False, malformed, [])

    violations: list[tuple[str, tuple[int, ...]]] = []
    meet, join, imp = alg.meet, alg.join, alg.imp
    idx = np.arange(n, dtype=np.int32)

    bad = np.nonzero(np.diag(meet) != idx)[0]
    if bad.size:
        violations.append(("meet-idempotent", (int(bad[0]),)))
    bad = np.nonzero(np.diag(join) != idx)[0]
    if bad.size:
        violations.append(("join-idempotent", (int(bad[0]),)))
    for name, tab in (("meet-commutative", meet), ("join-commutative", join)):
        w = np.nonzero(tab != tab.T)
        if w[0].size:
            violations.append((name, (int(w[0][0]), int(w[1][0]))))
    for name, tab in (("meet-associative", meet), ("join-associative", join)):
        w = _assoc_witness(tab)
        if w is not None:
            violations.append((name, w))
    w = _binary_witness(join[idx[:, None], meet] != idx[:, None])
    if w is not None:
        violations.append(("absorption-join-meet", w))
    w = _binary_witness(meet[idx[:, None], join] != idx[:, None])
    if w is not None:
        violations.append(("absorption-meet-join", w))

    bad = np.nonzero(meet[alg.bot] != alg.bot)[0]
    if bad.size:
        violations.append(("bot-least", (int(bad[0]),)))
    bad = np.nonzero(meet[alg.top] != idx)[0]
    if bad.size:
        violations.append(("top-greatest", (int(bad[0]),)))

    leq = (meet == idx[:, None]).astype(np.uint8)
    packed = kernels.residuation_witness(meet, imp, leq)
    if packed >= 0:
        a, rest = divmod(packed, n * n)
        b, c = divmod(rest, n)
        violations.append(("residuation", (int(a), int(b), int(c))))

    return HeytingReport(not violations, [], violations)


def _assoc_witness(tab: np.ndarray) -> tuple[int, int, int] | None:
    n = tab.shape[0]
    block = max(1, (1 << 22) // max(n * n, 1))
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        left = tab[tab[lo:hi], :]  # [a, b, c] -> (a?b)?c
        right = tab[lo:hi][:, tab]  # [a, b, c] -> a?(b?c)
        w = np.nonzero(left != right)
        if w[0].size:
            return (int(w[0][0]) + lo, int(w[1][0]), int(w[2][0]))
    return None


def _binary_witness(bad: np.ndarray) -> tuple[int, int] | None:
    w = np.nonzero(bad)
    if w[0].size:
        return (int(w[0][0]), int(w[1][0]))
    return None


def require_heyting(alg: HeytingAlgebra) -> None:
    rep = validate_heyting(alg)
    if not rep.ok:
        raise InputError(f"not a Heyting algebra: {rep.malformed or rep.violations}")


def downset_heyting(poset: FinitePoset, cap: int = ELEMENT_CAP) -> HeytingAlgebra:
    """The Heyting algebra of downsets, elements ordered by ascending mask."""
    masks = downset_masks(poset, cap)
    n = len(masks)
    arr = np.array(masks, dtype=np.int64)
    index_of = {m: i for i, m in enumerate(masks)}
    downs = np.array([poset.down_mask(j) for j in range(poset.size)], dtype=np.int64)
    weights = np.int64(1) << np.arange(poset.size, dtype=np.int64)

    meet = np.searchsorted(arr, arr[:, None] & arr[None, :]).astype(np.int32)
    join = np.searchsorted(arr, arr[:, None] | arr[None, :]).astype(np.int32)
    imp = np.empty((n, n), dtype=np.int32)
    inter = downs[None, :] & arr[:, None]  # [a, x] = down(x) & a
    for b in range(n):
        holds = (inter & ~arr[b]) == 0  # x in imp(a, b)
        imp[:, b] = np.searchsorted(arr, holds @ weights)
    return HeytingAlgebra(n, meet, join, imp, 0, n - 1)


def join_irreducibles(alg: HeytingAlgebra) -> list[int]:
    """Elements that are not bot and not a join of two strictly smaller ones."""
    out = []
    leq = alg.leq
    for a in range(alg.size):
        if a == alg.bot:
            continue
        below = np.nonzero(leq[:, a] & (np.arange(alg.size) != a))[0]
        if below.size == 0 or not (alg.join[np.ix_(below, below)] == a).any():
            out.append(a)
    return out


def join_irreducible_poset(alg: HeytingAlgebra) -> FinitePoset:
    """The poset of join-irreducibles (points listed by ascending element index)."""
    irr = join_irreducibles(alg)
    sub = alg.leq[np.ix_(irr, irr)]
    return FinitePoset(len(irr), sub)


def canonical_key(poset: FinitePoset) -> int:
    """Isomorphism-invariant key: minimum packed leq matrix over relabelings."""
    n = poset.size
    if n > 7:
        raise CapExceeded("canonical key supports posets with at most 7 points")
    if n == 0:
        return 0
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    return kernels.perm_min_key(poset.leq.astype(np.uint8), perms)


def poset_from_key(size: int, key: int) -> FinitePoset:
    """Rebuild the leq matrix encoded by a canonical key."""
    bits = [(key >> (size * size - 1 - i)) & 1 for i in range(size * size)]
    mat = np.array(bits, dtype=bool).reshape(size, size)
    return FinitePoset(size, mat)


def _poset_iso_exists(p1: FinitePoset, p2: FinitePoset) -> bool:
    n = p1.size
    deg1 = [(int(p1.leq[:, j].sum()), int(p1.leq[j].sum())) for j in range(n)]
    deg2 = [(int(p2.leq[:, j].sum()), int(p2.leq[j].sum())) for j in range(n)]
    if sorted(deg1) != sorted(deg2):
        return False
    img: list[int] = []
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        for v in range(n):
            if used[v] or deg2[v] != deg1[i]:
                continue
            if all(
                p1.leq[a, i] == p2.leq[img[a], v] and p1.leq[i, a] == p2.leq[v, img[a]]
                for a in range(i)
            ):
                used[v] = True
                img.append(v)
                if extend(i + 1):
                    return True
                img.pop()
                used[v] = False
        return False

    return extend(0)


@dataclass
class HeytingHom:
    """A map between Heyting algebras given by its full value table."""

    source: HeytingAlgebra
    target: HeytingAlgebra
    table: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.table[a]

    def verify(self) -> list[tuple[str, tuple[int, ...]]]:
        """Witnessed failures of the homomorphism conditions."""
        out: list[tuple[str, tuple[int, ...]]] = []
        src, tgt = self.source, self.target
        tab = np.array(self.table, dtype=np.int32)
        if tab.shape != (src.size,) or (tab.size and (tab.min() < 0 or tab.max() >= tgt.size)):
            return [("malformed", ())]
        if tab[src.bot] != tgt.bot:
            out.append(("bot", (src.bot,)))
        if tab[src.top] != tgt.top:
            out.append(("top", (src.top,)))
        for name in ("meet", "join", "imp"):
            left = tab[getattr(src, name)]
            right = getattr(tgt, name)[tab[:, None], tab[None, :]]
            w = _binary_witness(left != right)
            if w is not None:
                out.append((name, w))
        return out

    @property
    def injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    @property
    def surjective(self) -> bool:
        return len(set(self.table)) == self.target.size


def heyting_hom_search(
    source: HeytingAlgebra,
    target: HeytingAlgebra,
    constraints: dict[int, int] | None = None,
    mode: str = "any",
) -> list[HeytingHom]:
    """All Heyting homomorphisms, ordered by their value tables.

    ``constraints`` pins images of particular elements; ``mode`` restricts to
    injective, surjective, or bijective maps.  The search assigns images in
    element order with ascending candidate values, so the result list is in
    lexicographic order of the full table and independent of anything but
    the inputs.
    """
    if mode not in MODES:
        raise InputError(f"mode must be one of {MODES}")
    n1, n2 = source.size, target.size
    if mode == "iso" and n1 != n2:
        return []
    forced = {source.bot: target.bot}
    # A one-element source admits no map into a larger target.
    if forced.get(source.top, target.top) != target.top:
        return []
    forced[source.top] = target.top
    for k, v in (constraints or {}).items():
        if not (0 <= k < n1 and 0 <= v < n2):
            raise InputError("constraint indices out of range")
        if forced.get(k, v) != v:
            return []
        forced[k] = v

    ops = [
        (source.meet, target.meet),
        (source.join, target.join),
        (source.imp, target.imp),
    ]
    # Pairs whose op value exceeds both arguments get checked when the value
    # is assigned, not when the arguments are.
    deferred: list[list[tuple[int, int, int]]] = [[] for _ in range(n1)]
    for oi, (t1, _) in enumerate(ops):
        for a in range(n1):
            for b in range(n1):
                r = int(t1[a, b])
                if r > max(a, b):
                    deferred[r].append((oi, a, b))

    img = [-1] * n1
    use_count = [0] * n2
    distinct = 0
    results: list[HeytingHom] = []
    injective = mode in ("injective", "iso")
    surjective = mode in ("surjective", "iso")

    def consistent(i: int, v: int) -> bool:
        img[i] = v
        try:
            for oi, (t1, t2) in enumerate(ops):
                for a in range(i + 1):
                    r = int(t1[a, i])
                    if r <= i and t2[img[a], v] != img[r]:
                        return False
                    r = int(t1[i, a])
                    if r <= i and t2[v, img[a]] != img[r]:
                        return False
            for oi, a, b in deferred[i]:
                if ops[oi][1][img[a], img[b]] != v:
                    return False
            return True
        finally:
            img[i] = -1

    def search(i: int) -> None:
        nonlocal distinct
        if i == n1:
            if not surjective or distinct == n2:
                results.append(HeytingHom(source, target, tuple(img)))
            return
        if surjective and n2 - distinct > n1 - i:
            return
        candidates = (forced[i],) if i in forced else range(n2)
        for v in candidates:
            if injective and use_count[v]:
                continue
            if not consistent(i, v):
                continue
            img[i] = v
            use_count[v] += 1
            if use_count[v] == 1:
                distinct += 1
            search(i + 1)
            use_count[v] -= 1
            if use_count[v] == 0:
                distinct -= 1
            img[i] = -1

    search(0)
    return results


def are_isomorphic(a: HeytingAlgebra, b: HeytingAlgebra) -> bool:
    """Isomorphism of valid Heyting algebras, via their irreducible posets."""
    if a.size != b.size:
        return False
    pa = join_irreducible_poset(a)
    pb = join_irreducible_poset(b)
    if pa.size != pb.size:
        return False
    if pa.size <= 7:
        return canonical_key(pa) == canonical_key(pb)
    return _poset_iso_exists(pa, pb)


def heyting_quotient(alg: HeytingAlgebra, u: int) -> tuple[HeytingAlgebra, HeytingHom]:
    """Quotient by the congruence of the filter above u, realized on [bot, u].

    Every congruence of a finite Heyting algebra arises this way: filters
    are principal, and a ~ b iff a∧u = b∧u.  The class representatives are
    the elements below u; implication relativizes as (a→b)∧u.
    """
    if not 0 <= u < alg.size:
        raise InputError(f"element {u} outside the carrier")
    table = [int(alg.meet[a, u]) for a in range(alg.size)]
    reps = sorted(set(table))
    index = {r: i for i, r in enumerate(reps)}
    n = len(reps)
    meet = np.zeros((n, n), dtype=np.int32)
    join = np.zeros((n, n), dtype=np.int32)
    imp = np.zeros((n, n), dtype=np.int32)
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            meet[i, j] = index[int(alg.meet[a, b])]
            join[i, j] = index[int(alg.join[a, b])]
            imp[i, j] = index[int(alg.meet[alg.imp[a, b], u])]
    quot = HeytingAlgebra(n, meet, join, imp, index[table[alg.bot]], index[u])
    proj = HeytingHom(alg, quot, tuple(index[t] for t in table))
    return quot, proj


def heyting_product(
    factors: list[HeytingAlgebra], cap: int = ELEMENT_CAP
) -> HeytingAlgebra:
    """Componentwise product; tuples enumerate with the first factor slowest."""
    if not factors:
        return trivial_heyting()
    total = 1
    for f in factors:
        total *= f.size
        if total > cap:
            raise CapExceeded(f"product would have more than {cap} elements")
    strides = []
    acc = 1
    for f in reversed(factors):
        strides.append(acc)
        acc *= f.size
    strides.reverse()
    idx = np.arange(total, dtype=np.int64)
    digits = [(idx // strides[i]) % f.size for i, f in enumerate(factors)]

    def build(name: str) -> np.ndarray:
        out = np.zeros((total, total), dtype=np.int64)
        for i, f in enumerate(factors):
            tab = getattr(f, name).astype(np.int64)
            out += tab[digits[i][:, None], digits[i][None, :]] * strides[i]
        return out.astype(np.int32)

    bot = sum(f.bot * strides[i] for i, f in enumerate(factors))
    top = sum(f.top * strides[i] for i, f in enumerate(factors))
    return HeytingAlgebra(total, build("meet"), build("join"), build("imp"), bot, top)


def trivial_heyting() -> HeytingAlgebra:
    one = np.zeros((1, 1), dtype=np.int32)
    return HeytingAlgebra(1, one, one, one, 0, 0)


def chain_heyting(n: int) -> HeytingAlgebra:
    """The n-element chain 0 < 1 < ... < n-1 with its unique Heyting structure."""
    if n < 1:
        raise InputError("a chain needs at least one element")
    idx = np.arange(n, dtype=np.int32)
    meet = np.minimum(idx[:, None], idx[None, :])
    join = np.maximum(idx[:, None], idx[None, :])
    imp = np.where(idx[:, None] <= idx[None, :], n - 1, idx[None, :]).astype(np.int32)
    return HeytingAlgebra(n, meet, join, imp, 0, n - 1)


def chain_poset(n: int) -> FinitePoset:
    idx = np.arange(n)
    return FinitePoset(n, idx[:, None] <= idx[None, :])


def antichain_poset(n: int) -> FinitePoset:
    return FinitePoset(n, np.eye(n, dtype=bool))
