"""Bounded free algebras over finite catalogs, and what they certify.

The free algebra on k generators for the class a catalog generates is cut
out inside the product of all member-assignment coordinates; every element
carries the term that produced it.  At bound k this is exact for
everything in at most k variables, and the admissibility and completeness
reports below say so explicitly rather than pretending to the unbounded
notion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .bridge import boolean_extension, class_membership, extend_hom, open_algebra, sigma_catalog
from .catalog import AlgebraCatalog
from .errors import CapExceeded, InputError, InternalCheckError
from .finlat import HeytingAlgebra, HeytingHom, heyting_hom_search
from .modal import ATOM_CAP, ModalAlgebra, hom_search
from .ulogic import (
    And,
    Box,
    Const,
    Formula,
    Imp,
    Not,
    Or,
    UniversalSentence,
    Var,
    catalog_validates,
    eval_formula,
    eval_sentence,
    sentence_to_json,
)

COORD_CAP = 64
ELEMENT_CAP = 4096


@dataclass
class FreeAlgebra:
    """A free algebra at generator bound k, with term provenance."""

    algebra: object  # HeytingAlgebra | ModalAlgebra
    generators: tuple[int, ...]
    terms: dict[int, Formula]
    catalog: AlgebraCatalog
    k: int


def _close_heyting(members, k, element_cap):
    coords = [
        (A, alpha)
        for A in members
        for alpha in itertools.product(range(A.size), repeat=k)
    ]
    bot_t = tuple(A.bot for A, _ in coords)
    top_t = tuple(A.top for A, _ in coords)
    elems: list[tuple] = []
    terms: list[Formula] = []
    seen: dict[tuple, int] = {}

    def intern(t, term):
        if t not in seen:
            seen[t] = len(elems)
            elems.append(t)
            terms.append(term)

    intern(bot_t, Const("bot"))
    intern(top_t, Const("top"))
    for i in range(k):
        intern(tuple(alpha[i] for _, alpha in coords), Var(f"x{i}"))

    ops = (
        ("meet", And, [A.meet for A, _ in coords]),
        ("join", Or, [A.join for A, _ in coords]),
        ("imp", Imp, [A.imp for A, _ in coords]),
    )
    while True:
        n0 = len(elems)
        for _, ctor, tabs in ops:
            for i in range(n0):
                for j in range(n0):
                    t = tuple(
                        int(tab[elems[i][c], elems[j][c]]) for c, tab in enumerate(tabs)
                    )
                    intern(t, ctor(terms[i], terms[j]))
        if len(elems) > element_cap:
            raise CapExceeded(f"free algebra closure exceeds {element_cap} elements")
        if len(elems) == n0:
            break
    return elems, terms, bot_t, top_t, coords


def _close_modal(members, k, element_cap):
    coords = [
        (A, alpha)
        for A in members
        for alpha in itertools.product(range(A.size), repeat=k)
    ]
    bot_t = tuple(0 for _ in coords)
    top_t = tuple(A.top for A, _ in coords)
    elems: list[tuple] = []
    terms: list[Formula] = []
    seen: dict[tuple, int] = {}

    def intern(t, term):
        if t not in seen:
            seen[t] = len(elems)
            elems.append(t)
            terms.append(term)

    intern(bot_t, Const("bot"))
    intern(top_t, Const("top"))
    for i in range(k):
        intern(tuple(alpha[i] for _, alpha in coords), Var(f"x{i}"))

    while True:
        n0 = len(elems)
        for i in range(n0):
            t = elems[i]
            intern(
                tuple(A.top ^ t[c] for c, (A, _) in enumerate(coords)),
                Not(terms[i]),
            )
            intern(
                tuple(int(A.box[t[c]]) for c, (A, _) in enumerate(coords)),
                Box(terms[i]),
            )
        for i in range(n0):
            for j in range(n0):
                ti, tj = elems[i], elems[j]
                intern(
                    tuple(ti[c] & tj[c] for c in range(len(coords))),
                    And(terms[i], terms[j]),
                )
                intern(
                    tuple(ti[c] | tj[c] for c in range(len(coords))),
                    Or(terms[i], terms[j]),
                )
        if len(elems) > element_cap:
            raise CapExceeded(f"free algebra closure exceeds {element_cap} elements")
        if len(elems) == n0:
            break
    return elems, terms, bot_t, top_t, coords


def free_algebra(
    K: AlgebraCatalog,
    k: int,
    coord_cap: int = COORD_CAP,
    element_cap: int = ELEMENT_CAP,
) -> FreeAlgebra:
    """The free algebra on k generators for the class the catalog generates.

    Subalgebra of the product over all (member, assignment) coordinates,
    generated by the k projection tuples; elements are interned in sorted
    tuple order and each carries a defining term.
    """
    if not K.members:
        raise InputError("free algebra needs a nonempty catalog")
    if k < 0:
        raise InputError("generator count must be nonnegative")
    ncoords = sum(A.size**k for A in K.members)
    if ncoords > coord_cap:
        raise CapExceeded(
            f"free algebra needs {ncoords} coordinates, cap is {coord_cap}"
        )

    if K.kind == "heyting":
        elems, terms, bot_t, top_t, coords = _close_heyting(K.members, k, element_cap)
        order = sorted(range(len(elems)), key=lambda i: elems[i])
        rank = {elems[i]: pos for pos, i in enumerate(order)}
        n = len(elems)
        meet = np.zeros((n, n), dtype=np.int32)
        join = np.zeros((n, n), dtype=np.int32)
        imp = np.zeros((n, n), dtype=np.int32)
        ordered = [elems[i] for i in order]
        for a, ta in enumerate(ordered):
            for b, tb in enumerate(ordered):
                meet[a, b] = rank[
                    tuple(int(A.meet[ta[c], tb[c]]) for c, (A, _) in enumerate(coords))
                ]
                join[a, b] = rank[
                    tuple(int(A.join[ta[c], tb[c]]) for c, (A, _) in enumerate(coords))
                ]
                imp[a, b] = rank[
                    tuple(int(A.imp[ta[c], tb[c]]) for c, (A, _) in enumerate(coords))
                ]
        alg = HeytingAlgebra(n, meet, join, imp, rank[bot_t], rank[top_t])
        gens = tuple(
            rank[tuple(alpha[i] for _, alpha in coords)] for i in range(k)
        )
        term_map = {rank[elems[i]]: terms[i] for i in range(len(elems))}
        return FreeAlgebra(alg, gens, term_map, K, k)

    elems, terms, bot_t, top_t, coords = _close_modal(K.members, k, element_cap)

    def leq(t1, t2):
        return all(a & b == a for a, b in zip(t1, t2))

    nonzero = [t for t in elems if t != bot_t]
    atoms = sorted(
        t for t in nonzero if not any(s != t and leq(s, t) for s in nonzero)
    )
    natoms = len(atoms)
    if natoms > ATOM_CAP:
        raise CapExceeded(f"free algebra has {natoms} atoms, cap is {ATOM_CAP}")
    if len(elems) != 1 << natoms:
        raise InternalCheckError("closure size is not a power of two")

    def mask_of(t):
        out = 0
        for j, a in enumerate(atoms):
            if leq(a, t):
                out |= 1 << j
        return out

    mask = {t: mask_of(t) for t in elems}
    if len(set(mask.values())) != len(elems):
        raise InternalCheckError("atom decomposition failed to separate elements")
    box = np.zeros(len(elems), dtype=np.int64)
    for t in elems:
        bt = tuple(int(A.box[t[c]]) for c, (A, _) in enumerate(coords))
        box[mask[t]] = mask[bt]
    alg = ModalAlgebra(natoms, box)
    gens = tuple(
        mask[tuple(alpha[i] for _, alpha in coords)] for i in range(k)
    )
    term_map = {mask[elems[i]]: terms[i] for i in range(len(elems))}
    return FreeAlgebra(alg, gens, term_map, K, k)


def ump_extension_count(free: FreeAlgebra, member, assignment) -> int:
    """How many homomorphisms extend one generator assignment; should be 1."""
    constraints = {free.generators[i]: assignment[i] for i in range(free.k)}
    if isinstance(free.algebra, HeytingAlgebra):
        return len(heyting_hom_search(free.algebra, member, constraints=constraints))
    return len(hom_search(free.algebra, member, kind="modal", constraints=constraints))


def verify_ump(free: FreeAlgebra, max_member_size: int = 4) -> list[str]:
    """Exhaustive unique-extension check over the small catalog members."""
    out = []
    for m_idx, member in enumerate(free.catalog.members):
        if member.size > max_member_size:
            continue
        for assignment in itertools.product(range(member.size), repeat=free.k):
            count = ump_extension_count(free, member, assignment)
            if count != 1:
                out.append(
                    f"member {m_idx}, assignment {assignment}: {count} extensions"
                )
    return out


def weakly_admissible_k(K: AlgebraCatalog, v: UniversalSentence, k: int) -> dict:
    """Does adding v change no identities in at most k variables?

    Restrict the catalog to members where v holds, then ask whether the
    k-generator free algebra lies in the quasivariety of the rest.  Sound
    and complete for identities in at most k variables only.
    """
    expected = "heyting" if K.kind == "heyting" else "modal"
    if v.signature != expected:
        raise InputError("sentence signature does not match the catalog")
    kept = tuple(A for A in K.members if eval_sentence(A, v)["valid"])
    restricted = AlgebraCatalog(K.kind, kept, f"{K.name}|v")
    free = free_algebra(K, k)
    res = class_membership(free.algebra, restricted, "quasivariety")
    return {
        "admissible_k": res["holds"],
        "k": k,
        "restricted_members": len(kept),
        "certificate": res["certificate"],
    }


def completeness_report_k(
    K: AlgebraCatalog,
    candidates: list[UniversalSentence],
    k: int,
    mode: str = "structural",
) -> dict:
    """Falsifier: admissible-but-invalid candidates at bound k.

    structural mode admits only single-conclusion candidates; universal
    mode any.  A violation pairs an admissible sentence with its failure
    in the catalog; for a complete class the list stays empty.
    """
    if mode not in ("structural", "universal"):
        raise InputError("mode must be 'structural' or 'universal'")
    free = free_algebra(K, k)
    memo: dict[tuple[bool, ...], bool] = {}
    violations = []
    for v in candidates:
        if mode == "structural" and len(v.conclusions) != 1:
            raise InputError("structural mode admits only single-conclusion candidates")
        per_member = tuple(
            eval_sentence(A, v)["valid"] for A in K.members
        )
        if per_member not in memo:
            kept = tuple(A for b, A in zip(per_member, K.members) if b)
            restricted = AlgebraCatalog(K.kind, kept, f"{K.name}|v")
            memo[per_member] = class_membership(
                free.algebra, restricted, "quasivariety"
            )["holds"]
        admissible = memo[per_member]
        valid = all(per_member)
        if admissible and not valid:
            res = catalog_validates(K, v)
            record = sentence_to_json(v)
            record["failing_member"] = res["failing_member"]
            record["counterexample"] = res["counterexample"]
            violations.append(record)
    return {
        "mode": mode,
        "k": k,
        "checked": len(candidates),
        "violations": violations,
    }


def sigma_free_checks(K: AlgebraCatalog, k: int, k_cap: int = 1, size_cap: int = 4) -> dict:
    """Free-algebra side of the passage to interior algebras, at bound k.

    Builds F over K and F_sigma over the extended catalog, embeds B(F)
    into F_sigma along v -> box v, and places F_sigma in the quasivariety
    of B(F).  Both certified; both k-bounded statements.
    """
    if K.kind != "heyting":
        raise InputError("sigma_free_checks expects a Heyting catalog")
    if k > k_cap:
        raise CapExceeded(f"generator bound {k} exceeds the cap {k_cap}")
    if any(A.size > size_cap for A in K.members):
        raise CapExceeded(f"members must have at most {size_cap} elements")

    free = free_algebra(K, k)
    BF, _ = boolean_extension(free.algebra)
    free_sigma = free_algebra(sigma_catalog(K), k)

    O_alg, opens = open_algebra(free_sigma.algebra)
    index = {m: i for i, m in enumerate(opens)}
    env = {
        f"x{i}": index[int(free_sigma.algebra.box[free_sigma.generators[i]])]
        for i in range(k)
    }
    table = tuple(
        eval_formula(O_alg, free.terms[e], env) for e in range(free.algebra.size)
    )
    as_hom = HeytingHom(free.algebra, O_alg, table)
    bad = as_hom.verify()
    if bad:
        raise InternalCheckError(
            f"generator map fails to be a Heyting homomorphism: {bad}"
        )
    lift = extend_hom(
        free.algebra, free_sigma.algebra, {a: opens[table[a]] for a in range(free.algebra.size)}
    )
    if lift.verify() or not lift.injective:
        raise InternalCheckError("lifted map is not an embedding")

    qres = class_membership(
        free_sigma.algebra, AlgebraCatalog("modal", (BF,), "B(F)"), "quasivariety"
    )
    return {
        "k": k,
        "k_bounded": True,
        "embedding": {"map": lift.table(), "injective": lift.injective},
        "free_sigma_in_quasivariety": qres,
    }
