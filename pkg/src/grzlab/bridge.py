"""The passage between Heyting algebras and interior algebras.

One direction reads off the opens (O); the other builds the powerset of
the join-irreducible poset (B) with the canonical embedding onto its
opens.  On top of those: the unique-extension property for homomorphisms
into opens, the two staged algorithms that repair a Boolean subalgebra
into one generated by opens, the finite reconstruction M ≅ BO(M) for
Grzegorczyk algebras, and membership tests for the finitely generated
classes all of this runs over.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .catalog import AlgebraCatalog
from .errors import CapExceeded, InputError, InternalCheckError
from .finlat import (
    HeytingAlgebra,
    HeytingHom,
    heyting_hom_search,
    join_irreducibles,
    join_irreducible_poset,
)
from .modal import (
    ATOM_CAP,
    BooleanSubalgebra,
    Homomorphism,
    ModalAlgebra,
    complex_algebra,
    generated_subalgebra,
    hom_search,
    require_grz,
    require_interior,
)


def open_algebra(M: ModalAlgebra) -> tuple[HeytingAlgebra, tuple[int, ...]]:
    """The Heyting algebra of open elements, with the mask correspondence.

    Element i of the result is opens[i].  Meets and joins restrict (opens
    are closed under both); implication is box(¬a ∨ b).
    """
    require_interior(M)
    opens = M.open_elements()
    index = {m: i for i, m in enumerate(opens)}
    n = len(opens)
    meet = np.zeros((n, n), dtype=np.int32)
    join = np.zeros((n, n), dtype=np.int32)
    imp = np.zeros((n, n), dtype=np.int32)
    for i, a in enumerate(opens):
        for j, b in enumerate(opens):
            meet[i, j] = index[a & b]
            join[i, j] = index[a | b]
            imp[i, j] = index[int(M.box[(M.top ^ a) | b])]
    return HeytingAlgebra(n, meet, join, imp, 0, n - 1), tuple(opens)


def boolean_extension(H: HeytingAlgebra) -> tuple[ModalAlgebra, dict[int, int]]:
    """The interior algebra generated by H as its opens, with the embedding.

    Concretely the complex algebra of the join-irreducible poset; the
    embedding sends a to the set of join-irreducibles below it and its
    image is exactly the opens.
    """
    poset = join_irreducible_poset(H)
    if poset.size > ATOM_CAP:
        raise CapExceeded(
            f"{poset.size} join-irreducibles exceed the atom cap of {ATOM_CAP}"
        )
    B = complex_algebra(poset)
    irr = join_irreducibles(H)
    leq = H.leq
    emb = {}
    for a in range(H.size):
        mask = 0
        for j, x in enumerate(irr):
            if leq[x, a]:
                mask |= 1 << j
        emb[a] = mask
    return B, emb


def extend_hom(H: HeytingAlgebra, M: ModalAlgebra, f) -> Homomorphism:
    """The unique box-preserving extension of f through the opens embedding.

    f maps H elements to open masks of M and must be a Heyting
    homomorphism into the opens; the result extends it from B(H) to M.
    Uniqueness is established by exhaustive search, not assumed.
    """
    O_alg, opens = open_algebra(M)
    index = {m: i for i, m in enumerate(opens)}
    values = {a: f[a] for a in range(H.size)}
    if any(v not in index for v in values.values()):
        raise InputError("map sends some element to a non-open mask")
    as_hom = HeytingHom(H, O_alg, tuple(index[values[a]] for a in range(H.size)))
    problems = as_hom.verify()
    if problems:
        raise InputError(f"not a Heyting homomorphism into the opens: {problems}")
    B, emb = boolean_extension(H)
    constraints = {emb[a]: values[a] for a in range(H.size)}
    homs = hom_search(B, M, kind="modal", constraints=constraints, mode="any")
    if len(homs) != 1:
        raise InternalCheckError(
            f"expected exactly one extension, search found {len(homs)}"
        )
    return homs[0]


# ---------------------------------------------------------------------------
# The staged repair of a Boolean subalgebra toward the opens


@dataclass
class ExtensionTrace:
    """Everything one elimination step computed, for auditing.

    p replaces the non-open generator g.  The tables are indexed by the
    elements c of the base subalgebra C.
    """

    g: int
    p_star: int
    p_upper: int
    p_c: dict[int, int]
    p_prime_c: dict[int, int]
    u_c: dict[int, int]
    p: int
    opens_used: tuple[int, ...]

    def check(self, M: ModalAlgebra) -> list[str]:
        """Violations of the step invariants; empty when the step is sound."""
        out = []
        top = M.top
        if self.p_star & self.p != self.p_star or self.p & self.p_upper != self.p:
            out.append("p outside [p_star, p_upper]")
        for c, v in self.p_c.items():
            if v & self.g != v:
                out.append(f"p_c at c={c} not below g")
            if int(M.box[v | c]) != int(M.box[self.g | c]):
                out.append(f"(P) fails at c={c}")
        for c, v in self.p_prime_c.items():
            if v & self.g != v:
                out.append(f"p_prime_c at c={c} not below g")
            if int(M.box[(top ^ v) | c]) != int(M.box[(top ^ self.g) | c]):
                out.append(f"(P') fails at c={c}")
        for x in self.opens_used:
            if not M.is_open(x):
                out.append(f"opens_used contains the non-open {x}")
        return out


def box_hom_extension(
    M: ModalAlgebra, C: BooleanSubalgebra, g: int
) -> tuple[Homomorphism, BooleanSubalgebra, ExtensionTrace]:
    """Replace the generator g over C by an element of the open closure.

    Requires the Grzegorczyk inequality and that adjoining g to C adds no
    open elements.  Returns the Boolean homomorphism on B = ⟨C, g⟩ that
    fixes C and sends g to the computed p, the subalgebra D = ⟨C, opens
    used⟩ containing its image, and the audited trace.
    """
    require_grz(M)
    if C.algebra is not M:
        raise InputError("subalgebra belongs to a different algebra")
    if not 0 <= g <= M.top:
        raise InputError(f"element {g} outside the carrier")
    B = generated_subalgebra(M, list(C.blocks) + [g], "boolean")
    if C.open_members() != B.open_members():
        raise InputError("adjoining g changes the open elements of the subalgebra")

    top = M.top
    celems = C.elements
    p_star = 0
    p_upper = top
    for c in celems:
        if c & g == c:
            p_star |= c
        if g & c == g:
            p_upper &= c
    p_c = {}
    u_c = {}
    p_prime_c = {}
    opens_used = set()
    for c in celems:
        bgc = int(M.box[g | c])
        p_c[c] = bgc & (top ^ c)
        u = (top ^ g) | c
        u_c[c] = u
        bu = int(M.box[u])
        bstep = int(M.box[(top ^ u) | bu])
        p_prime_c[c] = bstep & (top ^ bu)
        opens_used.update((bgc, bu, bstep))
    p = p_star
    for c in celems:
        p |= p_c[c] | p_prime_c[c]

    trace = ExtensionTrace(
        g, p_star, p_upper, p_c, p_prime_c, u_c, p, tuple(sorted(opens_used))
    )
    problems = trace.check(M)
    if problems:
        raise InternalCheckError(f"extension step invariants failed: {problems}")

    values = {}
    for e in B.elements:
        out = 0
        for blk in C.blocks:
            a = blk & g
            b = blk & (top ^ g)
            if a and a & e == a:
                out |= blk & p
            if b and b & e == b:
                out |= blk & (top ^ p)
        values[e] = out
    hom = Homomorphism(M, M, "box_partial", values, B)
    bad = hom.verify()
    if bad:
        raise InternalCheckError(f"extension map fails the checker: {bad}")
    D = generated_subalgebra(M, list(C.blocks) + sorted(opens_used), "boolean")
    if any(not D.contains(v) for v in values.values()):
        raise InternalCheckError("extension image escapes the target subalgebra")
    return hom, D, trace


def box_hom_to_BO(M: ModalAlgebra, A: BooleanSubalgebra) -> Homomorphism:
    """Map A into the modal subalgebra generated by the opens, fixing opens.

    Eliminates the non-open generators of A one step at a time, most
    recently chosen first, composing the steps.
    """
    require_grz(M)
    if A.algebra is not M:
        raise InputError("subalgebra belongs to a different algebra")
    opens_A = A.open_members()
    gens: list[int] = []
    while True:
        span = generated_subalgebra(M, opens_A + gens, "boolean")
        missing = [e for e in A.elements if not span.contains(e)]
        if not missing:
            break
        gens.append(missing[0])

    f_total = Homomorphism(M, M, "box_partial", {e: e for e in A.elements}, A)
    current = A
    remaining = list(gens)
    while remaining:
        g = remaining.pop()
        opens_cur = current.open_members()
        C = generated_subalgebra(M, opens_cur + remaining, "boolean")
        step, D, _ = box_hom_extension(M, C, g)
        if set(step.domain.elements) != set(current.elements):
            raise InternalCheckError("elimination step lost track of its domain")
        f_total = Homomorphism(
            M, M, "box_partial",
            {a: step.values[v] for a, v in f_total.values.items()}, A,
        )
        current = D

    open_span = generated_subalgebra(M, M.open_elements(), "modal")
    if any(not open_span.contains(v) for v in f_total.values.values()):
        raise InternalCheckError("result does not land in the open-generated part")
    if any(f_total.values[e] != e for e in opens_A):
        raise InternalCheckError("result moves an open element")
    bad = f_total.verify()
    if bad:
        raise InternalCheckError(f"composite fails the checker: {bad}")
    return f_total


# ---------------------------------------------------------------------------
# Finite reconstruction and class membership


def finite_blok_check(M: ModalAlgebra) -> tuple[Homomorphism, list[int]]:
    """An isomorphism M ≅ BO(M) plus a maximal chain of open elements.

    Only Grzegorczyk algebras qualify; for them both witnesses must exist,
    so failure to find either is reported as an internal error.
    """
    require_grz(M)
    O_alg, _ = open_algebra(M)
    B, _ = boolean_extension(O_alg)
    if B.atoms != M.atoms:
        raise InternalCheckError(
            f"BO(M) has {B.atoms} atoms where M has {M.atoms}"
        )
    isos = hom_search(M, B, kind="modal", mode="iso")
    if not isos:
        raise InternalCheckError("no isomorphism between M and BO(M) found")

    chain = [0]
    u = 0
    while u != M.top:
        for i in range(M.atoms):
            cand = u | (1 << i)
            if cand != u and M.is_open(cand):
                u = cand
                chain.append(u)
                break
        else:
            raise InternalCheckError("no maximal all-open chain exists")
    return isos[0], chain


def sigma_catalog(K: AlgebraCatalog) -> AlgebraCatalog:
    """Member-wise boolean extension of a Heyting catalog."""
    if K.kind != "heyting":
        raise InputError("sigma expects a Heyting catalog")
    members = tuple(boolean_extension(H)[0] for H in K.members)
    return AlgebraCatalog("modal", members, f"sigma({K.name})")


def rho_catalog(Y: AlgebraCatalog) -> AlgebraCatalog:
    """Member-wise open algebra of an interior catalog."""
    if Y.kind != "modal":
        raise InputError("rho expects a modal catalog")
    members = tuple(open_algebra(M)[0] for M in Y.members)
    return AlgebraCatalog("heyting", members, f"rho({Y.name})")


def class_membership(F, K: AlgebraCatalog, mode: str) -> dict:
    """Membership of F in the class the catalog generates, with certificate.

    With finitely many finite members, ultraproducts are isomorphic to
    members, so the universal class is closed-under-substructure of the
    members, the quasivariety is separation by homomorphisms into members,
    and the variety is tested through the bounded free algebra.
    """
    if mode not in ("universal", "quasivariety", "variety"):
        raise InputError("mode must be universal, quasivariety, or variety")
    heyting = isinstance(F, HeytingAlgebra)
    if heyting != (K.kind == "heyting"):
        raise InputError("algebra and catalog kinds differ")

    if mode == "universal":
        for i, A in enumerate(K.members):
            found = _injections(F, A)
            if found:
                return {
                    "holds": True,
                    "mode": mode,
                    "certificate": {"member": i, "map": found[0]},
                }
        return {"holds": False, "mode": mode, "certificate": None}

    if mode == "quasivariety":
        all_homs: list[tuple[int, list[int]]] = []
        for i, A in enumerate(K.members):
            for table in _homs(F, A):
                all_homs.append((i, table))
        witnesses = []
        for a in range(F.size):
            for b in range(a + 1, F.size):
                hit = next(
                    (
                        (i, table)
                        for i, table in all_homs
                        if table[a] != table[b]
                    ),
                    None,
                )
                if hit is None:
                    return {
                        "holds": False,
                        "mode": mode,
                        "certificate": {"unseparated_pair": [a, b]},
                    }
                witnesses.append(
                    {"pair": [a, b], "member": hit[0], "map": hit[1]}
                )
        return {"holds": True, "mode": mode, "certificate": witnesses}

    # variety mode: F must be a quotient of the free algebra on |F| generators
    warnings.warn(
        "variety membership builds a free algebra on as many generators "
        "as F has elements; this grows very fast",
        RuntimeWarning,
        stacklevel=2,
    )
    from .freealg import free_algebra
    from .ulogic import eval_formula

    free = free_algebra(K, F.size)
    env = {f"x{i}": i for i in range(F.size)}
    if heyting:
        table = [
            eval_formula(F, free.terms[e], env) for e in range(free.algebra.size)
        ]
        hom_ok = not HeytingHom(free.algebra, F, tuple(table)).verify()
        surj = len(set(table)) == F.size
    else:
        values = {
            e: eval_formula(F, free.terms[e], env)
            for e in range(free.algebra.size)
        }
        hom = Homomorphism(free.algebra, F, "modal", values)
        hom_ok = not hom.verify()
        surj = hom.surjective
        table = [values[e] for e in range(free.algebra.size)]
    holds = hom_ok and surj
    cert = {"generators": list(range(F.size)), "map": table} if holds else None
    return {"holds": holds, "mode": mode, "certificate": cert}


def _injections(F, A) -> list[list[int]]:
    if isinstance(F, HeytingAlgebra):
        homs = heyting_hom_search(F, A, mode="injective")
        return [list(h.table) for h in homs[:1]]
    homs = hom_search(F, A, kind="modal", mode="injective")
    return [h.table() for h in homs[:1]]


def _homs(F, A) -> list[list[int]]:
    if isinstance(F, HeytingAlgebra):
        return [list(h.table) for h in heyting_hom_search(F, A)]
    return [h.table() for h in hom_search(F, A, kind="modal")]


def blok_esakia_catalog_check(K: AlgebraCatalog, M: ModalAlgebra) -> dict:
    """Three routes to 'M belongs to the image class of K'; they must agree.

    Membership of M in the universal class of the extended catalog, of the
    opens of M in the class of K, and a direct embedding of M into some
    B(H) assembled from the finite reconstruction.  Disagreement would
    refute the correspondence at this scale and raises.
    """
    require_grz(M)
    if K.kind != "heyting":
        raise InputError("the catalog side must be Heyting algebras")
    t1 = class_membership(M, sigma_catalog(K), "universal")

    O_alg, _ = open_algebra(M)
    t2 = class_membership(O_alg, K, "universal")

    t3: dict = {"holds": False, "certificate": None}
    for i, H in enumerate(K.members):
        embeds = heyting_hom_search(O_alg, H, mode="injective")
        if not embeds:
            continue
        f0 = embeds[0]
        BH, embH = boolean_extension(H)
        lift = extend_hom(O_alg, BH, {a: embH[f0(a)] for a in range(O_alg.size)})
        m_iso, _ = finite_blok_check(M)
        total = Homomorphism(
            M, BH, "modal",
            {a: lift.values[v] for a, v in m_iso.values.items()},
        )
        if total.verify() or not total.injective:
            raise InternalCheckError("assembled embedding fails its checks")
        t3 = {"holds": True, "certificate": {"member": i, "map": total.table()}}
        break

    answers = (t1["holds"], t2["holds"], t3["holds"])
    if len(set(answers)) != 1:
        raise InternalCheckError(
            f"the three membership routes disagree: {answers}"
        )
    return {
        "holds": t1["holds"],
        "tests": {
            "in_extended_universal": t1,
            "opens_in_universal": t2,
            "embeds_into_extension": t3,
        },
    }
