"""Bounded free algebras, admissibility, and the completeness falsifier."""

import pytest

from grzlab.catalog import AlgebraCatalog
from grzlab.errors import CapExceeded, InputError
from grzlab.finlat import (
    antichain_poset,
    chain_heyting,
    chain_poset,
    downset_heyting,
    trivial_heyting,
    validate_heyting,
)
from grzlab.freealg import (
    completeness_report_k,
    free_algebra,
    sigma_free_checks,
    ump_extension_count,
    verify_ump,
    weakly_admissible_k,
)
from grzlab.modal import complex_algebra, make_standard, validate_modal
from grzlab.ulogic import parse_rule, to_text, translate


def two_chain_catalog():
    return AlgebraCatalog("heyting", (chain_heyting(2),), "classical")


def goedel_catalog():
    return AlgebraCatalog("heyting", (chain_heyting(2), chain_heyting(3)))


def test_free_over_the_two_chain():
    K = two_chain_catalog()
    assert free_algebra(K, 0).algebra.size == 2
    free = free_algebra(K, 1)
    assert free.algebra.size == 4
    assert validate_heyting(free.algebra).ok
    assert free.generators == (1,)
    assert {e: to_text(t) for e, t in free.terms.items()} == {
        0: "bot",
        1: "x0",
        2: "x0 -> bot",
        3: "top",
    }
    assert free_algebra(K, 2).algebra.size == 16


def test_free_terms_evaluate_to_their_element():
    from grzlab.ulogic import eval_formula

    free = free_algebra(goedel_catalog(), 1)
    env = {"x0": free.generators[0]}
    for e, term in free.terms.items():
        assert eval_formula(free.algebra, term, env) == e


def test_free_on_trivial_catalog():
    K = AlgebraCatalog("heyting", (trivial_heyting(),))
    assert free_algebra(K, 1).algebra.size == 1


def test_free_modal_catalog():
    K = AlgebraCatalog("modal", (complex_algebra(chain_poset(1)),))
    free = free_algebra(K, 1)
    assert free.algebra.size == 4
    assert free.algebra.box.tolist() == [0, 1, 2, 3]
    assert free.generators == (1,)
    assert verify_ump(free) == []

    grzk = AlgebraCatalog("modal", (make_standard("S2"),))
    free = free_algebra(grzk, 1)
    assert validate_modal(free.algebra).interior
    assert verify_ump(free) == []


def test_free_algebra_caps_and_errors():
    with pytest.raises(InputError):
        free_algebra(AlgebraCatalog("heyting", ()), 1)
    with pytest.raises(InputError):
        free_algebra(two_chain_catalog(), -1)
    with pytest.raises(CapExceeded):
        free_algebra(goedel_catalog(), 2, coord_cap=4)
    with pytest.raises(CapExceeded):
        free_algebra(two_chain_catalog(), 2, element_cap=10)


def test_unique_extension_property():
    K = goedel_catalog()
    for k in (0, 1):
        assert verify_ump(free_algebra(K, k)) == []
    assert verify_ump(free_algebra(two_chain_catalog(), 2)) == []


def test_ump_count_outside_the_class():
    free = free_algebra(two_chain_catalog(), 1)
    # no boolean-algebra hom lands the generator on the middle of a 3-chain
    assert ump_extension_count(free, chain_heyting(3), (1,)) == 0
    assert ump_extension_count(free, chain_heyting(2), (0,)) == 1


def test_weakly_admissible_examples():
    K = goedel_catalog()
    mp = translate(parse_rule("p, p -> q / q", "heyting"))
    res = weakly_admissible_k(K, mp, 1)
    assert res["admissible_k"] and res["restricted_members"] == 2

    # excluded middle keeps only the two-chain, which cannot separate
    # x0 from its double negation in the free algebra
    em = translate(parse_rule("/ p | ~p", "heyting"))
    res = weakly_admissible_k(K, em, 1)
    assert not res["admissible_k"] and res["restricted_members"] == 1

    absurd = translate(parse_rule("/ bot", "heyting"))
    assert not weakly_admissible_k(K, absurd, 1)["admissible_k"]

    with pytest.raises(InputError):
        weakly_admissible_k(K, translate(parse_rule("/ box p", "modal")), 1)


def test_completeness_report_clean_class():
    from grzlab.ulogic import enumerate_rules

    K = two_chain_catalog()
    candidates = [translate(r) for r in enumerate_rules("heyting", 1, 1, depth=0)]
    assert len(candidates) == 12
    rep = completeness_report_k(K, candidates, 1)
    assert rep["checked"] == 12 and rep["violations"] == []
    assert rep["mode"] == "structural" and rep["k"] == 1


def test_completeness_report_flags_underbounded_k():
    # at bound 0 the free algebra cannot see the variable, so excluded
    # middle counts as admissible and gets reported against the 3-chain
    K = goedel_catalog()
    em = translate(parse_rule("/ p | ~p", "heyting"))
    rep = completeness_report_k(K, [em], 0)
    assert len(rep["violations"]) == 1
    record = rep["violations"][0]
    assert record["failing_member"] == 1
    assert record["counterexample"] == {"p": 1}
    assert record["conclusions"] == [["p | ~p", "top"]]


def test_completeness_report_modes():
    K = two_chain_catalog()
    multi = translate(parse_rule("/ p, ~p", "heyting"))
    with pytest.raises(InputError):
        completeness_report_k(K, [multi], 1, mode="structural")
    rep = completeness_report_k(K, [multi], 1, mode="universal")
    assert rep["violations"] == []
    with pytest.raises(InputError):
        completeness_report_k(K, [], 1, mode="sound")


def test_sigma_free_checks_small():
    K = two_chain_catalog()
    for k in (0, 1):
        res = sigma_free_checks(K, k)
        assert res["k_bounded"] and res["k"] == k
        assert res["embedding"]["injective"]
        assert res["free_sigma_in_quasivariety"]["holds"]
    assert len(sigma_free_checks(K, 1)["embedding"]["map"]) == 4


def test_sigma_free_checks_caps():
    K = two_chain_catalog()
    with pytest.raises(CapExceeded):
        sigma_free_checks(K, 2)
    big = AlgebraCatalog("heyting", (downset_heyting(antichain_poset(2)), chain_heyting(5)))
    with pytest.raises(CapExceeded):
        sigma_free_checks(big, 1)
    with pytest.raises(InputError):
        sigma_free_checks(AlgebraCatalog("modal", (make_standard("S2"),)), 1)
