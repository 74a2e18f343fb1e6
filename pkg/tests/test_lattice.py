from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from corpus import all_small_lattices, diamond, pentagon_like
from laws import law_violations, oracle_relation, random_lattices
from oracles import glb, lub, subsets
from latticefix.errors import (
    AntisymmetryViolation,
    DuplicateElement,
    EmptySubset,
    ForeignSubset,
    NotALattice,
    UnknownElement,
    XNotInIntersection,
)
from latticefix.lab import GeneratorConfig, gen_lattice
from latticefix.lattice import (
    CONCLUSION_VIOLATED,
    HYPOTHESES_NOT_MET,
    VERIFIED,
    as_lattice,
    build_lattice,
    build_poset,
    chain_lattice,
    inf_subset,
    is_chain_subcomplete,
    is_join_complete,
    is_subcomplete,
    is_sublattice,
    iter_chains,
    sup_subset,
    veinott_check,
    verify_lemma_jointmin,
)
from latticefix.rng import XorShift64Star


# -- construction ----------------------------------------------------------


def test_diamond_poset():
    P = build_poset(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
    assert P.le("0", "1") and P.le("a", "1")
    assert not P.comparable("a", "b")


def test_singleton_poset():
    P = build_poset(["x"], [])
    assert P.relation() == {("x", "x")}


def test_cycle_rejected():
    with pytest.raises(AntisymmetryViolation) as exc:
        build_poset(["p", "q"], [("p", "q"), ("q", "p")])
    assert "p" in str(exc.value) and "q" in str(exc.value)


def test_longer_cycle_rejected():
    with pytest.raises(AntisymmetryViolation):
        build_poset(["p", "q", "r"], [("p", "q"), ("q", "r"), ("r", "p")])


def test_duplicate_and_unknown():
    with pytest.raises(DuplicateElement):
        build_poset(["a", "a"], [])
    with pytest.raises(UnknownElement, match="z"):
        build_poset(["a"], [("a", "z")])


def test_closure_is_transitive():
    P = build_poset(list("abcd"), [("a", "b"), ("b", "c"), ("c", "d")])
    assert P.le("a", "d")
    assert P.covers() == [("a", "b"), ("b", "c"), ("c", "d")]


def test_diamond_lattice():
    L = diamond()
    assert L.meet("a", "b") == "0" and L.join("a", "b") == "1"
    assert (L.bottom, L.top) == ("0", "1")


def test_pentagon_like_lattice():
    L = pentagon_like()
    assert L.join("a", "b") == "1"
    assert L.top == "2"


def test_antichain_not_lattice():
    with pytest.raises(NotALattice) as exc:
        as_lattice(build_poset(["x", "y"], []))
    assert {exc.value.x, exc.value.y} == {"x", "y"}


def test_not_lattice_missing_join():
    # two maximal elements over a common bottom
    with pytest.raises(NotALattice) as exc:
        build_lattice(["0", "a", "b"], [("0", "a"), ("0", "b")])
    assert exc.value.bound == "join"


def test_two_upper_bounds_without_least():
    P = build_poset(list("abcd"), [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
    with pytest.raises(NotALattice):
        as_lattice(P)


# -- sup / inf -------------------------------------------------------------


def test_sup_inf_examples():
    L = diamond()
    assert sup_subset(L, {"a", "b"}) == "1"
    assert inf_subset(L, {"a", "b"}) == "0"
    P = pentagon_like()
    assert sup_subset(P, {"a", "b", "2"}) == "2"
    assert inf_subset(P, {"a", "b", "2"}) == "0"


def test_empty_conventions():
    L = diamond()
    assert sup_subset(L, []) == L.bottom
    assert inf_subset(L, []) == L.top


def test_foreign_subset():
    with pytest.raises(ForeignSubset):
        sup_subset(diamond(), {"a", "zz"})


@pytest.mark.parametrize("L", all_small_lattices()[0] + (pentagon_like(),), ids=repr)
def test_singleton_bounds(L):
    for x in L:
        assert sup_subset(L, {x}) == inf_subset(L, {x}) == x


def test_corpus_counts():
    _, counts = all_small_lattices()
    assert counts == {1: 1, 2: 1, 3: 1, 4: 2, 5: 5, 6: 15}


@pytest.mark.parametrize("L", all_small_lattices()[0], ids=repr)
def test_laws_on_all_small_lattices(L):
    assert law_violations(L) == []


def test_laws_on_random_lattices():
    for L in random_lattices(40):
        assert law_violations(L) == [], L


# -- subset checkers -------------------------------------------------------


def test_sublattice_examples():
    P = pentagon_like()
    rep = is_sublattice(P, {"0", "a", "b", "2"})
    assert not rep.holds and set(rep.witness) == {"a", "b"}
    assert is_sublattice(P, P.elements).holds
    rep = is_sublattice(diamond(), {"0", "a", "b"})
    assert not rep.holds and set(rep.witness) == {"a", "b"}


def test_sublattice_empty():
    with pytest.raises(EmptySubset):
        is_sublattice(diamond(), [])


def test_subcomplete_examples():
    assert not is_subcomplete(pentagon_like(), {"0", "a", "b", "2"}).holds
    assert is_subcomplete(diamond(), {"0", "a", "1"}).holds
    L = chain_lattice(5)
    assert is_subcomplete(L, {"0", "2", "3"}).holds


def _subcomplete_oracle(L, T):
    rel = oracle_relation(L)
    T = set(T)
    return all(lub(rel, L.elements, A) in T and glb(rel, L.elements, A) in T for A in subsets(T))


@pytest.mark.parametrize("L", [L for L in all_small_lattices()[0] if len(L) >= 4], ids=repr)
def test_subcomplete_matches_exhaustive_oracle(L):
    for T in subsets(L.elements):
        rep = is_subcomplete(L, T)
        assert rep.holds == _subcomplete_oracle(L, T)
        if not rep.holds:
            x, y = rep.witness
            assert L.meet(x, y) not in T or L.join(x, y) not in T


def test_chain_subcomplete_examples():
    assert is_chain_subcomplete(pentagon_like(), {"0", "a", "b", "2"}).holds
    assert is_chain_subcomplete(diamond(), {"a"}).holds
    assert is_chain_subcomplete(diamond(), {"a", "b"}).holds


def test_chains_of_antichain_are_singletons():
    assert sorted(iter_chains(diamond(), {"a", "b"})) == [("a",), ("b",)]


def test_chain_enumeration_counts():
    # a 4-chain has 2**4 - 1 nonempty subchains
    L = chain_lattice(4)
    chains = list(iter_chains(L, L.elements))
    assert len(chains) == 15 and len(set(chains)) == 15


@pytest.mark.parametrize("L", all_small_lattices()[0], ids=repr)
def test_chain_subcomplete_always_on_finite(L):
    for T in subsets(L.elements):
        for d in ("up", "down", "both"):
            assert is_chain_subcomplete(L, T, d).holds
        if is_subcomplete(L, T).holds:
            assert is_chain_subcomplete(L, T).holds


def test_chain_subcomplete_strict_converse():
    T = {"0", "a", "b", "2"}
    assert is_chain_subcomplete(pentagon_like(), T).holds
    assert not is_subcomplete(pentagon_like(), T).holds


def test_chain_subcomplete_bad_direction():
    with pytest.raises(ValueError):
        is_chain_subcomplete(diamond(), {"a"}, "sideways")


# -- join completeness and the lemma layer ---------------------------------


def test_join_complete_examples():
    assert is_join_complete(diamond().poset).holds
    rep = is_join_complete(build_poset(["x", "y"], []))
    assert not rep.holds and set(rep.witness) == {"x", "y"}
    rep = is_join_complete(build_poset(["0", "a", "b"], [("0", "a"), ("0", "b")]))
    assert not rep.holds and set(rep.witness) == {"a", "b"}


def test_jointmin_examples():
    assert verify_lemma_jointmin(diamond().poset).status == VERIFIED
    assert verify_lemma_jointmin(build_poset(["x"], [])).status == VERIFIED
    rep = verify_lemma_jointmin(build_poset(["x", "y"], []))
    assert rep.status == HYPOTHESES_NOT_MET and "hypotheses not met" in rep.detail


def test_jointmin_join_complete_without_least():
    # x, y below a common top: joins exist, but no least element
    rep = verify_lemma_jointmin(build_poset(["x", "y", "t"], [("x", "t"), ("y", "t")]))
    assert rep.status == HYPOTHESES_NOT_MET
    assert set(rep.witness) == {"x", "y"}


def _random_poset(rng, n):
    names = [f"e{i}" for i in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = [(names[perm[i]], names[perm[j]]) for i in range(n) for j in range(i + 1, n) if rng.chance(1, 3)]
    return build_poset(names, pairs)


def test_jointmin_never_violated_on_random_posets():
    rng = XorShift64Star(5)
    seen = set()
    for _ in range(300):
        P = _random_poset(rng, rng.randint(1, 7))
        rep = verify_lemma_jointmin(P)
        seen.add(rep.status)
        assert rep.status != CONCLUSION_VIOLATED
        rel = P.relation()
        jc = all(lub(rel, P.elements, A) is not None for A in subsets(P.elements))
        assert is_join_complete(P).holds == jc
    assert VERIFIED in seen and HYPOTHESES_NOT_MET in seen


def test_veinott_examples():
    rep = veinott_check(diamond(), {"0", "a"}, {"0", "a", "1"}, "a", "down")
    assert rep.status == VERIFIED and "0" in rep.detail
    rep = veinott_check(diamond(), {"a"}, {"a", "1"}, "a", "down")
    assert rep.status == VERIFIED
    rep = veinott_check(pentagon_like(), {"a", "b"}, {"0", "a", "b"}, "a", "down")
    assert rep.status == VERIFIED


def test_veinott_requires_x_in_both():
    with pytest.raises(XNotInIntersection):
        veinott_check(diamond(), {"a"}, {"b"}, "a")


def test_veinott_hypothesis_failure_reported():
    rep = veinott_check(diamond(), {"a", "b"}, {"a", "b"}, "a", "down")
    assert rep.status == HYPOTHESES_NOT_MET


@given(st.integers(0, 2**32), st.sampled_from(["up", "down"]))
def test_veinott_never_violated(seed, direction):
    rng = XorShift64Star(seed)
    L = gen_lattice(GeneratorConfig(seed=seed, max_lattice_size=6))
    E = list(L.elements)
    A = set(rng.sample(E, rng.randint(1, len(E))))
    B = set(rng.sample(E, rng.randint(1, len(E))))
    x = rng.choice(E)
    A.add(x)
    B.add(x)
    rep = veinott_check(L, A, B, x, direction)
    assert rep.status != CONCLUSION_VIOLATED
    if rep.status == VERIFIED:
        bound = L.inf(A) if direction == "down" else L.sup(A)
        assert bound in B


def test_witness_pairs_recheck():
    for L in random_lattices(20, seed=99):
        for T in combinations(L.elements, 3):
            rep = is_sublattice(L, T)
            if not rep.holds:
                x, y = rep.witness
                assert L.meet(x, y) not in T or L.join(x, y) not in T
