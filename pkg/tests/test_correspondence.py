import pytest
from hypothesis import given, strategies as st

from corpus import all_small_lattices, diamond, pentagon_like
from oracles import ascending, closure, complete_in, fixed, lub, subsets, sublattice_in
from latticefix.correspondence import (
    Correspondence,
    fixed_points_brute,
    greatest_fixed_point,
    is_ascending,
    is_v_ascending,
    least_fixed_point_infC,
    least_fixed_point_minsel,
    sup_fix_over_subset,
    theorem_hypotheses,
    theorem_id,
    values_complete,
    verify_fix_complete,
)
from latticefix.documents import lattice_to_doc
from latticefix.errors import DocumentError, EmptySubset, HypothesisViolated, NotFixedPoints
from latticefix.lab import STRATEGIES, TARGETS, GeneratorConfig, gen_correspondence, gen_lattice
from latticefix.lattice import CONCLUSION_VIOLATED, HYPOTHESES_NOT_MET, VERIFIED, chain_lattice, is_sublattice
from latticefix.rng import XorShift64Star


def diamond_map():
    return Correspondence(diamond(), {"0": ["0"], "a": ["a", "b"], "b": ["a", "b"], "1": ["1"]})


def pentagon_map():
    # the pentagon instance exactly as stated
    vals = {"0": ["0"], "a": ["0", "a", "b", "2"], "b": ["0", "a", "b", "2"], "1": ["1", "2"], "2": ["2"]}
    return Correspondence(pentagon_like(), vals)


def corrected_pentagon_map():
    vals = {"0": ["0"], "a": ["0", "a", "b", "2"], "b": ["0", "a", "b", "2"], "1": ["2"], "2": ["2"]}
    return Correspondence(pentagon_like(), vals)


def swap_map():
    return Correspondence(chain_lattice(2), {"0": ["1"], "1": ["0"]})


def identity(L):
    return Correspondence(L, {x: [x] for x in L})


def rel_of(L):
    doc = lattice_to_doc(L)
    return closure(doc["elements"], [tuple(p) for p in doc["le"]])


def random_instance(seed, target=None, size=7):
    rng = XorShift64Star(seed)
    strategy = STRATEGIES[rng.below(len(STRATEGIES))]
    target = target or TARGETS[rng.below(len(TARGETS))]
    cfg = GeneratorConfig(seed=seed, max_lattice_size=size, target_class=target, strategy=strategy)
    L = gen_lattice(cfg, rng)
    return gen_correspondence(cfg, L, rng)


# -- construction ----------------------------------------------------------


def test_missing_value_rejected():
    with pytest.raises(DocumentError, match="no value"):
        Correspondence(diamond(), {"0": ["0"]})


def test_empty_value_rejected():
    with pytest.raises(DocumentError, match="empty"):
        Correspondence(chain_lattice(2), {"0": [], "1": ["1"]})


def test_unknown_value_rejected():
    with pytest.raises(DocumentError):
        Correspondence(chain_lattice(2), {"0": ["7"], "1": ["1"]})


# -- ascending checks ------------------------------------------------------


def test_diamond_not_ascending_with_expected_witness():
    rep = is_ascending(diamond_map())
    assert not rep.holds
    assert rep.witness == ("a", "a", "a", "b")
    x, xp, y, yp = rep.witness
    assert diamond().meet(y, yp) not in diamond_map()[x]


def test_diamond_v_ascending():
    rep = is_v_ascending(diamond_map())
    assert rep.lower_v and rep.upper_v and not rep.ascending


def test_identity_and_constant_sublattice_ascending():
    L = pentagon_like()
    assert is_ascending(identity(L)).holds
    T = ["0", "a", "1"]
    assert is_sublattice(L, T).holds
    assert is_ascending(Correspondence(L, {x: T for x in L})).holds


def test_two_chain_swap_not_lower_v():
    rep = is_v_ascending(swap_map())
    assert not rep.lower_v
    x, xp, y, yp = rep.witnesses["lower_v"]
    assert (x, xp) == ("0", "1")
    assert chain_lattice(2).meet(y, yp) not in swap_map()[x]


def test_stated_pentagon_example_is_not_lower_v():
    # the quantifier at a < 1 with y = 2 in F(a) and y' = 1 in F(1) fails:
    # meet(2, 1) = 1 is not in F(a)
    F = pentagon_map()
    rep = is_v_ascending(F)
    assert not rep.ascending
    assert not rep.lower_v and rep.upper_v
    assert rep.witnesses["lower_v"] == ("a", "1", "2", "1")
    rel = rel_of(F.lattice)
    vals = {x: set(v) for x, v in F.items()}
    assert not ascending(rel, F.lattice.elements, vals, strict=True, upper=False)


def test_corrected_pentagon_is_v_ascending_not_ascending():
    F = corrected_pentagon_map()
    rep = is_v_ascending(F)
    assert rep.v_ascending and not rep.ascending


@given(st.integers(0, 2**40))
def test_ascending_checks_match_oracle(seed):
    F = random_instance(seed, size=6)
    L = F.lattice
    rel = rel_of(L)
    vals = {x: set(v) for x, v in F.items()}
    rep = is_v_ascending(F)
    assert rep.ascending == ascending(rel, L.elements, vals)
    assert rep.lower_v == ascending(rel, L.elements, vals, strict=True, upper=False)
    assert rep.upper_v == ascending(rel, L.elements, vals, strict=True, lower=False)
    if rep.ascending:
        assert rep.v_ascending


@given(st.integers(0, 2**40))
def test_ascending_witnesses_recheck(seed):
    F = random_instance(seed, target="unconstrained", size=6)
    L = F.lattice
    for key, w in is_v_ascending(F).witnesses.items():
        x, xp, y, yp = w
        assert L.le(x, xp) and y in F[x] and yp in F[xp]
        meet_bad = L.meet(y, yp) not in F[x]
        join_bad = L.join(y, yp) not in F[xp]
        if key == "lower_v":
            assert x != xp and meet_bad
        elif key == "upper_v":
            assert x != xp and join_bad
        else:
            assert meet_bad or join_bad


# -- fixed points ----------------------------------------------------------


def test_diamond_fix():
    fix = fixed_points_brute(diamond_map())
    assert fix.members.ordered() == ("0", "a", "b", "1")
    assert (fix.least, fix.greatest, fix.is_complete_lattice) == ("0", "1", True)


def test_pentagon_fix_is_everything():
    fix = fixed_points_brute(pentagon_map())
    assert set(fix.members) == {"0", "a", "b", "1", "2"}
    assert fix.is_complete_lattice
    assert (fix.least, fix.greatest) == ("0", "2")


def test_swap_has_no_fixed_points():
    fix = fixed_points_brute(swap_map())
    assert len(fix.members) == 0
    assert fix.least is None and fix.greatest is None and not fix.is_complete_lattice


def test_least_fixed_point_diamond():
    F = diamond_map()
    assert least_fixed_point_infC(F) == "0"
    assert greatest_fixed_point(F, "infC") == "1"


def test_minsel_diamond_raises():
    with pytest.raises(HypothesisViolated) as exc:
        least_fixed_point_minsel(diamond_map())
    assert exc.value.witness == ("a",)
    assert "least" in exc.value.detail


def test_identity_extremes():
    for L in all_small_lattices()[0]:
        F = identity(L)
        assert least_fixed_point_infC(F) == least_fixed_point_minsel(F) == L.bottom
        assert greatest_fixed_point(F, "infC") == greatest_fixed_point(F, "minsel") == L.top


def test_stated_pentagon_procedures():
    F = pentagon_map()
    # with the hypothesis check the procedures refuse, since lower V fails
    with pytest.raises(HypothesisViolated) as exc:
        least_fixed_point_infC(F)
    assert exc.value.witness == ("a", "1", "2", "1")
    with pytest.raises(HypothesisViolated):
        least_fixed_point_minsel(F)
    # the scans themselves still give the brute-force extremes
    L = F.lattice
    assert [L.least(F[x]) for x in L] == ["0", "0", "0", "1", "2"]
    assert least_fixed_point_infC(F, check=False) == "0"
    assert least_fixed_point_minsel(F, check=False) == "0"
    assert greatest_fixed_point(F, "minsel") == "2"


def test_corrected_pentagon_procedures():
    F = corrected_pentagon_map()
    assert least_fixed_point_infC(F) == least_fixed_point_minsel(F) == "0"
    assert greatest_fixed_point(F, "infC") == greatest_fixed_point(F, "minsel") == "2"


def test_fix_need_not_be_sublattice():
    F = corrected_pentagon_map()
    fix = fixed_points_brute(F)
    assert set(fix.members) == {"0", "a", "b", "2"}
    assert not is_sublattice(F.lattice, fix.members).holds
    assert fix.is_complete_lattice
    assert verify_fix_complete(F, "thm_cpltval").status == VERIFIED
    # inside Fix the join of a and b is 2, while the ambient join is 1
    assert sup_fix_over_subset(F, {"a", "b"}) == "2"
    assert F.lattice.join("a", "b") == "1"


def test_greatest_requires_upper_v():
    F = Correspondence(chain_lattice(2), {"0": ["0", "1"], "1": ["0"]})
    assert not is_v_ascending(F).upper_v
    with pytest.raises(HypothesisViolated):
        greatest_fixed_point(F)


def test_unknown_greatest_method():
    with pytest.raises(ValueError):
        greatest_fixed_point(diamond_map(), "nope")


@given(st.integers(0, 2**40), st.sampled_from(["ascending", "v_ascending"]))
def test_constructive_routes_match_brute_force(seed, target):
    F = random_instance(seed, target=target)
    fix = fixed_points_brute(F)
    rel = rel_of(F.lattice)
    assert set(fix.members) == fixed({x: set(v) for x, v in F.items()})
    assert least_fixed_point_infC(F) == fix.least
    assert greatest_fixed_point(F, "infC") == fix.greatest
    if all(v is not None for v in F.least_elements.values()):
        assert least_fixed_point_minsel(F) == fix.least
    if all(v is not None for v in F.greatest_elements.values()):
        assert greatest_fixed_point(F, "minsel") == fix.greatest
    assert fix.is_complete_lattice == complete_in(rel, fix.members)


# -- theorems --------------------------------------------------------------


def test_theorem_ids():
    assert theorem_id("myzhou") == "thm_myZhou"
    assert theorem_id("fact-zhou") == "fact_zhou"
    with pytest.raises(ValueError):
        theorem_id("zorn")


def test_diamond_theorems():
    F = diamond_map()
    rep = verify_fix_complete(F, "thm_myZhou")
    assert rep.status == VERIFIED
    assert rep.detail == "hypotheses hold; Fix = {0,a,b,1}; complete lattice"
    rep = verify_fix_complete(F, "fact_zhou")
    assert rep.status == HYPOTHESES_NOT_MET
    assert "F(a) not a sublattice" in rep.detail
    assert verify_fix_complete(F, "thm_cpltval").status == HYPOTHESES_NOT_MET


def test_stated_pentagon_theorem_cpltval():
    F = pentagon_map()
    assert values_complete(F).holds
    rep = verify_fix_complete(F, "thm_cpltval")
    assert rep.status == HYPOTHESES_NOT_MET
    assert rep.witness == ("a", "1", "2", "1")


def test_corrected_pentagon_theorems():
    F = corrected_pentagon_map()
    assert verify_fix_complete(F, "thm_cpltval").status == VERIFIED
    assert verify_fix_complete(F, "thm_myZhou").status == VERIFIED
    assert verify_fix_complete(F, "fact_zhou").status == HYPOTHESES_NOT_MET


def test_swap_fails_hypotheses():
    for t in ("fact_zhou", "thm_myZhou", "thm_cpltval"):
        assert verify_fix_complete(swap_map(), t).status == HYPOTHESES_NOT_MET


@given(st.integers(0, 2**40))
def test_hypothesis_nesting(seed):
    F = random_instance(seed)
    fact = theorem_hypotheses(F, "fact_zhou").holds
    my = theorem_hypotheses(F, "thm_myZhou").holds
    cv = theorem_hypotheses(F, "thm_cpltval").holds
    if fact:
        assert my and cv
    if cv:
        assert my


@given(st.integers(0, 2**40))
def test_conclusions_hold_with_independent_check(seed):
    F = random_instance(seed, target="v_ascending")
    rel = rel_of(F.lattice)
    vals = {x: set(v) for x, v in F.items()}
    for t in ("fact_zhou", "thm_myZhou", "thm_cpltval"):
        rep = verify_fix_complete(F, t)
        assert rep.status != CONCLUSION_VIOLATED
        if rep.status == VERIFIED:
            assert complete_in(rel, fixed(vals))
    if theorem_hypotheses(F, "fact_zhou").holds:
        assert all(sublattice_in(rel, F.lattice.elements, v) for v in vals.values())


# -- sup over fixed subsets ------------------------------------------------


def test_sup_fix_diamond():
    assert sup_fix_over_subset(diamond_map(), {"a", "b"}) == "1"
    assert sup_fix_over_subset(diamond_map(), {"a"}) == "a"


def test_sup_fix_stated_pentagon():
    F = pentagon_map()
    rel = rel_of(F.lattice)
    # the brute-force least upper bound inside Fix is 1 ...
    assert lub(rel, F.fixed(), ("a", "b")) == "1"
    # ... but the procedure is gated on hypotheses that fail here
    with pytest.raises(HypothesisViolated):
        sup_fix_over_subset(F, {"a", "b"}, "complete_values")


def test_sup_fix_errors():
    with pytest.raises(NotFixedPoints):
        sup_fix_over_subset(corrected_pentagon_map(), {"1"})
    with pytest.raises(EmptySubset):
        sup_fix_over_subset(diamond_map(), [])
    with pytest.raises(ValueError):
        sup_fix_over_subset(diamond_map(), {"a"}, "magic")


def test_sup_fix_restriction_path_both_variants():
    F = corrected_pentagon_map()
    for variant in ("chain_subcomplete", "complete_values"):
        assert sup_fix_over_subset(F, {"a", "b"}, variant) == "2"
        assert sup_fix_over_subset(F, {"0", "a"}, variant) == "a"


@given(st.integers(0, 2**40))
def test_sup_fix_matches_within_fix_bound(seed):
    F = random_instance(seed, target="v_ascending", size=6)
    fix = F.fixed()
    rel = rel_of(F.lattice)
    variants = ["chain_subcomplete"]
    if values_complete(F).holds:
        variants.append("complete_values")
    for U in subsets(fix):
        if len(U) > 3:
            break
        expected = lub(rel, fix, U)
        for v in variants:
            assert sup_fix_over_subset(F, U, v) == expected
