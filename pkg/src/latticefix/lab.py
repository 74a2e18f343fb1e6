"""Seeded instance generation and theorem fuzzing.

Every trial draws from its own stream seeded with
``trial_seed(master_seed, trial_index)``, so reports do not depend on
execution order and parallel runs reproduce serial ones exactly.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations, product

from .correspondence import (
    THEOREMS,
    Correspondence,
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
from .documents import correspondence_to_doc
from .errors import GenerationExhausted, LatticeFixError
from .game import (
    affine_transform,
    aggregate_argmax,
    check_increasing_differences,
    check_supermodular,
    game_to_doc,
    nash_brute,
    nash_via_fixpoint,
    topkis_box_game,
    verify_nash_lattice,
)
from .lattice import (
    HYPOTHESES_NOT_MET,
    VERIFIED,
    FiniteLattice,
    build_lattice,
    chain_lattice,
    induced_completeness,
    induced_sup,
)
from .rng import DEFAULT_SEED, XorShift64Star, trial_seed

STRATEGIES = ("chain_product_closure", "random_poset_downsets", "macneille", "mixed")
TARGETS = ("ascending", "v_ascending", "unconstrained")
REJECTION_CAP = 1000
ORACLE_FIX_CAP = 8
WALK_STEPS = 12


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = DEFAULT_SEED
    max_lattice_size: int = 8
    max_value_size: int | None = None
    target_class: str = "v_ascending"
    strategy: str = "chain_product_closure"

    def __post_init__(self):
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.max_lattice_size < 1:
            raise ValueError("max_lattice_size must be at least 1")
        if self.max_value_size is not None and self.max_value_size < 1:
            raise ValueError("max_value_size must be at least 1")
        if self.target_class not in TARGETS:
            raise ValueError(f"target_class must be one of {', '.join(TARGETS)}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {', '.join(STRATEGIES)}")


# -- lattices --------------------------------------------------------------


def _closure(points, meet, join):
    pts = set(points)
    frontier = list(pts)
    while frontier:
        new = []
        for p in frontier:
            for q in list(pts):
                for r in (meet(p, q), join(p, q)):
                    if r not in pts:
                        pts.add(r)
                        new.append(r)
        frontier = new
    return pts


def _tuple_lattice(points):
    pts = sorted(points)
    name = {p: "".join(map(str, p)) for p in pts}
    back = {v: k for k, v in name.items()}
    return FiniteLattice.from_operations(
        [name[p] for p in pts],
        lambda a, b: name[tuple(map(min, back[a], back[b]))],
        lambda a, b: name[tuple(map(max, back[a], back[b]))],
    )


def _chain_product_closure(rng, max_size):
    if max_size == 1:
        return chain_lattice(1)
    for _ in range(64):
        dims = [rng.randint(2, 4) for _ in range(rng.randint(1, 3))]
        grid = list(product(*[range(d) for d in dims]))
        seeds = rng.sample(grid, rng.randint(1, min(max_size, len(grid))))
        pts = _closure(seeds, lambda p, q: tuple(map(min, p, q)), lambda p, q: tuple(map(max, p, q)))
        if len(pts) <= max_size:
            return _tuple_lattice(pts)
    return chain_lattice(max_size)


def _random_order(rng, k):
    """Random strict order on ``range(k)`` as up-set bitmasks (i < j only)."""
    ups = [1 << i for i in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            if rng.chance(1, 2):
                ups[i] |= 1 << j
    for i in reversed(range(k)):
        for j in range(i + 1, k):
            if ups[i] >> j & 1:
                ups[i] |= ups[j]
    return ups


def _mask_name(mask, k):
    return "".join(chr(97 + i) for i in range(k) if mask >> i & 1) or "_"


def _set_lattice(masks, k, join_closure=None):
    masks = sorted(masks, key=lambda m: (bin(m).count("1"), m))
    names = {m: _mask_name(m, k) for m in masks}
    back = {v: m for m, v in names.items()}
    close = join_closure or (lambda m: m)
    return FiniteLattice.from_operations(
        [names[m] for m in masks],
        lambda a, b: names[back[a] & back[b]],
        lambda a, b: names[close(back[a] | back[b])],
    )


def _random_poset_downsets(rng, max_size):
    for _ in range(64):
        k = rng.randint(0, 5)
        ups = _random_order(rng, k)
        downs = [sum(1 << i for i in range(k) if ups[i] >> j & 1) for j in range(k)]
        ideals = [m for m in range(1 << k)
                  if all(downs[j] & m == downs[j] for j in range(k) if m >> j & 1)]
        if len(ideals) <= max_size:
            return _set_lattice(ideals, k)
    return chain_lattice(max_size)


def _macneille(rng, max_size):
    """Dedekind-MacNeille completion of a random poset (not necessarily distributive)."""
    for _ in range(64):
        k = rng.randint(1, 6)
        ups = _random_order(rng, k)
        downs = [sum(1 << i for i in range(k) if ups[i] >> j & 1) for j in range(k)]
        full = (1 << k) - 1

        def upper(m):
            out = full
            for i in range(k):
                if m >> i & 1:
                    out &= ups[i]
            return out

        def lower(m):
            out = full
            for i in range(k):
                if m >> i & 1:
                    out &= downs[i]
            return out

        def close(m):
            return lower(upper(m))

        cuts = {close(m) for m in range(1 << k)}
        if len(cuts) <= max_size:
            return _set_lattice(cuts, k, close)
    return chain_lattice(max_size)


_LATTICE_MAKERS = {
    "chain_product_closure": _chain_product_closure,
    "random_poset_downsets": _random_poset_downsets,
    "macneille": _macneille,
}


def gen_lattice(cfg: GeneratorConfig, rng: XorShift64Star | None = None) -> FiniteLattice:
    rng = rng or XorShift64Star(cfg.seed)
    strategy = cfg.strategy
    if strategy == "mixed":
        strategy = rng.choice(("chain_product_closure", "random_poset_downsets", "macneille"))
    return _LATTICE_MAKERS[strategy](rng, cfg.max_lattice_size)


# -- correspondences -------------------------------------------------------


def _monotone_selection(rng, L):
    ops = []
    for _ in range(rng.randint(0, 3)):
        kind = rng.below(5)
        c = rng.choice(L.elements)
        ops.append((kind, c))
    sel = {}
    for x in L.elements:
        y = x
        for kind, c in ops:
            if kind < 2:
                y = L.join(y, c)
            elif kind < 4:
                y = L.meet(y, c)
            else:
                y = c
        sel[x] = y
    return sel


def _raw_values(rng, L, cap):
    sel = _monotone_selection(rng, L)
    values = {}
    for x in L.elements:
        v = {sel[x]}
        if rng.chance(1, 2):
            extra = rng.below(min(cap, 3))
            v.update(rng.sample(L.elements, extra))
        values[x] = v
    return values


def _repair(L, values, strict, meets=True, joins=True):
    """Smallest enlargement of ``values`` closed under the ascending-type rules."""
    changed = True
    while changed:
        changed = False
        for x in L.elements:
            for xp in L.ordered(L.up(x)):
                if strict and xp == x:
                    continue
                for y in list(values[x]):
                    for yp in list(values[xp]):
                        if meets and L.meet(y, yp) not in values[x]:
                            values[x].add(L.meet(y, yp))
                            changed = True
                        if joins and L.join(y, yp) not in values[xp]:
                            values[xp].add(L.join(y, yp))
                            changed = True
    return values


def _locally_closed(L, values, x, strict):
    """Do the ascending-type rules hold on every pair involving ``x``?"""
    fx = values[x]
    for xp in L.up(x):
        if strict and xp == x:
            continue
        fxp = values[xp]
        for y in fx:
            for yp in fxp:
                if L.meet(y, yp) not in fx or L.join(y, yp) not in fxp:
                    return False
    for xd in L.down(x):
        if xd == x:
            continue
        fxd = values[xd]
        for z in fxd:
            for y in fx:
                if L.meet(z, y) not in fxd or L.join(z, y) not in fx:
                    return False
    return True


def _walk(rng, L, values, strict, steps, cap):
    # Closure alone lands almost always on ascending maps with sublattice
    # values; single-point toggles that keep the rules reach the rest.
    elements = L.elements
    for _ in range(steps):
        x = rng.choice(elements)
        y = rng.choice(elements)
        v = values[x]
        if y in v:
            if len(v) == 1:
                continue
            v.discard(y)
            if not _locally_closed(L, values, x, strict):
                v.add(y)
        elif len(v) < cap:
            v.add(y)
            if not _locally_closed(L, values, x, strict):
                v.discard(y)
    return values


def _in_target(F, target):
    if target == "ascending":
        return is_ascending(F).holds
    if target == "v_ascending":
        return is_v_ascending(F).v_ascending
    return True


def gen_correspondence(cfg: GeneratorConfig, L: FiniteLattice,
                       rng: XorShift64Star | None = None) -> Correspondence:
    """Random correspondence in ``cfg.target_class``.

    A monotone selection is inflated with random extra points and then closed
    under the target's meet/join rules, followed by a random walk of
    rule-preserving single-point toggles.  Draws whose values exceed
    ``max_value_size`` after closure are rejected, up to 1000 attempts.
    """
    rng = rng or XorShift64Star(cfg.seed)
    cap = cfg.max_value_size or len(L)
    for _ in range(REJECTION_CAP):
        values = _raw_values(rng, L, cap)
        if cfg.target_class != "unconstrained":
            strict = cfg.target_class == "v_ascending"
            _repair(L, values, strict)
            _walk(rng, L, values, strict, WALK_STEPS * len(L), cap)
        if any(len(v) > cap for v in values.values()):
            continue
        F = Correspondence(L, values)
        if _in_target(F, cfg.target_class):
            return F
    raise GenerationExhausted(f"no {cfg.target_class} correspondence within {REJECTION_CAP} attempts")


def trial_instance(cfg: GeneratorConfig, index: int):
    """The (lattice, correspondence) pair of trial ``index``; the map is None if generation gave up."""
    rng = XorShift64Star(trial_seed(cfg.seed, index))
    L = gen_lattice(cfg, rng)
    try:
        return L, gen_correspondence(cfg, L, rng)
    except GenerationExhausted:
        return L, None


# -- theorem suites --------------------------------------------------------


@dataclass
class TrialReport:
    theorem: str
    config: dict
    trials: int = 0
    skipped: int = 0
    hypothesis_hits: int = 0
    conclusion_verified: int = 0
    conclusion_violations: int = 0
    oracle_checks: int = 0
    oracle_mismatches: int = 0
    witnesses: list = field(default_factory=list)

    @property
    def passed(self):
        return self.conclusion_violations == 0 and self.oracle_mismatches == 0

    def to_doc(self):
        return asdict(self)


def _nonempty_subsets(items):
    for r in range(1, len(items) + 1):
        yield from combinations(items, r)


def oracle_mismatches(F: Correspondence, theorem: str) -> tuple[int, list]:
    """Compare the constructive procedures with brute force on one instance.

    Returns (number of comparisons, list of mismatch descriptions).
    """
    L = F.lattice
    fix = F.fixed()
    least, greatest = L.least(fix), L.greatest(fix)
    checks, bad = 0, []

    def compare(name, fn, expected):
        nonlocal checks
        checks += 1
        try:
            got = fn()
        except LatticeFixError as exc:
            bad.append(f"{name}: raised {exc!r}")
            return
        if got != expected:
            bad.append(f"{name}: got {got}, brute force gives {expected}")

    compare("least_fixed_point_infC", lambda: least_fixed_point_infC(F), least)
    compare("greatest_fixed_point[infC]", lambda: greatest_fixed_point(F, "infC"), greatest)
    if all(v is not None for v in F.least_elements.values()):
        compare("least_fixed_point_minsel", lambda: least_fixed_point_minsel(F), least)
    if all(v is not None for v in F.greatest_elements.values()):
        compare("greatest_fixed_point[minsel]", lambda: greatest_fixed_point(F, "minsel"), greatest)
    if len(fix) <= ORACLE_FIX_CAP:
        variants = ["chain_subcomplete"]
        if values_complete(F).holds:
            variants.append("complete_values")
        for U in _nonempty_subsets(fix):
            expected = induced_sup(L, fix, U)
            for variant in variants:
                compare(f"sup_fix_over_subset[{variant}]({','.join(U)})",
                        lambda: sup_fix_over_subset(F, U, variant), expected)
    return checks, bad


def _theorem_trial(theorem, cfg, index, oracles):
    L, F = trial_instance(cfg, index)
    out = {"skipped": F is None, "hit": False, "verified": False, "violation": None,
           "checks": 0, "mismatches": []}
    if F is None:
        return out
    rep = verify_fix_complete(F, theorem)
    if rep.status == HYPOTHESES_NOT_MET:
        return out
    out["hit"] = True
    if rep.status == VERIFIED:
        out["verified"] = True
    else:
        out["violation"] = {"trial": index, "kind": "conclusion_violated", "detail": rep.detail,
                            "witness": rep.to_doc()["witness"], "correspondence": correspondence_to_doc(F)}
    if oracles:
        checks, bad = oracle_mismatches(F, theorem)
        out["checks"] = checks
        out["mismatches"] = [{"trial": index, "kind": "oracle_mismatch", "detail": d,
                              "correspondence": correspondence_to_doc(F)} for d in bad]
    return out


def _run_trials(fn, args_list, workers):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, *zip(*args_list), chunksize=16))
    return [fn(*a) for a in args_list]


def run_theorem_suite(theorem: str, cfg: GeneratorConfig, trials: int, *,
                      oracles: bool = True, workers: int = 1) -> TrialReport:
    """Fuzz one theorem: hypotheses are checked on every generated instance
    and, where they hold, the conclusion is verified by brute force."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    theorem = theorem_id(theorem)
    report = TrialReport(theorem=theorem, config=asdict(cfg), trials=trials)
    results = _run_trials(_theorem_trial, [(theorem, cfg, i, oracles) for i in range(trials)], workers)
    for r in results:
        report.skipped += r["skipped"]
        report.hypothesis_hits += r["hit"]
        report.conclusion_verified += r["verified"]
        report.oracle_checks += r["checks"]
        report.oracle_mismatches += len(r["mismatches"])
        if r["violation"] is not None:
            report.conclusion_violations += 1
            report.witnesses.append(r["violation"])
        report.witnesses.extend(r["mismatches"])
    return report


def hypothesis_profile(cfg: GeneratorConfig, trials: int) -> list[dict]:
    """Which theorems' hypotheses hold on each instance of the shared stream."""
    rows = []
    for i in range(trials):
        _, F = trial_instance(cfg, i)
        if F is None:
            rows.append(None)
            continue
        rows.append({t: theorem_hypotheses(F, t).holds for t in THEOREMS})
    return rows


# -- counterexample search -------------------------------------------------

DROPPABLE = ("lower_v", "upper_v", "nonempty_values")


@dataclass
class Witness:
    dropped: str
    trial: int
    correspondence: Correspondence
    fixed_points: tuple
    reason: str
    subset: tuple | None = None

    def to_doc(self):
        return {
            "dropped": self.dropped,
            "trial": self.trial,
            "correspondence": correspondence_to_doc(self.correspondence),
            "fixed_points": list(self.fixed_points),
            "reason": self.reason,
            "subset": None if self.subset is None else list(self.subset),
        }


def verify_witness(w: Witness) -> bool:
    """Re-check a witness directly: Fix is empty, or ``subset`` lacks a bound inside Fix."""
    F = w.correspondence
    L = F.lattice
    fix = [x for x in L.elements if x in F[x]]
    if not fix:
        return True
    if w.subset is None:
        return False
    uppers = [u for u in fix if all(L.le(s, u) for s in w.subset)]
    lowers = [u for u in fix if all(L.le(u, s) for s in w.subset)]
    has_sup = any(all(L.le(u, v) for v in uppers) for u in uppers)
    has_inf = any(all(L.le(v, u) for v in lowers) for u in lowers)
    return not (has_sup and has_inf)


def _two_chain():
    return build_lattice(["0", "1"], [("0", "1")])


def _candidate(dropped, cfg, index):
    if index == 0 and dropped == "lower_v":
        return Correspondence(_two_chain(), {"0": ["1"], "1": ["0"]})
    if index == 0 and dropped == "nonempty_values":
        return Correspondence(_two_chain(), {"0": [], "1": []}, allow_empty=True)
    rng = XorShift64Star(trial_seed(cfg.seed, index))
    L = gen_lattice(cfg, rng)
    values = _raw_values(rng, L, cfg.max_value_size or len(L))
    if dropped == "nonempty_values":
        _repair(L, values, strict=True)
        blank = [x for x in L.elements if rng.chance(1, 2)] or [rng.choice(L.elements)]
        for x in blank:
            values[x] = set()
        return Correspondence(L, values, allow_empty=True)
    keep_lower = dropped == "upper_v"
    _repair(L, values, strict=True, meets=keep_lower, joins=not keep_lower)
    F = Correspondence(L, values)
    rep = F.ascending_report
    if dropped == "lower_v" and rep.upper_v and not rep.lower_v:
        return F
    if dropped == "upper_v" and rep.lower_v and not rep.upper_v:
        return F
    return None


def search_counterexample(dropped: str, cfg: GeneratorConfig, trials: int) -> Witness | None:
    """Look for a map violating exactly one hypothesis whose Fix is empty or
    not a complete lattice.  ``None`` means nothing was found, not that none exists."""
    if dropped not in DROPPABLE:
        raise ValueError(f"dropped must be one of {', '.join(DROPPABLE)}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    for index in range(trials):
        F = _candidate(dropped, cfg, index)
        if F is None:
            continue
        fix = F.fixed()
        if not fix:
            return Witness(dropped, index, F, fix, "Fix is empty")
        rep = induced_completeness(F.lattice, fix)
        if not rep.holds:
            return Witness(dropped, index, F, fix, rep.detail, rep.witness)
    return None


# -- game corpus -----------------------------------------------------------

_SHAPES = ([(0, 0)], [(0, 1)], [(0, 2)], [(0, 3)], [(0, 1), (0, 1)])
_WEIGHTS = (Fraction(0), Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3))
_SCALES = (Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(7, 3))


def gen_game(rng: XorShift64Star, max_players: int = 3, max_strategies: int = 4):
    """Random supermodular game on integer boxes.

    Payoffs are own-separable terms plus nonnegative own and cross
    interactions plus an arbitrary function of the others' strategies, so
    supermodularity and increasing differences hold on the full product and
    therefore on every feasible sublattice.
    """
    n = rng.randint(1, max_players)
    shapes = [s for s in _SHAPES if _box_size(s) <= max_strategies]
    boxes = [rng.choice(shapes) for _ in range(n)]
    own = [list(product(*[range(lo, hi + 1) for lo, hi in b])) for b in boxes]
    grid = list(product(*own))
    if n > 1 and rng.chance(2, 3):
        seeds = set()
        for i in range(n):
            for s in own[i]:
                seeds.add(rng.choice([p for p in grid if p[i] == s]))
        seeds.update(rng.sample(grid, rng.below(3)))
        meet = lambda p, q: tuple(tuple(map(min, a, b)) for a, b in zip(p, q))
        join = lambda p, q: tuple(tuple(map(max, a, b)) for a, b in zip(p, q))
        feasible = sorted(_closure(seeds, meet, join))
    else:
        feasible = grid

    payoffs = []
    for i in range(n):
        m = len(boxes[i])
        unary = [[rng.randint(-4, 4) for _ in range(hi - lo + 1)] for lo, hi in boxes[i]]
        own_pair = {(k, l): rng.choice(_WEIGHTS) for k in range(m) for l in range(k + 1, m)}
        cross = {(k, j, l): rng.choice(_WEIGHTS)
                 for k in range(m) for j in range(n) if j != i for l in range(len(boxes[j]))}
        others = {}
        for p in grid:
            o = p[:i] + p[i + 1:]
            if o not in others:
                others[o] = rng.randint(-3, 3)
        payoffs.append(_payoff_fn(i, boxes[i], unary, own_pair, cross, others))
    return topkis_box_game(boxes, payoffs, feasible=feasible), len(feasible) < len(grid)


def _box_size(box):
    size = 1
    for lo, hi in box:
        size *= hi - lo + 1
    return size


def _payoff_fn(i, box, unary, own_pair, cross, others):
    def f(p):
        x = p[i]
        val = Fraction(sum(unary[k][x[k] - box[k][0]] for k in range(len(x))))
        val += sum(w * x[k] * x[l] for (k, l), w in own_pair.items())
        val += sum(w * x[k] * p[j][l] for (k, j, l), w in cross.items())
        return val + others[p[:i] + p[i + 1:]]
    return f


@dataclass
class GameSuiteReport:
    seed: int
    trials: int = 0
    non_product: int = 0
    validator_failures: int = 0
    equivalence_violations: int = 0
    nash_violations: int = 0
    affine_violations: int = 0
    equilibria_total: int = 0
    witnesses: list = field(default_factory=list)

    @property
    def passed(self):
        return not (self.validator_failures or self.equivalence_violations
                    or self.nash_violations or self.affine_violations)

    def to_doc(self):
        return asdict(self)


def _game_trial(seed, index, max_players, max_strategies):
    rng = XorShift64Star(trial_seed(seed, index))
    g, non_product = gen_game(rng, max_players, max_strategies)
    out = {"non_product": non_product, "validators": True, "equivalence": True, "nash": True,
           "affine": True, "size": 0, "witness": None}

    def fail(key, detail):
        out[key] = False
        if out["witness"] is None:
            out["witness"] = {"trial": index, "kind": key, "detail": detail, "game": game_to_doc(g)}

    for rep in (check_supermodular(g), check_increasing_differences(g)):
        if not rep.holds:
            fail("validators", rep.detail)
    if not out["validators"]:
        return out
    brute = nash_brute(g)
    out["size"] = len(brute.members)
    try:
        via = nash_via_fixpoint(g)
        if set(via.members) != set(brute.members):
            fail("equivalence", "fixed-point route differs from brute force")
    except LatticeFixError as exc:
        fail("equivalence", repr(exc))
    rep = verify_nash_lattice(g)
    if not rep.holds:
        fail("nash", rep.detail)

    # Per-player scales keep the Nash set but may move Y(x) on a non-product
    # S(x), since g weighs the players differently; Y(x) is only compared
    # under a common scale.
    scales = [rng.choice(_SCALES) for _ in range(g.n)]
    shifts = [Fraction(rng.randint(-5, 5)) for _ in range(g.n)]
    h = affine_transform(g, scales, shifts)
    common = affine_transform(g, [scales[0]] * g.n, shifts)
    if set(nash_brute(h).members) != set(brute.members):
        fail("affine", "Nash set changed under a positive affine transform")
    elif any(aggregate_argmax(g, x).members != aggregate_argmax(common, x).members
             for x in g.feasible):
        fail("affine", "aggregate argmax changed under a common positive affine transform")
    return out


def run_game_suite(seed: int = DEFAULT_SEED, trials: int = 500, *, max_players: int = 3,
                   max_strategies: int = 4, workers: int = 1) -> GameSuiteReport:
    report = GameSuiteReport(seed=seed, trials=trials)
    results = _run_trials(_game_trial, [(seed, i, max_players, max_strategies) for i in range(trials)],
                          workers)
    for r in results:
        report.non_product += r["non_product"]
        report.validator_failures += not r["validators"]
        report.equivalence_violations += not r["equivalence"]
        report.nash_violations += not r["nash"]
        report.affine_violations += not r["affine"]
        report.equilibria_total += r["size"]
        if r["witness"] is not None:
            report.witnesses.append(r["witness"])
    return report
