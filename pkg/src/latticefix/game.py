"""Finite supermodular games whose feasible joint strategies need not form a product.

A profile is a tuple of strategy ids in player order; its key is the
comma-joined tuple, which is also the element id of the profile in the
joint lattice ``Game.joint``.  Payoffs are exact :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .correspondence import (
    Correspondence,
    fixed_points_brute,
    greatest_fixed_point,
    is_ascending,
    least_fixed_point_infC,
)
from .documents import format_rational, lattice_from_doc, lattice_to_doc, parse_rational
from .errors import (
    DocumentError,
    EmptySection,
    EquivalenceViolation,
    FeasibleNotSublattice,
    HypothesisViolated,
    InfeasibleProfile,
    InternalContradiction,
    InvalidGame,
    PayoffMissing,
    ProjectionNotSurjective,
)
from .lattice import (
    CONCLUSION_VIOLATED,
    HYPOTHESES_NOT_MET,
    VERIFIED,
    CheckReport,
    FiniteLattice,
    SubsetView,
    induced_completeness,
    induced_lattice_check,
    is_subcomplete,
)

Profile = tuple


def profile_key(profile: Sequence[str]) -> str:
    return ",".join(profile)


class Game:
    """Validated game ``(players, strategy lattices, feasible set, payoffs)``."""

    def __init__(self, players, strategies, feasible, payoffs):
        self.players = tuple(players)
        if not self.players:
            raise InvalidGame("a game needs at least one player")
        if len(set(self.players)) != len(self.players):
            raise InvalidGame("player names must be distinct")
        self.strategies = tuple(strategies)
        n = len(self.players)
        if len(self.strategies) != n:
            raise InvalidGame("one strategy lattice per player is required")
        for p, L in zip(self.players, self.strategies):
            bad = [s for s in L.elements if "," in s]
            if bad:
                raise InvalidGame(f"strategy ids of {p!r} may not contain commas: {bad[0]!r}")

        feas = []
        seen = set()
        for prof in feasible:
            prof = tuple(prof)
            if len(prof) != n:
                raise InvalidGame(f"profile {prof} does not have one entry per player")
            for p, L, s in zip(self.players, self.strategies, prof):
                if s not in L.index:
                    raise InvalidGame(f"profile {prof}: {s!r} is not a strategy of {p!r}")
            if prof not in seen:
                seen.add(prof)
                feas.append(prof)
        if not feas:
            raise InvalidGame("the feasible set must be nonempty")
        feas.sort(key=lambda pr: tuple(L.index[s] for L, s in zip(self.strategies, pr)))
        self.feasible = tuple(feas)
        self._feasible_set = frozenset(feas)

        for k, p in enumerate(feas):
            for q in feas[k + 1:]:
                if self.meet(p, q) not in seen:
                    raise FeasibleNotSublattice(p, q, "meet")
                if self.join(p, q) not in seen:
                    raise FeasibleNotSublattice(p, q, "join")
        for i, (p, L) in enumerate(zip(self.players, self.strategies)):
            used = {prof[i] for prof in feas}
            for s in L.elements:
                if s not in used:
                    raise ProjectionNotSurjective(p, s)

        self.payoffs = []
        for i, p in enumerate(self.players):
            table = payoffs[p] if isinstance(payoffs, Mapping) else payoffs[i]
            row = {}
            for prof in feas:
                if prof not in table:
                    raise PayoffMissing(p, prof)
                row[prof] = Fraction(table[prof])
            extra = [k for k in table if tuple(k) not in seen]
            if extra:
                raise InvalidGame(f"player {p!r} has payoffs at infeasible profile {tuple(extra[0])}")
            self.payoffs.append(row)

        keys = [profile_key(pr) for pr in feas]
        self._by_key = dict(zip(keys, feas))
        self.joint = FiniteLattice.from_operations(
            keys,
            lambda a, b: profile_key(self.meet(self._by_key[a], self._by_key[b])),
            lambda a, b: profile_key(self.join(self._by_key[a], self._by_key[b])),
        )

        # S_i(x_{-i}) for every x_{-i} that extends to a feasible profile
        self._sections = []
        for i, L in enumerate(self.strategies):
            sec = {}
            for prof in feas:
                sec.setdefault(prof[:i] + prof[i + 1:], set()).add(prof[i])
            self._sections.append({o: L.ordered(v) for o, v in sec.items()})

    def __repr__(self):
        return f"Game(players={list(self.players)}, |S|={len(self.feasible)})"

    def __eq__(self, other):
        if not isinstance(other, Game):
            return NotImplemented
        return (self.players == other.players and self.strategies == other.strategies
                and self._feasible_set == other._feasible_set and self.payoffs == other.payoffs)

    @property
    def n(self):
        return len(self.players)

    def player_index(self, i) -> int:
        if isinstance(i, int) and not isinstance(i, bool):
            if not 0 <= i < self.n:
                raise IndexError(f"no player {i}")
            return i
        try:
            return self.players.index(i)
        except ValueError:
            raise KeyError(f"unknown player {i!r}") from None

    def meet(self, p, q) -> Profile:
        return tuple(L.meet(a, b) for L, a, b in zip(self.strategies, p, q))

    def join(self, p, q) -> Profile:
        return tuple(L.join(a, b) for L, a, b in zip(self.strategies, p, q))

    def le(self, p, q) -> bool:
        return all(L.le(a, b) for L, a, b in zip(self.strategies, p, q))

    def is_feasible(self, p) -> bool:
        return tuple(p) in self._feasible_set

    def profile(self, x) -> Profile:
        """Accept a profile tuple or its key; raise InfeasibleProfile if not in S."""
        prof = self._by_key.get(x) if isinstance(x, str) else tuple(x)
        if prof is None or prof not in self._feasible_set:
            raise InfeasibleProfile(f"{x!r} is not a feasible profile")
        return prof

    def payoff(self, i, profile) -> Fraction:
        return self.payoffs[self.player_index(i)][tuple(profile)]

    def others(self, profile, i) -> tuple:
        return tuple(profile[:i]) + tuple(profile[i + 1:])

    def with_own(self, others, i, s) -> Profile:
        return tuple(others[:i]) + (s,) + tuple(others[i:])

    def section(self, i, others) -> tuple:
        """Own strategies feasible against ``others`` (empty tuple if none)."""
        return self._sections[i].get(tuple(others), ())

    def other_profiles(self, i) -> list:
        return list(self._sections[i])

    def others_le(self, i, o, o2) -> bool:
        Ls = self.strategies[:i] + self.strategies[i + 1:]
        return all(L.le(a, b) for L, a, b in zip(Ls, o, o2))


# -- documents -------------------------------------------------------------


def build_game(doc) -> Game:
    """Game from its JSON document (see README for the schema)."""
    if not isinstance(doc, dict):
        raise DocumentError("game document must be an object", path="$")
    for key in ("players", "strategies", "feasible", "payoffs"):
        if key not in doc:
            raise DocumentError(f"missing key {key!r}", path="$")
    players = doc["players"]
    if not isinstance(players, list) or not all(isinstance(p, str) for p in players):
        raise DocumentError("'players' must be a list of names", path="$.players")
    strategies = []
    for p in players:
        if p not in doc["strategies"]:
            raise DocumentError(f"no strategy lattice for player {p!r}", path="$.strategies")
        strategies.append(lattice_from_doc(doc["strategies"][p], f"$.strategies.{p}"))
    feasible = doc["feasible"]
    if not isinstance(feasible, list):
        raise DocumentError("'feasible' must be a list of profiles", path="$.feasible")
    for k, prof in enumerate(feasible):
        if not isinstance(prof, list) or not all(isinstance(s, str) for s in prof):
            raise DocumentError("each profile must be a list of strategy ids", path=f"$.feasible[{k}]")
    payoffs = {}
    for p in players:
        table = doc["payoffs"].get(p) if isinstance(doc["payoffs"], dict) else None
        if not isinstance(table, dict):
            raise DocumentError(f"no payoff table for player {p!r}", path="$.payoffs")
        rows = {}
        for key, val in table.items():
            try:
                rows[tuple(key.split(","))] = parse_rational(val)
            except DocumentError as exc:
                raise DocumentError(str(exc), path=f"$.payoffs.{p}.{key}") from None
        payoffs[p] = rows
    return Game(players, strategies, [tuple(x) for x in feasible], payoffs)


def game_to_doc(g: Game) -> dict:
    return {
        "players": list(g.players),
        "strategies": {p: lattice_to_doc(L) for p, L in zip(g.players, g.strategies)},
        "feasible": [list(x) for x in g.feasible],
        "payoffs": {
            p: {profile_key(x): format_rational(g.payoffs[i][x]) for x in g.feasible}
            for i, p in enumerate(g.players)
        },
    }


# -- sections --------------------------------------------------------------


def section_strategies(g: Game, i, others) -> SubsetView:
    """``S_i(x_{-i})``; ``others`` lists the other players' strategies in order."""
    i = g.player_index(i)
    sec = g.section(i, others)
    if not sec:
        raise EmptySection(f"{tuple(others)} does not extend to a feasible profile")
    L = g.strategies[i]
    if not is_subcomplete(L, sec).holds:
        raise InternalContradiction(f"section {sec} is not a subcomplete sublattice")
    return L.subset(sec)


def _joint_section(g: Game, x: Profile) -> list:
    secs = [set(g.section(i, g.others(x, i))) for i in range(g.n)]
    return [y for y in g.feasible if all(y[i] in secs[i] for i in range(g.n))]


def joint_section(g: Game, x) -> SubsetView:
    """``S(x)``: feasible profiles whose every coordinate is feasible against ``x``."""
    x = g.profile(x)
    keys = [profile_key(y) for y in _joint_section(g, x)]
    if not is_subcomplete(g.joint, keys).holds:
        raise InternalContradiction(f"S({x}) is not a subcomplete sublattice")
    return g.joint.subset(keys)


# -- hypotheses ------------------------------------------------------------


def check_supermodular(g: Game) -> CheckReport:
    """``f_i(., x_{-i})`` is supermodular on every section, for every player."""
    for i in range(g.n):
        L, f = g.strategies[i], g.payoffs[i]
        for o in g.other_profiles(i):
            sec = g.section(i, o)
            for k, y in enumerate(sec):
                for y2 in sec[k + 1:]:
                    lhs = f[g.with_own(o, i, L.join(y, y2))] + f[g.with_own(o, i, L.meet(y, y2))]
                    rhs = f[g.with_own(o, i, y)] + f[g.with_own(o, i, y2)]
                    if lhs < rhs:
                        return CheckReport(False, (g.players[i], o, y, y2),
                                           f"player {g.players[i]} at {o}: f(join)+f(meet) = {lhs} < {rhs}")
    return CheckReport(True, detail="payoffs are supermodular on every section")


def check_increasing_differences(g: Game) -> CheckReport:
    """Increasing differences relative to S.

    Only quadruples ``{y, y'} x {o, o'}`` with ``y <= y'``, ``o <= o'`` and all
    four corners feasible are examined.
    """
    for i in range(g.n):
        L, f = g.strategies[i], g.payoffs[i]
        others = g.other_profiles(i)
        for o in others:
            sec_o = g.section(i, o)
            for o2 in others:
                if o2 == o or not g.others_le(i, o, o2):
                    continue
                sec_o2 = set(g.section(i, o2))
                common = [s for s in sec_o if s in sec_o2]
                for y in common:
                    for y2 in common:
                        if y == y2 or not L.le(y, y2):
                            continue
                        low = f[g.with_own(o, i, y2)] - f[g.with_own(o, i, y)]
                        high = f[g.with_own(o2, i, y2)] - f[g.with_own(o2, i, y)]
                        if low > high:
                            return CheckReport(
                                False, (g.players[i], y, y2, o, o2),
                                f"player {g.players[i]}: difference {low} at {o} exceeds {high} at {o2}")
    return CheckReport(True, detail="payoffs have increasing differences relative to S")


# -- equilibria ------------------------------------------------------------


@dataclass(frozen=True)
class EquilibriumSet:
    members: tuple
    least: Profile | None
    greatest: Profile | None
    is_complete_lattice: bool

    def keys(self) -> list:
        return [profile_key(m) for m in self.members]

    def to_doc(self):
        return {
            "members": self.keys(),
            "least": None if self.least is None else profile_key(self.least),
            "greatest": None if self.greatest is None else profile_key(self.greatest),
            "is_complete_lattice": self.is_complete_lattice,
        }


def _equilibrium_set(g: Game, members) -> EquilibriumSet:
    keys = [profile_key(m) for m in members]
    J = g.joint
    least, greatest = J.least(keys), J.greatest(keys)
    return EquilibriumSet(
        members=tuple(members),
        least=None if least is None else g.profile(least),
        greatest=None if greatest is None else g.profile(greatest),
        is_complete_lattice=induced_lattice_check(J, keys).holds,
    )


def aggregate_value(g: Game, y, x) -> Fraction:
    """``sum_i f_i(y_i, x_{-i})``."""
    return sum((g.payoffs[i][g.with_own(g.others(x, i), i, y[i])] for i in range(g.n)), Fraction(0))


def _argmax(g: Game, x) -> list:
    cands = _joint_section(g, x)
    vals = [aggregate_value(g, y, x) for y in cands]
    best = max(vals)
    return [y for y, v in zip(cands, vals) if v == best]


def aggregate_argmax(g: Game, x) -> SubsetView:
    """All maximisers of the aggregate payoff over ``S(x)`` (no tie-breaking)."""
    x = g.profile(x)
    return g.joint.subset(profile_key(y) for y in _argmax(g, x))


def aggregate_correspondence(g: Game) -> Correspondence:
    return Correspondence(g.joint, {profile_key(x): [profile_key(y) for y in _argmax(g, x)]
                                    for x in g.feasible})


def nash_brute(g: Game) -> EquilibriumSet:
    """Profiles where no player gains from a feasible unilateral deviation."""
    members = []
    for s in g.feasible:
        stable = True
        for i in range(g.n):
            f = g.payoffs[i]
            o = g.others(s, i)
            if any(f[g.with_own(o, i, d)] > f[s] for d in g.section(i, o)):
                stable = False
                break
        if stable:
            members.append(s)
    return _equilibrium_set(g, members)


def nash_via_fixpoint(g: Game) -> EquilibriumSet:
    """Equilibria as fixed points of the aggregate best-reply correspondence.

    The result is compared against :func:`nash_brute`; any difference raises
    :class:`EquivalenceViolation`.
    """
    for rep in (check_supermodular(g), check_increasing_differences(g)):
        if not rep.holds:
            raise HypothesisViolated(rep.detail, rep.witness)
    Y = aggregate_correspondence(g)
    asc = is_ascending(Y)
    if not asc.holds:
        raise HypothesisViolated("aggregate best-reply correspondence is not ascending: " + asc.detail,
                                 asc.witness)
    fix = fixed_points_brute(Y)
    members = [g.profile(k) for k in fix.members.ordered()]
    if members:
        if least_fixed_point_infC(Y) != fix.least or greatest_fixed_point(Y) != fix.greatest:
            raise InternalContradiction("constructive extreme fixed points disagree with enumeration")
    result = _equilibrium_set(g, members)
    brute = nash_brute(g)
    if set(result.members) != set(brute.members):
        raise EquivalenceViolation(
            f"Fix(Y) = {sorted(result.keys())} but Nash = {sorted(brute.keys())}")
    return result


def verify_nash_lattice(g: Game) -> CheckReport:
    """Supermodular game hypotheses imply a nonempty complete lattice of equilibria.

    Order upper semicontinuity is automatic on finite lattices, so only the
    supermodularity and increasing-difference conditions are checked.
    """
    for rep in (check_supermodular(g), check_increasing_differences(g)):
        if not rep.holds:
            return CheckReport(False, rep.witness, "hypotheses not met: " + rep.detail, HYPOTHESES_NOT_MET)
    eq = nash_brute(g)
    shown = "{" + ",".join(f"({k})" for k in eq.keys()) + "}"
    if not eq.members:
        return CheckReport(False, (), "conclusion violated: no Nash equilibrium", CONCLUSION_VIOLATED)
    rep = induced_completeness(g.joint, eq.keys())
    if not rep.holds:
        return CheckReport(False, rep.witness, f"conclusion violated: Nash = {shown}; {rep.detail}",
                           CONCLUSION_VIOLATED)
    return CheckReport(True, detail=f"hypotheses hold; Nash = {shown}; complete lattice", status=VERIFIED)


# -- constructors and transforms ------------------------------------------


def _box_name(point) -> str:
    return "_".join(map(str, point)) if point else "()"


def box_lattice(bounds) -> FiniteLattice:
    """Integer box ``prod [lo_k, hi_k]`` under the componentwise order."""
    bounds = [tuple(b) for b in bounds]
    for lo, hi in bounds:
        if lo > hi:
            raise InvalidGame(f"empty coordinate range [{lo}, {hi}]")
    points = list(product(*[range(lo, hi + 1) for lo, hi in bounds]))
    names = {_box_name(p): p for p in points}
    return FiniteLattice.from_operations(
        [_box_name(p) for p in points],
        lambda a, b: _box_name(tuple(map(min, names[a], names[b]))),
        lambda a, b: _box_name(tuple(map(max, names[a], names[b]))),
    )


def _as_point(v):
    return (v,) if isinstance(v, int) else tuple(v)


def topkis_box_game(boxes, payoffs, feasible=None, players=None) -> Game:
    """Game whose strategy sets are integer boxes.

    ``boxes[i]`` is a list of ``(lo, hi)`` coordinate ranges for player ``i``.
    ``payoffs[i]`` is either a callable taking the profile as a tuple of
    integer tuples or a mapping keyed by such profiles.  ``feasible`` defaults
    to the full product; one-coordinate points may be given as plain ints.
    """
    players = list(players) if players is not None else [f"p{i + 1}" for i in range(len(boxes))]
    lattices = [box_lattice(b) for b in boxes]
    if feasible is None:
        points = list(product(*[[_as_point(p) for p in product(*[range(lo, hi + 1) for lo, hi in b])]
                                for b in boxes]))
    else:
        points = [tuple(_as_point(v) for v in prof) for prof in feasible]
    feas = [tuple(_box_name(v) for v in prof) for prof in points]
    tables = {}
    for i, p in enumerate(players):
        pay = payoffs[i]
        row = {}
        for pt, prof in zip(points, feas):
            val = pay(pt) if callable(pay) else pay[pt]
            row[prof] = val if isinstance(val, Fraction) else parse_rational(val) if isinstance(val, str) \
                else Fraction(val)
        tables[p] = row
    return Game(players, lattices, feas, tables)


def affine_transform(g: Game, scales, shifts) -> Game:
    """Replace each ``f_i`` by ``scales[i] * f_i + shifts[i]`` (scales positive)."""
    if any(Fraction(a) <= 0 for a in scales):
        raise ValueError("scales must be positive")
    tables = {p: {x: Fraction(a) * g.payoffs[i][x] + Fraction(b) for x in g.feasible}
              for i, (p, a, b) in enumerate(zip(g.players, scales, shifts))}
    return Game(g.players, g.strategies, g.feasible, tables)
