"""Finite posets and lattices.

Elements are opaque string ids.  A :class:`Poset` stores the reflexive
transitive order as up-sets; a :class:`FiniteLattice` additionally carries
meet/join tables computed once at construction, so every later query is a
dictionary lookup.

The subset checkers quantify over nonempty subsets.  Exhaustive scans are
used up to :data:`EXHAUSTIVE_CAP` elements; above that the pairwise
equivalences that hold for finite sets are used instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator, Mapping

from .errors import (
    AntisymmetryViolation,
    DuplicateElement,
    EmptySubset,
    ForeignSubset,
    NotALattice,
    UnknownElement,
    XNotInIntersection,
    DocumentError,
)

Element = str

EXHAUSTIVE_CAP = 12

VERIFIED = "verified"
HYPOTHESES_NOT_MET = "hypotheses_not_met"
CONCLUSION_VIOLATED = "conclusion_violated"


def _plain(obj):
    if isinstance(obj, (tuple, list)):
        return [_plain(o) for o in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_plain(o) for o in obj)
    return obj


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a property check.

    ``witness`` is set whenever ``holds`` is false and can be re-checked
    independently.  Theorem-style checks also set ``status`` to one of
    ``"verified"``, ``"hypotheses_not_met"`` or ``"conclusion_violated"``.
    """

    holds: bool
    witness: tuple | None = None
    detail: str = ""
    status: str | None = None

    def __bool__(self):
        return self.holds

    def to_doc(self):
        doc = {"holds": self.holds, "witness": _plain(self.witness), "detail": self.detail}
        if self.status is not None:
            doc["status"] = self.status
        return doc


class Poset:
    """Finite partial order over string elements.

    Build instances with :func:`build_poset`; the constructor trusts its input.
    """

    def __init__(self, elements: Iterable[Element], up: Mapping[Element, frozenset]):
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        self._up = dict(up)
        down = {e: set() for e in self.elements}
        for x, ups in self._up.items():
            for y in ups:
                down[y].add(x)
        self._down = {e: frozenset(s) for e, s in down.items()}

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __repr__(self):
        return f"{type(self).__name__}({list(self.elements)})"

    def le(self, x: Element, y: Element) -> bool:
        return y in self._up[x]

    def lt(self, x: Element, y: Element) -> bool:
        return x != y and y in self._up[x]

    def comparable(self, x, y) -> bool:
        return y in self._up[x] or x in self._up[y]

    def up(self, x) -> frozenset:
        return self._up[x]

    def down(self, x) -> frozenset:
        return self._down[x]

    def relation(self) -> frozenset:
        return frozenset((x, y) for x in self.elements for y in self._up[x])

    def covers(self) -> list[tuple[Element, Element]]:
        out = []
        for x in self.elements:
            strict = self._up[x] - {x}
            for y in self.ordered(strict):
                if not any(z != y and y in self._up[z] for z in strict):
                    out.append((x, y))
        return out

    def ordered(self, members: Iterable[Element]) -> tuple[Element, ...]:
        return tuple(sorted(members, key=self.index.__getitem__))

    def least(self, members: Iterable[Element]):
        """Least element of ``members`` in this order, or None."""
        ms = list(members)
        for m in ms:
            if all(y in self._up[m] for y in ms):
                return m
        return None

    def greatest(self, members: Iterable[Element]):
        ms = list(members)
        for m in ms:
            if all(y in self._down[m] for y in ms):
                return m
        return None

    def upper_bounds(self, subset: Iterable[Element], within=None) -> tuple[Element, ...]:
        sub = list(subset)
        pool = self.elements if within is None else self.ordered(within)
        return tuple(u for u in pool if all(u in self._up[a] for a in sub))

    def lower_bounds(self, subset: Iterable[Element], within=None) -> tuple[Element, ...]:
        sub = list(subset)
        pool = self.elements if within is None else self.ordered(within)
        return tuple(u for u in pool if all(u in self._down[a] for a in sub))

    def restrict(self, members: Iterable[Element]) -> "Poset":
        keep = frozenset(members)
        elems = [e for e in self.elements if e in keep]
        return Poset(elems, {e: self._up[e] & keep for e in elems})

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return set(self.elements) == set(other.elements) and self.relation() == other.relation()

    def __hash__(self):
        return hash((frozenset(self.elements), self.relation()))


class FiniteLattice(Poset):
    """Finite lattice with precomputed meet and join tables."""

    def __init__(self, elements, up, meet_table, join_table):
        super().__init__(elements, up)
        self._meet = meet_table
        self._join = join_table
        first = self.elements[0]
        self.bottom = reduce(self.meet, self.elements, first)
        self.top = reduce(self.join, self.elements, first)

    @classmethod
    def from_operations(cls, elements, meet, join) -> "FiniteLattice":
        """Build from binary operations already known to form a lattice.

        The order is recovered as ``x <= y iff meet(x, y) == x``.
        """
        elems = tuple(elements)
        if not elems:
            raise EmptySubset("a lattice needs at least one element")
        known = set(elems)
        mt, jt = {}, {}
        for x in elems:
            mt[x], jt[x] = {}, {}
            for y in elems:
                m, j = meet(x, y), join(x, y)
                if m not in known or j not in known:
                    raise NotALattice(x, y, "meet" if m not in known else "join")
                mt[x][y], jt[x][y] = m, j
        up = {x: frozenset(y for y in elems if mt[x][y] == x) for x in elems}
        return cls(elems, up, mt, jt)

    @property
    def poset(self) -> Poset:
        return Poset(self.elements, self._up)

    def meet(self, x: Element, y: Element) -> Element:
        return self._meet[x][y]

    def join(self, x: Element, y: Element) -> Element:
        return self._join[x][y]

    def sup(self, members: Iterable[Element]) -> Element:
        return reduce(self.join, members, self.bottom)

    def inf(self, members: Iterable[Element]) -> Element:
        return reduce(self.meet, members, self.top)

    def dual(self) -> "FiniteLattice":
        return FiniteLattice(self.elements, self._down, self._join, self._meet)

    def restrict_sublattice(self, members: Iterable[Element]) -> "FiniteLattice":
        """Sublattice on ``members``; the caller guarantees meet/join closure."""
        keep = frozenset(members)
        elems = [e for e in self.elements if e in keep]
        return FiniteLattice(
            elems,
            {e: self._up[e] & keep for e in elems},
            {x: {y: self._meet[x][y] for y in elems} for x in elems},
            {x: {y: self._join[x][y] for y in elems} for x in elems},
        )

    def interval(self, lo: Element, hi: Element | None = None) -> "FiniteLattice":
        """Closed interval ``[lo, hi]`` (``hi`` defaults to top)."""
        hi = self.top if hi is None else hi
        members = self._up[lo] & self._down[hi]
        if not members:
            raise EmptySubset(f"empty interval [{lo}, {hi}]")
        return self.restrict_sublattice(members)

    def subset(self, members: Iterable[Element]) -> "SubsetView":
        ms = frozenset(members)
        foreign = [m for m in ms if m not in self.index]
        if foreign:
            raise ForeignSubset(sorted(foreign))
        return SubsetView(self, ms)


@dataclass(frozen=True)
class SubsetView:
    """A subset of a lattice's elements."""

    lattice: FiniteLattice
    members: frozenset

    def __iter__(self):
        return iter(self.lattice.ordered(self.members))

    def __len__(self):
        return len(self.members)

    def __contains__(self, x):
        return x in self.members

    def ordered(self) -> tuple[Element, ...]:
        return self.lattice.ordered(self.members)

    def __repr__(self):
        return "{" + ", ".join(self.ordered()) + "}"


def _members(P: Poset, T) -> tuple[Element, ...]:
    if isinstance(T, SubsetView):
        if T.lattice is P:
            return T.ordered()
        T = T.members
    if isinstance(T, str):
        T = (T,)
    ms = set(T)
    foreign = [m for m in ms if m not in P.index]
    if foreign:
        raise ForeignSubset(sorted(foreign))
    return P.ordered(ms)


def _nonempty(P, T, what="subset"):
    ms = _members(P, T)
    if not ms:
        raise EmptySubset(f"{what} must be nonempty")
    return ms


# -- construction ---------------------------------------------------------


def build_poset(elements: Iterable[Element], pairs: Iterable[tuple[Element, Element]]) -> Poset:
    """Poset generated by ``pairs`` (reflexive-transitive closure)."""
    elems = list(elements)
    if not elems:
        raise DocumentError("a poset needs at least one element")
    index = {}
    for e in elems:
        if not isinstance(e, str) or not e:
            raise DocumentError(f"element ids must be nonempty strings, got {e!r}")
        if e in index:
            raise DuplicateElement(e)
        index[e] = len(index)
    n = len(elems)
    reach = [1 << i for i in range(n)]
    for x, y in pairs:
        for z in (x, y):
            if z not in index:
                raise UnknownElement(z)
        reach[index[x]] |= 1 << index[y]
    for k in range(n):
        bit = 1 << k
        rk = reach[k]
        for i in range(n):
            if reach[i] & bit:
                reach[i] |= rk
    for i in range(n):
        for j in range(i + 1, n):
            if reach[i] >> j & 1 and reach[j] >> i & 1:
                raise AntisymmetryViolation(elems[i], elems[j])
    up = {elems[i]: frozenset(elems[j] for j in range(n) if reach[i] >> j & 1) for i in range(n)}
    return Poset(elems, up)


def _glb(P: Poset, x, y):
    return P.greatest(P.down(x) & P.down(y))


def _lub(P: Poset, x, y):
    return P.least(P.up(x) & P.up(y))


def as_lattice(P: Poset) -> FiniteLattice:
    """Fill meet/join tables, raising :class:`NotALattice` on a missing bound."""
    if isinstance(P, FiniteLattice):
        return P
    mt = {x: {} for x in P.elements}
    jt = {x: {} for x in P.elements}
    elems = P.elements
    for i, x in enumerate(elems):
        for y in elems[i:]:
            m = _glb(P, x, y)
            if m is None:
                raise NotALattice(x, y, "meet")
            j = _lub(P, x, y)
            if j is None:
                raise NotALattice(x, y, "join")
            mt[x][y] = mt[y][x] = m
            jt[x][y] = jt[y][x] = j
    return FiniteLattice(elems, P._up, mt, jt)


def build_lattice(elements, pairs) -> FiniteLattice:
    return as_lattice(build_poset(elements, pairs))


def chain_lattice(n: int, prefix: str = "") -> FiniteLattice:
    names = [f"{prefix}{i}" for i in range(n)]
    return build_lattice(names, zip(names, names[1:]))


# -- sup / inf ------------------------------------------------------------


def sup_subset(L: FiniteLattice, A) -> Element:
    """Least upper bound of ``A`` in ``L``; the empty set maps to bottom."""
    return L.sup(_members(L, A))


def inf_subset(L: FiniteLattice, A) -> Element:
    return L.inf(_members(L, A))


# -- subset checkers ------------------------------------------------------


def is_sublattice(L: FiniteLattice, T) -> CheckReport:
    ms = _nonempty(L, T)
    inside = set(ms)
    for i, x in enumerate(ms):
        for y in ms[i + 1:]:
            if L.meet(x, y) not in inside:
                return CheckReport(False, (x, y), f"meet({x}, {y}) = {L.meet(x, y)} is outside the subset")
            if L.join(x, y) not in inside:
                return CheckReport(False, (x, y), f"join({x}, {y}) = {L.join(x, y)} is outside the subset")
    return CheckReport(True, detail="closed under meet and join")


def is_subcomplete(L: FiniteLattice, T) -> CheckReport:
    """Every nonempty A in T has its ambient sup and inf in T.

    For finite T this is closure under binary meet and join; the witness is
    the two-element subset whose bound escapes.
    """
    report = is_sublattice(L, T)
    if report.holds:
        return CheckReport(True, detail="subcomplete sublattice")
    return CheckReport(False, report.witness, report.detail)


def iter_chains(P: Poset, members: Iterable[Element]) -> Iterator[tuple[Element, ...]]:
    """All nonempty chains inside ``members``, each listed bottom-up once."""
    ms = sorted(members, key=lambda e: (len(P.down(e)), P.index[e]))

    def extend(chain, start):
        yield chain
        last = chain[-1]
        for k in range(start, len(ms)):
            if P.lt(last, ms[k]):
                yield from extend(chain + (ms[k],), k + 1)

    for i, m in enumerate(ms):
        yield from extend((m,), i + 1)


def is_chain_subcomplete(L: FiniteLattice, T, direction: str = "both") -> CheckReport:
    """Ambient sup (up) / inf (down) of every nonempty chain of T lies in T."""
    if direction not in ("up", "down", "both"):
        raise ValueError(f"direction must be up, down or both, not {direction!r}")
    ms = _nonempty(L, T)
    if len(ms) > EXHAUSTIVE_CAP:
        return CheckReport(True, detail="finite subset: every chain contains its endpoints")
    inside = set(ms)
    for chain in iter_chains(L, ms):
        if direction in ("up", "both") and L.sup(chain) not in inside:
            return CheckReport(False, chain, f"sup of chain is {L.sup(chain)}, outside the subset")
        if direction in ("down", "both") and L.inf(chain) not in inside:
            return CheckReport(False, chain, f"inf of chain is {L.inf(chain)}, outside the subset")
    return CheckReport(True, detail="every chain has its bound in the subset")


def _popcount_order(k):
    return sorted(range(1, 1 << k), key=lambda m: (bin(m).count("1"), m))


def _bound_scan(P: Poset, ms, upward: bool):
    """Exhaustive scan: first nonempty subset of ``ms`` without a least upper
    (or greatest lower) bound in ``ms``; None if all have one."""
    k = len(ms)
    rel = P.up if upward else P.down
    bounds = [0] * (1 << k)
    bounds[0] = (1 << k) - 1
    masks = [sum(1 << j for j in range(k) if ms[j] in rel(ms[i])) for i in range(k)]
    for mask in range(1, 1 << k):
        low = (mask & -mask).bit_length() - 1
        bounds[mask] = bounds[mask & (mask - 1)] & masks[low]
    for mask in _popcount_order(k):
        ub = bounds[mask]
        if not any(ub >> j & 1 and masks[j] & ub == ub for j in range(k)):
            return tuple(ms[j] for j in range(k) if mask >> j & 1)
    return None


def _pairwise_bound_scan(P: Poset, ms, upward: bool):
    best = P.least if upward else P.greatest
    bounds = P.upper_bounds if upward else P.lower_bounds
    for i, x in enumerate(ms):
        for y in ms[i + 1:]:
            if best(bounds((x, y), within=ms)) is None:
                return (x, y)
    return None


def is_join_complete(P: Poset) -> CheckReport:
    ms = P.elements
    if len(ms) <= EXHAUSTIVE_CAP:
        bad = _bound_scan(P, ms, upward=True)
    else:
        bad = _pairwise_bound_scan(P, ms, upward=True)
    if bad is None:
        return CheckReport(True, detail="every nonempty subset has a supremum")
    return CheckReport(False, bad, "subset has no least upper bound")


def verify_lemma_jointmin(P: Poset) -> CheckReport:
    """Join-complete with a least element implies every nonempty subset has an infimum."""
    jc = is_join_complete(P)
    if not jc.holds:
        return CheckReport(False, jc.witness, "hypotheses not met: " + jc.detail, HYPOTHESES_NOT_MET)
    if P.least(P.elements) is None:
        minimal = tuple(x for x in P.elements if P.down(x) == {x})
        return CheckReport(False, minimal, "hypotheses not met: no least element", HYPOTHESES_NOT_MET)
    ms = P.elements
    scan = _bound_scan if len(ms) <= EXHAUSTIVE_CAP else _pairwise_bound_scan
    bad = scan(P, ms, upward=False)
    if bad is not None:
        return CheckReport(False, bad, "conclusion violated: subset without infimum", CONCLUSION_VIOLATED)
    return CheckReport(True, detail="every nonempty subset has an infimum", status=VERIFIED)


def veinott_check(L: FiniteLattice, A, B, x: Element, direction: str = "down") -> CheckReport:
    if direction not in ("up", "down"):
        raise ValueError(f"direction must be up or down, not {direction!r}")
    a_set = _nonempty(L, A, "A")
    b_set = _nonempty(L, B, "B")
    if x not in a_set or x not in b_set:
        raise XNotInIntersection(f"{x!r} is not in both A and B")
    down = direction == "down"
    op = L.meet if down else L.join
    csc = is_chain_subcomplete(L, b_set, direction)
    if not csc.holds:
        return CheckReport(False, csc.witness, "hypotheses not met: " + csc.detail, HYPOTHESES_NOT_MET)
    inside = set(b_set)
    for a in a_set:
        if a == x:
            continue
        for b in b_set:
            if op(a, b) not in inside:
                name = "meet" if down else "join"
                return CheckReport(False, (a, b), f"hypotheses not met: {name}({a}, {b}) not in B",
                                   HYPOTHESES_NOT_MET)
    bound = L.inf(a_set) if down else L.sup(a_set)
    if bound not in inside:
        return CheckReport(False, (bound,), f"conclusion violated: {bound} not in B", CONCLUSION_VIOLATED)
    return CheckReport(True, detail=f"{'inf' if down else 'sup'} of A is {bound}, in B", status=VERIFIED)


# -- bounds inside a subset (induced order) -------------------------------


def induced_sup(P: Poset, T, A):
    """Least upper bound of ``A`` among the elements of ``T``, or None."""
    return P.least(P.upper_bounds(_members(P, A), within=_members(P, T)))


def induced_inf(P: Poset, T, A):
    return P.greatest(P.lower_bounds(_members(P, A), within=_members(P, T)))


def induced_lattice_check(P: Poset, T) -> CheckReport:
    """T is a lattice in the order inherited from P (pairwise bounds inside T)."""
    ms = _members(P, T)
    if not ms:
        return CheckReport(False, (), "empty set is not a lattice")
    for upward in (True, False):
        bad = _pairwise_bound_scan(P, ms, upward)
        if bad is not None:
            kind = "least upper bound" if upward else "greatest lower bound"
            return CheckReport(False, bad, f"{bad[0]} and {bad[1]} have no {kind} inside the subset")
    return CheckReport(True, detail="lattice in the induced order")


def induced_completeness(P: Poset, T) -> CheckReport:
    """Every nonempty subset of T has a sup and an inf inside T.

    Exhaustive over all subsets up to the cap, pairwise above it.
    """
    ms = _members(P, T)
    if not ms:
        return CheckReport(False, (), "empty set is not a complete lattice")
    scan = _bound_scan if len(ms) <= EXHAUSTIVE_CAP else _pairwise_bound_scan
    for upward in (True, False):
        bad = scan(P, ms, upward)
        if bad is not None:
            kind = "supremum" if upward else "infimum"
            return CheckReport(False, bad, f"subset has no {kind} inside the set")
    return CheckReport(True, detail="complete lattice in the induced order")
