"""Set-valued self-maps on finite lattices and their fixed points.

Besides brute-force fixed-point enumeration this module provides the
constructive routes to least fixed points (via the set ``C`` of elements
lying above some point of their value, and via minimum selections) and the
supremum of a set of fixed points computed inside ``Fix(F)`` by restricting
to the upper interval above the ambient supremum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import (
    DocumentError,
    EmptySubset,
    HypothesisViolated,
    InternalContradiction,
    NotFixedPoints,
)
from .lattice import (
    CONCLUSION_VIOLATED,
    HYPOTHESES_NOT_MET,
    VERIFIED,
    CheckReport,
    Element,
    FiniteLattice,
    SubsetView,
    _members,
    _plain,
    induced_completeness,
    induced_lattice_check,
    induced_sup,
    is_chain_subcomplete,
    is_subcomplete,
)

THEOREMS = ("fact_zhou", "thm_myZhou", "thm_cpltval")
_THEOREM_ALIASES = {
    "fact_zhou": "fact_zhou", "fact-zhou": "fact_zhou",
    "thm_myZhou": "thm_myZhou", "myzhou": "thm_myZhou", "thm_myzhou": "thm_myZhou",
    "thm_cpltval": "thm_cpltval", "cpltval": "thm_cpltval",
}


def theorem_id(name: str) -> str:
    try:
        return _THEOREM_ALIASES[name]
    except KeyError:
        raise ValueError(f"unknown theorem {name!r}; expected one of {', '.join(THEOREMS)}") from None


@dataclass(frozen=True)
class AscendingReport:
    ascending: bool
    lower_v: bool
    upper_v: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def v_ascending(self):
        return self.lower_v and self.upper_v

    def to_doc(self):
        return {
            "ascending": self.ascending,
            "lower_v": self.lower_v,
            "upper_v": self.upper_v,
            "witnesses": {k: _plain(v) for k, v in sorted(self.witnesses.items())},
        }


class Correspondence:
    """Total map from lattice elements to subsets of the lattice.

    Values must be nonempty unless ``allow_empty`` is set; the relaxed form
    only exists for probing what happens when that hypothesis is dropped.
    """

    def __init__(self, lattice: FiniteLattice, values: Mapping[Element, Iterable[Element]],
                 *, allow_empty: bool = False):
        self.lattice = lattice
        self.allow_empty = allow_empty
        missing = [x for x in lattice.elements if x not in values]
        if missing:
            raise DocumentError(f"correspondence has no value at {', '.join(missing)}")
        extra = [x for x in values if x not in lattice.index]
        if extra:
            raise DocumentError(f"correspondence keys not in lattice: {', '.join(map(str, extra))}")
        self._values = {}
        for x in lattice.elements:
            v = values[x]
            vs = (v,) if isinstance(v, str) else tuple(v)
            bad = [y for y in vs if y not in lattice.index]
            if bad:
                raise DocumentError(f"value at {x!r} contains unknown elements {', '.join(map(str, bad))}")
            if not vs and not allow_empty:
                raise DocumentError(f"value at {x!r} is empty")
            self._values[x] = frozenset(vs)
        self._ordered = {x: lattice.ordered(v) for x, v in self._values.items()}

    def __getitem__(self, x: Element) -> frozenset:
        return self._values[x]

    def value(self, x: Element) -> tuple[Element, ...]:
        """Value at ``x`` in lattice order."""
        return self._ordered[x]

    def items(self):
        return ((x, self._ordered[x]) for x in self.lattice.elements)

    def fixed(self) -> tuple[Element, ...]:
        return tuple(x for x in self.lattice.elements if x in self._values[x])

    def dual(self) -> "Correspondence":
        return Correspondence(self.lattice.dual(), self._values, allow_empty=self.allow_empty)

    def restrict(self, sub: FiniteLattice) -> "Correspondence":
        keep = frozenset(sub.elements)
        return Correspondence(sub, {x: self._values[x] & keep for x in sub.elements}, allow_empty=True)

    def __eq__(self, other):
        if not isinstance(other, Correspondence):
            return NotImplemented
        return self.lattice == other.lattice and self._values == other._values

    def __hash__(self):
        return hash((self.lattice, frozenset(self._values.items())))

    def __repr__(self):
        body = ", ".join(f"{x}: {{{', '.join(v)}}}" for x, v in self.items())
        return f"Correspondence({body})"

    @cached_property
    def ascending_report(self) -> AscendingReport:
        return _scan_ascending(self)

    @cached_property
    def least_elements(self) -> dict:
        """Least element of each value (None where there is none)."""
        L = self.lattice
        return {x: L.least(v) for x, v in self._ordered.items()}

    @cached_property
    def greatest_elements(self) -> dict:
        L = self.lattice
        return {x: L.greatest(v) for x, v in self._ordered.items()}


def _scan_ascending(F: Correspondence) -> AscendingReport:
    L = F.lattice
    wit = {}
    for x in L.elements:
        fx = F[x]
        for xp in L.ordered(L.up(x)):
            strict = xp != x
            fxp = F[xp]
            for y in F.value(x):
                for yp in F.value(xp):
                    m_ok = L.meet(y, yp) in fx
                    j_ok = L.join(y, yp) in fxp
                    if m_ok and j_ok:
                        continue
                    w = (x, xp, y, yp)
                    wit.setdefault("ascending", w)
                    if strict:
                        if not m_ok:
                            wit.setdefault("lower_v", w)
                        if not j_ok:
                            wit.setdefault("upper_v", w)
            if len(wit) == 3:
                break
        if len(wit) == 3:
            break
    return AscendingReport("ascending" not in wit, "lower_v" not in wit, "upper_v" not in wit, wit)


def _ascending_detail(F, w):
    x, xp, y, yp = w
    L = F.lattice
    if L.meet(y, yp) not in F[x]:
        return f"meet({y}, {yp}) = {L.meet(y, yp)} is not in F({x})"
    return f"join({y}, {yp}) = {L.join(y, yp)} is not in F({xp})"


def is_ascending(F: Correspondence) -> CheckReport:
    rep = F.ascending_report
    if rep.ascending:
        return CheckReport(True, detail="ascending")
    w = rep.witnesses["ascending"]
    return CheckReport(False, w, "not ascending: " + _ascending_detail(F, w))


def is_v_ascending(F: Correspondence) -> AscendingReport:
    return F.ascending_report


def values_subcomplete(F: Correspondence) -> CheckReport:
    for x, v in F.items():
        if not v:
            return CheckReport(False, (x,), f"F({x}) is empty")
        rep = is_subcomplete(F.lattice, v)
        if not rep.holds:
            return CheckReport(False, (x,) + rep.witness, f"F({x}) not a sublattice: {rep.detail}")
    return CheckReport(True, detail="every value is a nonempty subcomplete sublattice")


def values_chain_subcomplete(F: Correspondence) -> CheckReport:
    for x, v in F.items():
        if not v:
            return CheckReport(False, (x,), f"F({x}) is empty")
        rep = is_chain_subcomplete(F.lattice, v, "both")
        if not rep.holds:
            return CheckReport(False, (x,) + rep.witness, f"F({x}) not chain-subcomplete: {rep.detail}")
    return CheckReport(True, detail="every value is nonempty and chain-subcomplete")


def values_complete(F: Correspondence) -> CheckReport:
    """Each value is a nonempty lattice in the induced order (complete, being finite)."""
    for x, v in F.items():
        rep = induced_lattice_check(F.lattice, v)
        if not rep.holds:
            return CheckReport(False, (x,) + rep.witness, f"F({x}) not a lattice: {rep.detail}")
    return CheckReport(True, detail="every value is a nonempty complete lattice")


# -- fixed points ----------------------------------------------------------


@dataclass(frozen=True)
class FixedPointSet:
    members: SubsetView
    least: Element | None
    greatest: Element | None
    is_complete_lattice: bool

    def to_doc(self):
        return {
            "members": list(self.members.ordered()),
            "least": self.least,
            "greatest": self.greatest,
            "is_complete_lattice": self.is_complete_lattice,
        }


def fixed_points_brute(F: Correspondence) -> FixedPointSet:
    L = F.lattice
    fix = F.fixed()
    return FixedPointSet(
        members=L.subset(fix),
        least=L.least(fix),
        greatest=L.greatest(fix),
        is_complete_lattice=induced_lattice_check(L, fix).holds,
    )


def _require_nonempty(F):
    for x, v in F.items():
        if not v:
            raise HypothesisViolated("correspondence has an empty value", (x,))


def _require_v(F, side):
    rep = F.ascending_report
    ok = rep.lower_v if side == "lower" else rep.upper_v
    if not ok:
        key = "lower_v" if side == "lower" else "upper_v"
        raise HypothesisViolated(f"correspondence is not {side} V-ascending", rep.witnesses[key])


def _least_via_c(F: Correspondence, check=True):
    L = F.lattice
    if check:
        _require_nonempty(F)
        _require_v(F, "lower")
    C = [c for c in L.elements if any(L.le(x, c) for x in F.value(c))]
    a = L.inf(C)
    if a not in F[a]:
        raise InternalContradiction(f"inf C = {a} is not a fixed point")
    if not all(L.le(a, e) for e in F.fixed()):
        raise InternalContradiction(f"inf C = {a} is not below every fixed point")
    return a


def _require_bounds(F, side):
    bounds = F.least_elements if side == "lower" else F.greatest_elements
    for x in F.lattice.elements:
        if bounds[x] is None:
            word = "least" if side == "lower" else "greatest"
            raise HypothesisViolated(f"F({x}) has no {word} element", (x,))


def _least_via_min(F: Correspondence, check=True):
    L = F.lattice
    mins = F.least_elements
    if check:
        _require_bounds(F, "lower")
        _require_v(F, "lower")
    A = [x for x in L.elements if L.le(mins[x], x)]
    x_star = L.inf(A)
    if x_star not in F[x_star]:
        raise InternalContradiction(f"inf A = {x_star} is not a fixed point")
    if not all(L.le(x_star, e) for e in F.fixed()):
        raise InternalContradiction(f"inf A = {x_star} is not below every fixed point")
    return x_star


def least_fixed_point_infC(F: Correspondence, *, check: bool = True) -> Element:
    """Least fixed point as the infimum of ``{c : some x in F(c) has x <= c}``.

    Requires lower V-ascendingness and nonempty values; raises
    :class:`HypothesisViolated` with a witness otherwise.
    """
    return _least_via_c(F, check)


def least_fixed_point_minsel(F: Correspondence, *, check: bool = True) -> Element:
    """Least fixed point as the infimum of ``{x : min F(x) <= x}``.

    Every value must have a least element.
    """
    return _least_via_min(F, check)


def greatest_fixed_point(F: Correspondence, method: str = "infC", *, check: bool = True) -> Element:
    """Greatest fixed point, computed as the least one on the dual lattice."""
    if method in ("infC", "inf-c", "infc"):
        if check:
            _require_nonempty(F)
            _require_v(F, "upper")
        return _least_via_c(F.dual(), check=False)
    if method in ("minsel", "min-sel"):
        if check:
            _require_bounds(F, "upper")
            _require_v(F, "upper")
        # least elements of the dual are greatest elements of the original
        return _least_via_min(F.dual(), check=False)
    raise ValueError(f"unknown method {method!r}")


def _theorem_hypotheses(F: Correspondence, theorem: str) -> CheckReport:
    if theorem == "fact_zhou":
        vals = values_subcomplete(F)
        if not vals.holds:
            return vals
        return is_ascending(F)
    if theorem == "thm_myZhou":
        vals = values_chain_subcomplete(F)
    else:
        vals = values_complete(F)
    if not vals.holds:
        return vals
    rep = F.ascending_report
    for key, side in (("lower_v", "lower"), ("upper_v", "upper")):
        if not getattr(rep, key):
            w = rep.witnesses[key]
            return CheckReport(False, w, f"not {side} V-ascending: " + _ascending_detail(F, w))
    return CheckReport(True, detail="hypotheses hold")


def theorem_hypotheses(F: Correspondence, theorem: str) -> CheckReport:
    return _theorem_hypotheses(F, theorem_id(theorem))


def sup_fix_over_subset(F: Correspondence, U, variant: str = "chain_subcomplete") -> Element:
    """Least upper bound of fixed points ``U`` taken inside ``Fix(F)``.

    If the ambient supremum ``b`` is itself fixed it is the answer.  Otherwise
    the map is cut down to the interval ``[b, top]``, nonemptiness of the cut
    values is certified as in the corresponding existence argument, and the
    least fixed point of the restricted map is returned.
    """
    if variant not in ("chain_subcomplete", "complete_values"):
        raise ValueError(f"unknown variant {variant!r}")
    L = F.lattice
    us = _members(L, U)
    if not us:
        raise EmptySubset("U must be nonempty")
    outside = [u for u in us if u not in F[u]]
    if outside:
        raise NotFixedPoints(outside)
    hyp = _theorem_hypotheses(F, "thm_myZhou" if variant == "chain_subcomplete" else "thm_cpltval")
    if not hyp.holds:
        raise HypothesisViolated(hyp.detail, hyp.witness)

    b = L.sup(us)
    if b in F[b]:
        return b
    Lp = L.interval(b)
    Fp = F.restrict(Lp)
    if variant == "chain_subcomplete":
        beta = F.value(b)[0]
        top_a = L.sup(us + (beta,))
        if top_a not in F[b]:
            raise InternalContradiction(f"sup of U and {beta} = {top_a} escapes F({b})")
        for s in Lp.elements:
            if s != b and L.join(F.value(s)[0], top_a) not in Fp[s]:
                raise InternalContradiction(f"restricted value at {s} is empty")
        m = least_fixed_point_infC(Fp)
    else:
        for x in Lp.elements:
            low = F.least_elements[x]
            lifts = {L.join(t, low) for t in us}
            if not lifts <= F[x]:
                raise InternalContradiction(f"lifts of U by min F({x}) escape F({x})")
            v = induced_sup(L, F[x], lifts)
            if v is None or v not in Fp[x] or Fp.least_elements[x] != v:
                raise InternalContradiction(f"v({x}) is not the least element of the restricted value")
        m = least_fixed_point_minsel(Fp)
    if m not in F[m]:
        raise InternalContradiction(f"{m} is not a fixed point of F")
    return m


def verify_fix_complete(F: Correspondence, theorem: str) -> CheckReport:
    """Check a theorem's hypotheses on ``F`` and, if they hold, its conclusion
    that ``Fix(F)`` is a nonempty complete lattice (by brute force)."""
    theorem = theorem_id(theorem)
    hyp = _theorem_hypotheses(F, theorem)
    if not hyp.holds:
        return CheckReport(False, hyp.witness, "hypotheses not met: " + hyp.detail, HYPOTHESES_NOT_MET)
    fix = F.fixed()
    shown = "{" + ",".join(fix) + "}"
    if not fix:
        return CheckReport(False, (), "conclusion violated: Fix is empty", CONCLUSION_VIOLATED)
    rep = induced_completeness(F.lattice, fix)
    if not rep.holds:
        return CheckReport(False, rep.witness, f"conclusion violated: Fix = {shown}; {rep.detail}",
                           CONCLUSION_VIOLATED)
    return CheckReport(True, detail=f"hypotheses hold; Fix = {shown}; complete lattice", status=VERIFIED)
