"""JSON documents for lattices and correspondences, plus rational literals.

Lattice document::

    {"elements": ["0", "a", "b", "1"], "le": [["0", "a"], ["a", "1"], ...]}

``le`` may hold covers or any generating pairs.  Canonical output lists the
elements sorted and ``le`` as the sorted cover relation.

Correspondence document::

    {"lattice": <lattice document or path>, "map": {"0": ["0"], ...}}
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .errors import DocumentError
from .lattice import FiniteLattice, Poset, as_lattice, build_poset

_RATIONAL = re.compile(r"\s*(-?\d+)(?:\s*/\s*(\d+))?\s*\Z")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; ints are accepted as-is."""
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise DocumentError(f"expected a rational literal like \"3/2\", got {text!r}")
    m = _RATIONAL.match(text)
    if not m:
        raise DocumentError(f"malformed rational literal {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise DocumentError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def loads(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{source}: {exc.msg}", line=exc.lineno, column=exc.colno) from None


def load_path(path) -> object:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text, str(path))


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _expect(cond, message, path):
    if not cond:
        raise DocumentError(message, path=path)


def poset_from_doc(doc, path="$") -> Poset:
    _expect(isinstance(doc, dict), "lattice document must be an object", path)
    _expect("elements" in doc, "missing key 'elements'", path)
    elements = doc["elements"]
    _expect(isinstance(elements, list), "'elements' must be a list", f"{path}.elements")
    for k, e in enumerate(elements):
        _expect(isinstance(e, str) and e, "element ids must be nonempty strings", f"{path}.elements[{k}]")
    pairs = doc.get("le", [])
    _expect(isinstance(pairs, list), "'le' must be a list", f"{path}.le")
    for k, pr in enumerate(pairs):
        _expect(isinstance(pr, list) and len(pr) == 2 and all(isinstance(e, str) for e in pr),
                "each 'le' entry must be a pair of element ids", f"{path}.le[{k}]")
    return build_poset(elements, [tuple(p) for p in pairs])


def lattice_from_doc(doc, path="$") -> FiniteLattice:
    return as_lattice(poset_from_doc(doc, path))


def lattice_to_doc(P: Poset) -> dict:
    return {
        "elements": sorted(P.elements),
        "le": sorted([x, y] for x, y in P.covers()),
    }


def correspondence_from_doc(doc, base_dir=None, path="$", allow_empty=False):
    from .correspondence import Correspondence

    _expect(isinstance(doc, dict), "correspondence document must be an object", path)
    _expect("lattice" in doc and "map" in doc, "correspondence needs 'lattice' and 'map'", path)
    ldoc = doc["lattice"]
    if isinstance(ldoc, str):
        lpath = Path(ldoc)
        if base_dir is not None and not lpath.is_absolute():
            lpath = Path(base_dir) / lpath
        ldoc = load_path(lpath)
    L = lattice_from_doc(ldoc, f"{path}.lattice")
    mapping = doc["map"]
    _expect(isinstance(mapping, dict), "'map' must be an object", f"{path}.map")
    for x, v in mapping.items():
        _expect(isinstance(v, list) and all(isinstance(e, str) for e in v),
                "values must be lists of element ids", f"{path}.map.{x}")
        if not allow_empty:
            _expect(v, "values must be nonempty", f"{path}.map.{x}")
    try:
        return Correspondence(L, mapping, allow_empty=allow_empty)
    except DocumentError as exc:
        raise DocumentError(str(exc), path=f"{path}.map") from None


def correspondence_to_doc(F) -> dict:
    return {
        "lattice": lattice_to_doc(F.lattice),
        "map": {x: sorted(F[x]) for x in sorted(F.lattice.elements)},
    }
