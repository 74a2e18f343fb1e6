"""Exception types shared across the package."""


class LatticeFixError(Exception):
    pass


class DocumentError(LatticeFixError, ValueError):
    """Malformed or invalid input document.

    ``line``/``column`` are set when the failure is located in JSON text,
    ``path`` when it is a schema problem inside a parsed document.
    """

    def __init__(self, message, *, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        where = []
        if path:
            where.append(path)
        if line is not None:
            where.append(f"line {line}, column {column}")
        if where:
            message = f"{message} ({'; '.join(where)})"
        super().__init__(message)


class DuplicateElement(DocumentError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"duplicate element {element!r}")


class UnknownElement(DocumentError):
    def __init__(self, element, context="relation"):
        self.element = element
        super().__init__(f"unknown element {element!r} in {context}")


class AntisymmetryViolation(DocumentError):
    def __init__(self, x, y):
        self.elements = (x, y)
        super().__init__(f"order contains a cycle through distinct elements {x!r} and {y!r}")


class NotALattice(LatticeFixError):
    def __init__(self, x, y, bound):
        self.x, self.y, self.bound = x, y, bound
        kind = "greatest lower bound" if bound == "meet" else "least upper bound"
        super().__init__(f"{x!r} and {y!r} have no {kind}")


class ForeignSubset(LatticeFixError, ValueError):
    def __init__(self, elements):
        self.elements = tuple(elements)
        super().__init__(f"elements not in lattice: {', '.join(map(repr, self.elements))}")


class EmptySubset(LatticeFixError, ValueError):
    pass


class XNotInIntersection(LatticeFixError, ValueError):
    pass


class HypothesisViolated(LatticeFixError):
    """A procedure's preconditions do not hold; ``witness`` shows where."""

    def __init__(self, detail, witness=None):
        self.detail = detail
        self.witness = witness
        super().__init__(detail if witness is None else f"{detail}: witness {witness}")


class InternalContradiction(LatticeFixError, AssertionError):
    """A certified conclusion failed after its hypotheses were checked."""


class NotFixedPoints(LatticeFixError, ValueError):
    def __init__(self, elements):
        self.elements = tuple(elements)
        super().__init__(f"not fixed points: {', '.join(map(repr, self.elements))}")


class GenerationExhausted(LatticeFixError):
    pass


class InvalidGame(DocumentError):
    pass


class FeasibleNotSublattice(InvalidGame):
    def __init__(self, p, q, bound):
        self.witness = (p, q)
        self.bound = bound
        super().__init__(f"feasible set not closed under {bound}: {p} and {q}")


class ProjectionNotSurjective(InvalidGame):
    def __init__(self, player, strategy):
        self.player, self.strategy = player, strategy
        super().__init__(f"strategy {strategy!r} of player {player!r} appears in no feasible profile")


class PayoffMissing(InvalidGame):
    def __init__(self, player, profile):
        self.player, self.profile = player, profile
        super().__init__(f"player {player!r} has no payoff at profile {profile}")


class EmptySection(LatticeFixError, ValueError):
    pass


class InfeasibleProfile(LatticeFixError, ValueError):
    pass


class EquivalenceViolation(LatticeFixError):
    """Fixed points of the aggregate best-reply map differ from brute-force Nash."""
