from __future__ import annotations


class DynkinError(Exception):
    """Base class for domain errors raised by this package."""

    kind = "error"

    def to_json(self) -> dict:
        return {"error": self.kind, "message": str(self)}


class DiagramSyntaxError(DynkinError, ValueError):
    kind = "syntax"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position

    def to_json(self) -> dict:
        return {**super().to_json(), "position": self.position}


class CartanAxiomError(DynkinError, ValueError):
    kind = "axiom"

    def __init__(self, axiom: str, indices: list[int], message: str):
        super().__init__(f"axiom ({axiom}) violated: {message}")
        self.axiom = axiom
        self.indices = list(indices)

    def to_json(self) -> dict:
        return {**super().to_json(), "axiom": self.axiom, "positions": [i + 1 for i in self.indices]}


class NotSymmetrisable(DynkinError):
    kind = "not_symmetrisable"

    def __init__(self, cycle: list[int]):
        super().__init__(f"inconsistent weight ratios around cycle {[i + 1 for i in cycle]}")
        self.cycle = list(cycle)

    def to_json(self) -> dict:
        return {**super().to_json(), "cycle": [i + 1 for i in self.cycle]}


class NotExpressible(DynkinError):
    kind = "not_expressible"


class OrientationError(DynkinError, ValueError):
    kind = "orientation"


class PatternMismatch(DynkinError, ValueError):
    kind = "pattern_mismatch"


class NotConnected(DynkinError, ValueError):
    kind = "not_connected"


class BoundExceeded(DynkinError, ValueError):
    kind = "bound_exceeded"


class NotFiniteWithinGuard(DynkinError):
    kind = "not_finite_within_guard"

    def __init__(self, trigger: str, witness: list[int] | None, limit: int):
        detail = f"coefficient bound {limit} exceeded by {witness}" if trigger == "coefficient" else f"more than {limit} roots"
        super().__init__(f"closure did not terminate: {detail}")
        self.trigger = trigger
        self.witness = witness
        self.limit = limit

    def to_json(self) -> dict:
        return {**super().to_json(), "trigger": self.trigger, "witness": self.witness, "limit": self.limit}
