"""Exception hierarchy shared by all absolver modules."""


class AbsolverError(Exception):
    pass


class GeometryError(AbsolverError):
    pass


class CoincidentPoints(GeometryError):
    pass


class IdenticalObjects(GeometryError):
    pass


class DegenerateAngle(GeometryError):
    pass


class PointOnLine(GeometryError):
    pass


class DirectionNotIdealEnd(GeometryError):
    pass


class UnsupportedInBackend(GeometryError):
    pass


class ResultOutsideModel(GeometryError):
    pass


class KBError(AbsolverError):
    pass


class KBSyntaxError(KBError):
    def __init__(self, message, line=0, col=0):
        super().__init__(f"{message} (line {line}, col {col})")
        self.line = line
        self.col = col


class UnknownSymbol(KBError):
    pass


class DuplicateRuleId(KBError):
    pass


class InstantiationBudgetExceeded(KBError):
    pass


class GoalsNotConstructed(AbsolverError):
    pass


class DegenerateTriangle(AbsolverError):
    pass


class NondegeneracyViolated(AbsolverError):
    def __init__(self, step, detail=""):
        super().__init__(f"non-degeneracy violated at step {step}: {detail}")
        self.step = step


class StepFailed(AbsolverError):
    def __init__(self, step, cause):
        super().__init__(f"step {step} failed: {cause}")
        self.step = step
        self.cause = cause


class MissingCoordinates(AbsolverError):
    pass


class IoFailure(AbsolverError):
    pass
