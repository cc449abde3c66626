"""Exception hierarchy shared by every layer of the package."""


class DiracError(Exception):
    """Base class for all errors raised by diracgeom."""


class ParseError(DiracError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class UnknownVariable(DiracError):
    pass


class UnknownVariableInText(ParseError, UnknownVariable):
    pass


class VariableMismatch(DiracError):
    """Operands live over different variable sets."""


class DivisionByZero(DiracError):
    pass


class DenominatorVanishes(DiracError):
    """An expression is undefined at the requested point."""


class DimensionMismatch(DiracError):
    pass


class NotSkew(DiracError):
    pass


class NotLagrangian(DiracError):
    pass


class TransversalityFailed(DiracError):
    pass


class DegenerateFrame(DiracError):
    pass


class NotClosed(DiracError):
    pass


class NotAdmissible(DiracError):
    pass


class NotASection(DiracError):
    pass


class SingularPoint(DiracError):
    pass


class NotASubmersionAtProbe(DiracError):
    pass


class InvarianceViolated(DiracError):
    def __init__(self, message: str, pair=None):
        self.pair = pair
        super().__init__(message)


class ConsistencyError(DiracError):
    """Two independent routes to the same quantity disagreed."""


class NotOnConstraint(DiracError):
    pass


class RankDropInPsi(DiracError):
    pass


class NotPoisson(DiracError):
    pass


class SecondClassViolated(DiracError):
    pass


class NotCosymplecticAtPoint(DiracError):
    pass


class InvalidParametrization(DiracError):
    pass


class NearSingularConstraintMatrix(DiracError):
    pass


class StepRejected(DiracError):
    pass
