"""Exception types shared across the package."""


class LamconnError(Exception):
    """Base class for all package errors."""


class SourceMismatch(LamconnError):
    """Two homomorphisms do not share the required source/target rings."""


class RingMismatch(LamconnError):
    """An element or matrix belongs to a different ring than expected."""


class SquareZeroViolation(LamconnError):
    """A pair of homomorphisms is not square-zero close."""


class DegreeOverflow(LamconnError):
    """A Rees computation exceeded the configured t-degree bound."""


class ZeroLambda(LamconnError):
    """The scaling parameter must be invertible."""


class ZeroScalar(LamconnError):
    """A nonzero scalar was required."""


class PreconditionViolated(LamconnError):
    """A named operation precondition failed; the message says which."""


class UnsupportedTarget(LamconnError):
    """The target ring shape is not supported by the operation."""


class NotMultiplicative(LamconnError):
    """A transversal distribution failed the derivation/splitting property."""


class BodyMismatch(LamconnError):
    """The body of a tangent does not match the given point."""


class UnsupportedCover(LamconnError):
    """The cover shape is outside the supported desk scale."""


class NotCocycle(LamconnError):
    """Cech cocycle condition failed."""


class NotIntegrable(LamconnError):
    """A connection expected to be integrable has nonzero curvature."""


class CocycleViolation(LamconnError):
    """A tangent cocycle is invalid on the given cover."""


class ConditionFailed(LamconnError):
    """A hyper-cocycle condition failed.

    Carries the condition index (1, 2 or 3) and a witness string.
    """

    def __init__(self, index: int, witness: str):
        super().__init__(f"hyper-cocycle condition ({index}) failed: {witness}")
        self.index = index
        self.witness = witness


class ValidationFailed(LamconnError):
    """A deformed bundle failed validate_higgs; carries the report."""

    def __init__(self, report):
        super().__init__(f"deformed bundle validation failed: {report.first_failure()}")
        self.report = report


class WindowNotSaturated(LamconnError):
    """Widening the degree window changed a computed dimension."""

    def __init__(self, dim_narrow, dim_wide):
        super().__init__(
            f"window not saturated: dimension {dim_narrow} at default window, "
            f"{dim_wide} after widening by 2"
        )
        self.dim_narrow = dim_narrow
        self.dim_wide = dim_wide


class ParseError(LamconnError):
    """Syntax error in a scenario file or polynomial literal."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f" at line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(message + loc)
        self.line = line
        self.column = column


class ResolutionError(LamconnError):
    """A scenario references an undeclared name or ill-typed task parameter."""
