"""Exception hierarchy with stable machine-readable error codes.

Every error the kernel can raise on bad input carries a ``code`` string that
the CLI reports verbatim, so scripted callers can dispatch on it without
parsing prose.
"""

from __future__ import annotations


class DiffAlgError(Exception):
    """Base class for all kernel errors."""

    code = "DIFFALG_ERROR"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)


class DegenerateDivisorError(DiffAlgError):
    """Pseudo-division by a polynomial of degree 0 in the chosen variable."""

    code = "DEGENERATE_DIVISOR"


class ConstantReducerError(DiffAlgError):
    """Ritt reduction with a reducer free of the differential indeterminate."""

    code = "CONSTANT_REDUCER"


class IrreducibilityUnverifiedError(DiffAlgError):
    """Minimal-ideal membership requested without the caller's irreducibility pledge."""

    code = "IRREDUCIBILITY_UNVERIFIED"


class UnboundVariableError(DiffAlgError):
    """Evaluation hit a variable the jet point does not assign."""

    code = "UNBOUND_VARIABLE"


class InseparableError(DiffAlgError):
    """The formal derivative of a minimal polynomial is not invertible modulo it."""

    code = "INSEPARABLE_OR_NOT_SQUAREFREE"


class ZeroSaturationError(DiffAlgError):
    """Saturation by the zero polynomial."""

    code = "ZERO_SATURATION"


class EmptyVarietyError(DiffAlgError):
    """Dimension of the unit ideal requested."""

    code = "EMPTY_VARIETY"


class EquationInconsistentError(DiffAlgError):
    """The saturated prolongation ideal of an equation is the unit ideal."""

    code = "EQUATION_INCONSISTENT"


class TrivialWitnessError(DiffAlgError):
    """A witness check with the zero relation."""

    code = "TRIVIAL_WITNESS"


class InvalidWitnessRelationError(DiffAlgError):
    """Witness relation touching jets at or above the equation order."""

    code = "INVALID_WITNESS_RELATION"


class NotAutonomousCoefficientError(DiffAlgError):
    """A Lienard coefficient involving derivatives of the unknown."""

    code = "NOT_AUTONOMOUS_COEFFICIENT"


class InvalidModularDataError(DiffAlgError):
    """Modular polynomial data file failed validation."""

    code = "INVALID_MODULAR_DATA"


class ZeroDenominatorError(DiffAlgError):
    """A rational differential function with zero denominator."""

    code = "ZERO_DENOMINATOR"


class InvalidEquationError(DiffAlgError):
    """A rational function violating the order contract for equations."""

    code = "INVALID_EQUATION"


class ParseError(DiffAlgError):
    """Syntax error in the expression language, with source position."""

    code = "PARSE_ERROR"

    def __init__(self, message: str, line: int = 1, col: int = 0):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col
