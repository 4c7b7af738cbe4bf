"""Exception types shared across the solver."""


class StrSatError(Exception):
    pass


class SolverSyntaxError(StrSatError):
    """Malformed input (lexical or s-expression level)."""

    def __init__(self, message, line=None, col=None):
        if line is not None:
            message = f"{message} at line {line}, column {col}"
        super().__init__(message)
        self.line = line
        self.col = col


class SortError(StrSatError):
    """Ill-typed application."""


class Unsupported(StrSatError):
    """A recognized SMT-LIB construct outside the supported fragment."""

    def __init__(self, construct: str):
        super().__init__(f"unsupported construct: {construct}")
        self.construct = construct


class ResourceExceeded(StrSatError):
    """An internal budget was exhausted; the driver answers unknown."""


class InternalInconsistency(StrSatError):
    """A soundness invariant was violated; never demoted to unknown."""
