"""
Exception hierarchy shared by the kernel, the geometry layer and the CLI.

Every error carries a diagnostic ``code`` and the process exit status the
CLI maps it to.
"""
from enum import IntEnum
from typing import Any, Dict, List, Optional


class ExitStatus(IntEnum):
    SEPARABLE = 0
    GENERIC_ONLY = 1
    NOT_SEPARABLE = 2
    UNSUPPORTED = 3
    INPUT_ERROR = 4


class SemisepError(Exception):
    """Base class of all engine errors."""

    code = "E_INTERNAL"
    exit_status = ExitStatus.INPUT_ERROR

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        out = {"code": self.code, "message": self.message}
        if self.details:
            out["details"] = {k: str(v) for k, v in sorted(self.details.items())}
        return out


# --- input errors (exit 4) -------------------------------------------------

class InputError(SemisepError):
    code = "E_INPUT"


class SceneSyntaxError(InputError):
    code = "E_SYNTAX"

    def __init__(self, message: str, line: int = 0, column: int = 0, **details: Any):
        super().__init__(f"{message} (line {line}, column {column})", line=line, column=column, **details)
        self.line = line
        self.column = column


class UnknownPolynomialError(InputError):
    code = "E_REFERENCE"


class DisjointnessError(InputError):
    code = "E_OVERLAP"


class FactorizationError(InputError):
    code = "E_FACTOR"


class IncompleteFactorizationError(InputError):
    code = "E_FACTOR_INCOMPLETE"


# --- unsupported instances (exit 3) ---------------------------------------

class UnsupportedInstanceError(SemisepError):
    code = "E_UNSUPPORTED"
    exit_status = ExitStatus.UNSUPPORTED


class NonTerminationError(UnsupportedInstanceError):
    code = "E_ROUNDS"

    def __init__(self, message: str, failures: Optional[List[Any]] = None):
        super().__init__(message, failures=failures or [])
        self.failures = list(failures or [])


# --- kernel preconditions ---------------------------------------------------

class ArityError(SemisepError, ValueError):
    code = "E_ARITY"


class NonDivisibleError(SemisepError, ArithmeticError):
    code = "E_DIVIDE"


class DegenerateInputError(SemisepError, ValueError):
    code = "E_DEGENERATE"


class ParityError(SemisepError, ValueError):
    code = "E_PARITY"


class StructureError(SemisepError, TypeError):
    code = "E_STRUCTURE"


class PreconditionError(SemisepError, ValueError):
    code = "E_PRECONDITION"
