"""Exception hierarchy shared by every layer of the toolkit."""


class FaultlocError(Exception):
    """Base class for all toolkit errors."""


class FormulaError(FaultlocError, ValueError):
    """Malformed clause database (variable index 0, out of range, ...)."""


class PreconditionError(FaultlocError, ValueError):
    """An operation was called on input that violates its precondition."""


class NoDiagnosisError(FaultlocError):
    """The hard part is unsatisfiable even with every component relaxed.

    For programs this usually means the unwinding bound is too small or the
    expected output cannot be produced by any relaxation of the program.
    """


class TimeoutExceeded(FaultlocError):
    """The cooperative deadline expired at an oracle call boundary."""


class EnumerationBudgetExceeded(FaultlocError):
    """An enumeration produced more items than the configured cap."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = dict(stats or {})


class ExhaustedRankingError(FaultlocError):
    """No ranked candidate diagnosis is consistent with all observations."""


class ParseError(FaultlocError, ValueError):
    """Located syntax or validation error in a BENCH netlist or mini-language program.

    ``kind`` is a short machine-readable tag such as ``"syntax"``,
    ``"undefined"``, ``"cyclic"``, ``"unknown-gate"``, ``"duplicate"``,
    ``"undeclared"``, ``"arity"`` or ``"unsupported"``.
    """

    def __init__(self, message, line=None, column=None, kind="syntax", source=None):
        self.message = message
        self.line = line
        self.column = column
        self.kind = kind
        self.source = source
        super().__init__(self._format())

    def _format(self):
        where = self.source or "<input>"
        if self.line is not None:
            where += f":{self.line}"
            if self.column is not None:
                where += f":{self.column}"
        return f"{where}: {self.kind} error: {self.message}"
