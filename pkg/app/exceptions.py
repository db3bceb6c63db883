"""Error types raised by the engine."""
from typing import Optional


class SptError(Exception):
    """Base class for every error the engine reports to callers."""


class SptSyntaxError(SptError):
    """Lexical or syntactic error in .spt source."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"{message} (line {line}, column {col})")


class WellFormednessError(SptError):
    """Source parsed but violates a static rule (clock/channel misuse, bad sets)."""


class UnknownIdentifierError(SptError):
    """An identifier has no binding in the definition environment."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Unknown identifier: {name}")


class DivergenceError(SptError):
    """Unfolding an identifier re-entered itself without passing a guard."""

    def __init__(self, name: str, detail: Optional[str] = None):
        self.name = name
        msg = f"Unguarded recursion through identifier {name}"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)


class ArgumentError(SptError):
    """Invalid argument to an engine operation."""
