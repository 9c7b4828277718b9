"""Exception hierarchy shared by every module of the toolkit."""
from __future__ import annotations

from typing import Any


class PMatrixToolkitError(Exception):
    """Base class; the CLI maps every subclass to exit code 2."""


class DimensionError(PMatrixToolkitError, ValueError):
    """Operands have incompatible shapes or an index is out of range."""


class ScalarKindError(PMatrixToolkitError, ValueError):
    """Float and exact-rational operands were mixed where exactness is promised."""


class SingularMatrixError(PMatrixToolkitError, ArithmeticError):
    """A linear system has no unique solution."""


class CapExceededError(PMatrixToolkitError, ValueError):
    """An exhaustive enumeration was requested above its configured size cap."""

    def __init__(self, what: str, n: int, cap: int) -> None:
        super().__init__(f"{what}: n={n} exceeds the configured cap {cap}")
        self.what = what
        self.n = n
        self.cap = cap


class MethodDisagreementError(PMatrixToolkitError):
    """The minors path and the sign-reversal path returned different verdicts."""

    def __init__(self, minors_verdict: Any, witness: Any) -> None:
        super().__init__(
            "minors and sign-reversal verdicts disagree "
            f"(minors is_p={getattr(minors_verdict, 'is_p', None)}, witness={witness!r}); "
            "this indicates a numerical boundary case"
        )
        self.minors_verdict = minors_verdict
        self.witness = witness


class NotOrthogonalError(DimensionError):
    """A basis change or conjugation was given a non-orthogonal matrix."""


class InputFormatError(PMatrixToolkitError, ValueError):
    """A matrix, vector or operator-spec file could not be parsed."""


class UnknownPresetError(PMatrixToolkitError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown preset"


class ConfigError(PMatrixToolkitError, ValueError):
    """An environment setting has an invalid value."""


class InvalidSpecError(PMatrixToolkitError, ValueError):
    """An operator spec names an unknown kind or sequence, or breaks a kind's requirement."""
