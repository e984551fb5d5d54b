"""Exception hierarchy shared by every finicat module."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class FinicatError(Exception):
    """Base class for all user-facing errors raised by finicat."""


@dataclass(frozen=True)
class Violation:
    """One failed law, with the ids that witness the failure."""

    kind: str
    message: str
    witness: tuple[Any, ...] = field(default=())

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


class ReportError(FinicatError):
    """Raised when validation produced a non-empty list of violations."""

    def __init__(self, violations: list[Violation]):
        self.violations = list(violations)
        lines = [str(v) for v in self.violations[:10]]
        if len(self.violations) > 10:
            lines.append(f"... {len(self.violations) - 10} more")
        super().__init__("; ".join(lines))

    @property
    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


class InvalidCategory(ReportError):
    pass


class InvalidFunctor(ReportError):
    pass


class InvalidSieve(ReportError):
    pass


class CyclicGraph(FinicatError):
    pass


class InvalidGroupTable(FinicatError):
    pass


class UnknownObject(FinicatError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class UnknownMorphism(FinicatError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class SourceMismatch(FinicatError):
    pass


class ShapeMismatch(FinicatError):
    pass


class CodomainMismatch(FinicatError):
    pass


class TargetMismatch(FinicatError):
    pass


class NonCommutingSquare(FinicatError):
    pass


class NotAHomomorphism(FinicatError):
    pass


class SearchSpaceCapExceeded(FinicatError):
    """An exhaustive search would exceed its configured bound."""

    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: search space {size} exceeds cap {cap}")


class OracleCapExceeded(SearchSpaceCapExceeded):
    pass
