"""Exception hierarchy.

Every error knows the module that raised it and carries a ``details`` dict
that the CLI copies verbatim into the structured error entry of a report.
Input errors map to exit status 2, domain errors to 3 and invariant
breaches to 4.
"""

from __future__ import annotations

from typing import Any


class RealSliceError(Exception):
    exit_code = 4
    module = "realslice"

    def __init__(self, message: str, *, module: str | None = None, **details: Any):
        super().__init__(message)
        if module is not None:
            self.module = module
        self.details = details

    def to_dict(self) -> dict[str, Any]:
        entry: dict[str, Any] = {
            "module": self.module,
            "type": type(self).__name__,
            "message": str(self),
        }
        if self.details:
            entry["details"] = self.details
        return entry


class InputError(RealSliceError):
    """Malformed or inconsistent user input."""

    exit_code = 2


class DomainError(RealSliceError):
    """Well-formed input that violates a mathematical hypothesis."""

    exit_code = 3


class InvariantBreach(RealSliceError):
    """A computed identity or bound failed; this indicates a bug."""

    exit_code = 4


# poly
class MalformedInput(InputError):
    module = "poly"


class NotHomogeneous(InputError):
    module = "poly"


class ZeroPolynomial(InputError):
    module = "poly"


class DegreeMismatch(InputError):
    module = "poly"


class BothZero(InputError):
    module = "poly"


class DegreeZero(InputError):
    module = "poly"


class DependentPoints(InputError):
    module = "poly"


class IdenticallyZero(DomainError):
    module = "poly"


# orient
class RankDeficient(DomainError):
    module = "orient"


class DifferentSpans(DomainError):
    module = "orient"


class NotComplementary(DomainError):
    module = "orient"


class Singular(DomainError):
    module = "orient"


class NotTransverse(DomainError):
    module = "orient"


# solve
class InconsistentDims(InputError):
    module = "solve"


class CommonFactor(DomainError):
    module = "solve"


class Degenerate(DomainError):
    module = "solve"


class SingularOrTangent(DomainError):
    module = "solve"


# slices
class RealP(DomainError):
    module = "slice"


# linking
class RealRoot(DomainError):
    module = "linking"


class RootAtInfinity(DomainError):
    module = "linking"


class LineMeetsBase(DomainError):
    module = "linking"


class DegenerateAuxiliary(DomainError):
    module = "linking"


# cli
class ExhaustedRetries(DomainError):
    module = "cli"


class EmptyWindow(InputError):
    module = "cli"
