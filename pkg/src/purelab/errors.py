"""Exception hierarchy shared by every module.

Each error carries a machine-readable ``kind`` (the class name), an optional
``location`` string and a dict of ``details``; the CLI turns these into the
error object it prints on exit code 2.
"""

from __future__ import annotations

from typing import Any


class PurelabError(Exception):
    def __init__(self, message: str, location: str | None = None, **details: Any):
        super().__init__(message)
        self.message = message
        self.location = location
        self.details = details
        self.file: str | None = None

    @property
    def kind(self) -> str:
        return type(self).__name__

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"error": self.kind, "message": self.message}
        if self.file is not None:
            out["file"] = self.file
        if self.location is not None:
            out["location"] = self.location
        if self.details:
            out["details"] = {k: _jsonable(v) for k, v in self.details.items()}
        return out


def _jsonable(v: Any) -> Any:
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    return str(v)


# category tables
class DuplicateName(PurelabError): pass
class BadTyping(PurelabError): pass
class MissingComposite(PurelabError): pass
class NonAssociative(PurelabError): pass
class NotAssociative(NonAssociative): pass
class BadUnit(PurelabError): pass
class NotAPoset(PurelabError): pass
class UnknownObject(PurelabError): pass

# presheaves and homs
class CompositionViolation(PurelabError): pass
class EmptyActionEntry(PurelabError): pass
class ElementNotInAmbient(PurelabError): pass
class NaturalityViolation(PurelabError): pass
class DifferentAmbient(PurelabError): pass
class UnknownElement(PurelabError): pass

# limits
class NotMono(PurelabError): pass
class SourceMismatch(PurelabError): pass
class TargetMismatch(PurelabError): pass
class IncompatibleSquare(PurelabError): pass

# connectivity
class BaseNotClosed(PurelabError): pass
class ElementInBase(PurelabError): pass

# purity
class BadParameters(PurelabError): pass
class SortMismatch(PurelabError): pass
class NotPureInputs(PurelabError): pass
class ConnectivityPreconditionFailed(PurelabError): pass
class NotSolvableInL(PurelabError): pass

# witness
class SeedConditionViolated(PurelabError): pass
class GluingNotMono(PurelabError): pass
class BadSpan(PurelabError): pass

# file plumbing
class FileNotFound(PurelabError): pass
class MalformedJson(PurelabError): pass
