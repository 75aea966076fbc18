"""Exception hierarchy and the small verdict/report containers shared by the checkers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, NamedTuple


class MetaloopError(Exception):
    """Base class for all errors raised by the package."""

    exit_code = 1

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class InputError(MetaloopError):
    """Malformed input: bad index, bad file, bad parameters."""

    exit_code = 2


class StructureError(MetaloopError):
    """The structure lacks a property the operation needs (e.g. not a quasigroup)."""


class PreconditionError(MetaloopError):
    """A checkable hypothesis of a construction does not hold; ``witness`` says where."""


class FactorRejected(StructureError):
    """A factor system produced a table that is not a loop."""


class ResourceError(MetaloopError):
    """A configured size bound would be exceeded."""

    exit_code = 3


class Verdict(NamedTuple):
    """Outcome of a single check. Falsy when the check failed.

    ``witness`` is the lexicographically first violating tuple, or None.
    """

    ok: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return bool(self.ok)


PASS = Verdict(True)


@dataclass
class Report:
    """Itemised results of a battery of checks.

    Items in ``info`` are reported but do not enter the overall verdict.
    """

    title: str
    items: dict[str, Verdict] = field(default_factory=dict)
    info: dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, verdict: Verdict | bool, witness: Any = None) -> Verdict:
        if not isinstance(verdict, Verdict):
            verdict = Verdict(bool(verdict), witness)
        self.items[name] = verdict
        return verdict

    @property
    def ok(self) -> bool:
        return all(self.items.values())

    def __bool__(self) -> bool:
        return self.ok

    def __getitem__(self, name: str) -> Verdict:
        return self.items[name]

    def failures(self) -> dict[str, Verdict]:
        return {k: v for k, v in self.items.items() if not v}

    def lines(self) -> list[str]:
        out = [f"{self.title}: {'PASS' if self.ok else 'FAIL'}"]
        for name, v in self.items.items():
            tail = "" if v.ok or v.witness is None else f"  witness={v.witness}"
            out.append(f"  [{'pass' if v.ok else 'FAIL'}] {name}{tail}")
        for name, value in self.info.items():
            out.append(f"  (info) {name}: {value}")
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "title": self.title,
            "ok": self.ok,
            "items": {k: {"ok": v.ok, "witness": _jsonable(v.witness)} for k, v in self.items.items()},
            "info": {k: _jsonable(v) for k, v in self.info.items()},
        }


def _jsonable(x: Any) -> Any:
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(y) for y in x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if hasattr(x, "item"):
        return x.item()
    return x
