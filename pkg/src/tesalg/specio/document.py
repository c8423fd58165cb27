"""Document model for ``.tes`` files: declarations, queries and diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..core import Component

QUOTIENT_SIDES = ("right", "left", "commutative")


@dataclass(frozen=True)
class Location:
    line: int
    column: int

    def __str__(self):
        return f"{self.line}:{self.column}"


@dataclass
class Diagnostic:
    severity: str
    location: Optional[Location]
    message: str
    hint: Optional[str] = None

    def __str__(self):
        where = f"{self.location}: " if self.location else ""
        tail = f" (hint: {self.hint})" if self.hint else ""
        return f"{where}{self.severity}: {self.message}{tail}"


class SpecError(Exception):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(map(str, self.diagnostics)))


@dataclass
class ComponentDecl:
    name: str
    component: Component
    horizon: Fraction
    loc: Optional[Location] = field(default=None, compare=False)
    kind = "component"


@dataclass
class UniverseDecl:
    name: str
    interface: frozenset
    start: Fraction
    stop: Fraction
    step: Fraction
    maxobs: int
    dense: bool = False
    silent: bool = True
    loc: Optional[Location] = field(default=None, compare=False)
    kind = "universe"


@dataclass
class SignatureDecl:
    """A user signature: shared-event synchronisation (or none) plus linked event pairs."""

    name: str
    shared: str = "sync"
    links: tuple = ()
    merge: str = "union"
    period: Optional[Fraction] = None
    loc: Optional[Location] = field(default=None, compare=False)
    kind = "signature"


@dataclass
class ProductQuery:
    left: str
    right: str
    signature: str
    as_name: Optional[str] = None
    loc: Optional[Location] = field(default=None, compare=False)
    kind = "product"


@dataclass
class DivideQuery:
    dividend: str
    divisor: str
    signature: str
    universes: tuple
    choice: str
    side: str = "right"
    loc: Optional[Location] = field(default=None, compare=False)
    kind = "divide"


@dataclass
class ConformQuery:
    plant: str
    spec: str
    signature: str
    universes: tuple
    choice: str
    side: str = "right"
    loc: Optional[Location] = field(default=None, compare=False)
    kind = "conform"


@dataclass
class LawsQuery:
    signature: str
    names: tuple
    loc: Optional[Location] = field(default=None, compare=False)
    kind = "laws"


@dataclass
class ScenarioQuery:
    name: str
    params: tuple = ()
    loc: Optional[Location] = field(default=None, compare=False)
    kind = "scenario"


DECLARATIONS = (ComponentDecl, UniverseDecl, SignatureDecl)
QUERIES = (ProductQuery, DivideQuery, ConformQuery, LawsQuery, ScenarioQuery)


@dataclass
class SpecDocument:
    items: list = field(default_factory=list)

    @property
    def declarations(self) -> list:
        return [x for x in self.items if isinstance(x, DECLARATIONS)]

    @property
    def queries(self) -> list:
        return [x for x in self.items if isinstance(x, QUERIES)]

    def find(self, kind: str, name: str):
        for x in self.items:
            if x.kind == kind and getattr(x, "name", None) == name:
                return x
        return None


def link_pairs(links) -> tuple:
    return tuple(sorted(((a, b) for a, b in links), key=lambda p: (p[0].sort_key, p[1].sort_key)))

