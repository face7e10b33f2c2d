"""Syntax tree for the supported FSP subset.

Nodes are frozen dataclasses so that two parses of the same text compare
equal; source positions are deliberately not part of the tree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


# -- expressions ---------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # '!' or '-'
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str  # '&&' and '&' are both stored as '&&'
    left: "Expr"
    right: "Expr"


Expr = Union[Num, Name, Unary, Binary]


@dataclass(frozen=True)
class RangeSpec:
    """``lo..hi`` written inline, or a reference to a declared range by name."""
    lo: Optional[Expr] = None
    hi: Optional[Expr] = None
    range_name: Optional[str] = None


# A label pattern is a tuple of parts: identifier/integer segments (str),
# bracketed index expressions (Expr), and, in progress sets and process
# labels only, bracketed ranges (RangeSpec).
LabelPart = Union[str, Expr, RangeSpec]
LabelPattern = tuple


# -- process bodies ------------------------------------------------------

@dataclass(frozen=True)
class Stop:
    pass


@dataclass(frozen=True)
class LocalRef:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class ActionPrefix:
    action: LabelPattern
    continuation: "Body"


@dataclass(frozen=True)
class Guarded:
    guard: Expr
    branch: "Body"


@dataclass(frozen=True)
class Choice:
    branches: tuple


Body = Union[Stop, LocalRef, ActionPrefix, Guarded, Choice]


@dataclass(frozen=True)
class IndexBinding:
    var: str
    range: RangeSpec


@dataclass(frozen=True)
class LocalDef:
    name: str
    indices: tuple = ()  # of IndexBinding
    body: Body = field(default_factory=Stop)


@dataclass(frozen=True)
class ProcessDef:
    name: str
    parameters: tuple = ()  # of (name, default Expr)
    locals: tuple = ()  # of LocalDef; locals[0] is the entry point
    is_property: bool = False

    def local(self, name: str) -> Optional[LocalDef]:
        for loc in self.locals:
            if loc.name == name:
                return loc
        return None


# -- composition ---------------------------------------------------------

@dataclass(frozen=True)
class CompRef:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class CompParallel:
    items: tuple


@dataclass(frozen=True)
class CompLabeled:
    prefix: LabelPattern
    body: "CompExpr"


@dataclass(frozen=True)
class CompRelabel:
    body: "CompExpr"
    pairs: tuple  # of (new LabelPattern, old LabelPattern)


CompExpr = Union[CompRef, CompParallel, CompLabeled, CompRelabel]


@dataclass(frozen=True)
class CompositeDef:
    name: str
    expr: CompExpr


@dataclass(frozen=True)
class ProgressDef:
    name: str
    actions: tuple  # of LabelPattern


@dataclass(frozen=True)
class SpecAst:
    constants: tuple = ()  # of (name, Expr), declaration order
    ranges: tuple = ()  # of (name, lo Expr, hi Expr)
    processes: tuple = ()  # of ProcessDef
    composites: tuple = ()  # of CompositeDef
    progress_defs: tuple = ()  # of ProgressDef

    def process(self, name: str) -> Optional[ProcessDef]:
        for p in self.processes:
            if p.name == name:
                return p
        return None

    def composite(self, name: str) -> Optional[CompositeDef]:
        for c in self.composites:
            if c.name == name:
                return c
        return None

    def progress(self, name: str) -> Optional[ProgressDef]:
        for p in self.progress_defs:
            if p.name == name:
                return p
        return None

    @property
    def target_names(self) -> list[str]:
        return [p.name for p in self.processes] + [c.name for c in self.composites]
