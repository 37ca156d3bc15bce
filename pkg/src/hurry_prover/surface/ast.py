"""Surface abstract syntax produced by the parser."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple


class STerm:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class TVar(STerm):
    name: str


@dataclass(frozen=True, slots=True)
class TNum(STerm):
    value: int


@dataclass(frozen=True, slots=True)
class THole(STerm):
    pass


@dataclass(frozen=True, slots=True)
class TApp(STerm):
    head: STerm
    args: Tuple[STerm, ...]


@dataclass(frozen=True, slots=True)
class TBin(STerm):
    op: str
    left: STerm
    right: STerm


@dataclass(frozen=True, slots=True)
class TNot(STerm):
    arg: STerm


@dataclass(frozen=True, slots=True)
class TArrow(STerm):
    left: STerm
    right: STerm


# binder group: (names, optional type)
Binder = Tuple[Tuple[str, ...], Optional[STerm]]


@dataclass(frozen=True, slots=True)
class TForall(STerm):
    binders: Tuple[Binder, ...]
    body: STerm


@dataclass(frozen=True, slots=True)
class TFun(STerm):
    binders: Tuple[Binder, ...]
    body: STerm


@dataclass(frozen=True, slots=True)
class TExists(STerm):
    name: str
    typ: Optional[STerm]
    body: STerm


@dataclass(frozen=True, slots=True)
class TLet(STerm):
    name: str
    typ: Optional[STerm]
    value: STerm
    body: STerm


@dataclass(frozen=True, slots=True)
class TPair(STerm):
    left: STerm
    right: STerm


@dataclass(frozen=True, slots=True)
class Pattern:
    name: Optional[str]                  # None for '_'
    args: Tuple["Pattern", ...] = ()
    numeral: Optional[int] = None


@dataclass(frozen=True, slots=True)
class TMatch(STerm):
    scrut: STerm
    branches: Tuple[Tuple[Pattern, STerm], ...]


# --- tactics ----------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class IntroPattern:
    """One-level bracket pattern: [a b], [x H], [H1 | H2]."""
    alternatives: Tuple[Tuple[str, ...], ...]


@dataclass(frozen=True, slots=True)
class Tactic:
    name: str
    term: Optional[STerm] = None
    names: Tuple[str, ...] = ()
    pattern: Optional[IntroPattern] = None
    reverse: bool = False                # rewrite <-
    assert_name: Optional[str] = None
    assert_stmt: Optional[STerm] = None
    sub: Optional["Tactic"] = None       # repeat


# --- sentences ----------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Sentence:
    kind: str
    line: int = 0
    col: int = 0
    text: str = ""
    # payload fields, used according to kind
    term: Optional[STerm] = None
    name: Optional[str] = None
    names: Tuple[str, ...] = ()
    binders: Tuple[Binder, ...] = ()
    rettype: Optional[STerm] = None
    body: Optional[STerm] = None
    struct: Optional[str] = None
    params: Tuple[Binder, ...] = ()
    arity: Optional[STerm] = None
    ctors: Tuple[Tuple[str, STerm], ...] = ()
    keyword: str = ""
    tactics: Tuple[Tactic, ...] = ()
    string: str = ""
    eval_strategy: str = "compute"
    where_notation: Optional[Tuple[str, STerm]] = None
