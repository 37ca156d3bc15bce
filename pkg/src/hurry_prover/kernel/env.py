"""Global declaration store and local typing contexts."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple

from ..errors import NameClash, UnboundVariable, UnknownIdentifier
from .terms import Term, lift


@dataclass(frozen=True, slots=True)
class Definition:
    name: str
    typ: Term
    body: Term
    transparent: bool = True
    oracle_deps: Tuple[str, ...] = ()   # oracle lemmas a sealed proof relies on


@dataclass(frozen=True, slots=True)
class Axiom:
    name: str
    typ: Term


@dataclass(frozen=True, slots=True)
class OracleLemma:
    """Lemma justified by a checked certificate instead of a proof term."""
    name: str
    typ: Term
    procedure: str              # "ring" | "omega"
    certificate: object = None


@dataclass(frozen=True, slots=True)
class InductiveDecl:
    name: str
    params: Tuple[Tuple[str, Term], ...]     # telescope, each type under the previous
    arity: Term                              # product over indices ending in a sort, under params
    constructors: Tuple[Tuple[str, Term], ...]  # constructor types under params


@dataclass(frozen=True, slots=True)
class InductiveBlock:
    decl: InductiveDecl
    typ: Term                                # closed type of the inductive
    ctor_types: Tuple[Term, ...]             # closed constructor types
    n_indices: int
    sort: Term                               # the sort the arity ends in


Declaration = object  # Definition | Axiom | OracleLemma | InductiveBlock


def _decl_name(d) -> str:
    if isinstance(d, InductiveBlock):
        return d.decl.name
    return d.name


@dataclass(frozen=True)
class GlobalEnv:
    """Ordered, immutable declaration store.

    Extension returns a new environment; snapshots can be shared freely.
    """
    decls: Tuple[Declaration, ...] = ()
    by_name: Dict[str, Declaration] = field(default_factory=dict)
    ctor_index: Dict[str, Tuple[str, int]] = field(default_factory=dict)
    packages: Tuple[str, ...] = ()
    omega_enabled: bool = False

    def lookup(self, name: str):
        d = self.by_name.get(name)
        if d is None:
            raise UnknownIdentifier(f"unknown identifier {name}")
        return d

    def has(self, name: str) -> bool:
        return name in self.by_name or name in self.ctor_index

    def constructor_of(self, name: str) -> Optional[Tuple[str, int]]:
        return self.ctor_index.get(name)

    def inductive(self, name: str) -> InductiveBlock:
        d = self.lookup(name)
        if not isinstance(d, InductiveBlock):
            raise UnknownIdentifier(f"{name} is not an inductive type")
        return d

    def add(self, decl) -> "GlobalEnv":
        name = _decl_name(decl)
        if self.has(name):
            raise NameClash(f"name {name} already declared")
        by_name = dict(self.by_name)
        by_name[name] = decl
        ctor_index = self.ctor_index
        if isinstance(decl, InductiveBlock):
            ctor_index = dict(self.ctor_index)
            for i, (cname, _) in enumerate(decl.decl.constructors, start=1):
                if name == cname or cname in by_name or cname in ctor_index:
                    raise NameClash(f"name {cname} already declared")
                ctor_index[cname] = (name, i)
        return replace(self, decls=self.decls + (decl,), by_name=by_name,
                       ctor_index=ctor_index)

    def with_package(self, pkg: str) -> "GlobalEnv":
        if pkg in self.packages:
            return self
        return replace(self, packages=self.packages + (pkg,))

    def with_omega(self) -> "GlobalEnv":
        return replace(self, omega_enabled=True)

    def const_type(self, name: str) -> Term:
        d = self.lookup(name)
        if isinstance(d, (Definition, Axiom, OracleLemma)):
            return d.typ
        raise UnknownIdentifier(f"{name} is not a constant")

    def unfold(self, name: str) -> Optional[Term]:
        """Body of a transparent definition, else None."""
        d = self.by_name.get(name)
        if isinstance(d, Definition) and d.transparent:
            return d.body
        return None


@dataclass(frozen=True, slots=True)
class CtxEntry:
    name: str
    typ: Term                  # relative to the preceding entries
    body: Optional[Term] = None


class LocalContext:
    """Ordered hypothesis list; entry types live in the prefix before them."""

    __slots__ = ("entries",)

    def __init__(self, entries: Tuple[CtxEntry, ...] = ()):
        self.entries = entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def push(self, name: str, typ: Term, body: Optional[Term] = None) -> "LocalContext":
        return LocalContext(self.entries + (CtxEntry(name, typ, body),))

    def type_of(self, index: int) -> Term:
        """Type of BVar(index), lifted into the full context."""
        n = len(self.entries)
        if not 0 <= index < n:
            raise UnboundVariable(f"unbound de Bruijn index {index}")
        return lift(self.entries[n - 1 - index].typ, index + 1)

    def body_of(self, index: int) -> Optional[Term]:
        n = len(self.entries)
        if not 0 <= index < n:
            raise UnboundVariable(f"unbound de Bruijn index {index}")
        b = self.entries[n - 1 - index].body
        return lift(b, index + 1) if b is not None else None

    def name_of(self, index: int) -> str:
        n = len(self.entries)
        if not 0 <= index < n:
            raise UnboundVariable(f"unbound de Bruijn index {index}")
        return self.entries[n - 1 - index].name

    def index_of(self, name: str) -> Optional[int]:
        """De Bruijn index of the hypothesis with the given display name."""
        n = len(self.entries)
        for i in range(n - 1, -1, -1):
            if self.entries[i].name == name:
                return n - 1 - i
            # later entries shadow earlier ones, though names should be unique
        return None

    def names(self):
        return [e.name for e in self.entries]


EMPTY_CTX = LocalContext()
