"""Term syntax of the object language, with de Bruijn indices.

Binder display names are kept for printing only; equality of terms is
structural and therefore alpha-equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Tuple

from ..errors import KernelError

PROP = "Prop"
SET = "Set"
TYPE = "Type"

MAX_UNIVERSE = 8


class Term:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class BVar(Term):
    """Bound variable, index 0 is the innermost binder."""
    index: int


@dataclass(frozen=True, slots=True)
class Sort(Term):
    kind: str                  # PROP | SET | TYPE
    level: int = 0             # >= 1 for TYPE, 0 otherwise

    def __post_init__(self):
        if self.kind == TYPE and self.level < 1:
            raise KernelError("Type universe level must be >= 1")
        if self.kind in (PROP, SET) and self.level != 0:
            raise KernelError(f"{self.kind} carries no universe level")


@dataclass(frozen=True, slots=True)
class Prod(Term):
    name: str
    dom: Term
    cod: Term                  # under one binder


@dataclass(frozen=True, slots=True)
class Lam(Term):
    name: str
    dom: Term
    body: Term                 # under one binder


@dataclass(frozen=True, slots=True)
class Let(Term):
    name: str
    value: Term
    vtype: Term
    body: Term                 # under one binder


@dataclass(frozen=True, slots=True)
class App(Term):
    head: Term                 # never an App itself
    args: Tuple[Term, ...]     # nonempty


@dataclass(frozen=True, slots=True)
class Const(Term):
    name: str


@dataclass(frozen=True, slots=True)
class Ind(Term):
    name: str


@dataclass(frozen=True, slots=True)
class Construct(Term):
    ind: str
    idx: int                   # 1-based constructor ordinal


@dataclass(frozen=True, slots=True)
class Match(Term):
    scrut: Term
    pred: Term                 # lambda over indices then the scrutinee
    branches: Tuple[Term, ...] # one per constructor, lambdas over its args


@dataclass(frozen=True, slots=True)
class Fix(Term):
    name: str
    struct: int                # 1-based position of the structural argument
    typ: Term
    body: Term                 # under one binder (the fix itself)


@dataclass(frozen=True, slots=True)
class Hole(Term):
    """Proof-engine placeholder for an open goal.

    ``args`` gives, oldest hypothesis first, the term standing for each
    entry of the goal's context at the position where the hole sits.
    The kernel rejects holes unless a goal table is supplied.
    """
    goal: int
    args: Tuple[Term, ...] = ()


@dataclass(frozen=True, slots=True)
class MVar(Term):
    """Elaboration-internal metavariable; never reaches the kernel proper.

    Treated as an opaque leaf by the term-manipulation helpers.
    """
    ref: object


PROP_SORT = Sort(PROP)
SET_SORT = Sort(SET)


def mk_app(head: Term, args) -> Term:
    """Build an application keeping the head flattened."""
    args = tuple(args)
    if not args:
        return head
    if isinstance(head, App):
        return App(head.head, head.args + args)
    return App(head, args)


def app_spine(t: Term) -> Tuple[Term, Tuple[Term, ...]]:
    if isinstance(t, App):
        return t.head, t.args
    return t, ()


def mk_prods(binders, body: Term) -> Term:
    """binders: sequence of (name, type), outermost first."""
    for name, ty in reversed(list(binders)):
        body = Prod(name, ty, body)
    return body


def mk_lams(binders, body: Term) -> Term:
    for name, ty in reversed(list(binders)):
        body = Lam(name, ty, body)
    return body


def prod_spine(t: Term):
    """Split leading products; returns (binder list, core)."""
    binders = []
    while isinstance(t, Prod):
        binders.append((t.name, t.dom))
        t = t.cod
    return binders, t


def lift(t: Term, by: int, cutoff: int = 0) -> Term:
    """Shift free indices >= cutoff by ``by``."""
    if by == 0:
        return t
    match t:
        case BVar(k):
            if k < cutoff:
                return t
            if k + by < 0:
                raise KernelError(f"lift underflow at index {k}")
            return BVar(k + by)
        case Sort() | Const() | Ind() | Construct() | MVar():
            return t
        case Prod(n, a, b):
            return Prod(n, lift(a, by, cutoff), lift(b, by, cutoff + 1))
        case Lam(n, a, b):
            return Lam(n, lift(a, by, cutoff), lift(b, by, cutoff + 1))
        case Let(n, v, ty, b):
            return Let(n, lift(v, by, cutoff), lift(ty, by, cutoff), lift(b, by, cutoff + 1))
        case App(h, args):
            return mk_app(lift(h, by, cutoff), tuple(lift(a, by, cutoff) for a in args))
        case Match(s, p, bs):
            return Match(lift(s, by, cutoff), lift(p, by, cutoff),
                         tuple(lift(b, by, cutoff) for b in bs))
        case Fix(n, k, ty, b):
            return Fix(n, k, lift(ty, by, cutoff), lift(b, by, cutoff + 1))
        case Hole(g, args):
            return Hole(g, tuple(lift(a, by, cutoff) for a in args))
    raise KernelError(f"lift: unexpected term {t!r}")


def subst(t: Term, repl: Term, j: int = 0) -> Term:
    """Substitute ``repl`` for index ``j``, decrementing outer indices."""
    match t:
        case BVar(k):
            if k == j:
                return lift(repl, j)
            if k > j:
                return BVar(k - 1)
            return t
        case Sort() | Const() | Ind() | Construct() | MVar():
            return t
        case Prod(n, a, b):
            return Prod(n, subst(a, repl, j), subst(b, repl, j + 1))
        case Lam(n, a, b):
            return Lam(n, subst(a, repl, j), subst(b, repl, j + 1))
        case Let(n, v, ty, b):
            return Let(n, subst(v, repl, j), subst(ty, repl, j), subst(b, repl, j + 1))
        case App(h, args):
            return mk_app(subst(h, repl, j), tuple(subst(a, repl, j) for a in args))
        case Match(s, p, bs):
            return Match(subst(s, repl, j), subst(p, repl, j),
                         tuple(subst(b, repl, j) for b in bs))
        case Fix(n, k, ty, b):
            return Fix(n, k, subst(ty, repl, j), subst(b, repl, j + 1))
        case Hole(g, args):
            return Hole(g, tuple(subst(a, repl, j) for a in args))
    raise KernelError(f"subst: unexpected term {t!r}")


def subst_many(t: Term, repls) -> Term:
    """Substitute for indices 0..n-1 simultaneously.

    ``repls[0]`` replaces index 0 (the innermost binder).  The replacement
    terms are interpreted in the context outside all n binders.
    """
    repls = list(repls)
    n = len(repls)
    for i, r in enumerate(repls):
        t = subst(t, lift(r, n - 1 - i), 0)
    return t


def instantiate_hole_args(t: Term, args: Tuple[Term, ...], depth: int = 0) -> Term:
    """Map a term over a goal context of ``len(args)`` entries into a host
    context, where ``args`` (oldest entry first) are host terms."""
    n = len(args)
    match t:
        case BVar(k):
            if k < depth:
                return t
            pos = k - depth
            if pos < n:
                # BVar(depth) is the newest goal entry = args[n-1]
                return lift(args[n - 1 - pos], depth)
            raise KernelError("hole argument instantiation out of range")
        case Sort() | Const() | Ind() | Construct() | MVar():
            return t
        case Prod(nm, a, b):
            return Prod(nm, instantiate_hole_args(a, args, depth),
                        instantiate_hole_args(b, args, depth + 1))
        case Lam(nm, a, b):
            return Lam(nm, instantiate_hole_args(a, args, depth),
                       instantiate_hole_args(b, args, depth + 1))
        case Let(nm, v, ty, b):
            return Let(nm, instantiate_hole_args(v, args, depth),
                       instantiate_hole_args(ty, args, depth),
                       instantiate_hole_args(b, args, depth + 1))
        case App(h, aa):
            return mk_app(instantiate_hole_args(h, args, depth),
                          tuple(instantiate_hole_args(a, args, depth) for a in aa))
        case Match(s, p, bs):
            return Match(instantiate_hole_args(s, args, depth),
                         instantiate_hole_args(p, args, depth),
                         tuple(instantiate_hole_args(b, args, depth) for b in bs))
        case Fix(nm, k, ty, b):
            return Fix(nm, k, instantiate_hole_args(ty, args, depth),
                       instantiate_hole_args(b, args, depth + 1))
        case Hole(g, aa):
            return Hole(g, tuple(instantiate_hole_args(a, args, depth) for a in aa))
    raise KernelError(f"instantiate: unexpected term {t!r}")


def fill_hole(t: Term, goal: int, solution_builder) -> Term:
    """Replace every ``Hole(goal, args)`` by ``solution_builder`` mapped
    through the hole's argument list."""
    match t:
        case Hole(g, args):
            new_args = tuple(fill_hole(a, goal, solution_builder) for a in args)
            if g == goal:
                return instantiate_hole_args(solution_builder, new_args)
            return Hole(g, new_args)
        case BVar() | Sort() | Const() | Ind() | Construct() | MVar():
            return t
        case Prod(n, a, b):
            return Prod(n, fill_hole(a, goal, solution_builder), fill_hole(b, goal, solution_builder))
        case Lam(n, a, b):
            return Lam(n, fill_hole(a, goal, solution_builder), fill_hole(b, goal, solution_builder))
        case Let(n, v, ty, b):
            return Let(n, fill_hole(v, goal, solution_builder), fill_hole(ty, goal, solution_builder),
                       fill_hole(b, goal, solution_builder))
        case App(h, args):
            return mk_app(fill_hole(h, goal, solution_builder),
                          tuple(fill_hole(a, goal, solution_builder) for a in args))
        case Match(s, p, bs):
            return Match(fill_hole(s, goal, solution_builder), fill_hole(p, goal, solution_builder),
                         tuple(fill_hole(b, goal, solution_builder) for b in bs))
        case Fix(n, k, ty, b):
            return Fix(n, k, fill_hole(ty, goal, solution_builder), fill_hole(b, goal, solution_builder))
    raise KernelError(f"fill_hole: unexpected term {t!r}")


def holes_of(t: Term) -> Iterator[Hole]:
    match t:
        case Hole():
            yield t
            for a in t.args:
                yield from holes_of(a)
        case BVar() | Sort() | Const() | Ind() | Construct() | MVar():
            return
        case Prod(_, a, b) | Lam(_, a, b):
            yield from holes_of(a)
            yield from holes_of(b)
        case Let(_, v, ty, b):
            yield from holes_of(v)
            yield from holes_of(ty)
            yield from holes_of(b)
        case App(h, args):
            yield from holes_of(h)
            for a in args:
                yield from holes_of(a)
        case Match(s, p, bs):
            yield from holes_of(s)
            yield from holes_of(p)
            for b in bs:
                yield from holes_of(b)
        case Fix(_, _, ty, b):
            yield from holes_of(ty)
            yield from holes_of(b)


def well_scoped(t: Term, depth: int = 0) -> bool:
    """Every bound index refers to an enclosing binder or context entry."""
    match t:
        case BVar(k):
            return 0 <= k < depth
        case Sort() | Const() | Ind() | Construct() | MVar():
            return True
        case Prod(_, a, b) | Lam(_, a, b):
            return well_scoped(a, depth) and well_scoped(b, depth + 1)
        case Let(_, v, ty, b):
            return (well_scoped(v, depth) and well_scoped(ty, depth)
                    and well_scoped(b, depth + 1))
        case App(h, args):
            if isinstance(h, App):
                return False
            return well_scoped(h, depth) and all(well_scoped(a, depth) for a in args)
        case Match(s, p, bs):
            return (well_scoped(s, depth) and well_scoped(p, depth)
                    and all(well_scoped(b, depth) for b in bs))
        case Fix(_, _, ty, b):
            return well_scoped(ty, depth) and well_scoped(b, depth + 1)
        case Hole(_, args):
            return all(well_scoped(a, depth) for a in args)
    return False


def alpha_eq(t: Term, u: Term) -> bool:
    """Structural equality ignoring binder display names."""
    match (t, u):
        case (BVar(i), BVar(j)):
            return i == j
        case (Sort(), Sort()) | (Const(), Const()) | (Ind(), Ind()) | \
             (Construct(), Construct()):
            return t == u
        case (Prod(_, a, b), Prod(_, a2, b2)) | (Lam(_, a, b), Lam(_, a2, b2)):
            return alpha_eq(a, a2) and alpha_eq(b, b2)
        case (Let(_, v, ty, b), Let(_, v2, ty2, b2)):
            return alpha_eq(v, v2) and alpha_eq(ty, ty2) and alpha_eq(b, b2)
        case (App(h, args), App(h2, args2)):
            return (len(args) == len(args2) and alpha_eq(h, h2)
                    and all(alpha_eq(a, b) for a, b in zip(args, args2)))
        case (Match(s, p, bs), Match(s2, p2, bs2)):
            return (len(bs) == len(bs2) and alpha_eq(s, s2) and alpha_eq(p, p2)
                    and all(alpha_eq(a, b) for a, b in zip(bs, bs2)))
        case (Fix(_, k, ty, b), Fix(_, k2, ty2, b2)):
            return k == k2 and alpha_eq(ty, ty2) and alpha_eq(b, b2)
        case (Hole(g, args), Hole(g2, args2)):
            return (g == g2 and len(args) == len(args2)
                    and all(alpha_eq(a, b) for a, b in zip(args, args2)))
    return False


def occurs_free(t: Term, index: int) -> bool:
    match t:
        case BVar(k):
            return k == index
        case Sort() | Const() | Ind() | Construct() | MVar():
            return False
        case Prod(_, a, b) | Lam(_, a, b):
            return occurs_free(a, index) or occurs_free(b, index + 1)
        case Let(_, v, ty, b):
            return (occurs_free(v, index) or occurs_free(ty, index)
                    or occurs_free(b, index + 1))
        case App(h, args):
            return occurs_free(h, index) or any(occurs_free(a, index) for a in args)
        case Match(s, p, bs):
            return (occurs_free(s, index) or occurs_free(p, index)
                    or any(occurs_free(b, index) for b in bs))
        case Fix(_, _, ty, b):
            return occurs_free(ty, index) or occurs_free(b, index + 1)
        case Hole(_, args):
            return any(occurs_free(a, index) for a in args)
    return False
