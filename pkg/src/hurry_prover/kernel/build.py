"""Helpers for constructing de Bruijn terms without manual index juggling.

Variables under construction are represented by unique marker constants
(names starting with NUL, which no parser can produce); closing a binder
turns its marker into the proper bound index.
"""

from __future__ import annotations

import itertools
from typing import Callable, List, Sequence

from .terms import (App, BVar, Const, Fix, Hole, Ind, Lam, Let, Match, Prod,
                    Sort, Construct, Term, mk_app, subst_many)

_counter = itertools.count(1)


def _fresh_tag() -> str:
    return f"\x00v{next(_counter)}"


def bind_marker(t: Term, tag: str, depth: int = 0) -> Term:
    match t:
        case Const(name):
            return BVar(depth) if name == tag else t
        case BVar() | Sort() | Ind() | Construct():
            return t
        case Prod(n, a, b):
            return Prod(n, bind_marker(a, tag, depth), bind_marker(b, tag, depth + 1))
        case Lam(n, a, b):
            return Lam(n, bind_marker(a, tag, depth), bind_marker(b, tag, depth + 1))
        case Let(n, v, ty, b):
            return Let(n, bind_marker(v, tag, depth), bind_marker(ty, tag, depth),
                       bind_marker(b, tag, depth + 1))
        case App(h, args):
            return mk_app(bind_marker(h, tag, depth),
                          tuple(bind_marker(a, tag, depth) for a in args))
        case Match(s, p, bs):
            return Match(bind_marker(s, tag, depth), bind_marker(p, tag, depth),
                         tuple(bind_marker(b, tag, depth) for b in bs))
        case Fix(n, k, ty, b):
            return Fix(n, k, bind_marker(ty, tag, depth), bind_marker(b, tag, depth + 1))
        case Hole(g, args):
            return Hole(g, tuple(bind_marker(a, tag, depth) for a in args))
    raise TypeError(f"bind_marker: unexpected term {t!r}")


def forall_(name: str, ty: Term, body: Callable[[Term], Term]) -> Term:
    tag = _fresh_tag()
    return Prod(name, ty, bind_marker(body(Const(tag)), tag))


def lam_(name: str, ty: Term, body: Callable[[Term], Term]) -> Term:
    tag = _fresh_tag()
    return Lam(name, ty, bind_marker(body(Const(tag)), tag))


def fix_(name: str, struct: int, typ: Term, body: Callable[[Term], Term]) -> Term:
    tag = _fresh_tag()
    return Fix(name, struct, typ, bind_marker(body(Const(tag)), tag))


def forall_many(binders: Sequence, body: Callable[[List[Term]], Term]) -> Term:
    """binders: [(name, type_or_fn)]; a type function receives the earlier
    binder variables, oldest first."""
    return _chain(binders, body, forall_)


def lam_many(binders: Sequence, body: Callable[[List[Term]], Term]) -> Term:
    return _chain(binders, body, lam_)


def _chain(binders, body, one):
    binders = list(binders)

    def go(i: int, acc: List[Term]) -> Term:
        if i == len(binders):
            return body(acc)
        name, ty_fn = binders[i]
        ty = ty_fn(acc) if callable(ty_fn) else ty_fn
        return one(name, ty, lambda v: go(i + 1, acc + [v]))

    return go(0, [])


def open_telescope(binders, vars_so_far: Sequence[Term]):
    """Make a de Bruijn telescope usable with forall_many/lam_many.

    Each telescope type may refer to ``vars_so_far`` (the surrounding
    context, oldest first) and to the earlier telescope entries.
    """
    outer = list(vars_so_far)
    out = []
    for name, ty in binders:
        def mk(acc, ty=ty):
            return open_term(ty, outer + list(acc))
        out.append((name, mk))
    return out


def open_term(t: Term, vars_oldest_first: Sequence[Term]) -> Term:
    """Replace free indices of ``t`` by the given variables (index 0 is the
    last element of the list)."""
    return subst_many(t, list(reversed(list(vars_oldest_first))))
