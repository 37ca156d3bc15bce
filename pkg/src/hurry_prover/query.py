"""Search, SearchPattern, SearchRewrite over the global environment."""

from __future__ import annotations

from typing import List, Optional, Tuple

from .errors import UnknownIdentifier
from .kernel.env import (Axiom, Definition, GlobalEnv, InductiveBlock,
                         OracleLemma)
from .kernel.terms import (App, BVar, Const, Construct, Ind, Lam, Let, Match,
                           Prod, Sort, Term, app_spine, mk_app, prod_spine)
from .surface.ast import (STerm, TApp, TArrow, TBin, TExists, TForall, TFun,
                          THole, TNot, TNum, TPair, TVar)

WILD = Const("\x00wild")


def _head_name(t: Term) -> Optional[str]:
    match t:
        case Const(n) | Ind(n):
            return n
        case Construct(ind, idx):
            return f"{ind}#{idx}"
    return None


def _declared_lemmas(env: GlobalEnv):
    """(name, closed type) for every searchable declaration, in env order."""
    for d in env.decls:
        if isinstance(d, (Definition, Axiom, OracleLemma)):
            yield d.name, d.typ
        elif isinstance(d, InductiveBlock):
            for j, (cname, _) in enumerate(d.decl.constructors):
                yield cname, d.ctor_types[j]


def _conclusion(t: Term) -> Term:
    _, core = prod_spine(t)
    return core


def search(env: GlobalEnv, ident: str) -> List[Tuple[str, Term]]:
    """Lemmas whose conclusion head is the identifier."""
    if not env.has(ident):
        raise UnknownIdentifier(f"unknown identifier {ident}")
    out = []
    for name, typ in _declared_lemmas(env):
        head, _ = app_spine(_conclusion(typ))
        if _head_name(head) == ident:
            out.append((name, typ))
    return out


def pattern_of_surface(env: GlobalEnv, st: STerm) -> Term:
    """Loose elaboration of a search pattern; '_' becomes a wildcard."""
    def go(s: STerm) -> Term:
        match s:
            case THole():
                return WILD
            case TNum(k):
                t: Term = Construct("nat", 1)
                for _ in range(k):
                    t = mk_app(Construct("nat", 2), (t,))
                return t
            case TVar(name):
                c = env.constructor_of(name)
                if c is not None:
                    return Construct(c[0], c[1])
                d = env.by_name.get(name)
                if isinstance(d, InductiveBlock):
                    return Ind(name)
                if d is not None:
                    return Const(name)
                raise UnknownIdentifier(f"unknown identifier {name}")
            case TApp(h, args):
                return mk_app(go(h), tuple(go(a) for a in args))
            case TNot(a):
                return mk_app(Const("not"), (go(a),))
            case TBin(op, l, r):
                heads = {"+": Const("plus"), "-": Const("minus"),
                         "*": Const("mult"), "^": Const("nat_power"),
                         "<=": Ind("le"), "<": Const("lt"),
                         "/\\": Ind("and"), "\\/": Ind("or"),
                         "::": Construct("list", 2), "++": Const("app")}
                if op == "=":
                    return mk_app(Ind("eq"), (WILD, go(l), go(r)))
                if op in ("::", "++"):
                    return mk_app(heads[op], (WILD, go(l), go(r)))
                return mk_app(heads[op], (go(l), go(r)))
            case TPair(l, r):
                return mk_app(Construct("prod", 1), (WILD, WILD, go(l), go(r)))
        raise UnknownIdentifier("unsupported pattern shape")

    return go(st)


def match_pattern(pat: Term, t: Term) -> bool:
    if pat == WILD:
        return True
    ph, pargs = app_spine(pat)
    th, targs = app_spine(t)
    if pargs or targs:
        if len(pargs) != len(targs):
            return False
        return (match_pattern(ph, th)
                and all(match_pattern(p, a) for p, a in zip(pargs, targs)))
    match (pat, t):
        case (Prod(_, a, b), Prod(_, a2, b2)) | (Lam(_, a, b), Lam(_, a2, b2)):
            return match_pattern(a, a2) and match_pattern(b, b2)
        case _:
            return pat == t


def search_pattern(env: GlobalEnv, pat: Term) -> List[Tuple[str, Term]]:
    out = []
    for name, typ in _declared_lemmas(env):
        if match_pattern(pat, _conclusion(typ)):
            out.append((name, typ))
    return out


def search_rewrite(env: GlobalEnv, pat: Term) -> List[Tuple[str, Term]]:
    out = []
    for name, typ in _declared_lemmas(env):
        concl = _conclusion(typ)
        head, args = app_spine(concl)
        if isinstance(head, Ind) and head.name == "eq" and len(args) == 3:
            if match_pattern(pat, args[1]) or match_pattern(pat, args[2]):
                out.append((name, typ))
    return out
