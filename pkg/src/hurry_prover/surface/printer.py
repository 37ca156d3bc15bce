"""Pretty-printer: notation folding, numeral re-sugaring, minimal parentheses."""

from __future__ import annotations

from typing import List, Optional

from ..kernel.env import GlobalEnv
from ..kernel.terms import (App, BVar, Const, Construct, Fix, Hole, Ind, Lam,
                            Let, Match, Prod, Sort, Term, PROP, SET, TYPE,
                            app_spine, lift, occurs_free, prod_spine)
from .notation import BY_TARGET, Notation


def _numeral(t: Term) -> Optional[int]:
    n = 0
    while True:
        head, args = app_spine(t)
        if head == Construct("nat", 1) and not args:
            return n
        if head == Construct("nat", 2) and len(args) == 1:
            n += 1
            t = args[0]
            continue
        return None


def _target_name(head: Term) -> Optional[str]:
    match head:
        case Const(name) | Ind(name):
            return name
        case Construct(ind, idx):
            return f"{ind}#{idx}"
    return None


def _fresh(name: str, used) -> str:
    if name == "_":
        return name
    if name not in used:
        return name
    i = 0
    while f"{name}{i}" in used:
        i += 1
    return f"{name}{i}"


def print_term(env: Optional[GlobalEnv], t: Term, names: Optional[List[str]] = None,
               max_level: int = 200) -> str:
    """Render a term; ``names`` are enclosing binder names, innermost first."""
    return _pr(env, t, list(names or []), max_level)


def _wrap(s: str, level: int, max_level: int) -> str:
    return f"({s})" if level > max_level else s


def _pr(env, t: Term, names: List[str], ml: int) -> str:
    k = _numeral(t)
    if k is not None:
        return str(k)

    head, args = app_spine(t)

    # constructor names print bare
    if isinstance(head, Construct) and env is not None:
        block = env.by_name.get(head.ind)
        cname = block.decl.constructors[head.idx - 1][0] if block else f"{head.ind}#{head.idx}"
        folded = _fold_notation(env, cname, head, args, names, ml)
        if folded is not None:
            return folded
        return _app_like(env, cname, args, names, ml)

    name = _target_name(head)
    if name is not None:
        folded = _fold_notation(env, name, head, args, names, ml)
        if folded is not None:
            return folded
        return _app_like(env, name, args, names, ml)

    match head:
        case BVar(i):
            s = names[i] if i < len(names) else f"_UNBOUND_{i}"
            return _app_like(env, s, args, names, ml)
        case Sort(kind, _):
            return _app_like(env, kind, args, names, ml)
        case Hole(g, _):
            return _app_like(env, f"?{g}", args, names, ml)
        case Prod():
            s = _print_prod(env, head, names)
            return _wrap_app(env, s, 200, args, names, ml)
        case Lam():
            s = _print_lam(env, head, names)
            return _wrap_app(env, s, 200, args, names, ml)
        case Let(n, v, _, b):
            fn = _fresh(n, names)
            s = (f"let {fn} := {_pr(env, v, names, 200)} in "
                 f"{_pr(env, b, [fn] + names, 200)}")
            return _wrap_app(env, s, 200, args, names, ml)
        case Match():
            s = _print_match(env, head, names)
            return _wrap_app(env, s, 0, args, names, ml)
        case Fix(n, _, ty, b):
            fn = _fresh(n, names)
            s = (f"fix {fn} : {_pr(env, ty, names, 200)} := "
                 f"{_pr(env, b, [fn] + names, 200)}")
            return _wrap_app(env, f"({s})", 0, args, names, ml)
    return repr(t)


def _wrap_app(env, rendered: str, rendered_level: int, args, names, ml: int) -> str:
    if not args:
        return _wrap(rendered, rendered_level, ml)
    parts = [f"({rendered})" if rendered_level > 9 else rendered]
    parts += [_pr(env, a, names, 9) for a in args]
    return _wrap(" ".join(parts), 10, ml)


def _app_like(env, head_str: str, args, names, ml: int) -> str:
    if not args:
        return head_str
    parts = [head_str] + [_pr(env, a, names, 9) for a in args]
    return _wrap(" ".join(parts), 10, ml)


def _fold_notation(env, name: str, head: Term, args, names, ml: int) -> Optional[str]:
    # existential quantifier folds specially
    if isinstance(head, Ind) and name == "ex" and len(args) == 2:
        pred = args[1]
        if isinstance(pred, Lam):
            fn = _fresh(pred.name, names)
            body = _pr(env, pred.body, [fn] + names, 200)
            dom = _pr(env, pred.dom, names, 200)
            return _wrap(f"exists {fn} : {dom}, {body}", 200, ml)
        return None
    if name == "nil" and len(args) == 1:
        return "nil"
    n = BY_TARGET.get(name)
    if n is None or len(args) != n.argc:
        return None
    vis = [args[i] for i in n.visible]
    if n.key == "~":
        return _wrap(f"~ {_pr(env, vis[0], names, n.right_max)}", n.level, ml)
    if n.key == "( , )":
        return f"({_pr(env, vis[0], names, 200)}, {_pr(env, vis[1], names, 200)})"
    left = _pr(env, vis[0], names, n.left_max)
    right = _pr(env, vis[1], names, n.right_max)
    return _wrap(f"{left} {n.key} {right}", n.level, ml)


def _print_prod(env, t: Prod, names: List[str]) -> str:
    # non-dependent: arrow notation
    if not occurs_free(t.cod, 0):
        left = _pr(env, t.dom, names, 98)
        right = _pr(env, t.cod, ["_"] + names, 200)
        return f"{left} -> {right}"
    # collect consecutive dependent binders, grouping identical domains
    groups: List[List] = []        # [display names, rendered dom]
    cur = t
    local: List[str] = []
    while isinstance(cur, Prod) and occurs_free(cur.cod, 0):
        fn = _fresh(cur.name if cur.name != "_" else "x", local + names)
        dom_str = _pr(env, cur.dom, local + names, 200)
        if groups and groups[-1][1] == dom_str:
            groups[-1][0].append(fn)
        else:
            groups.append([[fn], dom_str])
        local = [fn] + local
        cur = cur.cod
    body = _pr(env, cur, local + names, 200)
    if len(groups) == 1:
        g = groups[0]
        return f"forall {' '.join(g[0])} : {g[1]}, {body}"
    parts = " ".join(f"({' '.join(g[0])} : {g[1]})" for g in groups)
    return f"forall {parts}, {body}"


def _print_lam(env, t: Lam, names: List[str]) -> str:
    groups: List[List] = []
    cur = t
    local: List[str] = []
    while isinstance(cur, Lam):
        fn = _fresh(cur.name if cur.name != "_" else "x", local + names)
        dom_str = _pr(env, cur.dom, local + names, 200)
        if groups and groups[-1][1] == dom_str:
            groups[-1][0].append(fn)
        else:
            groups.append([[fn], dom_str])
        local = [fn] + local
        cur = cur.body
    body = _pr(env, cur, local + names, 200)
    if len(groups) == 1:
        g = groups[0]
        return f"fun {' '.join(g[0])} : {g[1]} => {body}"
    parts = " ".join(f"({' '.join(g[0])} : {g[1]})" for g in groups)
    return f"fun {parts} => {body}"


def _match_block(env, t: Match):
    """The inductive being matched, read off the return predicate's last
    binder type."""
    if env is None:
        return None
    p = t.pred
    last_dom = None
    while isinstance(p, Lam):
        last_dom = p.dom
        p = p.body
    if last_dom is None:
        return None
    head, _ = app_spine(last_dom)
    if isinstance(head, Ind):
        return env.by_name.get(head.name)
    return None


def _print_match(env, t: Match, names: List[str]) -> str:
    scrut = _pr(env, t.scrut, names, 200)
    branches = []
    block = _match_block(env, t)
    for j, b in enumerate(t.branches):
        cname = f"C{j + 1}"
        arity = 0
        if env is not None and block is not None:
            cname = block.decl.constructors[j][0]
            from ..kernel.terms import prod_spine as _ps
            binders, _ = _ps(block.ctor_types[j])
            arity = len(binders) - len(block.decl.params)
        pat_names: List[str] = []
        body = b
        while arity > 0 and isinstance(body, Lam):
            fn = _fresh(body.name if body.name != "_" else "x", pat_names + names)
            pat_names = [fn] + pat_names
            body = body.body
            arity -= 1
        rhs = _pr(env, body, pat_names + names, 200)
        pat = " ".join([cname] + list(reversed(pat_names)))
        branches.append(f"{pat} => {rhs}")
    return f"match {scrut} with {' | '.join(branches)} end"
