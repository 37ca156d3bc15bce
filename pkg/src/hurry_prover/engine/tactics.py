"""The tactic interpreter: each tactic refines the focused goal of a
ProofState into zero or more subgoals, maintaining a checked partial proof."""

from __future__ import annotations

from dataclasses import replace as _dc_replace
from typing import List, Optional, Tuple

from ..errors import (ElaborationError, KernelError, NoSuchHypothesis,
                      ProverError, SurfaceError, TacticFailure,
                      UnificationFailure, UnificationMismatch)
from ..kernel.build import bind_marker
from ..kernel.env import GlobalEnv, LocalContext, OracleLemma
from ..kernel.reduction import ALL_FLAGS, BETA_ONLY, whnf, simpl as simpl_reduce
from ..kernel.terms import (App, BVar, Const, Construct, Hole, Ind, Lam, Let,
                            Match, MVar, Prod, Sort, Term, PROP, app_spine,
                            lift, mk_app, mk_lams, mk_prods, occurs_free,
                            prod_spine, subst)
from ..kernel.typing import (constructor_telescope, conv_leq, convertible,
                             infer_type, scrutinee_inductive)
from ..surface.ast import IntroPattern, STerm, Tactic
from ..surface.elaborate import Elaborator, _contains_meta
from .proofstate import (Goal, ProofState, hole_for, ident_args, oracle_env,
                         push_history, refine)

_marker_count = 0


def _marker() -> str:
    global _marker_count
    _marker_count += 1
    return f"\x00t{_marker_count}"


def freshen(name: str, used) -> str:
    if name in ("", "_"):
        name = "H"
    if name not in used:
        return name
    i = 0
    while f"{name}{i}" in used:
        i += 1
    return f"{name}{i}"


def replace_term(t: Term, old: Term, new: Term, depth: int = 0) -> Term:
    """Replace every occurrence of ``old`` (given at depth 0) by ``new``."""
    if t == (lift(old, depth) if depth else old):
        return lift(new, depth) if depth else new
    match t:
        case BVar() | Sort() | Const() | Ind() | Construct() | MVar():
            return t
        case Prod(n, a, b):
            return Prod(n, replace_term(a, old, new, depth),
                        replace_term(b, old, new, depth + 1))
        case Lam(n, a, b):
            return Lam(n, replace_term(a, old, new, depth),
                       replace_term(b, old, new, depth + 1))
        case Let(n, v, ty, b):
            return Let(n, replace_term(v, old, new, depth),
                       replace_term(ty, old, new, depth),
                       replace_term(b, old, new, depth + 1))
        case App(h, args):
            return mk_app(replace_term(h, old, new, depth),
                          tuple(replace_term(a, old, new, depth) for a in args))
        case Match(s, p, bs):
            return Match(replace_term(s, old, new, depth),
                         replace_term(p, old, new, depth),
                         tuple(replace_term(b, old, new, depth) for b in bs))
        case Hole(g, args):
            return Hole(g, tuple(replace_term(a, old, new, depth) for a in args))
    from ..kernel.terms import Fix
    if isinstance(t, Fix):
        return Fix(t.name, t.struct, replace_term(t.typ, old, new, depth),
                   replace_term(t.body, old, new, depth + 1))
    return t


def _fill_metas(t: Term, fill: dict) -> Term:
    """Replace unsolved metavariables by the prepared hole terms."""
    match t:
        case MVar(m):
            if m.solution is not None:
                return _fill_metas(m.solution, fill)
            if id(m) in fill:
                return fill[id(m)]
            return t
        case BVar() | Sort() | Const() | Ind() | Construct() | Hole():
            return t
        case Prod(n, a, b):
            return Prod(n, _fill_metas(a, fill), _fill_metas(b, fill))
        case Lam(n, a, b):
            return Lam(n, _fill_metas(a, fill), _fill_metas(b, fill))
        case Let(n, v, ty, b):
            return Let(n, _fill_metas(v, fill), _fill_metas(ty, fill),
                       _fill_metas(b, fill))
        case App(h, args):
            return mk_app(_fill_metas(h, fill), tuple(_fill_metas(a, fill) for a in args))
        case Match(s, p, bs):
            return Match(_fill_metas(s, fill), _fill_metas(p, fill),
                         tuple(_fill_metas(b, fill) for b in bs))
    from ..kernel.terms import Fix
    if isinstance(t, Fix):
        return Fix(t.name, t.struct, _fill_metas(t.typ, fill), _fill_metas(t.body, fill))
    return t


def strengthen(t: Term, at: int) -> Term:
    """Remove a context entry the term does not mention (decrement indices
    above ``at``)."""
    dummy = Const(_marker())
    out = subst(t, dummy, at)
    if _mentions(out, dummy):
        raise TacticFailure("clear", "term still depends on the cleared hypothesis")
    return out


def _mentions(t: Term, c: Const) -> bool:
    match t:
        case Const(n):
            return n == c.name
        case BVar() | Sort() | Ind() | Construct() | MVar():
            return False
        case Prod(_, a, b) | Lam(_, a, b):
            return _mentions(a, c) or _mentions(b, c)
        case Let(_, v, ty, b):
            return _mentions(v, c) or _mentions(ty, c) or _mentions(b, c)
        case App(h, args):
            return _mentions(h, c) or any(_mentions(a, c) for a in args)
        case Match(s, p, bs):
            return _mentions(s, c) or _mentions(p, c) or any(_mentions(b, c) for b in bs)
        case Hole(_, args):
            return any(_mentions(a, c) for a in args)
    from ..kernel.terms import Fix
    if isinstance(t, Fix):
        return _mentions(t.typ, c) or _mentions(t.body, c)
    return False


def ctx_remove(ctx: LocalContext, index: int) -> Tuple[LocalContext, List[int]]:
    """Drop BVar ``index``; returns the new context and, for each kept entry
    (oldest first), its BVar index in the original context."""
    n = len(ctx)
    pos = n - 1 - index          # position in the entries tuple
    entries = list(ctx.entries)
    for q in range(pos + 1, n):
        dep_idx = q - 1 - pos
        e = entries[q]
        entries[q] = _dc_replace(e, typ=strengthen(e.typ, dep_idx),
                                 body=strengthen(e.body, dep_idx) if e.body is not None else None)
    kept = entries[:pos] + entries[pos + 1:]
    orig_indices = [n - 1 - q for q in range(n) if q != pos]
    return LocalContext(tuple(kept)), orig_indices


# --- elaboration helpers ------------------------------------------------------


def elab_in_goal(env: GlobalEnv, state: ProofState, goal: Goal, st: STerm,
                 expected: Optional[Term] = None, tacname: str = "tactic") -> Term:
    from ..surface.elaborate import elaborate
    env_x = oracle_env(env, state)
    try:
        return elaborate(env_x, goal.ctx, st, expected)
    except ProverError as e:
        raise TacticFailure(tacname, str(e)) from e


# --- primitive refinement steps ---------------------------------------------


def do_intro(env: GlobalEnv, state: ProofState, gid: int,
             name: Optional[str] = None) -> Tuple[ProofState, int]:
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    w = whnf(env_x, g.ctx, g.concl, ALL_FLAGS)
    if not isinstance(w, Prod):
        raise TacticFailure("intro", "goal is not a product")
    nm = name or w.name
    nm = freshen(nm, g.ctx.names())
    ctx2 = g.ctx.push(nm, w.dom)
    ng = Goal(state.next_gid, ctx2, w.cod)
    sol = Lam(nm, w.dom, hole_for(ng.gid, ctx2))
    state = refine(env, state, gid, sol, [ng])
    return state, ng.gid


def auto_intros(env: GlobalEnv, state: ProofState, gid: int) -> Tuple[ProofState, int]:
    while True:
        g = state.goal(gid)
        env_x = oracle_env(env, state)
        w = whnf(env_x, g.ctx, g.concl, ALL_FLAGS)
        if not isinstance(w, Prod):
            return state, gid
        state, gid = do_intro(env, state, gid)


def do_exact(env, state, gid, st: STerm) -> Tuple[ProofState, List[int]]:
    g = state.goal(gid)
    t = elab_in_goal(env, state, g, st, expected=g.concl, tacname="exact")
    return refine(env, state, gid, t, []), []


def do_assumption(env, state, gid) -> Tuple[ProofState, List[int]]:
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    for i in range(len(g.ctx)):
        if conv_leq(env_x, g.ctx, g.ctx.type_of(i), g.concl):
            return refine(env, state, gid, BVar(i), []), []
    raise TacticFailure("assumption", "no hypothesis matches the goal")


def _apply_core(env, state, gid, el: Elaborator, t: Term, ty: Term,
                tacname: str) -> Tuple[ProofState, List[int]]:
    """Unify ``t``'s conclusion with the goal, premises become subgoals."""
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    depth = len(g.ctx)
    arg_metas: List[Tuple[MVar, Term]] = []
    fuel = 64
    while True:
        snap = el.snapshot()
        try:
            el.unify(g.ctx, ty, g.concl)
            break
        except (UnificationMismatch, KernelError):
            el.restore(snap)
        w = whnf(env_x, g.ctx, el.zonk(ty, depth, strict=False), ALL_FLAGS)
        if not isinstance(w, Prod) or not fuel:
            raise TacticFailure(tacname, "conclusion does not unify with the goal")
        mv = el.fresh_meta(depth, "an argument")
        arg_metas.append((mv, w.dom))
        ty = subst(w.cod, mv)
        fuel -= 1

    new_goals: List[Goal] = []
    out_args: List[Term] = []
    base = state.next_gid
    for mv, domty in arg_metas:
        z = el.zonk(mv, depth, strict=False)
        if isinstance(z, MVar):
            domz = el.zonk(domty, depth, strict=False)
            if _contains_meta(domz):
                raise TacticFailure(tacname, "cannot infer an argument of the lemma")
            ng = Goal(base + len(new_goals), g.ctx, domz)
            new_goals.append(ng)
            out_args.append(hole_for(ng.gid, g.ctx))
        else:
            out_args.append(z)
    try:
        head = el.zonk(t, depth, strict=True)
    except ProverError as e:
        raise TacticFailure(tacname, str(e)) from e
    solution = mk_app(head, tuple(out_args))
    state = refine(env, state, gid, solution, new_goals)
    return state, [ng.gid for ng in new_goals]


def do_apply(env, state, gid, st: STerm, tacname: str = "apply"):
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    el = Elaborator(env_x)
    try:
        t, ty = el.infer(g.ctx, st)
    except ProverError as e:
        raise TacticFailure(tacname, str(e)) from e
    return _apply_core(env, state, gid, el, t, ty, tacname)


def _constructor_tactic(env, state, gid, which: str):
    state, gid = auto_intros(env, state, gid)
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    w = whnf(env_x, g.ctx, g.concl, ALL_FLAGS)
    head, _ = app_spine(w)
    if not isinstance(head, Ind):
        raise TacticFailure(which, "goal is not an inductive statement")
    block = env_x.inductive(head.name)
    nctors = len(block.decl.constructors)
    if which == "split":
        if nctors != 1:
            raise TacticFailure("split", "goal is not a one-constructor statement")
        j = 1
    elif which == "left":
        if nctors != 2:
            raise TacticFailure("left", "goal is not a two-constructor statement")
        j = 1
    else:
        if nctors != 2:
            raise TacticFailure("right", "goal is not a two-constructor statement")
        j = 2
    el = Elaborator(env_x)
    ctor = Construct(head.name, j)
    return _apply_core(env, state, gid, el, ctor, block.ctor_types[j - 1], which)


def do_exists(env, state, gid, st: STerm):
    state, gid = auto_intros(env, state, gid)
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    w = whnf(env_x, g.ctx, g.concl, ALL_FLAGS)
    head, args = app_spine(w)
    if not (isinstance(head, Ind) and head.name == "ex" and len(args) == 2):
        raise TacticFailure("exists", "goal is not an existential statement")
    a, p = args
    v = elab_in_goal(env, state, g, st, expected=a, tacname="exists")
    ng_concl = whnf(env_x, g.ctx, mk_app(p, (v,)), BETA_ONLY)
    ng = Goal(state.next_gid, g.ctx, ng_concl)
    sol = mk_app(Construct("ex", 1), (a, p, v, hole_for(ng.gid, g.ctx)))
    state = refine(env, state, gid, sol, [ng])
    return state, [ng.gid]


# --- case / elim / destruct ---------------------------------------------------


def _peel_applied(env_x, el: Elaborator, ctx, t: Term, ty: Term):
    """Instantiate a product-prefixed term with fresh metas until its type is
    an inductive application; the metas become trailing subgoals."""
    extra: List[Tuple[MVar, Term]] = []
    depth = len(ctx)
    fuel = 32
    while fuel:
        w = whnf(env_x, ctx, el.zonk(ty, depth, strict=False), ALL_FLAGS)
        head, _ = app_spine(w)
        if isinstance(head, Ind):
            return t, w, extra
        if isinstance(w, Prod):
            mv = el.fresh_meta(depth, "a premise")
            extra.append((mv, w.dom))
            t = mk_app(t, (mv,))
            ty = subst(w.cod, mv)
            fuel -= 1
            continue
        raise TacticFailure("elim", "term is not of an inductive type")
    raise TacticFailure("elim", "term is not of an inductive type")


def case_core(env, state, gid, scrut: Term, tacname: str,
              clear_var: Optional[int] = None):
    """Case analysis: one subgoal per constructor, premises kept in the goal."""
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    sty = infer_type(env_x, g.ctx, scrut, goals=state.goal_table())
    block, params, indices = scrutinee_inductive(env_x, g.ctx, sty)
    if indices:
        raise TacticFailure(tacname, "use inversion for indexed inductive predicates")
    name = block.decl.name
    ty0 = mk_app(Ind(name), params)

    # motive: abstract the scrutinee when it is a variable
    if isinstance(scrut, BVar):
        tag = _marker()
        body = replace_term(g.concl, scrut, Const(tag))
        pred = Lam("x", ty0, bind_marker(lift(body, 1), tag))
    else:
        pred = Lam("x", ty0, lift(g.concl, 1))

    nctors = len(block.decl.constructors)
    new_goals: List[Goal] = []
    branches: List[Term] = []
    arities: List[int] = []
    base = state.next_gid

    if clear_var is not None:
        ctx2, orig = ctx_remove(g.ctx, clear_var)
        hole_args_base = tuple(BVar(i) for i in orig)
    else:
        ctx2, hole_args_base = g.ctx, ident_args(len(g.ctx))

    for j in range(1, nctors + 1):
        tele, _ = constructor_telescope(block, j, params)
        m = len(tele)
        ctor_term = mk_app(Construct(name, j),
                           tuple(lift(p, m) for p in params)
                           + tuple(BVar(m - 1 - i) for i in range(m)))
        conclj = mk_prods(tele, whnf(env_x, g.ctx, mk_app(lift(pred, m), (ctor_term,)),
                                     BETA_ONLY))
        if clear_var is not None:
            # the goal moves to the reduced context
            conclj = strengthen(conclj, clear_var)
        ng = Goal(base + j - 1, ctx2, conclj)
        new_goals.append(ng)
        arities.append(m)
        branches.append(Hole(ng.gid, hole_args_base))

    solution = Match(scrut, pred, tuple(branches))
    state = refine(env, state, gid, solution, new_goals)
    return state, [ng.gid for ng in new_goals], arities


def do_case(env, state, gid, st: STerm, tacname: str = "case"):
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    el = Elaborator(env_x)
    try:
        t, ty = el.infer(g.ctx, st)
        t = el.zonk(t, len(g.ctx), strict=True)
    except ProverError as e:
        raise TacticFailure(tacname, str(e)) from e
    state, gids, _ = case_core(env, state, gid, t, tacname)
    return state, gids


def scheme_subgoals(env_x, ctx, scheme_ty: Term, params, motive):
    """Premise types of an induction scheme instantiated at params+motive."""
    ty = scheme_ty
    for p in params:
        w = whnf(env_x, ctx, ty, ALL_FLAGS)
        if not isinstance(w, Prod):
            raise TacticFailure("elim", "malformed induction scheme")
        ty = subst(w.cod, p)
    w = whnf(env_x, ctx, ty, ALL_FLAGS)
    if not isinstance(w, Prod):
        raise TacticFailure("elim", "malformed induction scheme")
    ty = subst(w.cod, motive)
    return ty


def do_elim(env, state, gid, st: STerm):
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    el = Elaborator(env_x)
    try:
        t0, ty0 = el.infer(g.ctx, st)
    except ProverError as e:
        raise TacticFailure("elim", str(e)) from e
    t, w, extra = _peel_applied(env_x, el, g.ctx, t0, ty0)
    head, hargs = app_spine(w)
    block = env_x.inductive(head.name)
    nparams = len(block.decl.params)
    params, indices = hargs[:nparams], hargs[nparams:]
    is_prop = block.sort == Sort(PROP)
    scheme_name = block.decl.name + "_ind"
    if not env_x.has(scheme_name):
        raise TacticFailure("elim", f"no induction scheme {scheme_name}")

    depth = len(g.ctx)
    try:
        t = el.zonk(t, depth, strict=False)
        params = tuple(el.zonk(p, depth, strict=True) for p in params)
        indices = tuple(el.zonk(i, depth, strict=True) for i in indices)
    except ProverError as e:
        raise TacticFailure("elim", str(e)) from e

    # build the motive from the goal
    if is_prop:
        for ix in indices:
            if not isinstance(ix, BVar):
                raise TacticFailure("elim", "indices must be variables")
        tags = [_marker() for _ in indices]
        idx_tys = [infer_type(env_x, g.ctx, ix) for ix in indices]
        motive: Term = g.concl
        for tag, ix in zip(tags, indices):
            motive = replace_term(motive, ix, Const(tag))
        motive = lift(motive, len(indices))
        for k in range(len(indices) - 1, -1, -1):
            motive = bind_marker(motive, tags[k])
            motive = Lam("n", lift(idx_tys[k], k), motive)
    else:
        if not isinstance(t, BVar):
            raise TacticFailure("elim", "can only eliminate a variable of a data type")
        tag = _marker()
        body = replace_term(g.concl, t, Const(tag))
        motive = Lam("x", mk_app(Ind(block.decl.name), params),
                     bind_marker(lift(body, 1), tag))

    # subgoal conclusions come from the scheme's premise types
    scheme_ty = env_x.const_type(scheme_name)
    ty = scheme_subgoals(env_x, g.ctx, scheme_ty, params, motive)
    from ..kernel.reduction import normalize as _normalize
    nctors = len(block.decl.constructors)
    prem_holes: List[Term] = []
    new_goals: List[Goal] = []
    base = state.next_gid
    for j in range(nctors):
        w2 = whnf(env_x, g.ctx, ty, BETA_ONLY)
        if not isinstance(w2, Prod):
            raise TacticFailure("elim", "malformed induction scheme")
        concl = _normalize(env_x, w2.dom, g.ctx, BETA_ONLY)
        ng = Goal(base + len(new_goals), g.ctx, concl)
        new_goals.append(ng)
        prem_holes.append(hole_for(ng.gid, g.ctx))
        ty = subst(w2.cod, prem_holes[-1])

    extra_goals: List[Goal] = []
    meta_fill = {}
    for mv, domty in extra:
        z = el.zonk(mv, depth, strict=False)
        if isinstance(z, MVar):
            domz = el.zonk(domty, depth, strict=False)
            if _contains_meta(domz):
                raise TacticFailure("elim", "cannot infer an argument")
            ng = Goal(base + len(new_goals) + len(extra_goals), g.ctx, domz)
            extra_goals.append(ng)
            meta_fill[id(z.ref)] = hole_for(ng.gid, g.ctx)

    target = _fill_metas(t, meta_fill)

    solution = mk_app(Const(scheme_name),
                      params + (motive,) + tuple(prem_holes) + indices + (target,))
    state = refine(env, state, gid, solution, new_goals + extra_goals)
    return state, [ng.gid for ng in new_goals + extra_goals]


def do_destruct(env, state, gid, st: STerm, pattern: Optional[IntroPattern]):
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    el = Elaborator(env_x)
    try:
        t, ty = el.infer(g.ctx, st)
        t = el.zonk(t, len(g.ctx), strict=True)
    except ProverError as e:
        raise TacticFailure("destruct", str(e)) from e

    clear_var = t.index if isinstance(t, BVar) else None
    scrut_name = g.ctx.name_of(t.index) if isinstance(t, BVar) else None
    state, gids, arities = case_core(env, state, gid, t, "destruct",
                                     clear_var=clear_var)

    out_gids: List[int] = []
    for k, (sub_gid, arity) in enumerate(zip(gids, arities)):
        names: List[Optional[str]] = [None] * arity
        if pattern is not None:
            alts = pattern.alternatives
            alt = alts[k] if len(alts) > 1 else alts[0]
            if len(alts) > 1 and len(alts) != len(gids):
                raise TacticFailure("destruct", "intro pattern arity mismatch")
            names = list(alt) + [None] * (arity - len(alt))
        elif scrut_name is not None:
            for i in range(arity):
                if scrut_name[-1].isdigit():
                    names[i] = f"{scrut_name}_{i + 1}"
                else:
                    names[i] = f"{scrut_name}{i + 1}"
        cur = sub_gid
        for i in range(arity):
            nm = names[i] if names[i] not in (None, "_") else None
            state, cur = do_intro(env, state, cur, nm)
        out_gids.append(cur)
    return state, out_gids


# --- rewrite ------------------------------------------------------------------


def _find_instance(env_x, el: Elaborator, ctx, pattern: Term, t: Term,
                   depth_offset: int = 0) -> bool:
    """Find the first subterm unifiable with ``pattern``; metas get solved."""
    snap = el.snapshot()
    try:
        el.unify(ctx, lift(pattern, depth_offset) if depth_offset else pattern, t)
        return True
    except (UnificationMismatch, KernelError):
        el.restore(snap)

    match t:
        case App(h, args):
            if _find_instance(env_x, el, ctx, pattern, h, depth_offset):
                return True
            return any(_find_instance(env_x, el, ctx, pattern, a, depth_offset)
                       for a in args)
        case Prod(n, a, b) | Lam(n, a, b):
            if _find_instance(env_x, el, ctx, pattern, a, depth_offset):
                return True
            return _find_instance(env_x, el, ctx.push(n, a), pattern, b,
                                  depth_offset + 1)
        case Let(_, v, ty, b):
            if _find_instance(env_x, el, ctx, pattern, v, depth_offset):
                return True
            if _find_instance(env_x, el, ctx, pattern, ty, depth_offset):
                return True
            return _find_instance(env_x, el, ctx.push("_", ty), pattern, b,
                                  depth_offset + 1)
        case Match(s, p, bs):
            if _find_instance(env_x, el, ctx, pattern, s, depth_offset):
                return True
            if _find_instance(env_x, el, ctx, pattern, p, depth_offset):
                return True
            return any(_find_instance(env_x, el, ctx, pattern, b, depth_offset)
                       for b in bs)
    return False


def do_rewrite(env, state, gid, st: STerm, reverse: bool):
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    el = Elaborator(env_x)
    depth = len(g.ctx)
    try:
        t, ty = el.infer(g.ctx, st)
    except ProverError as e:
        raise TacticFailure("rewrite", str(e)) from e

    # peel quantifiers and premises into metas
    metas: List[Tuple[MVar, Term]] = []
    fuel = 32
    while fuel:
        w = whnf(env_x, g.ctx, el.zonk(ty, depth, strict=False), ALL_FLAGS)
        head, hargs = app_spine(w)
        if isinstance(head, Ind) and head.name == "eq" and len(hargs) == 3:
            eq_ty, lhs, rhs = hargs
            break
        if isinstance(w, Prod):
            mv = el.fresh_meta(depth, "a rewrite argument")
            metas.append((mv, w.dom))
            t = mk_app(t, (mv,))
            ty = subst(w.cod, mv)
            fuel -= 1
            continue
        raise TacticFailure("rewrite", "hypothesis is not an equality")
    else:
        raise TacticFailure("rewrite", "hypothesis is not an equality")

    if not env_x.has("eq_ind_r") or not env_x.has("eq_ind"):
        raise TacticFailure("rewrite", "rewriting needs eq_ind and eq_ind_r loaded")
    pattern = rhs if reverse else lhs
    if not _find_instance(env_x, el, g.ctx, pattern, g.concl):
        raise TacticFailure("rewrite", "no matching occurrence in the goal")

    try:
        lhs_i = el.zonk(lhs, depth, strict=True)
        rhs_i = el.zonk(rhs, depth, strict=True)
        eqty_i = el.zonk(eq_ty, depth, strict=True)
    except ProverError as e:
        raise TacticFailure("rewrite", "could not determine the rewrite instance") from e

    src = rhs_i if reverse else lhs_i
    dst = lhs_i if reverse else rhs_i
    tag = _marker()
    abstracted = replace_term(g.concl, src, Const(tag))
    if abstracted == g.concl:
        raise TacticFailure("rewrite", "no matching occurrence in the goal")
    pred = Lam("z", eqty_i, bind_marker(lift(abstracted, 1), tag))
    new_concl = whnf(env_x, g.ctx, mk_app(pred, (dst,)), BETA_ONLY)

    base = state.next_gid
    main = Goal(base, g.ctx, new_concl)
    side_goals: List[Goal] = []
    side_fill = {}
    for mv, domty in metas:
        z = el.zonk(mv, depth, strict=False)
        if isinstance(z, MVar):
            domz = el.zonk(domty, depth, strict=False)
            if _contains_meta(domz):
                raise TacticFailure("rewrite", "cannot infer an argument")
            ng = Goal(base + 1 + len(side_goals), g.ctx, domz)
            side_goals.append(ng)
            side_fill[id(z.ref)] = hole_for(ng.gid, g.ctx)

    eq_term = _fill_metas(el.zonk(t, depth, strict=False), side_fill)

    hole = hole_for(main.gid, g.ctx)
    if reverse:
        # eq_ind : P lhs -> forall y, lhs = y -> P y; here new goal is P lhs
        sol = mk_app(Const("eq_ind"),
                     (eqty_i, lhs_i, pred, hole, rhs_i, eq_term))
    else:
        # eq_ind_r : P x -> forall y, y = x -> P y with x := rhs
        sol = mk_app(Const("eq_ind_r"),
                     (eqty_i, rhs_i, pred, hole, lhs_i, eq_term))
    state = refine(env, state, gid, sol, [main] + side_goals)
    return state, [main.gid] + [s.gid for s in side_goals]


def do_reflexivity(env, state, gid):
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    w = whnf(env_x, g.ctx, g.concl, ALL_FLAGS)
    head, args = app_spine(w)
    if not (isinstance(head, Ind) and head.name == "eq" and len(args) == 3):
        raise TacticFailure("reflexivity", "goal is not an equality")
    a, l, r = args
    if not convertible(env_x, g.ctx, l, r):
        raise TacticFailure("reflexivity", "sides are not convertible")
    sol = mk_app(Construct("eq", 1), (a, l))
    return refine(env, state, gid, sol, []), []


def do_assert(env, state, gid, name: Optional[str], st: STerm):
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    from ..surface.elaborate import elaborate_with_type
    try:
        p, _ = elaborate_with_type(env_x, g.ctx, st)
    except ProverError as e:
        raise TacticFailure("assert", str(e)) from e
    nm = freshen(name or "H", g.ctx.names())
    base = state.next_gid
    g1 = Goal(base, g.ctx, p)
    ctx2 = g.ctx.push(nm, p)
    g2 = Goal(base + 1, ctx2, lift(g.concl, 1))
    sol = mk_app(Lam(nm, p, hole_for(g2.gid, ctx2)), (hole_for(g1.gid, g.ctx),))
    state = refine(env, state, gid, sol, [g1, g2])
    return state, [g1.gid, g2.gid]


def do_simpl(env, state, gid):
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    new_concl = simpl_reduce(env_x, g.ctx, g.concl)
    ng = Goal(state.next_gid, g.ctx, new_concl)
    state = refine(env, state, gid, hole_for(ng.gid, g.ctx), [ng])
    return state, [ng.gid]


def do_clear(env, state, gid, names):
    g = state.goal(gid)
    for nm in names:
        g = state.goal(gid)
        idx = g.ctx.index_of(nm)
        if idx is None:
            raise NoSuchHypothesis(f"no hypothesis {nm}")
        if occurs_free(g.concl, idx):
            raise TacticFailure("clear", f"the goal depends on {nm}")
        ctx2, orig = ctx_remove(g.ctx, idx)
        concl2 = strengthen(g.concl, idx)
        ng = Goal(state.next_gid, ctx2, concl2)
        state = refine(env, state, gid, Hole(ng.gid, tuple(BVar(i) for i in orig)), [ng])
        gid = ng.gid
    return state, [gid]


def do_subst(env, state, gid):
    """Eliminate hypotheses x = t / t = x with x a variable."""
    changed = True
    env_x = oracle_env(env, state)
    while changed:
        changed = False
        g = state.goal(gid)
        for i in range(len(g.ctx)):
            ty = whnf(env_x, g.ctx, g.ctx.type_of(i), ALL_FLAGS)
            head, args = app_spine(ty)
            if not (isinstance(head, Ind) and head.name == "eq" and len(args) == 3):
                continue
            _, l, r = args
            var, rep = (l, r) if isinstance(l, BVar) else (r, l) if isinstance(r, BVar) else (None, None)
            if var is None or (isinstance(rep, BVar) and rep.index == var.index):
                continue
            if occurs_free_term(rep, var.index):
                continue
            nm = g.ctx.name_of(i)
            direction_rev = not isinstance(l, BVar)
            try:
                state, gids = do_rewrite(env, state, gid,
                                         _surface_var(nm), reverse=direction_rev)
                gid = gids[0]
                state, gids = do_clear(env, state, gid, [nm])
                gid = gids[0]
                changed = True
                break
            except (TacticFailure, NoSuchHypothesis):
                continue
    return state, [gid]


def occurs_free_term(t: Term, index: int) -> bool:
    return occurs_free(t, index)


def _surface_var(name: str) -> STerm:
    from ..surface.ast import TVar
    return TVar(name)


# --- dispatch -----------------------------------------------------------------


def apply_tactic_goal(env, state, gid, tac: Tactic) -> Tuple[ProofState, List[int]]:
    from ..dp import equality, inversion as inv_mod, prop as prop_mod
    from ..dp import auto as auto_mod, ring as ring_mod, omega as omega_mod

    name = tac.name
    if name == "intro":
        state, g2 = do_intro(env, state, gid, tac.names[0] if tac.names else None)
        return state, [g2]
    if name == "intros":
        if tac.names:
            cur = gid
            for nm in tac.names:
                state, cur = do_intro(env, state, cur, nm)
            return state, [cur]
        cur = gid
        g = state.goal(gid)
        env_x = oracle_env(env, state)
        w = whnf(env_x, g.ctx, g.concl, ALL_FLAGS)
        if not isinstance(w, Prod):
            raise TacticFailure("intros", "goal is not a product")
        state, cur = auto_intros(env, state, gid)
        return state, [cur]
    if name == "exact":
        return do_exact(env, state, gid, tac.term)
    if name == "assumption":
        return do_assumption(env, state, gid)
    if name == "apply":
        return do_apply(env, state, gid, tac.term)
    if name in ("split", "left", "right"):
        return _constructor_tactic(env, state, gid, name)
    if name == "exists_tac":
        return do_exists(env, state, gid, tac.term)
    if name == "elim":
        return do_elim(env, state, gid, tac.term)
    if name == "case":
        return do_case(env, state, gid, tac.term)
    if name == "destruct":
        return do_destruct(env, state, gid, tac.term, tac.pattern)
    if name == "rewrite":
        return do_rewrite(env, state, gid, tac.term, tac.reverse)
    if name == "reflexivity":
        return do_reflexivity(env, state, gid)
    if name == "assert":
        return do_assert(env, state, gid, tac.assert_name, tac.assert_stmt)
    if name == "simpl":
        return do_simpl(env, state, gid)
    if name == "clear":
        return do_clear(env, state, gid, tac.names)
    if name == "subst":
        return do_subst(env, state, gid)
    if name == "repeat":
        count = 0
        gids = [gid]
        while count < 100:
            progressed = False
            next_gids: List[int] = []
            for g2 in gids:
                if all(g.gid != g2 for g in state.goals):
                    continue
                try:
                    state, prods = apply_tactic_goal(env, state, g2, tac.sub)
                    next_gids.extend(prods)
                    progressed = True
                except (TacticFailure, NoSuchHypothesis, UnificationFailure):
                    next_gids.append(g2)
            gids = next_gids
            if not progressed:
                break
            count += 1
        return state, [g2 for g2 in gids if any(g.gid == g2 for g in state.goals)]
    if name == "discriminate":
        return equality.do_discriminate(env, state, gid,
                                        tac.names[0] if tac.names else None)
    if name == "injection":
        return equality.do_injection(env, state, gid,
                                     tac.names[0] if tac.names else None)
    if name == "inversion":
        return inv_mod.do_inversion(env, state, gid,
                                    tac.names[0] if tac.names else None)
    if name == "intuition":
        return prop_mod.do_intuition(env, state, gid)
    if name == "auto":
        return auto_mod.do_auto(env, state, gid)
    if name == "ring":
        return ring_mod.do_ring(env, state, gid)
    if name == "omega":
        return omega_mod.do_omega(env, state, gid)
    raise TacticFailure(name, "unknown tactic")


def apply_tactic_sentence(env, state: ProofState, tactics) -> ProofState:
    """Apply a ';'-chain: each later tactic runs on every goal the previous
    one produced.  Failure propagates; the caller keeps the untouched state."""
    state = push_history(state)
    gids = [state.focused().gid]
    for tac in tactics:
        next_gids: List[int] = []
        for gid in gids:
            if all(g.gid != gid for g in state.goals):
                continue
            state, prods = apply_tactic_goal(env, state, gid, tac)
            next_gids.extend(prods)
        gids = next_gids
    return state
