"""auto: depth-bounded backward chaining over hypotheses and a fixed hint
database (logic constructors, le_n, le_S, reflexivity)."""

from __future__ import annotations

from typing import List, Optional, Tuple

from ..errors import KernelError, ProverError, UnificationMismatch
from ..kernel.env import GlobalEnv, LocalContext
from ..kernel.reduction import ALL_FLAGS, whnf
from ..kernel.terms import (BVar, Const, Construct, Lam, MVar, Prod, Term,
                            lift, mk_app, subst)
from ..kernel.typing import conv_leq
from ..surface.elaborate import Elaborator, _contains_meta
from ..engine.proofstate import oracle_env, refine

HINTS: List[Tuple[str, object]] = [
    ("I", lambda env: (Construct("True", 1), env.inductive("True").ctor_types[0])),
    ("conj", lambda env: (Construct("and", 1), env.inductive("and").ctor_types[0])),
    ("or_introl", lambda env: (Construct("or", 1), env.inductive("or").ctor_types[0])),
    ("or_intror", lambda env: (Construct("or", 2), env.inductive("or").ctor_types[1])),
    ("ex_intro", lambda env: (Construct("ex", 1), env.inductive("ex").ctor_types[0])),
    ("eq_refl", lambda env: (Construct("eq", 1), env.inductive("eq").ctor_types[0])),
    ("le_n", lambda env: (Construct("le", 1), env.inductive("le").ctor_types[0])),
    ("le_S", lambda env: (Construct("le", 2), env.inductive("le").ctor_types[1])),
]


def _hint_terms(env: GlobalEnv):
    out = []
    for name, mk in HINTS:
        try:
            out.append(mk(env))
        except ProverError:
            continue
    return out


def auto_prove(env: GlobalEnv, ctx: LocalContext, concl: Term,
               depth: int = 5) -> Optional[Term]:
    if depth <= 0:
        return None

    w = whnf(env, ctx, concl, ALL_FLAGS)
    if isinstance(w, Prod):
        sub = auto_prove(env, ctx.push(w.name if w.name != "_" else "H", w.dom),
                         w.cod, depth)
        if sub is None:
            return None
        return Lam(w.name if w.name != "_" else "H", w.dom, sub)

    # assumption
    for i in range(len(ctx)):
        try:
            if conv_leq(env, ctx, ctx.type_of(i), concl):
                return BVar(i)
        except KernelError:
            continue

    # backward chaining over hypotheses, then hints
    candidates: List[Tuple[Term, Term]] = []
    for i in range(len(ctx)):
        candidates.append((BVar(i), ctx.type_of(i)))
    candidates.extend(_hint_terms(env))

    for head, hty in candidates:
        proof = _try_apply(env, ctx, head, hty, concl, depth)
        if proof is not None:
            return proof
    return None


def _try_apply(env, ctx, head: Term, hty: Term, concl: Term, depth: int):
    el = Elaborator(env)
    ty = hty
    args: List[MVar] = []
    doms: List[Term] = []
    d = len(ctx)
    for _ in range(12):
        snap = el.snapshot()
        try:
            el.unify(ctx, ty, concl)
            break
        except (UnificationMismatch, KernelError):
            el.restore(snap)
        wt = whnf(env, ctx, el.zonk(ty, d, strict=False), ALL_FLAGS)
        if not isinstance(wt, Prod):
            return None
        mv = el.fresh_meta(d, "auto argument")
        args.append(mv)
        doms.append(wt.dom)
        ty = subst(wt.cod, mv)
    else:
        return None

    out_args: List[Term] = []
    for mv, domty in zip(args, doms):
        z = el.zonk(mv, d, strict=False)
        if isinstance(z, MVar):
            domz = el.zonk(domty, d, strict=False)
            if _contains_meta(domz):
                return None
            sub = auto_prove(env, ctx, domz, depth - 1)
            if sub is None:
                return None
            try:
                el.unify(ctx, mv, sub)
            except (UnificationMismatch, KernelError):
                return None
            out_args.append(sub)
        else:
            out_args.append(z)
    try:
        return mk_app(el.zonk(head, d, strict=True),
                      tuple(el.zonk(a, d, strict=True) for a in out_args))
    except ProverError:
        return None


def do_auto(env, state, gid):
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    proof = auto_prove(env_x, g.ctx, g.concl, depth=5)
    if proof is None:
        return state, [gid]          # no-op on failure
    state = refine(env, state, gid, proof, [])
    return state, []
