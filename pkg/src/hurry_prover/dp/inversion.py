"""inversion: case analysis on an inductive-predicate hypothesis, pruning
constructors whose indices cannot match and adding the premises of those
that can.

The generated proof matches on the hypothesis with a return predicate that
carries one index equation per index; matching branches consume the
equations by projection, impossible branches discriminate on them.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from ..errors import (NoSuchHypothesis, NotAnInductiveHypothesis,
                      TacticFailure, UnsupportedIndexShape)
from ..kernel.env import LocalContext
from ..kernel.reduction import ALL_FLAGS, whnf
from ..kernel.terms import (App, BVar, Const, Construct, Hole, Ind, Lam, Let,
                            Match, MVar, Prod, Sort, Term, app_spine, lift,
                            mk_app, subst)
from ..kernel.typing import constructor_telescope, infer_type
from ..engine.proofstate import Goal, hole_for, ident_args, oracle_env, refine
from ..engine.tactics import _marker, freshen, replace_term
from ..kernel.build import bind_marker
from .equality import discriminator_predicate, projection


def reindex(t: Term, k: int, repls: List[Optional[Term]], shift: int,
            depth: int = 0) -> Term:
    """Rebase a term whose first ``k`` free indices are telescope variables.

    ``repls[w]`` (w counted innermost-first) replaces telescope variable w;
    remaining free indices are shifted by ``shift - k``.  Replacement terms
    are given at the target depth 0 and lifted under binders.
    """
    match t:
        case BVar(i):
            if i < depth:
                return t
            j = i - depth
            if j < k:
                r = repls[j]
                if r is None:
                    raise TacticFailure("inversion", "unexpected unsolved variable")
                return lift(r, depth)
            return BVar(i - k + shift)
        case Sort() | Const() | Ind() | Construct() | MVar():
            return t
        case Prod(n, a, b):
            return Prod(n, reindex(a, k, repls, shift, depth),
                        reindex(b, k, repls, shift, depth + 1))
        case Lam(n, a, b):
            return Lam(n, reindex(a, k, repls, shift, depth),
                       reindex(b, k, repls, shift, depth + 1))
        case Let(n, v, ty, b):
            return Let(n, reindex(v, k, repls, shift, depth),
                       reindex(ty, k, repls, shift, depth),
                       reindex(b, k, repls, shift, depth + 1))
        case App(h, args):
            return mk_app(reindex(h, k, repls, shift, depth),
                          tuple(reindex(a, k, repls, shift, depth) for a in args))
        case Match(s, p, bs):
            return Match(reindex(s, k, repls, shift, depth),
                         reindex(p, k, repls, shift, depth),
                         tuple(reindex(b, k, repls, shift, depth) for b in bs))
    from ..kernel.terms import Fix
    if isinstance(t, Fix):
        return Fix(t.name, t.struct, reindex(t.typ, k, repls, shift, depth),
                   reindex(t.body, k, repls, shift, depth + 1))
    return t


def _eq_stmt(a: Term, l: Term, r: Term) -> Term:
    return mk_app(Ind("eq"), (a, l, r))


def _eq_refl(a: Term, x: Term) -> Term:
    return mk_app(Construct("eq", 1), (a, x))


class _Clash(Exception):
    def __init__(self, proof, ind, params, lidx, whole_l, whole_r, a):
        self.proof = proof
        self.ind = ind
        self.params = params
        self.lidx = lidx
        self.whole_l = whole_l
        self.whole_r = whole_r
        self.a = a


def _walk_equation(env_x, ctx_b: LocalContext, u: Term, t: Term, prf: Term,
                   a_ty: Term, m: int, D: int, solved: Dict[int, Tuple[Term, Term]],
                   residuals: List[Tuple[Term, Term, Term, Term]]):
    """Decompose ``prf : u = t`` into variable assignments and residuals.

    Telescope variables of the branch appear in ``u`` as BVar(i) with
    D - 1 - i < m (they are the outermost m binders at depth D).
    """
    u = whnf(env_x, ctx_b, u, ALL_FLAGS)
    t = whnf(env_x, ctx_b, t, ALL_FLAGS)
    if u == t:
        return
    if isinstance(u, BVar) and 0 <= D - 1 - u.index < m:
        v = D - 1 - u.index
        if v in solved:
            residuals.append((a_ty, u, t, prf))
        else:
            solved[v] = (t, prf)
        return
    uh, uargs = app_spine(u)
    th, targs = app_spine(t)
    if isinstance(uh, Construct) and isinstance(th, Construct):
        if (uh.ind, uh.idx) != (th.ind, th.idx):
            raise _Clash(prf, uh.ind, None, uh.idx, u, t, a_ty)
        block = env_x.inductive(uh.ind)
        nparams = len(block.decl.params)
        params = tuple(uargs[:nparams])
        for pos in range(nparams, len(uargs)):
            ua, ta = uargs[pos], targs[pos]
            arg_ty = infer_type(env_x, ctx_b, ua)
            proj = projection(env_x, uh.ind, params, uh.idx, pos - nparams,
                              ua, arg_ty)
            pred = Lam("z", a_ty, _eq_stmt(lift(arg_ty, 1), lift(ua, 1),
                                           mk_app(lift(proj, 1), (BVar(0),))))
            sub_prf = mk_app(Const("eq_ind"),
                             (a_ty, u, pred, _eq_refl(arg_ty, ua), t, prf))
            _walk_equation(env_x, ctx_b, ua, ta, sub_prf, arg_ty, m, D,
                           solved, residuals)
        return
    residuals.append((a_ty, u, t, prf))


def do_inversion(env, state, gid, hyp: Optional[str]):
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    if hyp is None:
        raise TacticFailure("inversion", "a hypothesis name is required")
    hidx = g.ctx.index_of(hyp)
    if hidx is None:
        raise NoSuchHypothesis(f"no hypothesis {hyp}")
    hterm = BVar(hidx)
    hty = whnf(env_x, g.ctx, g.ctx.type_of(hidx), ALL_FLAGS)
    head, args = app_spine(hty)
    if not isinstance(head, Ind):
        raise NotAnInductiveHypothesis(f"{hyp} is not an inductive hypothesis")
    block = env_x.inductive(head.name)
    nparams = len(block.decl.params)
    params = tuple(args[:nparams])
    indices = tuple(args[nparams:])
    n = len(indices)
    G = g.concl
    nctors = len(block.decl.constructors)

    idx_tys = [infer_type(env_x, g.ctx, ix) for ix in indices]

    # return predicate: fun k1..kn h' => k1 = t1 -> ... -> kn = tn -> G
    core = lift(G, 2 * n + 1)
    for i in range(n, 0, -1):
        d = n + i
        stmt = _eq_stmt(lift(idx_tys[i - 1], d), BVar(n), lift(indices[i - 1], d))
        core = Prod("_", stmt, core)
    pred: Term = core
    hdom = mk_app(Ind(head.name),
                  tuple(lift(p, n) for p in params)
                  + tuple(BVar(n - 1 - i) for i in range(n)))
    pred = Lam("h", hdom, pred)
    for i in range(n, 0, -1):
        pred = Lam("k", lift(idx_tys[i - 1], i - 1), pred)

    branches: List[Term] = []
    new_goals: List[Goal] = []
    base = state.next_gid

    for j in range(1, nctors + 1):
        tele, u_idx = constructor_telescope(block, j, params)
        m = len(tele)
        D = m + n

        # branch context for typing intermediate terms
        ctx_b = g.ctx
        for bn, bty in tele:
            ctx_b = ctx_b.push(bn if bn not in ("", "_") else "a", bty)
        for i in range(1, n + 1):
            d = m + i - 1
            stmt = _eq_stmt(lift(idx_tys[i - 1], d), lift(u_idx[i - 1], i - 1),
                            lift(indices[i - 1], d))
            ctx_b = ctx_b.push("e", stmt)

        solved: Dict[int, Tuple[Term, Term]] = {}
        residuals: List[Tuple[Term, Term, Term, Term]] = []
        clash = None
        try:
            for i in range(1, n + 1):
                u_i = lift(u_idx[i - 1], n)           # telescope coords -> body
                t_i = lift(indices[i - 1], D)
                prf_i = BVar(n - i)
                _walk_equation(env_x, ctx_b, u_i, t_i, prf_i,
                               lift(idx_tys[i - 1], D), m, D, solved, residuals)
        except _Clash as c:
            clash = c

        if clash is not None:
            h2, hargs2 = app_spine(clash.whole_l)
            blk2 = env_x.inductive(clash.ind)
            np2 = len(blk2.decl.params)
            disc = discriminator_predicate(env_x, clash.ind,
                                           tuple(hargs2[:np2]), clash.lidx,
                                           Ind("True"), Ind("False"))
            false_proof = mk_app(Const("eq_ind"),
                                 (clash.a, clash.whole_l, disc,
                                  Construct("True", 1), clash.whole_r,
                                  clash.proof))
            body = mk_app(Const("False_ind"), (lift(G, D), false_proof))
        else:
            # build the subgoal: unsolved telescope entries + residual equations
            entries: List[Tuple[str, Term]] = []     # prefix-relative types
            entry_pos: Dict[int, int] = {}
            used = list(g.ctx.names())

            def sigma_ctx(v: int) -> Term:
                # solutions only mention the outer context: unlift by D
                return lift(solved[v][0], -D)

            for v in range(m):
                if v in solved:
                    continue
                entry_pos[v] = len(entries)
                sub_repls: List[Optional[Term]] = []
                for w in range(v - 1, -1, -1):       # innermost-first
                    if w in solved:
                        sub_repls.append(lift(sigma_ctx(w), len(entries)))
                    else:
                        sub_repls.append(BVar(len(entries) - 1 - entry_pos[w]))
                ty_entry = reindex(tele[v][1], v, sub_repls, len(entries))
                nm = freshen(tele[v][0] if tele[v][0] not in ("", "_") else "H",
                             used)
                used.append(nm)
                entries.append((nm, ty_entry))

            E = len(entries)
            sub_ctx = g.ctx
            for nm, ty_entry in entries:
                sub_ctx = sub_ctx.push(nm, ty_entry)

            # residual equations become hypotheses too
            def body_repls(extra: int) -> List[Optional[Term]]:
                out: List[Optional[Term]] = [None] * n    # e-vars: must not occur
                for v in range(m - 1, -1, -1):            # innermost-first after
                    if v in solved:
                        out.append(lift(sigma_ctx(v), extra))
                    else:
                        out.append(BVar(extra - 1 - entry_pos[v]))
                return out

            r_count = 0
            for a_ty, ul, tr, _prf in residuals:
                stmt_body = _eq_stmt(a_ty, ul, tr)
                stmt_sub = reindex(stmt_body, D, body_repls(E + r_count),
                                   E + r_count)
                nm = freshen("H", used)
                used.append(nm)
                sub_ctx = sub_ctx.push(nm, stmt_sub)
                r_count += 1

            total = E + len(residuals)
            ng = Goal(base + len(new_goals), sub_ctx, lift(G, total))
            new_goals.append(ng)

            # hole arguments: outer context, then transported telescope
            # entries, then residual proofs; all at body depth D
            hargs: List[Term] = list(ident_args(len(g.ctx), under=D))
            for v in range(m):
                if v in solved:
                    continue
                a_term: Term = BVar(D - 1 - v)
                a_ty_cur = lift(tele[v][1], D - v)
                # transport along each solved variable occurring in the type
                for w in range(v):
                    if w not in solved:
                        continue
                    sigma_w, prf_w = solved[w]
                    var_w = BVar(D - 1 - w)
                    tag = _marker()
                    abstracted = replace_term(a_ty_cur, var_w, Const(tag))
                    if abstracted == a_ty_cur:
                        continue
                    w_ty = infer_type(env_x, ctx_b, var_w)
                    motive = Lam("z", w_ty, bind_marker(lift(abstracted, 1), tag))
                    a_term = mk_app(Const("eq_ind"),
                                    (w_ty, var_w, motive, a_term, sigma_w, prf_w))
                    a_ty_cur = replace_term(a_ty_cur, var_w, sigma_w)
                hargs.append(a_term)
            for _a, _u, _t, prf in residuals:
                hargs.append(prf)
            body = Hole(ng.gid, tuple(hargs))

        lam = body
        for i in range(n, 0, -1):
            d = m + i - 1
            stmt = _eq_stmt(lift(idx_tys[i - 1], d), lift(u_idx[i - 1], i - 1),
                            lift(indices[i - 1], d))
            lam = Lam("e", stmt, lam)
        for v in range(m - 1, -1, -1):
            lam = Lam(tele[v][0] if tele[v][0] not in ("", "_") else "a",
                      tele[v][1], lam)
        branches.append(lam)

    refls = tuple(_eq_refl(idx_tys[i], indices[i]) for i in range(n))
    solution = mk_app(Match(hterm, pred, tuple(branches)), refls)
    state = refine(env, state, gid, solution, new_goals)
    return state, [ng.gid for ng in new_goals]
