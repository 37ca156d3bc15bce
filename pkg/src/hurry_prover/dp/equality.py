"""discriminate and injection: genuine kernel proof terms from constructor
clashes and constructor injectivity."""

from __future__ import annotations

from typing import List, Optional, Tuple

from ..errors import (NoSuchHypothesis, NotAConstructorClash, NotAnEquality,
                      NotSameConstructor, TacticFailure)
from ..kernel.build import bind_marker
from ..kernel.env import GlobalEnv, LocalContext
from ..kernel.reduction import ALL_FLAGS, BETA_ONLY, whnf
from ..kernel.terms import (App, BVar, Const, Construct, Ind, Lam, Match,
                            Prod, Sort, Term, PROP, app_spine, lift, mk_app,
                            mk_lams, subst)
from ..kernel.typing import constructor_telescope, infer_type
from ..engine.proofstate import Goal, hole_for, oracle_env, refine
from ..engine.tactics import _marker, freshen


def _eq_parts(env_x, ctx, ty: Term):
    w = whnf(env_x, ctx, ty, ALL_FLAGS)
    head, args = app_spine(w)
    if isinstance(head, Ind) and head.name == "eq" and len(args) == 3:
        return args
    return None


def _hyp_index(goal: Goal, name: Optional[str], tacname: str) -> int:
    if name is None:
        raise TacticFailure(tacname, "a hypothesis name is required")
    idx = goal.ctx.index_of(name)
    if idx is None:
        raise NoSuchHypothesis(f"no hypothesis {name}")
    return idx


def _ctor_headed(env_x, ctx, t: Term):
    w = whnf(env_x, ctx, t, ALL_FLAGS)
    head, args = app_spine(w)
    if isinstance(head, Construct):
        return head, args, w
    return None, None, w


def discriminator_predicate(env_x, ind: str, params, idx: int, res_true: Term,
                            res_false: Term) -> Term:
    """fun x => match x with C_idx ... => res_true | _ => res_false end."""
    block = env_x.inductive(ind)
    ty0 = mk_app(Ind(ind), tuple(params))
    params1 = tuple(lift(p, 1) for p in params)
    branches = []
    for j in range(1, len(block.decl.constructors) + 1):
        tele, _ = constructor_telescope(block, j, params1)
        body = lift(res_true if j == idx else res_false, len(tele) + 1)
        branches.append(mk_lams(tele, body))
    mpred = Lam("y", lift(ty0, 1), Sort(PROP))
    return Lam("x", ty0, Match(BVar(0), mpred, tuple(branches)))


def discriminate_proof(env_x, ctx, hyp_term: Term, hyp_ty: Term,
                       goal_concl: Term) -> Term:
    """From H : C1 ... = C2 ... with distinct constructors, prove anything."""
    parts = _eq_parts(env_x, ctx, hyp_ty)
    if parts is None:
        raise NotAnEquality("hypothesis is not an equality")
    a, l, r = parts
    lh, _, lw = _ctor_headed(env_x, ctx, l)
    rh, _, rw = _ctor_headed(env_x, ctx, r)
    if lh is None or rh is None or (lh.ind, lh.idx) == (rh.ind, rh.idx):
        raise NotAConstructorClash(
            "hypothesis does not equate distinct constructors")
    true_t = Ind("True")
    false_t = Ind("False")
    disc = discriminator_predicate(env_x, lh.ind, _params_of(env_x, ctx, lh, lw),
                                   lh.idx, true_t, false_t)
    # eq_ind a l disc I r H : disc r  (which reduces to False)
    false_proof = mk_app(Const("eq_ind"),
                         (a, lw, disc, Construct("True", 1), rw, hyp_term))
    return mk_app(Const("False_ind"), (goal_concl, false_proof))


def _params_of(env_x, ctx, chead: Construct, applied: Term):
    block = env_x.inductive(chead.ind)
    nparams = len(block.decl.params)
    _, args = app_spine(applied)
    return tuple(args[:nparams])


def do_discriminate(env, state, gid, hyp: Optional[str]):
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    if hyp is None:
        # bare form: the first hypothesis equating distinct constructors
        for i in range(len(g.ctx)):
            try:
                proof = discriminate_proof(env_x, g.ctx, BVar(i),
                                           g.ctx.type_of(i), g.concl)
                return refine(env, state, gid, proof, []), []
            except (NotAnEquality, NotAConstructorClash):
                continue
        raise NotAConstructorClash(
            "no hypothesis equates distinct constructors")
    i = _hyp_index(g, hyp, "discriminate")
    proof = discriminate_proof(env_x, g.ctx, BVar(i), g.ctx.type_of(i),
                               g.concl)
    state = refine(env, state, gid, proof, [])
    return state, []


def projection(env_x, ind: str, params, ctor_idx: int, arg_pos: int,
               default: Term, result_ty: Term) -> Term:
    """fun x => match x with C_idx a1..am => a_{arg_pos} | _ => default end.

    Only usable when the projected argument's type does not depend on the
    other constructor arguments (true for simple data like nat and bin).
    """
    block = env_x.inductive(ind)
    ty0 = mk_app(Ind(ind), tuple(params))
    params1 = tuple(lift(p, 1) for p in params)
    branches = []
    for j in range(1, len(block.decl.constructors) + 1):
        tele, _ = constructor_telescope(block, j, params1)
        m = len(tele)
        if j == ctor_idx:
            body: Term = BVar(m - 1 - arg_pos)
        else:
            body = lift(default, m + 1)
        branches.append(mk_lams(tele, body))
    mpred = Lam("y", lift(ty0, 1), lift(result_ty, 2))
    return Lam("x", ty0, Match(BVar(0), mpred, tuple(branches)))


def injection_equations(env_x, ctx, hyp_term: Term, hyp_ty: Term):
    """Proof terms for the component equations of C a... = C b...."""
    parts = _eq_parts(env_x, ctx, hyp_ty)
    if parts is None:
        raise NotAnEquality("hypothesis is not an equality")
    a, l, r = parts
    lh, largs, lw = _ctor_headed(env_x, ctx, l)
    rh, rargs, rw = _ctor_headed(env_x, ctx, r)
    if lh is None or rh is None:
        raise NotSameConstructor("hypothesis sides are not constructor applications")
    if (lh.ind, lh.idx) != (rh.ind, rh.idx):
        raise NotSameConstructor("hypothesis equates different constructors")
    block = env_x.inductive(lh.ind)
    nparams = len(block.decl.params)
    params = tuple(largs[:nparams])
    out: List[Tuple[Term, Term]] = []
    for pos in range(nparams, len(largs)):
        la, ra = largs[pos], rargs[pos]
        arg_ty = infer_type(env_x, ctx, la)
        proj = projection(env_x, lh.ind, params, lh.idx, pos - nparams, la, arg_ty)
        # eq_ind a lw (fun z => la = proj z) (eq_refl la) rw H  :  la = proj rw
        pred = Lam("z", a, mk_app(Ind("eq"),
                                  (lift(arg_ty, 1), lift(la, 1),
                                   mk_app(lift(proj, 1), (BVar(0),)))))
        refl = mk_app(Construct("eq", 1), (arg_ty, la))
        prf = mk_app(Const("eq_ind"), (a, lw, pred, refl, rw, hyp_term))
        eq_stmt = mk_app(Ind("eq"), (arg_ty, la, ra))
        out.append((eq_stmt, prf))
    return out


def do_injection(env, state, gid, hyp: Optional[str]):
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    i = _hyp_index(g, hyp, "injection")
    eqs = injection_equations(env_x, g.ctx, BVar(i), g.ctx.type_of(i))
    if not eqs:
        raise TacticFailure("injection", "no component equations result")

    # one subgoal with the equations added as hypotheses
    ctx2 = g.ctx
    names: List[str] = []
    for k, (stmt, _) in enumerate(eqs):
        nm = freshen("H", ctx2.names())
        names.append(nm)
        ctx2 = ctx2.push(nm, lift(stmt, k))
    ng = Goal(state.next_gid, ctx2, lift(g.concl, len(eqs)))
    lam = hole_for(ng.gid, ctx2)
    binders = [(names[k], lift(eqs[k][0], k)) for k in range(len(eqs))]
    lam = mk_lams(binders, lam)
    sol = mk_app(lam, tuple(prf for _, prf in eqs))
    state = refine(env, state, gid, sol, [ng])
    return state, [ng.gid]
