"""Evaluation: weak-head normalization, full normalization, and the
goal-simplification strategy used by the simpl tactic."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import KernelError
from .env import GlobalEnv, LocalContext, EMPTY_CTX
from .terms import (App, BVar, Const, Construct, Fix, Hole, Ind, Lam, Let,
                    Match, Prod, Sort, Term, app_spine, mk_app, subst)


@dataclass(frozen=True, slots=True)
class ReductionFlags:
    beta: bool = True
    delta: bool = True
    iota: bool = True
    zeta: bool = True

    def __post_init__(self):
        if not (self.beta or self.delta or self.iota or self.zeta):
            raise KernelError("at least one reduction flag must be set")


ALL_FLAGS = ReductionFlags()
BETA_ONLY = ReductionFlags(beta=True, delta=False, iota=False, zeta=False)
NO_DELTA = ReductionFlags(beta=True, delta=False, iota=True, zeta=True)


def whnf(env: GlobalEnv, ctx: LocalContext, t: Term,
         flags: ReductionFlags = ALL_FLAGS) -> Term:
    """Reduce until the head is not a redex under the enabled rules."""
    head, args = app_spine(t)
    args = list(args)
    while True:
        if isinstance(head, App):             # flattening invariant
            inner, iargs = app_spine(head)
            head = inner
            args = list(iargs) + args
            continue
        if isinstance(head, Lam) and args and flags.beta:
            head = subst(head.body, args.pop(0))
            continue
        if isinstance(head, Let) and flags.zeta:
            head = subst(head.body, head.value)
            continue
        if isinstance(head, BVar) and flags.zeta:
            body = ctx.body_of(head.index) if head.index < len(ctx) else None
            if body is not None:
                head = body
                continue
            break
        if isinstance(head, Const) and flags.delta:
            body = env.unfold(head.name)
            if body is not None:
                head = body
                continue
            break
        if isinstance(head, Match) and flags.iota:
            scrut = whnf(env, ctx, head.scrut, flags)
            shead, sargs = app_spine(scrut)
            if isinstance(shead, Construct):
                block = env.inductive(shead.ind)
                nparams = len(block.decl.params)
                branch = head.branches[shead.idx - 1]
                head = mk_app(branch, sargs[nparams:])
                continue
            head = Match(scrut, head.pred, head.branches)
            break
        if isinstance(head, Fix) and flags.iota and len(args) >= head.struct:
            pos = head.struct - 1
            sarg = whnf(env, ctx, args[pos], flags)
            shead, _ = app_spine(sarg)
            if isinstance(shead, Construct):
                args[pos] = sarg
                head = subst(head.body, head)
                continue
            args[pos] = sarg
            break
        break
    return mk_app(head, tuple(args))


def normalize(env: GlobalEnv, t: Term, ctx: LocalContext = EMPTY_CTX,
              flags: ReductionFlags = ALL_FLAGS) -> Term:
    """Full normal form under the enabled rules."""
    t = whnf(env, ctx, t, flags)
    head, args = app_spine(t)
    args = tuple(normalize(env, a, ctx, flags) for a in args)

    def under(name: str, ty: Term) -> LocalContext:
        return ctx.push(name, ty)

    match head:
        case BVar() | Sort() | Const() | Ind() | Construct() | Hole():
            nhead = head
        case Prod(n, a, b):
            na = normalize(env, a, ctx, flags)
            nhead = Prod(n, na, normalize(env, b, under(n, na), flags))
        case Lam(n, a, b):
            na = normalize(env, a, ctx, flags)
            nhead = Lam(n, na, normalize(env, b, under(n, na), flags))
        case Let(n, v, ty, b):
            # zeta disabled: normalize the pieces in place
            nv = normalize(env, v, ctx, flags)
            nty = normalize(env, ty, ctx, flags)
            nhead = Let(n, nv, nty, normalize(env, b, ctx.push(n, nty, nv), flags))
        case Match(s, p, bs):
            nhead = Match(normalize(env, s, ctx, flags),
                          normalize(env, p, ctx, flags),
                          tuple(normalize(env, b, ctx, flags) for b in bs))
        case Fix(n, k, ty, b):
            nty = normalize(env, ty, ctx, flags)
            nhead = Fix(n, k, nty, normalize(env, b, under(n, nty), flags))
        case _:
            raise KernelError(f"normalize: unexpected head {head!r}")
    return mk_app(nhead, args)


def _constructor_headed(t: Term) -> bool:
    head, _ = app_spine(t)
    return isinstance(head, Construct)


def _fires(env: GlobalEnv, t: Term) -> bool:
    """Would unfolding this candidate reduce cleanly?

    Simulates the head beta/iota chain (no delta): the unfolding is accepted
    unless it would leave a match stuck on an opaque scrutinee, or the
    definition's own fix never consumes a constructor.  Recursive calls have
    already been renamed back to their constant, so they stop the chain.
    """
    head, args = app_spine(t)
    args = list(args)
    iota = 0
    fuel = 128
    while fuel:
        fuel -= 1
        if isinstance(head, App):
            inner, iargs = app_spine(head)
            head = inner
            args = list(iargs) + args
            continue
        if isinstance(head, Lam) and args:
            head = subst(head.body, args.pop(0))
            continue
        if isinstance(head, Let):
            head = subst(head.body, head.value)
            continue
        if isinstance(head, Match):
            shead, sargs = app_spine(head.scrut)
            if not isinstance(shead, Construct):
                return False
            block = env.inductive(shead.ind)
            nparams = len(block.decl.params)
            branch = head.branches[shead.idx - 1]
            head = mk_app(branch, sargs[nparams:])
            iota += 1
            continue
        if isinstance(head, Fix):
            if len(args) >= head.struct and _constructor_headed(args[head.struct - 1]):
                if iota == 0:
                    head = subst(head.body, head)
                    continue
                return True
            return iota > 0
        return True
    return False


def _simpl_step(env: GlobalEnv, ctx: LocalContext, t: Term):
    """One head step of the simpl strategy, or None if stuck."""
    head, args = app_spine(t)
    if isinstance(head, Lam) and args:
        return mk_app(subst(head.body, args[0]), args[1:])
    if isinstance(head, Let):
        return mk_app(subst(head.body, head.value), args)
    if isinstance(head, Fix) and len(args) >= head.struct:
        if _constructor_headed(args[head.struct - 1]):
            return mk_app(subst(head.body, head), args)
        return None
    if isinstance(head, Match):
        shead, sargs = app_spine(head.scrut)
        if isinstance(shead, Construct):
            block = env.inductive(shead.ind)
            nparams = len(block.decl.params)
            branch = head.branches[shead.idx - 1]
            return mk_app(mk_app(branch, sargs[nparams:]), args)
        return None
    if isinstance(head, Const):
        body = env.unfold(head.name)
        if body is None:
            return None
        if isinstance(body, Fix):
            if len(args) < body.struct or not _constructor_headed(args[body.struct - 1]):
                return None
            # keep recursive occurrences folded under the constant's name
            candidate = mk_app(subst(body.body, head), args)
        else:
            candidate = mk_app(body, args)
        return candidate if _fires(env, candidate) else None
    return None


def simpl(env: GlobalEnv, ctx: LocalContext, t: Term) -> Term:
    """Unfold applications whose structural argument is constructor-headed,
    leave everything head-opaque untouched, and recurse into subterms.
    Performs no refolding."""
    while True:
        head, args = app_spine(t)
        args = tuple(simpl(env, ctx, a) for a in args)

        match head:
            case BVar() | Sort() | Const() | Ind() | Construct() | Hole():
                nhead = head
            case Prod(n, a, b):
                na = simpl(env, ctx, a)
                nhead = Prod(n, na, simpl(env, ctx.push(n, na), b))
            case Lam(n, a, b):
                na = simpl(env, ctx, a)
                nhead = Lam(n, na, simpl(env, ctx.push(n, na), b))
            case Let(n, v, ty, b):
                nhead = Let(n, simpl(env, ctx, v), simpl(env, ctx, ty), b)
            case Match(s, p, bs):
                nhead = Match(simpl(env, ctx, s), p, tuple(bs))
            case Fix(n, k, ty, b):
                nhead = head
            case _:
                raise KernelError(f"simpl: unexpected head {head!r}")

        t = mk_app(nhead, args)
        stepped = _simpl_step(env, ctx, t)
        if stepped is None:
            # a match stuck on an opaque scrutinee still gets its branches tidied
            head, args = app_spine(t)
            if isinstance(head, Match):
                head = Match(head.scrut, simpl(env, ctx, head.pred),
                             tuple(simpl(env, ctx, b) for b in head.branches))
                t = mk_app(head, args)
            return t
        t = stepped
