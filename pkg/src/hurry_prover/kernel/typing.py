"""Type inference, conversion, and proof checking for the kernel."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from ..errors import (ArityMismatch, KernelError, KernelRejection, NotAFunction,
                      NotASort, TypeMismatch, UnboundVariable, UniverseOverflow)
from .env import (Axiom, Definition, GlobalEnv, InductiveBlock, LocalContext,
                  OracleLemma, EMPTY_CTX)
from .reduction import ALL_FLAGS, ReductionFlags, whnf
from .terms import (App, BVar, Const, Construct, Fix, Hole, Ind, Lam, Let,
                    Match, Prod, Sort, Term, MAX_UNIVERSE, PROP, SET, TYPE,
                    app_spine, lift, mk_app, mk_prods, prod_spine, subst)


def sort_leq(s: Sort, t: Sort) -> bool:
    """Cumulativity: Prop <= Type i, Set <= Type i, Type i <= Type j (i<=j)."""
    if s == t:
        return True
    if t.kind == TYPE:
        if s.kind in (PROP, SET):
            return True
        return s.kind == TYPE and s.level <= t.level
    return False


def convertible(env: GlobalEnv, ctx: LocalContext, t: Term, u: Term) -> bool:
    return _conv(env, ctx, t, u, cumul=False)


def conv_leq(env: GlobalEnv, ctx: LocalContext, t: Term, u: Term) -> bool:
    """Conversion up to cumulativity, for subtyping positions."""
    return _conv(env, ctx, t, u, cumul=True)


def _conv(env: GlobalEnv, ctx: LocalContext, t: Term, u: Term, cumul: bool) -> bool:
    if t == u:
        return True
    t = whnf(env, ctx, t, ALL_FLAGS)
    u = whnf(env, ctx, u, ALL_FLAGS)
    if t == u:
        return True
    th, targs = app_spine(t)
    uh, uargs = app_spine(u)

    def args_conv() -> bool:
        if len(targs) != len(uargs):
            return False
        return all(_conv(env, ctx, a, b, False) for a, b in zip(targs, uargs))

    match (th, uh):
        case (Sort(), Sort()):
            return sort_leq(th, uh) if cumul else th == uh
        case (BVar(i), BVar(j)):
            return i == j and args_conv()
        case (Const(a), Const(b)):
            return a == b and args_conv()
        case (Ind(a), Ind(b)):
            return a == b and args_conv()
        case (Construct(a, i), Construct(b, j)):
            return a == b and i == j and args_conv()
        case (Prod(n, a, b), Prod(_, a2, b2)):
            if targs or uargs:
                return False
            return (_conv(env, ctx, a, a2, False)
                    and _conv(env, ctx.push(n, a), b, b2, cumul))
        case (Lam(n, a, b), Lam(_, a2, b2)):
            return (_conv(env, ctx, a, a2, False)
                    and _conv(env, ctx.push(n, a), b, b2, False)
                    and args_conv())
        case (Match(s1, p1, bs1), Match(s2, p2, bs2)):
            return (len(bs1) == len(bs2)
                    and _conv(env, ctx, s1, s2, False)
                    and _conv(env, ctx, p1, p2, False)
                    and all(_conv(env, ctx, b1, b2, False) for b1, b2 in zip(bs1, bs2))
                    and args_conv())
        case (Fix(n, k1, ty1, b1), Fix(_, k2, ty2, b2)):
            return (k1 == k2
                    and _conv(env, ctx, ty1, ty2, False)
                    and _conv(env, ctx.push(n, ty1), b1, b2, False)
                    and args_conv())
        case (Hole(g1, a1), Hole(g2, a2)):
            return g1 == g2 and a1 == a2 and args_conv()
    return False


GoalTable = Dict[int, Tuple[LocalContext, Term]]


def infer_type(env: GlobalEnv, ctx: LocalContext, t: Term,
               goals: Optional[GoalTable] = None) -> Term:
    """Principal type of a well-scoped term; raises on ill-typed input."""
    match t:
        case BVar(k):
            if k >= len(ctx):
                raise UnboundVariable(f"unbound de Bruijn index {k}")
            return ctx.type_of(k)
        case Sort(kind, level):
            if kind in (PROP, SET):
                return Sort(TYPE, 1)
            if level + 1 > MAX_UNIVERSE:
                raise UniverseOverflow(f"universe level {level + 1} exceeds ladder")
            return Sort(TYPE, level + 1)
        case Const(name):
            return env.const_type(name)
        case Ind(name):
            return env.inductive(name).typ
        case Construct(ind, idx):
            block = env.inductive(ind)
            if not 1 <= idx <= len(block.ctor_types):
                raise ArityMismatch(f"{ind} has no constructor #{idx}")
            return block.ctor_types[idx - 1]
        case Prod(name, dom, cod):
            s1 = _sort_of_type(env, ctx, dom, goals)
            s2 = _sort_of_type(env, ctx.push(name, dom), cod, goals)
            return _product_sort(s1, s2)
        case Lam(name, dom, body):
            _sort_of_type(env, ctx, dom, goals)
            bty = infer_type(env, ctx.push(name, dom), body, goals)
            return Prod(name, dom, bty)
        case Let(name, value, vtype, body):
            _sort_of_type(env, ctx, vtype, goals)
            vt = infer_type(env, ctx, value, goals)
            if not conv_leq(env, ctx, vt, vtype):
                raise TypeMismatch(vtype, vt, "let binding")
            bty = infer_type(env, ctx.push(name, vtype, value), body, goals)
            return subst(bty, value)
        case App(head, args):
            fty = infer_type(env, ctx, head, goals)
            for i, arg in enumerate(args):
                fty_w = whnf(env, ctx, fty, ALL_FLAGS)
                if not isinstance(fty_w, Prod):
                    raise NotAFunction(mk_app(head, args[:i]), fty_w)
                aty = infer_type(env, ctx, arg, goals)
                if not conv_leq(env, ctx, aty, fty_w.dom):
                    raise TypeMismatch(fty_w.dom, aty, f"argument {i + 1}")
                fty = subst(fty_w.cod, arg)
            return fty
        case Match():
            return _infer_match(env, ctx, t, goals)
        case Fix(name, struct, typ, body):
            _sort_of_type(env, ctx, typ, goals)
            binders, _ = prod_spine(typ)
            if not 1 <= struct <= len(binders):
                raise ArityMismatch("fix structural argument outside the product spine")
            bty = infer_type(env, ctx.push(name, typ), body, goals)
            if not conv_leq(env, ctx.push(name, typ), bty, lift(typ, 1)):
                raise TypeMismatch(typ, bty, f"body of fix {name}")
            return typ
        case Hole(goal, hargs):
            if goals is None or goal not in goals:
                raise KernelError("proof term still contains a hole")
            gctx, gconcl = goals[goal]
            if len(hargs) != len(gctx):
                raise KernelError("hole instance does not cover its goal context")
            from .terms import instantiate_hole_args
            for i, a in enumerate(hargs):
                expected = instantiate_hole_args(gctx.entries[i].typ, hargs[:i])
                aty = infer_type(env, ctx, a, goals)
                if not conv_leq(env, ctx, aty, expected):
                    raise TypeMismatch(expected, aty, f"hole argument {i + 1}")
            return instantiate_hole_args(gconcl, hargs)
    raise KernelError(f"infer_type: unexpected term {t!r}")


def _sort_of_type(env, ctx, t, goals=None) -> Sort:
    s = whnf(env, ctx, infer_type(env, ctx, t, goals), ALL_FLAGS)
    if not isinstance(s, Sort):
        raise NotASort(f"expected a type, found inhabitant of {s!r}")
    return s


def _product_sort(s1: Sort, s2: Sort) -> Sort:
    if s2.kind == PROP:
        return Sort(PROP)                      # impredicative Prop
    if s2.kind == SET:
        if s1.kind in (PROP, SET):
            return Sort(SET)                   # predicative Set
        return Sort(TYPE, s1.level)
    j = s2.level
    i = s1.level if s1.kind == TYPE else 0
    return Sort(TYPE, max(i, j, 1))


def scrutinee_inductive(env: GlobalEnv, ctx: LocalContext, scrut_type: Term):
    """Decompose a scrutinee type into (block, params, indices)."""
    w = whnf(env, ctx, scrut_type, ALL_FLAGS)
    head, args = app_spine(w)
    if not isinstance(head, Ind):
        raise ArityMismatch("match scrutinee is not of inductive type")
    block = env.inductive(head.name)
    nparams = len(block.decl.params)
    if len(args) != nparams + block.n_indices:
        raise ArityMismatch(f"inductive {head.name} not fully applied")
    return block, args[:nparams], args[nparams:]


def constructor_telescope(block: InductiveBlock, idx: int, params: Tuple[Term, ...]):
    """Argument telescope and conclusion indices of constructor ``idx``
    instantiated at ``params`` (relative to the surrounding context)."""
    ctype = block.ctor_types[idx - 1]
    for p in params:
        w = ctype
        if not isinstance(w, Prod):
            raise ArityMismatch("constructor under-parameterized")
        ctype = subst(w.cod, p)
    binders, concl = prod_spine(ctype)
    chead, cargs = app_spine(concl)
    nparams = len(params)
    indices = cargs[nparams:]
    return binders, indices


def _infer_match(env: GlobalEnv, ctx: LocalContext, t: Match,
                 goals: Optional[GoalTable]) -> Term:
    stype = infer_type(env, ctx, t.scrut, goals)
    block, params, indices = scrutinee_inductive(env, ctx, stype)
    name = block.decl.name
    if len(t.branches) != len(block.decl.constructors):
        raise ArityMismatch(
            f"match on {name} needs {len(block.decl.constructors)} branches, "
            f"got {len(t.branches)}")

    ptype = infer_type(env, ctx, t.pred, goals)
    peeled = []
    pty = ptype
    for _ in range(block.n_indices + 1):
        pty_w = whnf(env, ctx, pty, ALL_FLAGS)
        if not isinstance(pty_w, Prod):
            raise ArityMismatch("match return predicate has too few binders")
        peeled.append((pty_w.name, pty_w.dom))
        pty = pty_w.cod
    res_sort = whnf(env, ctx, pty, ALL_FLAGS)
    if not isinstance(res_sort, Sort):
        raise NotASort("match return predicate does not end in a sort")

    # Elimination restriction: non-empty Prop inductives eliminate to Prop only.
    if block.sort == Sort(PROP) and block.decl.constructors and res_sort != Sort(PROP):
        raise TypeMismatch(Sort(PROP), res_sort,
                           f"large elimination of Prop inductive {name}")

    # The predicate must accept the scrutinee's index telescope.
    expected_pred = _expected_predicate_type(block, params, res_sort)
    if not convertible(env, ctx, ptype, expected_pred):
        raise TypeMismatch(expected_pred, ptype, "match return predicate")

    for j, branch in enumerate(t.branches, start=1):
        binders, concl_indices = constructor_telescope(block, j, params)
        m = len(binders)
        ctor_term = mk_app(Construct(name, j),
                           tuple(lift(p, m) for p in params)
                           + tuple(BVar(m - 1 - i) for i in range(m)))
        expected_branch = mk_prods(
            binders, mk_app(lift_n(t.pred, m), tuple(concl_indices) + (ctor_term,)))
        bty = infer_type(env, ctx, branch, goals)
        if not conv_leq(env, ctx, bty, expected_branch):
            raise TypeMismatch(expected_branch, bty, f"match branch {j}")

    result = mk_app(t.pred, tuple(indices) + (t.scrut,))
    return whnf(env, ctx, result, ReductionFlags(beta=True, delta=False,
                                                 iota=False, zeta=False))


def lift_n(t: Term, n: int) -> Term:
    return lift(t, n) if n else t


def _subst_head_binder(t: Term, value: Term) -> Term:
    if not isinstance(t, Prod):
        raise ArityMismatch("telescope too short")
    return subst(t.cod, value)


def _expected_predicate_type(block: InductiveBlock, params: Tuple[Term, ...],
                             res_sort: Sort) -> Term:
    from .terms import subst_many
    inst_arity = subst_many(block.decl.arity, list(reversed(params)))
    idx_binders, _ = prod_spine(inst_arity)
    n = len(idx_binders)
    self_ty = mk_app(Ind(block.decl.name),
                     tuple(lift(p, n) for p in params)
                     + tuple(BVar(n - 1 - i) for i in range(n)))
    return mk_prods(idx_binders, Prod("_", self_ty, res_sort))


@dataclass(frozen=True, slots=True)
class ProofCheck:
    ok: bool
    oracles: Tuple[str, ...] = ()
    error: Optional[str] = None


def collect_oracles(env: GlobalEnv, t: Term) -> Tuple[str, ...]:
    """Oracle lemmas a term relies on, including through sealed theorems."""
    seen = []

    def visit(u: Term):
        match u:
            case Const(name):
                d = env.by_name.get(name)
                if isinstance(d, OracleLemma) and name not in seen:
                    seen.append(name)
                elif isinstance(d, Definition):
                    for dep in d.oracle_deps:
                        if dep not in seen:
                            seen.append(dep)
            case App(h, args):
                visit(h)
                for a in args:
                    visit(a)
            case Prod(_, a, b) | Lam(_, a, b):
                visit(a)
                visit(b)
            case Let(_, v, ty, b):
                visit(v)
                visit(ty)
                visit(b)
            case Match(s, p, bs):
                visit(s)
                visit(p)
                for b in bs:
                    visit(b)
            case Fix(_, _, ty, b):
                visit(ty)
                visit(b)
            case Hole(_, args):
                for a in args:
                    visit(a)
            case _:
                pass

    visit(t)
    return tuple(seen)


def check_proof(env: GlobalEnv, proof: Term, statement: Term) -> ProofCheck:
    """Kernel gate: the proof must have exactly the statement's type and all
    embedded fixpoints must satisfy the guard condition."""
    from .inductive import guard_check_term

    try:
        _sort_of_type(env, EMPTY_CTX, statement)
        if not guard_check_term(env, EMPTY_CTX, proof):
            return ProofCheck(False, (), "non-structural recursion in proof")
        pty = infer_type(env, EMPTY_CTX, proof)
        if not conv_leq(env, EMPTY_CTX, pty, statement):
            return ProofCheck(False, (), "proof term does not have the stated type")
    except KernelError as e:
        return ProofCheck(False, (), str(e))
    return ProofCheck(True, collect_oracles(env, proof))
