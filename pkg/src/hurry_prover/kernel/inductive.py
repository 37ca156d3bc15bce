"""Inductive declarations: admission (strict positivity), structural guard
checking, and derivation of induction schemes."""

from __future__ import annotations

from typing import List, Optional, Sequence, Set, Tuple

from ..errors import (ArityMismatch, BadConstructorConclusion, KernelError,
                      KernelRejection, NameClash, NegativeOccurrence, NotASort)
from .build import fix_, forall_, forall_many, lam_, lam_many, open_term
from .env import (GlobalEnv, InductiveBlock, InductiveDecl, LocalContext,
                  Definition, EMPTY_CTX)
from .reduction import ALL_FLAGS, whnf
from .terms import (App, BVar, Const, Construct, Fix, Hole, Ind, Lam, Let,
                    Match, Prod, Sort, Term, PROP, app_spine, lift, mk_app,
                    mk_prods, occurs_free, prod_spine, subst)
from .typing import (constructor_telescope, infer_type, _sort_of_type,
                     check_proof)


def _occurs_ind(t: Term, name: str) -> bool:
    match t:
        case Ind(n):
            return n == name
        case BVar() | Sort() | Const() | Construct():
            return False
        case Prod(_, a, b) | Lam(_, a, b):
            return _occurs_ind(a, name) or _occurs_ind(b, name)
        case Let(_, v, ty, b):
            return any(_occurs_ind(x, name) for x in (v, ty, b))
        case App(h, args):
            return _occurs_ind(h, name) or any(_occurs_ind(a, name) for a in args)
        case Match(s, p, bs):
            return (_occurs_ind(s, name) or _occurs_ind(p, name)
                    or any(_occurs_ind(b, name) for b in bs))
        case Fix(_, _, ty, b):
            return _occurs_ind(ty, name) or _occurs_ind(b, name)
        case Hole(_, args):
            return any(_occurs_ind(a, name) for a in args)
    return False


def check_inductive(env: GlobalEnv, decl: InductiveDecl) -> InductiveBlock:
    """Validate a declaration and produce the registrable block.

    Every constructor must mention the inductive only strictly positively:
    never left of an arrow, and nested occurrences only as the conclusion of
    an argument's product spine.
    """
    name = decl.name
    if env.has(name):
        raise NameClash(f"name {name} already declared")
    for cname, _ in decl.constructors:
        if env.has(cname) or cname == name:
            raise NameClash(f"name {cname} already declared")
    seen = {name}
    for cname, _ in decl.constructors:
        if cname in seen:
            raise NameClash(f"duplicate constructor name {cname}")
        seen.add(cname)

    # Parameter telescope and arity are well-formed types.
    ctx = EMPTY_CTX
    for pname, pty in decl.params:
        _sort_of_type(env, ctx, pty)
        ctx = ctx.push(pname, pty)
    idx_binders, arity_core = prod_spine(decl.arity)
    sort = whnf(env, ctx, arity_core, ALL_FLAGS)
    if not isinstance(sort, Sort):
        raise NotASort(f"arity of {name} does not end in a sort")
    _sort_of_type(env, ctx, decl.arity)

    typ = mk_prods(decl.params, decl.arity)
    provisional = InductiveBlock(
        decl=InductiveDecl(name, decl.params, decl.arity, ()),
        typ=typ, ctor_types=(), n_indices=len(idx_binders), sort=sort)
    env_self = env.add(provisional)

    nparams = len(decl.params)
    closed_ctypes = []
    for cname, ctype in decl.constructors:
        _sort_of_type(env_self, ctx, ctype)
        binders, concl = prod_spine(ctype)
        m = len(binders)
        chead, cargs = app_spine(concl)
        if chead != Ind(name):
            raise BadConstructorConclusion(
                f"constructor {cname} does not conclude in {name}")
        if len(cargs) != nparams + len(idx_binders):
            raise BadConstructorConclusion(
                f"constructor {cname} applies {name} to the wrong arity")
        for i in range(nparams):
            if cargs[i] != BVar(nparams + m - 1 - i):
                raise BadConstructorConclusion(
                    f"constructor {cname} must apply {name} to its parameters")
        for idx_arg in cargs[nparams:]:
            if _occurs_ind(idx_arg, name):
                raise NegativeOccurrence(cname, "recursive occurrence in an index")

        for j, (_, aty) in enumerate(binders):
            if not _occurs_ind(aty, name):
                continue
            pbinders, core = prod_spine(aty)
            for _, pt in pbinders:
                if _occurs_ind(pt, name):
                    raise NegativeOccurrence(cname, "occurrence left of an arrow")
            ch, cas = app_spine(core)
            if ch != Ind(name):
                raise NegativeOccurrence(cname, "occurrence not in spine conclusion")
            for a in cas:
                if _occurs_ind(a, name):
                    raise NegativeOccurrence(cname, "occurrence inside its own arguments")
        closed_ctypes.append(mk_prods(decl.params, ctype))

    return InductiveBlock(decl=decl, typ=typ, ctor_types=tuple(closed_ctypes),
                          n_indices=len(idx_binders), sort=sort)


# --- structural guard --------------------------------------------------------


def guard_check(env: GlobalEnv, ctx: LocalContext, fx: Fix) -> bool:
    """True iff every recursive call passes, in the structural position, a
    variable obtained by matching the structural argument (or a strict
    subterm of it), tracked through nested matches and lets."""
    k = fx.struct

    # positions are absolute context depths; the walk context starts at the
    # caller's depth
    base = len(ctx)
    fix_abs = base

    def ctor_arities(wctx: LocalContext, scrut_abs: int) -> Optional[List[int]]:
        depth = len(wctx)
        idx = depth - 1 - scrut_abs
        try:
            sty = whnf(env, wctx, wctx.type_of(idx), ALL_FLAGS)
        except KernelError:
            return None
        head, _ = app_spine(sty)
        if not isinstance(head, Ind):
            return None
        block = env.inductive(head.name)
        out = []
        for j in range(1, len(block.decl.constructors) + 1):
            ct = block.ctor_types[j - 1]
            binders, _ = prod_spine(ct)
            out.append(len(binders) - len(block.decl.params))
        return out

    def walk(t: Term, wctx: LocalContext, subs: Set[int], struct_abs: Optional[int]) -> bool:
        depth = len(wctx)

        def abs_of(i: int) -> int:
            return depth - 1 - i

        match t:
            case BVar(i):
                return abs_of(i) != fix_abs      # bare recursive reference
            case Sort() | Const() | Ind() | Construct() | Hole():
                return True
            case App(h, args):
                if isinstance(h, BVar) and abs_of(h.index) == fix_abs:
                    if len(args) < k:
                        return False
                    sarg = args[k - 1]
                    if not (isinstance(sarg, BVar) and abs_of(sarg.index) in subs):
                        return False
                    return all(walk(a, wctx, subs, struct_abs) for a in args)
                return (walk(h, wctx, subs, struct_abs)
                        and all(walk(a, wctx, subs, struct_abs) for a in args))
            case Prod(n, a, b) | Lam(n, a, b):
                return (walk(a, wctx, subs, struct_abs)
                        and walk(b, wctx.push(n, a), subs, struct_abs))
            case Let(n, v, ty, b):
                if not (walk(v, wctx, subs, struct_abs) and walk(ty, wctx, subs, struct_abs)):
                    return False
                new_subs = subs
                if isinstance(v, BVar):
                    va = abs_of(v.index)
                    if va in subs or va == struct_abs:
                        new_subs = subs | {len(wctx)}
                return walk(b, wctx.push(n, ty), new_subs, struct_abs)
            case Match(s, p, bs):
                if not walk(s, wctx, subs, struct_abs):
                    return False
                if not walk(p, wctx, subs, struct_abs):
                    return False
                scrut_is_sub = (isinstance(s, BVar)
                                and (abs_of(s.index) in subs
                                     or abs_of(s.index) == struct_abs))
                arities = ctor_arities(wctx, abs_of(s.index)) if scrut_is_sub else None
                for j, br in enumerate(bs):
                    if scrut_is_sub and arities is not None and j < len(arities):
                        if not _walk_branch(br, wctx, subs, struct_abs, arities[j]):
                            return False
                    else:
                        if not walk(br, wctx, subs, struct_abs):
                            return False
                return True
            case Fix(n, _, ty, b):
                return (walk(ty, wctx, subs, struct_abs)
                        and walk(b, wctx.push(n, ty), subs, struct_abs))
        return False

    def _walk_branch(br: Term, wctx: LocalContext, subs: Set[int],
                     struct_abs: Optional[int], arity: int) -> bool:
        # the first ``arity`` lambdas bind pattern variables: strict subterms
        new_subs = set(subs)
        t = br
        c = wctx
        while arity > 0 and isinstance(t, Lam):
            if not walk(t.dom, c, new_subs, struct_abs):
                return False
            new_subs.add(len(c))
            c = c.push(t.name, t.dom)
            t = t.body
            arity -= 1
        return walk(t, c, new_subs, struct_abs)

    # Peel the argument lambdas to locate the structural binder.
    wctx = ctx.push(fx.name, fx.typ)
    t = fx.body
    struct_abs = None
    peeled = 0
    while isinstance(t, Lam):
        if not walk(t.dom, wctx, set(), None):
            return False
        peeled += 1
        wctx = wctx.push(t.name, t.dom)
        if peeled == k:
            struct_abs = len(wctx) - 1
            t = t.body
            break
        t = t.body
    if struct_abs is None:
        # not enough visible binders: accept only if there is no recursion
        return walk(t, wctx, set(), None)
    return walk(t, wctx, set(), struct_abs)


def guard_check_term(env: GlobalEnv, ctx: LocalContext, t: Term) -> bool:
    """Run the guard on every fixpoint nested anywhere in ``t``."""
    match t:
        case Fix(n, _, ty, b):
            if not guard_check(env, ctx, t):
                return False
            return (guard_check_term(env, ctx, ty)
                    and guard_check_term(env, ctx.push(n, ty), b))
        case BVar() | Sort() | Const() | Ind() | Construct() | Hole():
            return True
        case Prod(n, a, b) | Lam(n, a, b):
            return (guard_check_term(env, ctx, a)
                    and guard_check_term(env, ctx.push(n, a), b))
        case Let(n, v, ty, b):
            return (guard_check_term(env, ctx, v)
                    and guard_check_term(env, ctx, ty)
                    and guard_check_term(env, ctx.push(n, ty, v), b))
        case App(h, args):
            return (guard_check_term(env, ctx, h)
                    and all(guard_check_term(env, ctx, a) for a in args))
        case Match(s, p, bs):
            return (guard_check_term(env, ctx, s)
                    and guard_check_term(env, ctx, p)
                    and all(guard_check_term(env, ctx, b) for b in bs))
    return True


# --- induction schemes -------------------------------------------------------


class _Namer:
    def __init__(self, used: Sequence[str] = ()):
        self.used = set(used)

    def fresh(self, base: str) -> str:
        if base in ("", "_"):
            base = "x"
        if base not in self.used:
            self.used.add(base)
            return base
        i = 0
        while f"{base}{i}" in self.used:
            i += 1
        name = f"{base}{i}"
        self.used.add(name)
        return name


def _head_letter(env: GlobalEnv, t: Term) -> str:
    head, _ = app_spine(t)
    match head:
        case Ind(n) | Const(n):
            return n[:1].lower() or "x"
        case Sort():
            return "P"
    return "x"


def _is_recursive_arg(aty: Term, ind_name: str):
    """If ``aty`` is a (possibly product-prefixed) application of the
    inductive, return (prefix binders, index terms); else None."""
    pbinders, core = prod_spine(aty)
    head, args = app_spine(core)
    if head == Ind(ind_name):
        return pbinders, args
    return None


def derive_induction(env: GlobalEnv, block: InductiveBlock):
    """Statement and proof of the minimality scheme for an admitted block.

    For a Prop-sorted family the motive ranges over the indices only; for a
    data type it also covers the element.
    """
    decl = block.decl
    name = decl.name
    nparams = len(decl.params)
    idx_binders, _ = prod_spine(decl.arity)
    n_idx = len(idx_binders)
    is_prop = block.sort == Sort(PROP)
    ctors = decl.constructors

    def I_app(pvars, ivars):
        return mk_app(Ind(name), tuple(pvars) + tuple(ivars))

    def idx_telescope(pvars):
        out = []
        for i, (nm, ty) in enumerate(idx_binders):
            out.append((nm, lambda acc, ty=ty: open_term(ty, list(pvars) + list(acc))))
        return out

    def motive_type(pvars):
        tel = idx_telescope(pvars)
        if is_prop:
            return forall_many(tel, lambda ivars: Sort(PROP))
        tel = tel + [("_", lambda acc: I_app(pvars, acc))]
        return forall_many(tel, lambda vs: Sort(PROP))

    def premise_type(j, pvars, P):
        binders, idx_terms = constructor_telescope(block, j, tuple(pvars))
        namer = _Namer([n for n, _ in decl.params] + ["P"])
        m = len(binders)

        def go(i, avars):
            if i == m:
                idxs = [open_term(u, avars) for u in idx_terms]
                if is_prop:
                    return mk_app(P, tuple(idxs))
                elem = mk_app(Construct(name, j), tuple(pvars) + tuple(avars))
                return mk_app(P, tuple(idxs) + (elem,))
            aname, aty_db = binders[i]
            aty = open_term(aty_db, avars)
            rec = _is_recursive_arg(aty, name)
            shown = namer.fresh(aname if aname not in ("", "_") else _head_letter(env, aty))

            def after(a):
                if rec is None:
                    return go(i + 1, avars + [a])
                pfx, cargs = rec
                ih = _ih_type(pfx, cargs, avars, a, pvars, P)
                return forall_("_", ih, lambda _ih: go(i + 1, avars + [a]))

            return forall_(shown, aty, after)

        return go(0, [])

    def _ih_type(pfx, cargs, avars, a, pvars, P):
        tel = [(nm, (lambda acc, ty=ty: open_term(ty, list(avars) + list(acc))))
               for nm, ty in pfx]

        def body(ws):
            idxs = [open_term(u, list(avars) + list(ws)) for u in cargs[nparams:]]
            if is_prop:
                return mk_app(P, tuple(idxs))
            return mk_app(P, tuple(idxs) + (mk_app(a, tuple(ws)),))

        return forall_many(tel, body)

    def conclusion(pvars, P):
        namer = _Namer([n for n, _ in decl.params] + ["P"])
        tel = []
        for i, (nm, ty) in enumerate(idx_binders):
            shown = namer.fresh(nm if nm not in ("", "_")
                                else _head_letter(env, open_term(ty, pvars)))
            tel.append((shown, lambda acc, ty=ty: open_term(ty, list(pvars) + list(acc))))
        elem_name = "_" if is_prop else namer.fresh(name[:1].lower() or "x")
        tel = tel + [(elem_name, lambda acc: I_app(pvars, acc))]

        def body(vs):
            ivars, x = vs[:-1], vs[-1]
            if is_prop:
                return mk_app(P, tuple(ivars))
            return mk_app(P, tuple(ivars) + (x,))

        return forall_many(tel, body)

    param_tel = [(nm, (lambda acc, ty=ty: open_term(ty, acc))) for nm, ty in decl.params]

    statement = forall_many(param_tel, lambda pvars:
        forall_("P", motive_type(pvars), lambda P:
            forall_many([("_", (lambda acc, j=j: premise_type(j, pvars, P)))
                         for j in range(1, len(ctors) + 1)],
                        lambda fs: conclusion(pvars, P))))

    # proof: a guarded fixpoint dispatching on the element
    def fix_type(pvars, P):
        tel = idx_telescope(pvars) + [("_", lambda acc: I_app(pvars, acc))]

        def body(vs):
            ivars, x = vs[:-1], vs[-1]
            return mk_app(P, tuple(ivars)) if is_prop else mk_app(P, tuple(ivars) + (x,))

        return forall_many(tel, body)

    def branch(j, pvars, P, fs, F):
        binders, idx_terms = constructor_telescope(block, j, tuple(pvars))
        tel = [(nm if nm not in ("", "_") else "a",
                (lambda acc, ty=ty: open_term(ty, list(acc))))
               for nm, ty in binders]
        # binder types refer to params (already concrete in ``binders``) and
        # earlier args only
        def body(avars):
            args = []
            for i, (nm, aty_db) in enumerate(binders):
                a = avars[i]
                args.append(a)
                aty = open_term(aty_db, avars[:i])
                rec = _is_recursive_arg(aty, name)
                if rec is not None:
                    pfx, cargs = rec
                    tel2 = [(n2, (lambda acc, ty=ty2: open_term(ty, list(avars[:i]) + list(acc))))
                            for n2, ty2 in pfx]

                    def ih_body(ws, i=i, cargs=cargs, a=a):
                        idxs = [open_term(u, list(avars[:i]) + list(ws))
                                for u in cargs[nparams:]]
                        return mk_app(F, tuple(idxs) + (mk_app(a, tuple(ws)),))

                    args.append(lam_many(tel2, ih_body))
            return mk_app(fs[j - 1], tuple(args))

        return lam_many(tel, body)

    def match_pred(pvars, P):
        tel = idx_telescope(pvars) + [("_", lambda acc: I_app(pvars, acc))]

        def body(vs):
            ivars, x = vs[:-1], vs[-1]
            return mk_app(P, tuple(ivars)) if is_prop else mk_app(P, tuple(ivars) + (x,))

        return lam_many(tel, body)

    proof = lam_many(param_tel, lambda pvars:
        lam_("P", motive_type(pvars), lambda P:
            lam_many([(f"f{j}", (lambda acc, j=j: premise_type(j, pvars, P)))
                      for j in range(1, len(ctors) + 1)],
                     lambda fs:
                fix_("F", n_idx + 1, fix_type(pvars, P), lambda F:
                    lam_many(idx_telescope(pvars) + [("x", lambda acc: I_app(pvars, acc))],
                             lambda vs: Match(vs[-1], match_pred(pvars, P),
                                              tuple(branch(j, pvars, P, fs, F)
                                                    for j in range(1, len(ctors) + 1))))))))

    return statement, proof


def admit_inductive(env: GlobalEnv, decl: InductiveDecl) -> GlobalEnv:
    """check_inductive + registration of the block and its scheme."""
    block = check_inductive(env, decl)
    env = env.add(block)
    statement, proof = derive_induction(env, block)
    res = check_proof(env, proof, statement)
    if not res.ok:
        raise KernelRejection(
            f"derived scheme for {decl.name} failed kernel check: {res.error}")
    return env.add(Definition(decl.name + "_ind", statement, proof, transparent=True))
