"""Elaboration: surface terms to kernel terms.

Handles numerals, the overloaded ``*``, implicit type arguments of the list
constructors, binder-type inference through first-order unification, and
compilation of surface match expressions into kernel case trees.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..errors import (CannotInferBinder, ElaborationError, KernelError,
                      UnificationMismatch, UnknownIdentifier)
from ..kernel.env import GlobalEnv, InductiveBlock, LocalContext
from ..kernel.reduction import ALL_FLAGS, whnf
from ..kernel.terms import (App, BVar, Const, Construct, Fix, Ind, Lam, Let,
                            Match, MVar, Prod, Sort, Term, PROP, SET, TYPE,
                            app_spine, lift, mk_app, mk_lams, mk_prods,
                            occurs_free, subst)
from ..kernel.typing import (conv_leq, convertible, constructor_telescope,
                             scrutinee_inductive)
from .ast import (Binder, Pattern, STerm, TApp, TArrow, TBin, TExists, TForall,
                  TFun, THole, TLet, TMatch, TNot, TNum, TPair, TVar)
from .notation import IMPLICIT_ARGS


@dataclass(eq=False)
class Meta:
    id: int
    depth: int
    hint: str = ""
    solution: Optional[Term] = None


def _min_free(t: Term, depth: int = 0) -> int:
    """Smallest free index of ``t`` (relative), or a large sentinel."""
    INF = 1 << 30
    match t:
        case BVar(k):
            return k - depth if k >= depth else INF
        case Prod(_, a, b) | Lam(_, a, b):
            return min(_min_free(a, depth), _min_free(b, depth + 1))
        case Let(_, v, ty, b):
            return min(_min_free(v, depth), _min_free(ty, depth),
                       _min_free(b, depth + 1))
        case App(h, args):
            return min([_min_free(h, depth)] + [_min_free(a, depth) for a in args])
        case Match(s, p, bs):
            return min([_min_free(s, depth), _min_free(p, depth)]
                       + [_min_free(b, depth) for b in bs])
        case Fix(_, _, ty, b):
            return min(_min_free(ty, depth), _min_free(b, depth + 1))
    return INF


def _contains_meta(t: Term) -> bool:
    match t:
        case MVar(m):
            return m.solution is None or _contains_meta(m.solution)
        case Prod(_, a, b) | Lam(_, a, b):
            return _contains_meta(a) or _contains_meta(b)
        case Let(_, v, ty, b):
            return _contains_meta(v) or _contains_meta(ty) or _contains_meta(b)
        case App(h, args):
            return _contains_meta(h) or any(_contains_meta(a) for a in args)
        case Match(s, p, bs):
            return (_contains_meta(s) or _contains_meta(p)
                    or any(_contains_meta(b) for b in bs))
        case Fix(_, _, ty, b):
            return _contains_meta(ty) or _contains_meta(b)
    return False


class Elaborator:
    def __init__(self, env: GlobalEnv):
        self.env = env
        self.metas: List[Meta] = []
        self._next = 0

    # --- metavariables -----------------------------------------------------

    def fresh_meta(self, depth: int, hint: str = "") -> MVar:
        self._next += 1
        m = Meta(self._next, depth, hint)
        self.metas.append(m)
        return MVar(m)

    def snapshot(self):
        return len(self.metas), [m.solution for m in self.metas]

    def restore(self, snap):
        k, solutions = snap
        for m, sol in zip(self.metas[:k], solutions):
            m.solution = sol
        for m in self.metas[k:]:
            m.solution = None

    def zonk(self, t: Term, depth: int, strict: bool = True) -> Term:
        match t:
            case MVar(m):
                if m.solution is None:
                    if strict:
                        raise CannotInferBinder(
                            f"could not infer {m.hint or 'a placeholder'}")
                    return t
                sol = self.zonk(m.solution, m.depth, strict)
                return lift(sol, depth - m.depth) if depth != m.depth else sol
            case BVar() | Sort() | Const() | Ind() | Construct():
                return t
            case Prod(n, a, b):
                return Prod(n, self.zonk(a, depth, strict),
                            self.zonk(b, depth + 1, strict))
            case Lam(n, a, b):
                return Lam(n, self.zonk(a, depth, strict),
                           self.zonk(b, depth + 1, strict))
            case Let(n, v, ty, b):
                return Let(n, self.zonk(v, depth, strict),
                           self.zonk(ty, depth, strict),
                           self.zonk(b, depth + 1, strict))
            case App(h, args):
                return mk_app(self.zonk(h, depth, strict),
                              tuple(self.zonk(a, depth, strict) for a in args))
            case Match(s, p, bs):
                return Match(self.zonk(s, depth, strict),
                             self.zonk(p, depth, strict),
                             tuple(self.zonk(b, depth, strict) for b in bs))
            case Fix(n, k, ty, b):
                return Fix(n, k, self.zonk(ty, depth, strict),
                           self.zonk(b, depth + 1, strict))
        return t

    # --- unification ---------------------------------------------------------

    def unify(self, ctx: LocalContext, t: Term, u: Term, _delta: bool = False):
        from ..kernel.reduction import NO_DELTA
        depth = len(ctx)
        t = self.zonk(t, depth, strict=False)
        u = self.zonk(u, depth, strict=False)
        if t == u:
            return
        if isinstance(t, MVar):
            return self._solve(ctx, t, u)
        if isinstance(u, MVar):
            return self._solve(ctx, u, t)
        flags = ALL_FLAGS if _delta else NO_DELTA
        tw = whnf(self.env, ctx, t, flags)
        uw = whnf(self.env, ctx, u, flags)
        if isinstance(tw, MVar):
            return self._solve(ctx, tw, uw)
        if isinstance(uw, MVar):
            return self._solve(ctx, uw, tw)
        th, targs = app_spine(tw)
        uh, uargs = app_spine(uw)
        if isinstance(th, MVar) or isinstance(uh, MVar):
            # an applied metavariable is outside the first-order fragment
            if tw == uw:
                return
            raise UnificationMismatch("higher-order unification required")
        if isinstance(th, Prod) and isinstance(uh, Prod) and not targs and not uargs:
            self.unify(ctx, th.dom, uh.dom)
            self.unify(ctx.push(th.name, th.dom), th.cod, uh.cod)
            return
        if isinstance(th, Lam) and isinstance(uh, Lam) and not targs and not uargs:
            self.unify(ctx, th.dom, uh.dom)
            self.unify(ctx.push(th.name, th.dom), th.body, uh.body)
            return
        rigid_equal = (type(th) is type(uh)
                       and th.__class__ in (BVar, Sort, Const, Ind, Construct)
                       and th == uh)
        if rigid_equal and len(targs) == len(uargs):
            if th.__class__ is Const and not _delta:
                # same defined constant: try the folded forms, fall back to
                # unfolding on mismatch
                snap = self.snapshot()
                try:
                    for a, b in zip(targs, uargs):
                        self.unify(ctx, a, b)
                    return
                except UnificationMismatch:
                    self.restore(snap)
            else:
                for a, b in zip(targs, uargs):
                    self.unify(ctx, a, b)
                return
        if not _delta:
            return self.unify(ctx, tw, uw, _delta=True)
        if not _contains_meta(tw) and not _contains_meta(uw):
            if convertible(self.env, ctx, tw, uw):
                return
        raise UnificationMismatch("cannot unify terms")

    def _solve(self, ctx: LocalContext, mv: MVar, t: Term):
        m = mv.ref
        if m.solution is not None:
            return self.unify(ctx, m.solution, t)
        depth = len(ctx)
        t = self.zonk(t, depth, strict=False)
        if isinstance(t, MVar) and t.ref is m:
            return
        if self._occurs(m, t):
            raise UnificationMismatch("occurs check failed")
        delta = depth - m.depth
        if delta:
            if _min_free(t) < delta:
                raise UnificationMismatch(
                    "solution would escape the scope of a placeholder")
            t = lift(t, -delta)
        m.solution = t

    def _occurs(self, m: Meta, t: Term) -> bool:
        match t:
            case MVar(r):
                if r is m:
                    return True
                return r.solution is not None and self._occurs(m, r.solution)
            case Prod(_, a, b) | Lam(_, a, b):
                return self._occurs(m, a) or self._occurs(m, b)
            case Let(_, v, ty, b):
                return any(self._occurs(m, x) for x in (v, ty, b))
            case App(h, args):
                return self._occurs(m, h) or any(self._occurs(m, a) for a in args)
            case Match(s, p, bs):
                return (self._occurs(m, s) or self._occurs(m, p)
                        or any(self._occurs(m, b) for b in bs))
            case Fix(_, _, ty, b):
                return self._occurs(m, ty) or self._occurs(m, b)
        return False

    def ensure_leq(self, ctx: LocalContext, have: Term, want: Term):
        have_z = self.zonk(have, len(ctx), strict=False)
        want_z = self.zonk(want, len(ctx), strict=False)
        if not _contains_meta(have_z) and not _contains_meta(want_z):
            if conv_leq(self.env, ctx, have_z, want_z):
                return
            raise UnificationMismatch("type mismatch")
        self.unify(ctx, have_z, want_z)

    # --- identifier resolution ------------------------------------------------

    def resolve(self, ctx: LocalContext, name: str, depth: int):
        idx = ctx.index_of(name)
        if idx is not None:
            return BVar(idx), ctx.type_of(idx)
        c = self.env.constructor_of(name)
        if c is not None:
            ind, j = c
            term: Term = Construct(ind, j)
            typ = self.env.inductive(ind).ctor_types[j - 1]
            return self._insert_implicits(ctx, name, term, typ, depth)
        if name in self.env.by_name:
            d = self.env.by_name[name]
            if isinstance(d, InductiveBlock):
                return Ind(name), d.typ
            term = Const(name)
            typ = self.env.const_type(name)
            return self._insert_implicits(ctx, name, term, typ, depth)
        raise UnknownIdentifier(f"unknown identifier {name}")

    def _insert_implicits(self, ctx, name, term, typ, depth):
        k = IMPLICIT_ARGS.get(name, 0)
        args = []
        for _ in range(k):
            w = whnf(self.env, ctx, typ, ALL_FLAGS)
            if not isinstance(w, Prod):
                break
            mv = self.fresh_meta(depth, f"implicit argument of {name}")
            args.append(mv)
            typ = subst(w.cod, mv)
        if args:
            term = mk_app(term, tuple(args))
        return term, typ

    # --- main elaboration ------------------------------------------------------

    def infer(self, ctx: LocalContext, st: STerm) -> Tuple[Term, Term]:
        depth = len(ctx)
        match st:
            case TVar(name):
                if name == PROP:
                    return Sort(PROP), Sort(TYPE, 1)
                if name == SET:
                    return Sort(SET), Sort(TYPE, 1)
                if name == TYPE:
                    return Sort(TYPE, 1), Sort(TYPE, 2)
                return self.resolve(ctx, name, depth)
            case TNum(k):
                if not self.env.has("nat"):
                    raise UnknownIdentifier("numerals need nat in scope")
                t: Term = Construct("nat", 1)
                for _ in range(k):
                    t = mk_app(Construct("nat", 2), (t,))
                return t, Ind("nat")
            case THole():
                ty = self.fresh_meta(depth, "the type of a hole")
                return self.fresh_meta(depth, "a hole"), ty
            case TApp(head, args):
                f, fty = self.infer(ctx, head)
                out_args = []
                for a in args:
                    w = whnf(self.env, ctx, self.zonk(fty, depth, strict=False),
                             ALL_FLAGS)
                    if isinstance(w, MVar):
                        dom = self.fresh_meta(depth, "an argument type")
                        cod = self.fresh_meta(depth, "a result type")
                        self._solve(ctx, w, Prod("_", dom, lift(cod, 1)))
                        w = Prod("_", dom, lift(cod, 1))
                    if not isinstance(w, Prod):
                        raise ElaborationError("term is applied to too many arguments")
                    a_t = self.check(ctx, a, w.dom)
                    out_args.append(a_t)
                    fty = subst(w.cod, a_t)
                return mk_app(f, tuple(out_args)), fty
            case TArrow(l, r):
                lt, ls = self.infer_type(ctx, l)
                rt, rs = self.infer_type(ctx, r)
                return Prod("_", lt, lift(rt, 1)), _prod_sort(ls, rs)
            case TForall(binders, body):
                return self._elab_forall(ctx, list(self._flat_binders(ctx, binders)), body)
            case TFun(binders, body):
                flat = list(self._flat_binders(ctx, binders))
                return self._elab_fun(ctx, flat, body)
            case TExists(name, typ, body):
                if not self.env.has("ex"):
                    raise UnknownIdentifier("exists needs ex in scope")
                a = (self.elab_type(ctx, typ) if typ is not None
                     else self.fresh_meta(depth, f"the type of {name}"))
                b = self.check(ctx.push(name, a), body, Sort(PROP))
                return mk_app(Ind("ex"), (a, Lam(name, a, b))), Sort(PROP)
            case TLet(name, typ, value, body):
                if typ is not None:
                    vty = self.elab_type(ctx, typ)
                    v = self.check(ctx, value, vty)
                else:
                    v, vty = self.infer(ctx, value)
                b, bty = self.infer(ctx.push(name, vty, v), body)
                return Let(name, v, vty, b), subst(bty, v)
            case TPair(l, r):
                if not self.env.has("prod"):
                    raise UnknownIdentifier("pairs need prod in scope")
                lt, lty = self.infer(ctx, l)
                rt, rty = self.infer(ctx, r)
                return (mk_app(Construct("prod", 1), (lty, rty, lt, rt)),
                        mk_app(Ind("prod"), (lty, rty)))
            case TNot(a):
                at = self.check(ctx, a, Sort(PROP))
                return mk_app(Const("not"), (at,)), Sort(PROP)
            case TBin(op, l, r):
                return self._elab_binop(ctx, op, l, r)
            case TMatch():
                return self._elab_match(ctx, st, None)
        raise ElaborationError(f"cannot elaborate {st!r}")

    def check(self, ctx: LocalContext, st: STerm, expected: Term) -> Term:
        depth = len(ctx)
        if isinstance(st, TMatch):
            t, _ = self._elab_match(ctx, st, expected)
            return t
        if isinstance(st, TFun):
            flat = list(self._flat_binders(ctx, st.binders))
            if any(ty is None for _, ty in flat):
                w = whnf(self.env, ctx, self.zonk(expected, depth, strict=False),
                         ALL_FLAGS)
                filled = []
                for name, ty in flat:
                    if ty is None and isinstance(w, Prod):
                        ty = w.dom
                    if isinstance(w, Prod):
                        w = w.cod  # approximate: used only to seed binder types
                    filled.append((name, ty))
                flat = filled
            t, ty = self._elab_fun(ctx, flat, st.body)
            self.ensure_leq(ctx, ty, expected)
            return t
        t, ty = self.infer(ctx, st)
        self.ensure_leq(ctx, ty, expected)
        return t

    def infer_type(self, ctx: LocalContext, st: STerm) -> Tuple[Term, Sort]:
        """Elaborate a surface term that must denote a type; returns its sort
        when determinable (defaults to Set for unsolved binder types)."""
        t, ty = self.infer(ctx, st)
        w = whnf(self.env, ctx, self.zonk(ty, len(ctx), strict=False), ALL_FLAGS)
        if isinstance(w, Sort):
            return t, w
        if isinstance(w, MVar):
            return t, Sort(SET)
        raise ElaborationError("expected a type")

    def elab_type(self, ctx: LocalContext, st: STerm) -> Term:
        t, _ = self.infer_type(ctx, st)
        return t

    def _flat_binders(self, ctx, binders: Tuple[Binder, ...]):
        for names, ty in binders:
            for n in names:
                yield n, ty

    def _elab_forall(self, ctx, flat, body):
        if not flat:
            t, s = self.infer_type(ctx, body)
            return t, s
        name, ty_s = flat[0]
        if ty_s is None:
            dom: Term = self.fresh_meta(len(ctx), f"the type of {name}")
            ds = Sort(SET)
        elif isinstance(ty_s, Term):
            dom, ds = ty_s, Sort(SET)
        else:
            dom, ds = self.infer_type(ctx, ty_s)
        rest, rs = self._elab_forall(ctx.push(name, dom), flat[1:], body)
        return Prod(name, dom, rest), _prod_sort(ds, rs)

    def _elab_fun(self, ctx, flat, body):
        if not flat:
            return self.infer(ctx, body)
        name, ty_s = flat[0]
        if ty_s is None:
            dom: Term = self.fresh_meta(len(ctx), f"the type of {name}")
        elif isinstance(ty_s, Term):
            dom = ty_s
        else:
            dom = self.elab_type(ctx, ty_s)
        b, bty = self._elab_fun(ctx.push(name, dom), flat[1:], body)
        return Lam(name, dom, b), Prod(name, dom, bty)

    def _elab_binop(self, ctx, op, l, r):
        env = self.env
        depth = len(ctx)

        def need(name):
            if ctx.index_of(name) is None and not env.has(name):
                raise UnknownIdentifier(f"notation target {name} is not loaded")

        def target_head(name) -> Term:
            # a fixpoint may use its own notation in its body, where the
            # target is the recursive binder rather than a constant yet
            idx = ctx.index_of(name)
            if idx is not None:
                return BVar(idx)
            return Const(name)

        if op == "=":
            lt, lty = self.infer(ctx, l)
            rt = self.check(ctx, r, lty)
            need("eq")
            return mk_app(Ind("eq"), (lty, lt, rt)), Sort(PROP)
        if op in ("+", "-"):
            target = "plus" if op == "+" else "minus"
            need(target)
            lt = self.check(ctx, l, Ind("nat"))
            rt = self.check(ctx, r, Ind("nat"))
            return mk_app(target_head(target), (lt, rt)), Ind("nat")
        if op == "^":
            need("nat_power")
            lt = self.check(ctx, l, Ind("nat"))
            rt = self.check(ctx, r, Ind("nat"))
            return mk_app(target_head("nat_power"), (lt, rt)), Ind("nat")
        if op == "*":
            lt, lty = self.infer(ctx, l)
            w = whnf(env, ctx, self.zonk(lty, depth, strict=False), ALL_FLAGS)
            if isinstance(w, Sort):
                need("prod")
                rt = self.check(ctx, r, w)
                return mk_app(Ind("prod"), (lt, rt)), w
            need("mult")
            self.ensure_leq(ctx, lty, Ind("nat"))
            rt = self.check(ctx, r, Ind("nat"))
            return mk_app(target_head("mult"), (lt, rt)), Ind("nat")
        if op in ("<=", "<"):
            target = "le" if op == "<=" else "lt"
            need(target)
            lt = self.check(ctx, l, Ind("nat"))
            rt = self.check(ctx, r, Ind("nat"))
            head: Term = Ind("le") if target == "le" else target_head("lt")
            return mk_app(head, (lt, rt)), Sort(PROP)
        if op in ("/\\", "\\/"):
            target = "and" if op == "/\\" else "or"
            need(target)
            lt = self.check(ctx, l, Sort(PROP))
            rt = self.check(ctx, r, Sort(PROP))
            return mk_app(Ind(target), (lt, rt)), Sort(PROP)
        if op == "::":
            need("list")
            lt, lty = self.infer(ctx, l)
            rt = self.check(ctx, r, mk_app(Ind("list"), (lty,)))
            return (mk_app(Construct("list", 2), (lty, lt, rt)),
                    mk_app(Ind("list"), (lty,)))
        if op == "++":
            need("app")
            lt, lty = self.infer(ctx, l)
            w = whnf(env, ctx, self.zonk(lty, depth, strict=False), ALL_FLAGS)
            h, a = app_spine(w)
            if h != Ind("list") or len(a) != 1:
                raise ElaborationError("++ expects lists")
            rt = self.check(ctx, r, w)
            return mk_app(Const("app"), (a[0], lt, rt)), w
        raise ElaborationError(f"unknown operator {op}")

    # --- match compilation -----------------------------------------------------

    def _elab_match(self, ctx, st: TMatch, expected: Optional[Term]):
        scrut, sty = self.infer(ctx, st.scrut)
        sty_z = self.zonk(sty, len(ctx), strict=False)
        if _contains_meta(sty_z):
            raise ElaborationError("cannot determine the type being matched")
        block, params, indices = scrutinee_inductive(self.env, ctx, sty_z)
        if indices:
            raise ElaborationError(
                "match on an indexed family needs an explicit return annotation")
        rows = [([p], rhs) for p, rhs in st.branches]
        if expected is None:
            expected = self._probe_branch_type(ctx, block, params, rows)
        t = self._compile(ctx, [(scrut, mk_app(Ind(block.decl.name), params))],
                          rows, expected)
        return t, expected

    def _probe_branch_type(self, ctx, block, params, rows):
        """Infer the common branch type from the first branch."""
        pat, rhs = rows[0][0][0], rows[0][1]
        j = self._pattern_ctor(block, pat)
        if j is None:
            t, ty = self.infer(ctx, rhs)
            return self.zonk(ty, len(ctx), strict=False)
        binders, _ = constructor_telescope(block, j, tuple(params))
        c = ctx
        for name, ty in binders:
            c = c.push(name or "_", ty)
        _, ty = self.infer(c, rhs)
        ty = self.zonk(ty, len(c), strict=False)
        if _min_free(ty) < len(binders):
            raise ElaborationError(
                "cannot infer a return type that depends on pattern variables")
        return lift(ty, -len(binders)) if binders else ty

    def _pattern_ctor(self, block: InductiveBlock, pat: Pattern) -> Optional[int]:
        if pat.numeral is not None:
            pat = _expand_numeral(pat.numeral)
        if pat.name is None:
            return None
        c = self.env.constructor_of(pat.name)
        if c is None:
            if pat.args:
                raise ElaborationError(f"unknown constructor {pat.name}")
            return None
        ind, j = c
        if ind != block.decl.name:
            raise ElaborationError(
                f"constructor {pat.name} does not belong to {block.decl.name}")
        return j

    def _compile(self, ctx, scruts, rows, expected) -> Term:
        if not rows:
            raise ElaborationError("non-exhaustive match")
        if not scruts:
            return self.check(ctx, rows[0][1], expected)
        s0, ty0 = scruts[0]

        firsts = []
        for pats, _ in rows:
            p = pats[0]
            if p.numeral is not None:
                p = _expand_numeral(p.numeral)
            firsts.append(p)

        def is_passive(p: Pattern) -> bool:
            return p.name is None or (not p.args
                                      and self.env.constructor_of(p.name) is None)

        if all(is_passive(p) for p in firsts):
            # wildcards, or variables already bound by the constructor split
            # that produced this scrutinee (the branch binder carries the
            # pattern's name)
            for p in firsts:
                if p.name is not None and ctx.index_of(p.name) is None:
                    raise ElaborationError(
                        f"unsupported pattern variable {p.name}")
            return self._compile(ctx, scruts[1:],
                                 [(pats[1:], rhs) for pats, rhs in rows], expected)

        block, params, indices = scrutinee_inductive(self.env, ctx, ty0)

        nctors = len(block.decl.constructors)
        branches = []
        for j in range(1, nctors + 1):
            binders, _ = constructor_telescope(block, j, tuple(params))
            arity = len(binders)
            new_rows = []
            names: Optional[List[str]] = None
            for (pats, rhs), p in zip(rows, firsts):
                pj = self._pattern_ctor(block, p)
                if pj is None:
                    new_rows.append(([Pattern(None)] * arity + list(pats[1:]), rhs))
                elif pj == j:
                    sub = p if p.numeral is None else _expand_numeral(p.numeral)
                    if len(sub.args) != arity:
                        raise ElaborationError(
                            f"constructor {p.name or 'numeral'} expects {arity} argument(s)")
                    if names is None:
                        names = [a.name if (a.name and not a.args
                                            and self.env.constructor_of(a.name) is None)
                                 else None for a in sub.args]
                    new_rows.append((list(sub.args) + list(pats[1:]), rhs))
            if not new_rows:
                raise ElaborationError(
                    f"non-exhaustive match: no case for constructor "
                    f"{block.decl.constructors[j - 1][0]}")
            shown = []
            c2 = ctx
            for i, (bn, bty) in enumerate(binders):
                nm = (names[i] if names and names[i] else None) or \
                    (bn if bn not in ("", "_") else "x")
                nm = _freshen(nm, c2.names())
                shown.append(nm)
                c2 = c2.push(nm, bty)
            lifted_rest = [(lift(s, arity), lift(t, arity)) for s, t in scruts[1:]]
            new_scruts = ([(BVar(arity - 1 - i), lift(binders[i][1], arity - i))
                           for i in range(arity)] + lifted_rest)
            body = self._compile(c2, new_scruts, new_rows, lift(expected, arity))
            branches.append(mk_lams([(shown[i], binders[i][1]) for i in range(arity)], body))

        pred = Lam("x", ty0, lift(expected, 1))
        return Match(s0, pred, tuple(branches))


def _freshen(name, used):
    if name not in used:
        return name
    i = 0
    while f"{name}{i}" in used:
        i += 1
    return f"{name}{i}"


def _expand_numeral(k: int) -> Pattern:
    p = Pattern("O")
    for _ in range(k):
        p = Pattern("S", (p,))
    return p


def _prod_sort(s1, s2) -> Sort:
    if not isinstance(s2, Sort):
        return Sort(PROP)
    if s2.kind == PROP:
        return Sort(PROP)
    if not isinstance(s1, Sort):
        s1 = Sort(SET)
    if s2.kind == SET:
        if s1.kind in (PROP, SET):
            return Sort(SET)
        return Sort(TYPE, s1.level)
    j = s2.level
    i = s1.level if s1.kind == TYPE else 0
    return Sort(TYPE, max(i, j, 1))


# --- public helpers --------------------------------------------------------


def elaborate(env: GlobalEnv, ctx: LocalContext, st: STerm,
              expected: Optional[Term] = None) -> Term:
    """Elaborate one surface term; all placeholders must be solvable."""
    el = Elaborator(env)
    if expected is None:
        t, _ = el.infer(ctx, st)
    else:
        t = el.check(ctx, st, expected)
    return el.zonk(t, len(ctx), strict=True)


def elaborate_with_type(env: GlobalEnv, ctx: LocalContext, st: STerm):
    el = Elaborator(env)
    t, ty = el.infer(ctx, st)
    return el.zonk(t, len(ctx), strict=True), el.zonk(ty, len(ctx), strict=True)


def elaborate_type(env: GlobalEnv, ctx: LocalContext, st: STerm) -> Term:
    el = Elaborator(env)
    t = el.elab_type(ctx, st)
    return el.zonk(t, len(ctx), strict=True)
