"""intuition: contraction-free (G4ip-style) sequent search for the
propositional fragment, emitting complete kernel proof terms.

Invertible rules are applied first; left-implication is split into the four
cases by antecedent shape, which guarantees termination without loop checks.
Quantified or otherwise non-propositional formulas are treated as opaque
atoms, which keeps the search sound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from ..errors import SearchExhausted, TacticFailure
from ..kernel.build import lam_
from ..kernel.env import EMPTY_CTX, GlobalEnv
from ..kernel.reduction import ALL_FLAGS, normalize, whnf
from ..kernel.terms import (App, BVar, Const, Construct, Fix, Hole, Ind, Lam,
                            Let, Match, MVar, Prod, Sort, Term, app_spine,
                            lift, mk_app, occurs_free)
from ..engine.proofstate import oracle_env, refine
from ..engine.tactics import auto_intros

_tag = itertools.count(1)


def _ctx_marker(i: int) -> str:
    return f"\x00p{next(_tag)}_{i}"


class Formula:
    __slots__ = ("term",)


@dataclass(frozen=True, slots=True, eq=False)
class FAtom(Formula):
    term: Term
    key: Term


@dataclass(frozen=True, slots=True, eq=False)
class FTop(Formula):
    term: Term


@dataclass(frozen=True, slots=True, eq=False)
class FBot(Formula):
    term: Term


@dataclass(frozen=True, slots=True, eq=False)
class FAnd(Formula):
    term: Term
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True, eq=False)
class FOr(Formula):
    term: Term
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True, eq=False)
class FImp(Formula):
    term: Term
    left: Formula
    right: Formula


def markerize(t: Term, tags: List[str], depth: int = 0) -> Term:
    match t:
        case BVar(i):
            if i >= depth and i - depth < len(tags):
                return Const(tags[i - depth])
            return t
        case Sort() | Const() | Ind() | Construct() | MVar():
            return t
        case Prod(n, a, b):
            return Prod(n, markerize(a, tags, depth), markerize(b, tags, depth + 1))
        case Lam(n, a, b):
            return Lam(n, markerize(a, tags, depth), markerize(b, tags, depth + 1))
        case Let(n, v, ty, b):
            return Let(n, markerize(v, tags, depth), markerize(ty, tags, depth),
                       markerize(b, tags, depth + 1))
        case App(h, args):
            return mk_app(markerize(h, tags, depth),
                          tuple(markerize(a, tags, depth) for a in args))
        case Match(s, p, bs):
            return Match(markerize(s, tags, depth), markerize(p, tags, depth),
                         tuple(markerize(b, tags, depth) for b in bs))
        case Fix(n, k, ty, b):
            return Fix(n, k, markerize(ty, tags, depth),
                       markerize(b, tags, depth + 1))
        case Hole(g, args):
            return Hole(g, tuple(markerize(a, tags, depth) for a in args))
    return t


def unmarkerize(t: Term, index_of: Dict[str, int], depth: int = 0) -> Term:
    match t:
        case Const(n):
            if n in index_of:
                return BVar(index_of[n] + depth)
            return t
        case BVar() | Sort() | Ind() | Construct() | MVar():
            return t
        case Prod(n, a, b):
            return Prod(n, unmarkerize(a, index_of, depth),
                        unmarkerize(b, index_of, depth + 1))
        case Lam(n, a, b):
            return Lam(n, unmarkerize(a, index_of, depth),
                       unmarkerize(b, index_of, depth + 1))
        case Let(n, v, ty, b):
            return Let(n, unmarkerize(v, index_of, depth),
                       unmarkerize(ty, index_of, depth),
                       unmarkerize(b, index_of, depth + 1))
        case App(h, args):
            return mk_app(unmarkerize(h, index_of, depth),
                          tuple(unmarkerize(a, index_of, depth) for a in args))
        case Match(s, p, bs):
            return Match(unmarkerize(s, index_of, depth),
                         unmarkerize(p, index_of, depth),
                         tuple(unmarkerize(b, index_of, depth) for b in bs))
        case Fix(n, k, ty, b):
            return Fix(n, k, unmarkerize(ty, index_of, depth),
                       unmarkerize(b, index_of, depth + 1))
        case Hole(g, args):
            return Hole(g, tuple(unmarkerize(a, index_of, depth) for a in args))
    return t


class PropEngine:
    def __init__(self, env: GlobalEnv, fuel: int = 200000):
        self.env = env
        self.fuel = fuel

    def parse(self, t: Term) -> Formula:
        w = whnf(self.env, EMPTY_CTX, t, ALL_FLAGS)
        head, args = app_spine(w)
        if isinstance(head, Ind):
            if head.name == "True" and not args:
                return FTop(w)
            if head.name == "False" and not args:
                return FBot(w)
            if head.name == "and" and len(args) == 2:
                return FAnd(w, self.parse(args[0]), self.parse(args[1]))
            if head.name == "or" and len(args) == 2:
                return FOr(w, self.parse(args[0]), self.parse(args[1]))
        if isinstance(w, Prod) and not occurs_free(w.cod, 0):
            return FImp(w, self.parse(w.dom), self.parse(lift(w.cod, -1)))
        return FAtom(w, normalize(self.env, w))

    def atom_eq(self, a: Formula, b: Formula) -> bool:
        return isinstance(a, FAtom) and isinstance(b, FAtom) and a.key == b.key

    def feq(self, a: Formula, b: Formula) -> bool:
        if type(a) is not type(b):
            return False
        if isinstance(a, FAtom):
            return a.key == b.key
        if isinstance(a, (FTop, FBot)):
            return True
        return self.feq(a.left, b.left) and self.feq(a.right, b.right)

    # --- proof-term helpers (marker world) --------------------------------

    def _conj(self, a: Formula, b: Formula, pa: Term, pb: Term) -> Term:
        return mk_app(Construct("and", 1), (a.term, b.term, pa, pb))

    def _and_ind(self, a, b, goal_t, fn, h):
        return mk_app(Const("and_ind"), (a.term, b.term, goal_t, fn, h))

    def _or_ind(self, a, b, goal_t, f1, f2, h):
        return mk_app(Const("or_ind"), (a.term, b.term, goal_t, f1, f2, h))

    # --- the search ---------------------------------------------------------
    #
    # Inside binder bodies hypotheses are represented by the fresh marker
    # constants the lam_ helper supplies, so no index shifting is needed and
    # nested decompositions cannot capture each other.

    def search(self, gamma: List[Tuple[Formula, Term]], goal: Formula) -> Term:
        self.fuel -= 1
        if self.fuel <= 0:
            raise SearchExhausted("proof search ran out of fuel")

        if isinstance(goal, FTop):
            return Construct("True", 1)
        for f, h in gamma:
            if isinstance(f, FBot):
                return mk_app(Const("False_ind"), (goal.term, h))
        if isinstance(goal, FAtom):
            for f, h in gamma:
                if self.atom_eq(f, goal):
                    return h

        # invertible left rules
        for k, (f, h) in enumerate(gamma):
            rest = gamma[:k] + gamma[k + 1:]
            if isinstance(f, FTop):
                return self.search(rest, goal)
            if isinstance(f, FAnd):
                fn = lam_("Ha", f.left.term,
                          lambda ha: lam_("Hb", f.right.term,
                                          lambda hb: self.search(
                                              rest + [(f.left, ha), (f.right, hb)],
                                              goal)))
                return self._and_ind(f.left, f.right, goal.term, fn, h)
            if isinstance(f, FOr):
                f1 = lam_("Ha", f.left.term,
                          lambda ha: self.search(rest + [(f.left, ha)], goal))
                f2 = lam_("Hb", f.right.term,
                          lambda hb: self.search(rest + [(f.right, hb)], goal))
                return self._or_ind(f.left, f.right, goal.term, f1, f2, h)
            if isinstance(f, FImp):
                ant, csq = f.left, f.right
                if isinstance(ant, FTop):
                    return self.search(
                        rest + [(csq, mk_app(h, (Construct("True", 1),)))], goal)
                if isinstance(ant, FBot):
                    return self.search(rest, goal)
                if isinstance(ant, FAnd):
                    h2 = lam_("Ha", ant.left.term,
                              lambda ha: lam_("Hb", ant.right.term,
                                              lambda hb: mk_app(h, (self._conj(
                                                  ant.left, ant.right, ha, hb),))))
                    f2 = FImp(Prod("_", ant.left.term,
                                   Prod("_", ant.right.term, csq.term)),
                              ant.left,
                              FImp(Prod("_", ant.right.term, csq.term),
                                   ant.right, csq))
                    return self.search(rest + [(f2, h2)], goal)
                if isinstance(ant, FOr):
                    h1 = lam_("Ha", ant.left.term,
                              lambda ha: mk_app(h, (mk_app(Construct("or", 1),
                                                           (ant.left.term, ant.right.term, ha)),)))
                    h2 = lam_("Hb", ant.right.term,
                              lambda hb: mk_app(h, (mk_app(Construct("or", 2),
                                                           (ant.left.term, ant.right.term, hb)),)))
                    fi1 = FImp(Prod("_", ant.left.term, csq.term), ant.left, csq)
                    fi2 = FImp(Prod("_", ant.right.term, csq.term), ant.right, csq)
                    return self.search(rest + [(fi1, h1), (fi2, h2)], goal)
                if isinstance(ant, FAtom):
                    for f3, h3 in rest:
                        if self.atom_eq(f3, ant):
                            return self.search(rest + [(csq, mk_app(h, (h3,)))], goal)
                    continue
                continue

        if isinstance(goal, FAnd):
            p1 = self.search(gamma, goal.left)
            p2 = self.search(gamma, goal.right)
            return self._conj(goal.left, goal.right, p1, p2)
        if isinstance(goal, FImp):
            return lam_("H", goal.left.term,
                        lambda h: self.search(gamma + [(goal.left, h)], goal.right))

        # non-invertible choices, tried with backtracking
        if isinstance(goal, FOr):
            try:
                p1 = self.search(gamma, goal.left)
                return mk_app(Construct("or", 1),
                              (goal.left.term, goal.right.term, p1))
            except _Fail:
                pass
            try:
                p2 = self.search(gamma, goal.right)
                return mk_app(Construct("or", 2),
                              (goal.left.term, goal.right.term, p2))
            except _Fail:
                pass

        # left rule for nested implications (the contraction-free case)
        for k, (f, h) in enumerate(gamma):
            if not (isinstance(f, FImp) and isinstance(f.left, FImp)):
                continue
            rest = gamma[:k] + gamma[k + 1:]
            x, y, c = f.left.left, f.left.right, f.right
            bc = lam_("Hy", y.term,
                      lambda hy: mk_app(h, (lam_("Hx", x.term, lambda _hx: hy),)))
            fi = FImp(Prod("_", y.term, c.term), y, c)
            try:
                p1 = self.search(rest + [(fi, bc)], f.left)
                cc = mk_app(h, (p1,))
                return self.search(rest + [(c, cc)], goal)
            except _Fail:
                continue
        raise _Fail()


class _Fail(Exception):
    pass


def intuition_prove(env: GlobalEnv, ctx, concl: Term) -> Optional[Term]:
    """Proof term for the goal, or None when the search fails.

    Works in a marker world: context variables are frozen to constants so
    binder construction needs no index shifting, then translated back.
    """
    n = len(ctx)
    tags = [_ctx_marker(i) for i in range(n)]
    # tags[0] corresponds to BVar(0) (the newest hypothesis)
    engine = PropEngine(env)
    gamma: List[Tuple[Formula, Term]] = []
    for i in range(n):
        ty = whnf(env, ctx, ctx.type_of(i), ALL_FLAGS)
        tym = markerize(ty, tags)
        gamma.append((engine.parse(tym), Const(tags[i])))
    goal_m = markerize(whnf(env, ctx, concl, ALL_FLAGS), tags)
    goal = engine.parse(goal_m)
    try:
        proof_m = engine.search(gamma, goal)
    except _Fail:
        return None
    index_of = {tags[i]: i for i in range(n)}
    return unmarkerize(proof_m, index_of)


def do_intuition(env, state, gid):
    state, gid = auto_intros(env, state, gid)
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    for nm in ("and_ind", "or_ind", "False_ind"):
        if not env_x.has(nm):
            raise TacticFailure("intuition", f"needs {nm} loaded")
    proof = intuition_prove(env_x, g.ctx, g.concl)
    if proof is None:
        raise SearchExhausted("intuition: not an intuitionistic tautology")
    state = refine(env, state, gid, proof, [])
    return state, []
