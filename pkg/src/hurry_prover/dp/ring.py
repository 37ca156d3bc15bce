"""ring: canonical semiring normal forms over nat, closing equality goals
through certificate-backed oracle lemmas."""

from __future__ import annotations

import zlib
import random
from typing import Dict, List, Optional, Tuple

from ..errors import NormalFormsDiffer, TacticFailure, UnsupportedOperator
from ..kernel.env import EMPTY_CTX, GlobalEnv, LocalContext, OracleLemma
from ..kernel.reduction import ALL_FLAGS, normalize, whnf
from ..kernel.terms import (App, BVar, Const, Construct, Ind, Term, app_spine,
                            lift, mk_app, mk_prods, occurs_free, subst)
from ..kernel.typing import infer_type
from ..engine.proofstate import Goal, oracle_env, refine
from ..engine.tactics import replace_term

Monomial = Tuple[int, ...]
Polynomial = Dict[Monomial, int]


class AtomTable:
    """Opaque subterms, keyed by first occurrence order."""

    def __init__(self):
        self.atoms: List[Term] = []

    def key(self, t: Term) -> int:
        for i, a in enumerate(self.atoms):
            if a == t:
                return i
        self.atoms.append(t)
        return len(self.atoms) - 1


def _poly_const(c: int) -> Polynomial:
    return {(): c} if c else {}


def _poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    out = dict(p)
    for m, c in q.items():
        out[m] = out.get(m, 0) + c
        if out[m] == 0:
            del out[m]
    return out


def _poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    out: Polynomial = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(sorted(m1 + m2))
            out[m] = out.get(m, 0) + c1 * c2
            if out[m] == 0:
                del out[m]
    return out


def ring_normalize(t: Term, table: AtomTable) -> Polynomial:
    """Canonical polynomial of a +, *, S, O, numeral, atom expression."""
    head, args = app_spine(t)
    if head == Construct("nat", 1) and not args:
        return _poly_const(0)
    if head == Construct("nat", 2) and len(args) == 1:
        return _poly_add(ring_normalize(args[0], table), _poly_const(1))
    if isinstance(head, Const) and head.name == "plus" and len(args) == 2:
        return _poly_add(ring_normalize(args[0], table),
                         ring_normalize(args[1], table))
    if isinstance(head, Const) and head.name == "mult" and len(args) == 2:
        return _poly_mul(ring_normalize(args[0], table),
                         ring_normalize(args[1], table))
    if isinstance(head, Const) and head.name == "minus":
        raise UnsupportedOperator("ring does not handle subtraction")
    return {(table.key(t),): 1}


def poly_sexp(p: Polynomial, table: AtomTable) -> str:
    parts = []
    for m in sorted(p):
        parts.append(f"(mono {p[m]} ({' '.join(str(i) for i in m)}))")
    return f"(poly {' '.join(parts)})"


def _numeral(k: int) -> Term:
    t: Term = Construct("nat", 1)
    for _ in range(k):
        t = mk_app(Construct("nat", 2), (t,))
    return t


def _numeral_value(t: Term) -> Optional[int]:
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


def self_check(env: GlobalEnv, ctx: LocalContext, lhs: Term, rhs: Term,
               table: AtomTable, rounds: int = 8):
    """Evaluate both sides at pseudo-random atom assignments and compare."""
    seed = zlib.crc32(poly_sexp(ring_normalize(lhs, AtomTable()), table).encode())
    rng = random.Random(seed)
    atoms = sorted(table.atoms, key=lambda a: -_term_size(a))
    for _ in range(rounds):
        l, r = lhs, rhs
        for a in atoms:
            v = _numeral(rng.randrange(0, 4))
            l = replace_term(l, a, v)
            r = replace_term(r, a, v)
        ln = _numeral_value(normalize(env, l, ctx))
        rn = _numeral_value(normalize(env, r, ctx))
        if ln is None or rn is None or ln != rn:
            raise NormalFormsDiffer(
                "ring self-check found a disagreement between the sides")


def _term_size(t: Term) -> int:
    head, args = app_spine(t)
    return 1 + sum(_term_size(a) for a in args)


def generalize(ctx: LocalContext, concl: Term, extra_indices=()):
    """Close a statement over the context variables it (or the extras) uses.

    Returns (closed statement, indices of abstracted variables, application
    arguments oldest-first).
    """
    n = len(ctx)
    needed = set(extra_indices)

    def scan(t: Term, depth: int):
        from ..kernel.terms import (Prod, Lam, Let, Match, Fix, Hole)
        match t:
            case BVar(i):
                if i >= depth:
                    needed.add(i - depth)
            case App(h, args):
                scan(h, depth)
                for a in args:
                    scan(a, depth)
            case Prod(_, a, b) | Lam(_, a, b):
                scan(a, depth)
                scan(b, depth + 1)
            case Let(_, v, ty, b):
                scan(v, depth)
                scan(ty, depth)
                scan(b, depth + 1)
            case Match(s, p, bs):
                scan(s, depth)
                scan(p, depth)
                for b in bs:
                    scan(b, depth)
            case Fix(_, _, ty, b):
                scan(ty, depth)
                scan(b, depth + 1)
            case Hole(_, args):
                for a in args:
                    scan(a, depth)

    scan(concl, 0)
    # dependency closure over hypothesis types
    changed = True
    while changed:
        changed = False
        for i in sorted(needed):
            ty = ctx.type_of(i)
            before = len(needed)
            scan(ty, 0)
            # scanning a type at depth 0 would add spurious indices; adjust:
            # type_of is already lifted to the full context, so this is right
            if len(needed) != before:
                changed = True

    order = sorted(needed, reverse=True)        # oldest first (largest index)
    binders = []
    remap: Dict[int, int] = {}
    for pos, i in enumerate(order):
        remap[i] = pos
    k = len(order)

    def rebase(t: Term, depth: int) -> Term:
        from ..kernel.terms import (Prod, Lam, Let, Match, Fix, Hole)
        match t:
            case BVar(i):
                if i < depth:
                    return t
                j = i - depth
                if j not in remap:
                    raise TacticFailure("oracle", "ungeneralized variable")
                return BVar(k - 1 - remap[j] + depth)
            case App(h, args):
                return mk_app(rebase(h, depth), tuple(rebase(a, depth) for a in args))
            case Prod(n2, a, b):
                return Prod(n2, rebase(a, depth), rebase(b, depth + 1))
            case Lam(n2, a, b):
                return Lam(n2, rebase(a, depth), rebase(b, depth + 1))
            case Let(n2, v, ty, b):
                return Let(n2, rebase(v, depth), rebase(ty, depth), rebase(b, depth + 1))
            case Match(s, p, bs):
                return Match(rebase(s, depth), rebase(p, depth),
                             tuple(rebase(b, depth) for b in bs))
            case Fix(n2, s2, ty, b):
                return Fix(n2, s2, rebase(ty, depth), rebase(b, depth + 1))
            case Hole(g, args):
                return Hole(g, tuple(rebase(a, depth) for a in args))
        return t

    # binder types, oldest first; each is rebased over the previous binders
    names_used: List[str] = []
    for pos, i in enumerate(order):
        ty = ctx.type_of(i)

        def rebase_prefix(t: Term, upto: int, depth: int = 0) -> Term:
            match t:
                case BVar(b):
                    if b < depth:
                        return t
                    j = b - depth
                    if j not in remap or remap[j] >= upto:
                        raise TacticFailure("oracle", "dependency order broken")
                    return BVar(upto - 1 - remap[j] + depth)
            from ..kernel.terms import (Prod, Lam, Let, Match, Fix, App, Hole)
            match t:
                case App(h, args):
                    return mk_app(rebase_prefix(h, upto, depth),
                                  tuple(rebase_prefix(a, upto, depth) for a in args))
                case Prod(n2, a, b):
                    return Prod(n2, rebase_prefix(a, upto, depth),
                                rebase_prefix(b, upto, depth + 1))
                case Lam(n2, a, b):
                    return Lam(n2, rebase_prefix(a, upto, depth),
                               rebase_prefix(b, upto, depth + 1))
                case Let(n2, v, ty2, b):
                    return Let(n2, rebase_prefix(v, upto, depth),
                               rebase_prefix(ty2, upto, depth),
                               rebase_prefix(b, upto, depth + 1))
                case Match(s, p, bs):
                    return Match(rebase_prefix(s, upto, depth),
                                 rebase_prefix(p, upto, depth),
                                 tuple(rebase_prefix(b, upto, depth) for b in bs))
                case Fix(n2, s2, ty2, b):
                    return Fix(n2, s2, rebase_prefix(ty2, upto, depth),
                               rebase_prefix(b, upto, depth + 1))
                case Hole(g, args):
                    return Hole(g, tuple(rebase_prefix(a, upto, depth) for a in args))
            return t

        name = ctx.name_of(i)
        names_used.append(name)
        binders.append((name, rebase_prefix(ty, pos)))

    stmt = mk_prods(binders, rebase(concl, 0))
    app_args = tuple(BVar(i) for i in order)
    return stmt, order, app_args


_oracle_counter = [0]


def fresh_oracle_name(env: GlobalEnv, prefix: str) -> str:
    while True:
        _oracle_counter[0] += 1
        name = f"{prefix}_obl{_oracle_counter[0]}"
        if not env.has(name):
            return name


def do_ring(env, state, gid):
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    w = whnf(env_x, g.ctx, g.concl, ALL_FLAGS)
    head, args = app_spine(w)
    if not (isinstance(head, Ind) and head.name == "eq" and len(args) == 3):
        raise TacticFailure("ring", "goal is not an equality")
    a, lhs, rhs = args
    if a != Ind("nat"):
        raise TacticFailure("ring", "ring works over nat")
    table = AtomTable()
    pl = ring_normalize(lhs, table)
    pr = ring_normalize(rhs, table)
    if pl != pr:
        raise NormalFormsDiffer("ring: normal forms differ")
    self_check(env_x, g.ctx, lhs, rhs, table)

    stmt, order, app_args = generalize(g.ctx, g.concl)
    name = fresh_oracle_name(env_x, "ring")
    cert = f"(ring {poly_sexp(pl, table)})"
    oracle = OracleLemma(name, stmt, "ring", cert)
    sol = mk_app(Const(name), app_args)
    state = refine(env, state, gid, sol, [], new_oracles=(oracle,))
    return state, []
