"""omega: linear arithmetic over nat decided by integer Fourier-Motzkin
elimination with gcd tightening, emitting checkable refutation certificates."""

from __future__ import annotations

import itertools
from typing import Dict, List, Optional, Tuple

from ..errors import (ContainsSubtraction, NonLinearTerm, NotProvable,
                      TacticFailure)
from ..kernel.env import GlobalEnv, LocalContext, OracleLemma
from ..kernel.reduction import ALL_FLAGS, whnf
from ..kernel.terms import (App, BVar, Const, Construct, Ind, Prod, Term,
                            app_spine, lift, mk_app, mk_prods)
from ..kernel.typing import infer_type
from ..engine.proofstate import oracle_env, refine
from .certificate import Certificate, Constraint, Step, verify_branch, verify_certificate
from .ring import AtomTable, fresh_oracle_name, generalize

Linear = Tuple[Dict[int, int], int]        # coeffs, constant


def linearize(env: GlobalEnv, ctx: LocalContext, t: Term,
              table: AtomTable) -> Linear:
    head, args = app_spine(t)
    if head == Construct("nat", 1) and not args:
        return {}, 0
    if head == Construct("nat", 2) and len(args) == 1:
        c, k = linearize(env, ctx, args[0], table)
        return c, k + 1
    if isinstance(head, Const) and head.name == "plus" and len(args) == 2:
        c1, k1 = linearize(env, ctx, args[0], table)
        c2, k2 = linearize(env, ctx, args[1], table)
        out = dict(c1)
        for v, c in c2.items():
            out[v] = out.get(v, 0) + c
        return out, k1 + k2
    if isinstance(head, Const) and head.name == "mult" and len(args) == 2:
        c1, k1 = linearize(env, ctx, args[0], table)
        c2, k2 = linearize(env, ctx, args[1], table)
        if not c1:
            return {v: k1 * c for v, c in c2.items()}, k1 * k2
        if not c2:
            return {v: k2 * c for v, c in c1.items()}, k1 * k2
        raise NonLinearTerm("product of two non-constant terms")
    if isinstance(head, Const) and head.name == "minus":
        raise ContainsSubtraction("nat subtraction is not supported by omega")
    return {table.key(t): 1}, 0


def _sub(a: Linear, b: Linear, extra: int = 0) -> Constraint:
    """Constraint a - b + extra >= 0."""
    coeffs = dict(a[0])
    for v, c in b[0].items():
        coeffs[v] = coeffs.get(v, 0) - c
    return Constraint.make(coeffs, a[1] - b[1] + extra)


def hyp_constraints(env: GlobalEnv, ctx: LocalContext, ty: Term,
                    table: AtomTable) -> Optional[List[Constraint]]:
    w = whnf(env, ctx, ty, ALL_FLAGS)
    head, args = app_spine(w)
    try:
        if isinstance(head, Ind) and head.name == "le" and len(args) == 2:
            a = linearize(env, ctx, args[0], table)
            b = linearize(env, ctx, args[1], table)
            return [_sub(b, a)]
        if (isinstance(head, Ind) and head.name == "eq" and len(args) == 3
                and args[0] == Ind("nat")):
            a = linearize(env, ctx, args[1], table)
            b = linearize(env, ctx, args[2], table)
            return [_sub(b, a), _sub(a, b)]
    except (NonLinearTerm, ContainsSubtraction):
        return None
    return None


def goal_negations(env: GlobalEnv, ctx: LocalContext, concl: Term,
                   table: AtomTable) -> List[Constraint]:
    """One negated constraint per disjunctive branch."""
    w = whnf(env, ctx, concl, ALL_FLAGS)
    head, args = app_spine(w)
    if isinstance(head, Ind) and head.name == "le" and len(args) == 2:
        a = linearize(env, ctx, args[0], table)
        b = linearize(env, ctx, args[1], table)
        # not (a <= b)  <=>  a >= b + 1
        return [_sub(a, b, -1)]
    if (isinstance(head, Ind) and head.name == "eq" and len(args) == 3
            and args[0] == Ind("nat")):
        a = linearize(env, ctx, args[1], table)
        b = linearize(env, ctx, args[2], table)
        # not (a = b)  <=>  a >= b + 1  or  b >= a + 1
        return [_sub(a, b, -1), _sub(b, a, -1)]
    raise TacticFailure("omega", "goal is not a linear (in)equation over nat")


def refute(constraints: List[Constraint], max_rows: int = 4000):
    """Steps deriving a contradiction, or None."""
    rows: List[Constraint] = list(constraints)
    steps: List[Step] = []

    def emit_tighten(idx: int) -> int:
        from .certificate import _tighten
        t = _tighten(rows[idx])
        if t == rows[idx]:
            return idx
        steps.append(("tighten", idx))
        rows.append(t)
        return len(rows) - 1

    def emit_combine(mults) -> int:
        from .certificate import _combine
        c = _combine([*rows], mults)
        steps.append(("combine", tuple(mults)))
        rows.append(c)
        return len(rows) - 1

    def conclude(idx: int) -> bool:
        """A contradictory row closes the refutation; make sure the
        certificate contains it as a derived step."""
        if not rows[idx].is_contradiction():
            return False
        if not steps or idx != len(rows) - 1:
            emit_combine(((idx, 1, 1),))
        return True

    # initial tightening
    active: List[int] = []
    for i in range(len(rows)):
        j = emit_tighten(i)
        if conclude(j):
            return steps
        active.append(j)

    variables = sorted({v for i in active for v, _ in rows[i].coeffs})
    for x in variables:
        uppers = [i for i in active if dict(rows[i].coeffs).get(x, 0) < 0]
        lowers = [i for i in active if dict(rows[i].coeffs).get(x, 0) > 0]
        keep = [i for i in active if dict(rows[i].coeffs).get(x, 0) == 0]
        for lo in lowers:
            a = dict(rows[lo].coeffs)[x]
            for up in uppers:
                b = -dict(rows[up].coeffs)[x]
                if len(rows) > max_rows:
                    return None
                j = emit_combine(((lo, b, 1), (up, a, 1)))
                j = emit_tighten(j)
                if conclude(j):
                    return steps
                keep.append(j)
        # deduplicate rows to keep the system small
        seen = {}
        pruned = []
        for i in keep:
            key = rows[i]
            if key not in seen:
                seen[key] = i
                pruned.append(i)
        active = pruned
    return None


def find_model(constraints: List[Constraint], nvars: int,
               bound: int = 12) -> Optional[Dict[int, int]]:
    if nvars == 0:
        ok = all(c.const >= 0 for c in constraints)
        return {} if ok else None
    if nvars > 4 or (bound + 1) ** nvars > 50000:
        return None
    for point in itertools.product(range(bound + 1), repeat=nvars):
        good = True
        for c in constraints:
            s = c.const + sum(coef * point[v] for v, coef in c.coeffs)
            if s < 0:
                good = False
                break
        if good:
            return {v: point[v] for v in range(nvars)}
    return None


def decide(hyps: List[Constraint], negations: List[Constraint], nvars: int):
    """(certificate branches, None) if refuted, else (None, model or None)."""
    nonneg = [Constraint.make({v: 1}, 0) for v in range(nvars)]
    branches = []
    for neg in negations:
        system = hyps + nonneg + [neg]
        steps = refute(system)
        if steps is None or not verify_branch(system, steps):
            model = find_model(system, nvars)
            return None, model
        branches.append((tuple(system), tuple(steps)))
    return branches, None


def do_omega(env, state, gid):
    g = state.goal(gid)
    env_x = oracle_env(env, state)
    if not env_x.omega_enabled:
        raise TacticFailure("omega", "load it first with Require Import Omega")

    table = AtomTable()
    neg = goal_negations(env_x, g.ctx, g.concl, table)
    used_hyps: List[int] = []
    hyps: List[Constraint] = []
    for i in range(len(g.ctx)):
        cs = hyp_constraints(env_x, g.ctx, g.ctx.type_of(i), table)
        if cs:
            used_hyps.append(i)
            hyps.extend(cs)

    # every atom must be a nat; this is guaranteed by the typing of le/eq@nat
    nvars = len(table.atoms)
    branches, model = decide(hyps, neg, nvars)
    if branches is None:
        detail = ""
        if model is not None:
            human = {f"v{v}": model[v] for v in sorted(model)}
            detail = f" (counterexample: {human})"
        raise NotProvable(f"omega: the goal is not provable{detail}", model)

    cert = Certificate(tuple(branches))
    if not verify_certificate([b[0] for b in branches], cert):
        raise TacticFailure("omega", "internal error: certificate failed to verify")

    # statement: hypotheses as premises, closed over the context variables
    stmt_open = g.concl
    for i in reversed(used_hyps):
        stmt_open = Prod("_", g.ctx.type_of(i), lift(stmt_open, 1))
    stmt, order, app_args = generalize(g.ctx, stmt_open)
    name = fresh_oracle_name(env_x, "omega")
    oracle = OracleLemma(name, stmt, "omega", cert.sexp())
    sol = mk_app(Const(name), app_args + tuple(BVar(i) for i in used_hyps))
    state = refine(env, state, gid, sol, [], new_oracles=(oracle,))
    return state, []
