"""Goals, proof states, and the checked refinement step."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from ..errors import (IllTypedStatement, KernelRejection, NameClash,
                      NothingToUndo, OpenGoalsRemain, TacticFailure)
from ..kernel.env import Definition, GlobalEnv, LocalContext, OracleLemma, EMPTY_CTX
from ..kernel.reduction import ALL_FLAGS, whnf
from ..kernel.terms import (BVar, Hole, Sort, Term, fill_hole, holes_of,
                            lift, mk_app)
from ..kernel.typing import check_proof, conv_leq, infer_type, _sort_of_type


@dataclass(frozen=True, slots=True)
class Goal:
    gid: int
    ctx: LocalContext
    concl: Term

    def hyp_names(self) -> List[str]:
        return self.ctx.names()


@dataclass(frozen=True)
class ProofState:
    name: str
    statement: Term
    goals: Tuple[Goal, ...]
    proof: Term
    next_gid: int
    pending_oracles: Tuple[OracleLemma, ...] = ()
    history: Tuple["ProofState", ...] = ()

    def goal(self, gid: int) -> Goal:
        for g in self.goals:
            if g.gid == gid:
                return g
        raise TacticFailure("internal", f"no goal #{gid}")

    def focused(self) -> Goal:
        if not self.goals:
            raise TacticFailure("internal", "no goals remain")
        return self.goals[0]

    def goal_table(self) -> Dict[int, Tuple[LocalContext, Term]]:
        return {g.gid: (g.ctx, g.concl) for g in self.goals}


def ident_args(n: int, under: int = 0) -> Tuple[Term, ...]:
    """Hole arguments mapping a goal context identically into itself,
    optionally seen from under extra binders."""
    return tuple(BVar(n - 1 - i + under) for i in range(n))


def hole_for(gid: int, ctx: LocalContext, under: int = 0) -> Hole:
    return Hole(gid, ident_args(len(ctx), under))


def start_proof(env: GlobalEnv, name: str, statement: Term) -> ProofState:
    if env.has(name):
        raise NameClash(f"name {name} already declared")
    try:
        _sort_of_type(env, EMPTY_CTX, statement)
    except Exception as e:
        raise IllTypedStatement(str(e)) from e
    g = Goal(0, EMPTY_CTX, statement)
    return ProofState(name=name, statement=statement, goals=(g,),
                      proof=Hole(0, ()), next_gid=1)


def oracle_env(env: GlobalEnv, state: ProofState) -> GlobalEnv:
    """Environment extended with the oracle lemmas pending in this proof."""
    for o in state.pending_oracles:
        env = env.add(o)
    return env


def refine(env: GlobalEnv, state: ProofState, gid: int, solution: Term,
           new_goals: List[Goal],
           new_oracles: Tuple[OracleLemma, ...] = ()) -> ProofState:
    """Replace goal ``gid`` by ``new_goals``, plugging ``solution`` (a term in
    the goal's context whose holes refer to the new goals) into the proof.

    The refinement is re-checked: the solution must have the goal's
    conclusion type given the new goals' statements.
    """
    goal = state.goal(gid)
    state2 = replace(state, pending_oracles=state.pending_oracles + tuple(new_oracles))
    env_x = oracle_env(env, state2)

    table = state2.goal_table()
    del table[gid]
    for g in new_goals:
        table[g.gid] = (g.ctx, g.concl)
    ty = infer_type(env_x, goal.ctx, solution, goals=table)
    if not conv_leq(env_x, goal.ctx, ty, goal.concl):
        raise TacticFailure("refine", "refinement does not prove the goal")

    proof = fill_hole(state2.proof, gid, solution)
    pos = [i for i, g in enumerate(state2.goals) if g.gid == gid][0]
    goals = state2.goals[:pos] + tuple(new_goals) + state2.goals[pos + 1:]
    return replace(state2, goals=goals, proof=proof,
                   next_gid=max([state2.next_gid] + [g.gid + 1 for g in new_goals]))


def new_goal(state: ProofState, ctx: LocalContext, concl: Term,
             offset: int = 0) -> Goal:
    return Goal(state.next_gid + offset, ctx, concl)


def undo(state: ProofState) -> ProofState:
    if not state.history:
        raise NothingToUndo("nothing to undo")
    return state.history[-1]


def push_history(state: ProofState) -> ProofState:
    return replace(state, history=state.history + (state,))


@dataclass(frozen=True, slots=True)
class QedReport:
    name: str
    oracles: Tuple[str, ...]


def qed(env: GlobalEnv, state: ProofState):
    """Seal the proof: kernel re-check, then register the theorem opaque.

    Returns (new env, report).
    """
    if state.goals:
        raise OpenGoalsRemain(len(state.goals))
    if any(True for _ in holes_of(state.proof)):
        raise KernelRejection("proof term still contains holes")
    env_x = oracle_env(env, state)
    res = check_proof(env_x, state.proof, state.statement)
    if not res.ok:
        raise KernelRejection(f"kernel rejected the proof: {res.error}")
    env2 = env_x.add(Definition(state.name, state.statement, state.proof,
                                transparent=False, oracle_deps=res.oracles))
    return env2, QedReport(state.name, res.oracles)
