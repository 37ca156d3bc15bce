"""omega: decision vs bounded enumeration, with verified certificates."""

import itertools
import random

import pytest

from hurry_prover.errors import NonLinearTerm, NotProvable, TacticFailure
from hurry_prover.kernel.env import EMPTY_CTX
from hurry_prover.dp.certificate import Certificate, Constraint, verify_branch, verify_certificate
from hurry_prover.dp.omega import decide, find_model, refute
from hurry_prover.engine.proofstate import qed, start_proof
from hurry_prover.engine.tactics import apply_tactic_sentence
from hurry_prover.surface.elaborate import elaborate
from hurry_prover.surface.parser import parse_sentence, parse_term_string


def tacs(text):
    return parse_sentence(text).tactics


def start(env, stmt):
    return start_proof(env, "tmp_omega",
                       elaborate(env, EMPTY_CTX, parse_term_string(stmt)))


def omega_env(arith_env):
    return arith_env


def test_omega_example_closes(arith_env):
    st = start(arith_env,
               "forall f x y, 0 < x -> 0 < f x -> 3 * f x <= 2 * y -> f x <= y")
    st = apply_tactic_sentence(arith_env, st, tacs("intros; omega."))
    assert not st.goals
    env2, report = qed(arith_env, st)
    assert len(report.oracles) == 1 and report.oracles[0].startswith("omega")
    oracle = env2.lookup(report.oracles[0])
    assert "omega-certificate" in str(oracle.certificate)


def test_nat_nonnegativity(arith_env):
    st = start(arith_env, "forall x : nat, 0 <= x")
    st = apply_tactic_sentence(arith_env, st, tacs("intros x; omega."))
    assert not st.goals


def test_unprovable_reports_model(arith_env):
    st = start(arith_env, "forall x : nat, x < x")
    st = apply_tactic_sentence(arith_env, st, tacs("intros x."))
    with pytest.raises(NotProvable) as exc:
        apply_tactic_sentence(arith_env, st, tacs("omega."))
    assert exc.value.model == {0: 0}          # witness x = 0


def test_nonlinear_goal_rejected(arith_env):
    st = start(arith_env, "forall x y : nat, x * y <= x")
    st = apply_tactic_sentence(arith_env, st, tacs("intros x y."))
    with pytest.raises(NonLinearTerm):
        apply_tactic_sentence(arith_env, st, tacs("omega."))


def test_certificate_all_zero_multipliers_rejected():
    sys_ = [Constraint.make({0: 1}, -1)]
    steps = [("combine", ((0, 0, 1),))]
    assert not verify_branch(sys_, steps)


def test_certificate_negative_multiplier_rejected():
    sys_ = [Constraint.make({0: 1}, -1), Constraint.make({0: -1}, 0)]
    steps = [("combine", ((0, 1, 1), (1, -1, 1)))]
    assert not verify_branch(sys_, steps)


def test_certificate_roundtrip_simple():
    # x >= 1 and x <= 0 refute
    sys_ = [Constraint.make({0: 1}, -1), Constraint.make({0: -1}, 0)]
    steps = refute(list(sys_))
    assert steps is not None
    assert verify_branch(sys_, steps)


def _brute_force_implied(hyps, neg_branches, nvars, bound=12):
    """Oracle: the implication holds iff every negated branch is unsat over
    the box [0..bound]^nvars."""
    for neg in neg_branches:
        sat = False
        for point in itertools.product(range(bound + 1), repeat=nvars):
            ok = all(c.const + sum(k * point[v] for v, k in c.coeffs) >= 0
                     for c in hyps + [neg])
            if ok:
                sat = True
                break
        if sat:
            return False
    return True


def _random_constraint(rng, nvars):
    coeffs = {v: rng.randint(-4, 4) for v in range(nvars)}
    const = rng.randint(-8, 8)
    return Constraint.make(coeffs, const)


def test_omega_vs_enumeration_200_systems():
    """Acceptance oracle (b): 200 generated systems with explicit variable
    bounds (so a witness, when one exists, lies in 0..12); zero
    disagreements and every emitted certificate verifies."""
    rng = random.Random(99)
    for trial in range(200):
        nvars = rng.randrange(1, 4)
        hyps = [_random_constraint(rng, nvars) for _ in range(rng.randrange(1, 4))]
        # witness-bounded construction: every variable is boxed by 8
        for v in range(nvars):
            hyps.append(Constraint.make({v: -1}, 8))
        if rng.random() < 0.5:
            # inequality conclusion  a <= b, negation a - b - 1 >= 0
            lhs = _random_constraint(rng, nvars)
            negs = [lhs]
        else:
            # equality conclusion, two negated branches
            lhs = _random_constraint(rng, nvars)
            neg1 = lhs
            neg2 = Constraint.make({v: -c for v, c in lhs.coeffs},
                                   -lhs.const - 2)
            negs = [neg1, neg2]

        branches, model = decide(hyps, negs, nvars)
        oracle = _brute_force_implied(
            hyps + [Constraint.make({v: 1}, 0) for v in range(nvars)],
            negs, nvars)
        got = branches is not None
        assert got == oracle, (trial, hyps, negs)
        if branches is not None:
            cert = Certificate(tuple(branches))
            assert verify_certificate([b[0] for b in branches], cert)


def test_gcd_tightening_catches_parity():
    # 2x >= 1 and 2x <= 1 has no integer solution
    sys_ = [Constraint.make({0: 2}, -1), Constraint.make({0: -2}, 1)]
    steps = refute(list(sys_))
    assert steps is not None and verify_branch(sys_, steps)


def test_find_model_simple():
    sys_ = [Constraint.make({0: 1, 1: 1}, -3)]      # x + y >= 3
    m = find_model(sys_, 2)
    assert m is not None
    assert m[0] + m[1] >= 3
