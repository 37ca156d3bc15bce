"""discriminate, injection, inversion: proof terms with no oracles."""

import pytest

from conftest import run_text
from hurry_prover.errors import (NotAConstructorClash, NotSameConstructor,
                                 TacticFailure)
from hurry_prover.kernel.env import EMPTY_CTX
from hurry_prover.engine.proofstate import qed, start_proof
from hurry_prover.engine.tactics import apply_tactic_sentence
from hurry_prover.surface.elaborate import elaborate
from hurry_prover.surface.parser import parse_sentence, parse_term_string


def tacs(text):
    return parse_sentence(text).tactics


def start(env, name, stmt):
    return start_proof(env, name, elaborate(env, EMPTY_CTX,
                                            parse_term_string(stmt)))


def prove(env, stmt, script):
    st = start(env, "tmp_thm", stmt)
    for s in script:
        st = apply_tactic_sentence(env, st, tacs(s))
    env2, report = qed(env, st)
    return env2.lookup("tmp_thm"), report


def test_discriminate_true_false(env):
    d, report = prove(env, "true = false -> 1 = 3",
                      ["intros H.", "discriminate H."])
    assert report.oracles == ()


def test_discriminate_reversed(env):
    _, report = prove(env, "false = true -> 2 = 7",
                      ["intros H.", "discriminate H."])
    assert report.oracles == ()


def test_discriminate_on_variables_fails(env):
    st = start(env, "t", "forall x y : nat, x = y -> x = y")
    st = apply_tactic_sentence(env, st, tacs("intros x y H."))
    with pytest.raises(NotAConstructorClash):
        apply_tactic_sentence(env, st, tacs("discriminate H."))


def test_injection_S(env):
    # hand-built pred-projection proof: S n = S m |- n = m
    _, report = prove(env, "forall n m : nat, S n = S m -> n = m",
                      ["intros n m H.", "injection H.", "exact H0."])
    assert report.oracles == ()


def test_injection_bin_two_equations(bin_env):
    _, report = prove(
        bin_env,
        "forall t1 t2 u1 u2 : bin, N t1 t2 = N u1 u2 -> t1 = u1 /\\ t2 = u2",
        ["intros t1 t2 u1 u2 H.", "injection H.",
         "split.", "exact H0.", "exact H1."])
    assert report.oracles == ()


def test_injection_rejects_different_constructors(env):
    st = start(env, "t", "true = false -> True")
    st = apply_tactic_sentence(env, st, tacs("intros H."))
    with pytest.raises(NotSameConstructor):
        apply_tactic_sentence(env, st, tacs("injection H."))


def test_inversion_even_1_closes(bin_env):
    _, report = prove(bin_env, "~ even 1",
                      ["intros even1.", "inversion even1."])
    assert report.oracles == ()


def test_inversion_even_SS_adds_premise(bin_env):
    st = start(bin_env, "t", "forall x0 : nat, even (S (S x0)) -> even x0")
    st = apply_tactic_sentence(bin_env, st, tacs("intros x0 H."))
    st = apply_tactic_sentence(bin_env, st, tacs("inversion H; assumption."))
    assert not st.goals
    env2, report = qed(bin_env, st)
    assert report.oracles == ()


def test_inversion_even_0_single_trivial_subgoal(bin_env):
    st = start(bin_env, "t", "even 0 -> True")
    st = apply_tactic_sentence(bin_env, st, tacs("intros H."))
    before = len(st.goals[0].ctx)
    st = apply_tactic_sentence(bin_env, st, tacs("inversion H."))
    # only even0 unifies and it contributes no premises
    assert len(st.goals) == 1
    assert len(st.goals[0].ctx) == before
