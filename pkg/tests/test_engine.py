import pytest

from conftest import run_script
from hurry_prover.errors import (IllTypedStatement, NameClash, NothingToUndo,
                                 OpenGoalsRemain, TacticFailure)
from hurry_prover.kernel.env import EMPTY_CTX
from hurry_prover.kernel.typing import check_proof, infer_type, conv_leq
from hurry_prover.engine.proofstate import qed, start_proof, undo
from hurry_prover.engine.tactics import apply_tactic_sentence
from hurry_prover.session import Document, exec_sentence
from hurry_prover.surface.parser import parse_sentence


def tacs(text):
    return parse_sentence(text).tactics


def start(env, name, stmt):
    from hurry_prover.surface.elaborate import elaborate
    from hurry_prover.surface.parser import parse_term_string
    return start_proof(env, name, elaborate(env, EMPTY_CTX,
                                            parse_term_string(stmt)))


def test_start_proof_single_goal(env):
    st = start(env, "t", "forall a b : Prop, a /\\ b -> b /\\ a")
    assert len(st.goals) == 1 and len(st.goals[0].ctx) == 0


def test_start_proof_rejects_ill_typed(env):
    from hurry_prover.kernel.terms import Construct, mk_app
    bad = mk_app(Construct("nat", 2), (Construct("bool", 1),))
    with pytest.raises(IllTypedStatement):
        start_proof(env, "t", bad)


def test_start_proof_rejects_existing_name(env):
    with pytest.raises(NameClash):
        start(env, "plus", "True")


def test_split_produces_subgoals_in_premise_order(env):
    st = start(env, "t", "forall a b : Prop, a /\\ b -> b /\\ a")
    st = apply_tactic_sentence(env, st, tacs("intros a b H."))
    st = apply_tactic_sentence(env, st, tacs("split."))
    assert len(st.goals) == 2
    from hurry_prover.surface.printer import print_term
    names = [e.name for e in st.goals[0].ctx.entries][::-1]
    assert print_term(env, st.goals[0].concl, names) == "b"
    assert print_term(env, st.goals[1].concl, names) == "a"


def test_failing_tactic_leaves_state_identical(env):
    st = start(env, "t", "forall a b : Prop, a /\\ b -> b /\\ a")
    st = apply_tactic_sentence(env, st, tacs("intros a b H."))
    before = st
    with pytest.raises(TacticFailure):
        apply_tactic_sentence(env, st, tacs("reflexivity."))
    assert st is before and st.goals == before.goals


def test_undo_restores_previous_state(env):
    st0 = start(env, "t", "forall a b : Prop, a /\\ b -> b /\\ a")
    st1 = apply_tactic_sentence(env, st0, tacs("intros a b H."))
    st2 = undo(st1)
    assert st2.goals == st0.goals and st2.proof == st0.proof


def test_undo_twice_restores_initial(env):
    st0 = start(env, "t", "True /\\ True")
    st1 = apply_tactic_sentence(env, st0, tacs("split."))
    st2 = apply_tactic_sentence(env, st1, tacs("exact I."))
    back = undo(undo(st2))
    assert back.goals == st0.goals


def test_undo_at_start_errors(env):
    st = start(env, "t", "True")
    with pytest.raises(NothingToUndo):
        undo(st)


def test_qed_with_open_goals(env):
    st = start(env, "t", "True /\\ True")
    st = apply_tactic_sentence(env, st, tacs("split."))
    with pytest.raises(OpenGoalsRemain):
        qed(env, st)


def test_qed_registers_opaque_theorem(env):
    st = start(env, "tq", "True")
    st = apply_tactic_sentence(env, st, tacs("exact I."))
    env2, report = qed(env, st)
    assert report.name == "tq" and report.oracles == ()
    d = env2.lookup("tq")
    assert not d.transparent


def test_refinement_soundness_checked_each_step(bin_env):
    """After every tactic, goals re-check and the holed proof types."""
    st = start(bin_env, "t", "forall t2, size (flatten_aux L t2) = size L + size t2 + 1")
    script = ["intros t2.", "simpl.", "ring."]
    for s in script:
        st = apply_tactic_sentence(bin_env, st, tacs(s))
        for g in st.goals:
            infer_type(bin_env, g.ctx, g.concl)      # conclusion well-typed
        from hurry_prover.engine.proofstate import oracle_env
        env_x = oracle_env(bin_env, st)
        ty = infer_type(env_x, EMPTY_CTX, st.proof, goals=st.goal_table())
        assert conv_leq(env_x, EMPTY_CTX, ty, st.statement)


def test_exists_instantiates(env):
    st = start(env, "t", "exists y : nat, 0 = 2 * y")
    st = apply_tactic_sentence(env, st, tacs("exists 0."))
    from hurry_prover.surface.printer import print_term
    assert print_term(env, st.goals[0].concl) == "0 = 2 * 0"


def test_apply_unifies_quantifiers(env):
    st = start(env, "t", "forall n : nat, n <= n")
    st = apply_tactic_sentence(env, st, tacs("intros n; apply le_n."))
    assert not st.goals


def test_elim_on_le_hypothesis(arith_env):
    st = start(arith_env, "t", "forall n m : nat, S n <= m -> n <= m")
    st = apply_tactic_sentence(arith_env, st, tacs("intros n m H; elim H."))
    assert len(st.goals) == 2


def test_rewrite_reverse(arith_env):
    st = start(arith_env, "t", "forall n : nat, n + 0 = n")
    st = apply_tactic_sentence(
        arith_env, st, tacs("intros n; rewrite (plus_comm n 0); simpl; reflexivity."))
    assert not st.goals


def test_replay_goal_counts_example2(env):
    doc = Document(base=env)
    expected_counts = [1, None, 1, 2, 2, 1, 0]
    script = ["Theorem example2 : forall a b:Prop, a /\\ b -> b /\\ a.",
              "Proof.", "intros a b H.", "split.",
              "elim H; intros H0 H1.", "exact H1.", "intuition."]
    for sent, count in zip(script, expected_counts):
        doc = exec_sentence(doc, sent)
        if count is not None:
            proof = doc.proof()
            assert len(proof.goals) == count, sent
    doc = exec_sentence(doc, "Qed.")
    assert doc.executed[-1].output == "example2 is defined"


def test_auto_closes_le_n_via_hint(env):
    st = start(env, "t", "forall n : nat, n <= n")
    from hurry_prover.dp.auto import do_auto
    st = apply_tactic_sentence(env, st, tacs("intros n; auto."))
    assert not st.goals


def test_auto_noop_on_false(env):
    st = start(env, "t", "False")
    before = st
    st2 = apply_tactic_sentence(env, st, tacs("auto."))
    assert len(st2.goals) == 1 and st2.goals[0].concl == before.goals[0].concl
