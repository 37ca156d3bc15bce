import json
from pathlib import Path

import pytest

from hurry_prover.errors import NoProofInProgress, OutOfRange
from hurry_prover.protocol import ProtocolSession
from hurry_prover.session import (Document, back, base_env, exec_sentence,
                                  run_file)

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def test_check_pair_output(env):
    doc = exec_sentence(Document(base=env), "Check (3,4).")
    assert doc.executed[-1].output == "(3, 4) : nat * nat"


def test_eval_output(env):
    doc = exec_sentence(Document(base=env),
                        "Eval compute in let f := fun x => (x * 3, x) in f 3.")
    assert doc.executed[-1].output == "= (9, 3) : nat * nat"


def test_tactic_without_proof_errors(env):
    with pytest.raises(NoProofInProgress):
        exec_sentence(Document(base=env), "split.")


def test_back_to_zero_resets(env):
    doc = Document(base=env)
    doc = exec_sentence(doc, "Definition d1 := 3.")
    doc = back(doc, 0)
    assert not doc.env().has("d1")


def test_back_out_of_range(env):
    with pytest.raises(OutOfRange):
        back(Document(base=env), 99)


def test_back_and_reexec_is_deterministic(env):
    doc = Document(base=env)
    sentences = ["Definition d2 := 1 + 1.", "Check d2.", "Eval compute in d2."]
    for s in sentences:
        doc = exec_sentence(doc, s)
    first = doc.executed[2].output
    doc = back(doc, 2)
    doc = exec_sentence(doc, sentences[2])
    assert doc.executed[2].output == first


def test_run_file_corpus_exit_zero():
    for name in ["tutorial_basics.v", "proofs.v", "exercises.v"]:
        code, transcript = run_file(str(CORPUS / name))
        assert code == 0, (name, transcript[-800:])


def test_run_file_deterministic_transcripts():
    a = run_file(str(CORPUS / "tutorial_basics.v"))
    b = run_file(str(CORPUS / "tutorial_basics.v"))
    assert a == b


def test_run_file_open_proof_fails(tmp_path):
    f = tmp_path / "open.v"
    f.write_text("Theorem t : True.\n")
    code, transcript = run_file(str(f))
    assert code == 1 and "open proof" in transcript


def test_run_file_type_error_position(tmp_path):
    f = tmp_path / "bad.v"
    f.write_text("Check True.\nCheck (S True).\n")
    code, transcript = run_file(str(f))
    assert code == 1 and "bad.v:2" in transcript


def test_protocol_exec_check():
    s = ProtocolSession()
    resp = json.loads(s.handle(json.dumps(
        {"id": 1, "op": "exec", "payload": "Check True."})))
    assert resp == {"id": 1, "status": "ok", "goals": [],
                    "output": "True : Prop", "error": None}


def test_protocol_goals_after_split():
    s = ProtocolSession()
    s.handle(json.dumps({"id": 1, "op": "exec",
                         "payload": "Theorem t : True /\\ True."}))
    resp = json.loads(s.handle(json.dumps(
        {"id": 2, "op": "exec", "payload": "split."})))
    assert resp["status"] == "ok" and len(resp["goals"]) == 2


def test_protocol_back():
    s = ProtocolSession()
    s.handle(json.dumps({"id": 1, "op": "exec", "payload": "Check True."}))
    resp = json.loads(s.handle(json.dumps({"id": 3, "op": "back",
                                           "payload": "0"})))
    assert resp["status"] == "ok" and resp["goals"] == []


def test_protocol_malformed_gets_id_minus_one():
    s = ProtocolSession()
    resp = json.loads(s.handle("this is not json"))
    assert resp["id"] == -1 and resp["status"] == "error"


def test_protocol_matches_repl_outputs(env):
    """Protocol exec and document exec agree on every corpus sentence."""
    text = (CORPUS / "tutorial_basics.v").read_text()
    from hurry_prover.surface.lexer import split_sentences
    doc = Document(base=env)
    proto = ProtocolSession()
    for start, end, _ in split_sentences(text):
        chunk = text[start:end]
        doc = exec_sentence(doc, chunk)
        resp = json.loads(proto.handle(json.dumps(
            {"id": 1, "op": "exec", "payload": chunk})))
        assert resp["status"] == "ok"
        assert resp["output"] == doc.executed[-1].output


def test_error_keeps_document_unchanged(env):
    doc = exec_sentence(Document(base=env), "Check True.")
    n = len(doc.executed)
    with pytest.raises(Exception):
        exec_sentence(doc, "Check (S True).")
    assert len(doc.executed) == n
