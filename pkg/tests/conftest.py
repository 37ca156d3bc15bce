import pytest

from hurry_prover.session import Document, base_env, exec_sentence, require
from hurry_prover.surface.lexer import split_sentences


@pytest.fixture(scope="session")
def env():
    return base_env()


@pytest.fixture(scope="session")
def arith_env(env):
    e = require(env, "Arith")
    e = require(e, "List")
    return e.with_omega()


@pytest.fixture(scope="session")
def bin_env(arith_env):
    """Arith plus the bin/even declarations used across the corpus."""
    src = """
Inductive bin : Set := L : bin | N : bin -> bin -> bin.
Definition example3 (t : bin): bool :=
  match t with N L L => false | _ => true end.
Fixpoint flatten_aux (t1 t2:bin) {struct t1} : bin :=
  match t1 with L => N L t2 | N t'1 t'2 => flatten_aux t'1 (flatten_aux t'2 t2) end.
Fixpoint flatten (t:bin) : bin :=
  match t with L => L | N t1 t2 => flatten_aux t1 (flatten t2) end.
Fixpoint size (t:bin) : nat :=
  match t with L => 1 | N t1 t2 => 1 + size t1 + size t2 end.
Inductive even : nat -> Prop :=
  even0 : even 0
| evenS : forall x:nat, even x -> even (S (S x)).
"""
    from hurry_prover.session import load_source
    return load_source(arith_env, src, "bin_decls")


def run_script(base, sentences):
    doc = Document(base=base)
    for s in sentences:
        doc = exec_sentence(doc, s)
    return doc


def run_text(base, text):
    doc = Document(base=base)
    for start, end, toks in split_sentences(text):
        doc = exec_sentence(doc, text[start:end])
    return doc
