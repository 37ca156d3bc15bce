import pytest

from hurry_prover.errors import SyntaxError_, UnificationMismatch
from hurry_prover.kernel.env import EMPTY_CTX
from hurry_prover.kernel.terms import alpha_eq
from hurry_prover.surface.elaborate import elaborate
from hurry_prover.surface.notation import locate
from hurry_prover.surface.parser import parse_sentence, parse_term_string
from hurry_prover.surface.printer import print_term

PRINTED = [
    "True", "False", "3", "3 + 4", "3 = 5", "(3, 4)", "3 = 5 /\\ True",
    "nat -> Prop", "3 <= 6", "fun x : nat => x = 3",
    "forall x : nat, x < 3 \\/ (exists y : nat, x = y + 3)",
    "let f := fun x : nat => (x * 3, x) in f 3",
    "True /\\ False", "nat * nat", "forall a b : Prop, a /\\ b -> b /\\ a",
    "2 * 3 = 3 * 2", "exists y : nat, 0 = 2 * y",
]


def test_parse_check_sentence():
    s = parse_sentence("Check (3=5).")
    assert s.kind == "check"


def test_parse_definition_sentence():
    s = parse_sentence("Definition example1 (x : nat) := x*x+2*x+1.")
    assert s.kind == "definition" and s.name == "example1"


def test_unbalanced_parenthesis_is_syntax_error():
    with pytest.raises(SyntaxError_):
        parse_sentence("Check (3=5")


def test_roundtrip_on_corpus_strings(env):
    for text in PRINTED:
        t = elaborate(env, EMPTY_CTX, parse_term_string(text))
        printed = print_term(env, t)
        t2 = elaborate(env, EMPTY_CTX, parse_term_string(printed))
        assert alpha_eq(t, t2), text


def test_print_matches_input_on_corpus(env):
    for text in PRINTED:
        t = elaborate(env, EMPTY_CTX, parse_term_string(text))
        assert print_term(env, t) == text


def test_numeral_roundtrip(env):
    t = elaborate(env, EMPTY_CTX, parse_term_string("3"))
    assert print_term(env, t) == "3"


def test_locate_le():
    rows = locate("_ <= _")
    assert rows == [("x <= y", "le x y", "nat_scope")]


def test_locate_append():
    rows = locate("_ ++ _")
    assert rows and rows[0][1] == "app x y"


def test_locate_unknown_is_empty():
    assert locate("_ @@ _") == []


def test_locate_star_lists_both_overloads():
    rows = locate("_ * _")
    targets = {d for _, d, _ in rows}
    assert targets == {"mult x y", "prod x y"}


def test_implicit_list_elaboration(arith_env):
    t = elaborate(arith_env, EMPTY_CTX,
                  parse_term_string("cons 3 (cons 2 (cons 1 nil))"))
    assert print_term(arith_env, t) == "3 :: 2 :: 1 :: nil"


def test_binder_type_inferred_from_use(env):
    t = elaborate(env, EMPTY_CTX,
                  parse_term_string("let f := fun x => (x * 3, x) in f 3"))
    assert "fun x : nat" in print_term(env, t)


def test_elaboration_never_ill_scoped(env):
    from hurry_prover.kernel.terms import well_scoped
    for text in PRINTED:
        t = elaborate(env, EMPTY_CTX, parse_term_string(text))
        assert well_scoped(t)


def test_type_mismatch_detected(env):
    with pytest.raises(Exception):
        elaborate(env, EMPTY_CTX, parse_term_string("S True"))
