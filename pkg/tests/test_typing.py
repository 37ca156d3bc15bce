import pytest

from hurry_prover.errors import KernelError, TypeMismatch, UnboundVariable
from hurry_prover.kernel.env import EMPTY_CTX
from hurry_prover.kernel.reduction import normalize
from hurry_prover.kernel.terms import (BVar, Construct, Ind, Sort, Term, PROP,
                                       SET, TYPE, mk_app)
from hurry_prover.kernel.typing import (check_proof, conv_leq, convertible,
                                        infer_type)
from hurry_prover.surface.elaborate import elaborate
from hurry_prover.surface.parser import parse_term_string


def infer_str(env, s):
    t = elaborate(env, EMPTY_CTX, parse_term_string(s))
    return t, infer_type(env, EMPTY_CTX, t)


def test_numeral_sum_has_type_nat(env):
    _, ty = infer_str(env, "3 + 4")
    assert ty == Ind("nat")


def test_pair_has_product_type(env):
    _, ty = infer_str(env, "(3,4)")
    assert ty == mk_app(Ind("prod"), (Ind("nat"), Ind("nat")))


def test_arrow_of_types_lives_in_type(env):
    _, ty = infer_str(env, "nat -> Prop")
    assert ty == Sort(TYPE, 1)


def test_and_of_props_is_prop(env):
    _, ty = infer_str(env, "and True False")
    assert ty == Sort(PROP)


def test_le_S_instance(env):
    t, ty = infer_str(env, "le_S 0 0 (le_n 0)")
    expected = elaborate(env, EMPTY_CTX, parse_term_string("0 <= 1"))
    assert convertible(env, EMPTY_CTX, ty, expected)


def test_impredicative_prop(env):
    _, ty = infer_str(env, "forall a b : Prop, a -> b -> a")
    assert ty == Sort(PROP)


def test_convertible_by_computation(env):
    two_plus_one = elaborate(env, EMPTY_CTX, parse_term_string("2 + 1"))
    three = elaborate(env, EMPTY_CTX, parse_term_string("3"))
    # independent route: both sides normalize to the same spine
    assert normalize(env, two_plus_one) == normalize(env, three)
    assert convertible(env, EMPTY_CTX, two_plus_one, three)


def test_convertible_reflexive(env):
    t = elaborate(env, EMPTY_CTX, parse_term_string("fun x : nat => x + 1"))
    assert convertible(env, EMPTY_CTX, t, t)


def test_distinct_constructors_not_convertible(env):
    assert not convertible(env, EMPTY_CTX, Construct("bool", 1),
                           Construct("bool", 2))


def test_cumulativity(env):
    assert conv_leq(env, EMPTY_CTX, Sort(SET), Sort(TYPE, 1))
    assert conv_leq(env, EMPTY_CTX, Sort(PROP), Sort(TYPE, 2))
    assert not conv_leq(env, EMPTY_CTX, Sort(TYPE, 2), Sort(TYPE, 1))
    assert not conv_leq(env, EMPTY_CTX, Sort(PROP), Sort(SET))


def test_unbound_variable_rejected(env):
    with pytest.raises(UnboundVariable):
        infer_type(env, EMPTY_CTX, BVar(0))


def test_check_proof_I_True(env):
    res = check_proof(env, Construct("True", 1), Ind("True"))
    assert res.ok and res.oracles == ()


def test_check_proof_le_n_0(env):
    proof = elaborate(env, EMPTY_CTX, parse_term_string("le_n 0"))
    stmt = elaborate(env, EMPTY_CTX, parse_term_string("0 <= 0"))
    assert check_proof(env, proof, stmt).ok


def test_check_proof_rejects_wrong_statement(env):
    res = check_proof(env, Construct("True", 1), Ind("False"))
    assert not res.ok


def test_infer_deterministic(env):
    t, ty1 = infer_str(env, "fun x : nat => x * 3 + 1")
    ty2 = infer_type(env, EMPTY_CTX, t)
    assert ty1 == ty2


def test_subject_reduction_on_samples(env):
    for s in ["2 + 1", "example1 1" if env.has("example1") else "2 * 3",
              "let f := fun x => (x * 3, x) in f 3"]:
        t = elaborate(env, EMPTY_CTX, parse_term_string(s))
        ty = infer_type(env, EMPTY_CTX, t)
        r = normalize(env, t)
        ty2 = infer_type(env, EMPTY_CTX, r)
        assert convertible(env, EMPTY_CTX, ty, ty2)
