import pytest

from hurry_prover.errors import NegativeOccurrence, NameClash
from hurry_prover.kernel.env import EMPTY_CTX, InductiveDecl
from hurry_prover.kernel.inductive import (check_inductive, derive_induction,
                                           guard_check)
from hurry_prover.kernel.terms import (BVar, Fix, Ind, Lam, Prod, Sort, SET,
                                       alpha_eq, mk_app)
from hurry_prover.kernel.typing import check_proof
from hurry_prover.surface.elaborate import elaborate
from hurry_prover.surface.parser import parse_term_string


def parse(env, s):
    return elaborate(env, EMPTY_CTX, parse_term_string(s))


def test_bin_admitted(bin_env):
    assert bin_env.has("bin")
    assert bin_env.constructor_of("L") == ("bin", 1)
    assert bin_env.constructor_of("N") == ("bin", 2)


def test_even_admitted(bin_env):
    assert bin_env.has("even")
    assert bin_env.constructor_of("evenS") == ("even", 2)


def test_negative_occurrence_rejected(env):
    decl = InductiveDecl(
        "bad", (), Sort(SET),
        (("c", Prod("_", Prod("_", Ind("bad"), Ind("bad")), Ind("bad"))),))
    with pytest.raises(NegativeOccurrence):
        check_inductive(env, decl)


def test_name_clash_rejected(env):
    decl = InductiveDecl("nat", (), Sort(SET), (("zz", Ind("nat")),))
    with pytest.raises(NameClash):
        check_inductive(env, decl)


def test_guard_accepts_corpus_fixpoints(bin_env):
    for name in ["plus", "mult", "minus", "flatten_aux", "flatten", "size"]:
        d = bin_env.lookup(name)
        assert isinstance(d.body, Fix)
        assert guard_check(bin_env, EMPTY_CTX, d.body), name


def test_guard_rejects_identity_recursion(env):
    nat = Ind("nat")
    loop = Fix("f", 1, Prod("x", nat, nat),
               Lam("x", nat, mk_app(BVar(1), (BVar(0),))))
    assert not guard_check(env, EMPTY_CTX, loop)


def test_bin_ind_statement(bin_env):
    expected = parse(bin_env,
                     "forall P : bin -> Prop, P L -> "
                     "(forall b : bin, P b -> forall b0 : bin, P b0 -> P (N b b0)) -> "
                     "forall b : bin, P b")
    assert alpha_eq(bin_env.lookup("bin_ind").typ, expected)


def test_even_ind_statement(bin_env):
    expected = parse(bin_env,
                     "forall P : nat -> Prop, P 0 -> "
                     "(forall x : nat, even x -> P x -> P (S (S x))) -> "
                     "forall n : nat, even n -> P n")
    assert alpha_eq(bin_env.lookup("even_ind").typ, expected)


def test_bool_ind_statement():
    # derived independently: instantiate the scheme rule by hand for a
    # two-constant inductive
    from hurry_prover.session import base_env
    env = base_env()
    expected = parse(env,
                     "forall P : bool -> Prop, P true -> P false -> "
                     "forall b : bool, P b")
    assert alpha_eq(env.lookup("bool_ind").typ, expected)


def test_schemes_pass_kernel_check(bin_env):
    for name in ["bin_ind", "even_ind", "nat_ind", "bool_ind", "le_ind",
                 "and_ind", "or_ind", "ex_ind", "eq_ind", "list_ind",
                 "False_ind", "True_ind", "prod_ind"]:
        d = bin_env.lookup(name)
        res = check_proof(bin_env, d.body, d.typ)
        assert res.ok, (name, res.error)
        assert res.oracles == ()


def test_derive_induction_output_checks(bin_env):
    block = bin_env.inductive("even")
    stmt, proof = derive_induction(bin_env, block)
    assert check_proof(bin_env, proof, stmt).ok
