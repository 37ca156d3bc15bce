import time

import pytest

from hurry_prover.errors import UnknownPackage
from hurry_prover.kernel.env import Definition, GlobalEnv, OracleLemma
from hurry_prover.session import base_env, load_prelude, require

SPEC_ARITH = ["plus_comm", "plus_assoc", "mult_1_r", "mult_plus_distr_l",
              "mult_plus_distr_r", "plus_reg_l", "le_plus_l",
              "le_plus_minus", "le_plus_minus_r", "plus_le_compat_l",
              "plus_le_compat_r", "plus_le_compat"]


def test_prelude_defines_core_constants(env):
    for name in ["True", "False", "not", "and", "or", "ex", "eq", "bool",
                 "nat", "prod", "plus", "mult", "minus", "le", "lt",
                 "eq_ind", "eq_ind_r", "eq_sym", "f_equal"]:
        assert env.has(name), name
    for ctor in ["I", "conj", "or_introl", "or_intror", "ex_intro",
                 "eq_refl", "true", "false", "O", "S", "pair", "le_n", "le_S"]:
        assert env.constructor_of(ctor) is not None, ctor


def test_arith_lemmas_present_and_proved(arith_env):
    for name in SPEC_ARITH:
        d = arith_env.lookup(name)
        assert isinstance(d, Definition), name
        assert not d.transparent                     # sealed by Qed
        assert d.oracle_deps == (), name             # zero oracles


def test_no_oracle_lemmas_in_arith(arith_env):
    oracles = [d for d in arith_env.decls if isinstance(d, OracleLemma)]
    assert oracles == []


def test_arith_lemmas_recheck_in_kernel(arith_env):
    from hurry_prover.kernel.typing import check_proof
    for name in SPEC_ARITH:
        d = arith_env.lookup(name)
        res = check_proof(arith_env, d.body, d.typ)
        assert res.ok and res.oracles == (), name


def test_list_package(arith_env):
    assert arith_env.has("list")
    assert arith_env.constructor_of("cons") == ("list", 2)
    assert arith_env.has("app")


def test_require_idempotent(env):
    e1 = require(env, "Arith")
    e2 = require(e1, "Arith")
    assert e2 is e1 or len(e2.decls) == len(e1.decls)


def test_require_unknown_package(env):
    with pytest.raises(UnknownPackage):
        require(env, "NoSuchPkg")


def test_omega_package_sets_flag(env):
    e = require(env, "Omega")
    assert e.omega_enabled


def test_full_load_under_ten_seconds():
    t0 = time.time()
    e = load_prelude(GlobalEnv())
    e = require(e, "Arith")
    e = require(e, "List")
    assert time.time() - t0 < 10.0


def test_load_path_lookup(tmp_path, env):
    (tmp_path / "Mine.v").write_text("Definition mine := 41 + 1.\n")
    e = require(env, "Mine", load_paths=[str(tmp_path)])
    assert e.has("mine")
