import pytest

from hurry_prover.errors import UnknownIdentifier
from hurry_prover.query import (match_pattern, pattern_of_surface, search,
                                search_pattern, search_rewrite, WILD)
from hurry_prover.surface.parser import parse_term_string


def names(rows):
    return [n for n, _ in rows]


def test_search_true(env):
    assert names(search(env, "True")) == ["I"]


def test_search_le_includes_constructors(env):
    got = names(search(env, "le"))
    assert got[:2] == ["le_n", "le_S"]


def test_search_le_after_arith(arith_env):
    got = names(search(arith_env, "le"))
    for want in ["le_n", "le_S", "plus_le_compat_l", "plus_le_compat_r",
                 "plus_le_compat"]:
        assert want in got


def test_search_unknown_identifier(env):
    with pytest.raises(UnknownIdentifier):
        search(env, "zork")


def test_search_no_results(arith_env):
    # nothing concludes in the function constant plus itself
    assert search(arith_env, "plus") == []


def test_search_pattern_plus_le_family(arith_env):
    pat = pattern_of_surface(arith_env, parse_term_string("_ + _ <= _ + _"))
    got = names(search_pattern(arith_env, pat))
    assert got == ["plus_le_compat_l", "plus_le_compat_r", "plus_le_compat"]


def test_search_pattern_no_match(arith_env):
    pat = pattern_of_surface(arith_env, parse_term_string("_ * _ = 17"))
    assert search_pattern(arith_env, pat) == []


def test_search_rewrite_minus_family(arith_env):
    pat = pattern_of_surface(arith_env, parse_term_string("_ + (_ - _)"))
    got = names(search_rewrite(arith_env, pat))
    assert got == ["le_plus_minus", "le_plus_minus_r"]


def test_search_rewrite_ignores_non_equalities(arith_env):
    pat = pattern_of_surface(arith_env, parse_term_string("_ <= _"))
    assert search_rewrite(arith_env, pat) == []


def test_search_subset_of_pattern_with_holes(arith_env):
    """search(ident) is a subset of search_pattern(ident applied to holes)."""
    by_search = set(names(search(arith_env, "le")))
    pat = pattern_of_surface(arith_env, parse_term_string("_ <= _"))
    by_pattern = set(names(search_pattern(arith_env, pat)))
    assert by_search <= by_pattern


def test_matching_is_stable(arith_env):
    pat = pattern_of_surface(arith_env, parse_term_string("_ + _ <= _ + _"))
    a = names(search_pattern(arith_env, pat))
    b = names(search_pattern(arith_env, pat))
    assert a == b


def test_wildcard_matches_anything(env):
    t = parse_term_string("0 = 2 * 0")
    from hurry_prover.surface.elaborate import elaborate
    from hurry_prover.kernel.env import EMPTY_CTX
    term = elaborate(env, EMPTY_CTX, t)
    assert match_pattern(WILD, term)
