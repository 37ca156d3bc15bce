"""ring: canonical forms vs an independent integer-evaluation oracle."""

import itertools
import random

import pytest

from hurry_prover.errors import NormalFormsDiffer, UnsupportedOperator
from hurry_prover.kernel.env import EMPTY_CTX
from hurry_prover.dp.ring import AtomTable, ring_normalize
from hurry_prover.engine.proofstate import qed, start_proof
from hurry_prover.engine.tactics import apply_tactic_sentence
from hurry_prover.surface.elaborate import elaborate
from hurry_prover.surface.parser import parse_sentence, parse_term_string

# expression trees: ("var", i) | ("num", k) | ("plus", a, b) | ("mult", a, b)
#                 | ("succ", a)


def eval_expr(e, vals):
    """Independent oracle: plain Python integer arithmetic."""
    kind = e[0]
    if kind == "var":
        return vals[e[1]]
    if kind == "num":
        return e[1]
    if kind == "succ":
        return eval_expr(e[1], vals) + 1
    a, b = eval_expr(e[1], vals), eval_expr(e[2], vals)
    return a + b if kind == "plus" else a * b


def expr_text(e, names):
    kind = e[0]
    if kind == "var":
        return names[e[1]]
    if kind == "num":
        return str(e[1])
    if kind == "succ":
        return f"S ({expr_text(e[1], names)})"
    op = "+" if kind == "plus" else "*"
    return f"({expr_text(e[1], names)} {op} {expr_text(e[2], names)})"


def degree(e):
    kind = e[0]
    if kind == "var":
        return 1
    if kind == "num":
        return 0
    if kind == "succ":
        return degree(e[1])
    if kind == "plus":
        return max(degree(e[1]), degree(e[2]))
    return degree(e[1]) + degree(e[2])


def random_expr(rng, n_vars, depth, max_degree=3):
    """Random nat expression with per-variable degree at most 3, so that
    agreement on the grid {0..3} is equivalent to polynomial identity."""
    while True:
        e = _gen(rng, n_vars, depth)
        if degree(e) <= max_degree:
            return e


def _gen(rng, n_vars, depth):
    if depth == 0 or rng.random() < 0.35:
        if rng.random() < 0.7:
            return ("var", rng.randrange(n_vars))
        return ("num", rng.randrange(0, 4))
    k = rng.choice(["plus", "plus", "mult", "succ"])
    if k == "succ":
        return ("succ", _gen(rng, n_vars, depth - 1))
    return (k, _gen(rng, n_vars, depth - 1), _gen(rng, n_vars, depth - 1))


def to_term(env, e, names):
    ctx = EMPTY_CTX
    for n in names:
        ctx = ctx.push(n, __import__("hurry_prover.kernel.terms",
                                     fromlist=["Ind"]).Ind("nat"))
    return elaborate(env, ctx, parse_term_string(expr_text(e, names)))


def test_spec_examples_identical_normal_forms(bin_env):
    from hurry_prover.kernel.terms import Ind
    ctx = EMPTY_CTX.push("t2", Ind("nat"))
    pairs = [
        ("S (S t2)", "S (t2 + 1)"),
        ("x * y", "y * x"),
        ("b + (b0 + t2 + 1) + 1", "S (b + b0 + t2 + 1)"),
    ]
    for a, b in pairs:
        names = sorted({w for w in a.replace("(", " ").replace(")", " ").split()
                        if w.isidentifier() and w != "S"}
                       | {w for w in b.replace("(", " ").replace(")", " ").split()
                          if w.isidentifier() and w != "S"})
        ctx2 = EMPTY_CTX
        for n in names:
            ctx2 = ctx2.push(n, Ind("nat"))
        ta = elaborate(bin_env, ctx2, parse_term_string(a))
        tb = elaborate(bin_env, ctx2, parse_term_string(b))
        table = AtomTable()
        assert ring_normalize(ta, table) == ring_normalize(tb, table), (a, b)


def test_subtraction_rejected(env):
    from hurry_prover.kernel.terms import Ind
    ctx = EMPTY_CTX.push("x", Ind("nat"))
    t = elaborate(env, ctx, parse_term_string("x - 1"))
    with pytest.raises(UnsupportedOperator):
        ring_normalize(t, AtomTable())


def test_unequal_sides_differ(env):
    from hurry_prover.kernel.terms import Ind
    ctx = EMPTY_CTX.push("x", Ind("nat"))
    a = elaborate(env, ctx, parse_term_string("x + 1"))
    b = elaborate(env, ctx, parse_term_string("x"))
    table = AtomTable()
    assert ring_normalize(a, table) != ring_normalize(b, table)


def test_ring_vs_exhaustive_evaluation_1000(env):
    """Acceptance oracle (a): 1000 random semiring identities; the tactic's
    verdict must agree with exhaustive evaluation over {0..3}^vars."""
    rng = random.Random(1234)
    names = ["x", "y", "z"]
    disagreements = 0
    closed = 0
    for _ in range(1000):
        n_vars = rng.randrange(1, 4)
        e1 = random_expr(rng, n_vars, 3)
        e2 = random_expr(rng, n_vars, 3)
        if rng.random() < 0.4:
            # force some equal pairs by commuting/reassociating
            e2 = commuted(e1, rng)
        table = AtomTable()
        t1 = to_term(env, e1, names[:n_vars])
        t2 = to_term(env, e2, names[:n_vars])
        ring_says_equal = (ring_normalize(t1, table)
                          == ring_normalize(t2, table))
        oracle_equal = all(
            eval_expr(e1, vals) == eval_expr(e2, vals)
            for vals in itertools.product(range(4), repeat=n_vars))
        if ring_says_equal != oracle_equal:
            disagreements += 1
        if ring_says_equal:
            closed += 1
    assert disagreements == 0
    assert closed >= 300           # the forced-equal pairs keep this high


def commuted(e, rng):
    kind = e[0]
    if kind in ("var", "num"):
        return e
    if kind == "succ":
        return ("plus", ("num", 1), commuted(e[1], rng))
    a, b = commuted(e[1], rng), commuted(e[2], rng)
    if rng.random() < 0.5:
        a, b = b, a
    return (kind, a, b)


def tacs(text):
    return parse_sentence(text).tactics


def test_ring_tactic_closes_with_oracle(env):
    st = start_proof(env, "tmp_ring",
                     elaborate(env, EMPTY_CTX,
                               parse_term_string("0 = 2 * 0")))
    st = apply_tactic_sentence(env, st, tacs("ring."))
    assert not st.goals
    env2, report = qed(env, st)
    assert len(report.oracles) == 1 and report.oracles[0].startswith("ring")


def test_ring_tactic_fails_on_unequal(env):
    st = start_proof(env, "tmp_ring2",
                     elaborate(env, EMPTY_CTX,
                               parse_term_string("forall x : nat, x + 1 = x")))
    st = apply_tactic_sentence(env, st, tacs("intros x."))
    with pytest.raises(NormalFormsDiffer):
        apply_tactic_sentence(env, st, tacs("ring."))
