"""Acceptance suite: every criterion runs at its stated tolerance and prints
one pass/fail line."""

import itertools
import random
import time
from pathlib import Path

import pytest

from kripke import has_countermodel
from hurry_prover.errors import (NegativeOccurrence, NonLinearTerm,
                                 NonStructuralRecursion, NotAConstructorClash,
                                 OpenGoalsRemain)
from hurry_prover.kernel.env import Definition, EMPTY_CTX, OracleLemma
from hurry_prover.kernel.terms import alpha_eq
from hurry_prover.kernel.typing import check_proof
from hurry_prover.session import (Document, base_env, exec_sentence,
                                  load_source, require, run_file)
from hurry_prover.surface.elaborate import elaborate
from hurry_prover.surface.parser import parse_term_string

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def report(name, ok, detail=""):
    line = f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, name


def ws_equal(a: str, b: str) -> bool:
    return "".join(a.split()) == "".join(b.split())


# --- criterion: transcript fidelity (basics corpus) --------------------------

EXPECTED_BASICS = [
    ("Check True.", "True : Prop"),
    ("Check False.", "False : Prop"),
    ("Check 3.", "3 : nat"),
    ("Check (3+4).", "3 + 4 : nat"),
    ("Check (3=5).", "3=5 : Prop"),
    ("Check (3,4).", "(3,4) : nat * nat"),
    ("Check ((3=5)/\\True).", "3 = 5 /\\ True : Prop"),
    ("Check nat -> Prop.", "nat -> Prop : Type"),
    ("Check (3 <= 6).", "3 <= 6 : Prop"),
    ("Check (fun x:nat => x = 3).", "fun x : nat => x = 3 : nat -> Prop"),
    ("Check (forall x:nat, x < 3 \\/ (exists y:nat, x = y + 3)).",
     "forall x : nat, x < 3 \\/ (exists y : nat, x = y + 3) : Prop"),
    ("Check (let f := fun x => (x * 3,x) in f 3).",
     "let f := fun x : nat => (x * 3, x) in f 3 : nat * nat"),
    ('Locate "_ <= _".',
     'Notation Scope "x <= y" := le x y : nat_scope (default interpretation)'),
    ("Check True.", "True : Prop"),
    ("Check False.", "False : Prop"),
    ("Check and.", "and : Prop -> Prop -> Prop"),
    ("Check (and True False).", "True /\\ False : Prop"),
    ("Eval compute in let f := fun x => (x * 3, x) in f 3.",
     "= (9, 3) : nat * nat"),
    ("Definition example1 (x : nat) := x*x+2*x+1.", ""),
    ("Check example1.", "example1 : nat -> nat"),
    ("Eval compute in example1 1.", "= 4 : nat"),
]


def test_transcript_fidelity_basics(env):
    t0 = time.time()
    doc = Document(base=env)
    mismatches = []
    for sentence, expected in EXPECTED_BASICS:
        doc = exec_sentence(doc, sentence)
        got = doc.executed[-1].output
        if not ws_equal(got, expected):
            mismatches.append((sentence, expected, got))
    elapsed = time.time() - t0
    report("transcript-fidelity-basics",
           not mismatches and elapsed < 1.0,
           f"{len(EXPECTED_BASICS)} sentences in {elapsed:.2f}s"
           + (f"; first mismatch {mismatches[0]}" if mismatches else ""))


# --- criterion: proof corpus --------------------------------------------------

PROOF_NAMES = ["example2", "example3_size", "flatten_aux_size", "flatten_size",
               "even_mult", "even_mult'", "not_even_1", "omega_example",
               "ex1", "ex2"]
NO_ORACLE = {"example2", "example3_size", "not_even_1", "ex1", "ex2"}


def test_proof_corpus_checks_and_rechecks(env):
    t0 = time.time()
    code, transcript = run_file(str(CORPUS / "proofs.v"))
    ok = code == 0
    env2 = load_source(env, (CORPUS / "proofs.v").read_text(), "proofs")
    details = []
    for name in PROOF_NAMES:
        d = env2.lookup(name)
        res = check_proof(env2, d.body, d.typ)           # independent re-check
        if not res.ok:
            ok = False
            details.append(f"{name} failed kernel re-check: {res.error}")
        if name in NO_ORACLE and res.oracles:
            ok = False
            details.append(f"{name} unexpectedly uses oracles {res.oracles}")
        if name not in NO_ORACLE:
            if not res.oracles or not all(
                    o.startswith(("ring", "omega")) for o in res.oracles):
                ok = False
                details.append(f"{name} oracle report wrong: {res.oracles}")
    elapsed = time.time() - t0
    report("proof-corpus", ok and elapsed < 10.0,
           f"{len(PROOF_NAMES)} theorems in {elapsed:.2f}s"
           + ("; " + "; ".join(details) if details else ""))


# --- criterion: scheme generation ----------------------------------------------

def test_scheme_generation_matches_displayed_statements(bin_env):
    bin_expected = elaborate(bin_env, EMPTY_CTX, parse_term_string(
        "forall P : bin -> Prop, P L -> "
        "(forall b : bin, P b -> forall b0 : bin, P b0 -> P (N b b0)) -> "
        "forall b : bin, P b"))
    even_expected = elaborate(bin_env, EMPTY_CTX, parse_term_string(
        "forall P : nat -> Prop, P 0 -> "
        "(forall x : nat, even x -> P x -> P (S (S x))) -> "
        "forall n : nat, even n -> P n"))
    ok = (alpha_eq(bin_env.lookup("bin_ind").typ, bin_expected)
          and alpha_eq(bin_env.lookup("even_ind").typ, even_expected))
    report("scheme-generation", ok)


# --- criterion: rejection suite -------------------------------------------------

def test_rejection_suite(bin_env):
    doc = Document(base=bin_env)
    doc = exec_sentence(doc, "Check True.")
    checkpoint = doc.executed
    cases = [
        ("Inductive bad : Set := c : (bad -> bad) -> bad.", NegativeOccurrence),
        ("Fixpoint floop (x:nat) : nat := floop x.", NonStructuralRecursion),
    ]
    ok = True
    details = []
    for sentence, exc in cases:
        try:
            exec_sentence(doc, sentence)
            ok = False
            details.append(f"{sentence} unexpectedly accepted")
        except exc:
            pass
        except Exception as e:
            ok = False
            details.append(f"{sentence}: wrong error {type(e).__name__}")
        if doc.executed != checkpoint:
            ok = False
            details.append("state changed")

    # Qed with open goals
    d2 = exec_sentence(doc, "Theorem tr : True /\\ True.")
    d2 = exec_sentence(d2, "split.")
    before = d2.proof()
    try:
        exec_sentence(d2, "Qed.")
        ok = False
        details.append("Qed with open goals accepted")
    except OpenGoalsRemain:
        pass
    if d2.proof() is not before:
        ok = False
        details.append("Qed failure changed state")

    # discriminate on a non-clash equality
    d3 = exec_sentence(doc, "Theorem td : forall x y : nat, x = y -> True.")
    d3 = exec_sentence(d3, "intros x y H.")
    st_before = d3.proof()
    try:
        exec_sentence(d3, "discriminate H.")
        ok = False
        details.append("discriminate on variables accepted")
    except NotAConstructorClash:
        pass
    if d3.proof() is not st_before:
        ok = False
        details.append("discriminate failure changed state")

    # omega on a nonlinear goal
    d4 = exec_sentence(doc, "Require Import Omega.")
    d4 = exec_sentence(d4, "Theorem tn : forall x y : nat, x * y <= x.")
    d4 = exec_sentence(d4, "intros x y.")
    st_before = d4.proof()
    try:
        exec_sentence(d4, "omega.")
        ok = False
        details.append("omega on nonlinear goal accepted")
    except NonLinearTerm:
        pass
    if d4.proof() is not st_before:
        ok = False
        details.append("omega failure changed state")

    report("rejection-suite", ok, "; ".join(details))


# --- criterion: decision-procedure oracles --------------------------------------

def test_decision_procedure_oracles(env):
    t0 = time.time()

    # (a) ring vs exhaustive evaluation, 1000 identities
    from test_ring_dp import eval_expr, random_expr, commuted, to_term
    from hurry_prover.dp.ring import AtomTable, ring_normalize
    rng = random.Random(424242)
    ring_disagreements = 0
    names = ["x", "y", "z"]
    for _ in range(1000):
        n_vars = rng.randrange(1, 4)
        e1 = random_expr(rng, n_vars, 3)
        e2 = commuted(e1, rng) if rng.random() < 0.4 else random_expr(rng, n_vars, 3)
        table = AtomTable()
        says = (ring_normalize(to_term(env, e1, names[:n_vars]), table)
                == ring_normalize(to_term(env, e2, names[:n_vars]), table))
        truth = all(eval_expr(e1, v) == eval_expr(e2, v)
                    for v in itertools.product(range(4), repeat=n_vars))
        if says != truth:
            ring_disagreements += 1

    # (b) omega vs bounded enumeration, 200 systems, certificates verify
    from test_omega_dp import _brute_force_implied, _random_constraint
    from hurry_prover.dp.certificate import Certificate, Constraint, verify_certificate
    from hurry_prover.dp.omega import decide
    rng = random.Random(777)
    omega_disagreements = 0
    cert_failures = 0
    for _ in range(200):
        nvars = rng.randrange(1, 4)
        hyps = [_random_constraint(rng, nvars) for _ in range(rng.randrange(1, 4))]
        for v in range(nvars):
            hyps.append(Constraint.make({v: -1}, 8))
        lhs = _random_constraint(rng, nvars)
        if rng.random() < 0.5:
            negs = [lhs]
        else:
            negs = [lhs, Constraint.make({v: -c for v, c in lhs.coeffs},
                                         -lhs.const - 2)]
        branches, _ = decide(hyps, negs, nvars)
        truth = _brute_force_implied(
            hyps + [Constraint.make({v: 1}, 0) for v in range(nvars)],
            negs, nvars)
        if (branches is not None) != truth:
            omega_disagreements += 1
        if branches is not None:
            cert = Certificate(tuple(branches))
            if not verify_certificate([b[0] for b in branches], cert):
                cert_failures += 1

    # (c) intuition vs 2-world Kripke countermodels, 200 formulas
    from test_prop_dp import (_formula_to_text, _random_formula, prove_prop,
                              EX_5_6, PEIRCE)
    rng = random.Random(31337)
    kripke_violations = 0
    for _ in range(200):
        f = _random_formula(rng, 3, 3)
        text = f"forall A B C : Prop, {_formula_to_text(f, ['A', 'B', 'C'])}"
        if prove_prop(env, text) is not None and has_countermodel(f, 3):
            kripke_violations += 1
    six_proved = all(prove_prop(env, s) is not None for s in EX_5_6)
    peirce_fails = prove_prop(env, PEIRCE) is None

    elapsed = time.time() - t0
    ok = (ring_disagreements == 0 and omega_disagreements == 0
          and cert_failures == 0 and kripke_violations == 0
          and six_proved and peirce_fails and elapsed < 60.0)
    report("decision-procedure-oracles", ok,
           f"ring 1000/{ring_disagreements} dis, omega 200/{omega_disagreements} dis, "
           f"certs {cert_failures} bad, kripke {kripke_violations} violations, "
           f"5.6 {'all' if six_proved else 'MISSING'}, "
           f"peirce {'fails' if peirce_fails else 'PROVED?!'}, {elapsed:.1f}s")


# --- criterion: the summation identity ---------------------------------------

def test_summation_identity(env):
    code, transcript = run_file(str(CORPUS / "exercises.v"))
    ok = code == 0 and "sum_n_double is defined" in transcript
    env2 = load_source(env, (CORPUS / "exercises.v").read_text(), "exercises")
    d = env2.lookup("sum_n_double")
    expected = elaborate(env2, EMPTY_CTX,
                         parse_term_string("forall n:nat, 2 * sum_n n = n*n + n"))
    ok = ok and alpha_eq(d.typ, expected) and check_proof(env2, d.body, d.typ).ok
    report("summation-identity", ok)


def test_sum_powers_stretch(env):
    path = CORPUS / "sum_powers.v"
    if not path.exists():
        pytest.skip("stretch tier script not present")
    code, transcript = run_file(str(path))
    report("sum-powers-stretch", code == 0,
           transcript[-200:] if code != 0 else "")


# --- criterion: query golden tests ------------------------------------------------

def test_query_golden(arith_env):
    from hurry_prover.query import pattern_of_surface, search, search_pattern, search_rewrite
    ok = True
    details = []

    got = [n for n, _ in search(arith_env, "True")]
    if "I" not in got:
        ok, details = False, details + ["Search True missing I"]

    got = [n for n, _ in search(arith_env, "le")]
    if not {"le_n", "le_S"} <= set(got):
        ok, details = False, details + ["Search le missing le_n/le_S"]

    pat = pattern_of_surface(arith_env, parse_term_string("_ + _ <= _ + _"))
    got = [n for n, _ in search_pattern(arith_env, pat)]
    if not {"plus_le_compat_l", "plus_le_compat_r",
            "plus_le_compat"} <= set(got):
        ok, details = False, details + ["SearchPattern missing compat family"]
    if got != sorted(got, key=got.index):
        ok, details = False, details + ["order unstable"]

    pat = pattern_of_surface(arith_env, parse_term_string("_ + (_ - _)"))
    got2 = [n for n, _ in search_rewrite(arith_env, pat)]
    if "le_plus_minus" not in got2:
        ok, details = False, details + ["SearchRewrite missing le_plus_minus"]

    # determinism across runs
    again = [n for n, _ in search_pattern(arith_env, pattern_of_surface(
        arith_env, parse_term_string("_ + _ <= _ + _")))]
    if again != [n for n, _ in search_pattern(arith_env, pattern_of_surface(
            arith_env, parse_term_string("_ + _ <= _ + _")))]:
        ok, details = False, details + ["nondeterministic"]

    report("query-golden", ok, "; ".join(details))
