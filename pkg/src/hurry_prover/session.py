"""Sentence execution, the document model, and batch checking."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .errors import (LoadCycle, NoProofInProgress, NonStructuralRecursion,
                     OutOfRange, ProofInProgress, ProverError, SyntaxError_,
                     UnknownPackage)
from .kernel.env import (Definition, GlobalEnv, InductiveBlock, InductiveDecl,
                         LocalContext, EMPTY_CTX)
from .kernel.inductive import admit_inductive, guard_check
from .kernel.reduction import ALL_FLAGS, normalize, simpl, whnf
from .kernel.terms import (Fix, Ind, Prod, Sort, Term, app_spine, lift,
                           mk_lams, mk_prods, prod_spine)
from .kernel.typing import conv_leq, infer_type
from .engine import tactics as tactics_mod
from .engine.proofstate import ProofState, push_history, qed, start_proof, undo
from .surface import notation
from .surface.ast import Sentence
from .surface.elaborate import Elaborator, elaborate, elaborate_with_type
from .surface.lexer import split_sentences
from .surface.parser import parse_sentence, parse_sentence_tokens
from .surface.printer import print_term
from . import query as query_mod

STDLIB_DIR = Path(__file__).parent / "stdlib_src"


# --- goal rendering -----------------------------------------------------------

SEPARATOR = "  ============================"


def render_goal(env: GlobalEnv, ctx: LocalContext, concl: Term) -> str:
    lines = []
    names: List[str] = []
    for e in ctx.entries:
        lines.append(f"  {e.name} : {print_term(env, e.typ, names[::-1])}")
        names.append(e.name)
    lines.append(SEPARATOR)
    lines.append(f"   {print_term(env, concl, names[::-1])}")
    return "\n".join(lines)


def render_state(env: GlobalEnv, state: ProofState) -> str:
    n = len(state.goals)
    if n == 0:
        return "Proof completed."
    head = "1 subgoal" if n == 1 else f"{n} subgoals"
    first = state.goals[0]
    out = [head, "", render_goal(env, first.ctx, first.concl)]
    for i, g in enumerate(state.goals[1:], start=2):
        names = [e.name for e in g.ctx.entries]
        out.append("")
        out.append(f"subgoal {i} is:")
        out.append(f" {print_term(env, g.concl, names[::-1])}")
    return "\n".join(out)


# --- elaboration of declarations ------------------------------------------------


def _elab_binders(el: Elaborator, ctx: LocalContext, binders):
    """Flatten binder groups, elaborating their types; returns (ctx, list)."""
    out = []
    for names, ty_s in binders:
        for nm in names:
            if ty_s is None:
                dom = el.fresh_meta(len(ctx), f"the type of {nm}")
            else:
                dom = el.elab_type(ctx, ty_s)
            out.append((nm, dom))
            ctx = ctx.push(nm, dom)
    return ctx, out


def exec_definition(env: GlobalEnv, s: Sentence) -> GlobalEnv:
    el = Elaborator(env)
    ctx, flat = _elab_binders(el, EMPTY_CTX, s.binders)
    if s.rettype is not None:
        rty = el.elab_type(ctx, s.rettype)
        body = el.check(ctx, s.body, rty)
    else:
        body, rty = el.infer(ctx, s.body)
    body = el.zonk(body, len(ctx), strict=True)
    rty = el.zonk(rty, len(ctx), strict=True)
    flat = [(nm, el.zonk(d, i, strict=True)) for i, (nm, d) in enumerate(flat)]
    term = mk_lams(flat, body)
    typ = mk_prods(flat, rty)
    ty_check = infer_type(env, EMPTY_CTX, term)
    if not conv_leq(env, EMPTY_CTX, ty_check, typ):
        raise ProverError("definition body does not have the declared type")
    return env.add(Definition(s.name, typ, term, transparent=True))


def exec_fixpoint(env: GlobalEnv, s: Sentence) -> GlobalEnv:
    el = Elaborator(env)
    ctx, flat = _elab_binders(el, EMPTY_CTX, s.binders)
    rty = el.elab_type(ctx, s.rettype)
    flat = [(nm, el.zonk(d, i, strict=True)) for i, (nm, d) in enumerate(flat)]
    rty = el.zonk(rty, len(flat), strict=True)
    fixty = mk_prods(flat, rty)

    names = [nm for nm, _ in flat]
    if s.struct is not None:
        if s.struct not in names:
            raise SyntaxError_(f"no argument named {s.struct}")
        struct = names.index(s.struct) + 1
    else:
        struct = 0
        probe_ctx = EMPTY_CTX
        for i, (nm, dom) in enumerate(flat):
            head, _ = app_spine(whnf(env, probe_ctx, dom, ALL_FLAGS))
            probe_ctx = probe_ctx.push(nm, dom)
            if isinstance(head, Ind) and struct == 0:
                struct = i + 1
        if struct == 0:
            raise NonStructuralRecursion(
                f"cannot find a structural argument for {s.name}")

    # context inside the fix: the recursive binder comes first
    ctx2 = EMPTY_CTX.push(s.name, fixty)
    lifted = []
    for i, (nm, dom) in enumerate(flat):
        lifted.append((nm, lift(dom, 1, i)))
        ctx2 = ctx2.push(nm, lifted[-1][1])
    el2 = Elaborator(env)
    body = el2.check(ctx2, s.body, lift(rty, 1, len(flat)))
    body = el2.zonk(body, len(ctx2), strict=True)
    fix = Fix(s.name, struct, fixty, mk_lams(lifted, body))

    ty_check = infer_type(env, EMPTY_CTX, fix)
    if not conv_leq(env, EMPTY_CTX, ty_check, fixty):
        raise ProverError("fixpoint body does not have the declared type")
    if not guard_check(env, EMPTY_CTX, fix):
        raise NonStructuralRecursion(
            f"recursive call in {s.name} is not on a structural subterm")

    if s.where_notation is not None:
        text, bound = s.where_notation
        key = " ".join(p for p in text.split() if not p.isidentifier())
        if key != "^" or s.name != "nat_power":
            raise SyntaxError_(
                'only the builtin "n ^ m" notation can be bound with where')
    return env.add(Definition(s.name, fixty, fix, transparent=True))


def exec_inductive(env: GlobalEnv, s: Sentence) -> GlobalEnv:
    el = Elaborator(env)
    ctx, params = _elab_binders(el, EMPTY_CTX, s.params)
    params = [(nm, el.zonk(d, i, strict=True)) for i, (nm, d) in enumerate(params)]
    arity = elaborate(env, ctx, s.arity)

    idx_binders, core = prod_spine(arity)
    sortw = whnf(env, ctx, core, ALL_FLAGS)
    if not isinstance(sortw, Sort):
        raise ProverError(f"the arity of {s.name} must end in a sort")

    typ = mk_prods(params, arity)
    provisional = InductiveBlock(
        decl=InductiveDecl(s.name, tuple(params), arity, ()),
        typ=typ, ctor_types=(), n_indices=len(idx_binders), sort=sortw)
    env_prov = env.add(provisional)
    ctors = []
    for cname, cty_s in s.ctors:
        cty = elaborate(env_prov, ctx, cty_s)
        ctors.append((cname, cty))
    decl = InductiveDecl(s.name, tuple(params), arity, tuple(ctors))
    return admit_inductive(env, decl)


# --- packages -----------------------------------------------------------------

_package_cache: Dict[Tuple[int, str], GlobalEnv] = {}
_BASE_ENV: Optional[GlobalEnv] = None


def load_source(env: GlobalEnv, text: str, origin: str = "<string>") -> GlobalEnv:
    proof: Optional[ProofState] = None
    for start, end, toks in split_sentences(text):
        chunk = text[start:end].strip()
        try:
            sent = parse_sentence_tokens(toks, chunk)
            env, proof, _ = execute_sentence(env, proof, sent)
        except ProverError as e:
            raise ProverError(
                f"{origin}:{toks[0].line}: {e} (while executing {chunk!r})") from e
    if proof is not None:
        raise ProverError(f"{origin}: open proof at end of file")
    return env


def load_prelude(env: GlobalEnv) -> GlobalEnv:
    text = (STDLIB_DIR / "prelude.v").read_text()
    env = load_source(env, text, "prelude")
    return env.with_package("Prelude")


def base_env() -> GlobalEnv:
    global _BASE_ENV
    if _BASE_ENV is None:
        _BASE_ENV = load_prelude(GlobalEnv())
    return _BASE_ENV


_loading: List[str] = []


def require(env: GlobalEnv, pkg: str, load_paths=()) -> GlobalEnv:
    if pkg in env.packages:
        return env
    key = (id(env), pkg, tuple(load_paths))
    cached = _package_cache.get(key)
    if cached is not None:
        return cached
    if pkg in _loading:
        raise LoadCycle(f"package {pkg} is already being loaded")
    if pkg == "Omega":
        out = env.with_omega().with_package("Omega")
        _package_cache[key] = out
        return out
    path = None
    for d in list(load_paths):
        cand = Path(d) / f"{pkg}.v"
        if cand.exists():
            path = cand
            break
    if path is None:
        cand = STDLIB_DIR / f"{pkg}.v"
        if cand.exists():
            path = cand
    if path is None:
        raise UnknownPackage(f"unknown package {pkg}")
    _loading.append(pkg)
    try:
        out = load_source(env, path.read_text(), pkg).with_package(pkg)
    finally:
        _loading.pop()
    _package_cache[key] = out
    return out


# --- sentence execution ----------------------------------------------------------


def execute_sentence(env: GlobalEnv, proof: Optional[ProofState], s: Sentence,
                     load_paths=()) -> Tuple[GlobalEnv, Optional[ProofState], str]:
    kind = s.kind
    if kind == "check":
        t, ty = elaborate_with_type(env, EMPTY_CTX, s.term)
        ty = infer_type(env, EMPTY_CTX, t)
        return env, proof, f"{print_term(env, t)} : {print_term(env, ty)}"
    if kind == "eval":
        t, _ = elaborate_with_type(env, EMPTY_CTX, s.term)
        ty = infer_type(env, EMPTY_CTX, t)
        if s.eval_strategy == "simpl":
            v = simpl(env, EMPTY_CTX, t)
        else:
            v = normalize(env, t)
        return env, proof, f"= {print_term(env, v)} : {print_term(env, ty)}"
    if kind == "locate":
        rows = notation.locate(s.string)
        if not rows:
            return env, proof, ""
        lines = ["Notation            Scope"]
        lines += [f'"{n}" := {d}   : {sc}' for n, d, sc in rows]
        lines.append("                      (default interpretation)")
        return env, proof, "\n".join(lines)
    if kind == "search":
        rows = query_mod.search(env, s.name)
        return env, proof, "\n".join(
            f"{n} : {print_term(env, ty)}" for n, ty in rows)
    if kind in ("search_pattern", "search_rewrite"):
        pat = query_mod.pattern_of_surface(env, s.term)
        fn = (query_mod.search_pattern if kind == "search_pattern"
              else query_mod.search_rewrite)
        rows = fn(env, pat)
        return env, proof, "\n".join(
            f"{n} : {print_term(env, ty)}" for n, ty in rows)
    if kind == "require":
        if proof is not None:
            raise ProofInProgress("cannot Require during a proof")
        for pkg in s.names:
            env = require(env, pkg, load_paths)
        return env, proof, ""
    if kind == "definition":
        if proof is not None:
            raise ProofInProgress("cannot define during a proof")
        return exec_definition(env, s), proof, ""
    if kind == "fixpoint":
        if proof is not None:
            raise ProofInProgress("cannot define during a proof")
        return exec_fixpoint(env, s), proof, ""
    if kind == "inductive":
        if proof is not None:
            raise ProofInProgress("cannot define during a proof")
        return exec_inductive(env, s), proof, ""
    if kind == "theorem":
        if proof is not None:
            raise ProofInProgress("a proof is already in progress")
        stmt = elaborate(env, EMPTY_CTX, s.term)
        state = start_proof(env, s.name, stmt)
        return env, state, render_state(env, state)
    if kind == "proof":
        if proof is None:
            raise NoProofInProgress("no proof in progress")
        return env, proof, ""
    if kind == "tactics":
        if proof is None:
            raise NoProofInProgress("no proof in progress")
        state = tactics_mod.apply_tactic_sentence(env, proof, s.tactics)
        return env, state, render_state(env, state)
    if kind == "qed":
        if proof is None:
            raise NoProofInProgress("no proof in progress")
        env2, report = qed(env, proof)
        out = f"{report.name} is defined"
        if report.oracles:
            out += f"\n(uses oracles: {', '.join(report.oracles)})"
        return env2, None, out
    if kind == "undo":
        if proof is None:
            raise NoProofInProgress("no proof in progress")
        return env, undo(proof), ""
    raise ProverError(f"unhandled sentence kind {kind}")


# --- documents -----------------------------------------------------------------


@dataclass(frozen=True)
class Executed:
    text: str
    span: Tuple[int, int]
    env: GlobalEnv
    proof: Optional[ProofState]
    output: str


@dataclass(frozen=True)
class Document:
    base: GlobalEnv
    executed: Tuple[Executed, ...] = ()
    load_paths: Tuple[str, ...] = ()

    def env(self) -> GlobalEnv:
        return self.executed[-1].env if self.executed else self.base

    def proof(self) -> Optional[ProofState]:
        return self.executed[-1].proof if self.executed else None


def exec_sentence(doc: Document, text: str, span=(0, 0)) -> Document:
    s = parse_sentence(text)
    env, proof, output = execute_sentence(doc.env(), doc.proof(), s,
                                          doc.load_paths)
    return replace(doc, executed=doc.executed
                   + (Executed(text, span, env, proof, output),))


def back(doc: Document, n: int) -> Document:
    if not 0 <= n <= len(doc.executed):
        raise OutOfRange(f"cannot go back to sentence {n}")
    return replace(doc, executed=doc.executed[:n])


def run_file(path: str, load_paths=(), with_prelude: bool = True):
    """Execute a vernacular file; returns (exit code, transcript)."""
    text = Path(path).read_text()
    env = base_env() if with_prelude else GlobalEnv()
    proof: Optional[ProofState] = None
    transcript: List[str] = []
    try:
        spans = split_sentences(text)
    except SyntaxError_ as e:
        return 1, f"{path}:{e.line}:{e.col}: {e}\n"
    for start, end, toks in spans:
        chunk = text[start:end]
        transcript.append(chunk.strip())
        try:
            sent = parse_sentence_tokens(toks, chunk)
            env, proof, output = execute_sentence(env, proof, sent, load_paths)
        except ProverError as e:
            line = getattr(e, "line", toks[0].line)
            col = getattr(e, "col", toks[0].col)
            transcript.append(f"Error at {path}:{line}:{col}: {e}")
            return 1, "\n".join(transcript) + "\n"
        if output:
            transcript.append(output)
    if proof is not None:
        transcript.append(f"Error: open proof {proof.name} at end of file")
        return 1, "\n".join(transcript) + "\n"
    return 0, "\n".join(transcript) + "\n"
