"""Recursive-descent / precedence-climbing parser for the vernacular."""

from __future__ import annotations

from typing import List, Optional, Tuple

from ..errors import SyntaxError_
from .ast import (Binder, IntroPattern, Pattern, Sentence, STerm, Tactic, TApp,
                  TArrow, TBin, TExists, TForall, TFun, THole, TLet, TMatch,
                  TNot, TNum, TPair, TVar)
from .lexer import Token, tokenize

# Operator levels: an entry at level L accepts a left operand up to
# ``left`` and a right operand up to ``right``; lower levels bind tighter.
INFIX = {
    "->": (99, 98, 200),
    "\\/": (85, 84, 85),
    "/\\": (80, 79, 80),
    "=": (70, 69, 69),
    "<=": (70, 69, 69),
    "<": (70, 69, 69),
    "::": (60, 59, 60),
    "++": (60, 59, 60),
    "+": (50, 50, 49),
    "-": (50, 50, 49),
    "*": (40, 40, 39),
    "^": (30, 29, 30),
}

TERM_KEYWORDS = {"forall", "fun", "exists", "let", "match", "in", "with",
                 "end", "as", "struct", "where", "Prop", "Set", "Type"}


class Parser:
    def __init__(self, tokens: List[Token]):
        self.toks = tokens
        self.pos = 0

    # --- token plumbing ---------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def fail(self, msg: str):
        t = self.peek()
        raise SyntaxError_(f"{msg} (found {t.text!r})", t.line, t.col)

    def expect_sym(self, s: str) -> Token:
        t = self.peek()
        if not t.is_sym(s):
            self.fail(f"expected {s!r}")
        return self.next()

    def expect_kw(self, s: str) -> Token:
        t = self.peek()
        if not t.is_kw(s):
            self.fail(f"expected keyword {s!r}")
        return self.next()

    def expect_ident(self) -> str:
        t = self.peek()
        if t.kind != "ident":
            self.fail("expected identifier")
        return self.next().text

    def try_sym(self, s: str) -> bool:
        if self.peek().is_sym(s):
            self.next()
            return True
        return False

    def try_kw(self, s: str) -> bool:
        if self.peek().is_kw(s):
            self.next()
            return True
        return False

    # --- terms --------------------------------------------------------------

    def parse_term(self, max_level: int = 200) -> STerm:
        lhs = self.parse_operand(max_level)
        while True:
            t = self.peek()
            if t.kind != "sym" or t.text not in INFIX:
                return lhs
            level, _lmax, rmax = INFIX[t.text]
            if level > max_level:
                return lhs
            self.next()
            rhs = self.parse_term(rmax)
            op = t.text
            if op == "->":
                lhs = TArrow(lhs, rhs)
            else:
                lhs = TBin(op, lhs, rhs)

    def parse_operand(self, max_level: int) -> STerm:
        t = self.peek()
        if t.is_sym("~"):
            self.next()
            return TNot(self.parse_term(75))
        if t.is_kw("forall"):
            self.next()
            binders = self.parse_binders(stop=",")
            self.expect_sym(",")
            return TForall(binders, self.parse_term(200))
        if t.is_kw("fun"):
            self.next()
            binders = self.parse_binders(stop="=>")
            self.expect_sym("=>")
            return TFun(binders, self.parse_term(200))
        if t.is_kw("exists"):
            self.next()
            name = self.expect_ident()
            typ = None
            if self.try_sym(":"):
                typ = self.parse_term(200)
            self.expect_sym(",")
            return TExists(name, typ, self.parse_term(200))
        if t.is_kw("let"):
            self.next()
            name = self.expect_ident()
            typ = None
            if self.try_sym(":"):
                typ = self.parse_term(100)
            self.expect_sym(":=")
            value = self.parse_term(200)
            self.expect_kw("in")
            return TLet(name, typ, value, self.parse_term(200))
        if t.is_kw("match"):
            return self.parse_match()
        # application spine of atoms
        head = self.parse_atom()
        args = []
        while self.starts_atom():
            args.append(self.parse_atom())
        return TApp(head, tuple(args)) if args else head

    def starts_atom(self) -> bool:
        t = self.peek()
        if t.kind in ("ident", "num"):
            return not (t.kind == "ident" and t.text in TERM_KEYWORDS
                        and t.text not in ("Prop", "Set", "Type"))
        return t.is_sym("(") or t.is_sym("_")

    def parse_atom(self) -> STerm:
        t = self.peek()
        if t.kind == "num":
            self.next()
            return TNum(int(t.text))
        if t.kind == "ident":
            if t.text in TERM_KEYWORDS and t.text not in ("Prop", "Set", "Type"):
                self.fail("unexpected keyword in term")
            self.next()
            return TVar(t.text)
        if t.is_sym("_"):
            self.next()
            return THole()
        if t.is_sym("("):
            self.next()
            inner = self.parse_term(200)
            if self.try_sym(","):
                second = self.parse_term(200)
                self.expect_sym(")")
                return TPair(inner, second)
            self.expect_sym(")")
            return inner
        self.fail("expected a term")

    def parse_match(self) -> STerm:
        self.expect_kw("match")
        scrut = self.parse_term(200)
        self.expect_kw("with")
        branches = []
        self.try_sym("|")
        while not self.peek().is_kw("end"):
            pat = self.parse_pattern()
            self.expect_sym("=>")
            rhs = self.parse_term(200)
            branches.append((pat, rhs))
            if not self.try_sym("|"):
                break
        self.expect_kw("end")
        return TMatch(scrut, tuple(branches))

    def parse_pattern(self) -> Pattern:
        t = self.peek()
        if t.is_sym("_"):
            self.next()
            return Pattern(None)
        if t.kind == "num":
            self.next()
            return Pattern(None, (), int(t.text))
        if t.is_sym("("):
            self.next()
            p = self.parse_pattern()
            self.expect_sym(")")
            return p
        name = self.expect_ident()
        args = []
        while True:
            t = self.peek()
            if t.is_sym("_"):
                self.next()
                args.append(Pattern(None))
            elif t.kind == "num":
                self.next()
                args.append(Pattern(None, (), int(t.text)))
            elif t.kind == "ident" and t.text not in TERM_KEYWORDS:
                self.next()
                args.append(Pattern(t.text))
            elif t.is_sym("("):
                self.next()
                args.append(self.parse_pattern())
                self.expect_sym(")")
            else:
                break
        return Pattern(name, tuple(args))

    # --- binders ------------------------------------------------------------

    def parse_binders(self, stop: str) -> Tuple[Binder, ...]:
        groups: List[Binder] = []
        while True:
            t = self.peek()
            if t.is_sym(stop) or (stop == "," and t.is_sym(",")):
                break
            if t.is_sym("("):
                self.next()
                names = [self.expect_ident()]
                while self.peek().kind == "ident":
                    names.append(self.expect_ident())
                self.expect_sym(":")
                ty = self.parse_term(200)
                self.expect_sym(")")
                groups.append((tuple(names), ty))
            elif t.kind == "ident" and t.text not in TERM_KEYWORDS:
                names = [self.expect_ident()]
                while self.peek().kind == "ident" and self.peek().text not in TERM_KEYWORDS:
                    names.append(self.expect_ident())
                if self.try_sym(":"):
                    ty = self.parse_term(200)
                    groups.append((tuple(names), ty))
                else:
                    groups.append((tuple(names), None))
            else:
                break
        if not groups:
            self.fail("expected at least one binder")
        return tuple(groups)

    # --- sentences ------------------------------------------------------------

    def parse_sentence(self, text: str = "") -> Sentence:
        t = self.peek()
        line, col = t.line, t.col

        def done(**kw) -> Sentence:
            self.expect_sym(".")
            return Sentence(line=line, col=col, text=text, **kw)

        if t.is_kw("Check"):
            self.next()
            return done(kind="check", term=self.parse_term(200))
        if t.is_kw("Eval"):
            self.next()
            strat = self.expect_ident()
            if strat not in ("compute", "simpl"):
                self.fail("unsupported Eval strategy")
            self.expect_kw("in")
            return done(kind="eval", term=self.parse_term(200), eval_strategy=strat)
        if t.is_kw("Definition"):
            self.next()
            name = self.expect_ident()
            binders: Tuple[Binder, ...] = ()
            if not (self.peek().is_sym(":") or self.peek().is_sym(":=")):
                binders = self.parse_binders(stop=":=")
            rettype = None
            if self.try_sym(":"):
                rettype = self.parse_term(200)
            self.expect_sym(":=")
            return done(kind="definition", name=name, binders=binders,
                        rettype=rettype, body=self.parse_term(200))
        if t.is_kw("Fixpoint"):
            self.next()
            name = self.expect_ident()
            binders = self.parse_binders(stop="{")
            struct = None
            if self.try_sym("{"):
                self.expect_kw("struct")
                struct = self.expect_ident()
                self.expect_sym("}")
            self.expect_sym(":")
            rettype = self.parse_term(200)
            self.expect_sym(":=")
            body = self.parse_term(200)
            where = None
            if self.try_kw("where"):
                s = self.peek()
                if s.kind != "string":
                    self.fail("expected a notation string after where")
                self.next()
                self.expect_sym(":=")
                self.expect_sym("(")
                wterm = self.parse_term(200)
                self.expect_sym(")")
                where = (s.text, wterm)
            return done(kind="fixpoint", name=name, binders=binders,
                        struct=struct, rettype=rettype, body=body,
                        where_notation=where)
        if t.is_kw("Inductive"):
            self.next()
            name = self.expect_ident()
            params: Tuple[Binder, ...] = ()
            if self.peek().is_sym("("):
                params = self.parse_binders(stop=":")
            self.expect_sym(":")
            arity = self.parse_term(200)
            self.expect_sym(":=")
            ctors = []
            if not self.peek().is_sym("."):
                self.try_sym("|")
                while True:
                    cname = self.expect_ident()
                    self.expect_sym(":")
                    ctype = self.parse_term(200)
                    ctors.append((cname, ctype))
                    if not self.try_sym("|"):
                        break
            return done(kind="inductive", name=name, params=params,
                        arity=arity, ctors=tuple(ctors))
        if t.is_kw("Theorem") or t.is_kw("Lemma"):
            kw = self.next().text
            name = self.expect_ident()
            self.expect_sym(":")
            return done(kind="theorem", keyword=kw, name=name,
                        term=self.parse_term(200))
        if t.is_kw("Proof"):
            self.next()
            return done(kind="proof")
        if t.is_kw("Qed"):
            self.next()
            return done(kind="qed")
        if t.is_kw("Undo"):
            self.next()
            return done(kind="undo")
        if t.is_kw("Require"):
            self.next()
            self.expect_kw("Import")
            names = [self.expect_ident()]
            while self.peek().kind == "ident":
                names.append(self.expect_ident())
            return done(kind="require", names=tuple(names))
        if t.is_kw("Search"):
            self.next()
            return done(kind="search", name=self.expect_ident())
        if t.is_kw("SearchPattern"):
            self.next()
            return done(kind="search_pattern", term=self.parse_term(200))
        if t.is_kw("SearchRewrite"):
            self.next()
            return done(kind="search_rewrite", term=self.parse_term(200))
        if t.is_kw("Locate"):
            self.next()
            s = self.peek()
            if s.kind != "string":
                self.fail("Locate expects a notation string")
            self.next()
            return done(kind="locate", string=s.text)
        # otherwise: a tactic sentence
        tactics = [self.parse_tactic()]
        while self.try_sym(";"):
            tactics.append(self.parse_tactic())
        return done(kind="tactics", tactics=tuple(tactics))

    # --- tactics ------------------------------------------------------------

    def parse_tactic(self) -> Tactic:
        t = self.peek()
        if t.kind != "ident":
            self.fail("expected a tactic")
        name = self.next().text

        if name == "intro":
            nm = self.expect_ident() if self.peek().kind == "ident" else None
            return Tactic("intro", names=(nm,) if nm else ())
        if name == "intros":
            names = []
            while self.peek().kind == "ident":
                names.append(self.expect_ident())
            return Tactic("intros", names=tuple(names))
        if name in ("exact", "apply", "elim", "case"):
            return Tactic(name, term=self.parse_term(200))
        if name == "exists":
            return Tactic("exists_tac", term=self.parse_term(200))
        if name in ("assumption", "split", "left", "right", "reflexivity",
                    "simpl", "ring", "omega", "auto", "intuition", "subst"):
            return Tactic(name)
        if name == "repeat":
            return Tactic("repeat", sub=self.parse_tactic())
        if name == "clear":
            names = []
            while self.peek().kind == "ident":
                names.append(self.expect_ident())
            return Tactic("clear", names=tuple(names))
        if name == "destruct":
            term = self.parse_term(200)
            pat = None
            if self.try_kw("as"):
                pat = self.parse_intro_pattern()
            return Tactic("destruct", term=term, pattern=pat)
        if name == "rewrite":
            reverse = self.try_sym("<-")
            return Tactic("rewrite", term=self.parse_term(200), reverse=reverse)
        if name == "assert":
            self.expect_sym("(")
            aname = None
            stmt = None
            if self.peek().kind == "ident" and self.peek(1).is_sym(":"):
                aname = self.expect_ident()
                self.expect_sym(":")
                stmt = self.parse_term(200)
            else:
                stmt = self.parse_term(200)
            self.expect_sym(")")
            return Tactic("assert", assert_name=aname, assert_stmt=stmt)
        if name in ("discriminate", "injection", "inversion"):
            nm = self.expect_ident() if self.peek().kind == "ident" else None
            return Tactic(name, names=(nm,) if nm else ())
        self.fail(f"unknown tactic {name!r}")

    def parse_intro_pattern(self) -> IntroPattern:
        self.expect_sym("[")
        alts: List[Tuple[str, ...]] = []
        cur: List[str] = []
        while True:
            t = self.peek()
            if t.is_sym("]"):
                self.next()
                break
            if t.is_sym("|"):
                self.next()
                alts.append(tuple(cur))
                cur = []
                continue
            if t.is_sym("_"):
                self.next()
                cur.append("_")
                continue
            cur.append(self.expect_ident())
        alts.append(tuple(cur))
        return IntroPattern(tuple(alts))


def parse_sentence_tokens(tokens: List[Token], text: str = "") -> Sentence:
    p = Parser(tokens)
    s = p.parse_sentence(text)
    if not p.peek().kind == "eof":
        p.fail("trailing input after sentence")
    return s


def parse_sentence(text: str) -> Sentence:
    return parse_sentence_tokens(tokenize(text), text)


def parse_term_string(text: str) -> STerm:
    p = Parser(tokenize(text))
    t = p.parse_term(200)
    if not p.peek().kind == "eof":
        p.fail("trailing input after term")
    return t
