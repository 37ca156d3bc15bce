"""Tokenizer for the vernacular surface syntax."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

from ..errors import SyntaxError_

SYMBOLS = [
    "(*", ":=", "::", "++", "->", "<-", "<=", "=>", "/\\", "\\/",
    "(", ")", "{", "}", "[", "]", "|", ",", ";", ":", ".", "=", "<",
    "+", "-", "*", "^", "~", "_",
]

IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
IDENT_CHARS = IDENT_START | set("0123456789'")


@dataclass(frozen=True, slots=True)
class Token:
    kind: str          # "ident" | "num" | "string" | "sym" | "eof"
    text: str
    line: int
    col: int

    def is_sym(self, s: str) -> bool:
        return self.kind == "sym" and self.text == s

    def is_kw(self, s: str) -> bool:
        return self.kind == "ident" and self.text == s


def tokenize(src: str) -> List[Token]:
    toks: List[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(src)

    def bump(k: int = 1):
        nonlocal i, line, col
        for _ in range(k):
            if i < n and src[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = src[i]
        if c in " \t\r\n":
            bump()
            continue
        if src.startswith("(*", i):
            start_line, start_col = line, col
            depth = 1
            bump(2)
            while i < n and depth:
                if src.startswith("(*", i):
                    depth += 1
                    bump(2)
                elif src.startswith("*)", i):
                    depth -= 1
                    bump(2)
                else:
                    bump()
            if depth:
                raise SyntaxError_("unterminated comment", start_line, start_col)
            continue
        if c == '"':
            start_line, start_col = line, col
            bump()
            j = i
            while i < n and src[i] != '"':
                bump()
            if i >= n:
                raise SyntaxError_("unterminated string", start_line, start_col)
            toks.append(Token("string", src[j:i], start_line, start_col))
            bump()
            continue
        if c.isdigit():
            start_line, start_col = line, col
            j = i
            while i < n and src[i].isdigit():
                bump()
            toks.append(Token("num", src[j:i], start_line, start_col))
            continue
        if c in IDENT_START:
            start_line, start_col = line, col
            j = i
            while i < n and src[i] in IDENT_CHARS:
                bump()
            text = src[j:i]
            if text == "_":
                toks.append(Token("sym", "_", start_line, start_col))
            else:
                toks.append(Token("ident", text, start_line, start_col))
            continue
        for s in SYMBOLS:
            if src.startswith(s, i):
                toks.append(Token("sym", s, line, col))
                bump(len(s))
                break
        else:
            raise SyntaxError_(f"unexpected character {c!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


def split_sentences(src: str):
    """Spans (start, end, tokens) of '.'-terminated sentences."""
    toks = tokenize(src)
    out = []
    cur: List[Token] = []
    # Track raw offsets by re-scanning lines: tokens carry (line, col).
    lines = src.split("\n")
    line_offset = [0]
    for ln in lines[:-1]:
        line_offset.append(line_offset[-1] + len(ln) + 1)

    def offset(tok: Token) -> int:
        return line_offset[tok.line - 1] + tok.col - 1

    for tok in toks:
        if tok.kind == "eof":
            break
        cur.append(tok)
        if tok.is_sym("."):
            start = offset(cur[0])
            end = offset(tok) + 1
            out.append((start, end, cur + [Token("eof", "", tok.line, tok.col)]))
            cur = []
    if cur:
        raise SyntaxError_("sentence is not terminated by '.'",
                           cur[0].line, cur[0].col)
    return out
