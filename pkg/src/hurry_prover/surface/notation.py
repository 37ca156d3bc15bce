"""The fixed notation table: operator strings, precedences, targets, scopes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple


@dataclass(frozen=True, slots=True)
class Notation:
    key: str              # operator as it appears between holes, e.g. "<="
    display: str          # Locate rendering, e.g. '"x <= y" := le x y'
    target: str           # constant / inductive the notation elaborates to
    scope: str
    level: int
    left_max: int         # max level allowed for the left operand
    right_max: int
    argc: int             # arity of the fully applied target when folded
    visible: Tuple[int, ...]  # argument positions shown by the notation


NOTATIONS: List[Notation] = [
    Notation("->", '"x -> y" := forall _ : x, y', "", "type_scope", 99, 98, 200, 2, (0, 1)),
    Notation("/\\", '"x /\\ y" := and x y', "and", "type_scope", 80, 79, 80, 2, (0, 1)),
    Notation("\\/", '"x \\/ y" := or x y', "or", "type_scope", 85, 84, 85, 2, (0, 1)),
    Notation("~", '"~ x" := not x', "not", "type_scope", 75, -1, 75, 1, (0,)),
    Notation("=", '"x = y" := eq x y', "eq", "type_scope", 70, 69, 69, 3, (1, 2)),
    Notation("<=", '"x <= y" := le x y', "le", "nat_scope", 70, 69, 69, 2, (0, 1)),
    Notation("<", '"x < y" := lt x y', "lt", "nat_scope", 70, 69, 69, 2, (0, 1)),
    Notation("+", '"x + y" := plus x y', "plus", "nat_scope", 50, 50, 49, 2, (0, 1)),
    Notation("-", '"x - y" := minus x y', "minus", "nat_scope", 50, 50, 49, 2, (0, 1)),
    Notation("*", '"x * y" := mult x y', "mult", "nat_scope", 40, 40, 39, 2, (0, 1)),
    Notation("*", '"x * y" := prod x y', "prod", "type_scope", 40, 40, 39, 2, (0, 1)),
    Notation("( , )", '"( x , y )" := pair x y', "pair", "core_scope", 0, 200, 200, 4, (2, 3)),
    Notation("::", '"x :: y" := cons x y', "cons", "list_scope", 60, 59, 60, 3, (1, 2)),
    Notation("++", '"x ++ y" := app x y', "app", "list_scope", 60, 59, 60, 3, (1, 2)),
    Notation("^", '"n ^ m" := nat_power n m', "nat_power", "nat_scope", 30, 29, 30, 2, (0, 1)),
]

BY_TARGET: Dict[str, Notation] = {}
for _n in NOTATIONS:
    BY_TARGET.setdefault(_n.target, _n)

# constants whose leading type arguments are implicit in surface syntax
IMPLICIT_ARGS: Dict[str, int] = {
    "cons": 1,
    "nil": 1,
    "app": 1,
}


def locate(notation: str) -> List[Tuple[str, str, str]]:
    """All table entries whose operator matches the query string.

    The query uses '_' for holes, e.g. '"_ <= _"'.
    """
    key = " ".join(p for p in notation.split() if p != "_")
    out = []
    for n in NOTATIONS:
        if not n.target:
            continue
        if n.key == key or n.key.replace(" ", "") == key.replace(" ", ""):
            out.append((n.display.split(" := ")[0].strip('"'),
                        n.display.split(" := ")[1], n.scope))
    return out
