"""Kernel-independent refutation certificates for linear arithmetic.

A system is a list of constraints ``sum(coeffs[v] * x_v) + const >= 0``.
A refutation replays nonnegative combinations and integer tightenings
(coefficient gcd division with floor rounding) until it derives a plainly
false constant constraint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

Coeffs = Dict[int, int]


@dataclass(frozen=True)
class Constraint:
    coeffs: Tuple[Tuple[int, int], ...]    # sorted (var, coeff), coeff != 0
    const: int

    @staticmethod
    def make(coeffs: Coeffs, const: int) -> "Constraint":
        items = tuple(sorted((v, c) for v, c in coeffs.items() if c != 0))
        return Constraint(items, const)

    def as_dict(self) -> Coeffs:
        return dict(self.coeffs)

    def is_contradiction(self) -> bool:
        return not self.coeffs and self.const < 0

    def sexp(self) -> str:
        parts = " ".join(f"({v} {c})" for v, c in self.coeffs)
        return f"(ge0 ({parts}) {self.const})"


Step = Tuple  # ("combine", ((idx, num, den), ...)) | ("tighten", idx)


@dataclass(frozen=True)
class Certificate:
    """One refutation per disjunctive branch of the negated goal."""
    branches: Tuple[Tuple[Tuple[Constraint, ...], Tuple[Step, ...]], ...]

    def sexp(self) -> str:
        out = []
        for constraints, steps in self.branches:
            cs = " ".join(c.sexp() for c in constraints)
            ss = []
            for s in steps:
                if s[0] == "combine":
                    ms = " ".join(f"({i} {n} {d})" for i, n, d in s[1])
                    ss.append(f"(combine {ms})")
                else:
                    ss.append(f"(tighten {s[1]})")
            out.append(f"(branch (system {cs}) (steps {' '.join(ss)}))")
        return f"(omega-certificate {' '.join(out)})"


def _combine(rows: List[Optional[Constraint]], mults) -> Optional[Constraint]:
    coeffs: Dict[int, Fraction] = {}
    const = Fraction(0)
    for idx, num, den in mults:
        if den == 0 or Fraction(num, den) < 0:
            return None
        if idx < 0 or idx >= len(rows) or rows[idx] is None:
            return None
        m = Fraction(num, den)
        row = rows[idx]
        for v, c in row.coeffs:
            coeffs[v] = coeffs.get(v, Fraction(0)) + m * c
        const += m * row.const
    # certificates stay integral: scale by the common denominator
    denoms = [f.denominator for f in coeffs.values()] + [const.denominator]
    scale = 1
    for d in denoms:
        scale = scale * d // gcd(scale, d)
    out = {v: int(c * scale) for v, c in coeffs.items() if c != 0}
    return Constraint.make(out, int(const * scale))


def _tighten(c: Constraint) -> Constraint:
    if not c.coeffs:
        return c
    g = 0
    for _, coef in c.coeffs:
        g = gcd(g, abs(coef))
    if g <= 1:
        return c
    new_coeffs = {v: coef // g for v, coef in c.coeffs}
    # sum(c_i x_i) >= -const  =>  sum(c_i/g x_i) >= ceil(-const/g)
    # i.e. new const = floor(const/g)
    new_const = c.const // g
    return Constraint.make(new_coeffs, new_const)


def verify_branch(constraints: Sequence[Constraint], steps: Sequence[Step]) -> bool:
    rows: List[Optional[Constraint]] = list(constraints)
    derived_contradiction = False
    for s in steps:
        if not s:
            return False
        if s[0] == "combine":
            c = _combine(rows, s[1])
            if c is None:
                return False
            rows.append(c)
        elif s[0] == "tighten":
            idx = s[1]
            if idx < 0 or idx >= len(rows) or rows[idx] is None:
                return False
            rows.append(_tighten(rows[idx]))
        else:
            return False
        if rows[-1].is_contradiction():
            derived_contradiction = True
    return derived_contradiction


def verify_certificate(systems: Sequence[Sequence[Constraint]],
                       cert: Certificate) -> bool:
    """Replay every branch; True only if each derives a contradiction over
    exactly the recorded constraints."""
    if len(systems) != len(cert.branches):
        return False
    for sys_constraints, (recorded, steps) in zip(systems, cert.branches):
        if tuple(sys_constraints) != tuple(recorded):
            return False
        if not verify_branch(recorded, steps):
            return False
    return True
