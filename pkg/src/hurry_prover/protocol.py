"""Newline-delimited JSON session protocol.

One handler owns one document; requests are processed strictly in order.
Ops: exec (payload = one sentence), back (payload = sentence count), goals,
env, about (payload = identifier).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List, Optional

from .errors import ProverError, SyntaxError_
from .kernel.env import Axiom, Definition, InductiveBlock, OracleLemma
from .session import Document, back, base_env, exec_sentence, render_state
from .surface.printer import print_term


def goals_payload(env, state) -> List[dict]:
    if state is None:
        return []
    out = []
    for g in state.goals:
        names: List[str] = []
        hyps = []
        for e in g.ctx.entries:
            hyps.append({"name": e.name,
                         "type": print_term(env, e.typ, names[::-1])})
            names.append(e.name)
        out.append({"hyps": hyps,
                    "concl": print_term(env, g.concl, names[::-1])})
    return out


@dataclass
class ProtocolSession:
    doc: Document = field(default_factory=lambda: Document(base=base_env()))

    def handle(self, line: str) -> str:
        try:
            req = json.loads(line)
            rid = req.get("id", -1)
            op = req.get("op")
            payload = req.get("payload", "")
        except (json.JSONDecodeError, AttributeError):
            return json.dumps({"id": -1, "status": "error", "goals": [],
                               "output": "",
                               "error": {"line": 0, "col": 0,
                                         "message": "malformed request"}})
        if not isinstance(rid, int) or not isinstance(op, str):
            return json.dumps({"id": -1, "status": "error", "goals": [],
                               "output": "",
                               "error": {"line": 0, "col": 0,
                                         "message": "malformed request"}})
        try:
            return json.dumps(self._dispatch(rid, op, str(payload)))
        except ProverError as e:
            line_no = getattr(e, "line", 0)
            col = getattr(e, "col", 0)
            return json.dumps({"id": rid, "status": "error",
                               "goals": goals_payload(self.doc.env(), self.doc.proof()),
                               "output": "",
                               "error": {"line": line_no, "col": col,
                                         "message": str(e)}})

    def _dispatch(self, rid: int, op: str, payload: str) -> dict:
        ok = {"id": rid, "status": "ok", "goals": [], "output": "", "error": None}
        if op == "exec":
            self.doc = exec_sentence(self.doc, payload)
            last = self.doc.executed[-1]
            ok["output"] = last.output
            ok["goals"] = goals_payload(last.env, last.proof)
            return ok
        if op == "back":
            n = int(payload) if payload.strip() else 0
            self.doc = back(self.doc, n)
            ok["goals"] = goals_payload(self.doc.env(), self.doc.proof())
            return ok
        if op == "goals":
            ok["goals"] = goals_payload(self.doc.env(), self.doc.proof())
            proof = self.doc.proof()
            if proof is not None:
                ok["output"] = render_state(self.doc.env(), proof)
            return ok
        if op == "env":
            names = []
            for d in self.doc.env().decls:
                if isinstance(d, InductiveBlock):
                    names.append(d.decl.name)
                    names.extend(c for c, _ in d.decl.constructors)
                else:
                    names.append(d.name)
            ok["output"] = "\n".join(names)
            return ok
        if op == "about":
            env = self.doc.env()
            name = payload.strip()
            c = env.constructor_of(name)
            if c is not None:
                block = env.inductive(c[0])
                ty = block.ctor_types[c[1] - 1]
                ok["output"] = f"{name} : {print_term(env, ty)}"
                return ok
            d = env.by_name.get(name)
            if d is None:
                raise ProverError(f"unknown identifier {name}")
            if isinstance(d, InductiveBlock):
                ok["output"] = f"{name} : {print_term(env, d.typ)}"
            elif isinstance(d, OracleLemma):
                ok["output"] = (f"{name} : {print_term(env, d.typ)}\n"
                                f"(oracle lemma via {d.procedure})\n{d.certificate}")
            else:
                ok["output"] = f"{name} : {print_term(env, d.typ)}"
            return ok
        raise ProverError(f"unknown protocol op {op!r}")


def serve_stdio():  # pragma: no cover - exercised manually
    """Speak the protocol over stdin/stdout, one JSON record per line."""
    import sys
    session = ProtocolSession()
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        sys.stdout.write(session.handle(line) + "\n")
        sys.stdout.flush()
