"""Command line driver: batch checker, REPL, protocol mode, and the server."""

from __future__ import annotations

import argparse
import os
import sys

from .errors import ProverError
from .session import (Document, back, base_env, exec_sentence, run_file,
                      render_state)
from .kernel.env import GlobalEnv


def _load_paths(args) -> list:
    paths = list(args.load_path or [])
    env_paths = os.environ.get("HURRY_LOAD_PATH", "")
    paths.extend(p for p in env_paths.split(":") if p)
    return paths


def cmd_check(args) -> int:
    code, transcript = run_file(args.file, load_paths=_load_paths(args),
                                with_prelude=not args.no_prelude)
    sys.stdout.write(transcript)
    return code


def cmd_repl(args) -> int:
    env = base_env() if not args.no_prelude else GlobalEnv()
    doc = Document(base=env, load_paths=tuple(_load_paths(args)))
    print("hurry-prover repl; sentences end with '.', Ctrl-D quits")
    buffer = ""
    while True:
        try:
            prompt = "> " if not buffer else "  "
            line = input(prompt)
        except EOFError:
            print()
            return 0
        except KeyboardInterrupt:
            print()
            buffer = ""
            continue
        buffer += line + "\n"
        if "." not in line:
            continue
        text = buffer.strip()
        buffer = ""
        if text in ("Back.", "Undo."):
            try:
                doc = back(doc, max(0, len(doc.executed) - 1))
                print("(stepped back)")
            except ProverError as e:
                print(f"Error: {e}")
            continue
        try:
            doc = exec_sentence(doc, text)
            out = doc.executed[-1].output
            if out:
                print(out)
        except ProverError as e:
            print(f"Error: {e}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn
    from .service import app
    host, _, port = args.addr.rpartition(":")
    host = host or "127.0.0.1"
    uvicorn.run(app, host=host, port=int(port or 8000), log_level="warning")
    return 0


def cmd_protocol(args) -> int:
    from .protocol import serve_stdio
    serve_stdio()
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="hurry-prover")
    parser.add_argument("--load-path", action="append",
                        help="extra directory searched by Require Import")
    parser.add_argument("--no-prelude", action="store_true",
                        help="start from an empty environment")
    sub = parser.add_subparsers(dest="command")

    p_check = sub.add_parser("check", help="run a vernacular file")
    p_check.add_argument("file")

    sub.add_parser("repl", help="interactive session")

    p_serve = sub.add_parser("serve", help="run the HTTP/WebSocket service")
    p_serve.add_argument("--addr", default="127.0.0.1:8000")

    sub.add_parser("protocol", help="newline-delimited JSON over stdio")

    args = parser.parse_args(argv)
    if args.command == "check":
        return cmd_check(args)
    if args.command == "repl":
        return cmd_repl(args)
    if args.command == "serve":
        return cmd_serve(args)
    if args.command == "protocol":
        return cmd_protocol(args)
    parser.print_help()
    return 2


if __name__ == "__main__":
    sys.exit(main())
