"""Command line front end: check, normalize, eval and selftest."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import evaluator as E
from . import syntax as S
from .prelude import load_prelude, prelude_source
from .typechecker import Program, TypeCheckError, check_definition, show_value

EXIT_OK, EXIT_TYPE, EXIT_PARSE, EXIT_SELFTEST = 0, 1, 2, 3


class _Failure(Exception):
    def __init__(self, code: int, text: str):
        super().__init__(text)
        self.code = code
        self.text = text


def _where(path: str, span: S.Span | None) -> str:
    if span is None:
        return f"{path}:1:1"
    return f"{path}:{span.line}:{span.col}"


def load_files(paths: Sequence[str], prelude: bool) -> Program:
    prog = load_prelude() if prelude else Program()
    for path in paths:
        try:
            src = Path(path).read_text(encoding="utf-8")
        except OSError as err:
            raise _Failure(EXIT_PARSE, f"{path}:1:1: io: {err.strerror or err}") from None
        if prelude and src == prelude_source():
            continue  # the prelude itself, already loaded and checked
        try:
            defs = S.parse(src)
        except S.ParseError as err:
            raise _Failure(EXIT_PARSE, f"{_where(path, err.span)}: parse: {err.message}") from None
        for d in defs:
            try:
                check_definition(prog, d)
            except TypeCheckError as err:
                span = err.span or d.span
                raise _Failure(EXIT_TYPE, f"{_where(path, span)}: {err.kind}: {err.message}") \
                    from None
    return prog


def _selected(prog: Program, name: str | None, paths: Sequence[str]) -> list[str]:
    if name is None:
        return list(prog.order)
    if name not in prog.values:
        where = paths[0] if paths else "<input>"
        raise _Failure(EXIT_TYPE, f"{where}:1:1: scope: no definition named {name}")
    return [name]


def _user_defs(prog: Program, prelude: bool) -> Program:
    # defs from the prelude are not echoed unless asked for by name
    if not prelude:
        return prog
    base = set(load_prelude().order)
    out = prog.copy()
    out.order = [n for n in prog.order if n not in base]
    return out


def run(argv: Sequence[str], out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    parser = argparse.ArgumentParser(prog="cubical", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("files", nargs="*", help="source files, checked in order")
        p.add_argument("--no-prelude", action="store_true", help="do not load the prelude")
        p.add_argument("--trace-comp", action="store_true",
                       help="print one line per composition dispatch to stderr")

    p_check = sub.add_parser("check", help="typecheck every definition")
    common(p_check)
    p_norm = sub.add_parser("normalize", help="print normal forms")
    common(p_norm)
    p_norm.add_argument("--def", dest="name", metavar="NAME", help="only this definition")
    p_eval = sub.add_parser("eval", help="print definitions with their types and values")
    common(p_eval)
    p_eval.add_argument("--def", dest="name", metavar="NAME", help="only this definition")
    p_self = sub.add_parser("selftest", help="run the randomized property suites")
    p_self.add_argument("--seed", type=int, default=0)
    p_self.add_argument("--trace-comp", action="store_true", help=argparse.SUPPRESS)

    args = parser.parse_args(argv)

    if args.command == "selftest":
        from .selftest import run_all
        # timings would make the output depend on the machine, so they are left out
        results = run_all(args.seed, lambda line: print(line, file=out, flush=True), timed=False)
        ok = all(r.ok for r in results)
        print("selftest passed" if ok else "selftest FAILED", file=out)
        return EXIT_OK if ok else EXIT_SELFTEST

    prelude = not args.no_prelude
    try:
        if args.trace_comp:
            with E.tracing(lambda line: print(line, file=err)):
                return _run_files(args, prelude, out)
        return _run_files(args, prelude, out)
    except _Failure as fail:
        print(fail.text, file=err)
        return fail.code


def _run_files(args: argparse.Namespace, prelude: bool, out: TextIO) -> int:
    if not args.files and args.command != "check":
        raise _Failure(EXIT_PARSE, "<input>:1:1: io: no input files")
    if not args.files:
        load_files([], prelude)
        print("ok", file=out)
        return EXIT_OK
    prog = load_files(args.files, prelude)
    match args.command:
        case "check":
            print(f"ok: {len(prog.order)} definitions", file=out)
        case "normalize":
            shown = prog if args.name else _user_defs(prog, prelude)
            for name in _selected(shown, args.name, args.files):
                nf = E.normal_form(prog.values[name])
                print(nf if args.name else f"{name} = {nf}", file=out)
        case "eval":
            shown = prog if args.name else _user_defs(prog, prelude)
            for name in _selected(shown, args.name, args.files):
                ty = show_value(prog.types[name])
                print(f"{name} : {ty} = {E.normal_form(prog.values[name])}", file=out)
    return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
