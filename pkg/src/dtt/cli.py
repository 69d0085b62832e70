"""Command-line front door: check, translate, compile, run.

Multiple input files are concatenated in argument order into one
declaration list. Exit codes: 0 success, 1 type/runtime error, 2 usage
error.
"""

from __future__ import annotations

import argparse
import os
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

from . import codegen, elab, extract, semantics as sem, sexp, surface, syntax as s
from . import translate as trans

sys.setrecursionlimit(200_000)


class Diagnostic:
    def __init__(self, severity, message, file, span, expected=None, actual=None):
        self.severity = severity
        self.message = message
        self.file = file
        self.span = span
        self.expected = expected
        self.actual = actual

    def render(self, src: str | None) -> str:
        line = col = 0
        if src is not None:
            off = min(self.span[0], len(src))
            line = src.count("\n", 0, off) + 1
            col = off - (src.rfind("\n", 0, off) + 1) + 1
        head = f"{self.file}:{line}:{col}: {self.severity}: {self.message}"
        parts = [head]
        if self.expected is not None:
            parts.append(f"  expected: {_clip(s.dump(self.expected))}")
        if self.actual is not None:
            parts.append(f"  actual:   {_clip(s.dump(self.actual))}")
        return "\n".join(parts)


def _clip(text: str, limit: int = 1200) -> str:
    if len(text) <= limit:
        return text
    return text[:limit] + f" ... [{len(text) - limit} more chars]" 


def _load_files(paths):
    chunks = []
    for p in paths:
        try:
            src = Path(p).read_text(encoding="utf-8")
        except OSError as e:
            print(f"error: cannot read {p}: {e}", file=sys.stderr)
            raise SystemExit(2)
        chunks.append((p, src))
    return chunks


def _parse_all(chunks):
    out = []
    for path, src in chunks:
        try:
            for d in surface.parse_file(src, path):
                out.append((path, src, d))
        except surface.ParseError as e:
            print(Diagnostic("error", e.msg, path, e.span).render(src), file=sys.stderr)
            raise SystemExit(1)
    return out


def _check(args, tagged_decls):
    trace = None
    if getattr(args, "trace_conversion", False):
        world_box = {}

        def trace(a, b, depth, ok):
            w = world_box.get("w")
            if w is None:
                return
            qa = s.dump(sem.quote(w, a, depth))
            qb = s.dump(sem.quote(w, b, depth))
            print(f"conv[{depth}] {qa} ~ {qb} -> {ok}", file=sys.stderr)

    genv = elab.GlobalEnv()
    genv.coherence_required = not getattr(args, "no_coherence_check", False)
    if trace is not None:
        genv.world.trace = trace
        world_box["w"] = genv.world
    for path, src, d in tagged_decls:
        try:
            elab.elab_decl(genv, d)
        except elab.ElabError as e:
            diag = Diagnostic("error", f"[{e.code}] {e.msg}", path, e.span, e.expected, e.actual)
            print(diag.render(src), file=sys.stderr)
            raise SystemExit(1)
    for w in genv.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return genv


def _pipeline(args):
    """check + translate, honoring --from-core."""
    from_core = getattr(args, "from_core", None)
    if from_core:
        prog = sexp.read_program(Path(from_core).read_text(encoding="utf-8"))
        return prog, prog.translated
    chunks = _load_files(args.files)
    genv = _check(args, _parse_all(chunks))
    translated = trans.translate_program(genv)
    return genv, translated


def _runtime_script() -> Path | None:
    envvar = os.environ.get("DTT_RUNTIME")
    if envvar:
        parts = envvar.split()
        return Path(parts[-1])
    here = Path(__file__).resolve()
    cand = here.parents[2] / "frontend" / "dist" / "runner.mjs"
    return cand if cand.exists() else None


def _runtime_cmd() -> list[str] | None:
    envvar = os.environ.get("DTT_RUNTIME")
    if envvar:
        return envvar.split()
    script = _runtime_script()
    if script is None:
        return None
    return ["node", str(script)]


def _emit_module(genv, translated, out_path: Path) -> str:
    ep = extract.extract_program(genv, translated)
    text = codegen.emit_module(ep)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(text, encoding="utf-8")
    script = _runtime_script()
    if script is not None:
        shim = script.parent / "dtt_runtime.mjs"
        if shim.exists():
            shutil.copy(shim, out_path.parent / "dtt_runtime.mjs")
    return text


def cmd_check(args) -> int:
    chunks = _load_files(args.files)
    genv = _check(args, _parse_all(chunks))
    if args.dump_core:
        sys.stdout.write(sexp.dump_program(genv, trans.translate_program(genv)))
    print(f"checked {len(genv.decls)} declarations", file=sys.stderr)
    return 0


def cmd_translate(args) -> int:
    genv, translated = _pipeline(args)
    sys.stdout.write(sexp.dump_program(genv, translated))
    return 0


def cmd_compile(args) -> int:
    genv, translated = _pipeline(args)
    try:
        _emit_module(genv, translated, Path(args.out))
    except extract.UnmappedPostulate as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


def cmd_run(args) -> int:
    genv, translated = _pipeline(args)
    with tempfile.TemporaryDirectory(prefix="dtt-run-") as td:
        out = Path(td) / "program.mjs"
        try:
            _emit_module(genv, translated, out)
        except extract.UnmappedPostulate as e:
            print(f"error: {e}", file=sys.stderr)
            return 1
        cmd = _runtime_cmd()
        if cmd is None:
            # No external runtime available: evaluate with the reference
            # interpreter so `run` still works in a bare checkout.
            from . import interp

            ep = extract.extract_program(genv, translated)
            try:
                print(interp.show(interp.run_program(ep)))
            except Exception as e:
                print(f"runtime error: {e}", file=sys.stderr)
                return 1
            return 0
        proc = subprocess.run([*cmd, str(out)])
        return proc.returncode


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="dtt", description="checker and compiler for .dtt programs")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, files_required=True):
        p.add_argument("files", nargs="+" if files_required else "*", help=".dtt source files")
        p.add_argument("--no-coherence-check", action="store_true",
                       help="downgrade missing/failed coherence proofs to warnings")
        p.add_argument("--trace-conversion", action="store_true",
                       help="stream conversion-check steps to stderr")

    p = sub.add_parser("check", help="parse and typecheck")
    common(p)
    p.add_argument("--dump-core", action="store_true", help="emit the translated core dump")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("translate", help="emit the representation-erased core")
    common(p, files_required=False)
    p.add_argument("--from-core", metavar="FILE", help="start from a core dump instead of sources")
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("compile", help="emit a target-language module")
    common(p, files_required=False)
    p.add_argument("-o", "--out", required=True, help="output module path")
    p.add_argument("--from-core", metavar="FILE")
    p.set_defaults(fn=cmd_compile)

    p = sub.add_parser("run", help="compile and execute via the runtime")
    common(p, files_required=False)
    p.add_argument("--from-core", metavar="FILE")
    p.set_defaults(fn=cmd_run)

    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    if not getattr(args, "from_core", None) and not args.files:
        print("error: no input files", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1


if __name__ == "__main__":
    raise SystemExit(main())
