"""Deterministic JavaScript emission from the untyped IR.

One binding per global, helpers first, entry point exported. Tagged values
are `rt.mkCtor(tag, [...])` records, thunks are memoized zero-argument
closures built with `rt.mkThunk`, and the module imports the runtime shim
by relative path.
"""

from __future__ import annotations

import re

from . import extract as ex

RUNTIME_IMPORT = "./dtt_runtime.mjs"

_JS_RESERVED = {
    "await", "break", "case", "catch", "class", "const", "continue", "debugger",
    "default", "delete", "do", "else", "enum", "export", "extends", "false",
    "finally", "for", "function", "if", "import", "in", "instanceof", "let",
    "new", "null", "return", "super", "switch", "this", "throw", "true", "try",
    "typeof", "var", "void", "while", "with", "yield",
}


def mangle(name: str) -> str:
    out = re.sub(r"[^A-Za-z0-9_$]", "_", name)
    if not out or out[0].isdigit() or out in _JS_RESERVED:
        out = "_" + out
    return out


def mangle_global(name: str) -> str:
    return "g$" + mangle(name)


def emit_expr(ir: ex.IR) -> str:
    match ir:
        case ex.IRVar(n):
            return mangle(n)
        case ex.IRUnit():
            return "rt.unit"
        case ex.IRPrim(n):
            return f"rt.{n}"
        case ex.IRGlobal(n):
            return mangle_global(n)
        case ex.IRLam(p, b):
            return f"(({mangle(p)}) => {emit_expr(b)})"
        case ex.IRApp(f, a):
            return f"{emit_expr(f)}({emit_expr(a)})"
        case ex.IRLet(p, v, b):
            return f"(({mangle(p)}) => {emit_expr(b)})({emit_expr(v)})"
        case ex.IRTuple(items):
            return "[" + ", ".join(emit_expr(i) for i in items) + "]"
        case ex.IRProj(t, i):
            return f"{emit_expr(t)}[{i}]"
        case ex.IRTag(_, tag, args):
            return f"rt.mkCtor({tag}, [" + ", ".join(emit_expr(a) for a in args) + "])"
        case ex.IRSwitch(scrut, cases):
            parts = []
            for tag, params, body in cases:
                binds = "".join(
                    f" const {mangle(p)} = $s.a[{k}];" for k, p in enumerate(params)
                )
                parts.append(f"case {tag}: {{{binds} return {emit_expr(body)}; }}")
            body_js = " ".join(parts)
            return (
                "(($s) => { switch ($s.t) { "
                + body_js
                + ' } throw new Error("match failure"); })('
                + emit_expr(scrut)
                + ")"
            )
        case ex.IRThunk(b):
            return f"rt.mkThunk(() => {emit_expr(b)})"
        case ex.IRForce(e):
            return f"rt.force({emit_expr(e)})"
    raise AssertionError(f"emit_expr: unhandled {ir!r}")


def emit_module(prog: ex.ExtractedProgram) -> str:
    lines = [
        "// generated module; do not edit",
        f'import * as rt from "{RUNTIME_IMPORT}";',
        "",
    ]
    for name, body in prog.helpers:
        lines.append(f"const {mangle_global(name)} = {emit_expr(body)};")
    for name, body in prog.globals:
        lines.append(f"const {mangle_global(name)} = {emit_expr(body)};")
    names = [name for name, _ in prog.globals]
    if "main" in names:
        lines.append("export const main = " + mangle_global("main") + ";")
    lines.append(
        "export const $globals = {"
        + ", ".join(f'"{n}": {mangle_global(n)}' for n in names)
        + "};"
    )
    lines.append("")
    return "\n".join(lines)
