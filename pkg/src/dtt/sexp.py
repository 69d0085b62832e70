"""Reader for the s-expression core dump emitted by `translate`.

The dump is line-oriented: signature lines first, then one declaration per
line. Reading a dump reconstructs enough of a checked program (signature
table, declaration list, types) to drive extraction and code generation.
"""

from __future__ import annotations

from . import syntax as s
from .syntax import Term


class SexpError(Exception):
    pass


def _tokenize(line: str):
    out = []
    i = 0
    n = len(line)
    while i < n:
        c = line[i]
        if c.isspace():
            i += 1
        elif c in "()":
            out.append(c)
            i += 1
        else:
            j = i
            while j < n and not line[j].isspace() and line[j] not in "()":
                j += 1
            out.append(line[i:j])
            i = j
    return out


def _parse_sexp(tokens, pos=0):
    if pos >= len(tokens):
        raise SexpError("unexpected end of input")
    t = tokens[pos]
    if t == "(":
        items = []
        pos += 1
        while pos < len(tokens) and tokens[pos] != ")":
            item, pos = _parse_sexp(tokens, pos)
            items.append(item)
        if pos >= len(tokens):
            raise SexpError("missing ')'")
        return items, pos + 1
    if t == ")":
        raise SexpError("unexpected ')'")
    return t, pos + 1


def read_line(line: str):
    tokens = _tokenize(line)
    sx, pos = _parse_sexp(tokens)
    if pos != len(tokens):
        raise SexpError(f"trailing tokens in line: {line!r}")
    return sx


def _alg(sx) -> tuple[Term, ...] | None:
    if sx == "default":
        return None
    return tuple(term(x) for x in sx)


def term(sx) -> Term:
    if isinstance(sx, str):
        match sx:
            case "U":
                return s.U
            case "unit":
                return s.UNIT
            case "tt":
                return s.TT
        raise SexpError(f"unknown atom {sx!r}")
    tag = sx[0]
    match tag:
        case "var":
            return s.Var(int(sx[1]))
        case "pi":
            return s.Pi(term(sx[1]), term(sx[2]))
        case "lam":
            return s.Lam(term(sx[1]))
        case "app":
            return s.App(term(sx[1]), term(sx[2]))
        case "sig":
            return s.Sigma(term(sx[1]), term(sx[2]))
        case "pair":
            return s.Pair(term(sx[1]), term(sx[2]))
        case "fst":
            return s.Fst(term(sx[1]))
        case "snd":
            return s.Snd(term(sx[1]))
        case "sub":
            return s.Subset(term(sx[1]), term(sx[2]))
        case "spair":
            return s.SPair(term(sx[1]), term(sx[2]))
        case "sfst":
            return s.SFst(term(sx[1]))
        case "ssnd":
            return s.SSnd(term(sx[1]))
        case "eq":
            return s.Eq(term(sx[1]), term(sx[2]), term(sx[3]))
        case "refl":
            return s.Refl(term(sx[1]))
        case "J":
            return s.J(term(sx[1]), term(sx[2]), term(sx[3]))
        case "data":
            return s.DataTy(int(sx[1]), _alg(sx[2]), tuple(term(x) for x in sx[3]))
        case "ctor":
            return s.Ctor(int(sx[1]), int(sx[2]), _alg(sx[3]), tuple(term(x) for x in sx[4]))
        case "elim":
            return s.Elim(
                int(sx[1]),
                _alg(sx[2]),
                term(sx[3]),
                tuple(term(x) for x in sx[4]),
                tuple(term(x) for x in sx[5]),
                term(sx[6]),
            )
        case "Repr":
            return s.ReprTy(term(sx[1]))
        case "repr":
            return s.ReprTm(term(sx[1]))
        case "unrepr":
            return s.UnreprTm(term(sx[1]))
        case "global":
            return s.Global(sx[1])
        case "post":
            return s.Post(sx[1])
    raise SexpError(f"unknown tag {tag!r}")


def operation(sx) -> s.Operation:
    match sx[0]:
        case "ext":
            return s.OpExt(term(sx[1]), operation(sx[2]))
        case "int":
            return s.OpInt(tuple(term(x) for x in sx[1]), operation(sx[2]))
        case "ret":
            return s.OpRet(tuple(term(x) for x in sx[1]))
    raise SexpError(f"unknown operation tag {sx[0]!r}")


def signature(sx) -> tuple[int, s.Signature]:
    assert sx[0] == "signature"
    sid = int(sx[1])
    name = sx[2]
    indices = tuple(term(x) for x in sx[3])
    ops = tuple((osx[0], operation(osx[1])) for osx in sx[4])
    return sid, s.Signature(name, indices, ops)


def dump_program(genv, translated: list[tuple]) -> str:
    """One declaration per line, signatures first."""
    lines = []
    for sid, sig in genv.world.sigs.all():
        lines.append(s.dump_signature(sid, sig))
    for d in translated:
        if d[0] == "postulate":
            lines.append(f"(postulate {d[1]} {s.dump(d[2])})")
        else:
            lines.append(f"(def {d[1]} {s.dump(d[2])} {s.dump(d[3])})")
    return "\n".join(lines) + "\n"


class CoreProgram:
    """A program read back from a core dump; quacks enough like the
    elaborator's global environment to drive extraction."""

    def __init__(self):
        from .semantics import World

        self.world = World()
        self.entries: dict[str, tuple] = {}
        self.decls: list[tuple] = []
        self.repr_fn: dict[str, Term] = {}
        self.translated: list[tuple] = []


def read_program(text: str) -> CoreProgram:
    prog = CoreProgram()
    sigs: list[tuple[int, s.Signature]] = []
    decls = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        sx = read_line(line)
        if sx[0] == "signature":
            sigs.append(signature(sx))
        elif sx[0] == "postulate":
            decls.append(("postulate", sx[1], term(sx[2])))
        elif sx[0] == "def":
            decls.append(("def", sx[1], term(sx[2]), term(sx[3])))
        else:
            raise SexpError(f"unknown declaration tag {sx[0]!r}")
    sigs.sort()
    for sid, sig in sigs:
        got = prog.world.sigs.intern(sig)
        if got != sid:
            raise SexpError("signature ids must be dense and ordered")
    for d in decls:
        prog.translated.append(d)
        prog.decls.append((d[0], d[1]))
        if d[0] == "postulate":
            prog.entries[d[1]] = ("postulate", d[2])
        else:
            prog.entries[d[1]] = ("def", d[2], d[3])
            prog.world.define(d[1], d[3])
    return prog
