"""Surface syntax for .dtt files: lexer, parser, and surface AST.

Declarations: def, postulate, data ... where, repr blocks for data types,
and repr for global functions. Line comments start with --. Hyphens are
allowed inside identifiers when followed by an alphanumeric, so `->` never
collides with names like `ubig-elim-zero-id`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class ParseError(Exception):
    def __init__(self, msg: str, span: tuple[int, int] = (0, 0)):
        super().__init__(msg)
        self.msg = msg
        self.span = span


# --- tokens -------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>--[^\n]*)
  | (?P<arrow>->)
  | (?P<assign>:=)
  | (?P<num>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*(?:-[A-Za-z0-9_'][A-Za-z0-9_']*)*)
  | (?P<punct>[()\{\}\[\],.;:|\\*=])
    """,
    re.VERBOSE,
)

KEYWORDS = {
    "def",
    "postulate",
    "data",
    "where",
    "repr",
    "unrepr",
    "Repr",
    "as",
    "by",
    "elim",
    "let",
    "in",
    "U",
    "Top",
    "tt",
    "refl",
    "J",
    "fst",
    "snd",
    "sfst",
    "ssnd",
}


@dataclass(frozen=True)
class Token:
    kind: str  # arrow | assign | num | ident | punct | kw | eof
    text: str
    start: int
    end: int


def tokenize(src: str) -> list[Token]:
    out = []
    pos = 0
    n = len(src)
    while pos < n:
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", (pos, pos + 1))
        kind = m.lastgroup
        text = m.group()
        if kind not in ("ws", "comment"):
            if kind == "ident" and text in KEYWORDS:
                kind = "kw"
            out.append(Token(kind, text, m.start(), m.end()))
        pos = m.end()
    out.append(Token("eof", "", n, n))
    return out


# --- surface AST -----------------------------------------------------------------


@dataclass(frozen=True)
class STerm:
    __slots__ = ()


@dataclass(frozen=True)
class SVar(STerm):
    name: str
    span: tuple[int, int]


@dataclass(frozen=True)
class SU(STerm):
    span: tuple[int, int]


@dataclass(frozen=True)
class SUnitTy(STerm):
    span: tuple[int, int]


@dataclass(frozen=True)
class STt(STerm):
    span: tuple[int, int]


@dataclass(frozen=True)
class SNum(STerm):
    value: int
    span: tuple[int, int]


@dataclass(frozen=True)
class SPi(STerm):
    name: str
    dom: STerm
    cod: STerm
    span: tuple[int, int]


@dataclass(frozen=True)
class SSigma(STerm):
    name: str
    fst_ty: STerm
    snd_ty: STerm
    span: tuple[int, int]


@dataclass(frozen=True)
class SSubset(STerm):
    name: str
    base: STerm
    refine: STerm
    span: tuple[int, int]


@dataclass(frozen=True)
class SLam(STerm):
    params: tuple[tuple[str, STerm | None], ...]
    body: STerm
    span: tuple[int, int]


@dataclass(frozen=True)
class SApp(STerm):
    fn: STerm
    arg: STerm
    span: tuple[int, int]


@dataclass(frozen=True)
class SPairE(STerm):
    a: STerm
    b: STerm
    span: tuple[int, int]


@dataclass(frozen=True)
class SProj(STerm):
    kind: str  # fst | snd | sfst | ssnd
    arg: STerm
    span: tuple[int, int]


@dataclass(frozen=True)
class SEqE(STerm):
    lhs: STerm
    rhs: STerm
    span: tuple[int, int]


@dataclass(frozen=True)
class SRefl(STerm):
    arg: STerm | None
    span: tuple[int, int]


@dataclass(frozen=True)
class SJ(STerm):
    motive: STerm
    case: STerm
    proof: STerm
    span: tuple[int, int]


@dataclass(frozen=True)
class SReprT(STerm):
    arg: STerm
    span: tuple[int, int]


@dataclass(frozen=True)
class SReprE(STerm):
    arg: STerm
    span: tuple[int, int]


@dataclass(frozen=True)
class SUnreprE(STerm):
    arg: STerm
    span: tuple[int, int]


@dataclass(frozen=True)
class SLet(STerm):
    name: str
    ty: STerm
    val: STerm
    body: STerm
    span: tuple[int, int]


@dataclass(frozen=True)
class SLetPair(STerm):
    a: str
    b: str
    val: STerm
    body: STerm
    span: tuple[int, int]


@dataclass(frozen=True)
class SAnn(STerm):
    tm: STerm
    ty: STerm
    span: tuple[int, int]


# declarations


@dataclass(frozen=True)
class Decl:
    __slots__ = ()


@dataclass(frozen=True)
class DDef(Decl):
    name: str
    ty: STerm
    body: STerm
    span: tuple[int, int]


@dataclass(frozen=True)
class DPostulate(Decl):
    name: str
    ty: STerm
    span: tuple[int, int]


@dataclass(frozen=True)
class DData(Decl):
    name: str
    params: tuple[tuple[str, STerm], ...]
    ctors: tuple[tuple[str, STerm, tuple[int, int]], ...]
    span: tuple[int, int]


@dataclass(frozen=True)
class DReprData(Decl):
    target: str
    index_names: tuple[str, ...]
    carrier: STerm
    ctor_images: tuple[tuple[str, STerm, tuple[int, int]], ...]
    elim_image: STerm
    coh_proofs: tuple[STerm, ...]
    span: tuple[int, int]


@dataclass(frozen=True)
class DReprFn(Decl):
    target: str
    image: STerm
    span: tuple[int, int]


# --- parser ---------------------------------------------------------------------


class Parser:
    def __init__(self, src: str, filename: str = "<input>"):
        self.src = src
        self.filename = filename
        self.toks = tokenize(src)
        self.pos = 0

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def expect(self, kind: str, text: str | None = None) -> Token:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            raise ParseError(f"expected {want!r}, found {t.text or 'end of input'!r}", (t.start, t.end))
        return self.next()

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.peek()
        return t.kind == kind and (text is None or t.text == text)

    def at_punct(self, ch: str) -> bool:
        return self.at("punct", ch)

    # declarations ---------------------------------------------------------

    def parse_file(self) -> list[Decl]:
        decls = []
        while not self.at("eof"):
            decls.append(self.parse_decl())
        return decls

    def parse_decl(self) -> Decl:
        t = self.peek()
        if self.at("kw", "def"):
            return self.parse_def()
        if self.at("kw", "postulate"):
            return self.parse_postulate()
        if self.at("kw", "data"):
            return self.parse_data()
        if self.at("kw", "repr"):
            return self.parse_repr()
        raise ParseError(f"expected a declaration, found {t.text!r}", (t.start, t.end))

    def parse_def(self) -> DDef:
        start = self.expect("kw", "def").start
        name = self.expect("ident").text
        self.expect("punct", ":")
        ty = self.parse_term()
        self.expect("assign")
        body = self.parse_term()
        return DDef(name, ty, body, (start, self.peek().start))

    def parse_postulate(self) -> DPostulate:
        start = self.expect("kw", "postulate").start
        name = self.expect("ident").text
        self.expect("punct", ":")
        ty = self.parse_term()
        return DPostulate(name, ty, (start, self.peek().start))

    def parse_data(self) -> DData:
        start = self.expect("kw", "data").start
        name = self.expect("ident").text
        params = []
        while self.at_punct("("):
            self.next()
            names = [self.expect("ident").text]
            while self.at("ident"):
                names.append(self.next().text)
            self.expect("punct", ":")
            ty = self.parse_term()
            self.expect("punct", ")")
            for n in names:
                params.append((n, ty))
        self.expect("kw", "where")
        ctors = []
        while self.at_punct("|"):
            self.next()
            ct = self.peek()
            cname = self.expect("ident").text
            self.expect("punct", ":")
            cty = self.parse_term()
            ctors.append((cname, cty, (ct.start, self.peek().start)))
        return DData(name, tuple(params), tuple(ctors), (start, self.peek().start))

    def parse_repr(self) -> Decl:
        start = self.expect("kw", "repr").start
        target = self.expect("ident").text
        index_names = []
        while self.at("ident"):
            index_names.append(self.next().text)
        self.expect("kw", "as")
        carrier = self.parse_term()
        if not self.at_punct("{"):
            if index_names:
                t = self.peek()
                raise ParseError("function representation takes no index names", (t.start, t.end))
            return DReprFn(target, carrier, (start, self.peek().start))
        self.next()
        images = []
        elim_image = None
        coh: list[STerm] = []
        while True:
            if self.at("kw", "elim"):
                self.next()
                self.expect("kw", "as")
                elim_image = self.parse_term()
                if self.at("kw", "by"):
                    self.next()
                    coh.append(self.parse_term())
                    while self.at_punct(","):
                        self.next()
                        coh.append(self.parse_term())
            else:
                ct = self.peek()
                label = self.expect("ident").text
                self.expect("kw", "as")
                img = self.parse_term()
                images.append((label, img, (ct.start, self.peek().start)))
            if self.at_punct(";"):
                self.next()
                if self.at_punct("}"):
                    break
                continue
            break
        end = self.expect("punct", "}").end
        if elim_image is None:
            raise ParseError("repr block is missing its eliminator image", (start, end))
        return DReprData(
            target,
            tuple(index_names),
            carrier,
            tuple(images),
            elim_image,
            tuple(coh),
            (start, end),
        )

    # terms ------------------------------------------------------------------

    def parse_term(self) -> STerm:
        return self.parse_arrow()

    def parse_arrow(self) -> STerm:
        # binder groups: ( x y : T ) ... -> cod   or   { x : T | P } fronted types
        if self.at_punct("("):
            save = self.pos
            binders = self._try_binder_groups()
            if binders is not None and self.at("arrow"):
                self.next()
                cod = self.parse_arrow()
                for name, dom in reversed(binders):
                    cod = SPi(name, dom, cod, (dom.span[0], cod.span[1]))
                return cod
            if binders is not None and len(binders) == 1 and self.at_punct("*"):
                self.next()
                snd = self.parse_arrow()
                name, dom = binders[0]
                return SSigma(name, dom, snd, (dom.span[0], snd.span[1]))
            self.pos = save
        lhs = self.parse_eq()
        if self.at("arrow"):
            self.next()
            cod = self.parse_arrow()
            return SPi("_", lhs, cod, (lhs.span[0], cod.span[1]))
        return lhs

    def _try_binder_groups(self):
        groups = []
        while self.at_punct("("):
            save = self.pos
            self.next()
            if not self.at("ident"):
                self.pos = save
                break
            names = [self.next().text]
            while self.at("ident"):
                names.append(self.next().text)
            if not self.at_punct(":"):
                self.pos = save
                break
            self.next()
            ty = self.parse_term()
            self.expect("punct", ")")
            for n in names:
                groups.append((n, ty))
        return groups or None

    def parse_eq(self) -> STerm:
        lhs = self.parse_product()
        if self.at_punct("="):
            self.next()
            rhs = self.parse_product()
            return SEqE(lhs, rhs, (lhs.span[0], rhs.span[1]))
        return lhs

    def parse_product(self) -> STerm:
        lhs = self.parse_app()
        if self.at_punct("*"):
            self.next()
            rhs = self.parse_product()
            return SSigma("_", lhs, rhs, (lhs.span[0], rhs.span[1]))
        return lhs

    def parse_app(self) -> STerm:
        head = self.parse_atom()
        while self._at_atom_start():
            arg = self.parse_atom()
            head = SApp(head, arg, (head.span[0], arg.span[1]))
        return head

    def _at_atom_start(self) -> bool:
        # Argument positions: only "simple" atoms may continue an application
        # spine; keyword-led prefix forms (repr, fst, lambdas, let, J, ...)
        # must be parenthesized there, which keeps `repr` declarations and
        # trailing term-level `repr`s unambiguous.
        t = self.peek()
        if t.kind in ("ident", "num"):
            return True
        if t.kind == "punct" and t.text == "(":
            return True
        if self._at_subset_start():
            return True
        if t.kind == "kw" and t.text in ("U", "Top", "tt", "refl"):
            return True
        return False

    def _at_subset_start(self) -> bool:
        # `{ x : ... }` is a subset type; `{ ctor as ... }` is a repr block.
        return (
            self.at_punct("{")
            and self.peek(1).kind == "ident"
            and self.peek(2).kind == "punct"
            and self.peek(2).text == ":"
        )

    def parse_atom(self) -> STerm:
        t = self.peek()
        sp = (t.start, t.end)
        if t.kind == "ident":
            self.next()
            return SVar(t.text, sp)
        if t.kind == "num":
            self.next()
            return SNum(int(t.text), sp)
        if self.at("kw", "U"):
            self.next()
            return SU(sp)
        if self.at("kw", "Top"):
            self.next()
            return SUnitTy(sp)
        if self.at("kw", "tt"):
            self.next()
            return STt(sp)
        if self.at("kw", "refl"):
            self.next()
            return SRefl(None, sp)
        if self.at("kw", "J"):
            self.next()
            m = self.parse_atom()
            c = self.parse_atom()
            p = self.parse_atom()
            return SJ(m, c, p, (sp[0], p.span[1]))
        if t.kind == "kw" and t.text in ("fst", "snd", "sfst", "ssnd"):
            self.next()
            arg = self.parse_atom()
            return SProj(t.text, arg, (sp[0], arg.span[1]))
        if self.at("kw", "Repr"):
            self.next()
            arg = self.parse_atom()
            return SReprT(arg, (sp[0], arg.span[1]))
        if self.at("kw", "repr"):
            self.next()
            arg = self.parse_atom()
            return SReprE(arg, (sp[0], arg.span[1]))
        if self.at("kw", "unrepr"):
            self.next()
            arg = self.parse_atom()
            return SUnreprE(arg, (sp[0], arg.span[1]))
        if self.at("kw", "let"):
            return self.parse_let()
        if self.at_punct("\\"):
            return self.parse_lambda()
        if self._at_subset_start():
            self.next()
            name = self.expect("ident").text
            self.expect("punct", ":")
            base = self.parse_term()
            self.expect("punct", "|")
            refine = self.parse_term()
            end = self.expect("punct", "}").end
            return SSubset(name, base, refine, (sp[0], end))
        if self.at_punct("("):
            self.next()
            inner = self.parse_term()
            if self.at_punct(","):
                self.next()
                b = self.parse_term()
                end = self.expect("punct", ")").end
                return SPairE(inner, b, (sp[0], end))
            if self.at_punct(":"):
                self.next()
                ty = self.parse_term()
                end = self.expect("punct", ")").end
                return SAnn(inner, ty, (sp[0], end))
            end = self.expect("punct", ")").end
            return inner
        raise ParseError(f"expected a term, found {t.text or 'end of input'!r}", sp)

    def parse_lambda(self) -> STerm:
        start = self.expect("punct", "\\").start
        params: list[tuple[str, STerm | None]] = []
        while True:
            if self.at("ident"):
                params.append((self.next().text, None))
            elif self.at_punct("("):
                self.next()
                names = [self.expect("ident").text]
                while self.at("ident"):
                    names.append(self.next().text)
                self.expect("punct", ":")
                ty = self.parse_term()
                self.expect("punct", ")")
                for n in names:
                    params.append((n, ty))
            else:
                break
        if not params:
            t = self.peek()
            raise ParseError("lambda needs at least one parameter", (t.start, t.end))
        self.expect("punct", ".")
        body = self.parse_term()
        return SLam(tuple(params), body, (start, body.span[1]))

    def parse_let(self) -> STerm:
        start = self.expect("kw", "let").start
        if self.at_punct("("):
            self.next()
            a = self.expect("ident").text
            self.expect("punct", ",")
            b = self.expect("ident").text
            self.expect("punct", ")")
            self.expect("assign")
            val = self.parse_term()
            self.expect("kw", "in")
            body = self.parse_term()
            return SLetPair(a, b, val, body, (start, body.span[1]))
        name = self.expect("ident").text
        self.expect("punct", ":")
        ty = self.parse_term()
        self.expect("assign")
        val = self.parse_term()
        self.expect("kw", "in")
        body = self.parse_term()
        return SLet(name, ty, val, body, (start, body.span[1]))


def parse_file(src: str, filename: str = "<input>") -> list[Decl]:
    return Parser(src, filename).parse_file()


def parse_term(src: str) -> STerm:
    p = Parser(src)
    t = p.parse_term()
    tok = p.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected trailing input {tok.text!r}", (tok.start, tok.end))
    return t
