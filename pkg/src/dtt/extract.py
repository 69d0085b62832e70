"""Extraction from the translated core into an untyped IR.

Types, universe codes and equality proofs erase to a unit literal; subset
pairs erase to their first component; J becomes its refl-case applied to
unit; default-algebra constructors become tagged values and their
eliminators become per-signature switch helpers with thunked inductive
hypotheses. A simplifier contracts the administrative redexes this leaves
behind so that computationally irrelevant functions become the literal
identity.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import syntax as s
from .syntax import Term


class UnmappedPostulate(Exception):
    def __init__(self, name: str):
        super().__init__(f"postulate {name!r} has no runtime primitive mapping")
        self.name = name


# --- IR ---------------------------------------------------------------------


@dataclass(frozen=True)
class IR:
    __slots__ = ()


@dataclass(frozen=True)
class IRVar(IR):
    name: str


@dataclass(frozen=True)
class IRLam(IR):
    param: str
    body: IR


@dataclass(frozen=True)
class IRApp(IR):
    fn: IR
    arg: IR


@dataclass(frozen=True)
class IRLet(IR):
    name: str
    val: IR
    body: IR


@dataclass(frozen=True)
class IRTuple(IR):
    items: tuple


@dataclass(frozen=True)
class IRProj(IR):
    tup: IR
    idx: int


@dataclass(frozen=True)
class IRTag(IR):
    origin: str  # data type name, kept for allocation scans
    tag: int
    args: tuple


@dataclass(frozen=True)
class IRSwitch(IR):
    scrut: IR
    cases: tuple  # of (tag, params, body)


@dataclass(frozen=True)
class IRThunk(IR):
    body: IR


@dataclass(frozen=True)
class IRForce(IR):
    e: IR


@dataclass(frozen=True)
class IRPrim(IR):
    name: str


@dataclass(frozen=True)
class IRGlobal(IR):
    name: str


@dataclass(frozen=True)
class IRUnit(IR):
    pass


UNIT = IRUnit()

IDENTITY = IRLam("x", IRVar("x"))


# Postulate name -> (runtime identifier, arity). Runtime functions are curried.
PRIM_TABLE = {
    "ubig-zero": ("ubig_zero", 0),
    "ubig-one": ("ubig_one", 0),
    "ubig-one-plus": ("ubig_one_plus", 1),
    "ubig-add": ("ubig_add", 2),
    "ubig-mul": ("ubig_mul", 2),
    "ubig-elim": ("ubig_elim", 4),
}


def _is_erased_postulate_type(ty: Term) -> bool:
    """Proof postulates (Pi ... Eq) and type constants (Pi ... U) erase to unit."""
    while isinstance(ty, s.Pi):
        ty = ty.cod
    return isinstance(ty, (s.Eq, s.Universe))


class Extractor:
    def __init__(self, genv):
        self.genv = genv
        self.counter = 0
        self.helpers: dict[int, tuple[str, IR]] = {}  # sig id -> (name, body)
        self.subset_pairs_erased = 0

    def gensym(self, base: str = "x") -> str:
        self.counter += 1
        return f"{base}{self.counter}"

    def helper_name(self, sid: int) -> str:
        sig = self.genv.world.sig(sid)
        return f"$elim_{sig.name}_{sid}"

    def erase(self, t: Term, env: tuple[str, ...] = ()) -> IR:
        match t:
            case s.Var(i):
                return IRVar(env[i])
            case s.Universe() | s.Unit() | s.Tt() | s.Eq(_, _, _) | s.Refl(_):
                return UNIT
            case s.Pi(_, _) | s.Sigma(_, _) | s.Subset(_, _) | s.DataTy(_, _, _) | s.ReprTy(_):
                return UNIT
            case s.Lam(b):
                x = self.gensym()
                return IRLam(x, self.erase(b, (x,) + env))
            case s.App(f, a):
                return IRApp(self.erase(f, env), self.erase(a, env))
            case s.Pair(a, b):
                return IRTuple((self.erase(a, env), self.erase(b, env)))
            case s.Fst(p):
                return IRProj(self.erase(p, env), 0)
            case s.Snd(p):
                return IRProj(self.erase(p, env), 1)
            case s.SPair(a, _b):
                self.subset_pairs_erased += 1
                return self.erase(a, env)
            case s.SFst(p):
                return self.erase(p, env)
            case s.SSnd(_):
                return UNIT
            case s.J(_m, c, _p):
                x = self.gensym()
                return IRApp(IRLam(x, self.erase(c, (x,) + env)), UNIT)
            case s.Ctor(sid, op, g, args):
                assert g is None, "represented constructor survived translation"
                sig = self.genv.world.sig(sid)
                return IRTag(sig.name, op, tuple(self.erase(a, env) for a in args))
            case s.Elim(sid, g, m, ms, ix, x):
                assert g is None, "represented eliminator survived translation"
                self.require_helper(sid)
                out: IR = IRGlobal(self.helper_name(sid))
                for a in (m, *ms, *ix, x):
                    out = IRApp(out, self.erase(a, env))
                return out
            case s.ReprTm(a) | s.UnreprTm(a):
                # unreachable after translation; erased as the identity
                return self.erase(a, env)
            case s.Global(n):
                return IRGlobal(n)
            case s.Post(n):
                if n in PRIM_TABLE:
                    return IRPrim(PRIM_TABLE[n][0])
                if _is_erased_postulate_type(self.genv.entries[n][1]):
                    return UNIT
                raise UnmappedPostulate(n)
        raise AssertionError(f"erase: unhandled node {t!r}")

    def require_helper(self, sid: int) -> None:
        if sid in self.helpers:
            return
        from .sigs import op_rec_flags

        sig = self.genv.world.sig(sid)
        name = self.helper_name(sid)
        self.helpers[sid] = (name, UNIT)  # placeholder to stop recursion
        k = len(sig.ops)
        nd = len(sig.indices)
        m = self.gensym("M")
        methods = [self.gensym("m") for _ in range(k)]
        ixs = [self.gensym("i") for _ in range(nd)]
        x = self.gensym("s")
        cases = []
        for op_idx, (_, op) in enumerate(sig.ops):
            flags = op_rec_flags(op)
            params = [self.gensym("a") for _ in flags]
            body: IR = IRVar(methods[op_idx])
            for j, flag in enumerate(flags):
                body = IRApp(body, IRVar(params[j]))
                if flag:
                    rec: IR = IRGlobal(name)
                    for a in (IRVar(m), *map(IRVar, methods)):
                        rec = IRApp(rec, a)
                    for _ in range(nd):
                        rec = IRApp(rec, UNIT)
                    rec = IRApp(rec, IRVar(params[j]))
                    body = IRApp(body, IRThunk(rec))
            cases.append((op_idx, tuple(params), body))
        body = IRSwitch(IRVar(x), tuple(cases))
        for v in reversed([m, *methods, *ixs, x]):
            body = IRLam(v, body)
        self.helpers[sid] = (name, body)


# --- simplification ------------------------------------------------------------


def _count(ir: IR, name: str) -> int:
    match ir:
        case IRVar(n):
            return 1 if n == name else 0
        case IRLam(_, b):
            return _count(b, name)
        case IRApp(f, a):
            return _count(f, name) + _count(a, name)
        case IRLet(_, v, b):
            return _count(v, name) + _count(b, name)
        case IRTuple(items):
            return sum(_count(i, name) for i in items)
        case IRProj(t, _):
            return _count(t, name)
        case IRTag(_, _, args):
            return sum(_count(a, name) for a in args)
        case IRSwitch(scrut, cases):
            return _count(scrut, name) + sum(_count(b, name) for _, _, b in cases)
        case IRThunk(b):
            return _count(b, name)
        case IRForce(e):
            return _count(e, name)
        case _:
            return 0


def _subst(ir: IR, name: str, val: IR) -> IR:
    match ir:
        case IRVar(n):
            return val if n == name else ir
        case IRLam(p, b):
            return IRLam(p, _subst(b, name, val))
        case IRApp(f, a):
            return IRApp(_subst(f, name, val), _subst(a, name, val))
        case IRLet(p, v, b):
            return IRLet(p, _subst(v, name, val), _subst(b, name, val))
        case IRTuple(items):
            return IRTuple(tuple(_subst(i, name, val) for i in items))
        case IRProj(t, i):
            return IRProj(_subst(t, name, val), i)
        case IRTag(o, t, args):
            return IRTag(o, t, tuple(_subst(a, name, val) for a in args))
        case IRSwitch(scrut, cases):
            return IRSwitch(
                _subst(scrut, name, val),
                tuple((t, ps, _subst(b, name, val)) for t, ps, b in cases),
            )
        case IRThunk(b):
            return IRThunk(_subst(b, name, val))
        case IRForce(e):
            return IRForce(_subst(e, name, val))
        case _:
            return ir


_ATOMIC = (IRVar, IRUnit, IRPrim, IRGlobal)


def simplify(ir: IR) -> IR:
    for _ in range(200):
        nxt = _simp(ir)
        if nxt == ir:
            return ir
        ir = nxt
    return ir


def _simp(ir: IR) -> IR:
    match ir:
        case IRApp(f, a):
            f = _simp(f)
            a = _simp(a)
            if isinstance(f, IRUnit):
                return UNIT
            if isinstance(f, IRLam):
                uses = _count(f.body, f.param)
                if isinstance(a, _ATOMIC) or uses <= 1:
                    return _simp(_subst(f.body, f.param, a))
            return IRApp(f, a)
        case IRLam(p, b):
            return IRLam(p, _simp(b))
        case IRLet(p, v, b):
            v = _simp(v)
            b = _simp(b)
            uses = _count(b, p)
            if uses == 0:
                return b
            if uses == 1 or isinstance(v, _ATOMIC):
                return _simp(_subst(b, p, v))
            return IRLet(p, v, b)
        case IRTuple(items):
            return IRTuple(tuple(_simp(i) for i in items))
        case IRProj(t, i):
            t = _simp(t)
            if isinstance(t, IRTuple):
                return t.items[i]
            return IRProj(t, i)
        case IRTag(o, t, args):
            return IRTag(o, t, tuple(_simp(a) for a in args))
        case IRSwitch(scrut, cases):
            scrut = _simp(scrut)
            if isinstance(scrut, IRTag):
                for tag, params, body in cases:
                    if tag == scrut.tag:
                        for p, v in zip(params, scrut.args):
                            body = _subst(body, p, v)
                        return _simp(body)
            return IRSwitch(scrut, tuple((t, ps, _simp(b)) for t, ps, b in cases))
        case IRThunk(b):
            b = _simp(b)
            if isinstance(b, IRForce):
                return b.e
            return IRThunk(b)
        case IRForce(e):
            e = _simp(e)
            if isinstance(e, IRThunk):
                return e.body
            return IRForce(e)
        case _:
            return ir


# --- whole-program extraction -----------------------------------------------


@dataclass
class ExtractedProgram:
    helpers: list[tuple[str, IR]]  # per-signature eliminator helpers
    globals: list[tuple[str, IR]]  # in declaration order
    subset_pairs_erased: int


def extract_program(genv, translated: list[tuple]) -> ExtractedProgram:
    ex = Extractor(genv)
    out: list[tuple[str, IR]] = []
    for d in translated:
        if d[0] == "postulate":
            continue  # referenced through the prim table or erased
        _, name, _ty, body = d
        out.append((name, simplify(ex.erase(body))))
    helpers = [
        (name, simplify(body))
        for _, (name, body) in sorted(ex.helpers.items())
    ]
    return ExtractedProgram(helpers, out, ex.subset_pairs_erased)


def scan_tags_ir(ir: IR) -> list[str]:
    """Origins of all constructor allocations in an IR tree."""
    found: list[str] = []

    def walk(u: IR):
        match u:
            case IRTag(origin, _, args):
                found.append(origin)
                for a in args:
                    walk(a)
            case IRLam(_, b) | IRThunk(b):
                walk(b)
            case IRApp(f, a):
                walk(f)
                walk(a)
            case IRLet(_, v, b):
                walk(v)
                walk(b)
            case IRTuple(items):
                for i in items:
                    walk(i)
            case IRProj(t, _):
                walk(t)
            case IRSwitch(scrut, cases):
                walk(scrut)
                for _, _, b in cases:
                    walk(b)
            case IRForce(e):
                walk(e)
            case _:
                pass

    walk(ir)
    return found
