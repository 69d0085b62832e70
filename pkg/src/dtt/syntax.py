"""Core term language: MLTT plus data types, Repr, and subset pairs.

Terms use de Bruijn indices. Binders are implicit: `Pi.cod`, `Lam.body`,
`Sigma.snd_ty`, `Subset.refine` bind one variable, `J.motive` binds three
(left endpoint, right endpoint, proof), `J.case` binds one. Signatures are
interned globally and referenced by integer id; data nodes carry their
inductive algebra spine inline (`None` means the default algebra, whose
carrier is the data type itself).
"""

from __future__ import annotations

from dataclasses import dataclass, field


Spine = tuple["Term", ...]


@dataclass(frozen=True)
class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    index: int


@dataclass(frozen=True)
class Universe(Term):
    pass


@dataclass(frozen=True)
class Pi(Term):
    dom: Term
    cod: Term  # binds 1


@dataclass(frozen=True)
class Lam(Term):
    body: Term  # binds 1


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Sigma(Term):
    fst_ty: Term
    snd_ty: Term  # binds 1


@dataclass(frozen=True)
class Pair(Term):
    a: Term
    b: Term


@dataclass(frozen=True)
class Fst(Term):
    p: Term


@dataclass(frozen=True)
class Snd(Term):
    p: Term


@dataclass(frozen=True)
class Subset(Term):
    """The usage-aware subset former { x : base | refine }."""

    base: Term
    refine: Term  # binds 1


@dataclass(frozen=True)
class SPair(Term):
    a: Term
    b: Term  # erased at runtime, ignored by conversion


@dataclass(frozen=True)
class SFst(Term):
    p: Term


@dataclass(frozen=True)
class SSnd(Term):
    """Erased projection of the refinement witness; extraction maps it to unit."""

    p: Term


@dataclass(frozen=True)
class Eq(Term):
    ty: Term
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Refl(Term):
    a: Term


@dataclass(frozen=True)
class J(Term):
    motive: Term  # binds 3: a, b, p
    case: Term  # binds 1: a
    proof: Term


@dataclass(frozen=True)
class Unit(Term):
    pass


@dataclass(frozen=True)
class Tt(Term):
    pass


@dataclass(frozen=True)
class DataTy(Term):
    sig: int
    algebra: Spine | None  # None = default algebra
    indices: Spine


@dataclass(frozen=True)
class Ctor(Term):
    sig: int
    op: int
    algebra: Spine | None
    args: Spine


@dataclass(frozen=True)
class Elim(Term):
    sig: int
    algebra: Spine | None
    motive: Term
    methods: Spine
    indices: Spine
    scrutinee: Term


@dataclass(frozen=True)
class ReprTy(Term):
    inner: Term


@dataclass(frozen=True)
class ReprTm(Term):
    inner: Term


@dataclass(frozen=True)
class UnreprTm(Term):
    inner: Term


@dataclass(frozen=True)
class Global(Term):
    name: str


@dataclass(frozen=True)
class Post(Term):
    name: str


U = Universe()
UNIT = Unit()
TT = Tt()


# --- signatures -------------------------------------------------------------


@dataclass(frozen=True)
class Operation:
    __slots__ = ()


@dataclass(frozen=True)
class OpExt(Operation):
    """(a : dom) ->ext rest; rest binds the argument."""

    dom: Term
    rest: Operation


@dataclass(frozen=True)
class OpInt(Operation):
    """iota indices ->int rest; the recursive argument binds nothing in rest."""

    indices: Spine
    rest: Operation


@dataclass(frozen=True)
class OpRet(Operation):
    indices: Spine


@dataclass(frozen=True)
class Signature:
    """Index telescope plus labelled operations. Closed: formed at top level."""

    name: str
    indices: tuple[Term, ...]  # entry k typed under entries 0..k-1
    ops: tuple[tuple[str, Operation], ...]

    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.ops)


class SignatureTable:
    """Global interning table for signatures."""

    def __init__(self) -> None:
        self._sigs: list[Signature] = []

    def intern(self, sig: Signature) -> int:
        self._sigs.append(sig)
        return len(self._sigs) - 1

    def replace(self, sid: int, sig: Signature) -> None:
        self._sigs[sid] = sig

    def __getitem__(self, sid: int) -> Signature:
        return self._sigs[sid]

    def __len__(self) -> int:
        return len(self._sigs)

    def all(self) -> list[tuple[int, Signature]]:
        return list(enumerate(self._sigs))


# --- shifting and substitution ----------------------------------------------


def _map_spine(f, sp: Spine | None):
    if sp is None:
        return None
    return tuple(f(t) for t in sp)


def shift(t: Term, amount: int, cutoff: int = 0) -> Term:
    """Add `amount` to every free index >= cutoff."""
    if amount == 0:
        return t
    match t:
        case Var(i):
            return Var(i + amount) if i >= cutoff else t
        case Universe() | Unit() | Tt() | Global(_) | Post(_):
            return t
        case Pi(d, c):
            return Pi(shift(d, amount, cutoff), shift(c, amount, cutoff + 1))
        case Lam(b):
            return Lam(shift(b, amount, cutoff + 1))
        case App(f, a):
            return App(shift(f, amount, cutoff), shift(a, amount, cutoff))
        case Sigma(a, b):
            return Sigma(shift(a, amount, cutoff), shift(b, amount, cutoff + 1))
        case Pair(a, b):
            return Pair(shift(a, amount, cutoff), shift(b, amount, cutoff))
        case Fst(p):
            return Fst(shift(p, amount, cutoff))
        case Snd(p):
            return Snd(shift(p, amount, cutoff))
        case Subset(a, b):
            return Subset(shift(a, amount, cutoff), shift(b, amount, cutoff + 1))
        case SPair(a, b):
            return SPair(shift(a, amount, cutoff), shift(b, amount, cutoff))
        case SFst(p):
            return SFst(shift(p, amount, cutoff))
        case SSnd(p):
            return SSnd(shift(p, amount, cutoff))
        case Eq(ty, l, r):
            return Eq(shift(ty, amount, cutoff), shift(l, amount, cutoff), shift(r, amount, cutoff))
        case Refl(a):
            return Refl(shift(a, amount, cutoff))
        case J(m, c, p):
            return J(shift(m, amount, cutoff + 3), shift(c, amount, cutoff + 1), shift(p, amount, cutoff))
        case DataTy(s, g, d):
            sh = lambda x: shift(x, amount, cutoff)
            return DataTy(s, _map_spine(sh, g), _map_spine(sh, d))
        case Ctor(s, o, g, v):
            sh = lambda x: shift(x, amount, cutoff)
            return Ctor(s, o, _map_spine(sh, g), _map_spine(sh, v))
        case Elim(s, g, m, ms, ix, x):
            sh = lambda y: shift(y, amount, cutoff)
            return Elim(s, _map_spine(sh, g), sh(m), _map_spine(sh, ms), _map_spine(sh, ix), sh(x))
        case ReprTy(a):
            return ReprTy(shift(a, amount, cutoff))
        case ReprTm(a):
            return ReprTm(shift(a, amount, cutoff))
        case UnreprTm(a):
            return UnreprTm(shift(a, amount, cutoff))
    raise AssertionError(f"shift: unhandled node {t!r}")


def subst(t: Term, args: Spine, depth: int = 0) -> Term:
    """Simultaneous substitution of `args` for Var(depth)..Var(depth+len-1).

    `args[k]` replaces Var(depth + k); indices above the cut are lowered by
    len(args). Capture is avoided by shifting the replacements under binders.
    """
    n = len(args)
    match t:
        case Var(i):
            if i < depth:
                return t
            if i < depth + n:
                return shift(args[i - depth], depth)
            return Var(i - n)
        case Universe() | Unit() | Tt() | Global(_) | Post(_):
            return t
        case Pi(d, c):
            return Pi(subst(d, args, depth), subst(c, args, depth + 1))
        case Lam(b):
            return Lam(subst(b, args, depth + 1))
        case App(f, a):
            return App(subst(f, args, depth), subst(a, args, depth))
        case Sigma(a, b):
            return Sigma(subst(a, args, depth), subst(b, args, depth + 1))
        case Pair(a, b):
            return Pair(subst(a, args, depth), subst(b, args, depth))
        case Fst(p):
            return Fst(subst(p, args, depth))
        case Snd(p):
            return Snd(subst(p, args, depth))
        case Subset(a, b):
            return Subset(subst(a, args, depth), subst(b, args, depth + 1))
        case SPair(a, b):
            return SPair(subst(a, args, depth), subst(b, args, depth))
        case SFst(p):
            return SFst(subst(p, args, depth))
        case SSnd(p):
            return SSnd(subst(p, args, depth))
        case Eq(ty, l, r):
            return Eq(subst(ty, args, depth), subst(l, args, depth), subst(r, args, depth))
        case Refl(a):
            return Refl(subst(a, args, depth))
        case J(m, c, p):
            return J(subst(m, args, depth + 3), subst(c, args, depth + 1), subst(p, args, depth))
        case DataTy(s, g, d):
            sb = lambda x: subst(x, args, depth)
            return DataTy(s, _map_spine(sb, g), _map_spine(sb, d))
        case Ctor(s, o, g, v):
            sb = lambda x: subst(x, args, depth)
            return Ctor(s, o, _map_spine(sb, g), _map_spine(sb, v))
        case Elim(s, g, m, ms, ix, x):
            sb = lambda y: subst(y, args, depth)
            return Elim(s, _map_spine(sb, g), sb(m), _map_spine(sb, ms), _map_spine(sb, ix), sb(x))
        case ReprTy(a):
            return ReprTy(subst(a, args, depth))
        case ReprTm(a):
            return ReprTm(subst(a, args, depth))
        case UnreprTm(a):
            return UnreprTm(subst(a, args, depth))
    raise AssertionError(f"subst: unhandled node {t!r}")


def subst1(t: Term, a: Term) -> Term:
    return subst(t, (a,))


def apps(f: Term, args) -> Term:
    for a in args:
        f = App(f, a)
    return f


def lams(n: int, body: Term) -> Term:
    for _ in range(n):
        body = Lam(body)
    return body


def pis(doms, cod: Term) -> Term:
    for d in reversed(list(doms)):
        cod = Pi(d, cod)
    return cod


def var_spine(n: int) -> Spine:
    """Vars (n-1, ..., 0): the n innermost binders in declaration order."""
    return tuple(Var(n - 1 - k) for k in range(n))


def beta_apps(f: Term, args) -> Term:
    """Apply, contracting leading lambda redexes so dumps stay stable."""
    args = list(args)
    while args and isinstance(f, Lam):
        f = subst1(f.body, args.pop(0))
    return apps(f, args)


# --- contexts and telescopes -------------------------------------------------


def extend_context(ctx: tuple[Term, ...], tel: tuple[Term, ...]) -> tuple[Term, ...]:
    """Append a telescope to a context, entry by entry (types stay as written:
    entry k of `tel` is typed under ctx + entries 0..k-1, which is exactly the
    shape a context stores)."""
    return tuple(ctx) + tuple(tel)


def spine_project(spine: Spine, key) -> Term:
    """Extract an entry from a spine by position or by label list lookup."""
    if isinstance(key, int):
        if 0 <= key < len(spine):
            return spine[key]
        raise UnknownLabel(f"spine index {key} out of range (length {len(spine)})")
    raise UnknownLabel(f"unsupported spine key {key!r}")


class UnknownLabel(Exception):
    pass


def scope_ok(t: Term, depth: int) -> bool:
    """Every free index is below `depth`."""
    match t:
        case Var(i):
            return i < depth
        case Universe() | Unit() | Tt() | Global(_) | Post(_):
            return True
        case Pi(d, c) | Sigma(d, c) | Subset(d, c):
            return scope_ok(d, depth) and scope_ok(c, depth + 1)
        case Lam(b):
            return scope_ok(b, depth + 1)
        case App(f, a) | Pair(f, a) | SPair(f, a):
            return scope_ok(f, depth) and scope_ok(a, depth)
        case Fst(p) | Snd(p) | SFst(p) | SSnd(p) | Refl(p) | ReprTy(p) | ReprTm(p) | UnreprTm(p):
            return scope_ok(p, depth)
        case Eq(ty, l, r):
            return all(scope_ok(x, depth) for x in (ty, l, r))
        case J(m, c, p):
            return scope_ok(m, depth + 3) and scope_ok(c, depth + 1) and scope_ok(p, depth)
        case DataTy(_, g, d):
            return all(scope_ok(x, depth) for x in (g or ())) and all(scope_ok(x, depth) for x in d)
        case Ctor(_, _, g, v):
            return all(scope_ok(x, depth) for x in (g or ())) and all(scope_ok(x, depth) for x in v)
        case Elim(_, g, m, ms, ix, x):
            parts = list(g or ()) + [m] + list(ms) + list(ix) + [x]
            return all(scope_ok(p, depth) for p in parts)
    raise AssertionError(f"scope_ok: unhandled node {t!r}")


# --- s-expression dump --------------------------------------------------------


def _sp(items) -> str:
    return " ".join(items)


def dump(t: Term) -> str:
    """Parenthesized dump with the stable node tags of the core format."""
    match t:
        case Var(i):
            return f"(var {i})"
        case Universe():
            return "U"
        case Pi(d, c):
            return f"(pi {dump(d)} {dump(c)})"
        case Lam(b):
            return f"(lam {dump(b)})"
        case App(f, a):
            return f"(app {dump(f)} {dump(a)})"
        case Sigma(a, b):
            return f"(sig {dump(a)} {dump(b)})"
        case Pair(a, b):
            return f"(pair {dump(a)} {dump(b)})"
        case Fst(p):
            return f"(fst {dump(p)})"
        case Snd(p):
            return f"(snd {dump(p)})"
        case Subset(a, b):
            return f"(sub {dump(a)} {dump(b)})"
        case SPair(a, b):
            return f"(spair {dump(a)} {dump(b)})"
        case SFst(p):
            return f"(sfst {dump(p)})"
        case SSnd(p):
            return f"(ssnd {dump(p)})"
        case Eq(ty, l, r):
            return f"(eq {dump(ty)} {dump(l)} {dump(r)})"
        case Refl(a):
            return f"(refl {dump(a)})"
        case J(m, c, p):
            return f"(J {dump(m)} {dump(c)} {dump(p)})"
        case Unit():
            return "unit"
        case Tt():
            return "tt"
        case DataTy(s, g, d):
            return f"(data {s} {_dump_alg(g)} ({_sp(map(dump, d))}))"
        case Ctor(s, o, g, v):
            return f"(ctor {s} {o} {_dump_alg(g)} ({_sp(map(dump, v))}))"
        case Elim(s, g, m, ms, ix, x):
            return (
                f"(elim {s} {_dump_alg(g)} {dump(m)} ({_sp(map(dump, ms))}) "
                f"({_sp(map(dump, ix))}) {dump(x)})"
            )
        case ReprTy(a):
            return f"(Repr {dump(a)})"
        case ReprTm(a):
            return f"(repr {dump(a)})"
        case UnreprTm(a):
            return f"(unrepr {dump(a)})"
        case Global(n):
            return f"(global {n})"
        case Post(n):
            return f"(post {n})"
    raise AssertionError(f"dump: unhandled node {t!r}")


def _dump_alg(g: Spine | None) -> str:
    if g is None:
        return "default"
    return f"({_sp(map(dump, g))})"


def dump_op(op: Operation) -> str:
    match op:
        case OpExt(d, rest):
            return f"(ext {dump(d)} {dump_op(rest)})"
        case OpInt(ix, rest):
            return f"(int ({_sp(map(dump, ix))}) {dump_op(rest)})"
        case OpRet(ix):
            return f"(ret ({_sp(map(dump, ix))}))"
    raise AssertionError(f"dump_op: unhandled {op!r}")


def dump_signature(sid: int, sig: Signature) -> str:
    tel = _sp(map(dump, sig.indices))
    ops = _sp(f"({label} {dump_op(op)})" for label, op in sig.ops)
    return f"(signature {sid} {sig.name} ({tel}) ({ops}))"
