"""Bidirectional elaboration of surface declarations into the core language.

Ordinary definitions become globals that unfold during evaluation. Data
declarations intern a signature and register the type former, constructors
and eliminator as inline globals (closed terms substituted at use sites), so
a later repr block can swap the algebra for subsequent declarations without
disturbing already-elaborated terms. Repr blocks verify a full inductive
algebra: carrier, one image per constructor, an eliminator image, and one
coherence proof per operation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import semantics as sem
from . import sigs
from . import surface as sf
from . import syntax as s
from .semantics import V_U, V_UNIT, Value, World, fresh
from .syntax import Term


class ElabError(Exception):
    def __init__(
        self,
        code: str,
        msg: str,
        span: tuple[int, int] = (0, 0),
        expected: Term | None = None,
        actual: Term | None = None,
    ):
        super().__init__(msg)
        self.code = code
        self.msg = msg
        self.span = span
        self.expected = expected
        self.actual = actual


@dataclass
class Ctx:
    names: tuple[str, ...] = ()
    types: tuple[Value, ...] = ()
    env: tuple[Value, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.names)

    def bind(self, name: str, vty: Value) -> "Ctx":
        return Ctx(
            (name,) + self.names,
            (vty,) + self.types,
            (fresh(self.depth),) + self.env,
        )

    def bind_def(self, name: str, vty: Value, v: Value) -> "Ctx":
        return Ctx((name,) + self.names, (vty,) + self.types, (v,) + self.env)

    def lookup(self, name: str):
        for i, n in enumerate(self.names):
            if n == name:
                return i, self.types[i]
        return None


@dataclass
class DataInfo:
    name: str
    sig_id: int
    gamma: tuple[Term, ...] | None
    ctor_labels: tuple[str, ...]


@dataclass
class GlobalEnv:
    world: World = field(default_factory=World)
    entries: dict[str, tuple] = field(default_factory=dict)  # name -> (kind, ...)
    decls: list[tuple] = field(default_factory=list)  # ordered for translation
    data: dict[str, DataInfo] = field(default_factory=dict)
    repr_fn: dict[str, Term] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    coherence_required: bool = True
    _tyvals: dict[str, Value] = field(default_factory=dict)

    def has(self, name: str) -> bool:
        return name in self.entries

    def type_value(self, name: str) -> Value:
        v = self._tyvals.get(name)
        if v is None:
            ty = self.entries[name][1]
            v = sem.evaluate(self.world, ty, ())
            self._tyvals[name] = v
        return v

    def add_def(self, name: str, ty: Term, body: Term, span=(0, 0)) -> None:
        self._claim(name, span)
        self.entries[name] = ("def", ty, body)
        self.world.define(name, body)
        self.decls.append(("def", name))

    def add_postulate(self, name: str, ty: Term, span=(0, 0)) -> None:
        self._claim(name, span)
        self.entries[name] = ("postulate", ty)
        self.decls.append(("postulate", name))

    def add_inline(self, name: str, ty: Term, term: Term, span=(0, 0)) -> None:
        self._claim(name, span)
        self.entries[name] = ("inline", ty, term)

    def replace_inline(self, name: str, ty: Term, term: Term) -> None:
        self.entries[name] = ("inline", ty, term)
        self._tyvals.pop(name, None)

    def _claim(self, name: str, span) -> None:
        if name in self.entries:
            raise ElabError("DuplicateName", f"{name!r} is already declared", span)


def ev(genv: GlobalEnv, ctx: Ctx, t: Term) -> Value:
    return sem.evaluate(genv.world, t, ctx.env)


def qt(genv: GlobalEnv, v: Value, depth: int) -> Term:
    return sem.quote(genv.world, v, depth)


def conv(genv: GlobalEnv, a: Value, b: Value, depth: int) -> bool:
    return sem.convertible(genv.world, a, b, depth)


# --- terms ---------------------------------------------------------------------


def infer(genv: GlobalEnv, ctx: Ctx, e: sf.STerm) -> tuple[Term, Value]:
    match e:
        case sf.SVar(name, span):
            hit = ctx.lookup(name)
            if hit is not None:
                return s.Var(hit[0]), hit[1]
            if genv.has(name):
                entry = genv.entries[name]
                vty = genv.type_value(name)
                if entry[0] == "def":
                    return s.Global(name), vty
                if entry[0] == "postulate":
                    return s.Post(name), vty
                return entry[2], vty
            raise ElabError("UnboundVariable", f"unbound name {name!r}", span)
        case sf.SU(_):
            return s.U, V_U
        case sf.SUnitTy(_):
            return s.UNIT, V_U
        case sf.STt(_):
            return s.TT, V_UNIT
        case sf.SNum(n, span):
            return _numeral(genv, n, span)
        case sf.SPi(name, dom, cod, _):
            dt = check(genv, ctx, dom, V_U)
            ct = check(genv, ctx.bind(name, ev(genv, ctx, dt)), cod, V_U)
            return s.Pi(dt, ct), V_U
        case sf.SSigma(name, a, b, _):
            at = check(genv, ctx, a, V_U)
            bt = check(genv, ctx.bind(name, ev(genv, ctx, at)), b, V_U)
            return s.Sigma(at, bt), V_U
        case sf.SSubset(name, a, b, _):
            at = check(genv, ctx, a, V_U)
            bt = check(genv, ctx.bind(name, ev(genv, ctx, at)), b, V_U)
            return s.Subset(at, bt), V_U
        case sf.SApp(f, a, span):
            ft, vf = infer(genv, ctx, f)
            if not isinstance(vf, sem.VPi):
                raise ElabError(
                    "NotAFunction",
                    "application head is not a function",
                    span,
                    actual=qt(genv, vf, ctx.depth),
                )
            at = check(genv, ctx, a, vf.dom)
            va = ev(genv, ctx, at)
            return s.App(ft, at), sem.apply_closure(genv.world, vf.cod, va)
        case sf.SAnn(tm, ty, _):
            tt = check(genv, ctx, ty, V_U)
            vty = ev(genv, ctx, tt)
            return check(genv, ctx, tm, vty), vty
        case sf.SProj(kind, arg, span):
            at, vt = infer(genv, ctx, arg)
            if kind in ("fst", "snd"):
                if not isinstance(vt, sem.VSigma):
                    raise ElabError(
                        "NotAPair",
                        f"{kind} applied to a non-pair",
                        span,
                        actual=qt(genv, vt, ctx.depth),
                    )
                if kind == "fst":
                    return s.Fst(at), vt.fst_ty
                va = sem.vfst(genv.world, ev(genv, ctx, at))
                return s.Snd(at), sem.apply_closure(genv.world, vt.snd_ty, va)
            if not isinstance(vt, sem.VSubset):
                raise ElabError(
                    "NotAPair",
                    f"{kind} applied to a non-subset-pair",
                    span,
                    actual=qt(genv, vt, ctx.depth),
                )
            if kind == "sfst":
                return s.SFst(at), vt.base
            va = sem.vsfst(genv.world, ev(genv, ctx, at))
            return s.SSnd(at), sem.apply_closure(genv.world, vt.refine, va)
        case sf.SEqE(l, r, _):
            try:
                lt, vt = infer(genv, ctx, l)
                rt = check(genv, ctx, r, vt)
            except ElabError as err:
                if err.code != "CannotInfer":
                    raise
                rt, vt = infer(genv, ctx, r)
                lt = check(genv, ctx, l, vt)
            return s.Eq(qt(genv, vt, ctx.depth), lt, rt), V_U
        case sf.SRefl(arg, span):
            if arg is None:
                raise ElabError("CannotInfer", "bare refl needs an expected equality type", span)
            at, vt = infer(genv, ctx, arg)
            va = ev(genv, ctx, at)
            return s.Refl(at), sem.VEq(vt, va, va)
        case sf.SJ(m, c, p, span):
            return _infer_j(genv, ctx, m, c, p, span)
        case sf.SReprT(a, _):
            at = check(genv, ctx, a, V_U)
            return s.ReprTy(at), V_U
        case sf.SReprE(a, _):
            at, vt = infer(genv, ctx, a)
            return s.ReprTm(at), sem.vrepr_ty(genv.world, vt)
        case sf.SUnreprE(_, span):
            raise ElabError("CannotInfer", "unrepr needs an expected type", span)
        case sf.SLam(params, body, span):
            return _infer_lam(genv, ctx, params, body, span)
        case sf.SPairE(_, _, span):
            raise ElabError("CannotInfer", "pair needs an expected type", span)
        case sf.SLet(name, ty, val, body, _):
            tt = check(genv, ctx, ty, V_U)
            vty = ev(genv, ctx, tt)
            vt = check(genv, ctx, val, vty)
            vv = ev(genv, ctx, vt)
            bt, bty = infer(genv, ctx.bind_def(name, vty, vv), body)
            return s.App(s.Lam(bt), vt), bty
        case sf.SLetPair(a, b, val, body, span):
            return _elab_letpair(genv, ctx, a, b, val, body, span, None)
    raise ElabError("CannotInfer", f"cannot infer a type for this term", e.span)


def _infer_lam(genv, ctx, params, body, span):
    if any(ann is None for _, ann in params):
        raise ElabError("CannotInfer", "unannotated lambda in inference position", span)
    name, ann = params[0]
    dt = check(genv, ctx, ann, V_U)
    vd = ev(genv, ctx, dt)
    inner = ctx.bind(name, vd)
    if len(params) == 1:
        bt, vb = infer(genv, inner, body)
    else:
        bt, vb = _infer_lam(genv, inner, params[1:], body, span)
    cod = qt(genv, vb, inner.depth)
    pi = s.Pi(dt, cod)
    return s.Lam(bt), ev(genv, ctx, pi)


def _infer_j(genv, ctx, m, c, p, span):
    pt, vp = infer(genv, ctx, p)
    if not isinstance(vp, sem.VEq):
        raise ElabError(
            "TypeMismatch",
            "J applied to a non-equality proof",
            span,
            actual=qt(genv, vp, ctx.depth),
        )
    w = genv.world
    vA = vp.ty
    mty = sem.VPi(
        vA,
        sem.HClosure(
            lambda a: sem.VPi(
                vA,
                sem.HClosure(
                    lambda b, a=a: sem.VPi(sem.VEq(vA, a, b), sem.HClosure(lambda _p: V_U, 1)),
                    1,
                ),
            ),
            1,
        ),
    )
    mt = check(genv, ctx, m, mty)
    vm = ev(genv, ctx, mt)
    cty = sem.VPi(
        vA,
        sem.HClosure(
            lambda a: sem.vapps(w, vm, (a, a, sem.VRefl(a))),
            1,
        ),
    )
    ct = check(genv, ctx, c, cty)
    motive = _open_binders(mt, 3)
    case = _open_binders(ct, 1)
    res = sem.vapps(w, vm, (vp.lhs, vp.rhs, ev(genv, ctx, pt)))
    return s.J(motive, case, pt), res


def _open_binders(t: Term, n: int) -> Term:
    """Turn an n-ary function term into a term under n binders. For literal
    lambda chains this is just unwrapping; otherwise apply to variables."""
    body = t
    for _ in range(n):
        if not isinstance(body, s.Lam):
            return s.beta_apps(s.shift(t, n), tuple(s.Var(n - 1 - k) for k in range(n)))
        body = body.body
    return body


def _numeral(genv, n: int, span) -> tuple[Term, Value]:
    for needed in ("zero", "succ"):
        if not genv.has(needed) or genv.entries[needed][0] != "inline":
            raise ElabError(
                "UnboundVariable",
                f"numeric literals need the data constructors zero/succ in scope",
                span,
            )
    zero = genv.entries["zero"][2]
    succ = genv.entries["succ"][2]
    assert isinstance(zero, s.Ctor)
    assert isinstance(succ, s.Lam) and isinstance(succ.body, s.Ctor)
    t: Term = zero
    proto = succ.body
    for _ in range(n):
        t = s.Ctor(proto.sig, proto.op, proto.algebra, (t,))
    return t, genv.type_value("zero")


def check(genv: GlobalEnv, ctx: Ctx, e: sf.STerm, vty: Value) -> Term:
    match e:
        case sf.SLam(params, body, span):
            return _check_lam(genv, ctx, params, body, vty, span)
        case sf.SPairE(a, b, span):
            w = genv.world
            if isinstance(vty, sem.VSigma):
                at = check(genv, ctx, a, vty.fst_ty)
                va = ev(genv, ctx, at)
                bt = check(genv, ctx, b, sem.apply_closure(w, vty.snd_ty, va))
                return s.Pair(at, bt)
            if isinstance(vty, sem.VSubset):
                at = check(genv, ctx, a, vty.base)
                va = ev(genv, ctx, at)
                bt = check(genv, ctx, b, sem.apply_closure(w, vty.refine, va))
                return s.SPair(at, bt)
            raise ElabError(
                "TypeMismatch",
                "pair checked against a non-pair type",
                span,
                expected=qt(genv, vty, ctx.depth),
            )
        case sf.SRefl(arg, span):
            if not isinstance(vty, sem.VEq):
                raise ElabError(
                    "TypeMismatch",
                    "refl checked against a non-equality type",
                    span,
                    expected=qt(genv, vty, ctx.depth),
                )
            if arg is not None:
                at = check(genv, ctx, arg, vty.ty)
                va = ev(genv, ctx, at)
                if not conv(genv, va, vty.lhs, ctx.depth):
                    raise ElabError(
                        "TypeMismatch",
                        "refl witness differs from the equation's left side",
                        span,
                        expected=qt(genv, vty.lhs, ctx.depth),
                        actual=qt(genv, va, ctx.depth),
                    )
            else:
                at = qt(genv, vty.lhs, ctx.depth)
            if not conv(genv, vty.lhs, vty.rhs, ctx.depth):
                raise ElabError(
                    "TypeMismatch",
                    "refl at an equation whose sides are not convertible",
                    span,
                    expected=qt(genv, vty.lhs, ctx.depth),
                    actual=qt(genv, vty.rhs, ctx.depth),
                )
            return s.Refl(at)
        case sf.SUnreprE(a, _):
            at = check(genv, ctx, a, sem.vrepr_ty(genv.world, vty))
            return s.UnreprTm(at)
        case sf.SReprE(sf.SUnreprE(b, _), _):
            # repr (unrepr b) has the type of b (Repr-Id rules), which lets
            # the eta golden checks elaborate without annotations.
            return s.ReprTm(s.UnreprTm(check(genv, ctx, b, vty)))
        case sf.SLet(name, ty, val, body, _):
            tt = check(genv, ctx, ty, V_U)
            vt0 = ev(genv, ctx, tt)
            vt = check(genv, ctx, val, vt0)
            vv = ev(genv, ctx, vt)
            bt = check(genv, ctx.bind_def(name, vt0, vv), body, vty)
            return s.App(s.Lam(bt), vt)
        case sf.SLetPair(a, b, val, body, span):
            t, _ = _elab_letpair(genv, ctx, a, b, val, body, span, vty)
            return t
        case _:
            t, got = infer(genv, ctx, e)
            if not conv(genv, got, vty, ctx.depth):
                raise ElabError(
                    "TypeMismatch",
                    "type mismatch",
                    e.span,
                    expected=qt(genv, vty, ctx.depth),
                    actual=qt(genv, got, ctx.depth),
                )
            return t


def _check_lam(genv, ctx, params, body, vty, span):
    if not params:
        return check(genv, ctx, body, vty)
    if not isinstance(vty, sem.VPi):
        raise ElabError(
            "TypeMismatch",
            "lambda checked against a non-function type",
            span,
            expected=qt(genv, vty, ctx.depth),
        )
    name, ann = params[0]
    if ann is not None:
        at = check(genv, ctx, ann, V_U)
        va = ev(genv, ctx, at)
        if not conv(genv, va, vty.dom, ctx.depth):
            raise ElabError(
                "TypeMismatch",
                f"annotation on {name!r} differs from the expected domain",
                span,
                expected=qt(genv, vty.dom, ctx.depth),
                actual=qt(genv, va, ctx.depth),
            )
    inner = ctx.bind(name, vty.dom)
    cod = sem.apply_closure(genv.world, vty.cod, fresh(ctx.depth))
    return s.Lam(_check_lam(genv, inner, params[1:], body, cod, span))


def _elab_letpair(genv, ctx, a, b, val, body, span, vty):
    vt, vvt = infer(genv, ctx, val)
    w = genv.world
    vv = ev(genv, ctx, vt)
    if isinstance(vvt, sem.VSubset):
        fst_t, fst_v = s.SFst(vt), sem.vsfst(w, vv)
        aty = vvt.base
        bty = sem.apply_closure(w, vvt.refine, fst_v)
        snd_t, snd_v = s.SSnd(vt), sem.vssnd(w, vv)
    elif isinstance(vvt, sem.VSigma):
        fst_t, fst_v = s.Fst(vt), sem.vfst(w, vv)
        aty = vvt.fst_ty
        bty = sem.apply_closure(w, vvt.snd_ty, fst_v)
        snd_t, snd_v = s.Snd(vt), sem.vsnd(w, vv)
    else:
        raise ElabError(
            "TypeMismatch",
            "let-pair on a value that is not a pair",
            span,
            actual=qt(genv, vvt, ctx.depth),
        )
    inner = ctx.bind_def(a, aty, fst_v).bind_def(b, bty, snd_v)
    if vty is None:
        bt, bty2 = infer(genv, inner, body)
    else:
        bt, bty2 = check(genv, inner, body, vty), vty
    term = s.App(s.App(s.Lam(s.Lam(bt)), fst_t), snd_t)
    return term, bty2


# --- declarations -----------------------------------------------------------------


def check_type_closed(genv: GlobalEnv, e: sf.STerm) -> tuple[Term, Value]:
    t = check(genv, Ctx(), e, V_U)
    return t, sem.evaluate(genv.world, t, ())


def _contains_sig(t: Term, sid: int) -> bool:
    found = False

    def walk(u):
        nonlocal found
        if found:
            return
        match u:
            case s.DataTy(k, g, d):
                if k == sid:
                    found = True
                    return
                for x in (g or ()) + d:
                    walk(x)
            case s.Ctor(k, _, g, v):
                if k == sid:
                    found = True
                    return
                for x in (g or ()) + v:
                    walk(x)
            case s.Elim(k, g, m, ms, ix, x):
                if k == sid:
                    found = True
                    return
                for y in (g or ()) + (m,) + ms + ix + (x,):
                    walk(y)
            case s.Var(_) | s.Universe() | s.Unit() | s.Tt() | s.Global(_) | s.Post(_):
                pass
            case s.Pi(d, c) | s.Sigma(d, c) | s.Subset(d, c):
                walk(d)
                walk(c)
            case s.Lam(b):
                walk(b)
            case s.App(f, a) | s.Pair(f, a) | s.SPair(f, a):
                walk(f)
                walk(a)
            case s.Fst(p) | s.Snd(p) | s.SFst(p) | s.SSnd(p) | s.Refl(p) | s.ReprTy(p) | s.ReprTm(p) | s.UnreprTm(p):
                walk(p)
            case s.Eq(ty, l, r):
                walk(ty)
                walk(l)
                walk(r)
            case s.J(m, c, p):
                walk(m)
                walk(c)
                walk(p)
            case _:
                raise AssertionError(f"unhandled node {u!r}")

    walk(t)
    return found


def _unrename(t: Term, binders: list[bool], span) -> Term:
    """Re-express a constructor-type component in ext-only numbering.

    binders[k] is True when the k-th enclosing Pi binder (outermost first) is
    an external argument; references to recursive binders are rejected.
    """

    def walk(u: Term, inner: int) -> Term:
        match u:
            case s.Var(i):
                if i < inner:
                    return u
                j = i - inner
                if j >= len(binders):
                    raise ElabError(
                        "BadIndexSpine",
                        "constructor type escapes its binders",
                        span,
                    )
                ref = len(binders) - 1 - j
                if not binders[ref]:
                    raise ElabError(
                        "BadIndexSpine",
                        "constructor type depends on a recursive argument",
                        span,
                    )
                ext_idx = sum(1 for b in binders[ref + 1 :] if b)
                return s.Var(inner + ext_idx)
            case s.Universe() | s.Unit() | s.Tt() | s.Global(_) | s.Post(_):
                return u
            case s.Pi(d, c):
                return s.Pi(walk(d, inner), walk(c, inner + 1))
            case s.Lam(b):
                return s.Lam(walk(b, inner + 1))
            case s.App(f, a):
                return s.App(walk(f, inner), walk(a, inner))
            case s.Sigma(d, c):
                return s.Sigma(walk(d, inner), walk(c, inner + 1))
            case s.Subset(d, c):
                return s.Subset(walk(d, inner), walk(c, inner + 1))
            case s.Pair(x, y):
                return s.Pair(walk(x, inner), walk(y, inner))
            case s.SPair(x, y):
                return s.SPair(walk(x, inner), walk(y, inner))
            case s.Fst(p):
                return s.Fst(walk(p, inner))
            case s.Snd(p):
                return s.Snd(walk(p, inner))
            case s.SFst(p):
                return s.SFst(walk(p, inner))
            case s.SSnd(p):
                return s.SSnd(walk(p, inner))
            case s.Eq(ty, l, r):
                return s.Eq(walk(ty, inner), walk(l, inner), walk(r, inner))
            case s.Refl(a):
                return s.Refl(walk(a, inner))
            case s.J(m, c, p):
                return s.J(walk(m, inner + 3), walk(c, inner + 1), walk(p, inner))
            case s.DataTy(k, g, d):
                return s.DataTy(
                    k,
                    None if g is None else tuple(walk(x, inner) for x in g),
                    tuple(walk(x, inner) for x in d),
                )
            case s.Ctor(k, o, g, v):
                return s.Ctor(
                    k,
                    o,
                    None if g is None else tuple(walk(x, inner) for x in g),
                    tuple(walk(x, inner) for x in v),
                )
            case s.Elim(k, g, m, ms, ix, x):
                return s.Elim(
                    k,
                    None if g is None else tuple(walk(y, inner) for y in g),
                    walk(m, inner),
                    tuple(walk(y, inner) for y in ms),
                    tuple(walk(y, inner) for y in ix),
                    walk(x, inner),
                )
            case s.ReprTy(a):
                return s.ReprTy(walk(a, inner))
            case s.ReprTm(a):
                return s.ReprTm(walk(a, inner))
            case s.UnreprTm(a):
                return s.UnreprTm(walk(a, inner))
        raise AssertionError(f"unhandled node {u!r}")

    return walk(t, 0)


def _parse_operation(genv: GlobalEnv, sid: int, ty_nf: Term, span) -> s.Operation:
    binders: list[bool] = []

    def go(t: Term) -> s.Operation:
        match t:
            case s.DataTy(k, _, d) if k == sid:
                return s.OpRet(tuple(_unrename(x, binders, span) for x in d))
            case s.Pi(dom, cod):
                if isinstance(dom, s.DataTy) and dom.sig == sid:
                    for x in dom.indices:
                        if _contains_sig(x, sid):
                            raise ElabError(
                                "BadIndexSpine",
                                "recursive occurrence indexed by the data type itself",
                                span,
                            )
                    ix = tuple(_unrename(x, binders, span) for x in dom.indices)
                    binders.append(False)
                    return s.OpInt(ix, go(cod))
                if _contains_sig(dom, sid):
                    raise ElabError(
                        "NegativeOccurrence",
                        "the data type occurs in a non-recursive argument position",
                        span,
                    )
                dom_ext = _unrename(dom, binders, span)
                binders.append(True)
                return s.OpExt(dom_ext, go(cod))
            case _:
                raise ElabError(
                    "BadIndexSpine",
                    "constructor must return the data type applied to its indices",
                    span,
                )

    return go(ty_nf)


def elab_data(genv: GlobalEnv, d: sf.DData) -> None:
    ctx = Ctx()
    delta: list[Term] = []
    for pname, pty in d.params:
        t = check(genv, ctx, pty, V_U)
        delta.append(t)
        ctx = ctx.bind(pname, ev(genv, ctx, t))
    sig0 = s.Signature(d.name, tuple(delta), ())
    sid = genv.world.sigs.intern(sig0)

    carrier_ty = s.pis(delta, s.U)
    carrier_tm = sigs.data_lam(sid, sig0, None)
    genv.add_inline(d.name, carrier_ty, carrier_tm, d.span)

    ops: list[tuple[str, s.Operation]] = []
    seen = set()
    for cname, cty, cspan in d.ctors:
        if cname in seen:
            raise ElabError("DuplicateName", f"duplicate constructor {cname!r}", cspan)
        seen.add(cname)
        t = check(genv, Ctx(), cty, V_U)
        nf = sem.normalize(genv.world, t)
        ops.append((cname, _parse_operation(genv, sid, nf, cspan)))

    sig = s.Signature(d.name, tuple(delta), tuple(ops))
    genv.world.sigs.replace(sid, sig)
    genv.data[d.name] = DataInfo(d.name, sid, None, tuple(label for label, _ in ops))
    _register_data_globals(genv, d.name, claim_span=d.span)


def _register_data_globals(genv: GlobalEnv, data_name: str, claim_span=(0, 0)) -> None:
    info = genv.data[data_name]
    sid = info.sig_id
    sig = genv.world.sig(sid)
    gamma = info.gamma
    carrier_ty = s.pis(sig.indices, s.U)
    genv.replace_inline(data_name, carrier_ty, sigs.data_lam(sid, sig, gamma))
    for i, (label, _) in enumerate(sig.ops):
        ty = sigs.ctor_type(sid, sig, gamma, i)
        tm = sigs.ctor_lam(sid, sig, gamma, i)
        if genv.has(label):
            genv.replace_inline(label, ty, tm)
        else:
            genv.add_inline(label, ty, tm, claim_span)
    ename = f"elim-{data_name}"
    ety = sigs.elim_type(sid, sig, gamma)
    etm = sigs.elim_lam(sid, sig, gamma)
    if genv.has(ename):
        genv.replace_inline(ename, ety, etm)
    else:
        genv.add_inline(ename, ety, etm, claim_span)


def _sigma_producer_type(sig: s.Signature, carrier: Term, alg: tuple[Term, ...]) -> Term:
    k = len(sig.ops)
    body: Term = sigs.section_type(sig, s.shift(carrier, 1 + k), s.Var(k))
    for i in reversed(range(k)):
        dpt = 1 + i
        body = s.Pi(
            sigs.displayed_entry(
                sig.ops[i][1], s.shift(carrier, dpt), s.shift(alg[i], dpt), s.Var(i)
            ),
            body,
        )
    return s.Pi(sigs.motive_type(sig, carrier), body)


def _coherence_obligation_type(
    sig: s.Signature, carrier: Term, alg: tuple[Term, ...], elim_image: Term, op_idx: int
) -> Term:
    k = len(sig.ops)
    dpt = 1 + k
    sigma = s.beta_apps(
        s.shift(elim_image, dpt), tuple(s.Var(dpt - 1 - j) for j in range(dpt))
    )
    entry = sigs.coherence_entry(
        sig.ops[op_idx][1],
        s.shift(carrier, dpt),
        s.shift(alg[op_idx], dpt),
        s.Var(k - 1 - op_idx),
        s.Var(k),
        sigma,
    )
    body: Term = entry
    for i in reversed(range(k)):
        d_i = 1 + i
        body = s.Pi(
            sigs.displayed_entry(
                sig.ops[i][1], s.shift(carrier, d_i), s.shift(alg[i], d_i), s.Var(i)
            ),
            body,
        )
    return s.Pi(sigs.motive_type(sig, carrier), body)


def elab_repr_data(genv: GlobalEnv, d: sf.DReprData) -> None:
    info = genv.data.get(d.target)
    if info is None:
        raise ElabError("UnboundVariable", f"repr block for unknown data type {d.target!r}", d.span)
    if info.gamma is not None:
        raise ElabError("DuplicateRepr", f"{d.target!r} already has a representation", d.span)
    sig = genv.world.sig(info.sig_id)
    nd = len(sig.indices)
    if len(d.index_names) != nd:
        raise ElabError(
            "BadIndexSpine",
            f"repr block binds {len(d.index_names)} index names, the data type has {nd}",
            d.span,
        )

    ctx = Ctx()
    for name, ty in zip(d.index_names, sig.indices):
        ctx = ctx.bind(name, sem.evaluate(genv.world, ty, ctx.env))
    carrier_body = check(genv, ctx, d.carrier, V_U)
    carrier = s.lams(nd, carrier_body)

    images: dict[str, Term] = {}
    by_label = {label: (tm, span) for label, tm, span in d.ctor_images}
    for label in by_label:
        if label not in info.ctor_labels:
            raise ElabError(
                "MissingCtorImage",
                f"repr block names {label!r}, which is not a constructor of {d.target!r}",
                by_label[label][1],
            )
    alg: list[Term] = []
    for i, (label, op) in enumerate(sig.ops):
        if label not in by_label:
            raise ElabError(
                "MissingCtorImage", f"repr block is missing an image for {label!r}", d.span
            )
        img_sf, ispan = by_label[label]
        want = sem.evaluate(genv.world, sigs.alg_entry(op, carrier), ())
        try:
            img = check(genv, Ctx(), img_sf, want)
        except ElabError as err:
            raise ElabError(
                "CtorImageTypeMismatch",
                f"image for constructor {label!r} has the wrong type: {err.msg}",
                ispan,
                expected=err.expected,
                actual=err.actual,
            ) from err
        alg.append(img)
        images[label] = img
    alg_t = tuple(alg)

    sigma_ty = sem.evaluate(genv.world, _sigma_producer_type(sig, carrier, alg_t), ())
    try:
        elim_img = check(genv, Ctx(), d.elim_image, sigma_ty)
    except ElabError as err:
        raise ElabError(
            "ElimImageTypeMismatch",
            f"eliminator image has the wrong type: {err.msg}",
            d.span,
            expected=err.expected,
            actual=err.actual,
        ) from err

    proofs: list[Term] = []
    for i, (label, op) in enumerate(sig.ops):
        obligation = _coherence_obligation_type(sig, carrier, alg_t, elim_img, i)
        want = sem.evaluate(genv.world, obligation, ())
        if i < len(d.coh_proofs):
            try:
                proofs.append(check(genv, Ctx(), d.coh_proofs[i], want))
                continue
            except ElabError as err:
                if genv.coherence_required:
                    raise ElabError(
                        "CoherenceMismatch",
                        f"coherence proof for {label!r} has the wrong type: {err.msg}",
                        d.span,
                        expected=err.expected,
                        actual=err.actual,
                    ) from err
                genv.warnings.append(
                    f"coherence proof for {d.target}.{label} rejected; postulating it"
                )
        else:
            if genv.coherence_required:
                raise ElabError(
                    "MissingCoherenceProof",
                    f"repr block is missing the coherence proof for {label!r}",
                    d.span,
                )
            genv.warnings.append(
                f"coherence proof for {d.target}.{label} missing; postulating it"
            )
        pname = f"{d.target}-{label}-coherence"
        if not genv.has(pname):
            genv.add_postulate(pname, obligation, d.span)
        proofs.append(s.Post(pname))
    if len(d.coh_proofs) > len(sig.ops):
        raise ElabError(
            "CoherenceMismatch",
            f"repr block has {len(d.coh_proofs)} coherence proofs for {len(sig.ops)} operations",
            d.span,
        )

    k = len(sig.ops)
    vars_mb = tuple(s.Var(k - j) for j in range(k + 1))
    sigma_part = s.beta_apps(s.shift(elim_img, 1 + k), vars_mb)
    coh_part: Term = s.TT
    for p in reversed(proofs):
        coh_part = s.Pair(s.beta_apps(s.shift(p, 1 + k), vars_mb), coh_part)
    kappa = s.lams(1 + k, s.Pair(sigma_part, coh_part))

    gamma = (carrier,) + alg_t + (kappa,)
    _check_gamma(genv, sig, gamma, d.span)
    info.gamma = gamma
    _register_data_globals(genv, d.target)


def _check_gamma(genv: GlobalEnv, sig: s.Signature, gamma: tuple[Term, ...], span) -> None:
    """Guard that the assembled spine matches S^INDA: the telescope entries,
    substituted by the spine prefix, must agree with the types each component
    was checked against while the block was elaborated."""
    tel = sigs.inductive_algebra_telescope(sig)
    if len(tel) != len(gamma):
        raise ElabError("CtorImageTypeMismatch", "inductive algebra has the wrong length", span)
    carrier = gamma[0]
    alg = gamma[1:-1]
    used = [s.pis(sig.indices, s.U)]
    used += [sigs.alg_entry(op, carrier) for _, op in sig.ops]
    used.append(sigs.induction_type(sig, alg, carrier))
    for k, entry in enumerate(tel):
        have = sem.evaluate(genv.world, s.subst(entry, tuple(reversed(gamma[:k]))), ())
        want = sem.evaluate(genv.world, used[k], ())
        if not conv(genv, have, want, 0):
            raise ElabError(
                "CtorImageTypeMismatch",
                f"inductive algebra component {k} does not fit S^INDA",
                span,
                expected=qt(genv, want, 0),
                actual=qt(genv, have, 0),
            )


def elab_repr_fn(genv: GlobalEnv, d: sf.DReprFn) -> None:
    if not genv.has(d.target) or genv.entries[d.target][0] != "def":
        raise ElabError(
            "UnboundVariable",
            f"function representation target {d.target!r} is not a defined global",
            d.span,
        )
    if d.target in genv.repr_fn:
        raise ElabError("DuplicateRepr", f"{d.target!r} already has a representation", d.span)
    from .translate import translate_term

    target_ty = genv.entries[d.target][1]
    want = sem.evaluate(genv.world, translate_term(genv, target_ty), ())
    img = check(genv, Ctx(), d.image, want)
    genv.repr_fn[d.target] = img


def elab_decl(genv: GlobalEnv, d: sf.Decl) -> None:
    match d:
        case sf.DDef(name, ty, body, span):
            t = check(genv, Ctx(), ty, V_U)
            vty = sem.evaluate(genv.world, t, ())
            b = check(genv, Ctx(), body, vty)
            genv.add_def(name, t, b, span)
        case sf.DPostulate(name, ty, span):
            t = check(genv, Ctx(), ty, V_U)
            genv.add_postulate(name, t, span)
        case sf.DData(_, _, _, _):
            elab_data(genv, d)
        case sf.DReprData(_, _, _, _, _, _, _):
            elab_repr_data(genv, d)
        case sf.DReprFn(_, _, _):
            elab_repr_fn(genv, d)
        case _:
            raise AssertionError(f"unhandled declaration {d!r}")


def check_program(decls, coherence_required: bool = True, trace=None) -> GlobalEnv:
    genv = GlobalEnv()
    genv.coherence_required = coherence_required
    genv.world.trace = trace
    for d in decls:
        elab_decl(genv, d)
    return genv
