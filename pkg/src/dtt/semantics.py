"""Normalization by evaluation.

Terms evaluate into a semantic domain of values; quoting reads values back
as beta-normal terms; conversion compares values with eta for functions,
pairs and unit, treating subset-pair second components as irrelevant.

The Repr rules are evaluated as oriented rewrites: `Repr` on a data type
computes to the carrier, repr/unrepr cancel eagerly, commute through
canonical lambdas/pairs/refl/codes, push past application spines toward the
neutral head, and push into stuck J/eliminator frames (for unrepr only when
the motive is Repr-headed). `repr` on a constructor computes to the algebra
operation applied to the inputs, with repr on the recursive ones.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import syntax as s
from .syntax import Signature, Term


class EvalError(Exception):
    pass


# --- values -------------------------------------------------------------------


class Value:
    __slots__ = ()


@dataclass(frozen=True)
class VUniverse(Value):
    pass


@dataclass(frozen=True)
class VUnit(Value):
    pass


@dataclass(frozen=True)
class VTt(Value):
    pass


class TClosure:
    """Term closure: body with `n` pending binders over a captured env."""

    __slots__ = ("env", "body", "n")

    def __init__(self, env, body: Term, n: int = 1):
        self.env = env
        self.body = body
        self.n = n

    def apply(self, world, *args: Value) -> Value:
        assert len(args) == self.n
        return evaluate(world, self.body, tuple(reversed(args)) + self.env)


class HClosure:
    """Host closure: a python function of `n` values."""

    __slots__ = ("fn", "n")

    def __init__(self, fn, n: int = 1):
        self.fn = fn
        self.n = n

    def apply(self, world, *args: Value) -> Value:
        assert len(args) == self.n
        return self.fn(*args)


@dataclass(frozen=True)
class VPi(Value):
    dom: Value
    cod: object  # closure


@dataclass(frozen=True)
class VLam(Value):
    clo: object


@dataclass(frozen=True)
class VSigma(Value):
    fst_ty: Value
    snd_ty: object


@dataclass(frozen=True)
class VPair(Value):
    a: Value
    b: Value


@dataclass(frozen=True)
class VSubset(Value):
    base: Value
    refine: object


@dataclass(frozen=True)
class VSPair(Value):
    a: Value
    b: Value


@dataclass(frozen=True)
class VEq(Value):
    ty: Value
    lhs: Value
    rhs: Value


@dataclass(frozen=True)
class VRefl(Value):
    a: Value


@dataclass(frozen=True)
class VDataTy(Value):
    sig: int
    algebra: tuple | None
    indices: tuple


@dataclass(frozen=True)
class VCtor(Value):
    sig: int
    op: int
    algebra: tuple | None
    args: tuple


@dataclass(frozen=True)
class VReprTy(Value):
    inner: Value


# Neutral heads


@dataclass(frozen=True)
class HVar:
    level: int


@dataclass(frozen=True)
class HPost:
    name: str


@dataclass(frozen=True)
class HUnrepr:
    """unrepr stuck on a canonical value (subset pair or constructor)."""

    inner: Value


# Neutral frames


@dataclass(frozen=True)
class FApp:
    arg: Value


@dataclass(frozen=True)
class FFst:
    pass


@dataclass(frozen=True)
class FSnd:
    pass


@dataclass(frozen=True)
class FSFst:
    pass


@dataclass(frozen=True)
class FSSnd:
    pass


@dataclass(frozen=True)
class FJ:
    motive: object  # 3-ary closure
    case: object  # 1-ary closure


@dataclass(frozen=True)
class FElim:
    sig: int
    algebra: tuple | None
    motive: Value
    methods: tuple
    indices: tuple


@dataclass(frozen=True)
class FRepr:
    pass


@dataclass(frozen=True)
class FUnrepr:
    pass


@dataclass(frozen=True)
class VNeutral(Value):
    head: object
    frames: tuple


V_U = VUniverse()
V_UNIT = VUnit()
V_TT = VTt()


_FRESH: dict[int, Value] = {}


def fresh(level: int) -> Value:
    v = _FRESH.get(level)
    if v is None:
        v = VNeutral(HVar(level), ())
        _FRESH[level] = v
    return v


class World:
    """Evaluation context: interned signatures and global definitions."""

    def __init__(self, sigs: s.SignatureTable | None = None):
        self.sigs = sigs if sigs is not None else s.SignatureTable()
        self._global_bodies: dict[str, Term] = {}
        self._global_values: dict[str, Value] = {}
        self._conv_cache: dict = {}
        self._quote_cache: dict = {}
        self.trace = None  # optional callable for --trace-conversion

    def sig(self, sid: int) -> Signature:
        return self.sigs[sid]

    def define(self, name: str, body: Term) -> None:
        self._global_bodies[name] = body
        self._global_values.pop(name, None)

    def global_val(self, name: str) -> Value:
        v = self._global_values.get(name)
        if v is None:
            body = self._global_bodies.get(name)
            if body is None:
                raise EvalError(f"unknown global {name!r}")
            v = evaluate(self, body, ())
            self._global_values[name] = v
        return v


# --- evaluation ----------------------------------------------------------------


def evaluate(world: World, t: Term, env: tuple) -> Value:
    match t:
        case s.Var(i):
            return env[i]
        case s.Universe():
            return V_U
        case s.Unit():
            return V_UNIT
        case s.Tt():
            return V_TT
        case s.Pi(d, c):
            return VPi(evaluate(world, d, env), TClosure(env, c))
        case s.Lam(b):
            return VLam(TClosure(env, b))
        case s.App(f, a):
            return vapp(world, evaluate(world, f, env), evaluate(world, a, env))
        case s.Sigma(a, b):
            return VSigma(evaluate(world, a, env), TClosure(env, b))
        case s.Pair(a, b):
            return VPair(evaluate(world, a, env), evaluate(world, b, env))
        case s.Fst(p):
            return vfst(world, evaluate(world, p, env))
        case s.Snd(p):
            return vsnd(world, evaluate(world, p, env))
        case s.Subset(a, b):
            return VSubset(evaluate(world, a, env), TClosure(env, b))
        case s.SPair(a, b):
            return VSPair(evaluate(world, a, env), evaluate(world, b, env))
        case s.SFst(p):
            return vsfst(world, evaluate(world, p, env))
        case s.SSnd(p):
            return vssnd(world, evaluate(world, p, env))
        case s.Eq(ty, l, r):
            return VEq(
                evaluate(world, ty, env),
                evaluate(world, l, env),
                evaluate(world, r, env),
            )
        case s.Refl(a):
            return VRefl(evaluate(world, a, env))
        case s.J(m, c, p):
            return vj(
                world,
                TClosure(env, m, 3),
                TClosure(env, c, 1),
                evaluate(world, p, env),
            )
        case s.DataTy(sid, g, d):
            return VDataTy(sid, _eval_spine(world, g, env), _eval_spine(world, d, env) or ())
        case s.Ctor(sid, op, g, v):
            return VCtor(sid, op, _eval_spine(world, g, env), _eval_spine(world, v, env) or ())
        case s.Elim(sid, g, m, ms, ix, x):
            return velim(
                world,
                sid,
                _eval_spine(world, g, env),
                evaluate(world, m, env),
                _eval_spine(world, ms, env) or (),
                _eval_spine(world, ix, env) or (),
                evaluate(world, x, env),
            )
        case s.ReprTy(a):
            return vrepr_ty(world, evaluate(world, a, env))
        case s.ReprTm(a):
            return vrepr(world, evaluate(world, a, env))
        case s.UnreprTm(a):
            return vunrepr(world, evaluate(world, a, env))
        case s.Global(n):
            return world.global_val(n)
        case s.Post(n):
            return VNeutral(HPost(n), ())
    raise AssertionError(f"evaluate: unhandled node {t!r}")


def _eval_spine(world, sp, env):
    if sp is None:
        return None
    return tuple(evaluate(world, t, env) for t in sp)


def apply_closure(world, clo, *args) -> Value:
    return clo.apply(world, *args)


def vapp(world, f: Value, a: Value) -> Value:
    match f:
        case VLam(clo):
            return apply_closure(world, clo, a)
        case VNeutral(h, frames):
            return VNeutral(h, frames + (FApp(a),))
    raise EvalError(f"application of non-function value {f!r}")


def vapps(world, f: Value, args) -> Value:
    for a in args:
        f = vapp(world, f, a)
    return f


def vfst(world, p: Value) -> Value:
    match p:
        case VPair(a, _):
            return a
        case VNeutral(h, frames):
            return VNeutral(h, frames + (FFst(),))
    raise EvalError(f"fst of non-pair {p!r}")


def vsnd(world, p: Value) -> Value:
    match p:
        case VPair(_, b):
            return b
        case VNeutral(h, frames):
            return VNeutral(h, frames + (FSnd(),))
    raise EvalError(f"snd of non-pair {p!r}")


def vsfst(world, p: Value) -> Value:
    match p:
        case VSPair(a, _):
            return a
        case VNeutral(h, frames):
            return VNeutral(h, frames + (FSFst(),))
    raise EvalError(f"sfst of non-subset-pair {p!r}")


def vssnd(world, p: Value) -> Value:
    match p:
        case VSPair(_, b):
            return b
        case VNeutral(h, frames):
            return VNeutral(h, frames + (FSSnd(),))
    raise EvalError(f"ssnd of non-subset-pair {p!r}")


def vj(world, motive, case, p: Value) -> Value:
    match p:
        case VRefl(a):
            return apply_closure(world, case, a)
        case VNeutral(h, frames):
            return VNeutral(h, frames + (FJ(motive, case),))
    raise EvalError(f"J on non-proof {p!r}")


class _IHThunk:
    """Memoized lazy inductive hypothesis: a unary function ignoring its
    (unit) argument; the recursive eliminator call runs at most once."""

    __slots__ = ("fn", "cell")

    n = 1

    def __init__(self, fn):
        self.fn = fn
        self.cell = None

    def apply(self, world, *_args) -> Value:
        if self.cell is None:
            self.cell = self.fn()
        return self.cell


def velim(world, sid, gv, mv, methods, ixv, xv: Value) -> Value:
    match xv:
        case VCtor(csid, op_idx, _cg, nu):
            if csid != sid:
                raise EvalError("eliminator applied to constructor of another signature")
            op = world.sig(sid).ops[op_idx][1]
            args = _displayed_args(world, sid, gv, mv, methods, op, nu)
            return vapps(world, methods[op_idx], args)
        case VNeutral(h, frames):
            return VNeutral(h, frames + (FElim(sid, gv, mv, methods, ixv),))
    raise EvalError(f"eliminator on non-data value {xv!r}")


def _displayed_args(world, sid, gv, mv, methods, op, nu):
    """Data-Comp: interleave the constructor inputs with lazily sampled
    recursive results (elim M beta $ nu)."""
    args = []
    ext_env: tuple = ()
    pos = 0
    while not isinstance(op, s.OpRet):
        v = nu[pos]
        args.append(v)
        if isinstance(op, s.OpExt):
            ext_env = (v,) + ext_env
        else:
            rec_ix = tuple(evaluate(world, d, ext_env) for d in op.indices)
            args.append(
                VLam(
                    _IHThunk(
                        lambda v=v, rec_ix=rec_ix: velim(
                            world, sid, gv, mv, methods, rec_ix, v
                        )
                    )
                )
            )
        pos += 1
        op = op.rest
    return args


# --- Repr ----------------------------------------------------------------------


def vrepr_ty(world, v: Value) -> Value:
    """Type-level Repr: Repr-Data plus the compatibility rules pushing Repr
    into codomains/components."""
    match v:
        case VDataTy(sid, g, d):
            if g is None:
                return v
            return vapps(world, g[0], d)
        case VPi(dom, cod):
            return VPi(dom, _wrap_cod(world, cod, vrepr_ty))
        case VSigma(a, b):
            return VSigma(a, _wrap_cod(world, b, vrepr_ty))
        case VSubset(a, b):
            return VSubset(a, _wrap_cod(world, b, vrepr_ty))
        case VEq(ty, l, r):
            return VEq(vrepr_ty(world, ty), vrepr(world, l), vrepr(world, r))
        case VUnit() | VUniverse():
            return v
        case VNeutral(_, _) | VReprTy(_):
            return VReprTy(v)
    # Repr of other canonical values can only arise from ill-typed input;
    # leave it stuck rather than guessing.
    return VReprTy(v)


def _wrap_cod(world, clo, f):
    return HClosure(lambda *args: f(world, apply_closure(world, clo, *args)), getattr(clo, "n", 1))


def _is_type_code(v: Value) -> bool:
    return isinstance(v, (VUniverse, VUnit, VPi, VSigma, VSubset, VEq, VDataTy, VReprTy))


def vrepr(world, v: Value) -> Value:
    match v:
        case VNeutral(_, _):
            return _repr_neutral(world, v)
        case VCtor(sid, op_idx, g, nu):
            flags = _rec_flags(world, sid, op_idx)
            nu2 = tuple(
                vrepr(world, a) if flags[k] else a for k, a in enumerate(nu)
            )
            if g is None:
                return VCtor(sid, op_idx, None, nu2)
            return vapps(world, g[1 + op_idx], nu2)
        case VLam(clo):
            return VLam(_wrap_cod(world, clo, vrepr))
        case VPair(a, b):
            return VPair(a, vrepr(world, b))
        case VSPair(a, b):
            return VSPair(a, vrepr(world, b))
        case VRefl(a):
            return VRefl(vrepr(world, a))
        case VTt():
            return v
    if _is_type_code(v):
        return v
    raise EvalError(f"repr on unsupported value {v!r}")


def vunrepr(world, v: Value) -> Value:
    match v:
        case VNeutral(_, _):
            return _unrepr_neutral(world, v)
        case VCtor(_, _, _, _) | VSPair(_, _):
            return VNeutral(HUnrepr(v), ())
        case VLam(clo):
            return VLam(_wrap_cod(world, clo, vunrepr))
        case VPair(a, b):
            return VPair(a, vunrepr(world, b))
        case VRefl(a):
            return VRefl(vunrepr(world, a))
        case VTt():
            return v
    if _is_type_code(v):
        return v
    raise EvalError(f"unrepr on unsupported value {v!r}")


def _rec_flags(world, sid, op_idx):
    from .sigs import op_rec_flags

    return op_rec_flags(world.sig(sid).ops[op_idx][1])


def _split_trailing_apps(frames):
    i = len(frames)
    while i > 0 and isinstance(frames[i - 1], FApp):
        i -= 1
    return i


def _repr_neutral(world, v: VNeutral) -> Value:
    frames = v.frames
    i = _split_trailing_apps(frames)
    trailing = frames[i:]
    if i > 0:
        fr = frames[i - 1]
        if isinstance(fr, FUnrepr):
            return VNeutral(v.head, frames[: i - 1] + trailing)
        if isinstance(fr, FJ):
            return VNeutral(v.head, frames[: i - 1] + (_repr_j_frame(world, fr),) + trailing)
        if isinstance(fr, FElim):
            return VNeutral(v.head, frames[: i - 1] + (_repr_elim_frame(world, fr),) + trailing)
        return VNeutral(v.head, frames[:i] + (FRepr(),) + trailing)
    # repr reached the head
    if isinstance(v.head, HUnrepr):
        return vapps(world, v.head.inner, [f.arg for f in trailing])
    return VNeutral(v.head, (FRepr(),) + trailing)


def _unrepr_neutral(world, v: VNeutral) -> Value:
    frames = v.frames
    i = _split_trailing_apps(frames)
    trailing = frames[i:]
    if i > 0:
        fr = frames[i - 1]
        if isinstance(fr, FRepr):
            return VNeutral(v.head, frames[: i - 1] + trailing)
        if isinstance(fr, FJ) and _j_motive_repr_headed(world, fr):
            return VNeutral(v.head, frames[: i - 1] + (_unrepr_j_frame(world, fr),) + trailing)
        if isinstance(fr, FElim) and _elim_motive_repr_headed(world, fr):
            return VNeutral(v.head, frames[: i - 1] + (_unrepr_elim_frame(world, fr),) + trailing)
        return VNeutral(v.head, frames[:i] + (FUnrepr(),) + trailing)
    return VNeutral(v.head, (FUnrepr(),) + trailing)


_PROBE_BASE = 1 << 40


def _j_motive_repr_headed(world, fr: FJ) -> bool:
    probe = apply_closure(world, fr.motive, fresh(_PROBE_BASE), fresh(_PROBE_BASE + 1), fresh(_PROBE_BASE + 2))
    return isinstance(probe, VReprTy)


def _elim_motive_repr_headed(world, fr: FElim) -> bool:
    nd = len(world.sig(fr.sig).indices)
    args = [fresh(_PROBE_BASE + k) for k in range(nd + 1)]
    probe = vapps(world, fr.motive, args)
    return isinstance(probe, VReprTy)


def _repr_j_frame(world, fr: FJ) -> FJ:
    m, c = fr.motive, fr.case
    m2 = HClosure(lambda a, b, p: vrepr_ty(world, apply_closure(world, m, a, b, p)), 3)
    c2 = HClosure(lambda a: vrepr(world, apply_closure(world, c, a)), 1)
    return FJ(m2, c2)


def _unrepr_j_frame(world, fr: FJ) -> FJ:
    m, c = fr.motive, fr.case

    def strip(*args):
        r = apply_closure(world, m, *args)
        assert isinstance(r, VReprTy)
        return r.inner

    m2 = HClosure(strip, 3)
    c2 = HClosure(lambda a: vunrepr(world, apply_closure(world, c, a)), 1)
    return FJ(m2, c2)


def _curry(n, fn):
    """Build an n-ary curried VLam value collecting its arguments."""
    if n == 0:
        return fn(())

    def collect(acc):
        def step(a):
            new = acc + (a,)
            if len(new) == n:
                return fn(new)
            return VLam(HClosure(lambda b, new=new: collect(new)(b), 1))

        return step

    return VLam(HClosure(lambda a: collect(())(a), 1))


def _wrap_method(world, sig, op_idx, m, wrap_result, wrap_ih):
    """Reshape a method for a motive wrapped/unwrapped by Repr: keep plain
    inputs, adapt each inductive hypothesis, and wrap the result."""
    from .sigs import op_rec_flags

    flags = op_rec_flags(sig.ops[op_idx][1])
    arity = len(flags) + sum(flags)

    def run(args):
        inner = []
        k = 0
        for flag in flags:
            inner.append(args[k])
            k += 1
            if flag:
                ih = args[k]
                inner.append(
                    VLam(HClosure(lambda u, ih=ih: wrap_ih(vapp(world, ih, u)), 1))
                )
                k += 1
        return wrap_result(vapps(world, m, inner))

    return _curry(arity, run)


def _repr_elim_frame(world, fr: FElim) -> FElim:
    sig = world.sig(fr.sig)
    nd = len(sig.indices)
    m = fr.motive
    m2 = _curry(nd + 1, lambda args: vrepr_ty(world, vapps(world, m, args)))
    methods2 = tuple(
        _wrap_method(
            world,
            sig,
            k,
            fr.methods[k],
            lambda r: vrepr(world, r),
            lambda ihr: vunrepr(world, ihr),
        )
        for k in range(len(fr.methods))
    )
    return FElim(fr.sig, fr.algebra, m2, methods2, fr.indices)


def _unrepr_elim_frame(world, fr: FElim) -> FElim:
    sig = world.sig(fr.sig)
    nd = len(sig.indices)
    m = fr.motive

    def strip(args):
        r = vapps(world, m, args)
        assert isinstance(r, VReprTy)
        return r.inner

    m2 = _curry(nd + 1, strip)
    methods2 = tuple(
        _wrap_method(
            world,
            sig,
            k,
            fr.methods[k],
            lambda r: vunrepr(world, r),
            lambda ihr: vrepr(world, ihr),
        )
        for k in range(len(fr.methods))
    )
    return FElim(fr.sig, fr.algebra, m2, methods2, fr.indices)


# --- quoting -------------------------------------------------------------------


def quote(world, v: Value, depth: int) -> Term:
    cache = world._quote_cache
    key = (id(v), depth)
    hit = cache.get(key)
    if hit is not None and hit[0] is v:
        return hit[1]
    t = _quote(world, v, depth)
    cache[key] = (v, t)
    return t


def _quote(world, v: Value, depth: int) -> Term:
    match v:
        case VUniverse():
            return s.U
        case VUnit():
            return s.UNIT
        case VTt():
            return s.TT
        case VPi(dom, cod):
            return s.Pi(quote(world, dom, depth), _quote_clo(world, cod, depth))
        case VLam(clo):
            return s.Lam(_quote_clo(world, clo, depth))
        case VSigma(a, b):
            return s.Sigma(quote(world, a, depth), _quote_clo(world, b, depth))
        case VPair(a, b):
            return s.Pair(quote(world, a, depth), quote(world, b, depth))
        case VSubset(a, b):
            return s.Subset(quote(world, a, depth), _quote_clo(world, b, depth))
        case VSPair(a, b):
            return s.SPair(quote(world, a, depth), quote(world, b, depth))
        case VEq(ty, l, r):
            return s.Eq(quote(world, ty, depth), quote(world, l, depth), quote(world, r, depth))
        case VRefl(a):
            return s.Refl(quote(world, a, depth))
        case VDataTy(sid, g, d):
            return s.DataTy(sid, _quote_spine(world, g, depth), _quote_spine(world, d, depth))
        case VCtor(sid, op, g, nu):
            return s.Ctor(sid, op, _quote_spine(world, g, depth), _quote_spine(world, nu, depth))
        case VReprTy(inner):
            return s.ReprTy(quote(world, inner, depth))
        case VNeutral(h, frames):
            t = _quote_head(world, h, depth)
            for fr in frames:
                t = _quote_frame(world, t, fr, depth)
            return t
    raise AssertionError(f"quote: unhandled value {v!r}")


def _quote_clo(world, clo, depth: int) -> Term:
    n = getattr(clo, "n", 1)
    args = [fresh(depth + k) for k in range(n)]
    return quote(world, apply_closure(world, clo, *args), depth + n)


def _quote_spine(world, sp, depth):
    if sp is None:
        return None
    return tuple(quote(world, v, depth) for v in sp)


def _quote_head(world, h, depth: int) -> Term:
    match h:
        case HVar(lvl):
            if lvl >= _PROBE_BASE:
                raise AssertionError("probe variable escaped into quoting")
            return s.Var(depth - 1 - lvl)
        case HPost(n):
            return s.Post(n)
        case HUnrepr(inner):
            return s.UnreprTm(quote(world, inner, depth))
    raise AssertionError(f"quote: unhandled head {h!r}")


def _quote_frame(world, t: Term, fr, depth: int) -> Term:
    match fr:
        case FApp(a):
            return s.App(t, quote(world, a, depth))
        case FFst():
            return s.Fst(t)
        case FSnd():
            return s.Snd(t)
        case FSFst():
            return s.SFst(t)
        case FSSnd():
            return s.SSnd(t)
        case FJ(m, c):
            mt = quote(
                world,
                apply_closure(world, m, fresh(depth), fresh(depth + 1), fresh(depth + 2)),
                depth + 3,
            )
            ct = quote(world, apply_closure(world, c, fresh(depth)), depth + 1)
            return s.J(mt, ct, t)
        case FElim(sid, g, m, ms, ix):
            return s.Elim(
                sid,
                _quote_spine(world, g, depth),
                quote(world, m, depth),
                _quote_spine(world, ms, depth) or (),
                _quote_spine(world, ix, depth) or (),
                t,
            )
        case FRepr():
            return s.ReprTm(t)
        case FUnrepr():
            return s.UnreprTm(t)
    raise AssertionError(f"quote: unhandled frame {fr!r}")


def normalize(world, t: Term, env: tuple = (), depth: int = 0) -> Term:
    return quote(world, evaluate(world, t, env), depth)


# --- conversion ----------------------------------------------------------------


def convertible(world, a: Value, b: Value, depth: int) -> bool:
    # Conversion is pure and depth enters only through fresh levels, which
    # are always above the levels free in the compared values, so results
    # are cached by value identity alone; the cache holds references so ids
    # stay valid.
    key = (id(a), id(b))
    hit = world._conv_cache.get(key)
    if hit is not None and hit[0] is a and hit[1] is b:
        ok = hit[2]
    else:
        ok = _conv(world, a, b, depth)
        world._conv_cache[key] = (a, b, ok)
    if world.trace is not None:
        world.trace(a, b, depth, ok)
    return ok


def _clo_fast_eq(c1, c2) -> bool:
    """Identical closures (same body term object over identity-equal envs)
    are convertible without eta-expansion."""
    if c1 is c2:
        return True
    if isinstance(c1, TClosure) and isinstance(c2, TClosure):
        return (
            c1.body is c2.body
            and c1.n == c2.n
            and len(c1.env) == len(c2.env)
            and all(x is y for x, y in zip(c1.env, c2.env))
        )
    return False


def _conv(world, a: Value, b: Value, depth: int) -> bool:
    if a is b:
        return True
    # eta: unit
    if isinstance(a, VTt) or isinstance(b, VTt):
        return True
    # eta: functions
    if isinstance(a, VLam) or isinstance(b, VLam):
        if isinstance(a, VLam) and isinstance(b, VLam) and _clo_fast_eq(a.clo, b.clo):
            return True
        x = fresh(depth)
        return convertible(world, vapp(world, a, x), vapp(world, b, x), depth + 1)
    # eta: pairs
    if isinstance(a, VPair) or isinstance(b, VPair):
        return convertible(world, vfst(world, a), vfst(world, b), depth) and convertible(
            world, vsnd(world, a), vsnd(world, b), depth
        )
    # eta + irrelevance: subset pairs compare by first projection only
    if isinstance(a, VSPair) or isinstance(b, VSPair):
        return convertible(world, vsfst(world, a), vsfst(world, b), depth)
    match (a, b):
        case (VUniverse(), VUniverse()) | (VUnit(), VUnit()):
            return True
        case (VPi(d1, c1), VPi(d2, c2)) | (VSigma(d1, c1), VSigma(d2, c2)) | (
            VSubset(d1, c1),
            VSubset(d2, c2),
        ):
            if not convertible(world, d1, d2, depth):
                return False
            if _clo_fast_eq(c1, c2):
                return True
            x = fresh(depth)
            return convertible(
                world,
                apply_closure(world, c1, x),
                apply_closure(world, c2, x),
                depth + 1,
            )
        case (VEq(t1, l1, r1), VEq(t2, l2, r2)):
            return (
                convertible(world, t1, t2, depth)
                and convertible(world, l1, l2, depth)
                and convertible(world, r1, r2, depth)
            )
        case (VRefl(x), VRefl(y)):
            return convertible(world, x, y, depth)
        case (VReprTy(x), VReprTy(y)):
            return convertible(world, x, y, depth)
        case (VDataTy(s1, g1, d1), VDataTy(s2, g2, d2)):
            return s1 == s2 and _conv_spine(world, g1, g2, depth) and _conv_spine(world, d1, d2, depth)
        case (VCtor(s1, o1, g1, n1), VCtor(s2, o2, g2, n2)):
            return (
                s1 == s2
                and o1 == o2
                and _conv_spine(world, g1, g2, depth)
                and _conv_spine(world, n1, n2, depth)
            )
        case (VNeutral(h1, f1), VNeutral(h2, f2)):
            return _conv_head(world, h1, h2, depth) and _conv_frames(world, f1, f2, depth)
    return False


def _conv_spine(world, a, b, depth) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return len(a) == len(b) and all(
        convertible(world, x, y, depth) for x, y in zip(a, b)
    )


def _conv_head(world, h1, h2, depth) -> bool:
    match (h1, h2):
        case (HVar(l1), HVar(l2)):
            return l1 == l2
        case (HPost(n1), HPost(n2)):
            return n1 == n2
        case (HUnrepr(v1), HUnrepr(v2)):
            return convertible(world, v1, v2, depth)
    return False


def _conv_frames(world, f1, f2, depth) -> bool:
    if len(f1) != len(f2):
        return False
    for x, y in zip(f1, f2):
        if type(x) is not type(y):
            return False
        match (x, y):
            case (FApp(a), FApp(b)):
                if not convertible(world, a, b, depth):
                    return False
            case (FJ(m1, c1), FJ(m2, c2)):
                if not _clo_fast_eq(m1, m2):
                    xs = [fresh(depth), fresh(depth + 1), fresh(depth + 2)]
                    if not convertible(
                        world,
                        apply_closure(world, m1, *xs),
                        apply_closure(world, m2, *xs),
                        depth + 3,
                    ):
                        return False
                if not _clo_fast_eq(c1, c2):
                    if not convertible(
                        world,
                        apply_closure(world, c1, fresh(depth)),
                        apply_closure(world, c2, fresh(depth)),
                        depth + 1,
                    ):
                        return False
            case (FElim(s1, g1, m1, ms1, ix1), FElim(s2, g2, m2, ms2, ix2)):
                if s1 != s2 or not _conv_spine(world, g1, g2, depth):
                    return False
                if not convertible(world, m1, m2, depth):
                    return False
                if not _conv_spine(world, ms1, ms2, depth) or not _conv_spine(
                    world, ix1, ix2, depth
                ):
                    return False
            case (FFst(), FFst()) | (FSnd(), FSnd()) | (FSFst(), FSFst()) | (
                FSSnd(),
                FSSnd(),
            ) | (FRepr(), FRepr()) | (FUnrepr(), FUnrepr()):
                pass
            case _:
                return False
    return True
