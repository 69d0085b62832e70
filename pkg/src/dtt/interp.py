"""Reference interpreter for the untyped IR.

Used by tests to check that generated target code and the IR agree, and by
`run` as a fallback when no external runtime is configured. Big unsigned
integers are plain python ints; tagged values, thunks and the canonical
printer mirror the runtime shim exactly.
"""

from __future__ import annotations

from . import extract as ex


class Tagged:
    __slots__ = ("tag", "args")

    def __init__(self, tag: int, args: list):
        self.tag = tag
        self.args = args


class Thunk:
    __slots__ = ("fn", "has", "val")

    def __init__(self, fn):
        self.fn = fn
        self.has = False
        self.val = None

    def force(self):
        if not self.has:
            self.val = self.fn()
            self.has = True
        return self.val


UNIT = None


def _call(f, a):
    if isinstance(f, Thunk):
        return f.force()
    if callable(f):
        return f(a)
    if f is UNIT:
        return UNIT
    raise TypeError(f"application of non-function {f!r}")


def _force(v):
    if isinstance(v, Thunk):
        return v.force()
    return _call(v, UNIT)


def _ubig_elim(P):
    def with_base(b):
        def with_step(r):
            def run(sv):
                if not isinstance(sv, int):
                    raise TypeError("ubig_elim scrutinee is not a big integer")
                acc = Thunk(lambda: b)
                for k in range(1, sv + 1):
                    prev = acc
                    acc = Thunk(lambda k=k, prev=prev: _call(_call(r, k - 1), prev))
                return acc.force()

            return run

        return with_step

    return with_base


PRIMS = {
    "ubig_zero": 0,
    "ubig_one": 1,
    "ubig_one_plus": lambda n: n + 1,
    "ubig_add": lambda a: lambda b: a + b,
    "ubig_mul": lambda a: lambda b: a * b,
    "ubig_elim": _ubig_elim,
}


def eval_ir(t: ex.IR, env: dict):
    match t:
        case ex.IRVar(n):
            return env[n]
        case ex.IRUnit():
            return UNIT
        case ex.IRPrim(n):
            return PRIMS[n]
        case ex.IRGlobal(n):
            return env[n]
        case ex.IRLam(p, b):
            return lambda a, p=p, b=b, env=env: eval_ir(b, {**env, p: a})
        case ex.IRApp(f, a):
            return _call(eval_ir(f, env), eval_ir(a, env))
        case ex.IRLet(p, v, b):
            return eval_ir(b, {**env, p: eval_ir(v, env)})
        case ex.IRTuple(items):
            return [eval_ir(i, env) for i in items]
        case ex.IRProj(tp, i):
            return eval_ir(tp, env)[i]
        case ex.IRTag(_, tag, args):
            return Tagged(tag, [eval_ir(a, env) for a in args])
        case ex.IRSwitch(scrut, cases):
            v = eval_ir(scrut, env)
            if not isinstance(v, Tagged):
                raise TypeError(f"switch on non-tagged value {v!r}")
            for tag, params, body in cases:
                if tag == v.tag:
                    inner = dict(env)
                    for p, a in zip(params, v.args):
                        inner[p] = a
                    return eval_ir(body, inner)
            raise ValueError(f"no case for tag {v.tag}")
        case ex.IRThunk(b):
            return Thunk(lambda b=b, env=env: eval_ir(b, env))
        case ex.IRForce(e):
            return _force(eval_ir(e, env))
    raise AssertionError(f"eval_ir: unhandled {t!r}")


def show(v) -> str:
    """Canonical printer; must match the runtime shim's `show`."""
    if v is UNIT:
        return "()"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Tagged):
        if not v.args:
            return f"({v.tag})"
        return "(" + " ".join([str(v.tag)] + [show(a) for a in v.args]) + ")"
    if isinstance(v, list):
        return "[" + ", ".join(show(a) for a in v) + "]"
    if isinstance(v, Thunk):
        return "<thunk>"
    if callable(v):
        return "<fn>"
    return repr(v)


def run_program(prog: ex.ExtractedProgram, entry: str = "main"):
    env: dict = {}
    for name, body in prog.helpers:
        env[name] = eval_ir(body, env)
    for name, body in prog.globals:
        env[name] = eval_ir(body, env)
    if entry not in env:
        raise KeyError(f"program has no {entry!r}")
    return env[entry]
