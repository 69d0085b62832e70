"""The representation-erasing translation into the extensional core.

Runs on checked terms only. Repr and its coercions are erased; data types,
constructors and eliminators with a defined representation are replaced by
the carrier, algebra operations, and the first projection of the induction
witness. Default-algebra data types pass through intact (the target keeps a
class of plain data types compiled as tagged unions).
"""

from __future__ import annotations

from . import syntax as s
from .syntax import Term


def translate_term(genv, t: Term) -> Term:
    r = lambda u: translate_term(genv, u)
    match t:
        case s.ReprTy(a) | s.ReprTm(a) | s.UnreprTm(a):
            return r(a)
        case s.DataTy(sid, g, d):
            dd = tuple(r(x) for x in d)
            if g is None:
                return s.DataTy(sid, None, dd)
            return s.beta_apps(r(g[0]), dd)
        case s.Ctor(sid, op, g, v):
            vv = tuple(r(x) for x in v)
            if g is None:
                return s.Ctor(sid, op, None, vv)
            return s.beta_apps(r(g[1 + op]), vv)
        case s.Elim(sid, g, m, ms, ix, x):
            if g is None:
                return s.Elim(
                    sid, None, r(m), tuple(r(y) for y in ms), tuple(r(y) for y in ix), r(x)
                )
            kappa = r(g[-1])
            applied = s.beta_apps(kappa, (r(m),) + tuple(r(y) for y in ms))
            sigma = applied.a if isinstance(applied, s.Pair) else s.Fst(applied)
            return s.beta_apps(sigma, tuple(r(y) for y in ix) + (r(x),))
        case s.Var(_) | s.Universe() | s.Unit() | s.Tt() | s.Global(_) | s.Post(_):
            return t
        case s.Pi(d, c):
            return s.Pi(r(d), r(c))
        case s.Lam(b):
            return s.Lam(r(b))
        case s.App(f, a):
            return s.App(r(f), r(a))
        case s.Sigma(a, b):
            return s.Sigma(r(a), r(b))
        case s.Pair(a, b):
            return s.Pair(r(a), r(b))
        case s.Fst(p):
            return s.Fst(r(p))
        case s.Snd(p):
            return s.Snd(r(p))
        case s.Subset(a, b):
            return s.Subset(r(a), r(b))
        case s.SPair(a, b):
            return s.SPair(r(a), r(b))
        case s.SFst(p):
            return s.SFst(r(p))
        case s.SSnd(p):
            return s.SSnd(r(p))
        case s.Eq(ty, l, rr):
            return s.Eq(r(ty), r(l), r(rr))
        case s.Refl(a):
            return s.Refl(r(a))
        case s.J(m, c, p):
            return s.J(r(m), r(c), r(p))
    raise AssertionError(f"translate_term: unhandled node {t!r}")


translate_type = translate_term


def translate_program(genv) -> list[tuple]:
    """Translate every global in declaration order. Function-representation
    images replace the bodies of their targets (symbol-level substitution)."""
    out = []
    for entry in genv.decls:
        kind, name = entry[0], entry[1]
        ty = translate_term(genv, genv.entries[name][1])
        if kind == "postulate":
            out.append(("postulate", name, ty))
        else:
            body = genv.repr_fn.get(name, genv.entries[name][2])
            out.append(("def", name, ty, translate_term(genv, body)))
    return out


# --- scans -------------------------------------------------------------------


def scan_tags(t: Term, genv=None) -> dict:
    """Count node tags relevant to erasure completeness: Repr/repr/unrepr and
    data/ctor/elim nodes split by default vs represented algebra."""
    counts = {
        "Repr": 0,
        "repr": 0,
        "unrepr": 0,
        "data_default": 0,
        "data_represented": 0,
    }

    def walk(u: Term):
        match u:
            case s.ReprTy(a):
                counts["Repr"] += 1
                walk(a)
            case s.ReprTm(a):
                counts["repr"] += 1
                walk(a)
            case s.UnreprTm(a):
                counts["unrepr"] += 1
                walk(a)
            case s.DataTy(_, g, d):
                counts["data_represented" if g is not None else "data_default"] += 1
                for x in (g or ()) + d:
                    walk(x)
            case s.Ctor(_, _, g, v):
                counts["data_represented" if g is not None else "data_default"] += 1
                for x in (g or ()) + v:
                    walk(x)
            case s.Elim(_, g, m, ms, ix, x):
                counts["data_represented" if g is not None else "data_default"] += 1
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
            case s.Fst(p) | s.Snd(p) | s.SFst(p) | s.SSnd(p) | s.Refl(p):
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
                raise AssertionError(f"scan_tags: unhandled node {u!r}")

    walk(t)
    return counts


def assert_repr_free(decls: list[tuple]) -> dict:
    total = {"Repr": 0, "repr": 0, "unrepr": 0, "data_default": 0, "data_represented": 0}
    for d in decls:
        for t in d[2:]:
            c = scan_tags(t)
            for k in total:
                total[k] += c[k]
    return total
