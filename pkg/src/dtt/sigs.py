"""Interpretation of algebraic signatures as telescopes and types.

These are metatheory-level term builders, not syntax: algebras, displayed
algebras, coherence conditions, induction types, and the packaged
inductive-algebra telescope. All builders expect signatures formed at top
level (closed). Argument terms (carrier, algebra components, motive,
section) are expressed in the context where the resulting term will live;
the builders shift them under the binders they introduce.

Telescopes are plain lists of terms where entry k is typed under entries
0..k-1; spines checked against them get substituted in progressively by the
elaborator.
"""

from __future__ import annotations

from functools import lru_cache

from .syntax import (
    Ctor,
    DataTy,
    Eq,
    Lam,
    OpExt,
    OpInt,
    OpRet,
    Operation,
    Pi,
    Sigma,
    Signature,
    Spine,
    Term,
    U,
    UNIT,
    Unit,
    Var,
    beta_apps,
    lams,
    pis,
    shift,
    subst,
    var_spine,
)


def _rename_ext(t: Term, ren: tuple[int, ...], depth: int) -> Term:
    """Re-express an operation-local term (ext-only numbering) at `depth`
    binders, where the k-th ext binder sits at level ren[k]."""
    args = tuple(Var(depth - 1 - ren[len(ren) - 1 - k]) for k in range(len(ren)))
    return subst(t, args, 0)


def op_inputs(op: Operation, carrier: Term):
    """Telescope of an operation's inputs over `carrier`.

    Returns (entries, out_spine, rec_indices) where rec_indices[k] is None
    for external inputs and the recursive occurrence's index spine (typed at
    position k) otherwise. out_spine is typed under all entries.
    """
    entries: list[Term] = []
    rec_indices: list[Spine | None] = []
    ren: tuple[int, ...] = ()
    depth = 0
    while True:
        match op:
            case OpExt(dom, rest):
                entries.append(_rename_ext(dom, ren, depth))
                rec_indices.append(None)
                ren = ren + (depth,)
                depth += 1
                op = rest
            case OpInt(indices, rest):
                ix = tuple(_rename_ext(d, ren, depth) for d in indices)
                entries.append(beta_apps(shift(carrier, depth), ix))
                rec_indices.append(ix)
                depth += 1
                op = rest
            case OpRet(indices):
                out = tuple(_rename_ext(d, ren, depth) for d in indices)
                return entries, out, rec_indices
            case _:
                raise AssertionError(f"op_inputs: bad operation {op!r}")


def op_arity(op: Operation) -> int:
    n = 0
    while not isinstance(op, OpRet):
        n += 1
        op = op.rest
    return n


def op_rec_flags(op: Operation) -> tuple[bool, ...]:
    flags = []
    while not isinstance(op, OpRet):
        flags.append(isinstance(op, OpInt))
        op = op.rest
    return tuple(flags)


def op_output(op: Operation, spine: Spine) -> Spine:
    """The return index spine of an operation, with the given inputs
    substituted in (recursive inputs are dropped by the output, so
    substituting them is vacuous)."""
    _, out, _ = op_inputs(op, UNIT)
    rev = tuple(reversed(spine))
    return tuple(subst(t, rev) for t in out)


def alg_entry(op: Operation, carrier: Term) -> Term:
    """(nu :: O^IN X) -> X[nu^OUT] as a single Pi type."""
    entries, out, _ = op_inputs(op, carrier)
    cod = beta_apps(shift(carrier, len(entries)), out)
    return pis(entries, cod)


@lru_cache(maxsize=None)
def algebra_telescope(sig: Signature, carrier: Term) -> tuple[Term, ...]:
    """One entry per operation; entries do not depend on each other, only on
    the carrier, which is shifted to each entry's position."""
    return tuple(
        alg_entry(op, shift(carrier, k)) for k, (_, op) in enumerate(sig.ops)
    )


def displayed_entry(op: Operation, carrier: Term, alg_op: Term, motive: Term) -> Term:
    """(mu :: alpha_O^DI Y) -> Y[mu^DO]: inputs double each recursive
    occurrence with a lazy inductive hypothesis (Unit -> Y ...)."""
    entries: list[Term] = []
    ren: tuple[int, ...] = ()
    depth = 0
    scrut_positions: list[int] = []
    while True:
        match op:
            case OpExt(dom, rest):
                entries.append(_rename_ext(dom, ren, depth))
                scrut_positions.append(depth)
                ren = ren + (depth,)
                depth += 1
                op = rest
            case OpInt(indices, rest):
                ix = tuple(_rename_ext(d, ren, depth) for d in indices)
                entries.append(beta_apps(shift(carrier, depth), ix))
                scrut_positions.append(depth)
                depth += 1
                ih_cod = beta_apps(
                    shift(motive, depth + 1),
                    tuple(shift(i, 2) for i in ix) + (Var(1),),
                )
                entries.append(Pi(UNIT, ih_cod))
                depth += 1
                op = rest
            case OpRet(indices):
                out = tuple(_rename_ext(d, ren, depth) for d in indices)
                scrut_args = tuple(Var(depth - 1 - p) for p in scrut_positions)
                scrut = beta_apps(shift(alg_op, depth), scrut_args)
                cod = beta_apps(shift(motive, depth), out + (scrut,))
                return pis(entries, cod)
            case _:
                raise AssertionError(f"displayed_entry: bad operation {op!r}")


@lru_cache(maxsize=None)
def displayed_telescope(
    sig: Signature, alg: Spine, carrier: Term, motive: Term
) -> tuple[Term, ...]:
    return tuple(
        displayed_entry(op, shift(carrier, k), shift(alg[k], k), shift(motive, k))
        for k, (_, op) in enumerate(sig.ops)
    )


def section_applied_spine(op: Operation, carrier: Term, section: Term):
    """The displayed input spine sigma $ nu over the plain input variables:
    each recursive x is followed by a thunk (lam _. sigma delta x)."""
    entries, _, rec_indices = op_inputs(op, carrier)
    depth = len(entries)
    args: list[Term] = []
    for pos, rec_ix in enumerate(rec_indices):
        v = Var(depth - 1 - pos)
        args.append(v)
        if rec_ix is not None:
            ix_here = tuple(shift(i, depth - pos + 1) for i in rec_ix)
            body = beta_apps(shift(section, depth + 1), ix_here + (shift(v, 1),))
            args.append(Lam(body))
    return entries, args


def coherence_entry(
    op: Operation,
    carrier: Term,
    alg_op: Term,
    beta_op: Term,
    motive: Term,
    section: Term,
) -> Term:
    """(nu :: O^IN X) -> sigma[alpha_O nu] == beta_O (sigma $ nu)."""
    entries, out, _ = op_inputs(op, carrier)
    depth = len(entries)
    scrut = beta_apps(shift(alg_op, depth), var_spine(depth))
    eq_ty = beta_apps(shift(motive, depth), out + (scrut,))
    lhs = beta_apps(shift(section, depth), out + (scrut,))
    _, disp_args = section_applied_spine(op, carrier, section)
    rhs = beta_apps(shift(beta_op, depth), tuple(disp_args))
    return pis(entries, Eq(eq_ty, lhs, rhs))


@lru_cache(maxsize=None)
def coherence_telescope(
    sig: Signature, alg: Spine, beta: Spine, carrier: Term, motive: Term, section: Term
) -> tuple[Term, ...]:
    return tuple(
        coherence_entry(
            op,
            shift(carrier, k),
            shift(alg[k], k),
            shift(beta[k], k),
            shift(motive, k),
            shift(section, k),
        )
        for k, (_, op) in enumerate(sig.ops)
    )


def motive_type(sig: Signature, carrier: Term) -> Term:
    """(delta :: Delta) -> X delta -> U."""
    nd = len(sig.indices)
    doms = list(sig.indices) + [beta_apps(shift(carrier, nd), var_spine(nd))]
    return pis(doms, U)


def section_type(sig: Signature, carrier: Term, motive: Term) -> Term:
    """(delta :: Delta) -> (x : X delta) -> Y delta x."""
    nd = len(sig.indices)
    doms = list(sig.indices) + [beta_apps(shift(carrier, nd), var_spine(nd))]
    dvars = tuple(shift(v, 1) for v in var_spine(nd))
    cod = beta_apps(shift(motive, nd + 1), dvars + (Var(0),))
    return pis(doms, cod)


@lru_cache(maxsize=None)
def induction_type(sig: Signature, alg: Spine, carrier: Term) -> Term:
    """alpha^IND: (Y : ...) -> (beta :: alpha^D Y) -> (sigma : ...) x (rho :: beta^COH sigma).

    The coherence spine is reified as a right-nested Sigma ending in Unit.
    """
    k = len(sig.ops)
    chain: Term = UNIT
    for j in reversed(range(k)):
        d = 2 + k + j
        entry = coherence_entry(
            sig.ops[j][1],
            shift(carrier, d),
            shift(alg[j], d),
            Var(k),
            Var(1 + k + j),
            Var(j),
        )
        chain = Sigma(entry, chain)
    sigma_ty = section_type(sig, shift(carrier, 1 + k), Var(k))
    body: Term = Sigma(sigma_ty, chain)
    for i in reversed(range(k)):
        d = 1 + i
        body = Pi(
            displayed_entry(sig.ops[i][1], shift(carrier, d), shift(alg[i], d), Var(i)),
            body,
        )
    return Pi(motive_type(sig, carrier), body)


@lru_cache(maxsize=None)
def inductive_algebra_telescope(sig: Signature) -> tuple[Term, ...]:
    """S^INDA = (X : Delta -> U, alpha :: S^A X, kappa : alpha^IND)."""
    k = len(sig.ops)
    entries: list[Term] = [pis(sig.indices, U)]
    for i, (_, op) in enumerate(sig.ops):
        entries.append(alg_entry(op, Var(i)))
    alg = tuple(Var(k - 1 - i) for i in range(k))
    entries.append(induction_type(sig, alg, Var(k)))
    return tuple(entries)


# --- data-type-facing builders -----------------------------------------------


def data_lam(sig_id: int, sig: Signature, gamma: Spine | None) -> Term:
    """The data family as an iterated lambda over its index telescope."""
    nd = len(sig.indices)
    return lams(nd, DataTy(sig_id, gamma, var_spine(nd)))


def ctor_lam(sig_id: int, sig: Signature, gamma: Spine | None, op_idx: int) -> Term:
    n = op_arity(sig.ops[op_idx][1])
    return lams(n, Ctor(sig_id, op_idx, gamma, var_spine(n)))


def ctor_type(sig_id: int, sig: Signature, gamma: Spine | None, op_idx: int) -> Term:
    return alg_entry(sig.ops[op_idx][1], data_lam(sig_id, sig, gamma))


def ctor_algebra(sig_id: int, sig: Signature, gamma: Spine | None) -> Spine:
    return tuple(ctor_lam(sig_id, sig, gamma, i) for i in range(len(sig.ops)))


@lru_cache(maxsize=None)
def elim_type(sig_id: int, sig: Signature, gamma: Spine | None) -> Term:
    """(M : ...) -> (beta :: ctor^D M) -> (delta :: Delta) -> (x : D delta) -> M delta x."""
    k = len(sig.ops)
    carrier = data_lam(sig_id, sig, gamma)
    ctors = ctor_algebra(sig_id, sig, gamma)
    body: Term = section_type(sig, shift(carrier, 1 + k), Var(k))
    for i in reversed(range(k)):
        d = 1 + i
        body = Pi(
            displayed_entry(sig.ops[i][1], shift(carrier, d), shift(ctors[i], d), Var(i)),
            body,
        )
    return Pi(motive_type(sig, carrier), body)


def elim_lam(sig_id: int, sig: Signature, gamma: Spine | None) -> Term:
    from .syntax import Elim

    k = len(sig.ops)
    nd = len(sig.indices)
    total = 1 + k + nd + 1
    motive = Var(total - 1)
    methods = tuple(Var(nd + 1 + (k - 1 - i)) for i in range(k))
    indices = tuple(Var(nd - j) for j in range(nd))
    body = Elim(sig_id, gamma, motive, methods, indices, Var(0))
    return lams(total, body)
