"""Arbitrary transvections from the Y5 oracles, and Gaussian decomposition."""
from __future__ import annotations

from itertools import product as iproduct

from ..algebra import Matrix, null_space, pairing, proportional, unit_vector, vec_axpy
from ..transvection import PreconditionError, Transvection
from .closure import StageFailure
from .combine import CombineError, chain_left, chain_right, exact_operator
from .elements import DUAL, PRIMAL, Elem, Frame, scaled
from .stages import TT, Stages


def _pick_separator(F, keep, kill):
    """Covector psi with psi(keep) != 0 and psi(kill) = 0 (unit covector if possible)."""
    n = len(keep)
    for j in range(n):
        if keep[j] != 0 and kill[j] == 0:
            return unit_vector(F, n, j)
    for psi in null_space(F, [kill], n):
        if pairing(F, psi, keep) != 0:
            return tuple(psi)
    raise PreconditionError("vectors are proportional; no separating covector")


def bridge(st: Stages, frame: Frame, near: Elem, far: Elem) -> Elem:
    """t with (near, t) one-way and (far, t) not an edge (frame terms).

    ``near`` has frame functional phi (the target's), ``far`` has frame
    direction v (the target's).
    """
    F = st.F
    vn, phi = frame.view(near).v, frame.view(near).phi
    v = frame.view(far).v
    psi = _pick_separator(F, vn, v)
    a = st.y5(frame.flip(), psi)  # frame functional exactly psi
    u = frame.view(a).v
    e = st.out_neighbor(frame, a)
    b = frame.comm(e, F.inv(frame.pair(a, e)), a, 1, TT, scale="a", label="bridge/b")
    u2 = frame.view(e).v
    b = exact_operator(frame, b, u2, psi)
    fu, fu2 = pairing(F, phi, u), pairing(F, phi, u2)
    if fu == 0 and fu2 == 0:
        t = a
    elif fu2 == 0:
        t = b
    elif fu == 0:
        t = a
    else:
        # x = phi(u') u - phi(u) u'
        t = frame.prod(scaled(a, fu2), scaled(b, F.neg(fu)), TT, label="bridge/t")
    if not frame.one_way(near, t) or frame.edge(far, t):
        raise StageFailure("T", "bridge transvection has the wrong edges")
    return t


def _closing_k5(st: Stages, path: list):
    """The last k=5 sub-case: both (r5, r3) and (r3, r1) are edges."""
    F = st.F
    r1, r2, r3, r4, r5 = path
    P = PRIMAL.pair

    def t1_for(lam, mu):
        c = PRIMAL.conj(r3, r2, lam, TT, label="T/k5-c") if lam != 0 else r3
        return PRIMAL.conj(c, r4, mu, TT, label="T/k5-t1") if mu != 0 else c

    def good(t1):
        return PRIMAL.one_way(r5, t1) and PRIMAL.one_way(t1, r1)

    lam = F.div(P(r1, r3), F.mul(P(r2, r3), P(r1, r2)))
    c = PRIMAL.conj(r3, r2, lam, TT, label="T/k5-c")
    den = F.mul(P(c, r4), P(r4, r5))
    t1 = None
    if den != 0:
        mu = F.neg(F.div(P(c, r5), den))
        t1 = PRIMAL.conj(c, r4, mu, TT, label="T/k5-t1")
        if not good(t1):
            t1 = None
    if t1 is None and F.p is not None:
        for lam, mu in iproduct(F.elements(), repeat=2):
            cand = t1_for(lam, mu)
            if good(cand):
                t1 = cand
                break
    if t1 is None:
        raise StageFailure("T", "no lambda, mu giving a one-way path r5, t1, r1")
    t2 = st.mid(r1, r5)
    if not PRIMAL.edge(t1, t2):
        t2 = PRIMAL.conj(t2, r1, 1, TT, label="T/k5-t2")
    if not PRIMAL.edge(t1, t2):
        raise StageFailure("T", "(t1, t2) is not an edge")
    lam = F.div(P(r5, t2), F.mul(P(t1, t2), P(r5, t1)))
    t3 = PRIMAL.conj(t2, t1, lam, TT, label="T/k5-t3")
    if not (PRIMAL.one_way(t3, r5) and PRIMAL.edge(r1, t3)):
        raise StageFailure("T", "t3 does not satisfy the path conditions")
    W = PRIMAL.comm(r5, 1, t3, 1, TT, scale="a", label="T/k5-w")
    return PRIMAL.comm(W, 1, r1, 1, TT, scale="a", label="T/k5-final")


def synth_transvection(st: Stages, v, phi):
    """Element for the group of 1 + v (x) phi, rescaled to exactly that operator.

    Returns ``(elem, case)``.
    """
    F = st.F
    v = tuple(F.coerce(a) for a in v)
    phi = tuple(F.coerce(a) for a in phi)
    if not any(v) or not any(phi) or pairing(F, phi, v) != 0:
        raise PreconditionError("need v != 0, phi != 0 and phi(v) = 0")
    target = Transvection(F, v, phi)
    s1 = st.cov(phi)  # 1 + v1 (x) phi
    s2 = st.vec(v)  # 1 + v (x) phi2
    v1, phi2 = s1.t.v, s2.t.phi
    if proportional(F, v1, v):
        res, case = s1, "in-Y5-direction"
    elif proportional(F, phi2, phi):
        res, case = s2, "in-Y5-functional"
    elif PRIMAL.edge(s1, s2):
        res = PRIMAL.comm(s2, F.inv(PRIMAL.pair(s1, s2)), s1, 1, TT, scale="a", label="T/edge")
        case = "edge-commutator"
    else:
        t = bridge(st, PRIMAL, s1, s2)
        tp = bridge(st, DUAL, s2, s1)
        if t.t.group == tp.t.group:
            path, case = [s1, t, s2], "k3"
        elif PRIMAL.edge(t, tp):
            path, case = [s1, t, tp, s2], "k4"
        else:
            r3 = st.mid(t, tp)
            path, case = [s1, t, r3, tp, s2], "k5"
        if case == "k5":
            r1, r2, r3, r4, r5 = path
            if PRIMAL.edge(r1, r4):
                path, case = [r1, r4, r5], "k5-via-r1-r4"
            elif PRIMAL.edge(r2, r5):
                path, case = [r1, r2, r5], "k5-via-r2-r5"
        if case in ("k3", "k4", "k5-via-r1-r4", "k5-via-r2-r5"):
            res = chain_left(PRIMAL, path, TT)
        elif not PRIMAL.edge(path[2], path[0]):
            res, case = chain_left(PRIMAL, path, TT), "k5-left-chain"
        elif not PRIMAL.edge(path[4], path[2]):
            res, case = chain_right(PRIMAL, path, TT), "k5-right-chain"
        else:
            res, case = _closing_k5(st, path), "k5-double-conjugation"
    try:
        res = exact_operator(PRIMAL, res, v, phi)
    except CombineError as exc:
        raise StageFailure("T", f"case {case} produced the wrong transvection group") from exc
    if res.t != target:
        raise StageFailure("T", f"case {case} produced the wrong operator")
    st._count(f"T-{case}")
    return res, case


# Gaussian elimination -----------------------------------------------------


def gauss_ops(g: Matrix) -> list[tuple[int, int, object]]:
    """Row operations (i, j, c) meaning R_i += c R_j that reduce g to 1.

    With E = 1 + c E_ij the operations satisfy E_m .. E_1 g = 1, so
    g = E_1^-1 .. E_m^-1.  At most n^2 + n operations are used.
    """
    F = g.field
    n = g.n
    if g.det() != F.one:
        raise PreconditionError("gauss decomposition needs det = 1")
    M = [list(r) for r in g.rows]
    ops = []

    def addrow(i, j, c):
        ops.append((i, j, c))
        M[i] = list(vec_axpy(F, c, M[j], M[i]))

    for j in range(n):
        if M[j][j] != F.one:
            r = next((i for i in range(j + 1, n) if M[i][j] != 0), None)
            if r is None:
                if j == n - 1:
                    break  # forced to 1 by det = 1
                addrow(j + 1, j, F.one)
                r = j + 1
            addrow(j, r, F.div(F.sub(F.one, M[j][j]), M[r][j]))
        for i in range(n):
            if i != j and M[i][j] != 0:
                addrow(i, j, F.neg(M[i][j]))
    assert all(M[i][k] == (F.one if i == k else 0) for i in range(n) for k in range(n))
    return ops


def gauss_decompose(g: Matrix, supplier) -> tuple:
    """Word for g as a product of elementary transvections.

    ``supplier(i, j, c)`` returns a word for 1 + c E_ij.  Returns the factor
    words in order together with the (i, j, c) list.
    """
    F = g.field
    ops = gauss_ops(g)
    factors = [(i, j, F.neg(c)) for (i, j, c) in ops]
    return [supplier(i, j, c) for (i, j, c) in factors], factors
