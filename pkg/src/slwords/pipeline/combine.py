"""Short paths of transvections into one transvection with direction v_1 + v_k.

Every function takes a :class:`Frame`; in the dual frame the same code
produces a transvection with functional phi_1 + phi_k.
"""
from __future__ import annotations

from ..algebra import is_zero_vec, ratio, vec_add
from ..transvection import PreconditionError
from .elements import Elem, Frame, represent, scaled


class CombineError(PreconditionError):
    pass


def exact_operator(frame: Frame, x: Elem, v, phi) -> Elem:
    """Rescale x so that its frame operator is exactly v (x) phi."""
    F = x.field
    xt = frame.view(x)
    a = ratio(F, v, xt.v)  # xt.v = a v
    b = ratio(F, phi, xt.phi)
    if a is None or b is None:
        raise CombineError("exact_operator: x lies in another transvection group")
    y = scaled(x, F.inv(F.mul(a, b)))
    return represent(y, frame, v)


def _finish(frame: Frame, a: Elem, X: Elem, c: Elem, stage: int, label: str) -> Elem:
    """a * X' where X' is X rescaled to the operator v_c (x) phi_a."""
    X1 = exact_operator(frame, X, frame.view(c).v, frame.view(a).phi)
    return frame.prod(a, X1, stage, label)


def _finish_cancel(frame: Frame, a: Elem, outer, c: Elem, stage: int, label: str) -> Elem:
    """a * X with X = outer(d) exactly v_c (x) phi_a.

    ``outer(d)`` must be linear in d and its member lam must start with the
    letter a^-lam (scale on a's exponent), so a^lam cancels in every member.
    """
    F = a.field
    v, phi = frame.view(c).v, frame.view(a).phi
    X0 = frame.view(outer(F.one))
    x, y = ratio(F, v, X0.v), ratio(F, phi, X0.phi)
    if x is None or y is None:
        raise CombineError(f"{label}: inner commutator lies in another transvection group")
    X = outer(F.inv(F.mul(x, y)))
    X = represent(X, frame, v)
    if frame.view(X).phi != phi:
        raise CombineError(f"{label}: rescaled commutator is not v_c (x) phi_a")
    return frame.prod(a, X, stage, label)


def chain_left(frame: Frame, path: list, stage: int) -> Elem:
    """[r_k, [.., [r_3, [r_2, r_1]]]] ~ 1 + v_k (x) phi_1 (requires the edges)."""
    W = path[0]
    for r in path[1:]:
        W = frame.comm(r, 1, W, 1, stage, scale="b", label="chain")
    return W


def chain_right(frame: Frame, path: list, stage: int) -> Elem:
    """[r_1, [r_2, .. [r_{k-1}, r_k]]] ~ 1 + v_k (x) phi_1."""
    W = path[-1]
    for r in reversed(path[:-1]):
        W = frame.comm(r, 1, W, 1, stage, scale="a", label="chain")
    return W


def _k3(frame: Frame, a: Elem, b: Elem, c: Elem, stage: int):
    if frame.one_way(a, b):
        W1 = frame.comm(a, -1, b, 1, stage, scale="b", label="k3.1/inner")
        X = frame.comm(W1, 1, c, 1, stage, scale="b", label="k3.1/outer")
        return _finish(frame, a, X, c, stage, "k3.1"), "k3-first-one-way"
    if frame.one_way(b, c):
        W = frame.comm(b, 1, c, 1, stage, scale="b", label="k3.2/inner")
        X = frame.comm(a, -1, W, 1, stage, scale="b", label="k3.2/outer")
        return _finish(frame, a, X, c, stage, "k3.2"), "k3-second-one-way"
    raise CombineError("k=3 needs (r1,r2) or (r2,r3) one-way")


def _k4(frame: Frame, r1, r2, r3, r4, stage):
    if not (frame.one_way(r1, r2) and frame.one_way(r3, r4)):
        raise CombineError("k=4 needs (r1,r2) and (r3,r4) one-way")
    W1 = frame.comm(r1, -1, r2, 1, stage, scale="b", label="k4/left")
    W2 = frame.comm(r3, 1, r4, 1, stage, scale="b", label="k4/right")
    X = frame.comm(W1, 1, W2, 1, stage, scale="b", label="k4/outer")
    return _finish(frame, r1, X, r4, stage, "k4"), "k4"


def _k5(frame: Frame, r1, r2, r3, r4, r5, stage):
    F = r1.field
    if not (frame.one_way(r1, r2) and frame.one_way(r4, r5)):
        raise CombineError("k=5 needs (r1,r2) and (r4,r5) one-way")
    P = frame.pair
    if frame.edge(r1, r4):
        s, _ = _k3(frame, r1, r4, r5, stage)
        return s, "k5-edge-r1-r4"
    if frame.edge(r4, r1):
        s1 = frame.comm(r1, F.inv(P(r4, r1)), r4, 1, stage, scale="a", label="k5b/left")
        s2 = frame.comm(r5, F.inv(P(r4, r5)), r4, 1, stage, scale="a", label="k5b/right")
        s1 = exact_operator(frame, s1, frame.view(r1).v, frame.view(r4).phi)
        s2 = exact_operator(frame, s2, frame.view(r5).v, frame.view(r4).phi)
        return frame.prod(s1, s2, stage, "k5b"), "k5-edge-r4-r1"
    if not frame.edge(r3, r1):
        W1 = frame.comm(r1, -1, r2, 1, stage, scale="a", label="k5c/w12")
        W2 = frame.comm(W1, 1, r3, 1, stage, scale="a", label="k5c/w123")
        W3 = frame.comm(r4, 1, r5, 1, stage, scale="b", label="k5c/w45")

        def outer(d):
            return frame.comm(W2, 1, W3, d, stage, scale="a", label="k5c/outer")

        return _finish_cancel(frame, r1, outer, r5, stage, "k5c"), "k5-no-edge-r3-r1"
    if not frame.edge(r5, r3):
        W1 = frame.comm(r1, -1, r2, 1, stage, scale="a", label="k5d/w12")
        W3 = frame.comm(r4, 1, r5, 1, stage, scale="b", label="k5d/w45")
        W2 = frame.comm(r3, 1, W3, 1, stage, scale="b", label="k5d/w345")

        def outer(d):
            return frame.comm(W1, 1, W2, d, stage, scale="a", label="k5d/outer")

        return _finish_cancel(frame, r1, outer, r5, stage, "k5d"), "k5-no-edge-r5-r3"
    # both (r5, r3) and (r3, r1) are edges: make (r5, s1) one-way
    lam = F.neg(F.div(P(r3, r5), F.mul(P(r3, r4), P(r4, r5))))
    s1 = frame.conj(r3, r4, lam, stage, label="k5e/s1")
    if not frame.one_way(r5, s1):
        raise CombineError("k=5: conjugation did not produce a one-way edge")
    s, _ = _k3(frame, r5, s1, r1, stage)
    return s, "k5-conjugated"


def combine_endpoints(frame: Frame, path: list, stage: int):
    """Transvection with frame direction exactly v_1 + v_k from a short path.

    Returns ``(elem, case)``; ``elem`` is None when v_1 + v_k = 0.
    """
    k = len(path)
    if not 2 <= k <= 5:
        raise CombineError("path length must be between 2 and 5")
    F = path[0].field
    for a, b in zip(path, path[1:]):
        if not frame.edge(a, b):
            raise CombineError("consecutive members must form a directed path")
    r1, rk = path[0], path[-1]
    v1, vk = frame.view(r1).v, frame.view(rk).v
    target = vec_add(F, v1, vk)
    if is_zero_vec(target):
        return None, "degenerate"
    if frame.edge(r1, rk):
        s = frame.conj(r1, rk, F.inv(frame.pair(r1, rk)), stage, label="direct")
        case = "direct-edge"
    elif frame.edge(rk, r1):
        s = frame.conj(rk, r1, F.inv(frame.pair(rk, r1)), stage, label="direct")
        case = "direct-edge-reversed"
    elif k == 2:
        raise CombineError("k=2 needs an edge between the endpoints")
    elif k == 3:
        s, case = _k3(frame, *path, stage)
    elif k == 4:
        s, case = _k4(frame, *path, stage)
    else:
        s, case = _k5(frame, *path, stage)
    sv = frame.view(s).v
    if ratio(F, target, sv) is None:
        raise CombineError(f"case {case}: result direction is not v_1 + v_k")
    return represent(s, frame, target), case
