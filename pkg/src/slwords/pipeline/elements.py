"""Witnessed transvection groups and the frame-generic constructions.

An :class:`Elem` stands for a whole group ``t^K`` together with a word family
``lam -> word(t^lam)``.  Every construction below is linear in one factor's
exponent, so families come for free and every constructed set is K-closed.

A :class:`Frame` lets each construction be written once: the dual frame views
``(v, phi)`` as ``(phi^T, v^T)`` via the transpose anti-automorphism, which
reverses all edges and reverses word order.
"""
from __future__ import annotations

from typing import Callable

from ..algebra import is_zero_vec, pairing, proportional, ratio, vec_axpy
from ..transvection import (
    IDENTITY,
    PreconditionError,
    Transvection,
    commutator_formula,
    conj_formula,
    conjugate,
)
from .words import EMPTY, LeafTable, Word, cat


def _positive(F, lam) -> bool:
    """Canonical half of the nonzero scalars: lam in 1..p//2, or lam > 0 over Q."""
    if F.p is None:
        return lam > 0
    return int(lam) <= F.p // 2


class Elem:
    """A transvection group with a witness word for each member."""

    __slots__ = ("t", "stage", "label", "_builder", "_memo", "parts", "gens", "_cost")

    def __init__(self, t: Transvection, stage: int, builder: Callable, parts=(), gens: int = 0, label: str = ""):
        if not isinstance(t, Transvection):
            raise PreconditionError(f"construction {label!r} did not yield a proper transvection")
        self.t = t
        self.stage = stage
        self.label = label
        self._builder = builder
        self._memo: dict = {}
        self.parts = tuple(parts)
        self.gens = gens
        self._cost: dict = {}

    @property
    def field(self):
        return self.t.field

    @property
    def group(self):
        return self.t.group

    def member(self, lam) -> Transvection:
        return self.t.power(lam)

    def word(self, lam=1) -> Word:
        F = self.t.field
        lam = F.coerce(lam)
        if lam == 0:
            return EMPTY
        w = self._memo.get(lam)
        if w is None:
            # the builder runs for one member of each pair +-lam only, so word
            # shapes (and the cancellations they allow) do not depend on the
            # order in which members are requested
            if _positive(F, lam):
                w = self._builder(lam)
            else:
                w = self.word(F.neg(lam)).inverse()
            self._memo[lam] = w
        return w

    def cost_over(self, level: int) -> int:
        """Length of this element's word over the members of stages <= level."""
        if self.stage <= level:
            return 1
        c = self._cost.get(level)
        if c is None:
            c = self.gens + sum(k * e.cost_over(level) for e, k in self.parts)
            self._cost[level] = c
        return c

    def __repr__(self):
        return f"Elem({self.label or 'anon'}, stage={self.stage}, {self.t!r})"


# primitive constructions (real frame) -----------------------------------


def table_elem(t: Transvection, table: dict, stage: int, label: str = "table") -> Elem:
    F = t.field

    def build(lam):
        return table[F.coerce(lam)]

    return Elem(t, stage, build, label=label)


def letter_elems(ts, table: LeafTable | None = None) -> list[Elem]:
    """Elements whose words are single symbolic letters (length over Z)."""
    table = table or LeafTable("sym")
    out = []
    for i, t in enumerate(ts):
        F = t.field

        def build(lam, i=i, F=F, t=t):
            return table.get(i, lam, F.neg(lam), payload=t.power(lam), inv_payload=t.power(F.neg(lam)))

        out.append(Elem(t, 0, build, label=f"z{i}"))
    return out


def conj_by_word(x: Elem, gword: Word, gmat, stage: int, gens: int, label: str = "conj") -> Elem:
    """g x g^-1 for a fixed word g with matrix ``gmat``."""
    t = conjugate(gmat, x.t)
    ginv = gword.inverse()

    def build(lam):
        return cat(gword, x.word(lam), ginv)

    return Elem(t, stage, build, parts=[(x, 1)], gens=gens, label=label)


def conj(x: Elem, by: Elem, mu, stage: int, label: str = "conj") -> Elem:
    """by^mu x by^-mu."""
    F = x.field
    mu = F.coerce(mu)
    if mu == 0:
        return x
    t = conj_formula(x.t, by.t.power(mu))

    def build(lam):
        return cat(by.word(mu), x.word(lam), by.word(F.neg(mu)))

    return Elem(t, stage, build, parts=[(by, 2), (x, 1)], label=label)


def comm(a: Elem, alpha, b: Elem, beta, stage: int, scale: str = "b", label: str = "comm") -> Elem:
    """[a^alpha, b^beta]; the family scales the exponent of ``scale``."""
    F = a.field
    alpha, beta = F.coerce(alpha), F.coerce(beta)
    t = commutator_formula(a.t.power(alpha), b.t.power(beta))
    if t is IDENTITY:
        raise PreconditionError(f"{label}: commutator is trivial")

    def build(lam):
        al, be = alpha, beta
        if scale == "a":
            al = F.mul(alpha, lam)
        else:
            be = F.mul(beta, lam)
        return cat(a.word(al), b.word(be), a.word(F.neg(al)), b.word(F.neg(be)))

    return Elem(t, stage, build, parts=[(a, 2), (b, 2)], label=label)


def prod(x: Elem, y: Elem, stage: int, label: str = "prod") -> Elem:
    """x y for transvections sharing a direction or a functional exactly."""
    F = x.field
    a, b = x.t, y.t
    if proportional(F, a.phi, b.phi):
        # (1 + u(x)f)(1 + w(x)cf) = 1 + (u + c w)(x)f
        v = vec_axpy(F, ratio(F, a.phi, b.phi), b.v, a.v)
        t = Transvection(F, v, a.phi) if not is_zero_vec(v) else IDENTITY
    elif proportional(F, a.v, b.v):
        phi = vec_axpy(F, ratio(F, a.v, b.v), b.phi, a.phi)
        t = Transvection(F, a.v, phi) if not is_zero_vec(phi) else IDENTITY
    else:
        raise PreconditionError(f"{label}: factors share neither direction nor functional")
    if t is IDENTITY:
        raise PreconditionError(f"{label}: product is trivial")

    def build(lam):
        return cat(x.word(lam), y.word(lam))

    return Elem(t, stage, build, parts=[(x, 1), (y, 1)], label=label)


def scaled(x: Elem, c, label: str | None = None) -> Elem:
    """The same group re-based at x^c."""
    F = x.field
    c = F.coerce(c)
    if c == F.one:
        return x

    def build(lam):
        return x.word(F.mul(c, lam))

    return Elem(x.t.power(c), x.stage, build, parts=[(x, 1)], label=label or x.label)


# frames ---------------------------------------------------------------------


class Frame:
    """Primal or transposed view of the constructions."""

    def __init__(self, dual: bool = False):
        self.dual = dual

    def flip(self) -> "Frame":
        return DUAL if not self.dual else PRIMAL

    def view(self, e) -> Transvection:
        t = e.t if isinstance(e, Elem) else e
        if not self.dual:
            return t
        return Transvection(t.field, t.phi, t.v)

    def pair(self, a, b):
        """phi_b(v_a) in this frame."""
        ta, tb = self.view(a), self.view(b)
        return pairing(ta.field, tb.phi, ta.v)

    def edge(self, a, b) -> bool:
        return self.pair(a, b) != 0

    def one_way(self, a, b) -> bool:
        return self.edge(a, b) and not self.edge(b, a)

    def adjacent(self, a, b) -> bool:
        return self.edge(a, b) or self.edge(b, a)

    def conj(self, x: Elem, by: Elem, mu, stage: int, label: str = "conj") -> Elem:
        F = x.field
        return conj(x, by, F.neg(F.coerce(mu)) if self.dual else mu, stage, label)

    def comm(self, a: Elem, alpha, b: Elem, beta, stage: int, scale: str = "b", label: str = "comm") -> Elem:
        if not self.dual:
            return comm(a, alpha, b, beta, stage, scale, label)
        F = a.field
        # (a^al b^be a^-al b^-be)^T = [b^-be, a^-al]
        return comm(
            b, F.neg(F.coerce(beta)), a, F.neg(F.coerce(alpha)), stage,
            "a" if scale == "b" else "b", label,
        )

    def prod(self, x: Elem, y: Elem, stage: int, label: str = "prod") -> Elem:
        return prod(y, x, stage, label) if self.dual else prod(x, y, stage, label)


PRIMAL = Frame(False)
DUAL = Frame(True)


def operator_ratio(t: Transvection, s: Transvection):
    """c with s = t^c, or None when s lies in another group."""
    F = t.field
    i = next(k for k, a in enumerate(t.v) if a != 0)
    j = next(k for k, a in enumerate(t.phi) if a != 0)
    c = F.div(F.mul(s.v[i], s.phi[j]), F.mul(t.v[i], t.phi[j]))
    if c == 0 or t.power(c).matrix != s.matrix:
        return None
    return c


def represent(x: Elem, frame: Frame, v) -> Elem:
    """Same group and words, with frame direction stored exactly as ``v``."""
    F = x.field
    view = frame.view(x)
    v = tuple(F.coerce(a) for a in v)
    i = next(k for k, a in enumerate(v) if a != 0)
    c = F.div(view.v[i], v[i])
    if tuple(F.mul(c, a) for a in v) != view.v:
        raise PreconditionError("represent: vector is not on the direction line")
    phi = tuple(F.mul(c, a) for a in view.phi)
    t = Transvection(F, v, phi) if not frame.dual else Transvection(F, phi, v)
    if t == x.t:
        return x
    y = Elem(t, x.stage, x._builder, parts=x.parts, gens=x.gens, label=x.label)
    y._memo = x._memo
    return y
