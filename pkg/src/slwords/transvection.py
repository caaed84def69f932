"""Transvections 1 + v (x) phi, their groups t^K, and the basic identities.

A transvection is stored by an exact pair ``(v, phi)`` with ``phi(v) = 0``.
The pair is only unique up to ``(c v, phi / c)``; :class:`TransvectionGroup`
normalises both lines so that equal groups compare equal structurally.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable

from .algebra import (
    Field,
    Matrix,
    is_zero_vec,
    leading_index,
    pairing,
    vec_add,
    vec_axpy,
    vec_scale,
)


class PreconditionError(ValueError):
    """An identity was applied outside its hypotheses."""


class _Identity:
    """The trivial (non-proper) transvection."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "IDENTITY"

    def __bool__(self):
        return False


IDENTITY = _Identity()


@dataclass(frozen=True)
class Transvection:
    field: Field
    v: tuple
    phi: tuple

    def __post_init__(self):
        if len(self.v) != len(self.phi):
            raise ValueError("v and phi must have the same length")
        if is_zero_vec(self.v) or is_zero_vec(self.phi):
            raise ValueError("v and phi must be nonzero")
        if pairing(self.field, self.phi, self.v) != 0:
            raise ValueError("phi(v) must vanish")

    @classmethod
    def make(cls, field: Field, v, phi) -> "Transvection":
        return cls(field, tuple(field.coerce(a) for a in v), tuple(field.coerce(a) for a in phi))

    @property
    def n(self) -> int:
        return len(self.v)

    @cached_property
    def matrix(self) -> Matrix:
        return Matrix.outer(self.field, self.v, self.phi)

    def inverse(self) -> "Transvection":
        return Transvection(self.field, self.v, tuple(self.field.neg(a) for a in self.phi))

    def power(self, lam):
        """t^lam = 1 + lam * v (x) phi; IDENTITY for lam = 0."""
        lam = self.field.coerce(lam)
        if lam == 0:
            return IDENTITY
        return Transvection(self.field, self.v, vec_scale(self.field, lam, self.phi))

    def pair(self, other: "Transvection"):
        """other.phi(self.v): nonzero iff (self, other) is an edge."""
        return pairing(self.field, other.phi, self.v)

    def edge_to(self, other: "Transvection") -> bool:
        return self.pair(other) != 0

    @cached_property
    def group(self) -> "TransvectionGroup":
        return TransvectionGroup.of(self)

    def same_group(self, other: "Transvection") -> bool:
        return self.group == other.group

    def to_json(self) -> dict:
        F = self.field
        return {"v": [F.dump(a) for a in self.v], "phi": [F.dump(a) for a in self.phi]}

    @staticmethod
    def from_json(obj, field: Field) -> "Transvection":
        return Transvection.make(field, obj["v"], obj["phi"])

    def __repr__(self):
        return f"T(v={list(self.v)}, phi={list(self.phi)})"


@dataclass(frozen=True, order=True)
class TransvectionGroup:
    """The one-parameter group t^K, keyed by normalised (line, functional)."""

    line: tuple
    functional: tuple
    field: Field = dc_field(compare=False)

    @staticmethod
    def of(t: Transvection) -> "TransvectionGroup":
        F = t.field
        i = leading_index(t.v)
        j = leading_index(t.phi)
        return TransvectionGroup(vec_scale(F, F.inv(t.v[i]), t.v), vec_scale(F, F.inv(t.phi[j]), t.phi), F)

    @cached_property
    def base(self) -> Transvection:
        return Transvection(self.field, self.line, self.functional)

    def member(self, lam):
        return self.base.power(lam)

    def scalar_of(self, t: Transvection):
        """lam with t = base^lam; None when t lies in another group."""
        F = self.field
        if t.group != self:
            return None
        i = leading_index(self.line)
        j = leading_index(self.functional)
        # t.v (x) t.phi = lam * line (x) functional, compare entry (i, j)
        return F.div(F.mul(t.v[i], t.phi[j]), F.mul(self.line[i], self.functional[j]))

    def contains(self, t) -> bool:
        return t is IDENTITY or (isinstance(t, Transvection) and t.group == self)

    def members(self, include_identity: bool = True):
        F = self.field
        if include_identity:
            yield IDENTITY
        for lam in F.units():
            yield self.member(lam)

    def conjugate(self, g: Matrix, ginv: Matrix | None = None) -> "TransvectionGroup":
        return conjugate(g, self.base, ginv).group

    def to_json(self) -> dict:
        return self.base.to_json()

    def __repr__(self):
        return f"TG(<{list(self.line)}>, <{list(self.functional)}>)"


def recognize(M: Matrix):
    """Transvection with M = 1 + v (x) phi, IDENTITY for M = 1, None otherwise.

    The returned ``v`` has first nonzero coordinate 1.
    """
    F = M.field
    N = M.sub_identity()
    rows = N.rows
    lead_row = next((i for i, r in enumerate(rows) if not is_zero_vec(r)), None)
    if lead_row is None:
        return IDENTITY
    phi = rows[lead_row]
    # rows[i] = v[i] * phi, and v[lead_row] = 1
    j = leading_index(phi)
    pj = F.inv(phi[j])
    v = tuple(F.mul(r[j], pj) for r in rows)
    for i, r in enumerate(rows):
        if tuple(F.mul(v[i], a) for a in phi) != r:
            return None
    if pairing(F, phi, v) != 0:
        return None
    return Transvection(F, v, phi)


def conjugate(g: Matrix, t: Transvection, ginv: Matrix | None = None) -> Transvection:
    """g t g^{-1} = 1 + (g.v) (x) (g.phi)."""
    if ginv is None:
        ginv = g.inverse()
    return Transvection(t.field, g.apply(t.v), ginv.rapply(t.phi))


def conj_formula(r1: Transvection, r2: Transvection) -> Transvection:
    """r2 r1 r2^{-1} by the closed form."""
    F = r1.field
    a = pairing(F, r2.phi, r1.v)
    b = pairing(F, r1.phi, r2.v)
    return Transvection(F, vec_axpy(F, a, r2.v, r1.v), vec_axpy(F, F.neg(b), r2.phi, r1.phi))


def pair_identity(r1: Transvection, r2: Transvection, which: str):
    """The three closed forms for r2 r1 r2^{-1}, [r2, r1] and r1 r2."""
    F = r1.field
    if which == "conj_a":
        return conj_formula(r1, r2)
    if which == "comm_b":
        if pairing(F, r1.phi, r2.v) != 0:
            raise PreconditionError("comm_b needs phi_1(v_2) = 0")
        c = pairing(F, r2.phi, r1.v)
        if c == 0:
            return IDENTITY
        return Transvection(F, vec_scale(F, c, r2.v), r1.phi)
    if which == "prod_c":
        if r1.phi != r2.phi:
            raise PreconditionError("prod_c needs phi_1 = phi_2")
        v = vec_add(F, r1.v, r2.v)
        if is_zero_vec(v):
            return IDENTITY
        return Transvection(F, v, r1.phi)
    raise ValueError(f"unknown identity {which!r}")


def commutator_formula(x: Transvection, y: Transvection):
    """[x, y] = x y x^{-1} y^{-1} for a one-way edge (x, y) or (y, x).

    For a one-way edge (x, y) the result is 1 - phi_y(v_x) v_y (x) phi_x;
    for a one-way edge (y, x) it is 1 + phi_x(v_y) v_x (x) phi_y.
    """
    F = x.field
    xy = pairing(F, y.phi, x.v)
    yx = pairing(F, x.phi, y.v)
    if yx == 0 and xy != 0:
        return Transvection(F, vec_scale(F, F.neg(xy), y.v), x.phi)
    if xy == 0 and yx != 0:
        return Transvection(F, vec_scale(F, yx, x.v), y.phi)
    if xy == 0 and yx == 0:
        return IDENTITY
    raise PreconditionError("commutator of a two-way pair is not a transvection in general")


def power(t: Transvection, lam):
    return t.power(lam)


def k_closure(ts: Iterable[Transvection]) -> set[TransvectionGroup]:
    """Y^K at group granularity (identity markers are dropped)."""
    return {t.group for t in ts if t is not IDENTITY}
