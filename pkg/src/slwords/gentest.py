"""Deciding what a set of transvection groups generates.

Verdicts: ``SL`` (spanning, strongly connected, with a non-singular
cycle), ``Sp`` (spanning and strongly connected with every cycle
singular, odd characteristic), ``not_irreducible``, and over F_2
``F2_unresolved_irreducible``.  ``inconclusive`` is only produced when the
chordless-cycle search hits its effort cap.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .algebra import Field, Matrix, null_space, rank_of
from .tgraph import (
    TGraph,
    build_graph,
    detc,
    find_chordless_cycles,
    one_way_edge_from_cycle,
    strongly_connected,
)
from .transvection import PreconditionError, Transvection, TransvectionGroup, conj_formula

VERDICTS = ("SL", "Sp", "not_irreducible", "F2_unresolved_irreducible", "inconclusive")


def _as_transvection(s) -> Transvection:
    if isinstance(s, Transvection):
        return s
    if isinstance(s, TransvectionGroup):
        return s.base
    raise TypeError(f"expected a transvection or transvection group, got {type(s).__name__}")


def _members(S) -> list[Transvection]:
    ts = [_as_transvection(s) for s in S]
    if not ts:
        raise PreconditionError("empty transvection set")
    n = ts[0].n
    if n < 3:
        raise PreconditionError("generation test needs n >= 3")
    # one vertex per group; repeated groups carry no information
    out, seen = [], set()
    for t in ts:
        if t.group not in seen:
            seen.add(t.group)
            out.append(t)
    return out


@dataclass
class TEquivChain:
    """Replacements S_i = S_{i-1} with member i -> y^e x y^-e (y = member j).

    ``steps`` holds ``(i, j, e)``; over F_p an exponent e stands for e
    successive single conjugations by the same member.
    """

    steps: list = field(default_factory=list)

    def expanded(self, F: Field) -> list[tuple[int, int]]:
        if F.p is None:
            raise PreconditionError("expansion into single steps needs a prime field")
        return [(i, j) for i, j, e in self.steps for _ in range(int(e) % F.p)]

    def apply(self, S) -> list[Transvection]:
        S = [_as_transvection(s) for s in S]
        for i, j, e in self.steps:
            S = t_equiv_step(S, i, j, e)
        return S

    def to_json(self, F: Field) -> list:
        return [[i, j, F.dump(e)] for i, j, e in self.steps]


@dataclass
class PropertyReport:
    p1: bool
    p2: bool
    p3: bool | None  # None: search capped without an answer
    p3prime: bool | None
    span: dict = field(default_factory=dict)
    scc: dict = field(default_factory=dict)
    witness: list | None = None  # indices of a non-singular chordless cycle
    witness_detc: object = None
    exhaustion: dict | None = None
    chain: TEquivChain | None = None
    one_way_edge: tuple | None = None


def t_equiv_step(S, i: int, j: int, exp=1) -> list[Transvection]:
    """S with member i replaced by y^exp x y^-exp, y the member j."""
    S = [_as_transvection(s) for s in S]
    if not (0 <= i < len(S) and 0 <= j < len(S)):
        raise IndexError("member index out of range")
    if i == j:
        raise ValueError("a member cannot be conjugated by itself")
    y = S[j].power(exp)
    out = list(S)
    if isinstance(y, Transvection):
        out[i] = conj_formula(S[i], y)
    return out


def _span_report(F: Field, ts, n: int) -> tuple[bool, dict]:
    vs = [t.v for t in ts]
    ps = [t.phi for t in ts]
    rv, rp = rank_of(F, vs), rank_of(F, ps)
    rep = {"direction_rank": rv, "functional_rank": rp}
    if rv < n:
        # a covector killing every direction
        rep["direction_annihilator"] = [F.dump(a) for a in null_space(F, vs, n)[0]]
    if rp < n:
        rep["common_kernel_vector"] = [F.dump(a) for a in null_space(F, ps, n)[0]]
    return rv == n and rp == n, rep


def _has_one_way(G: TGraph, cyc) -> bool:
    k = len(cyc)
    return any(not G.has_edge(cyc[(i + 1) % k], cyc[i]) for i in range(k))


def _cycle_through_one_way(G: TGraph, comp_of: dict) -> list[int] | None:
    """Chordless cycle containing a one-way edge.

    A chord of such a cycle closes a shorter cycle that still contains a
    one-way edge, so shortcutting along chords ends at a chordless one; its
    cyclic determinant is the single nonzero product along the cycle.
    """
    edge = next(((a, b) for a, b in G.one_way_edges() if comp_of[a] == comp_of[b]), None)
    if edge is None:
        return None
    a, b = edge
    parent = {b: None}
    q = deque([b])
    while q and a not in parent:
        u = q.popleft()
        for w in G.out[u]:
            if w not in parent:
                parent[w] = u
                q.append(w)
    path = []
    x = a
    while x is not None:
        path.append(x)
        x = parent[x]
    cyc = [a] + path[::-1][:-1]  # a, b, ..., (pred of a)
    while True:
        k = len(cyc)
        chord = next(
            ((i, j) for i in range(k) for j in range(k)
             if (j - i) % k not in (0, 1, k - 1) and G.has_edge(cyc[i], cyc[j])),
            None,
        )
        if chord is None:
            return cyc
        i, j = chord
        # arc j .. i closed by the chord, or arc i .. j closed by its reverse
        c1 = [cyc[(j + t) % k] for t in range((i - j) % k + 1)]
        c2 = [cyc[(i + t) % k] for t in range((j - i) % k + 1)]
        if _has_one_way(G, c1):
            cyc = c1
        else:
            assert G.has_edge(cyc[j], cyc[i]) and _has_one_way(G, c2)
            cyc = c2


def check_properties(S, cap_cycles: int = 200_000, cap_rounds: int = 2, cap_elements: int = 400) -> PropertyReport:
    """P1, P2, P3 and P3' for a set of transvections (one per group)."""
    ts = _members(S)
    F, n = ts[0].field, ts[0].n
    p1, span = _span_report(F, ts, n)
    G = build_graph(ts)
    rep = strongly_connected(G)
    scc = {"components": rep.components}
    if not rep.connected:
        scc["closed_component"] = rep.closed_component
        scc["invariant_subspace"] = [[F.dump(a) for a in r] for r in rep.invariant_subspace]
    report = PropertyReport(p1, rep.connected, None, None, span, scc)
    comp_of = {v: ci for ci, comp in enumerate(rep.components) for v in comp}
    _p3(report, ts, G, n, comp_of, cap_cycles, cap_rounds, cap_elements)
    return report


def _p3(report: PropertyReport, ts, G: TGraph, n: int, comp_of, cap_cycles, cap_rounds, cap_elements):
    F = ts[0].field
    ow = G.one_way_edges()
    if ow:
        report.one_way_edge = min(ow)
        report.p3prime = True
        report.chain = TEquivChain()
        cyc = _cycle_through_one_way(G, comp_of)
        if cyc is not None:
            d = detc([ts[i] for i in cyc]) if len(cyc) >= 3 else None
            assert d is None or (d != 0 and len(cyc) <= n + 2)
            report.p3, report.witness, report.witness_detc = True, cyc, d
            return
    if F.p == 2 and not ow:
        # with every edge two-way all edge ratios are 1 = (-1)^k
        report.p3 = False
        report.p3prime = False
        report.exhaustion = {"complete": True, "reason": "over F_2 every two-way cycle is singular", "rounds": 0}
        return
    examined = 0
    for cyc in find_chordless_cycles(G, n + 2):
        examined += 1
        members = [ts[i] for i in cyc.indices]
        d = detc(members)
        if d != 0:
            report.p3, report.witness, report.witness_detc = True, list(cyc.indices), d
            if report.chain is None:
                rec = one_way_edge_from_cycle(members)
                idx = cyc.indices
                report.chain = TEquivChain([(idx[t], idx[b], e) for t, b, e in rec.steps])
                report.one_way_edge = (idx[rec.first], idx[rec.second])
                report.p3prime = True
            return
        if examined >= cap_cycles:
            break
    else:
        report.p3 = False
        if report.p3prime is None:
            report.p3prime = False
        report.exhaustion = {"complete": True, "cycles_examined": examined, "max_length": n + 2, "rounds": 0}
        return
    # search capped: conjugation growth looking for a one-way edge
    grown = list(ts)
    rnd = 0
    seen = {t.group for t in grown}
    for rnd in range(1, cap_rounds + 1):
        new = []
        for x in grown:
            for y in grown:
                if x is y or not x.edge_to(y) and not y.edge_to(x):
                    continue
                c = conj_formula(x, y)
                if c.group not in seen:
                    seen.add(c.group)
                    new.append(c)
        grown += new
        H = build_graph(grown)
        if H.one_way_edges():
            report.p3 = True
            report.p3prime = True
            report.exhaustion = {"complete": False, "cycles_examined": examined, "rounds": rnd, "found_by_growth": True}
            return
        if not new or len(grown) > cap_elements:
            break
    report.exhaustion = {"complete": False, "cycles_examined": examined, "rounds": rnd, "size": len(grown)}


# invariant forms ------------------------------------------------------------


def _as_matrix(s) -> Matrix:
    if isinstance(s, Matrix):
        return s
    return _as_transvection(s).matrix


def _form_space(F: Field, mats, n: int, alternating: bool) -> list[tuple]:
    """Basis of {B : g^T B g = B for all g}, B flattened row-major."""
    rows = []
    for g in mats:
        # (g^T B g)_{ab} - B_ab = sum_cd g_ca g_db B_cd - B_ab
        for a in range(n):
            for b in range(n):
                row = [F.mul(g[c, a], g[d, b]) for c in range(n) for d in range(n)]
                row[a * n + b] = F.sub(row[a * n + b], F.one)
                rows.append(row)
    if alternating:
        for a in range(n):
            row = [F.zero] * (n * n)
            row[a * n + a] = F.one
            rows.append(row)
            for b in range(a + 1, n):
                row = [F.zero] * (n * n)
                row[a * n + b] = F.one
                row[b * n + a] = F.one
                rows.append(row)
    if not rows:
        rows = [[F.zero] * (n * n)]
    return null_space(F, rows, n * n)


def invariant_form(S, seed: int = 0, tries: int = 64) -> Matrix | None:
    """A nondegenerate alternating form preserved by every member, or None."""
    mats = [_as_matrix(s) for s in S]
    if not mats:
        raise PreconditionError("empty set")
    F, n = mats[0].field, mats[0].n
    basis = _form_space(F, mats, n, alternating=True)
    if not basis:
        return None
    cands = [list(b) for b in basis]
    rng = random.Random(seed)
    for _ in range(tries):
        coef = [F.coerce(rng.randrange(1, F.p)) if F.p else F.coerce(rng.randint(-3, 3)) for _ in basis]
        cands.append([F.zero] * (n * n))
        for c, b in zip(coef, basis):
            cands[-1] = [F.add(x, F.mul(c, y)) for x, y in zip(cands[-1], b)]
    for flat in cands:
        B = Matrix(F, tuple(tuple(flat[a * n:(a + 1) * n]) for a in range(n)), raw=True)
        if B.det() != 0:
            return B
    return None


def form_is_invariant(B: Matrix, S) -> bool:
    return all(g.transpose() @ B @ g == B for g in map(_as_matrix, S))


# classification ---------------------------------------------------------------


@dataclass
class Verdict:
    verdict: str
    report: PropertyReport
    form: Matrix | None = None
    flags: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        r = self.report
        out = {"verdict": self.verdict, "p1": r.p1, "p2": r.p2, "p3": r.p3, "p3prime": r.p3prime}
        if r.witness is not None:
            out["witness"] = {"cycle": r.witness}
            if r.chain is not None:
                out["witness"]["one_way_edge"] = list(r.one_way_edge) if r.one_way_edge else None
        cert = {}
        if not r.p1:
            cert["span"] = r.span
        if not r.p2:
            cert["scc"] = r.scc
        if r.exhaustion is not None:
            cert["exhaustion"] = r.exhaustion
        if self.form is not None:
            cert["invariant_form"] = [[self.form.field.dump(a) for a in row] for row in self.form.rows]
        if cert:
            out["certificates"] = cert
        if self.flags:
            out["flags"] = self.flags
        return out


class ClassificationError(RuntimeError):
    """Internal consistency check failed (e.g. Sp verdict without a form)."""


def classify(S, **caps) -> Verdict:
    ts = _members(S)
    F, n = ts[0].field, ts[0].n
    r = check_properties(ts, **caps)
    if not (r.p1 and r.p2):
        return Verdict("not_irreducible", r)
    if r.p3:
        return Verdict("SL", r)
    if r.p3 is None:
        return Verdict("inconclusive", r, flags={"inconclusive_at_cap": True})
    if F.p == 2:
        return Verdict("F2_unresolved_irreducible", r)
    if n % 2:
        raise ClassificationError("irreducible set with all cycles singular in odd dimension")
    form = invariant_form(ts) if n <= 8 else None
    if n <= 8 and form is None:
        raise ClassificationError("Sp verdict without an invariant alternating form")
    return Verdict("Sp", r, form)
