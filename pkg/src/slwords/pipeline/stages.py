"""The staged construction Y1 -> Y5 on top of a witnessed transvection group."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..algebra import coordinates, leading_index, rank_of, vec_scale
from ..tgraph import (
    build_graph,
    find_nonsingular_chordless_cycle,
    one_way_edge_from_cycle,
    strongly_connected,
)
from ..transvection import PreconditionError, Transvection, conjugate
from .closure import GroupWitness, StageFailure, find_transvection_group
from .combine import CombineError, combine_endpoints
from .elements import DUAL, PRIMAL, Elem, Frame, conj, conj_by_word, represent
from .genset import GenSet

STAGE_NAMES = ("Y0", "Y1", "Y2", "Y3", "Y4", "Y5", "T", "SL")
Y0, Y1, Y2, Y3, Y4, Y5, TT, SL = range(8)


def _line_key(F, v) -> tuple:
    i = leading_index(v)
    return vec_scale(F, F.inv(v[i]), v)


@dataclass
class StageInfo:
    name: str
    rounds: int = 0
    notes: dict = field(default_factory=dict)


class Stages:
    """Y1..Y5 for a fixed generating set; Y3..Y5 are memoized oracles."""

    def __init__(self, X: GenSet, cap_rounds: int | None = None, cap_elements: int = 50_000, witness: GroupWitness | None = None):
        self.X = X
        self.F = X.field
        self.n = X.n
        self.cap_rounds = cap_rounds if cap_rounds is not None else self.n * self.n
        self.cap_elements = cap_elements
        self.witness = witness or find_transvection_group(X)
        self.by_stage: list[list[Elem]] = [[] for _ in STAGE_NAMES]
        self.info = {name: StageInfo(name) for name in STAGE_NAMES}
        self._record(self.witness.elem)
        self.y1: list[Elem] = []
        self._y1_seen = set()
        self._y1_frontier: list[Elem] = []
        self._symbols = [(w, m, m.inverse()) for w, m in X.symbols()]
        self._mid: dict = {}
        self._out: dict = {}
        self._y5: dict = {}
        self.cases: dict[str, int] = {}
        self.build_Y1()
        self.build_Y2()

    # bookkeeping --------------------------------------------------------

    def _record(self, e: Elem) -> Elem:
        self.by_stage[e.stage].append(e)
        return e

    def _count(self, case: str):
        self.cases[case] = self.cases.get(case, 0) + 1

    # Y1 -------------------------------------------------------------------

    def _y1_round(self) -> int:
        nxt = []
        for e in self._y1_frontier:
            for gw, g, ginv in self._symbols:
                t = conjugate(g, e.t, ginv)
                if t.group in self._y1_seen:
                    continue
                self._y1_seen.add(t.group)
                el = conj_by_word(e, gw, g, Y1, gens=2, label="Y1")
                nxt.append(self._record(el))
        self.y1.extend(nxt)
        self._y1_frontier = nxt
        self.info["Y1"].rounds += 1
        if len(self.y1) > self.cap_elements:
            raise StageFailure("Y1", "element cap exceeded", {"elements": len(self.y1)}, kind="cap")
        return len(nxt)

    def _y1_certificate(self) -> dict:
        ts = [e.t for e in self.y1]
        rv = rank_of(self.F, [t.v for t in ts])
        rphi = rank_of(self.F, [t.phi for t in ts])
        rep = strongly_connected(build_graph(ts))
        cert = {"direction_rank": rv, "functional_rank": rphi, "strongly_connected": rep.connected}
        if not rep.connected:
            cert["closed_component"] = rep.closed_component
            cert["invariant_subspace"] = [[self.F.dump(a) for a in r] for r in rep.invariant_subspace]
        return cert

    def _y1_ok(self) -> bool:
        ts = [e.t for e in self.y1]
        if rank_of(self.F, [t.v for t in ts]) < self.n or rank_of(self.F, [t.phi for t in ts]) < self.n:
            return False
        return strongly_connected(build_graph(ts)).connected

    def build_Y1(self):
        y0 = self.witness.elem
        self.y1 = [y0]
        self._y1_seen = {y0.group}
        self._y1_frontier = [y0]
        while not self._y1_ok():
            if self.info["Y1"].rounds >= self.cap_rounds or not self._y1_frontier:
                if not self._y1_frontier:
                    # the whole orbit is known: X does not generate SL
                    raise StageFailure("Y1", "closure complete without a spanning strongly connected set", self._y1_certificate(), kind="not_generating")
                raise StageFailure("Y1", "round cap reached without spanning strongly connected set", self._y1_certificate(), kind="cap")
            self._y1_round()
        self._bases()

    def _bases(self):
        F = self.F
        self.v_basis, self.phi_basis = [], []
        vs, ps = [], []
        for e in self.y1:
            if len(self.v_basis) < self.n and rank_of(F, vs + [e.t.v]) > len(vs):
                vs.append(e.t.v)
                self.v_basis.append(e)
            if len(self.phi_basis) < self.n and rank_of(F, ps + [e.t.phi]) > len(ps):
                ps.append(e.t.phi)
                self.phi_basis.append(e)

    # Y2 -------------------------------------------------------------------

    def build_Y2(self):
        info = self.info["Y2"]
        while True:
            ts = [e.t for e in self.y1]
            G = build_graph(ts)
            ow = G.one_way_edges()
            if ow:
                i, j = min(ow)
                self.y2 = list(self.y1)
                self.edge = (self.y1[i], self.y1[j])
                info.notes["source"] = "one-way edge in Y1"
                break
            cyc = None
            if self.F.p != 2:  # over F_2 every two-way cycle is singular
                cyc = find_nonsingular_chordless_cycle(G)
            if cyc is not None:
                es = [self.y1[i] for i in cyc.indices]
                rec = one_way_edge_from_cycle([e.t for e in es])
                added = []
                for target, by, lam in rec.steps:
                    es[target] = conj(es[target], es[by], lam, Y2, label="Y2")
                    added.append(self._record(es[target]))
                self.y2 = list(self.y1) + added
                self.edge = (es[rec.first], es[rec.second])
                info.notes.update(source="non-singular chordless cycle", cycle_length=len(cyc.indices))
                break
            if not self._y1_frontier:
                raise StageFailure("Y2", "closure complete and every cycle singular", self._y1_certificate(), kind="not_generating")
            if self.info["Y1"].rounds >= self.cap_rounds:
                raise StageFailure("Y2", "no one-way edge or non-singular cycle within the round cap", self._y1_certificate(), kind="cap")
            self._y1_round()
            info.rounds += 1
        s, t = self.edge
        if not PRIMAL.one_way(s, t):
            raise StageFailure("Y2", "constructed edge is not one-way")
        self._y2_graph = build_graph([e.t for e in self.y2])

    # Y3 -------------------------------------------------------------------

    def mid(self, s, t) -> Elem | None:
        """r with s -> r -> t, or None when (s, t) is already an edge."""
        if PRIMAL.edge(s, t):
            return None
        key = (s.t.group, t.t.group)
        m = self._mid.get(key)
        if m is None:
            m = self._mid_path(s, t)
            self._mid[key] = m
        return m

    def mid_frame(self, frame: Frame, s, t) -> Elem | None:
        return self.mid(t, s) if frame.dual else self.mid(s, t)

    def _mid_path(self, s, t) -> Elem:
        G = self._y2_graph
        Yv = self.y2
        parent = {}
        queue = deque()
        for i in range(len(Yv)):
            if PRIMAL.edge(s, Yv[i]):
                parent[i] = None
                queue.append(i)
        end = None
        while queue:
            i = queue.popleft()
            if PRIMAL.edge(Yv[i], t):
                end = i
                break
            for j in G.out[i]:
                if j not in parent:
                    parent[j] = i
                    queue.append(j)
        if end is None:
            raise StageFailure("Y3", "no path through Y2 (graph not strongly connected)")
        path = []
        x = end
        while x is not None:
            path.append(Yv[x])
            x = parent[x]
        path.reverse()
        m = path[0]
        for r in path[1:]:
            m = conj(m, r, 1, Y3, label="Y3")
        if not (PRIMAL.edge(s, m) and PRIMAL.edge(m, t)):
            raise StageFailure("Y3", "conjugated path vertex is not a middle vertex")
        self.info["Y3"].notes["max_path"] = max(self.info["Y3"].notes.get("max_path", 0), len(path))
        return self._record(m)

    # Y4 -------------------------------------------------------------------

    def _edge_in(self, frame: Frame):
        s, t = self.edge
        return (t, s) if frame.dual else (s, t)

    def _k1(self, frame: Frame, r, s, t) -> Elem:
        """e with (r, e) one-way, given r -> s and a one-way edge (s, t)."""
        F = self.F
        P = frame.pair
        if not frame.edge(t, r):
            e = frame.comm(s, 1, t, 1, Y4, label="Y4/comm")
        else:
            lam = F.neg(F.div(P(s, r), F.mul(P(s, t), P(t, r))))
            e = frame.conj(s, t, lam, Y4, label="Y4/conj")
        if not frame.one_way(r, e):
            raise StageFailure("Y4", "one-way neighbour construction failed")
        return self._record(e)

    def out_neighbor(self, frame: Frame, r) -> Elem:
        """e with (r, e) one-way in the frame (e_r; s_r in the dual frame)."""
        key = (frame.dual, r.t.group)
        e = self._out.get(key)
        if e is not None:
            return e
        s, t = self._edge_in(frame)
        if frame.one_way(r, t):
            e = t
            self._count("Y4-k0")
        elif frame.edge(r, s):
            e = self._k1(frame, r, s, t)
            self._count("Y4-k1")
        else:
            m = self.mid_frame(frame, r, s)
            em = self._k1(frame, m, s, t)
            e = self._k1(frame, r, m, em)
            self._count("Y4-k2")
        self._out[key] = e
        return e

    def e_r(self, r) -> Elem:
        return self.out_neighbor(PRIMAL, r)

    def s_r(self, r) -> Elem:
        return self.out_neighbor(DUAL, r)

    # Y5 -------------------------------------------------------------------

    def y5(self, frame: Frame, w) -> Elem:
        """Element whose frame direction is exactly w (vec; cov in the dual frame)."""
        F = self.F
        w = tuple(F.coerce(a) for a in w)
        if not any(w):
            raise PreconditionError("y5 needs a nonzero vector")
        key = (frame.dual, _line_key(F, w))
        e = self._y5.get(key)
        if e is None:
            basis = self.phi_basis if frame.dual else self.v_basis
            dirs = [frame.view(b).v for b in basis]
            coords = coordinates(F, dirs, w)
            terms = [represent(b, frame, vec_scale(F, c, d)) for b, c, d in zip(basis, coords, dirs) if c != 0]
            e = self._y5_split(frame, terms)
            self._y5[key] = e
        return represent(e, frame, w)

    def vec(self, v) -> Elem:
        return self.y5(PRIMAL, v)

    def cov(self, phi) -> Elem:
        return self.y5(DUAL, phi)

    def _y5_split(self, frame: Frame, terms: list) -> Elem:
        if len(terms) == 1:
            return terms[0]
        h = (len(terms) + 1) // 2
        left = self._y5_split(frame, terms[:h])
        right = self._y5_split(frame, terms[h:])
        return self.merge(frame, left, right)

    def path_between(self, frame: Frame, r1, r2) -> list:
        """A path r1 .. r2 of length <= 5 meeting the combination hypotheses."""
        if frame.edge(r1, r2):
            return [r1, r2]
        if frame.edge(r2, r1):
            return [r2, r1]
        e = self.out_neighbor(frame, r1)
        f = self.in_neighbor(frame, r2)
        if e.t.group == f.t.group:
            return [r1, e, r2]
        if frame.edge(e, f):
            return [r1, e, f, r2]
        m = self.mid_frame(frame, e, f)
        return [r1, e, m, f, r2]

    def in_neighbor(self, frame: Frame, r) -> Elem:
        """f with (f, r) one-way in the frame."""
        return self.out_neighbor(frame.flip(), r)

    def merge(self, frame: Frame, r1, r2) -> Elem:
        path = self.path_between(frame, r1, r2)
        s, case = combine_endpoints(frame, path, Y5)
        if s is None:
            raise CombineError("merge: opposite directions")
        self._count(f"Y5-{case}")
        return self._record(s)
