"""Conjugation closures of a transvection and finding a whole transvection group."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable

from ..algebra import Matrix, rank_of
from ..tgraph import build_graph, shortest_directed_cycle
from ..transvection import Transvection, TransvectionGroup, recognize
from .elements import Elem, table_elem
from .genset import GenSet
from .words import EMPTY, Word, cat, cat_list


class StageFailure(RuntimeError):
    """A pipeline stage could not establish its postcondition."""

    KINDS = ("cap", "not_generating", "precondition", "internal")

    def __init__(self, stage: str, message: str, certificate: dict | None = None, kind: str = "internal"):
        super().__init__(f"{stage}: {message}")
        if kind not in self.KINDS:
            raise ValueError(f"unknown failure kind {kind!r}")
        self.stage = stage
        self.certificate = certificate or {}
        self.kind = kind

    def to_json(self) -> dict:
        return {"stage": self.stage, "kind": self.kind, "message": str(self), "certificate": self.certificate}


@dataclass
class ClosureResult:
    items: list  # (Transvection, Word), one per transvection group
    rounds: int
    exited_early: bool = False

    @property
    def transvections(self) -> list[Transvection]:
        return [t for t, _ in self.items]


def conjugation_closure(
    t: Transvection,
    X: GenSet,
    k: int,
    predicate: Callable[[list], bool] | None = None,
    word: Word | None = None,
) -> ClosureResult:
    """{x_k..x_1 t x_1^-1..x_k^-1}, deduplicated by transvection group.

    Round i conjugates the previous round's new elements by every symbol of
    X and X^-1, so each witness has length at most 2k + |word(t)|.
    """
    if word is None:
        word = _symbol_word(X, t)
    items = [(t, word)]
    seen = {t.group}
    frontier = items[:]
    symbols = list(X.symbols())
    inv = [(w, m.inverse()) for w, m in symbols]
    rounds = 0
    if predicate is not None and predicate(items):
        return ClosureResult(items, 0, True)
    while rounds < k and frontier:
        rounds += 1
        nxt = []
        for s, w in frontier:
            for (gw, g), (_, ginv) in zip(symbols, inv):
                c = Transvection(s.field, g.apply(s.v), ginv.rapply(s.phi))
                if c.group in seen:
                    continue
                seen.add(c.group)
                nxt.append((c, cat(gw, w, gw.inverse())))
        items.extend(nxt)
        frontier = nxt
        if predicate is not None and predicate(items):
            return ClosureResult(items, rounds, True)
    return ClosureResult(items, rounds, False)


def _symbol_word(X: GenSet, t: Transvection) -> Word:
    for i, s in enumerate(X.transvections):
        if isinstance(s, Transvection):
            if s == t:
                return X.gen(i, 1)
            if s.inverse() == t:
                return X.gen(i, -1)
    if X.group is not None and X.group.contains(t):
        return X.atom(X.group.scalar_of(t))
    raise ValueError("start transvection has no witness word over X")


@dataclass
class ClosureCycleReport:
    spans: bool
    cycle: list | None
    cycle_length: int | None
    size: int


def check_closure_cycle(result: ClosureResult, n: int) -> ClosureCycleReport:
    """Direction span and a minimal directed cycle of the closure graph."""
    ts = result.transvections
    F = ts[0].field
    spans = rank_of(F, [t.v for t in ts]) == n
    cyc = shortest_directed_cycle(build_graph(ts))
    return ClosureCycleReport(spans, cyc, len(cyc) if cyc else None, len(ts))


@dataclass
class GroupWitness:
    group: TransvectionGroup
    elem: Elem
    words: dict
    method: str
    cycle_length: int | None = None
    closure_size: int | None = None
    bfs_states: int | None = None
    notes: dict = field(default_factory=dict)


def _whole_group_in_X(X: GenSet):
    F = X.field
    if X.group is not None:
        words = {lam: X.atom(lam) for lam in ([F.one] if F.p is None else list(F.units()))}
        return X.group, words
    if F.p is None:
        return None
    found: dict = {}
    for i, t in enumerate(X.transvections):
        if not isinstance(t, Transvection):
            continue
        for s, e in ((t, 1), (t.inverse(), -1)):
            g = s.group
            found.setdefault(g, {}).setdefault(g.scalar_of(s), X.gen(i, e))
    for g in sorted(found):
        if len(found[g]) == F.p - 1:
            return g, found[g]
    return None


def find_transvection_group(X: GenSet, cap_states: int = 200_000) -> GroupWitness:
    """A transvection group all of whose members carry words over X."""
    F = X.field
    whole = _whole_group_in_X(X)
    if whole is not None:
        g, words = whole
        if X.group is not None and F.p is None:
            elem = Elem(g.base, 0, lambda lam: X.atom(lam), label="t^K")
        else:
            elem = table_elem(g.base, words, 0, label="t^K")
        return GroupWitness(g, elem, words, "in-X")
    if F.p is None:
        raise StageFailure("find_transvection_group", "over the rationals X must contain a whole group", kind="precondition")
    if X.distinguished is None:
        raise StageFailure("find_transvection_group", "X contains no transvection", kind="precondition")
    n = X.n
    t0 = X.transvections[X.distinguished]
    cl = conjugation_closure(t0, X, n)
    ts = cl.transvections
    cyc = shortest_directed_cycle(build_graph(ts))
    if cyc is None:
        raise StageFailure(
            "find_transvection_group",
            "closure graph has no directed cycle (X does not generate SL)",
            {"closure_size": len(ts)},
            kind="not_generating",
        )
    rs = [cl.items[i] for i in cyc]
    r1, w1 = rs[0]
    # s_2 = r_2 .. r_{k-1} r_k r_{k-1}^-1 .. r_2^-1
    s, ws = rs[-1]
    for r, w in reversed(rs[1:-1]):
        s = Transvection(F, r.matrix.apply(s.v), r.inverse().matrix.rapply(s.phi))
        ws = cat(w, ws, w.inverse())
    if not (r1.edge_to(s) and s.edge_to(r1)):
        raise StageFailure("find_transvection_group", "(r_1, s_2) is not a two-way edge")
    gens = [(w1, r1.matrix), (w1.inverse(), r1.inverse().matrix), (ws, s.matrix), (ws.inverse(), s.inverse().matrix)]
    start = Matrix.identity(F, n)
    parent = {start.key(): EMPTY}
    queue = deque([(start, EMPTY)])
    found: dict = {}
    while queue:
        m, w = queue.popleft()
        for gw, g in gens:
            mm = m @ g
            key = mm.key()
            if key in parent:
                continue
            ww = cat_list([w, gw])
            parent[key] = ww
            if len(parent) > cap_states:
                raise StageFailure("find_transvection_group", "state cap exceeded in the 2-generator BFS", kind="cap")
            t = recognize(mm)
            if isinstance(t, Transvection):
                grp = t.group
                bucket = found.setdefault(grp, {})
                bucket.setdefault(grp.scalar_of(t), ww)
                if len(bucket) == F.p - 1:
                    elem = table_elem(grp.base, bucket, 0, label="t^K")
                    return GroupWitness(
                        grp, elem, bucket, "two-generator-bfs",
                        cycle_length=len(cyc), closure_size=len(ts), bfs_states=len(parent),
                    )
            queue.append((mm, ww))
    raise StageFailure("find_transvection_group", "no complete transvection group in <r_1, s_2>")
