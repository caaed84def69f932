"""Transvection graphs: edges, strong connectivity, cycles and their invariants.

Vertex ``i`` has an edge into vertex ``j`` when ``phi_j(v_i) != 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .algebra import Field, Matrix, pairing, rank_of, rref
from .transvection import IDENTITY, PreconditionError, Transvection, conj_formula


class GraphError(ValueError):
    pass


class TGraph:
    """Immutable transvection graph on an ordered list of proper transvections."""

    def __init__(self, vertices: Sequence[Transvection]):
        verts = list(vertices)
        if any(t is IDENTITY or not isinstance(t, Transvection) for t in verts):
            raise GraphError("graph vertices must be proper transvections")
        if verts:
            F, n = verts[0].field, verts[0].n
            if any(t.field != F or t.n != n for t in verts):
                raise GraphError("vertices must share field and dimension")
        self.vertices = verts
        self.size = len(verts)
        A = self._matrix()
        self.A = A  # A[i, j] iff phi_j(v_i) != 0
        self.out: list[list[int]] = [np.flatnonzero(row).tolist() for row in A]
        self.inn: list[list[int]] = [np.flatnonzero(col).tolist() for col in A.T]
        # row bitmasks make has_edge a shift and a mask
        packed = np.packbits(A, axis=1, bitorder="little") if self.size else []
        self._bits: list[int] = [int.from_bytes(r.tobytes(), "little") for r in packed]

    def _matrix(self) -> np.ndarray:
        verts = self.vertices
        m = len(verts)
        if not m:
            return np.zeros((0, 0), dtype=bool)
        F = verts[0].field
        if F.p is not None and F.p < 2 ** 31 // max(verts[0].n, 1):
            V = np.array([t.v for t in verts], dtype=np.int64)
            P = np.array([t.phi for t in verts], dtype=np.int64)
            return (V @ P.T) % F.p != 0  # phi_j(v_i)
        A = np.zeros((m, m), dtype=bool)
        for i, s in enumerate(verts):
            for j, t in enumerate(verts):
                A[i, j] = i != j and pairing(F, t.phi, s.v) != 0
        return A

    @property
    def field(self) -> Field:
        return self.vertices[0].field

    def has_edge(self, i: int, j: int) -> bool:
        return (self._bits[i] >> j) & 1 == 1

    def adjacent(self, i: int, j: int) -> bool:
        return (self._bits[i] >> j) & 1 == 1 or (self._bits[j] >> i) & 1 == 1

    def edges(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in np.argwhere(self.A)]

    def one_way_edges(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in np.argwhere(self.A & ~self.A.T)]

    def two_way_pairs(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in np.argwhere(np.triu(self.A & self.A.T))]

    def adjacency(self) -> list[list[bool]]:
        return self.A.tolist()


def build_graph(Y: Sequence[Transvection]) -> TGraph:
    return TGraph(Y)


# strong connectivity -------------------------------------------------------


@dataclass
class SCCReport:
    connected: bool
    components: list[list[int]]
    # a component with no outgoing edge, and the span of its directions
    closed_component: list[int] | None = None
    invariant_subspace: list[tuple] | None = None


def tarjan_scc(size: int, out: Sequence[Sequence[int]]) -> list[list[int]]:
    """Strongly connected components, iterative Tarjan; sinks come first."""
    index = [-1] * size
    low = [0] * size
    on_stack = [False] * size
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(size):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, pos = work[-1]
            nbrs = out[v]
            if pos < len(nbrs):
                work[-1] = (v, pos + 1)
                w = nbrs[pos]
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(sorted(comp))
    return comps


def strongly_connected(G: TGraph) -> SCCReport:
    comps = tarjan_scc(G.size, G.out)
    if len(comps) <= 1:
        return SCCReport(True, comps)
    comp_of = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    closed = None
    for ci, comp in enumerate(comps):
        if all(comp_of[j] == ci for v in comp for j in G.out[v]):
            closed = comp
            break
    F = G.field
    R, piv = rref(F, [G.vertices[v].v for v in closed])
    basis = [tuple(r) for r in R[: len(piv)]]
    return SCCReport(False, comps, closed, basis)


# cycle invariants --------------------------------------------------------


def detc(cycle: Sequence[Transvection]):
    """Cyclic determinant: prod phi_i(v_{i+1}) + (-1)^(k-1) prod phi_{i+1}(v_i)."""
    k = len(cycle)
    if k < 3:
        raise GraphError("detc needs at least three transvections")
    F = cycle[0].field
    a = F.one
    b = F.one
    for i in range(k):
        s, t = cycle[i], cycle[(i + 1) % k]
        a = F.mul(a, pairing(F, s.phi, t.v))
        b = F.mul(b, pairing(F, t.phi, s.v))
    if k % 2 == 0:
        b = F.neg(b)
    return F.add(a, b)


def pairing_matrix(cycle: Sequence[Transvection]) -> Matrix:
    """(phi_i(v_j))"""
    F = cycle[0].field
    return Matrix(F, tuple(tuple(pairing(F, s.phi, t.v) for t in cycle) for s in cycle), raw=True)


def edge_ratio(c: Transvection, d: Transvection):
    """r(c, gamma, d, delta) = delta(c) / gamma(d) for a two-way edge."""
    F = c.field
    num = pairing(F, d.phi, c.v)
    den = pairing(F, c.phi, d.v)
    if num == 0 or den == 0:
        raise GraphError("edge ratio needs a two-way edge")
    return F.div(num, den)


def potential(cycle: Sequence[Transvection]):
    """Product of edge ratios around a two-way cycle."""
    F = cycle[0].field
    k = len(cycle)
    pot = F.one
    for i in range(k):
        pot = F.mul(pot, edge_ratio(cycle[i], cycle[(i + 1) % k]))
    return pot


def is_singular_by_potential(cycle: Sequence[Transvection]) -> bool:
    F = cycle[0].field
    sign = F.one if len(cycle) % 2 == 0 else F.neg(F.one)
    return potential(cycle) == sign


@dataclass
class GlueRecord:
    outer: object
    left: object
    right: object
    holds: bool


def glue_potential_check(outer: Sequence[Transvection], bridge: Sequence[Transvection], i: int, j: int) -> GlueRecord:
    """Check Pot(outer) = Pot(left part) * Pot(right part) for a bridge r_i -> r_j.

    ``i < j`` are 0-based positions in ``outer``; the bridge holds the inner
    vertices of a two-way path from ``outer[i]`` to ``outer[j]``.
    """
    k = len(outer)
    if not (0 <= i < j < k):
        raise GraphError("need 0 <= i < j < len(outer)")
    outer = list(outer)
    bridge = list(bridge)
    left = outer[: i + 1] + bridge + outer[j:]
    right = outer[i : j + 1] + bridge[::-1]
    F = outer[0].field
    po, pl, pr = potential(outer), potential(left), potential(right)
    return GlueRecord(po, pl, pr, po == F.mul(pl, pr))


# cycle enumeration ---------------------------------------------------------


@dataclass(frozen=True)
class CyclePath:
    indices: tuple
    kind: str  # "one-way" or "two-way"
    chordless: bool = True

    def __len__(self):
        return len(self.indices)


def _cycle_kind(G: TGraph, idx: Sequence[int]) -> str:
    k = len(idx)
    if all(G.has_edge(idx[(t + 1) % k], idx[t]) for t in range(k)):
        return "two-way"
    return "one-way"


def _chordless_of_length(G: TGraph, L: int) -> Iterator[CyclePath]:
    for root in range(G.size):
        path = [root]

        def extend():
            pos = len(path)
            u = path[-1]
            for w in G.out[u]:
                if w <= root or w in path:
                    continue
                if any(G.adjacent(w, x) for x in path[1:-1]):
                    continue
                touches_root = G.adjacent(w, root) if pos > 1 else False
                if pos < L - 1:
                    if touches_root:
                        continue
                    path.append(w)
                    yield from extend()
                    path.pop()
                elif G.has_edge(w, root):
                    cyc = path + [w]
                    kind = _cycle_kind(G, cyc)
                    if kind == "two-way" and cyc[1] > cyc[-1]:
                        continue
                    yield CyclePath(tuple(cyc), kind, True)

        yield from extend()


def find_chordless_cycles(G: TGraph, max_len: int) -> Iterator[CyclePath]:
    """Chordless directed cycles of length 3..max_len, shortest first."""
    if max_len < 3:
        raise GraphError("max_len must be at least 3")
    for L in range(3, max_len + 1):
        yield from _chordless_of_length(G, L)


def find_nonsingular_chordless_cycle(G: TGraph, max_len: int | None = None) -> CyclePath | None:
    """Shortest chordless cycle with nonzero cyclic determinant.

    A chordless cycle of length k has k - 2 independent directions, so the
    search is complete at ``n + 2``.
    """
    if G.size == 0:
        return None
    if max_len is None:
        max_len = G.vertices[0].n + 2
    for cyc in find_chordless_cycles(G, max_len):
        if detc([G.vertices[i] for i in cyc.indices]) != 0:
            return cyc
    return None


def has_directed_cycle(G: TGraph) -> bool:
    return any(len(c) > 1 for c in tarjan_scc(G.size, G.out))


def shortest_directed_cycle(G: TGraph) -> list[int] | None:
    """A directed cycle of minimal length (length 2 means a two-way edge)."""
    if G.size:
        two = np.argwhere(np.triu(G.A & G.A.T))
        if len(two):
            return [int(two[0][0]), int(two[0][1])]
    best = None
    for s in range(G.size):
        # BFS from s, looking for an edge back into s
        parent = {s: None}
        frontier = [s]
        depth = 0
        found = None
        while frontier and found is None:
            depth += 1
            if best is not None and depth >= len(best):
                break
            nxt = []
            for u in frontier:
                for w in G.out[u]:
                    if w == s:
                        found = u
                        break
                    if w not in parent:
                        parent[w] = u
                        nxt.append(w)
                if found is not None:
                    break
            frontier = nxt
        if found is not None:
            cyc = []
            x = found
            while x is not None:
                cyc.append(x)
                x = parent[x]
            cyc.reverse()
            if best is None or len(cyc) < len(best):
                best = cyc
                if len(best) == 2:
                    break
    return best


# one-way edge from a non-singular cycle --------------------------------------


@dataclass
class OneWayEdge:
    """Result of shortening a chordless non-singular cycle.

    ``steps`` replays the construction: ``(target, by, exponent)`` replaces
    position ``target`` with ``x^exponent . target . x^-exponent`` where ``x``
    is the current element at position ``by``.  The one-way edge is
    ``(elements[first], elements[second])`` after all steps.
    """

    first: int
    second: int
    steps: list[tuple[int, int, object]]
    elements: list[Transvection]
    lam: object = None
    detc_trace: list = field(default_factory=list)

    @property
    def pair(self) -> tuple[Transvection, Transvection]:
        return self.elements[self.first], self.elements[self.second]


def _conj_power(t: Transvection, by: Transvection, e) -> Transvection:
    if e == 0:
        return t
    return conj_formula(t, by.power(e))


def one_way_edge_from_cycle(cycle: Sequence[Transvection]) -> OneWayEdge:
    """Reduce a chordless non-singular cycle to a one-way edge."""
    k = len(cycle)
    if k < 3:
        raise GraphError("cycle must have length at least 3")
    F = cycle[0].field
    elems = list(cycle)
    # already contains a one-way edge
    for i in range(k):
        a, b = elems[i], elems[(i + 1) % k]
        if a.edge_to(b) and not b.edge_to(a):
            return OneWayEdge(i, (i + 1) % k, [], elems)
        if b.edge_to(a) and not a.edge_to(b):
            return OneWayEdge((i + 1) % k, i, [], elems)
    d0 = detc(elems)
    if d0 == 0:
        raise PreconditionError("cycle is singular")
    trace = [d0]
    steps: list[tuple[int, int, object]] = []
    last = k - 1
    for by in range(k - 2, 1, -1):
        elems[last] = _conj_power(elems[last], elems[by], F.one)
        steps.append((last, by, F.one))
        trace.append(detc(elems[:by] + [elems[last]]))
    r1, r2, r3 = elems[0], elems[1], elems[last]
    # (phi_1 - lam phi_1(v_2) phi_2)(v_3) = 0
    p = lambda s, t: pairing(F, t.phi, s.v)  # noqa: E731  phi_t(v_s)
    coef = F.mul(p(r2, r1), p(r3, r2))
    lam = F.div(p(r3, r1), coef)
    ineq = F.add(p(r1, r3), F.mul(lam, F.mul(p(r1, r2), p(r2, r3))))
    if ineq == 0:
        raise PreconditionError("no suitable lambda: cycle is singular")
    elems[0] = _conj_power(r1, r2, lam)
    steps.append((0, 1, lam))
    out = OneWayEdge(0, last, steps, elems, lam, trace)
    a, b = out.pair
    assert a.edge_to(b) and not b.edge_to(a)
    return out


# DOT export ---------------------------------------------------------------


def to_dot(G: TGraph, name: str = "Gamma") -> str:
    F = G.field if G.size else None
    lines = [f"digraph {name} {{"]
    for i, t in enumerate(G.vertices):
        v = ",".join(str(F.dump(a)) for a in t.v)
        phi = ",".join(str(F.dump(a)) for a in t.phi)
        lines.append(f'  {i} [label="v=({v}) phi=({phi})"];')
    for i, j in G.edges():
        if G.has_edge(j, i):
            if i < j:
                lines.append(f"  {i} -> {j} [dir=both];")
        else:
            lines.append(f"  {i} -> {j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def spans(F: Field, vectors, n: int) -> bool:
    return rank_of(F, vectors) == n
