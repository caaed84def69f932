import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import chordless_cycle, random_transvection
from slwords.algebra import GF
from slwords.tgraph import (
    GraphError,
    build_graph,
    detc,
    find_chordless_cycles,
    find_nonsingular_chordless_cycle,
    glue_potential_check,
    is_singular_by_potential,
    one_way_edge_from_cycle,
    pairing_matrix,
    potential,
    shortest_directed_cycle,
    strongly_connected,
    to_dot,
)
from slwords.transvection import PreconditionError, Transvection, recognize


def T(F, v, phi):
    return Transvection.make(F, v, phi)


def one_way_3(F):
    return [T(F, [0, 1, 0], [1, 0, 0]), T(F, [0, 0, 1], [0, 1, 0]), T(F, [1, 0, 0], [0, 0, 1])]


def two_way_3(F):
    return [T(F, [1, 0, 0], [0, 1, 1]), T(F, [0, 1, 0], [1, 0, 1]), T(F, [0, 0, 1], [1, 1, 0])]


def test_build_graph_examples():
    G = build_graph(one_way_3(GF(5)))
    assert sorted(G.edges()) == [(0, 1), (1, 2), (2, 0)]
    assert sorted(G.one_way_edges()) == [(0, 1), (1, 2), (2, 0)]
    H = build_graph(two_way_3(GF(5)))
    assert len(H.edges()) == 6 and H.one_way_edges() == []


def test_strongly_connected():
    assert strongly_connected(build_graph(one_way_3(GF(5)))).connected
    F = GF(5)
    a = one_way_3(F)
    pad = lambda t, s: T(F, [0] * s + list(t.v) + [0] * (3 - s), [0] * s + list(t.phi) + [0] * (3 - s))  # noqa: E731
    Y = [pad(t, 0) for t in a] + [pad(t, 3) for t in a]
    rep = strongly_connected(build_graph(Y))
    assert not rep.connected
    assert len(rep.components) == 2
    assert len(rep.invariant_subspace) == 3


def test_detc_examples():
    assert detc(one_way_3(GF(5))) == 1
    assert detc(two_way_3(GF(5))) == 2
    assert detc(two_way_3(GF(2))) == 0
    with pytest.raises(GraphError):
        detc(one_way_3(GF(5))[:2])


def test_potential_examples():
    F = GF(5)
    c = two_way_3(F)
    assert potential(c) == 1
    assert not is_singular_by_potential(c)
    assert is_singular_by_potential(two_way_3(GF(2)))
    rng = random.Random(3)
    for _ in range(20):
        cyc = chordless_cycle(GF(7), 4, rng)
        assert GF(7).mul(potential(cyc), potential(cyc[::-1])) == 1
    with pytest.raises(GraphError):
        potential(one_way_3(F))


def test_glue_degenerate_and_chord():
    F = GF(7)
    rng = random.Random(5)
    c = chordless_cycle(F, 4, rng)
    rec = glue_potential_check(c, [], 0, 1)
    assert rec.holds and rec.right == 1
    # all pairs two-way: any chord works
    ts = []
    while len(ts) < 4:
        t = random_transvection(F, 5, rng)
        if all(t.edge_to(s) and s.edge_to(t) for s in ts):
            ts.append(t)
    assert glue_potential_check(ts, [], 0, 2).holds


def test_chordless_enumeration_examples():
    F = GF(5)
    assert [c.indices for c in find_chordless_cycles(build_graph(one_way_3(F)), 5)] == [(0, 1, 2)]
    rng = random.Random(2)
    ts = []
    while len(ts) < 4:
        t = random_transvection(F, 5, rng)
        if all(t.edge_to(s) and s.edge_to(t) for s in ts):
            ts.append(t)
    cycles = list(find_chordless_cycles(build_graph(ts), 6))
    assert len(cycles) == 4 and all(len(c) == 3 for c in cycles)
    assert cycles == list(find_chordless_cycles(build_graph(ts), 6))


def test_nonsingular_examples():
    assert find_nonsingular_chordless_cycle(build_graph(two_way_3(GF(5)))).indices == (0, 1, 2)
    assert find_nonsingular_chordless_cycle(build_graph(two_way_3(GF(2)))) is None
    assert find_nonsingular_chordless_cycle(build_graph(one_way_3(GF(5)))) is not None


def test_one_way_edge_examples():
    F = GF(5)
    c = two_way_3(F)
    out = one_way_edge_from_cycle(c)
    assert out.lam == 1
    a, b = out.pair
    r1, r2 = c[0].matrix, c[1].matrix
    assert a.matrix == r2 @ r1 @ r2.inverse() and b == c[2]
    assert a.edge_to(b) and not b.edge_to(a)
    direct = one_way_edge_from_cycle(one_way_3(F))
    assert direct.steps == [] and (direct.first, direct.second) == (0, 1)
    with pytest.raises(PreconditionError):
        one_way_edge_from_cycle(two_way_3(GF(2)))


def test_one_way_edge_k4_shortening():
    rng = random.Random(11)
    F = GF(5)
    c = chordless_cycle(F, 4, rng, singular=False)
    out = one_way_edge_from_cycle(c)
    assert len(out.detc_trace) == 2 and out.detc_trace[0] == out.detc_trace[1]
    # replaying the steps as matrix conjugations gives the same pair
    cur = list(c)
    for tgt, by, e in out.steps:
        y = cur[by].power(e).matrix
        cur[tgt] = recognize(y @ cur[tgt].matrix @ y.inverse())
    a, b = out.pair
    assert cur[out.first].matrix == a.matrix and cur[out.second].matrix == b.matrix


def test_shortest_directed_cycle():
    assert len(shortest_directed_cycle(build_graph(one_way_3(GF(5))))) == 3
    assert len(shortest_directed_cycle(build_graph(two_way_3(GF(5))))) == 2
    F = GF(5)
    assert shortest_directed_cycle(build_graph([T(F, [1, 0], [0, 1]), T(F, [1, 0], [0, 2])])) is None


def test_dot():
    dot = to_dot(build_graph(one_way_3(GF(3))))
    assert dot.count("->") == 3 and dot.startswith("digraph")


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(3, 6), st.integers(0, 2 ** 32))
def test_cycle_invariants(p, k, seed):
    rng = random.Random(seed)
    F = GF(p)
    c = chordless_cycle(F, k, rng)
    singular = detc(c) == 0
    assert singular == is_singular_by_potential(c)
    if k % 2:
        assert detc(c) == pairing_matrix(c).det()
    # rescaling a member keeps singularity and the potential
    lam = rng.randrange(1, p)
    c2 = [c[0].power(lam)] + c[1:]
    assert (detc(c2) == 0) == singular
    assert potential(c2) == potential(c)
    if p > 2 and not singular:
        a, b = one_way_edge_from_cycle(c).pair
        assert a.edge_to(b) and not b.edge_to(a)
    assert find_nonsingular_chordless_cycle(build_graph(c)) is None if singular else True

