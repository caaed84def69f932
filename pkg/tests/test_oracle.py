import random

import pytest

from slwords.algebra import GF, Matrix
from slwords.oracle import (
    ClosureOverflow,
    DistanceTable,
    SamplingError,
    all_subspaces,
    bfs_diameter,
    bfs_distance,
    generation_certificate,
    invariant_subspace,
    sample_genset,
    sl_order,
    sp_order,
    subgroup_closure,
)
from slwords.transvection import Transvection


def elementaries(F, n):
    return [Matrix.elementary(F, n, i, j, 1) for i in range(n) for j in range(n) if i != j]


def test_order_formulas():
    assert sl_order(3, 2) == 168
    assert sl_order(3, 3) == 5616
    assert sl_order(4, 2) == 20160
    assert sl_order(2, 3) == 24
    assert sp_order(4, 3) == 51840
    with pytest.raises(ValueError):
        sp_order(3, 3)


def test_closure_identity_and_sl32():
    F = GF(2)
    assert subgroup_closure([Matrix.identity(F, 3)]).size == 1
    G = subgroup_closure(elementaries(F, 3))
    assert G.size == 168 == sl_order(3, 2)
    assert Matrix.elementary(F, 3, 0, 2, 1) in G


def test_closure_sp43():
    F = GF(3)
    J = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]
    gens = []
    for u in [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 1, 0, 0), (1, 0, 1, 0)]:
        phi = [sum(u[a] * J[a][b] for a in range(4)) % 3 for b in range(4)]
        gens.append(Transvection.make(F, u, phi).matrix)
    assert subgroup_closure(gens).size == sp_order(4, 3)


def test_closure_overflow_is_reported():
    with pytest.raises(ClosureOverflow):
        subgroup_closure(elementaries(GF(3), 3), cap=100)


def test_closure_rejects_singular():
    F = GF(5)
    with pytest.raises(Exception):
        subgroup_closure([Matrix(F, [[2, 0, 0], [0, 1, 0], [0, 0, 1]])])


def test_bfs_whole_group_diameter_one():
    F = GF(2)
    G = list(subgroup_closure(elementaries(F, 3)).matrices())
    d, _ = bfs_diameter(G)
    assert d == 1


def test_bfs_sl23():
    F = GF(3)
    X = [Matrix.elementary(F, 2, 0, 1, 1), Matrix.elementary(F, 2, 1, 0, 1)]
    d, g = bfs_diameter(X)
    T = DistanceTable(X)
    assert T.size == 24
    assert T.distance(g) == d == T.diameter
    assert bfs_distance(X, Matrix.identity(F, 2)) == 0
    # brute force: distances from a naive set-based BFS
    seen = {Matrix.identity(F, 2)}
    frontier = list(seen)
    sym = X + [x.inverse() for x in X]
    depth = 0
    while frontier:
        nxt = []
        for m in frontier:
            for s in sym:
                y = m @ s
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if nxt:
            depth += 1
        frontier = nxt
    assert depth == d


def test_bfs_symmetric_invariance():
    F = GF(3)
    X = [Matrix.elementary(F, 3, 0, 1, 1), Matrix.elementary(F, 3, 1, 2, 1), Matrix.elementary(F, 3, 2, 0, 1)]
    Y = X + [x.inverse() for x in X] + [Matrix.identity(F, 3)]
    assert bfs_diameter(X)[0] == bfs_diameter(Y)[0]


def test_bfs_distance_matches_table():
    X = sample_genset(3, 3, "with_transvection", 42)
    T = DistanceTable(X)
    rng = random.Random(1)
    from slwords.algebra import random_sl

    for _ in range(5):
        g = random_sl(X.field, 3, rng)
        assert bfs_distance(X, g) == T.distance(g)


def test_sample_genset_reproducible_and_generating():
    X1 = sample_genset(3, 3, "with_transvection", 42)
    X2 = sample_genset(3, 3, "with_transvection", 42)
    assert X1.to_json() == X2.to_json()
    assert subgroup_closure(X1.mats).size == sl_order(3, 3)
    assert X1.distinguished == 0


def test_sample_profiles():
    Xg = sample_genset(3, 5, "with_group", 3)
    assert Xg.group is not None
    assert len(list(Xg.group.members())) == 5  # includes the identity
    Xa = sample_genset(4, 2, "adversarial_minimal", 1)
    assert len(Xa.mats) == 2 and Xa.distinguished == 0
    assert subgroup_closure(Xa.mats).size == sl_order(4, 2)


def test_generation_certificate_large_group():
    X = sample_genset(4, 5, "with_transvection", 0)
    cert = generation_certificate(X)
    assert cert["method"] == "transvection-closure" and cert["generates"] is True


def test_generation_certificate_refutes():
    from slwords.pipeline.genset import GenSet

    F = GF(5)
    # upper unitriangular generators fix the line <e_1>
    X = GenSet([Matrix.elementary(F, 4, 0, 1, 1), Matrix.elementary(F, 4, 1, 2, 1), Matrix.elementary(F, 4, 2, 3, 1)])
    assert generation_certificate(X)["generates"] is False


def test_sampling_failure(monkeypatch):
    import slwords.oracle as oracle

    monkeypatch.setattr(oracle, "generation_certificate", lambda X: {"generates": False})
    with pytest.raises(SamplingError):
        sample_genset(3, 3, "with_transvection", 0, retries=3)


def test_invariant_subspace_bruteforce():
    F = GF(2)
    assert sum(1 for _ in all_subspaces(F, 3)) == 14
    assert invariant_subspace(elementaries(F, 3)) is None
    U = invariant_subspace([Matrix.elementary(F, 3, 0, 1, 1), Matrix.elementary(F, 3, 1, 0, 1)])
    assert U is not None
