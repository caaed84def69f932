import random

import pytest

from slwords.algebra import GF, QQ, Matrix, random_sl, rank_of
from slwords.oracle import sample_genset
from slwords.pipeline import (
    DUAL,
    PRIMAL,
    GenSet,
    Pipeline,
    StageFailure,
    Stages,
    gauss_decompose,
    synth_transvection,
    word_evaluate,
)
from slwords.tgraph import build_graph, strongly_connected
from slwords.transvection import PreconditionError, Transvection, recognize


def elementary_set(F, n):
    return GenSet([Matrix.elementary(F, n, i, j, 1) for i in range(n) for j in range(n) if i != j])


def check_elem(e, X, lams=(1,)):
    for lam in lams:
        assert word_evaluate(e.word(lam), X) == e.t.power(lam).matrix


@pytest.fixture(scope="module")
def st35():
    return Stages(sample_genset(3, 5, "with_transvection", 7))


def test_y1_properties(st35):
    ts = [e.t for e in st35.y1]
    F = st35.F
    assert rank_of(F, [t.v for t in ts]) == 3 and rank_of(F, [t.phi for t in ts]) == 3
    assert strongly_connected(build_graph(ts)).connected
    assert rank_of(F, [e.t.v for e in st35.v_basis]) == 3
    assert rank_of(F, [e.t.phi for e in st35.phi_basis]) == 3
    assert st35.info["Y1"].rounds <= 9
    for e in st35.y1[:10]:
        check_elem(e, st35.X, (1, 2))


def test_y1_elementary_within_n_rounds():
    st = Stages(elementary_set(GF(3), 3))
    assert st.info["Y1"].rounds <= 3


def test_y2_one_way_edge(st35):
    s, t = st35.edge
    assert PRIMAL.one_way(s, t)
    check_elem(s, st35.X)
    check_elem(t, st35.X)


def test_y3_mid_and_y4(st35):
    rng = random.Random(0)
    for _ in range(15):
        s = rng.choice(st35.y2)
        t = rng.choice(st35.y2)
        m = st35.mid(s, t)
        if m is None:
            assert PRIMAL.edge(s, t)
        else:
            assert PRIMAL.edge(s, m) and PRIMAL.edge(m, t)
            check_elem(m, st35.X)
        r = st35.y2[rng.randrange(len(st35.y2))]
        e, f = st35.e_r(r), st35.s_r(r)
        assert PRIMAL.one_way(r, e)
        assert PRIMAL.one_way(f, r)
        check_elem(e, st35.X)


def test_y5_directions(st35):
    F = st35.F
    for v in [(1, 0, 0), (1, 1, 0), (1, 1, 1), (2, 3, 4)]:
        e = st35.vec(v)
        assert e.t.v == tuple(F.coerce(a) for a in v)
        check_elem(e, st35.X)
        c = st35.cov(v)
        assert c.t.phi == tuple(F.coerce(a) for a in v)
        check_elem(c, st35.X)
    with pytest.raises(PreconditionError):
        st35.vec((0, 0, 0))


def test_synth_transvection(st35):
    F = st35.F
    rng = random.Random(3)
    for _ in range(10):
        g = random_sl(F, 3, rng)
        t = recognize(g @ Matrix.elementary(F, 3, 0, 1, 1) @ g.inverse())
        e, case = synth_transvection(st35, t.v, t.phi)
        assert e.t == t, case
        check_elem(e, st35.X)
    with pytest.raises(PreconditionError):
        synth_transvection(st35, (1, 0, 0), (1, 0, 0))


def test_gauss_decompose():
    F = GF(5)
    sup = lambda i, j, c: (i, j, c)  # noqa: E731
    assert gauss_decompose(Matrix.identity(F, 3), sup) == ([], [])
    words, factors = gauss_decompose(Matrix.elementary(F, 3, 0, 2, 3), sup)
    assert factors == [(0, 2, 3)]
    rng = random.Random(0)
    F = GF(3)
    for _ in range(100):
        g = random_sl(F, 4, rng)
        _, factors = gauss_decompose(g, sup)
        assert len(factors) <= 2 * 16
        m = Matrix.identity(F, 4)
        for i, j, c in factors:
            m = m @ Matrix.elementary(F, 4, i, j, c)
        assert m == g
    with pytest.raises(PreconditionError):
        gauss_decompose(Matrix(F, [[2, 0, 0], [0, 1, 0], [0, 0, 1]]), sup)


@pytest.mark.parametrize("n,p,profile,seed", [(3, 3, "with_transvection", 1), (3, 3, "adversarial_minimal", 2),
                                              (4, 3, "with_group", 3), (4, 3, "adversarial_minimal", 4),
                                              (3, 2, "with_transvection", 5), (5, 2, "adversarial_minimal", 6)])
def test_decompose(n, p, profile, seed):
    X = sample_genset(n, p, profile, seed)
    P = Pipeline(X)
    rng = random.Random(seed)
    for _ in range(10):
        g = random_sl(X.field, n, rng)
        d = P.decompose(g)
        assert d.verify(g)
        assert d.ledger.total_length == d.length
    assert P.decompose(Matrix.identity(X.field, n)).length == 0
    if X.distinguished is not None:
        assert P.decompose(X.mats[X.distinguished]).length == 1


def test_decompose_rationals():
    F = QQ
    t = Transvection.make(F, [1, 0, 0], [0, 1, 0])
    X = GenSet([Matrix.elementary(F, 3, 1, 0, 1), Matrix.elementary(F, 3, 2, 1, 1), Matrix.elementary(F, 3, 0, 2, 1)],
               group=t.group)
    P = Pipeline(X)
    g = Matrix(F, [[2, 0, 0], [0, "1/2", 0], [0, 0, 1]])
    d = P.decompose(g)
    assert d.verify(g)
    g2 = Matrix.elementary(F, 3, 2, 0, "3/7")
    assert P.decompose(g2).verify(g2)


def test_decompose_rejects_bad_targets():
    X = sample_genset(3, 3, "with_transvection", 0)
    P = Pipeline(X)
    with pytest.raises(PreconditionError):
        P.decompose(Matrix(X.field, [[2, 0, 0], [0, 1, 0], [0, 0, 1]]))
    with pytest.raises(PreconditionError):
        Pipeline(sample_genset(3, 3, "with_transvection", 0)).decompose(Matrix.identity(GF(5), 3))


def test_non_generating_set_fails_with_certificate():
    F = GF(3)
    # upper unitriangular: a proper subgroup
    X = GenSet([Matrix.elementary(F, 3, 0, 1, 1), Matrix.elementary(F, 3, 1, 2, 1)])
    with pytest.raises(StageFailure) as exc:
        Pipeline(X)
    assert exc.value.kind == "not_generating"
    assert exc.value.to_json()["certificate"] is not None


def test_dual_frame_is_transpose(st35):
    r = st35.y2[0]
    f = st35.out_neighbor(DUAL, r)
    assert f is st35.s_r(r)
