import json
import random
from itertools import islice
from pathlib import Path

import numpy as np
import pytest

from helpers import random_transvection
from slwords.algebra import GF, Field
from slwords.gentest import (
    TEquivChain,
    check_properties,
    classify,
    form_is_invariant,
    invariant_form,
    t_equiv_step,
)
from slwords.oracle import sl_order, sp_order, subgroup_closure
from slwords.tgraph import build_graph, detc
from slwords.transvection import PreconditionError, Transvection

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def load_set(name):
    obj = json.loads((SAMPLES / name).read_text())
    F = Field.from_json(obj["field"])
    return [Transvection.from_json(t, F) for t in obj["transvections"]]


def T(F, v, phi):
    return Transvection.make(F, v, phi)


def one_way_3(F):
    return [T(F, [0, 1, 0], [1, 0, 0]), T(F, [0, 0, 1], [0, 1, 0]), T(F, [1, 0, 0], [0, 0, 1])]


def closure_size(ts, cap=10 ** 6):
    return subgroup_closure([t.matrix for t in ts], cap=cap).size


def test_properties_three_cycle():
    F = GF(3)
    r = check_properties(one_way_3(F))
    assert r.p1 and r.p2 and r.p3 and r.p3prime
    assert detc([one_way_3(F)[i] for i in r.witness]) != 0
    assert len(r.witness) <= 5


def test_properties_plane():
    r = check_properties(load_set("plane.json"))
    assert not r.p1 and r.span


def test_properties_symplectic():
    S = load_set("sp43.json")
    r = check_properties(S)
    assert r.p1 and r.p2 and r.p3 is False and r.p3prime is False
    assert r.exhaustion["complete"]
    assert closure_size(S) == sp_order(4, 3)


def test_classify_examples():
    assert classify(one_way_3(GF(3))).verdict == "SL"
    assert closure_size(one_way_3(GF(3))) == sl_order(3, 3) == 5616
    assert classify(load_set("plane.json")).verdict == "not_irreducible"
    v = classify(load_set("sp43.json"))
    assert v.verdict == "Sp" and form_is_invariant(v.form, load_set("sp43.json"))
    assert v.to_json()["certificates"]["invariant_form"]


def test_classify_needs_n3():
    F = GF(3)
    with pytest.raises(PreconditionError):
        classify([T(F, [1, 0], [0, 1])])


def test_invariant_form_cases():
    assert invariant_form(one_way_3(GF(3))) is None
    F = GF(5)
    t = T(F, [1, 0, 0, 0], [0, 0, 1, 0])
    B = invariant_form([t])
    assert B is not None and B.det() != 0
    assert form_is_invariant(B, [t])
    assert all(B.rows[i][i] == 0 for i in range(4))


def test_t_equiv_step_examples():
    F = GF(3)
    S = one_way_3(F)
    with pytest.raises(ValueError):
        t_equiv_step(S, 1, 1)
    with pytest.raises(IndexError):
        t_equiv_step(S, 0, 5)
    # commuting members with no edge either way: nothing changes
    a, b = T(F, [1, 0, 0], [0, 1, 0]), T(F, [1, 0, 0], [0, 0, 1])
    assert t_equiv_step([a, b], 0, 1)[0].group == a.group
    S2 = t_equiv_step(S, 0, 2)
    assert S2[0].group != S[0].group
    assert closure_size(S2) == closure_size(S)


def test_t_equiv_preserves_closure_sl32():
    F = GF(2)
    rng = random.Random(9)
    for _ in range(30):
        S = [random_transvection(F, 3, rng) for _ in range(3)]
        base = subgroup_closure([t.matrix for t in S]).codes
        S2 = S
        for _ in range(3):
            i, j = rng.sample(range(3), 2)
            S2 = t_equiv_step(S2, i, j)
        assert np.array_equal(subgroup_closure([t.matrix for t in S2]).codes, base)


def test_p3prime_chain_gives_one_way_edge():
    F = GF(5)
    S = [T(F, [1, 0, 0], [0, 1, 1]), T(F, [0, 1, 0], [1, 0, 1]), T(F, [0, 0, 1], [1, 1, 0])]
    r = check_properties(S)
    assert r.p3 and r.p3prime
    assert isinstance(r.chain, TEquivChain)
    S2 = r.chain.apply(S)
    a, b = r.one_way_edge
    assert S2[a].edge_to(S2[b]) and not S2[b].edge_to(S2[a])
    assert closure_size(S2) == closure_size(S)


def test_odd_dimension_never_sp():
    rng = random.Random(2)
    for p in (3, 5):
        F = GF(p)
        for _ in range(20):
            S = [random_transvection(F, 3, rng) for _ in range(rng.randint(2, 4))]
            assert classify(S).verdict != "Sp"


def test_p3_invariant_under_rescaling():
    rng = random.Random(5)
    F = GF(5)
    for _ in range(20):
        S = [random_transvection(F, 4, rng) for _ in range(4)]
        S2 = [t.power(rng.randrange(1, 5)) for t in S]
        assert check_properties(S).p3 == check_properties(S2).p3
    S = load_set("sp43.json")
    assert check_properties([t.power(2) for t in S]).p3 is False


def test_sp_configuration_form_matches_closure():
    S = load_set("sp43.json")
    B = invariant_form(S)
    G = subgroup_closure([t.matrix for t in S])
    for g in islice(G.matrices(), 200):
        assert g.transpose() @ B @ g == B


def test_repeated_groups_collapse():
    F = GF(3)
    S = one_way_3(F) + [one_way_3(F)[0].power(2)]
    assert len(build_graph(S).vertices) == 4
    assert classify(S).verdict == "SL"
