import pytest

from skeintrace import complex as cx
from skeintrace import trace3d as t3
from skeintrace.scalars import ConstraintViolation, Scalar

A = Scalar.A()
CT, CB = Scalar.ct(), Scalar.cb()


@pytest.fixture(scope="module")
def fig8():
    return cx.figure8()


def tok(block, gen, states, orient="fwd"):
    return t3.SfToken(block, gen, orient, tuple(states))


def test_trace_sf_triangle_arc(fig8):
    s = fig8.suspension("N")
    sf = fig8.sf_torus("N")
    got = t3.trace_sf(s, [tok(0, "alpha", (1, 1))], [], CT, CB)
    assert got == sf.weyl([sf.unit("N.b1"), sf.unit("N.c1")]) * CT


def test_trace_sf_biangle(fig8):
    s = fig8.suspension("N")
    sf = fig8.sf_torus("N")
    got = t3.trace_sf(s, [], [tok(None, "a", (1, 1))], CT, CB)
    assert got == sf.gen("N.a1") * sf.gen("N.a2") * CB
    assert t3.trace_sf(s, [], [tok(None, "a", (1, -1))], CT, CB).is_zero()


def test_trace_sf_empty(fig8):
    assert t3.trace_sf(fig8.suspension("S"), [], [], CT, CB) == fig8.sf_torus("S").one()


def test_trace_sf_checks_scaling(fig8):
    with pytest.raises(ConstraintViolation):
        t3.trace_sf(fig8.suspension("S"), [], [], Scalar.one(), Scalar.one())


def test_vertex_relations_central(fig8):
    sq = t3.SQGM(fig8)
    for r in sq.vertex_relations:
        assert sq.torus.is_central(r.vector)
        assert r.scalar == Scalar.q(-1) * CT ** -3


def test_vertex_relation_default_value(fig8):
    sq = t3.SQGM(fig8, t3.DEFAULT_CT, t3.DEFAULT_CB)
    v = sq.torus.monomial(fig8.vertex_vector("Y"))
    assert sq.reduce(v) == sq.torus.scalar(Scalar.parse("q^1/2"))


def test_figure8_drops_one_gluing_relation(fig8):
    sq = t3.SQGM(fig8)
    assert len(sq.gluing_relations) == 2
    assert len(sq.dropped) == 1


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_edge_star_gluing(k):
    T = cx.edge_star(k)
    sq = t3.SQGM(T)
    e = sq.reduce(sq.torus.monomial(T.gluing_vector(T.interior_edge_classes[0])))
    assert e == sq.torus.scalar(Scalar.q() * CB ** -k)


def test_reduce_idempotent(fig8):
    sq = t3.SQGM(fig8)
    e = sq.monomial({"Y.z": 2, "Z.z'": -1}) + sq.monomial({"Y.z''": 3, "Z.z": 1}, A)
    r = sq.reduce(e)
    assert sq.reduce(r) == r


def test_figure8_per_state(fig8):
    for ct, cb in [(t3.DEFAULT_CT, t3.DEFAULT_CB), (CT, CB)]:
        sq = t3.SQGM(fig8, ct, cb)
        per = {}
        t3.trace_3d(fig8, t3.figure8_presentation(), ct, cb, sq, per_state=per)
        gold = t3.figure8_golden(sq)
        got = {(dict(k)["eps1"], dict(k)["eps2"]): v for k, v in per.items()}
        assert set(got) == set(gold)
        for k in gold:
            assert sq.equal(got[k], gold[k]), k


def test_figure8_state_plus_minus(fig8):
    sq = t3.SQGM(fig8, t3.DEFAULT_CT, t3.DEFAULT_CB)
    per = {}
    t3.trace_3d(fig8, t3.figure8_presentation(), sqgm=sq, per_state=per)
    val = per[(("eps1", 1), ("eps2", -1))]
    assert val == sq.monomial({"Y.z''": 1, "Z.z''": -1}, A)


def test_figure8_total_order_independent(fig8):
    p = t3.figure8_presentation()
    a = t3.trace_3d(fig8, p, order=["eps1", "eps2"])
    b = t3.trace_3d(fig8, p, order=["eps2", "eps1"])
    assert a == b


def test_empty_presentation(fig8):
    p = t3.parse_presentation_3d({"suspensions": []})
    sq = t3.SQGM(fig8, t3.DEFAULT_CT, t3.DEFAULT_CB)
    assert t3.trace_3d(fig8, p, sqgm=sq) == sq.torus.one()


@pytest.mark.parametrize("doc", [
    {"suspensions": [{"face": "Q", "left": [], "right": []}]},
    {"suspensions": [{"face": "N", "left": [{"gen": "a", "states": [1, 1]}]}]},
    {"suspensions": [{"face": "N", "right": [{"block": 1, "gen": "alpha", "states": [1, 1]}]}]},
    {"suspensions": [{"face": "N", "left": [{"block": 3, "gen": "alpha", "states": [1, 1]}]}]},
    {"suspensions": [], "prefactor": [{"var": "x", "half_q_coeff": 1}]},
])
def test_invalid_presentations(fig8, doc):
    with pytest.raises(t3.InvalidPresentation):
        t3.trace_3d(fig8, t3.parse_presentation_3d(doc))


def test_parse_errors():
    with pytest.raises(t3.InvalidPresentation):
        t3.parse_presentation_3d({"faces": []})
    with pytest.raises(t3.InvalidPresentation):
        t3.parse_presentation_3d({"suspensions": [{"face": "N", "left": [{"gen": "delta", "states": [1, 1]}]}]})
    with pytest.raises(t3.InvalidPresentation):
        t3.parse_token({"gen": "a", "states": [2, 1]})


def test_lagrangian_oracle(fig8):
    sq = t3.SQGM(fig8)
    L = t3.lagrangian(sq, "Y")
    assert t3.lagrangian_oracle(sq, "Y", L)
    assert t3.lagrangian_oracle(sq, "Y", sq.gen("Z", 1) * L)
    assert t3.lagrangian_oracle(sq, "Y", sq.torus.zero())
    assert not t3.lagrangian_oracle(sq, "Y", sq.torus.one())


def test_lagrangian_shape():
    sq = t3.SQGM(cx.figure8(), t3.DEFAULT_CT, t3.DEFAULT_CB)
    L = t3.lagrangian(sq, "Y")
    want = sq.torus.one() - sq.gen("Y", 0, -2) - sq.gen("Y", 2, 2)
    assert L == want


@pytest.fixture(scope="module")
def pachner():
    T2 = cx.bipyramid()
    T3, data = cx.pachner_2_3(T2, "F")
    return T2, T3, data


def test_phi_2_3(pachner):
    r = t3.phi_2_3(*pachner)
    assert all(s.is_zero() for _, s in r.vertex)
    assert r.lagrangian.is_zero()
    assert r.biangle[0] == r.biangle[1]
    assert r.forms_preserved
    assert r.ok


def test_phi_2_3_default_constants(pachner):
    assert t3.phi_2_3(*pachner, ct=t3.DEFAULT_CT, cb=t3.DEFAULT_CB).ok


def test_phi_2_3_rejects_unrelated_pair(pachner):
    T2, _, data = pachner
    with pytest.raises(t3.NotAPachnerPair):
        t3.phi_2_3(T2, cx.figure8(), data)
