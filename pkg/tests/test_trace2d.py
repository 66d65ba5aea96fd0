import pytest

from skeintrace import complex as cx
from skeintrace import trace2d as t2
from skeintrace.scalars import Scalar

A = Scalar.A()


@pytest.fixture
def quad():
    return cx.build_surface(cx.FLIP_QUAD)


def pres(doc):
    return t2.parse_presentation_2d(doc)


ARC_THROUGH_X = {
    "tokens": [{"triangle": "T1", "gen": "beta", "orient": "bwd", "states": ["e", 1]},
               {"triangle": "T2", "gen": "gamma", "orient": "fwd", "states": ["e", 1]}],
}


def test_empty_presentation_is_one(quad):
    e = t2.trace_surface(quad, pres({"tokens": []}))
    assert e == quad.sqts_torus(allow_boundary=True).one()


def test_corner_arc_gives_weyl_monomial(quad):
    p = pres({"tokens": [{"triangle": "T1", "gen": "gamma", "states": [1, 1]}]})
    t = quad.sqts_torus(allow_boundary=True)
    assert t2.trace_surface(quad, p) == t.weyl([t.unit("y"), t.unit("z")])


def test_ct_scales_plus_plus_arcs(quad):
    p = pres({"tokens": [{"triangle": "T1", "gen": "gamma", "states": [1, 1]}]})
    ct = Scalar.ct()
    assert t2.trace_surface(quad, p, ct) == t2.trace_surface(quad, p) * ct


def test_bad_arc_contributes_zero(quad):
    p = pres({"tokens": [{"triangle": "T1", "gen": "gamma", "states": [1, -1]}]})
    assert t2.trace_surface(quad, p).is_zero()


def test_arc_through_diagonal(quad):
    t = quad.sqts_torus(allow_boundary=True)
    got = t2.trace_surface(quad, pres(ARC_THROUGH_X))
    x_inv = tuple(-c for c in t.unit("x"))
    want = t.weyl([t.unit("y"), t.unit("x"), t.unit("v")]) + t.weyl([t.unit("y"), x_inv, t.unit("v")])
    assert got == want


def test_prefactor_and_coefficient(quad):
    doc = dict(ARC_THROUGH_X, prefactor=[{"var": "e", "half_q_coeff": 2}], coefficient="A")
    t = quad.sqts_torus(allow_boundary=True)
    got = t2.trace_surface(quad, pres(doc))
    want = (t.weyl([t.unit("y"), t.unit("x"), t.unit("v")]) * Scalar.q()
            + t.weyl([t.unit("y"), tuple(-c for c in t.unit("x")), t.unit("v")]) * Scalar.q(-1)) * A
    assert got == want


def test_order_of_state_sum(quad):
    p = pres(ARC_THROUGH_X)
    assert t2.trace_surface(quad, p, order=["e"]) == t2.trace_surface(quad, p)


@pytest.mark.parametrize("doc", [
    {"tokens": [{"triangle": "T9", "gen": "alpha", "states": [1, 1]}]},
    {"tokens": [{"triangle": "T1", "gen": "beta", "states": [1, 1]}]},
    {"tokens": [{"triangle": "T1", "gen": "beta", "states": ["e", 1]}]},
    {"tokens": [{"triangle": "T1", "gen": "alpha", "states": ["e", 1]},
                {"triangle": "T1", "gen": "beta", "states": ["e", 1]}]},
])
def test_invalid_presentations(quad, doc):
    with pytest.raises(t2.InvalidPresentation):
        t2.trace_surface(quad, pres(doc))


@pytest.mark.parametrize("doc", [{"tok": []}, {"tokens": [{"triangle": "T1", "gen": "delta", "states": [1, 1]}]},
                                 {"tokens": [{"triangle": "T1", "gen": "alpha", "states": [2, 1]}]}])
def test_parse_errors(doc):
    with pytest.raises(t2.InvalidPresentation):
        pres(doc)


def _mono(t, **exps):
    return t.monomial(t.vec(exps))


def _weyl(t, *factors):
    return t.weyl([tuple(x if t.names[i] == n else 0 for i in range(t.rank)) for n, x in factors])


def test_flip_yz(quad):
    dst = cx.flip(quad, "x").sqts_torus(allow_boundary=True)
    src = quad.sqts_torus(allow_boundary=True)
    got = t2.flip_even(quad, "x", src.weyl([src.unit("y"), src.unit("z")]))
    assert got == _weyl(dst, ("y", 1), ("x'", 1), ("z", 1))


def test_flip_w_xinv_y(quad):
    dst = cx.flip(quad, "x").sqts_torus(allow_boundary=True)
    src = quad.sqts_torus(allow_boundary=True)
    m = src.monomial(src.vec({"w": 1, "x": -1, "y": 1}))
    assert t2.flip_even(quad, "x", m) == _weyl(dst, ("w", 1), ("x'", 2), ("y", 1))


def test_flip_with_denominator(quad):
    src = quad.sqts_torus(allow_boundary=True)
    m = src.monomial(src.vec({"w": -1, "x": 1, "y": 1}))
    with pytest.raises(t2.NonLaurentImage):
        t2.flip_even(quad, "x", m)


def test_flip_odd_monomial(quad):
    src = quad.sqts_torus(allow_boundary=True)
    with pytest.raises(t2.NotEven):
        t2.flip_even(quad, "x", src.gen("y"))


def test_flip_round_trips(quad):
    trips = t2.flip_round_trips(quad, "x")
    assert len(trips) >= 12
    assert all(ok for _, ok in trips)


def test_arc_weights_are_balanced():
    # each +/- pattern gives a monomial or zero
    for kind in t2.KINDS:
        for st in [(1, 1), (-1, -1), (-1, 1)]:
            w = t2.arc_weight(kind, st)
            assert w.is_monomial()
        assert t2.arc_weight(kind, (1, -1)).is_zero()


def test_triangle_relation():
    a = t2.arc_weight("alpha", (1, 1))
    b = t2.arc_weight("beta", (1, 1))
    assert b * a == A * (a * b)
