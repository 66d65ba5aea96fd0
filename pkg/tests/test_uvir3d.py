from fractions import Fraction

import pytest

from skeintrace import complex as cx
from skeintrace import trace3d as t3
from skeintrace import uvir3d as u
from skeintrace.scalars import AngleExpr, AngleSymbol, Scalar
from skeintrace.uvir2d import DegreeMismatch, UnresolvedState

CT, CB = Scalar.ct(), Scalar.cb()
CONSTANTS = [(t3.DEFAULT_CT, t3.DEFAULT_CB), (CT, CB)]


@pytest.fixture(scope="module")
def fig8():
    return cx.figure8()


def tok(block, gen, states, orient="fwd"):
    return t3.SfToken(block, gen, orient, tuple(states))


def theta(T, susp, block, slot):
    return u.cone_angle(T, susp, block, slot, T.angles)


def test_f_triangle_plus_plus(fig8):
    s = fig8.suspension("S")
    C = u.cover_torus(s)
    # gamma runs from the first to the second ccw slot of block 1
    x, y = s.ccw_slots(0)[0], s.ccw_slots(0)[1]
    got = u.f_sf(fig8, s, [tok(0, "gamma", (1, 1))], [])
    th = theta(fig8, s, 0, x) + theta(fig8, s, 0, y)
    want = C.gen("S.1.gamma2") * (Scalar.q(Fraction(-1, 2)) * Scalar.qangle(th, Fraction(1, 4)))
    assert got == want
    # the same weight written as q^(-(pi - tx/2 - ty/2)/(2 pi))
    assert Scalar.q(Fraction(-1, 2)) * Scalar.qangle(th, Fraction(1, 4)) == \
        Scalar.qangle(AngleExpr.const(1) - th.scale(Fraction(1, 2)), Fraction(-1, 2))


def test_f_biangle_plus_plus(fig8):
    s = fig8.suspension("S")
    C = u.cover_torus(s)
    got = u.f_sf(fig8, s, [], [tok(None, "a", (1, 1))])
    th = theta(fig8, s, 0, "a") + theta(fig8, s, 1, "a")
    assert got == C.gen("S.a.+") * Scalar.qangle(th, Fraction(1, 4))


def test_f_empty_and_bad(fig8):
    s = fig8.suspension("S")
    C = u.cover_torus(s)
    assert u.f_sf(fig8, s, [], []) == C.one()
    assert u.f_sf(fig8, s, [], [tok(None, "b", (1, -1))]).is_zero()
    with pytest.raises(UnresolvedState):
        u.f_sf(fig8, s, [tok(0, "alpha", ("e", 1))], [])


def test_ev_hexagon_generator(fig8):
    s = fig8.suspension("S")
    C = u.cover_torus(s)
    for ct, cb in CONSTANTS:
        got = u.ev_sf(fig8, s, C.gen("S.1.gamma2"), ct, cb)
        x, y = s.ccw_slots(0)[0], s.ccw_slots(0)[1]
        th = theta(fig8, s, 0, x) + theta(fig8, s, 0, y)
        coeff = Scalar.q(Fraction(1, 2)) * ct * Scalar.qangle(th, Fraction(-1, 4))
        assert len(got.terms) == 1
        assert got.only_term()[1] == coeff


def test_ev_empty(fig8):
    s = fig8.suspension("N")
    assert u.ev_sf(fig8, s, u.cover_torus(s).one()) == u.flux_target(s).one()


@pytest.mark.parametrize("ct,cb", CONSTANTS)
def test_face_relation(fig8, ct, cb):
    s = fig8.suspension("S")
    C = u.cover_torus(s)

    lhs = u.ev_sf(fig8, s, C.monomial(C.vec({"S.1.gamma1": 1, "S.2.beta1": 1})), ct, cb)
    rhs = u.ev_sf(fig8, s, C.monomial(C.vec({"S.a.-": 1, "S.b.+": -1})), ct, cb)
    assert (lhs - rhs).map_scalars(lambda x: x.impose_scaling()).is_zero()


def test_glue_matching_webs(fig8):
    p = t3.figure8_presentation()
    web, _ = u.reference_web(fig8, p)
    assert not web.is_empty()
    assert {f for f, _ in web.flux} == {"N", "S"}


def test_glue_mismatch(fig8):
    with pytest.raises(DegreeMismatch):
        u.gl1_glue(fig8, {"N": (1, -1, 0, 0, 0, 0)})


def test_glue_empty(fig8):
    assert u.gl1_glue(fig8, {"N": (0,) * 6, "S": (0,) * 6}).is_empty()


@pytest.mark.parametrize("ct,cb", CONSTANTS)
def test_figure8_compat(fig8, ct, cb):
    rep = u.compat_check_3d(fig8, t3.figure8_presentation(), ct, cb)
    assert rep.ok
    assert sum(1 for r in rep.records if r.name.startswith("glued total")) == 1


@pytest.mark.parametrize("ct,cb", CONSTANTS)
def test_recover_trace(fig8, ct, cb):
    p = t3.figure8_presentation()
    sq = t3.SQGM(fig8, ct, cb)
    assert sq.equal(u.recover_trace(fig8, p, ct, cb), t3.trace_3d(fig8, p, ct, cb, sq))


def test_recover_against_other_class(fig8):
    p = t3.figure8_presentation()
    other = (u.gl1_glue(fig8, {"N": (0,) * 6}), Scalar.one())
    assert u.recover_trace(fig8, p, reference=other).is_zero()


def test_missing_angles(fig8):
    with pytest.raises(u.NoAngles):
        u.f_sf(fig8, fig8.suspension("N"), [], [], angles=cx.AngleStructure({}))


def test_numeric_angles_cancel():
    spec = dict(cx.FIGURE8)
    third = {"theta": "1/3*pi", "theta1": "1/3*pi", "theta2": "1/3*pi"}
    spec["angles"] = {"Y": third, "Z": third}
    T = cx.build_mfld3(spec)
    assert u.compat_check_3d(T, t3.figure8_presentation()).ok


@pytest.mark.parametrize("face", ["N", "S", "E", "W"])
def test_generator_squares(fig8, face):
    recs = u.sf_generator_squares(fig8, face, CT, CB)
    assert len(recs) == 72
    assert all(r.equal for r in recs)


def test_generator_squares_one_block():
    T = cx.bipyramid()
    name = next(s.name for s in T.suspensions if s.bottom is None)
    recs = u.sf_generator_squares(T, name)
    assert len(recs) == 24 and all(r.equal for r in recs)


def test_cone_torus():
    t = u.cone_torus()
    assert t.gen("x") * t.gen("x'") == (Scalar.q() ** 2) * (t.gen("x'") * t.gen("x"))
    assert t.is_central(u.cone_relation().vector)


def test_cone_3term():
    T2 = cx.bipyramid()
    T3, data = cx.pachner_2_3(T2, "F")
    r = u.cone_3term_check(T2, T3, data)
    assert r.sign == -1
    assert r.module_action == u.cone_torus().scalar(-Scalar.q())
    assert r.three_term_closes
    assert r.ok


def test_three_term_weights():
    a = AngleExpr.sym(AngleSymbol.free("a"))
    b = AngleExpr.sym(AngleSymbol.free("b"))
    d1, d2 = u.three_term(a, b)
    assert d1 == Scalar.qangle(a)
    assert d2 == Scalar.qangle(b, -1)
