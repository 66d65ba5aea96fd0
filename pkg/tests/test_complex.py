import pytest

from skeintrace import complex as cx
from skeintrace.scalars import AngleExpr, Scalar


def test_single_triangle_boundary():
    tau = cx.build_surface({"triangles": [{"id": "T", "edges": ["a", "b", "c"]}]})
    assert tau.boundary_edges == ["a", "b", "c"]
    with pytest.raises(cx.HasBoundary):
        tau.sqts_torus()


def test_flip_quad_edges():
    tau = cx.build_surface(cx.FLIP_QUAD)
    assert len(tau.edges) == 5
    assert tau.interior_edges == ["x"]


def test_edge_used_three_times():
    spec = {"triangles": [{"id": "T1", "edges": ["a", "b", "c"]}, {"id": "T2", "edges": ["a", "d", "e"]},
                          {"id": "T3", "edges": ["a", "f", "g"]}]}
    with pytest.raises(cx.Malformed):
        cx.build_surface(spec)


def test_malformed_specs():
    with pytest.raises(cx.Malformed):
        cx.build_surface({"triangles": []})
    with pytest.raises(cx.Malformed):
        cx.build_surface({"tri": []})


def _sectors(tau, e, f):
    # count corners of the ccw cycles where f is followed by e
    return sum(1 for _, es in tau.triangles for i in range(3) if es[i] == f and es[(i + 1) % 3] == e)


def test_sqts_form_matches_sector_count():
    tau = cx.build_surface(cx.FLIP_QUAD)
    t = tau.sqts_torus(allow_boundary=True)
    for e in tau.edges:
        for f in tau.edges:
            want = _sectors(tau, e, f) - _sectors(tau, f, e)
            assert t.form(t.unit(e), t.unit(f)) == want
            assert t.form(t.unit(e), t.unit(f)) == -t.form(t.unit(f), t.unit(e))
    # the diagonal and a side share one sector, y followed by x
    assert abs(t.form(t.unit("x"), t.unit("y"))) == 1


def test_disjoint_edges_commute():
    tau = cx.build_surface(cx.FLIP_QUAD)
    t = tau.sqts_torus(allow_boundary=True)
    assert t.form(t.unit("y"), t.unit("w")) == 0


def test_flip_involution():
    tau = cx.build_surface(cx.FLIP_QUAD)
    t1 = cx.flip(tau, "x")
    assert len(t1.triangles) == 2 and len(t1.edges) == 5
    t2 = cx.flip(t1, "x'", "x")
    assert sorted(sorted(es) for _, es in t2.triangles) == sorted(sorted(es) for _, es in tau.triangles)


def test_flip_errors():
    tau = cx.build_surface(cx.FLIP_QUAD)
    with pytest.raises(cx.BoundaryEdge):
        cx.flip(tau, "y")
    with pytest.raises(cx.UnknownId):
        cx.flip(tau, "nope")


def test_punctured_torus_forms():
    t = cx.build_surface(cx.PUNCTURED_TORUS).sqts_torus()
    assert {abs(t.form(t.unit(e), t.unit(f))) for e, f in [("a", "b"), ("b", "c"), ("a", "c")]} == {2}


def test_flip_keeps_far_forms():
    # on the flip quadrilateral glued to a third triangle, edges away from x keep their form
    spec = {"triangles": cx.FLIP_QUAD["triangles"] + [{"id": "T3", "edges": ["w", "r", "s"]}]}
    tau = cx.build_surface(spec)
    before = tau.sqts_torus(allow_boundary=True)
    after = cx.flip(tau, "x").sqts_torus(allow_boundary=True)
    for e, f in [("r", "s"), ("w", "r"), ("w", "s")]:
        assert before.form(before.unit(e), before.unit(f)) == after.form(after.unit(e), after.unit(f))


def test_orientation_clash():
    spec = {"tetrahedra": [{"id": "P", "vertices": ["0", "1", "2", "3"]},
                           {"id": "Q", "vertices": ["0", "1", "2", "3"]}],
            "gluings": [{"face": ["P", "0", "1", "2"], "to": ["Q", "0", "1", "2"]}]}
    with pytest.raises(cx.OrientationClash):
        cx.build_mfld3(spec)


def test_face_glued_twice():
    spec = {"tetrahedra": [{"id": "P", "vertices": ["0", "1", "2", "3"]},
                           {"id": "Q", "vertices": ["0", "1", "2", "3"]}],
            "gluings": [{"face": ["P", "0", "1", "2"], "to": ["Q", "0", "2", "1"]},
                        {"face": ["P", "2", "1", "0"], "to": ["Q", "1", "2", "3"]}]}
    with pytest.raises(cx.Malformed):
        cx.build_mfld3(spec)


def test_figure8_is_closed_with_two_degree_six_edges():
    T = cx.figure8()
    assert T.is_closed
    assert sorted(len(c) for c in T.interior_edge_classes) == [6, 6]
    assert len(T.suspensions) == 4


def test_bipyramid_pachner_counts():
    T = cx.bipyramid()
    assert len(T.suspensions) == 7
    T3, data = cx.pachner_2_3(T, "F")
    assert len(T3.tets) == 3
    assert len(T3.suspensions) == 9
    assert sum(1 for s in T3.suspensions if s.bottom is not None) == 3
    assert len(T3.interior_edge_classes) == 1


def test_pachner_new_edge_angle_sum():
    T3, _ = cx.pachner_2_3(cx.bipyramid(), "F")
    cls = T3.interior_edge_classes[0]
    total = AngleExpr.const(0)
    for t, e in cls:
        total = total + T3.edge_angle(t, e)
    assert total.eliminated() == AngleExpr.const(2).eliminated()


def test_pachner_needs_distinct_tets():
    with pytest.raises(cx.UnknownId):
        cx.pachner_2_3(cx.bipyramid(), "nope")


def test_sf_torus_block_commutation():
    T = cx.figure8()
    t = T.sf_torus("N")
    assert t.rank == 6
    a, b = t.gen("N.a1"), t.gen("N.b1")
    assert a * b == Scalar.A(-1) * (b * a)
    assert t.commutation(t.unit("N.a1"), t.unit("N.a2")) == Scalar.one()


def test_shape_vector_is_two_bare_cones():
    T = cx.figure8()
    for cls in T.edge_classes:
        for tet, e in cls:
            assert sum(T.shape_vector(tet, e)) == 2


def test_opposite_cones_share_generator():
    T = cx.figure8()
    for tet, vs in T.tets.items():
        assert T.shape_generator_vector(tet, {vs[0], vs[1]}) == T.shape_generator_vector(tet, {vs[2], vs[3]})
        assert T.shape_generator_vector(tet, {vs[0], vs[2]}) != T.shape_generator_vector(tet, {vs[0], vs[1]})
