"""Randomised algebraic identities."""
import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from skeintrace import complex as cx
from skeintrace import trace2d as t2
from skeintrace import uvir2d as u
from skeintrace.qtorus import MonomialRelation, QuantumTorus, RelationLattice, brute_force_reorder, weyl
from skeintrace.scalars import Scalar

TORI = {
    "hexagon": u.hexagon_torus(),
    "gl1": u.gl1_triangle_torus(),
    "sqts": cx.build_surface(cx.PUNCTURED_TORUS).sqts_torus(),
    "sf": cx.figure8().sf_torus("N"),
}

small = st.integers(-2, 2)


def vectors(t: QuantumTorus):
    return st.tuples(*[small] * t.rank)


scalars = st.sampled_from([Scalar.one(), Scalar.A(), -Scalar.q(), Scalar.zeta(), Scalar.parse("q^1/2")])


@st.composite
def elements(draw, t: QuantumTorus):
    n = draw(st.integers(1, 3))
    e = t.zero()
    for _ in range(n):
        e = e + t.monomial(draw(vectors(t)), draw(scalars))
    return e


def test_weyl_permutation_invariance_exhaustive():
    t = QuantumTorus.from_pairs(["x", "y", "z"], {("x", "y"): (2, 1), ("y", "z"): (1, 0), ("z", "x"): (3, 1)})
    units = [t.unit(i) for i in range(3)] + [tuple(-c for c in t.unit(0))]
    for n in range(1, 5):
        for vs in itertools.product(units, repeat=n):
            ref = weyl(t, vs)
            for p in set(itertools.permutations(range(n))):
                assert weyl(t, [vs[i] for i in p]) == ref
            # the ordered product reorders by the pairwise commutation scalars
            for perm, s in brute_force_reorder(t, vs)[:6]:
                assert s * t.ordered_product([vs[i] for i in perm]) == t.ordered_product(vs)


def _assoc(t):
    @settings(max_examples=200)
    @given(elements(t), elements(t), elements(t))
    def check(a, b, c):
        assert (a * b) * c == a * (b * c)
    return check


test_associativity_hexagon = _assoc(TORI["hexagon"])
test_associativity_gl1 = _assoc(TORI["gl1"])
test_associativity_sqts = _assoc(TORI["sqts"])
test_associativity_sf = _assoc(TORI["sf"])


@st.composite
def words(draw, max_len=3):
    n = draw(st.integers(0, max_len))
    specs = [(draw(st.sampled_from(t2.KINDS)), draw(st.sampled_from(["fwd", "bwd"])),
              draw(st.sampled_from([1, -1])), draw(st.sampled_from([1, -1]))) for _ in range(n)]
    return u.word(*specs)


@settings(max_examples=200)
@given(words(), words())
def test_pi_twisted_multiplicative(w1, w2):
    lhs = u.tr_pi(w1 * w2)
    rhs = u.gl1_triangle_section().reduce(u.tr_pi(w1) * u.tr_pi(w2))
    assert lhs == rhs * u.sign_of(u.b_cross(w1, w2))


@settings(max_examples=200)
@given(words(), words())
def test_b_antisymmetric_and_additive(w1, w2):
    assert u.b_cross(w1, w2) == -u.b_cross(w2, w1)
    assert (u.b_of(w1 * w2) - u.b_of(w1) - u.b_of(w2) - u.b_cross(w1, w2)) % 2 == 0


@settings(max_examples=200)
@given(words(), words(), words())
def test_b_cocycle(w1, w2, w3):
    lhs = u.b_cross(w1, w2 * w3) + u.b_cross(w2, w3)
    rhs = u.b_cross(w1, w2) + u.b_cross(w1 * w2, w3)
    assert lhs == rhs


LATTICE_T = QuantumTorus.from_pairs(["a", "b", "c", "d"], {("a", "b"): (2, 0), ("b", "c"): (1, 1),
                                                          ("c", "d"): (2, 1)})
LATTICE = RelationLattice(LATTICE_T, [MonomialRelation((2, 0, 0, 0), Scalar.q(), "central"),
                                      MonomialRelation((0, 1, 0, 1), Scalar.A(), "right"),
                                      MonomialRelation((0, 0, 3, 0), Scalar.one(), "right")])


@settings(max_examples=200)
@given(elements(LATTICE_T))
def test_reduce_idempotent(e):
    r = LATTICE.reduce(e)
    assert LATTICE.reduce(r) == r


QUAD = cx.build_surface({"triangles": cx.FLIP_QUAD["triangles"] + [{"id": "T3", "edges": ["w", "r", "s"]}]})


@st.composite
def presentations(draw):
    """Random corner arcs on a three-triangle strip, paired across interior edges."""
    toks = []
    for tri, es in QUAD.triangles:
        for _ in range(draw(st.integers(0, 2))):
            toks.append([tri, draw(st.sampled_from(t2.KINDS)), draw(st.sampled_from(["fwd", "bwd"])),
                         [draw(st.sampled_from([1, -1])), draw(st.sampled_from([1, -1]))]])
    # replace endpoints on interior edges by variables shared with the other side
    open_ends: dict[str, list[tuple[int, int, str]]] = {}
    for i, (tri, kind, _, _) in enumerate(toks):
        es = QUAD.triangle(tri)
        for j, slot in enumerate(t2.ARC_EDGES[kind]):
            e = es["abc".index(slot)]
            if e in QUAD.interior_edges:
                open_ends.setdefault(e, []).append((i, j, tri))
    drop = set()
    n = 0
    for e, ends in open_ends.items():
        tri_a = QUAD.slots_of(e)[0][0]
        side_a = [x for x in ends if x[2] == tri_a]
        side_b = [x for x in ends if x[2] != tri_a]
        for (i, j, _), (k, m, _) in zip(side_a, side_b):
            v = f"s{n}"
            n += 1
            toks[i][3][j] = v
            toks[k][3][m] = v
        for i, _, _ in side_a[len(side_b):] + side_b[len(side_a):]:
            drop.add(i)
    toks = [t for i, t in enumerate(toks) if i not in drop]
    doc = {"tokens": [{"triangle": a, "gen": b, "orient": c, "states": d} for a, b, c, d in toks]}
    p = t2.parse_presentation_2d(doc)
    # tokens dropped above can leave a variable used once
    while True:
        counts: dict[str, int] = {}
        for t in p.tokens:
            for s in t.states:
                if isinstance(s, str):
                    counts[s] = counts.get(s, 0) + 1
        keep = [t for t in p.tokens if all(counts[s] == 2 for s in t.states if isinstance(s, str))]
        if len(keep) == len(p.tokens):
            break
        p.tokens = keep
    p.validate(QUAD)
    return p, draw(st.permutations(p.variables))


@settings(max_examples=20)
@given(presentations())
def test_state_sum_order_independent(data):
    p, order = data
    ct = Scalar.ct()
    assert t2.trace_surface(QUAD, p, ct, order=order) == t2.trace_surface(QUAD, p, ct)
