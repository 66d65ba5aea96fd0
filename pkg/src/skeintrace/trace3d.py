"""The 3d quantum trace: face suspensions, the square-root gluing module
(SQGM) and the 2-3 move on generators.

A split presentation lists, per face suspension, a left word of stated
corner arcs in its two triangle blocks and a right word of stated biangle
arcs; the word acts on the empty skein.  Triangle arcs are named relative to
the block's counterclockwise edge triple (e0, e1, e2): alpha runs e1 -> e2,
beta e2 -> e0 and gamma e0 -> e1, with states listed in that order.  Biangle
arcs are named by the slot a, b or c and run from the top block (fwd) or
from the bottom block (bwd); their states are listed top first.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from .complex import SLOTS, FaceSuspension, Mfld3Tri, PachnerData, _sf_torus
from .qtorus import (DependentRelations, MonomialRelation, QuantumTorus, RelationLattice, TorusElem, Vec,
                     independent_subset)
from .scalars import Scalar, check_scaling
from .trace2d import KINDS, arc_weight, assignments

DEFAULT_CT = Scalar.q(Fraction(-1, 2))
DEFAULT_CB = Scalar.one()


class InvalidPresentation(ValueError):
    pass


class NotAPachnerPair(ValueError):
    pass


@dataclass(frozen=True)
class SfToken:
    """A stated arc in a face suspension; ``block`` is 0 or 1 for triangle
    arcs and None for biangle arcs."""

    block: int | None
    gen: str
    orient: str
    states: tuple  # ints or variable names, possibly "-name"

    def __post_init__(self):
        if self.block is None:
            if self.gen not in SLOTS:
                raise InvalidPresentation(f"biangle arcs are a, b or c, got {self.gen!r}")
        elif self.gen not in KINDS or self.block not in (0, 1):
            raise InvalidPresentation(f"bad triangle arc {self.gen!r} in block {self.block}")
        if self.orient not in ("fwd", "bwd"):
            raise InvalidPresentation(f"bad orientation {self.orient!r}")

    @property
    def is_biangle(self) -> bool:
        return self.block is None

    def resolve(self, asg: Mapping[str, int]) -> "SfToken":
        return SfToken(self.block, self.gen, self.orient, tuple(_resolve(s, asg) for s in self.states))

    def variables(self) -> list[str]:
        return [s.lstrip("-") for s in self.states if isinstance(s, str)]


def _resolve(s: Any, asg: Mapping[str, int]) -> int:
    if isinstance(s, int):
        return s
    if s.startswith("-"):
        return -asg[s[1:]]
    return asg[s]


@dataclass
class SfWord:
    face: str
    left: list[SfToken]
    right: list[SfToken]

    @property
    def tokens(self) -> list[SfToken]:
        return self.left + self.right


@dataclass
class SplitPresentation3D:
    words: list[SfWord]
    prefactor: dict[str, Fraction] = field(default_factory=dict)
    coefficient: Scalar = field(default_factory=Scalar.one)

    @property
    def variables(self) -> list[str]:
        out: list[str] = []
        for w in self.words:
            for t in w.tokens:
                for v in t.variables():
                    if v not in out:
                        out.append(v)
        return out

    def validate(self, T: Mfld3Tri) -> None:
        names = {s.name for s in T.suspensions}
        for w in self.words:
            if w.face not in names:
                raise InvalidPresentation(f"unknown face suspension {w.face}")
            susp = T.suspension(w.face)
            for t in w.left:
                if t.is_biangle:
                    raise InvalidPresentation("biangle arcs belong to the right word")
                if t.block >= len(susp.blocks):  # type: ignore[operator]
                    raise InvalidPresentation(f"{w.face} has no block {t.block}")
            for t in w.right:
                if not t.is_biangle:
                    raise InvalidPresentation("triangle arcs belong to the left word")
                if len(susp.blocks) < 2:
                    raise InvalidPresentation(f"{w.face} is a boundary face without biangles")
        for v in self.prefactor:
            if v not in self.variables:
                raise InvalidPresentation(f"prefactor on unknown variable {v}")

    def prefactor_at(self, asg: Mapping[str, int]) -> Scalar:
        s = self.coefficient
        for v, c in self.prefactor.items():
            s = s * Scalar.q(c * asg[v] / 2)
        return s


def parse_token(d: Mapping[str, Any]) -> SfToken:
    gen = str(d["gen"])
    states = tuple(_parse_state(s) for s in d["states"])
    if gen in SLOTS:
        return SfToken(None, gen, str(d.get("orient", "fwd")), states)
    block = int(d.get("block", 1)) - 1
    return SfToken(block, gen, str(d.get("orient", "fwd")), states)


def _parse_state(s: Any) -> int | str:
    if isinstance(s, int):
        if s not in (1, -1):
            raise InvalidPresentation(f"bad state {s}")
        return s
    s = str(s)
    if s in ("+", "+1"):
        return 1
    if s in ("-", "-1"):
        return -1
    return s


def parse_presentation_3d(doc: Mapping[str, Any]) -> SplitPresentation3D:
    try:
        words = [SfWord(str(w["face"]), [parse_token(t) for t in w.get("left", [])],
                        [parse_token(t) for t in w.get("right", [])]) for w in doc["suspensions"]]
        pre = {str(p["var"]): Fraction(p["half_q_coeff"]) for p in doc.get("prefactor", [])}
        coeff = Scalar.parse(str(doc["coefficient"])) if "coefficient" in doc else Scalar.one()
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidPresentation(f"bad presentation: {exc}") from exc
    return SplitPresentation3D(words, pre, coeff)


# ----------------------------------------------------- face suspensions

def biangle_weight(sf: QuantumTorus, slot: str, states: tuple[int, int], cb: Scalar) -> TorusElem:
    top, bottom = _biangle_indices(sf, slot)
    g = [0] * sf.rank
    m, n = states
    if (m, n) == (1, 1):
        g[top] = g[bottom] = 1
        return sf.monomial(tuple(g), cb)
    if (m, n) == (-1, -1):
        g[top] = g[bottom] = -1
        return sf.monomial(tuple(g), cb.inverse())
    return sf.zero()


def _biangle_indices(sf: QuantumTorus, slot: str) -> tuple[int, int]:
    top = next(i for i, n in enumerate(sf.names) if n.endswith(f".{slot}1"))
    bottom = next(i for i, n in enumerate(sf.names) if n.endswith(f".{slot}2"))
    return top, bottom


def triangle_token_weight(sf: QuantumTorus, block: int, kind: str, states: tuple[int, int],
                          ct: Scalar) -> TorusElem:
    w = arc_weight(kind, states, ct)
    d = {}
    for g, s in w.terms.items():
        v = [0] * sf.rank
        v[3 * block:3 * block + 3] = g
        d[tuple(v)] = s
    return TorusElem(sf, d)


def trace_sf(susp: FaceSuspension, left: Sequence[SfToken], right: Sequence[SfToken],
             ct: Scalar = DEFAULT_CT, cb: Scalar = DEFAULT_CB) -> TorusElem:
    """Trace of  left . [empty] . right  in the face suspension torus."""
    check_scaling(ct, cb)
    sf = _sf_torus(susp)
    acc = sf.one()
    for t in left:
        acc = acc * triangle_token_weight(sf, t.block, t.gen, t.states, ct)  # type: ignore[arg-type]
        if acc.is_zero():
            return acc
    for t in right:
        acc = acc * biangle_weight(sf, t.gen, t.states, cb)
        if acc.is_zero():
            return acc
    return acc


# ----------------------------------------------------------- the SQGM

def default_elimination(T: Mfld3Tri, shape: QuantumTorus) -> list[int]:
    """Eliminate z and z' before z'' so answers are written in double-primed generators."""
    first = [shape.index(T.shape_name(t, k)) for t in T.tets for k in (0, 1)]
    last = [shape.index(T.shape_name(t, 2)) for t in T.tets]
    return first + last


@dataclass
class SQGM:
    T: Mfld3Tri
    ct: Scalar = field(default_factory=lambda: Scalar.ct())
    cb: Scalar = field(default_factory=lambda: Scalar.cb())
    eliminate: list[int] | None = None
    torus: QuantumTorus = field(init=False)
    vertex_relations: list[MonomialRelation] = field(init=False)
    gluing_relations: list[MonomialRelation] = field(init=False)
    section: RelationLattice = field(init=False)
    dropped: list[MonomialRelation] = field(init=False)

    def __post_init__(self):
        T = self.T
        self.torus = T.shape_torus()
        t = self.torus
        vs = Scalar.q(-1) * self.ct ** -3
        self.vertex_relations = [MonomialRelation(T.vertex_vector(x), vs, "central", f"vertex {x}") for x in T.tets]
        for r in self.vertex_relations:
            if not t.is_central(r.vector):
                raise DependentRelations(f"{r.label} is not central")
        self.gluing_relations = []
        for k, cls in enumerate(T.interior_edge_classes):
            s = Scalar.q(1) * self.cb ** (-len(cls))
            self.gluing_relations.append(MonomialRelation(T.gluing_vector(cls), s, "right", f"edge {k}"))
        kept, dropped = independent_subset(self.vertex_relations + self.gluing_relations)
        order = self.eliminate if self.eliminate is not None else default_elimination(T, t)
        self.section = RelationLattice(t, kept, order)
        self.dropped = dropped
        for r in dropped:
            g, s = self.section.representative(r.vector)
            if any(g) or (s * r.scalar.inverse()).impose_scaling() != Scalar.one():
                raise DependentRelations(f"{r.label} is inconsistent with the other relations")

    @property
    def relations(self) -> list[MonomialRelation]:
        return self.vertex_relations + self.gluing_relations

    def reduce(self, e: TorusElem) -> TorusElem:
        return self.section.reduce(e)

    def gen(self, tet: str, kind: int, power: int = 1) -> TorusElem:
        return self.torus.gen(self.T.shape_name(tet, kind), power)

    def monomial(self, exps: Mapping[str, int], s: Scalar | int = 1) -> TorusElem:
        return self.torus.monomial(self.torus.vec(exps), s)

    def equal(self, a: TorusElem, b: TorusElem) -> bool:
        d = self.reduce(a - b)
        return d.map_scalars(lambda s: s.impose_scaling()).is_zero()


def to_shape(T: Mfld3Tri, bare: QuantumTorus, e: TorusElem, shape: QuantumTorus) -> TorusElem:
    """Project a balanced element of the tensor of face suspension tori."""
    d: dict[Vec, Scalar] = {}
    for g, s in e.terms.items():
        h = T.bare_to_shape(g)
        d[h] = d[h] + s if h in d else s
    return TorusElem(shape, d)


def _sf_offsets(T: Mfld3Tri) -> dict[str, int]:
    off, out = 0, {}
    for s in T.suspensions:
        out[s.name] = off
        off += 3 * len(s.blocks)
    return out


def embed_sf(T: Mfld3Tri, bare: QuantumTorus, face: str, e: TorusElem) -> TorusElem:
    off = _sf_offsets(T)[face]
    d = {}
    for g, s in e.terms.items():
        v = [0] * bare.rank
        v[off:off + len(g)] = g
        d[tuple(v)] = s
    return TorusElem(bare, d)


def trace_3d_state(T: Mfld3Tri, p: SplitPresentation3D, asg: Mapping[str, int],
                   ct: Scalar, cb: Scalar, bare: QuantumTorus | None = None) -> TorusElem:
    """Unreduced tensor of face suspension traces for one state assignment."""
    bare = bare or T.bare_torus()
    acc = bare.scalar(p.prefactor_at(asg))
    for w in p.words:
        susp = T.suspension(w.face)
        tr = trace_sf(susp, [t.resolve(asg) for t in w.left], [t.resolve(asg) for t in w.right], ct, cb)
        if tr.is_zero():
            return bare.zero()
        acc = acc * embed_sf(T, bare, w.face, tr)
    return acc


def trace_3d(T: Mfld3Tri, p: SplitPresentation3D, ct: Scalar = DEFAULT_CT, cb: Scalar = DEFAULT_CB,
             sqgm: SQGM | None = None, order: Sequence[str] | None = None,
             per_state: dict | None = None) -> TorusElem:
    """State sum of face suspension traces, projected to shape parameters and
    reduced modulo vertex and gluing relations."""
    p.validate(T)
    check_scaling(ct, cb)
    sqgm = sqgm or SQGM(T, ct, cb)
    bare = T.bare_torus()
    total = sqgm.torus.zero()
    for asg in assignments(p.variables, order):
        raw = trace_3d_state(T, p, asg, ct, cb, bare)
        if raw.is_zero():
            continue
        val = sqgm.reduce(to_shape(T, bare, raw, sqgm.torus))
        if per_state is not None:
            per_state[tuple(sorted(asg.items()))] = val
        total = total + val
    return total


# ------------------------------------------------------ Lagrangians

def lagrangian(sqgm: SQGM, tet: str, k: int = 0) -> TorusElem:
    """1 - Cb^-2 t_k^-2 - Cb^2 t_(k+2)^2 for the shape generators t of ``tet``."""
    cb = sqgm.cb
    t = sqgm.torus
    return t.one() - sqgm.gen(tet, k, -2) * cb ** -2 - sqgm.gen(tet, (k + 2) % 3, 2) * cb ** 2


def lagrangian_oracle(sqgm: SQGM, tet: str, e: TorusElem) -> bool:
    """Whether e = x * L_tet for a monomial x (any of the cyclic forms of L)."""
    if e.is_zero():
        return True
    if len(e.terms) != 3:
        return False
    for k in range(3):
        L = lagrangian(sqgm, tet, k)
        for g, s in e.terms.items():
            # try x = s * x_g with the constant term of L landing on g
            x = sqgm.torus.monomial(g, s)
            if x * L == e:
                return True
    return False


# ------------------------------------------------------ the 2-3 move

@dataclass
class PachnerReport:
    vertex: list[tuple[str, Scalar]]
    lagrangian: TorusElem
    biangle: tuple[TorusElem, TorusElem]
    forms_preserved: bool

    @property
    def ok(self) -> bool:
        return (all(s.is_zero() for _, s in self.vertex) and self.lagrangian.is_zero()
                and self.biangle[0] == self.biangle[1] and self.forms_preserved)


class Phi23:
    """The 2-3 map on shape generators.

    An edge cone of the top or bottom tetrahedron sits on an edge from an apex
    to an equator vertex (or on the opposite equator edge, which carries the
    same generator); it goes to C_B times the Weyl product of the two new
    edge cones on that apex edge.
    """

    def __init__(self, T2: Mfld3Tri, T3: Mfld3Tri, data: PachnerData, ct: Scalar | None = None,
                 cb: Scalar | None = None):
        kept = set(T2.tets) - {data.top, data.bottom}
        if set(T2.tets) - set(T3.tets) != {data.top, data.bottom} or set(T3.tets) != kept | set(data.new_tets):
            raise NotAPachnerPair("the tetrahedra do not match a 2-3 move")
        self.T2, self.T3, self.data = T2, T3, data
        self.ct = ct if ct is not None else Scalar.ct()
        self.cb = cb if cb is not None else Scalar.cb()
        self.src = T2.shape_torus()
        self.dst = T3.shape_torus()
        self._images: dict[str, Vec] = {}
        d = data
        to_top = {}
        g = next(x for x in T2.gluings if x.name == d.face)
        for v, w in zip(g.top_face, g.bottom_face):
            to_top[w] = v
        bot_apex = next(v for v in T2.tets[d.bottom] if v not in g.bottom_face)
        to_top[bot_apex] = d.bottom_apex
        for tet, apex, rename in ((d.top, d.top_apex, None), (d.bottom, bot_apex, to_top)):
            for p in (v for v in T2.tets[tet] if v != apex):
                kind = T2.edge_type(tet, (apex, p))
                u = rename[apex] if rename else apex
                pp = rename[p] if rename else p
                vec = [0] * self.dst.rank
                for nt in data.new_tets:
                    if {u, pp} <= set(T3.tets[nt]):
                        vec[self.dst.index(T3.shape_name(nt, T3.edge_type(nt, (u, pp))))] += 1
                if sum(vec) != 2:
                    raise NotAPachnerPair("apex edge is not shared by two new tetrahedra")
                self._images[T2.shape_name(tet, kind)] = tuple(vec)
        for t in T2.tets:
            if t in (d.top, d.bottom):
                continue
            for k in range(3):
                vec = [0] * self.dst.rank
                vec[self.dst.index(T3.shape_name(t, k))] = 1
                self._images[T2.shape_name(t, k)] = tuple(vec)

    def matrix_image(self, g: Sequence[int]) -> Vec:
        out = [0] * self.dst.rank
        for i, x in enumerate(g):
            if x:
                img = self._images[self.src.names[i]]
                out = [a + x * b for a, b in zip(out, img)]
        return tuple(out)

    def scalar_weight(self, g: Sequence[int]) -> Scalar:
        n = 0
        for i, x in enumerate(g):
            name = self.src.names[i]
            if name.split(".")[0] in (self.data.top, self.data.bottom):
                n += x
        return self.cb ** n

    def __call__(self, e: TorusElem) -> TorusElem:
        d: dict[Vec, Scalar] = {}
        for g, s in e.terms.items():
            h = self.matrix_image(g)
            val = s * self.scalar_weight(g)
            d[h] = d[h] + val if h in d else val
        return TorusElem(self.dst, d)

    def preserves_forms(self) -> bool:
        n = self.src.rank
        units = [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
        for a in units:
            for b in units:
                ia, ib = self.matrix_image(a), self.matrix_image(b)
                if self.src.form(a, b) != self.dst.form(ia, ib) or \
                        (self.src.sign(a, b) - self.dst.sign(ia, ib)) % 2:
                    return False
        return True


def _tet_with(T: Mfld3Tri, names: Iterable[str], verts: set[str]) -> str:
    return next(t for t in names if verts <= set(T.tets[t]))


def phi_2_3(T2: Mfld3Tri, T3: Mfld3Tri, data: PachnerData, ct: Scalar | None = None,
            cb: Scalar | None = None) -> PachnerReport:
    """Check that the generator map respects vertex and Lagrangian relations and
    the horizontal biangle square.  Scalars are compared after imposing
    Cb^2 = q Ct^2."""
    ct = ct if ct is not None else Scalar.ct()
    cb = cb if cb is not None else Scalar.cb()
    phi = Phi23(T2, T3, data, ct, cb)
    old = SQGM(T2, ct, cb)
    new = SQGM(T3, ct, cb)
    d = data
    # (i) vertex relations of the two removed tetrahedra
    vertex = []
    for tet in (d.top, d.bottom):
        x = old.torus.monomial(T2.vertex_vector(tet))
        lhs = new.reduce(phi(x))
        diff = (lhs - new.torus.scalar(old.vertex_relations[0].scalar))
        if diff.is_zero():
            vertex.append((tet, Scalar.zero()))
            continue
        g, s = diff.only_term()
        vertex.append((tet, s.impose_scaling() if not any(g) else s))
    # (ii) Lagrangian of the top tetrahedron as a left combination of the new ones.
    # p0, p1, p2 are the equator vertices whose apex edges carry v, v', v''.
    u, top = d.top_apex, d.top
    p = {T2.edge_type(top, (u, x)): x for x in d.equator}
    tZ = _tet_with(T3, d.new_tets, {u, p[0], p[2]})
    tX = _tet_with(T3, d.new_tets, {u, p[0], p[1]})
    tY = _tet_with(T3, d.new_tets, {u, p[1], p[2]})
    kind = lambda t, x: T3.edge_type(t, (u, x))
    if (kind(tZ, p[2]) - kind(tZ, p[0])) % 3 != 2:
        raise NotAPachnerPair("unexpected edge types in the new tetrahedra")
    LZ = lagrangian(new, tZ, kind(tZ, p[0]))
    LX = lagrangian(new, tX, kind(tX, p[0]))
    LY = lagrangian(new, tY, (kind(tY, p[2]) + 1) % 3)
    mX = new.gen(tZ, kind(tZ, p[0]), -2) * cb ** -2
    mY = new.gen(tZ, kind(tZ, p[2]), 2) * cb ** 2
    rem = phi(lagrangian(old, top, 0)) - (LZ + mX * LX + mY * LY)
    lag = new.reduce(rem).map_scalars(lambda s: s.impose_scaling())
    # (iii) horizontal biangle at the equator edge p1-p3 of the top face
    pb, pd = p[1], p[0]
    bot = d.bottom
    g = next(x for x in T2.gluings if x.name == d.face)
    m = dict(zip(g.top_face, g.bottom_face))
    v_old = [0] * old.torus.rank
    v_old[old.torus.index(T2.shape_name(top, T2.edge_type(top, (pb, pd))))] += 1
    v_old[old.torus.index(T2.shape_name(bot, T2.edge_type(bot, (m[pb], m[pd]))))] += 1
    lhs = new.reduce(phi(old.torus.monomial(tuple(v_old), cb ** 3)))
    tB = _tet_with(T3, d.new_tets, {u, pb, pd})
    rhs = new.reduce(new.torus.monomial(new.torus.unit(T3.shape_name(tB, T3.edge_type(tB, (pb, pd)))), cb ** 2))
    lhs = lhs.map_scalars(lambda s: s.impose_scaling())
    rhs = rhs.map_scalars(lambda s: s.impose_scaling())
    return PachnerReport(vertex, lag, (lhs, rhs), phi.preserves_forms())


# ---------------------------------------------------- figure-8 example

# The strand K_b crosses faces S and N of the figure-8 complex.  In S it runs
# from the y'' cone to the y cone of Y and then through the biangle into Z;
# in N from the z'' cone to the z cone of Z and then back into Y.
FIGURE8_KB: dict[str, Any] = {
    "suspensions": [
        {"face": "S",
         "left": [{"block": 1, "gen": "beta", "orient": "fwd", "states": ["eps1", "-eps2"]}],
         "right": [{"gen": "a", "orient": "fwd", "states": ["eps2", "eps2"]}]},
        {"face": "N",
         "left": [{"block": 1, "gen": "alpha", "orient": "fwd", "states": ["eps2", "-eps1"]}],
         "right": [{"gen": "c", "orient": "fwd", "states": ["eps1", "eps1"]}]},
    ],
    "states": ["eps1", "eps2"],
    "prefactor": [{"var": "eps2", "half_q_coeff": -1}, {"var": "eps1", "half_q_coeff": -1}],
}


def figure8_presentation() -> SplitPresentation3D:
    return parse_presentation_3d(FIGURE8_KB)


def figure8_golden(sqgm: SQGM) -> dict[tuple[int, int], TorusElem]:
    """Expected per-state values (eps1, eps2) in y'' and z''."""
    A = Scalar.A()
    m = lambda a, b, s: sqgm.monomial({"Y.z''": a, "Z.z''": b}, s)
    return {
        (1, -1): m(1, -1, A),
        (-1, 1): m(-1, 1, A),
        (-1, -1): m(-1, -1, -A * sqgm.cb ** -2),
    }
