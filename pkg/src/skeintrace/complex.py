"""Combinatorial ideal triangulations of surfaces and 3-manifolds.

Surfaces: triangles carry edge names in counterclockwise order; an edge name
used twice is an interior edge.  The square-root Teichmuller torus (SQTS) has
one generator per edge with form computed by counting angular sectors.

3-manifolds: tetrahedra carry four local vertex labels in positively
oriented order.  Edge types follow the vertex positions: {01, 23} -> z,
{02, 13} -> z', {03, 12} -> z''.  Faces are glued by explicit vertex
bijections.  Every face of a tetrahedron is cut into a face cone whose
boundary consists of three bare edge cones; two face cones over a glued face
form a face suspension.  A bare edge cone is written (face, side, edge), and
the two bare cones of a tetrahedron at the same edge form its edge cone.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Iterable, Mapping, Sequence

from .qtorus import QuantumTorus, Vec, tensor
from .scalars import AngleExpr, AngleSymbol

SLOTS = ("a", "b", "c")
TYPE_NAMES = ("z", "z'", "z''")


class ComplexError(ValueError):
    pass


class Malformed(ComplexError):
    pass


class OrientationClash(ComplexError):
    pass


class HasBoundary(ComplexError):
    pass


class BoundaryEdge(ComplexError):
    pass


class SelfGlued(ComplexError):
    pass


class SelfAdjacentFace(ComplexError):
    pass


class UnknownId(ComplexError):
    pass


def triangle_torus(names: Sequence[str] = SLOTS) -> QuantumTorus:
    """Three bare edges in counterclockwise order with <a,b>=<b,c>=<c,a>=-1."""
    a, b, c = names
    return QuantumTorus.from_pairs(names, {(a, b): (-1, 0), (b, c): (-1, 0), (c, a): (-1, 0)})


# ----------------------------------------------------------------- surfaces

@dataclass(frozen=True)
class SurfaceTri:
    triangles: tuple[tuple[str, tuple[str, str, str]], ...]

    def __post_init__(self):
        ids = [t for t, _ in self.triangles]
        if len(set(ids)) != len(ids):
            raise Malformed("duplicate triangle id")
        counts: dict[str, int] = {}
        for _, edges in self.triangles:
            if len(edges) != 3:
                raise Malformed("a triangle needs exactly three edges")
            for e in edges:
                counts[e] = counts.get(e, 0) + 1
        over = [e for e, n in counts.items() if n > 2]
        if over:
            raise Malformed(f"edges used more than twice: {sorted(over)}")

    @property
    def edges(self) -> list[str]:
        seen: list[str] = []
        for _, es in self.triangles:
            for e in es:
                if e not in seen:
                    seen.append(e)
        return seen

    def slots_of(self, e: str) -> list[tuple[str, int]]:
        return [(t, i) for t, es in self.triangles for i, x in enumerate(es) if x == e]

    @property
    def boundary_edges(self) -> list[str]:
        return [e for e in self.edges if len(self.slots_of(e)) == 1]

    @property
    def interior_edges(self) -> list[str]:
        return [e for e in self.edges if len(self.slots_of(e)) == 2]

    def triangle(self, tid: str) -> tuple[str, str, str]:
        for t, es in self.triangles:
            if t == tid:
                return es
        raise UnknownId(tid)

    # bare edges: one per (triangle, slot)
    @property
    def bare_names(self) -> list[str]:
        return [f"{t}.{SLOTS[i]}" for t, _ in self.triangles for i in range(3)]

    def bare_torus(self) -> QuantumTorus:
        return tensor([triangle_torus() for _ in self.triangles], [t for t, _ in self.triangles])

    def sector_count(self, e: str, f: str) -> int:
        """Corners where f is immediately followed by e going counterclockwise."""
        n = 0
        for _, es in self.triangles:
            for i in range(3):
                if es[i] == f and es[(i + 1) % 3] == e:
                    n += 1
        return n

    def sqts_torus(self, allow_boundary: bool = False) -> QuantumTorus:
        if self.boundary_edges and not allow_boundary:
            raise HasBoundary(f"boundary edges {self.boundary_edges}")
        es = self.edges
        pairs = {}
        for i, e in enumerate(es):
            for f in es[i + 1:]:
                v = self.sector_count(e, f) - self.sector_count(f, e)
                if v:
                    pairs[(e, f)] = (v, 0)
        return QuantumTorus.from_pairs(es, pairs)

    def bare_to_edge_matrix(self) -> list[list[int]]:
        """Rows: edges; columns: bare edges; entry 1 where the bare edge lies on the edge."""
        es = self.edges
        bare = [(t, i) for t, _ in self.triangles for i in range(3)]
        return [[1 if self.triangle(t)[i] == e else 0 for (t, i) in bare] for e in es]

    def edge_vector_from_bare(self, g: Sequence[int]) -> Vec:
        """Collapse a balanced bare-edge vector to SQTS coordinates."""
        out = []
        bare = [(t, i) for t, _ in self.triangles for i in range(3)]
        for e in self.edges:
            vals = {g[k] for k, (t, i) in enumerate(bare) if self.triangle(t)[i] == e}
            if len(vals) != 1:
                raise ComplexError(f"bare exponents disagree across edge {e}: {sorted(vals)}")
            out.append(vals.pop())
        return tuple(out)

    def to_spec(self) -> dict:
        return {"triangles": [{"id": t, "edges": list(es)} for t, es in self.triangles]}


def build_surface(spec: Mapping[str, Any]) -> SurfaceTri:
    try:
        tris = []
        for t in spec["triangles"]:
            edges = tuple(str(e) for e in t["edges"])
            tris.append((str(t["id"]), edges))
            verts = t.get("vertices")
            if verts is not None and len(verts) != 3:
                raise Malformed("vertices must list three labels")
    except (KeyError, TypeError) as exc:
        raise Malformed(f"bad surface spec: {exc}") from exc
    if not tris:
        raise Malformed("no triangles")
    tri = SurfaceTri(tuple(tris))
    # optional vertex labels pin down the gluing orientation
    ends: dict[str, list[tuple[str, str]]] = {}
    for t in spec["triangles"]:
        verts = t.get("vertices")
        if verts is None:
            continue
        for i, e in enumerate(t["edges"]):
            ends.setdefault(str(e), []).append((str(verts[i]), str(verts[(i + 1) % 3])))
    for e, pair in ends.items():
        if len(pair) == 2 and pair[0] != pair[1][::-1]:
            raise OrientationClash(f"edge {e} is glued preserving orientation")
    return tri


def flip(tau: SurfaceTri, e: str, new_name: str | None = None) -> SurfaceTri:
    slots = tau.slots_of(e)
    if len(slots) == 0:
        raise UnknownId(e)
    if len(slots) == 1:
        raise BoundaryEdge(e)
    (t1, i1), (t2, i2) = slots
    if t1 == t2:
        raise SelfGlued(e)
    new = new_name or e + "'"
    if new in tau.edges:
        raise Malformed(f"edge name {new} already in use")
    r1 = _rotate(tau.triangle(t1), i1)
    r2 = _rotate(tau.triangle(t2), i2)
    _, s1, s2 = r1
    _, s3, s4 = r2
    tris = []
    for t, es in tau.triangles:
        if t == t1:
            tris.append((t1, (new, s4, s1)))
        elif t == t2:
            tris.append((t2, (new, s2, s3)))
        else:
            tris.append((t, es))
    return SurfaceTri(tuple(tris))


def _rotate(es: tuple[str, str, str], i: int) -> tuple[str, str, str]:
    return (es[i], es[(i + 1) % 3], es[(i + 2) % 3])


FLIP_QUAD = {"triangles": [{"id": "T1", "edges": ["y", "z", "x"]},
                           {"id": "T2", "edges": ["x", "v", "w"]}]}

PUNCTURED_TORUS = {"triangles": [{"id": "T1", "edges": ["a", "b", "c"]},
                                 {"id": "T2", "edges": ["a", "b", "c"]}]}


# ----------------------------------------------------------- 3-manifolds

def edge_type(order: Sequence[str], u: str, v: str) -> int:
    i, j = sorted((order.index(u), order.index(v)))
    return {(0, 1): 0, (2, 3): 0, (0, 2): 1, (1, 3): 1, (0, 3): 2, (1, 2): 2}[(i, j)]


def boundary_cycle(order: Sequence[str], omitted: str) -> tuple[str, str, str]:
    """Boundary-induced vertex cycle of the face missing ``omitted``."""
    m = order.index(omitted)
    rest = [v for v in order if v != omitted]
    if m % 2 == 1:
        rest = [rest[0], rest[2], rest[1]]
    return tuple(rest)  # type: ignore[return-value]


def _same_cycle(a: Sequence[str], b: Sequence[str]) -> bool:
    b = tuple(b)
    return any(tuple(a) == b[i:] + b[:i] for i in range(3))


def _perm_parity(p: Sequence[int]) -> int:
    p = list(p)
    par = 0
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                par ^= 1
    return par


@dataclass(frozen=True)
class Gluing:
    name: str
    top: str
    top_face: tuple[str, str, str]
    bottom: str
    bottom_face: tuple[str, str, str]


@dataclass(frozen=True)
class BareCone:
    face: str
    side: str  # tetrahedron id
    edge: frozenset  # local vertex labels of that tetrahedron


@dataclass(frozen=True)
class FaceSuspension:
    """Two face cones over one face (or one, on the boundary).

    ``blocks`` lists (tet, (e0, e1, e2)) with edges given as vertex pairs of
    that tet in counterclockwise order for its triangle algebra.  Edge slot
    names a, b, c refer to the top block's order; the bottom block uses the
    reversed cycle (a, c, b).
    """

    name: str
    blocks: tuple[tuple[str, tuple[frozenset, frozenset, frozenset]], ...]

    @property
    def top(self) -> str:
        return self.blocks[0][0]

    @property
    def bottom(self) -> str | None:
        return self.blocks[1][0] if len(self.blocks) > 1 else None

    def slot_edge(self, block: int, slot: str) -> frozenset:
        """Tet edge carrying slot a/b/c in the given block."""
        tet, es = self.blocks[block]
        if block == 0:
            return es[SLOTS.index(slot)]
        # bottom cycle is (a, c, b)
        return es[{"a": 0, "c": 1, "b": 2}[slot]]

    def ccw_slots(self, block: int) -> tuple[str, str, str]:
        return ("a", "b", "c") if block == 0 else ("a", "c", "b")

    def bare_names(self) -> list[str]:
        return [f"{self.name}.{s}{k + 1}" for k in range(len(self.blocks)) for s in self.ccw_slots(k)]


@dataclass
class AngleStructure:
    values: dict[str, tuple[AngleExpr, AngleExpr, AngleExpr]]

    @staticmethod
    def symbolic(tets: Iterable[str]) -> "AngleStructure":
        return AngleStructure({t: tuple(AngleExpr.sym(AngleSymbol.of(t, k)) for k in range(3))  # type: ignore[misc]
                               for t in tets})

    def angle(self, tet: str, kind: int) -> AngleExpr:
        return self.values[tet][kind]

    def tet_sums(self) -> dict[str, AngleExpr]:
        return {t: (v[0] + v[1] + v[2]).eliminated() for t, v in self.values.items()}


@dataclass
class Mfld3Tri:
    tets: dict[str, tuple[str, str, str, str]]
    gluings: list[Gluing]
    angles: AngleStructure | None = None
    # derived
    edge_classes: list[list[tuple[str, frozenset]]] = field(init=False)
    suspensions: list[FaceSuspension] = field(init=False)

    def __post_init__(self):
        for t, vs in self.tets.items():
            if len(vs) != 4 or len(set(vs)) != 4:
                raise Malformed(f"tetrahedron {t} needs four distinct vertex labels")
        used: set[tuple[str, frozenset]] = set()
        for g in self.gluings:
            for tet, face in ((g.top, g.top_face), (g.bottom, g.bottom_face)):
                if tet not in self.tets:
                    raise UnknownId(tet)
                if len(set(face)) != 3 or not set(face) <= set(self.tets[tet]):
                    raise Malformed(f"bad face {face} of {tet}")
                key = (tet, frozenset(face))
                if key in used:
                    raise Malformed(f"face {sorted(face)} of {tet} glued twice")
                used.add(key)
            if g.top == g.bottom and set(g.top_face) == set(g.bottom_face):
                raise Malformed("a face cannot be glued to itself")
            if not self._orientation_ok(g):
                raise OrientationClash(f"gluing {g.name} preserves orientation")
        self._glued = used
        self.edge_classes = self._edge_classes()
        self.suspensions = self._suspensions()
        if self.angles is None:
            self.angles = AngleStructure.symbolic(self.tets)

    # -- structure
    def _orientation_ok(self, g: Gluing) -> bool:
        o1, o2 = self.tets[g.top], self.tets[g.bottom]
        m1 = next(v for v in o1 if v not in g.top_face)
        m2 = next(v for v in o2 if v not in g.bottom_face)
        images = dict(zip(g.top_face, g.bottom_face))
        images[m1] = m2
        perm = [o2.index(images[v]) for v in o1]
        return _perm_parity(perm) == 1

    def vertex_map(self, g: Gluing) -> dict[str, str]:
        return dict(zip(g.top_face, g.bottom_face))

    def _edge_classes(self) -> list[list[tuple[str, frozenset]]]:
        parent: dict[tuple[str, frozenset], tuple[str, frozenset]] = {}
        cones = [(t, frozenset(p)) for t, vs in self.tets.items() for p in combinations(vs, 2)]
        for c in cones:
            parent[c] = c

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.gluings:
            m = self.vertex_map(g)
            for u, v in combinations(g.top_face, 2):
                a = find((g.top, frozenset((u, v))))
                b = find((g.bottom, frozenset((m[u], m[v]))))
                if a != b:
                    parent[max(a, b, key=_cone_key)] = min(a, b, key=_cone_key)
        groups: dict[tuple[str, frozenset], list[tuple[str, frozenset]]] = {}
        for c in cones:
            groups.setdefault(find(c), []).append(c)
        out = [sorted(g, key=_cone_key) for g in groups.values()]
        return sorted(out, key=lambda g: _cone_key(g[0]))

    def faces(self) -> list[tuple[str, frozenset]]:
        return [(t, frozenset(f)) for t, vs in self.tets.items() for f in combinations(vs, 3)]

    def boundary_faces(self) -> list[tuple[str, frozenset]]:
        return [f for f in self.faces() if f not in self._glued]

    @property
    def is_closed(self) -> bool:
        return not self.boundary_faces()

    def class_is_interior(self, cls: Sequence[tuple[str, frozenset]]) -> bool:
        bfaces = self.boundary_faces()
        return not any(t == bt and e <= bf for (t, e) in cls for (bt, bf) in bfaces)

    @property
    def interior_edge_classes(self) -> list[list[tuple[str, frozenset]]]:
        return [c for c in self.edge_classes if self.class_is_interior(c)]

    def edge_class_of(self, tet: str, edge: Iterable[str]) -> int:
        key = (tet, frozenset(edge))
        for i, c in enumerate(self.edge_classes):
            if key in c:
                return i
        raise UnknownId(f"{tet}:{sorted(edge)}")

    def edge_type(self, tet: str, edge: Iterable[str]) -> int:
        u, v = sorted(edge)
        return edge_type(self.tets[tet], u, v)

    def _block(self, tet: str, face: Sequence[str], start: Sequence[str] | None = None):
        omitted = next(v for v in self.tets[tet] if v not in face)
        cyc = list(boundary_cycle(self.tets[tet], omitted))
        if start is not None:
            # rotate so that the top face's first vertex leads
            while cyc[0] != start[0]:
                cyc = cyc[1:] + cyc[:1]
        es = tuple(frozenset((cyc[i], cyc[(i + 1) % 3])) for i in range(3))
        return cyc, es

    def _suspensions(self) -> list[FaceSuspension]:
        out = []
        for g in self.gluings:
            cyc, es_top = self._block(g.top, g.top_face, g.top_face)
            m = self.vertex_map(g)
            # the bottom block lists the same edges in the cycle (a, c, b)
            a, b, c = es_top
            img = lambda e: frozenset(m[v] for v in e)
            es_bot = (img(a), img(c), img(b))
            out.append(FaceSuspension(g.name, ((g.top, es_top), (g.bottom, es_bot))))
        for k, (t, f) in enumerate(self.boundary_faces()):
            face = sorted(f)
            _, es = self._block(t, face, None)
            out.append(FaceSuspension(f"{t}.{''.join(face)}", ((t, es),)))
        return out

    def suspension(self, name: str) -> FaceSuspension:
        for s in self.suspensions:
            if s.name == name:
                return s
        raise UnknownId(name)

    # -- bare cones and lattices
    def bare_cones(self) -> list[BareCone]:
        out = []
        for s in self.suspensions:
            for k, (t, _) in enumerate(s.blocks):
                for slot in s.ccw_slots(k):
                    out.append(BareCone(s.name, t, s.slot_edge(k, slot)))
        return out

    def bare_index(self) -> dict[BareCone, int]:
        return {b: i for i, b in enumerate(self.bare_cones())}

    def sf_torus(self, name: str) -> QuantumTorus:
        s = self.suspension(name)
        return _sf_torus(s)

    def bare_torus(self) -> QuantumTorus:
        return tensor([_sf_torus(s) for s in self.suspensions], ["" for _ in self.suspensions])

    def shape_torus(self) -> QuantumTorus:
        names, pairs = [], {}
        for t in self.tets:
            z, z1, z2 = (f"{t}.{n}" for n in TYPE_NAMES)
            names += [z, z1, z2]
            pairs[(z, z1)] = (-1, 0)
            pairs[(z1, z2)] = (-1, 0)
            pairs[(z2, z)] = (-1, 0)
        return QuantumTorus.from_pairs(names, pairs)

    def shape_name(self, tet: str, kind: int) -> str:
        return f"{tet}.{TYPE_NAMES[kind]}"

    def shape_vector(self, tet: str, edge: Iterable[str]) -> Vec:
        """Bare-lattice vector of an edge cone: the sum of its two bare cones."""
        e = frozenset(edge)
        if (tet, e) not in {(t, f) for c in self.edge_classes for (t, f) in c}:
            raise UnknownId(f"{tet}:{sorted(e)}")
        idx = self.bare_index()
        v = [0] * len(idx)
        for b, i in idx.items():
            if b.side == tet and b.edge == e:
                v[i] += 1
        return tuple(v)

    def shape_generator_vector(self, tet: str, edge: Iterable[str]) -> Vec:
        """Shape-lattice vector of an edge cone (opposite cones coincide)."""
        t = self.shape_torus()
        return t.unit(self.shape_name(tet, self.edge_type(tet, edge)))

    def bare_to_shape(self, g: Sequence[int]) -> Vec:
        """Split a bare vector into edge cones and map each to its shape generator."""
        idx = self.bare_index()
        per_cone: dict[tuple[str, frozenset], set[int]] = {}
        for b, i in idx.items():
            per_cone.setdefault((b.side, b.edge), set()).add(g[i])
        st = self.shape_torus()
        out = [0] * st.rank
        for (t, e), vals in per_cone.items():
            if len(vals) != 1:
                raise ComplexError(f"bare exponents on edge cone {t}:{sorted(e)} disagree: {sorted(vals)}")
            out[st.index(self.shape_name(t, self.edge_type(t, e)))] += vals.pop()
        return tuple(out)

    def bare_to_shape_matrix(self) -> list[list[int]]:
        """Half-weight-free lattice map used on balanced vectors: one bare cone per edge cone."""
        idx = self.bare_index()
        st = self.shape_torus()
        rows = [[0] * len(idx) for _ in range(st.rank)]
        chosen: set[tuple[str, frozenset]] = set()
        for b, i in sorted(idx.items(), key=lambda kv: kv[1]):
            key = (b.side, b.edge)
            if key in chosen:
                continue
            chosen.add(key)
            rows[st.index(self.shape_name(b.side, self.edge_type(b.side, b.edge)))][i] = 1
        return rows

    def gluing_vector(self, cls: Sequence[tuple[str, frozenset]]) -> Vec:
        st = self.shape_torus()
        v = [0] * st.rank
        for t, e in cls:
            v[st.index(self.shape_name(t, self.edge_type(t, e)))] += 1
        return tuple(v)

    def vertex_vector(self, tet: str) -> Vec:
        st = self.shape_torus()
        v = [0] * st.rank
        for k in range(3):
            v[st.index(self.shape_name(tet, k))] = 1
        return tuple(v)

    # -- angles
    def edge_angle(self, tet: str, edge: Iterable[str]) -> AngleExpr:
        assert self.angles is not None
        return self.angles.angle(tet, self.edge_type(tet, edge))

    def edge_angle_sums(self) -> list[AngleExpr]:
        """2*pi minus the angle sum, one per interior edge class."""
        out = []
        for cls in self.interior_edge_classes:
            tot = AngleExpr.const(-2)
            for t, e in cls:
                tot = tot + self.edge_angle(t, e)
            out.append(tot.eliminated())
        return out

    def angle_constraints_hold(self) -> bool:
        assert self.angles is not None
        for t, s in self.angles.tet_sums().items():
            if s != AngleExpr.const(1):
                return False
        return all(not e.parts and e.pi_coeff == 0 for e in self.edge_angle_sums())

    def to_spec(self) -> dict:
        return {
            "tetrahedra": [{"id": t, "vertices": list(vs)} for t, vs in self.tets.items()],
            "gluings": [{"name": g.name, "face": [g.top, *g.top_face], "to": [g.bottom, *g.bottom_face]}
                        for g in self.gluings],
        }


def _cone_key(c: tuple[str, frozenset]) -> tuple[str, tuple[str, ...]]:
    return (c[0], tuple(sorted(c[1])))


def _sf_torus(s: FaceSuspension) -> QuantumTorus:
    blocks = []
    for k in range(len(s.blocks)):
        names = [f"{s.name}.{x}{k + 1}" for x in s.ccw_slots(k)]
        blocks.append(triangle_torus(names))
    return tensor(blocks, ["" for _ in blocks])


def _parse_angle(text: Any, tet: str, kind: int) -> AngleExpr:
    if text is None:
        return AngleExpr.sym(AngleSymbol.of(tet, kind))
    s = str(text).replace(" ", "")
    if s.endswith("*pi") or s == "pi":
        coeff = s[:-3] if s.endswith("*pi") else "1"
        return AngleExpr.const(Fraction(coeff))
    try:
        return AngleExpr.const(Fraction(s))
    except ValueError:
        pass
    return AngleExpr.sym(AngleSymbol.parse(s) if "." in s else AngleSymbol.free(s))


def build_mfld3(spec: Mapping[str, Any]) -> Mfld3Tri:
    try:
        tets = {str(t["id"]): tuple(str(v) for v in t["vertices"]) for t in spec["tetrahedra"]}
        gls = []
        for k, g in enumerate(spec.get("gluings", [])):
            top, *tf = g["face"]
            bot, *bf = g["to"]
            if len(tf) != 3 or len(bf) != 3:
                raise Malformed("a face is given by a tetrahedron and three vertices")
            gls.append(Gluing(str(g.get("name", f"f{k}")), str(top), tuple(map(str, tf)),
                              str(bot), tuple(map(str, bf))))
    except (KeyError, TypeError, ValueError) as exc:
        raise Malformed(f"bad 3-manifold spec: {exc}") from exc
    angles = None
    if "angles" in spec:
        vals = {}
        for t in tets:
            a = spec["angles"].get(t, {})
            vals[t] = tuple(_parse_angle(a.get(k), t, i) for i, k in enumerate(("theta", "theta1", "theta2")))
        angles = AngleStructure(vals)
    return Mfld3Tri(tets, gls, angles)


# ------------------------------------------------------------- 2-3 move

@dataclass(frozen=True)
class PachnerData:
    """Bookkeeping of a 2-3 move: apexes, equator and the new tetrahedra."""

    face: str
    top: str
    bottom: str
    top_apex: str
    bottom_apex: str
    equator: tuple[str, str, str]  # top-tet labels
    new_tets: tuple[str, str, str]  # new tet for equator edge (p2p3, p3p1, p1p2)
    zeta: AngleExpr


def pachner_2_3(T: Mfld3Tri, face: str, zeta: AngleExpr | None = None,
                names: Sequence[str] | None = None) -> tuple[Mfld3Tri, PachnerData]:
    g = next((x for x in T.gluings if x.name == face), None)
    if g is None:
        raise UnknownId(face)
    if g.top == g.bottom:
        raise SelfAdjacentFace(face)
    top, bot = g.top, g.bottom
    ot, ob = T.tets[top], T.tets[bot]
    u = next(v for v in ot if v not in g.top_face)
    d_old = next(v for v in ob if v not in g.bottom_face)
    d = d_old if d_old not in ot else next(f"{d_old}{k}" for k in range(1, 99) if f"{d_old}{k}" not in ot)
    to_top = {w: v for v, w in zip(g.top_face, g.bottom_face)}
    to_top[d_old] = d
    eq = tuple(v for v in ot if v != u)
    p = {1: eq[0], 2: eq[1], 3: eq[2]}
    names = list(names or [f"{face}{k}" for k in (1, 2, 3)])
    for n in names:
        if n in T.tets and n not in (top, bot):
            raise ComplexError(f"tetrahedron name {n} already used")
    # new tet k contains the equator edge opposite p_k
    new_order: dict[str, tuple[str, ...]] = {}
    for k, (i, j) in zip((1, 2, 3), ((2, 3), (3, 1), (1, 2))):
        pi, pj = p[i], p[j]
        want = boundary_cycle(ot, p[k])
        cand = (u, d, pi, pj)
        got = boundary_cycle(cand, d)
        if not _same_cycle(got, want):
            cand = (u, d, pj, pi)
        new_order[names[k - 1]] = cand
    tets = {t: vs for t, vs in T.tets.items() if t not in (top, bot)}
    tets.update(new_order)

    def locate(tet: str, face_vs: Sequence[str]) -> tuple[str, tuple[str, ...]]:
        """Where an old outer face of the bipyramid now lives."""
        if tet == top:
            opp = next(v for v in eq if v not in face_vs)
            return names[[p[1], p[2], p[3]].index(opp)], tuple(face_vs)
        if tet == bot:
            vs = tuple(to_top[w] for w in face_vs)
            opp = next(v for v in eq if v not in vs)
            return names[[p[1], p[2], p[3]].index(opp)], vs
        return tet, tuple(face_vs)

    gls = []
    for x in T.gluings:
        if x.name == face:
            continue
        t1, f1 = locate(x.top, x.top_face)
        t2, f2 = locate(x.bottom, x.bottom_face)
        gls.append(Gluing(x.name, t1, f1, t2, f2))
    # new tets k and k+1 meet along the triangle (u, d, p_(k+2))
    for k in (1, 2, 3):
        a, b = names[k - 1], names[k % 3]
        shared = (u, d, p[(k + 1) % 3 + 1])
        gls.append(Gluing(f"{face}:{a}{b}", a, shared, b, shared))
    # equator angles: theta_i at top edge u p_i, eta_i at bottom edge d p_i
    ang = T.angles
    assert ang is not None
    th = {i: T.edge_angle(top, (u, p[i])) for i in (1, 2, 3)}
    inv = {v: w for w, v in to_top.items()}
    et = {i: T.edge_angle(bot, (d_old, inv[p[i]])) for i in (1, 2, 3)}
    z = zeta if zeta is not None else AngleExpr.sym(AngleSymbol.free("zeta"))
    # angles at (u p_i) and (u p_j) in the new tet on equator edge p_i p_j
    up = {
        (3, 1): z, (3, 2): th[1] + th[2] - et[3] - z,
        (1, 2): et[3] - th[1] + z, (1, 3): et[2] - z,
        (2, 3): th[3] - et[2] + z, (2, 1): th[1] - z,
    }
    vals = dict(ang.values)
    vals.pop(top)
    vals.pop(bot)
    for k in (1, 2, 3):
        t = names[k - 1]
        order = new_order[t]
        trip: list[AngleExpr | None] = [None, None, None]
        i, j = [x for x in (1, 2, 3) if x != k]
        trip[edge_type(order, u, d)] = th[k] + et[k]
        trip[edge_type(order, u, p[i])] = up[(k, i)]
        trip[edge_type(order, u, p[j])] = up[(k, j)]
        vals[t] = tuple(trip)  # type: ignore[assignment]
    new = Mfld3Tri(tets, gls, AngleStructure(vals))
    return new, PachnerData(face, top, bot, u, d, (p[1], p[2], p[3]), tuple(names), z)  # type: ignore[arg-type]


# ------------------------------------------------------- built-in complexes

def bipyramid() -> Mfld3Tri:
    """Two tetrahedra glued along one face; apexes a (top) and e (bottom)."""
    spec = {
        "tetrahedra": [{"id": "V", "vertices": ["a", "d", "b", "c"]},
                       {"id": "W", "vertices": ["e", "d", "c", "b"]}],
        "gluings": [{"name": "F", "face": ["V", "b", "c", "d"], "to": ["W", "b", "c", "d"]}],
    }
    return build_mfld3(spec)


def edge_star(k: int) -> Mfld3Tri:
    """k tetrahedra around one interior edge (u, d), glued cyclically."""
    if k < 2:
        raise Malformed("need at least two tetrahedra around an edge")
    tets = [{"id": f"T{i}", "vertices": ["u", "d", f"p{i}", f"p{(i + 1) % k}"]} for i in range(k)]
    gls = []
    for i in range(k):
        j = (i + 1) % k
        gls.append({"name": f"G{i}", "face": [f"T{i}", "u", "d", f"p{j}"], "to": [f"T{j}", "u", "d", f"p{j}"]})
    T = build_mfld3({"tetrahedra": tets, "gluings": gls})
    return T



# Two tetrahedra Y, Z; every face of Y is glued to a face of Z.  Faces are
# labelled so that N and S meet in a y'' edge of Y and a z'' edge of Z.  The
# search that produced it lives in scripts/find_figure8.py.
FIGURE8: dict[str, Any] = {
    "tetrahedra": [{"id": "Y", "vertices": ["0", "1", "2", "3"]},
                   {"id": "Z", "vertices": ["0", "1", "2", "3"]}],
    "gluings": [
        {"name": "N", "face": ["Z", "1", "3", "0"], "to": ["Y", "0", "2", "3"]},
        {"name": "S", "face": ["Y", "0", "1", "3"], "to": ["Z", "3", "0", "2"]},
        {"name": "E", "face": ["Y", "1", "2", "3"], "to": ["Z", "1", "3", "2"]},
        {"name": "W", "face": ["Y", "0", "1", "2"], "to": ["Z", "1", "0", "2"]},
    ],
}


def figure8() -> Mfld3Tri:
    return build_mfld3(FIGURE8)
