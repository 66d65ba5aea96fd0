"""UV-IR map on triangles: gl2 stated arcs to gl1 arcs on the double cover.

The double cover of a triangle is a hexagon whose sides are the two lifts
x, x* of each edge, in the cyclic order (a, b*, c, a*, b, c*).  Its six
corner arcs are

    alpha1: b* -> c   alpha2: b -> c*
    beta1:  c* -> a   beta2:  c -> a*
    gamma1: a* -> b   gamma2: a -> b*

An endpoint of a stated arc lifts to the unstarred copy when its state
agrees with its orientation (+ at the start, - at the end).  The evaluation
map sends the hexagon torus into (triangle torus) x (gl1 triangle torus);
the hexagon commutation forms are pulled back along it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .complex import SLOTS, SurfaceTri, flip, triangle_torus
from .qtorus import MonomialRelation, QuantumTorus, RelationLattice, TorusElem, Vec, tensor
from .scalars import Scalar
from .trace2d import ARC_EDGES, KINDS, arc_weight, flip_even, flip_roles

HEX = ("alpha1", "beta2", "gamma1", "alpha2", "beta1", "gamma2")
GL1 = ("alpha", "beta", "gamma")
# hexagon boundary lifts in cyclic order
LIFTS = ("a", "b*", "c", "a*", "b", "c*")
HEX_ARCS = {
    "alpha1": ("b*", "c"), "alpha2": ("b", "c*"),
    "beta1": ("c*", "a"), "beta2": ("c", "a*"),
    "gamma1": ("a*", "b"), "gamma2": ("a", "b*"),
}


class UVIRError(ValueError):
    pass


class UnresolvedState(UVIRError):
    pass


class OutOfDomain(UVIRError):
    pass


class DegreeMismatch(UVIRError):
    pass


@dataclass(frozen=True)
class CheckRecord:
    name: str
    lhs: str
    rhs: str
    equal: bool
    first_diff: str | None = None

    def as_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs,
                "equal": self.equal, "first_diff": self.first_diff}


def compare(name: str, lhs: TorusElem, rhs: TorusElem) -> CheckRecord:
    diff = lhs - rhs
    first = None
    if not diff.is_zero():
        g, s = diff.items()[0]
        first = f"{s} at {diff.torus.render_vec(g)}"
    return CheckRecord(name, str(lhs), str(rhs), diff.is_zero(), first)


def dump_records(records: Iterable[CheckRecord]) -> str:
    return json.dumps([r.as_dict() for r in records], indent=1, sort_keys=True)


# ------------------------------------------------------------ tori

@lru_cache(maxsize=None)
def gl1_triangle_torus() -> QuantumTorus:
    """alpha beta = (-A) beta alpha and cyclic; the half commutation is (-A)^(1/2)."""
    a, b, c = GL1
    return QuantumTorus.from_pairs(GL1, {(a, b): (1, 1), (b, c): (1, 1), (c, a): (1, 1)})


@lru_cache(maxsize=None)
def ev_target() -> QuantumTorus:
    return tensor([triangle_torus(), gl1_triangle_torus()], ["", ""])


def _ev_vector(h: str) -> Vec:
    """Lattice image of a hexagon generator in (a, b, c, alpha, beta, gamma)."""
    kind, idx = h[:-1], int(h[-1])
    u, v = ARC_EDGES[kind]
    sign = -1 if idx == 1 else 1
    vec = [0] * 6
    vec[SLOTS.index(u)] = sign
    vec[SLOTS.index(v)] = sign
    vec[3 + KINDS.index(kind)] = 1
    return tuple(vec)


def _ct_power(h: str) -> int:
    return -1 if h.endswith("1") else 1


@lru_cache(maxsize=None)
def hexagon_torus() -> QuantumTorus:
    t = ev_target()
    E = [_ev_vector(h) for h in HEX]
    n = len(HEX)
    M = [[t.form(E[i], E[j]) for j in range(n)] for i in range(n)]
    S = [[t.sign(E[i], E[j]) for j in range(n)] for i in range(n)]
    return QuantumTorus(HEX, tuple(tuple(Fraction(x) for x in r) for r in M), tuple(tuple(r) for r in S))


def hexagon_central_vector() -> Vec:
    return (1,) * 6


def hexagon_relation() -> MonomialRelation:
    """The Weyl symbol of all six corners equals 1; equivalently the ordered
    product alpha1 beta2 gamma1 alpha2 beta1 gamma2 equals -q^2."""
    return MonomialRelation(hexagon_central_vector(), Scalar.one(), "central", "hexagon")


@lru_cache(maxsize=None)
def gl1_triangle_section() -> RelationLattice:
    t = ev_target()
    rel = MonomialRelation((0, 0, 0, 1, 1, 1), Scalar.one(), "central", "[alpha beta gamma]")
    return RelationLattice(t, [rel])


def hex_flux(h: str) -> Vec:
    """Flux of a hexagon generator on the six lifts: -1 where it starts, +1 where it ends."""
    s, e = HEX_ARCS[h]
    v = [0] * 6
    v[LIFTS.index(s)] -= 1
    v[LIFTS.index(e)] += 1
    return tuple(v)


def polygon_form(n: Sequence[int], m: Sequence[int]) -> int:
    """gl1 pairing of zero-sum fluxes on the sides of a polygon in ccw order."""
    k = len(n)
    return sum(n[i] * m[j] - n[j] * m[i] for i in range(k) for j in range(i + 1, k))


def polygon_torus(sides: Sequence[str]) -> QuantumTorus:
    """gl1(-A) web algebra of a polygon: basis = zero-sum fluxes on its sides.

    Coordinates are the fluxes on all but the last side, which is implied.
    """
    k = len(sides)
    basis = []
    for i in range(k - 1):
        v = [0] * k
        v[i] = 1
        v[-1] = -1
        basis.append(v)
    M = [[Fraction(polygon_form(basis[i], basis[j])) for j in range(k - 1)] for i in range(k - 1)]
    S = [[polygon_form(basis[i], basis[j]) for j in range(k - 1)] for i in range(k - 1)]
    names = tuple(f"L[{s}]" for s in sides[:-1])
    return QuantumTorus(names, tuple(map(tuple, M)), tuple(map(tuple, S)))


# ------------------------------------------------------------ stated words

@dataclass(frozen=True)
class Token:
    kind: str
    orient: str
    states: tuple  # states at the first and second edge of the arc

    def __post_init__(self):
        if self.kind not in KINDS or self.orient not in ("fwd", "bwd"):
            raise UVIRError(f"bad token {self}")

    @property
    def resolved(self) -> bool:
        return all(s in (1, -1) for s in self.states)

    def endpoints(self) -> list[tuple[str, int, int]]:
        """(edge, state, o) with o = +1 at the start, -1 at the end."""
        u, v = ARC_EDGES[self.kind]
        m, n = self.states
        if self.orient == "fwd":
            return [(u, m, 1), (v, n, -1)]
        return [(u, m, -1), (v, n, 1)]


@dataclass(frozen=True)
class StatedWord:
    """Corner arcs of one triangle, earliest token on top."""

    tokens: tuple[Token, ...] = ()

    def __mul__(self, other: "StatedWord") -> "StatedWord":
        return StatedWord(self.tokens + other.tokens)

    def check(self) -> None:
        for t in self.tokens:
            if not t.resolved:
                raise UnresolvedState(f"unresolved state in {t}")


def word(*specs: tuple[str, str, int, int]) -> StatedWord:
    return StatedWord(tuple(Token(k, o, (m, n)) for k, o, m, n in specs))


def _lift_differs(p: tuple[str, int, int], q: tuple[str, int, int]) -> bool:
    return p[1] * p[2] != q[1] * q[2]


def b_pair(upper: Token, lower: Token) -> Fraction:
    """Contribution of the same-edge boundary points of two arcs, ``upper`` on top."""
    tot = Fraction(0)
    for p in upper.endpoints():
        for q in lower.endpoints():
            if p[0] == q[0] and _lift_differs(p, q):
                tot += Fraction(p[2] * q[1], 2)
    return tot


def b_of(w: StatedWord) -> Fraction:
    """b(w) as a half-integer reduced into [0, 2)."""
    w.check()
    tot = Fraction(0)
    for i, s in enumerate(w.tokens):
        for t in w.tokens[i + 1:]:
            tot += b_pair(s, t)
    return tot % 2


def b_cross(w1: StatedWord, w2: StatedWord) -> Fraction:
    """b(w1, w2) = b(w1 w2) - b(w1) - b(w2), unreduced."""
    w1.check()
    w2.check()
    return sum((b_pair(s, t) for s in w1.tokens for t in w2.tokens), Fraction(0))


def sign_of(b: Fraction) -> Scalar:
    """(-1)^b for a half-integer b, with (-1)^(1/2) = zeta."""
    k = b * 2
    if k.denominator != 1:
        raise UVIRError(f"b must be a half-integer, got {b}")
    return Scalar.zeta(int(k) % 4)


def twisted_mul(w1: StatedWord, w2: StatedWord) -> tuple[StatedWord, Scalar]:
    return w1 * w2, sign_of(-b_cross(w1, w2))


@dataclass(frozen=True)
class PiImage:
    sl2: tuple[tuple[str, tuple[int, int]], ...]
    gl1: tuple[tuple[str, str], ...]
    sign: Scalar


def pi_map(w: StatedWord) -> PiImage:
    w.check()
    return PiImage(tuple((t.kind, t.states) for t in w.tokens),
                   tuple((t.kind, t.orient) for t in w.tokens), sign_of(b_of(w)))


def gl1_arc(kind: str, orient: str) -> TorusElem:
    t = gl1_triangle_torus()
    return t.gen(kind, 1 if orient == "fwd" else -1)


def tr_pi(w: StatedWord, ct: Scalar | int = 1, coeff: Scalar | int = 1) -> TorusElem:
    """(Tr x id)(pi(w)) in the evaluation target, reduced by [alpha beta gamma] = 1."""
    img = pi_map(w)
    t = ev_target()
    acc = t.scalar(img.sign * Scalar._coerce(coeff))
    for (kind, st), (_, orient) in zip(img.sl2, img.gl1):
        tr = arc_weight(kind, st, ct)
        if tr.is_zero():
            return t.zero()
        acc = acc * _tensor2(tr, gl1_arc(kind, orient))
    return gl1_triangle_section().reduce(acc)


def _tensor2(x: TorusElem, y: TorusElem) -> TorusElem:
    t = ev_target()
    d = {}
    for g, s in x.terms.items():
        for h, r in y.terms.items():
            d[tuple(g) + tuple(h)] = s * r
    return TorusElem(t, d)


# ------------------------------------------------------------ F and ev

_NEXT = {"alpha": "beta", "beta": "gamma", "gamma": "alpha"}


def _hex_images(kind: str) -> dict[tuple[str, tuple[int, int]], list[tuple[str, int]]]:
    """Ordered hexagon factors for each non-bad stated arc of one kind."""
    k1, k2 = _NEXT[kind], _NEXT[_NEXT[kind]]
    return {
        ("fwd", (-1, -1)): [(kind + "1", 1)],
        ("fwd", (1, 1)): [(kind + "2", 1)],
        ("fwd", (-1, 1)): [(k1 + "1", -1), (k2 + "2", -1)],
        ("bwd", (1, 1)): [(kind + "1", -1)],
        ("bwd", (-1, -1)): [(kind + "2", -1)],
        ("bwd", (-1, 1)): [(k1 + "2", 1), (k2 + "1", 1)],
    }


def f_token(t: Token) -> TorusElem:
    h = hexagon_torus()
    if not t.resolved:
        raise UnresolvedState(str(t))
    if t.states == (1, -1):
        return h.zero()
    factors = _hex_images(t.kind)[(t.orient, t.states)]
    vecs = [tuple(x if n == name else 0 for n in HEX) for name, x in factors]
    out = h.ordered_product(vecs)
    if len(factors) == 2:
        # the detour through the third corner costs q^(-1/2)
        out = out * Scalar.q(Fraction(-1, 2))
    return out


def f_triangle(w: StatedWord) -> TorusElem:
    w.check()
    h = hexagon_torus()
    acc = h.scalar(sign_of(b_of(w)))
    for t in w.tokens:
        acc = acc * f_token(t)
    return acc


def ev_triangle(x: TorusElem, ct: Scalar | int = 1) -> TorusElem:
    h = hexagon_torus()
    if x.torus is not h and x.torus != h:
        raise UVIRError("ev_triangle expects a hexagon element")
    ct = Scalar._coerce(ct)
    t = ev_target()
    E = [_ev_vector(n) for n in HEX]
    d: dict[Vec, Scalar] = {}
    for g, s in x.terms.items():
        img = tuple(sum(g[i] * E[i][r] for i in range(6)) for r in range(6))
        p = sum(g[i] * _ct_power(HEX[i]) for i in range(6))
        val = s * ct ** p
        d[img] = d[img] + val if img in d else val
    return gl1_triangle_section().reduce(TorusElem(t, d))


def triangle_generators() -> list[tuple[str, StatedWord]]:
    out = []
    for kind in KINDS:
        for orient in ("fwd", "bwd"):
            for st in ((1, 1), (-1, -1), (-1, 1), (1, -1)):
                out.append((f"{kind}.{orient}{_st(st)}", word((kind, orient, *st))))
    return out


def _st(st: tuple[int, int]) -> str:
    return "".join("+" if s == 1 else "-" for s in st)


def compat_triangle(w: StatedWord, ct: Scalar | int = 1, name: str = "") -> CheckRecord:
    return compare(name or "triangle", ev_triangle(f_triangle(w), ct), tr_pi(w, ct))


def central_check(ct: Scalar | int = 1) -> CheckRecord:
    """ev of q^-2 alpha1 beta2 gamma1 alpha2 beta1 gamma2 (ordered) is -1."""
    h = hexagon_torus()
    prod = h.ordered_product([h.unit(n) for n in HEX]) * Scalar.q(-2)
    return compare("hexagon central product", ev_triangle(prod, ct), ev_target().scalar(-1))


# ------------------------------------------------------------ surfaces

def compat_check_2d(tau: SurfaceTri, p, ct: Scalar | int = 1) -> list[CheckRecord]:
    """Per triangle and per state, then glued totals, for a split presentation."""
    from .trace2d import assignments

    p.validate(tau)
    tris = [t for t, _ in tau.triangles]
    out: list[CheckRecord] = []
    lhs_tot = None
    rhs_tot = None
    for asg in assignments(p.variables):
        pre = p.coefficient
        for var, c in p.prefactor.items():
            pre = pre * Scalar.q(c * asg[var] / 2)
        lhs_parts, rhs_parts = [], []
        for tid in tris:
            toks = [t.resolve(asg) for t in p.tokens if t.triangle == tid]
            w = StatedWord(tuple(Token(t.kind, t.orient, t.states) for t in toks))
            lhs = ev_triangle(f_triangle(w), ct)
            rhs = tr_pi(w, ct)
            out.append(compare(f"{tid} {asg}", lhs, rhs))
            lhs_parts.append(lhs)
            rhs_parts.append(rhs)
        gl, gr = glue(tau, lhs_parts) * pre, glue(tau, rhs_parts) * pre
        lhs_tot = gl if lhs_tot is None else lhs_tot + gl
        rhs_tot = gr if rhs_tot is None else rhs_tot + gr
    if lhs_tot is not None and rhs_tot is not None:
        out.append(compare("glued total", lhs_tot, rhs_tot))
    return out


def surface_target(tau: SurfaceTri) -> QuantumTorus:
    """SQTS of the surface tensor the gl1 flux torus of its triangles."""
    blocks = [tau.sqts_torus(allow_boundary=True)] + [gl1_triangle_torus() for _ in tau.triangles]
    return tensor(blocks, ["", *[t for t, _ in tau.triangles]])


def glue(tau: SurfaceTri, parts: Sequence[TorusElem]) -> TorusElem:
    """Combine per-triangle evaluations: bare edges collapse to edges and the
    gl1 fluxes must match across every interior edge."""
    target = surface_target(tau)
    acc = {(): Scalar.one()}
    for part in parts:
        nxt = {}
        for g0, s0 in acc.items():
            for g, s in part.terms.items():
                nxt[g0 + tuple(g)] = s0 * s
        acc = nxt
    d: dict[Vec, Scalar] = {}
    for g, s in acc.items():
        bare = []
        gl = []
        for i in range(len(parts)):
            bare += list(g[6 * i:6 * i + 3])
            gl += list(g[6 * i + 3:6 * i + 6])
        _check_flux(tau, gl)
        key = tau.edge_vector_from_bare(bare) + tuple(gl)
        d[key] = d[key] + s if key in d else s
    return TorusElem(target, d)


def _flux(g: Sequence[int]) -> list[int]:
    """Flux of a gl1 triangle monomial on the edges (a, b, c)."""
    out = [0, 0, 0]
    for kind, x in zip(KINDS, g):
        u, v = ARC_EDGES[kind]
        out[SLOTS.index(u)] -= x
        out[SLOTS.index(v)] += x
    return out


def _check_flux(tau: SurfaceTri, gl: Sequence[int]) -> None:
    tot: dict[str, int] = {}
    for i, (_, es) in enumerate(tau.triangles):
        f = _flux(gl[3 * i:3 * i + 3])
        for e, x in zip(es, f):
            tot[e] = tot.get(e, 0) + x
    for e in tau.interior_edges:
        if tot.get(e, 0):
            raise DegreeMismatch(f"gl1 flux does not match across edge {e}")


# ------------------------------------------------- flip quadrilateral

@dataclass
class QuadCover:
    """Double cover of a flip quadrilateral, seen through one triangulation.

    Elements live in hexagon(T1) x hexagon(T2); corner and longitude
    generators are products of hexagon arcs along paths of lifts.
    """

    tau: SurfaceTri
    diagonal: str
    sides: list[str] = field(default_factory=list)
    torus: QuantumTorus = field(init=False)

    def __post_init__(self):
        if len(self.tau.triangles) != 2:
            raise OutOfDomain("the double cover is built for a two-triangle quadrilateral")
        self.torus = tensor([hexagon_torus(), hexagon_torus()], [t for t, _ in self.tau.triangles])
        # boundary edges counterclockwise, by default starting after the diagonal in T1
        (_, es1), (_, es2) = self.tau.triangles
        i = es1.index(self.diagonal)
        j = es2.index(self.diagonal)
        ccw = [es1[(i + 1) % 3], es1[(i + 2) % 3], es2[(j + 1) % 3], es2[(j + 2) % 3]]
        if not self.sides:
            self.sides = ccw
        elif not any(self.sides == ccw[k:] + ccw[:k] for k in range(4)):
            raise OutOfDomain(f"sides {self.sides} are not the boundary in cyclic order")

    def _block(self, tri: str) -> int:
        return [t for t, _ in self.tau.triangles].index(tri)

    def _arc(self, tri: str, start: str, end: str) -> Vec:
        """Hexagon vector of the arc between two lifts (start is an edge lift
        name like 'y' or 'y*') inside triangle ``tri``."""
        es = self.tau.triangle(tri)
        s_edge, s_star = start.rstrip("*"), start.endswith("*")
        e_edge, e_star = end.rstrip("*"), end.endswith("*")
        if s_star == e_star:
            raise OutOfDomain("same-sheet arcs are not hexagon generators")
        i, j = es.index(s_edge), es.index(e_edge)
        lift = lambda slot, star: SLOTS[slot] + ("*" if star else "")
        a, b = lift(i, s_star), lift(j, e_star)
        for h, (u, v) in HEX_ARCS.items():
            if (u, v) == (a, b):
                return self._place(tri, h, 1)
            if (u, v) == (b, a):
                return self._place(tri, h, -1)
        raise OutOfDomain(f"no corner arc from {start} to {end}")

    def _place(self, tri: str, h: str, x: int) -> Vec:
        v = [0] * 12
        v[6 * self._block(tri) + HEX.index(h)] = x
        return tuple(v)

    def path(self, legs: Sequence[tuple[str, str, str]]) -> TorusElem:
        """Product of arcs (tri, start lift, end lift) along a path."""
        return self.torus.ordered_product([self._arc(*leg) for leg in legs])

    def corner(self, side: str, sheet: int) -> TorusElem:
        """Corner arc from ``side`` to the next side counterclockwise.

        Sheet 2 starts on the unstarred lift, sheet 1 on the starred one.
        """
        star = sheet == 1
        tri = next(t for t, es in self.tau.triangles if side in es and side != self.diagonal)
        legs = []
        cur_edge, cur_star = side, star
        for _ in range(3):
            es = self.tau.triangle(tri)
            nxt = es[(es.index(cur_edge) + 1) % 3]
            legs.append((tri, cur_edge + ("*" if cur_star else ""), nxt + ("" if cur_star else "*")))
            if nxt != self.diagonal:
                return self.path(legs)
            # continue on the other side of the diagonal, on the matching lift
            tri = next(t for t, es2 in self.tau.triangles if t != tri and self.diagonal in es2)
            cur_edge = nxt
        raise OutOfDomain("corner walk did not close")

    def corners(self) -> dict[str, TorusElem]:
        return {f"{s}>{k}": self.corner(s, k) for s in self.sides for k in (1, 2)}

    def ev(self, x: TorusElem, ct: Scalar | int = 1) -> TorusElem:
        """Evaluate both hexagons and glue into SQTS x gl1(polygon)."""
        sides = self.sides
        sq = self.tau.sqts_torus(allow_boundary=True)
        poly = polygon_torus(sides)
        target = tensor([sq, poly], ["", ""])
        h = hexagon_torus()
        d: dict[Vec, Scalar] = {}
        for g, s in x.terms.items():
            parts = [ev_triangle(h.monomial(g[6 * i:6 * i + 6]), ct) for i in range(2)]
            glued = glue(self.tau, parts)
            for gg, ss in glued.terms.items():
                edge_part = gg[:sq.rank]
                flux: dict[str, int] = {}
                for i, (_, es) in enumerate(self.tau.triangles):
                    f = _flux(gg[sq.rank + 3 * i:sq.rank + 3 * i + 3])
                    for e, val in zip(es, f):
                        flux[e] = flux.get(e, 0) + val
                key = tuple(edge_part) + tuple(flux.get(e, 0) for e in sides[:-1])
                val = ss * s
                d[key] = d[key] + val if key in d else val
        return TorusElem(target, d)


def longitude(cover: QuadCover) -> TorusElem:
    """Sheet-1 arc from the side w to the side z across the diagonal."""
    r = flip_roles(cover.tau, cover.diagonal)
    t1 = next(t for t, es in cover.tau.triangles if r["y"] in es)
    t2 = next(t for t, es in cover.tau.triangles if r["w"] in es)
    x = r["x"]
    return cover.path([(t2, r["w"], x + "*"), (t1, x, r["z"] + "*")])


def psi_flip(cover: QuadCover, name: str, new_name: str | None = None) -> tuple[QuadCover, TorusElem]:
    """psi on a generator of the quadrilateral cover: corners go to the same
    corners of the flipped cover, the longitude to a straight and a detour term."""
    tau2 = flip(cover.tau, cover.diagonal, new_name)
    new = new_name or cover.diagonal + "'"
    c2 = QuadCover(tau2, new, list(cover.sides))
    if name == "longitude":
        r = flip_roles(cover.tau, cover.diagonal)
        t1 = next(t for t, es in tau2.triangles if r["y"] in es and r["w"] in es)
        t2 = next(t for t, es in tau2.triangles if r["z"] in es and r["v"] in es)
        straight = c2.path([(t1, r["w"], new + "*"), (t2, new, r["z"] + "*")])
        detour = _detour(c2, t1, t2, r, new)
        return c2, straight + detour
    sides = cover.sides
    side, _, k = name.partition(">")
    if side not in sides or k not in ("1", "2"):
        raise OutOfDomain(f"unknown generator {name}")
    return c2, c2.corner(side, int(k))


def _detour(c2: QuadCover, t1: str, t2: str, r: dict[str, str], new: str) -> TorusElem:
    """Both-unstarred arc w -> x' in T1' followed by the (-,+) arc x'* -> z* in T2'."""
    def token_for(tri: str, start: str, end: str, st_start: int, st_end: int) -> Token:
        es = c2.tau.triangle(tri)
        i, j = es.index(start), es.index(end)
        for kind, (u, v) in ARC_EDGES.items():
            if (SLOTS[i], SLOTS[j]) == (u, v):
                return Token(kind, "fwd", (st_start, st_end))
            if (SLOTS[j], SLOTS[i]) == (u, v):
                return Token(kind, "bwd", (st_end, st_start))
        raise OutOfDomain("no corner arc")

    tok1 = token_for(t1, r["w"], new, 1, -1)
    tok2 = token_for(t2, new, r["z"], -1, 1)
    f1, f2 = f_token(tok1), f_token(tok2)
    out = c2.torus.zero()
    b1, b2 = c2._block(t1), c2._block(t2)
    for g1, s1 in f1.terms.items():
        for g2, s2 in f2.terms.items():
            v = [0] * 12
            v[6 * b1:6 * b1 + 6] = g1
            v[6 * b2:6 * b2 + 6] = g2
            out = out + c2.torus.monomial(tuple(v), s1 * s2)
    return out


def theta_tensor_id(cover: QuadCover, x: TorusElem, new_name: str | None = None) -> TorusElem:
    """Apply the flip transition to the SQTS factor of an evaluated element."""
    sq = cover.tau.sqts_torus(allow_boundary=True)
    tau2 = flip(cover.tau, cover.diagonal, new_name)
    sq2 = tau2.sqts_torus(allow_boundary=True)
    poly = polygon_torus(cover.sides)
    target = tensor([sq2, poly], ["", ""])
    out = target.zero()
    for g, s in x.terms.items():
        img = flip_even(cover.tau, cover.diagonal, sq.monomial(g[:sq.rank]), new_name)
        for h, r in img.terms.items():
            out = out + target.monomial(tuple(h) + tuple(g[sq.rank:]), r * s)
    return out


def naturality_check_2d(tau: SurfaceTri, e: str, ct: Scalar | int = 1) -> list[CheckRecord]:
    cover = QuadCover(tau, e)
    records = []
    gens = dict(cover.corners())
    gens["longitude"] = longitude(cover)
    for name, g in gens.items():
        c2, img = psi_flip(cover, name)
        lhs = c2.ev(img, ct)
        rhs = theta_tensor_id(cover, cover.ev(g, ct))
        records.append(compare(f"psi/theta square on {name}", lhs, _align(rhs, lhs.torus)))
    return records


def _align(x: TorusElem, target: QuantumTorus) -> TorusElem:
    from .qtorus import transport
    return transport(x, target)
