"""The 2d quantum trace on triangulated surfaces.

A corner arc of a triangle with edges (a, b, c) is named by the vertex it
cuts off: alpha runs between b and c, beta between c and a, gamma between a
and b.  A stated arc carries the states at its first and second edge in that
counterclockwise order, whatever its orientation.  Local weights live in the
triangle torus on the three bare edges; the surface trace multiplies them,
sums over the states of interior endpoints and collapses bare edges to edges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Any, Iterable, Mapping, Sequence

from .complex import SLOTS, SurfaceTri, flip, triangle_torus
from .qtorus import QuantumTorus, TorusElem, Vec, inject, transport
from .scalars import Scalar

KINDS = ("alpha", "beta", "gamma")
# edges (first, second) in counterclockwise order for each corner arc
ARC_EDGES = {"alpha": ("b", "c"), "beta": ("c", "a"), "gamma": ("a", "b")}


class InvalidPresentation(ValueError):
    pass


class FlipError(ValueError):
    pass


class NonLaurentImage(FlipError):
    pass


class NotEven(FlipError):
    pass


class NotInTable(FlipError):
    pass


State = int | str


@dataclass(frozen=True)
class ArcToken:
    triangle: str
    kind: str
    orient: str  # "fwd" runs from the first edge to the second
    states: tuple[State, State]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidPresentation(f"unknown corner arc {self.kind!r}")
        if self.orient not in ("fwd", "bwd"):
            raise InvalidPresentation(f"unknown orientation {self.orient!r}")
        for s in self.states:
            if isinstance(s, int) and s not in (1, -1):
                raise InvalidPresentation(f"state must be +1, -1 or a variable, got {s}")

    def resolve(self, assignment: Mapping[str, int]) -> "ArcToken":
        st = tuple(assignment[s] if isinstance(s, str) else s for s in self.states)
        return ArcToken(self.triangle, self.kind, self.orient, st)  # type: ignore[arg-type]

    @property
    def resolved(self) -> bool:
        return all(isinstance(s, int) for s in self.states)


def arc_weight(kind: str, states: tuple[int, int], ct: Scalar | int = 1) -> TorusElem:
    """Trace of a stated corner arc in the triangle torus on (a, b, c)."""
    t = triangle_torus()
    ct = Scalar._coerce(ct)
    u, v = ARC_EDGES[kind]
    m, n = states
    if (m, n) == (1, 1):
        return t.weyl([t.unit(u), t.unit(v)]) * ct
    if (m, n) == (-1, -1):
        return t.monomial(tuple(-x for x in _sum(t.unit(u), t.unit(v))), ct.inverse())
    if (m, n) == (1, -1):
        return t.zero()
    return _mixed_weight(kind)


def _sum(g: Vec, h: Vec) -> Vec:
    return tuple(a + b for a, b in zip(g, h))


@lru_cache(maxsize=None)
def _mixed_weight(kind: str) -> TorusElem:
    """The (-, +) arc equals the Weyl-normalised product of the two other arcs
    at states (+, +) and (-, -); the trace constants cancel."""
    nxt = KINDS[(KINDS.index(kind) + 1) % 3]
    nnx = KINDS[(KINDS.index(kind) + 2) % 3]
    ct = Scalar.ct()
    prod = arc_weight(nxt, (1, 1), ct) * arc_weight(nnx, (-1, -1), ct)
    g, s = prod.only_term()
    t = prod.torus
    # drop the ordering scalar: keep only the Weyl symbol
    ordering = t.cocycle(_arc_vec(t, nxt, 1), _arc_vec(t, nnx, -1))
    return t.monomial(g, s / ordering)


def _arc_vec(t: QuantumTorus, kind: str, sign: int) -> Vec:
    u, v = ARC_EDGES[kind]
    return tuple(sign * x for x in _sum(t.unit(u), t.unit(v)))


@dataclass
class SplitPresentation2D:
    """Stated corner arcs in height order, with shared interior state variables.

    ``prefactor`` maps a variable to c, contributing q^(c*eps/2); ``coefficient``
    multiplies the whole sum.
    """

    tokens: list[ArcToken]
    prefactor: dict[str, Fraction] = field(default_factory=dict)
    coefficient: Scalar = field(default_factory=Scalar.one)

    @property
    def variables(self) -> list[str]:
        out: list[str] = []
        for tok in self.tokens:
            for s in tok.states:
                if isinstance(s, str) and s not in out:
                    out.append(s)
        return out

    def validate(self, tau: SurfaceTri) -> None:
        ends: dict[str, list[tuple[str, str]]] = {}
        for tok in self.tokens:
            es = tau.triangle(tok.triangle) if tok.triangle in dict(tau.triangles) else None
            if es is None:
                raise InvalidPresentation(f"unknown triangle {tok.triangle}")
            for slot, s in zip(ARC_EDGES[tok.kind], tok.states):
                edge = es[SLOTS.index(slot)]
                if isinstance(s, str):
                    ends.setdefault(s, []).append((tok.triangle, slot))
                elif edge in tau.interior_edges:
                    raise InvalidPresentation(f"fixed state on interior edge {edge}")
        for var, pts in ends.items():
            if len(pts) != 2:
                raise InvalidPresentation(f"state variable {var} used {len(pts)} times")
            (t1, s1), (t2, s2) = pts
            e1 = tau.triangle(t1)[SLOTS.index(s1)]
            e2 = tau.triangle(t2)[SLOTS.index(s2)]
            if e1 != e2 or (t1, s1) == (t2, s2):
                raise InvalidPresentation(f"variable {var} does not pair the two sides of one edge")
        for var in self.prefactor:
            if var not in ends:
                raise InvalidPresentation(f"prefactor on unknown variable {var}")


def parse_presentation_2d(doc: Mapping[str, Any]) -> SplitPresentation2D:
    try:
        toks = [ArcToken(str(t["triangle"]), str(t["gen"]), str(t.get("orient", "fwd")),
                         tuple(_state(s) for s in t["states"]))  # type: ignore[arg-type]
                for t in doc["tokens"]]
        pre = {str(p["var"]): Fraction(p["half_q_coeff"]) for p in doc.get("prefactor", [])}
        coeff = Scalar.parse(str(doc["coefficient"])) if "coefficient" in doc else Scalar.one()
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidPresentation(f"bad presentation: {exc}") from exc
    return SplitPresentation2D(toks, pre, coeff)


def _state(s: Any) -> State:
    if isinstance(s, str) and s in ("+", "-", "+1", "-1"):
        return 1 if s.startswith("+") else -1
    if isinstance(s, int):
        return s
    return str(s)


def assignments(variables: Sequence[str], order: Sequence[str] | None = None) -> Iterable[dict[str, int]]:
    """All +-1 assignments, enumerated lexicographically in ``order``."""
    order = list(order or variables)
    for vals in product((1, -1), repeat=len(order)):
        yield dict(zip(order, vals))


def trace_surface(tau: SurfaceTri, p: SplitPresentation2D, ct: Scalar | int = 1,
                  order: Sequence[str] | None = None) -> TorusElem:
    p.validate(tau)
    bare = tau.bare_torus()
    target = tau.sqts_torus(allow_boundary=True)
    offsets = {t: 3 * i for i, (t, _) in enumerate(tau.triangles)}
    total = target.zero()
    for asg in assignments(p.variables, order):
        pre = p.coefficient
        for var, c in p.prefactor.items():
            pre = pre * Scalar.q(c * asg[var] / 2)
        acc = bare.scalar(pre)
        for tok in p.tokens:
            r = tok.resolve(asg)
            w = arc_weight(r.kind, r.states, ct)  # type: ignore[arg-type]
            if w.is_zero():
                acc = bare.zero()
                break
            acc = acc * inject(w, bare, offsets[tok.triangle])
        if acc.is_zero():
            continue
        total = total + collapse(tau, acc, target)
    return total


def collapse(tau: SurfaceTri, e: TorusElem, target: QuantumTorus | None = None) -> TorusElem:
    """Push a balanced bare-edge element to the edge torus."""
    target = target or tau.sqts_torus(allow_boundary=True)
    d: dict[Vec, Scalar] = {}
    for g, s in e.terms.items():
        h = tau.edge_vector_from_bare(g)
        d[h] = d[h] + s if h in d else s
    return TorusElem(target, d)


# ------------------------------------------------------------- flips

# keys: exponents of (y, z, x, v, w).  Values: (weyl, terms) where terms is a
# list of (coefficient, factors over (y, z, x', v, w)); a bracketed image is a
# Weyl symbol, otherwise the factors are multiplied in the listed order.
# None marks images with a denominator.
_Image = tuple[bool, list[tuple[int, list[tuple[str, int]]]]]
_FLIP_TABLE: dict[tuple[int, ...], _Image | None] = {
    (1, 1, 0, 0, 0): (True, [(1, [("y", 1), ("x'", 1), ("z", 1)])]),
    (-1, 1, 0, 0, 0): (False, [(1, [("y", -1), ("x'", 1), ("z", 1)]), (1, [("y", -1), ("x'", -1), ("z", 1)])]),
    (1, 0, 1, 0, 1): (True, [(1, [("w", 1), ("y", 1)])]),
    (1, 0, -1, 0, 1): (True, [(1, [("w", 1), ("x'", 2), ("y", 1)])]),
    (1, 0, 1, 0, -1): None,
    (1, 0, -1, 0, -1): None,
    (1, 0, 1, 1, 0): None,
    (1, 0, -1, 1, 0): None,
    (-1, 0, 1, 1, 0): (True, [(1, [("y", -1), ("x'", -1), ("v", 1)])]),
    (-1, 0, -1, 1, 0): (True, [(1, [("y", -1), ("x'", 1), ("v", 1)])]),
    (0, 1, 1, 0, 1): (False, [(1, [("w", 1), ("x'", 1), ("z", 1)]), (1, [("w", 1), ("x'", -1), ("z", 1)])]),
    (0, 1, -1, 0, 1): (False, [(1, [("w", 1), ("x'", 3), ("z", 1)]), (1, [("w", 1), ("x'", 1), ("z", 1)])]),
    (0, 1, 1, 0, -1): (True, [(1, [("w", -1), ("x'", -1), ("z", 1)])]),
    (0, 1, -1, 0, -1): (True, [(1, [("w", -1), ("x'", 1), ("z", 1)])]),
}
_ROTATE = {"y": "v", "v": "y", "z": "w", "w": "z", "x": "x", "x'": "x'"}
_ROLES = ("y", "z", "x", "v", "w")


def _rotated_key(k: tuple[int, ...]) -> tuple[int, ...]:
    y, z, x, v, w = k
    return (v, w, x, y, z)


def flip_table() -> dict[tuple[int, ...], _Image | None]:
    """The even-part table with its 180 degree rotations."""
    out = dict(_FLIP_TABLE)
    for k, img in _FLIP_TABLE.items():
        rk = _rotated_key(k)
        if rk in out:
            continue
        if img is None:
            out[rk] = None
        else:
            out[rk] = (img[0], [(c, [(_ROTATE[n], e) for n, e in fs]) for c, fs in img[1]])
    return out


def flip_roles(tau: SurfaceTri, e: str) -> dict[str, str]:
    """Names playing y, z, x, v, w for the flip of ``e``."""
    slots = tau.slots_of(e)
    if len(slots) != 2:
        raise FlipError(f"edge {e} is not interior")
    (t1, i1), (t2, i2) = slots
    a = tau.triangle(t1)
    b = tau.triangle(t2)
    roles = {"x": e, "y": a[(i1 + 1) % 3], "z": a[(i1 + 2) % 3],
             "v": b[(i2 + 1) % 3], "w": b[(i2 + 2) % 3]}
    if len(set(roles.values())) != 5:
        raise FlipError("the flip quadrilateral has identified sides")
    return roles


def is_even(tau: SurfaceTri, g: Sequence[int]) -> bool:
    es = tau.edges
    return all(sum(g[es.index(x)] for x in tri) % 2 == 0 for _, tri in tau.triangles)


def flip_even(tau: SurfaceTri, e: str, m: TorusElem, new_name: str | None = None) -> TorusElem:
    """Transition map on even monomials whose image has no denominator."""
    tau2 = flip(tau, e, new_name)
    new = new_name or e + "'"
    src = tau.sqts_torus(allow_boundary=True)
    dst = tau2.sqts_torus(allow_boundary=True)
    roles = flip_roles(tau, e)
    table = flip_table()
    out = dst.zero()
    for g, s in m.terms.items():
        if not is_even(tau, g):
            raise NotEven(src.render_vec(g))
        key = tuple(g[src.index(roles[r])] for r in _ROLES)
        rest = [0] * len(g)
        for name, x in zip(src.names, g):
            if name not in roles.values():
                rest[src.index(name)] = x
        quad = [a - b for a, b in zip(g, rest)]
        # [quad + rest] = A^(-<quad,rest>/2) [quad][rest]
        split = src.cocycle(quad, rest).inverse()
        rest2 = [0] * dst.rank
        for i, x in enumerate(rest):
            if x:
                rest2[dst.index(src.names[i])] = x
        if any(key):
            quad_img = _table_image(table, key, roles, new, dst, src.render_vec(g))
        else:
            quad_img = dst.one()
        out = out + quad_img * dst.monomial(tuple(rest2)) * (s * split)
    return out


def _table_image(table, key, roles, new, dst: QuantumTorus, shown: str) -> TorusElem:
    inverse = False
    if key not in table:
        # the map is multiplicative, so inverses of monomial images are determined
        neg = tuple(-k for k in key)
        img = table.get(neg)
        if img is None or len(img[1]) != 1:
            if neg in table and table[neg] is None:
                raise NonLaurentImage(shown)
            raise NotInTable(shown)
        key, inverse = neg, True
    img = table[key]
    if img is None:
        raise NonLaurentImage(shown)
    weyl, terms = img
    out = dst.zero()
    for c, factors in terms:
        vecs = []
        for n, x in factors:
            name = new if n == "x'" else roles[n]
            vecs.append(tuple(x if i == dst.index(name) else 0 for i in range(dst.rank)))
        mono = dst.weyl(vecs) if weyl else dst.ordered_product(vecs)
        out = out + mono * c
    return out.inverse() if inverse else out


def flip_round_trips(tau: SurfaceTri, e: str, new_name: str | None = None) -> list[tuple[str, bool]]:
    """Flip each Laurent table monomial across e and back; True when it returns unchanged."""
    new = new_name or e + "'"
    src = tau.sqts_torus(allow_boundary=True)
    roles = flip_roles(tau, e)
    tau2 = flip(tau, e, new)
    out = []
    for key in flip_table():
        g = [0] * src.rank
        for r, x in zip(_ROLES, key):
            g[src.index(roles[r])] += x
        m = src.monomial(tuple(g))
        try:
            back = transport(flip_even(tau2, new, flip_even(tau, e, m, new), e), src)
        except FlipError:
            # outside the Laurent domain one way or the other
            continue
        out.append((src.render_vec(g), back == m))
    return out
