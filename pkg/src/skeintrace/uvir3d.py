"""UV-IR map on face suspensions with angle weights, and its compatibility
with the 3d trace.

The double cover of a face suspension carries a hexagon per triangle block
and a two-generator commuting torus per biangle slot: "+" is the arc from
the unstarred top lift to the starred bottom lift (x y*), "-" the arc x* y.
gl1 webs on the face suspension are recorded by their flux through the six
bare edge cones, each triangle block normalized by its Weyl relation
[alpha beta gamma] = 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .complex import SLOTS, AngleStructure, FaceSuspension, Mfld3Tri, PachnerData, _sf_torus
from .qtorus import MonomialRelation, QuantumTorus, RelationLattice, TorusElem, Vec, tensor
from .scalars import AngleExpr, Scalar, check_scaling
from .trace2d import ARC_EDGES, KINDS, assignments
from .trace3d import (DEFAULT_CB, DEFAULT_CT, SQGM, NotAPachnerPair, SfToken, SplitPresentation3D,
                      biangle_weight, triangle_token_weight)
from .uvir2d import (HEX, CheckRecord, DegreeMismatch, Token, UnresolvedState, UVIRError, _ev_vector,
                     compare, f_token, gl1_triangle_torus, hexagon_torus, sign_of)


class NoAngles(UVIRError):
    pass


# ------------------------------------------------------------------ tori

@lru_cache(maxsize=None)
def bigon_torus() -> QuantumTorus:
    return QuantumTorus.from_pairs(("+", "-"), {})


@lru_cache(maxsize=None)
def _cover_torus_cached(name: str, nblocks: int) -> QuantumTorus:
    parts = [hexagon_torus()] * nblocks + ([bigon_torus()] * 3 if nblocks == 2 else [])
    labels = [f"{name}.{k + 1}" for k in range(nblocks)] + ([f"{name}.{s}" for s in SLOTS] if nblocks == 2 else [])
    return tensor(parts, labels)


def cover_torus(susp: FaceSuspension) -> QuantumTorus:
    return _cover_torus_cached(susp.name, len(susp.blocks))


@lru_cache(maxsize=None)
def _raw_target_cached(name: str, nblocks: int, sf: QuantumTorus) -> QuantumTorus:
    flux = QuantumTorus.from_pairs(tuple(f"{s}" for s in SLOTS), {})
    parts = [sf] + [gl1_triangle_torus()] * nblocks + ([flux] if nblocks == 2 else [])
    labels = [""] + [f"gl1.{name}.{k + 1}" for k in range(nblocks)] + (["gl1." + name] if nblocks == 2 else [])
    return tensor(parts, labels)


def raw_target(susp: FaceSuspension) -> QuantumTorus:
    """Face suspension torus, one gl1 triangle torus per block and a biangle flux count."""
    return _raw_target_cached(susp.name, len(susp.blocks), _sf_torus(susp))


@lru_cache(maxsize=None)
def _flux_target_cached(name: str, sf: QuantumTorus) -> QuantumTorus:
    flux = QuantumTorus.from_pairs(tuple(f"L[{n}]" for n in sf.names), {})
    return tensor([sf, flux], ["", ""])


def flux_target(susp: FaceSuspension) -> QuantumTorus:
    """Face suspension torus tensor gl1 webs, the latter recorded by flux on the bare cones."""
    return _flux_target_cached(susp.name, _sf_torus(susp))


# ------------------------------------------------------------ angles

def _angles(T: Mfld3Tri, angles: AngleStructure | None) -> AngleStructure:
    if angles is None:
        angles = T.angles if T.angles is not None else AngleStructure.symbolic(T.tets)
    missing = sorted(set(T.tets) - set(angles.values))
    if missing:
        raise NoAngles(f"no angles for {', '.join(missing)}")
    return angles


def cone_angle(T: Mfld3Tri, susp: FaceSuspension, block: int, slot: str, angles: AngleStructure) -> AngleExpr:
    tet = susp.blocks[block][0]
    return angles.angle(tet, T.edge_type(tet, susp.slot_edge(block, slot)))


def _token_ends(susp: FaceSuspension, t: SfToken) -> list[tuple[tuple[int, str], int, int]]:
    """((block, slot), state, o) with o = +1 at the start and -1 at the end."""
    if t.is_biangle:
        top, bot = (0, t.gen), (1, t.gen)
        m, n = t.states
        if t.orient == "fwd":
            return [(top, m, 1), (bot, n, -1)]
        return [(bot, n, 1), (top, m, -1)]
    ccw = susp.ccw_slots(t.block)  # type: ignore[arg-type]
    u, v = ARC_EDGES[t.gen]
    cu, cv = (t.block, ccw[SLOTS.index(u)]), (t.block, ccw[SLOTS.index(v)])
    m, n = t.states
    if t.orient == "fwd":
        return [(cu, m, 1), (cv, n, -1)]
    return [(cv, n, 1), (cu, m, -1)]


def b_sf(susp: FaceSuspension, tokens: Sequence[SfToken]) -> Fraction:
    tot = Fraction(0)
    ends = [_token_ends(susp, t) for t in tokens]
    for i in range(len(tokens)):
        for j in range(i + 1, len(tokens)):
            for p in ends[i]:
                for q in ends[j]:
                    if p[0] == q[0] and p[1] * p[2] != q[1] * q[2]:
                        tot += Fraction(p[2] * q[1], 2)
    return tot % 2


def angle_weight(T: Mfld3Tri, susp: FaceSuspension, t: SfToken, angles: AngleStructure) -> Scalar:
    """Angle factor of the UV-IR image of one stated arc (states resolved)."""
    (cs, ms, _), (ce, me, _) = _token_ends(susp, t)
    ts = cone_angle(T, susp, cs[0], cs[1], angles)
    te = cone_angle(T, susp, ce[0], ce[1], angles)
    if t.is_biangle:
        if (ms, me) == (1, 1):
            return Scalar.qangle(ts + te, Fraction(1, 4))
        return Scalar.qangle(ts + te, Fraction(-1, 4))
    if (ms, me) == (1, 1):
        return Scalar.q(Fraction(-1, 2)) * Scalar.qangle(ts + te, Fraction(1, 4))
    if (ms, me) == (-1, -1):
        return Scalar.q(Fraction(1, 2)) * Scalar.qangle(ts + te, Fraction(-1, 4))
    if (ms, me) == (-1, 1):
        return Scalar.qangle(te - ts, Fraction(1, 4))
    return Scalar.qangle(ts - te, Fraction(1, 4))


# ---------------------------------------------------------------- F

def _bigon_image(t: SfToken) -> tuple[int, int] | None:
    """Exponents of (+, -) for a biangle arc, or None if it vanishes."""
    m, n = t.states
    if m != n:
        return None
    if t.orient == "fwd":
        return (1, 0) if m == 1 else (0, 1)
    return (0, -1) if m == 1 else (-1, 0)


def f_sf_token(T: Mfld3Tri, susp: FaceSuspension, t: SfToken, angles: AngleStructure) -> TorusElem:
    C = cover_torus(susp)
    if not all(s in (1, -1) for s in t.states):
        raise UnresolvedState(str(t))
    if t.is_biangle:
        img = _bigon_image(t)
        if img is None:
            return C.zero()
        g = [0] * C.rank
        off = 12 + 2 * SLOTS.index(t.gen)
        g[off], g[off + 1] = img
        return C.monomial(tuple(g), angle_weight(T, susp, t, angles))
    h = f_token(Token(t.gen, t.orient, t.states))
    if h.is_zero():
        return C.zero()
    w = angle_weight(T, susp, t, angles)
    d = {}
    for g, s in h.terms.items():
        v = [0] * C.rank
        v[6 * t.block:6 * t.block + 6] = g  # type: ignore[operator]
        d[tuple(v)] = s * w
    return TorusElem(C, d)


def f_sf(T: Mfld3Tri, susp: FaceSuspension, left: Sequence[SfToken], right: Sequence[SfToken],
         angles: AngleStructure | None = None) -> TorusElem:
    """F(left . [empty] . right) in the double cover torus of the face suspension."""
    angles = _angles(T, angles)
    C = cover_torus(susp)
    toks = list(left) + list(right)
    acc = C.scalar(sign_of(b_sf(susp, toks)))
    for t in toks:
        acc = acc * f_sf_token(T, susp, t, angles)
        if acc.is_zero():
            break
    return acc


# --------------------------------------------------------------- ev

def _hex_angle(T: Mfld3Tri, susp: FaceSuspension, block: int, h: str, angles: AngleStructure) -> Scalar:
    kind, idx = h[:-1], h[-1]
    ccw = susp.ccw_slots(block)
    u, v = ARC_EDGES[kind]
    s = cone_angle(T, susp, block, ccw[SLOTS.index(u)], angles) + \
        cone_angle(T, susp, block, ccw[SLOTS.index(v)], angles)
    return Scalar.qangle(s, Fraction(-1, 4) if idx == "2" else Fraction(1, 4))


def ev_sf(T: Mfld3Tri, susp: FaceSuspension, x: TorusElem, ct: Scalar = DEFAULT_CT, cb: Scalar = DEFAULT_CB,
          angles: AngleStructure | None = None) -> TorusElem:
    """Evaluation into face suspension torus tensor gl1 flux webs."""
    check_scaling(ct, cb)
    angles = _angles(T, angles)
    R = raw_target(susp)
    nb = len(susp.blocks)
    qct = Scalar.q(Fraction(1, 2)) * ct
    hexw = [[_hex_angle(T, susp, k, h, angles) for h in HEX] for k in range(nb)]
    E = [_ev_vector(h) for h in HEX]
    out = R.zero()
    for g, s in x.terms.items():
        acc = R.scalar(s)
        for k in range(nb):
            gk = g[6 * k:6 * k + 6]
            if not any(gk):
                continue
            img = [sum(gk[i] * E[i][r] for i in range(6)) for r in range(6)]
            v = [0] * R.rank
            v[3 * k:3 * k + 3] = img[:3]
            v[3 * nb + 3 * k:3 * nb + 3 * k + 3] = img[3:]
            sc = Scalar.one()
            for i, e in enumerate(gk):
                if e:
                    sc = sc * (qct ** (-e if HEX[i].endswith("1") else e)) * hexw[k][i] ** e
            acc = acc * R.monomial(tuple(v), sc)
        if nb == 2:
            v = [0] * R.rank
            sc = Scalar.one()
            for j, slot in enumerate(SLOTS):
                plus, minus = g[12 + 2 * j], g[13 + 2 * j]
                n = plus - minus
                if not n:
                    continue
                top = susp.ccw_slots(0).index(slot)
                bot = 3 + susp.ccw_slots(1).index(slot)
                v[top] += n
                v[bot] += n
                v[6 * nb + j] += plus + minus
                th = cone_angle(T, susp, 0, slot, angles) + cone_angle(T, susp, 1, slot, angles)
                sc = sc * (cb * Scalar.qangle(th, Fraction(-1, 4))) ** plus \
                    * (cb.inverse() * Scalar.qangle(th, Fraction(1, 4))) ** minus
            acc = acc * R.monomial(tuple(v), sc)
        out = out + acc
    return normalize_webs(susp, out)


def tr_pi_sf(T: Mfld3Tri, susp: FaceSuspension, left: Sequence[SfToken], right: Sequence[SfToken],
             ct: Scalar = DEFAULT_CT, cb: Scalar = DEFAULT_CB) -> TorusElem:
    """(Tr x id)(pi(w)): face suspension trace of each arc tensor its gl1 arc."""
    check_scaling(ct, cb)
    R = raw_target(susp)
    nb = len(susp.blocks)
    sf = _sf_torus(susp)
    toks = list(left) + list(right)
    acc = R.scalar(sign_of(b_sf(susp, toks)))
    for t in toks:
        if t.is_biangle:
            tr = biangle_weight(sf, t.gen, t.states, cb)
            gl = [0] * (R.rank - sf.rank)
            gl[3 * nb + SLOTS.index(t.gen)] = 1 if t.orient == "fwd" else -1
        else:
            tr = triangle_token_weight(sf, t.block, t.gen, t.states, ct)  # type: ignore[arg-type]
            gl = [0] * (R.rank - sf.rank)
            gl[3 * t.block + KINDS.index(t.gen)] = 1 if t.orient == "fwd" else -1  # type: ignore[operator]
        if tr.is_zero():
            return flux_target(susp).zero()
        acc = acc * TorusElem(R, {tuple(g) + tuple(gl): s for g, s in tr.terms.items()})
    return normalize_webs(susp, acc)


@lru_cache(maxsize=None)
def _web_section(R: QuantumTorus, nb: int) -> RelationLattice:
    rels, elim = [], []
    for k in range(nb):
        v = [0] * R.rank
        base = 3 * nb + 3 * k
        v[base:base + 3] = [1, 1, 1]
        rels.append(MonomialRelation(tuple(v), Scalar.one(), "central", f"[alpha beta gamma] block {k + 1}"))
        elim.append(base + 2)
    return RelationLattice(R, rels, elim)


def normalize_webs(susp: FaceSuspension, x: TorusElem) -> TorusElem:
    """Reduce each gl1 triangle block by its Weyl relation and record webs by flux."""
    R = raw_target(susp)
    nb = len(susp.blocks)
    F = flux_target(susp)
    red = _web_section(R, nb).reduce(x)
    d: dict[Vec, Scalar] = {}
    for g, s in red.terms.items():
        sfv = list(g[:3 * nb])
        flux = [0] * (3 * nb)
        for k in range(nb):
            na, nbeta, ng = g[3 * nb + 3 * k:3 * nb + 3 * k + 3]
            for kind, n in zip(KINDS, (na, nbeta, ng)):
                u, v = ARC_EDGES[kind]
                flux[3 * k + SLOTS.index(u)] -= n
                flux[3 * k + SLOTS.index(v)] += n
        if nb == 2:
            for j, slot in enumerate(SLOTS):
                n = g[6 * nb + j]
                flux[susp.ccw_slots(0).index(slot)] -= n
                flux[3 + susp.ccw_slots(1).index(slot)] += n
        key = tuple(sfv + flux)
        d[key] = d[key] + s if key in d else s
    return TorusElem(F, d)


# --------------------------------------------------------------- gluing

@dataclass(frozen=True)
class GluedWeb:
    """A web in the glued module, by its flux through each bare cone."""

    flux: tuple[tuple[str, tuple[int, ...]], ...]

    def is_empty(self) -> bool:
        return all(not any(v) for _, v in self.flux)


def gl1_glue(T: Mfld3Tri, parts: Mapping[str, Sequence[int]]) -> GluedWeb:
    """Glue face suspension webs; the fluxes into each edge cone must cancel."""
    idx = T.bare_index()
    per_cone: dict[tuple[str, frozenset], int] = {}
    offsets: dict[str, int] = {}
    off = 0
    for s in T.suspensions:
        offsets[s.name] = off
        off += 3 * len(s.blocks)
    for b, i in idx.items():
        if b.face in parts:
            n = parts[b.face][i - offsets[b.face]]
            per_cone[(b.side, b.edge)] = per_cone.get((b.side, b.edge), 0) + n
    bad = {k: n for k, n in per_cone.items() if n}
    if bad:
        (t, e), n = next(iter(bad.items()))
        raise DegreeMismatch(f"edge cone {t}:{sorted(e)} has total flux {n}")
    flux = tuple(sorted((f, tuple(v)) for f, v in parts.items() if any(v)))
    return GluedWeb(flux)


WebSum = dict  # GluedWeb -> TorusElem in the SQGM torus


def _glue_state(T: Mfld3Tri, sqgm: SQGM, faces: Sequence[str], parts: Sequence[TorusElem],
                prefactor: Scalar) -> WebSum:
    """Tensor per-face elements, project to shape parameters and sort by glued web."""
    bare = T.bare_torus()
    offs = {}
    off = 0
    for s in T.suspensions:
        offs[s.name] = off
        off += 3 * len(s.blocks)
    combos: list[tuple[list[int], dict[str, tuple[int, ...]], Scalar]] = [([0] * bare.rank, {}, prefactor)]
    for face, x in zip(faces, parts):
        n = 3 * len(T.suspension(face).blocks)
        new = []
        for g, s in x.terms.items():
            for v, fl, c in combos:
                v2 = list(v)
                v2[offs[face]:offs[face] + n] = g[:n]
                fl2 = dict(fl)
                fl2[face] = tuple(g[n:])
                new.append((v2, fl2, c * s))
        combos = new
    out: WebSum = {}
    for v, fl, c in combos:
        web = gl1_glue(T, fl)
        val = sqgm.reduce(sqgm.torus.monomial(T.bare_to_shape(v), c))
        out[web] = out[web] + val if web in out else val
    return {w: e for w, e in out.items() if not e.is_zero()}


def _add(a: WebSum, b: WebSum) -> WebSum:
    out = dict(a)
    for w, e in b.items():
        out[w] = out[w] + e if w in out else e
    return {w: e for w, e in out.items() if not e.is_zero()}


def _angle_free(e: TorusElem) -> bool:
    return all(s.is_angle_free() for s in e.terms.values())


@dataclass
class Compat3D:
    records: list[CheckRecord] = field(default_factory=list)
    lhs: WebSum = field(default_factory=dict)
    rhs: WebSum = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.equal for r in self.records)


def compat_check_3d(T: Mfld3Tri, p: SplitPresentation3D, ct: Scalar = DEFAULT_CT, cb: Scalar = DEFAULT_CB,
                    angles: AngleStructure | None = None, order: Sequence[str] | None = None) -> Compat3D:
    """ev o F against (Tr x id) o pi, per state and face suspension, then glued."""
    p.validate(T)
    check_scaling(ct, cb)
    angles = _angles(T, angles)
    sqgm = SQGM(T, ct, cb)
    rep = Compat3D()
    faces = [w.face for w in p.words]
    for asg in assignments(p.variables, order):
        lparts, rparts = [], []
        for w in p.words:
            susp = T.suspension(w.face)
            left = [t.resolve(asg) for t in w.left]
            right = [t.resolve(asg) for t in w.right]
            lhs = ev_sf(T, susp, f_sf(T, susp, left, right, angles), ct, cb, angles)
            rhs = tr_pi_sf(T, susp, left, right, ct, cb)
            rec = compare(f"{w.face} {dict(asg)}", lhs, rhs)
            if not _angle_free(lhs):
                rec = CheckRecord(rec.name + " (angle dependence left over)", rec.lhs, rec.rhs, False, rec.first_diff)
            rep.records.append(rec)
            lparts.append(lhs)
            rparts.append(rhs)
        if any(x.is_zero() for x in rparts) and any(x.is_zero() for x in lparts):
            continue
        pre = p.prefactor_at(asg)
        rep.lhs = _add(rep.lhs, _glue_state(T, sqgm, faces, lparts, pre))
        rep.rhs = _add(rep.rhs, _glue_state(T, sqgm, faces, rparts, pre))
    keys = sorted(set(rep.lhs) | set(rep.rhs), key=repr)
    for k in keys:
        z = sqgm.torus.zero()
        rep.records.append(compare(f"glued total {_web_label(k)}", rep.lhs.get(k, z), rep.rhs.get(k, z)))
    return rep


def _web_label(w: GluedWeb) -> str:
    return "; ".join(f"{f}:{list(v)}" for f, v in w.flux) or "empty"


def reference_web(T: Mfld3Tri, p: SplitPresentation3D) -> tuple[GluedWeb, Scalar]:
    """The glued gl1 web of the presentation's own strands and its normalizing scalar."""
    parts, scal = {}, Scalar.one()
    for w in p.words:
        susp = T.suspension(w.face)
        R = raw_target(susp)
        nb = len(susp.blocks)
        sf = _sf_torus(susp)
        acc = R.one()
        for t in w.tokens:
            gl = [0] * (R.rank - sf.rank)
            sgn = 1 if t.orient == "fwd" else -1
            if t.is_biangle:
                gl[3 * nb + SLOTS.index(t.gen)] = sgn
            else:
                gl[3 * t.block + KINDS.index(t.gen)] = sgn  # type: ignore[operator]
            acc = acc * R.monomial((0,) * sf.rank + tuple(gl))
        g, s = normalize_webs(susp, acc).only_term()
        parts[w.face] = tuple(g[sf.rank:])
        scal = scal * s
    return gl1_glue(T, parts), scal


def recover_trace(T: Mfld3Tri, p: SplitPresentation3D, ct: Scalar = DEFAULT_CT, cb: Scalar = DEFAULT_CB,
                  reference: tuple[GluedWeb, Scalar] | None = None,
                  angles: AngleStructure | None = None) -> TorusElem:
    """Keep the part of ev o F on the reference web, divided by its normalizing scalar."""
    rep = compat_check_3d(T, p, ct, cb, angles)
    web, s = reference if reference is not None else reference_web(T, p)
    sqgm = SQGM(T, ct, cb)
    e = rep.lhs.get(web)
    if e is None:
        return sqgm.torus.zero()
    return e * s.inverse()


# ------------------------------------------------------------ cone points

@lru_cache(maxsize=None)
def cone_torus() -> QuantumTorus:
    """x x' = q^2 x' x and cyclically."""
    return QuantumTorus.from_pairs(("x", "x'", "x''"), {("x", "x'"): (4, 2), ("x'", "x''"): (4, 2),
                                                        ("x''", "x"): (4, 2)})


def cone_relation() -> MonomialRelation:
    return MonomialRelation((1, 1, 1), Scalar.from_int(-1), "central", "[x x' x''] = -1")


def act_on_cyclic(e: TorusElem, rules: Sequence[tuple[str, TorusElem]]) -> TorusElem:
    """Apply left-ideal rules  x_gen [empty] = image [empty]  in order.

    Each rule peels one copy of its generator off the right end of every
    term with a positive exponent of it; the remaining word acts on the image.
    """
    t = e.torus
    for name, image in rules:
        i = t.index(name)
        unit = t.unit(name)
        out = t.zero()
        for g, s in e.terms.items():
            if g[i] > 0:
                rest = tuple(a - b for a, b in zip(g, unit))
                # x_g = x_rest x_unit / cocycle(rest, unit)
                out = out + t.monomial(rest, s * t.cocycle(rest, unit).inverse()) * image
            else:
                out = out + t.monomial(g, s)
        e = out
    return e


def weyl_product_action() -> TorusElem:
    """[x x' x''] on the cyclic vector of T / (x'' = 1 - x^-1, x = 1 - x'^-1, x' = 1 - x''^-1)."""
    t = cone_torus()
    w = t.monomial((1, 1, 1))
    one = t.one()
    rules = [("x''", one - t.gen("x", -1)), ("x", one - t.gen("x'", -1))]
    return act_on_cyclic(w, rules)


@dataclass
class ConeReport:
    cyclic_relation_central: bool
    ordered_product: TorusElem  # x x' x'' reduced by [x x' x''] = -1
    module_action: TorusElem
    sign: int
    three_term: dict
    three_term_closes: bool

    @property
    def ok(self) -> bool:
        t = cone_torus()
        q = Scalar.q()
        return (self.cyclic_relation_central and self.ordered_product == t.scalar(-q)
                and self.module_action == t.scalar(-q) and self.sign == -1 and self.three_term_closes)


def _qa(expr: AngleExpr, factor: Fraction | int = 1) -> Scalar:
    return Scalar.qangle(expr, Fraction(factor))


def three_term(a: AngleExpr, b: AngleExpr) -> tuple[Scalar, Scalar]:
    """Weights of the cone-point relation: D = q^(a/pi) D1 + q^(-b/pi) D2."""
    return _qa(a), _qa(b, -1)


def cone_3term_check(T2: Mfld3Tri, T3: Mfld3Tri, data: PachnerData) -> ConeReport:
    """Relation-level checks of the gl1 2-3 map near the cone points."""
    if set(T2.tets) - set(T3.tets) != {data.top, data.bottom} or T3.angles is None or T2.angles is None:
        raise NotAPachnerPair("need an angled 2-3 pair")
    t = cone_torus()
    rel = cone_relation()
    central = t.is_central(rel.vector)
    ordered = RelationLattice(t, [rel]).reduce(t.ordered_product([t.unit(n) for n in t.names]))
    action = weyl_product_action()

    # sign: a meridian of the segment through the removed face becomes one
    # meridian per new interior face around the new edge
    u, dd = data.top_apex, data.bottom_apex
    new_faces = [g for g in T3.gluings if g.top in data.new_tets and g.bottom in data.new_tets
                 and {u, dd} <= set(g.top_face)]
    sign = (-1) ** len(new_faces)

    # 3-term transport: expand at the cone point of the new tet on p1 p2, then
    # at those on p3 p1 and p2 p3, and compare with the target relation
    p1, p2, p3 = data.equator
    n1, n2, n3 = data.new_tets
    ang = lambda tet, a, b: T3.edge_angle(tet, (a, b))
    th = lambda k: T2.edge_angle(data.top, (u, k))
    w1, w2 = three_term(ang(n3, u, p1), ang(n3, u, p2))
    w11, w12 = three_term(ang(n2, u, p1), ang(n2, u, dd))
    w21, w22 = three_term(ang(n1, u, dd), ang(n1, u, p2))
    chain = {"D1": w1 * w11, "Da": w1 * w12, "Db": w2 * w21, "D2": w2 * w22}
    chain = {k: v.reduce_angle_relations([]) for k, v in chain.items()}
    target = {"D1": _qa(th(p1)), "D2": _qa(th(p2), -1)}
    # one framing change turns q Db into Db', and the sign defect gives Db' = -Da
    closes = (chain["D1"] == target["D1"].reduce_angle_relations([])
              and chain["D2"] == target["D2"].reduce_angle_relations([])
              and chain["Db"] == Scalar.q() * chain["Da"])
    return ConeReport(central, ordered, action, sign, chain, closes)


def sf_generators(susp: FaceSuspension) -> list[tuple[str, SfToken, bool]]:
    """Every stated, oriented single arc of a face suspension: (label, token, acts on the left)."""
    out = []
    states = ((1, 1), (-1, -1), (-1, 1), (1, -1))
    for k in range(len(susp.blocks)):
        for kind in KINDS:
            for orient in ("fwd", "bwd"):
                for st in states:
                    out.append((f"block{k + 1}.{kind}.{orient}{_st(st)}", SfToken(k, kind, orient, st), True))
    if len(susp.blocks) == 2:
        for slot in SLOTS:
            for orient in ("fwd", "bwd"):
                for st in states:
                    out.append((f"biangle.{slot}.{orient}{_st(st)}", SfToken(None, slot, orient, st), False))
    return out


def _st(st: tuple[int, int]) -> str:
    return "".join("+" if s == 1 else "-" for s in st)


def sf_generator_squares(T: Mfld3Tri, face: str, ct: Scalar = DEFAULT_CT, cb: Scalar = DEFAULT_CB,
                         angles: AngleStructure | None = None) -> list[CheckRecord]:
    """ev o F = (Tr x id) o pi on each single arc; leftover angle dependence fails the record."""
    susp = T.suspension(face)
    out = []
    for label, t, left in sf_generators(susp):
        lw, rw = ([t], []) if left else ([], [t])
        lhs = ev_sf(T, susp, f_sf(T, susp, lw, rw, angles), ct, cb, angles)
        rhs = tr_pi_sf(T, susp, lw, rw, ct, cb)
        rec = compare(f"{face} {label}", lhs, rhs)
        if not _angle_free(lhs):
            rec = CheckRecord(rec.name + " (angle dependence left over)", rec.lhs, rec.rhs, False, rec.first_diff)
        out.append(rec)
    return out
