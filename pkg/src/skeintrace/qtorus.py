"""Quantum tori over integer lattices.

The basis element ``x_g`` stored for a lattice vector ``g`` is the Weyl
symbol.  Products renormalize immediately:

    x_g * x_h = zeta^(g.S.h) * A^(g.M.h / 2) * x_(g+h)

where ``M`` (the A-exponent form, half-integer entries) and ``S`` (integer
sign form) are antisymmetric.  Then ``x_g x_h = (-1)^(g.S.h) A^(g.M.h) x_h x_g``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Mapping, Sequence

from .scalars import Scalar

Vec = tuple[int, ...]


class TorusError(ValueError):
    pass


class RankMismatch(TorusError):
    pass


class TorusMismatch(TorusError):
    pass


class DependentRelations(TorusError):
    pass


@dataclass(frozen=True)
class QuantumTorus:
    names: tuple[str, ...]
    a_form: tuple[tuple[Fraction, ...], ...]
    sign_form: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.names)
        if len(set(self.names)) != n:
            raise TorusError("duplicate generator names")
        if len(self.a_form) != n or len(self.sign_form) != n:
            raise RankMismatch("form size does not match rank")
        for i in range(n):
            for j in range(n):
                if self.a_form[i][j] != -self.a_form[j][i] or self.sign_form[i][j] != -self.sign_form[j][i]:
                    raise TorusError("forms must be antisymmetric")
                if (2 * self.a_form[i][j]).denominator != 1:
                    raise TorusError("A-exponent form must be half-integral")

    @staticmethod
    def from_pairs(names: Sequence[str], pairs: Mapping[tuple[str, str], tuple[Rational, int]]) -> "QuantumTorus":
        """Build from {(g, h): (A exponent, sign exponent)} meaning gh = c hg."""
        n = len(names)
        idx = {s: i for i, s in enumerate(names)}
        m = [[Fraction(0)] * n for _ in range(n)]
        s = [[0] * n for _ in range(n)]
        for (g, h), (a, sg) in pairs.items():
            i, j = idx[g], idx[h]
            m[i][j], m[j][i] = Fraction(a), -Fraction(a)
            s[i][j], s[j][i] = sg, -sg
        return QuantumTorus(tuple(names), tuple(map(tuple, m)), tuple(map(tuple, s)))

    @property
    def rank(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise TorusError(f"no generator {name!r}") from None

    def unit(self, name_or_index) -> Vec:
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        return tuple(1 if k == i else 0 for k in range(self.rank))

    def vec(self, exps: Mapping[str, int]) -> Vec:
        v = [0] * self.rank
        for k, e in exps.items():
            v[self.index(k)] += e
        return tuple(v)

    def _check(self, g: Sequence[int]) -> Vec:
        if len(g) != self.rank:
            raise RankMismatch(f"vector of length {len(g)} in rank-{self.rank} torus")
        return tuple(int(x) for x in g)

    def form(self, g: Sequence[int], h: Sequence[int]) -> Fraction:
        return sum((g[i] * self.a_form[i][j] * h[j] for i in range(self.rank) for j in range(self.rank)
                    if g[i] and h[j]), Fraction(0))

    def sign(self, g: Sequence[int], h: Sequence[int]) -> int:
        return sum(g[i] * self.sign_form[i][j] * h[j] for i in range(self.rank) for j in range(self.rank)
                   if g[i] and h[j])

    def commutation(self, g: Sequence[int], h: Sequence[int]) -> Scalar:
        """c with x_g x_h = c x_h x_g."""
        return Scalar.monomial(zeta=2 * self.sign(g, h), a=self.form(g, h))

    def cocycle(self, g: Sequence[int], h: Sequence[int]) -> Scalar:
        """b with x_g x_h = b x_(g+h)."""
        return Scalar.monomial(zeta=self.sign(g, h), a=self.form(g, h) / 2)

    def monomial(self, g: Sequence[int], s: Scalar | int = 1) -> "TorusElem":
        return TorusElem(self, {self._check(g): Scalar._coerce(s)})

    def gen(self, name: str, power: int = 1) -> "TorusElem":
        return self.monomial(tuple(power * x for x in self.unit(name)))

    def one(self) -> "TorusElem":
        return self.monomial((0,) * self.rank)

    def zero(self) -> "TorusElem":
        return TorusElem(self, {})

    def scalar(self, s: Scalar | int) -> "TorusElem":
        return self.monomial((0,) * self.rank, s)

    def weyl(self, vecs: Iterable[Sequence[int]]) -> "TorusElem":
        total = [0] * self.rank
        for g in vecs:
            for i, x in enumerate(self._check(g)):
                total[i] += x
        return self.monomial(total)

    def ordered_product(self, vecs: Iterable[Sequence[int]]) -> "TorusElem":
        out = self.one()
        for g in vecs:
            out = out * self.monomial(g)
        return out

    def is_central(self, g: Sequence[int]) -> bool:
        return all(self.commutation(g, self.unit(i)) == 1 for i in range(self.rank))

    def render_vec(self, g: Sequence[int]) -> str:
        bits = []
        for name, e in zip(self.names, g):
            if e == 1:
                bits.append(name)
            elif e:
                bits.append(f"{name}^{e}")
        return "[" + "*".join(bits) + "]"

    def describe(self) -> str:
        lines = [f"torus rank {self.rank}: " + " ".join(self.names)]
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                m, s = self.a_form[i][j], self.sign_form[i][j]
                if m or s:
                    lines.append(f"  {self.names[i]} {self.names[j]} A^{m} (-1)^{s}")
        return "\n".join(lines)


Rational = int | Fraction


class TorusElem:
    """Finite Scalar-weighted sum of Weyl symbols."""

    __slots__ = ("torus", "_terms")

    def __init__(self, torus: QuantumTorus, terms: Mapping[Vec, Scalar]):
        self.torus = torus
        self._terms = {k: v for k, v in terms.items() if not v.is_zero()}

    @property
    def terms(self) -> dict[Vec, Scalar]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def _same(self, other: "TorusElem") -> None:
        if other.torus is not self.torus and other.torus != self.torus:
            raise TorusMismatch("elements live in different tori")

    def _lift(self, other) -> "TorusElem":
        if isinstance(other, TorusElem):
            self._same(other)
            return other
        return self.torus.scalar(Scalar._coerce(other))

    def __add__(self, other) -> "TorusElem":
        other = self._lift(other)
        d = dict(self._terms)
        for k, v in other._terms.items():
            d[k] = d[k] + v if k in d else v
        return TorusElem(self.torus, d)

    __radd__ = __add__

    def __neg__(self) -> "TorusElem":
        return TorusElem(self.torus, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other) -> "TorusElem":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "TorusElem":
        return self._lift(other) - self

    def __mul__(self, other) -> "TorusElem":
        if isinstance(other, (Scalar, int)):
            s = Scalar._coerce(other)
            return TorusElem(self.torus, {k: v * s for k, v in self._terms.items()})
        self._same(other)
        t = self.torus
        d: dict[Vec, Scalar] = {}
        for g, a in self._terms.items():
            for h, b in other._terms.items():
                k = tuple(x + y for x, y in zip(g, h))
                c = a * b * t.cocycle(g, h)
                d[k] = d[k] + c if k in d else c
        return TorusElem(t, d)

    def __rmul__(self, other) -> "TorusElem":
        if isinstance(other, (Scalar, int)):
            return self * other
        return NotImplemented

    def inverse(self) -> "TorusElem":
        if not self.is_monomial():
            raise TorusError("only monomials are invertible")
        (g, s), = self._terms.items()
        return self.torus.monomial(tuple(-x for x in g), s.inverse())

    def __pow__(self, n: int) -> "TorusElem":
        if n < 0:
            return self.inverse() ** (-n)
        out = self.torus.one()
        for _ in range(n):
            out = out * self
        return out

    def map_scalars(self, f) -> "TorusElem":
        return TorusElem(self.torus, {k: f(v) for k, v in self._terms.items()})

    def substitute_constants(self, ct: Scalar, cb: Scalar) -> "TorusElem":
        return self.map_scalars(lambda s: s.substitute_constants(ct, cb))

    def impose_scaling(self) -> "TorusElem":
        return self.map_scalars(Scalar.impose_scaling)

    def coefficient(self, g: Sequence[int]) -> Scalar:
        return self._terms.get(tuple(g), Scalar.zero())

    def only_term(self) -> tuple[Vec, Scalar]:
        if not self.is_monomial():
            raise TorusError(f"expected a monomial, got {self}")
        (g, s), = self._terms.items()
        return g, s

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Scalar)):
            other = self.torus.scalar(other)
        if not isinstance(other, TorusElem):
            return NotImplemented
        return self.torus == other.torus and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        zero = (0,) * self.torus.rank
        for g, s in self.items():
            text = str(s)
            if g == zero:
                out.append(text)
                continue
            mono = self.torus.render_vec(g)
            if text == "1":
                out.append(mono)
            elif text == "-1":
                out.append("-" + mono)
            elif s.is_monomial():
                out.append(f"{text}*{mono}")
            else:
                out.append(f"({text})*{mono}")
        return " + ".join(out)

    def __repr__(self) -> str:
        return f"TorusElem({str(self)!r})"


def monomial(t: QuantumTorus, g: Sequence[int], s: Scalar | int = 1) -> TorusElem:
    return t.monomial(g, s)


def mul(a: TorusElem, b: TorusElem) -> TorusElem:
    return a * b


def weyl(t: QuantumTorus, vecs: Iterable[Sequence[int]]) -> TorusElem:
    return t.weyl(vecs)


def tensor(ts: Sequence[QuantumTorus], labels: Sequence[str] | None = None) -> QuantumTorus:
    """Block-diagonal tensor product; generator names get ``label.`` prefixes."""
    if labels is None:
        labels = [str(i) for i in range(len(ts))]
    names: list[str] = []
    n = sum(t.rank for t in ts)
    m = [[Fraction(0)] * n for _ in range(n)]
    s = [[0] * n for _ in range(n)]
    off = 0
    for t, lab in zip(ts, labels):
        names += [f"{lab}.{x}" if lab else x for x in t.names]
        for i in range(t.rank):
            for j in range(t.rank):
                m[off + i][off + j] = t.a_form[i][j]
                s[off + i][off + j] = t.sign_form[i][j]
        off += t.rank
    return QuantumTorus(tuple(names), tuple(map(tuple, m)), tuple(map(tuple, s)))


def inject(e: TorusElem, target: QuantumTorus, offset: int) -> TorusElem:
    """Place an element of a tensor factor into the tensor torus."""
    n, r = target.rank, e.torus.rank
    d = {}
    for g, s in e.terms.items():
        v = [0] * n
        v[offset:offset + r] = g
        d[tuple(v)] = s
    return TorusElem(target, d)


def transport(e: TorusElem, target: QuantumTorus) -> TorusElem:
    """Move an element to a torus with the same generator names in another order."""
    src = e.torus
    if sorted(src.names) != sorted(target.names):
        raise TorusMismatch("generator names differ")
    perm = [target.index(n) for n in src.names]
    for i in range(src.rank):
        for j in range(src.rank):
            if (src.a_form[i][j], src.sign_form[i][j]) != (target.a_form[perm[i]][perm[j]],
                                                           target.sign_form[perm[i]][perm[j]]):
                raise TorusMismatch(f"forms differ on {src.names[i]}, {src.names[j]}")
    d = {}
    for g, s in e.terms.items():
        v = [0] * target.rank
        for i, x in enumerate(g):
            v[perm[i]] = x
        d[tuple(v)] = s
    return TorusElem(target, d)


def pushforward(e: TorusElem, target: QuantumTorus, matrix: Sequence[Sequence[int]]) -> TorusElem:
    """Apply the lattice map  g -> matrix . g  to every Weyl symbol.

    This is an algebra map exactly when the map preserves both forms on the
    support; callers check that where it matters.
    """
    d: dict[Vec, Scalar] = {}
    for g, s in e.terms.items():
        k = tuple(sum(row[i] * g[i] for i in range(len(g))) for row in matrix)
        d[k] = d[k] + s if k in d else s
    return TorusElem(target, d)


@dataclass(frozen=True)
class MonomialRelation:
    """x_vector == scalar, applied from ``side`` (central, right or left)."""

    vector: Vec
    scalar: Scalar
    side: str = "central"
    label: str = ""

    def __post_init__(self):
        if self.side not in ("central", "right", "left"):
            raise TorusError(f"bad relation side {self.side!r}")


def integer_rank(vectors: Sequence[Sequence[int]]) -> int:
    rows = [list(map(Fraction, v)) for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def independent_subset(rels: Sequence[MonomialRelation]) -> tuple[list[MonomialRelation], list[MonomialRelation]]:
    """Greedy maximal independent subset, in input order."""
    kept: list[MonomialRelation] = []
    dropped: list[MonomialRelation] = []
    for r in rels:
        if integer_rank([k.vector for k in kept] + [r.vector]) > len(kept):
            kept.append(r)
        else:
            dropped.append(r)
    return kept, dropped


@dataclass
class _Row:
    vec: list[int]
    scalar: Scalar


@dataclass
class RelationLattice:
    """Coset section of Z^rank modulo a monomial relation lattice.

    ``eliminate`` lists generator indices from most to least preferred for
    elimination; the default prefers the last generators.  Rows are brought
    to echelon form in that column order and a term is reduced by pulling
    each pivot coordinate into [0, pivot).
    """

    torus: QuantumTorus
    relations: list[MonomialRelation]
    eliminate: list[int] | None = None
    rows: list[tuple[int, int, Vec, Scalar]] = field(init=False)
    side: str = field(init=False)

    def __post_init__(self):
        t = self.torus
        for r in self.relations:
            if len(r.vector) != t.rank:
                raise RankMismatch("relation vector has wrong length")
        if integer_rank([r.vector for r in self.relations]) < len(self.relations):
            raise DependentRelations("relation vectors are linearly dependent")
        sides = {r.side for r in self.relations} - {"central"}
        if len(sides) > 1:
            raise TorusError("cannot mix left and right relations in one section")
        self.side = sides.pop() if sides else "central"
        order = self.eliminate if self.eliminate is not None else list(range(t.rank - 1, -1, -1))
        order = list(order) + [i for i in range(t.rank - 1, -1, -1) if i not in order]
        rows = [_Row(list(r.vector), r.scalar) for r in self.relations]
        piv_rows: list[tuple[int, int, Vec, Scalar]] = []
        start = 0
        for c in order:
            live = [i for i in range(start, len(rows)) if rows[i].vec[c]]
            if not live:
                continue
            while True:
                live = [i for i in range(start, len(rows)) if rows[i].vec[c]]
                best = min(live, key=lambda i: abs(rows[i].vec[c]))
                rows[start], rows[best] = rows[best], rows[start]
                others = [i for i in range(start + 1, len(rows)) if rows[i].vec[c]]
                if not others:
                    break
                for i in others:
                    k = rows[i].vec[c] // rows[start].vec[c]
                    self._add(rows[i], rows[start], -k)
            if rows[start].vec[c] < 0:
                self._neg(rows[start])
            piv_rows.append((c, rows[start].vec[c], tuple(rows[start].vec), rows[start].scalar))
            start += 1
        self.rows = piv_rows

    def _combine(self, u: Vec, su: Scalar, w: Vec, sw: Scalar) -> Scalar:
        # x_u x_w = b(u, w) x_(u+w), and both factors act by their scalars
        return su * sw / self.torus.cocycle(u, w)

    def _add(self, row: _Row, other: _Row, k: int) -> None:
        if k == 0:
            return
        w = tuple(k * x for x in other.vec)
        sw = other.scalar ** k
        row.scalar = self._combine(tuple(row.vec), row.scalar, w, sw)
        row.vec = [a + b for a, b in zip(row.vec, w)]

    def _neg(self, row: _Row) -> None:
        row.vec = [-a for a in row.vec]
        row.scalar = row.scalar.inverse()

    def representative(self, g: Sequence[int]) -> tuple[Vec, Scalar]:
        """(g', s) with x_g == s * x_g' in the quotient."""
        g = list(g)
        s = Scalar.one()
        t = self.torus
        for c, d, v, sv in self.rows:
            k = g[c] // d
            if not k:
                continue
            kv = tuple(k * x for x in v)
            rest = tuple(a - b for a, b in zip(g, kv))
            if self.side == "left":
                s = s * sv ** k / t.cocycle(kv, rest)
            else:
                s = s * sv ** k / t.cocycle(rest, kv)
            g = list(rest)
        return tuple(g), s

    def reduce(self, e: TorusElem) -> TorusElem:
        if e.torus is not self.torus and e.torus != self.torus:
            raise TorusMismatch("element and relations live in different tori")
        d: dict[Vec, Scalar] = {}
        for g, s in e.terms.items():
            h, c = self.representative(g)
            d[h] = d[h] + s * c if h in d else s * c
        return TorusElem(self.torus, d)


def reduce_mod(e: TorusElem, rels: Sequence[MonomialRelation], section: RelationLattice | None = None) -> TorusElem:
    if section is None:
        section = RelationLattice(e.torus, list(rels))
    return section.reduce(e)


def weyl_factor(t: QuantumTorus, vecs: Sequence[Sequence[int]]) -> Scalar:
    """s with (ordered product of x_v) == s * x_(sum v)."""
    s = Scalar.one()
    acc = [0] * t.rank
    for v in vecs:
        s = s * t.cocycle(acc, v)
        acc = [a + b for a, b in zip(acc, v)]
    return s


def brute_force_reorder(t: QuantumTorus, vecs: Sequence[Sequence[int]]) -> list[tuple[tuple[int, ...], Scalar]]:
    """For every permutation p, the scalar c_p with prod(vecs) = c_p prod(vecs[p])."""
    out = []
    n = len(vecs)
    for p in permutations(range(n)):
        # bubble the factors into order p using pairwise commutations
        cur = list(range(n))
        c = Scalar.one()
        target = list(p)
        for pos in range(n):
            j = cur.index(target[pos])
            while j > pos:
                a, b = cur[j - 1], cur[j]
                # x_a x_b = comm(a, b) x_b x_a
                c = c * t.commutation(vecs[a], vecs[b])
                cur[j - 1], cur[j] = b, a
                j -= 1
        out.append((p, c))
    return out
