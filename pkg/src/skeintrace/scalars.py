"""Exact coefficient ring for traces and UV-IR images.

A scalar is an integer combination of monomials

    zeta^s * A^r * Ct^m * Cb^n * q^(sum_i c_i * theta_i / pi)

with zeta^2 = -1, r a quarter integer, and rational c_i.  The variable q is
not stored separately: q = -A^2 and q^(1/2) = zeta*A.  Angle symbols that
occupy the third slot of a tetrahedron are eliminated on sight using
theta'' = pi - theta - theta'.  A rational multiple of pi in an angle
exponent becomes a power of q; the part that is an integer multiple of 1/2
is folded into zeta and A, and the remainder in [0, 1/2) is kept under the
reserved symbol ``pi``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

PI = "pi"
CT_NAME = "Ct"
CB_NAME = "Cb"

Rational = Union[int, Fraction]


class ScalarError(ValueError):
    pass


class ConstraintViolation(ScalarError):
    pass


class ParseError(ScalarError):
    pass


@dataclass(frozen=True, order=True)
class AngleSymbol:
    """A formal dihedral angle.

    ``slot`` is 0, 1 or 2 for the angles at the z, z', z'' edge pairs of
    tetrahedron ``tet``.  Free parameters have ``tet`` and ``slot`` unset.
    """

    name: str
    tet: str | None = None
    slot: int | None = None

    @staticmethod
    def of(tet: str, slot: int) -> "AngleSymbol":
        if slot not in (0, 1, 2):
            raise ScalarError(f"bad angle slot {slot}")
        return AngleSymbol(f"{tet}.t{slot}", tet, slot)

    @staticmethod
    def free(name: str) -> "AngleSymbol":
        if name == PI or _TET_SYM.fullmatch(name):
            raise ScalarError(f"reserved angle name {name!r}")
        return AngleSymbol(name)

    @staticmethod
    def parse(name: str) -> "AngleSymbol":
        m = _TET_SYM.fullmatch(name)
        if m:
            return AngleSymbol(name, m.group(1), int(m.group(2)))
        return AngleSymbol(name)


_TET_SYM = re.compile(r"(.+)\.t([012])")


@dataclass(frozen=True)
class AngleExpr:
    """A linear combination  pi_coeff*pi + sum c_i*theta_i."""

    pi_coeff: Fraction = Fraction(0)
    parts: tuple[tuple[AngleSymbol, Fraction], ...] = ()

    @staticmethod
    def make(pi_coeff: Rational = 0, parts: Mapping[AngleSymbol, Rational] | None = None) -> "AngleExpr":
        acc: dict[AngleSymbol, Fraction] = {}
        for sym, c in (parts or {}).items():
            c = Fraction(c)
            if c:
                acc[sym] = acc.get(sym, Fraction(0)) + c
        items = tuple(sorted((s, c) for s, c in acc.items() if c))
        return AngleExpr(Fraction(pi_coeff), items)

    @staticmethod
    def sym(s: AngleSymbol) -> "AngleExpr":
        return AngleExpr.make(0, {s: 1})

    @staticmethod
    def const(pi_coeff: Rational) -> "AngleExpr":
        return AngleExpr.make(pi_coeff)

    def __add__(self, other: "AngleExpr") -> "AngleExpr":
        d = dict(self.parts)
        for s, c in other.parts:
            d[s] = d.get(s, Fraction(0)) + c
        return AngleExpr.make(self.pi_coeff + other.pi_coeff, d)

    def __neg__(self) -> "AngleExpr":
        return AngleExpr.make(-self.pi_coeff, {s: -c for s, c in self.parts})

    def __sub__(self, other: "AngleExpr") -> "AngleExpr":
        return self + (-other)

    def scale(self, k: Rational) -> "AngleExpr":
        k = Fraction(k)
        return AngleExpr.make(self.pi_coeff * k, {s: c * k for s, c in self.parts})

    def eliminated(self) -> "AngleExpr":
        """Rewrite third-slot symbols as pi minus the other two."""
        out = AngleExpr.const(self.pi_coeff)
        for s, c in self.parts:
            if s.slot == 2:
                assert s.tet is not None
                rest = AngleExpr.make(1, {AngleSymbol.of(s.tet, 0): -1, AngleSymbol.of(s.tet, 1): -1})
                out = out + rest.scale(c)
            else:
                out = out + AngleExpr.make(0, {s: c})
        return out

    def __str__(self) -> str:
        bits = []
        if self.pi_coeff:
            bits.append(f"{self.pi_coeff}*pi")
        bits += [f"{c}*{s.name}" for s, c in self.parts]
        return " + ".join(bits) if bits else "0"


# term key: (zeta bit, A exponent, Ct exponent, Cb exponent, angle part)
Key = tuple[int, Fraction, int, int, tuple[tuple[str, Fraction], ...]]


def _check_quarter(r: Fraction) -> Fraction:
    if (r * 4).denominator != 1:
        raise ScalarError(f"A exponent {r} is finer than 1/4")
    return r


def _fold_pi(c: Fraction) -> tuple[int, Fraction, Fraction]:
    """Split q^c into zeta^k A^k q^rem with rem in [0, 1/2)."""
    k = (2 * c).__floor__()
    rem = c - Fraction(k, 2)
    return k, Fraction(k), rem


class Scalar:
    """Immutable element of the coefficient ring."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Key, int] | None = None):
        clean = {k: v for k, v in (terms or {}).items() if v}
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # constructors
    @staticmethod
    def zero() -> "Scalar":
        return Scalar()

    @staticmethod
    def one() -> "Scalar":
        return Scalar.from_int(1)

    @staticmethod
    def from_int(n: int) -> "Scalar":
        return Scalar({(0, Fraction(0), 0, 0, ()): int(n)})

    @staticmethod
    def monomial(coeff: int = 1, zeta: int = 0, a: Rational = 0, ct: int = 0, cb: int = 0,
                 angle: Mapping[str, Rational] | None = None) -> "Scalar":
        sign = 1
        zeta %= 4
        if zeta >= 2:
            sign, zeta = -1, zeta - 2
        a = _check_quarter(Fraction(a))
        s = Scalar({(zeta, a, ct, cb, ()): sign * coeff})
        if angle:
            s = s * Scalar.qangle(AngleExpr.make(0, {AngleSymbol.parse(k): v for k, v in angle.items() if k != PI}))
            if PI in angle:
                s = s * Scalar.q(Fraction(angle[PI]))
        return s

    @staticmethod
    def A(r: Rational = 1) -> "Scalar":
        return Scalar.monomial(a=r)

    @staticmethod
    def zeta(k: int = 1) -> "Scalar":
        return Scalar.monomial(zeta=k)

    @staticmethod
    def q(r: Rational = 1) -> "Scalar":
        """q^r for any rational r."""
        k, a, rem = _fold_pi(Fraction(r))
        zeta = k % 4
        sign = 1
        if zeta >= 2:
            sign, zeta = -1, zeta - 2
        angle = ((PI, rem),) if rem else ()
        return Scalar({(zeta, _check_quarter(a), 0, 0, angle): sign})

    @staticmethod
    def ct(n: int = 1) -> "Scalar":
        return Scalar.monomial(ct=n)

    @staticmethod
    def cb(n: int = 1) -> "Scalar":
        return Scalar.monomial(cb=n)

    @staticmethod
    def qangle(expr: AngleExpr | AngleSymbol, factor: Rational = 1) -> "Scalar":
        """q^(factor * expr / pi)."""
        if isinstance(expr, AngleSymbol):
            expr = AngleExpr.sym(expr)
        expr = expr.scale(factor).eliminated()
        s = Scalar.q(expr.pi_coeff)
        parts = tuple(sorted((sym.name, c) for sym, c in expr.parts))
        return s * Scalar({(0, Fraction(0), 0, 0, parts): 1})

    # inspection
    @property
    def terms(self) -> dict[Key, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def angle_symbols(self) -> set[str]:
        return {n for k in self._terms for n, _ in k[4] if n != PI}

    def is_angle_free(self) -> bool:
        return not self.angle_symbols()

    def __bool__(self) -> bool:
        return bool(self._terms)

    # arithmetic
    @staticmethod
    def _coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, int):
            return Scalar.from_int(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    def __add__(self, other) -> "Scalar":
        other = Scalar._coerce(other)
        d = dict(self._terms)
        for k, v in other._terms.items():
            d[k] = d.get(k, 0) + v
        return Scalar(d)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar({k: -v for k, v in self._terms.items()})

    def __sub__(self, other) -> "Scalar":
        return self + (-Scalar._coerce(other))

    def __rsub__(self, other) -> "Scalar":
        return Scalar._coerce(other) - self

    @staticmethod
    def _mul_keys(k1: Key, k2: Key) -> tuple[Key, int]:
        z = k1[0] + k2[0]
        sign = 1
        if z >= 2:
            z -= 2
            sign = -1
        ang: dict[str, Fraction] = dict(k1[4])
        for n, c in k2[4]:
            ang[n] = ang.get(n, Fraction(0)) + c
        a = k1[1] + k2[1]
        pi_c = ang.pop(PI, Fraction(0))
        if pi_c >= Fraction(1, 2):
            # q^(1/2) = zeta*A
            z += 1
            a += 1
            pi_c -= Fraction(1, 2)
            if z >= 2:
                z -= 2
                sign = -sign
        if pi_c:
            ang[PI] = pi_c
        parts = tuple(sorted((n, c) for n, c in ang.items() if c))
        return (z, a, k1[2] + k2[2], k1[3] + k2[3], parts), sign

    def __mul__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            if isinstance(other, int):
                return Scalar({k: v * other for k, v in self._terms.items()})
            return NotImplemented
        d: dict[Key, int] = {}
        for k1, v1 in self._terms.items():
            for k2, v2 in other._terms.items():
                k, sign = Scalar._mul_keys(k1, k2)
                d[k] = d.get(k, 0) + sign * v1 * v2
        return Scalar(d)

    def __rmul__(self, other) -> "Scalar":
        return self * other

    def inverse(self) -> "Scalar":
        if not self.is_monomial():
            raise ScalarError(f"only monomials are invertible, got {self}")
        (k, v), = self._terms.items()
        if v not in (1, -1):
            raise ScalarError(f"coefficient {v} is not a unit")
        z, a, ct, cb, ang = k
        inv = Scalar({(0, -a, -ct, -cb, tuple((n, -c) for n, c in ang if n != PI)): v})
        inv = inv * Scalar.zeta(-z)
        pi_c = dict(ang).get(PI, Fraction(0))
        if pi_c:
            inv = inv * Scalar.q(-pi_c)
        return inv

    def __truediv__(self, other) -> "Scalar":
        return self * Scalar._coerce(other).inverse()

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = Scalar.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Scalar.from_int(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self._terms.items())))
        return self._hash

    # substitutions
    def substitute_constants(self, ct: "Scalar", cb: "Scalar") -> "Scalar":
        """Replace Ct and Cb by monomial values satisfying Cb^2 = q*Ct^2."""
        check_scaling(ct, cb)
        out = Scalar.zero()
        for (z, a, m, n, ang), v in self._terms.items():
            out = out + Scalar({(z, a, 0, 0, ang): v}) * ct ** m * cb ** n
        return out

    def impose_scaling(self) -> "Scalar":
        """Normal form modulo Cb^2 = q*Ct^2: Cb appears with exponent 0 or 1."""
        out = Scalar.zero()
        qct2 = Scalar.q() * Scalar.ct(2)
        for (z, a, m, n, ang), v in self._terms.items():
            r = n % 2
            out = out + Scalar({(z, a, m, r, ang): v}) * qct2 ** ((n - r) // 2)
        return out

    def substitute_angles(self, values: Mapping[str, AngleExpr]) -> "Scalar":
        """Replace named angle symbols by linear angle expressions."""
        out = Scalar.zero()
        for (z, a, m, n, ang), v in self._terms.items():
            keep = tuple((s, c) for s, c in ang if s not in values)
            term = Scalar({(z, a, m, n, ()): v})
            for s, c in keep:
                if s == PI:
                    term = term * Scalar.q(c)
                else:
                    term = term * Scalar.qangle(AngleSymbol.parse(s), c)
            for s, c in ang:
                if s in values:
                    term = term * Scalar.qangle(values[s], c)
            out = out + term
        return out

    def reduce_angle_relations(self, relations: Iterable[AngleExpr]) -> "Scalar":
        """Normal form modulo linear relations  expr = 0  among angle symbols.

        Each relation is solved for its largest remaining symbol (in sort
        order) after eliminating the previous pivots.
        """
        pivots: list[tuple[AngleSymbol, AngleExpr]] = []
        for rel in relations:
            rel = rel.eliminated()
            for sym, sol in pivots:
                rel = _substitute_expr(rel, sym, sol)
            if not rel.parts:
                if rel.pi_coeff:
                    raise ConstraintViolation(f"inconsistent angle relation {rel}")
                continue
            sym, c = rel.parts[-1]
            sol = AngleExpr.make(-rel.pi_coeff / c, {s: -d / c for s, d in rel.parts[:-1]})
            pivots = [(s, _substitute_expr(e, sym, sol)) for s, e in pivots]
            pivots.append((sym, sol))
        return self.substitute_angles({s.name: e for s, e in pivots})

    # text form
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        keys = sorted(self._terms, key=lambda k: (k[1], k[4], k[0], k[2], k[3]))
        out = []
        for i, k in enumerate(keys):
            v = self._terms[k]
            body = _render_key(k)
            if body:
                mag = "" if abs(v) == 1 else f"{abs(v)}*"
                text = mag + body
            else:
                text = str(abs(v))
            if i == 0:
                out.append(("-" if v < 0 else "") + text)
            else:
                out.append((" - " if v < 0 else " + ") + text)
        return "".join(out)

    def __repr__(self) -> str:
        return f"Scalar({str(self)!r})"

    @staticmethod
    def parse(text: str) -> "Scalar":
        return _parse(text)


def _substitute_expr(expr: AngleExpr, sym: AngleSymbol, sol: AngleExpr) -> AngleExpr:
    d = dict(expr.parts)
    c = d.pop(sym, None)
    base = AngleExpr.make(expr.pi_coeff, d)
    return base if c is None else base + sol.scale(c)


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _pow(c: Fraction) -> str:
    return _frac(c) if c.denominator == 1 else f"({_frac(c)})"


def _render_key(k: Key) -> str:
    z, a, m, n, ang = k
    bits = []
    if z:
        bits.append("z")
    if a:
        bits.append("A" if a == 1 else f"A^{_pow(a)}")
    if m:
        bits.append(CT_NAME if m == 1 else f"{CT_NAME}^{m}")
    if n:
        bits.append(CB_NAME if n == 1 else f"{CB_NAME}^{n}")
    if ang:
        bits.append("Q[" + ",".join(f"{s}:{_frac(c)}" for s, c in ang) + "]")
    return "*".join(bits)


_TERM_SPLIT = re.compile(r"(?<!\^)\s*([+-])\s*(?![^\[]*\])(?![^(]*\))")


def _parse(text: str) -> Scalar:
    text = text.strip()
    if not text:
        raise ParseError("empty scalar")
    if text == "0":
        return Scalar.zero()
    if text[0] not in "+-":
        text = "+" + text
    pieces = _TERM_SPLIT.split(text)
    if pieces[0].strip():
        raise ParseError(f"cannot parse {text!r}")
    out = Scalar.zero()
    for sign, body in zip(pieces[1::2], pieces[2::2]):
        out = out + _parse_term(body.strip()) * (-1 if sign == "-" else 1)
    return out


def _parse_term(body: str) -> Scalar:
    if not body:
        raise ParseError("empty term")
    factors = re.findall(r"Q\[[^\]]*\]|[^*]+", body)
    s = Scalar.one()
    for f in factors:
        f = f.strip()
        try:
            if f.isdigit():
                s = s * int(f)
            elif f in ("z", "zeta"):
                s = s * Scalar.zeta()
            elif f.startswith("Q["):
                ang = {}
                inner = f[2:-1]
                for item in filter(None, inner.split(",")):
                    name, c = item.rsplit(":", 1)
                    ang[name.strip()] = Fraction(c.strip())
                s = s * Scalar.monomial(angle=ang)
            else:
                m = re.fullmatch(r"(A|Ct|Cb|q)(?:\^\(?(-?\d+(?:/\d+)?)\)?)?", f)
                if not m:
                    raise ParseError(f"bad factor {f!r}")
                e = Fraction(m.group(2)) if m.group(2) else Fraction(1)
                if m.group(1) == "A":
                    s = s * Scalar.A(e)
                elif m.group(1) == "q":
                    s = s * Scalar.q(e)
                else:
                    if e.denominator != 1:
                        raise ParseError(f"fractional power in {f!r}")
                    s = s * (Scalar.ct(int(e)) if m.group(1) == CT_NAME else Scalar.cb(int(e)))
        except (ValueError, ZeroDivisionError, ScalarError) as exc:
            raise ParseError(str(exc)) from exc
    return s


def check_scaling(ct: Scalar, cb: Scalar) -> None:
    if not (ct.is_monomial() and cb.is_monomial()):
        raise ConstraintViolation("Ct and Cb must be monomials")
    if (cb * cb - Scalar.q() * ct * ct).impose_scaling():
        raise ConstraintViolation(f"Cb^2 != q*Ct^2 for Ct={ct}, Cb={cb}")


DEFAULT_CT = Scalar.q(Fraction(-1, 2))
DEFAULT_CB = Scalar.one()
