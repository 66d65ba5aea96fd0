import itertools

import pytest

from skeintrace.qtorus import (MonomialRelation, QuantumTorus, RankMismatch, RelationLattice, TorusError,
                               brute_force_reorder, mul, tensor, weyl)
from skeintrace.scalars import Scalar

A = Scalar.A()
q = Scalar.q()


@pytest.fixture
def t2():
    return QuantumTorus.from_pairs(["x", "y"], {("x", "y"): (2, 0)})


def test_monomials(t2):
    assert t2.monomial((0, 0)) == t2.one()
    assert t2.monomial((1, 0)) == t2.gen("x")
    assert t2.monomial((-1, 0), q) == q * t2.gen("x", -1)


def test_mul_half_form(t2):
    # gh = A^2 hg, so x*y = A x_{(1,1)}
    assert t2.gen("x") * t2.gen("y") == t2.monomial((1, 1), A)
    assert t2.gen("x") * t2.gen("y") == (A * A) * (t2.gen("y") * t2.gen("x"))


def test_inverse(t2):
    x = t2.gen("x")
    assert x * x.inverse() == t2.one()


def test_minus_a_commutation():
    t = QuantumTorus.from_pairs(["alpha", "beta"], {("alpha", "beta"): (1, 1)})
    a, b = t.gen("alpha"), t.gen("beta")
    assert a * b == (-A) * (b * a)


def test_weyl_single(t2):
    assert weyl(t2, [(1, 0)]) == t2.gen("x")


def test_weyl_three_cycle():
    t = QuantumTorus.from_pairs(["z", "z'", "z''"], {("z", "z'"): (4, 2), ("z'", "z''"): (4, 2),
                                                   ("z''", "z"): (4, 2)})
    vs = [t.unit(i) for i in range(3)]
    assert weyl(t, vs) == q.inverse() * t.ordered_product(vs)


def test_weyl_permutation_invariant(t2):
    vs = [(1, 0), (0, 1), (1, 1)]
    for p in itertools.permutations(vs):
        assert weyl(t2, list(p)) == weyl(t2, vs)


def test_reorder_oracle_agrees(t2):
    vs = [(1, 0), (0, 1), (-1, 2)]
    ordered = t2.ordered_product(vs)
    for perm, s in brute_force_reorder(t2, vs):
        assert s * t2.ordered_product([vs[i] for i in perm]) == ordered


def test_tensor(t2):
    t = tensor([t2, t2])
    assert t.rank == 4
    assert t.commutation((1, 0, 0, 0), (0, 0, 1, 1)) == Scalar.one()
    assert tensor([]).rank == 0


def test_bad_forms():
    with pytest.raises(TorusError):
        QuantumTorus(("x", "x"), ((0, 0), (0, 0)), ((0, 0), (0, 0)))
    with pytest.raises(RankMismatch):
        QuantumTorus(("x",), ((0, 0), (0, 0)), ((0,),))


def test_mixed_tori_rejected(t2):
    other = QuantumTorus.from_pairs(["u", "v"], {("u", "v"): (1, 0)})
    with pytest.raises(TorusError):
        mul(t2.gen("x"), other.gen("u"))


def test_reduce_central_relation():
    t = QuantumTorus.from_pairs(["a", "b", "c"], {})
    half = Scalar.q(1) ** 0 * Scalar.parse("q^1/2")
    lat = RelationLattice(t, [MonomialRelation((1, 1, 1), half)])
    assert lat.reduce(t.monomial((1, 1, 1))) == t.scalar(half)
    assert lat.reduce(t.one()) == t.one()


def test_reduce_idempotent():
    t = QuantumTorus.from_pairs(["a", "b", "c", "d"], {("a", "b"): (2, 0), ("c", "d"): (1, 1)})
    lat = RelationLattice(t, [MonomialRelation((2, 0, 0, 0), q), MonomialRelation((0, 0, 1, 1), A),
                              MonomialRelation((1, 1, 0, 0), Scalar.one())])
    e = t.monomial((3, -1, 2, 5)) + t.monomial((-2, 0, 1, 0), A)
    r = lat.reduce(e)
    assert lat.reduce(r) == r
