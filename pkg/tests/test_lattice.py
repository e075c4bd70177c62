from fractions import Fraction as F

import math
import pytest
from hypothesis import given, strategies as st

from projdyn.errors import MixedSurd
from projdyn.lattice import (additive_rank, exact_product, gaussian_valuations,
                             integer_nullspace, mult_rank, mult_relations, torsion_order)
from projdyn.scalars import Surd

r2 = Surd.sqrt(2)


def test_additive_rank_exact():
    assert additive_rank([1, r2]) == (2, True)
    assert additive_rank([1, F(1, 2), 3]) == (1, True)
    assert additive_rank([Surd(1), Surd(0, 1), r2, Surd(0, 0, 0, 1, 2)]) == (4, True)
    with pytest.raises(MixedSurd):
        additive_rank([r2, Surd.sqrt(3)])


def test_additive_rank_float_is_provisional():
    rk, exact = additive_rank([1.0, math.sqrt(2)])
    assert rk == 2 and not exact
    assert additive_rank([1.0, 0.5])[0] == 1


def test_gaussian_valuations():
    assert gaussian_valuations(Surd(2)) == {(2, 0): 2}
    v = gaussian_valuations(Surd(F(5, 3)))
    assert v[(3, 0)] == -1 and v[(5, 1)] == 1 and v[(5, -1)] == 1


def test_mult_relations_gaussian():
    rel = mult_relations([2, 4, 3])
    assert rel.complete and rel.rank == 2
    assert mult_rank([Surd(0, 1), 2]) == (1, True)     # i is torsion


@given(st.integers(-4, 4), st.integers(-4, 4))
def test_found_relations_hold(a, b):
    vals = [Surd(2), Surd(3), Surd(2) ** a * Surd(3) ** b]
    rel = mult_relations(vals)
    assert rel.rank == 2
    for n in rel.basis:
        assert torsion_order(exact_product(vals, n)) is not None


def test_surd_search_verified():
    u = 1 + r2          # fundamental unit
    rel = mult_relations([u, u ** 3])
    assert rel.rank == 1 and rel.basis
    assert not mult_relations([u, Surd(2)]).basis


def test_torsion_order():
    assert torsion_order(Surd(0, 1)) == 4
    assert torsion_order(Surd(2)) is None


def test_integer_nullspace():
    ns = integer_nullspace([[1, 2, 3]], 3)
    assert len(ns) == 2
    assert all(sum(c * x for c, x in zip([1, 2, 3], v)) == 0 for v in ns)
