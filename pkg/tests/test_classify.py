from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from projdyn import linalg as la
from projdyn.classify import (MAJOR_OF, RationalityHint, classify_element, cubic_roots,
                              cyclic_kulkarni, dominant_vector, eigen3, probe_rational)
from projdyn.errors import IdentityElement, InputError
from projdyn.proj import ProjMap, coordinate_subspace

from oracles import canonical_items, random_conjugator


@pytest.mark.parametrize("name,M,hint", canonical_items(), ids=lambda x: x if isinstance(x, str) else "")
def test_canonical_forms(name, M, hint):
    c = classify_element(ProjMap(M), hint)
    assert c.minor == name
    assert c.major == MAJOR_OF[name]


def test_exact_and_float_agree():
    for name, M, hint in canonical_items():
        g = ProjMap(M)
        if g.exact:
            assert classify_element(g.to_float(), hint).minor == name


def test_conjugation_invariance_sample(rng):
    for name, M, hint in canonical_items():
        A = la.float_mat(M)
        for _ in range(25):
            P = random_conjugator(rng)
            B = P @ A @ np.linalg.inv(P)
            assert classify_element(ProjMap(B), hint).minor == name


def test_identity_has_no_class():
    with pytest.raises(IdentityElement):
        classify_element(ProjMap([[2, 0, 0], [0, 2, 0], [0, 0, 2]]))


def test_bad_hint():
    with pytest.raises(InputError):
        RationalityHint("maybe")
    with pytest.raises(InputError):
        RationalityHint("rational", 2, 4)


@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
                min_size=3, max_size=3))
def test_cubic_roots_reconstruct(roots):
    c = np.poly(roots)
    got = cubic_roots(c)
    # compare as multisets through the polynomial they define
    assert np.allclose(np.poly(got), c, atol=1e-6 * (1 + np.abs(c).max()))


def test_eigen_exact_multiplicities():
    ed = eigen3(ProjMap([[2, 1, 0], [0, 2, 0], [0, 0, F(1, 4)]]))
    assert sorted(ed.alg_mults) == [1, 2]
    assert not ed.diagonalizable


def test_probe_rational():
    assert probe_rational(0.25) == (1, 4)
    assert probe_rational(np.sqrt(2) % 1) is None


def test_cyclic_kulkarni_homothety():
    d = cyclic_kulkarni(ProjMap([[2, 0, 0], [0, 2, 0], [0, 0, F(1, 4)]]))
    assert d.contains_subspace(coordinate_subspace([1, 2], 2))
    assert d.contains_subspace(coordinate_subspace([3], 2))
    assert sorted(d.dims()) == [0, 1]


def test_dominant_vector():
    p = dominant_vector(ProjMap([[2, 0, 0], [0, 1, 0], [0, 0, F(1, 2)]]))
    assert coordinate_subspace([1], 2).contains(p)
    assert dominant_vector(ProjMap(np.diag([1, 1j, -1]))) is None
