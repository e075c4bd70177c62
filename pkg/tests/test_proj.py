import numpy as np
import pytest
from hypothesis import given, strategies as st

from projdyn import linalg as la
from projdyn.errors import (DegenerateConfiguration, IdenticalPoints, SameLine,
                            SignatureError, SingularMatrix, ZeroMatrix, ZeroPoint)
from projdyn.proj import (HermitianForm, ProjMap, basis_point, coordinate_subspace,
                          dual_action, fs_distance, hyperplane, intersect, intersect_lines,
                          is_general_position, line_through, plucker, point,
                          polar_hyperplane, proj_distance, qp_from_matrix, span,
                          transform_from_line_correspondence,
                          transform_from_point_correspondence)

ints = st.integers(-6, 6)


def test_point_canonical_lift():
    assert point(2, 4, 6) == point(1, 2, 3)
    assert point(1.0, 2.0, 3j) == point(2.0, 4.0, 6j)
    with pytest.raises(ZeroPoint):
        point(0, 0, 0)


def test_line_through_and_intersection():
    e1, e2, e3 = (basis_point(i, 2) for i in (1, 2, 3))
    l12, l23 = line_through(e1, e2), line_through(e2, e3)
    assert intersect_lines(l12, l23) == e2
    with pytest.raises(IdenticalPoints):
        line_through(e1, e1)
    with pytest.raises(SameLine):
        intersect_lines(l12, l12)


def test_subspace_intersection_dimension():
    a = coordinate_subspace([1, 2, 3], 3)
    b = coordinate_subspace([2, 3, 4], 3)
    assert intersect(a, b) == coordinate_subspace([2, 3], 3)
    c = coordinate_subspace([4], 3)
    assert intersect(coordinate_subspace([1], 3), c).basis == []


@given(st.lists(ints, min_size=9, max_size=9), st.lists(ints, min_size=3, max_size=3))
def test_map_action_consistent(entries, v):
    M = [entries[0:3], entries[3:6], entries[6:9]]
    if la.det(la.exact_mat(M)).is_zero() or not any(v):
        return
    g = ProjMap(M)
    p = point(*v)
    assert g.inverse().apply(g.apply(p)) == p
    assert g.to_float().apply(p.to_float()).equals(g.apply(p).to_float(), 1e-8)


def test_singular_and_zero():
    with pytest.raises(SingularMatrix):
        ProjMap([[1, 0], [1, 0]])
    with pytest.raises(ZeroMatrix):
        qp_from_matrix([[0, 0], [0, 0]])


def test_quasi_projective_kernel_image():
    q = qp_from_matrix([[1, 0, 0], [0, 0, 0], [0, 0, 0]])
    assert q.rank == 1
    assert q.kernel == coordinate_subspace([2, 3], 2)
    assert q.image == coordinate_subspace([1], 2)


def test_proj_distance_scale_invariant(rng):
    A = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    assert proj_distance(A, (2 - 3j) * A) < 1e-14
    assert proj_distance(A, np.eye(3)) > 0.1


def test_fs_distance():
    assert fs_distance([1, 0], [0, 1]) == pytest.approx(np.pi / 2)
    assert fs_distance([1, 1j], [2j, -2]) == pytest.approx(0, abs=1e-7)


def test_dual_action_matches_pointwise():
    g = ProjMap([[1, 2, 0], [0, 1, 3], [1, 0, 1]])
    l = hyperplane([1, -1, 2])
    img = dual_action(g, l)
    for b in l.basis:
        assert img.contains(g.apply(b))


def test_plucker_line():
    l = span(point(1, 0, 0, 0), point(0, 1, 0, 0))
    assert plucker(l) == point(1, 0, 0, 0, 0, 0)


def test_frame_correspondence():
    src = [point(1, 0, 0), point(0, 1, 0), point(0, 0, 1), point(1, 1, 1)]
    dst = [point(1, 2, 0), point(0, 1, 5), point(3, 0, 1), point(1, 1, 2)]
    g = transform_from_point_correspondence(src, dst)
    assert all(g.apply(p) == q for p, q in zip(src, dst))
    with pytest.raises(DegenerateConfiguration):
        transform_from_point_correspondence([point(1, 0, 0), point(0, 1, 0), point(1, 1, 0), point(0, 0, 1)], dst)


def test_line_correspondence():
    src = [hyperplane(c) for c in ([1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1])]
    dst = [hyperplane(c) for c in ([1, 2, 0], [0, 1, 5], [3, 0, 1], [1, 1, 2])]
    assert is_general_position(src) and is_general_position(dst)
    g = transform_from_line_correspondence(src, dst)
    for s, d in zip(src, dst):
        assert g.apply(s) == d


def test_hermitian_form_and_polar():
    H = HermitianForm(n=3)
    p = point(1, 0, 0, 0)     # null vector of the corner form
    assert abs(H(p.lift, p.lift)) == 0
    pol = polar_hyperplane(p, H)
    assert pol.contains(p)    # tangent: a null point lies on its polar
    with pytest.raises(SignatureError):
        HermitianForm(np.eye(4))
