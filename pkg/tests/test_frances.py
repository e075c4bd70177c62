import json
import time

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import dynamic_image_trial
from projdyn.corpus import data_path
from projdyn.errors import BadSubset, EmptyInput, InputError, ZeroPoint
from projdyn.frances import (SingularSequenceSpec, apply_sequence, blocks_of, cartan_projection,
                             check_purely_dimensional, compound, dynamic_image, flags_of,
                             frances_cyclic, frances_group_approx, frances_sequence,
                             limit_flag, middle_space, polygon_export, realizing_sequence,
                             tends_simply_to_infinity)
from projdyn.jsonio import parse_matrix
from projdyn.limits import WordOrbit, approximate_kulkarni_union
from projdyn.proj import (HermitianForm, ProjMap, ProjPoint, ProjSubspace, coordinate_subspace,
                          corner_form_matrix, distance_to_subspace, fs_distance,
                          polar_hyperplane)


def nine():
    with open(data_path("nine.json")) as fh:
        doc = json.load(fh)
    return blocks_of(SingularSequenceSpec.from_pairs(doc["entries"])), doc["hulls"]


def test_nine_blocks():
    bd, _ = nine()
    assert bd.dims == (3, 1, 2, 2, 1)
    assert bd.m == 5 and bd.n == 8
    assert bd.block_of(4) == 2 and bd.block_of(9) == 5


def test_nine_middle_space():
    bd, _ = nine()
    s0, V = middle_space(bd)
    assert s0 == 2
    assert V == coordinate_subspace([1, 2, 3, 4], 8)


def test_nine_pentagon():
    bd, hulls = nine()
    doc = polygon_export(bd, hulls)
    assert doc.m == 5
    d = doc.as_dict()
    assert d["hulls"] == [{"subset": [1, 2, 3], "dim": 5}]
    assert d["attracting"] == 1 and d["repelling"] == 5
    svg = doc.svg()
    outline = svg.split("\n")[2]
    assert outline.startswith("<polygon") and outline.count(",") == 5
    assert svg.count("<circle") == 5


def test_nine_limit_blocks_and_notes():
    bd, _ = nine()
    # c = (7, 1, 1/7) in block 1: D_1 = diag(1, 1/7, 1/49)
    assert [float(x) for x in bd.limit_blocks[0]] == pytest.approx([1, 1 / 7, 1 / 49])
    assert bd.notes == []


def test_polygon_bad_subset():
    bd, _ = nine()
    with pytest.raises(BadSubset):
        polygon_export(bd, [(0, 2)])
    with pytest.raises(BadSubset):
        polygon_export(bd, [(4, 6)])


def test_flags():
    bd, _ = nine()
    fl = flags_of(bd)
    assert [V.proj_dim for V in fl.V] == [2, 3, 5, 7, 8]
    e5 = np.eye(9)[4]
    assert fl.in_W(2, e5) and not fl.in_V(2, e5)
    assert not fl.in_W(1, np.eye(9)[8])


def test_sequence_spec_validation():
    with pytest.raises(InputError):
        SingularSequenceSpec.from_pairs([(1, 2), (1, 3)])
    with pytest.raises(InputError):
        SingularSequenceSpec.from_pairs([(0, 2)])
    with pytest.raises(EmptyInput):
        SingularSequenceSpec.from_pairs([])


def test_out_of_order_entries_are_noted():
    bd = blocks_of(SingularSequenceSpec.from_pairs([(1, 3), (2, 3), (1, 1)]))
    assert bd.dims == (2, 1) and len(bd.notes) == 1


def test_a_eps_forward():
    for name, want in (("a-eps-half.json", [1, 2]), ("a-eps-zero.json", [1, 2, 3])):
        with open(data_path(name)) as fh:
            M = parse_matrix(json.load(fh)["matrix"])
        assert frances_sequence(M) == coordinate_subspace(want, 3)


def test_a_eps_cyclic_union():
    with open(data_path("a-eps-half.json")) as fh:
        M = parse_matrix(json.load(fh)["matrix"])
    L = frances_cyclic(M)
    assert L.contains_subspace(coordinate_subspace([1, 2], 3))
    assert L.contains_subspace(coordinate_subspace([3, 4], 3))


def test_dynamic_image_example():
    bd = blocks_of(SingularSequenceSpec.from_pairs([(1, 4), (2, 4), (1, 2), (1, 1)]))
    img = dynamic_image(bd, [0, 0, 3, 1])
    assert img.block == 2
    assert img.closure() == ProjSubspace([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
    img = dynamic_image(bd, [1, 1, 0, 5])
    assert img.block == 1
    assert fs_distance(img.apex, [1, 2, 0, 0]) < 1e-12
    with pytest.raises(ZeroPoint):
        dynamic_image(bd, [0, 0, 0, 0])
    with pytest.raises(InputError):
        realizing_sequence(bd, [0, 0, 3, 1], [], 10)


def test_apply_sequence_survives_underflow():
    bd = blocks_of(SingularSequenceSpec.from_pairs([(1, 10), (1, 1)]))
    v = apply_sequence(bd, 1e4, [0, 1])
    assert np.allclose(v, [0, 1])
    v = apply_sequence(bd, 1e4, [1e-300, 1])
    assert np.allclose(v, [1, 0])


def test_dynamic_image_oracle(rng):
    t = time.time()
    worst = [dynamic_image_trial(rng)[0] for _ in range(40)]
    assert max(worst) <= 1e-6
    assert time.time() - t < 60


@given(st.lists(st.floats(-3, 3), min_size=9, max_size=9))
def test_cartan_projection_unitary_invariance(xs):
    rng = np.random.default_rng(abs(hash(tuple(xs))) % 2**32)
    g = np.array(xs).reshape(3, 3) + np.eye(3) * 4
    Q1, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    Q2, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    U, s, K = cartan_projection(g)
    assert np.allclose(U @ np.diag(s) @ K.conj().T, g, atol=1e-8)
    s2 = cartan_projection(Q1 @ g @ Q2)[1]
    assert np.max(np.abs(s - s2)) <= 1e-8 * max(1.0, s[0])
    assert np.all(np.diff(s) <= 1e-12)


def test_compound_is_multiplicative(rng):
    A, B = rng.normal(size=(4, 4)), rng.normal(size=(4, 4))
    assert np.allclose(compound(A @ B, 2), compound(A, 2) @ compound(B, 2))
    assert np.isclose(compound(A, 4)[0, 0], np.linalg.det(A))


def test_limit_flag_of_diagonal():
    g = np.diag([5.0, 2.0, 2.0, 0.1])
    assert ProjSubspace(list(limit_flag(g, 1).T)) == coordinate_subspace([1], 3, exact=False)
    assert ProjSubspace(list(limit_flag(g, 3).T)) == coordinate_subspace([1, 2, 3], 3, exact=False)


def test_simple_infinity():
    r = tends_simply_to_infinity(np.diag([4.0, 1.0, 1.0, 0.25]))
    assert r.ok and r.dims == (1, 2, 1)


def test_purely_dimensional():
    lines = [coordinate_subspace([1, 2], 3), coordinate_subspace([3, 4], 3)]
    assert check_purely_dimensional(lines, 3) == {"k": 1, "ok": True}
    mixed = lines + [coordinate_subspace([1], 3)]
    assert not check_purely_dimensional(mixed, 3)["ok"]
    with pytest.raises(EmptyInput):
        check_purely_dimensional([], 3)


@pytest.mark.parametrize("gens", [
    [[[0.125, 0, 0], [0, 1, 1], [0, 0, 1]]],
    [np.diag([2.0, 1.0, 0.5])],
    [np.diag([2.0, 1.0, 0.5]), np.diag([1.0, 3.0, 1 / 3])],
    [np.diag([2.0, 1.0, 0.5]), np.array([[5, 4, 0], [4, 5, 0], [0, 0, 3]]) / 3.0],
])
def test_frances_inside_kulkarni(gens):
    o = WordOrbit.build([np.asarray(g, dtype=float) for g in gens], 3)
    K = approximate_kulkarni_union(o)
    Fs = frances_group_approx(o)
    assert Fs
    for L in Fs:
        assert K.contains_subspace(L, 1e-7)


def _u13(rng, J):
    """A random element of U(1,3) for the form J (J = J^-1 = J^*)."""
    Y = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    X = Y - J @ Y.conj().T @ J
    X *= 0.5 / np.linalg.norm(X)
    P, term = np.eye(4, dtype=complex), np.eye(4, dtype=complex)
    for j in range(1, 30):
        term = term @ X / j
        P = P + term
    return P


def test_pu13_tangent_hyperplane(rng):
    H = HermitianForm(corner_form_matrix(3))
    J = np.array([[complex(x) for x in r] for r in H.matrix])
    for _ in range(5):
        P = _u13(rng, J)
        assert np.allclose(P.conj().T @ J @ P, J, atol=1e-10)
        lam, th = rng.uniform(1.5, 4.0), rng.uniform(0, 2 * np.pi, 2)
        g = P @ np.diag([lam, np.exp(1j * th[0]), np.exp(1j * th[1]), 1 / lam]) @ np.linalg.inv(P)
        L = frances_sequence(g)
        p = P[:, 0]
        assert abs(p.conj() @ J @ p) < 1e-9              # the attracting point is null
        T = polar_hyperplane(ProjPoint(p), H)
        assert L.proj_dim == 2 and L.equals(T, 1e-7)


def test_proper_discontinuity_witness(rng):
    g = np.diag([3.0, 1.5, 0.5, 1 / 2.25])
    Q = rng.normal(size=(4, 4))
    g = Q @ g @ np.linalg.inv(Q)
    L = frances_cyclic(g)
    gk = [np.linalg.matrix_power(g, k) for k in range(-30, 31) if abs(k) >= 3]
    for _ in range(10):
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        w = rng.normal(size=4) + 1j * rng.normal(size=4)
        assert L.distance(z) > 1e-3 and L.distance(w) > 1e-3
        assert min(fs_distance(h @ w, z) for h in gk) > 1e-9


def test_ambient_frame_of_conjugated_sequence(rng):
    Q = rng.normal(size=(4, 4))
    g = Q @ np.diag([3.0, 1.0, 1.0, 1 / 3]) @ np.linalg.inv(Q)
    L = frances_sequence(g)
    want = ProjSubspace([Q[:, 0], Q[:, 1], Q[:, 2]])
    assert L.equals(want, 1e-7)
    assert distance_to_subspace(Q[:, 3], L) > 1e-3
    assert ProjMap(g).exact is False
