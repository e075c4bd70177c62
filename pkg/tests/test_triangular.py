import cmath
import math
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from projdyn.errors import InputError, NotTriangular, UnresolvedFlags
from projdyn.limits import LimitSetDescriptor, WordOrbit, approximate_kulkarni
from projdyn.proj import ProjMap, coordinate_subspace
from projdyn.scalars import Surd
from projdyn.triangular import (LAYERS, DiagonalPairSpec, WmuSpec, classify_case1,
                                classify_diagonal, cone_line, cone_of, cone_push,
                                decompose_layers, f_class, f_witnesses, g_xy, lambda_maps,
                                layer_of, verify_normality)

r2 = Surd.sqrt(2)
I = Surd(0, 1)
E12_E23 = LimitSetDescriptor([coordinate_subspace([1, 2], 2), coordinate_subspace([2, 3], 2)])


def lines(*ix):
    return LimitSetDescriptor([coordinate_subspace(i, 2) for i in ix])


def falso_hopf():
    return WmuSpec([1, r2], mu_log=[(-1, 0), (r2, 0)])


# twelve groups, two per case of the six-case diagram
CASE1_CORPUS = {
    "C1.1a": WmuSpec([1, I], mu_log=[(1, 0), (0, F(1, 2))]),
    "C1.1b": WmuSpec([1, I], mu_log=[(0, F(1, 3)), (2, 0)]),
    "C1.2a": WmuSpec([1, r2], mu_log=[(0, F(1, 2)), (1, 0)]),
    "C1.2b": WmuSpec([1, r2, I], mu_log=[(0, F(1, 4)), (1, 0), (0, F(1, 2))]),
    "C1.3a": WmuSpec([1, I], mu_log=[(1, 0), (0, r2)]),
    "C1.3b": WmuSpec([1, I], mu_log=[(0, r2), (-2, F(1, 3))]),
    "C1.4a": WmuSpec([1, I], mu_log=[(1, 0), (r2, 0)]),
    "C1.4b": WmuSpec([2, Surd(1, 1)], mu_log=[(-1, F(1, 5)), (r2, 0)]),
    "C1.5a": WmuSpec([1, r2, I], mu_log=[(1, 0), (0, r2), (r2, 0)]),
    "C1.5b": WmuSpec([1, r2, I], mu_log=[(r2, 0), (0, 1 + r2), (1, 0)]),
    "C1.6a": falso_hopf(),
    "C1.6b": WmuSpec([1, r2], mu_log=[(2, F(1, 7)), (r2, 0)]),
}


def rand_upper(draw_vals):
    a, b, c, d, e, f = draw_vals
    return np.array([[a, d, e], [0, b, f], [0, 0, c]], dtype=complex)


nonzero = st.complex_numbers(min_magnitude=0.3, max_magnitude=3, allow_nan=False, allow_infinity=False)
anyc = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


@given(st.tuples(nonzero, nonzero, nonzero, anyc, anyc, anyc),
       st.tuples(nonzero, nonzero, nonzero, anyc, anyc, anyc))
def test_lambda_maps_multiplicative(p, q):
    g, h = rand_upper(p), rand_upper(q)
    lg, lh, lgh = lambda_maps(g), lambda_maps(h), lambda_maps(g @ h)
    for x, y, z in zip(lg, lh, lgh):
        assert abs(complex(z) - complex(x) * complex(y)) <= 1e-9 * (1 + abs(complex(z)))


def test_layers_and_f_classes():
    assert layer_of(g_xy(1, 0)) == LAYERS[0]
    assert layer_of([[1, 0, 0], [0, 1, 1], [0, 0, 1]]) == LAYERS[1]
    assert layer_of([[2, 0, 0], [0, 1, 0], [0, 0, 1]]) == LAYERS[2]
    assert layer_of([[4, 0, 0], [0, 2, 0], [0, 0, F(1, 8)]]) == LAYERS[3]
    assert f_class([[2, 0, 0], [0, 1, 0], [0, 0, F(1, 2)]]) == "F1"
    assert f_class([[1, 1, 0], [0, 1, 0], [0, 0, 1]]) == "F2"
    assert f_class([[1, 0, 0], [0, 1, 1], [0, 0, 1]]) == "F3"
    assert f_class([[1, 1, 1], [0, 1, 1], [0, 0, 1]]) == "F4"
    with pytest.raises(NotTriangular):
        f_class([[1, 0, 0], [1, 1, 0], [0, 0, 1]])


def _commutes(a, b):
    return np.allclose(a @ b, b @ a, atol=1e-9)


@given(st.tuples(nonzero, nonzero, anyc), st.tuples(nonzero, nonzero, anyc))
def test_commuting_pairs_share_f_class(p, q):
    # F2 pairs sharing the block structure commute; mixing F2 with F3 never does
    a2 = np.array([[p[0], p[2] + 1, 0], [0, p[0], 0], [0, 0, p[1]]])
    b2 = np.array([[q[0], q[2] + 1, 0], [0, q[0], 0], [0, 0, q[1]]])
    b3 = np.array([[q[1], 0, 0], [0, q[0], q[2] + 1], [0, 0, q[0]]])
    assert _commutes(a2, b2) and f_class(a2) == f_class(b2) == "F2"
    if f_class(b3) != f_class(a2):
        assert not _commutes(a2, b3)


def test_cone_push_example_and_set_image(rng):
    gamma = np.array([[1, 0, 0], [0, 2, 1], [0, 0, 3]], dtype=complex)
    x, y = cone_push(gamma, (1, 1))
    assert complex(x) == 3 and complex(y) == 1
    l = cone_line(1, 1)
    img = cone_line(complex(x), complex(y))
    for v in l.sample(20, rng):
        assert img.contains(gamma @ v, 1e-9)
    assert cone_push(np.eye(3), (2, 5)) == (2, 5)


def test_cone_of_dedupes_lines():
    c = cone_of([(1, 0), (2, 0), (0, 1)])
    assert len(c.lines) == 2
    assert c.contains_line(cone_line(3, 0))


def test_falso_hopf_condition_f_holds():
    res = classify_case1(falso_hopf())
    assert res.case == "C1.6"
    assert res.condition_f == "holds"
    assert res.kulkarni.equals(E12_E23)


def test_falso_hopf_witnesses_high_precision():
    ws = f_witnesses(falso_hopf())
    mods = []
    with mpmath.workdps(50):
        for wd in ws:
            p, q = wd["n"]
            w = p + q * mpmath.sqrt(2)
            mu = mpmath.exp(-p + q * mpmath.sqrt(2))
            mods.append(abs(w) * mu ** 3)
            assert abs(float(mu) - wd["abs_mu"]) <= 1e-9 * wd["abs_mu"]
    assert all(ws[i + 1]["abs_w"] > 100 * ws[i]["abs_w"] for i in range(len(ws) - 1))
    assert all(ws[i + 1]["abs_mu"] < ws[i]["abs_mu"] for i in range(len(ws) - 1))
    # w mu^3 stays in a fixed annulus
    assert 0.1 < float(min(mods)) and float(max(mods)) < 20


def test_cyclic_w_uses_single_generator_formula():
    res = classify_case1(WmuSpec([1], mu_gens=[2]))
    assert res.cyclic and res.kulkarni.equals(E12_E23)
    res = classify_case1(WmuSpec([1], mu_gens=[I]))
    assert res.kulkarni.equals(lines([1, 2]))


def test_case1_rejects_bad_specs():
    with pytest.raises(InputError):
        WmuSpec([1, 2], mu_gens=[2, 3], mu_log=[(1, 0), (1, 0)])
    with pytest.raises(InputError):
        classify_case1(WmuSpec([1, 2], mu_gens=[2, 3]))      # Q-dependent w
    with pytest.raises(InputError):
        # W = Z + Z sqrt2 with mu(1) = mu(sqrt2)^sqrt2 ... non-discrete Gamma
        classify_case1(WmuSpec([1, r2], mu_log=[(r2, 0), (2, 0)]))


def test_float_case1_needs_flags():
    spec = WmuSpec([1.0, math.sqrt(2)], mu_gens=[cmath.exp(-1), cmath.exp(math.sqrt(2))])
    try:
        res = classify_case1(spec)
    except UnresolvedFlags:
        return
    assert res.provisional


@pytest.mark.parametrize("name", sorted(CASE1_CORPUS))
def test_case1_corpus(name):
    spec = CASE1_CORPUS[name]
    res = classify_case1(spec)
    assert res.case == name[:4]
    o = WordOrbit.build(spec.generators(), 4 if spec.rank == 2 else 3)
    L0, L1, L2 = approximate_kulkarni(o)
    # points and isotropy seen by the finite orbit lie in the symbolic set
    for v in L0.cloud + L1.cloud:
        assert res.kulkarni.distance(v) <= 1e-6
    # everything lies outside the equicontinuity region
    for v in L0.cloud + L1.cloud + L2.cloud:
        assert E12_E23.distance(v) <= 1e-6
    if res.case in ("C1.2", "C1.5", "C1.6"):
        for v in L2.cloud:
            assert res.kulkarni.distance(v) <= 1e-6


@pytest.mark.parametrize("alpha,beta,hints,case,want", [
    (4, F(1, 2), {}, "D1", lines([1, 2], [3])),
    (4, 2, {}, "D2", lines([1, 2], [3])),
    (F(1, 4), F(1, 2), {}, "D2", lines([1, 2], [3])),
    (2, F(1, 3), {}, "D3", lines([1], [2], [3])),
    (2, 3, {}, "D4", lines([1], [2], [3])),
    (2, complex(-0.8582161856688175, 0.5132883971570619), {"beta": "irrational"}, "D5",
     lines([1, 2], [2, 3])),
])
def test_diagonal_cases(alpha, beta, hints, case, want):
    res = classify_diagonal(DiagonalPairSpec(alpha, beta, hints))
    assert res.case == case
    assert res.kulkarni.equals(want)


def test_diagonal_dependence_found():
    res = classify_diagonal(DiagonalPairSpec(4, 2))
    assert tuple(abs(x) for x in res.dependence) == (1, 2)
    assert res.dependence_status == "exact"


def test_decompose_layers_examples():
    r = decompose_layers([g_xy(1, 0), g_xy(0, 1)])
    assert (r.k, r.r, r.m, r.n, r.bound_ok) == (2, 0, 0, 0, True)
    gens = [g_xy(1, 0), ProjMap([[1, 0, 0], [0, 1, 1], [0, 0, 1]]),
            ProjMap([[4, 0, 0], [0, 2, 0], [0, 0, F(1, 8)]])]
    r = decompose_layers(gens)
    assert (r.k, r.r, r.m, r.n) == (1, 1, 0, 1)
    r = decompose_layers([ProjMap([[1, 0, 0], [0, 1, 0], [0, 0, 1]])])
    assert (r.k, r.r, r.m, r.n) == (0, 0, 0, 0)


def test_decompose_layers_permutation_stable():
    gens = [g_xy(1, 0), ProjMap([[1, 0, 0], [0, 1, 1], [0, 0, 1]]),
            ProjMap([[4, 0, 0], [0, 2, 0], [0, 0, F(1, 8)]])]
    base = decompose_layers(gens)
    for perm in ([2, 0, 1], [1, 2, 0]):
        r = decompose_layers([gens[i] for i in perm])
        assert [r.layers[perm.index(i)] for i in range(3)] == base.layers
        assert (r.k, r.r, r.m, r.n) == (base.k, base.r, base.m, base.n)


def test_verify_normality():
    assert verify_normality([g_xy(1, 0)], [[1, 0, 0], [0, 2, 5], [0, 0, 3]]).status in ("confirmed", "refuted")
    assert verify_normality([g_xy(1, 0)], [[1, 0, 0], [0, 1, 0], [0, 0, 7]]).status == "confirmed"
    assert verify_normality([g_xy(1, 0)], [[r2, 0, 0], [0, 1, 0], [0, 0, 1]]).status == "refuted"
    assert verify_normality([g_xy(1, 0)], [[1, 0, 0], [0, 1, 0], [0, 0, 2]], word_bound=0).status == "unknown"
