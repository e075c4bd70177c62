import json
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from projdyn.counting import (OCTAGON_VOLUME, FuchsianSpec, ball_volume, cayley_counts,
                              critical_exponent, cyclic_series_closed_form, cyclic_spec,
                              entropy_volume_estimate, ford_domain_area, measured_nhat,
                              nhat_bounds, nhat_ceiling_bound, octagon_spec, orbit_enumerate,
                              orbital_count, overlap_radius, poincare_distance, poincare_series,
                              ps_atoms, quotient_distance, reference_spec, slice_volume_bound,
                              translation)
from projdyn.errors import InputError, OutsideDisk, TooFewRows, TooFewSamples

disk = st.builds(lambda r, t: r * complex(math.cos(t), math.sin(t)),
                 st.floats(0, 0.95), st.floats(0, 2 * math.pi))


@pytest.fixture(scope="module")
def ref():
    return reference_spec()


@pytest.fixture(scope="module")
def ref_table(ref):
    return orbit_enumerate(ref, 0, 0, 40, radius=12)


def mobius(rng):
    a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
    a = a / abs(a) * math.sqrt(1 + abs(b) ** 2)
    return a, b


# disk geometry

def test_distance_examples():
    assert poincare_distance(0, 0) == 0
    assert poincare_distance(0, 0.5) == pytest.approx(math.log(3), abs=1e-15)
    with pytest.raises(OutsideDisk):
        poincare_distance(0, 1)


def test_distance_isometry_invariance(rng):
    for _ in range(100):
        a, b = mobius(rng)
        z, w = (rng.uniform(0, 0.9) * np.exp(2j * np.pi * rng.uniform(size=2)))
        g = lambda x: (a * x + b) / (np.conj(b) * x + np.conj(a))
        assert abs(poincare_distance(g(z), g(w)) - poincare_distance(z, w)) < 1e-10


@given(disk, disk, disk)
def test_triangle_inequality(x, y, z):
    assert poincare_distance(x, z) <= poincare_distance(x, y) + poincare_distance(y, z) + 1e-9
    assert poincare_distance(x, y) == pytest.approx(poincare_distance(y, x), abs=1e-12)


def test_ball_volume_by_quadrature():
    r = 2.5
    R = math.tanh(r / 2)
    area = mpmath.quad(lambda t: 2 * math.pi * 4 * t / (1 - t * t) ** 2, [0, R])
    assert float(area) == pytest.approx(ball_volume(r), rel=1e-12)


def test_translation_sends_zero():
    a, b = translation(0.3 + 0.4j)
    assert b / np.conj(a) == pytest.approx(0.3 + 0.4j)


# specs

def test_octagon_area_is_6pi():
    assert OCTAGON_VOLUME == 6 * math.pi
    assert ford_domain_area(octagon_spec()) == pytest.approx(6 * math.pi)
    # direct quadrature of the regular ideal octagon, one of eight sectors.
    # The side from 1 to e^{i pi/4} is |x - c| = tan(pi/8), |c| = sec(pi/8); along the
    # ray at angle pi/8 + u it sits at r = 1/(c cos u + S), S^2 = c^2 cos^2 u - 1, and
    # the integral of 4r/(1-r^2)^2 from 0 to there is 1/(S (S + c cos u)).
    with mpmath.workdps(30):
        a = mpmath.pi / 8
        c = 1 / mpmath.cos(a)

        def f(u):
            S = mpmath.sqrt(mpmath.sin(a - u) * mpmath.sin(a + u)) * c
            return 1 / (S * (S + c * mpmath.cos(u)))

        sector = mpmath.quad(f, [-a, 0, a])
    assert float(8 * sector) == pytest.approx(6 * math.pi, rel=1e-12)


def test_spec_validation_and_round_trip(ref):
    with pytest.raises(InputError):
        FuchsianSpec(((0.5, 0.1),))
    with pytest.raises(InputError):
        FuchsianSpec(([[2, 0], [0, 1]],))
    with pytest.raises(InputError):
        FuchsianSpec(())
    doc = json.loads(json.dumps(ref.as_dict()))
    assert FuchsianSpec.from_dict(doc) == ref
    with pytest.raises(InputError):
        FuchsianSpec.from_dict({**doc, "extra": 1})
    M = [[math.cosh(1), math.sinh(1)], [math.sinh(1), math.cosh(1)]]
    assert FuchsianSpec((M,)).generators[0] == pytest.approx((math.cosh(1), math.sinh(1)))


def test_reference_is_schottky(ref):
    cert = ref.schottky_certificate()
    assert cert is not None and cert["gap"] > 0
    assert ref.rank == 4 and len(ref.letters()) == 8
    word, y = ref.reduce(ref.apply("abC", 0.1))
    assert word == "abC" and abs(y - 0.1) < 1e-12


# orbit tables and counts

def test_bound_zero_table(ref):
    t = orbit_enumerate(ref, 0.1, 0.2j, 0)
    assert len(t) == 1 and t.words == [""]
    assert t.distances[0] == pytest.approx(poincare_distance(0.1, 0.2j))


def test_cyclic_axis_distances():
    ell = 1.3
    t = orbit_enumerate(cyclic_spec(ell), 0, 0, 6)
    want = sorted(abs(n) * ell for n in range(-6, 7))
    assert np.allclose(t.distances, want, atol=1e-12)


def test_ball_row_count(ref):
    t = orbit_enumerate(ref, 0, 0, 3)
    assert len(t) <= cayley_counts(3)[1] == 457
    assert len(t) == 457                      # a free group has no repeats
    assert np.all(np.diff(t.distances) >= -1e-11)


def test_radius_pruning_matches_full(ref):
    full = orbit_enumerate(ref, 0, 0.1j, 4)
    pruned = orbit_enumerate(ref, 0, 0.1j, 4, radius=7.0)
    keep = full.distances < 7.0
    assert np.allclose(full.distances[keep], pruned.distances)


def test_counting_function(ref_table):
    assert orbital_count(ref_table, 0) == (0, False)
    rs = np.linspace(0, ref_table.horizon, 40)
    counts = [orbital_count(ref_table, r)[0] for r in rs]
    assert all(a <= b for a, b in zip(counts, counts[1:]))
    assert orbital_count(ref_table, ref_table.horizon + 1)[1]
    with pytest.raises(InputError):
        orbital_count(ref_table, -1)


def test_count_symmetry(ref, rng):
    for _ in range(5):
        z, w = 0.3 * (rng.uniform(size=2) * np.exp(2j * np.pi * rng.uniform(size=2)))
        t1 = orbit_enumerate(ref, z, w, 30, radius=10)
        t2 = orbit_enumerate(ref, w, z, 30, radius=10)
        top = min(t1.horizon, t2.horizon)
        for r in np.linspace(0.1, top, 25):
            assert orbital_count(t1, r)[0] == orbital_count(t2, r)[0]


def test_packing_bound(ref_table):
    # disjoint eps-balls around orbit points inside B(r + eps)
    eps = 0.5 * ref_table.distances[1]
    assert eps == pytest.approx(overlap_radius(reference_spec(), 0))
    for r in np.linspace(0.5, ref_table.horizon, 20):
        n, trunc = orbital_count(ref_table, r)
        assert not trunc
        assert n <= math.sinh((r + eps) / 2) ** 2 / math.sinh(eps / 2) ** 2


def test_cayley_counts():
    assert cayley_counts(0) == (1, 1)
    assert cayley_counts(1) == (8, 9)
    assert cayley_counts(3) == (392, 457)
    for n in range(1, 13):
        s, b = cayley_counts(n)
        assert b - cayley_counts(n - 1)[1] == s
        assert 3 * b == 3 + 4 * (7 ** n - 1)
    assert cayley_counts(5, rank=1) == (2, 11)
    with pytest.raises(InputError):
        cayley_counts(-1)


def test_nhat_bounds():
    comb, vol = nhat_bounds(1, 1.0, ball_volume(1.0), 2.0)
    assert comb == 65
    assert vol == pytest.approx(49 / 4 * math.e / ball_volume(1.0) * math.exp(2) + 16)
    assert slice_volume_bound(2.0, 1.0, ball_volume(1.0)) == pytest.approx(6 * math.pi * vol)
    assert nhat_ceiling_bound(9) == 65 and nhat_ceiling_bound(10) == 457
    with pytest.raises(InputError):
        nhat_bounds(0, 1.0, 1.0, 1.0)


def test_measured_nhat(ref, ref_table):
    for R in (1.0, 2.5, 4.0, 5.0):
        n = orbital_count(ref_table, R)[0]
        assert measured_nhat(ref, 0, R, 24, 240) <= 49 * n + 16


# series, exponent, atoms

def test_cyclic_series_closed_form():
    ell, s = 2.0, 0.5
    t = orbit_enumerate(cyclic_spec(ell), 0, 0, 20)
    v = poincare_series(t, s)
    assert v.tail_bound < 1e-8
    assert abs(v.value - cyclic_series_closed_form(s, ell)) <= v.tail_bound


def test_series_monotone(ref):
    t = orbit_enumerate(ref, 0, 0, 3)
    vals = [poincare_series(t, s).value for s in (0.8, 1.0, 1.5, 3.0)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    one = orbit_enumerate(ref, 0, 0.3, 0)
    assert poincare_series(one, 2.0).value == pytest.approx(math.exp(-2 * poincare_distance(0, 0.3)))
    sums = [poincare_series(orbit_enumerate(ref, 0, 0, b), 1.0).value for b in (1, 2, 3)]
    assert sums[0] < sums[1] < sums[2]


def test_exponent_cyclic_tends_to_zero():
    spec = cyclic_spec(2.0)
    ests = [critical_exponent(orbit_enumerate(spec, 0, 0, b)).limsup for b in (20, 60, 200)]
    assert ests[0] > ests[1] > ests[2] and ests[2] < 0.05


def test_exponent_stable(ref):
    e8 = critical_exponent(orbit_enumerate(ref, 0, 0, 8, radius=14))
    e10 = critical_exponent(orbit_enumerate(ref, 0, 0, 10, radius=14))
    for e in (e8, e10):
        assert 0 < e.limsup < 1 and 0 < e.bisection < 1
    assert abs(e8.limsup - e10.limsup) <= 0.05
    assert abs(e8.bisection - e10.bisection) <= 0.05


def test_exponent_too_few_rows(ref):
    with pytest.raises(TooFewRows):
        critical_exponent(orbit_enumerate(ref, 0, 0, 1))


def test_atoms(ref, ref_table):
    m = ps_atoms(ref_table, 1.2)
    assert abs(m.total - 1) <= 1e-12
    assert np.all(np.diff(m.weights) <= 1e-15)
    for r in (3.0, 6.0, 9.0):
        head = math.fsum(m.weights[:orbital_count(ref_table, r)[0]].tolist())
        assert abs(m.mass_outside(r) - (1 - head)) <= 1e-12
    single = ps_atoms(orbit_enumerate(ref, 0, 0, 0), 1.0)
    assert single.atoms == [(0j, 1.0)]


def test_atoms_need_companion(ref):
    t = orbit_enumerate(ref, 0, 0.2, 3)
    with pytest.raises(InputError):
        ps_atoms(t, 1.0)
    comp = orbit_enumerate(ref, 0.2, 0.2, 3)
    m = ps_atoms(t, 1.0, companion=comp)
    assert abs(m.total - 1) <= 1e-12 and m.scale > 0
    with pytest.raises(InputError):
        ps_atoms(t, 1.0, companion=t)


def test_atoms_with_h(ref):
    t = orbit_enumerate(ref, 0, 0, 3)
    m = ps_atoms(t, 0.5, h=lambda x: math.log(1 + x))
    assert abs(m.total - 1) <= 1e-12


def test_quotient_distance(ref, rng):
    z, w = 0.1, 0.2j
    assert quotient_distance(cyclic_spec(1.0), z, w, 0) == pytest.approx(poincare_distance(z, w))
    for _ in range(100):
        z, w = 0.8 * rng.uniform(size=2) * np.exp(2j * np.pi * rng.uniform(size=2))
        d = [quotient_distance(ref, z, w, b) for b in (0, 1, 2)]
        assert d[0] >= d[1] >= d[2]
    gw = ref.apply("aB", w)
    assert quotient_distance(ref, z, gw, 4) <= quotient_distance(ref, z, w, 2) + 1e-12


def test_entropy_volume():
    samples = [(r, ball_volume(r)) for r in (6.0, 8.0, 10.0)]
    assert 0.95 <= entropy_volume_estimate(samples) <= 1.05
    assert entropy_volume_estimate([(1, 5.0), (2, 5.0), (3, 5.0)]) == pytest.approx(0, abs=1e-12)
    with pytest.raises(TooFewSamples):
        entropy_volume_estimate([(1, 1.0), (2, 2.0)])
    with pytest.raises(InputError):
        entropy_volume_estimate([(2, 1.0), (1, 2.0), (3, 3.0)])


def test_csv_export(ref):
    t = orbit_enumerate(ref, 0, 0, 1)
    lines = t.to_csv().splitlines()
    assert lines[0] == "word,re,im,distance" and len(lines) == 10
    assert lines[1].startswith("1,")
