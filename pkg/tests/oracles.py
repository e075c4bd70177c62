"""Independent checks shared by the unit and acceptance suites."""
import json
from fractions import Fraction as F

import numpy as np

from projdyn.classify import RationalityHint
from projdyn.corpus import data_path
from projdyn.frances import (SingularSequenceSpec, apply_sequence, blocks_of,
                             dynamic_image, realizing_sequence, realizing_target)
from projdyn.jsonio import parse_matrix
from projdyn.proj import fs_distance


def _hint(s):
    if s is None:
        return None
    if s.startswith("rational:"):
        return RationalityHint.rational(F(s.split(":")[1]))
    return RationalityHint(s)


def canonical_items():
    with open(data_path("canonical.json")) as fh:
        doc = json.load(fh)
    return [(it["name"], parse_matrix(it["matrix"]), _hint(it.get("hint"))) for it in doc["items"]]


def random_conjugator(rng, cond_max=100.0):
    while True:
        P = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        if np.linalg.cond(P) <= cond_max:
            return P


def random_sequence(rng):
    """A random block structure with distinct block rates and random c_i."""
    sizes = rng.integers(1, 4, size=rng.integers(2, 5))
    logs = np.cumsum(rng.uniform(0.3, 2.0, size=len(sizes)))[::-1]
    pairs = []
    for lb, s in zip(logs, sizes):
        pairs += [(float(rng.uniform(0.2, 5.0)), float(np.exp(lb))) for _ in range(s)]
    return blocks_of(SingularSequenceSpec.from_pairs(pairs))


def dynamic_image_trial(rng, targets=20):
    """One oracle trial. Returns the worst defect seen and the leading block."""
    bd = random_sequence(rng)
    N = bd.n + 1
    i = int(rng.integers(1, bd.m + 1))
    z = rng.normal(size=N) + 1j * rng.normal(size=N)
    for b in bd.blocks[:i - 1]:
        z[b] = 0
    img = dynamic_image(bd, z)
    assert img.block == i
    rates = [bd.log_alpha(j, 1) - bd.log_alpha(j, 0) for j in range(1, bd.m + 1)]
    k = 60.0 / np.min(-np.diff(rates))
    defects = []
    # orbit accumulation: g_k applied near z lands near V_z
    spread = bd.log_alpha(1, k) - bd.log_alpha(i, k)
    for _ in range(targets):
        T = np.full(N, 30.0)
        for b in bd.blocks[:i - 1]:
            T[b] = rng.uniform(15.0, spread + 5.0, size=len(b))
        u = rng.normal(size=N) + 1j * rng.normal(size=N)
        zk = z + u * np.exp(-T)
        defects.append(img.distance(apply_sequence(bd, k, zk)))
    # explicit realizing sequences hit prescribed targets
    for _ in range(targets):
        zetas = [rng.normal(size=len(b)) + 1j * rng.normal(size=len(b)) for b in bd.blocks[:i - 1]]
        X = realizing_sequence(bd, z, zetas, k)
        t = realizing_target(bd, z, zetas)
        defects += [fs_distance(X, z), fs_distance(apply_sequence(bd, k, X), t), img.distance(t)]
    worst = float(np.max(defects))     # NaN propagates and then fails
    return worst, i
