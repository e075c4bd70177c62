"""Push points near z through a diagonal Cartan sequence and watch them land in V_z."""
import argparse

import numpy as np

from projdyn.frances import (SingularSequenceSpec, apply_sequence, blocks_of, dynamic_image,
                             realizing_sequence, realizing_target)
from projdyn.proj import fs_distance


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("-k", type=float, default=60.0)
    a = ap.parse_args()
    rng = np.random.default_rng(a.seed)
    np.set_printoptions(precision=4, suppress=True)
    bd = blocks_of(SingularSequenceSpec.from_pairs([(1, 4), (3, 4), (1, 2), (2, 2), (1, 1)]))
    z = np.array([0, 0, 1, 0.5, 2], dtype=complex)
    img = dynamic_image(bd, z)
    print("blocks", bd.dims, " ", img.describe())
    for j in range(5):
        zk = z + 1e-12 * (rng.normal(size=5) + 1j * rng.normal(size=5))
        zk[:2] = np.exp(-rng.uniform(10, 40)) * rng.normal(size=2)
        y = apply_sequence(bd, a.k, zk)
        print(f"  g_k z_k = {y}   dist to V_z {img.distance(y):.1e}")
    zeta = [rng.normal(size=2)]
    X = realizing_sequence(bd, z, zeta, a.k)
    t = realizing_target(bd, z, zeta)
    print(f"target {t / np.linalg.norm(t)}")
    print(f"  |X_k - z| {fs_distance(X, z):.1e}, |g_k X_k - target| "
          f"{fs_distance(apply_sequence(bd, a.k, X), t):.1e}")


if __name__ == "__main__":
    main()
