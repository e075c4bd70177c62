"""Critical exponent estimates for the reference Schottky group as the enumeration grows."""
import argparse

from projdyn.counting import critical_exponent, orbit_enumerate, reference_spec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radius", type=float, default=14.0)
    ap.add_argument("--bounds", type=int, nargs="+", default=[6, 8, 10, 12, 16])
    a = ap.parse_args()
    spec = reference_spec()
    print(f"{'bound':>5} {'rows':>7} {'horizon':>8} {'limsup':>8} {'bisect':>8}")
    for b in a.bounds:
        t = orbit_enumerate(spec, 0, 0, b, radius=a.radius)
        e = critical_exponent(t)
        print(f"{b:>5} {e.rows:>7} {e.horizon:>8.3f} {e.limsup:>8.4f} {e.bisection:>8.4f}")


if __name__ == "__main__":
    main()
