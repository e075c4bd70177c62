"""Run every bundled example and write its JSON (and SVG when there is one) to a directory."""
import argparse
import os

from projdyn.cli import run
from projdyn.corpus import CORPUS


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir", nargs="?", default="corpus-out")
    a = ap.parse_args()
    os.makedirs(a.outdir, exist_ok=True)
    for name in sorted(CORPUS):
        argv = ["corpus", "run", name, "--json", os.path.join(a.outdir, name + ".json"),
                "--svg", os.path.join(a.outdir, name + ".svg")]
        code, _, err = run(argv)
        print(f"{code}  {name:24s} {CORPUS[name][0]}" + (f"  {err.strip()}" if code else ""))


if __name__ == "__main__":
    main()
