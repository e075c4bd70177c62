"""Bundled worked examples, each a CLI invocation on a shipped input."""
from __future__ import annotations

from importlib import resources

from .errors import InputError


def data_path(name: str) -> str:
    return str(resources.files("projdyn").joinpath("data", name))


# name -> (description, argv with {data} placeholders)
CORPUS = {
    "classification-table": ("the ten canonical forms of the element taxonomy",
                             ["classify", "--batch", "{data}/canonical.json"]),
    "mu2-limits": ("quasi-projective limits of the mu = 2, w = 1 generator",
                   ["limits", "--group", "{data}/mu2.json", "--max-word-length", "4"]),
    "falso-hopf": ("W = Z + Z sqrt2 with mu(1) = e^-1, mu(sqrt2) = e^sqrt2",
                   ["kulkarni", "case1", "--spec", "{data}/falso-hopf.json"]),
    "diagonal-d1": ("Gamma_{4,1/2}", ["kulkarni", "diagonal", "--alpha", "4", "--beta", "1/2"]),
    "diagonal-d2": ("Gamma_{4,2}", ["kulkarni", "diagonal", "--alpha", "4", "--beta", "2"]),
    "diagonal-d2-inverse": ("Gamma_{1/4,1/2}", ["kulkarni", "diagonal", "--alpha", "1/4", "--beta", "1/2"]),
    "diagonal-d3": ("Gamma_{2,1/3}", ["kulkarni", "diagonal", "--alpha", "2", "--beta", "1/3"]),
    "diagonal-d4": ("Gamma_{2,3}", ["kulkarni", "diagonal", "--alpha", "2", "--beta", "3"]),
    "diagonal-d5": ("Gamma_{2,e^{2 pi i sqrt2}}",
                    ["kulkarni", "diagonal", "--alpha", "2",
                     "--beta=-0.8582161856688175+0.5132883971570619i", "--hint-beta", "irrational"]),
    "layers": ("four-layer ranks of a triangular group",
               ["layers", "--group", "{data}/layers.json"]),
    "nine-blocks": ("block decomposition of a 9 x 9 Cartan sequence",
                    ["frances", "blocks", "--spec", "{data}/nine.json"]),
    "a-eps-half": ("A_eps at eps = 1/2", ["frances", "cyclic", "--matrix", "{data}/a-eps-half.json"]),
    "a-eps-zero": ("A_eps at eps = 0", ["frances", "cyclic", "--matrix", "{data}/a-eps-zero.json"]),
    "arrangement-2-3": ("q table at (zeta1, zeta2) = (2, 3)",
                        ["arrange", "qtable", "--param", "2", "3"]),
    "slice-2-3": ("slice at z = (5, 7), eta = -1",
                  ["arrange", "slice", "--param", "2", "3", "--z", "5", "7", "--eta", "-1"]),
    "schottky4-orbit": ("rank-4 Schottky orbit table to word length 3",
                        ["count", "orbit", "--spec", "{data}/schottky4.json", "--bound", "3"]),
    "cyclic-series": ("Poincare series of a cyclic group of translation length 2",
                      ["count", "series", "--spec", "{data}/cyclic.json", "--bound", "20", "-s", "0.5"]),
}


def corpus_argv(name: str) -> list:
    if name not in CORPUS:
        raise InputError(f"unknown corpus entry {name!r}; try `corpus list`")
    root = str(resources.files("projdyn").joinpath("data"))
    return [a.replace("{data}", root) for a in CORPUS[name][1]]
