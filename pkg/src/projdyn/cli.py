"""Command line entry point: JSON in, JSON out.

Exit codes: 0 success, 2 input error, 3 numeric non-resolution.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import arrangements as ar
from . import counting as ct
from . import frances as fr
from . import limits as lm
from . import triangular as tr
from .classify import RationalityHint, classify_element, eigen3
from .corpus import CORPUS, corpus_argv
from .errors import InputError, ProjdynError, SchemaError
from .jsonio import (RunManifest, digest, dump_matrix, dump_scalar, dump_vector, dumps,
                     envelope, load_document, parse_matrix, parse_scalar)
from .proj import ProjMap, ProjSubspace, hyperplane
from .scalars import Surd


class ArgumentError(InputError):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(message)


# input helpers

def _read(arg: str, ctx: dict, name: str) -> str:
    """Inline JSON or a path to a JSON file; records the digest."""
    text = arg if arg.lstrip()[:1] in ("{", "[") else None
    if text is None:
        try:
            with open(arg, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {arg}: {exc.strerror}") from exc
    ctx["inputs"][name] = digest(text)
    return text


def _doc(arg, ctx, name, required=(), optional=()):
    text = _read(arg, ctx, name)
    if text.lstrip().startswith("["):
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"malformed JSON: {exc.msg}") from exc
        return {required[0]: payload} if required else {}
    return load_document(text, required, optional)


def _scalar_arg(s: str):
    s = s.strip()
    if s[:1] in ("{", "["):
        try:
            return parse_scalar(json.loads(s))
        except json.JSONDecodeError as exc:
            raise InputError(f"bad scalar {s!r}") from exc
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return complex(s.replace("i", "j"))
    except ValueError as exc:
        raise InputError(f"bad scalar {s!r}") from exc


def _exactify(x, mode):
    if mode == "float":
        return complex(x)
    if isinstance(x, Fraction):
        return Surd(x)
    return x


def _matrix(rows, mode):
    M = parse_matrix(rows)
    if mode == "float" and not isinstance(M, np.ndarray):
        M = np.array([[complex(x) for x in r] for r in M], dtype=complex)
    return M


def _hint(s):
    if s is None or s == "unknown":
        return RationalityHint()
    if s == "irrational":
        return RationalityHint("irrational")
    if s.startswith("rational:"):
        return RationalityHint.rational(Fraction(s.split(":", 1)[1]))
    raise InputError(f"bad hint {s!r}; use rational:p/q, irrational or unknown")


def _subspace_dict(s: ProjSubspace) -> dict:
    return {"dim": s.proj_dim, "basis": [dump_vector(b) for b in s.basis]}


def _descriptor(d: lm.LimitSetDescriptor) -> dict:
    return {"describe": d.describe(), "dims": d.dims(), "exactness": d.exactness,
            "components": [_subspace_dict(c) for c in d.components]}


def _qp(q) -> dict:
    return {"matrix": dump_matrix(q.matrix), "kernel": _subspace_dict(q.kernel),
            "image": _subspace_dict(q.image)}


# commands

def cmd_classify(a, ctx):
    if a.batch:
        doc = _doc(a.batch, ctx, "batch", ("items",))
        out = []
        for item in doc["items"]:
            extra = set(item) - {"name", "matrix", "hint"}
            if extra:
                raise SchemaError(f"unknown fields {sorted(extra)}")
            g = ProjMap(_matrix(item["matrix"], a.mode))
            c = classify_element(g, _hint(item.get("hint")))
            out.append({"name": item.get("name", ""), **c.as_dict()})
        return {"items": out}, None
    if not a.matrix:
        raise ArgumentError("classify needs --matrix or --batch")
    doc = _doc(a.matrix, ctx, "matrix", ("matrix",), ("hint",))
    g = ProjMap(_matrix(doc["matrix"], a.mode))
    c = classify_element(g, _hint(a.hint or doc.get("hint")))
    ed = eigen3(g)
    return {**c.as_dict(), "eigenvalues": dump_vector(ed.values), "multiplicities": ed.alg_mults}, None


def _group(a, ctx):
    doc = _doc(a.group, ctx, "group", ("generators",))
    return [ProjMap(_matrix(m, a.mode)) for m in doc["generators"]]


def cmd_limits(a, ctx):
    gens = _group(a, ctx)
    orbit = lm.WordOrbit.build(gens, a.max_word_length)
    L0, L1, L2 = lm.approximate_kulkarni(orbit, samples=a.samples, seed=a.seed)
    total = L0.union(L1).union(L2)
    powers = []
    for g in gens:
        row = {}
        for sign in "+-":
            try:
                row[sign] = _qp(lm.qp_limit_of_powers(g, sign))
            except ProjdynError as exc:
                row[sign] = {"error": exc.code}
        powers.append(row)
    out = {"L0": _descriptor(L0), "L1": _descriptor(L1), "L2": _descriptor(L2),
           "kulkarni": _descriptor(total), "orbit_size": len(orbit.elements), "powers": powers}
    if a.emit_cloud:
        cloud = {"schema": "projdyn/1", "points": [dump_vector(v) for v in L0.cloud + L1.cloud + L2.cloud]}
        with open(a.emit_cloud, "w", encoding="utf-8") as fh:
            fh.write(dumps(cloud))
    return out, None


def cmd_kulkarni(a, ctx):
    if a.which == "case1":
        doc = _doc(a.spec, ctx, "spec", ("w",), ("mu", "mu_log", "flags"))
        w = [_exactify(parse_scalar(x), "exact") for x in doc["w"]]
        mu = [_exactify(parse_scalar(x), a.mode) for x in doc["mu"]] if "mu" in doc else None
        logs = None
        if "mu_log" in doc:
            logs = [tuple(_exactify(parse_scalar(x), "exact") for x in pair) for pair in doc["mu_log"]]
        spec = tr.WmuSpec(w, mu_gens=mu, mu_log=logs, flags=doc.get("flags", {}))
        return tr.classify_case1(spec).as_dict(), None
    if a.alpha is None or a.beta is None:
        raise ArgumentError("diagonal needs --alpha and --beta")
    hints = {}
    if a.hint_alpha:
        hints["alpha"] = a.hint_alpha
    if a.hint_beta:
        hints["beta"] = a.hint_beta
    alpha = _exactify(_scalar_arg(a.alpha), a.mode)
    beta = _exactify(_scalar_arg(a.beta), a.mode)
    res = tr.classify_diagonal(tr.DiagonalPairSpec(alpha, beta, hints))
    return res.as_dict(), None


def cmd_layers(a, ctx):
    gens = _group(a, ctx)
    return tr.decompose_layers(gens, word_bound=a.word_bound).as_dict(), None


def cmd_frances(a, ctx):
    if a.which == "cyclic":
        doc = _doc(a.matrix, ctx, "matrix", ("matrix",))
        g = ProjMap(_matrix(doc["matrix"], a.mode))
        forward = fr.frances_sequence(g)
        backward = fr.frances_sequence(g.inverse())
        flag = fr.tends_simply_to_infinity(g)
        return {"forward": _subspace_dict(forward), "backward": _subspace_dict(backward),
                "limit_set": _descriptor(fr.frances_cyclic(g)),
                "tends_simply": flag.ok, "block_dims": list(flag.dims)}, None
    if a.which == "blocks":
        doc = _doc(a.spec, ctx, "spec", ("entries",), ("hulls",))
        spec = fr.SingularSequenceSpec.from_pairs([tuple(p) for p in doc["entries"]])
        bd = fr.blocks_of(spec)
        s0, V = fr.middle_space(bd)
        hulls = [tuple(h) for h in doc.get("hulls", [])]
        poly = fr.polygon_export(bd, hulls)
        out = {"blocks": bd.as_dict(), "middle_block": s0, "middle_space": _subspace_dict(V),
               "polygon": poly.as_dict()}
        return out, poly.svg()
    gens = _group(a, ctx)
    orbit = lm.WordOrbit.build(gens, a.L)
    subs = fr.frances_group_approx(orbit)
    out = {"subspaces": [_subspace_dict(s) for s in subs],
           "descriptor": _descriptor(lm.LimitSetDescriptor(subs, exactness="numeric"))}
    if subs:
        out["purely_dimensional"] = fr.check_purely_dimensional(subs, subs[0].ambient)
    return out, None


def _param(a):
    z1, z2 = (_exactify(_scalar_arg(x), a.mode) for x in a.param)
    return ar.ArrangementParam(z1, z2).check()


def _point(a):
    if not a.z:
        raise ArgumentError("this command needs --z z1 z2")
    return tuple(_exactify(_scalar_arg(x), a.mode) for x in a.z)


def cmd_arrange(a, ctx):
    if a.which == "normalize":
        if not a.lines:
            raise ArgumentError("normalize needs --lines")
        doc = _doc(a.lines, ctx, "lines", ("lines",), ("infinity",))
        lines = [hyperplane([_exactify(parse_scalar(x), a.mode) for x in l]) for l in doc["lines"]]
        inf = doc.get("infinity")
        inf = hyperplane([_exactify(parse_scalar(x), a.mode) for x in inf]) if inf else None
        g, param = ar.normalize_arrangement(lines, inf)
        return {"transform": dump_matrix(g.matrix), "param": [dump_scalar(param.zeta1),
                                                               dump_scalar(param.zeta2)]}, None
    param = _param(a)
    svg = ar.arrangement_svg(param)
    if a.which == "check":
        out = {"param": [dump_scalar(param.zeta1), dump_scalar(param.zeta2)], "in_P": True,
               "general_position": ar.is_general_position(ar.standard_lines(param))}
        if a.z:
            z = _point(a)
            ar.check_point(param, z)
            out["point_ok"] = True
        return out, svg
    if a.which == "qtable":
        q = ar.intersections_q(param)
        return {"q": {f"{i}{j}": dump_vector(v) for (i, j), v in sorted(q.items())}}, svg
    z = _point(a)
    if a.eta is None:
        raise ArgumentError("slice needs --eta")
    eta = ar.INF if a.eta in ("inf", "oo") else _exactify(_scalar_arg(a.eta), a.mode)
    forb = ar.forbidden_eta(param, z)
    out = {"intersection_count": ar.intersection_count(param, z, eta),
           "forbidden": {lab: dump_scalar(v) for lab, v in zip(ar.FORBIDDEN_LABELS, forb)}}
    try:
        geom = ar.slice_points(param, z, eta)
        out["slice_points"] = [dump_vector(p) for p in geom.P]
        out["residuals_zero"] = all((r.is_zero() if isinstance(r, Surd) else abs(r) < 1e-9)
                                    for r in ar.slice_residuals(param, geom))
    except ProjdynError as exc:
        out["slice_points"] = {"error": exc.code}
    return out, svg


def _disk_arg(s):
    return complex(s.replace("i", "j")) if s else 0j


def cmd_count(a, ctx):
    if a.spec:
        doc = _doc(a.spec, ctx, "spec", ("generators",), ("name", "free_rank_claim"))
        spec = ct.FuchsianSpec.from_dict(doc)
    else:
        spec = ct.reference_spec()
    z = _disk_arg(a.base)
    w = _disk_arg(a.target) if a.target else z
    table = ct.orbit_enumerate(spec, z, w, a.bound, radius=a.radius)
    if a.csv:
        with open(a.csv, "w", encoding="utf-8") as fh:
            fh.write(table.to_csv())
    out = {"table": table.as_dict()}
    if a.which == "orbit":
        out["rows"] = [[word or "1", p, d] for word, p, d in table.rows[:a.head]]
        if math.isfinite(table.horizon):
            out["count_at_horizon"] = ct.orbital_count(table, table.horizon)[0]
    elif a.which == "series":
        out["series"] = ct.poincare_series(table, a.s).as_dict()
    elif a.which == "delta":
        out["exponent"] = ct.critical_exponent(table).as_dict()
    else:
        comp = table if z == w else ct.orbit_enumerate(spec, w, w, a.bound, radius=a.radius)
        m = ct.ps_atoms(table, a.s, companion=comp)
        out["measure"] = m.as_dict(limit=a.head)
    return out, None


def cmd_corpus(a, ctx):
    if a.which == "list":
        return {"entries": {k: v[0] for k, v in sorted(CORPUS.items())}}, None
    if not a.name:
        raise ArgumentError("corpus run needs a name")
    return None, corpus_argv(a.name)


# parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--mode", choices=("exact", "float"), default="exact")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", dest="json_out")
    common.add_argument("--svg")

    p = _Parser(prog="projdyn", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", parents=[common])
    c.add_argument("--matrix")
    c.add_argument("--batch")
    c.add_argument("--hint")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("limits", parents=[common])
    c.add_argument("--group", required=True)
    c.add_argument("--max-word-length", type=int, default=4)
    c.add_argument("--samples", type=int, default=64)
    c.add_argument("--emit-cloud")
    c.set_defaults(func=cmd_limits)

    c = sub.add_parser("kulkarni", parents=[common])
    c.add_argument("which", choices=("case1", "diagonal"))
    c.add_argument("--spec")
    c.add_argument("--alpha")
    c.add_argument("--beta")
    c.add_argument("--hint-alpha", choices=("rational", "irrational"))
    c.add_argument("--hint-beta", choices=("rational", "irrational"))
    c.set_defaults(func=cmd_kulkarni)

    c = sub.add_parser("layers", parents=[common])
    c.add_argument("--group", required=True)
    c.add_argument("--word-bound", type=int, default=1)
    c.set_defaults(func=cmd_layers)

    c = sub.add_parser("frances", parents=[common])
    c.add_argument("which", choices=("cyclic", "blocks", "group"))
    c.add_argument("--matrix")
    c.add_argument("--spec")
    c.add_argument("--group")
    c.add_argument("-L", type=int, default=4)
    c.set_defaults(func=cmd_frances)

    c = sub.add_parser("arrange", parents=[common])
    c.add_argument("which", choices=("check", "qtable", "slice", "normalize"))
    c.add_argument("--param", nargs=2, default=("2", "3"))
    c.add_argument("--z", nargs=2)
    c.add_argument("--eta")
    c.add_argument("--lines")
    c.set_defaults(func=cmd_arrange)

    c = sub.add_parser("count", parents=[common])
    c.add_argument("which", choices=("orbit", "series", "delta", "measure"))
    c.add_argument("--spec")
    c.add_argument("--base", default="0")
    c.add_argument("--target")
    c.add_argument("--bound", type=int, default=4)
    c.add_argument("--radius", type=float)
    c.add_argument("-s", type=float, default=1.0)
    c.add_argument("--head", type=int, default=20)
    c.add_argument("--csv")
    c.set_defaults(func=cmd_count)

    c = sub.add_parser("corpus", parents=[common])
    c.add_argument("which", choices=("list", "run"))
    c.add_argument("name", nargs="?")
    c.set_defaults(func=cmd_corpus)
    return p


def run(argv) -> tuple:
    """(exit code, stdout text, stderr text); never raises on bad input."""
    argv = list(argv)
    try:
        a = build_parser().parse_args(argv)
        command = a.command
        if command == "corpus" and a.which == "run":
            inner = corpus_argv(a.name) if a.name else None
            if inner is None:
                raise ArgumentError("corpus run needs a name")
            extra = []
            if a.json_out:
                extra += ["--json", a.json_out]
            if a.svg:
                extra += ["--svg", a.svg]
            return run(inner + extra)
        ctx = {"inputs": {}}
        result, svg = a.func(a, ctx)
        which = getattr(a, "which", None)
        name = command + (f" {which}" if which else "")
        manifest = RunManifest(name, ctx["inputs"], a.tol, a.mode, a.seed)
        text = dumps(envelope(manifest, result))
        if a.svg and svg:
            with open(a.svg, "w", encoding="utf-8") as fh:
                fh.write(svg)
        if a.json_out:
            with open(a.json_out, "w", encoding="utf-8") as fh:
                fh.write(text)
        return 0, text, ""
    except ProjdynError as exc:
        err = {"schema": "projdyn/1", "error": exc.code, "message": str(exc)}
        return exc.exit_code, "", dumps(err)


def main(argv=None) -> int:
    if "PROJDYN_THREADS" in os.environ:
        os.environ.setdefault("OMP_NUM_THREADS", os.environ["PROJDYN_THREADS"])
    code, out, err = run(sys.argv[1:] if argv is None else argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
