"""Command-line driver: reproducible experiments with file I/O.

Subcommands: roots, regular, sample, apply, orbit, sakai.  All randomness
is seeded, logs go to stderr, data to stdout or --out.  Exit codes:
0 ok, 2 input error, 3 degeneracy or wall error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import serialize
from .dynkin import (
    AFFINE_TYPES,
    ParamVector,
    StarGraph,
    enumerate_roots,
    hyperplane_count,
    is_regular,
    weight_lattice_member,
)
from .errors import DegeneracyError, InputFormatError, StarweylError
from .fuchsian import sample_system, signature
from .ratlin import format_rational
from .sakai import sakai_orbit
from .weylops import apply_word, dp_orbit, WeylWord


def _write(text: str, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _log(msg: str):
    print(msg, file=sys.stderr)


def _read_json(path: str):
    try:
        with open(path) as fh:
            return serialize.loads(fh.read())
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}")


def _parse_mu(text: str, graph: StarGraph) -> ParamVector:
    doc = serialize.loads(text)
    if not isinstance(doc, list) or not all(isinstance(x, int) for x in doc):
        raise InputFormatError("--mu must be a JSON list of integers")
    if len(doc) == graph.node_count - 1:
        # finite coordinates; complete the extending component
        ext = -sum(graph.delta[i] * c for i, c in zip(graph.finite_nodes, doc))
        doc = list(doc) + [ext]
    if len(doc) != graph.node_count:
        raise InputFormatError(
            f"--mu needs {graph.node_count} (or {graph.node_count - 1}) entries")
    mu = ParamVector(tuple(Fraction(x) for x in doc))
    if not weight_lattice_member(graph, mu):
        raise InputFormatError("--mu must be integral and level zero")
    return mu


def cmd_roots(args) -> int:
    g = StarGraph.affine(args.type)
    roots = enumerate_roots(g)
    if args.format == "json":
        doc = {"schema": "starweyl/roots-v1", "type": args.type,
               "count": len(roots), "hyperplanes": hyperplane_count(g),
               "roots": [list(r.coords) for r in roots]}
        _write(serialize.dumps(doc), args.out)
    else:
        _write(f"{args.type}: {len(roots)} roots / "
               f"{hyperplane_count(g)} hyperplanes\n", args.out)
    return 0


def cmd_regular(args) -> int:
    doc = _read_json(args.lam_file)
    lam = serialize.lam_in(doc)
    g = StarGraph.affine(args.type)
    if len(lam) != g.node_count:
        raise InputFormatError(
            f"lam has {len(lam)} entries, {args.type} needs {g.node_count}")
    flag, violated = is_regular(g, lam)
    out = {"schema": "starweyl/regular-v1", "type": args.type,
           "regular": flag,
           "violated": [list(r.coords) for r in violated]}
    _write(serialize.dumps(out), args.out)
    return 0


def cmd_sample(args) -> int:
    sysm, lam = sample_system(args.type, args.seed, tol=args.tol)
    err = sysm.verify()
    _log(f"sampled {args.type} system, seed {args.seed}")
    _log(f"sum check: OK (orbit error {err:.2e})")
    _write(serialize.dumps(serialize.system_out(sysm)), args.out)
    return 0


def cmd_apply(args) -> int:
    sysm = serialize.system_in(_read_json(args.system))
    tags = serialize.word_in(_read_json(args.word))
    out = apply_word(sysm, WeylWord(tags))
    doc = serialize.system_out(out)
    doc["applied_word"] = serialize.word_out(tags)["tags"]
    sig = signature(out, 4)
    doc["signature"] = {"length": sig.length,
                        "values": [[v.real, v.imag] for v in sig.values]}
    _log(f"applied {len(tags)} generators")
    _write(serialize.dumps(doc), args.out)
    return 0


def cmd_orbit(args) -> int:
    sysm = serialize.system_in(_read_json(args.system))
    mu = _parse_mu(args.mu, sysm.graph)
    rows = dp_orbit(sysm, mu, args.steps, sig_len=args.sig_len)
    lines = []
    nsig = len(rows[0][2].values)
    header = (["step"] + [f"lam_{i}" for i in range(len(rows[0][1]))]
              + [x for k in range(nsig) for x in (f"sig{k}_re", f"sig{k}_im")])
    lines.append(",".join(header))
    for k, lam, sig in rows:
        cells = [str(k)] + [format_rational(v) for v in lam.values]
        for v in sig.values:
            cells.append(repr(v.real))
            cells.append(repr(v.imag))
        lines.append(",".join(cells))
    _write("\n".join(lines) + "\n", args.out)
    return 0


def cmd_sakai(args) -> int:
    p = serialize.config_in(_read_json(args.config))
    doc = serialize.loads(args.mu)
    if not isinstance(doc, list) or not all(isinstance(x, int) for x in doc):
        raise InputFormatError("--mu must be a JSON list of integers")
    rows = sakai_orbit(p, tuple(doc), args.steps)
    lines = [",".join(["step"] + [f"u_{i + 1}" for i in range(p.r)] + ["walls"])]
    for k, cfg, walls in rows:
        flag = ";".join(f"{w[0]}{list(w[1])}".replace(" ", "") for w in walls)
        lines.append(",".join([str(k)] + [format_rational(u) for u in cfg.values]
                              + [flag]))
    _write("\n".join(lines) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="starweyl",
        description="Affine Weyl symmetries of Fuchsian systems: roots, "
                    "sampling, reflection words, difference-Painleve orbits.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", help="enumerate the finite root system")
    p.add_argument("--type", required=True, choices=AFFINE_TYPES)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("regular", help="hyperplane report for a lam file")
    p.add_argument("--type", required=True, choices=AFFINE_TYPES)
    p.add_argument("--lam-file", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_regular)

    p = sub.add_parser("sample", help="sample a random system")
    p.add_argument("--type", required=True, choices=AFFINE_TYPES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("apply", help="apply a reflection word to a system")
    p.add_argument("--system", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("orbit", help="difference-Painleve orbit (CSV)")
    p.add_argument("--system", required=True)
    p.add_argument("--mu", required=True,
                   help="integral level-zero vector as a JSON list")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--sig-len", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("sakai", help="point-configuration orbit (CSV)")
    p.add_argument("--config", required=True)
    p.add_argument("--mu", required=True,
                   help="integer coefficients as a JSON list")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sakai)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except InputFormatError as exc:
        _log(f"input error: {exc}")
        return 2
    except DegeneracyError as exc:
        _log(f"degeneracy: {exc}")
        return 3
    except StarweylError as exc:
        _log(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
