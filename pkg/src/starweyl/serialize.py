"""Versioned JSON schemas shared by the library and the CLI.

Exact rationals are "p/q" strings (Gaussian rationals "a/b+c/di"),
complex floats are [re, im] pairs, complex matrices nested lists of such
pairs.  Every emitted document round-trips losslessly: exact fields stay
exact, floats go through repr (shortest round-trip form).
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .dynkin import ParamVector, StarGraph
from .errors import InputFormatError
from .fuchsian import FuchsianSystem, make_system
from .quiver import DimensionVector, QuiverRep
from .ratlin import GaussianRational, format_rational, parse_rational
from .sakai import PointConfig

SYSTEM_SCHEMA = "starweyl/system-v1"
CONFIG_SCHEMA = "starweyl/config-v1"
WORD_SCHEMA = "starweyl/word-v1"
LAM_SCHEMA = "starweyl/lam-v1"
REP_SCHEMA = "starweyl/quiver-rep-v1"


def _scalar_out(x):
    if isinstance(x, (int, Fraction, GaussianRational)):
        return format_rational(x)
    z = complex(x)
    return [z.real, z.imag]


def _scalar_in(x):
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, (int, float)):
        return Fraction(x) if isinstance(x, int) else float(x)
    raise InputFormatError(f"cannot parse scalar {x!r}")


def matrix_out(a) -> list:
    return [[[float(z.real), float(z.imag)] for z in row]
            for row in np.asarray(a, dtype=complex)]


def matrix_in(rows) -> np.ndarray:
    try:
        return np.array([[complex(c[0], c[1]) for c in row] for row in rows],
                        dtype=complex)
    except (TypeError, IndexError) as exc:
        raise InputFormatError(f"malformed complex matrix: {exc}")


def lam_out(lam: ParamVector) -> dict:
    return {"schema": LAM_SCHEMA, "field": lam.field,
            "values": [_scalar_out(v) for v in lam.values]}


def lam_in(doc) -> ParamVector:
    if not isinstance(doc, dict) or "values" not in doc:
        raise InputFormatError("parameter document needs a 'values' list")
    return ParamVector(tuple(_scalar_in(v) for v in doc["values"]))


def system_out(sys: FuchsianSystem) -> dict:
    return {
        "schema": SYSTEM_SCHEMA,
        "type": sys.graph.affine_type,
        "legs": list(sys.graph.legs),
        "poles": [[p.real, p.imag] for p in sys.poles],
        "nu": _scalar_out(sys.nu),
        "lam": lam_out(sys.lam),
        "offsets": [_scalar_out(o) for o in sys.offsets],
        "normalization": sys.normalization,
        "tol": sys.tol,
        "residues": [matrix_out(a) for a in sys.residues],
    }


def system_in(doc) -> FuchsianSystem:
    if not isinstance(doc, dict) or doc.get("schema") != SYSTEM_SCHEMA:
        raise InputFormatError(f"expected a {SYSTEM_SCHEMA} document")
    try:
        graph = StarGraph(tuple(doc["legs"]))
        poles = tuple(complex(p[0], p[1]) for p in doc["poles"])
        lam = lam_in(doc["lam"])
        offsets = tuple(_scalar_in(o) for o in doc["offsets"])
        residues = [matrix_in(m) for m in doc["residues"]]
        tol = float(doc.get("tol", 1e-9))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed system document: {exc}")
    return make_system(graph, poles, residues[:-1], lam, offsets=offsets,
                       tol=tol)


def config_out(p: PointConfig) -> dict:
    return {"schema": CONFIG_SCHEMA,
            "points": [format_rational(u) for u in p.values]}


def config_in(doc) -> PointConfig:
    if not isinstance(doc, dict) or doc.get("schema") != CONFIG_SCHEMA:
        raise InputFormatError(f"expected a {CONFIG_SCHEMA} document")
    try:
        vals = tuple(parse_rational(s) for s in doc["points"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed configuration: {exc}")
    if any(isinstance(v, GaussianRational) for v in vals):
        raise InputFormatError("point configurations are rational tuples")
    return PointConfig(vals)


def rep_out(rep: QuiverRep) -> dict:
    """Per-edge complex matrices; exact representations are converted to
    floating point on the way out."""
    edges = []
    for (t, h) in rep.graph.edges:
        edges.append({"edge": [t, h],
                      "phi": matrix_out(_dense(rep.phi[(t, h)])),
                      "phi_star": matrix_out(_dense(rep.phi_star[(t, h)]))})
    return {"schema": REP_SCHEMA, "legs": list(rep.graph.legs),
            "dims": list(rep.dims.coords), "edges": edges}


def _dense(m):
    if isinstance(m, np.ndarray):
        return m
    return np.array([[complex(x) for x in row] for row in m], dtype=complex)


def rep_in(doc) -> QuiverRep:
    if not isinstance(doc, dict) or doc.get("schema") != REP_SCHEMA:
        raise InputFormatError(f"expected a {REP_SCHEMA} document")
    try:
        graph = StarGraph(tuple(doc["legs"]))
        dims = DimensionVector(tuple(doc["dims"]))
        phi, phi_star = {}, {}
        for entry in doc["edges"]:
            edge = tuple(entry["edge"])
            phi[edge] = matrix_in(entry["phi"])
            phi_star[edge] = matrix_in(entry["phi_star"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed quiver representation: {exc}")
    return QuiverRep(graph, dims, phi, phi_star)


def signature_csv(signatures, labels=None) -> str:
    """Signatures as CSV rows of (re, im) float pairs, one row per entry."""
    if not signatures:
        return ""
    width = len(signatures[0].values)
    header = ["label"] + [x for k in range(width)
                          for x in (f"sig{k}_re", f"sig{k}_im")]
    lines = [",".join(header)]
    for k, sig in enumerate(signatures):
        label = str(labels[k]) if labels is not None else str(k)
        cells = [label]
        for v in sig.values:
            cells.append(repr(v.real))
            cells.append(repr(v.imag))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def word_out(tags) -> dict:
    out = []
    for tag in tags:
        if tag[0] in ("tensor", "relabel", "translate"):
            out.append([tag[0], [int(x) if isinstance(x, int) else _scalar_out(x)
                                 for x in tag[1]]])
        elif tag[0] == "leg":
            out.append(["leg", int(tag[1])])
        else:
            out.append([tag[0]])
    return {"schema": WORD_SCHEMA, "tags": out}


def word_in(doc):
    if not isinstance(doc, dict) or doc.get("schema") != WORD_SCHEMA:
        raise InputFormatError(f"expected a {WORD_SCHEMA} document")
    tags = []
    for tag in doc.get("tags", []):
        kind = tag[0]
        if kind == "leg":
            tags.append(("leg", int(tag[1])))
        elif kind == "central":
            tags.append(("central",))
        elif kind in ("tensor", "relabel", "translate"):
            tags.append((kind, tuple(_scalar_in(x) if isinstance(x, str)
                                     else int(x) for x in tag[1])))
        else:
            raise InputFormatError(f"unknown word tag {kind!r}")
    return tuple(tags)


def dumps(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"invalid JSON: {exc}")
