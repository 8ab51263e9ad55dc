"""JSON codecs for the wire formats: complexes, chain maps, operators,
projection diagrams, and report values.

Scalars travel as strings "p/q" (plain integers are accepted on input);
floats are rejected everywhere, including inside JSON source text.  Dumps are
canonical: sorted keys, compact separators, trailing newline, so identical
inputs produce byte-identical reports.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .chain import ChainMap, CochainComplex, InnerProducts, validate
from .linalg import DomainError, LogValue, Matrix, format_scalar, parse_scalar


def _reject_float(s: str):
    raise DomainError("float %r in input; scalars must be integers or "
                      "rational strings \"p/q\"" % s)


def loads(text: str):
    """Parse JSON rejecting floats; syntax errors raise ValueError as usual."""
    return json.loads(text, parse_float=_reject_float,
                      parse_constant=_reject_float)


def dumps(obj) -> str:
    """Canonical dump: sorted keys, compact separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      allow_nan=False) + "\n"


# ---------------------------------------------------------------------------
# Scalars and matrices


def scalar_to_json(x) -> str:
    return format_scalar(parse_scalar(x))


def load_matrix(rows, nrows: int | None = None, ncols: int | None = None,
                what: str = "matrix") -> Matrix:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise DomainError("%s must be a list of rows" % what)
    if nrows is not None and len(rows) != nrows:
        raise DomainError("%s has %d rows, expected %d" % (what, len(rows), nrows))
    if not rows:
        if ncols is None:
            ncols = 0
        return Matrix.zero(0, ncols)
    width = len(rows[0])
    if ncols is not None and width != ncols:
        raise DomainError("%s has %d columns, expected %d" % (what, width, ncols))
    try:
        return Matrix([[parse_scalar(e) for e in r] for r in rows], ncols=width)
    except (DomainError, ValueError, TypeError) as exc:
        raise DomainError("%s: %s" % (what, exc))


def matrix_to_json(m: Matrix) -> list:
    return [[format_scalar(e) for e in row] for row in m.rows]


# ---------------------------------------------------------------------------
# Complexes and chain maps


def load_complex(data, what: str = "complex") -> CochainComplex:
    if not isinstance(data, dict):
        raise DomainError("%s must be an object with \"dims\" and "
                          "\"differentials\"" % what)
    try:
        dims = [int(n) for n in data["dims"]]
    except (KeyError, TypeError, ValueError):
        raise DomainError("%s needs an integer list \"dims\"" % what)
    raw_diffs = data.get("differentials", [])
    if len(raw_diffs) != max(len(dims) - 1, 0):
        raise DomainError("%s has %d degrees but %d differentials"
                          % (what, len(dims), len(raw_diffs)))
    diffs = [load_matrix(rows, nrows=dims[p + 1], ncols=dims[p],
                         what="%s differential %d" % (what, p))
             for p, rows in enumerate(raw_diffs)]
    grams = None
    if data.get("grams") is not None:
        grams = [load_matrix(rows, nrows=dims[p], ncols=dims[p],
                             what="%s gram %d" % (what, p))
                 for p, rows in enumerate(data["grams"])]
        if len(grams) != len(dims):
            raise DomainError("%s has %d degrees but %d grams"
                              % (what, len(dims), len(grams)))
        InnerProducts(grams)  # enforce symmetry and positive definiteness
    report = validate(dims, diffs, grams)
    if not report["ok"]:
        v = report["violations"][0]
        raise DomainError("%s invalid: %s" % (what, v["detail"]),
                          where={"violations": report["violations"]})
    return CochainComplex(dims, diffs, grams)


def complex_to_json(c: CochainComplex) -> dict:
    out = {"dims": list(c.dims),
           "differentials": [matrix_to_json(d) for d in c.differentials]}
    if not c.has_identity_grams():
        out["grams"] = [matrix_to_json(g) for g in c.grams]
    return out


def load_chain_map(data, what: str = "chain map") -> ChainMap:
    if not isinstance(data, dict) or "components" not in data:
        raise DomainError("%s must be an object with \"source\", \"target\" "
                          "and \"components\"" % what)
    source = load_complex(data.get("source"), what="%s source" % what)
    target = load_complex(data.get("target"), what="%s target" % what)
    comps = data["components"]
    if len(comps) != len(source.dims):
        raise DomainError("%s has %d components for %d degrees"
                          % (what, len(comps), len(source.dims)))
    mats = [load_matrix(rows, nrows=target.dims[p], ncols=source.dims[p],
                        what="%s component %d" % (what, p))
            for p, rows in enumerate(comps)]
    return ChainMap(source, target, mats)


def chain_map_to_json(f: ChainMap) -> dict:
    return {"source": complex_to_json(f.source),
            "target": complex_to_json(f.target),
            "components": [matrix_to_json(m) for m in f.components]}


# ---------------------------------------------------------------------------
# Operators and diagrams


def load_operator(data) -> tuple[Matrix, Matrix | None]:
    """{"z": rows, "q": rows?, "source_dim"?, "target_dim"?} -> (z, q)."""
    if not isinstance(data, dict) or "z" not in data:
        raise DomainError("operator must be an object with matrix \"z\"")
    tdim = data.get("target_dim")
    sdim = data.get("source_dim")
    z = load_matrix(data["z"], nrows=tdim, ncols=sdim, what="operator z")
    q = None
    if data.get("q") is not None:
        q = load_matrix(data["q"], nrows=z.ncols, ncols=z.nrows,
                        what="parametrix q")
    return z, q


def load_diagram(data) -> dict:
    """Projection diagram: six idempotents plus the exact-row maps."""
    names = ("p0", "p0p", "p1", "p1p", "p2", "p2p", "incl", "proj")
    if not isinstance(data, dict) or any(n not in data for n in names):
        raise DomainError("diagram needs matrices %s" % (", ".join(names)))
    return {n: load_matrix(data[n], what=n) for n in names}


# ---------------------------------------------------------------------------
# Report values


def logvalue_to_json(v: LogValue, approx: bool = False) -> list:
    out = []
    for w, base in v.terms():
        term = {"w": format_scalar(w), "base": format_scalar(base)}
        if approx:
            term["approx"] = "%.12g" % (float(w) * math.log(base))
        out.append(term)
    return out


def to_jsonable(obj, approx: bool = False):
    """Recursive fallback for report payloads built from exact values."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Fraction):
        return format_scalar(obj)
    if isinstance(obj, float):
        raise DomainError("float %r has no place in canonical output" % obj)
    if isinstance(obj, LogValue):
        return logvalue_to_json(obj, approx=approx)
    if isinstance(obj, Matrix):
        return matrix_to_json(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v, approx) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v, approx) for v in obj]
    raise DomainError("cannot serialize %r" % type(obj).__name__)
