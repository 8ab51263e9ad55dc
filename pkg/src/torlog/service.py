"""HTTP service exposing the library as JSON-over-POST endpoints.

The CLI drives this app in-process through an ASGI transport; ``--server``
points the same client at a remote instance.  Every endpoint takes and
returns exact rational data (scalars as "p/q" strings); decimal renderings
are opt-in per request and never replace the exact values.

Domain and shape errors surface as HTTP 400 with a structured body
{"error": {"kind", "message", "where"}} so the CLI can map them to its
domain-error exit code.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Literal

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict

from . import fredholm, k1, torsion
from .chain import (CochainComplex, InnerProducts, betti as betti_at,
                    direct_sum, mapping_cone, validate)
from .linalg import (DomainError, LogValue, Matrix, ShapeError, format_scalar,
                     is_sum_of_commutators, kernel_dim, parse_scalar, trace)
from .nerve import (ClosedMorphism, fredholm_instance, hbordism_instance,
                    verify_eta_commutation, verify_log_axioms,
                    verify_mu_cocycle, verify_trace_compat, weak_tqft_export)
from .serialize import (chain_map_to_json, complex_to_json, load_chain_map,
                        load_complex, load_diagram, load_matrix, load_operator,
                        logvalue_to_json, to_jsonable)

DEFAULT_TRIALS = {"nerve": 1000, "fredholm": 500, "hbordism": 200}


def approx_scalar(x: Fraction) -> str:
    """12-significant-digit decimal rendering, safe for huge rationals."""
    x = Fraction(x)
    try:
        f = x.numerator / x.denominator
    except OverflowError:
        sign = -1.0 if x < 0 else 1.0
        f = sign * math.exp(math.log(abs(x.numerator)) - math.log(x.denominator))
    return "%.12g" % f


# ---------------------------------------------------------------------------
# Request models.  Nested payloads are deep-validated by the serialize
# module, which knows the exact-scalar rules; pydantic polices the envelope.


class _Req(BaseModel):
    model_config = ConfigDict(extra="forbid")


class CheckRequest(_Req):
    complex: Any


class BettiRequest(_Req):
    complex: Any
    p: int | None = None


class LaplacianRequest(_Req):
    complex: Any
    p: int = 0
    grams: Any = None
    approx: bool = False


class TorsionRequest(_Req):
    complex: Any
    beta: list[Any] | None = None
    grams: Any = None
    variation_trials: int = 0
    seed: int = 0
    approx: bool = False


class ReidemeisterRequest(_Req):
    complex: Any
    grams: Any = None
    approx: bool = False


class EulerRequest(_Req):
    complex: Any
    a: Any = "1"
    b: Any = "1"
    approx: bool = False


class K1Request(_Req):
    complex: Any = None
    chain_map: Any = None
    approx: bool = False


class FredIndexRequest(_Req):
    operator: Any


class FredVerifyRequest(_Req):
    payload: Any
    mode: Literal["independence", "additivity", "diagram"] | None = None


class VerifyRequest(_Req):
    suite: Literal["nerve", "fredholm", "hbordism"]
    trials: int | None = None
    seed: int = 0


class GlueRequest(_Req):
    mode: Literal["compose", "sum"] = "compose"
    first: Any
    second: Any
    base: int = 2
    approx: bool = False


# ---------------------------------------------------------------------------
# Handlers


def _load_grams(data, c: CochainComplex, what: str = "grams"):
    if data is None:
        return None
    if not isinstance(data, list) or len(data) != len(c.dims):
        raise DomainError("%s must list one matrix per degree (%d)"
                          % (what, len(c.dims)))
    mats = [load_matrix(rows, nrows=c.dims[p], ncols=c.dims[p],
                        what="%s %d" % (what, p)) for p, rows in enumerate(data)]
    return InnerProducts(mats)


def run_check(payload) -> dict:
    """Structural validation; violations are report content, not errors."""
    if not isinstance(payload, dict):
        raise DomainError("complex must be a JSON object")
    dims = payload.get("dims", [])
    if not isinstance(dims, list):
        raise DomainError("\"dims\" must be a list")
    diffs = [load_matrix(rows, what="differential %d" % p)
             for p, rows in enumerate(payload.get("differentials", []))]
    grams = None
    if payload.get("grams") is not None:
        grams = [load_matrix(rows, what="gram %d" % p)
                 for p, rows in enumerate(payload["grams"])]
    return validate(dims, diffs, grams)


def run_betti(payload, p: int | None) -> dict:
    c = load_complex(payload)
    out = {"betti": list(c.betti()),
           "kernel_dims": [kernel_dim(d) for d in c.differentials]}
    if p is not None:
        out["p"] = p
        out["betti_p"] = betti_at(c, p)
    return out


def run_laplacian(payload, p: int, grams, approx: bool) -> dict:
    from .chain import adjoint, laplacian
    from .linalg import pseudo_det

    c = load_complex(payload)
    g = _load_grams(grams, c)
    lap = laplacian(c, g, p)
    pd = pseudo_det(lap)
    out = {"p": p, "laplacian": lap, "pseudo_det": pd,
           "harmonic_dim": lap.kernel_dim()}
    if p < len(c.differentials):
        out["adjoint"] = adjoint(c, g, p)
    if approx:
        out["pseudo_det_approx"] = approx_scalar(pd)
    return to_jsonable(out, approx)


def run_torsion(payload, beta, grams, variation_trials: int, seed: int,
                approx: bool) -> dict:
    c = load_complex(payload)
    g = _load_grams(grams, c)
    if beta is None:
        vals = [Fraction(p) for p in range(c.top_degree + 1)]
    else:
        vals = [parse_scalar(b) for b in beta]
    t = torsion.torsion_logarithm(c, vals, g)
    out = {
        "beta": [format_scalar(b) for b in t.beta],
        "beta_invariant": torsion.beta_is_invariant(t.beta),
        "records": [{"degree": r.degree, "sign": r.sign,
                     "weight": format_scalar(r.weight),
                     "pseudo_det": format_scalar(r.pdet)} for r in t.records],
        "character": logvalue_to_json(torsion.character(t), approx),
    }
    if variation_trials:
        rep = torsion.metric_variation_experiment(c, vals, variation_trials, seed)
        out["variation"] = to_jsonable(rep, approx)
    return out


def run_reidemeister(payload, grams, approx: bool) -> dict:
    c = load_complex(payload)
    g = _load_grams(grams, c)
    return {"character": logvalue_to_json(torsion.reidemeister(c, g), approx)}


def run_euler(payload, a, b, approx: bool) -> dict:
    c = load_complex(payload)
    chi, chi_p = torsion.weighted_euler(c)
    res = torsion.residue_torsion(c, parse_scalar(a), parse_scalar(b))
    out = {"chi": chi, "chi_prime": chi_p, "residue": format_scalar(res)}
    if approx:
        out["residue_approx"] = approx_scalar(res)
    return out


def _k1_report(t: k1.K1Torsion, approx: bool) -> dict:
    return {"determinant": format_scalar(t.value), "sign": t.sign,
            "abs": format_scalar(t.abs),
            "character": logvalue_to_json(LogValue.log(t.abs), approx)}


def run_k1(complex_payload, map_payload, approx: bool) -> dict:
    if (complex_payload is None) == (map_payload is None):
        raise DomainError("pass exactly one of an acyclic complex or a chain "
                          "map between complexes")
    if complex_payload is not None:
        c = load_complex(complex_payload)
        contraction = k1.find_contraction(c)
        t = k1.torsion_of_acyclic(c, contraction)
        out = {"kind": "acyclic", "dims": list(c.dims)}
        out.update(_k1_report(t, approx))
        return out
    f = load_chain_map(map_payload)
    cone = mapping_cone(f)
    t = k1.torsion_of_equivalence(f)
    out = {"kind": "equivalence", "cone_dims": list(cone.dims)}
    out.update(_k1_report(t, approx))
    return out


def run_fred_index(operator_payload) -> dict:
    z, q = load_operator(operator_payload)
    given = q is not None
    if q is None:
        q = fredholm.parametrix(z)
    log = fredholm.log_fred(z, q)
    ind = fredholm.index_character(z, q)
    return to_jsonable({
        "source_dim": z.ncols, "target_dim": z.nrows, "rank": z.rank(),
        "index": int(ind), "parametrix": "given" if given else "computed",
        "log": log, "trace": trace(log),
    })


def run_fred_verify(payload, mode: str | None) -> dict:
    if not isinstance(payload, dict):
        raise DomainError("fred-verify payload must be a JSON object")
    if mode is None:
        if "q1" in payload:
            mode = "independence"
        elif "zf" in payload:
            mode = "additivity"
        elif "p0" in payload:
            mode = "diagram"
        else:
            raise DomainError("cannot infer mode: expected keys q1/q2 "
                              "(independence), zf/zg (additivity), or "
                              "p0..p2', incl, proj (diagram)")
    if mode == "independence":
        names = ("z", "q1", "q2")
        if any(n not in payload for n in names):
            raise DomainError("independence check needs matrices z, q1, q2")
        z, q1, q2 = (load_matrix(payload[n], what=n) for n in names)
        rep = fredholm.check_parametrix_independence(z, q1, q2)
        rep["difference_is_commutator_sum"] = is_sum_of_commutators(rep["difference"])
    elif mode == "additivity":
        if "zf" not in payload or "zg" not in payload:
            raise DomainError("additivity check needs matrices zf and zg")
        rep = fredholm.check_additivity(
            load_matrix(payload["zf"], what="zf"),
            load_matrix(payload["zg"], what="zg"),
            load_matrix(payload["qf"], what="qf") if payload.get("qf") is not None else None,
            load_matrix(payload["qg"], what="qg") if payload.get("qg") is not None else None)
    else:
        d = load_diagram(payload)
        rep = fredholm.relative_index_diagram(
            d["p0"], d["p0p"], d["p1"], d["p1p"], d["p2"], d["p2p"],
            d["incl"], d["proj"])
    out = {"mode": mode}
    out.update(to_jsonable(rep))
    return out


def run_verify(suite: str, trials: int | None, seed: int) -> dict:
    n = trials if trials is not None else DEFAULT_TRIALS[suite]
    if n < 1:
        raise DomainError("trials must be positive, got %d" % n)
    if suite == "nerve":
        reports = [verify_eta_commutation(n, seed),
                   verify_trace_compat(None, n, seed),
                   verify_mu_cocycle(n, seed)]
        return to_jsonable({"suite": "nerve", "trials": n, "seed": seed,
                            "reports": reports,
                            "ok": all(r["ok"] for r in reports)})
    instance = fredholm_instance() if suite == "fredholm" else hbordism_instance()
    rep = verify_log_axioms(instance, trials=n, seed=seed)
    rep["suite"] = suite
    return to_jsonable(rep)


def run_glue(mode: str, first, second, base: int, approx: bool) -> dict:
    if mode == "sum":
        a = load_complex(first, what="first complex")
        b = load_complex(second, what="second complex")
        s = direct_sum(a, b)
        ba, bb, bs = a.betti(), b.betti(), s.betti()
        padded = [x + y for x, y in
                  zip(ba + [0] * (len(bs) - len(ba)),
                      bb + [0] * (len(bs) - len(bb)))]
        return {"mode": "sum", "sum": complex_to_json(s),
                "betti_first": list(ba), "betti_second": list(bb),
                "betti_sum": list(bs), "additive": bs == padded}
    f = load_chain_map(first, what="first map")
    g = load_chain_map(second, what="second map")
    composite = k1.compose(f, g)
    inst = hbordism_instance()

    def char(m):
        x, y = inst.morphism_endpoints(m)
        return inst.character(m, x, y)

    cf, cg = char(f), char(g)
    # A unit-to-unit composite is only loggable through its factorization:
    # the pair of legs we were just handed declares one.
    closed = (composite.source.total_dim == 0
              and composite.target.total_dim == 0)
    measured = ClosedMorphism(f, g) if closed else composite
    cc = char(measured)
    export = weak_tqft_export(inst, measured, base=base)
    out = {
        "mode": "compose",
        "closed": closed,
        "composite": chain_map_to_json(composite),
        "character_first": logvalue_to_json(cf, approx),
        "character_second": logvalue_to_json(cg, approx),
        "character_composite": logvalue_to_json(cc, approx),
        "additive": cc == cf + cg,
        "export": to_jsonable(export, approx),
    }
    if approx and export.get("value") is not None:
        out["export"]["value_approx"] = approx_scalar(Fraction(export["value"]))
    return out


# ---------------------------------------------------------------------------
# App factory


def create_app() -> FastAPI:
    app = FastAPI(title="torlog", docs_url=None, redoc_url=None)

    @app.exception_handler(DomainError)
    async def _domain(_, exc: DomainError):
        return JSONResponse(status_code=400, content={
            "error": {"kind": "domain", "message": str(exc),
                      "where": to_jsonable(getattr(exc, "where", None))}})

    @app.exception_handler(ShapeError)
    async def _shape(_, exc: ShapeError):
        return JSONResponse(status_code=400, content={
            "error": {"kind": "shape", "message": str(exc), "where": None}})

    @app.post("/check")
    def check(req: CheckRequest):
        return run_check(req.complex)

    @app.post("/betti")
    def betti(req: BettiRequest):
        return run_betti(req.complex, req.p)

    @app.post("/laplacian")
    def laplacian(req: LaplacianRequest):
        return run_laplacian(req.complex, req.p, req.grams, req.approx)

    @app.post("/torsion")
    def torsion_ep(req: TorsionRequest):
        return run_torsion(req.complex, req.beta, req.grams,
                           req.variation_trials, req.seed, req.approx)

    @app.post("/reidemeister")
    def reidemeister_ep(req: ReidemeisterRequest):
        return run_reidemeister(req.complex, req.grams, req.approx)

    @app.post("/euler")
    def euler(req: EulerRequest):
        return run_euler(req.complex, req.a, req.b, req.approx)

    @app.post("/k1-torsion")
    def k1_torsion(req: K1Request):
        return run_k1(req.complex, req.chain_map, req.approx)

    @app.post("/fred-index")
    def fred_index(req: FredIndexRequest):
        return run_fred_index(req.operator)

    @app.post("/fred-verify")
    def fred_verify(req: FredVerifyRequest):
        return run_fred_verify(req.payload, req.mode)

    @app.post("/verify")
    def verify(req: VerifyRequest):
        return run_verify(req.suite, req.trials, req.seed)

    @app.post("/glue-compose")
    def glue_compose(req: GlueRequest):
        return run_glue(req.mode, req.first, req.second, req.base, req.approx)

    return app
