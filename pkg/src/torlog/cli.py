"""Command-line front end.

The CLI is a thin client: every command becomes one POST against the
service app, driven in-process through an ASGI transport by default, or
against a remote instance via --server.  Reports are emitted as canonical
JSON (sorted keys, compact separators, trailing newline) so identical
inputs yield byte-identical output.

Exit codes: 0 success, 1 a verification report came back not-ok, 2 usage
errors, 3 I/O errors (missing files, unreadable JSON, unreachable server),
4 domain errors (structured error JSON on the report stream).
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from dataclasses import dataclass, field

import httpx

from .serialize import dumps, loads

COMMANDS = ("check", "betti", "laplacian", "torsion", "reidemeister",
            "euler", "k1-torsion", "fred-index", "fred-verify", "verify",
            "glue-compose")

# Which library operations each subcommand drives; the audit in the test
# suite checks this table is a partition of the public operation inventory
# and that every name resolves.  Keep it in sync when endpoints change.
COMMAND_OPERATIONS = {
    "check": ("chain.validate",),
    "betti": ("chain.betti", "linalg.kernel_dim"),
    "laplacian": ("chain.adjoint", "chain.laplacian", "linalg.pseudo_det"),
    "torsion": ("torsion.torsion_logarithm", "torsion.character",
                "torsion.beta_is_invariant",
                "torsion.metric_variation_experiment"),
    "reidemeister": ("torsion.reidemeister",),
    "euler": ("torsion.weighted_euler", "torsion.residue_torsion"),
    "k1-torsion": ("k1.find_contraction", "k1.torsion_of_acyclic",
                   "k1.torsion_of_equivalence", "chain.mapping_cone"),
    "fred-index": ("fredholm.parametrix", "fredholm.log_fred",
                   "fredholm.index_character", "linalg.trace",
                   "linalg.pseudo_inverse"),
    "fred-verify": ("fredholm.check_parametrix_independence",
                    "fredholm.check_additivity",
                    "fredholm.relative_index_diagram",
                    "linalg.is_sum_of_commutators",
                    "linalg.commutator_witness"),
    "verify": ("nerve.verify_eta_commutation", "nerve.verify_trace_compat",
               "nerve.verify_log_axioms", "nerve.f_space", "nerve.mu_sigma",
               "nerve.eta_insert", "nerve.face", "nerve.degeneracy",
               "nerve.log_simplex", "nerve.hbordism_instance",
               "chain.random_complex"),
    "glue-compose": ("k1.compose", "chain.direct_sum",
                     "nerve.weak_tqft_export"),
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple[str, ...] = ()
    p: int | None = None
    beta: tuple[str, ...] | None = None
    a: str = "1"
    b: str = "1"
    grams_path: str | None = None
    mode: str | None = None
    suite: str | None = None
    trials: int | None = None
    seed: int = 0
    variation_trials: int = 0
    base: int = 2
    approx: bool = False
    output: str | None = None
    server: str | None = None


def _rational(text: str) -> str:
    """argparse type for exact rational flags; bad values are usage errors."""
    from .linalg import DomainError, parse_scalar
    try:
        parse_scalar(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return text


def _beta_list(text: str) -> tuple[str, ...]:
    return tuple(_rational(part.strip()) for part in text.split(","))


def parse_args(argv) -> RunConfig:
    ap = argparse.ArgumentParser(
        prog="torlog",
        description="Exact logarithmic invariants of finite cochain models.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    def common(p, inputs=1):
        for i in range(inputs):
            p.add_argument("inputs" if inputs == 1 else "input%d" % i,
                           metavar="INPUT", help="JSON file, or - for stdin")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--approx", action="store_true",
                       help="add 12-significant-digit decimal renderings")
        p.add_argument("--server", help="URL of a remote service instance")

    p = sub.add_parser("check", help="structural validation of a complex")
    common(p)

    p = sub.add_parser("betti", help="rational Betti numbers")
    common(p)
    p.add_argument("--p", type=int, default=None, help="single degree to report")

    p = sub.add_parser("laplacian", help="Hodge Laplacian at a degree")
    common(p)
    p.add_argument("--p", type=int, default=0, help="degree (default 0)")
    p.add_argument("--grams", dest="grams_path",
                   help="JSON file with one gram matrix per degree")

    p = sub.add_parser("torsion", help="weighted torsion logarithm")
    common(p)
    p.add_argument("--beta", type=_beta_list, default=None,
                   help="comma-separated rational weights (default 0,1,2,...)")
    p.add_argument("--grams", dest="grams_path")
    p.add_argument("--variation-trials", type=int, default=0,
                   help="also rerun under this many random gram choices")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("reidemeister", help="torsion character of an acyclic complex")
    common(p)
    p.add_argument("--grams", dest="grams_path")

    p = sub.add_parser("euler", help="weighted Euler characteristics and residue")
    common(p)
    p.add_argument("--a", type=_rational, default="1",
                   help="weight of the degree-weighted characteristic")
    p.add_argument("--b", type=_rational, default="1",
                   help="weight of the plain characteristic")

    p = sub.add_parser("k1-torsion",
                       help="determinant torsion of an acyclic complex or an equivalence")
    common(p)

    p = sub.add_parser("fred-index", help="finite-rank Fredholm logarithm and index")
    common(p)

    p = sub.add_parser("fred-verify",
                       help="parametrix-independence / additivity / exact-row checks")
    common(p)
    p.add_argument("--mode", choices=("independence", "additivity", "diagram"),
                   default=None, help="inferred from the payload keys if omitted")

    p = sub.add_parser("verify", help="randomized verification suites")
    p.add_argument("--suite", required=True,
                   choices=("nerve", "fredholm", "hbordism"))
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--server", help="URL of a remote service instance")

    p = sub.add_parser("glue-compose",
                       help="compose two maps (or direct-sum two complexes)")
    common(p, inputs=2)
    p.add_argument("--mode", choices=("compose", "sum"), default="compose")
    p.add_argument("--base", type=int, default=2,
                   help="base for exponentiating integer characters")

    ns = ap.parse_args(argv)
    if ns.command == "glue-compose":
        inputs = (ns.input0, ns.input1)
    elif ns.command == "verify":
        inputs = ()
    else:
        inputs = (ns.inputs,)
    return RunConfig(
        command=ns.command,
        inputs=inputs,
        p=getattr(ns, "p", None),
        beta=getattr(ns, "beta", None),
        a=getattr(ns, "a", "1"),
        b=getattr(ns, "b", "1"),
        grams_path=getattr(ns, "grams_path", None),
        mode=getattr(ns, "mode", None),
        suite=getattr(ns, "suite", None),
        trials=getattr(ns, "trials", None),
        seed=getattr(ns, "seed", 0),
        variation_trials=getattr(ns, "variation_trials", 0),
        base=getattr(ns, "base", 2),
        approx=getattr(ns, "approx", False),
        output=getattr(ns, "output", None),
        server=getattr(ns, "server", None),
    )


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_payload(path: str):
    """Read a JSON document from a file or stdin; floats are rejected."""
    from .linalg import DomainError
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as exc:
        raise _CliError(3, "cannot read %s: %s" % (path, exc))
    try:
        return loads(text)
    except DomainError:
        raise
    except ValueError as exc:
        raise _CliError(3, "%s is not JSON: %s" % (path, exc))


def _build_request(config: RunConfig) -> dict:
    c = config
    if c.command == "verify":
        return {"suite": c.suite, "trials": c.trials, "seed": c.seed}
    if c.command == "glue-compose":
        return {"mode": c.mode or "compose",
                "first": _read_payload(c.inputs[0]),
                "second": _read_payload(c.inputs[1]),
                "base": c.base, "approx": c.approx}
    payload = _read_payload(c.inputs[0])
    if c.command == "check":
        return {"complex": payload}
    if c.command == "betti":
        body = {"complex": payload}
        if c.p is not None:
            body["p"] = c.p
        return body
    grams = _read_payload(c.grams_path) if c.grams_path else None
    if c.command == "laplacian":
        return {"complex": payload, "p": c.p or 0, "grams": grams,
                "approx": c.approx}
    if c.command == "torsion":
        body = {"complex": payload, "grams": grams,
                "variation_trials": c.variation_trials, "seed": c.seed,
                "approx": c.approx}
        if c.beta is not None:
            body["beta"] = list(c.beta)
        return body
    if c.command == "reidemeister":
        return {"complex": payload, "grams": grams, "approx": c.approx}
    if c.command == "euler":
        return {"complex": payload, "a": c.a, "b": c.b, "approx": c.approx}
    if c.command == "k1-torsion":
        key = "chain_map" if isinstance(payload, dict) and "components" in payload \
            else "complex"
        return {key: payload, "approx": c.approx}
    if c.command == "fred-index":
        return {"operator": payload}
    if c.command == "fred-verify":
        return {"payload": payload, "mode": c.mode}
    raise _CliError(2, "unknown command %r" % c.command)


async def _post(path: str, body: dict, server: str | None):
    if server is None:
        from .service import create_app
        transport = httpx.ASGITransport(app=create_app())
        client = httpx.AsyncClient(transport=transport,
                                   base_url="http://torlog", timeout=None)
    else:
        client = httpx.AsyncClient(base_url=server, timeout=None)
    async with client:
        r = await client.post(path, json=body)
        return r.status_code, r.json()


def _emit(report: dict, output: str | None) -> None:
    text = dumps(report)
    if output is None:
        sys.stdout.write(text)
    else:
        try:
            with open(output, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise _CliError(3, "cannot write %s: %s" % (output, exc))


def run(config: RunConfig) -> int:
    """Execute one parsed command; returns the process exit code."""
    from .linalg import DomainError
    try:
        body = _build_request(config)
        try:
            status, report = asyncio.run(
                _post("/" + config.command, body, config.server))
        except httpx.HTTPError as exc:
            raise _CliError(3, "service request failed: %s" % exc)
        if status != 200:
            if not (isinstance(report, dict) and "error" in report):
                report = {"error": {"kind": "domain", "message": str(report),
                                    "where": None}}
            _emit(report, config.output)
            return 4
        _emit(report, config.output)
        if report.get("ok") is False:
            return 1
        return 0
    except DomainError as exc:
        from .serialize import to_jsonable
        _emit({"error": {"kind": "domain", "message": str(exc),
                         "where": to_jsonable(getattr(exc, "where", None))}},
              config.output)
        return 4
    except _CliError as exc:
        print("torlog: %s" % exc, file=sys.stderr)
        return exc.code


def main(argv=None) -> int:
    return run(parse_args(argv))
