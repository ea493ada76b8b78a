"""Thin command-line client for the analysis service.

Every subcommand goes through the HTTP API: against a remote server when
`--server` is given, otherwise against an in-process instance of the app via
an ASGI transport (no socket, same request/response cycle). Exit codes:
0 success, 2 hypothesis refusal, 3 budget exceeded, 4 ingestion error,
5 internal invariant failure.
"""

from __future__ import annotations

import argparse
import asyncio
import datetime
import json
import sys
import time
from typing import Any

import httpx

from .analysis import FORMAT_VERSION, gamma_csv, render_text, sequence_csv, trace_csv
from .errors import EXIT_CODES, EngineError
from .instances import load_document
from .service import create_app


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are ingestion problems here
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_CODES["ingestion-error"])


def _build_parser() -> _Parser:
    parser = _Parser(prog="epsmult", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--server", help="base URL of a running service")
        p.add_argument("--format", choices=["json", "csv", "text"], default="json")
        p.add_argument("--cache-dir", help="directory for the sequence cache")
        p.add_argument("--with-meta", action="store_true", help="attach a timestamp block")

    eps = sub.add_parser("epsilon", help="epsilon-multiplicity reports")
    eps_sub = eps.add_subparsers(dest="case", required=True)
    for case in ("ideal", "module", "pair", "field"):
        p = eps_sub.add_parser(case)
        p.add_argument("instance", help="instance file (JSON or TOML)")
        p.add_argument("--n-max", type=int)
        p.add_argument("--c", type=int)
        p.add_argument("--c-max", type=int, default=8)
        p.add_argument("--window", type=int)
        p.add_argument("--tol", help='tolerance as a rational or decimal string, e.g. "1/50"')
        p.add_argument("--weights", help="comma-separated weights, one per variable")
        p.add_argument("--beta", help="filtration slope override")
        p.add_argument("--check-gamma", action="store_true")
        p.add_argument("--gamma-csv", help="write value-semigroup points to this CSV file")
        p.add_argument("--cap", type=int, help="exploration budget")
        common(p)

    sg = sub.add_parser("semigroup", help="affine semigroup analysis")
    sg_sub = sg.add_subparsers(dest="action", required=True)
    an = sg_sub.add_parser("analyze")
    an.add_argument("instance")
    an.add_argument("--n-max", type=int, default=40)
    common(an)

    ok = sub.add_parser("okounkov", help="volume limit verification")
    ok_sub = ok.add_subparsers(dest="action", required=True)
    ver = ok_sub.add_parser("verify")
    ver.add_argument("instance")
    ver.add_argument("--n-max", type=int, default=200)
    ver.add_argument("--tol", default="1/50")
    common(ver)

    srv = sub.add_parser("serve", help="run the HTTP service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8431)
    srv.add_argument("--cache-dir")
    return parser


def _post(args, path: str, payload: dict[str, Any]) -> tuple[int, dict[str, Any]]:
    if args.server:
        with httpx.Client(base_url=args.server, timeout=600.0) as client:
            resp = client.post(path, json=payload)
            return resp.status_code, resp.json()

    async def go() -> tuple[int, dict[str, Any]]:
        transport = httpx.ASGITransport(app=create_app(cache_dir=args.cache_dir))
        async with httpx.AsyncClient(
            transport=transport, base_url="http://epsmult.local", timeout=600.0
        ) as client:
            resp = await client.post(path, json=payload)
            return resp.status_code, resp.json()

    return asyncio.run(go())


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _fail(body: dict[str, Any]) -> int:
    code = body.get("error_code", "internal-invariant")
    message = body.get("message", "request failed")
    witness = body.get("witness")
    sys.stderr.write(f"error [{code}]: {message}\n")
    if witness:
        sys.stderr.write(f"witness: {witness}\n")
    return EXIT_CODES.get(code, EXIT_CODES["internal-invariant"])


def _epsilon_payload(args) -> dict[str, Any]:
    doc = load_document(args.instance)
    weights = [w.strip() for w in args.weights.split(",")] if args.weights else None
    params = {
        "n_max": args.n_max,
        "c": args.c,
        "c_max": args.c_max,
        "window": args.window,
        "tol": args.tol,
        "check_gamma": args.check_gamma or bool(args.gamma_csv),
        "weights": weights,
        "beta": args.beta,
        "cap": args.cap,
    }
    return {"instance": doc, "params": {k: v for k, v in params.items() if v is not None}}


def _run_epsilon(args) -> int:
    started = time.time()
    status, body = _post(args, f"/v1/epsilon/{args.case}", _epsilon_payload(args))
    if status != 200:
        return _fail(body)
    report = body["report"]
    if args.gamma_csv:
        gamma = report["cross_checks"]["value_semigroup"]
        rows = [tuple(r) for r in gamma.get("points", [])]
        with open(args.gamma_csv, "w", encoding="utf-8") as handle:
            handle.write(gamma_csv(rows, gamma.get("variables", [])))
    if args.format == "csv":
        _emit(sequence_csv(report))
        return 0
    if args.format == "text":
        _emit(render_text(report))
        return 0
    out: dict[str, Any] = dict(report)
    if args.with_meta:
        out["meta"] = {
            "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "duration_s": round(time.time() - started, 3),
            "client_format_version": FORMAT_VERSION,
        }
    _emit(json.dumps(out, sort_keys=True, indent=2))
    return 0


def _run_semigroup(args) -> int:
    doc = load_document(args.instance)
    status, body = _post(
        args, "/v1/semigroup/analyze", {"generators": doc.get("generators"), "n_max": args.n_max}
    )
    if status != 200:
        return _fail(body)
    analysis = body["analysis"]
    if args.format == "csv":
        lines = ["n,count"]
        lines += [f"{n},{c}" for n, c in enumerate(analysis["counts"])]
        _emit("\n".join(lines))
        return 0
    _emit(json.dumps(analysis, sort_keys=True, indent=2))
    return 0


def _run_okounkov(args) -> int:
    doc = load_document(args.instance)
    status, body = _post(
        args,
        "/v1/okounkov/verify",
        {"generators": doc.get("generators"), "n_max": args.n_max, "tol": args.tol},
    )
    if status != 200:
        return _fail(body)
    verification = body["verification"]
    if args.format == "csv":
        _emit(trace_csv(verification))
        return 0
    _emit(json.dumps(verification, sort_keys=True, indent=2))
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        uvicorn.run(create_app(cache_dir=args.cache_dir), host=args.host, port=args.port)
        return 0
    try:
        if args.command == "epsilon":
            return _run_epsilon(args)
        if args.command == "semigroup":
            return _run_semigroup(args)
        if args.command == "okounkov":
            return _run_okounkov(args)
    except EngineError as exc:
        return _fail({"error_code": exc.code, "message": str(exc), "witness": exc.witness})
    return EXIT_CODES["ingestion-error"]


if __name__ == "__main__":
    sys.exit(main())
