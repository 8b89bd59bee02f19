"""Command-line client for the service.

The CLI is a thin HTTP client: every subcommand builds a request model,
sends it to the service, and prints the JSON response with sorted keys.
By default requests run against an in-process instance of the app (no
socket); --server points the same client at a remote instance.  `folia
serve` starts the service with uvicorn.

Exit codes: 0 success, 1 mathematical negative (a check or membership
fails, a search comes back empty), 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from . import __version__

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2


def _client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DeprecationWarning)
        from fastapi.testclient import TestClient

        from .service.app import app

    return TestClient(app)


def _emit(payload: dict[str, Any]) -> None:
    print(json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2))


def _post(args, path: str, payload: dict[str, Any], negative_when=None) -> int:
    with _client(args.server) as client:
        resp = client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except Exception:
            detail = resp.text
        print(f"error: {detail}", file=sys.stderr)
        return EXIT_USAGE
    body = resp.json()
    _emit(body)
    if negative_when is not None and negative_when(body):
        return EXIT_NEGATIVE
    return EXIT_OK


def _params(args) -> list[str]:
    if not args.params:
        return []
    return [p.strip() for p in args.params.split(",") if p.strip()]


def cmd_analyze(args) -> int:
    return _post(args, "/analyze", {"form": args.form, "params": _params(args)})


def cmd_milnor(args) -> int:
    return _post(args, "/milnor", {"form": args.form, "params": _params(args)})


def cmd_blowup(args) -> int:
    payload = {"form": args.form, "params": _params(args), "dim": args.dim, "chart": args.chart}
    return _post(args, "/blowup", payload)


def cmd_search_integral(args) -> int:
    payload = {"form": args.form, "params": _params(args), "order": args.order}
    return _post(args, "/search-integral", payload, negative_when=lambda b: not b["basis"])


def cmd_search_factor(args) -> int:
    payload = {"form": args.form, "params": _params(args), "order": args.order}
    return _post(args, "/search-factor", payload, negative_when=lambda b: not b["basis"])


def cmd_family(args) -> int:
    return _post(
        args,
        "/family",
        {"form": args.form, "params": _params(args)},
        negative_when=lambda b: not b["in_family"],
    )


def cmd_mu_table(args) -> int:
    return _post(
        args,
        "/mu-table",
        {"form": args.form, "params": _params(args)},
        negative_when=lambda b: not b["in_family"],
    )


def cmd_chi(args) -> int:
    return _post(args, "/chi", {"value": args.value}, negative_when=lambda b: not b["member"])


def cmd_dulac(args) -> int:
    components: dict[str, str] = {}
    for item in args.component or []:
        if "=" not in item:
            print(f"error: component {item!r} must look like name=expr", file=sys.stderr)
            return EXIT_USAGE
        name, expr = item.split("=", 1)
        components[name.strip()] = expr
    residues = [r.strip() for r in (args.residues or "").split(",") if r.strip()]
    payload = {
        "type": args.type,
        "components": components,
        "residues": residues,
        "params": _params(args),
    }
    return _post(args, "/dulac", payload)


def cmd_budget(args) -> int:
    points = []
    for item in args.point or []:
        try:
            chart_str, coords_str = item.split(":", 1)
            coords = [c.strip() for c in coords_str.split(",")]
            if len(coords) != 2:
                raise ValueError
            points.append({"chart": int(chart_str), "coords": coords})
        except ValueError:
            print(f"error: point {item!r} must look like CHART:c1,c2", file=sys.stderr)
            return EXIT_USAGE
    payload = {"form": args.form, "params": _params(args), "points": points}
    return _post(args, "/budget", payload, negative_when=lambda b: not b["satisfied"])


def cmd_verify_suite(args) -> int:
    def show_and_check(body) -> bool:
        for item in body["items"]:
            mark = "pass" if item["passed"] else "FAIL"
            detail = f"  ({item['detail']})" if item["detail"] else ""
            print(f"[{mark}] {item['id']}{detail}", file=sys.stderr)
        return not body["passed"]

    return _post(args, "/verify-suite", {"name": args.name}, negative_when=show_and_check)


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("folia.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="folia",
        description="Exact analysis of polynomial 1-form foliation germs "
        "(thin client over the folia HTTP service).",
    )
    parser.add_argument("--version", action="version", version=f"folia {__version__}")
    parser.add_argument(
        "--server",
        default=None,
        help="URL of a running folia service; default runs the service in-process",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_form_cmd(name, fn, help_text, order=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("form", help="1-form expression, e.g. '(x1 - x2^3)*dx1 + x1*x2^2*dx2'")
        p.add_argument("--params", default="", help="comma-separated parameter names")
        if order:
            p.add_argument("--order", type=int, default=6, help="truncation order N")
        p.set_defaults(fn=fn)
        return p

    add_form_cmd("analyze", cmd_analyze, "full local classification report")
    add_form_cmd("milnor", cmd_milnor, "Milnor number of a plane 1-form at the origin")
    p = add_form_cmd("blowup", cmd_blowup, "strict transform in one blow-up chart")
    p.add_argument("--dim", type=int, choices=(2, 3), default=2)
    p.add_argument("--chart", type=int, default=0)
    add_form_cmd(
        "search-integral", cmd_search_integral, "truncated first-integral search", order=True
    )
    add_form_cmd(
        "search-factor", cmd_search_factor, "truncated integrating-factor search", order=True
    )
    add_form_cmd("family", cmd_family, "match against the nilpotent-point normal families")
    add_form_cmd("mu-table", cmd_mu_table, "Milnor number from the family coefficient table")

    p = sub.add_parser("chi", help="membership in the resonance set")
    p.add_argument("value", help="rational number, e.g. -3/5")
    p.set_defaults(fn=cmd_chi)

    p = sub.add_parser("dulac", help="build one of the ten closed rational normal forms")
    p.add_argument("type", help="catalogue type a..j")
    p.add_argument("--params", default="", help="comma-separated parameter names")
    p.add_argument(
        "--component",
        action="append",
        metavar="NAME=EXPR",
        help="component polynomial, e.g. q='x1^3 + x2^3' (repeatable)",
    )
    p.add_argument("--residues", default="", help="comma-separated nonzero rationals")
    p.set_defaults(fn=cmd_dulac)

    p = sub.add_parser("budget", help="verify a singular-point budget on the projective plane")
    p.add_argument("form", help="homogeneous dicritical 1-form in x1, x2, x3")
    p.add_argument("--params", default="", help="comma-separated parameter names")
    p.add_argument(
        "--point",
        action="append",
        metavar="CHART:c1,c2",
        help="candidate singular point, chart index 0..2 (repeatable)",
    )
    p.set_defaults(fn=cmd_budget)

    p = sub.add_parser("verify-suite", help="run a named identity suite")
    p.add_argument("name", help="suite name or 'all'")
    p.set_defaults(fn=cmd_verify_suite)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    argv = list(argv)
    # negative rationals like -3/5 would otherwise parse as option flags
    for i, tok in enumerate(argv):
        if tok.startswith("-"):
            continue
        if tok == "chi" and "--" not in argv:
            argv.insert(i + 1, "--")
        break
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code or 0)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
