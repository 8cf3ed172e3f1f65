"""Command-line front end: a thin client of the service endpoints.

Every subcommand builds one request, obtains the response either from a
remote server (--server URL) or from an in-process instance of the app,
and renders it as json, csv or text.  Same argv (and seed) produce a
byte-identical report; no timestamps or machine state are embedded.

Exit codes: 0 success / all checks pass; 2 check failures (report still
written); 1 usage or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


class Client:
    def __init__(self, server: Optional[str] = None):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=None)
        else:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

                from .api.app import app

                self._client = TestClient(app)

    def post(self, path: str, payload: dict) -> dict:
        resp = self._client.post(path, json=payload)
        if resp.status_code >= 400:
            try:
                detail = resp.json().get("detail", resp.text)
            except Exception:
                detail = resp.text
            raise SystemExit(f"error: {detail}") from None
        return resp.json()


def _rows_of(data: dict):
    """Canonical row list + column order for csv rendering."""
    if "rows" in data and isinstance(data["rows"], list):
        rows = data["rows"]
        if rows:
            return rows, list(rows[0].keys())
        return [], []
    if "checks" in data:
        rows = data["checks"]
        return rows, (list(rows[0].keys()) if rows else [])
    return [data], list(data.keys())


def render(data: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    if fmt == "csv":
        rows, cols = _rows_of(data)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for row in rows:
            writer.writerow(["" if row.get(c) is None else row.get(c) for c in cols])
        return buf.getvalue()
    # text
    lines = []

    def emit(prefix, obj):
        if isinstance(obj, dict):
            for k, v in obj.items():
                if isinstance(v, (dict, list)):
                    emit(f"{prefix}{k}.", v)
                else:
                    lines.append(f"{prefix}{k} = {v}")
        elif isinstance(obj, list):
            for i, v in enumerate(obj):
                emit(f"{prefix}{i}.", v) if isinstance(v, (dict, list)) else lines.append(
                    f"{prefix}{i} = {v}"
                )

    emit("", data)
    return "\n".join(lines) + "\n"


def _failure_flag(command: str, data: dict) -> bool:
    if command == "verify-bessel":
        return not data.get("all_ok", False)
    if command == "verify-identities":
        return not data.get("all_equal", False)
    if command == "check-minimizer":
        return not data.get("all_ok", False)
    return False


def build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--server", default=None, help="remote service URL (default: in-process)"
    )
    common.add_argument("--format", default="json", choices=["json", "csv", "text"])
    common.add_argument("--report", default=None, help="also write the report to this path")
    common.add_argument("--seed", type=int, default=0, help="PRNG seed recorded in reports")

    p = _Parser(prog="fracbubble", description=__doc__, parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    fi = add_parser("f-integral", help="weighted bubble integral coefficient")
    fi.add_argument("--kind", type=int, required=True, choices=[1, 2, 3, 4])
    fi.add_argument("--alpha", type=int, required=True)
    fi.add_argument("--beta", type=int, required=True)
    fi.add_argument("--n", type=int, required=True)
    fi.add_argument("--gamma", required=True, help="rational 'p/q'")
    fi.add_argument(
        "--method",
        default="exact",
        choices=["exact", "table", "fourier_fd", "poisson_physical"],
    )

    mo = add_parser("moments", help="exact profile-moment reduction")
    mo.add_argument("--side", required=True, choices=["phi", "what"])
    mo.add_argument("--int-part", type=int, required=True)
    mo.add_argument("--gamma-mult", type=int, required=True)
    mo.add_argument("--derivs", default="0,0", help="j,j' in {0,1}")
    mo.add_argument("--n", type=int, required=True)
    mo.add_argument("--gamma", required=True)
    mo.add_argument("--numeric-check", action="store_true")

    add_parser("verify-bessel", help="special-function check battery")

    vi = add_parser("verify-identities", help="exact tensor identity battery")
    vi.add_argument("--dim", type=int, required=True)
    vi.add_argument("--trials", type=int, default=1)

    bp = add_parser("build-p", help="assemble the energy polynomial")
    bp.add_argument("--n", type=int, required=True)
    bp.add_argument("--gamma", required=True)
    bp.add_argument("--d0", type=int, required=True, choices=[1, 2, 3, 4])
    bp.add_argument("--f", required=True, help="comma-separated a_0..a_{d0} as 'p/q'")
    bp.add_argument("--hessian", action="store_true")

    dc = add_parser("disc", help="Q coefficients and discriminant")
    dc.add_argument("--n", type=int, required=True)
    dc.add_argument("--gamma", required=True)
    dc.add_argument("--d0", type=int, required=True, choices=[1, 4])

    gs = add_parser("gamma-star", help="bracket the transition exponent")
    gs.add_argument("--width", default="1/10000000")
    gs.add_argument("--lo", default="1/2")
    gs.add_argument("--hi", default="99/100")

    sw = add_parser("sweep", help="discriminant sign sweep over (n, gamma)")
    sw.add_argument("--n-min", type=int, required=True)
    sw.add_argument("--n-max", type=int, required=True)
    sw.add_argument("--grid", type=int, default=99, help="gamma grid count (k/(grid+1))")
    sw.add_argument("--d0-policy", default="auto", choices=["auto", "fixed"])
    sw.add_argument("--d0", type=int, default=4)
    sw.add_argument("--no-conditions", action="store_true")
    sw.add_argument("--jobs", type=int, default=1)

    cm = add_parser("check-minimizer", help="exact minimizer certificates")
    cm.add_argument("--n", type=int, required=True)
    cm.add_argument("--gamma", required=True)
    cm.add_argument("--d0", type=int, default=None)

    fg = add_parser("figure1", help="normalized discriminant curve samples")
    fg.add_argument("--points", type=int, default=199)

    add_parser("errata", help="engine-vs-printed-table disagreement ledger")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    client = Client(args.server)

    if args.command == "f-integral":
        data = client.post(
            "/v1/f-integral",
            dict(kind=args.kind, alpha=args.alpha, beta=args.beta,
                 n=args.n, gamma=args.gamma, method=args.method),
        )
    elif args.command == "moments":
        j, jp = (int(x) for x in args.derivs.split(","))
        data = client.post(
            "/v1/moments",
            dict(side=args.side, int_part=args.int_part, gamma_mult=args.gamma_mult,
                 derivs=[j, jp], n=args.n, gamma=args.gamma,
                 numeric_check=args.numeric_check),
        )
    elif args.command == "verify-bessel":
        data = client.post("/v1/verify-bessel", {})
    elif args.command == "verify-identities":
        data = client.post(
            "/v1/verify-identities",
            dict(dim=args.dim, trials=args.trials, seed=args.seed),
        )
    elif args.command == "build-p":
        data = client.post(
            "/v1/build-p",
            dict(n=args.n, gamma=args.gamma, d0=args.d0,
                 f=args.f.split(","), include_hessian=args.hessian),
        )
    elif args.command == "disc":
        data = client.post("/v1/disc", dict(n=args.n, gamma=args.gamma, d0=args.d0))
    elif args.command == "gamma-star":
        data = client.post(
            "/v1/gamma-star", dict(width=args.width, lo=args.lo, hi=args.hi)
        )
    elif args.command == "sweep":
        data = client.post(
            "/v1/sweep",
            dict(n_min=args.n_min, n_max=args.n_max, gamma_grid_count=args.grid,
                 d0_policy=args.d0_policy, d0_fixed=args.d0,
                 conditions=not args.no_conditions, jobs=args.jobs),
        )
    elif args.command == "check-minimizer":
        data = client.post(
            "/v1/check-minimizer", dict(n=args.n, gamma=args.gamma, d0=args.d0)
        )
    elif args.command == "figure1":
        data = client.post("/v1/figure1", dict(points=args.points))
    elif args.command == "errata":
        data = client.post("/v1/errata", {})
    else:  # pragma: no cover
        raise SystemExit(1)

    report = {"config": {"command": args.command, "seed": args.seed,
                         "format": args.format}, "result": data}
    out = render(report if args.format == "json" else data, args.format)
    sys.stdout.write(out)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(out)
    return 2 if _failure_flag(args.command, data) else 0


if __name__ == "__main__":
    sys.exit(main())
