"""Command-line front end.

Exit codes: 0 success, 1 domain error (infeasible class, non-concave
distortion where concavity is required, failing verify suite), 2 malformed
input. ``order-check`` reports a failed order as a result and exits 0.
Stdout stays empty whenever the exit code is nonzero; a failing ``verify``
report goes to stderr instead.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from typing import Any, Sequence

from . import couplings as cp
from . import distributions as dist
from . import orders
from . import risk_measures as rm
from . import verify
from ._numeric import MERGE_TOL, sig12

SEED_ENV = "FRECHET_BOUNDS_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")

    def exit(self, status=0, message=None):
        # --help lands here; surface it as output instead of exiting the process
        raise _HelpExit(status, message)


class _HelpExit(Exception):
    def __init__(self, status, message):
        self.status, self.message = status, message


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="frechet-bounds",
                description="Convex-order bounds for sums with fixed marginals.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def src(sp, flag, what, dest=None):
        kw = {"dest": dest} if dest else {}
        sp.add_argument(flag, help=f"{what} as inline JSON, or '-' for stdin", **kw)

    q = sub.add_parser("quantile", help="generalized inverse of a distribution")
    src(q, "--dist", "distribution")
    q.add_argument("--file")
    q.add_argument("--p", type=float, required=True)

    r = sub.add_parser("riskmeasure", help="distortion risk measure rho_g")
    src(r, "--dist", "distribution")
    r.add_argument("--file")
    r.add_argument("--g", required=True, help='distortion JSON, e.g. {"kind":"tvar","p":0.9}')
    r.add_argument("--spectral-steps", type=int,
                   help="also report the quantile-integral evaluation with this many steps")

    b = sub.add_parser("coupling-build", help="build an extremal coupling")
    src(b, "--class", "Frechet class", dest="klass")
    b.add_argument("--file")
    b.add_argument("--kind", required=True,
                   choices=["comonotonic", "countermonotonic", "mutually-exclusive"])
    b.add_argument("--side", choices=["below", "above"], default="below")

    c = sub.add_parser("coupling-check", help="test a coupling for a dependence structure")
    src(c, "--joint", "joint distribution")
    c.add_argument("--file")
    c.add_argument("--kind", required=True,
                   choices=["comonotonic", "countermonotonic", "mutually-exclusive", "member"])
    c.add_argument("--side", choices=["below", "above"], default="below")
    c.add_argument("--class", dest="klass", help="Frechet class JSON (required for --kind member)")
    c.add_argument("--tol", type=float, default=MERGE_TOL)

    s = sub.add_parser("sum", help="law of the coordinate sum of a coupling")
    src(s, "--joint", "joint distribution")
    s.add_argument("--file")

    o = sub.add_parser("order-check", help="decide X <= Y in convex or stop-loss order")
    src(o, "--x", "left distribution")
    src(o, "--y", "right distribution")
    o.add_argument("--order", choices=["cx", "sl", "sl-tvar"], default="cx")

    cv = sub.add_parser("curve", help="stop-loss or TVaR curve")
    src(cv, "--dist", "distribution")
    cv.add_argument("--file")
    cv.add_argument("--kind", choices=["stoploss", "tvar"], default="stoploss")
    cv.add_argument("--out", choices=["csv", "json"], default="csv")

    v = sub.add_parser("verify", help="run a seeded verification suite")
    v.add_argument("--suite", required=True, choices=sorted(verify.SUITES))
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--trials", type=int, default=500)
    return p


def _load(text: str | None, file: str | None, stdin: bytes, what: str) -> Any:
    if text is None and file is None:
        raise UsageError(f"missing {what}: pass it inline, as '-' for stdin, or with --file")
    if text is not None and file is not None:
        raise UsageError(f"give the {what} either inline or with --file, not both")
    try:
        if file is not None:
            with open(file, encoding="utf-8") as fh:
                raw = fh.read()
        elif text == "-":
            raw = stdin.decode("utf-8")
        else:
            raw = text
        return json.loads(raw)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {what}: {exc}") from None


def _dumps(obj: Any) -> str:
    return json.dumps(obj) + "\n"


def _execute(args: argparse.Namespace, stdin: bytes, env: dict) -> tuple[int, str]:
    cmd = args.command
    if cmd == "quantile":
        D = dist.from_json(_load(args.dist, args.file, stdin, "distribution"))
        return 0, _dumps({"quantile": sig12(dist.quantile(D, args.p))})

    if cmd == "riskmeasure":
        D = dist.from_json(_load(args.dist, args.file, stdin, "distribution"))
        g = rm.distortion_from_json(_load(args.g, None, stdin, "distortion"))
        out = {"rho": sig12(rm.rho(g, D))}
        if args.spectral_steps is not None:
            out["rho_spectral"] = sig12(rm.rho_spectral(g, D, args.spectral_steps))
        return 0, _dumps(out)

    if cmd == "coupling-build":
        C = cp.class_from_json(_load(args.klass, args.file, stdin, "Frechet class"))
        if args.kind == "comonotonic":
            J = cp.comonotonic(C)
        elif args.kind == "countermonotonic":
            if C.n != 2:
                raise UsageError("countermonotonic coupling needs exactly two marginals")
            J = cp.countermonotonic(C[0], C[1])
        else:
            J = cp.mutually_exclusive(C, args.side)
        return 0, _dumps(cp.joint_to_json(J))

    if cmd == "coupling-check":
        J = cp.joint_from_json(_load(args.joint, args.file, stdin, "joint distribution"))
        if args.kind == "comonotonic":
            holds = cp.is_comonotonic(J, args.tol)
        elif args.kind == "countermonotonic":
            if J.dim != 2:
                raise UsageError("countermonotonicity is defined for bivariate couplings only")
            holds = cp.is_countermonotonic(J, args.tol)
        elif args.kind == "mutually-exclusive":
            holds = cp.is_mutually_exclusive(J, args.side, args.tol)
        else:
            if args.klass is None:
                raise UsageError("--kind member needs --class")
            C = cp.class_from_json(_load(args.klass, None, stdin, "Frechet class"))
            if C.n != J.dim:
                raise UsageError(f"class has {C.n} marginals, coupling has dimension {J.dim}")
            holds = cp.is_member(J, C, args.tol)
        return 0, _dumps({"kind": args.kind, "holds": bool(holds)})

    if cmd == "sum":
        J = cp.joint_from_json(_load(args.joint, args.file, stdin, "joint distribution"))
        return 0, _dumps(dist.to_json(cp.sum_distribution(J)))

    if cmd == "order-check":
        if args.x == "-" and args.y == "-":
            raise UsageError("only one of --x/--y may read stdin")
        X = dist.from_json(_load(args.x, None, stdin, "distribution --x"))
        Y = dist.from_json(_load(args.y, None, stdin, "distribution --y"))
        decide = {"cx": orders.cx_order, "sl": orders.sl_order,
                  "sl-tvar": orders.sl_order_via_tvar}[args.order]
        return 0, _dumps({"order": args.order, **decide(X, Y).to_json()})

    if cmd == "curve":
        D = dist.from_json(_load(args.dist, args.file, stdin, "distribution"))
        pts = orders.stop_loss_curve(D) if args.kind == "stoploss" else orders.tvar_curve(D)
        if args.out == "csv":
            return 0, orders.curve_to_csv(pts)
        return 0, _dumps([{"x": sig12(x), "value": sig12(v)} for x, v in pts])

    if cmd == "verify":
        seed = args.seed
        if env.get(SEED_ENV):
            try:
                seed = int(env[SEED_ENV])
            except ValueError:
                raise UsageError(f"{SEED_ENV} must be an integer") from None
        if seed < 0 or args.trials < 0:
            raise UsageError("--seed and --trials must be nonnegative")
        report = verify.run_suite(args.suite, seed, args.trials)
        return (0 if report.ok else 1), report.dumps() + "\n"

    raise UsageError(f"unknown command {cmd!r}")


def run(argv: Sequence[str], stdin: bytes = b"",
        env: dict | None = None) -> tuple[int, bytes, bytes]:
    """Run one invocation; returns (exit code, stdout bytes, stderr bytes)."""
    env = dict(os.environ) if env is None else env
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        code, out = _execute(args, stdin, env)
    except _HelpExit as h:
        buf = io.StringIO()
        parser.print_help(buf)
        return h.status, buf.getvalue().encode(), (h.message or "").encode()
    except UsageError as exc:
        return 2, b"", f"error: {exc}\n".encode()
    except (cp.InfeasibleClassError, rm.ConcavityError) as exc:
        return 1, b"", f"error: {exc}\n".encode()
    except (ValueError, TypeError) as exc:
        return 2, b"", f"error: malformed input: {exc}\n".encode()
    if code != 0:
        return code, b"", b"error: verification suite reported failures\n" + out.encode()
    return code, out.encode(), b""


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    wants_stdin = any(a == "-" or a.endswith("=-") for a in argv)
    stdin = sys.stdin.buffer.read() if wants_stdin and sys.stdin is not None else b""
    code, out, err = run(argv, stdin)
    sys.stdout.buffer.write(out)
    sys.stderr.buffer.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
