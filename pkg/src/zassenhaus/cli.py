"""Command-line entry point: ``zassenhaus <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import coefficients as co
from .diffpoly import DiffPoly
from .errors import (
    CoefficientRangeError,
    ConfigurationError,
    DomainError,
    ParseError,
    ShapeError,
)

EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_VERIFY = 4

_TERM_SPEC = re.compile(r"^([A-Za-z_]\w*|1):(\d+)$")


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _term_spec(text: str):
    m = _TERM_SPEC.match(text.strip())
    if not m:
        raise UsageError(f"malformed term spec {text!r}; expected SYMBOL:HEIGHT")
    return m.group(1), int(m.group(2))


# ---------------------------------------------------------------------------
# commands; each returns (text to emit, exit code)


def cmd_coeffs(args):
    if args.kmax > 12:
        raise UsageError("--kmax must be at most 12")
    table = co.CoeffTable.build(args.kind, args.kmax)
    if args.format == "json":
        return table.to_json() + "\n", 0
    if args.format == "csv":
        return table.to_csv(), 0
    return table.render_text(), 0


def _emit_term(term, fmt):
    if fmt == "json":
        return json.dumps(term.to_json(), ensure_ascii=False, indent=1) + "\n"
    return term.to_text("unicode") + "\n"


def cmd_commutator(args):
    from .falgebra import ang, commutator

    (f, k), (g, l) = _term_spec(args.left), _term_spec(args.right)
    return _emit_term(commutator(ang(DiffPoly.coerce(f), k), ang(DiffPoly.coerce(g), l)), args.format), 0


def cmd_sbch(args):
    from .splitting import sbch, tdse_hamiltonian

    a, b = tdse_hamiltonian(args.symbol)
    return _emit_term(sbch(a, b, args.order), args.format), 0


def cmd_split(args):
    from .splitting import zassenhaus, tdse_hamiltonian

    a, b = tdse_hamiltonian(args.symbol)
    split = zassenhaus(a, b, args.n, args.sigma)
    if args.format == "json":
        return split.to_json() + "\n", 0
    lines = [f"# n={split.n} sigma={split.sigma} target order {split.order_target}"]
    for idx, w in enumerate(split.exponents):
        lines.append(f"W[{idx}] = {w.to_text('unicode')}")
    lines.append(f"# derivatives needed: {split.manifest()}")
    return "\n".join(lines) + "\n", 0


def cmd_cost(args):
    from .splitting import cost

    value = cost(args.n, args.sigma)
    if args.format == "json":
        return json.dumps({"n": args.n, "sigma": str(args.sigma), "cost": value}) + "\n", 0
    return f"{value}\n", 0


def cmd_solve(args):
    from .spectral import dump_state, rows_to_csv, solve
    from .splitting import tdse_hamiltonian, zassenhaus

    for name in ("M", "steps"):
        if getattr(args, name) <= 0:
            raise UsageError(f"--{name} must be positive")
    if args.eps <= 0 or args.dt <= 0:
        raise DomainError("--eps and --dt must be positive")
    split = None
    if args.scheme == "zassenhaus":
        a, b = tdse_hamiltonian()
        split = zassenhaus(a, b, args.order, args.sigma)
    row, state = solve(
        args.M, args.eps, args.dt, args.steps, args.potential, args.scheme, split,
        lanczos_iters=args.lanczos_iters,
    )
    if args.dump:
        with open(args.dump, "wb") as fh:
            fh.write(dump_state(state))
    if args.format == "json":
        from dataclasses import asdict

        return json.dumps(asdict(row)) + "\n", 0
    return rows_to_csv([row]), 0


def cmd_verify(args):
    from .verify import run_suite

    results = run_suite(args.suite, args.seed)
    failed = [r for r in results if not r.ok]
    if args.format == "json":
        text = json.dumps(
            [{"name": r.name, "ok": r.ok, "detail": r.detail, "seconds": r.seconds} for r in results],
            indent=1,
        ) + "\n"
    else:
        text = "\n".join(r.line() for r in results)
        text += f"\n{len(results) - len(failed)}/{len(results)} checks passed\n"
    return text, EXIT_VERIFY if failed else 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def global_flags(parser, suppress):
        default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        parser.add_argument("--format", choices=("text", "json", "csv"), default=default("text"))
        parser.add_argument("--seed", type=int, default=default(0))
        parser.add_argument("--out", metavar="FILE", default=default(None),
                            help="write output here instead of stdout")

    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    global_flags(common, suppress=True)
    p = argparse.ArgumentParser(prog="zassenhaus", description=__doc__)
    global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coeffs", parents=[common], help="structure coefficient tables")
    c.add_argument("--kind", choices=co.KINDS, default="pi")
    c.add_argument("--kmax", type=int, default=3)
    c.set_defaults(func=cmd_coeffs)

    c = sub.add_parser("commutator", parents=[common], help="expand [<f>_k, <g>_l]")
    c.add_argument("left", help="SYMBOL:HEIGHT, e.g. f:2 (use 1:k for d^k)")
    c.add_argument("right")
    c.set_defaults(func=cmd_commutator)

    c = sub.add_parser("sbch", parents=[common], help="symmetric BCH exponent of the TDSE")
    c.add_argument("--order", type=int, default=4, help="highest t-degree kept")
    c.add_argument("--symbol", default="V")
    c.set_defaults(func=cmd_sbch)

    c = sub.add_parser("split", parents=[common], help="derive a symmetric Zassenhaus splitting")
    c.add_argument("--n", type=int, default=1)
    c.add_argument("--sigma", type=_rational, default=Fraction(1, 2))
    c.add_argument("--symbol", default="V")
    c.set_defaults(func=cmd_split)

    c = sub.add_parser("cost", parents=[common], help="FFTs per step")
    c.add_argument("n", type=int)
    c.add_argument("sigma", type=_rational, nargs="?", default=Fraction(1))
    c.set_defaults(func=cmd_cost)

    c = sub.add_parser("solve", parents=[common], help="integrate the TDSE and report errors")
    c.add_argument("--M", type=int, default=128)
    c.add_argument("--eps", type=float, default=1 / 16)
    c.add_argument("--dt", type=float, default=0.01)
    c.add_argument("--steps", type=int, default=100)
    c.add_argument("--potential", default="cos(pi*x)")
    c.add_argument("--scheme", choices=("strang", "zassenhaus"), default="zassenhaus")
    c.add_argument("--order", type=int, default=1)
    c.add_argument("--sigma", type=_rational, default=Fraction(1))
    c.add_argument("--lanczos-iters", type=int, default=None)
    c.add_argument("--dump", metavar="FILE", help="write the final state as a binary dump")
    c.set_defaults(func=cmd_solve)

    c = sub.add_parser("verify", parents=[common], help="run a verification suite")
    c.add_argument("--suite", choices=("coeffs", "algebra", "matrix", "numeric", "all"), default="all")
    c.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = args.func(args)
    except (UsageError, ParseError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, CoefficientRangeError, ShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
