"""Command-line entry point.

    kdvactions spectrum POTENTIAL.json [--n-max 64] [--method ode|matrix|both]
    kdvactions actions POTENTIAL.json [--levels 0,1,2] [--n-max 64] [--tol 1e-10]
    kdvactions hamiltonians POTENTIAL.json [--max-level 5]
    kdvactions verify [POTENTIAL.json] [--suite all] [--seed N]

CSV files start with a comment line echoing the configuration and the
sha256 of the input; the verify report carries the same data in its
``config`` member.  Without an input file, ``verify`` runs on the corpus.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .actions import GapError, action_levels
from .corpus import DEFAULT_SEED, corpus
from .hierarchy import DEFAULT_MAX_LEVEL, s_recursion
from .hill import BracketError, IntegrationError, periodic_spectrum, spectrum_from_matrix
from .potential import PotentialFormatError, load_potential
from .verify import SUITES, verify_corpus, verify_potential

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_PARTIAL = 4

TOL_RANGE = (1e-13, 1e-4)


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return f"{float(x):.17g}"


def _levels(text: str) -> list[int]:
    try:
        levels = sorted({int(t) for t in text.split(",") if t.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad level list {text!r}")
    if not levels or levels[0] < 0 or levels[-1] > DEFAULT_MAX_LEVEL:
        raise argparse.ArgumentTypeError(f"levels must lie in [0, {DEFAULT_MAX_LEVEL}]")
    return levels


def _suites(text: str) -> list[str]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    bad = [t for t in items if t != "all" and t not in SUITES]
    if bad or not items:
        raise argparse.ArgumentTypeError(f"unknown suite(s) {bad}; choose from all, {', '.join(SUITES)}")
    return items


def _tol(text: str) -> float:
    try:
        tol = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance {text!r}")
    if not TOL_RANGE[0] <= tol <= TOL_RANGE[1]:
        raise argparse.ArgumentTypeError(f"tol must lie in [{TOL_RANGE[0]:g}, {TOL_RANGE[1]:g}]")
    return tol


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kdvactions",
        description="Hill spectrum, KdV action variables and hierarchy Hamiltonians of a periodic potential.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, input_required=True):
        if input_required:
            p.add_argument("input", type=Path, help='potential JSON: {"cosine": {"n": a_n}, "sine": {"n": b_n}}')
        p.add_argument("-o", "--output", type=Path, help="output file (default: stdout)")

    p = sub.add_parser("spectrum", help="periodic spectrum as CSV")
    common(p)
    p.add_argument("--n-max", type=_positive, default=64)
    p.add_argument("--method", choices=("ode", "matrix", "both"), default="both")

    p = sub.add_parser("actions", help="action variables J_{n,m} as CSV")
    common(p)
    p.add_argument("--n-max", type=_positive, default=64)
    p.add_argument("--levels", "--level", dest="levels", type=_levels, default=[0],
                   help="comma-separated levels in [0, 5] (default 0)")
    p.add_argument("--tol", type=_tol, default=1e-10, help="relative quadrature tolerance")

    p = sub.add_parser("hamiltonians", help="KdV Hamiltonians H_m as CSV")
    common(p)
    p.add_argument("--max-level", type=int, choices=range(0, DEFAULT_MAX_LEVEL + 1), default=DEFAULT_MAX_LEVEL)

    p = sub.add_parser("verify", help="run the verification suites and write a JSON report")
    p.add_argument("input", type=Path, nargs="?", help="potential JSON (default: the built-in corpus)")
    p.add_argument("-o", "--output", type=Path, help="output file (default: stdout)")
    p.add_argument("--suite", type=_suites, default=["all"], help="comma-separated suites (default all)")
    p.add_argument("--n-max", type=_positive, default=None,
                   help="number of gaps (default 4*bandwidth+32)")
    p.add_argument("--tol", type=_tol, default=1e-10, help="relative quadrature tolerance")
    p.add_argument("--seed", type=int, default=None,
                   help=f"regenerate the corpus from this seed (default: committed corpus, seed {DEFAULT_SEED})")
    return parser


def _header(args, digest: str) -> str:
    skip = {"output", "input", "command"}
    items = [f"{k}={_fmt_cfg(v)}" for k, v in sorted(vars(args).items()) if k not in skip]
    return f"# kdvactions {__version__} {args.command} input={args.input} sha256={digest} " + " ".join(items)


def _fmt_cfg(v):
    if isinstance(v, list):
        return ",".join(str(x) for x in v)
    if isinstance(v, float):
        return f"{v:g}"
    return str(v)


def _spectrum_lines(p, args):
    lines = []
    specs = []
    if args.method in ("ode", "both"):
        specs.append(periodic_spectrum(p, args.n_max))
    if args.method in ("matrix", "both"):
        specs.append(spectrum_from_matrix(p, args.n_max))
    if len(specs) == 2:
        diff = float(np.max(np.abs(specs[0].edges() - specs[1].edges())))
        lines.append(f"# max |ode - matrix| over band edges = {_fmt(diff)}")
    lines.append("n,lambda_minus,lambda_plus,lambda_dot,gap,tau,method")
    for s in specs:
        for row in s.rows():
            lines.append(",".join(_fmt(v) for v in row) + f",{s.method}")
    return lines, EXIT_OK


def _actions_lines(p, args):
    spec = periodic_spectrum(p, args.n_max)
    acts = action_levels(p, spec, sorted(set(args.levels) | {0}), rtol=args.tol)
    cols = ["n", "I_n"] + [f"J_n_{m}" for m in args.levels] + ["quad_error", "converged"]
    lines = [",".join(cols)]
    for n in range(1, spec.n_max + 1):
        i = n - 1
        err = max(acts[m].quad_error[i] for m in acts)
        row = [n, acts[0].values[i]] + [acts[m].values[i] for m in args.levels]
        row += [err, int(acts[0].converged[i])]
        lines.append(",".join(_fmt(v) for v in row))
    ok = bool(np.all(acts[0].converged))
    if not ok:
        lines.insert(0, "# WARNING: quadrature did not converge for some gaps (converged=0)")
    return lines, EXIT_OK if ok else EXIT_PARTIAL


def _hamiltonian_lines(p, args):
    M = args.max_level
    data = s_recursion(p, 2 * M + 3)
    lines = ["m,H_m,S_2m+3"]
    for m, H in enumerate(data.H_values):
        lines.append(",".join(_fmt(v) for v in (m, H, data.S_values[2 * m + 2])))
    return lines, EXIT_OK


def _emit(text: str, output: Path | None):
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        digest = None
        p = None
        if args.input is not None:
            raw = args.input.read_bytes()
            digest = hashlib.sha256(raw).hexdigest()
            p = load_potential(args.input)
        if args.command == "verify":
            if p is None:
                members = corpus(args.seed)
                report = verify_corpus(members, args.suite, args.n_max, quad_rtol=args.tol,
                                       seed=DEFAULT_SEED if args.seed is None else args.seed)
            else:
                report = verify_potential(p, args.suite, args.n_max, quad_rtol=args.tol)
            report.config["input"] = None if args.input is None else str(args.input)
            report.config["input_sha256"] = digest
            _emit(report.to_json(), args.output)
            for c in report.failed:
                print(f"FAILED {c.name}: residual={c.residual!r} bound={c.bound!r}", file=sys.stderr)
            return report.exit_code
        handler = {"spectrum": _spectrum_lines, "actions": _actions_lines,
                   "hamiltonians": _hamiltonian_lines}[args.command]
        lines, code = handler(p, args)
        _emit("\n".join([_header(args, digest)] + lines) + "\n", args.output)
        return code
    except (PotentialFormatError, OSError) as exc:
        print(f"kdvactions: input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BracketError, IntegrationError) as exc:
        print(f"kdvactions: hill: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except GapError as exc:
        print(f"kdvactions: actions: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
