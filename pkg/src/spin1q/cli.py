"""Command-line interface.

Exit codes: 0 success, 1 a hard bound check failed, 2 bad input,
3 solver did not converge (``analyze`` and ``decompose``).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from . import __version__
from .batch import ENSEMBLE_ALIASES, ENSEMBLES, BatchConfig, default_workers, run_batch, violation_states
from .chull import (
    DEFAULT_ATOMS,
    DEFAULT_REFINE_ROUNDS,
    DEFAULT_TOL,
    REPORT_TOL,
    QuantumnessConfig,
    QuantumnessReport,
    quantumness,
)
from .entanglement import negativity, spin1_concurrence
from .ensembles import RngStream, random_coherent, random_hs_density, random_pure
from .errors import Spin1Error
from .stateio import FORMAT_NAME, FORMAT_VERSION, read_state, serialize_state, state_document, to_density

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_NONCONVERGED = 3

#: Slack on the hard lower bound to absorb solver rounding.
LOWER_BOUND_SLACK = 1e-6


def _solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--atoms", type=int, default=DEFAULT_ATOMS, help="sampled coherent atoms (default %(default)s)")
    p.add_argument("--refine-rounds", type=int, default=DEFAULT_REFINE_ROUNDS,
                   help="refinement rounds after the QP (default %(default)s)")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="QP optimality tolerance (default %(default)g)")
    p.add_argument("--seed", type=int, default=0, help="seed for atoms and refinement (default %(default)s)")


def _config(args, force_qp: bool = False) -> QuantumnessConfig:
    return QuantumnessConfig(
        atoms=args.atoms,
        refine_rounds=args.refine_rounds,
        tol=args.tol,
        seed=args.seed,
        force_qp=force_qp or getattr(args, "force_qp", False),
    )


def _report_dict(rep: QuantumnessReport) -> dict:
    return {
        "lambda_min": rep.lambda_min,
        "classical": rep.method == "classical_zero",
        "quantumness": rep.value,
        "method": rep.method,
        "converged": rep.converged,
        "lower_bound": rep.lower_bound,
        "f_lambda": rep.f_lambda_bound,
        "excess_over_f": rep.excess_over_f,
        "purity": rep.purity,
    }


def _decomposition_dict(dec) -> dict:
    return {
        "weights": list(dec.weights),
        "atoms": [{"theta": a.theta, "phi": a.phi} for a in dec.atoms],
    }


def cmd_analyze(args) -> int:
    rho = to_density(read_state(args.file))
    rep = quantumness(rho, _config(args))
    info = _report_dict(rep)
    info["negativity"] = negativity(rho)
    info["concurrence"] = spin1_concurrence(rho)
    if args.json:
        print(json.dumps(info))
    else:
        width = max(len(k) for k in info)
        for key, value in info.items():
            text = f"{value:.12g}" if isinstance(value, float) else str(value).lower()
            print(f"{key:<{width}}  {text}")
    if not rep.converged:
        print("error: QP solver did not reach the requested tolerance", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_decompose(args) -> int:
    rho = to_density(read_state(args.file))
    rep = quantumness(rho, _config(args))
    if rep.decomposition is None:
        # classical input: the certificate is a mixture that reproduces the state
        rep = quantumness(rho, _config(args, force_qp=True))
    closest = rep.decomposition.density()
    out = {
        "lambda_min": rep.lambda_min,
        "distance": rep.value,
        "method": rep.method,
        "converged": rep.converged,
        **_decomposition_dict(rep.decomposition),
        "closest_state": state_document(closest),
    }
    print(json.dumps(out, indent=None if args.compact else 2))
    return EXIT_OK if rep.converged else EXIT_NONCONVERGED


def cmd_bounds_check(args) -> int:
    rho = to_density(read_state(args.file))
    rep = quantumness(rho, _config(args))
    lower_ok = rep.value >= rep.lower_bound - LOWER_BOUND_SLACK
    upper_ok = rep.value <= rep.f_lambda_bound + REPORT_TOL
    print(f"lambda_min      {rep.lambda_min:.12g}")
    print(f"lower bound     {rep.lower_bound:.12g}")
    print(f"quantumness     {rep.value:.12g}  ({rep.method})")
    print(f"f(lambda)       {rep.f_lambda_bound:.12g}")
    print(f"lower <= Q      {'ok' if lower_ok else 'VIOLATED'}")
    print(f"Q <= f(lambda)  {'ok' if upper_ok else 'exceeded (conjectured bound; state reported)'}"
          f"  excess {rep.excess_over_f:.3e}")
    if not upper_ok:
        print(serialize_state(rho), file=sys.stderr)
    return EXIT_OK if lower_ok else EXIT_CHECK_FAILED


def cmd_batch(args) -> int:
    workers = args.workers if args.workers is not None else default_workers()
    config = BatchConfig(
        ensemble=args.ensemble,
        count=args.count,
        seed=args.seed,
        atoms=args.atoms,
        refine_rounds=args.refine_rounds,
        tol=args.tol,
        workers=workers,
        output_path=args.out,
    )
    summary = run_batch(config)
    for line in summary.lines():
        print(line, file=sys.stderr)
    if args.violations_out and summary.violations:
        with open(args.violations_out, "w", encoding="utf-8") as fh:
            for index, rho in violation_states(config, summary):
                doc = state_document(rho)
                doc["index"] = index
                fh.write(json.dumps(doc) + "\n")
    return EXIT_OK


def cmd_sample(args) -> int:
    kind = ENSEMBLE_ALIASES.get(args.ensemble, args.ensemble)
    draw = {
        "hs_mixed": random_hs_density,
        "haar_pure": random_pure,
        "coherent": random_coherent,
    }[kind]
    lines = [serialize_state(draw(RngStream(args.seed, i))) for i in range(args.count)]
    text = "\n".join(lines) + "\n"
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    # argparse exits with 2 on usage errors, which matches EXIT_INPUT
    p = argparse.ArgumentParser(prog="spin1q", description="Quantumness of spin-1 states.")
    p.add_argument("--version", action="version", version=f"{FORMAT_NAME} format {FORMAT_VERSION} (spin1q {__version__})")
    p.add_argument("-v", "--verbose", action="store_true", help="log solver diagnostics")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="report quantumness, bounds and entanglement of a state file")
    a.add_argument("file")
    a.add_argument("--json", action="store_true", help="print one JSON object instead of a table")
    a.add_argument("--force-qp", action="store_true", help="use the numerical solver even for pure states")
    _solver_args(a)
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("decompose", help="print the closest classical state as a coherent mixture")
    d.add_argument("file")
    d.add_argument("--compact", action="store_true", help="single-line JSON")
    _solver_args(d)
    d.set_defaults(func=cmd_decompose)

    c = sub.add_parser("bounds-check", help="check lower <= Q <= f(lambda) for a state file")
    c.add_argument("file")
    _solver_args(c)
    c.set_defaults(func=cmd_bounds_check)

    b = sub.add_parser("batch", help="quantumness of random states as CSV")
    b.add_argument("--ensemble", default="hs_mixed", choices=ENSEMBLES + tuple(ENSEMBLE_ALIASES))
    b.add_argument("--count", type=int, default=100)
    b.add_argument("--workers", type=int, default=None,
                   help="worker processes (default from SPIN1Q_WORKERS, else 1)")
    b.add_argument("--out", default=None, help="CSV path (default stdout)")
    b.add_argument("--violations-out", default=None,
                   help="write states exceeding f(lambda) as JSON lines")
    _solver_args(b)
    b.set_defaults(func=cmd_batch)

    s = sub.add_parser("sample", help="emit random states as JSON lines")
    s.add_argument("--ensemble", default="hs_mixed", choices=("hs_mixed", "hs", "haar_pure", "haar", "pure", "coherent"))
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_sample)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except Spin1Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
