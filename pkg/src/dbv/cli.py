"""Command-line front end.

Subcommands wrap the library one-to-one and emit deterministic JSON reports
(stdout or --out).  Exit codes separate mathematics from plumbing:

* 0 -- mathematical success (axioms pass, degenerate, residual zero, ...)
* 1 -- mathematical negative (obstruction found, lemma fails, rejected)
* 2 -- usage or input error (malformed file, bad flags)

The default degree / x-degree window for presentation-level checks can be
set with the DBV_WINDOW environment variable.
"""

import argparse
import json
import os
import sys

from .algebras import algebra_from_json
from .axioms import check_axioms
from .errors import DbvError
from .generators import landau_ginzburg, random_finite, square_zero_example
from .solver import (
    classical_solve_log,
    closed_representatives,
    observable_extend,
    quantum_solve,
    solution_from_json,
    verify_solution,
)
from .splitting import (
    build_beta,
    compute_homology,
    degeneration_check,
    obstruction_grid,
    qdelta_lemma_check,
)
from .vectors import Vector

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2


def default_window():
    try:
        return int(os.environ.get("DBV_WINDOW", "8"))
    except ValueError:
        return 8


def emit(args, payload):
    text = json.dumps(payload, sort_keys=True, indent=2 if args.pretty else None)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def load_algebra(args, skip_axioms=False):
    """Parse and validate an algebra description file."""
    try:
        with open(args.spec) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SystemExit(f"cannot read {args.spec}: {exc}")
    except json.JSONDecodeError as exc:
        raise DbvError(f"malformed JSON in {args.spec}: {exc}")
    algebra = algebra_from_json(data)
    if not (skip_axioms or getattr(args, "skip_axioms", False)):
        window = getattr(args, "window", None) or default_window()
        report = check_axioms(algebra, window=window)
        if not report.all_passed:
            failure = report.failures()[0]
            raise DbvError(
                f"algebra fails axiom {failure.name!r}; witness "
                f"{json.dumps(failure.witness, sort_keys=True)}"
            )
    return algebra


def cmd_check_axioms(args):
    algebra = load_algebra(args, skip_axioms=True)
    report = check_axioms(algebra, window=args.window or default_window())
    emit(args, report.to_json())
    return EXIT_OK if report.all_passed else EXIT_NEGATIVE


def cmd_homology(args):
    algebra = load_algebra(args)
    homology, _ = compute_homology(algebra)
    dims = homology.dimensions()
    emit(args, {
        "dimensions": {str(d): dims[d] for d in sorted(dims)},
        "classes": homology.to_json(),
    })
    return EXIT_OK


def cmd_degeneration(args):
    algebra = load_algebra(args)
    report = degeneration_check(algebra, hbar_order=args.hbar_order)
    emit(args, report.to_json())
    return EXIT_OK if report.degenerate else EXIT_NEGATIVE


def cmd_obstructions(args):
    algebra = load_algebra(args)
    report = obstruction_grid(algebra, args.t_order, args.hbar_order or 3)
    emit(args, report.to_json())
    return EXIT_OK if report.all_computed_vanish else EXIT_NEGATIVE


def cmd_qdelta(args):
    algebra = load_algebra(args)
    report = qdelta_lemma_check(algebra, window=args.window)
    emit(args, report.to_json())
    return EXIT_OK if report.holds else EXIT_NEGATIVE


def cmd_solve_classical(args):
    algebra = load_algebra(args)
    flavor = {"delta": "classical-delta", "q-plus-delta": "classical-q-plus-delta"}[args.flavor]
    representatives = closed_representatives(algebra, flavor)
    solution = classical_solve_log(algebra, representatives, args.t_order, flavor=flavor)
    payload = solution.to_json()
    payload["residual_is_zero"] = True
    emit(args, payload)
    return EXIT_OK


def cmd_solve_qme(args):
    algebra = load_algebra(args)
    homology, dec = compute_homology(algebra)
    report = degeneration_check(algebra, dec, hbar_order=None)
    if not report.degenerate:
        bad = report.first_obstruction()
        emit(args, {
            "solved": False,
            "reason": "spectral sequence does not degenerate",
            "obstructed_class": bad.class_name,
            "obstruction": bad.obstruction.to_json(),
        })
        return EXIT_NEGATIVE
    splitting = build_beta(algebra, dec, report)
    solution = quantum_solve(algebra, splitting, args.t_order, args.hbar_order)
    payload = solution.to_json()
    payload["residual_is_zero"] = True
    emit(args, payload)
    return EXIT_OK


def cmd_verify(args):
    algebra = load_algebra(args)
    try:
        with open(args.solution) as fh:
            data = json.load(fh)
        solution = solution_from_json(algebra, data)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise DbvError(f"malformed solution file: {exc}")
    result = verify_solution(algebra, solution)
    emit(args, result.to_json())
    return EXIT_OK if result.accepted else EXIT_NEGATIVE


def cmd_observable(args):
    algebra = load_algebra(args)
    try:
        data = json.loads(args.vector)
    except json.JSONDecodeError:
        try:
            with open(args.vector) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise DbvError(f"cannot parse observable vector: {exc}")
    observable = Vector.from_json(algebra, data)
    series, obstruction = observable_extend(algebra, observable, hbar_order=args.hbar_order)
    if obstruction is not None:
        emit(args, {"extended": False, "obstruction": obstruction.to_json()})
        return EXIT_NEGATIVE
    emit(args, {"extended": True, "series": series.to_json()})
    return EXIT_OK


def cmd_example(args):
    if args.kind == "lg":
        algebra = landau_ginzburg(args.potential or "x^3")
    elif args.kind == "square-zero":
        algebra = square_zero_example()
    elif args.kind == "random-finite":
        algebra = random_finite(dim=args.dim, seed=args.seed)
    else:
        raise DbvError(f"unknown example kind {args.kind!r}")
    emit(args, algebra.to_json())
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dbv",
        description="Exact-arithmetic engine for differential BV algebras",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec=True):
        if spec:
            p.add_argument("spec", help="algebra description file (JSON)")
            p.add_argument("--skip-axioms", action="store_true",
                           help="skip the automatic axiom validation")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--pretty", action="store_true", help="indent the JSON output")

    p = sub.add_parser("check-axioms", help="verify the dBV axioms exhaustively")
    common(p)
    p.add_argument("--window", type=int, default=None,
                   help="x-degree window for the polynomial backend (default: DBV_WINDOW or 8)")
    p.set_defaults(fn=cmd_check_axioms)

    p = sub.add_parser("homology", help="homology of (V, Q) with representatives")
    common(p)
    p.set_defaults(fn=cmd_homology)

    p = sub.add_parser("degeneration", help="decide E1-degeneration by lifting classes")
    common(p)
    p.add_argument("--hbar-order", type=int, default=None,
                   help="certify only modulo hbar^{R+1} (default: exact)")
    p.set_defaults(fn=cmd_degeneration)

    p = sub.add_parser("obstructions", help="the (t-order, hbar-order) obstruction grid")
    common(p)
    p.add_argument("--t-order", type=int, default=3)
    p.add_argument("--hbar-order", type=int, default=3)
    p.set_defaults(fn=cmd_obstructions)

    p = sub.add_parser("qdelta", help="check the Q-Delta lemma subspace chain")
    common(p)
    p.add_argument("--window", type=int, default=None)
    p.set_defaults(fn=cmd_qdelta)

    p = sub.add_parser("solve-classical", help="versal Maurer-Cartan solution by the log construction")
    common(p)
    p.add_argument("--flavor", choices=("delta", "q-plus-delta"), default="delta")
    p.add_argument("--t-order", type=int, default=3)
    p.set_defaults(fn=cmd_solve_classical)

    p = sub.add_parser("solve-qme", help="versal quantum master equation solution")
    common(p)
    p.add_argument("--t-order", type=int, default=3)
    p.add_argument("--hbar-order", type=int, default=None,
                   help="advertised hbar order of the result (default: exact)")
    p.set_defaults(fn=cmd_solve_qme)

    p = sub.add_parser("verify", help="re-verify a stored solution file")
    common(p)
    p.add_argument("solution", help="solution file produced by a solve command")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("observable", help="extend a classical observable to a quantum one")
    common(p)
    p.add_argument("--vector", required=True,
                   help="the Q-closed element, as inline JSON or a file path")
    p.add_argument("--hbar-order", type=int, default=None)
    p.set_defaults(fn=cmd_observable)

    p = sub.add_parser("example", help="emit a built-in example algebra")
    p.add_argument("kind", choices=("lg", "square-zero", "random-finite"))
    p.add_argument("--potential", default=None, help='potential for lg, e.g. "x^3"')
    p.add_argument("--dim", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the JSON here instead of stdout")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(fn=cmd_example)

    return parser


def _validate(args):
    t_order = getattr(args, "t_order", None)
    if t_order is not None and t_order < 1:
        raise DbvError("--t-order must be >= 1")
    hbar_order = getattr(args, "hbar_order", None)
    if hbar_order is not None and hbar_order < 0:
        raise DbvError("--hbar-order must be >= 0")
    window = getattr(args, "window", None)
    if window is not None and window < 0:
        raise DbvError("--window must be >= 0")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        return args.fn(args)
    except DbvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
