"""``kickrotor`` command line: ``sweep``, ``portrait`` and ``calibrate``.

Exit status: 0 success, 1 usage, 2 schema or calibration failure,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .ensemble import WORKERS_ENV, estimate_kick_ratio_difference, estimate_kick_ratio_plateau
from .errors import (CalibrationError, ConvergenceError, InvalidParameterError, SchemaError,
                     TruncationError)
from .sweep import (METHODS, PORTRAIT_PRESETS, SPACINGS, SWEEP_PRESETS, format_portrait,
                    format_records, numerical_failures, portrait_config, read_records,
                    run_portrait, run_sweep, sweep_config)

EXIT_OK, EXIT_USAGE, EXIT_SCHEMA, EXIT_NUMERICAL = 0, 1, 2, 3

log = logging.getLogger("kickrotor")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv_list(kind):
    def parse(text):
        try:
            return tuple(kind(x) for x in text.split(",") if x.strip())
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from None
    return parse


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kickrotor", description="Early-time kicked-rotor energies and portraits.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sweep", help="energy versus kbar for one or more methods")
    s.add_argument("--preset", choices=sorted(SWEEP_PRESETS))
    s.add_argument("--kbar-min", type=float)
    s.add_argument("--kbar-max", type=float)
    s.add_argument("--steps", type=int)
    s.add_argument("--spacing", choices=SPACINGS)
    s.add_argument("--kbar-values", type=_csv_list(float), metavar="K1,K2,...",
                   help="explicit grid (overrides min/max/steps)")
    s.add_argument("--kick-ratio", type=float)
    s.add_argument("--sigma-p", type=float)
    s.add_argument("--n-kicks", type=_csv_list(int), metavar="N[,N...]")
    s.add_argument("--methods", type=_csv_list(str), metavar="M[,M...]",
                   help=f"subset of {','.join(METHODS)}")
    s.add_argument("--n-traj", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--pulse-width-ns", type=float)
    s.add_argument("--workers", type=int, help=f"default from ${WORKERS_ENV}, else 1")
    s.add_argument("-o", "--output", help="CSV path (default: stdout)")

    q = sub.add_parser("portrait", help="classical phase portrait as phi,p CSV")
    q.add_argument("--preset", choices=sorted(PORTRAIT_PRESETS))
    q.add_argument("--kbar", type=float)
    q.add_argument("--kick-ratio", type=float)
    q.add_argument("--sigma-p", type=float)
    q.add_argument("--n-iter", type=int)
    q.add_argument("--n-traj", type=int)
    q.add_argument("--seed", type=int)
    q.add_argument("-o", "--output", "--out", dest="output", help="CSV path (default: stdout)")

    c = sub.add_parser("calibrate", help="estimate kappa/kbar from sweep CSV files")
    c.add_argument("inputs", nargs="+", metavar="CSV")
    c.add_argument("--mode", choices=("plateau", "difference"), default="plateau")
    c.add_argument("--sigma-p", type=float,
                   help="initial spread (default: the single value found in the input)")
    c.add_argument("--sigma-p-err", type=float, default=0.0)
    c.add_argument("--method", choices=METHODS,
                   help="rows to use when the input mixes methods")
    return p


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    try:
        Path(output).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {output}: {exc.strerror}") from None


def _cmd_sweep(args) -> int:
    cfg = sweep_config(args.preset, kbar_min=args.kbar_min, kbar_max=args.kbar_max,
                       steps=args.steps, spacing=args.spacing, kbar_values=args.kbar_values,
                       kick_ratio=args.kick_ratio, sigma_p=args.sigma_p, n_kicks=args.n_kicks,
                       methods=args.methods, n_traj=args.n_traj, seed=args.seed,
                       pulse_width_ns=args.pulse_width_ns, workers=args.workers,
                       output=args.output)
    log.info("sweep: %d kbar points, methods %s", len(cfg.grid()), ",".join(cfg.methods))
    records = run_sweep(cfg)
    _emit(format_records(records), cfg.output)
    failed = numerical_failures(records)
    for r in failed:
        print(f"kbar={r.kbar!r} {r.method}: {r.error}", file=sys.stderr)
    return EXIT_NUMERICAL if failed else EXIT_OK


def _cmd_portrait(args) -> int:
    cfg = portrait_config(args.preset, kbar=args.kbar, kick_ratio=args.kick_ratio,
                          sigma_p=args.sigma_p, n_iter=args.n_iter, n_traj=args.n_traj,
                          seed=args.seed, output=args.output)
    res = run_portrait(cfg)
    _emit(format_portrait(res.phi, res.p), cfg.output)
    return EXIT_OK


def _load(paths):
    records = []
    for path in paths:
        try:
            records.extend(read_records(path))
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return records


def _select_method(records, method):
    if method is None:
        found = sorted({r.method for r in records})
        if len(found) > 1:
            raise UsageError(f"input mixes methods {found}; pick one with --method")
        return records
    sel = [r for r in records if r.method == method]
    if not sel:
        raise SchemaError(f"no rows with method {method!r}")
    return sel


def _cmd_calibrate(args) -> int:
    if args.mode == "plateau":
        records = _load(args.inputs)
        records = _select_method(records, args.method)
        sigma_p = args.sigma_p
        if sigma_p is None:
            values = {r.sigma_p for r in records}
            if len(values) != 1:
                raise UsageError("input has several sigma_p values; pass --sigma-p")
            sigma_p = values.pop()
        est = estimate_kick_ratio_plateau(records, sigma_p, args.sigma_p_err)
    else:
        # one file holding both kick counts, or a one-kick file then a two-kick file
        if len(args.inputs) > 2:
            raise UsageError("difference mode takes one or two CSV files")
        first = _load(args.inputs[:1])
        second = _load(args.inputs[1:]) if len(args.inputs) == 2 else first
        if args.method is not None:
            first = [r for r in first if r.method == args.method]
            second = [r for r in second if r.method == args.method]
        one = [r for r in first if r.n_kicks == 1]
        two = [r for r in second if r.n_kicks == 2]
        est = estimate_kick_ratio_difference(one, two)
    print(f"kappa_ratio {est.value:.6g} +/- {est.std_err:.3g}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    handler = {"sweep": _cmd_sweep, "portrait": _cmd_portrait, "calibrate": _cmd_calibrate}
    try:
        return handler[args.command](args)
    except (UsageError, InvalidParameterError) as exc:
        print(f"kickrotor: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SchemaError as exc:
        print(f"kickrotor: schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except CalibrationError as exc:
        print(f"kickrotor: calibration failed: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (TruncationError, ConvergenceError, ArithmeticError) as exc:
        print(f"kickrotor: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
