"""Command-line front end.

Subcommands::

    diffpinv synth --seed 1 --n 256 --output f.txt
    diffpinv approximate --input f.txt --operator laplace --boundary neumann \
        --budget 13 [--constrained] --output result.json [--plot plot.csv]
    diffpinv inpaint --mask mask.txt (--input f.txt | --n N) --output result.json
    diffpinv selftest

Exit codes: 0 success, 1 self-test failure, 2 usage or parse error,
3 numerical failure.
"""

import argparse
import math
import sys

import numpy as np

from . import __version__
from .dictionary import build_dictionary
from .exceptions import (
    BudgetTooLarge,
    DiffPinvError,
    DimensionMismatch,
    EmptyMask,
    IndexOutOfRange,
    SizeTooSmall,
)
from .inpaint import InpaintProblem, inpainting_residual, solve_inpainting
from .metrics import mse, psnr
from .omp import sparse_approximate
from .operators import OperatorKind, build_operator
from .pinv import pinv_closed_form
from .selftest import format_table, run_selftest
from .synth import synth_signal

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

# precondition failures are reported as usage errors, not numerical ones
_USAGE_ERRORS = (BudgetTooLarge, SizeTooSmall, DimensionMismatch, EmptyMask, IndexOutOfRange)


class InputFormatError(ValueError):
    pass


def _fmt_float(x):
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def _fmt_scalar(value):
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _fmt_float(value)
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps_result(record):
    """Serialize a flat record to JSON: fixed key order, 17 significant digits.

    Values may be scalars or 1-D sequences; sequences are written on one line.
    """
    lines = []
    for key, value in record.items():
        if isinstance(value, (list, tuple, np.ndarray)):
            body = "[" + ", ".join(_fmt_scalar(v) for v in value) + "]"
        else:
            body = _fmt_scalar(value)
        lines.append(f'  "{key}": {body}')
    return "{\n" + ",\n".join(lines) + "\n}\n"


def _open_text(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _data_lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def read_signal(path):
    """Read one decimal value per line; blank lines and ``#`` comments are skipped."""
    values = []
    for lineno, line in _data_lines(_open_text(path)):
        try:
            values.append(float(line))
        except ValueError:
            raise InputFormatError(f"{path}:{lineno}: not a number: {line!r}") from None
    signal = np.array(values)
    if not np.all(np.isfinite(signal)):
        raise InputFormatError(f"{path}: signal contains non-finite values")
    return signal


def read_mask(path):
    """Read ``index value`` pairs (whitespace or comma separated), one per line."""
    indices, values = [], []
    for lineno, line in _data_lines(_open_text(path)):
        parts = line.replace(",", " ").split()
        try:
            if len(parts) != 2:
                raise ValueError
            indices.append(int(parts[0]))
            values.append(float(parts[1]))
        except ValueError:
            raise InputFormatError(f"{path}:{lineno}: expected 'index value', got {line!r}") from None
    if not indices:
        raise InputFormatError(f"{path}: mask file lists no indices")
    return indices, values


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def write_signal(path, signal, header=None):
    lines = [f"# {header}"] if header else []
    lines += [format(float(v), ".17g") for v in signal]
    _write(path, "\n".join(lines) + "\n")


def write_plot(path, f, u):
    rows = ["i,f,u"]
    rows += [f"{i},{format(float(a), '.17g')},{format(float(b), '.17g')}" for i, (a, b) in enumerate(zip(f, u))]
    _write(path, "\n".join(rows) + "\n")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {text}")
    return value


def _add_operator_args(p):
    p.add_argument("--operator", choices=["laplace", "biharmonic"], default="laplace")
    p.add_argument("--boundary", choices=["periodic", "neumann"], default="neumann")
    p.add_argument("--output", default="-", help="result path ('-' for stdout)")
    p.add_argument("--plot", help="optional CSV with columns i,f,u")
    p.add_argument("--peak", type=_positive_float, default=1.0, help="peak value M for PSNR")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="diffpinv",
        description="Sparse signal approximation with pseudo-inverses of difference matrices.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("approximate", help="OMP sparse approximation of a signal")
    p.add_argument("--input", required=True, help="signal file, one value per line ('-' for stdin)")
    p.add_argument("--budget", type=_positive_int, default=13, help="number of atoms |Gamma|")
    p.add_argument("--constrained", action="store_true", help="enforce sum(g) = 0 in the final update")
    _add_operator_args(p)

    p = sub.add_parser("inpaint", help="inpaint a signal from known samples")
    p.add_argument("--mask", required=True, help="file of 'index value' lines")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="reference signal (sets N and enables PSNR/MSE)")
    src.add_argument("--n", type=_positive_int, help="signal length")
    _add_operator_args(p)

    p = sub.add_parser("selftest", help="run the built-in oracle checks")
    p.add_argument("--sizes", default="8,16,32", help="comma-separated sizes")
    p.add_argument("--perturb", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("synth", help="write a reproducible piecewise-smooth test signal")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--n", type=_positive_int, default=256)
    p.add_argument("--output", default="-")
    return parser


def run_approximate(args):
    f = read_signal(args.input)
    kind = OperatorKind(args.operator, args.boundary)
    op = build_operator(kind, f.size)
    d = build_dictionary(pinv_closed_form(op))
    code, u = sparse_approximate(f, d, args.budget, constrained=args.constrained)
    record = {
        "command": "approximate",
        "operator": args.operator,
        "boundary": args.boundary,
        "n": f.size,
        "budget": args.budget,
        "constrained": args.constrained,
        "peak": args.peak,
        "mean": code.mean,
        "indices": list(code.indices),
        "coefficients": code.coefficients,
        "psnr": psnr(u, f, args.peak),
        "mse": mse(u, f),
        "reconstruction": u,
    }
    _write(args.output, dumps_result(record))
    if args.plot:
        write_plot(args.plot, f, u)
    return EXIT_OK


def run_inpaint(args):
    indices, values = read_mask(args.mask)
    reference = read_signal(args.input) if args.input is not None else None
    n = reference.size if reference is not None else args.n
    op = build_operator(OperatorKind(args.operator, args.boundary), n)
    problem = InpaintProblem.from_pairs(op, indices, values)
    u = solve_inpainting(problem)
    known = np.asarray(problem.mask.gamma)
    free = np.setdiff1d(np.arange(n), known)
    record = {
        "command": "inpaint",
        "operator": args.operator,
        "boundary": args.boundary,
        "n": n,
        "indices": known,
        "values": problem.data,
        "interpolation_residual": float(np.abs(u[known] - problem.data).max()),
        "equation_residual": float(np.abs((op.dense @ u)[free]).max()) if free.size else 0.0,
        "residual": inpainting_residual(problem, u),
        "reconstruction": u,
    }
    if reference is not None:
        record["peak"] = args.peak
        record["psnr"] = psnr(u, reference, args.peak)
        record["mse"] = mse(u, reference)
    _write(args.output, dumps_result(record))
    if args.plot:
        write_plot(args.plot, reference if reference is not None else np.full(n, np.nan), u)
    return EXIT_OK


def run_selftest_cmd(args):
    try:
        sizes = tuple(int(s) for s in args.sizes.split(",") if s.strip())
    except ValueError:
        raise InputFormatError(f"bad --sizes value {args.sizes!r}") from None
    results = run_selftest(sizes, perturb=args.perturb)
    print(format_table(results))
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} suites passed")
    return EXIT_SELFTEST if failed else EXIT_OK


def run_synth(args):
    if args.n < 3:
        raise SizeTooSmall("n must be at least 3")
    signal = synth_signal(args.n, args.seed)
    write_signal(args.output, signal, header=f"synth seed={args.seed} n={args.n}")
    return EXIT_OK


_COMMANDS = {
    "approximate": run_approximate,
    "inpaint": run_inpaint,
    "selftest": run_selftest_cmd,
    "synth": run_synth,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (InputFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DiffPinvError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
