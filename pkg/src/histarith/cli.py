"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 data error (parse or invariant),
4 domain error (sign violation, zero divisor).
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys

import numpy as np

from . import documents
from .arithmetic import Op, ResultDistribution, combine
from .binning import BinningConfig, build_histogram, histogram_cdf, histogram_pdf, quality
from .core import DataError, DomainError, HistArithError, ReliableHistogram, eval_curve, integrate_moment
from .oracle import DEFAULT_PAIR_CAP, compare, mc_sample, pairwise_combine

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_DOMAIN = 0, 2, 3, 4


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _curves(dist):
    if isinstance(dist, ResultDistribution):
        return dist.cdf, dist.pdf
    return histogram_cdf(dist), histogram_pdf(dist)


def _config(args) -> BinningConfig:
    return BinningConfig(gamma_per_bin=args.gamma, q_mode=args.q_mode, boundary_placement=args.boundary)


def _emit(obj, output, out):
    if output in (None, "-"):
        out.write(documents.dumps(obj))
    else:
        documents.write_document(obj, output)


def cmd_build(args, out):
    sample = documents.read_sample_csv(args.input)
    _emit(build_histogram(sample, _config(args)), args.output, out)


def cmd_op(args, out):
    hx = documents.read_document(args.x)
    hy = documents.read_document(args.y)
    if not (isinstance(hx, ReliableHistogram) and isinstance(hy, ReliableHistogram)):
        raise DataError("--x and --y must be histogram documents")
    _emit(combine(hx, hy, Op(args.op)), args.output, out)


def cmd_eval(args, out):
    dist = documents.read_document(args.dist)
    cdf, pdf = _curves(dist)
    if args.what in ("cdf", "pdf"):
        if args.at is None:
            raise DataError(f"--at is required for --what {args.what}")
        val = eval_curve(cdf if args.what == "cdf" else pdf, args.at)
    else:
        val = integrate_moment(pdf, 1 if args.what == "mean" else 2)
    out.write(fmt(val) + "\n")


def cmd_quality(args, out):
    hist = documents.read_document(args.hist)
    if not isinstance(hist, ReliableHistogram):
        raise DataError("--hist must be a histogram document")
    rep = quality(hist, documents.read_sample_csv(args.sample))
    out.write(f"gamma: {fmt(rep.gamma)}\nD: {fmt(rep.ks_statistic)}\nalpha: {fmt(rep.alpha)}\nQ: {fmt(rep.quality)}\n")


def cmd_oracle(args, out):
    op = Op(args.op)
    sx = documents.read_sample_csv(args.x_sample)
    sy = documents.read_sample_csv(args.y_sample)
    config = _config(args)
    hx = build_histogram(sx, config)
    hy = build_histogram(sy, config)
    if args.compare:
        dist = documents.read_document(args.compare)
        if not isinstance(dist, ResultDistribution):
            raise DataError("--compare must be a result document")
    else:
        dist = combine(hx, hy, op)
    if args.mc is not None:
        res = compare(dist, mc_sample(hx, hy, op, args.mc, args.seed))
        mode = "mc"
    else:
        res = compare(dist, pairwise_combine(sx, sy, op, cap=args.cap))
        mode = "pairwise"
    out.write(f"D: {fmt(res.D)}\nalpha: {fmt(res.alpha)}\nmode: {mode}\n")
    out.write(f"dependent_sample: {'true' if res.dependent_sample else 'false'}\n")


def cmd_curve(args, out):
    dist = documents.read_document(args.dist)
    cdf, pdf = _curves(dist)
    lo, hi = cdf.support
    z = np.unique(np.concatenate([np.linspace(lo, hi, args.points + 1), cdf.breakpoints]))
    lines = ["z\tcdf\tpdf"]
    for v in z.tolist():
        lines.append(f"{fmt(v)}\t{fmt(eval_curve(cdf, v))}\t{fmt(eval_curve(pdf, v))}")
    text = "\n".join(lines) + "\n"
    if args.output in (None, "-"):
        out.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _add_binning_flags(p):
    p.add_argument("--gamma", type=float, default=0.999, help="per-bin reliability (default 0.999)")
    p.add_argument("--q-mode", choices=["chi_square", "zero"], default="chi_square")
    p.add_argument("--boundary", choices=["midpoint", "left", "right"], default="midpoint")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="histarith", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a reliable histogram from a one-column CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    _add_binning_flags(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser(
        "op",
        help="combine two histograms",
        description="Combine two histograms. NOTE: div computes Y/X, so --y is the numerator.",
    )
    p.add_argument("--op", required=True, choices=[o.value for o in Op])
    p.add_argument("--x", required=True, help="X histogram (denominator for div)")
    p.add_argument("--y", required=True, help="Y histogram (numerator for div)")
    p.add_argument("--output")
    p.set_defaults(func=cmd_op)

    p = sub.add_parser("eval", help="evaluate a histogram or result document")
    p.add_argument("--dist", required=True)
    p.add_argument("--at", type=float)
    p.add_argument("--what", choices=["cdf", "pdf", "mean", "moment2"], default="cdf")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("quality", help="reliability, KS distance and quality score")
    p.add_argument("--hist", required=True)
    p.add_argument("--sample", required=True)
    p.set_defaults(func=cmd_quality)

    p = sub.add_parser("oracle", help="brute-force check of an analytic result")
    p.add_argument("--op", required=True, choices=[o.value for o in Op])
    p.add_argument("--x-sample", required=True)
    p.add_argument("--y-sample", required=True)
    p.add_argument("--compare")
    p.add_argument("--mc", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=DEFAULT_PAIR_CAP)
    _add_binning_flags(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("curve", help="tabulate cdf and pdf as TSV")
    p.add_argument("--dist", required=True)
    p.add_argument("--points", type=int, default=512)
    p.add_argument("--output")
    p.set_defaults(func=cmd_curve)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = make_parser()
    try:
        with contextlib.redirect_stderr(err), contextlib.redirect_stdout(out):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, out)
    except DomainError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except (HistArithError, OSError, json.JSONDecodeError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
