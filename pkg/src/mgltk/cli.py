"""Command-line front door.

Subcommands: eval (single values), convexity (scan suites), mgl (randomized
inequality batches), figure1 (CSV table of the l/r curves).  Machine-readable
report on stdout, human summary on stderr.

Exit codes: 0 pass, 1 failed verdict, 2 usage, 3 domain or hypothesis
violation, 4 I/O error.
"""

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .application import (SplitEntropyCurve, SplitEntropyInverseCurve,
                          claim1_verify, claim1_grid, inequality_lhs,
                          inequality_rhs, write_figure1)
from .convexity import (DEFAULT_TOLERANCE, GridSpec, p_interval_scan,
                        second_difference_scan, theorem1_scan)
from .curves import EntropyInverseCurve, MglComposite, PiecewiseLinearCurve, \
    weighted_log_ratio
from .entropy import (LN2, LogBase, binary_entropy, binary_entropy_inverse,
                      convolve, entropy_first_derivative,
                      entropy_second_derivative, max_entropy)
from .errors import ConvergenceError, DomainError, HypothesisViolationError
from .mgl import verify_mgl_batch

# Relative inset keeping scan grids away from the singular entropy-range
# endpoints; equals 1e-4 in natural units.
_REL_INSET = 1e-4 / LN2


def lemma_grid(base, points):
    hmax = max_entropy(base)
    inset = _REL_INSET * hmax
    return GridSpec(inset, hmax - inset, points)


@dataclass
class ReportDocument:
    """Deterministic flat key-value report with a verdict list."""

    command: str
    parameters: dict
    seed: int = None
    verdicts: list = field(default_factory=list)

    def add_verdict(self, name, passed, detail=""):
        self.verdicts.append((name, bool(passed), detail))

    @property
    def passed(self):
        return all(ok for _, ok, _ in self.verdicts)

    def render(self):
        lines = [f"command: {self.command}",
                 f"toolkit_version: {__version__}"]
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        for key, value in self.parameters.items():
            lines.append(f"parameter {key}: {value}")
        for name, ok, detail in self.verdicts:
            tail = f" {detail}" if detail else ""
            lines.append(f"verdict {name}: {'pass' if ok else 'FAIL'}{tail}")
        lines.append(f"status: {'pass' if self.passed else 'fail'}")
        return "\n".join(lines) + "\n"


def _base(args):
    return LogBase(args.base)


def _require(parser, args, names):
    for name in names:
        if getattr(args, name) is None:
            parser.error(f"--fn {args.fn} requires --{name}")


def cmd_eval(parser, args):
    base = _base(args)
    fn = args.fn
    if fn == "H":
        _require(parser, args, ["x"])
        value = binary_entropy(args.x, base)
    elif fn == "Hinv":
        _require(parser, args, ["u"])
        value = binary_entropy_inverse(args.u, base)
    elif fn == "dH":
        _require(parser, args, ["x"])
        value = entropy_first_derivative(args.x, base)
    elif fn == "d2H":
        _require(parser, args, ["x"])
        value = entropy_second_derivative(args.x, base)
    elif fn == "conv":
        _require(parser, args, ["p", "x"])
        value = convolve(args.p, args.x)
    elif fn == "g1":
        _require(parser, args, ["x"])
        value = weighted_log_ratio(args.x)[0]
    elif fn == "l":
        _require(parser, args, ["t"])
        value = inequality_lhs(args.t, base)[0]
    elif fn == "r":
        _require(parser, args, ["t"])
        value = inequality_rhs(args.t, base)[0]
    else:  # f4
        _require(parser, args, ["t"])
        value = SplitEntropyCurve(base).value(args.t)
    print(repr(value))
    return 0


def _scan_pairs_to_report(report, pairs):
    for p, rep in pairs:
        report.add_verdict(f"p={p!r}", rep.is_convex,
                           f"{rep.verdict} min_margin={rep.min_margin!r} "
                           f"argmin={rep.argmin!r}")


def cmd_convexity(parser, args):
    base = _base(args)
    points = args.grid
    tol = args.tol
    report = ReportDocument("convexity", {
        "curve": args.curve, "grid": points, "tol": repr(tol),
        "base": base.value,
    })
    if args.p is not None:
        report.parameters["p"] = repr(args.p)
    if args.p0 is not None:
        report.parameters["p0"] = repr(args.p0)

    if args.curve == "custom-pl":
        if args.breakpoints is None:
            parser.error("--curve custom-pl requires --breakpoints FILE")
        curve = PiecewiseLinearCurve.from_file(args.breakpoints)
        u_grid = GridSpec(curve.domain[0], curve.domain[1], points)
    elif args.curve == "claim1":
        curve = SplitEntropyInverseCurve(base)
        u_grid = claim1_grid(base, points)
    else:  # lemma, theorem1
        curve = EntropyInverseCurve(base)
        u_grid = lemma_grid(base, points)

    if args.p is not None:
        ps = [args.p]
    elif args.curve == "claim1":
        ps = np.linspace(0.0, 0.5, 21)
    else:
        ps = np.linspace(0.0, 0.5, 11)

    if args.p0 is not None:
        pairs = p_interval_scan(curve, args.p0, u_grid, tol, base)
    elif args.curve in ("theorem1", "custom-pl"):
        pairs = theorem1_scan(curve, ps, u_grid, tol, base)
    elif args.curve == "claim1":
        pairs = claim1_verify(ps, points, tol, base)
    else:  # lemma: direct scans, no hypothesis gate
        pairs = [(float(p), second_difference_scan(
            MglComposite(float(p), curve, base), u_grid, tol)) for p in ps]

    _scan_pairs_to_report(report, pairs)
    sys.stdout.write(report.render())
    n_fail = sum(1 for _, ok, _ in report.verdicts if not ok)
    print(f"convexity[{args.curve}]: {len(report.verdicts)} verdicts, "
          f"{n_fail} failed", file=sys.stderr)
    return 0 if report.passed else 1


def cmd_mgl(parser, args):
    base = _base(args)
    if args.p != "random":
        try:
            p = float(args.p)
        except ValueError:
            parser.error(f"--p must be a number or 'random', got {args.p!r}")
        summary = verify_mgl_batch(args.trials, args.max_support, p,
                                   args.seed, base)
    else:
        summary = verify_mgl_batch(args.trials, args.max_support, "random",
                                   args.seed, base)
    report = ReportDocument("mgl", {
        "trials": summary.trials, "max_support": summary.max_support,
        "p": summary.p_mode, "base": base.value,
    }, seed=summary.seed)
    report.add_verdict("violations", summary.violations == 0,
                       f"count={summary.violations} "
                       f"min_gap={summary.min_gap!r} "
                       f"trial={summary.argmin_index}")
    sys.stdout.write(report.render())
    sys.stdout.write("argmin " + summary.argmin_line() + "\n")
    print(f"mgl: {summary.trials} trials, {summary.violations} violations, "
          f"min gap {summary.min_gap:.3e}", file=sys.stderr)
    return 0 if summary.violations == 0 else 1


def cmd_figure1(parser, args):
    base = _base(args)
    if args.out == "-":
        rows = write_figure1(sys.stdout, args.step, base)
        print(f"rows: {rows}", file=sys.stderr)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            rows = write_figure1(fh, args.step, base)
        print(f"rows: {rows}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mgltk",
        description="Binary-entropy convexity certification and "
                    "entropy-inverse inequality verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser(
        "eval", help="evaluate one function at a point",
        description="Print one value at full double precision.  Functions: "
                    "H (binary entropy), Hinv (its inverse on [0,1/2]), "
                    "dH/d2H (entropy derivatives), conv (binary convolution "
                    "p*x), g1 (x(1-x)log((1-x)/x)), l/r (the two sides of "
                    "the application inequality), f4 (the application curve "
                    "H(t/2)+H((1-t)/2)).")
    p_eval.add_argument("--fn", required=True,
                        choices=["H", "Hinv", "dH", "d2H", "conv", "g1",
                                 "l", "r", "f4"])
    p_eval.add_argument("--x", type=float)
    p_eval.add_argument("--u", type=float)
    p_eval.add_argument("--p", type=float)
    p_eval.add_argument("--t", type=float)
    p_eval.add_argument("--base", choices=["nat", "bit"], default="nat",
                        help="log base (default nat, per the natural-log "
                             "convention; figure1 defaults to bit instead "
                             "because the published endpoint values are "
                             "binary-base)")
    p_eval.set_defaults(func=cmd_eval)

    p_conv = sub.add_parser(
        "convexity", help="run a convexity scan suite",
        description="Scan H(p*f(u)) for convexity.  Curves: lemma "
                    "(f = entropy inverse, direct scans), theorem1 (same f, "
                    "hypothesis-gated), claim1 (f = inverse of the "
                    "application curve on [f(0.06), f(0.5)]), custom-pl "
                    "(piecewise-linear breakpoints from --breakpoints; one "
                    "'u,value' pair per line, '#' comments allowed).  With "
                    "--p0, scans p across [p0, 1/2] after certifying the "
                    "hypothesis at p0.")
    p_conv.add_argument("--curve", required=True,
                        choices=["lemma", "theorem1", "claim1", "custom-pl"])
    p_conv.add_argument("--p", type=float, default=None,
                        help="single p (default: a grid over [0, 1/2])")
    p_conv.add_argument("--p0", type=float, default=None,
                        help="left endpoint for the p-interval scan")
    p_conv.add_argument("--grid", type=int, default=2001, metavar="N",
                        help="number of u grid points (default 2001)")
    p_conv.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE,
                        help="margin tolerance (default 1e-9)")
    p_conv.add_argument("--base", choices=["nat", "bit"], default="nat")
    p_conv.add_argument("--breakpoints", metavar="FILE", default=None)
    p_conv.set_defaults(func=cmd_convexity)

    p_mgl = sub.add_parser(
        "mgl", help="randomized verification of the entropy-inverse inequality",
        description="Sample random finite joint distributions and check "
                    "Hinv(H(Y|U)) >= Hinv(H(X|U)) * p; exit 1 on any "
                    "violation, with a replayable argmin line.")
    p_mgl.add_argument("--trials", type=int, default=100000)
    p_mgl.add_argument("--max-support", type=int, default=8)
    p_mgl.add_argument("--p", default="random",
                       help="crossover probability, or 'random' (default)")
    p_mgl.add_argument("--seed", type=int, default=0)
    p_mgl.add_argument("--base", choices=["nat", "bit"], default="nat")
    p_mgl.set_defaults(func=cmd_mgl)

    p_fig = sub.add_parser(
        "figure1", help="emit the l/r curve table as CSV",
        description="Write rows t,l,r for t from 0.06 to 0.5.  Default base "
                    "is bit: the published endpoint values are binary-base, "
                    "unlike eval's natural-log default.")
    p_fig.add_argument("--out", required=True, metavar="PATH",
                       help="output path, or '-' for stdout")
    p_fig.add_argument("--step", type=float, default=0.001)
    p_fig.add_argument("--base", choices=["nat", "bit"], default="bit")
    p_fig.set_defaults(func=cmd_figure1)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(parser, args)
    except (DomainError, ConvergenceError, HypothesisViolationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
