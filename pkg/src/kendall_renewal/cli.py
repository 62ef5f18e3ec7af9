"""Command line front end.

Every subcommand writes a table (CSV with a header row, or JSON) to stdout
or ``--output``. Options may also come from a flat ``key = value`` file given
with ``--config``; keys are the long option names and flags on the command
line win.
"""

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import asymptotics as asy
from .catalog import CATALOG, catalog_lookup
from .errors import KendallError, OutOfScopeError, ParameterError
from .renewal import moments_N, pmf_N
from .verification import DEFAULT_SEED, SUITES, SuiteOptions, run_suite
from .walk import WalkConfig, sample_paths, simulate_counts

EXIT_CODES = """exit codes:
  0   success; for verify (and --tol checks) every check passed
  1   at least one requested check is outside its tolerance
  2   usage error or invalid parameter
  3   unknown distribution
  4   divergence (G(t) = 1 or a pole of the generating function)
  5   numerical integration failure
  6   runaway simulation (max steps reached)
  7   theorem not applicable to the distribution
  8   degenerate condition
  10  other library error
"""

SIM_COMMANDS = ("simulate", "limit-law")


class UsageError(Exception):
    pass


def _format_value(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    return v


def render(columns, rows, fmt):
    if fmt == "json":
        return json.dumps([{c: _json_value(v) for c, v in zip(columns, row)} for row in rows], indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format_value(v) for v in row])
    return buf.getvalue()


def read_config_file(path):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def _add_dist(p):
    p.add_argument("--dist", help="catalog distribution name (see the catalog subcommand)")
    p.add_argument("--alpha", type=float, help="Kendall index alpha > 0")
    p.add_argument("--beta", type=float, help="shape for pareto and student_like")


def _add_sim(p):
    p.add_argument("--seed", type=int, help="random seed (required)")
    p.add_argument("--workers", type=int, default=1, help="worker threads (results do not depend on it)")
    p.add_argument("--max-steps", type=int, default=1_000_000)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kendall-renewal",
        description="Renewal theory for Kendall random walks: exact formulas, simulation and limit checks.",
        epilog=EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value file with option defaults")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", help="write to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(
            name, parents=[common], help=help_text, epilog=EXIT_CODES,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )

    p = add("simulate", "sample walk paths (path_id, step_index, value)")
    _add_dist(p)
    _add_sim(p)
    p.add_argument("--n", type=int, help="steps per path")
    p.add_argument("--paths", type=int, default=1)
    p.add_argument("--count-t", type=float, help="emit N(t) per path (path_id, count) instead of paths")

    p = add("renewal", "R, E N^2 and Var N on a grid of levels")
    _add_dist(p)
    p.add_argument("--tmin", type=float)
    p.add_argument("--tmax", type=float)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--spacing", choices=("geometric", "linear"), default="geometric")
    p.add_argument("--t", type=str, help="extra comma-separated levels merged into the grid")

    p = add("pmf", "probability mass function of N(t)")
    _add_dist(p)
    p.add_argument("--t", type=float)
    p.add_argument("--nmax", type=int, default=10)

    p = add("asymptotics", "finite-level values of the renewal limit theorems")
    _add_dist(p)
    p.add_argument("--x", type=float, help="level at which the limits are evaluated")
    p.add_argument("--h", type=float, default=1.0, help="increment for Blackwell differences")
    p.add_argument("--tol", type=float, help="exit 1 if any rel_error exceeds this")

    p = add("limit-law", "simulate Gbar(t) N(t) against its Gamma-mixture limit")
    _add_dist(p)
    _add_sim(p)
    p.add_argument("--t", type=float)
    p.add_argument("--sims", type=int, default=20_000)

    p = add("verify", "run a verification suite; exit 0 iff every check passes")
    _add_dist(p)
    p.add_argument("--suite", choices=("all", *SUITES), default="all")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--workers", type=int, default=1)

    add("catalog", "list distributions and their parameters")
    return parser


def parse_config(argv):
    """Parse ``argv``, filling unset options from ``--config`` when given."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        file_values = read_config_file(args.config)
        known = vars(args)
        unknown = sorted(set(file_values) - set(known) - {"command"})
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        sub = parser._subparsers._group_actions[0].choices[args.command]
        defaults = {}
        for action in sub._actions:
            if action.dest in file_values:
                raw = file_values[action.dest]
                try:
                    defaults[action.dest] = action.type(raw) if action.type else raw
                except ValueError:
                    raise UsageError(f"config key {action.dest}: bad value {raw!r}") from None
                if action.choices and defaults[action.dest] not in action.choices:
                    raise UsageError(f"config key {action.dest}: {raw!r} not in {list(action.choices)}")
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    _validate(args)
    return args


def _validate(args):
    def need(*names):
        for name in names:
            if getattr(args, name, None) is None:
                raise UsageError(f"{args.command} requires --{name.replace('_', '-')}")

    if args.command in SIM_COMMANDS:
        need("seed")
        if args.workers < 1:
            raise UsageError("--workers must be at least 1")
    if args.command in ("simulate", "renewal", "pmf", "asymptotics", "limit-law"):
        need("dist", "alpha")
        if not args.alpha > 0:
            raise UsageError("--alpha must be positive")
    if args.command == "simulate":
        need("n")
        if args.n < 1 or args.paths < 1:
            raise UsageError("--n and --paths must be at least 1")
    elif args.command == "renewal":
        need("tmin", "tmax")
        if not 0 < args.tmin < args.tmax:
            raise UsageError("need 0 < --tmin < --tmax")
        if args.points < 2:
            raise UsageError("--points must be at least 2")
    elif args.command == "pmf":
        need("t")
        if args.nmax < 0:
            raise UsageError("--nmax must be nonnegative")
    elif args.command == "asymptotics":
        need("x")
    elif args.command == "limit-law":
        need("t")
        if args.sims < 1:
            raise UsageError("--sims must be at least 1")


def _dist(args):
    params = {"beta": args.beta} if args.beta is not None else {}
    return catalog_lookup(args.dist, alpha=args.alpha, **params)


def cmd_catalog(args):
    rows = []
    for name, (_, schema) in CATALOG.items():
        rows.append((name, " ".join(schema) if schema else "-"))
    return ("name", "parameters"), rows, 0


def cmd_simulate(args):
    config = WalkConfig(args.alpha, _dist(args), args.seed, args.max_steps)
    if args.count_t is not None:
        counts = simulate_counts(config, args.count_t, args.paths, workers=args.workers)
        return ("path_id", "count"), list(enumerate(counts.tolist())), 0
    paths = sample_paths(config, args.n, args.paths, workers=args.workers)
    rows = [(i, k + 1, float(paths[i, k])) for i in range(paths.shape[0]) for k in range(paths.shape[1])]
    return ("path_id", "step_index", "value"), rows, 0


def _grid(args):
    if args.spacing == "geometric":
        grid = np.geomspace(args.tmin, args.tmax, args.points)
    else:
        grid = np.linspace(args.tmin, args.tmax, args.points)
    if args.t:
        try:
            extra = [float(v) for v in args.t.split(",") if v.strip()]
        except ValueError:
            raise UsageError(f"--t expects comma-separated numbers, got {args.t!r}") from None
        grid = np.union1d(grid, extra)
    return grid


def cmd_renewal(args):
    d = _dist(args)
    rows = []
    for t in _grid(args):
        e = moments_N(d, args.alpha, float(t))
        rows.append((e.t, e.R, e.EN2, e.VarN))
    return ("t", "R", "EN2", "VarN"), rows, 0


def cmd_pmf(args):
    d = _dist(args)
    rows = [(n, pmf_N(d, args.alpha, args.t, n)) for n in range(args.nmax + 1)]
    return ("n", "pmf"), rows, 0


def asymptotic_reports(d, alpha, x, h):
    """Every limit check that applies to ``d`` at level ``x``."""
    reports = list(asy.tail_ratios(d, alpha, x))
    reports.append(asy.elementary_renewal(d, alpha, x))
    reports.append(asy.blackwell_classic(d, alpha, x, h))
    if d.has_density:
        reports.append(asy.blackwell_derivative(d, alpha, x))
    try:
        reports.append(asy.elementary_renewal_moment(d, alpha, x))
        reports.append(asy.blackwell_normalized(d, alpha, x, h))
    except OutOfScopeError:
        pass
    try:
        reports.extend(asy.pareto_renewal_reports(d, alpha, x, h))
    except OutOfScopeError:
        pass
    return reports


def cmd_asymptotics(args):
    reports = asymptotic_reports(_dist(args), args.alpha, args.x, args.h)
    rows = [(r.quantity, r.x, r.finite, r.limit, r.rel_error) for r in reports]
    status = 0
    if args.tol is not None and any(r.rel_error > args.tol for r in reports):
        status = 1
    return ("quantity", "x", "finite", "limit", "rel_error"), rows, status


def cmd_limit_law(args):
    config = WalkConfig(args.alpha, _dist(args), args.seed, args.max_steps)
    r = asy.limit_law_sim(config, args.t, args.sims, workers=args.workers)
    columns = ("t", "n_sims", "gbar", "w", "mean", "se_mean", "limit_mean", "var", "se_var",
               "limit_var", "ks", "ks_critical")
    law = asy.MixtureGammaLaw(r.w)
    row = (args.t, r.n_sims, r.gbar, r.w, r.mean, r.se_mean, law.mean(), r.var, r.se_var,
           law.var(), r.ks, r.ks_critical)
    return columns, [row], 0


def cmd_verify(args):
    opts = SuiteOptions(dist=args.dist, alpha=args.alpha, seed=args.seed, workers=args.workers)
    if args.dist:
        catalog_lookup(args.dist, alpha=args.alpha or 1.0, **({"beta": args.beta} if args.beta else {}))
    checks = run_suite(args.suite, opts)
    rows = [(c.suite, c.name, c.value, c.threshold, c.passed) for c in checks]
    status = 0 if all(c.passed for c in checks) else 1
    return ("suite", "check", "value", "threshold", "passed"), rows, status


COMMANDS = {
    "catalog": cmd_catalog,
    "simulate": cmd_simulate,
    "renewal": cmd_renewal,
    "pmf": cmd_pmf,
    "asymptotics": cmd_asymptotics,
    "limit-law": cmd_limit_law,
    "verify": cmd_verify,
}


def _fail(code, kind, message):
    print(f"error: code={code} kind={kind} reason={' '.join(str(message).split())}", file=sys.stderr)
    return code


def run(args, stdout=None):
    stdout = stdout or sys.stdout
    columns, rows, status = COMMANDS[args.command](args)
    text = render(columns, rows, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return status


def main(argv=None):
    try:
        args = parse_config(argv)
        return run(args)
    except UsageError as exc:
        return _fail(2, "UsageError", exc)
    except KendallError as exc:
        return _fail(exc.exit_code, type(exc).__name__, exc)
    except OSError as exc:
        return _fail(2, "UsageError", f"{exc.filename}: {exc.strerror}")


if __name__ == "__main__":
    sys.exit(main())
