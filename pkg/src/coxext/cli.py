"""Command-line interface: ``coxext <command> ...``.

Exit status is 0 on success, 1 when a verification fails (oracle mismatch,
violated invariant) and 2 on usage or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
import warnings

from .conditions import CONDITIONS, check_growth, parse_sequence, profile_sequence
from .extremes import (
    DEFAULT_GRID,
    convergence_report,
    norming_constants,
    tail_ratio,
)
from .groups import DescriptorError, group_summary, parse_descriptor
from .montecarlo import SimConfig, run_simulation
from .oracle import OracleCapError, enumerate_group
from .roots import RootError
from .statistics import (
    CapExceededError,
    InvariantViolation,
    Pmf,
    SamplerUnavailableError,
    Stat,
    descent_bernoulli_params,
    eulerian_pmf,
    eulerian_polynomial,
    mahonian_pmf,
    moments,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument parsing helpers


def _number(text: str) -> int:
    v = float(text)
    if v != int(v):
        raise ValueError(text)
    return int(v)


def parse_n_list(text: str) -> list[int]:
    """``"100,200"`` or decade shorthand ``"1e2..1e4x10"`` (start..stop x factor)."""
    m = re.fullmatch(r"\s*([\d.eE+]+)\s*\.\.\s*([\d.eE+]+)\s*x\s*([\d.eE+]+)\s*", text)
    try:
        if m:
            lo, hi, step = _number(m.group(1)), _number(m.group(2)), float(m.group(3))
            if lo < 1 or hi < lo or step <= 1:
                raise ValueError(text)
            out, v = [], float(lo)
            while v <= hi * (1 + 1e-12):
                out.append(int(round(v)))
                v *= step
            return out
        return [_number(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"bad n list {text!r}; use a comma list or START..STOPxFACTOR") from None


def parse_grid(text: str) -> tuple[float, float, float]:
    try:
        a, b, h = (float(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; expected a:b:h") from None
    if h <= 0 or b < a:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; need a <= b and h > 0")
    return a, b, h


def parse_floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def _seed_default() -> int | None:
    env = os.environ.get("COXEXT_SEED")
    return int(env) if env else None


# ---------------------------------------------------------------------------
# output


def _table(header: list[str], rows: list[list], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_describe(args) -> int:
    g = parse_descriptor(args.group)
    s = group_summary(g)
    info = {
        "group": str(g), "rank": s.rank, "order": s.order,
        "reflections": s.reflection_count, "degrees": g.degrees,
    }
    if args.format == "json":
        info["order"] = str(s.order)
        _emit(args, json.dumps(info))
    else:
        rows = [[k, " ".join(map(str, v)) if isinstance(v, list) else v] for k, v in info.items()]
        _emit(args, _table(["key", "value"], rows, "csv"))
    return EXIT_OK


def _pmf(g, stat: Stat, exact: bool):
    if stat is Stat.inv:
        return mahonian_pmf(g, exact=exact)
    if exact:
        return Pmf.from_counts(list(eulerian_polynomial(g).coeffs), stat, g)
    return eulerian_pmf(g)


def cmd_pmf(args) -> int:
    g = parse_descriptor(args.group)
    pmf = _pmf(g, Stat(args.stat), args.exact)
    _emit(args, pmf.to_json() if args.format == "json" else pmf.to_csv())
    return EXIT_OK


def cmd_moments(args) -> int:
    g = parse_descriptor(args.group)
    m = moments(g, args.stat)
    rows = [[str(g), args.stat, str(m.mean), str(m.variance), m.mean_f, m.var_f, m.sd]]
    _emit(args, _table(["group", "stat", "mean", "variance", "mean_float", "variance_float",
                        "sd"], rows, args.format))
    return EXIT_OK


def cmd_roots(args) -> int:
    g = parse_descriptor(args.group)
    bp = descent_bernoulli_params(g, rel_tol=args.rel_tol)
    rows = [[q, 1.0 / (1.0 + q)] for q in bp.q]
    if args.format == "json":
        _emit(args, json.dumps({"group": str(g), "q": list(bp.q), "p": [r[1] for r in rows],
                                "residual": bp.residual}))
    else:
        _emit(args, _table(["q", "p"], rows, "csv"))
    return EXIT_OK


def cmd_norms(args) -> int:
    spec = parse_sequence(args.seq)
    g = spec.materialize(args.n)
    nc = norming_constants(args.n, moments(g, args.stat))
    rows = [[nc.n, g.rank, nc.alpha, nc.beta, nc.a, nc.b, nc.mu, nc.s]]
    _emit(args, _table(["n", "N_n", "alpha", "beta", "a", "b", "mu", "s"], rows, args.format))
    return EXIT_OK


def cmd_converge(args) -> int:
    spec = parse_sequence(args.seq)
    rep = convergence_report(spec, args.stat, args.n_list, args.grid)
    _emit(args, rep.to_json() if args.format == "json" else rep.to_csv())
    return EXIT_OK


def cmd_tailratio(args) -> int:
    g = parse_descriptor(args.group)
    stat = Stat(args.stat)
    pmf = mahonian_pmf(g) if stat is Stat.inv else eulerian_pmf(g)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        out = tail_ratio(pmf, moments(g, stat), args.x_list)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    rows = [[r.x, r.ratio, r.numerator, r.denominator, r.underflow] for r in out]
    _emit(args, _table(["x", "ratio", "numerator", "denominator", "underflow"], rows,
                       args.format))
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.seed is None:
        raise UsageError("simulate needs --seed or COXEXT_SEED")
    cfg = SimConfig(parse_sequence(args.seq), args.stat, tuple(args.n_list), args.replicates,
                    args.seed, method=args.method, workers=args.workers)
    rep = run_simulation(cfg)
    _emit(args, rep.to_json(include_values=args.values) if args.format == "json"
          else rep.to_csv())
    for r in rep.rows:
        ks_e = "n/a" if r.ks_exact is None else f"{r.ks_exact:.6f}"
        print(f"n={r.n} ks_gumbel={r.ks_gumbel:.6f} ks_exact={ks_e}", file=sys.stderr)
    return EXIT_OK


def cmd_check(args) -> int:
    profiles = profile_sequence(parse_sequence(args.seq), args.n_list, args.stat)
    rep = check_growth(profiles, args.condition)
    _emit(args, rep.to_json() if args.format == "json" else rep.to_csv())
    print(f"{rep.condition_id}: {rep.verdict.value} (slope {rep.slope:.4f}, "
          f"R^2 {rep.r_squared:.4f})", file=sys.stderr)
    for note in rep.notes:
        print(f"note: {note}", file=sys.stderr)
    return EXIT_OK


def cmd_oracle_verify(args) -> int:
    g = parse_descriptor(args.group)
    table = enumerate_group(g, args.cap)
    ok = True
    rows = []
    for stat in Stat:
        brute = table.histogram(stat)
        analytic = list(_pmf(g, stat, exact=True).exact_counts)
        match = brute == analytic
        ok &= match
        rows.append([str(g), stat.value, match, " ".join(map(str, analytic)),
                     " ".join(map(str, brute))])
    order_ok = g.order == len(table) and g.reflection_count == int(table.length.max())
    ok &= order_ok
    rows.append([str(g), "order", order_ok, str(g.order), str(len(table))])
    _emit(args, _table(["group", "check", "match", "analytic", "oracle"], rows, args.format))
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")

    stat = argparse.ArgumentParser(add_help=False)
    stat.add_argument("--stat", choices=[s.value for s in Stat], default="inv")

    seq = argparse.ArgumentParser(add_help=False)
    seq.add_argument("--seq", required=True,
                     help="sequence FAMILY[@RANKMAP], e.g. A@n, A@log^3+1, I2(5)@n")

    p = argparse.ArgumentParser(prog="coxext", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("describe", parents=[common], help="rank, order and degrees")
    s.add_argument("group")
    s.set_defaults(func=cmd_describe)

    s = sub.add_parser("pmf", parents=[common, stat], help="distribution of a statistic")
    s.add_argument("group")
    s.add_argument("--exact", action="store_true", help="exact integer counts")
    s.set_defaults(func=cmd_pmf)

    s = sub.add_parser("moments", parents=[common, stat], help="exact mean and variance")
    s.add_argument("group")
    s.set_defaults(func=cmd_moments)

    s = sub.add_parser("roots", parents=[common], help="Bernoulli parameters of descents")
    s.add_argument("group")
    s.add_argument("--rel-tol", type=float, default=1e-12)
    s.set_defaults(func=cmd_roots)

    s = sub.add_parser("norms", parents=[common, stat, seq], help="Gumbel norming constants")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_norms)

    s = sub.add_parser("converge", parents=[common, stat, seq],
                       help="exact sup-error against Gumbel")
    s.add_argument("--n-list", type=parse_n_list, required=True)
    s.add_argument("--grid", type=parse_grid, default=DEFAULT_GRID)
    s.set_defaults(func=cmd_converge)

    s = sub.add_parser("tailratio", parents=[common, stat], help="normal tail ratios")
    s.add_argument("group")
    s.add_argument("--x-list", type=parse_floats, default=[0.5, 1.0, 1.5, 2.0])
    s.set_defaults(func=cmd_tailratio)

    s = sub.add_parser("simulate", parents=[common, stat, seq], help="Monte-Carlo row maxima")
    s.add_argument("--n-list", type=parse_n_list, required=True)
    s.add_argument("--replicates", type=int, default=1000)
    s.add_argument("--seed", type=int, default=_seed_default())
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--method", choices=("inverse_cdf", "decomposition"))
    s.add_argument("--values", action="store_true", help="include maxima in JSON output")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("check", parents=[common, stat, seq], help="growth condition diagnostic")
    s.add_argument("--condition", choices=sorted(CONDITIONS), required=True)
    s.add_argument("--n-list", type=parse_n_list, required=True)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("oracle-verify", parents=[common],
                       help="compare analytic distributions with brute force")
    s.add_argument("group")
    s.add_argument("--cap", type=_number, default=10**6)
    s.set_defaults(func=cmd_oracle_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"error: invariant violated: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, DescriptorError, CapExceededError, OracleCapError, RootError,
            SamplerUnavailableError, ValueError, OSError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
