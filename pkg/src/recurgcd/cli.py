"""Command-line harness: ``recurgcd <subcommand> --config <path> ...``.

CSV rows go to ``--out`` (or the config's ``out``) and otherwise to standard
output; the summary is printed as ``key: value`` lines.  Exit codes: 0 when
every certified comparison was decided, 1 when some stayed undecided, 2 on
errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager

from .config import ExperimentConfig, load_config
from .errors import ConfigurationError, RecurGCDError
from .experiments import interval_fields, loggcd_sweep, nearest, pair_sweep, selftest
from .logvalue import MAX_PRECISION, format_nearest
from .parsing import parse_fraction
from .recurrence import (
    common_lattice,
    coprime_in_R_gamma,
    root_hypothesis_failures,
    s_integral_ratio,
    skolem_report,
    split_subsequence,
)
from .subspace import CSV_HEADER, HyperplaneFamily, PointFamily, subspace_check

EXIT_OK, EXIT_UNDECIDED, EXIT_ERROR = 0, 1, 2


class Output:
    """Collects CSV rows and summary lines for one run."""

    def __init__(self, header: list[str] | None):
        self.header = header
        self.rows: list[list[str]] = []
        self.summary: list[tuple[str, str]] = []
        self.undecided = False
        self.failed = False

    def row(self, fields) -> None:
        self.rows.append([str(f) for f in fields])

    def note(self, key: str, value) -> None:
        # one line per key; multi-line renderings are joined with " | "
        self.summary.append((key, " | ".join(str(value).splitlines())))

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        w.writerows(self.rows)
        return buf.getvalue()


@contextmanager
def _mapper(jobs: int):
    if jobs <= 1:
        yield map
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield lambda fn, items: pool.map(fn, items, chunksize=8)


def _fmt_set(xs) -> str:
    xs = sorted(xs)
    return "{" + ", ".join(map(str, xs)) + "}" if xs else "{}"


def _start(cfg: ExperimentConfig, default: int) -> int:
    return default if cfg.n_min is None else cfg.n_min


def _pair_report(cfg: ExperimentConfig, out: Output) -> None:
    """Coprimality verdict and the root-size hypothesis, shared by the sweeps."""
    L = common_lattice(cfg.F, cfg.G, cfg.unit)
    out.note("exponent_lattice", L)
    if L.q == 1:
        out.note("coprime_in_R_gamma", str(coprime_in_R_gamma(cfg.F, cfg.G, L)).lower())
    else:
        verdicts = []
        for l in range(L.q):
            F_l = split_subsequence(cfg.F, L.q, l)
            G_l = split_subsequence(cfg.G, L.q, l)
            verdicts.append(f"l={l}:{str(coprime_in_R_gamma(F_l, G_l, unit=cfg.unit)).lower()}")
        out.note("coprime_in_R_gamma", f"torsion q={L.q}; split verdicts " + " ".join(verdicts))
    bad = root_hypothesis_failures(cfg.F, cfg.G)
    if bad:
        out.note("warning", "all roots have absolute value < 1 at " + ", ".join(map(str, bad)))
    else:
        out.note("root_hypothesis", "holds at every place")


def _skipped(out: Output, rows) -> None:
    skipped = [f"{r.n if r.m is None else (r.m, r.n)}: {r.skipped}" for r in rows if r.skipped]
    out.note("skipped", len(skipped))
    for s in skipped:
        out.note("skipped_row", s)


def cmd_loggcd(cfg: ExperimentConfig, args) -> Output:
    cfg.require("F", "G")
    out = Output(["n", "loggcd_lo", "loggcd_hi", "eps_n", "below_eps"])
    indices = range(_start(cfg, 1), cfg.n_max + 1)
    with _mapper(cfg.jobs) as mapper:
        rows = loggcd_sweep(cfg.F, cfg.G, cfg.eps, indices, cfg.precision, MAX_PRECISION, mapper)
    for r in rows:
        if r.skipped:
            continue
        lo, hi = interval_fields(r.value)
        out.row([r.n, lo, hi, format_nearest(r.threshold), r.flag(positive=False)])
    below = [r.n for r in rows if r.below]
    out.undecided = any(r.undecided for r in rows)
    out.note("eps", cfg.eps)
    out.note("checked", sum(1 for r in rows if not r.skipped))
    out.note("below_eps", len(below))
    out.note("smallest_below", min(below) if below else "none")
    out.note("largest_below", max(below) if below else "none")
    out.note("undecided", sum(1 for r in rows if r.undecided))
    _skipped(out, rows)
    _pair_report(cfg, out)
    return out


def cmd_pairs(cfg: ExperimentConfig, args) -> Output:
    cfg.require("F", "G")
    out = Output(["m", "n", "loggcd", "eps_max_mn", "exceeds"])
    start = _start(cfg, 1)
    m_max = cfg.m_max if cfg.m_max is not None else cfg.n_max
    with _mapper(cfg.jobs) as mapper:
        rows = pair_sweep(
            cfg.F, cfg.G, cfg.eps, range(start, m_max + 1), range(start, cfg.n_max + 1),
            cfg.precision, MAX_PRECISION, mapper,
        )
    for r in rows:
        if r.skipped:
            continue
        out.row([r.m, r.n, nearest(r.value), format_nearest(r.threshold), r.flag(positive=True)])
    exceeding = [(r.m, r.n) for r in rows if r.exceeds]
    out.undecided = any(r.undecided for r in rows)
    out.note("eps", cfg.eps)
    out.note("checked", sum(1 for r in rows if not r.skipped))
    out.note("exceeding", len(exceeding))
    out.note("exceeding_pairs", " ".join(f"({m},{n})" for m, n in exceeding) or "none")
    out.note("undecided", sum(1 for r in rows if r.undecided))
    _skipped(out, rows)
    _pair_report(cfg, out)
    return out


def cmd_group(cfg: ExperimentConfig, args) -> Output:
    cfg.require("F", "G")
    out = Output(["l", "coprime"])
    L = common_lattice(cfg.F, cfg.G, cfg.unit)
    out.note("exponent_lattice", L)
    out.note("rank", L.rank)
    out.note("q", L.q)
    for l in range(L.q):
        F_l = split_subsequence(cfg.F, L.q, l)
        G_l = split_subsequence(cfg.G, L.q, l)
        verdict = coprime_in_R_gamma(F_l, G_l, unit=cfg.unit)
        out.row([l, int(verdict)])
        out.note(f"split_{l}", f"F = {F_l} ; G = {G_l}")
    return out


def cmd_skolem(cfg: ExperimentConfig, args) -> Output:
    cfg.require("F")
    out = Output(["n"])
    start = _start(cfg, 0)
    rep = skolem_report(cfg.F, cfg.n_max)
    zeros = sorted(n for n in rep.zeros if n >= start)
    for n in zeros:
        out.row([n])
    out.note("range", f"[{start}, {cfg.n_max}]")
    out.note("zeros", _fmt_set(zeros))
    out.note("nondegenerate", str(rep.nondegenerate).lower())
    out.note("note", rep.note)
    return out


def cmd_hadamard(cfg: ExperimentConfig, args) -> Output:
    cfg.require("F", "G")
    out = Output(["n", "integral"])
    start = _start(cfg, 1)
    rep = s_integral_ratio(cfg.F, cfg.G, cfg.S, cfg.n_max, start)
    for n in range(start, cfg.n_max + 1):
        if n not in rep.denominator_zeros:
            out.row([n, int(n in rep.integral)])
    out.note("S", ", ".join(["inf"] + [str(p) for p in cfg.S_primes]))
    out.note("integral", _fmt_set(rep.integral))
    out.note("count", len(rep.integral))
    out.note("skipped", len(rep.denominator_zeros))
    for n in sorted(rep.denominator_zeros):
        out.note("skipped_row", f"{n}: G vanishes")
    return out


def cmd_subspace(cfg: ExperimentConfig, args) -> Output:
    cfg.require("forms", "points")
    out = Output(list(CSV_HEADER))
    points = PointFamily(cfg.points, cfg.field.d)
    family = HyperplaneFamily(cfg.forms, points.dimension, cfg.field.d)
    S = sorted(cfg.S)
    indices = range(_start(cfg, 1), cfg.n_max + 1)
    with _mapper(cfg.jobs) as mapper:
        rep = subspace_check(family, points, S, cfg.eps, indices, cfg.precision, MAX_PRECISION, mapper)
    for r in rep.checked:
        out.row(r.csv_fields())
    out.undecided = bool(rep.undecided)
    out.note("eps", cfg.eps)
    out.note("checked", len(rep.checked))
    out.note("violations", len(rep.violations))
    out.note("violation_indices", _fmt_set(rep.violations))
    out.note("violation_density", f"{rep.violation_density:.6f}")
    out.note("undecided", len(rep.undecided))
    out.note("skipped", len(rep.skipped))
    for n, why in rep.skipped:
        out.note("skipped_row", f"{n}: {why}")
    return out


def cmd_selftest(cfg: ExperimentConfig, args) -> Output:
    out = Output(None)
    res = selftest(cfg.samples, max(1, cfg.samples // 10), cfg.seed, cfg.precision)
    out.note("samples", res.samples)
    out.note("failures", len(res.failures))
    for x in res.failures[:20]:
        out.note("failure", x)
    out.note("max_radius", format_nearest(res.max_radius))
    out.note("product_formula", "ok" if res.ok else "FAILED")
    out.failed = not res.ok
    return out


COMMANDS = {
    "loggcd": (cmd_loggcd, "sweep log gcd(F(n), G(n)) against eps*n"),
    "pairs": (cmd_pairs, "grid of log gcd(F(m), G(n)) against eps*max(m, n)"),
    "group": (cmd_group, "exponent lattice, torsion order and per-residue coprimality"),
    "skolem": (cmd_skolem, "zeros of F on [n_min, n_max]"),
    "hadamard": (cmd_hadamard, "indices where F(n)/G(n) is an S-integer"),
    "subspace": (cmd_subspace, "instance checks of the subspace inequality"),
    "selftest": (cmd_selftest, "product formula on random elements"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recurgcd",
        description="Certified log gcd sweeps and related checks for linear recurrences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=name != "selftest", help="experiment config file")
        p.add_argument("--n-max", type=int, help="override n_max")
        p.add_argument("--eps", type=str, help="override eps (exact rational, e.g. 1/20)")
        p.add_argument("--precision", type=int, help="starting precision in bits")
        p.add_argument("--out", help="CSV output path")
        p.add_argument("--jobs", type=int, help="worker processes for sweeps")
    return parser


def _configure(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    if args.n_max is not None:
        cfg.n_max = args.n_max
    if args.eps is not None:
        cfg.eps = parse_fraction(args.eps)
    if args.precision is not None:
        cfg.precision = args.precision
    if args.out is not None:
        cfg.out = args.out
    if args.jobs is not None:
        cfg.jobs = args.jobs
    return cfg.validate()


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        cfg = _configure(args)
        out = COMMANDS[args.command][0](cfg, args)
        if out.header is not None:
            text = out.csv_text()
            if cfg.out:
                with open(cfg.out, "w", newline="") as fh:
                    fh.write(text)
                out.note("csv", cfg.out)
            else:
                stdout.write(text)
                stdout.write("\n")
    except (RecurGCDError, ValueError, OSError) as exc:
        kind = "configuration error" if isinstance(exc, ConfigurationError) else "error"
        print(f"recurgcd: {kind}: {exc}", file=stderr)
        return EXIT_ERROR
    for key, value in out.summary:
        print(f"{key}: {value}", file=stdout)
    if out.failed:
        return EXIT_ERROR
    return EXIT_UNDECIDED if out.undecided else EXIT_OK


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))
