"""Command-line front end.

Subcommands: ``table`` (per-sector dimensions and weights), ``measures``
(measure pair per instance), ``scan`` (size sweeps with asymptotic columns),
``truncate`` (tail-truncation study), ``asymptote`` (closed-form estimates),
``verify`` (dense brute-force suite as JSON). Delimited output is byte-stable
for a fixed configuration; exact rationals are serialized as ``num/den``
strings and floats with 15 significant digits.

Exit codes: 0 success, 1 input/validation error, 2 verification or
internal-consistency failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import algebra, asymptotics, measures, oracle

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2

# auto mode switches to log space above this many total sites
AUTO_LOGSPACE_ABOVE = 2 ** 11

VERIFY_DEFAULT_PLAN = [(2, (4, 6, 8, 10)), (3, (4, 6, 8))]

TABLE_HEADER = [
    "n", "l_a", "l_b", "lam", "irrep_dim", "krylov_a", "krylov_b",
    "weight_exact", "weight_float",
]
MEASURES_HEADER = ["n", "l_a", "l_b", "mode", "log_base", "e_less", "e_greater"]
SCAN_HEADER = [
    "n", "size", "l_a", "l_b", "scaling_length", "mode", "log_base",
    "e_less", "e_greater", "e_less_asymp", "e_greater_asymp",
]
TRUNCATE_HEADER = [
    "n", "size", "l_a", "l_b", "eps", "mode", "log_base", "cutoff",
    "actual_tail", "trace_distance", "e_less_truncated", "e_greater_truncated",
    "e_greater_full", "delta_e_greater", "a_eps", "e_greater_truncated_estimate",
]
ASYMPTOTE_HEADER = [
    "n", "size", "l_a", "l_b", "scaling_length", "q", "lambda_max",
    "lambda_star", "e_less_asymp", "e_greater_asymp",
]


def format_float(value: float) -> str:
    return f"{value:.15g}"


def format_fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class SweepConfig:
    """Resolved run parameters; round-trips losslessly through to_text."""

    ns: tuple[int, ...] = (3,)
    sizes: tuple[int, ...] = ()
    cut: str = "1:1"
    eps: tuple[Fraction, ...] = ()
    mode: str = "auto"          # exact | logspace | auto
    log_base: str = "e"         # e | 2
    sizes_are: str = "total"    # total | half
    mem_cap: int = oracle.DEFAULT_DIM_CAP
    out: str | None = None
    svg: str | None = None

    def to_text(self) -> str:
        lines = [
            f"ns = {' '.join(str(n) for n in self.ns)}",
            f"sizes = {' '.join(str(s) for s in self.sizes)}",
            f"cut = {self.cut}",
            f"eps = {' '.join(format_fraction(e) for e in self.eps)}",
            f"mode = {self.mode}",
            f"log_base = {self.log_base}",
            f"sizes_are = {self.sizes_are}",
            f"mem_cap = {self.mem_cap}",
        ]
        if self.out:
            lines.append(f"out = {self.out}")
        if self.svg:
            lines.append(f"svg = {self.svg}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SweepConfig":
        values: dict = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"config line is not 'key = value': {raw!r}")
            key = key.strip()
            value = value.strip()
            if key == "ns":
                values["ns"] = tuple(int(tok) for tok in value.split())
            elif key == "sizes":
                values["sizes"] = tuple(int(tok) for tok in value.split())
            elif key == "cut":
                values["cut"] = value
            elif key == "eps":
                values["eps"] = tuple(Fraction(tok) for tok in value.split())
            elif key in ("mode", "log_base", "sizes_are"):
                values[key] = value
            elif key == "mem_cap":
                values["mem_cap"] = int(value)
            elif key in ("out", "svg"):
                values[key] = value
            else:
                raise ValueError(f"unknown config key {key!r}")
        return cls(**values)


def _validate_config(config: SweepConfig) -> SweepConfig:
    if config.mode not in ("exact", "logspace", "auto"):
        raise ValueError(f"mode must be exact, logspace or auto, got {config.mode!r}")
    if config.log_base not in measures.LOG_BASE_SCALE:
        raise ValueError(f"log base must be 'e' or '2', got {config.log_base!r}")
    if config.sizes_are not in ("total", "half"):
        raise ValueError(f"sizes_are must be total or half, got {config.sizes_are!r}")
    if any(n < 2 for n in config.ns):
        raise ValueError("local dimensions must be >= 2")
    if any(size < 2 for size in config.sizes):
        raise ValueError("sizes must be >= 2")
    if any(not 0 < eps < 1 for eps in config.eps):
        raise ValueError("eps values must lie in (0, 1)")
    if config.mem_cap < 1:
        raise ValueError("mem cap must be positive")
    # row order is part of the output contract: sweeps run ascending
    return replace(
        config,
        ns=tuple(sorted(config.ns)),
        sizes=tuple(sorted(config.sizes)),
        eps=tuple(sorted(config.eps)),
    )


def parse_cut(cut: str) -> tuple[int, int]:
    left, sep, right = cut.partition(":")
    try:
        a, b = int(left), int(right)
    except ValueError:
        a = b = 0
    if not sep or a < 1 or b < 1:
        raise ValueError(f"cut must be 'a:b' with positive integers, got {cut!r}")
    return a, b


def resolve_bipartition(size: int, cut: str, sizes_are: str) -> algebra.Bipartition:
    """Map a requested size to a concrete bipartition under the size convention."""
    a, b = parse_cut(cut)
    if sizes_are == "half":
        if (a, b) != (1, 1):
            raise ValueError("--sizes-are-half fixes the equal cut; drop --cut")
        return algebra.Bipartition(size, size)
    if (size * a) % (a + b):
        raise ValueError(f"cut {cut} does not split {size} sites into whole blocks")
    l_a = size * a // (a + b)
    return algebra.Bipartition(l_a, size - l_a)


def resolve_mode(mode: str, bip: algebra.Bipartition) -> str:
    if mode == "auto":
        return "logspace" if bip.total > AUTO_LOGSPACE_ABOVE else "exact"
    return mode


def _measure_pair(spec, bip, mode, base) -> measures.MeasureReport:
    if mode == "exact":
        return measures.measure_report(measures.mmis(spec, bip), base)
    return asymptotics.log_space_measures(spec, bip, base)


def emit_csv(config: SweepConfig, command: str, header: list[str],
             rows: list[list[str]]) -> None:
    convention = ("total chain length" if config.sizes_are == "total"
                  else "block length of the equal cut")
    lines = [f"# qfrag {command}; sizes are {convention}", ",".join(header)]
    lines.extend(",".join(row) for row in rows)
    text = "\n".join(lines) + "\n"
    if config.out:
        Path(config.out).write_text(text)
    else:
        sys.stdout.write(text)


def _require_sizes(config: SweepConfig) -> None:
    if not config.sizes:
        raise ValueError("no sizes given; pass --sizes or a config file")


def run_table(config: SweepConfig, args) -> int:
    _require_sizes(config)
    rows: list[list[str]] = []
    tables = []
    for n in config.ns:
        spec = algebra.CommutantSpec(n)
        for size in config.sizes:
            bip = resolve_bipartition(size, config.cut, config.sizes_are)
            table = algebra.sector_table(spec, bip)
            tables.append((n, table))
            for row in table.rows:
                rows.append([
                    str(n), str(bip.l_a), str(bip.l_b), str(row.lam),
                    str(row.irrep_dim), str(row.krylov_a), str(row.krylov_b),
                    format_fraction(row.weight), format_float(float(row.weight)),
                ])
    emit_csv(config, "table", TABLE_HEADER, rows)
    if config.svg:
        from . import plots

        plots.save_table_figure(tables, config.svg)
    return EXIT_OK


def run_measures(config: SweepConfig, args) -> int:
    _require_sizes(config)
    rows: list[list[str]] = []
    for n in config.ns:
        spec = algebra.CommutantSpec(n)
        for size in config.sizes:
            bip = resolve_bipartition(size, config.cut, config.sizes_are)
            mode = resolve_mode(config.mode, bip)
            report = _measure_pair(spec, bip, mode, config.log_base)
            rows.append([
                str(n), str(bip.l_a), str(bip.l_b), report.mode, config.log_base,
                format_float(report.e_less), format_float(report.e_greater),
            ])
    emit_csv(config, "measures", MEASURES_HEADER, rows)
    return EXIT_OK


def _scan_point(task) -> dict:
    n, size, config = task
    spec = algebra.CommutantSpec(n)
    bip = resolve_bipartition(size, config.cut, config.sizes_are)
    mode = resolve_mode(config.mode, bip)
    report = _measure_pair(spec, bip, mode, config.log_base)
    point = {
        "n": n, "size": size, "l_a": bip.l_a, "l_b": bip.l_b,
        "scaling_length": None, "mode": report.mode,
        "e_less": report.e_less, "e_greater": report.e_greater,
        "e_less_asymp": None, "e_greater_asymp": None,
    }
    if bip.l_a == bip.l_b:
        length = asymptotics.scaling_length(bip)
        est = asymptotics.estimate(spec, length)
        scale = measures.LOG_BASE_SCALE[config.log_base]
        point.update(
            scaling_length=length,
            e_less_asymp=est.e_less_est / scale,
            e_greater_asymp=est.e_greater_est / scale,
        )
    return point


def run_scan(config: SweepConfig, args) -> int:
    _require_sizes(config)
    tasks = [(n, size, config) for n in config.ns for size in config.sizes]
    with ThreadPoolExecutor() as pool:
        points = list(pool.map(_scan_point, tasks))
    rows = [
        [
            str(p["n"]), str(p["size"]), str(p["l_a"]), str(p["l_b"]),
            "" if p["scaling_length"] is None else str(p["scaling_length"]),
            p["mode"], config.log_base,
            format_float(p["e_less"]), format_float(p["e_greater"]),
            "" if p["e_less_asymp"] is None else format_float(p["e_less_asymp"]),
            "" if p["e_greater_asymp"] is None else format_float(p["e_greater_asymp"]),
        ]
        for p in points
    ]
    emit_csv(config, "scan", SCAN_HEADER, rows)
    if config.svg:
        from . import plots

        plots.save_scan_figure(points, config.svg)
    return EXIT_OK


def _truncate_point(task) -> dict:
    n, size, eps, config = task
    spec = algebra.CommutantSpec(n)
    bip = resolve_bipartition(size, config.cut, config.sizes_are)
    mode = resolve_mode(config.mode, bip)
    scale = measures.LOG_BASE_SCALE[config.log_base]
    point = {
        "n": n, "size": size, "l_a": bip.l_a, "l_b": bip.l_b,
        "eps": format_fraction(eps), "mode": mode, "scaling_length": None,
        "a_eps": asymptotics.a_epsilon(float(eps)),
        "e_greater_truncated_estimate": None,
    }
    if mode == "exact":
        state = measures.mmis(spec, bip)
        trunc = measures.truncate(state, eps)
        point.update(
            cutoff=trunc.truncation.cutoff,
            actual_tail=format_fraction(trunc.truncation.actual_tail),
            trace_distance=format_fraction(
                measures.trace_distance_truncated(state, trunc)),
            e_less_truncated=measures.e_less(trunc, config.log_base),
            e_greater_truncated=measures.e_greater(trunc, config.log_base),
            e_greater_full=measures.e_greater(state, config.log_base),
        )
    else:
        trunc = asymptotics.log_space_truncated_measures(
            spec, bip, float(eps), config.log_base)
        full = asymptotics.log_space_measures(spec, bip, config.log_base)
        point.update(
            cutoff=trunc.cutoff,
            actual_tail=format_float(trunc.actual_tail),
            trace_distance=format_float(2.0 * trunc.actual_tail),
            e_less_truncated=trunc.e_less,
            e_greater_truncated=trunc.e_greater,
            e_greater_full=full.e_greater,
        )
    point["delta_e_greater"] = point["e_greater_full"] - point["e_greater_truncated"]
    if bip.l_a == bip.l_b:
        length = asymptotics.scaling_length(bip)
        point["scaling_length"] = length
        if n > 2:
            point["e_greater_truncated_estimate"] = (
                point["a_eps"] * math.log(spec.q) * math.sqrt(2.0 * length) / scale
            )
    return point


def run_truncate(config: SweepConfig, args) -> int:
    _require_sizes(config)
    if not config.eps:
        raise ValueError("no eps values given; pass --eps or a config file")
    tasks = [
        (n, size, eps, config)
        for n in config.ns for size in config.sizes for eps in config.eps
    ]
    with ThreadPoolExecutor() as pool:
        points = list(pool.map(_truncate_point, tasks))
    rows = [
        [
            str(p["n"]), str(p["size"]), str(p["l_a"]), str(p["l_b"]),
            p["eps"], p["mode"], config.log_base, str(p["cutoff"]),
            p["actual_tail"], p["trace_distance"],
            format_float(p["e_less_truncated"]),
            format_float(p["e_greater_truncated"]),
            format_float(p["e_greater_full"]),
            format_float(p["delta_e_greater"]),
            format_float(p["a_eps"]),
            ("" if p["e_greater_truncated_estimate"] is None
             else format_float(p["e_greater_truncated_estimate"])),
        ]
        for p in points
    ]
    emit_csv(config, "truncate", TRUNCATE_HEADER, rows)
    if config.svg:
        from . import plots

        figure_rows = [
            {
                "n": p["n"], "eps": p["eps"],
                "scaling_length": p["scaling_length"],
                "e_greater_full": p["e_greater_full"],
                "e_greater_truncated": p["e_greater_truncated"],
            }
            for p in points
        ]
        plots.save_truncation_figure(figure_rows, config.svg)
    return EXIT_OK


def run_asymptote(config: SweepConfig, args) -> int:
    _require_sizes(config)
    rows: list[list[str]] = []
    for n in config.ns:
        spec = algebra.CommutantSpec(n)
        scale = measures.LOG_BASE_SCALE[config.log_base]
        for size in config.sizes:
            bip = resolve_bipartition(size, config.cut, config.sizes_are)
            length = asymptotics.scaling_length(bip)
            est = asymptotics.estimate(spec, length)
            rows.append([
                str(n), str(size), str(bip.l_a), str(bip.l_b), str(length),
                format_float(spec.q), format_float(est.lambda_max),
                format_float(est.lambda_star),
                format_float(est.e_less_est / scale),
                format_float(est.e_greater_est / scale),
            ])
    emit_csv(config, "asymptote", ASYMPTOTE_HEADER, rows)
    return EXIT_OK


def verification_cuts(total: int) -> list[algebra.Bipartition]:
    """Most balanced even cut, plus the (2, total-2) cut when distinct."""
    half = total // 2
    balanced_a = half if half % 2 == 0 else half - 1
    cuts = [algebra.Bipartition(balanced_a, total - balanced_a)]
    if balanced_a != 2:
        cuts.append(algebra.Bipartition(2, total - 2))
    return cuts


def _check_record(result: oracle.CheckResult, n: int, length: int,
                  cut: algebra.Bipartition | None) -> dict:
    return {
        "check": result.name,
        "n": n,
        "length": length,
        "cut": None if cut is None else f"{cut.l_a}:{cut.l_b}",
        "passed": result.passed,
        "max_abs_deviation": result.max_abs_deviation,
        "detail": result.detail,
    }


def _verify_instance(n: int, total: int, mem_cap: int, corrupt: bool) -> list[dict]:
    records: list[dict] = []
    spec = algebra.CommutantSpec(n)
    records.append(_check_record(oracle.tl_relation_check(n, total), n, total, None))

    try:
        basis = oracle.krylov_subspace(n, total, mem_cap)
        krylov_check = oracle.CheckResult("krylov-dimension", True, 0.0)
    except oracle.VerificationError as exc:
        records.append(_check_record(
            oracle.CheckResult("krylov-dimension", False, math.inf, str(exc)),
            n, total, None))
        return records
    records.append(_check_record(krylov_check, n, total, None))

    rho = oracle.mmis_dense(n, total, basis=basis)
    if corrupt:
        # self-test hook: normalize by count+1 instead of count
        rho = rho * (basis.count / (basis.count + 1))

    trace_dev = abs(float(np.trace(rho)) - 1.0)
    purity_dev = abs(float(np.trace(rho @ rho)) - 1.0 / basis.count)
    normalization = oracle.CheckResult(
        "state-normalization",
        trace_dev <= 1e-12 and purity_dev <= 1e-10,
        max(trace_dev, purity_dev),
    )
    records.append(_check_record(normalization, n, total, None))

    for bip in verification_cuts(total):
        table = algebra.sector_table(spec, bip)
        state = measures.EnsembleState(table, table.weights(), measures.MMIS)
        eigvals, eigvecs = np.linalg.eigh(oracle.partial_transpose(rho, n, bip))
        log_negativity = math.log(float(np.abs(eigvals).sum()))
        deviation = abs(log_negativity - measures.e_greater(state))
        records.append(_check_record(
            oracle.CheckResult("negativity-match", deviation <= 1e-8, deviation),
            n, total, bip))
        records.append(_check_record(
            oracle.negativity_spectrum_check(rho, n, bip, table,
                                             eigenvalues=eigvals),
            n, total, bip))
        records.append(_check_record(
            oracle.binegativity_check(rho, n, bip, pt_eig=(eigvals, eigvecs)),
            n, total, bip))

    if total == 4:
        bip = algebra.Bipartition(2, 2)
        entropy = oracle.entanglement_entropy(basis.vectors[1], n ** 2)
        deviation = abs(entropy - math.log(algebra.qdim(1, n)))
        records.append(_check_record(
            oracle.CheckResult("singlet-entropy", deviation <= 1e-9, deviation),
            n, total, bip))
    return records


def run_verify(config: SweepConfig, args) -> int:
    if config.sizes:
        plan = []
        for n in config.ns:
            for size in config.sizes:
                total = size if config.sizes_are == "total" else 2 * size
                plan.append((n, total))
    else:
        plan = [(n, total) for n, totals in VERIFY_DEFAULT_PLAN for total in totals]
    for _, total in plan:
        if total % 2 or total < 4:
            raise ValueError(f"verify needs even total chain lengths >= 4, got {total}")

    checks: list[dict] = []
    for n, total in plan:
        checks.extend(_verify_instance(n, total, config.mem_cap,
                                       getattr(args, "inject_corruption", False)))
    report = {
        "schema": 1,
        "all_passed": all(record["passed"] for record in checks),
        "checks": checks,
    }
    text = json.dumps(report, indent=2) + "\n"
    if config.out:
        Path(config.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report["all_passed"] else EXIT_VERIFICATION


HANDLERS = {
    "table": run_table,
    "measures": run_measures,
    "scan": run_scan,
    "truncate": run_truncate,
    "asymptote": run_asymptote,
    "verify": run_verify,
}


class _Parser(argparse.ArgumentParser):
    # input errors exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"qfrag: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat 'key = value' config file; flags win")
    parser.add_argument("--n", type=int, nargs="+",
                        help="local dimensions to sweep (default 3)")
    parser.add_argument("--sizes", type=int, nargs="+",
                        help="chain sizes; see --sizes-are-total / --sizes-are-half")
    parser.add_argument("--cut", help="bipartition ratio a:b of the total (default 1:1)")
    parser.add_argument("--eps", type=Fraction, nargs="+",
                        help="truncation tail masses as fractions or decimals")
    parser.add_argument("--mode", choices=["exact", "logspace", "auto"],
                        help="arithmetic mode (auto switches on total size)")
    parser.add_argument("--base", choices=["e", "2"], dest="log_base",
                        help="log base for reported values (default e)")
    parser.add_argument("--out", help="output path (default stdout)")
    parser.add_argument("--svg", help="also render a figure to this path")
    parser.add_argument("--mem-cap", type=int, dest="mem_cap",
                        help="dense dimension cap for verify (default 6561)")
    convention = parser.add_mutually_exclusive_group()
    convention.add_argument("--sizes-are-total", dest="sizes_are",
                            action="store_const", const="total",
                            help="sizes count the whole chain (default)")
    convention.add_argument("--sizes-are-half", dest="sizes_are",
                            action="store_const", const="half",
                            help="sizes count one block of the equal cut")
    parser.add_argument("--inject-corruption", action="store_true",
                        help="verify self-test hook: corrupt the state normalization")
    parser.set_defaults(sizes_are=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qfrag", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, blurb in [
        ("table", "per-sector dimensions and exact weights as CSV"),
        ("measures", "measure pair per instance as CSV"),
        ("scan", "size sweep with asymptotic columns as CSV"),
        ("truncate", "tail-truncation study as CSV"),
        ("asymptote", "closed-form estimates as CSV"),
        ("verify", "dense brute-force verification suite as JSON"),
    ]:
        _add_common_options(subparsers.add_parser(name, help=blurb))
    return parser


def merge_config(args: argparse.Namespace) -> SweepConfig:
    config = SweepConfig()
    if args.config:
        config = SweepConfig.from_text(Path(args.config).read_text())
    updates: dict = {}
    if args.n is not None:
        updates["ns"] = tuple(sorted(set(args.n)))
    if args.sizes is not None:
        updates["sizes"] = tuple(sorted(set(args.sizes)))
    if args.cut is not None:
        updates["cut"] = args.cut
    if args.eps is not None:
        updates["eps"] = tuple(sorted(set(args.eps)))
    if args.mode is not None:
        updates["mode"] = args.mode
    if args.log_base is not None:
        updates["log_base"] = args.log_base
    if args.sizes_are is not None:
        updates["sizes_are"] = args.sizes_are
    if args.mem_cap is not None:
        updates["mem_cap"] = args.mem_cap
    if args.out is not None:
        updates["out"] = args.out
    if args.svg is not None:
        updates["svg"] = args.svg
    return _validate_config(replace(config, **updates))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if isinstance(exc.code, int):
            return exc.code
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        config = merge_config(args)
        return HANDLERS[args.command](config, args)
    except (ValueError, OSError, oracle.MemoryCapExceeded) as exc:
        print(f"qfrag: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (oracle.VerificationError, asymptotics.ConsistencyError) as exc:
        print(f"qfrag: verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION


if __name__ == "__main__":
    raise SystemExit(main())
