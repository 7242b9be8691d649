"""Command-line front end: convergence sweeps in N and torus axiom-defect reports.

Examples::

    fuzzygb sphere --n 2,10,100
    fuzzygb torus --n 4,8,16 --format json
    fuzzygb axisym --f2 "1,0,0,0,-1" --n 8,16,32,64 --hbar rule
    fuzzygb check-axioms --n 8,16,32 --modes 3
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .curvature import classical_axisym, curvature_report
from .errors import ConfigError, DomainError, FuzzyGBError
from .regularization import AxiomDefectReport, fit_decay_rate, sphere_hbar, torus_axiom_report
from .surfaces import (
    CLIFFORD_TORUS,
    ROUND_SPHERE,
    SurfaceKind,
    SurfaceSpec,
    axisym_embedding,
    axisym_representation,
    calibrate_hbar,
    sphere_embedding,
    torus_embedding,
)

log = logging.getLogger("fuzzygb")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

CSV_COLUMNS = ("N", "hbar", "chi_hat", "abs_err", "runtime_ms")
AXIOM_COLUMNS = ("N", "hbar", "bracket_defect", "product_defect", "trace_defect", "unitality_defect")


@dataclass(frozen=True)
class SweepConfig:
    surface: SurfaceSpec
    n_list: tuple[int, ...]
    hbar_mode: str = "rule"  # "rule" | "calibrate" | "explicit"
    hbar_value: float | None = None
    output_format: str = "csv"
    output_path: str | None = None
    jobs: int = 1

    def __post_init__(self):
        ns = tuple(int(n) for n in self.n_list)
        if not ns:
            raise ConfigError("the N list is empty")
        if any(n < 2 for n in ns):
            raise ConfigError("every N must be >= 2")
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ConfigError("the N list must be strictly ascending")
        object.__setattr__(self, "n_list", ns)
        if self.hbar_mode not in ("rule", "calibrate", "explicit"):
            raise ConfigError(f"unknown hbar mode {self.hbar_mode!r}")
        if self.hbar_mode == "explicit" and not (self.hbar_value and self.hbar_value > 0):
            raise ConfigError("explicit hbar must be a positive number")
        if self.hbar_mode != "rule" and self.surface.kind is not SurfaceKind.AXISYMMETRIC:
            raise ConfigError("only axisymmetric surfaces accept a non-default hbar mode")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.output_format!r}")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")


@dataclass
class SweepRow:
    N: int
    hbar: float
    chi_hat: float
    abs_err: float
    runtime_ms: float
    diagnostics: dict = field(default_factory=dict)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class ConvergenceTable:
    rows: list[SweepRow]
    chi_reference: float
    fitted_rate: float | None = None

    @property
    def all_ok(self) -> bool:
        return all(r.ok for r in self.rows)


def classical_chi(surface: SurfaceSpec) -> float:
    if surface.kind is SurfaceKind.ROUND_SPHERE:
        return 2.0
    if surface.kind is SurfaceKind.CLIFFORD_TORUS:
        return 0.0
    return classical_axisym(surface).chi_classical


def _hbar_for(cfg: SweepConfig, n: int) -> float:
    if cfg.hbar_mode == "explicit":
        return float(cfg.hbar_value)
    if cfg.hbar_mode == "calibrate":
        return calibrate_hbar(cfg.surface, n)
    return sphere_hbar(n)


def _sweep_row(cfg: SweepConfig, n: int, chi_ref: float) -> SweepRow:
    t0 = time.perf_counter()
    hbar = math.nan
    try:
        kind = cfg.surface.kind
        if kind is SurfaceKind.ROUND_SPHERE:
            report = curvature_report(sphere_embedding(n), route="normals")
        elif kind is SurfaceKind.CLIFFORD_TORUS:
            report = curvature_report(torus_embedding(n), route="normals")
        else:
            hbar = _hbar_for(cfg, n)
            rep = axisym_representation(cfg.surface, n, hbar)
            report = curvature_report(axisym_embedding(rep), route="axisym", rep=rep)
        hbar = report.hbar
        chi = report.chi_hat
        return SweepRow(n, hbar, chi, abs(chi - chi_ref), (time.perf_counter() - t0) * 1e3, report.diagnostics)
    except FuzzyGBError as exc:
        return SweepRow(
            n, hbar, math.nan, math.nan, (time.perf_counter() - t0) * 1e3,
            error=f"{type(exc).__name__}: {exc}",
        )


def _fit_rate(ns: Sequence[int], errs: Sequence[float], floor: float = 1e-13) -> float | None:
    pts = [(n, e) for n, e in zip(ns, errs) if math.isfinite(e) and e > floor]
    if len(pts) < 3:
        return None
    return fit_decay_rate([p[0] for p in pts], [p[1] for p in pts])


def run_sweep(cfg: SweepConfig) -> ConvergenceTable:
    """Compute chi-hat for every N in the config; failing rows keep their reason."""
    chi_ref = classical_chi(cfg.surface)
    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(lambda n: _sweep_row(cfg, n, chi_ref), cfg.n_list))
    else:
        rows = [_sweep_row(cfg, n, chi_ref) for n in cfg.n_list]
    rate = _fit_rate([r.N for r in rows], [r.abs_err for r in rows])
    return ConvergenceTable(rows, chi_ref, rate)


def run_axiom_check(n_list: Sequence[int], mode_cutoff: int) -> tuple[list[AxiomDefectReport], dict]:
    """Torus axiom defects per N, plus fitted decay rates of each defect column."""
    if mode_cutoff < 0:
        raise ConfigError("mode cutoff must be non-negative")
    if not n_list or any(n < 2 for n in n_list):
        raise ConfigError("every N must be >= 2")
    reports = [torus_axiom_report(n, mode_cutoff) for n in n_list]
    rates = {}
    for col in ("bracket_defect", "product_defect", "trace_defect", "unitality_defect"):
        rates[col] = _fit_rate([r.N for r in reports], [getattr(r, col) for r in reports])
    return reports, rates


# -- serialization -----------------------------------------------------------


def _fmt(x: float) -> str:
    return format(x, ".17g")


def emit_csv(table: ConvergenceTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in table.rows:
        w.writerow([r.N, _fmt(r.hbar), _fmt(r.chi_hat), _fmt(r.abs_err), _fmt(r.runtime_ms)])
    return buf.getvalue()


def parse_csv(text: str) -> list[SweepRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ConfigError(f"unexpected CSV header {reader.fieldnames}")
    return [
        SweepRow(int(d["N"]), float(d["hbar"]), float(d["chi_hat"]), float(d["abs_err"]), float(d["runtime_ms"]))
        for d in reader
    ]


def _json_safe(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _json_safe(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_json_safe(v) for v in x]
    return x


def emit_json(table: ConvergenceTable) -> str:
    doc = {
        "chi_reference": table.chi_reference,
        "fitted_rate": table.fitted_rate,
        "rows": [asdict(r) for r in table.rows],
    }
    return json.dumps(_json_safe(doc), indent=2) + "\n"


def emit_axiom_csv(reports: Sequence[AxiomDefectReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(AXIOM_COLUMNS)
    for r in reports:
        w.writerow([r.N] + [_fmt(getattr(r, c)) for c in AXIOM_COLUMNS[1:]])
    return buf.getvalue()


def emit_axiom_json(reports: Sequence[AxiomDefectReport], rates: dict) -> str:
    doc = {"fitted_rates": rates, "rows": [asdict(r) for r in reports]}
    return json.dumps(_json_safe(doc), indent=2) + "\n"


# -- argument parsing --------------------------------------------------------


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fuzzygb", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--n", type=_int_list, required=True, help="comma-separated matrix sizes")
        sp.add_argument("--out", default=None, help="output file (default: stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    for name in ("sphere", "torus"):
        sp = sub.add_parser(name, help=f"chi-hat sweep for the fuzzy {name}")
        common(sp)
        sp.add_argument("--jobs", type=int, default=1)

    sp = sub.add_parser("axisym", help="chi-hat sweep for x^2 + y^2 = f^2(z)")
    common(sp)
    sp.add_argument("--f2", type=_float_list, required=True, help="ascending coefficients of f^2")
    sp.add_argument("--domain", type=_float_list, default=None, help='"z-,z+"')
    sp.add_argument("--hbar", default="rule", help="rule | calibrate | VALUE")
    sp.add_argument("--jobs", type=int, default=1)

    sp = sub.add_parser("check-axioms", help="fuzzy torus axiom defects")
    common(sp)
    sp.add_argument("--modes", type=int, default=3, help="mode cutoff |m1|,|m2| <= MODES")
    return p


def _config_from_args(args) -> SweepConfig:
    hbar_mode, hbar_value = "rule", None
    if args.command == "sphere":
        surface = ROUND_SPHERE
    elif args.command == "torus":
        surface = CLIFFORD_TORUS
    else:
        domain = None
        if args.domain is not None:
            if len(args.domain) != 2:
                raise ConfigError("--domain needs exactly two numbers")
            domain = tuple(args.domain)
        try:
            surface = SurfaceSpec.axisymmetric(args.f2, domain)
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc
        if args.hbar in ("rule", "calibrate"):
            hbar_mode = args.hbar
        else:
            try:
                hbar_mode, hbar_value = "explicit", float(args.hbar)
            except ValueError:
                raise ConfigError(f"--hbar must be rule, calibrate or a number, got {args.hbar!r}") from None
    return SweepConfig(surface, args.n, hbar_mode, hbar_value, args.format, args.out, args.jobs)


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")

    try:
        if args.command == "check-axioms":
            if not args.n or any(b <= a for a, b in zip(args.n, args.n[1:])):
                raise ConfigError("the N list must be non-empty and strictly ascending")
            reports, rates = run_axiom_check(args.n, args.modes)
            text = emit_axiom_csv(reports) if args.format == "csv" else emit_axiom_json(reports, rates)
            _write(text, args.out)
            if args.format == "csv":
                print("fitted rates: " + ", ".join(f"{k}={v}" for k, v in rates.items()), file=sys.stderr)
            return EXIT_OK

        cfg = _config_from_args(args)
        table = run_sweep(cfg)
    except ConfigError as exc:
        print(f"fuzzygb: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FuzzyGBError as exc:
        print(f"fuzzygb: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        # e.g. a malformed FUZZYGB_TOL_SCALE
        print(f"fuzzygb: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    _write(emit_csv(table) if cfg.output_format == "csv" else emit_json(table), cfg.output_path)
    if cfg.output_format == "csv" and table.fitted_rate is not None:
        print(f"fitted rate: {table.fitted_rate:.6g}", file=sys.stderr)
    for r in table.rows:
        if not r.ok:
            print(f"fuzzygb: N={r.N} failed: {r.error}", file=sys.stderr)
    return EXIT_OK if table.all_ok else EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
