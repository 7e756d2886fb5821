"""Command-line front end emitting reconstruction tables as CSV or JSON.

Commands:
  demo        accuracy table for two closed-form test functions at x = 1
  partition   error profile of the improved approximant for the partition integral
  oscillator  error profile of the improved approximant for the oscillator
  fit-p       solve the strong-coupling matching condition for p
  verify      run the built-in invariant suite and report pass/fail counts

Exit codes: 0 success, 2 domain/configuration error (or failed verify
checks), 3 convergence failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

from . import approximants, models, pms
from .approximants import AccuracyRow, ApproximantKind
from .errors import InvalidInputError, NumericalError
from .pms import PmsModel, PmsRelation
from .series import TruncatedSeries

_CSV_COLUMNS = ("model", "method", "p", "g", "approx", "oracle", "delta_percent", "error")

_DEMO_KINDS = (
    ApproximantKind.BETA2,
    ApproximantKind.BETA3,
    ApproximantKind.X2,
    ApproximantKind.XCF2,
    ApproximantKind.TAYLOR2,
    ApproximantKind.TAYLOR3,
)


@dataclass(frozen=True)
class GridSpec:
    lo: float
    hi: float
    count: int
    kind: str  # "linear" | "log"

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = text.split(",")
        if len(parts) != 4:
            raise ValueError(f"grid spec must be min,max,count,linear|log, got {text!r}")
        lo, hi, count, kind = float(parts[0]), float(parts[1]), int(parts[2]), parts[3]
        if kind not in ("linear", "log"):
            raise ValueError(f"grid kind must be linear or log, got {kind!r}")
        if count < 1:
            raise ValueError("grid count must be >= 1")
        if kind == "log" and lo <= 0:
            raise ValueError("log grids need min > 0")
        if hi < lo:
            raise ValueError("grid needs max >= min")
        return cls(lo, hi, count, kind)

    def points(self) -> list[float]:
        if self.count == 1:
            return [self.lo]
        if self.kind == "linear":
            step = (self.hi - self.lo) / (self.count - 1)
            return [self.lo + step * i for i in range(self.count)]
        ratio = math.log(self.hi / self.lo) / (self.count - 1)
        return [self.lo * math.exp(ratio * i) for i in range(self.count)]


@dataclass(frozen=True)
class RunConfig:
    command: str
    model: str = "partition"
    g_grid: GridSpec = GridSpec(0.01, 100.0, 60, "log")
    p_mode: str = "auto"  # "auto" | "unit" | numeric string
    output_format: str = "csv"
    output_path: str | None = None


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".17g")
    return str(value)


def _rows_to_csv(rows: list[dict]) -> str:
    lines = [",".join(_CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(_fmt(row.get(col)) for col in _CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def _report_json(header: dict, rows: list[dict]) -> str:
    payload = dict(header)
    payload["rows"] = [{col: row.get(col) for col in _CSV_COLUMNS} for row in rows]
    return json.dumps(payload, indent=2, allow_nan=True) + "\n"


def _accuracy_row_dict(model: str, p, row: AccuracyRow) -> dict:
    return {
        "model": model,
        "method": row.method,
        "p": p,
        "g": row.abscissa,
        "approx": row.approx_value,
        "oracle": row.oracle_value,
        "delta_percent": row.delta_percent,
        "error": row.error,
    }


def _log1p_series(order: int) -> TruncatedSeries:
    return TruncatedSeries((0.0,) + tuple((-1.0) ** (k + 1) / k for k in range(1, order + 1)))


def _x_over_sqrt1p_series(order: int) -> TruncatedSeries:
    coeffs = [0.0]
    binom = 1.0  # binomial(-1/2, j), starting at j = 0
    for j in range(order):
        if j > 0:
            binom *= (-0.5 - (j - 1)) / j
        coeffs.append(binom)
    return TruncatedSeries(tuple(coeffs))


def _run_demo(cfg: RunConfig) -> tuple[dict, list[dict]]:
    cases = [
        ("log1p", _log1p_series(3), lambda x: math.log1p(x)),
        ("x_over_sqrt1p", _x_over_sqrt1p_series(3), lambda x: x / math.sqrt(1.0 + x)),
    ]
    rows = []
    for name, series, oracle in cases:
        for row in approximants.delta_table(series, oracle, _DEMO_KINDS, [1.0]):
            rows.append(_accuracy_row_dict(name, None, row))
    return {"model": "demo", "p": None, "fitted": False}, rows


def _resolve_p(model: PmsModel, p_mode: str) -> tuple[float, bool]:
    if p_mode == "unit":
        return 1.0, False
    if p_mode == "auto":
        target = (
            models.PARTITION_STRONG_COEFF
            if model is PmsModel.PARTITION_PHI4
            else models.OSCILLATOR_STRONG_COEFF
        )
        return pms.fit_p(model, target), True
    try:
        value = float(p_mode)
    except ValueError:
        raise ValueError(f"p-mode must be auto, unit, or a number, got {p_mode!r}")
    return value, False


def _run_profile(cfg: RunConfig) -> tuple[dict, list[dict]]:
    model = PmsModel(cfg.model)
    p, fitted = _resolve_p(model, cfg.p_mode)
    rel = PmsRelation(model, p)
    oracle = models.model_oracle(model)
    rows = []
    for g in cfg.g_grid.points():
        entry = {
            "model": model.value,
            "method": "rg_improved",
            "p": p,
            "g": g,
            "approx": None,
            "oracle": None,
            "delta_percent": None,
            "error": None,
        }
        try:
            exact = oracle(g)
            value = pms.improved_rg_value(rel, g)
            entry.update(
                approx=value,
                oracle=exact,
                delta_percent=approximants.delta_percent(value, exact),
            )
        except (InvalidInputError, NumericalError) as exc:
            entry["error"] = str(exc)
        rows.append(entry)
    return {"model": model.value, "p": p, "fitted": fitted}, rows


def _run_fit_p(cfg: RunConfig) -> tuple[dict, list[dict]]:
    model = PmsModel(cfg.model)
    target = (
        models.PARTITION_STRONG_COEFF
        if model is PmsModel.PARTITION_PHI4
        else models.OSCILLATOR_STRONG_COEFF
    )
    p = pms.fit_p(model, target)
    residual = pms.strong_limit_coeff(PmsRelation(model, p)) - target
    header = {"model": model.value, "p": p, "fitted": True, "residual": residual}
    return header, []


def _verify_checks() -> list[tuple[str, bool, str]]:
    """Fast invariant suite; every check is deterministic."""
    from .series import compose, reversion

    checks: list[tuple[str, bool, str]] = []

    def add(name: str, measured: float, bound: float):
        checks.append((name, measured <= bound, f"{measured:.3e} <= {bound:.0e}"))

    log_series = _log1p_series(8)
    back = compose(TruncatedSeries((0.0, 1.0) + log_series.coeffs[2:]), reversion(log_series))
    ident_err = max(
        abs(float(c) - (1.0 if k == 1 else 0.0)) for k, c in enumerate(back.coeffs)
    )
    add("series_reversion_roundtrip", ident_err, 1e-12)

    add(
        "flow_composition_law",
        approximants.check_group_property(_log1p_series(4), 0.3, 0.4),
        1e-9,
    )
    add(
        "flow_generator_identity",
        approximants.check_infinitesimal_operator(_log1p_series(4), 0.5, 1e-4),
        1e-6,
    )

    worst = 0.0
    for model in PmsModel:
        for p in (1.0, 1.472032, 1.779643):
            rel = PmsRelation(model, p)
            for g in (1e-3, 0.1, 1.0, 30.0, 1e3):
                back_g = pms.relation_g_of_x(rel, pms.invert_relation(rel, g))
                worst = max(worst, abs(back_g - g) / g)
    add("substitution_roundtrip", worst, 1e-12)

    rel = PmsRelation(PmsModel.QUARTIC_OSCILLATOR, 1.0)
    gc = rel.g_c
    lo = pms.invert_relation(rel, gc * (1.0 - 1e-9))
    hi = pms.invert_relation(rel, gc * (1.0 + 1e-9))
    add("cubic_branch_continuity", abs(hi - lo), 1e-8)

    add(
        "pipeline_equivalence_partition",
        pms.pipeline_equivalence_residual(PmsRelation(PmsModel.PARTITION_PHI4, 1.3), 2.0),
        1e-10,
    )
    add(
        "pipeline_equivalence_oscillator",
        pms.pipeline_equivalence_residual(PmsRelation(PmsModel.QUARTIC_OSCILLATOR, 1.472032), 0.7),
        1e-10,
    )

    p_part = pms.fit_p(PmsModel.PARTITION_PHI4, models.PARTITION_STRONG_COEFF)
    add("fit_p_partition", abs(p_part - 1.779643), 1e-3)
    p_osc = pms.fit_p(PmsModel.QUARTIC_OSCILLATOR, models.OSCILLATOR_STRONG_COEFF)
    add("fit_p_oscillator", abs(p_osc - 1.472032), 1e-3)

    add("partition_oracle_origin", abs(models.partition_exact(0.0) - 1.0), 1e-12)
    add("oscillator_oracle_origin", abs(models.oscillator_exact(0.0) - 0.5), 1e-12)
    weak = models.partition_weak_series(5)
    add(
        "partition_oracle_weak_overlap",
        abs(models.partition_exact(0.01) - weak.evaluate(0.01)),
        1e-6,
    )

    x = pms.invert_relation(PmsRelation(PmsModel.PARTITION_PHI4, 1.0), 0.8)
    slope = (
        pms.modified_series_value(PmsModel.PARTITION_PHI4, 0.8, x + 1e-5, 1)
        - pms.modified_series_value(PmsModel.PARTITION_PHI4, 0.8, x - 1e-5, 1)
    ) / 2e-5
    add("stationarity_at_inversion", abs(slope), 1e-8)

    return checks


def _run_verify(cfg: RunConfig) -> tuple[int, str]:
    checks = _verify_checks()
    passed = sum(1 for _, ok, _ in checks if ok)
    failed = len(checks) - passed
    if cfg.output_format == "json":
        payload = {
            "passed": passed,
            "failed": failed,
            "checks": [
                {"check": name, "status": "PASS" if ok else "FAIL", "measured": detail}
                for name, ok, detail in checks
            ],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = ["check,status,measured"]
        for name, ok, detail in checks:
            lines.append(f"{name},{'PASS' if ok else 'FAIL'},{detail}")
        lines.append(f"total,,{passed} passed / {failed} failed")
        text = "\n".join(lines) + "\n"
    return (0 if failed == 0 else 2), text


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute one command and return (exit_code, report text)."""
    try:
        if cfg.command == "verify":
            return _run_verify(cfg)
        if cfg.command == "demo":
            header, rows = _run_demo(cfg)
        elif cfg.command in ("partition", "oscillator"):
            header, rows = _run_profile(cfg)
        elif cfg.command == "fit-p":
            header, rows = _run_fit_p(cfg)
        else:
            raise ValueError(f"unknown command {cfg.command!r}")
    except (InvalidInputError, ValueError) as exc:
        return 2, f"error: {exc}\n"
    except NumericalError as exc:
        return 3, f"error: {exc}\n"
    if cfg.output_format == "json":
        return 0, _report_json(header, rows)
    if cfg.command == "fit-p":
        lines = ["model,p,residual",
                 f"{header['model']},{_fmt(header['p'])},{_fmt(header['residual'])}"]
        return 0, "\n".join(lines) + "\n"
    return 0, _rows_to_csv(rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rgresum",
        description="Flow-approximant reconstructions and their accuracy tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output_flags(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="write the report here instead of stdout")

    add_output_flags(sub.add_parser("demo", help="accuracy table for two test functions"))
    for name in ("partition", "oscillator"):
        p = sub.add_parser(name, help=f"{name} error profile")
        p.add_argument(
            "--g-grid",
            default="0.01,100,60,log",
            help="coupling grid as min,max,count,linear|log",
        )
        p.add_argument(
            "--p-mode",
            default="auto",
            help="auto (fit p), unit (p = 1), or a fixed numeric value",
        )
        add_output_flags(p)
    p = sub.add_parser("fit-p", help="solve the strong-coupling matching condition")
    p.add_argument("--model", choices=("partition", "oscillator"), required=True)
    add_output_flags(p)
    add_output_flags(sub.add_parser("verify", help="run the built-in invariant suite"))
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    grid = GridSpec.parse(args.g_grid) if getattr(args, "g_grid", None) else GridSpec(
        0.01, 100.0, 60, "log"
    )
    return RunConfig(
        command=args.command,
        model=getattr(args, "model", args.command if args.command in ("partition", "oscillator") else "partition"),
        g_grid=grid,
        p_mode=getattr(args, "p_mode", "auto"),
        output_format=args.format,
        output_path=args.out,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = config_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    code, text = run(cfg)
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
