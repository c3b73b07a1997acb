"""Command-line front end: ingest -> diagnose -> fit -> simulate -> report.

Commands
--------
``riskcli stats``   descriptive statistics and the correlation matrix
``riskcli fit``     maximum-likelihood fits, one JSON artifact per asset
``riskcli risk``    FHS VaR/ES table from persisted fits (or ``--refit``)
``riskcli report``  all three stages in order, one combined document

Every command is a pure function of (input files, config, seed): JSON
outputs are byte-identical across reruns.  Exit codes: 0 success,
2 input/config error, 3 every fit failed, 4 missing fit artifacts.

Configuration is a JSON file; command-line flags override file values,
and the ``RISKCLI_SEED`` environment variable is the seed fallback when
neither supplies one.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .diagnostics import correlation_matrix, diagnostics_row
from .errors import ConfigError, RiskEngineError
from .fhs import RiskSpec, basel_consistency, build_risk_report, run_fhs
from .gjr_garch import FitResult, fit
from .market_data import CsvSchema, align_panel, log_returns, parse_price_csv

_PARAM_ROWS = ("mu", "phi", "omega", "alpha", "beta", "gamma", "nu", "m")
_FORMATS = ("text", "csv", "json")


@dataclass(frozen=True)
class AssetSpec:
    asset_id: str
    path: Path
    date_column: str = "date"
    close_column: str = "close"

    @property
    def schema(self) -> CsvSchema:
        return CsvSchema(date_column=self.date_column, close_column=self.close_column)


@dataclass(frozen=True)
class RunConfig:
    assets: tuple[AssetSpec, ...]
    lags: int
    risk: RiskSpec
    output_format: str
    output_dir: Path
    config_text: str
    refit: bool = False

    def __post_init__(self) -> None:
        if not self.assets:
            raise ConfigError("config needs at least one asset")
        if self.lags < 1:
            raise ConfigError(f"lags must be >= 1, got {self.lags}")
        if self.output_format not in _FORMATS:
            raise ConfigError(f"format must be one of {_FORMATS}, got {self.output_format!r}")


def _resolve(base: Path, value: str) -> Path:
    path = Path(value)
    return path if path.is_absolute() else base / path


def load_config(config_path: str | Path, overrides: argparse.Namespace) -> RunConfig:
    """Read the JSON config and apply flag / environment overrides."""
    config_path = Path(config_path)
    try:
        text = config_path.read_text(encoding="utf-8")
        raw = json.loads(text)
    except OSError as exc:
        raise ConfigError(f"cannot read config {config_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {config_path} is not valid JSON: {exc}") from exc

    base = config_path.parent
    assets = []
    for entry in raw.get("assets", []):
        try:
            assets.append(
                AssetSpec(
                    asset_id=str(entry["id"]),
                    path=_resolve(base, entry["path"]),
                    date_column=str(entry.get("date_column", "date")),
                    close_column=str(entry.get("close_column", "close")),
                )
            )
        except KeyError as exc:
            raise ConfigError(f"asset entry {entry} lacks required key {exc}") from exc

    seed = raw.get("seed")
    if overrides.seed is not None:
        seed = overrides.seed
    if seed is None:
        seed = int(os.environ.get("RISKCLI_SEED", "0"))

    levels = raw.get("levels", [0.10, 0.05, 0.025, 0.01])
    if overrides.levels is not None:
        levels = overrides.levels
    try:
        risk = RiskSpec(
            levels=tuple(levels),
            horizon=overrides.horizon if overrides.horizon is not None else int(raw.get("horizon", 10)),
            trials=overrides.trials if overrides.trials is not None else int(raw.get("trials", 100_000)),
            seed=int(seed),
        )
    except (ValueError, RiskEngineError) as exc:
        raise ConfigError(f"invalid risk settings: {exc}") from exc

    return RunConfig(
        assets=tuple(assets),
        lags=int(raw.get("lags", 12)),
        risk=risk,
        output_format=overrides.format or raw.get("format", "text"),
        output_dir=_resolve(base, overrides.output_dir or raw.get("output_dir", ".")),
        config_text=text,
        refit=bool(getattr(overrides, "refit", False)),
    )


def _load_panel(config: RunConfig):
    """Parse, align, and difference every configured asset."""
    prices = [
        parse_price_csv(spec.path, spec.schema, asset_id=spec.asset_id)
        for spec in config.assets
    ]
    return [log_returns(series) for series in align_panel(prices)]


# --- rendering ---------------------------------------------------------------

def _sig5(value: float) -> str:
    return f"{value:.5g}"


def _render_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [
        max(len(str(headers[i])), *(len(row[i]) for row in rows)) if rows else len(headers[i])
        for i in range(len(headers))
    ]
    def line(cells):
        return "  ".join(str(c).rjust(w) for c, w in zip(cells, widths))
    return "\n".join([line(headers)] + [line(r) for r in rows])


def _render_csv(headers: list[str], rows: list[list[str]]) -> str:
    out = [",".join(headers)]
    out.extend(",".join(row) for row in rows)
    return "\n".join(out)


def _emit(config: RunConfig, headers: list[str], rows: list[list[str]], payload: dict, title: str) -> None:
    if config.output_format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    elif config.output_format == "csv":
        print(_render_csv(headers, rows))
    else:
        print(title)
        print(_render_table(headers, rows))


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2), encoding="utf-8")


# --- stats -------------------------------------------------------------------

def _stats_payload(config: RunConfig) -> dict:
    panel = _load_panel(config)
    rows = {s.asset_id: diagnostics_row(s.returns, lags=config.lags) for s in panel}
    corr = correlation_matrix(panel)
    return {
        "assets": {aid: row.to_dict() for aid, row in rows.items()},
        "correlation": corr.to_dict(),
        "lags": config.lags,
    }


_STATS_COLUMNS = (
    ("mean", "mean"), ("std", "std."), ("skewness", "skew."), ("kurtosis", "kurt."),
    ("jb_stat", "J.B."), ("arch_stat", "ARCH"), ("lb_stat", "LB"), ("lb2_stat", "LB-2"),
)


def _stats_rows(payload: dict) -> tuple[list[str], list[list[str]]]:
    headers = ["asset"] + [label for _, label in _STATS_COLUMNS]
    rows = []
    for aid in sorted(payload["assets"]):
        row = payload["assets"][aid]
        rows.append([aid] + [_sig5(row[key]) for key, _ in _STATS_COLUMNS])
    return headers, rows


def cmd_stats(config: RunConfig) -> int:
    payload = _stats_payload(config)
    _write_json(config.output_dir / "stats.json", payload)
    headers, rows = _stats_rows(payload)
    _emit(config, headers, rows, payload, "Descriptive statistics")
    if config.output_format == "text":
        corr = payload["correlation"]
        print("\nCorrelations")
        corr_rows = [
            [aid] + [_sig5(v) for v in vals]
            for aid, vals in zip(corr["asset_ids"], corr["values"])
        ]
        print(_render_table(["asset"] + list(corr["asset_ids"]), corr_rows))
    return 0


# --- fit ---------------------------------------------------------------------

def _fit_path(config: RunConfig, asset_id: str) -> Path:
    return config.output_dir / f"fit_{asset_id}.json"


def _run_fits(config: RunConfig) -> tuple[dict[str, FitResult], dict[str, str]]:
    fits: dict[str, FitResult] = {}
    failures: dict[str, str] = {}
    for series in _load_panel(config):
        try:
            fits[series.asset_id] = fit(series, diagnostic_lags=config.lags)
        except RiskEngineError as exc:
            failures[series.asset_id] = str(exc)
    return fits, failures


def _fit_payload(fits: dict[str, FitResult], failures: dict[str, str]) -> dict:
    return {
        "fits": {aid: result.to_dict() for aid, result in fits.items()},
        "failures": dict(sorted(failures.items())),
    }


def _fit_rows(fits: dict[str, FitResult], failures: dict[str, str]) -> tuple[list[str], list[list[str]]]:
    asset_ids = sorted(fits) + sorted(failures)
    headers = ["param"] + list(asset_ids)
    rows = []
    for name in _PARAM_ROWS:
        row = [name]
        for aid in asset_ids:
            row.append(_sig5(getattr(fits[aid].params, name)) if aid in fits else "failed")
        rows.append(row)
    for label, attr in (("LB(z) p", "lb_p"), ("LB(z^2) p", "lb2_p")):
        row = [label]
        for aid in asset_ids:
            row.append(_sig5(getattr(fits[aid].residual_diagnostics, attr)) if aid in fits else "-")
        rows.append(row)
    converged = ["converged"] + [
        ("yes" if fits[aid].converged else "no") if aid in fits else "-" for aid in asset_ids
    ]
    rows.append(converged)
    return headers, rows


def cmd_fit(config: RunConfig) -> int:
    fits, failures = _run_fits(config)
    for aid, result in fits.items():
        result.save(_fit_path(config, aid))
    payload = _fit_payload(fits, failures)
    _write_json(config.output_dir / "fit_summary.json", payload)
    headers, rows = _fit_rows(fits, failures)
    _emit(config, headers, rows, payload, "GJR(1,1) maximum-likelihood estimates")
    if failures and not fits:
        for aid, message in failures.items():
            print(f"fit failed for {aid}: {message}", file=sys.stderr)
        return 3
    return 0


# --- risk --------------------------------------------------------------------

def _risk_payload(config: RunConfig, fits: dict[str, FitResult]) -> dict:
    reports = {}
    for aid in sorted(fits):
        sample = run_fhs(fits[aid], config.risk)
        report = build_risk_report(aid, sample, config.risk)
        reports[aid] = report
    return {
        "reports": {aid: rep.to_dict() for aid, rep in reports.items()},
        "horizon": config.risk.horizon,
        "trials": config.risk.trials,
        "seed": config.risk.seed,
    }


def _risk_rows(payload: dict) -> tuple[list[str], list[list[str]]]:
    reports = payload["reports"]
    asset_ids = sorted(reports)
    headers = ["measure"] + [f"{aid}(%)" for aid in asset_ids]
    rows = []
    if asset_ids:
        levels = reports[asset_ids[0]]["levels"]
        for level in levels:
            key = repr(level)
            rows.append(
                [f"VaR({level:g})"]
                + [_sig5(100.0 * reports[aid]["var"][key]) for aid in asset_ids]
            )
            rows.append(
                [f"ES({level:g})"]
                + [_sig5(100.0 * reports[aid]["es"][key]) for aid in asset_ids]
            )
        gap_row = ["basel gap"]
        for aid in asset_ids:
            gap = reports[aid]["basel_gap"]
            gap_row.append(_sig5(gap) if gap is not None else "-")
        rows.append(gap_row)
    return headers, rows


def _load_fits(config: RunConfig) -> dict[str, FitResult]:
    fits = {}
    missing = []
    for spec in config.assets:
        path = _fit_path(config, spec.asset_id)
        if path.exists():
            fits[spec.asset_id] = FitResult.load(path)
        else:
            missing.append(str(path))
    if missing:
        raise FileNotFoundError(f"missing fit artifacts: {', '.join(missing)} (use --refit)")
    return fits


def cmd_risk(config: RunConfig) -> int:
    if config.refit:
        fits, failures = _run_fits(config)
        for aid, result in fits.items():
            result.save(_fit_path(config, aid))
        if failures and not fits:
            return 3
    else:
        try:
            fits = _load_fits(config)
        except FileNotFoundError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 4
    payload = _risk_payload(config, fits)
    _write_json(config.output_dir / "risk.json", payload)
    headers, rows = _risk_rows(payload)
    _emit(config, headers, rows, payload, f"{config.risk.horizon}-day VaR and Expected Shortfall")
    return 0


# --- report ------------------------------------------------------------------

def cmd_report(config: RunConfig) -> int:
    stats = _stats_payload(config)
    _write_json(config.output_dir / "stats.json", stats)
    fits, failures = _run_fits(config)
    for aid, result in fits.items():
        result.save(_fit_path(config, aid))
    fit_payload = _fit_payload(fits, failures)
    _write_json(config.output_dir / "fit_summary.json", fit_payload)
    if not fits:
        for aid, message in failures.items():
            print(f"fit failed for {aid}: {message}", file=sys.stderr)
        return 3
    risk = _risk_payload(config, fits)
    _write_json(config.output_dir / "risk.json", risk)

    combined = {
        "seed": config.risk.seed,
        "config_echo": config.config_text,
        "stats": stats,
        "fit": fit_payload,
        "risk": risk,
    }
    _write_json(config.output_dir / "report.json", combined)

    sections = []
    sh, sr = _stats_rows(stats)
    sections.append("Descriptive statistics\n" + _render_table(sh, sr))
    fh, fr = _fit_rows(fits, failures)
    sections.append("GJR(1,1) maximum-likelihood estimates\n" + _render_table(fh, fr))
    rh, rr = _risk_rows(risk)
    sections.append(
        f"{config.risk.horizon}-day VaR and Expected Shortfall "
        f"({config.risk.trials} trials, seed {config.risk.seed})\n"
        + _render_table(rh, rr)
    )
    text = "\n\n".join(sections) + "\n"
    (config.output_dir / "report.txt").write_text(text, encoding="utf-8")
    if config.output_format == "json":
        print(json.dumps(combined, sort_keys=True, indent=2))
    else:
        print(text)
    return 0


# --- entry point -------------------------------------------------------------

def _parse_levels(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad levels {text!r}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riskcli",
        description="GJR-GARCH / filtered-historical-simulation risk reports",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("stats", "descriptive statistics and correlations"),
        ("fit", "maximum-likelihood GJR fits"),
        ("risk", "FHS VaR / Expected Shortfall table"),
        ("report", "full pipeline: stats, fit, risk"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="JSON run configuration")
        cmd.add_argument("--seed", type=int, default=None)
        cmd.add_argument("--trials", type=int, default=None)
        cmd.add_argument("--horizon", type=int, default=None)
        cmd.add_argument("--levels", type=_parse_levels, default=None,
                         help="comma-separated tail levels, e.g. 0.05,0.01")
        cmd.add_argument("--format", choices=_FORMATS, default=None)
        cmd.add_argument("--output-dir", default=None)
        cmd.add_argument("--refit", action="store_true")
    return parser


_COMMANDS = {
    "stats": cmd_stats,
    "fit": cmd_fit,
    "risk": cmd_risk,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config, args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return _COMMANDS[args.command](config)
    except (RiskEngineError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
