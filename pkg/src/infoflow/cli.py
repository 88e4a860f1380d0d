"""Command-line entry point: datasets in, report files out.

Three subcommands cover the studies: ``stats`` (per-sector summary table),
``msa`` (whole-sample / yearly / date-range / turmoil arborescences), and
``specificity`` (root-vs-index correlation study).  A JSON config file can
hold any long-form option; explicit flags override file values.  All
outputs are written atomically (temp file + rename) and every command is
deterministic given input bytes, configuration, and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from datetime import date
from pathlib import Path

from . import analysis
from .arborescence import arborescence_to_dot, arborescence_to_json
from .timeseries import (
    DatasetError,
    PriceSeries,
    load_dataset,
    load_sector_names,
    log_returns,
    slice_returns,
    summary_stats,
)

_DEFAULTS = {
    "q": 15,
    "seed": 0,
    "out_dir": ".",
    "format": "csv,json,dot",
    "workers": 1,
    "mode": "whole",
    "orientation": "both",
    "samples": 1,
    "denominators": "consistent",
}

_FORMATS = ("csv", "json", "dot")


class CliError(Exception):
    """Configuration or input problem; maps to exit status 2."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infoflow",
        description="Information-flow network studies over sector price panels",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="wide-format price CSV (date,<code>,...)")
    common.add_argument("--names", help="optional code,name sector metadata CSV")
    common.add_argument("--q", type=int, help="number of discretization bins (default 15)")
    common.add_argument("--seed", type=int, help="seed for any randomized step")
    common.add_argument("--out-dir", dest="out_dir", help="output directory")
    common.add_argument("--format", help="comma list out of csv,json,dot")
    common.add_argument("--workers", type=int, help="parallel workers for pair estimation")
    common.add_argument("--denominators", choices=["consistent", "literal"],
                        help="probability normalization rule for the estimator")
    common.add_argument("--config", help="JSON config file; flags override its values")
    common.add_argument("--report", action="store_true",
                        help="round tables to display precision")

    sub.add_parser("stats", parents=[common],
                   help="per-sector return summary statistics")

    msa = sub.add_parser("msa", parents=[common],
                         help="maximum spanning arborescences and flow paths")
    msa.add_argument("--mode", choices=["whole", "yearly", "range", "turmoil"])
    msa.add_argument("--from", dest="date_from", help="range mode start date (ISO)")
    msa.add_argument("--to", dest="date_to", help="range mode end date (ISO)")
    msa.add_argument("--crash-start", dest="crash_start", help="turmoil crash start (ISO)")
    msa.add_argument("--crash-end", dest="crash_end", help="turmoil crash end (ISO)")
    msa.add_argument("--orientation", choices=["out", "in", "both"])
    msa.add_argument("--global-partition", dest="global_partition", action="store_true",
                     help="reuse whole-sample bin edges in every window")

    spc = sub.add_parser("specificity", parents=[common],
                         help="root-sector vs index correlation study")
    spc.add_argument("--index", help="index price CSV aligned with the dataset")
    spc.add_argument("--samples", type=int, help="control draws per year (default 1)")

    return parser


def _merge_config(args: argparse.Namespace) -> dict:
    """Layer resolution: hard defaults, then config file, then explicit flags."""
    merged = dict(_DEFAULTS)
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise CliError("config file not found")
        try:
            file_values = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise CliError(f"invalid config file: {exc}") from exc
        if not isinstance(file_values, dict):
            raise CliError("config file must hold a JSON object")
        merged.update(file_values)
    for key, value in vars(args).items():
        if key in ("command", "config"):
            continue
        if value is not None and value is not False:
            merged[key] = value
    return merged


def _parse_date(value, flag: str) -> date:
    if isinstance(value, date):
        return value
    try:
        return date.fromisoformat(str(value))
    except ValueError as exc:
        raise CliError(f"{flag} must be an ISO-8601 date") from exc


def _formats(cfg: dict) -> set[str]:
    requested = {f.strip() for f in str(cfg["format"]).split(",") if f.strip()}
    unknown = requested - set(_FORMATS)
    if unknown:
        raise CliError(f"unknown format(s): {', '.join(sorted(unknown))}")
    if not requested:
        raise CliError("no output format selected")
    return requested


def _orientations(cfg: dict) -> list[str]:
    sel = cfg.get("orientation", "both")
    return {
        "out": ["outgoing"],
        "in": ["incoming"],
        "both": ["outgoing", "incoming"],
    }[sel]


def _load_input(cfg: dict) -> list[PriceSeries]:
    if not cfg.get("input"):
        raise CliError("--input is required")
    names = None
    if cfg.get("names"):
        names = load_sector_names(cfg["names"])
    return load_dataset(cfg["input"], names=names)


def _write(out_dir: Path, filename: str, text: str) -> Path:
    """Atomic write: publish the file only once its contents are complete."""
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / filename
    fd, tmp = tempfile.mkstemp(dir=out_dir, prefix=f".{filename}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return target


def _cmd_stats(cfg: dict) -> list[Path]:
    dataset = _load_input(cfg)
    formats = _formats(cfg)
    out_dir = Path(cfg["out_dir"])
    report = bool(cfg.get("report"))
    rows = [(p.sector, summary_stats(log_returns(p))) for p in dataset]

    written = []
    if "csv" in formats:
        written.append(_write(out_dir, "summary_stats.csv",
                              _render_stats_csv(rows, report)))
    if "json" in formats:
        written.append(_write(out_dir, "summary_stats.json", _render_stats_json(rows)))
    return written


def _render_stats_csv(rows, report_mode: bool) -> str:
    if report_mode:
        lines = ["symbol,sector,mean_x1000,max,min,std,skewness,kurtosis,jb"]
        for sector, s in rows:
            lines.append(
                f"{sector.short_code},{sector.name},{s.mean * 1e3:.3f},{s.max:.3f},"
                f"{s.min:.3f},{s.std:.3f},{s.skewness:.3f},{s.kurtosis:.3f},"
                f"{s.jb_statistic:.1f}"
            )
    else:
        lines = ["symbol,sector,mean,max,min,std,skewness,kurtosis,jb,jb_reject_1pct"]
        for sector, s in rows:
            lines.append(
                f"{sector.short_code},{sector.name},{s.mean!r},{s.max!r},{s.min!r},"
                f"{s.std!r},{s.skewness!r},{s.kurtosis!r},{s.jb_statistic!r},"
                f"{str(s.jb_reject_at_1pct).lower()}"
            )
    return "\n".join(lines) + "\n"


def _render_stats_json(rows) -> str:
    payload = [
        {
            "code": sector.code,
            "symbol": sector.short_code,
            "name": sector.name,
            "mean": s.mean,
            "max": s.max,
            "min": s.min,
            "std": s.std,
            "skewness": s.skewness,
            "kurtosis": s.kurtosis,
            "jb_statistic": s.jb_statistic,
            "jb_reject_at_1pct": s.jb_reject_at_1pct,
        }
        for sector, s in rows
    ]
    return json.dumps(payload, indent=2) + "\n"


def _emit_bundle(
    out_dir: Path,
    formats: set[str],
    orientations: list[str],
    bundle: analysis.MsaBundle,
    stem: str,
    report: bool,
) -> list[Path]:
    written = []
    if "csv" in formats:
        written.append(_write(out_dir, f"{stem}.csv",
                              analysis.render_msa_bundle_csv(
                                  bundle, stem, report, tuple(orientations))))
    for orientation in orientations:
        arb = bundle.arborescence(orientation)
        path = bundle.path(orientation)
        if "json" in formats:
            written.append(_write(out_dir, f"{stem}_{orientation}.json",
                                  arborescence_to_json(arb, path)))
        if "dot" in formats:
            written.append(_write(out_dir, f"{stem}_{orientation}.dot",
                                  arborescence_to_dot(arb, path, name=stem)))
    return written


def _cmd_msa(cfg: dict) -> list[Path]:
    mode = cfg.get("mode", "whole")
    if mode not in ("whole", "yearly", "range", "turmoil"):
        raise CliError(f"unknown mode: {mode}")
    formats = _formats(cfg)
    orientations = _orientations(cfg)
    out_dir = Path(cfg["out_dir"])
    report = bool(cfg.get("report"))
    q = int(cfg["q"])
    workers = int(cfg["workers"])
    denominators = str(cfg["denominators"])

    if mode == "turmoil" and not (cfg.get("crash_start") and cfg.get("crash_end")):
        raise CliError("turmoil mode requires --crash-start and --crash-end")
    if mode == "range" and not (cfg.get("date_from") and cfg.get("date_to")):
        raise CliError("range mode requires --from and --to")

    dataset = _load_input(cfg)
    written: list[Path] = []

    if mode in ("whole", "range"):
        returns = analysis.returns_panel(dataset)
        stem = "msa_whole"
        if mode == "range":
            window = (
                _parse_date(cfg["date_from"], "--from"),
                _parse_date(cfg["date_to"], "--to"),
            )
            returns = [slice_returns(r, window) for r in returns]
            stem = "msa_range"
        bundle = analysis.msas_from_returns(returns, q, workers, denominators)
        written += _emit_bundle(out_dir, formats, orientations, bundle, stem, report)

    elif mode == "yearly":
        reports = analysis.yearly_reports(
            dataset, q, workers, denominators,
            global_partition=bool(cfg.get("global_partition")),
        )
        for orientation in orientations:
            if "csv" in formats:
                written.append(_write(
                    out_dir, f"yearly_{orientation}.csv",
                    analysis.render_yearly_csv(reports[orientation], report),
                ))
                heatmap = analysis.degree_heatmap(reports[orientation])
                written.append(_write(
                    out_dir, f"degree_heatmap_{orientation}.csv",
                    analysis.render_degree_heatmap_csv(heatmap, kind="total"),
                ))
            if "dot" in formats:
                for r in reports[orientation]:
                    written.append(_write(
                        out_dir, f"msa_{r.year}_{orientation}.dot",
                        arborescence_to_dot(r.arborescence, r.path,
                                            name=f"msa_{r.year}"),
                    ))
        if "csv" in formats:
            written.append(_write(out_dir, "root_occurrences.csv",
                                  analysis.render_root_occurrences_csv(
                                      reports, tuple(orientations))))
        if "json" in formats:
            written.append(_write(out_dir, "yearly_reports.json",
                                  analysis.render_yearly_json(
                                      reports, tuple(orientations))))

    else:  # turmoil
        study = analysis.turmoil_study(
            dataset, q,
            _parse_date(cfg["crash_start"], "--crash-start"),
            _parse_date(cfg["crash_end"], "--crash-end"),
            workers, denominators,
        )
        if "csv" in formats:
            written.append(_write(out_dir, "turmoil.csv",
                                  analysis.render_turmoil_csv(study, report)))
        if "json" in formats:
            written.append(_write(out_dir, "turmoil.json",
                                  analysis.render_turmoil_json(study)))
        if "dot" in formats:
            for result in study.results:
                for orientation in orientations:
                    written.append(_write(
                        out_dir, f"turmoil_{result.label}_{orientation}.dot",
                        arborescence_to_dot(
                            result.msas.arborescence(orientation),
                            result.msas.path(orientation),
                            name=f"turmoil_{result.label}",
                        ),
                    ))
    return written


def _cmd_specificity(cfg: dict) -> list[Path]:
    if not cfg.get("index"):
        raise CliError("--index is required for the specificity study")
    formats = _formats(cfg)
    out_dir = Path(cfg["out_dir"])
    q = int(cfg["q"])
    workers = int(cfg["workers"])
    denominators = str(cfg["denominators"])

    dataset = _load_input(cfg)
    index_panel = load_dataset(cfg["index"])
    reports = analysis.yearly_reports(dataset, q, workers, denominators)
    result = analysis.specificity_study(
        dataset, reports, index_panel[0],
        seed=int(cfg["seed"]), samples=int(cfg["samples"]),
    )
    written = []
    if "csv" in formats:
        written.append(_write(out_dir, "specificity.csv",
                              analysis.render_specificity_csv(result)))
    if "json" in formats:
        written.append(_write(out_dir, "specificity.json",
                              analysis.render_specificity_json(result)))
    return written


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
        if args.command == "stats":
            written = _cmd_stats(cfg)
        elif args.command == "msa":
            written = _cmd_msa(cfg)
        else:
            written = _cmd_specificity(cfg)
    except (CliError, DatasetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
