"""Windowed structural studies over the information-flow pipeline.

Every study runs the same chain (returns -> symbols -> transfer entropy ->
net flows -> network -> both arborescences -> maximal paths) over some
date window: the whole sample, calendar years, or event windows around a
market crash.  Partitions are recomputed per window by default so each
window's symbol alphabet covers its own observed range; pass
``global_partition=True`` to reuse the whole-sample bin edges instead.
"""

from __future__ import annotations

import json
import math
import warnings
from bisect import bisect_left
from dataclasses import dataclass
from datetime import date

import numpy as np

from .arborescence import (
    Arborescence,
    InfoFlowPath,
    degrees,
    max_spanning_arborescence,
    maximal_information_flow_path,
)
from .entropy import dai_matrix, te_matrix
from .network import build_network
from .symbolize import DEFAULT_Q, Partition, encode, make_partition
from .timeseries import (
    PriceSeries,
    ReturnSeries,
    SectorMeta,
    log_returns,
    slice_returns,
)

# Calendar years shorter than this many trading days are skipped: the
# estimator has nothing to say about a handful of samples.
MIN_YEAR_DAYS = 30

_WINDOW_RULE = (
    "during = [crash_start - T, crash_start + T) trading days, T = crash length; "
    "before/after are adjacent windows of the same length"
)


@dataclass(frozen=True)
class MsaBundle:
    """Both arborescences of one window plus their maximal flow paths."""

    outgoing: Arborescence
    incoming: Arborescence
    outgoing_path: InfoFlowPath
    incoming_path: InfoFlowPath

    def arborescence(self, orientation: str) -> Arborescence:
        return self.outgoing if orientation == "outgoing" else self.incoming

    def path(self, orientation: str) -> InfoFlowPath:
        return self.outgoing_path if orientation == "outgoing" else self.incoming_path


@dataclass(frozen=True)
class YearlyMsaReport:
    """One calendar year, one orientation: root, maximal path, and tree."""

    year: int
    orientation: str
    root: SectorMeta
    path: InfoFlowPath
    path_dai_bits: float
    arborescence: Arborescence

    @property
    def path_sector_count(self) -> int:
        return self.path.length

    @property
    def path_dai_x100(self) -> float:
        """Path weight in the display unit of the report tables (bits * 100)."""
        return self.path_dai_bits * 100.0


@dataclass(frozen=True)
class TurmoilWindows:
    """Event windows around a crash, in trading-day index space."""

    crash_start: date
    crash_end: date
    crash_days: int
    before: tuple[date, date]
    during: tuple[date, date]
    after: tuple[date, date]

    @property
    def window_days(self) -> int:
        """Trading days per window: T before the crash start plus T after."""
        return 2 * self.crash_days


@dataclass(frozen=True)
class WindowResult:
    label: str
    interval: tuple[date, date]
    msas: MsaBundle
    root_degree: dict[str, int]
    path_weight: dict[str, float]


@dataclass(frozen=True)
class TurmoilStudy:
    windows: TurmoilWindows
    q: int
    results: tuple[WindowResult, ...]  # before, during, after

    def result(self, label: str) -> WindowResult:
        for r in self.results:
            if r.label == label:
                return r
        raise KeyError(label)


@dataclass(frozen=True)
class DegreeHeatmap:
    """Per-year, per-sector arborescence degrees for one orientation."""

    orientation: str
    years: tuple[int, ...]
    codes: tuple[str, ...]
    in_degree: np.ndarray
    out_degree: np.ndarray
    total_degree: np.ndarray


@dataclass(frozen=True)
class SpecificityResult:
    """Root-vs-index correlations against a random non-root control group."""

    seed: int
    samples_per_year: int
    years: tuple[int, ...]
    source_roots: tuple[str, ...]
    source_correlations: tuple[float, ...]
    sink_roots: tuple[str, ...]
    sink_correlations: tuple[float, ...]
    control_sectors: tuple[tuple[str, ...], ...]
    control_correlations: tuple[tuple[float, ...], ...]

    @property
    def source_mean(self) -> float:
        return math.fsum(self.source_correlations) / len(self.source_correlations)

    @property
    def sink_mean(self) -> float:
        return math.fsum(self.sink_correlations) / len(self.sink_correlations)

    @property
    def control_mean(self) -> float:
        flat = [c for year in self.control_correlations for c in year]
        return math.fsum(flat) / len(flat)


def returns_panel(dataset: list[PriceSeries]) -> list[ReturnSeries]:
    """Log returns for every sector; all series must share one date axis."""
    if len(dataset) < 2:
        raise ValueError("need at least 2 sectors")
    dates = dataset[0].dates
    for p in dataset[1:]:
        if p.dates != dates:
            raise ValueError("price series are not date-aligned")
    return [log_returns(p) for p in dataset]


def msas_from_returns(
    returns: list[ReturnSeries],
    q: int = DEFAULT_Q,
    workers: int = 1,
    denominators: str = "consistent",
    partitions: list[Partition] | None = None,
) -> MsaBundle:
    """Run the estimation pipeline on one aligned window of returns."""
    if partitions is None:
        symbols = [encode(r, make_partition(r, q)) for r in returns]
    else:
        symbols = [encode(r, p) for r, p in zip(returns, partitions)]
    dai = dai_matrix(te_matrix(symbols, workers=workers, denominators=denominators))
    net = build_network(dai)
    outgoing = max_spanning_arborescence(net, "outgoing")
    incoming = max_spanning_arborescence(net, "incoming")
    return MsaBundle(
        outgoing=outgoing,
        incoming=incoming,
        outgoing_path=maximal_information_flow_path(outgoing),
        incoming_path=maximal_information_flow_path(incoming),
    )


def whole_sample_msas(
    dataset: list[PriceSeries],
    q: int = DEFAULT_Q,
    workers: int = 1,
    denominators: str = "consistent",
) -> MsaBundle:
    """Whole-sample pipeline: both arborescences plus their maximal paths."""
    return msas_from_returns(returns_panel(dataset), q, workers, denominators)


def yearly_reports(
    dataset: list[PriceSeries],
    q: int = DEFAULT_Q,
    workers: int = 1,
    denominators: str = "consistent",
    global_partition: bool = False,
    min_days: int = MIN_YEAR_DAYS,
) -> dict[str, list[YearlyMsaReport]]:
    """Per-calendar-year pipeline runs, keyed by orientation.

    Years with fewer than ``min_days`` trading days are skipped with a
    warning.  ``global_partition`` reuses whole-sample bin edges for every
    year instead of the default per-year recomputation.
    """
    returns = returns_panel(dataset)
    partitions = [make_partition(r, q) for r in returns] if global_partition else None
    years = sorted({d.year for d in returns[0].dates})
    reports: dict[str, list[YearlyMsaReport]] = {"outgoing": [], "incoming": []}
    for year in years:
        window = (date(year, 1, 1), date(year, 12, 31))
        n_days = sum(1 for d in returns[0].dates if window[0] <= d <= window[1])
        if n_days < min_days:
            warnings.warn(f"skipping year {year}: only {n_days} trading day(s)",
                          stacklevel=2)
            continue
        sliced = [slice_returns(r, window) for r in returns]
        bundle = msas_from_returns(sliced, q, workers, denominators, partitions)
        for orientation in ("outgoing", "incoming"):
            arb = bundle.arborescence(orientation)
            path = bundle.path(orientation)
            reports[orientation].append(
                YearlyMsaReport(
                    year=year,
                    orientation=orientation,
                    root=arb.sectors[arb.root],
                    path=path,
                    path_dai_bits=path.total_weight,
                    arborescence=arb,
                )
            )
    return reports


def root_occurrences(reports: list[YearlyMsaReport]) -> dict[str, int]:
    """How often each sector appears as the root across the given reports."""
    counts: dict[str, int] = {}
    for report in reports:
        counts[report.root.code] = counts.get(report.root.code, 0) + 1
    return counts


def degree_heatmap(reports: list[YearlyMsaReport]) -> DegreeHeatmap:
    """Year-by-sector degree table over one orientation's yearly trees."""
    if not reports:
        raise ValueError("no reports")
    orientations = {r.orientation for r in reports}
    if len(orientations) != 1:
        raise ValueError("reports mix orientations")
    sectors = reports[0].arborescence.sectors
    codes = tuple(s.code for s in sectors)
    years = tuple(r.year for r in reports)
    shape = (len(reports), len(codes))
    in_deg = np.zeros(shape, dtype=np.int64)
    out_deg = np.zeros(shape, dtype=np.int64)
    for row, report in enumerate(reports):
        deg = degrees(report.arborescence)
        for col, code in enumerate(codes):
            i, o, _ = deg[code]
            in_deg[row, col] = i
            out_deg[row, col] = o
    return DegreeHeatmap(
        orientation=orientations.pop(),
        years=years,
        codes=codes,
        in_degree=in_deg,
        out_degree=out_deg,
        total_degree=in_deg + out_deg,
    )


def turmoil_study(
    dataset: list[PriceSeries],
    q: int,
    crash_start: date,
    crash_end: date,
    workers: int = 1,
    denominators: str = "consistent",
) -> TurmoilStudy:
    """Pipeline over the before/during/after windows around one crash.

    T is the number of trading days inside [crash_start, crash_end]; the
    during window covers the 2T trading days centered on the crash start,
    with equally long adjacent control windows on both sides.
    """
    if crash_start > crash_end:
        raise ValueError("crash_start must not be after crash_end")
    returns = returns_panel(dataset)
    dates = returns[0].dates
    t_len = sum(1 for d in dates if crash_start <= d <= crash_end)
    if t_len == 0:
        raise ValueError("no trading days inside the crash interval")
    i0 = bisect_left(dates, crash_start)
    spans = {
        "before": (i0 - 3 * t_len, i0 - t_len),
        "during": (i0 - t_len, i0 + t_len),
        "after": (i0 + t_len, i0 + 3 * t_len),
    }
    if spans["before"][0] < 0 or spans["after"][1] > len(dates):
        raise ValueError("dataset does not cover all turmoil windows")

    intervals = {
        label: (dates[lo], dates[hi - 1]) for label, (lo, hi) in spans.items()
    }
    windows = TurmoilWindows(
        crash_start=crash_start,
        crash_end=crash_end,
        crash_days=t_len,
        before=intervals["before"],
        during=intervals["during"],
        after=intervals["after"],
    )

    results = []
    for label in ("before", "during", "after"):
        lo, hi = spans[label]
        sliced = [
            ReturnSeries(r.sector, r.dates[lo:hi], r.values[lo:hi]) for r in returns
        ]
        bundle = msas_from_returns(sliced, q, workers, denominators)
        root_degree = {}
        path_weight = {}
        for orientation in ("outgoing", "incoming"):
            arb = bundle.arborescence(orientation)
            root_code = arb.sectors[arb.root].code
            root_degree[orientation] = degrees(arb)[root_code][2]
            path_weight[orientation] = bundle.path(orientation).total_weight
        results.append(
            WindowResult(
                label=label,
                interval=intervals[label],
                msas=bundle,
                root_degree=root_degree,
                path_weight=path_weight,
            )
        )
    return TurmoilStudy(windows=windows, q=q, results=tuple(results))


def pearson(x, y) -> float:
    """Pearson correlation of two equal-length, non-constant sequences."""
    xv = np.asarray(x, dtype=np.float64)
    yv = np.asarray(y, dtype=np.float64)
    if xv.shape != yv.shape or xv.ndim != 1:
        raise ValueError("inputs must be equal-length 1-D sequences")
    if len(xv) < 2:
        raise ValueError("need at least 2 observations")
    xc = xv - xv.mean()
    yc = yv - yv.mean()
    # Single square root of the product so that y == x yields exactly 1.0.
    den = math.sqrt(float((xc**2).sum()) * float((yc**2).sum()))
    if den == 0.0:
        raise ValueError("zero variance")
    rho = float((xc * yc).sum()) / den
    return max(-1.0, min(1.0, rho))


def specificity_study(
    dataset: list[PriceSeries],
    reports: dict[str, list[YearlyMsaReport]],
    index: PriceSeries,
    seed: int,
    samples: int = 1,
) -> SpecificityResult:
    """Correlate each year's root sectors with the market index.

    For every year that has both an outgoing and an incoming report, the
    daily returns of the source root and the sink root are correlated with
    the index returns within that year.  A control group of ``samples``
    uniformly drawn non-root sectors per year (excluding both roots, PCG64
    seeded with ``seed``) provides the comparison distribution.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    returns = returns_panel(dataset)
    index_returns = log_returns(index)
    if index_returns.dates != returns[0].dates:
        raise ValueError("index series not aligned with dataset")

    out_by_year = {r.year: r for r in reports.get("outgoing", [])}
    in_by_year = {r.year: r for r in reports.get("incoming", [])}
    years = sorted(set(out_by_year) & set(in_by_year))
    if not years:
        raise ValueError("no years with reports for both orientations")

    by_code = {r.sector.code: r for r in returns}
    rng = np.random.default_rng(seed)

    source_roots, source_corr = [], []
    sink_roots, sink_corr = [], []
    control_sectors, control_corr = [], []
    for year in years:
        window = (date(year, 1, 1), date(year, 12, 31))
        idx_slice = slice_returns(index_returns, window)

        def year_corr(code: str) -> float:
            return pearson(slice_returns(by_code[code], window).values, idx_slice.values)

        src = out_by_year[year].root.code
        snk = in_by_year[year].root.code
        source_roots.append(src)
        source_corr.append(year_corr(src))
        sink_roots.append(snk)
        sink_corr.append(year_corr(snk))

        candidates = sorted(code for code in by_code if code not in {src, snk})
        if samples > len(candidates):
            raise ValueError("more control samples requested than non-root sectors")
        picks = rng.choice(len(candidates), size=samples, replace=False)
        chosen = tuple(candidates[k] for k in picks.tolist())
        control_sectors.append(chosen)
        control_corr.append(tuple(year_corr(code) for code in chosen))

    return SpecificityResult(
        seed=seed,
        samples_per_year=samples,
        years=tuple(years),
        source_roots=tuple(source_roots),
        source_correlations=tuple(source_corr),
        sink_roots=tuple(sink_roots),
        sink_correlations=tuple(sink_corr),
        control_sectors=tuple(control_sectors),
        control_correlations=tuple(control_corr),
    )


# ---------------------------------------------------------------------------
# Report rendering (plot-ready CSV and JSON; files are written by callers)

def _fmt(value: float, report_mode: bool, digits: int = 2) -> str:
    return f"{value:.{digits}f}" if report_mode else repr(float(value))


def _path_str(path: InfoFlowPath) -> str:
    return "->".join(path.codes)


def render_yearly_csv(reports: list[YearlyMsaReport], report_mode: bool = False) -> str:
    """Year / root / maximal path / sector count / path weight (x100) table."""
    lines = ["year,root_sector,maximal_information_path,n_sectors,dai_x100"]
    for r in reports:
        lines.append(
            f"{r.year},{r.root.short_code},{_path_str(r.path)},"
            f"{r.path_sector_count},{_fmt(r.path_dai_x100, report_mode)}"
        )
    return "\n".join(lines) + "\n"


def render_root_occurrences_csv(
    reports: dict[str, list[YearlyMsaReport]],
    orientations: tuple[str, ...] = ("outgoing", "incoming"),
) -> str:
    lines = ["orientation,sector,count"]
    for orientation in orientations:
        counts = root_occurrences(reports.get(orientation, []))
        short = {code: code[-3:] for code in counts}
        for code in sorted(counts):
            lines.append(f"{orientation},{short[code]},{counts[code]}")
    return "\n".join(lines) + "\n"


def render_degree_heatmap_csv(hm: DegreeHeatmap, kind: str = "total") -> str:
    """One row per year, one column per sector; values are tree degrees."""
    table = {
        "in": hm.in_degree,
        "out": hm.out_degree,
        "total": hm.total_degree,
    }.get(kind)
    if table is None:
        raise ValueError("kind must be 'in', 'out', or 'total'")
    short = [code[-3:] for code in hm.codes]
    lines = ["year," + ",".join(short)]
    for row, year in enumerate(hm.years):
        lines.append(f"{year}," + ",".join(str(int(v)) for v in table[row]))
    return "\n".join(lines) + "\n"


def render_yearly_json(
    reports: dict[str, list[YearlyMsaReport]],
    orientations: tuple[str, ...] = ("outgoing", "incoming"),
) -> str:
    payload = {}
    for orientation in orientations:
        payload[orientation] = [
            {
                "year": r.year,
                "root": r.root.code,
                "path": list(r.path.codes),
                "n_sectors": r.path_sector_count,
                "dai_bits": r.path_dai_bits,
                "dai_x100": r.path_dai_x100,
                "edges": [
                    {
                        "source": r.arborescence.sectors[i].code,
                        "target": r.arborescence.sectors[j].code,
                        "weight_bits": w,
                    }
                    for i, j, w in r.arborescence.edges
                ],
            }
            for r in reports.get(orientation, [])
        ]
    return json.dumps(payload, indent=2) + "\n"


def render_turmoil_csv(study: TurmoilStudy, report_mode: bool = False) -> str:
    lines = [
        "window,start,end,orientation,root_sector,root_degree,"
        "path_sectors,path_weight_bits"
    ]
    for r in study.results:
        for orientation in ("outgoing", "incoming"):
            arb = r.msas.arborescence(orientation)
            lines.append(
                f"{r.label},{r.interval[0].isoformat()},{r.interval[1].isoformat()},"
                f"{orientation},{arb.sectors[arb.root].short_code},"
                f"{r.root_degree[orientation]},{r.msas.path(orientation).length},"
                f"{_fmt(r.path_weight[orientation], report_mode, digits=4)}"
            )
    return "\n".join(lines) + "\n"


def render_turmoil_json(study: TurmoilStudy) -> str:
    payload = {
        "crash_start": study.windows.crash_start.isoformat(),
        "crash_end": study.windows.crash_end.isoformat(),
        "crash_trading_days": study.windows.crash_days,
        "window_trading_days": study.windows.window_days,
        "window_rule": _WINDOW_RULE,
        "q": study.q,
        "windows": {},
    }
    for r in study.results:
        entry = {
            "start": r.interval[0].isoformat(),
            "end": r.interval[1].isoformat(),
        }
        for orientation in ("outgoing", "incoming"):
            arb = r.msas.arborescence(orientation)
            path = r.msas.path(orientation)
            entry[orientation] = {
                "root": arb.sectors[arb.root].code,
                "root_degree": r.root_degree[orientation],
                "total_weight_bits": arb.total_weight,
                "path": list(path.codes),
                "path_weight_bits": path.total_weight,
            }
        payload["windows"][r.label] = entry
    return json.dumps(payload, indent=2) + "\n"


def render_specificity_csv(result: SpecificityResult) -> str:
    lines = [
        f"# seed={result.seed} samples_per_year={result.samples_per_year}",
        "year,kind,sector,correlation",
    ]
    for k, year in enumerate(result.years):
        lines.append(
            f"{year},source,{result.source_roots[k][-3:]},"
            f"{repr(result.source_correlations[k])}"
        )
        lines.append(
            f"{year},sink,{result.sink_roots[k][-3:]},"
            f"{repr(result.sink_correlations[k])}"
        )
        for code, rho in zip(result.control_sectors[k], result.control_correlations[k]):
            lines.append(f"{year},control,{code[-3:]},{repr(rho)}")
    return "\n".join(lines) + "\n"


def render_specificity_json(result: SpecificityResult) -> str:
    payload = {
        "seed": result.seed,
        "samples_per_year": result.samples_per_year,
        "years": list(result.years),
        "source": {
            "roots": list(result.source_roots),
            "correlations": list(result.source_correlations),
            "mean": result.source_mean,
        },
        "sink": {
            "roots": list(result.sink_roots),
            "correlations": list(result.sink_correlations),
            "mean": result.sink_mean,
        },
        "control": {
            "sectors": [list(s) for s in result.control_sectors],
            "correlations": [list(c) for c in result.control_correlations],
            "mean": result.control_mean,
        },
    }
    return json.dumps(payload, indent=2) + "\n"


def render_msa_bundle_csv(
    bundle: MsaBundle,
    label: str,
    report_mode: bool = False,
    orientations: tuple[str, ...] = ("outgoing", "incoming"),
) -> str:
    lines = ["window,orientation,root_sector,maximal_information_path,n_sectors,dai_x100"]
    for orientation in orientations:
        arb = bundle.arborescence(orientation)
        path = bundle.path(orientation)
        lines.append(
            f"{label},{orientation},{arb.sectors[arb.root].short_code},"
            f"{_path_str(path)},{path.length},"
            f"{_fmt(path.total_weight * 100.0, report_mode)}"
        )
    return "\n".join(lines) + "\n"
