"""Symbolic transfer entropy and net information flow between symbol series.

The estimator is the plug-in evaluation, in bits, of

    TE(src -> tgt) = sum p(t1, t0, s0) * log2[ p(t1, t0, s0) p(t0)
                                               / (p(t1, t0) p(t0, s0)) ]

over target-next / target-now / source-now symbol triplets with a single
lag on each side.  By default every probability is a marginal of the one
empirical triplet distribution ("consistent" denominators), which makes
the estimate an empirical conditional mutual information: nonnegative and
exactly zero for a series against itself.  The "literal" mode instead
normalizes each marginal over its own sample count (one more sample for
the contemporaneous pairs than for the triplets); the two differ by
O(1/L) and the literal variant is kept only for comparison.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .symbolize import SymbolSeries
from .timeseries import SectorMeta

DENOMINATOR_MODES = ("consistent", "literal")


@dataclass(frozen=True)
class TripletDistribution:
    """Empirical counts of (target_next, target_now, source_now) triplets."""

    q: int
    counts: dict[tuple[int, int, int], int]
    total: int

    def __post_init__(self):
        if self.total != sum(self.counts.values()):
            raise ValueError("total does not match the summed counts")
        for key in self.counts:
            if any(not 1 <= k <= self.q for k in key):
                raise ValueError(f"triplet {key} outside [1, q]^3")


@dataclass(frozen=True)
class TeMatrix:
    """Pairwise transfer entropies in bits; te[i, j] is flow from i to j."""

    sectors: tuple[SectorMeta, ...]
    te: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "sectors", tuple(self.sectors))
        te = np.asarray(self.te, dtype=np.float64).copy()
        te.setflags(write=False)
        object.__setattr__(self, "te", te)
        n = len(self.sectors)
        if self.te.shape != (n, n):
            raise ValueError("te matrix shape does not match sector count")


@dataclass(frozen=True)
class DaiMatrix:
    """Antisymmetric net information flow: dai[i, j] = te[i, j] - te[j, i]."""

    sectors: tuple[SectorMeta, ...]
    dai: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "sectors", tuple(self.sectors))
        dai = np.asarray(self.dai, dtype=np.float64).copy()
        dai.setflags(write=False)
        object.__setattr__(self, "dai", dai)
        n = len(self.sectors)
        if self.dai.shape != (n, n):
            raise ValueError("dai matrix shape does not match sector count")


def _check_aligned(x: SymbolSeries, y: SymbolSeries) -> None:
    if len(x) != len(y):
        raise ValueError("symbol series differ in length")
    if len(x) < 2:
        raise ValueError("need at least 2 aligned samples")
    if x.dates != y.dates:
        raise ValueError("symbol series are not date-aligned")
    if x.partition.q != y.partition.q:
        raise ValueError("symbol series use different bin counts")


def triplet_distribution(x: SymbolSeries, y: SymbolSeries) -> TripletDistribution:
    """Count (x[t+1], x[t], y[t]) triplets over the aligned sample range."""
    _check_aligned(x, y)
    q = x.partition.q
    triplets = zip(x.symbols[1:].tolist(), x.symbols[:-1].tolist(), y.symbols[:-1].tolist())
    counts: dict[tuple[int, int, int], int] = {}
    for key in triplets:
        counts[key] = counts.get(key, 0) + 1
    return TripletDistribution(q=q, counts=counts, total=len(x) - 1)


def _te_kernel(src: np.ndarray, tgt: np.ndarray, q: int, denominators: str) -> float:
    a = tgt[1:] - 1  # target next
    b = tgt[:-1] - 1  # target now
    c = src[:-1] - 1  # source now
    keys = (a * q + b) * q + c
    n_abc = np.bincount(keys, minlength=q**3).astype(np.float64).reshape(q, q, q)
    n_triplets = float(len(keys))
    mask = n_abc > 0

    if denominators == "consistent":
        n_ab = n_abc.sum(axis=2)
        n_bc = n_abc.sum(axis=0)
        n_b = n_abc.sum(axis=(0, 2))
        ratio = np.ones_like(n_abc)
        np.divide(
            n_abc * n_b[None, :, None],
            n_ab[:, :, None] * n_bc[None, :, :],
            out=ratio,
            where=mask,
        )
        return float(np.sum(n_abc[mask] * np.log2(ratio[mask])) / n_triplets)

    # Literal mode: contemporaneous marginals are taken over the full
    # symbol series, one sample more than the triplet distribution has.
    n_full = float(len(tgt))
    p_abc = n_abc / n_triplets
    p_ab = n_abc.sum(axis=2) / n_triplets
    p_b = np.bincount(tgt - 1, minlength=q).astype(np.float64) / n_full
    pair_keys = (tgt - 1) * q + (src - 1)
    p_bc = np.bincount(pair_keys, minlength=q * q).astype(np.float64).reshape(q, q) / n_full
    ratio = np.ones_like(p_abc)
    np.divide(
        p_abc * p_b[None, :, None],
        p_ab[:, :, None] * p_bc[None, :, :],
        out=ratio,
        where=mask,
    )
    return float(np.sum(p_abc[mask] * np.log2(ratio[mask])))


def transfer_entropy(
    source: SymbolSeries,
    target: SymbolSeries,
    denominators: str = "consistent",
) -> float:
    """Symbolic transfer entropy from ``source`` to ``target``, in bits."""
    if denominators not in DENOMINATOR_MODES:
        raise ValueError(f"denominators must be one of {DENOMINATOR_MODES}")
    _check_aligned(target, source)
    return _te_kernel(source.symbols, target.symbols, target.partition.q, denominators)


def effective_transfer_entropy(
    source: SymbolSeries,
    target: SymbolSeries,
    n_surrogates: int = 100,
    seed: int = 0,
    denominators: str = "consistent",
) -> float:
    """Raw TE minus the mean TE over source-shuffled surrogates.

    Exploratory bias diagnostic only; the pipeline always uses the raw
    plug-in estimate.
    """
    raw = transfer_entropy(source, target, denominators)
    rng = np.random.default_rng(seed)
    q = target.partition.q
    shuffled = source.symbols.copy()
    bias = 0.0
    for _ in range(n_surrogates):
        rng.shuffle(shuffled)
        bias += _te_kernel(shuffled, target.symbols, q, denominators)
    return raw - bias / n_surrogates


def te_matrix(
    all_series: list[SymbolSeries],
    workers: int = 1,
    denominators: str = "consistent",
) -> TeMatrix:
    """Transfer entropy for every ordered sector pair.

    Pairs are independent computations, so the result is bit-identical for
    any ``workers`` count.
    """
    if len(all_series) < 2:
        raise ValueError("need at least 2 series")
    first = all_series[0]
    for s in all_series[1:]:
        _check_aligned(first, s)
    if denominators not in DENOMINATOR_MODES:
        raise ValueError(f"denominators must be one of {DENOMINATOR_MODES}")

    n = len(all_series)
    q = first.partition.q
    te = np.zeros((n, n), dtype=np.float64)
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]

    def compute(pair: tuple[int, int]) -> tuple[int, int, float]:
        i, j = pair
        value = _te_kernel(all_series[i].symbols, all_series[j].symbols, q, denominators)
        return i, j, value

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = pool.map(compute, pairs)
    else:
        results = map(compute, pairs)
    for i, j, value in results:
        te[i, j] = value
    sectors = tuple(s.sector for s in all_series)
    return TeMatrix(sectors=sectors, te=te)


def dai_matrix(te: TeMatrix) -> DaiMatrix:
    """Net information flow for every pair: dai = te - te^T (exact)."""
    return DaiMatrix(sectors=te.sectors, dai=te.te - te.te.T)


def te_matrix_to_csv(m: TeMatrix) -> str:
    """Full-precision CSV dump with sector codes on both axes."""
    codes = [s.code for s in m.sectors]
    lines = ["code," + ",".join(codes)]
    for i, code in enumerate(codes):
        lines.append(code + "," + ",".join(repr(float(v)) for v in m.te[i]))
    return "\n".join(lines) + "\n"
