import math
from datetime import date

import numpy as np
import pytest

from conftest import make_prices, make_returns
from oracles import log_returns_mpmath, stats_mpmath

from infoflow.timeseries import (
    JB_CRITICAL_1PCT,
    DatasetError,
    PriceSeries,
    SectorMeta,
    load_dataset,
    load_sector_names,
    log_returns,
    slice_returns,
    summary_stats,
)


def write_csv(tmp_path, text, name="prices.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadDataset:
    def test_three_rows_two_sectors(self, tmp_path):
        path = write_csv(
            tmp_path,
            "date,801010,801020\n"
            "2000-01-04,10.0,20.0\n"
            "2000-01-05,10.5,19.5\n"
            "2000-01-06,11.0,21.0\n",
        )
        series = load_dataset(path)
        assert len(series) == 2
        assert [s.sector.code for s in series] == ["801010", "801020"]
        assert all(len(s) == 3 for s in series)
        assert series[0].dates == series[1].dates

    def test_missing_cell_drops_row_for_all(self, tmp_path):
        path = write_csv(
            tmp_path,
            "date,801010,801020\n"
            "2000-01-04,10.0,20.0\n"
            "2000-01-05,,19.5\n"
            "2000-01-06,11.0,21.0\n",
        )
        with pytest.warns(UserWarning, match="dropped 1 row"):
            series = load_dataset(path)
        assert all(len(s) == 2 for s in series)
        assert series[0].dates == (date(2000, 1, 4), date(2000, 1, 6))

    def test_malformed_header(self, tmp_path):
        path = write_csv(tmp_path, "day,801010\n2000-01-04,10.0\n")
        with pytest.raises(DatasetError, match="header"):
            load_dataset(path)

    def test_duplicate_codes(self, tmp_path):
        path = write_csv(tmp_path, "date,801010,801010\n2000-01-04,10.0,11.0\n")
        with pytest.raises(DatasetError, match="duplicate"):
            load_dataset(path)

    def test_non_positive_price(self, tmp_path):
        path = write_csv(
            tmp_path,
            "date,801010\n2000-01-04,10.0\n2000-01-05,-1.0\n",
        )
        with pytest.raises(DatasetError, match="non-positive"):
            load_dataset(path)

    def test_non_monotone_dates(self, tmp_path):
        path = write_csv(
            tmp_path,
            "date,801010\n2000-01-05,10.0\n2000-01-04,10.5\n",
        )
        with pytest.raises(DatasetError, match="increasing"):
            load_dataset(path)

    def test_non_iso_date(self, tmp_path):
        path = write_csv(tmp_path, "date,801010\n04/01/2000,10.0\n2000-01-05,10.5\n")
        with pytest.raises(DatasetError, match="ISO-8601"):
            load_dataset(path)

    def test_too_few_rows_after_drop(self, tmp_path):
        path = write_csv(
            tmp_path,
            "date,801010,801020\n"
            "2000-01-04,10.0,20.0\n"
            "2000-01-05,,19.5\n",
        )
        with pytest.raises(DatasetError, match="fewer than 2"), pytest.warns(UserWarning):
            load_dataset(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DatasetError, match="input not found"):
            load_dataset(tmp_path / "nope.csv")

    def test_names_metadata(self, tmp_path):
        meta = write_csv(tmp_path, "code,name\n801010,Agriculture\n", name="names.csv")
        path = write_csv(
            tmp_path,
            "date,801010\n2000-01-04,10.0\n2000-01-05,10.5\n",
        )
        names = load_sector_names(meta)
        series = load_dataset(path, names=names)
        assert series[0].sector.name == "Agriculture"
        assert series[0].sector.short_code == "010"

    def test_large_panel_roundtrip(self, tmp_path, rng):
        n_rows, n_cols = 300, 7
        codes = [f"8010{k:02d}" for k in range(1, n_cols + 1)]
        lines = ["date," + ",".join(codes)]
        day = np.datetime64("2000-01-03")
        closes = np.exp(rng.normal(0, 0.02, size=(n_rows, n_cols)).cumsum(axis=0)) * 50
        for t in range(n_rows):
            lines.append(str(day + t) + "," + ",".join(repr(float(v)) for v in closes[t]))
        path = write_csv(tmp_path, "\n".join(lines) + "\n")
        series = load_dataset(path)
        assert len(series) == n_cols
        assert all(len(s) == n_rows for s in series)
        np.testing.assert_array_equal(series[3].closes, closes[:, 3])


class TestLogReturns:
    def test_constant_prices(self):
        r = log_returns(make_prices([5.0, 5.0, 5.0]))
        np.testing.assert_array_equal(r.values, [0.0, 0.0])
        assert len(r.dates) == 2

    def test_unit_e_step(self):
        r = log_returns(make_prices([1.0, math.e]))
        assert r.values[0] == pytest.approx(1.0, abs=1e-15)

    def test_dates_shift_to_later_close(self):
        p = make_prices([1.0, 2.0, 3.0])
        r = log_returns(p)
        assert r.dates == p.dates[1:]

    def test_matches_high_precision_oracle(self, rng):
        closes = np.exp(rng.normal(0, 0.05, 100).cumsum()) * 30
        r = log_returns(make_prices(closes))
        expected = log_returns_mpmath(closes)
        np.testing.assert_allclose(r.values, expected, rtol=0, atol=1e-12)

    def test_roundtrip_recovers_prices(self, rng):
        closes = np.exp(rng.normal(0, 0.03, 50).cumsum()) * 10
        r = log_returns(make_prices(closes))
        rebuilt = closes[0] * np.exp(np.concatenate([[0.0], np.cumsum(r.values)]))
        np.testing.assert_allclose(rebuilt, closes, rtol=1e-9)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            PriceSeries(SectorMeta("801010"), make_prices([1.0, 2.0]).dates, np.array([1.0, 0.0]))


class TestSummaryStats:
    def test_zero_variance_is_degenerate(self):
        with pytest.raises(ValueError, match="degenerate series"):
            summary_stats(make_returns([0.0, 0.0, 0.0, 0.0]))

    def test_too_short(self):
        with pytest.raises(ValueError, match="at least 4"):
            summary_stats(make_returns([0.1, 0.2, 0.3]))

    def test_matches_mpmath_oracle(self, rng):
        values = rng.normal(0.0003, 0.02, 500)
        s = summary_stats(make_returns(values))
        mean, vmax, vmin, std, skew, kurt, jb = stats_mpmath(values)
        assert s.mean == pytest.approx(mean, abs=1e-12)
        assert s.max == vmax and s.min == vmin
        assert s.std == pytest.approx(std, abs=1e-12)
        assert s.skewness == pytest.approx(skew, abs=1e-12)
        assert s.kurtosis == pytest.approx(kurt, abs=1e-12)
        assert s.jb_statistic == pytest.approx(jb, rel=1e-12)

    def test_normal_sample_moments(self):
        # Kurtosis near 3 and JB below the 1% critical value for most seeds.
        rejections = 0
        kurts = []
        for seed in range(100):
            values = np.random.default_rng(seed).standard_normal(4000)
            s = summary_stats(make_returns(values))
            kurts.append(s.kurtosis)
            rejections += s.jb_reject_at_1pct
        assert rejections <= 5
        assert abs(np.mean(kurts) - 3.0) < 0.2

    def test_reorder_invariance(self, rng):
        values = rng.normal(0, 0.01, 200)
        s1 = summary_stats(make_returns(values))
        s2 = summary_stats(make_returns(values[::-1].copy()))
        for field in ("mean", "std", "skewness", "kurtosis", "jb_statistic"):
            assert getattr(s1, field) == pytest.approx(getattr(s2, field), abs=1e-13)

    def test_jb_threshold_constant(self):
        assert JB_CRITICAL_1PCT == 9.442


class TestSlice:
    def test_full_range_identity(self):
        r = make_returns([0.1, -0.2, 0.3])
        out = slice_returns(r, (r.dates[0], r.dates[-1]))
        assert out.dates == r.dates
        np.testing.assert_array_equal(out.values, r.values)
        assert out.sector == r.sector

    def test_interior_window(self):
        r = make_returns([0.1, -0.2, 0.3, 0.4])
        out = slice_returns(r, (r.dates[1], r.dates[2]))
        assert out.dates == r.dates[1:3]

    def test_disjoint_window(self):
        r = make_returns([0.1, -0.2])
        with pytest.raises(ValueError, match="empty result"):
            slice_returns(r, (date(1990, 1, 1), date(1990, 12, 31)))

    def test_inverted_window(self):
        r = make_returns([0.1, -0.2])
        with pytest.raises(ValueError, match="empty interval"):
            slice_returns(r, (r.dates[1], r.dates[0]))
