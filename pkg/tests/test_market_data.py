import math
from datetime import date, timedelta

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riskengine.errors import (
    DuplicateDateError,
    MissingColumnError,
    NoOverlapError,
    NonPositivePriceError,
    TooShortError,
    UnparsableDateError,
    UnparsablePriceError,
)
from riskengine.market_data import (
    CsvSchema,
    PriceSeries,
    align_panel,
    fill_calendar_gaps,
    log_returns,
    parse_price_csv,
    write_price_csv,
)


def series(closes, start=date(2015, 8, 8), step_days=1, asset_id="X"):
    dates = tuple(start + timedelta(days=i * step_days) for i in range(len(closes)))
    return PriceSeries(asset_id=asset_id, dates=dates, closes=np.asarray(closes, dtype=float))


class TestParseCsv:
    def test_basic_parse(self, tmp_path):
        path = tmp_path / "btc.csv"
        path.write_text("date,close\n2015-08-08,260.0\n2015-08-09,265.5\n")
        parsed = parse_price_csv(path)
        assert parsed.asset_id == "btc"
        assert len(parsed) == 2
        assert parsed.dates == (date(2015, 8, 8), date(2015, 8, 9))
        assert parsed.closes.tolist() == [260.0, 265.5]

    def test_rows_sorted(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("date,close\n2015-08-10,2.0\n2015-08-08,1.0\n")
        parsed = parse_price_csv(path)
        assert parsed.dates[0] == date(2015, 8, 8)
        assert parsed.closes.tolist() == [1.0, 2.0]

    def test_custom_schema(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("Day,Px\n2020-01-01,10\n2020-01-02,11\n")
        parsed = parse_price_csv(path, CsvSchema(date_column="Day", close_column="Px"))
        assert len(parsed) == 2

    def test_missing_column(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("when,close\n2020-01-01,10\n")
        with pytest.raises(MissingColumnError):
            parse_price_csv(path)

    def test_duplicate_date(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("date,close\n2015-08-08,1.0\n2015-08-08,2.0\n")
        with pytest.raises(DuplicateDateError):
            parse_price_csv(path)

    def test_negative_price(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("date,close\n2015-08-08,-1.0\n")
        with pytest.raises(NonPositivePriceError):
            parse_price_csv(path)

    def test_bad_date(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("date,close\n08/15/2015,1.0\n")
        with pytest.raises(UnparsableDateError):
            parse_price_csv(path)

    def test_bad_price(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("date,close\n2015-08-08,abc\n")
        with pytest.raises(UnparsablePriceError):
            parse_price_csv(path)

    def test_round_trip_through_file(self, tmp_path):
        original = series([100.0, 101.5, 99.25])
        path = tmp_path / "x.csv"
        write_price_csv(original, path)
        parsed = parse_price_csv(path, asset_id="X")
        assert parsed.dates == original.dates
        assert np.array_equal(parsed.closes, original.closes)


class TestFillCalendarGaps:
    def test_weekend_interpolation(self):
        # Friday 100, Monday 110: Sat/Sun get thirds of the move
        friday = date(2017, 1, 6)
        raw = PriceSeries(
            asset_id="spx",
            dates=(friday, friday + timedelta(days=3)),
            closes=np.array([100.0, 110.0]),
        )
        filled = fill_calendar_gaps(raw)
        assert len(filled) == 4
        assert filled.closes[1] == pytest.approx(100.0 + 10.0 / 3.0, rel=1e-15)
        assert filled.closes[2] == pytest.approx(100.0 + 20.0 / 3.0, rel=1e-15)
        assert filled.closes[0] == 100.0 and filled.closes[3] == 110.0

    def test_no_gaps_identity(self):
        s = series([1.0, 2.0, 3.0])
        assert fill_calendar_gaps(s) is s

    def test_constant_fill(self):
        s = series([100.0, 100.0], step_days=3)
        filled = fill_calendar_gaps(s)
        assert np.array_equal(filled.closes, [100.0, 100.0, 100.0, 100.0])

    def test_too_short(self):
        with pytest.raises(TooShortError):
            fill_calendar_gaps(series([100.0]))

    def test_idempotent(self):
        s = series([100.0, 103.0, 101.0], step_days=2)
        once = fill_calendar_gaps(s)
        twice = fill_calendar_gaps(once)
        assert twice.dates == once.dates
        assert np.array_equal(twice.closes, once.closes)

    @given(
        closes=st.lists(st.floats(min_value=0.5, max_value=1e6), min_size=2, max_size=12),
        gaps=st.lists(st.integers(min_value=1, max_value=7), min_size=1, max_size=11),
    )
    @settings(max_examples=60, deadline=None)
    def test_interpolated_points_bounded_by_neighbors(self, closes, gaps):
        steps = (gaps * len(closes))[: len(closes) - 1]
        dates = [date(2020, 1, 1)]
        for step in steps:
            dates.append(dates[-1] + timedelta(days=step))
        s = PriceSeries(asset_id="H", dates=tuple(dates), closes=np.asarray(closes))
        filled = fill_calendar_gaps(s)
        # every filled day lies on the segment between its observed brackets
        observed = dict(zip(s.dates, s.closes))
        obs_days = list(s.dates)
        for day, close in zip(filled.dates, filled.closes):
            if day in observed:
                assert close == observed[day]
                continue
            prev = max(d for d in obs_days if d < day)
            nxt = min(d for d in obs_days if d > day)
            lo, hi = sorted((observed[prev], observed[nxt]))
            assert lo - 1e-9 <= close <= hi + 1e-9


class TestLogReturns:
    def test_constant_prices(self):
        out = log_returns(series([100.0, 100.0, 100.0]))
        assert np.array_equal(out.returns, [0.0, 0.0])
        assert len(out.dates) == 2

    def test_up_ten_percent(self):
        out = log_returns(series([100.0, 110.0]))
        assert out.returns[0] == pytest.approx(math.log(1.1), rel=1e-15)

    def test_halving(self):
        out = log_returns(series([100.0, 50.0]))
        assert out.returns[0] == pytest.approx(-math.log(2.0), rel=1e-15)

    def test_too_short(self):
        with pytest.raises(TooShortError):
            log_returns(series([100.0]))

    def test_dates_are_later_stamps(self):
        s = series([1.0, 2.0, 3.0])
        out = log_returns(s)
        assert out.dates == s.dates[1:]

    @given(
        st.lists(st.floats(min_value=1e-3, max_value=1e6), min_size=2, max_size=30)
    )
    @settings(max_examples=80, deadline=None)
    def test_round_trip_reconstructs_prices(self, closes):
        s = series(closes)
        returns = log_returns(s).returns
        rebuilt = s.closes[0] * np.exp(np.cumsum(returns))
        assert np.allclose(rebuilt, s.closes[1:], rtol=1e-12, atol=0.0)


class TestAlignPanel:
    def test_identical_windows_unchanged(self):
        a = series([1.0, 2.0, 3.0], asset_id="A")
        b = series([4.0, 5.0, 6.0], asset_id="B")
        out = align_panel([a, b])
        assert out[0].dates == a.dates and out[1].dates == b.dates
        assert np.array_equal(out[0].closes, a.closes)

    def test_window_intersection(self):
        jan = date(2020, 1, 1)
        a = series([float(i + 1) for i in range(10)], start=jan, asset_id="A")
        b = series([float(i + 1) for i in range(16)], start=jan + timedelta(days=4), asset_id="B")
        out = align_panel([a, b])
        expected_start = jan + timedelta(days=4)
        expected_end = jan + timedelta(days=9)
        for trimmed in out:
            assert trimmed.dates[0] == expected_start
            assert trimmed.dates[-1] == expected_end
        assert out[0].closes.tolist() == [5.0, 6.0, 7.0, 8.0, 9.0, 10.0]

    def test_gap_filling_inside_window(self):
        jan = date(2020, 1, 1)
        a = series([1.0] * 8, start=jan, asset_id="A")
        b = PriceSeries(
            asset_id="B",
            dates=(jan, jan + timedelta(days=3), jan + timedelta(days=7)),
            closes=np.array([100.0, 106.0, 110.0]),
        )
        out = align_panel([a, b])
        assert len(out[0]) == len(out[1]) == 8
        assert out[1].closes[1] == pytest.approx(102.0)

    def test_disjoint_windows(self):
        a = series([1.0, 2.0], start=date(2020, 1, 1))
        b = series([1.0, 2.0], start=date(2021, 1, 1))
        with pytest.raises(NoOverlapError):
            align_panel([a, b])

    def test_single_day_overlap_rejected(self):
        a = series([1.0, 2.0], start=date(2020, 1, 1))
        b = series([1.0, 2.0], start=date(2020, 1, 2))
        with pytest.raises(NoOverlapError):
            align_panel([a, b])
