"""Tests for CLI helpers: argument parsing and atomic output."""

import os

import numpy as np
import pytest

from tfpdiff.errors import DomainError
from tfpdiff.utils.tfp_utils import (
    atomic_write,
    atomic_write_all,
    parse_countries,
    parse_grid,
    parse_years,
)


class TestParseGrid:
    def test_inclusive_end(self):
        np.testing.assert_allclose(parse_grid("0:1:0.25"), [0.0, 0.25, 0.5, 0.75, 1.0])

    def test_end_not_on_grid(self):
        np.testing.assert_allclose(parse_grid("0:1:0.3"), [0.0, 0.3, 0.6, 0.9])

    def test_calendar_years(self):
        grid = parse_grid("1995:2050:5")
        assert grid[0] == 1995.0
        assert grid[-1] == 2050.0
        assert len(grid) == 12

    def test_single_point(self):
        assert parse_grid("3:3:1").tolist() == [3.0]

    @pytest.mark.parametrize("text", ["0:1", "0:1:0", "1:0:0.1", "a:1:0.1", "0:inf:1"])
    def test_invalid(self, text):
        with pytest.raises(DomainError):
            parse_grid(text)


class TestParseYears:
    def test_list(self):
        assert parse_years("2030,2050") == [2030, 2050]

    def test_range(self):
        assert parse_years("1995:1998") == [1995, 1996, 1997, 1998]

    @pytest.mark.parametrize("text", ["", ",", "2030.5", "1995:1990", "a:b"])
    def test_invalid(self, text):
        with pytest.raises(DomainError):
            parse_years(text)


class TestParseCountries:
    def test_strips_blanks(self):
        assert parse_countries(" Romania, Latvia ,") == ["Romania", "Latvia"]

    def test_duplicates_rejected(self):
        with pytest.raises(DomainError, match="duplicate"):
            parse_countries("Romania,Latvia,Romania")


class TestAtomicWrite:
    def test_writes_all_outputs(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        atomic_write_all({str(a): b"one\n", str(b): b"two\n"})
        assert a.read_bytes() == b"one\n"
        assert b.read_bytes() == b"two\n"
        assert sorted(p.name for p in tmp_path.iterdir()) == ["a.csv", "b.csv"]

    def test_overwrites(self, tmp_path):
        target = tmp_path / "out.json"
        target.write_text("old")
        atomic_write(str(target), b"new")
        assert target.read_text() == "new"

    def test_failure_leaves_nothing(self, tmp_path):
        good = tmp_path / "good.csv"
        bad = tmp_path / "missing" / "bad.csv"
        with pytest.raises(OSError):
            atomic_write_all({str(good): b"data", str(bad): b"data"})
        assert list(tmp_path.iterdir()) == []

    def test_failed_rename_restores_earlier_targets(self, tmp_path, monkeypatch):
        events, tfp = tmp_path / "events.csv", tmp_path / "events.tfp.csv"
        events.write_text("old events")
        real_replace = os.replace
        calls = []

        def flaky_replace(src, dst):
            calls.append(dst)
            if len(calls) == 2:
                raise OSError("disk full")
            real_replace(src, dst)

        monkeypatch.setattr(os, "replace", flaky_replace)
        with pytest.raises(OSError, match="disk full"):
            atomic_write_all({str(events): b"new events", str(tfp): b"new tfp"})
        monkeypatch.undo()
        assert events.read_text() == "old events"
        assert not tfp.exists()
        assert sorted(p.name for p in tmp_path.iterdir()) == ["events.csv"]

    def test_failed_rename_removes_new_targets(self, tmp_path, monkeypatch):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        real_replace = os.replace

        def fail_second(src, dst):
            if dst == str(second):
                raise OSError("disk full")
            real_replace(src, dst)

        monkeypatch.setattr(os, "replace", fail_second)
        with pytest.raises(OSError):
            atomic_write_all({str(first): b"one", str(second): b"two"})
        monkeypatch.undo()
        assert list(tmp_path.iterdir()) == []
