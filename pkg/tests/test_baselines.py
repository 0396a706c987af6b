"""Baseline file round trip and window checking."""

import pytest

from sparselab import BaselineViolationError, ParameterError
from sparselab.baselines import check_window, load_baselines, save_baselines


def test_round_trip(tmp_path):
    path = tmp_path / "b.txt"
    windows = {"prop31": (0.25, 0.75), "thm11": (0.1234567890123, 2.0)}
    save_baselines(windows, path)
    got = load_baselines(path)
    assert set(got) == set(windows)
    assert got["prop31"] == (0.25, 0.75)
    # 12 significant digits survive the text round trip
    assert got["thm11"][0] == pytest.approx(0.1234567890123, rel=1e-12)


def test_malformed_line_rejected(tmp_path):
    path = tmp_path / "b.txt"
    path.write_text("# comment\nprop31 0.5\n")
    with pytest.raises(ParameterError):
        load_baselines(path)


def test_check_window_logic():
    baselines = {"prop31": (0.5, 1.0)}
    check_window("prop31", (0.5, 1.0), baselines)
    check_window("prop31", (0.6, 0.9), baselines)
    # headroom tolerates relative drift up to 1e-6
    check_window("prop31", (0.5 * (1 - 5e-7), 1.0 * (1 + 5e-7)), baselines)
    with pytest.raises(BaselineViolationError):
        check_window("prop31", (0.4, 0.9), baselines)
    with pytest.raises(BaselineViolationError):
        check_window("prop31", (0.6, 1.1), baselines)
    with pytest.raises(BaselineViolationError):
        check_window("lemma41", (1.0, 1.0), baselines)
