"""CSV emission and the seeded trial runner."""

import numpy as np
import pytest

from irs_seclab.errors import InvalidArgumentError
from irs_seclab.results import ResultTable, emit_csv, read_csv, to_csv_text
from irs_seclab.seeding import run_trials, trial_rng


def test_csv_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    rows = rng.standard_normal((5, 3)).tolist()
    table = ResultTable(["a", "b", "c"], rows, {"root_seed": 7, "note": "two\nlines"})
    path = tmp_path / "t.csv"
    emit_csv(table, path)
    back = read_csv(path)
    assert back.columns == ["a", "b", "c"]
    assert np.array_equal(back.to_array(), table.to_array()), "17 digits should round-trip"
    assert back.metadata["root_seed"] == "7"
    assert back.metadata["note"] == "two lines"


def test_csv_layout():
    text = to_csv_text(ResultTable(["x"], [[0.1]], {"b": 1, "a": 2}))
    assert text == "# a: 2\n# b: 1\nx\r\n0.10000000000000001\r\n"


def test_row_length_checked():
    with pytest.raises(InvalidArgumentError):
        ResultTable(["a", "b"], [[1.0]])


def test_unwritable_path(tmp_path):
    with pytest.raises(OSError, match="cannot write"):
        emit_csv(ResultTable(["a"], [[1]]), tmp_path / "missing" / "t.csv")


def test_trial_streams_independent_of_count():
    a = trial_rng(5, 3).standard_normal(4)
    b = trial_rng(5, 3).standard_normal(4)
    c = trial_rng(5, 4).standard_normal(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(trial_rng(5, 0, 3).standard_normal(4), a)


def test_run_trials_order():
    f = lambda i: trial_rng(1, i).random()
    serial = run_trials(f, 300, threads=1)
    assert run_trials(f, 300, threads=4, chunk=7) == serial
    assert run_trials(f, 0) == []
