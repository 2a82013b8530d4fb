"""Command-line behaviour and exit codes."""

import copy

import pytest
import yaml

from irs_seclab.cli import EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_OK, main
from irs_seclab.experiment import PRESETS
from irs_seclab.results import read_csv


def _write(tmp_path, tree, name="cfg.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(tree))
    return str(path)


def test_validate_only(tmp_path, capsys):
    assert main(["run", _write(tmp_path, PRESETS["fig2"]), "--validate"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("ok secrecy-curve digest=")


def test_run_writes_csv(tmp_path):
    out = tmp_path / "o.csv"
    assert main(["fig3", "-q", "--trials", "20", "--out", str(out)]) == EXIT_OK
    table = read_csv(out)
    assert table.columns == ["position", "N", "probability"]
    assert table.metadata["trials"] == "20"
    assert len(table.metadata["config_digest"]) == 64


def test_stdout_when_no_out(capsys):
    assert main(["fig3", "-q", "--trials", "5"]) == EXIT_OK
    assert "position,N,probability" in capsys.readouterr().out


def test_seed_override_changes_digest(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["fig3", "-q", "--trials", "5", "--out", str(a)])
    main(["fig3", "-q", "--trials", "5", "--seed", "9", "--out", str(b)])
    assert read_csv(a).metadata["config_digest"] != read_csv(b).metadata["config_digest"]


def test_config_errors_exit_2(tmp_path, capsys):
    tree = copy.deepcopy(PRESETS["fig3"])
    del tree["scenario"]["willie_m"]
    assert main(["run", _write(tmp_path, tree)]) == EXIT_CONFIG
    assert "willie" in capsys.readouterr().err
    bad = tmp_path / "bad.yaml"
    bad.write_text("kind: [unclosed\n")
    assert main(["run", str(bad)]) == EXIT_CONFIG
    assert main(["run", str(tmp_path / "absent.yaml")]) == EXIT_CONFIG


def test_infeasible_exit_3(tmp_path, capsys):
    tree = copy.deepcopy(PRESETS["fig4"])
    tree["sweep"]["values"] = [0.001]
    tree["experiment"]["grids"] = {"beta_levels": [1.0], "theta_points": 2, "power_min_dbm": 40.0,
                                   "power_max_dbm": 41.0, "power_points": 1}
    assert main(["run", _write(tmp_path, tree), "-q", "--trials", "1"]) == EXIT_INFEASIBLE
    assert "epsilon=0.001" in capsys.readouterr().err


def test_bad_arguments():
    with pytest.raises(SystemExit):
        main(["fig2", "--threads", "0"])
    with pytest.raises(SystemExit):
        main(["nonsense"])
