import json
import math

import pandas as pd
import pytest

import cli
import main
from config import Config


def run(tmp_path, *argv, config=None, name="out.csv"):
    args = list(argv)
    if config is not None:
        config_path = tmp_path / "run.json"
        config_path.write_text(json.dumps(config))
        args += ["--config", str(config_path)]
    out = tmp_path / name
    code = main.main(args + ["--out", str(out), "--quiet"])
    return code, out


def test_constants_table(tmp_path):
    code, out = run(tmp_path, "constants", config={"pairs": [[1, 0.5], [2, 0.75]]})
    assert code == cli.EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["n", "s", "a", "c", "k", "kappa", "C_closed", "C_quadrature", "abs_diff"]
    critical = frame.iloc[0]
    assert critical["kappa"] == pytest.approx(1.0 / math.pi, rel=1e-15)
    assert critical["C_closed"] == pytest.approx(1.0 / math.pi, rel=1e-13)
    assert math.isnan(critical["k"])
    for _, row in frame.iterrows():
        assert row["abs_diff"] <= 1e-6 * row["C_closed"]


def test_constants_for_a_single_pair(tmp_path):
    code, out = run(tmp_path, "constants", "--n", "1", "--s", "0.5")
    assert code == cli.EXIT_OK
    frame = pd.read_csv(out)
    assert len(frame) == 1
    assert (frame.iloc[0]["n"], frame.iloc[0]["s"]) == (1, 0.5)


def test_empty_pairs_give_a_header_only_table(tmp_path):
    code, out = run(tmp_path, "constants", config={"pairs": []})
    assert code == cli.EXIT_OK
    assert out.read_text().strip() == "n,s,a,c,k,kappa,C_closed,C_quadrature,abs_diff"


def test_eval_fundamental_solution(tmp_path):
    code, out = run(tmp_path, "eval", "--n", "1", "--s", "0.5", "--selector", "phi",
                    config={"points": [[1.0], [0.0], [2.0]]})
    assert code == cli.EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame["status"]) == ["ok", "singular", "ok"]
    assert frame["value"][0] == 0.0
    assert math.isnan(frame["value"][1])
    assert frame["value"][2] == pytest.approx(-math.log(2.0) / math.pi, rel=1e-15)


def test_eval_green_function_along_an_axis(tmp_path):
    code, out = run(tmp_path, "eval", "--n", "2", "--s", "0.5")
    assert code == cli.EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["x1", "x2", "value", "status"]
    assert len(frame) == 9
    assert frame["status"][4] == "diagonal"
    values = frame["value"].tolist()
    for k in range(4):
        assert values[k] == pytest.approx(values[8 - k], rel=1e-12)
    assert values[0] < values[1] < values[2] < values[3]


def test_eval_outside_points(tmp_path):
    code, out = run(tmp_path, "eval", "--n", "1", "--s", "0.3", "--selector", "poisson", "--x", "0.2",
                    config={"points": [[0.5], [1.5]]})
    assert code == cli.EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame["status"]) == ["outside", "ok"]


def test_solve_torsion_problem_with_residuals(tmp_path):
    code, out = run(tmp_path, "solve", "--n", "1", "--s", "0.5", "--residual", "--tol", "1e-8",
                    config={"grid": {"start": -0.8, "stop": 0.8, "count": 5}})
    assert code == cli.EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["x1", "u", "residual"]
    for x, u in zip(frame["x1"], frame["u"]):
        assert u == pytest.approx(math.sqrt(1.0 - x * x), abs=1e-4)
    assert frame["residual"].max() <= 1e-4


def test_solve_with_zero_forcing(tmp_path):
    code, out = run(tmp_path, "solve", "--n", "2", "--s", "0.5", "--field", "constant",
                    config={"field_params": {"value": 0.0}, "grid": {"start": 0.0, "stop": 0.6, "count": 3}})
    assert code == cli.EXIT_OK
    frame = pd.read_csv(out)
    assert (frame["u"] == 0.0).all()


def test_solve_poisson_problem_json(tmp_path):
    code, out = run(tmp_path, "solve", "--n", "1", "--s", "0.25", "--problem", "poisson", "--field", "constant",
                    "--format", "json", "--residual", "--tol", "1e-9",
                    config={"field_params": {"value": 2.0}, "points": [[0.0], [0.5], [1.5]]}, name="out.json")
    assert code == cli.EXIT_OK
    records = json.loads(out.read_text())
    assert [record["x1"] for record in records] == [0.0, 0.5, 1.5]
    for record in records:
        assert record["u"] == pytest.approx(2.0, rel=1e-7)
        assert record["residual"] <= 1e-6


def test_verify_passes(tmp_path):
    code, out = run(tmp_path, "verify", "gam1", "gam3", "prop2")
    assert code == cli.EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame.columns) == cli.VERIFY_COLUMNS
    assert frame["passed"].all()
    assert set(frame["name"]) == {"gam1", "gam3", "prop2"}


def test_verify_failure_exit_code(tmp_path):
    code, out = run(tmp_path, "verify", "ctcomp1111", "--tol", "1e-30")
    assert code == cli.EXIT_VERIFY_FAILED
    frame = pd.read_csv(out)
    assert not frame["passed"].all()
    assert (frame.loc[frame["passed"], "rel_err"] == 0.0).all()


def test_verify_green_mass_exits_cleanly(tmp_path):
    code, out = run(tmp_path, "verify", "constant", "cn2s")
    assert code == cli.EXIT_OK
    frame = pd.read_csv(out)
    assert frame["passed"].all()
    assert (frame["name"] == "constant").sum() == 18


def test_verify_is_deterministic(tmp_path, monkeypatch):
    _, first = run(tmp_path, "verify", "gam2", "hyp123", "firsttr", name="first.csv")
    monkeypatch.setattr(Config, "THREADS", 3)
    _, second = run(tmp_path, "verify", "gam2", "hyp123", "firsttr", name="second.csv")
    assert first.read_bytes() == second.read_bytes()


@pytest.mark.parametrize("argv", [
    ["eval", "--n", "2", "--s", "1.5"],
    ["eval", "--n", "2"],
    ["verify", "no_such_identity"],
    ["solve", "--n", "4", "--s", "0.5"],
])
def test_configuration_errors(tmp_path, argv):
    code, _ = run(tmp_path, *argv)
    assert code == cli.EXIT_CONFIG


def test_bad_environment_is_a_configuration_error(tmp_path, monkeypatch):
    monkeypatch.setattr(Config, "REL_TOL", -1.0)
    code, _ = run(tmp_path, "constants", config={"pairs": []})
    assert code == cli.EXIT_CONFIG


def test_unknown_command_is_rejected_by_the_parser():
    with pytest.raises(SystemExit) as info:
        main.main(["integrate"])
    assert info.value.code == 2


def test_table_goes_to_stdout_without_out(capsys):
    code = main.main(["verify", "gam4", "--quiet"])
    assert code == cli.EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == ",".join(cli.VERIFY_COLUMNS)
    assert len(lines) == 6


def test_solve_values_do_not_depend_on_the_grid(tmp_path):
    shared = {}
    for count in (2, 3):
        code, out = run(tmp_path, "solve", "--n", "1", "--s", "0.3", "--field", "constant", "--tol", "1e-8",
                        config={"grid": {"start": 0.0, "stop": 0.5, "count": count}}, name=f"grid{count}.csv")
        assert code == cli.EXIT_OK
        frame = pd.read_csv(out)
        shared[count] = dict(zip(frame["x1"], frame["u"]))
    assert shared[2][0.0] == shared[3][0.0]
    assert shared[2][0.5] == shared[3][0.5]


@pytest.mark.slow
def test_green_definition_and_closed_form_columns_agree(tmp_path):
    columns = {}
    for selector in ("green_definition", "green_closed"):
        code, out = run(tmp_path, "eval", "--n", "3", "--s", "0.5", "--selector", selector,
                        "--x", "0.1", "0.1", "0.0", "--tol", "1e-7",
                        config={"grid": {"start": -0.6, "stop": 0.6, "count": 5}}, name=f"{selector}.csv")
        assert code == cli.EXIT_OK
        columns[selector] = pd.read_csv(out)["value"].tolist()
    for definition, closed in zip(columns["green_definition"], columns["green_closed"]):
        assert definition == pytest.approx(closed, rel=1e-4)
