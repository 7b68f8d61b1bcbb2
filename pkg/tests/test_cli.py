# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

import numpy as np
import pytest
import yaml

from rmt_qubits import main
from rmt_qubits.errors import ConfigError
from rmt_qubits.utils import THREADS_ENV
from rmt_qubits.utils import csv_text
from rmt_qubits.utils import file_write
from rmt_qubits.utils import manifest_name
from rmt_qubits.utils import parse_list
from rmt_qubits.utils import read_config
from rmt_qubits.utils import thread_count

BASE_EVOLVE = [
    "evolve",
    "--init", "bell1",
    "--alpha", "0.5",
    "--dos", "lorentzian",
    "--gamma", "0.3",
    "--gamma0", "1.0",
    "--env-energy", "1.1",
    "--s", "1",
    "--tau-max", "1",
    "--tau-steps", "10",
    "--states-out", "states.csv",
]  # fmt: skip

# flag -> (argparse dest, perturbed value)
PERTURBATIONS = {
    "--init": ("init", "bell2"),
    "--alpha": ("alpha", "0.6"),
    "--alpha3": ("alpha3", "0.5"),
    "--k": ("k", "2"),
    "--beta-phase": ("beta_phase", "0.3"),
    "--dos": ("dos", "flat"),
    "--gamma": ("gamma", "0.5"),
    "--gamma0": ("gamma0", "2.0"),
    "--env-energy": ("env_energy", "0.7"),
    "--s": ("s", "1.3"),
    "--tau-max": ("tau_max", "2.0"),
    "--tau-steps": ("tau_steps", "12"),
}


def run(work_dir, *args):
    main(["--work_dir", str(work_dir), *args])


def read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [[float(value) for value in line.split(",")] for line in lines[1:] if not line.startswith("#")]
    comments = [line for line in lines if line.startswith("#")]
    return header, np.array(rows), comments


def read_manifest(path):
    return yaml.safe_load(path.read_text())


def outputs(work_dir):
    return {path.name: path.read_bytes() for path in sorted(work_dir.iterdir())}


def with_flag(args, flag, value):
    args = list(args)
    if flag in args:
        args[args.index(flag) + 1] = value
    else:
        args.extend([flag, value])
    return args


def test_no_arguments_prints_help(capsys):
    with pytest.raises(SystemExit) as exit_info:
        main([])
    assert exit_info.value.code == 0
    assert "evolve" in capsys.readouterr().err


def test_missing_sub_command():
    with pytest.raises(SystemExit, match="No sub-command"):
        main(["--log_level", "WARNING"])


def test_markov_check_on_flat_density(tmp_path, capsys):
    run(tmp_path, "markov-check", "--dos", "flat", "--gamma0", "1.0")
    assert capsys.readouterr().out.strip() == "det_phi3_inf=0 residual<=1e-10 markovian=true"


def test_markov_check_on_lorentzian_density(tmp_path, capsys):
    run(tmp_path, "markov-check", "--gamma", "0.15", "--env-energy", "1.1", "--grid-points", "6")
    assert capsys.readouterr().out.strip().endswith("markovian=false")


def test_evolve_writes_csv_and_manifest(tmp_path):
    run(tmp_path, *BASE_EVOLVE)
    header, rows, _comments = read_csv(tmp_path / "traj.csv")
    assert header == ["tau", "negativity", "concurrence", "discord", "entropy"]
    assert rows.shape == (11, 5)
    assert rows[0, 2] == pytest.approx(np.sqrt(3) / 2)
    manifest = read_manifest(tmp_path / "traj.manifest.yaml")
    assert manifest["mode"] == "evolve"
    assert manifest["model"] == "C1"
    assert manifest["inert_parameters"] == ["alpha3", "gamma0", "k"]
    assert manifest["environment"] == {"dos": "lorentzian", "gamma": 0.3}
    assert set(manifest["rates"]) >= {"gamma0", "gamma_plus", "gamma_minus"}
    states_header, states, _comments = read_csv(tmp_path / "states.csv")
    assert len(states_header) == 33
    assert states.shape == (11, 33)


def test_evolve_reports_sudden_death(tmp_path):
    run(
        tmp_path,
        "evolve",
        "--init", "bell2",
        "--alpha", "0.67",
        "--gamma", "0.33",
        "--env-energy", "1.3",
        "--tau-max", "10",
        "--tau-steps", "100",
    )  # fmt: skip
    _header, _rows, comments = read_csv(tmp_path / "traj.csv")
    assert len(comments) == 1
    assert comments[0].startswith("# ESD tau=0.")
    events = read_manifest(tmp_path / "traj.manifest.yaml")["events"]
    assert [event["kind"] for event in events] == ["ESD"]


def test_reruns_are_byte_identical(tmp_path):
    run(tmp_path / "first", *BASE_EVOLVE)
    run(tmp_path / "second", "--threads", "3", *BASE_EVOLVE)
    for name in ("traj.csv", "states.csv"):
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()


@pytest.mark.parametrize("flag", list(PERTURBATIONS))
def test_parameters_change_output_unless_inert(tmp_path, flag):
    run(tmp_path / "base", *BASE_EVOLVE)
    dest, value = PERTURBATIONS[flag]
    run(tmp_path / "perturbed", *with_flag(BASE_EVOLVE, flag, value))

    base = outputs(tmp_path / "base")
    perturbed = outputs(tmp_path / "perturbed")
    changed = any(base[name] != perturbed[name] for name in ("traj.csv", "states.csv"))
    inert = read_manifest(tmp_path / "perturbed" / "traj.manifest.yaml")["inert_parameters"]
    assert changed == (dest not in inert)


def test_phase_changes_only_the_states(tmp_path):
    run(tmp_path / "base", *BASE_EVOLVE)
    run(tmp_path / "phase", *with_flag(BASE_EVOLVE, "--beta-phase", "0.3"))
    assert (tmp_path / "base" / "traj.csv").read_bytes() == (tmp_path / "phase" / "traj.csv").read_bytes()
    assert (tmp_path / "base" / "states.csv").read_bytes() != (tmp_path / "phase" / "states.csv").read_bytes()


def test_constraint_error_exit_code(tmp_path, capsys):
    with pytest.raises(SystemExit) as exit_info:
        run(tmp_path, "evolve", "--alpha", "1.5", "--gamma", "0.3")
    assert exit_info.value.code == 2
    lines = capsys.readouterr().err.splitlines()
    assert any(line.startswith("error=ConstraintError exit=2 message=") for line in lines)
    assert not list(tmp_path.glob("*.csv"))
    assert not list(tmp_path.glob("*.yaml"))


def test_missing_rate_is_a_validation_error(tmp_path, capsys):
    with pytest.raises(SystemExit) as exit_info:
        run(tmp_path, "evolve", "--dos", "flat")
    assert exit_info.value.code == 2
    assert "error=ValidationError" in capsys.readouterr().err


def test_unknown_flag(tmp_path):
    with pytest.raises(SystemExit) as exit_info:
        run(tmp_path, "evolve", "--gamma", "0.3", "--no-such-flag")
    assert exit_info.value.code != 0


def test_resource_budget_exit_code(tmp_path, capsys):
    with pytest.raises(SystemExit) as exit_info:
        run(tmp_path, "finite-n", "--gamma", "1.0", "--n", "10", "--draws", "2", "--budget-gib", "1e-6")
    assert exit_info.value.code == 4
    assert "error=ResourceBudgetError exit=4" in capsys.readouterr().err
    assert not list(tmp_path.glob("mc*"))


def test_config_values_are_defaults(tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text("# evolve defaults\ngamma = 0.3\nalpha = 0.6\ntau-max = 1\ntau_steps = 4\n")
    run(tmp_path, "--config", str(config), "evolve", "--alpha", "0.5")
    parameters = read_manifest(tmp_path / "traj.manifest.yaml")["parameters"]
    assert parameters["alpha"] == 0.5
    assert parameters["gamma"] == 0.3
    assert parameters["tau_max"] == 1.0
    assert parameters["tau_steps"] == 4


def test_unknown_config_key(tmp_path, capsys):
    config = tmp_path / "run.cfg"
    config.write_text("gamma = 0.3\ncolour = blue\n")
    with pytest.raises(SystemExit) as exit_info:
        run(tmp_path, "--config", str(config), "evolve")
    assert exit_info.value.code == 2
    assert "error=ConfigError" in capsys.readouterr().err


def test_sweep_single_value_matches_evolve(tmp_path):
    common = ["--init", "bell2", "--alpha", "0.67", "--gamma", "0.33", "--env-energy", "1.3"]
    grid = ["--tau-max", "2", "--tau-steps", "20"]
    run(tmp_path, "evolve", *common, *grid)
    sweep_args = ["--param", "alpha", "--from", "0.67", "--to", "0.67", "--steps", "1"]
    run(tmp_path, "sweep", *common, *grid, *sweep_args)
    _header, trajectory, _comments = read_csv(tmp_path / "traj.csv")
    header, sweep, _comments = read_csv(tmp_path / "sweep.csv")
    assert header == ["tau", "alpha=0.67"]
    np.testing.assert_array_equal(sweep[:, 1], trajectory[:, 2])


def test_sweep_over_werner_weight(tmp_path):
    run(
        tmp_path,
        "sweep",
        "--init", "werner",
        "--k", "2",
        "--alpha", "0.1",
        "--gamma", "0.5",
        "--param", "alpha3",
        "--from", "0",
        "--to", "1",
        "--steps", "11",
        "--tau-max", "1",
        "--tau-steps", "4",
    )  # fmt: skip
    header, rows, _comments = read_csv(tmp_path / "sweep.csv")
    assert rows.shape == (5, 12)
    assert header[1] == "alpha3=0"
    assert header[-1] == "alpha3=1"
    assert rows[0, -1] == pytest.approx(2 * 0.1 * np.sqrt(0.99))
    assert rows[0, 1] == 0.0
    manifest = read_manifest(tmp_path / "sweep.manifest.yaml")
    assert manifest["swept"] == "alpha3"
    assert "alpha3" in manifest["inert_parameters"]


def test_sweep_needs_matching_family(tmp_path, capsys):
    with pytest.raises(SystemExit) as exit_info:
        run(tmp_path, "sweep", "--gamma", "0.3", "--param", "alpha2", "--from", "0", "--to", "1")
    assert exit_info.value.code == 2
    assert "error=ValidationError" in capsys.readouterr().err


def test_sweep_needs_a_range(tmp_path):
    with pytest.raises(SystemExit) as exit_info:
        run(tmp_path, "sweep", "--gamma", "0.3", "--param", "alpha")
    assert exit_info.value.code == 2


def test_stationary_prints_the_model(tmp_path, capsys):
    run(
        tmp_path,
        "stationary",
        "--init", "bell2",
        "--alpha", "0.67",
        "--gamma", "0.15",
        "--env-energy", "1.1",
        "-o", "limit.csv",
    )  # fmt: skip
    line = capsys.readouterr().out.strip()
    assert line.startswith("model=C2 negativity=0 concurrence=0 discord=")
    header, rows, _comments = read_csv(tmp_path / "limit.csv")
    assert len(header) == 36
    assert rows.shape == (1, 36)


def test_resolvent_grid(tmp_path):
    run(tmp_path, "resolvent", "--gamma", "1.0", "--e-from", "-1", "--e-to", "1", "--steps", "10")
    header, rows, _comments = read_csv(tmp_path / "g.csv")
    assert header == ["e", "re_g_plus", "im_g_plus", "re_g_minus", "im_g_minus"]
    assert rows.shape == (11, 5)
    assert np.all(rows[:, 2] > 0.0)
    assert np.all(rows[:, 4] > 0.0)


def test_finite_n_run(tmp_path):
    args = ["finite-n", "--gamma", "1.0", "--n", "8", "--draws", "2", "--t-max", "1", "--t-steps", "2"]
    run(tmp_path / "serial", *args)
    run(tmp_path / "threaded", "--threads", "2", *args)
    header, rows, _comments = read_csv(tmp_path / "serial" / "mc.csv")
    assert len(header) == 66
    assert header[:3] == ["t", "tau", "re_rho11"]
    assert rows.shape == (3, 66)
    assert rows[1, 1] == pytest.approx(0.01 * 0.5)
    serial = (tmp_path / "serial" / "mc.csv").read_bytes()
    assert serial == (tmp_path / "threaded" / "mc.csv").read_bytes()
    manifest = read_manifest(tmp_path / "serial" / "mc.manifest.yaml")
    assert manifest["model"] == "C1"
    assert manifest["finite_n_model"]["n"] == 8


def test_variance_scan_run(tmp_path, capsys):
    run(tmp_path, "variance-scan", "--gamma", "1.0", "--n-list", "8,16", "--draws", "4", "--t", "1")
    assert capsys.readouterr().out.startswith("exponent=")
    header, rows, comments = read_csv(tmp_path / "variance.csv")
    assert header == ["n", "max_variance", "bound"]
    assert rows[:, 0].tolist() == [8.0, 16.0]
    assert comments[0].startswith("# exponent=")


def test_variance_scan_needs_two_sizes(tmp_path):
    with pytest.raises(SystemExit) as exit_info:
        run(tmp_path, "variance-scan", "--gamma", "1.0", "--n-list", "8")
    assert exit_info.value.code == 2


def test_compare_run(tmp_path):
    run(
        tmp_path,
        "compare",
        "--init", "bell2",
        "--alpha", "0.2",
        "--gamma", "2.0",
        "--n", "8",
        "--draws", "2",
        "--couplings", "0.2,0.1",
        "--tau-max", "0.1",
        "--tau-steps", "1",
    )  # fmt: skip
    header, rows, _comments = read_csv(tmp_path / "compare.csv")
    assert header == ["v", "tau", "t", "invariant_deviation", "entry_deviation", "max_stderr"]
    assert rows.shape == (4, 6)
    assert rows[:, 0].tolist() == [0.2, 0.2, 0.1, 0.1]
    manifest = read_manifest(tmp_path / "compare.manifest.yaml")
    assert isinstance(manifest["monotone_in_v"], bool)


def test_thread_count_precedence(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert thread_count(None) == 1
    monkeypatch.setenv(THREADS_ENV, "3")
    assert thread_count(None) == 3
    assert thread_count(None, "2") == 2
    assert thread_count(4, "2") == 4
    monkeypatch.setenv(THREADS_ENV, "many")
    with pytest.raises(ConfigError):
        thread_count(None)
    with pytest.raises(ConfigError):
        thread_count(0)


def test_read_config(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("tau-max = 2  # slow time\nseed = 5\n")
    assert read_config(path, {"tau_max", "seed"}) == {"tau_max": "2", "seed": "5"}
    with pytest.raises(ConfigError):
        read_config(path, {"seed"})
    with pytest.raises(ConfigError):
        read_config(tmp_path / "missing.cfg", {"seed"})


def test_parse_list():
    assert parse_list("100,200,400", int) == [100, 200, 400]
    assert parse_list("0.3, 0.2,") == [0.3, 0.2]
    with pytest.raises(ConfigError):
        parse_list("a,b", int)


def test_csv_text_and_manifest_name():
    assert csv_text(("a", "b"), [(1, 0.5)], ["ESD tau=0.5"]) == "a,b\n1,0.5\n# ESD tau=0.5\n"
    assert manifest_name("traj.csv") == "traj.manifest.yaml"
    assert manifest_name("runs/mc.csv") == "runs/mc.manifest.yaml"


def test_file_write_picks_format_from_name(tmp_path):
    manifest = file_write(str(tmp_path), "runs/traj.manifest.yaml", {"mode": "evolve", "seed": 3})
    assert manifest == f"{tmp_path}/runs/traj.manifest.yaml"
    assert read_manifest(tmp_path / "runs" / "traj.manifest.yaml") == {"mode": "evolve", "seed": 3}
    table = file_write(str(tmp_path), "traj.csv", "a,b\n1,2\n")
    assert (tmp_path / "traj.csv").read_text() == "a,b\n1,2\n"
    assert table == f"{tmp_path}/traj.csv"
