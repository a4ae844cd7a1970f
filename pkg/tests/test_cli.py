import json

import numpy as np
import pytest

import starclique as sc
from starclique.cli import main
from starclique.trace import ProbabilityTrace


def read_trace(path):
    with open(path) as stream:
        return ProbabilityTrace.from_csv(stream)


def test_simulate_collapsed_peak(tmp_path):
    out = tmp_path / "trace.csv"
    code = main(
        ["simulate", "--n", "100", "--alpha", "0", "--steps", "300",
         "--mode", "collapsed", "--out", str(out)]
    )
    assert code == 0
    trace = read_trace(out)
    assert len(trace) == 301
    assert trace.p_hub[0] == pytest.approx(0.01, abs=1e-12)
    assert abs(int(np.argmax(trace.p_hub)) - 111) <= 2
    assert trace.metadata["n"] == "100"
    assert trace.metadata["m"] == "1"
    assert trace.metadata["mode"] == "collapsed"
    assert trace.metadata["leaf_phase"] == "reversal"


def test_simulate_alpha_one_first_peak(tmp_path):
    out = tmp_path / "trace.csv"
    assert (
        main(
            ["simulate", "--n", "100", "--alpha", "1", "--steps", "60",
             "--mode", "collapsed", "--out", str(out)]
        )
        == 0
    )
    trace = read_trace(out)
    # the first envelope period holds the peak; later quasi-periodic peaks
    # can edge slightly higher, so the window is 2 * t_opt
    t_opt = sc.optimal_time_exact(100, 100)
    window = trace.p_hub[: 2 * t_opt + 1]
    assert abs(int(np.argmax(window)) - 15) <= 2


def test_simulate_plain_baseline(tmp_path):
    out = tmp_path / "trace.csv"
    assert (
        main(
            ["simulate", "--n", "100", "--alpha", "0", "--steps", "300",
             "--leaf-phase", "plain", "--out", str(out)]
        )
        == 0
    )
    trace = read_trace(out)
    assert trace.p_hub.max() < 0.10


def test_simulate_repeat_is_byte_identical(tmp_path):
    args = ["simulate", "--n", "37", "--m", "4", "--steps", "50", "--mode", "full"]
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_simulate_csv_matches_library_trace(tmp_path):
    out = tmp_path / "trace.csv"
    assert (
        main(["simulate", "--n", "23", "--m", "3", "--steps", "40", "--out", str(out)])
        == 0
    )
    parsed = read_trace(out)
    ops = sc.build_reduced_operators(23, 3)
    expected = sc.evolve_collapsed(ops, sc.collapsed_initial_state(23, 3), 40)
    assert np.array_equal(parsed.p_hub, expected.p_hub)
    assert np.array_equal(parsed.psi_clique_in, expected.psi_clique_in)
    assert np.array_equal(parsed.psi_star_in, expected.psi_star_in)


def test_simulate_modes_agree(tmp_path):
    traces = {}
    for mode in ("full", "collapsed", "closed"):
        out = tmp_path / f"{mode}.csv"
        assert (
            main(
                ["simulate", "--n", "50", "--alpha", "0.5", "--steps", "200",
                 "--mode", mode, "--out", str(out)]
            )
            == 0
        )
        traces[mode] = read_trace(out)
    full, collapsed, closed = (
        traces["full"].p_hub, traces["collapsed"].p_hub, traces["closed"].p_hub
    )
    assert np.abs(full - collapsed).max() < 1e-10
    assert np.abs(collapsed - closed).max() < 1e-10


def test_simulate_json_round_trip(tmp_path):
    out = tmp_path / "trace.json"
    assert (
        main(["simulate", "--n", "11", "--m", "2", "--steps", "20",
              "--format", "json", "--out", str(out)])
        == 0
    )
    with open(out) as stream:
        parsed = ProbabilityTrace.from_json(stream)
    assert len(parsed) == 21
    assert parsed.metadata["mode"] == "collapsed"


def test_asymptotic_mode_envelope(tmp_path):
    out = tmp_path / "trace.csv"
    assert (
        main(["simulate", "--n", "100", "--alpha", "0", "--steps", "222",
              "--mode", "asymptotic", "--out", str(out)])
        == 0
    )
    trace = read_trace(out)
    # the asymptotic envelope starts at 0 (not 1/N) by construction
    assert trace.p_hub[0] == 0.0
    theta_1 = sc.discriminant_angles(100, 1).theta_1
    expected = 0.5 * np.sin(np.arange(223) * theta_1) ** 2
    assert np.abs(trace.p_hub - expected).max() < 1e-12


def test_full_mode_arc_budget(tmp_path):
    out = tmp_path / "trace.csv"
    code = main(
        ["simulate", "--n", "4000", "--m", "1", "--steps", "5",
         "--mode", "full", "--out", str(out)]
    )
    assert code == 3
    assert not out.exists()


@pytest.mark.parametrize(
    "args",
    [
        ["simulate", "--n", "100", "--steps", "10"],                      # no alpha/m
        ["simulate", "--n", "100", "--alpha", "0", "--m", "5", "--steps", "10"],
        ["simulate", "--n", "2", "--m", "1", "--steps", "10"],
        ["simulate", "--n", "100", "--m", "0", "--steps", "10"],
        ["simulate", "--n", "100", "--m", "1", "--steps", "0"],
        ["simulate", "--n", "100", "--alpha", "-1", "--steps", "10"],
        ["simulate", "--n", "100", "--m", "1", "--steps", "10",
         "--mode", "closed", "--leaf-phase", "plain"],
        ["simulate", "--n", "100", "--m", "5", "--steps", "10", "--mode", "asymptotic"],
        ["spectrum", "--n", "100", "--m", "5", "--format", "csv"],
        ["phase-diagram", "--n-grid", "256,1024"],
        ["phase-diagram", "--alphas", "0.5"],
    ],
)
def test_config_errors_leave_no_file(tmp_path, args):
    out = tmp_path / "never.csv"
    assert main(args + ["--out", str(out)]) == 2
    assert not out.exists()


def test_spectrum_smallest(tmp_path):
    out = tmp_path / "spectrum.json"
    assert main(["spectrum", "--n", "3", "--m", "1", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["spectrum"]["cos_theta_1"] == pytest.approx(0.879153, abs=1e-6)
    assert max(payload["spectrum"]["residuals"]) < 1e-10
    assert payload["closed_form_audit"]["flagged"]


def test_spectrum_alpha_one(tmp_path):
    out = tmp_path / "spectrum.json"
    assert main(["spectrum", "--n", "100", "--alpha", "1", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["spectrum"]["cos_theta_1"] == pytest.approx(0.994950, abs=1e-6)


def _parse_record(stdout: str) -> dict:
    record = {}
    for line in stdout.strip().splitlines():
        key, _, value = line.partition("=")
        record[key] = value
    return record


def test_optimal_time_large(capsys):
    assert main(["optimal-time", "--n", "10000", "--alpha", "0"]) == 0
    record = _parse_record(capsys.readouterr().out)
    assert int(record["t_opt_exact"]) == 11107
    assert 0.45 <= float(record["p_at_t_opt"]) <= 0.55


def test_optimal_time_examples(capsys):
    assert main(["optimal-time", "--n", "100", "--m", "10"]) == 0
    record = _parse_record(capsys.readouterr().out)
    assert int(record["t_opt_exact"]) == 36

    assert main(["optimal-time", "--n", "100", "--alpha", "0"]) == 0
    record = _parse_record(capsys.readouterr().out)
    assert int(record["t_opt_branch"]) == 111


def test_phase_diagram_fits(tmp_path, capsys):
    out = tmp_path / "diagram.csv"
    assert main(["phase-diagram", "--out", str(out)]) == 0
    rows = {}
    for line in out.read_text().splitlines():
        if line.startswith("#") or line.startswith("alpha"):
            continue
        alpha, fitted, theory, residual = (float(x) for x in line.split(","))
        rows[alpha] = (fitted, theory, residual)
    expected = {0.0: 1.0, 0.5: 0.75, 1.0: 0.5, 1.5: 0.5, 2.0: 0.5}
    for alpha, target in expected.items():
        fitted, theory, _ = rows[alpha]
        assert abs(fitted - target) < 0.05
        assert theory == max(0.5, (2 - alpha) / 2)

    # reruns are byte-identical
    out2 = tmp_path / "diagram2.csv"
    assert main(["phase-diagram", "--out", str(out2)]) == 0
    assert out.read_bytes() == out2.read_bytes()


def test_verify_smallest_instance(capsys):
    assert main(["verify", "--n", "3", "--m", "1", "--steps", "50"]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_verify_medium_instance(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert (
        main(["verify", "--n", "50", "--alpha", "0.5", "--steps", "500",
              "--out", str(out)])
        == 0
    )
    payload = json.loads(out.read_text())
    assert payload["passed"] is True
    oracle = next(
        c for c in payload["checks"] if c["name"] == "full_vs_collapsed_probability"
    )
    assert oracle["max_deviation"] < 1e-10


def test_verify_detects_injected_leaf_flip(capsys):
    code = main(
        ["verify", "--n", "10", "--m", "3", "--steps", "100",
         "--inject-leaf-phase-flip"]
    )
    assert code == 1
    assert "FAIL" in capsys.readouterr().out


def test_out_dir_environment_variable(tmp_path, monkeypatch):
    monkeypatch.setenv("STARCLIQUE_OUT_DIR", str(tmp_path))
    assert main(["simulate", "--n", "10", "--m", "2", "--steps", "5",
                 "--out", "env_trace.csv"]) == 0
    assert (tmp_path / "env_trace.csv").exists()
