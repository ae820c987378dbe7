import json
import math
import subprocess
import sys

import pytest

from concordance_lab import cli


def run_cli(args, tmp_path, name="out.txt"):
    out = tmp_path / name
    code = cli.main(args + ["--out", str(out)])
    return code, out.read_bytes() if out.exists() else b""


# ---------------------------------------------------------------------------
# JSON commands
# ---------------------------------------------------------------------------


def test_entropy_triple_quadric(tmp_path):
    code, payload = run_cli(
        ["entropy", "--model", "triple-quadric", "--word", "1,2,3"], tmp_path
    )
    assert code == 0
    doc = json.loads(payload)
    assert doc["log_lambda"] == pytest.approx(math.log(9 + 4 * math.sqrt(5)), abs=1e-9)
    assert doc["lambda"] == pytest.approx(9 + 4 * math.sqrt(5), abs=1e-8)


def test_entropy_wehler(tmp_path):
    code, payload = run_cli(["entropy", "--model", "wehler", "--word", "1,2"], tmp_path)
    assert code == 0
    assert json.loads(payload)["log_lambda"] == pytest.approx(
        math.log(7 + 4 * math.sqrt(3)), abs=1e-9
    )


def test_entropy_single_involution(tmp_path):
    code, payload = run_cli(["entropy", "--model", "wehler", "--word", "1"], tmp_path)
    assert code == 0
    assert json.loads(payload)["log_lambda"] == 0.0


def test_entropy_invalid_word_is_usage_error(tmp_path, capsys):
    assert cli.main(["entropy", "--model", "wehler", "--word", "9"]) == cli.USAGE_ERROR
    assert "invalid involution index" in capsys.readouterr().err


def test_lehmer_bound_values(tmp_path):
    code, payload = run_cli(["lehmer-bound", "--alpha", "1"], tmp_path)
    assert code == 0
    doc = json.loads(payload)
    assert doc["bound"] == pytest.approx(0.16236, abs=1e-5)
    assert doc["bound_linear_form"] == pytest.approx(1.17628, abs=1e-5)
    code, payload = run_cli(["lehmer-bound", "--alpha", "0"], tmp_path)
    assert json.loads(payload)["bound"] == 0.0
    _, half = run_cli(["lehmer-bound", "--alpha", "0.5"], tmp_path)
    assert json.loads(half)["bound"] == pytest.approx(doc["bound"] / 2)


def test_model_dump(tmp_path):
    code, payload = run_cli(["model", "dump", "--model", "triple-quadric"], tmp_path)
    assert code == 0
    doc = json.loads(payload)
    assert doc["gram"] == [[0, 2, 2], [2, 0, 2], [2, 2, 0]]
    assert len(doc["involutions"]) == 3


def test_fdomain_decompose(tmp_path):
    code, payload = run_cli(
        ["fdomain", "decompose", "--model", "wehler", "--theta=31,-8"], tmp_path
    )
    assert code == 0
    assert json.loads(payload) == {"n": 0, "k1": 1, "k2": 2, "j": None}


# ---------------------------------------------------------------------------
# CSV commands
# ---------------------------------------------------------------------------


def test_torus_certify_csv(tmp_path):
    code, payload = run_cli(["torus", "certify", "--y", "1", "--max-coord", "3"], tmp_path)
    assert code == 0
    lines = payload.decode().splitlines()
    assert lines[0] == "# schema: torus-certify v1"
    assert lines[1].split(",")[:3] == ["alpha", "beta", "gamma"]
    assert len(lines) > 10
    assert all(line.endswith("true") for line in lines[2:])


def test_torus_certify_rational_y(tmp_path):
    code, payload = run_cli(["torus", "certify", "--y", "1/2", "--max-coord", "2"], tmp_path)
    assert code == 0
    assert all(line.endswith("true") for line in payload.decode().splitlines()[2:])


def test_vieta_sweep_csv(tmp_path):
    code, payload = run_cli(
        ["vieta", "sweep", "--t-list", "0,1", "--n-max", "4",
         "--eps", "0.05", "--budget", "50000"],
        tmp_path,
    )
    assert code == 0
    lines = payload.decode().splitlines()
    assert lines[0] == "# schema: vieta-sweep v1"
    assert lines[1] == "t,n,L_n,h_estimate,alpha_upper,flags"
    assert len(lines) == 2 + 2 * 5  # two t values, lengths L_0..L_4


def test_vieta_sweep_truncation_exit_code(tmp_path):
    code, payload = run_cli(
        ["vieta", "sweep", "--t-list", "1", "--n-max", "4",
         "--eps", "0.001", "--budget", "80"],
        tmp_path,
    )
    assert code == cli.CERTIFICATE_ERROR
    assert "truncated" in payload.decode()


def test_vieta_orbit(tmp_path):
    code, payload = run_cli(
        ["vieta", "orbit", "--point", "1,0,0", "--t", "1", "--n", "3"], tmp_path
    )
    assert code == 0
    lines = payload.decode().splitlines()
    assert lines[1] == "n,x1,x2,x3,residual"
    assert lines[2].startswith("0,1.0,0.0,0.0")
    assert len(lines) == 6


def test_vieta_orbit_rejects_off_surface(tmp_path, capsys):
    assert (
        cli.main(["vieta", "orbit", "--point", "0,0,0", "--t", "1", "--n", "2"])
        == cli.USAGE_ERROR
    )


def test_crofton_line_json(tmp_path):
    code, payload = run_cli(
        ["crofton", "--curve", "line", "--samples", "500", "--seed", "7"], tmp_path
    )
    assert code == 0
    doc = json.loads(payload)
    assert doc["estimate"] == pytest.approx(math.pi, rel=1e-12)


def test_crofton_file_curve_and_convergence(tmp_path):
    curve_file = tmp_path / "curve.csv"
    lines = ["# a tilted segment"]
    for k in range(32):
        theta = 0.3 * k / 31
        lines.append(f"{math.cos(theta)},{math.sin(theta)},0.0")
    curve_file.write_text("\n".join(lines) + "\n")
    conv = tmp_path / "conv.csv"
    out = tmp_path / "result.json"
    code = cli.main(
        ["crofton", "--curve", str(curve_file), "--samples", "4000", "--seed", "3",
         "--convergence-csv", str(conv), "--out", str(out)]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["fs_length"] == pytest.approx(0.3, abs=1e-6)
    assert abs(doc["estimate"] - 0.3) < 5 * doc["stderr"] + 0.01
    conv_lines = conv.read_text().splitlines()
    assert conv_lines[0] == "# schema: crofton-convergence v1"
    assert conv_lines[1] == "samples,estimate,stderr"
    assert conv_lines[-1].startswith("4000,")


def test_crofton_conic_wrong_dim(tmp_path, capsys):
    assert (
        cli.main(["crofton", "--curve", "conic", "--d", "3", "--samples", "200", "--seed", "1"])
        == cli.USAGE_ERROR
    )


# ---------------------------------------------------------------------------
# determinism and plumbing
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ["entropy", "--model", "wehler", "--word", "1,2"],
        ["lehmer-bound", "--alpha", "0.25"],
        ["model", "dump", "--model", "wehler"],
        ["torus", "certify", "--y", "2", "--max-coord", "2"],
        ["vieta", "sweep", "--t-list", "0,0.5", "--n-max", "3", "--eps", "0.05",
         "--budget", "20000"],
        ["vieta", "orbit", "--point", "1,0,0", "--t", "0.5", "--n", "4"],
        ["crofton", "--curve", "conic", "--samples", "300", "--seed", "5"],
    ],
)
def test_byte_identical_reruns(argv, tmp_path):
    _, first = run_cli(argv, tmp_path, name="a.txt")
    _, second = run_cli(argv, tmp_path, name="b.txt")
    assert first == second
    assert first.endswith(b"\n")


def test_thread_env_does_not_change_output(tmp_path, monkeypatch):
    argv = ["torus", "certify", "--y", "1", "--max-coord", "3"]
    monkeypatch.setenv("CONCORDANCE_LAB_THREADS", "1")
    _, single = run_cli(argv, tmp_path, name="single.csv")
    monkeypatch.setenv("CONCORDANCE_LAB_THREADS", "4")
    _, pooled = run_cli(argv, tmp_path, name="pooled.csv")
    assert single == pooled


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "concordance_lab.cli", "entropy", "--model",
         "wehler", "--word", "1,2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["lambda"] == pytest.approx(7 + 4 * math.sqrt(3))


def test_unknown_flag_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli.main(["entropy", "--model", "wehler", "--word", "1", "--bogus", "1"])
    assert exc.value.code == cli.USAGE_ERROR


def test_run_config_capture():
    parser = cli.build_parser()
    args = parser.parse_args(["crofton", "--curve", "line", "--samples", "200", "--seed", "9"])
    config = cli.run_config_from_args(args)
    assert config.command == "crofton"
    assert config.seed == 9
    assert config.format == "json"
    assert config.parameters["samples"] == 200
