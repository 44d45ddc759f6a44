import numpy as np
import pytest

from noisy_support.cli import main


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "body.txt").write_text("ball 0 0 1\n")
    return tmp_path


def test_simulate_estimate_member_hausdorff(workdir, capsys):
    assert main(["simulate", "--body", "body.txt", "--n", "3000", "--sigma2", "0.01",
                 "--seed", "1", "--out", "cloud.csv"]) == 0
    assert (workdir / "cloud.csv").read_text().startswith("x1,x2\n")
    assert main(["estimate", "--in", "cloud.csv", "--sigma2", "0.01", "--M", "auto",
                 "--seed", "3", "--out", "est.csv"]) == 0
    capsys.readouterr()
    assert main(["member", "--est", "est.csv", "--point", "0.1,0.2"]) == 0
    assert capsys.readouterr().out.strip() == "true"
    assert main(["member", "--est", "est.csv", "--point", "5,0"]) == 0
    assert capsys.readouterr().out.strip() == "false"
    assert main(["hausdorff", "--est", "est.csv", "--body", "body.txt", "--delta", "0.01"]) == 0
    lower, upper, R = map(float, capsys.readouterr().out.strip().split(","))
    assert 0 <= lower <= upper == pytest.approx(lower + 2 * R * 0.01)


def test_endpoint1d(workdir):
    assert main(["endpoint1d", "--dist", "uniform", "--theta", "0", "--width", "1", "--sigma2", "1",
                 "--n", "1000", "--trials", "5", "--variant", "refined", "--alpha", "1",
                 "--seed", "42", "--out", "curve.csv"]) == 0
    lines = (workdir / "curve.csv").read_text().splitlines()
    assert lines[0] == "n,trial,theta_hat,error" and len(lines) == 6


def test_lowerbound(workdir):
    assert main(["lowerbound", "--m", "2", "--tau", "0.5", "--delta", "1", "--d", "2",
                 "--grid", "4096", "--out", "lb_report.csv"]) == 0
    assert (workdir / "lb_report.csv").read_text().startswith("quantity,value,tolerance,pass\n")


def test_risk_curve(workdir):
    (workdir / "cfg.txt").write_text("body = body.txt\nnoise = gaussian 0.01\nn_values = 500, 1000\n"
                                     "trials = 2\nnet_resolution = 0.1\n")
    assert main(["risk-curve", "--config", "cfg.txt", "--seed", "4", "--out", "res"]) == 0
    assert (workdir / "res" / "risk.csv").exists() and (workdir / "res" / "risk_plot.py").exists()


@pytest.mark.parametrize("argv", [
    ["risk-curve", "--config", "missing.txt"],
    ["simulate", "--body", "blob 1", "--n", "10"],
    ["endpoint1d", "--dist", "normal"],
    ["member", "--est", "nothing.csv", "--point", "0,0"],
    ["simulate", "--body", "body.txt", "--n", "10", "--sigma2", "1", "--Q", "1"],
    ["simulate", "--body", "body.txt", "--n", "10", "--threads", "0"],
])
def test_config_errors_exit_2(workdir, argv):
    assert main(argv) == 2


def test_unknown_config_key_exit_2(workdir):
    (workdir / "cfg.txt").write_text("bogus = 1\n")
    assert main(["risk-curve", "--config", "cfg.txt"]) == 2


def test_argparse_errors_exit_2(workdir):
    with pytest.raises(SystemExit) as exc:
        main(["estimate"])
    assert exc.value.code == 2


def test_numerical_failure_exit_3(workdir):
    # a sliver polytope defeats rejection sampling
    (workdir / "sliver.txt").write_text(
        "poly\nh 1 -1 1e-9\nh -1 1 1e-9\nh 1 0 1\nh -1 0 0\nh 0 1 1\nh 0 -1 0\n")
    assert main(["simulate", "--body", "sliver.txt", "--n", "1"]) == 3


def test_same_seed_same_files(workdir):
    for tag in ("a", "b"):
        main(["simulate", "--body", "body.txt", "--n", "500", "--sigma2", "0.01", "--seed", "9",
              "--out", f"cloud_{tag}.csv"])
    assert (workdir / "cloud_a.csv").read_bytes() == (workdir / "cloud_b.csv").read_bytes()
    np.testing.assert_array_equal(np.loadtxt(workdir / "cloud_a.csv", delimiter=",", skiprows=1).shape,
                                  (500, 2))
