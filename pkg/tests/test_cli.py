import json

import pytest

from secantflow import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def load(path):
    return json.loads(path.read_text())


@pytest.fixture(scope="module")
def demo(tmp_path_factory):
    out = tmp_path_factory.mktemp("demo")
    return cli.main(["demo-example1", "--out", str(out)]), out


# exit codes -----------------------------------------------------------------

def test_check_adapted_example1(tmp_path, capsys):
    code, out, _ = run(capsys, "check-adapted", "--out", str(tmp_path))
    assert code == cli.EXIT_OK
    assert json.loads(out)["adapted"] is True
    assert load(tmp_path / "adapted.json")["report"]["overall"]
    assert (tmp_path / "gamma.csv").read_text().startswith("polyline,x,y")


def test_check_adapted_empty_gamma(tmp_path, capsys):
    code, out, _ = run(capsys, "check-adapted", "--h", "x^2+y^2+1", "--out", str(tmp_path))
    assert code == cli.EXIT_FAIL
    assert "Gamma empty" in json.loads(out)["reasons"]


def test_parse_error_is_usage(tmp_path, capsys):
    code, _, err = run(capsys, "check-adapted", "--h", "x^2+*y", "--out", str(tmp_path))
    assert code == cli.EXIT_USAGE
    assert "position 4" in err


def test_h_with_z_is_usage(tmp_path, capsys):
    assert run(capsys, "check-adapted", "--h", "x+z", "--out", str(tmp_path))[0] == cli.EXIT_USAGE


def test_bad_flag_value_is_usage(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["build", "--z4-sign", "3"])
    assert e.value.code == cli.EXIT_USAGE


def test_given_H_without_z_fails(tmp_path, capsys):
    code, _, err = run(capsys, "build", "--H", "x^2+y^2", "--h", "x^2+y^2-1/4", "--out", str(tmp_path))
    assert code == cli.EXIT_FAIL
    assert "H_z" in err


def test_build_refuses_unadapted_h(tmp_path, capsys):
    code, _, err = run(capsys, "build", "--h", "(x-1/4)*(x+1/4)", "--out", str(tmp_path))
    assert code == cli.EXIT_FAIL and "--force" in err
    assert load(tmp_path / "build.json")["error"] == "h is not adapted"


# configuration ----------------------------------------------------------------

def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"h": "x^2+y^2+1", "out": str(tmp_path / "a")}))
    assert run(capsys, "check-adapted", "--config", str(cfg))[0] == cli.EXIT_FAIL
    assert (tmp_path / "a" / "adapted.json").exists()
    code, _, _ = run(capsys, "check-adapted", "--config", str(cfg), "--h", "x", "--out", str(tmp_path / "b"))
    assert code == cli.EXIT_OK
    assert load(tmp_path / "b" / "adapted.json")["config"]["h"] == "x"


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"hh": "x"}))
    code, _, err = run(capsys, "check-adapted", "--config", str(cfg))
    assert code == cli.EXIT_USAGE and "hh" in err


# determinism --------------------------------------------------------------------

def test_check_adapted_deterministic(tmp_path, capsys):
    run(capsys, "check-adapted", "--out", str(tmp_path))
    first = {p: (tmp_path / p).read_bytes() for p in ("adapted.json", "gamma.csv")}
    run(capsys, "check-adapted", "--out", str(tmp_path))
    assert all((tmp_path / p).read_bytes() == b for p, b in first.items())


def test_build_deterministic(demo, tmp_path, capsys):
    _, d = demo
    assert run(capsys, "build", "--out", str(tmp_path))[0] == cli.EXIT_OK
    assert (tmp_path / "bundle.json").read_bytes() == (d / "bundle.json").read_bytes()
    a, b = load(tmp_path / "build.json"), load(d / "build.json")
    a.pop("config"), b.pop("config")
    assert a == b


# simulate edge cases ----------------------------------------------------------------

def test_simulate_max_steps_graceful(tmp_path, capsys):
    code, out, _ = run(capsys, "simulate", "--h", "x^2+y^2-1/4", "--max-steps", "10", "--max-escalations", "0",
                       "--out", str(tmp_path))
    assert code == cli.EXIT_FAIL
    assert json.loads(out)["status"] == "max_steps"
    rep = load(tmp_path / "simulate.json")
    assert rep["status"] == "max_steps" and not rep["passed"]
    assert (tmp_path / "trajectory.csv").exists()


def test_simulate_seed_failure(tmp_path, capsys):
    code, _, err = run(capsys, "simulate", "--h", "x^2+y^2-1/4", "--H", "x^2+y^2-z", "--out", str(tmp_path))
    assert code == cli.EXIT_FAIL and "seed failure" in err
    assert "seed failure" in load(tmp_path / "simulate.json")["error"]


def test_alpha_scan_records_first_pass(tmp_path, capsys):
    code, _, _ = run(capsys, "verify-convergence", "--alpha", "scan", "--out", str(tmp_path))
    assert code == cli.EXIT_OK
    info = load(tmp_path / "convergence.json")["surface"]
    assert info["mode"] == "scan"
    passes = [e["alpha"] for e in info["log"] if e["pass"]]
    assert passes == [info["alpha"]] and info["log"][-1]["pass"]


# report ----------------------------------------------------------------------------

def test_report_empty_dir(tmp_path, capsys):
    assert run(capsys, "report", "--out", str(tmp_path))[0] == cli.EXIT_FAIL


def test_report_partial(tmp_path, capsys):
    run(capsys, "check-adapted", "--out", str(tmp_path))
    assert run(capsys, "report", "--out", str(tmp_path))[0] == cli.EXIT_OK
    rep = load(tmp_path / "report.json")
    assert rep["sections"]["adaptedness"]["status"] == "pass"
    assert rep["sections"]["dynamics"]["status"] == "missing"
    assert "simulate.json" in rep["missing"]
    assert (tmp_path / "report.html").exists()


def test_demo_full(demo):
    code, d = demo
    assert code == cli.EXIT_OK
    rep = load(d / "report.json")
    assert set(rep["sections"]) == set(cli.REPORT_SECTIONS)
    assert all(s["status"] == "pass" for s in rep["sections"].values())
    assert rep["missing"] == []
    sim = load(d / "simulate.json")
    assert sim["cross_chart"]["max_deviation"] <= 1e-6


def test_every_figure_has_data(demo):
    _, d = demo
    data = {"slices.svg": ["slices.csv"], "chart.svg": ["trajectory.csv", "gamma.csv"],
            "sphere.svg": ["secants.csv", "alpha_gamma.csv"]}
    assert sorted(p.name for p in d.glob("*.svg")) == sorted(data)
    for fig, sources in data.items():
        assert (d / fig).read_text().lstrip().startswith("<")
        for s in sources:
            assert len((d / s).read_text().splitlines()) > 2
