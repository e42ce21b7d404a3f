import json
import math
import os

import pytest

from spinamp.cli import main
from spinamp.io import format_number, parse_time, render_csv, write_text_atomic


def test_parse_time_tokens():
    assert parse_time("pi") == math.pi
    assert parse_time("pi/2") == math.pi / 2
    assert parse_time("3pi/4") == 3 * math.pi / 4
    assert parse_time("2*pi") == 2 * math.pi
    assert parse_time("1.25") == 1.25
    with pytest.raises(ValueError):
        parse_time("two pies")


def test_format_number():
    assert format_number(0.1) == "0.1"
    assert format_number(1.0 / 3.0) == "0.333333333333333"
    assert format_number(True) == "true"
    assert format_number(7) == "7"


def test_atomic_write(tmp_path):
    path = tmp_path / "data.csv"
    write_text_atomic(str(path), "hello\n")
    assert path.read_text() == "hello\n"
    assert [p for p in os.listdir(tmp_path)] == ["data.csv"]


def test_render_csv_uses_lf_and_comments():
    text = render_csv(("a", "b"), [(1, 0.5)], ["# note"])
    assert text == "# note\na,b\n1,0.5\n"


def test_verify_equivalence_ok(capsys):
    assert main(["verify-equivalence", "--n-max", "5", "--profiles", "3"]) == 0
    out = capsys.readouterr().out
    assert "N=5" in out


def test_verify_equivalence_negative_control(capsys):
    assert main(["verify-equivalence", "--n-max", "4", "--profiles", "1",
                 "--corrupt"]) == 1
    assert "mismatch" in capsys.readouterr().out


def test_verify_equivalence_above_cap():
    assert main(["verify-equivalence", "--n-max", "13"]) == 2


def test_amplify_json(tmp_path):
    out = tmp_path / "amp.json"
    assert main(["amplify", "--n", "6", "--time", "pi/2",
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert abs(doc["result"]["fidelity"] - 1.0) < 1e-8
    assert doc["config"]["t"] == math.pi / 2


def test_amplify_requires_n():
    assert main(["amplify"]) == 2


def test_transfer_command(tmp_path):
    out = tmp_path / "t.json"
    assert main(["transfer", "--n", "6", "--family", "cluster",
                 "--source", "010000", "--target", "000001",
                 "--time", "pi/2", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["result"]["fidelity"] > 1.0 - 1e-8


def test_transfer_rejects_wrong_length():
    assert main(["transfer", "--n", "6", "--source", "01", "--target", "10"]) == 2


def test_scan_csv(tmp_path):
    out = tmp_path / "scan.csv"
    assert main(["scan", "--n", "2", "--family", "exchange",
                 "--profile", "uniform", "--source", "10", "--target", "01",
                 "--t-max", "2", "--grid-step", "0.05", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# spinamp v")
    header = [l for l in lines if not l.startswith("#")][0]
    assert header == "t,fidelity"
    star = [l for l in lines if l.startswith("# t_star")][0]
    assert abs(float(star.split(":")[1]) - math.pi / 2) < 1e-5


def test_ca_compare_csv(tmp_path):
    out = tmp_path / "ca.csv"
    assert main(["ca-compare", "--n", "4", "--out", str(out)]) == 0
    rows = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert rows[0] == ("input,continuous_output,continuous_prob,"
                       "mirror_output,agree,ca_hit_step")
    assert len(rows) == 17
    assert all(",true," in r for r in rows[1:])


def test_noise_sweep_reruns_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["noise-sweep", "--n", "6", "--trials", "150", "--p", "0,0.1",
            "--seed", "5"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_star_demo(tmp_path):
    out = tmp_path / "star.json"
    assert main(["star-demo", "--spikes", "3", "--length", "3",
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["result"]["max_pairwise_commutator"] < 1e-12
    assert doc["result"]["all_ones_probability"] > 1.0 - 1e-8


def test_star_demo_respects_cap():
    assert main(["star-demo", "--spikes", "5", "--length", "4"]) == 2


def test_config_file_supplies_defaults(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 6, "time": "pi/2"}))
    out = tmp_path / "amp.json"
    assert main(["amplify", "--config", str(cfg), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["config"]["n"] == 6

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"unknown-key": 1}))
    assert main(["amplify", "--config", str(bad)]) == 2
