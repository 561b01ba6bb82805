import json

import pytest

from quiveriq.cli import main, parse_quiver, rat_str

FLAG = """quiver:
  gauge_ranks: [1, 2]
  frame_rank: 3
node: 1
caps: [2, 2]
seeds: [1, 2]
"""


@pytest.fixture
def cfg(tmp_path):
    def write(text, name="run.yaml"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_verify_pass(cfg, capsys):
    code, out = run(["verify", "--config", cfg(FLAG)], capsys)
    doc = json.loads(out.out)
    assert code == 0 and doc["verdict"] == "pass"
    assert doc["config"]["seeds"] == [1, 2] and len(doc["runs"]) == 2
    assert doc["runs"][0]["case"] == "GapAtLeast2"


def test_verify_grassmannian_inline(capsys):
    code, out = run(["verify", "--quiver", "1;3", "--node", "1", "--caps", "5",
                     "--seed", "1", "--seed", "2"], capsys)
    assert code == 0 and json.loads(out.out)["verdict"] == "pass"


def test_rank_violation_exit_2(cfg, capsys):
    bad = FLAG.replace("[1, 2]", "[3, 2]")
    code, out = run(["verify", "--config", cfg(bad)], capsys)
    assert code == 2
    assert "N1 <= N2 <= ... <= ND" in out.err and ":2:" in out.err


@pytest.mark.parametrize("text", ["quiver: [1", "caps: [1]\n", FLAG.replace("caps: [2, 2]", "caps: [2]")])
def test_other_config_errors(cfg, capsys, text):
    code, _ = run(["verify", "--config", cfg(text)], capsys)
    assert code == 2


def test_negative_control_exit_1(cfg, capsys):
    code, out = run(["verify", "--config", cfg(FLAG), "--negative-control"], capsys)
    doc = json.loads(out.out)
    assert code == 1 and doc["verdict"] == "fail"
    assert any(p["mismatches"] for r in doc["runs"] for p in r["pairs"])


def test_equal_case_reports_directions(capsys):
    code, out = run(["verify", "--quiver", "1,1;1", "--node", "2", "--caps", "2,2"], capsys)
    doc = json.loads(out.out)
    assert code == 0 and doc["direction_resolution"] == {"divide": "fail", "multiply": "pass"}


def test_ifun_rows_and_determinism(tmp_path, capsys):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    args = ["ifun", "--quiver", "1,2;3", "--caps", "2,2", "--fp", "3", "--seed", "7"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    doc = json.loads(out1.read_text())
    assert doc["series"]["q1^0*q2^0"] == "1/1"


def test_ifun_gr12_value(cfg, capsys):
    text = 'quiver: {gauge_ranks: [1], frame_rank: 2}\ncaps: [3]\nparams: {lambdas: ["0/1", "1/2"]}\n'
    code, out = run(["ifun", "--config", cfg(text)], capsys)
    assert code == 0 and json.loads(out.out)["series"]["q1^1"] == "2/1"
    code, out = run(["ifun", "--config", cfg(text), "--side", "am", "--node", "1"], capsys)
    doc = json.loads(out.out)
    assert code == 0 and doc["series"]["q1^0"] == "1/1"
    assert all(int(k.split("^")[1]) <= 0 for k in doc["series"])


def test_explicit_params_validated(cfg, capsys):
    text = 'quiver: {gauge_ranks: [1], frame_rank: 2}\ncaps: [3]\nparams: {lambdas: ["0/1", "1/1"]}\n'
    code, out = run(["ifun", "--config", cfg(text)], capsys)
    assert code == 2 and "non-integer" in out.err
    code, _ = run(["ifun", "--config", cfg(text.replace('"1/1"', "0.5"))], capsys)
    assert code == 2


def test_rat_str():
    assert rat_str(2) == "2/1" and rat_str("-3/6") == "-1/2"


def test_ifun_unknown_fp(capsys):
    code, out = run(["ifun", "--quiver", "1;2", "--caps", "3", "--fp", "9"], capsys)
    assert code == 2 and "unknown fixed point" in out.err


def test_fixed_points_listing(capsys):
    code, out = run(["fixed-points", "--quiver", "1,2;3"], capsys)
    doc = json.loads(out.out)
    assert code == 0 and doc["count"] == 6
    assert [f["id"] for f in doc["fixed_points"]] == list(range(6))
    assert doc["fixed_points"][0]["images"] == {"1": "'{2} | {1,2}", "2": "{1} | '{3}"}
    _, again = run(["fixed-points", "--quiver", "1,2;3"], capsys)
    assert again.out == out.out


def test_oracle_default(capsys):
    code, out = run(["oracle"], capsys)
    doc = json.loads(out.out)
    assert code == 0 and doc["verdict"] == "pass"
    assert any(r["outcome"] == "not-applicable" for r in doc["checks"])


@pytest.mark.parametrize("argv", [["fixed-points", "--quiver", "a;b"],
                                  ["verify", "--quiver", "1;3", "--node", "1", "--caps", "x"]])
def test_malformed_flags_exit_2(argv, capsys):
    code, out = run(argv, capsys)
    assert code == 2 and "config error" in out.err


def test_parse_quiver():
    assert parse_quiver("1,2;3;N0=1") == {"gauge_ranks": (1, 2), "frame_rank": 3, "taut_rank": 1}
