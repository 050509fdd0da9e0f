import json
from importlib import resources

import jsonschema
import pytest

from totient_lab import cli
from totient_lab.carmichael import run_search, write_log
from totient_lab.census import build_census, save_snapshot


def run_cli(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr().out
    return code, out


def schema(name: str) -> dict:
    ref = resources.files("totient_lab") / "schemas" / f"{name}.json"
    return json.loads(ref.read_text())


def validate(name: str, payload: dict) -> None:
    jsonschema.validate(payload, schema(name))


def test_invphi_table(capsys):
    code, out = run_cli(capsys, "invphi", "--m", "4")
    assert code == 0
    assert out.strip() == "5 8 10 12"


def test_invphi_json_schema(capsys):
    code, out = run_cli(capsys, "invphi", "--m", "6", "--out", "json")
    assert code == 0
    payload = json.loads(out)
    validate("invphi", payload)
    assert payload["members"] == ["7", "9", "14", "18"]


def test_census_table_and_json(capsys):
    code, out = run_cli(capsys, "census", "--x", "10000", "--k-max", "2")
    assert code == 0
    assert any(line.split() == ["V", "2374"] for line in out.splitlines())
    code, out = run_cli(capsys, "census", "--x", "10000", "--out", "json")
    payload = json.loads(out)
    validate("census", payload)
    assert payload["V"] == 2374


def test_census_snapshot_flag(capsys, tmp_path):
    snap = str(tmp_path / "c.bin")
    code, _ = run_cli(capsys, "census", "--x", "5000", "--snapshot-out", snap)
    assert code == 0
    code, out = run_cli(capsys, "mk-table", "--snapshot", snap, "--k-max", "13", "--out", "json")
    assert code == 0
    payload = json.loads(out)
    validate("mk_table", payload)
    assert payload["m_k"]["13"] == 396


def test_constants_json(capsys):
    code, out = run_cli(capsys, "constants", "--precision", "25", "--terms", "20", "--out", "json")
    assert code == 0
    payload = json.loads(out)
    validate("constants", payload)
    assert payload["rho"].startswith("0.542598586098471021959")


def test_simplex_json(capsys):
    code, out = run_cli(
        capsys, "simplex", "-L", "4", "--samples", "20000", "--seed", "11", "--out", "json"
    )
    assert code == 0
    payload = json.loads(out)
    validate("simplex", payload)
    assert 0 < payload["estimate"] < payload["exact_unboxed"]


def test_seed_does_not_change_census(capsys):
    _, a = run_cli(capsys, "census", "--x", "3000", "--seed", "1", "--out", "json")
    _, b = run_cli(capsys, "census", "--x", "3000", "--seed", "2", "--out", "json")
    assert a == b


def test_workers_do_not_change_census(capsys):
    _, a = run_cli(capsys, "census", "--x", "30000", "--workers", "1", "--out", "json")
    _, b = run_cli(capsys, "census", "--x", "30000", "--workers", "3", "--out", "json")
    assert a == b


def test_carmichael_run_and_verify(capsys, tmp_path):
    log_path = str(tmp_path / "run.jsonl")
    code, out = run_cli(
        capsys, "carmichael", "--case", "I", "--target-log10", "80", "--log", log_path,
        "--out", "json",
    )
    assert code == 0
    payload = json.loads(out)
    validate("carmichael_run", payload)
    assert payload["log10_bound"] >= 80
    for line in open(log_path):
        validate("carmichael_log_line", json.loads(line))
    code, out = run_cli(capsys, "verify", "--certificates", log_path)
    assert code == 0 and out.startswith("OK")
    code, out = run_cli(capsys, "carmichael", "--verify", log_path)
    assert code == 0 and out.startswith("OK")


def test_verify_rejects_corrupt_log(capsys, tmp_path):
    state = run_search("II", 60.0)
    path = str(tmp_path / "run.jsonl")
    write_log(state, path)
    lines = open(path).read().splitlines()
    obj = json.loads(lines[0])
    obj["P"] = str(int(obj["P"]) + 2)
    with open(path, "w") as fh:
        fh.write(json.dumps(obj) + "\n" + "\n".join(lines[1:]) + "\n")
    code, out = run_cli(capsys, "verify", "--certificates", path)
    assert code == 1 and out.startswith("FAIL")


def test_sierpinski_cli(capsys, tmp_path):
    snap = str(tmp_path / "seeds.bin")
    save_snapshot(build_census("phi", 4000), snap)
    code, out = run_cli(
        capsys, "sierpinski", "--target-k", "17", "--seed-table", snap, "--out", "json"
    )
    assert code == 0
    payload = json.loads(out)
    validate("sierpinski", payload)
    assert payload["k"] == 17 and payload["depth"] == 0


def test_structure_cli(capsys, tmp_path):
    csv = str(tmp_path / "hist.csv")
    code, out = run_cli(
        capsys, "structure", "--x", "20000", "--sample", "40", "--csv", csv, "--out", "json"
    )
    assert code == 0
    payload = json.loads(out)
    validate("structure", payload)
    assert open(csv).readline().startswith("histogram,")


def test_config_file_defaults(capsys, tmp_path):
    cfg = tmp_path / "cfg"
    cfg.write_text("m = 4\n")
    code, out = run_cli(capsys, "invphi", "--m", "6", "--config", str(cfg))
    assert out.strip() == "7 9 14 18"  # explicit flag wins
    code, out = run_cli(capsys, "invphi", "--config", str(cfg))
    assert out.strip() == "5 8 10 12"  # config supplies the default


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        cli.run(["census"])  # missing required --x
    assert exc.value.code == 2


def test_domain_error_exit_code(capsys):
    code = cli.run(["mk-table"])  # neither --x nor --snapshot
    assert code == 1
    assert "error:" in capsys.readouterr().err
