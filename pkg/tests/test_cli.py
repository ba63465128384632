import copy
import json
import subprocess
import sys

import pytest

from qkz import cli
from qkz.rmatrix import clear_cache


def run(argv, capsys):
    clear_cache()
    code = cli.run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def bundled(name):
    return json.loads((cli.catalog_dir() / name).read_text())


@pytest.fixture
def no_disk_cache(monkeypatch):
    monkeypatch.delenv("QKZ_CACHE_DIR", raising=False)


def write(tmp_path, data, name="case.json"):
    f = tmp_path / name
    f.write_text(json.dumps(data))
    return str(f)


def test_catalog_is_bundled():
    names = [f.name for f in cli.catalog_files()]
    assert "case_A2.json" in names and "case_A3.json" in names
    for f in cli.catalog_files():
        cfg = cli.load_config(f)
        assert cfg.p != 0 and len(cfg.z) == len(cfg.factors)


def test_verify_case_a3(capsys, no_disk_cache):
    code, out, _ = run(["verify", "--config", "case_A3.json"], capsys)
    assert code == 0
    assert "[FAIL]" not in out and out.strip().endswith("case(s)")


def test_jordan_identity(capsys):
    code, out, _ = run(["jordan", "--identity", "--k", "4"], capsys)
    assert code == 0 and out.count("[PASS]") == 3


def test_jordan_hilbert_json(capsys):
    code, out, _ = run(["jordan", "--hilbert", "--r", "12", "--algebra", "quantum:2", "--json", "-"], capsys)
    assert code == 0
    assert {c["status"] for c in json.loads(out)["checks"]} == {"PASS"}


def test_resonance_lists_p(capsys):
    code, out, _ = run(["resonance", "--config", "case_A2.json", "--l", "1"], capsys)
    assert code == 0 and "p=-2 (k=1)" in out
    code, out, _ = run(["resonance", "--config", "case_A4_k1.json", "--l", "2", "--json", "-"], capsys)
    data = json.loads(out)[0]
    assert data["resonances"] == [{"k": 1, "p": "-2"}, {"k": 2, "p": "-3"}]


def test_blocks_and_irrep(capsys):
    code, out, _ = run(["blocks", "--config", "case_A3.json", "--json", "-"], capsys)
    data = json.loads(out)
    assert code == 0 and data["dim"] == 1 and data["k"] == 1
    assert data["basis"] == bundled("case_A3.json")["expected"]["basis"]
    code, out, _ = run(["irrep", "--n", "3", "--weight", "2,1,0", "--json", "-"], capsys)
    data = json.loads(out)[0]
    assert data["dim"] == data["weyl_dim"] == 8 and data["weights"]["1,1,1"] == 2


def test_rmatrix_subcommand(capsys, no_disk_cache):
    code, out, _ = run(["rmatrix", "--n", "2", "--weights", "1,0", "1,0", "--x", "3", "--check",
                        "--json", "-"], capsys)
    data = json.loads(out)
    assert code == 0
    assert [1, 1, "3/2"] in data["entries"] and [1, 2, "-1/2"] in data["entries"]
    assert {c["status"] for c in data["checks"]} == {"PASS"}


def test_nongeneric_parameter_exit_code(capsys, no_disk_cache, tmp_path):
    code, _, err = run(["rmatrix", "--n", "2", "--weights", "1,0", "1,0", "--x", "1"], capsys)
    assert code == 3 and "parameter 1" in err
    data = bundled("case_A3.json")
    data["z"] = ["0", "1", "11"]  # R(z_2 - z_1) hits the pole at 1
    code, _, err = run(["verify", "--config", write(tmp_path, data)], capsys)
    assert code == 3 and "non-generic spectral parameter" in err


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("n_rank"),
    lambda d: d.update(p="0"),
    lambda d: d.update(p="one"),
    lambda d: d.update(z=["0", "5"]),
    lambda d: d.update(factors=[[1, 0], [1]]),
    lambda d: d.update(factors=[[0, 1], [1, 0], [1, 0]]),
    lambda d: d.update(checks=["everything"]),
    lambda d: d.update(e_convention="other"),
    lambda d: d.update(colour="blue"),
    lambda d: d.update(l=-1),
])
def test_malformed_config_exit_code(mutate, capsys, tmp_path):
    data = bundled("case_A3.json")
    mutate(data)
    code, _, err = run(["verify", "--config", write(tmp_path, data)], capsys)
    assert code == 2 and err.startswith("error:")


def test_invalid_json_and_missing_file(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text("{")
    assert run(["verify", "--config", str(f)], capsys)[0] == 2
    assert run(["verify", "--config", str(tmp_path / "nope.json")], capsys)[0] == 2
    assert run(["verify"], capsys)[0] == 2
    assert run(["frobnicate"], capsys)[0] == 2


def test_report_is_deterministic(capsys, no_disk_cache, tmp_path):
    args = ["verify", "--config", "case_A2.json", "--config", "case_B3.json", "--checks",
            "e-forms,invariance,blocks"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(args + ["--json", str(a)], capsys)[0] == 0
    assert run(args + ["--json", str(b), "--parallel"], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert [d["case"] for d in data] == ["case_A2", "case_B3"]
    for d in data:
        for c in d["checks"]:
            assert set(c) <= {"name", "status", "witness", "detail"}


def test_corrupted_config_value_fails_with_witness(capsys, no_disk_cache, tmp_path):
    base = bundled("case_B3.json")
    mutations = {
        "z": lambda d: d["z"].__setitem__(1, "15"),
        "p": lambda d: d.update(p="-5/2"),
        "k": lambda d: d["expected"].update(k=2),
        "basis": lambda d: d["expected"]["basis"][0][0].__setitem__(1, "3"),
        "convention": lambda d: d.update(e_convention="printed"),
        "transport": lambda d: d["expected"]["transport"][0][0].__setitem__(1, "7/3"),
    }
    for label, mutate in mutations.items():
        data = copy.deepcopy(base)
        mutate(data)
        code, out, _ = run(["verify", "--config", write(tmp_path, data), "--json", "-"], capsys)
        fails = [c for c in json.loads(out)["checks"] if c["status"] != "PASS"]
        assert code == 1 and fails, label
        assert all(c.get("witness") for c in fails), label


def test_corrupted_cache_entry_fails_with_witness(capsys, monkeypatch, tmp_path):
    cache = tmp_path / "cache"
    monkeypatch.setenv("QKZ_CACHE_DIR", str(cache))
    args = ["verify", "--config", "case_A2.json", "--checks", "compatibility,invariance",
            "--json", "-"]
    assert run(args, capsys)[0] == 0
    files = sorted(cache.glob("*.json"))
    assert files
    for f in files:
        original = f.read_text()
        data = json.loads(original)
        r, c, v = data["triplets"][-1]
        data["triplets"][-1] = [r, c, "5/7" if v != "5/7" else "2"]
        f.write_text(json.dumps(data))
        code, out, _ = run(args, capsys)
        fails = [c for c in json.loads(out)["checks"] if c["status"] != "PASS"]
        assert code == 1 and fails, f.name
        assert all(c.get("witness") for c in fails)
        f.write_text(original)
    assert run(args, capsys)[0] == 0


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "qkz", "jordan", "--identity", "--k", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "[PASS]" in r.stdout
