import hashlib
import json
import random

import pytest

from coopstore.cli import main


def run(argv):
    return main([str(a) for a in argv])


@pytest.fixture
def sample_file(tmp_path):
    data = bytes(random.Random(99).randrange(256) for _ in range(500))
    path = tmp_path / "input.bin"
    path.write_bytes(data)
    return path


def encode_dir(tmp_path, sample_file, extra=()):
    out = tmp_path / "shards"
    assert run(["encode", "--input", sample_file, "--out-dir", out, *extra]) == 0
    return out


class TestEncodeDecode:
    def test_round_trip(self, tmp_path, sample_file):
        shards = encode_dir(tmp_path, sample_file)
        assert (shards / "manifest.json").exists()
        out = tmp_path / "out.bin"
        assert run(["decode", "--shard-dir", shards, "--output", out]) == 0
        assert out.read_bytes() == sample_file.read_bytes()

    def test_round_trip_from_any_k_nodes(self, tmp_path, sample_file):
        shards = encode_dir(tmp_path, sample_file)
        out = tmp_path / "out.bin"
        assert run(["decode", "--shard-dir", shards, "--output", out, "--nodes", "3,5,6"]) == 0
        assert out.read_bytes() == sample_file.read_bytes()

    def test_binary_field_round_trip(self, tmp_path, sample_file):
        shards = encode_dir(tmp_path, sample_file, extra=["--field", "m=4"])
        out = tmp_path / "out.bin"
        assert run(["decode", "--shard-dir", shards, "--output", out]) == 0
        assert out.read_bytes() == sample_file.read_bytes()

    def test_deterministic_shards(self, tmp_path, sample_file):
        s1_dir = encode_dir(tmp_path / "a", sample_file)
        s2_dir = encode_dir(tmp_path / "b", sample_file)
        for f1 in sorted(s1_dir.glob("*.shard")):
            f2 = s2_dir / f1.name
            assert f1.read_bytes() == f2.read_bytes()

    def test_empty_input_rejected(self, tmp_path):
        empty = tmp_path / "empty"
        empty.write_bytes(b"")
        assert run(["encode", "--input", empty, "--out-dir", tmp_path / "s"]) == 2


class TestRepair:
    def test_regenerated_files_byte_identical(self, tmp_path, sample_file):
        shards = encode_dir(tmp_path, sample_file)
        before = {
            p.name: hashlib.sha256(p.read_bytes()).hexdigest()
            for p in shards.glob("*.shard")
        }
        (shards / "node_002.shard").unlink()
        (shards / "node_005.shard").unlink()
        assert run(["repair", "--shard-dir", shards, "--group", "2,5"]) == 0
        after = {
            p.name: hashlib.sha256(p.read_bytes()).hexdigest()
            for p in shards.glob("*.shard")
        }
        assert before == after

    def test_explicit_helpers(self, tmp_path, sample_file):
        shards = encode_dir(tmp_path, sample_file)
        original = (shards / "node_001.shard").read_bytes()
        (shards / "node_001.shard").unlink()
        assert run(["repair", "--shard-dir", shards, "--group", "1,6", "--helpers", "2,3,4"]) == 0
        assert (shards / "node_001.shard").read_bytes() == original

    def test_overlapping_group_and_helpers(self, tmp_path, sample_file):
        shards = encode_dir(tmp_path, sample_file)
        assert run(["repair", "--shard-dir", shards, "--group", "1,2", "--helpers", "2,3,4"]) == 1


class TestAttack:
    def test_code_a_report(self, tmp_path):
        report = tmp_path / "r.json"
        assert run(["attack", "--variant", "code-a", "--seed", "5", "--report", report]) == 0
        doc = json.loads(report.read_text())
        assert doc["pass"] is True
        assert doc["results"]["recovered"] == "EXACT"
        assert doc["results"]["leaked_symbols"] == 6
        assert any(lbl.startswith("granted") for lbl in doc["results"]["leaked_rows"])

    def test_code_b_report(self, tmp_path):
        report = tmp_path / "r.json"
        assert run(["attack", "--variant", "code-b", "--seed", "5", "--report", report]) == 0
        doc = json.loads(report.read_text())
        assert doc["results"]["recovered"] == "EXACT"
        assert doc["results"]["helpers"] == [4, 5, 6]

    def test_inadmissible_omega_is_config_error(self):
        assert run(["attack", "--variant", "code-a", "--field", "p=13", "--omega", "2"]) == 2

    def test_seed_determinism_via_env(self, tmp_path, monkeypatch):
        r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
        monkeypatch.setenv("COOPSTORE_SEED", "31337")
        assert run(["attack", "--variant", "code-b", "--report", r1]) == 0
        assert run(["attack", "--variant", "code-b", "--report", r2]) == 0
        d1, d2 = json.loads(r1.read_text()), json.loads(r2.read_text())
        assert d1["results"] == d2["results"]
        assert d1["config"]["seed"] == 31337


class TestSweepVerify:
    def test_capacity_sweep_s1(self, tmp_path):
        report = tmp_path / "r.json"
        csv_path = tmp_path / "table.csv"
        assert run(["capacity-sweep", "--report", report, "--csv", csv_path]) == 0
        doc = json.loads(report.read_text())
        assert doc["pass"] is True
        assert doc["results"]["placements"] == 73
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "l1,l2,E,F,measured,predicted,match"
        assert len(lines) == 74

    def test_capacity_sweep_code_b_measured_only(self, tmp_path):
        report = tmp_path / "r.json"
        assert run(["capacity-sweep", "--variant", "code-b", "--report", report]) == 0
        doc = json.loads(report.read_text())
        cells = doc["results"]["cells"]
        assert all(c["predicted"] == "not-covered" for c in cells)
        vulnerable = [c for c in cells if c["l1"] == 0 and c["l2"] == 1 and c["F"] in "2345"]
        assert vulnerable and all(c["measured"] == 0 for c in vulnerable)

    def test_sweep_pairs_from_config(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"sweep": {"pairs": [[0, 1]]}}))
        report = tmp_path / "r.json"
        assert run(["capacity-sweep", "--config", cfg, "--report", report]) == 0
        doc = json.loads(report.read_text())
        assert doc["results"]["placements"] == 6

    def test_single_eve_placement_from_config(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"eve": {"E": [4], "F": [1]}}))
        report = tmp_path / "r.json"
        assert run(["capacity-sweep", "--config", cfg, "--report", report]) == 0
        doc = json.loads(report.read_text())
        (cell,) = doc["results"]["cells"]
        assert cell["measured"] == cell["predicted"] == 1
        assert (cell["E"], cell["F"]) == ("4", "1")

    def test_empty_sweep_range_is_vacuous_success(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"sweep": {"pairs": []}}))
        report = tmp_path / "r.json"
        assert run(["capacity-sweep", "--config", cfg, "--report", report]) == 0
        doc = json.loads(report.read_text())
        assert doc["results"]["placements"] == 0 and doc["pass"] is True

    def test_verify_stable_passes(self, tmp_path):
        report = tmp_path / "r.json"
        assert run(["verify", "--report", report]) == 0
        doc = json.loads(report.read_text())
        assert doc["pass"] is True
        assert all(c["passed"] for c in doc["results"]["lemmas"].values())
        assert doc["results"]["stability"] == "pass"
        assert doc["results"]["bandwidth"] == {"msr_total": "12", "mscr_total": "8"}

    def test_verify_code_b_fails_with_witness(self, tmp_path, capsys):
        report = tmp_path / "r.json"
        assert run(["verify", "--variant", "code-b", "--report", report]) == 1
        doc = json.loads(report.read_text())
        assert doc["pass"] is False
        assert "differs between" in doc["results"]["stability"]
        out = capsys.readouterr().out
        assert "stability witness" in out

    def test_secure_verify(self, tmp_path):
        report = tmp_path / "r.json"
        assert run(["secure-verify", "--l1", "1", "--l2", "1", "--report", report]) == 0
        doc = json.loads(report.read_text())
        assert doc["results"]["secret_symbols"] == 1
        assert len(doc["results"]["placements"]) == 30
        assert all(p["mutual_information"] == 0 for p in doc["results"]["placements"])


def test_bad_params_are_config_errors():
    assert run(["capacity-sweep", "--params", "n=4,k=3,d=3,t=2"]) == 2
    assert run(["verify", "--field", "p=10"]) == 2
    assert run(["verify", "--params", "nonsense"]) == 2
