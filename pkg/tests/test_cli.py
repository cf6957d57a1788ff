import json

import pytest

from conftest import REFERENCE_RECORDS
from gdict.cli import main


@pytest.fixture
def db_file(tmp_path):
    path = tmp_path / "db.txt"
    path.write_text("\n".join(REFERENCE_RECORDS) + "\n", encoding="utf-8")
    return path


def read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


class TestSynthDict:
    def test_writes_circuit_and_sidecar(self, tmp_path, db_file, capsys):
        out = tmp_path / "dict.qc"
        assert main(["synth-dict", str(db_file), "--out", str(out)]) == 0
        text = out.read_text(encoding="utf-8")
        assert text.startswith("REG index q0,q1\nREG data q2,")
        sidecar = read_json(tmp_path / "dict.qc.json")
        assert sidecar["records"] == 4
        assert sidecar["padded_records"] == 4
        assert sidecar["m"] == 2
        assert sidecar["n"] == 7
        assert sidecar["cubes_per_column"] == [2, 2, 1, 1, 2, 2, 1]
        assert sidecar["mcx_count"] == 11
        assert "11 gates" in capsys.readouterr().out

    def test_padding_reported(self, tmp_path):
        db = tmp_path / "three.txt"
        db.write_text("00\n01\n10\n", encoding="utf-8")
        out = tmp_path / "d.qc"
        assert main(["synth-dict", str(db), "--out", str(out)]) == 0
        sidecar = read_json(tmp_path / "d.qc.json")
        assert sidecar["records"] == 3
        assert sidecar["padded_records"] == 4

    def test_empty_file_is_parse_error(self, tmp_path, capsys):
        db = tmp_path / "empty.txt"
        db.write_text("", encoding="utf-8")
        assert main(["synth-dict", str(db), "--out", str(tmp_path / "x.qc")]) == 1
        assert "parse error" in capsys.readouterr().err

    def test_ragged_file_reports_line(self, tmp_path, capsys):
        db = tmp_path / "bad.txt"
        db.write_text("01\n011\n", encoding="utf-8")
        assert main(["synth-dict", str(db), "--out", str(tmp_path / "x.qc")]) == 1
        assert "line 2" in capsys.readouterr().err


class TestGroverSearch:
    def test_reference_search(self, tmp_path, db_file):
        out = tmp_path / "result.json"
        assert main(["grover-search", str(db_file), "1010110", "--out", str(out)]) == 0
        report = read_json(out)
        assert report["top_index"] == 2
        assert report["top_record"] == "1010110"
        assert report["rounds"] == 1
        assert report["distribution"]["2"] == pytest.approx(1.0, abs=1e-9)

    def test_wrong_clause_length(self, db_file, capsys):
        assert main(["grover-search", str(db_file), "101"]) == 1
        assert "width" in capsys.readouterr().err

    def test_all_wild_clause_runs_zero_rounds(self, tmp_path, db_file):
        out = tmp_path / "result.json"
        assert main(["grover-search", str(db_file), "xxxxxxx", "--out", str(out)]) == 0
        report = read_json(out)
        assert report["rounds"] == 0
        assert report["plan"]["winner_count"] == 4
        assert all(p == pytest.approx(0.25) for p in report["distribution"].values())

    def test_no_winner(self, db_file, capsys):
        assert main(["grover-search", str(db_file), "1111111"]) == 1

    def test_csv_format(self, tmp_path, db_file):
        out = tmp_path / "dist.csv"
        assert main([
            "grover-search", str(db_file), "1010110", "--format", "csv", "--out", str(out)
        ]) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "value,probability"
        assert lines[1].startswith("2,")


class TestVerifyArith:
    def test_adder(self, capsys):
        assert main(["verify-arith", "adder", "--n", "3"]) == 0
        out = capsys.readouterr().out
        assert "adder n=3: 64/64 pass" in out
        assert "adder^-1 n=3: 64/64 pass" in out

    def test_modadd(self, capsys):
        assert main(["verify-arith", "modadd", "--modulus", "7"]) == 0
        assert "49/49 pass" in capsys.readouterr().out

    def test_modadd_unsupported_modulus(self, capsys):
        assert main(["verify-arith", "modadd", "--modulus", "6"]) == 1
        assert "2**k - 1" in capsys.readouterr().err

    def test_modexp(self, capsys):
        assert main(["verify-arith", "modexp", "--g", "3", "--modulus", "7"]) == 0
        assert "8/8 pass" in capsys.readouterr().out

    def test_modmul_subset(self, capsys):
        assert main(["verify-arith", "modmul", "--modulus", "7", "--a", "3"]) == 0
        assert "14/14 pass" in capsys.readouterr().out


class TestDHAttack:
    def test_precomputed_mode(self, tmp_path):
        out = tmp_path / "attack.json"
        assert main([
            "dh-attack", "--p", "7", "--g", "3", "--secret", "4",
            "--count", "4", "--mode", "precomputed", "--out", str(out),
        ]) == 0
        report = read_json(out)
        assert report["params"] == {"p": 7, "g": 3}
        assert report["target"] == 4
        assert report["recovered"] == 4
        assert report["probability"] == pytest.approx(1.0, abs=1e-9)
        assert list(report) == [
            "params", "target", "candidates", "mode", "rounds",
            "distribution", "recovered", "probability", "qubits", "gates",
        ]

    def test_rejects_nonprime(self, capsys):
        assert main(["dh-attack", "--p", "15", "--g", "2", "--secret", "1"]) == 1
        assert "not prime" in capsys.readouterr().err

    def test_needs_secret_or_target(self, capsys):
        assert main(["dh-attack", "--p", "7", "--g", "3"]) == 1
        assert main(["dh-attack", "--p", "7", "--g", "3", "--secret", "1",
                     "--target", "3"]) == 1

    def test_target_form(self, tmp_path):
        out = tmp_path / "attack.json"
        assert main([
            "dh-attack", "--p", "7", "--g", "3", "--target", "5",
            "--count", "4", "--mode", "precomputed", "--out", str(out),
        ]) == 0
        report = read_json(out)
        assert pow(3, report["recovered"], 7) == 5

    def test_larger_precomputed_attack(self, tmp_path):
        out = tmp_path / "attack.json"
        assert main([
            "dh-attack", "--p", "31", "--g", "3", "--secret", "11",
            "--count", "8", "--mode", "precomputed", "--out", str(out),
        ]) == 0
        report = read_json(out)
        assert report["probability"] == pytest.approx(0.9453125, abs=1e-6)


class TestSimulate:
    def test_dictionary_circuit_maps_index_two(self, tmp_path, db_file):
        circuit = tmp_path / "dict.qc"
        main(["synth-dict", str(db_file), "--out", str(circuit)])
        out = tmp_path / "dist.json"
        assert main([
            "simulate", str(circuit), "--init", "2", "--register", "data",
            "--out", str(out),
        ]) == 0
        report = read_json(out)
        assert report["distribution"] == {"86": 1.0}

    def test_empty_circuit(self, tmp_path):
        path = tmp_path / "noop.qc"
        path.write_text("REG q q0\n", encoding="utf-8")
        out = tmp_path / "dist.json"
        assert main(["simulate", str(path), "--out", str(out)]) == 0
        assert read_json(out)["distribution"] == {"0": 1.0}

    def test_hadamard_circuit_uniform(self, tmp_path):
        path = tmp_path / "h2.qc"
        path.write_text("H q0\nH q1\n", encoding="utf-8")
        out = tmp_path / "dist.json"
        assert main(["simulate", str(path), "--out", str(out)]) == 0
        dist = read_json(out)["distribution"]
        assert all(p == pytest.approx(0.25) for p in dist.values())
        assert len(dist) == 4

    def test_unknown_register(self, tmp_path, capsys):
        path = tmp_path / "h.qc"
        path.write_text("H q0\n", encoding="utf-8")
        assert main(["simulate", str(path), "--register", "bogus"]) == 1

    def test_parse_error_exit(self, tmp_path, capsys):
        path = tmp_path / "bad.qc"
        path.write_text("H q0\nWAT q1\n", encoding="utf-8")
        assert main(["simulate", str(path)]) == 1
        assert "line 2" in capsys.readouterr().err


class TestGatecount:
    def test_counts(self, tmp_path, db_file, capsys):
        circuit = tmp_path / "dict.qc"
        main(["synth-dict", str(db_file), "--out", str(circuit)])
        capsys.readouterr()
        assert main(["gatecount", str(circuit)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["gates"] == {"MCX": 11}

    def test_decompose(self, tmp_path, capsys):
        path = tmp_path / "c.qc"
        path.write_text("MCX [+q0,+q1,+q2,+q3] q4\n", encoding="utf-8")
        assert main(["gatecount", str(path), "--decompose"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["gates"]["toffoli_equiv"] == 5


class TestDeterminism:
    def test_byte_identical_outputs(self, tmp_path, db_file):
        for sub in ("a", "b"):
            d = tmp_path / sub
            d.mkdir()
            main(["synth-dict", str(db_file), "--out", str(d / "dict.qc")])
            main(["grover-search", str(db_file), "1010110", "--seed", "0",
                  "--out", str(d / "search.json")])
            main(["dh-attack", "--p", "7", "--g", "3", "--secret", "4",
                  "--count", "4", "--mode", "precomputed", "--seed", "0",
                  "--out", str(d / "attack.json")])
        for name in ("dict.qc", "dict.qc.json", "search.json", "attack.json"):
            a = (tmp_path / "a" / name).read_bytes()
            b = (tmp_path / "b" / name).read_bytes()
            assert a == b, name

    def test_bad_flag_returns_one(self, capsys):
        assert main(["grover-search"]) == 1
        assert main(["no-such-command"]) == 1
