"""Command-line interface behavior and output formats."""

import json
import random

import pytest

from compodna import AlphabetParams, MarkerCodeParams, message_radices
from compodna.cli import SIMULATE_CSV_HEADER, main
from compodna.rll import SWEEP_CSV_HEADER


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


BASE_CONFIG = {
    "code_params": {"q": 4, "M": 6, "n": 40, "ell": 3, "marker_base": 1, "anchor_base": 2},
    "strand_count": 300,
    "break_model": {"kind": "exactly_t", "t": 1, "bond_range": [5, 35]},
    "sample_size": None,
    "with_replacement": False,
    "seed": 11,
}


class TestAlphabet:
    def test_dna_example(self, capsys):
        code, out, _ = run_cli(capsys, "alphabet", "--q", "4", "--M", "6", "--excluded-base", "1")
        assert code == 0
        assert json.loads(out) == {"Q": 84, "R": 56}

    def test_default_excluded_base(self, capsys):
        code, out, _ = run_cli(capsys, "alphabet", "--q", "2", "--M", "5")
        assert code == 0
        assert json.loads(out) == {"Q": 6, "R": 5}

    def test_invalid_base_is_stage_error(self, capsys):
        code, _, err = run_cli(capsys, "alphabet", "--q", "4", "--M", "6", "--excluded-base", "9")
        assert code == 1
        assert "error" in err


class TestCount:
    def test_example(self, capsys):
        code, out, _ = run_cli(capsys, "count", "--Q", "2", "--R", "1", "--ell", "2", "--n", "8")
        assert code == 0
        assert out.strip() == "55"

    def test_brute_agrees_with_dp(self, capsys):
        for Q, R, ell, n in [(2, 1, 2, 8), (3, 2, 3, 10), (4, 1, 1, 6)]:
            args = ["count", "--Q", str(Q), "--R", str(R), "--ell", str(ell), "--n", str(n)]
            _, dp_out, _ = run_cli(capsys, *args)
            _, brute_out, _ = run_cli(capsys, *args, "--brute")
            assert dp_out == brute_out

    def test_brute_too_large_is_stage_error(self, capsys):
        code, _, err = run_cli(capsys, "count", "--Q", "2", "--R", "1", "--ell", "2", "--n", "30", "--brute")
        assert code == 1
        assert "error" in err


class TestBounds:
    def test_csv_table(self, capsys):
        code, out, _ = run_cli(
            capsys, "bounds", "--Q", "84", "--R", "56", "--ell-range", "2:4", "--n-range", "20:40:10"
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == SWEEP_CSV_HEADER
        assert len(lines) == 1 + 3 * 3
        first = lines[1].split(",")
        assert first[:4] == ["84", "56", "2", "20"]
        int(first[4])
        float(first[5])

    def test_single_point_ranges(self, capsys):
        code, out, _ = run_cli(capsys, "bounds", "--Q", "2", "--R", "1", "--ell-range", "2", "--n-range", "8")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 2
        assert lines[1].split(",")[4] == "55"


class TestOptimalEll:
    def test_dna_n100(self, capsys):
        code, out, _ = run_cli(capsys, "optimal-ell", "--q", "4", "--M", "6", "--n", "100")
        assert code == 0
        obj = json.loads(out)
        assert obj["ell_integer"] == 3
        assert obj["ell_formula"] == pytest.approx(3.449855845460932, abs=1e-9)
        assert obj["redundancy_closed_form"] == pytest.approx(17.303527325407853, abs=1e-9)
        assert obj["redundancy_at_integer"] == pytest.approx(17.4384408465381, abs=1e-9)


class TestEncodeDecode:
    def test_roundtrip_via_files(self, capsys, tmp_path):
        params = MarkerCodeParams(alphabet=AlphabetParams(q=4, M=6), n=40, ell=3)
        rng = random.Random(2)
        message = [rng.randrange(r) for r in message_radices(params)]
        msg_path = tmp_path / "message.json"
        msg_path.write_text(json.dumps(message))
        code, matrix_json, _ = run_cli(
            capsys, "encode", "--q", "4", "--M", "6", "--n", "40", "--ell", "3",
            "--message", str(msg_path),
        )
        assert code == 0
        matrix_path = tmp_path / "matrix.json"
        matrix_path.write_text(matrix_json)
        code, decoded, _ = run_cli(capsys, "decode", "--ell", "3", "--matrix", str(matrix_path))
        assert code == 0
        assert json.loads(decoded) == message

    def test_encode_rejects_radix_violation(self, capsys, tmp_path):
        msg_path = tmp_path / "message.json"
        msg_path.write_text(json.dumps([84] + [0] * 29))  # column 6 is free, radix 84
        code, _, err = run_cli(
            capsys, "encode", "--q", "4", "--M", "6", "--n", "40", "--ell", "3",
            "--message", str(msg_path),
        )
        assert code == 1
        assert "radix" in err

    def test_decode_rejects_tampered_matrix(self, capsys, tmp_path):
        msg_path = tmp_path / "message.json"
        msg_path.write_text(json.dumps([0] * 30))
        _, matrix_json, _ = run_cli(
            capsys, "encode", "--q", "4", "--M", "6", "--n", "40", "--ell", "3",
            "--message", str(msg_path),
        )
        obj = json.loads(matrix_json)
        obj["columns"][1] = [0, 6, 0, 0]  # overwrite a marker-interior column
        matrix_path = tmp_path / "matrix.json"
        matrix_path.write_text(json.dumps(obj))
        code, _, err = run_cli(capsys, "decode", "--ell", "3", "--matrix", str(matrix_path))
        assert code == 1
        assert "column 2" in err


class TestSimulate:
    def _write_config(self, tmp_path, **overrides):
        config = dict(BASE_CONFIG, **overrides)
        path = tmp_path / "config.json"
        path.write_text(json.dumps(config))
        return path

    def test_single_run_report(self, capsys, tmp_path):
        path = self._write_config(tmp_path)
        code, out, _ = run_cli(capsys, "simulate", "--config", str(path))
        assert code == 0
        obj = json.loads(out)
        assert obj["exact_recovery"] is True
        assert obj["fragments_sampled"] == 600

    def test_byte_identical_reruns(self, capsys, tmp_path):
        path = self._write_config(tmp_path)
        _, first, _ = run_cli(capsys, "simulate", "--config", str(path))
        _, second, _ = run_cli(capsys, "simulate", "--config", str(path))
        assert first == second

    def test_seed_flag_overrides_config(self, capsys, tmp_path):
        path = self._write_config(tmp_path)
        _, base, _ = run_cli(capsys, "simulate", "--config", str(path))
        _, overridden, _ = run_cli(capsys, "simulate", "--config", str(path), "--seed", "12")
        _, again, _ = run_cli(capsys, "simulate", "--config", str(path), "--seed", "12")
        assert overridden != base
        assert overridden == again

    def test_env_var_supplies_missing_seed(self, capsys, tmp_path, monkeypatch):
        config = dict(BASE_CONFIG)
        del config["seed"]
        path = tmp_path / "config.json"
        path.write_text(json.dumps(config))
        code, _, err = run_cli(capsys, "simulate", "--config", str(path))
        assert code == 1 and "seed" in err
        monkeypatch.setenv("COMPODNA_SEED", "11")
        code, out, _ = run_cli(capsys, "simulate", "--config", str(path))
        assert code == 0
        _, explicit, _ = run_cli(capsys, "simulate", "--config", str(self._write_config(tmp_path)))
        assert out == explicit

    def test_sweep_csv(self, capsys, tmp_path):
        configs = [dict(BASE_CONFIG, seed=s) for s in (1, 2)]
        path = tmp_path / "sweep.json"
        path.write_text(json.dumps(configs))
        code, out, _ = run_cli(capsys, "simulate", "--config", str(path), "--sweep")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == SIMULATE_CSV_HEADER
        assert len(lines) == 3
        assert lines[1].split(",")[0] == "1"
        assert lines[2].split(",")[0] == "2"
        assert lines[1].split(",")[-1] in ("true", "false")

    def test_sweep_requires_array(self, capsys, tmp_path):
        path = self._write_config(tmp_path)
        code, _, err = run_cli(capsys, "simulate", "--config", str(path), "--sweep")
        assert code == 1
        assert "array" in err

    def test_stage_error_exit_code(self, capsys, tmp_path):
        path = self._write_config(tmp_path, sample_size=100_000)  # pool is far smaller
        code, _, err = run_cli(capsys, "simulate", "--config", str(path))
        assert code == 1
        assert "error" in err

    def test_workers_flag_preserves_output(self, capsys, tmp_path):
        path = self._write_config(tmp_path)
        _, serial, _ = run_cli(capsys, "simulate", "--config", str(path))
        _, parallel, _ = run_cli(capsys, "simulate", "--config", str(path), "--workers", "4")
        assert serial == parallel


class TestVerify:
    def test_default_grid_passes(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--grid", "small")
        assert code == 0
        obj = json.loads(out)
        assert obj["passed"] is True
        assert obj["oracle_equivalence"]["failed"] == 0
        assert obj["summation_identities"]["failed"] == 0


class TestFlagErrors:
    def test_unknown_command_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_missing_required_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["count", "--Q", "2"])
        assert exc.value.code == 2
