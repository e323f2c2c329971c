import json
import math

import pytest

import mbnsharp as m
from mbnsharp.cli import _parse_n_list, main


class TestParseNList:
    def test_comma_list(self):
        assert _parse_n_list("1,4,9") == [1, 4, 9]

    def test_range(self):
        assert _parse_n_list("3..6") == [3, 4, 5, 6]

    def test_stepped_range(self):
        assert _parse_n_list("1..9..4") == [1, 5, 9]

    def test_dyadic(self):
        assert _parse_n_list("dyadic:25:200") == [25, 50, 100, 200]


class TestMrsCommand:
    def test_writes_table(self, tmp_path, capsys):
        out = tmp_path / "t.csv"
        assert main(["mrs", "--weight", "freud:2", "--n", "1,4,9", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "n,a_n,b_n,ratio,method"
        assert lines[1].startswith("1,1,2,2,")

    def test_stdout_when_no_out(self, capsys):
        assert main(["mrs", "--weight", "unweighted", "--n", "5"]) == 0
        assert "5,1,5,1,convention" in capsys.readouterr().out


class TestSolveCommand:
    def test_json_payload(self, capsys):
        assert main(["solve", "--weight", "unweighted", "--p", "2", "--N", "0",
                     "--n", "2", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["value"] == pytest.approx(0.75, rel=1e-10)
        assert payload["query"]["weight"] == "unweighted"
        assert payload["certified"] is True
        assert len(payload["extremal_coeffs"]) == 3
        assert "certificate" in payload

    def test_restricted_flag(self, capsys):
        assert main(["solve", "--weight", "freud:2", "--p", "inf", "--N", "0",
                     "--n", "4", "--restricted", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["query"]["variant"] == "restricted"
        assert payload["value"] == pytest.approx(1.0, abs=1e-8)

    def test_human_output(self, capsys):
        assert main(["solve", "--weight", "unweighted", "--p", "inf", "--N", "1",
                     "--n", "3"]) == 0
        assert "value = " in capsys.readouterr().out


class TestSweepVerifyCommands:
    def test_sweep_then_verify_pass(self, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["sweep", "--weight", "unweighted", "--p", "2", "--N", "1",
                     "--n", "10,20,40", "--out", str(out)]) == 0
        rows = m.rows_from_csv(out.read_text())
        assert len(rows) == 3
        assert main(["verify", "--in", str(out)]) == 0

    def test_sweep_append_merges_families(self, tmp_path):
        out = tmp_path / "s.csv"
        main(["sweep", "--weight", "unweighted", "--p", "2", "--N", "0",
              "--n", "4,8", "--out", str(out)])
        main(["sweep", "--weight", "unweighted", "--p", "inf", "--N", "0",
              "--n", "4,8", "--out", str(out), "--append"])
        rows = m.rows_from_csv(out.read_text())
        assert len(rows) == 4
        assert len({r.family() for r in rows}) == 2

    def test_verify_fails_on_corrupted_rows(self, tmp_path):
        out = tmp_path / "s.csv"
        main(["sweep", "--weight", "unweighted", "--p", "2", "--N", "1",
              "--n", "10,20", "--out", str(out)])
        rows = m.rows_from_csv(out.read_text())
        from dataclasses import replace
        rows[0] = replace(rows[0], M=rows[0].M_star * 1.2)
        rows[1] = replace(rows[1], M=rows[1].M_star * 0.8)
        out.write_text(m.rows_to_csv(rows))
        assert main(["verify", "--in", str(out)]) == 1

    def test_sweep_deterministic_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["sweep", "--weight", "freud:2", "--p", "2", "--N", "0", "--n", "5,10"]
        main(args + ["--out", str(a)])
        main(args + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestDiagCommand:
    def test_stable_diag(self, capsys):
        assert main(["diag-coeff", "--weight", "unweighted", "--p", "inf",
                     "--kmax", "0", "--eps", "0.1", "--n", "4,8,16"]) == 0
        assert "stable" in capsys.readouterr().out
