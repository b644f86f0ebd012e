import json
import subprocess
import sys

import pytest

from lfdspectrum import regress as regress_mod
from lfdspectrum.catalog import family
from lfdspectrum.cli import main
from lfdspectrum.divisor import presentation_to_json
from lfdspectrum.rational import rat
from lfdspectrum.regress import RegressRow, run_row


class TestCatalogCommand:
    def test_lists_families(self, capsys):
        assert main(["catalog"]) == 0
        out = capsys.readouterr().out
        for key in ("nc:N", "star:M", "dynkinD:M", "e6", "sym:K"):
            assert key in out


class TestAnalyzeCommand:
    def test_sym2_table(self, capsys):
        assert main(["analyze", "--family", "sym:2"]) == 0
        out = capsys.readouterr().out
        assert "spectrum generic      3/4, 1, 5/4" in out
        assert "special / reductive   False / no" in out.replace("  ", "  ")

    def test_json_byte_identical(self, tmp_path, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        assert main(["analyze", "--family", "star:3", "--json", str(a)]) == 0
        assert main(["analyze", "--family", "star:3", "--json", str(b)]) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()
        rep = json.loads(a.read_text())
        assert rep["schema_version"] == 1
        assert rep["spectrum"]["spectrum_generic"] == ["1", "2", "2", "3", "3", "4"]
        # timings stay out of the machine-readable payload
        assert "timing" not in json.dumps(rep)

    def test_section_from_file(self, tmp_path, capsys):
        fpath = tmp_path / "f.json"
        fpath.write_text(json.dumps({"f": [1, 0, 1, 1, 0, 1]}))
        assert main(["analyze", "--family", "star:3", "--f", str(fpath)]) == 0
        out = capsys.readouterr().out
        assert "1, 2, 2, 3, 3, 4" in out

    def test_section_file_wrong_length(self, tmp_path, capsys):
        fpath = tmp_path / "f.json"
        fpath.write_text(json.dumps({"f": [1, 0]}))
        assert main(["analyze", "--family", "star:3", "--f", str(fpath)]) == 2
        assert "coefficients" in capsys.readouterr().err

    def test_random_section(self, capsys):
        assert main(["analyze", "--family", "sym:3", "--f", "random:0"]) == 0
        out = capsys.readouterr().out
        assert "2, 2, 5/2, 5/2, 3, 3" in out

    def test_input_file_roundtrip(self, tmp_path, capsys):
        data = presentation_to_json(family("nc:3", validate=False))
        path = tmp_path / "nc3.json"
        path.write_text(json.dumps(data))
        fpath = tmp_path / "f.json"
        fpath.write_text(json.dumps({"f": [1, 1, 1]}))
        assert main(["analyze", "--input", str(path), "--f", str(fpath)]) == 0
        assert "0, 1, 2" in capsys.readouterr().out

    def test_no_canonical_for_file_input(self, tmp_path, capsys):
        data = presentation_to_json(family("nc:3", validate=False))
        path = tmp_path / "nc3.json"
        path.write_text(json.dumps(data))
        assert main(["analyze", "--input", str(path)]) == 2
        assert "canonical" in capsys.readouterr().err

    def test_resource_cap_exit(self, capsys):
        assert main(["analyze", "--family", "e6"]) == 4
        assert "ResourceCapExceeded" in capsys.readouterr().err

    def test_input_errors(self, capsys, tmp_path):
        assert main(["analyze"]) == 2
        assert main(["analyze", "--family", "nc:2", "--input", "x.json"]) == 2
        assert main(["analyze", "--family", "torus:3"]) == 2
        assert main(["analyze", "--family", "star:3", "--f", "random:zz"]) == 2
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["analyze", "--input", str(bad)]) == 2
        capsys.readouterr()


class TestVerifyCommand:
    def test_nc3_passes(self, capsys):
        assert main(["verify", "--family", "nc:3"]) == 0
        out = capsys.readouterr().out
        assert "hessian identity      ok" in out
        assert "b0 identity           ok" in out

    def test_sym2_flags(self, capsys):
        assert main(["verify", "--family", "sym:2"]) == 0
        out = capsys.readouterr().out
        assert "special               False" in out
        assert "reductive             no" in out

    def test_corrupted_matrix_not_semiinvariant(self, tmp_path, capsys):
        data = presentation_to_json(family("nc:3", validate=False))
        data["lie_basis"][0][0][1] = "1"
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(data))
        assert main(["verify", "--input", str(path)]) == 3
        assert "NotSemiInvariant" in capsys.readouterr().err


class TestRegressCommand:
    def test_single_row(self, capsys):
        assert main(["regress", "--only", "nc:2"]) == 0
        out = capsys.readouterr().out
        assert "nc:2" in out and "pass" in out
        assert "supported:" in out
        assert "1 passed, 0 failed" in out

    def test_only_filter_selects_subset(self):
        rows = regress_mod.select_rows(only="nc")
        assert [r.row_id for r in rows] == [f"nc:{n}" for n in range(2, 9)]
        assert all(not r.extended for r in regress_mod.select_rows())

    def test_no_match_is_input_error(self, capsys):
        assert main(["regress", "--only", "nonsense"]) == 2
        assert "no regression rows match" in capsys.readouterr().out

    def test_perturbed_expectation_fails_with_diff(self, capsys, monkeypatch):
        wrong = RegressRow(
            row_id="nc:2-wrong",
            family="nc:2",
            f_spec="canonical",
            expect={"spectrum_generic": [rat(0), rat(2)]},
        )
        result = run_row(wrong)
        assert not result.ok
        name, ok, got, want = result.checks[0]
        assert name == "spectrum_generic" and not ok
        assert got == "[0, 1]" and want == "[0, 2]"
        monkeypatch.setattr(regress_mod, "ROWS", (wrong,))
        assert main(["regress"]) == 1
        out = capsys.readouterr().out
        assert "FAIL" in out and "got [0, 1], want [0, 2]" in out

    def test_row_error_is_reported_not_raised(self):
        capped = RegressRow(
            row_id="e6-cap",
            family="e6",
            f_spec="random:0",
            expect={},
        )
        result = run_row(capped)
        assert not result.ok
        assert "ResourceCapExceeded" in result.error

    def test_json_output(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        assert main(["regress", "--only", "sym:2", "--json", str(out)]) == 0
        capsys.readouterr()
        payload = json.loads(out.read_text())
        row = payload["rows"][0]
        assert row["row_id"] == "sym:2" and row["ok"]
        names = [c[0] for c in row["checks"]]
        assert "nu1" in names and "special" in names


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "lfdspectrum", "catalog"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "sym:K" in proc.stdout
