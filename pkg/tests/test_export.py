"""Tests for report envelopes and CSV tables in opmodel.export."""

import json
from fractions import Fraction

import pandas as pd
import pytest

from opmodel.export import Report, dims_table, file_digest, flags_table, write_table_csv


@pytest.fixture
def source_file(tmp_path):
    """An empty JSON input to be digested."""
    path = tmp_path / "in.json"
    path.write_text("{}", encoding="utf-8")
    return path


class TestReport:
    """Report envelope and its serialization."""

    def test_envelope_keys(self, source_file):
        report = Report("homology", "0.1.0", {"seed": 0}, [str(source_file)], {"value": Fraction(1, 2)}, ok=True)
        data = json.loads(report.dumps())
        assert set(data) == {"tool", "version", "command", "flags", "inputs", "ok", "result"}
        assert data["inputs"][0]["sha256"] == file_digest(source_file)

    def test_fractions_are_written_as_strings(self, source_file):
        report = Report("homology", "0.1.0", {}, [str(source_file)], {"value": Fraction(1, 2)})
        assert json.loads(report.dumps())["result"]["value"] == "1/2"

    def test_write_is_deterministic(self, tmp_path):
        report = Report("sample-family", "0.1.0", {"b": 1, "a": 2}, [], {"members": []})
        first = report.write(tmp_path / "one" / "r.json")
        second = report.write(tmp_path / "two" / "r.json")
        assert first.read_bytes() == second.read_bytes()


class TestTables:
    """DataFrame helpers behind the --csv option."""

    def test_flags_table_categories(self):
        table = flags_table({"weak_equivalence": True, "fibration_wrt": None, "cell_attachment": False, "rlp": {}})
        assert list(table["flag"]) == ["weak_equivalence", "fibration_wrt", "cell_attachment"]
        assert list(table["category"]) == ["model", "relative", "other"]

    def test_dims_table_pads_short_columns(self):
        table = dims_table({"V": (1,), "P*(V)": (1, 1, 1)})
        assert list(table["V"]) == [1, 0, 0]
        assert list(table["degree"]) == [1, 2, 3]

    def test_csv_joins_list_cells(self, tmp_path):
        table = pd.DataFrame([{"stage": 1, "dims": [1, 2]}])
        path = write_table_csv(tmp_path / "stages.csv", table)
        assert pd.read_csv(path)["dims"].tolist() == ["1 2"]
