import pandas as pd
import pytest

from data.default_data import THREADS_ENV
from services import config_utils as cu
from services.errors import DataError
from services.exportation import ResultExporter, TableFormatter
from services.utils import format_real, keyed, parse_vector, real_field


def test_settings_fall_back_to_defaults():
    settings = cu.Settings({"census": {"seed": 3}})
    assert settings["census.seed"] == 3
    assert settings["census.samples"] == 200
    assert settings["certify.max_cells"] == 2_000_000
    assert settings["nowhere.to.be.found"] is None


def test_settings_update_skips_none():
    settings = cu.Settings().update({"census.k": 2, "census.seed": None})
    assert settings["census.k"] == 2
    assert settings["census.seed"] == 7


def test_thread_count_precedence(monkeypatch):
    settings = cu.Settings({"threads": 2})
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert settings.threads() == 2
    monkeypatch.setenv(THREADS_ENV, "4")
    assert settings.threads() == 4
    assert settings.threads(3) == 3
    with pytest.raises(DataError):
        settings.threads(0)
    monkeypatch.setenv(THREADS_ENV, "four")
    with pytest.raises(DataError):
        settings.threads()


def test_load_config(write_json, tmp_path):
    assert cu.load_config("") == {}
    assert cu.load_config(write_json("ok.json", {"threads": 2})) == {"threads": 2}
    with pytest.raises(DataError):
        cu.load_config(write_json("broken.json", "{"))
    with pytest.raises(DataError):
        cu.load_config(write_json("list.json", [1, 2]))
    with pytest.raises(FileNotFoundError):
        cu.load_config(str(tmp_path / "absent.json"))


def test_save_config(tmp_path):
    path = str(tmp_path / "saved.json")
    assert cu.save_config({"census": {"seed": 1}}, path) == "Configuration saved"
    assert cu.load_settings(path)["census.seed"] == 1
    assert cu.save_config({}, "") == "No path provided"


def test_vectors_accept_decimal_commas():
    assert parse_vector("1,2,3") == [1.0, 2.0, 3.0]
    assert parse_vector("1;2,5;-3") == [1.0, 2.5, -3.0]
    with pytest.raises(DataError):
        parse_vector("1,2")
    with pytest.raises(DataError):
        parse_vector("1,x,3")


def test_reals_and_keys():
    assert format_real(0.1) == "0.10000000000000001"
    assert real_field(float("inf")) == "inf"
    assert keyed({13: 1, 0: 1}) == {"0": 1, "13": 1}


def test_grid_layout():
    rows = [{"p": 1, "q": 2, "dim": 1}, {"p": 2, "q": 0, "dim": 3}]
    table = TableFormatter().set_grid(rows, 3).table
    assert list(table.index) == [2, 0]
    assert list(table.columns) == [1, 2, 3]
    assert table.loc[2, 1] == 1
    assert table.loc[0, 2] == 3
    assert table.loc[0, 3] == ""


def test_text_skips_spacer_rows():
    fmt = TableFormatter().set_mapping({"0": 4}, "class", "samples").append_table().append_empty_row()
    assert len(fmt.tables) == 2
    assert fmt.to_text() == fmt.tables[0].to_string(index=False)
    assert fmt.initialize_table_list().tables == []


def test_export_keeps_earlier_workbooks(tmp_path):
    sheets = {"census": TableFormatter().set_mapping({"0": 4, "1": 2}, "class", "samples").append_table().tables}
    first = ResultExporter().export_results(str(tmp_path / "report"), sheets)
    second = ResultExporter().export_results(str(tmp_path / "report"), sheets)
    third = ResultExporter(overwrite=True).export_results(str(tmp_path / "report.xlsx"), sheets)
    assert first.endswith("report.xlsx")
    assert second.endswith("report_0.xlsx")
    assert third == first
    frame = pd.read_excel(first, sheet_name="census")
    assert list(frame["samples"]) == [4, 2]


def test_config_file_in_the_working_directory(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cu.config_path(None) == ""
    assert cu.load_settings(None)["certify.depth"] == 12
    (tmp_path / "config.json").write_text('{"certify": {"depth": 5}}')
    assert cu.config_path(None) == "config.json"
    assert cu.load_settings(None)["certify.depth"] == 5
    assert cu.config_path("other.json") == "other.json"
    assert cu.load_settings("")["certify.depth"] == 12
