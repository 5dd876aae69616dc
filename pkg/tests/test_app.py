import json

import pytest

import app
from commands import EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE
from services import certify as cfs

FLAT_AT_POLE = [[1, 0, 0, 1, 0, 1e-4], [2, 0, 0, 1, 0, 1e-4], [1, 0, 0, 2, 0, 1e-4]]


def run_json(capsys, *argv):
    status = app.run([*argv, "--json", "--no-meta"])
    return status, json.loads(capsys.readouterr().out)


def test_tables_json(capsys):
    status, payload = run_json(capsys, "tables", "--k", "6")
    assert status == EXIT_OK
    assert len(payload["e1"]) == 5
    assert payload["poincare"][-1] == [21, 1]
    assert "meta" not in payload


def test_text_output_carries_a_timestamp(capsys):
    assert app.run(["tables", "--k", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "P(t) = 1 + t" in out
    assert out.splitlines()[-1].startswith("# generated ")


def test_output_is_deterministic(capsys):
    app.run(["tables", "--k", "5", "--json", "--no-meta"])
    first = capsys.readouterr().out
    app.run(["tables", "--k", "5", "--json", "--no-meta"])
    assert capsys.readouterr().out == first


def test_theorem_sweep(capsys):
    assert app.run(["theorem", "--no-meta"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert sum(" PASS " in line for line in lines) == 11


def test_stiefel(capsys):
    status, payload = run_json(capsys, "stiefel", "--k", "4")
    assert status == EXIT_OK
    assert payload["match"]
    assert payload["closed_form"] == [[0, 1], [3, 2], [6, 1]]


def test_selfjoin(capsys):
    status, payload = run_json(capsys, "selfjoin", "--r", "3")
    assert status == EXIT_OK
    assert payload["match"]
    assert payload["total"] == {"0": 1, "5": 1}
    assert payload["model"] == {"0": 1, "5": 1}
    assert [c["status"] for c in payload["columns"]] == ["pass"] * 3


def test_homology(capsys):
    status, payload = run_json(capsys, "homology", "--space", "RP2", "--twist", "or")
    assert status == EXIT_OK
    assert payload["homology"] == {"2": 1}


def test_verify_lemmas(capsys):
    status, payload = run_json(capsys, "verify-lemmas")
    assert status == EXIT_OK
    assert payload["failed"] == 0
    assert {row["status"] for row in payload["checks"]} <= {"pass", "deferred", "trusted"}
    names = [row["check"] for row in payload["checks"]]
    assert sum(" at k=" in name for name in names) == 7 * 9
    assert any(name.startswith("self-join column 6 over B(S1,6)") for name in names)
    assert "RP2 x RP2" in names


def test_catalog(capsys):
    status, payload = run_json(capsys, "catalog", "list")
    assert status == EXIT_OK
    assert any(m["name"] == "mobius" for m in payload["models"])
    assert app.run(["catalog", "dump"]) == EXIT_USAGE


@pytest.mark.parametrize(
    "argv",
    [
        ["homology", "--space", "S2"],
        ["tables", "--k", "1"],
        ["frobnicate"],
        ["tables"],
        ["degree", "--input", "absent.json"],
        ["census", "--k", "5"],
    ],
)
def test_usage_errors(argv, capsys):
    assert app.run(argv) == EXIT_USAGE


def test_degree_of_the_witness(capsys, write_json):
    path = write_json("witness.json", cfs.dump_system(cfs.degree_one_witness()))
    status, payload = run_json(capsys, "degree", "--input", path, "--value=-1,-1,-1")
    assert status == EXIT_OK
    assert payload["degree"] == 1
    assert len(payload["preimages"]) == 1
    assert payload["certificate"]["verdict"] == "non-resultant"


def test_degree_of_a_resultant_system(capsys, write_json):
    path = write_json("zero.json", {"k": 3, "forms": [[0, 0.5, 0, 0, 0, 0], [0, 0, 0, 0, 0.5, 0], [0, 0, 0.5, 0, 0, 0]]})
    assert app.run(["degree", "--input", path, "--depth", "6"]) == EXIT_USAGE


def test_certify_verdicts(capsys, write_json):
    flat = write_json("flat.json", {"k": 3, "forms": FLAT_AT_POLE})
    status, payload = run_json(capsys, "certify", "--input", flat, "--depth", "1")
    assert status == EXIT_INCONCLUSIVE
    assert payload["verdict"] == "inconclusive"
    witness = write_json("zero.json", cfs.dump_system(cfs.degree_zero_witness()))
    status, payload = run_json(capsys, "certify", "--input", witness, "--depth", "8")
    assert status == EXIT_OK
    assert 0 < payload["min_lower_bound"] <= 1 / 3


def test_census_reads_the_config(capsys, write_json):
    config = write_json("config.json", {"census": {"samples": 4, "seed": 2, "depth": 8}, "certify": {"path_depth": 3}})
    status, payload = run_json(capsys, "census", "--config", config)
    assert status == EXIT_OK
    assert payload["samples"] == 4
    assert payload["seed"] == 2
    assert payload["violations"] == 0


def test_bad_config_is_a_usage_error(capsys, write_json):
    config = write_json("config.json", "{not json")
    assert app.run(["tables", "--k", "2", "--config", config]) == EXIT_USAGE


def test_bad_thread_count(capsys, monkeypatch):
    monkeypatch.setenv("RESOLVENT_THREADS", "many")
    assert app.run(["tables", "--k", "2"]) == EXIT_USAGE
    assert app.run(["tables", "--k", "2", "--threads", "1"]) == EXIT_OK


def test_xlsx_export(capsys, tmp_path):
    target = tmp_path / "out" / "tables.xlsx"
    assert app.run(["tables", "--k", "3", "--xlsx", str(target)]) == EXIT_OK
    assert app.run(["tables", "--k", "3", "--xlsx", str(target)]) == EXIT_OK
    assert target.exists()
    assert (tmp_path / "out" / "tables_0.xlsx").exists()


def test_relative_workbooks_go_to_the_output_directory(capsys, tmp_path, write_json):
    config = write_json("config.json", {"output": {"directory": str(tmp_path / "reports")}})
    assert app.run(["stiefel", "--k", "3", "--xlsx", "stiefel.xlsx", "--config", config]) == EXIT_OK
    assert (tmp_path / "reports" / "stiefel.xlsx").exists()


@pytest.mark.parametrize("k", range(0, 7))
def test_tables_for_every_small_k(k, capsys, tmp_path):
    expected = EXIT_OK if k >= 2 else EXIT_USAGE
    assert app.run(["tables", "--k", str(k), "--no-meta"]) == expected
    text = capsys.readouterr().out
    assert app.run(["tables", "--k", str(k), "--json", "--no-meta"]) == expected
    out = capsys.readouterr().out
    target = tmp_path / f"k{k}.xlsx"
    assert app.run(["tables", "--k", str(k), "--xlsx", str(target)]) == expected
    assert target.exists() == (k >= 2)
    if k >= 2:
        assert "P(t) = " in text
        payload = json.loads(out)
        assert payload["k"] == k
        assert all(d["page"] >= 1 for d in payload["differentials"])


def test_differentials_are_shown_as_a_titled_table(capsys):
    assert app.run(["tables", "--k", "3", "--no-meta"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "Einf" in out
    assert "source" in out
    status, payload = run_json(capsys, "tables", "--k", "3")
    assert status == EXIT_OK
    assert payload["differentials"][0]["origin"] == "known"
    assert payload["differentials"][0]["source"] == [8, 8]


def test_certify_depth_comes_from_its_own_key(capsys, tmp_path, monkeypatch):
    system = tmp_path / "flat.json"
    system.write_text(json.dumps({"k": 3, "forms": FLAT_AT_POLE}))
    (tmp_path / "config.json").write_text(json.dumps({"certify": {"depth": 1}, "degree": {"depth": 14}}))
    monkeypatch.chdir(tmp_path)
    status, payload = run_json(capsys, "certify", "--input", str(system))
    assert status == EXIT_INCONCLUSIVE
    assert payload["depth"] == 1
