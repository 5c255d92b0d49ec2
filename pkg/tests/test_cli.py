import json
from pathlib import Path

import pytest

from qci.cli import main

PUBLISHED = Path(__file__).parent / "data" / "published_identities.txt"


def test_verify_published_table(capsys):
    assert main(["verify", "--in", str(PUBLISHED)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[-1] == "155/155 identities verified"
    assert all(line.startswith("PASS") for line in out[:-1])


def test_verify_reports_failures(tmp_path, capsys):
    path = tmp_path / "ids.txt"
    path.write_text("I = H H\nX = Y\n")
    assert main(["verify", "--in", str(path)]) == 1
    out = capsys.readouterr().out
    assert "FAIL  X = Y" in out
    assert "1/2 identities verified" in out


def test_mine_to_stdout(capsys):
    assert main(["mine", "--max-len", "1"]) == 0
    captured = capsys.readouterr()
    lines = captured.out.splitlines()
    assert len(lines) == 47
    assert "X4 = P4" in lines
    assert "Length 1" in captured.err


def test_mine_filter_counts_pipeline(tmp_path, capsys):
    raw = tmp_path / "raw.txt"
    filtered = tmp_path / "filtered.json"
    assert main(["mine", "--max-len", "2", "--out", str(raw)]) == 0
    assert len(raw.read_text().splitlines()) == 47 + 625

    assert main(["filter", "--in", str(raw), "--out", str(filtered), "--provenance"]) == 0
    records = json.loads(filtered.read_text())
    assert len(records) == 36
    assert all("steps" in r for r in records)

    capsys.readouterr()
    assert main(["counts", "--in", str(filtered)]) == 0
    assert capsys.readouterr().out.splitlines() == ["Length 1: 2", "Length <=2: 36"]


def test_filter_switches(tmp_path, capsys):
    raw = tmp_path / "raw.txt"
    main(["mine", "--max-len", "1", "--out", str(raw)])
    capsys.readouterr()
    assert main(["filter", "--in", str(raw), "--group", "off", "--drop-rotations", "off"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 12


def test_table(capsys):
    assert main(["table", "--max-len", "1"]) == 0
    out = capsys.readouterr().out
    assert "All filtering" in out
    assert "No filtering" in out


def test_simplify_with_database(capsys):
    assert main(["simplify", "--db", str(PUBLISHED), "H X H"]) == 0
    assert capsys.readouterr().out.strip() == "Z"
    assert main(["simplify", "--db", str(PUBLISHED), "--trace", "S S"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert "--[Z = S S]-->" in out[0]
    assert out[-1] == "Z"


def test_errors_exit_with_two(tmp_path, capsys):
    assert main(["verify", "--in", str(tmp_path / "absent.txt")]) == 2
    assert capsys.readouterr().err.startswith("error: ")

    bad = tmp_path / "bad.txt"
    bad.write_text("X = Q\n")
    assert main(["verify", "--in", str(bad)]) == 2
    assert "line 1" in capsys.readouterr().err

    assert main(["verify", "--in", str(PUBLISHED), "--tolerance", "-1"]) == 2


def test_bad_switch_is_a_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["filter", "--in", "raw.txt", "--group", "maybe"])
    assert e.value.code == 2


def test_counts_warns_on_text_input(tmp_path, capsys, caplog):
    path = tmp_path / "filtered.txt"
    path.write_text("I = H H\nY3 = - H X\n")
    assert main(["counts", "--in", str(path)]) == 0
    assert capsys.readouterr().out.splitlines() == ["Length 1: 0", "Length <=2: 2"]
    assert "no mined lengths" in caplog.text
