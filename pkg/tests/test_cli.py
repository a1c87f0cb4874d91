from __future__ import annotations

import json
from pathlib import Path

import pytest

from app.config import ConfigurationError, get_settings
from app.main import main

FLIP = ["--family", "un-flip", "--n", "3", "--q", "3"]


def test_validate(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["validate", *FLIP]) == 0
    assert "dim J = 3" in capsys.readouterr().out


def test_example_writes_a_parsable_file(tmp_path: Path) -> None:
    target = tmp_path / "u4.alg"
    assert main(["example", "--family", "un-symplectic", "--n", "4", "--q", "3", "--output", str(target)]) == 0
    assert main(["validate", str(target)]) == 0


def test_table_json_to_stdout(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["table", *FLIP, "--json", "-"]) == 0
    captured = capsys.readouterr()
    document = json.loads(captured.out)
    assert document["command"] == "table"
    assert document["orders"] == {"G": 27, "C_G": 3}
    assert document["table"]["degrees"] == [1, 1, 1]
    assert "Классов" in captured.err


def test_verify_report(fixtures_dir: Path, tmp_path: Path) -> None:
    report = tmp_path / "report.json"
    assert main(["verify", str(fixtures_dir / "fix_b.alg"), "--json", str(report), "--timing"]) == 0
    document = json.loads(report.read_text(encoding="utf-8"))
    assert document["passed"] is True
    assert document["class_count"] == 3
    assert document["lemma_checks"]["decompositions"] is True
    assert "verify" in document["timing"]


def test_zero_algebra_end_to_end(fixtures_dir: Path, tmp_path: Path) -> None:
    path = fixtures_dir / "zero.alg"
    assert main(["validate", str(path)]) == 0
    report = tmp_path / "report.json"
    assert main(["verify", str(path), "--json", str(report)]) == 0
    document = json.loads(report.read_text(encoding="utf-8"))
    assert document["passed"] is True
    assert document["algebra"]["dim"] == 0
    assert document["orders"] == {"G": 1, "C_G": 1, "twisted": 1, "twisted_subgroup": 1}
    assert document["class_count"] == 1
    assert document["notes"] == []


def test_decompose_one_character(tmp_path: Path) -> None:
    report = tmp_path / "report.json"
    args = ["decompose", "--family", "un-symplectic", "--n", "4", "--q", "3", "--index", "-1", "--json", str(report)]
    assert main(args) == 2
    args[-3] = "0"
    assert main(args) == 0
    document = json.loads(report.read_text(encoding="utf-8"))
    assert document["certificates"][0]["matched"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ["validate", "fixtures/char2.alg"],
        ["validate", "fixtures/not_anti.alg"],
        ["validate"],
        ["validate", "--family", "un-flip", "--n", "3"],
        ["validate", "--family", "un-symplectic", "--n", "3", "--q", "3"],
        ["table", *FLIP, "--max-order", "0"],
        ["table", *FLIP, "--max-order", "2"],
    ],
)
def test_input_errors_exit_with_two(argv: list[str], fixtures_dir: Path) -> None:
    argv = [str(fixtures_dir.parent / arg) if arg.startswith("fixtures/") else arg for arg in argv]
    assert main(argv) == 2


def test_configuration_errors(monkeypatch: pytest.MonkeyPatch) -> None:
    get_settings.cache_clear()
    monkeypatch.setenv("MAX_GROUP_ORDER", "many")
    with pytest.raises(ConfigurationError):
        get_settings()
    get_settings.cache_clear()
    monkeypatch.setenv("MAX_GROUP_ORDER", "27")
    monkeypatch.setenv("CLIFFORD_CROSS_CHECK", "perhaps")
    with pytest.raises(ConfigurationError):
        get_settings()
    get_settings.cache_clear()
    monkeypatch.setenv("CLIFFORD_CROSS_CHECK", "off")
    settings = get_settings()
    assert settings.engine.max_group_order == 27
    assert settings.engine.clifford_cross_check is False
    get_settings.cache_clear()
