from __future__ import annotations

import json
from pathlib import Path

import pytest

from app.core.algebra import AlgebraSpec
from app.core.field import Scalar
from app.errors import DomainError, InputError
from app.formats import (
    ResultDocument,
    describe_algebra,
    emit_algebra_text,
    load_algebra_file,
    make_example,
    parse_algebra_text,
    write_algebra_file,
)


def test_fix_b_fixture(fix_b: AlgebraSpec) -> None:
    assert fix_b.dim == 1
    assert fix_b.struct_consts == ()
    assert fix_b.involution_matrix == ((Scalar((2,)),),)
    assert dict(fix_b.metadata) == {"name": "fix-b"}


@pytest.mark.parametrize("family", ["un-symplectic", "un-unitary"])
def test_emitted_text_parses_back(family: str, tmp_path: Path) -> None:
    spec = make_example(family, 4, 9 if family == "un-unitary" else 3)
    assert parse_algebra_text(emit_algebra_text(spec)) == spec
    path = tmp_path / "algebra.alg"
    write_algebra_file(spec, path)
    assert load_algebra_file(path) == spec


def test_repeated_products_are_merged() -> None:
    text = """
    [field]
    p = 3
    [algebra]
    dim = 3
    [products]
    0 1 2 1
    0 1 2 1
    1 0 2 2
    1 0 2 1
    [involution]
    0 1 0
    1 0 0
    0 0 1
    """
    spec = parse_algebra_text(text)
    assert len(spec.struct_consts) == 1
    assert spec.struct_consts[0].coeff == Scalar((2,))
    assert spec.basis_names == ("e1", "e2", "e3")


def test_characteristic_two_is_rejected(fixtures_dir: Path) -> None:
    with pytest.raises(InputError, match="line 3: characteristic 2 is not supported") as info:
        load_algebra_file(fixtures_dir / "char2.alg")
    assert info.value.line == 3


def test_axiom_violations_are_named(fixtures_dir: Path) -> None:
    with pytest.raises(InputError, match=r"anti-multiplicativity at \(0, 1\)"):
        load_algebra_file(fixtures_dir / "not_anti.alg")


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("[field]\np = 3\n", "missing section"),
        ("p = 3\n", "before the first section"),
        ("[field]\np = 3\n[algebra]\ndim = 1\n[extra]\n", "unknown section"),
        ("[field]\np = x\n[algebra]\ndim = 1\n", "p must be an integer"),
        ("[field]\np = 3\n[algebra]\ndim = 1\n[products]\n0 0 0\n[involution]\n2\n", "i j k coeff"),
        ("[field]\np = 3\n[algebra]\ndim = 1\n[products]\n0 0 5 1\n[involution]\n2\n", "out of range"),
        ("[field]\np = 3\n[algebra]\ndim = 2\n[involution]\n2 0\n", "involution needs 2 rows"),
        ("[field]\np = 3\nf = 2\nmodulus = 0,0,1\n[algebra]\ndim = 0\n", "reducible"),
    ],
)
def test_malformed_input(text: str, message: str) -> None:
    with pytest.raises(InputError, match=message):
        parse_algebra_text(text)


def test_missing_file(tmp_path: Path) -> None:
    with pytest.raises(InputError, match="cannot read"):
        load_algebra_file(tmp_path / "absent.alg")


def test_field_order_limit() -> None:
    text = emit_algebra_text(make_example("un-unitary", 3, 9))
    with pytest.raises(DomainError, match="exceeds the limit"):
        parse_algebra_text(text, max_field_order=5)


@pytest.mark.parametrize(
    ("family", "n", "q", "dim"),
    [("un-flip", 4, 3, 6), ("un-symplectic", 4, 5, 6), ("un-unitary", 3, 9, 3), ("abelian", 2, 5, 2)],
)
def test_example_families(family: str, n: int, q: int, dim: int) -> None:
    spec = make_example(family, n, q)
    assert spec.dim == dim
    assert dict(spec.metadata)["family"] == family


@pytest.mark.parametrize(
    ("family", "n", "q"),
    [("un-symplectic", 3, 3), ("un-unitary", 3, 3), ("un-flip", 3, 4), ("un-flip", 1, 3), ("orthogonal", 3, 3)],
)
def test_invalid_examples(family: str, n: int, q: int) -> None:
    with pytest.raises(DomainError):
        make_example(family, n, q)


def test_result_document(flip3: AlgebraSpec, tmp_path: Path) -> None:
    document = ResultDocument(command="validate", seed=0, algebra=describe_algebra(flip3))
    data = json.loads(document.to_json())
    assert "timing" not in data
    assert data["schema_version"] == 1
    assert data["algebra"]["q_sigma"] == 3

    document.timing = {"parse": 0.1}
    path = tmp_path / "report.json"
    document.write(path)
    assert ResultDocument.from_json(path.read_text(encoding="utf-8")) == document


def test_result_document_rejects_other_versions() -> None:
    with pytest.raises(ValueError, match="schema version"):
        ResultDocument.from_json(json.dumps({"schema_version": 99}))
