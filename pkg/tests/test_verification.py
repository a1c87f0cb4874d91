from __future__ import annotations

from dataclasses import replace

import pytest

from app.config import Settings
from app.core.algebra import AlgebraSpec
from app.core.field import FieldSpec, Scalar, get_field
from app.errors import DomainError, InternalConsistencyError
from app.formats import make_example
from app.services import VerificationService, verification, verify_theorem


def test_fix_b(fix_b: AlgebraSpec, settings: Settings) -> None:
    report = verify_theorem(fix_b, settings)
    assert report.passed
    assert (report.order_G, report.order_C, report.order_twisted) == (3, 3, 1)
    assert report.class_count == 3
    assert all(c.depth == 0 and c.dim_H == 1 for c in report.certificates)


def test_flip(flip3: AlgebraSpec, settings: Settings) -> None:
    report = verify_theorem(flip3, settings)
    assert report.passed, report.failures
    assert report.order_twisted == 9
    assert report.order_G == report.order_C * report.order_twisted
    assert report.lemma_checks["comm_lemma"] is True
    assert report.lemma_checks["comm_lemma_exact"] is True
    assert report.lemma_checks["orthogonality"] is True
    assert report.notes == []


def test_symplectic(symp4: AlgebraSpec, settings: Settings) -> None:
    report = verify_theorem(symp4, settings)
    assert report.passed, report.failures
    assert sum(c.degree**2 for c in report.certificates) == 81
    assert all(c.matched for c in report.certificates)
    assert all(report.order_C == c.degree * c.order_CH for c in report.certificates)
    assert max(c.depth for c in report.certificates) >= 1
    assert (report.order_twisted, report.order_twisted_subgroup) == (9, 27)
    assert report.order_G == report.order_C * report.order_twisted
    assert [note["check"] for note in report.notes] == ["twisted_part"]


def test_unitary(unitary3: AlgebraSpec, settings: Settings) -> None:
    report = verify_theorem(unitary3, settings)
    assert report.passed, report.failures
    assert report.order_C == 27
    assert {c.degree for c in report.certificates} <= {1, 3, 9}
    assert (report.order_twisted, report.order_twisted_subgroup) == (27, 81)
    assert report.lemma_checks["twisted_part"] is True


def test_abelian(settings: Settings) -> None:
    report = verify_theorem(make_example("abelian", 2, 3), settings)
    assert report.passed
    assert report.order_C == report.order_G == 9
    assert report.order_twisted == 1


def test_large_groups_skip_enumerative_checks(symp4: AlgebraSpec, settings: Settings) -> None:
    engine = replace(settings.engine, comm_lemma_max_order=27, max_group_order=100)
    report = VerificationService(symp4, replace(settings, engine=engine)).verify()
    assert report.passed, report.failures
    assert "comm_lemma" not in report.lemma_checks
    assert "comm_lemma_exact" not in report.lemma_checks
    assert "twisted_part" not in report.lemma_checks
    assert report.order_twisted is None
    assert report.order_twisted_subgroup is None


def test_certificate_dictionary(flip3: AlgebraSpec, settings: Settings) -> None:
    service = VerificationService(flip3, settings)
    chi = service.decomposer.irreducibles()[1]
    certificate = service.certify(1, chi).as_dict()
    assert certificate["matched"] is True
    assert certificate["order_C_H"] == 3
    assert certificate["error"] is None


def test_characteristic_two_is_rejected() -> None:
    one = Scalar((1,))
    spec = AlgebraSpec(
        field=FieldSpec(p=2, f=1, modulus=(0, 1)),
        dim=1,
        basis_names=("e",),
        struct_consts=(),
        involution_matrix=((one,),),
    )
    with pytest.raises(DomainError, match="characteristic 2"):
        verify_theorem(spec)


@pytest.mark.parametrize(("family", "n", "q"), [("un-flip", 4, 3), ("un-flip", 3, 5)])
def test_flip_family(family: str, n: int, q: int, settings: Settings) -> None:
    report = verify_theorem(make_example(family, n, q), settings)
    assert report.passed, report.failures
    assert sum(c.degree**2 for c in report.certificates) == report.order_C


def test_strict_commutator_identity_is_reported_not_failed(settings: Settings) -> None:
    report = verify_theorem(make_example("un-flip", 4, 3), settings)
    assert report.passed, report.failures
    assert (report.order_G, report.order_C, report.order_twisted) == (729, 9, 81)
    assert report.order_twisted_subgroup == 243
    assert report.lemma_checks["comm_lemma"] is True
    assert report.lemma_checks["comm_lemma_exact"] is False
    strict = [note for note in report.notes if note["check"] == "comm_lemma_exact"]
    assert strict[0]["message"] == "containment is strict at n=1"
    assert (strict[0]["left_order"], strict[0]["right_order"]) == (3, 1)


def test_zero_algebra(zero: AlgebraSpec, settings: Settings) -> None:
    report = verify_theorem(zero, settings)
    assert report.passed, report.failures
    assert (report.order_G, report.order_C, report.order_twisted) == (1, 1, 1)
    assert report.class_count == 1
    (certificate,) = report.certificates
    assert (certificate.degree, certificate.dim_H, certificate.depth) == (1, 0, 0)


def test_field_check_is_exhaustive(unitary3: AlgebraSpec, settings: Settings) -> None:
    service = VerificationService(unitary3, settings)
    assert service.check_field()


def test_broken_field_automorphism_is_caught(
    unitary3: AlgebraSpec, settings: Settings, monkeypatch: pytest.MonkeyPatch
) -> None:
    runtime = get_field(unitary3.field)
    monkeypatch.setattr(verification, "tau_apply", lambda spec, x: runtime.add(x, runtime.one))
    service = VerificationService(unitary3, settings)
    assert not service.check_field()
    (failure,) = service._failures
    assert failure["check"] == "field"
    assert "tau is not an involution" in failure["message"]


def test_orthogonality_failure_is_reported(
    flip3: AlgebraSpec, settings: Settings, monkeypatch: pytest.MonkeyPatch
) -> None:
    def broken(table: object) -> None:
        raise InternalConsistencyError("row orthogonality")

    monkeypatch.setattr(verification, "check_table", broken)
    report = VerificationService(flip3, settings).verify()
    assert not report.passed
    assert report.lemma_checks["orthogonality"] is False
    assert [failure["check"] for failure in report.failures] == ["orthogonality"]
