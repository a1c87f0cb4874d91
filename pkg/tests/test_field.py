from __future__ import annotations

import pytest

from app.core.field import (
    FieldSpec,
    Scalar,
    additive_character,
    field_ops,
    fixed_subfield_basis,
    get_field,
    tau_apply,
)
from app.errors import DomainError


def test_canonical_modulus_of_f9() -> None:
    assert FieldSpec.of_order(9).modulus == (1, 0, 1)
    assert FieldSpec.of_order(5).modulus == (0, 1)


def test_every_nonzero_element_is_invertible() -> None:
    field = get_field(FieldSpec.of_order(9))
    for row in field.elements()[1:]:
        x = field.scalar(row)
        assert field.mul(x, field.inv(x)) == field.one


def test_inverting_zero_fails() -> None:
    with pytest.raises(DomainError):
        field_ops(FieldSpec.of_order(9), Scalar((0, 0)), None, "inv")


def test_field_ops_dispatch() -> None:
    spec = FieldSpec.of_order(9)
    x = Scalar((0, 1))
    assert field_ops(spec, x, x, "mul") == Scalar((2, 0))
    assert field_ops(spec, x, x, "add") == Scalar((0, 2))
    assert field_ops(spec, x, None, "neg") == Scalar((0, 2))


def test_frobenius_on_f9() -> None:
    spec = FieldSpec.of_order(9, tau_order=2)
    assert tau_apply(spec, Scalar((0, 1))) == Scalar((0, 2))
    assert tau_apply(spec, Scalar((2, 0))) == Scalar((2, 0))
    assert spec.q_sigma == 3


def test_tau_is_an_involutive_automorphism() -> None:
    spec = FieldSpec.of_order(9, tau_order=2)
    field = get_field(spec)
    elements = [field.scalar(row) for row in field.elements()]
    for x in elements:
        assert field.tau_apply(field.tau_apply(x)) == x
        for y in elements[:4]:
            assert field.tau_apply(field.mul(x, y)) == field.mul(field.tau_apply(x), field.tau_apply(y))


def test_fixed_subfield() -> None:
    assert fixed_subfield_basis(FieldSpec.of_order(9, tau_order=2)) == [Scalar((1, 0))]
    assert len(fixed_subfield_basis(FieldSpec.of_order(9))) == 2


def test_trace_and_additive_character() -> None:
    spec = FieldSpec.of_order(9)
    field = get_field(spec)
    assert field.trace(field.one) == 2
    assert field.trace(Scalar((0, 1))) == 0
    value = additive_character(spec, field.one, field.one)
    assert (value.exponent, value.order) == (2, 3)


@pytest.mark.parametrize(
    ("spec", "message"),
    [
        (FieldSpec(p=2, f=1, modulus=(0, 1)), "characteristic 2"),
        (FieldSpec(p=9, f=1, modulus=(0, 1)), "not a prime"),
        (FieldSpec(p=3, f=2, modulus=(0, 0, 1)), "reducible"),
        (FieldSpec(p=3, f=1, modulus=(0, 1), tau_order=2), "even extension"),
        (FieldSpec(p=3, f=2, modulus=(1, 0, 2)), "monic"),
    ],
)
def test_invalid_declarations(spec: FieldSpec, message: str) -> None:
    with pytest.raises(DomainError, match=message):
        spec.validate()


def test_of_order_rejects_non_prime_powers() -> None:
    with pytest.raises(DomainError):
        FieldSpec.of_order(12)
