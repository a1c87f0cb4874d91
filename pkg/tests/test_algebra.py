from __future__ import annotations

import numpy as np
import pytest

from app.core.algebra import (
    AlgebraElement,
    AlgebraSpec,
    ScalarField,
    StructureConstant,
    apply_involution,
    build_J0,
    cayley,
    cayley_inverse,
    get_algebra,
    ideal_power,
    line_decomposition,
    minus_fixed_space,
    multiply,
    validate_algebra,
)
from app.core.field import FieldSpec, Scalar
from app.errors import DomainError


def unit(index: int, width: int) -> np.ndarray:
    vector = np.zeros(width, dtype=np.int64)
    vector[index] = 1
    return vector


def test_flip_involution_and_product(flip3: AlgebraSpec) -> None:
    e12, e13, e23 = (AlgebraElement.from_vector(unit(i, 3)) for i in range(3))
    assert multiply(flip3, e12, e23) == e13
    assert multiply(flip3, e23, e12) == AlgebraElement((0, 0, 0))
    assert apply_involution(flip3, e12) == e23
    assert apply_involution(flip3, e13) == e13


def test_anti_multiplicativity_on_random_elements(symp4: AlgebraSpec) -> None:
    algebra = get_algebra(symp4)
    rng = np.random.default_rng(1)
    a = rng.integers(0, 3, size=(50, algebra.width))
    b = rng.integers(0, 3, size=(50, algebra.width))
    left = algebra.involute(algebra.multiply(a, b))
    right = algebra.multiply(algebra.involute(b), algebra.involute(a))
    assert np.array_equal(left, right)


def test_powers_and_nilpotency(symp4: AlgebraSpec) -> None:
    assert [ideal_power(symp4, m).dim for m in (1, 2, 3, 4)] == [6, 3, 1, 0]
    assert symp4.nilpotency_class == 3


def test_minus_fixed_spaces(flip3: AlgebraSpec, symp4: AlgebraSpec, unitary3: AlgebraSpec) -> None:
    fixed = minus_fixed_space(flip3)
    assert fixed.dim == 1
    assert fixed.scalars is ScalarField.FIXED
    assert fixed.contains(np.array([1, 0, 2]))[0]

    assert minus_fixed_space(symp4).dim == 4
    assert minus_fixed_space(symp4, ideal_power(symp4, 2)).dim == 2
    assert minus_fixed_space(unitary3).order == 27


def test_minus_fixed_space_needs_invariant_subspace(flip3: AlgebraSpec) -> None:
    algebra = get_algebra(flip3)
    with pytest.raises(DomainError):
        algebra.minus_fixed_space(algebra.span(unit(0, 3)))


def test_cayley_is_a_bijection_with_inverse(flip3: AlgebraSpec) -> None:
    algebra = get_algebra(flip3)
    everything = algebra.whole().elements()
    images = algebra.cayley(everything)
    assert np.array_equal(algebra.cayley_inverse(images), everything)
    assert len({tuple(row) for row in images}) == everything.shape[0]


def test_cayley_of_a_square_zero_element(fix_b: AlgebraSpec) -> None:
    e = AlgebraElement((1,))
    assert cayley(fix_b, e).coords == AlgebraElement((1,))
    assert cayley_inverse(fix_b, cayley(fix_b, e)) == e


def test_cayley_sends_minus_fixed_points_to_sigma_fixed_elements(unitary3: AlgebraSpec) -> None:
    algebra = get_algebra(unitary3)
    a = algebra.minus_fixed_space().elements()
    images = algebra.cayley(a)
    inverses = algebra.negated_series(images)
    assert np.array_equal(algebra.involute(inverses), images)


def test_fixed_core(symp4: AlgebraSpec, unitary3: AlgebraSpec) -> None:
    algebra = get_algebra(symp4)
    core = algebra.fixed_core()
    assert core.dim == 2
    assert np.array_equal(algebra.involute(core.basis), core.basis)
    assert algebra.fixed_core(algebra.power(2)).dim == 1
    assert get_algebra(unitary3).fixed_core().is_zero


def test_line_decomposition(symp4: AlgebraSpec) -> None:
    algebra = get_algebra(symp4)
    outer = algebra.minus_fixed_space()
    inner = algebra.minus_fixed_space(algebra.power(2))
    lines = line_decomposition(symp4, outer, inner)
    assert len(lines) == 2
    assert all(line.dim == inner.dim + 1 and inner.issubset(line) for line in lines)
    assert algebra.add(lines[0], lines[1]) == outer


def test_line_decomposition_rejects_non_nested(symp4: AlgebraSpec) -> None:
    algebra = get_algebra(symp4)
    with pytest.raises(DomainError):
        line_decomposition(symp4, algebra.minus_fixed_space(algebra.power(2)), algebra.minus_fixed_space())


def test_build_J0_has_codimension_one(symp4: AlgebraSpec) -> None:
    algebra = get_algebra(symp4)
    square_fixed = algebra.minus_fixed_space(algebra.power(2))
    # e23 is a minus-fixed direction outside of J^2
    S = algebra.add(square_fixed, algebra.span(unit(3, 6), ScalarField.FIXED))
    J0 = build_J0(symp4, S)
    assert J0.dim == 5
    assert algebra.minus_fixed_space(J0) == S
    assert algebra.is_ideal_of(J0, algebra.whole())


def test_build_J0_rejects_wrong_codimension(symp4: AlgebraSpec) -> None:
    with pytest.raises(DomainError):
        build_J0(symp4, minus_fixed_space(symp4))


def _one_dimensional(product: bool) -> AlgebraSpec:
    one = Scalar((1,))
    return AlgebraSpec(
        field=FieldSpec.prime(3),
        dim=1,
        basis_names=("e",),
        struct_consts=(StructureConstant(0, 0, 0, one),) if product else (),
        involution_matrix=((one,),),
    )


def test_validation_reports() -> None:
    assert validate_algebra(_one_dimensional(False)).passed
    report = validate_algebra(_one_dimensional(True))
    assert not report.passed
    assert [v.axiom for v in report.violations] == ["nilpotency"]
    assert report.nilpotency_class is None


def test_validation_passes_for_examples(flip3: AlgebraSpec, unitary3: AlgebraSpec) -> None:
    report = validate_algebra(flip3)
    assert report.passed and report.nilpotency_class == 2
    assert validate_algebra(unitary3).passed


def test_cayley_of_negation_is_the_inverse(symp4: AlgebraSpec) -> None:
    algebra = get_algebra(symp4)
    rng = np.random.default_rng(2)
    a = rng.integers(0, 3, size=(30, algebra.width))
    assert np.array_equal(algebra.cayley((-a) % 3), algebra.negated_series(algebra.cayley(a)))
    assert not algebra.cayley(np.zeros((1, algebra.width), dtype=np.int64)).any()
