from __future__ import annotations

from collections.abc import Callable

import numpy as np
import pytest

from app.core.algebra import AlgebraSpec, get_algebra
from app.core.group import (
    AlgebraGroup,
    SubgroupKind,
    algebra_subgroup,
    cayley_images,
    check_comm_lemma,
    derived_subgroup,
    enumerated_subgroup,
    fixed_subgroup,
    layer_subgroup,
    sigma_twisted_part,
    whole_group,
)
from app.errors import DomainError, GuardrailError
from app.formats import make_example

GroupFactory = Callable[..., AlgebraGroup]


def test_heisenberg_group(flip3: AlgebraSpec, make_group: GroupFactory) -> None:
    group = make_group(flip3)
    whole = whole_group(group)
    assert whole.order == 27
    assert len(whole.classes) == 11
    assert int(whole.classes.sizes.sum()) == 27
    assert whole.classes.labels[0] == 0
    assert derived_subgroup(whole).order == 3
    assert whole.abelian.orders == (3, 3)
    assert int(group.element_orders(whole.elements).max()) == 3


def test_group_law(symp4: AlgebraSpec, make_group: GroupFactory) -> None:
    group = make_group(symp4)
    rng = np.random.default_rng(3)
    a, b, c = (rng.integers(0, 3, size=(20, group.width)) for _ in range(3))
    assert np.array_equal(group.mul(group.mul(a, b), c), group.mul(a, group.mul(b, c)))
    assert not group.mul(a, group.inv(a)).any()
    assert np.array_equal(group.sigma_act(group.sigma_act(a)), a)


def test_fixed_point_subgroups(
    flip3: AlgebraSpec, symp4: AlgebraSpec, unitary3: AlgebraSpec, make_group: GroupFactory
) -> None:
    for spec, order in ((flip3, 3), (symp4, 81), (unitary3, 27)):
        group = make_group(spec)
        fixed = fixed_subgroup(group, whole_group(group))
        assert fixed.kind is SubgroupKind.FIXED_POINTS
        assert fixed.order == order
        assert np.array_equal(group.sigma_act(fixed.elements), fixed.elements)


def test_cayley_images_match_fixed_points(symp4: AlgebraSpec, make_group: GroupFactory) -> None:
    group = make_group(symp4)
    fixed = fixed_subgroup(group, whole_group(group))
    assert np.array_equal(cayley_images(group, group.algebra.minus_fixed_space()), fixed.codes)


def test_twisted_part(
    flip3: AlgebraSpec, symp4: AlgebraSpec, unitary3: AlgebraSpec, make_group: GroupFactory
) -> None:
    for spec, order, generated in ((flip3, 9, 9), (symp4, 9, 27), (unitary3, 27, 81)):
        group = make_group(spec)
        whole = whole_group(group)
        fixed = fixed_subgroup(group, whole)
        twisted = sigma_twisted_part(whole, fixed)
        assert twisted.order == order == whole.order // fixed.order
        assert np.intersect1d(twisted.codes, fixed.codes).tolist() == [0]
        assert twisted.generated.order == generated
        assert twisted.is_subgroup is (order == generated)


def test_twisted_part_is_a_set_of_symmetric_elements(symp4: AlgebraSpec, make_group: GroupFactory) -> None:
    group = make_group(symp4)
    whole = whole_group(group)
    twisted = sigma_twisted_part(whole)
    elements = group.decode(twisted.codes)
    assert np.array_equal(group.algebra.involute(elements), elements)
    assert np.isin(twisted.codes, twisted.generated.codes).all()


def test_twisted_part_of_the_trivial_group(zero: AlgebraSpec, make_group: GroupFactory) -> None:
    twisted = sigma_twisted_part(whole_group(make_group(zero)))
    assert twisted.order == twisted.generated.order == 1


@pytest.mark.parametrize("n", [1, 2])
def test_commutator_identity(flip3: AlgebraSpec, make_group: GroupFactory, n: int) -> None:
    result = check_comm_lemma(make_group(flip3), n)
    assert result.holds
    assert result.contained
    assert result.witness is None


def test_commutator_identity_symplectic(symp4: AlgebraSpec, make_group: GroupFactory) -> None:
    group = make_group(symp4)
    assert all(check_comm_lemma(group, n).holds for n in (1, 2, 3))


def test_commutator_identity_is_strict_for_the_flip_of_degree_four(make_group: GroupFactory) -> None:
    group = make_group(make_example("un-flip", 4, 3))
    result = check_comm_lemma(group, 1)
    assert result.contained
    assert not result.holds
    assert (result.left_order, result.right_order) == (3, 1)
    witness = result.witness.vector
    assert witness.any()
    assert np.array_equal(group.sigma_act(witness[None, :])[0], witness)


def test_layers_are_normal(symp4: AlgebraSpec, make_group: GroupFactory) -> None:
    group = make_group(symp4)
    whole = whole_group(group)
    layer = layer_subgroup(group, 2)
    assert layer.order == 27
    conjugates = group.conjugate(
        np.repeat(whole.generators, layer.generators.shape[0], axis=0),
        np.tile(layer.generators, (whole.generators.shape[0], 1)),
    )
    assert layer.contains(conjugates).all()


def test_non_subalgebra_is_rejected(flip3: AlgebraSpec, make_group: GroupFactory) -> None:
    group = make_group(flip3)
    space = get_algebra(flip3).span(np.array([[1, 0, 0], [0, 0, 1]]))
    with pytest.raises(DomainError):
        algebra_subgroup(group, space)


def test_enumerated_subgroup_checks_closure(flip3: AlgebraSpec, make_group: GroupFactory) -> None:
    group = make_group(flip3)
    with pytest.raises(DomainError):
        enumerated_subgroup(group, np.array([1, 2]))
    with pytest.raises(DomainError):
        enumerated_subgroup(group, group.encode(np.array([[0, 0, 0], [1, 0, 0]])))
    centre = enumerated_subgroup(group, group.encode(np.array([[0, 0, 0], [0, 1, 0], [0, 2, 0]])))
    assert centre.order == 3


def test_guardrail(flip3: AlgebraSpec, make_group: GroupFactory) -> None:
    group = make_group(flip3, max_order=10)
    with pytest.raises(GuardrailError):
        whole_group(group)
