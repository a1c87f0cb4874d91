from __future__ import annotations

import numpy as np
import pytest

from app.config import Settings
from app.core.algebra import AlgebraSpec
from app.core.characters import induce, inner_product, trivial_character
from app.core.group import enumerated_subgroup, whole_group
from app.errors import DomainError
from app.services import DecompositionService
from app.services.decomposition import Stage, algebra_subgroup_of


def test_linear_characters_are_their_own_pairs(flip3: AlgebraSpec, settings: Settings) -> None:
    service = DecompositionService(flip3, settings)
    characters = service.irreducibles()
    assert service.fixed.order == 3
    assert len(characters) == 3
    for chi in characters:
        pair = service.decompose(chi)
        assert pair.trace == []
        assert pair.subalgebra == service.algebra.whole()
        assert pair.theta.class_function() == chi


def test_symplectic_characters_are_monomial(symp4: AlgebraSpec, settings: Settings) -> None:
    service = DecompositionService(symp4, settings)
    characters = service.irreducibles()
    assert sum(chi.degree**2 for chi in characters) == 81
    nonlinear = [chi for chi in characters if chi.degree > 1]
    assert nonlinear
    for chi in nonlinear:
        pair = service.decompose(chi)
        assert pair.order * chi.degree == service.fixed.order
        assert induce(pair.theta.class_function(), service.fixed) == chi
        assert service.algebra.is_sigma_invariant(pair.subalgebra)
        assert service.algebra.is_subalgebra(pair.subalgebra)

        record = pair.trace[0]
        assert record.degree == chi.degree
        assert record.m >= 2
        assert record.dim_S == record.dim_fixed - 1
        assert record.dim_J0 == record.dim_J - 1
        assert record.fiber_size == 3
        assert set(record.as_dict()) >= {"u", "dim_C_J", "order_C_G", "xi"}


def test_unitary_characters_are_monomial(unitary3: AlgebraSpec, settings: Settings) -> None:
    service = DecompositionService(unitary3, settings)
    for chi in service.irreducibles():
        pair = service.decompose(chi)
        assert pair.order * chi.degree == 27
        subgroup = algebra_subgroup_of(service, pair)
        assert subgroup.order == 9**pair.dim


def test_single_steps(symp4: AlgebraSpec, settings: Settings) -> None:
    service = DecompositionService(symp4, settings)
    chi = next(chi for chi in service.irreducibles() if chi.degree > 1)
    stage = Stage(0, service.algebra.whole(), service.fixed, chi)

    level = service.minimal_scalar_level(stage)
    assert not level.zeta.is_trivial
    assert level.lower.issubset(level.upper)

    choice = service.select_line(stage, level)
    assert 0 <= choice.index < choice.count
    assert choice.normal.order == 3 * level.scalar_subgroup.order

    S = service.compute_S(stage, level, choice)
    phi = service.phi_map(stage, level, choice)
    service.check_phi(phi, level, stage, S)
    assert len(phi.image) == 3
    assert phi.kernel.order * 3 == service.fixed.order
    assert service.check_scaling_identity(stage, level, 10) == 10

    xi, fiber = service.extend_zeta(stage, level, choice, phi.kernel)
    assert xi in fiber
    assert len(fiber) == 3


def test_scaling_identity_samples_the_whole_upper_layer(unitary3: AlgebraSpec, settings: Settings) -> None:
    service = DecompositionService(unitary3, settings)
    for chi in (chi for chi in service.irreducibles() if chi.degree > 1):
        stage = Stage(0, service.algebra.whole(), service.fixed, chi)
        level = service.minimal_scalar_level(stage)
        choice = service.select_line(stage, level)
        assert choice.line.issubset(level.upper)
        assert service.check_scaling_identity(stage, level, 50) == 50


def test_minimal_scalar_level_needs_a_nonlinear_character(flip3: AlgebraSpec, settings: Settings) -> None:
    service = DecompositionService(flip3, settings)
    chi = service.irreducibles()[0]
    with pytest.raises(DomainError):
        service.minimal_scalar_level(Stage(0, service.algebra.whole(), service.fixed, chi))


def test_reducible_input_is_rejected(symp4: AlgebraSpec, settings: Settings) -> None:
    service = DecompositionService(symp4, settings)
    trivial = enumerated_subgroup(service.group, np.zeros(1, dtype=np.int64))
    regular = induce(trivial_character(trivial), service.fixed)
    assert inner_product(regular, regular) == 81
    with pytest.raises(DomainError, match="not irreducible"):
        service.decompose(regular)


def test_character_of_another_group_is_rejected(flip3: AlgebraSpec, settings: Settings) -> None:
    service = DecompositionService(flip3, settings)
    whole = whole_group(service.group)
    with pytest.raises(DomainError):
        service.decompose(trivial_character(whole))
