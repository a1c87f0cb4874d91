"""Shared fixtures: small settings and the standard example algebras."""

from __future__ import annotations

from collections.abc import Callable
from pathlib import Path

import pytest

from app.config import EngineConfig, LoggingConfig, OracleConfig, Settings
from app.core.algebra import AlgebraSpec, get_algebra
from app.core.group import AlgebraGroup
from app.formats import load_algebra_file, make_example

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture()
def settings() -> Settings:
    return Settings(
        engine=EngineConfig(
            seed=0,
            max_group_order=3**10,
            max_field_order=81,
            scaling_samples=20,
            reciprocity_samples=10,
            clifford_cross_check=True,
            comm_lemma_max_order=3**6,
        ),
        oracle=OracleConfig(prime_bound=10**6, max_attempts=64),
        logging=LoggingConfig(level="WARNING"),
    )


@pytest.fixture()
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture()
def fix_b() -> AlgebraSpec:
    return load_algebra_file(FIXTURES / "fix_b.alg")


@pytest.fixture()
def flip3() -> AlgebraSpec:
    return make_example("un-flip", 3, 3)


@pytest.fixture()
def symp4() -> AlgebraSpec:
    return make_example("un-symplectic", 4, 3)


@pytest.fixture()
def unitary3() -> AlgebraSpec:
    return make_example("un-unitary", 3, 9)


@pytest.fixture()
def make_group() -> Callable[[AlgebraSpec], AlgebraGroup]:
    def build(spec: AlgebraSpec, max_order: int = 3**10) -> AlgebraGroup:
        return AlgebraGroup(get_algebra(spec), max_order)

    return build


@pytest.fixture()
def zero() -> AlgebraSpec:
    return load_algebra_file(FIXTURES / "zero.alg")
