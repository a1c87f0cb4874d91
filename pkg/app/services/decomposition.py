"""Inductive decomposition of irreducible characters of ``C_G(sigma)``.

Each step finds the smallest filtration level ``M = G_m`` on whose fixed
points the character is scalar, picks a line ``L`` between ``J^m`` and
``J^(m-1)`` with nontrivial commutator pairing, and descends to the
codimension-one ideal ``J_0`` spanned by ``F S``, ``J^2`` and the
``sigma``-fixed ``F``-core of ``J``, together with the Clifford
component of the character over an extension ``xi`` of the central
character. The descent stops at a linear character ``theta`` of ``C_H(sigma)``
whose induction is the original character.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np

from app.config import Settings
from app.core.algebra import (
    AlgebraSpec,
    ScalarField,
    Subspace,
    build_J0,
    get_algebra,
    line_decomposition,
    line_direction,
)
from app.core.characters import (
    ClassFunction,
    LinearCharacter,
    as_linear_character,
    clifford_component,
    conjugate_character,
    induce,
    inner_product,
    linear_characters,
    linear_multiplicities,
    restrict,
    scalar_exponents,
    stabilizer_of_character,
)
from app.core.group import (
    AlgebraGroup,
    SubgroupHandle,
    algebra_subgroup,
    derived_subgroup,
    enumerated_subgroup,
    fixed_subgroup,
)
from app.core.linalg import as_rows, span_elements
from app.errors import DomainError, InternalConsistencyError
from app.services.oracle import OracleService

logger = logging.getLogger(__name__)


@dataclass(slots=True)
class Stage:
    """One step of the descent: the algebra ``J``, ``C_J``-group and character."""

    depth: int
    space: Subspace
    fixed: SubgroupHandle
    chi: ClassFunction


@dataclass(slots=True)
class ScalarLevel:
    """Smallest ``m`` with ``Res chi = chi(1) zeta`` on ``C_{G_m}(sigma)``."""

    m: int
    zeta: LinearCharacter
    scalar_subgroup: SubgroupHandle
    power: Subspace
    upper: Subspace
    lower: Subspace


@dataclass(slots=True)
class LineChoice:
    index: int
    count: int
    line: Subspace
    direction: np.ndarray
    ideal: Subspace
    normal: SubgroupHandle


@dataclass(slots=True)
class LevelRecord:
    """Per-step trace entry of a decomposition."""

    depth: int
    degree: int
    dim_J: int
    dim_J2: int
    m: int
    line_index: int
    line_count: int
    direction: list[int]
    dim_fixed: int
    dim_S: int
    dim_J0: int
    order_fixed: int
    order_stabilizer: int
    fiber_size: int
    xi: list[int]
    scaling_samples: int

    def as_dict(self) -> dict[str, Any]:
        return {
            "depth": self.depth,
            "degree": self.degree,
            "dim_J": self.dim_J,
            "dim_J2": self.dim_J2,
            "m": self.m,
            "line_index": self.line_index,
            "line_count": self.line_count,
            "u": self.direction,
            "dim_C_J": self.dim_fixed,
            "dim_S": self.dim_S,
            "dim_J0": self.dim_J0,
            "order_C_G": self.order_fixed,
            "order_stabilizer": self.order_stabilizer,
            "fiber_size": self.fiber_size,
            "xi": self.xi,
            "scaling_samples": self.scaling_samples,
        }


@dataclass(slots=True)
class MonomialPair:
    """A subalgebra ``L_H`` and a linear character ``theta`` of ``C_H(sigma)``."""

    subalgebra: Subspace
    theta: LinearCharacter
    trace: list[LevelRecord] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.subalgebra.dim

    @property
    def order(self) -> int:
        return self.theta.group.order


@dataclass(eq=False)
class PhiMap:
    """``phi(g)(h) = zeta([g, h])`` from ``C_G(sigma)`` to characters of ``C_N(sigma)``."""

    group: AlgebraGroup
    source: SubgroupHandle
    target: SubgroupHandle
    zeta: LinearCharacter

    def _pairing(self, elements: np.ndarray, partners: np.ndarray) -> np.ndarray:
        """``zeta([x, y])`` exponents for all pairs, shape ``(len(elements), len(partners))``."""

        count = elements.shape[0]
        if not partners.shape[0]:
            return np.zeros((count, 0), dtype=np.int64)
        commutators = self.group.commutator(
            np.repeat(elements, partners.shape[0], axis=0), np.tile(partners, (count, 1))
        )
        if not self.zeta.group.contains(commutators).all():
            raise InternalConsistencyError("commutator pairing leaves C_M(sigma)")
        return self.zeta.exponents_at(commutators).reshape(count, partners.shape[0])

    @cached_property
    def factor_generators(self) -> np.ndarray:
        factors = self.target.abelian.factors
        return np.array([h.vector for h, _ in factors], dtype=np.int64).reshape(
            len(factors), self.group.width
        )

    def character(self, g: np.ndarray) -> LinearCharacter:
        values = self._pairing(np.atleast_2d(g), self.factor_generators)[0]
        return LinearCharacter.from_generator_values(self.target, values, self.zeta.order)

    @cached_property
    def values(self) -> np.ndarray:
        """Pairing of every source element with the factor generators of the target."""

        return self._pairing(self.source.elements, self.factor_generators)

    @cached_property
    def kernel(self) -> SubgroupHandle:
        keep = ~self.values.any(axis=1)
        return enumerated_subgroup(self.group, self.source.codes[keep], label="ker phi")

    @cached_property
    def image(self) -> list[LinearCharacter]:
        rows = np.unique(self.values, axis=0)
        return [
            LinearCharacter.from_generator_values(self.target, row, self.zeta.order) for row in rows
        ]


class DecompositionService:
    """Decompose irreducible characters of ``C_G(sigma)`` into monomial pairs."""

    def __init__(
        self, spec: AlgebraSpec, settings: Settings, oracle: OracleService | None = None
    ) -> None:
        self.spec = spec
        self.settings = settings
        self.algebra = get_algebra(spec)
        self.group = AlgebraGroup(self.algebra, settings.engine.max_group_order)
        self.oracle = oracle or OracleService(settings.oracle, settings.engine.seed)
        self.q_sigma = spec.field.q_sigma
        self._rng = np.random.default_rng(settings.engine.seed)

    @cached_property
    def fixed(self) -> SubgroupHandle:
        """``C_G(sigma)`` for the whole algebra."""

        return fixed_subgroup(self.group, self.algebra.whole(), label="C_G(sigma)")

    def irreducibles(self) -> list[ClassFunction]:
        return self.oracle.table(self.fixed).characters

    def _fixed_of(self, space: Subspace, label: str) -> SubgroupHandle:
        return fixed_subgroup(self.group, space, label=label)

    # -- single steps -----------------------------------------------------

    def minimal_scalar_level(self, stage: Stage) -> ScalarLevel:
        """Find ``m`` and the central character ``zeta`` of ``C_{G_m}(sigma)``."""

        chi = stage.chi
        if chi.degree < 2:
            raise DomainError("minimal scalar level needs a character of degree at least 2")
        algebra = self.algebra
        scalar = scalar_exponents(chi)
        top = algebra.nilpotency_class(stage.space) + 1
        for m in range(1, top + 1):
            power = algebra.power(m, stage.space)
            subgroup = stage.fixed if m == 1 else self._fixed_of(power, f"C_G_{m}(sigma)")
            labels = stage.fixed.class_of(subgroup.elements)
            if (scalar[labels] >= 0).all():
                break
        else:  # pragma: no cover - the zero level is always scalar
            raise InternalConsistencyError("no scalar level found")
        if m < 2:
            raise InternalConsistencyError("scalar level below 2 for a nonlinear character")

        factors = subgroup.abelian.factors
        generators = as_rows([h.vector for h, _ in factors], self.group.width)
        zeta = LinearCharacter.from_generator_values(
            subgroup, scalar[stage.fixed.class_of(generators)] if factors else np.zeros(0), chi.order
        )
        if zeta.order > 1 and chi.order % zeta.order:
            raise InternalConsistencyError("central character order does not divide the value order")
        lifted = (zeta.exponents_at(subgroup.elements) * (chi.order // zeta.order)) % chi.order
        if not np.array_equal(lifted, scalar[labels]):
            raise InternalConsistencyError("restriction to C_M(sigma) is not a multiple of zeta")
        if zeta.is_trivial:
            raise InternalConsistencyError("central character is trivial for a nonlinear character")
        for g in stage.fixed.generators:
            if conjugate_character(zeta, g) != zeta:
                raise InternalConsistencyError("central character is not C_G(sigma)-invariant")

        upper = algebra.minus_fixed_space(algebra.power(m - 1, stage.space))
        lower = subgroup.space
        logger.debug("Depth %d: scalar level m=%d", stage.depth, m)
        return ScalarLevel(m, zeta, subgroup, power, upper, lower)

    def select_line(self, stage: Stage, level: ScalarLevel) -> LineChoice:
        """First line ``L_s`` with ``zeta([C_G(sigma), C_N(sigma)]) != 1``."""

        algebra = self.algebra
        lines = line_decomposition(self.spec, level.upper, level.lower)
        for index, line in enumerate(lines):
            residues = [line_direction(level.lower, row) for row in line.basis]
            direction = next(r for r in residues if r.any())
            ideal = algebra.add(algebra.span(direction, ScalarField.FULL), level.power)
            if not algebra.is_subalgebra(ideal):
                raise InternalConsistencyError("F u + J^m is not a subalgebra")
            if algebra.minus_fixed_space(ideal) != line:
                raise InternalConsistencyError("C_L(sigma) differs from the chosen line")
            normal = self._fixed_of(ideal, "C_N(sigma)")
            if normal.order != self.q_sigma * level.scalar_subgroup.order:
                raise InternalConsistencyError("C_N(sigma) is not (1 + F^sigma u) C_M(sigma)")
            pairing = PhiMap(self.group, stage.fixed, normal, level.zeta)._pairing(
                stage.fixed.generators, normal.generators
            )
            if pairing.any():
                logger.debug("Depth %d: selected line %d of %d", stage.depth, index, len(lines))
                return LineChoice(index, len(lines), line, direction, ideal, normal)
        raise InternalConsistencyError("no line has a nontrivial commutator pairing")

    def phi_map(self, stage: Stage, level: ScalarLevel, choice: LineChoice) -> PhiMap:
        return PhiMap(self.group, stage.fixed, choice.normal, level.zeta)

    def compute_S(self, stage: Stage, level: ScalarLevel, choice: LineChoice) -> Subspace:
        """``S = {a in C_J(sigma) : zeta([Psi(a), Psi(b)]) = 1 for all b in C_L(sigma)}``."""

        algebra = self.algebra
        phi = self.phi_map(stage, level, choice)
        pairing = phi._pairing(stage.fixed.elements, choice.normal.generators)
        members = stage.fixed.elements[~pairing.any(axis=1)]
        vectors = algebra.cayley_inverse(members)
        space = algebra.span(vectors, ScalarField.FIXED)

        fixed_space = stage.fixed.space
        fixed_square = algebra.minus_fixed_space(algebra.power(2, stage.space))
        problems = []
        if space.order != members.shape[0]:
            problems.append("not an F^sigma-subspace")
        if not space.issubset(fixed_space):
            problems.append("not inside C_J(sigma)")
        if not fixed_square.issubset(space):
            problems.append("does not contain C_{J^2}(sigma)")
        if space.dim != fixed_space.dim - 1:
            problems.append(f"codimension {fixed_space.dim - space.dim}")
        if problems:
            raise InternalConsistencyError(f"S certification failed: {', '.join(problems)}")
        return space

    def check_scaling_identity(self, stage: Stage, level: ScalarLevel, samples: int) -> int:
        """Compare ``zeta([Psi(alpha a), Psi(b)])`` with ``zeta([Psi(a), Psi(alpha b)])``.

        ``a`` ranges over ``C_J(sigma)`` and ``b`` over ``C_{J^(m-1)}(sigma)``.
        """

        if samples <= 0:
            return 0
        algebra, group = self.algebra, self.group
        scalars = span_elements(algebra.field.fixed_basis_vectors, algebra.p)
        left_pool = stage.fixed.space.elements()
        right_pool = level.upper.elements()
        alphas = scalars[self._rng.integers(0, scalars.shape[0], samples)]
        a = left_pool[self._rng.integers(0, left_pool.shape[0], samples)]
        b = right_pool[self._rng.integers(0, right_pool.shape[0], samples)]
        matrices = np.stack([algebra.scalar_matrix(alpha) for alpha in alphas])
        scaled_a = np.einsum("nd,nde->ne", a, matrices) % algebra.p
        scaled_b = np.einsum("nd,nde->ne", b, matrices) % algebra.p
        zeta = level.zeta
        left = zeta.exponents_at(group.commutator(algebra.cayley(scaled_a), algebra.cayley(b)))
        right = zeta.exponents_at(group.commutator(algebra.cayley(a), algebra.cayley(scaled_b)))
        if not np.array_equal(left, right):
            raise InternalConsistencyError("scaling identity for the commutator pairing fails")
        return samples

    def check_phi(self, phi: PhiMap, level: ScalarLevel, stage: Stage, S: Subspace) -> None:
        """Kernel, image and homomorphism properties of ``phi``."""

        problems = []
        kernel_codes = np.sort(self.group.encode(self.algebra.cayley(S.elements())))
        if not np.array_equal(phi.kernel.codes, kernel_codes):
            problems.append("ker phi != Psi(S)")
        if len(phi.image) != self.q_sigma:
            problems.append(f"image of size {len(phi.image)}")

        count = min(32, stage.fixed.order)
        picks = stage.fixed.elements[self._rng.integers(0, stage.fixed.order, (2, count))]
        products = self.group.mul(picks[0], picks[1])
        for g, h, gh in zip(picks[0], picks[1], products):
            if phi.character(gh) != phi.character(g) * phi.character(h):
                problems.append("phi is not multiplicative")
                break
        values = phi._pairing(picks[0], phi.target.elements)
        for g, row in zip(picks[0], values):
            character = phi.character(g)
            order = math.lcm(character.order, phi.zeta.order)
            expected = character.exponents_at(phi.target.elements) * (order // character.order)
            if not np.array_equal((row * (order // phi.zeta.order)) % order, expected % order):
                problems.append("phi(g) is not the pairing character")
                break
        if phi._pairing(stage.fixed.generators, level.scalar_subgroup.generators).any():
            problems.append("image does not annihilate C_M(sigma)")

        outside = [a for a in stage.fixed.space.basis if not S.contains(a)[0]]
        if outside:
            scalars = span_elements(self.algebra.field.fixed_basis_vectors, self.algebra.p)
            scaled = np.stack([(outside[0] @ self.algebra.scalar_matrix(alpha)) % self.algebra.p for alpha in scalars])
            images = {phi.character(g) for g in self.algebra.cayley(scaled)}
            if len(images) != self.q_sigma:
                problems.append("alpha -> phi(Psi(alpha a)) is not injective")
        if problems:
            raise InternalConsistencyError(f"phi check failed: {', '.join(problems)}")

    def extend_zeta(
        self, stage: Stage, level: ScalarLevel, choice: LineChoice, kernel: SubgroupHandle
    ) -> tuple[LinearCharacter, list[LinearCharacter]]:
        """Pick the first extension of ``zeta`` to ``C_N(sigma)`` in the support of ``chi``."""

        normal, scalar_subgroup, zeta = choice.normal, level.scalar_subgroup, level.zeta
        derived = derived_subgroup(normal)
        if not derived.issubgroup(scalar_subgroup) or zeta.exponents_at(derived.elements).any():
            raise InternalConsistencyError("[C_N(sigma), C_N(sigma)] is not in ker zeta")

        candidates = linear_characters(normal)
        factors = scalar_subgroup.abelian.factors
        anchors = as_rows([h.vector for h, _ in factors], self.group.width)
        target = zeta.exponents_at(anchors)
        fiber = []
        for xi in candidates:
            order = max(xi.order, zeta.order)
            left = xi.exponents_at(anchors) * (order // xi.order)
            if np.array_equal(left % order, (target * (order // zeta.order)) % order):
                fiber.append(xi)

        problems = []
        expected = normal.order // scalar_subgroup.order
        if len(fiber) != self.q_sigma or len(fiber) != expected:
            problems.append(f"fiber of size {len(fiber)}")
        multiplicities = linear_multiplicities(stage.chi, candidates)
        support = {xi for xi, m in zip(candidates, multiplicities) if m > 0}
        if support != set(fiber):
            problems.append("spectral support differs from the fiber over zeta")
        if len(set(multiplicities[multiplicities > 0].tolist())) > 1:
            problems.append("unequal multiplicities in the restriction")
        for xi in fiber:
            if stabilizer_of_character(xi, stage.fixed) != kernel:
                problems.append("stabilizer differs from Psi(S)")
                break
        if fiber:
            orbit = {fiber[0]}
            frontier = [fiber[0]]
            while frontier:
                fresh = []
                for xi in frontier:
                    for g in stage.fixed.generators:
                        image = conjugate_character(xi, g)
                        if image not in orbit:
                            orbit.add(image)
                            fresh.append(image)
                frontier = fresh
            if orbit != set(fiber):
                problems.append("fiber is not a single conjugation orbit")
        if problems:
            raise InternalConsistencyError(f"extension check failed: {', '.join(problems)}")
        return fiber[0], fiber

    def _cross_check_component(
        self, chi: ClassFunction, xi: LinearCharacter, stabilizer: SubgroupHandle, component: ClassFunction
    ) -> None:
        restricted = restrict(chi, stabilizer)
        candidates = [
            psi
            for psi in self.oracle.table(stabilizer).characters
            if inner_product(restricted, psi) != 0 and linear_multiplicities(psi, [xi])[0] > 0
        ]
        if len(candidates) != 1 or candidates[0] != component:
            raise InternalConsistencyError(
                f"oracle finds {len(candidates)} constituents over xi on the stabilizer"
            )

    # -- whole descent ----------------------------------------------------

    def decompose(self, chi: ClassFunction) -> MonomialPair:
        """Return ``(H, theta)`` with ``Ind theta = chi``."""

        if chi.group != self.fixed:
            raise DomainError("character does not live on C_G(sigma)")
        if inner_product(chi, chi) != 1:
            raise DomainError("character is not irreducible")

        stage = Stage(0, self.algebra.whole(), self.fixed, chi)
        trace: list[LevelRecord] = []
        try:
            while stage.chi.degree > 1:
                record, stage = self._descend(stage)
                trace.append(record)
            theta = as_linear_character(stage.chi)
            pair = MonomialPair(stage.space, theta, trace)
            if not self.algebra.is_sigma_invariant(stage.space):
                raise InternalConsistencyError("final subalgebra is not sigma-invariant")
            if induce(theta.class_function(), self.fixed) != chi:
                raise InternalConsistencyError("induced character differs from the input")
        except InternalConsistencyError as error:
            error.trace = [record.as_dict() for record in trace] + error.trace
            raise
        return pair

    def _descend(self, stage: Stage) -> tuple[LevelRecord, Stage]:
        algebra = self.algebra
        square = algebra.power(2, stage.space)
        level = self.minimal_scalar_level(stage)
        if level.m == 2 and stage.space.dim == square.dim + 1:
            raise InternalConsistencyError("excluded case m = 2 with dim J = dim J^2 + 1")
        choice = self.select_line(stage, level)
        S = self.compute_S(stage, level, choice)
        samples = self.check_scaling_identity(stage, level, self.settings.engine.scaling_samples)
        phi = self.phi_map(stage, level, choice)
        self.check_phi(phi, level, stage, S)
        xi, fiber = self.extend_zeta(stage, level, choice, phi.kernel)

        ideal = build_J0(self.spec, S, stage.space)
        stabilizer = self._fixed_of(ideal, f"C_G0(sigma)@{stage.depth + 1}")
        if stabilizer != phi.kernel:
            raise InternalConsistencyError("C_{G_0}(sigma) differs from Psi(S)")
        component = clifford_component(stage.chi, xi, stabilizer)
        if component.degree * self.q_sigma != stage.chi.degree:
            raise InternalConsistencyError("Clifford component has the wrong degree")
        if self.settings.engine.clifford_cross_check:
            self._cross_check_component(stage.chi, xi, stabilizer, component)

        record = LevelRecord(
            depth=stage.depth,
            degree=stage.chi.degree,
            dim_J=stage.space.dim,
            dim_J2=square.dim,
            m=level.m,
            line_index=choice.index,
            line_count=choice.count,
            direction=[int(c) for c in choice.direction],
            dim_fixed=stage.fixed.space.dim,
            dim_S=S.dim,
            dim_J0=ideal.dim,
            order_fixed=stage.fixed.order,
            order_stabilizer=stabilizer.order,
            fiber_size=len(fiber),
            xi=list(xi.exponents),
            scaling_samples=samples,
        )
        logger.debug("Depth %d: degree %d -> %d", stage.depth, stage.chi.degree, component.degree)
        return record, Stage(stage.depth + 1, ideal, stabilizer, component)


def algebra_subgroup_of(service: DecompositionService, pair: MonomialPair) -> SubgroupHandle:
    """``H = 1 + L_H`` for a monomial pair."""

    return algebra_subgroup(service.group, pair.subalgebra, label="H")


__all__ = [
    "DecompositionService",
    "LevelRecord",
    "LineChoice",
    "MonomialPair",
    "PhiMap",
    "ScalarLevel",
    "Stage",
    "algebra_subgroup_of",
]
