"""Whole-group verification of the monomial decomposition.

:class:`VerificationService` computes the oracle table of ``C_G(sigma)``,
decomposes every irreducible character and runs the supporting identity
suites (Cayley bijection, commutator identity, layer isomorphism, oracle
self-consistency). Failures are collected into the report rather than
raised, so one broken character does not hide the others.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from app.config import Settings, get_settings
from app.core.algebra import AlgebraSpec
from app.core.characters import (
    ClassFunction,
    induce,
    inner_product,
    linear_characters,
    restrict,
)
from app.core.dixon import CharacterTable, check_table
from app.core.field import RootOfUnity, Scalar, additive_character, get_field, tau_apply
from app.core.group import (
    TwistedPart,
    check_comm_lemma,
    fixed_subgroup,
    sigma_twisted_part,
    whole_group,
)
from app.core.linalg import residual
from app.errors import DomainError, InternalConsistencyError
from app.services.decomposition import DecompositionService
from app.services.oracle import OracleService

logger = logging.getLogger(__name__)

_SAMPLE_SIZE = 256
_EXHAUSTIVE_SINGLES = 81
_EXHAUSTIVE_PAIRS = 27


@dataclass(slots=True)
class CharacterCertificate:
    """Outcome of decomposing one irreducible character."""

    index: int
    degree: int
    dim_H: int | None = None
    order_CH: int | None = None
    depth: int = 0
    matched: bool = False
    theta: list[int] = field(default_factory=list)
    trace: list[dict[str, Any]] = field(default_factory=list)
    error: str | None = None

    def as_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "degree": self.degree,
            "dim_H": self.dim_H,
            "order_C_H": self.order_CH,
            "depth": self.depth,
            "matched": self.matched,
            "theta": self.theta,
            "trace": self.trace,
            "error": self.error,
        }


@dataclass(slots=True)
class TheoremReport:
    """Everything ``verify`` learned about one algebra."""

    order_G: int
    order_C: int
    order_twisted: int | None
    order_twisted_subgroup: int | None
    table: CharacterTable
    certificates: list[CharacterCertificate]
    lemma_checks: dict[str, bool]
    failures: list[dict[str, Any]]
    notes: list[dict[str, Any]] = field(default_factory=list)

    @property
    def class_count(self) -> int:
        return len(self.table)

    @property
    def passed(self) -> bool:
        return not self.failures


class VerificationService:
    """Run the decomposition on every irreducible and check the supporting identities."""

    def __init__(
        self, spec: AlgebraSpec, settings: Settings, oracle: OracleService | None = None
    ) -> None:
        self.spec = spec
        self.settings = settings
        self.oracle = oracle or OracleService(settings.oracle, settings.engine.seed)
        self.decomposer = DecompositionService(spec, settings, self.oracle)
        self.algebra = self.decomposer.algebra
        self.group = self.decomposer.group
        self.q_sigma = spec.field.q_sigma
        self._rng = np.random.default_rng(settings.engine.seed)
        self._failures: list[dict[str, Any]] = []
        self._notes: list[dict[str, Any]] = []

    def _fail(self, check: str, message: str, **details: Any) -> None:
        logger.warning("Check %s failed: %s", check, message)
        self._failures.append({"check": check, "message": message, **details})

    def _random_offsets(self, count: int) -> np.ndarray:
        return self._rng.integers(0, self.algebra.p, size=(count, self.algebra.width))

    # -- decomposition --------------------------------------------------

    def certify(self, index: int, chi: ClassFunction) -> CharacterCertificate:
        """Decompose ``chi`` and record the resulting monomial pair."""

        certificate = CharacterCertificate(index=index, degree=chi.degree)
        try:
            pair = self.decomposer.decompose(chi)
        except InternalConsistencyError as error:
            certificate.error = str(error)
            certificate.trace = error.trace
            self._fail("decompose", str(error), character=index)
            return certificate
        certificate.dim_H = pair.dim
        certificate.order_CH = pair.order
        certificate.depth = len(pair.trace)
        certificate.theta = list(pair.theta.exponents)
        certificate.trace = [record.as_dict() for record in pair.trace]
        certificate.matched = self.decomposer.fixed.order == chi.degree * pair.order
        if not certificate.matched:
            self._fail("index", "[C_G(sigma) : C_H(sigma)] differs from the degree", character=index)
        return certificate

    # -- identity suites ------------------------------------------------

    def check_field(self) -> bool:
        """``tau`` is an involutive automorphism and ``a -> xi_a`` is additive and injective.

        ``tau`` squared is compared with the identity on every element up to
        ``q = 81`` and the pairwise identities run over all pairs up to
        ``q = 27``; larger fields are checked on the polynomial basis.
        """

        field_spec = self.spec.field
        runtime = get_field(field_spec)
        basis = [runtime.scalar(row) for row in np.eye(runtime.f, dtype=np.int64)]
        everything = [runtime.scalar(row) for row in runtime.elements()]
        singles = everything if field_spec.q <= _EXHAUSTIVE_SINGLES else basis
        pairs = everything if field_spec.q <= _EXHAUSTIVE_PAIRS else basis

        def tau(x: Scalar) -> Scalar:
            return tau_apply(field_spec, x)

        def xi(a: Scalar) -> RootOfUnity:
            return additive_character(field_spec, a, runtime.one)

        problems = []
        if any(tau(tau(x)) != x for x in singles):
            problems.append("tau is not an involution")
        if any(
            tau(runtime.add(x, y)) != runtime.add(tau(x), tau(y))
            or tau(runtime.mul(x, y)) != runtime.mul(tau(x), tau(y))
            for x in pairs
            for y in pairs
        ):
            problems.append("tau is not a field automorphism")
        if any(xi(runtime.add(a, b)) != xi(a) * xi(b) for a in pairs for b in pairs):
            problems.append("xi_(a+b) differs from xi_a xi_b")
        if any(
            all(additive_character(field_spec, a, x).is_trivial for x in basis)
            for a in singles
            if a != runtime.zero
        ):
            problems.append("the trace form is degenerate")
        if runtime.fixed_basis_vectors.shape[0] != field_spec.fixed_degree:
            problems.append("fixed subfield has the wrong degree")
        if problems:
            self._fail("field", "; ".join(problems))
        return not problems

    def check_cayley(self) -> bool:
        """``Phi`` and ``Psi`` are mutually inverse and ``C_J(sigma)`` is Lie closed."""

        algebra = self.algebra
        whole = algebra.whole()
        if whole.order <= self.settings.engine.comm_lemma_max_order:
            pool = whole.elements()
        else:
            pool = self._random_offsets(_SAMPLE_SIZE)
        ok = bool(np.array_equal(algebra.cayley_inverse(algebra.cayley(pool)), pool))
        ok &= bool(np.array_equal(algebra.cayley(algebra.cayley_inverse(pool)), pool))
        if not ok:
            self._fail("cayley", "Cayley transform is not a bijection")
        fixed_space = algebra.minus_fixed_space()
        if not algebra.is_lie_closed(fixed_space):
            self._fail("cayley", "C_J(sigma) is not closed under the bracket")
            ok = False
        return ok

    def check_sigma_action(self) -> bool:
        """``g -> sigma(g^-1)`` is an automorphism of order dividing two."""

        group = self.group
        first, second = self._random_offsets(_SAMPLE_SIZE), self._random_offsets(_SAMPLE_SIZE)
        ok = bool(
            np.array_equal(
                group.sigma_act(group.mul(first, second)),
                group.mul(group.sigma_act(first), group.sigma_act(second)),
            )
        )
        ok &= bool(np.array_equal(group.sigma_act(group.sigma_act(first)), first))
        if not ok:
            self._fail("sigma_action", "sigma action is not an involutive automorphism")
        return ok

    def twisted_part(self) -> TwistedPart | None:
        """``[G, sigma]``, when ``G`` itself is small enough to enumerate."""

        if self.group.order > self.group.max_order:
            logger.info("Skipping [G, sigma]: |G| = %d exceeds the limit", self.group.order)
            return None
        try:
            twisted = sigma_twisted_part(whole_group(self.group), self.decomposer.fixed)
        except InternalConsistencyError as error:
            self._fail("twisted_part", str(error))
            return None
        if not twisted.is_subgroup:
            self._notes.append(
                {
                    "check": "twisted_part",
                    "message": "[G, sigma] is not closed under multiplication",
                    "order": twisted.order,
                    "generated_order": twisted.generated.order,
                }
            )
        return twisted

    def check_comm_lemma(self) -> tuple[bool, bool] | None:
        """``[C_G(sigma), C_{G_n}(sigma)]`` lies in ``[G, G_n] ∩ C_G(sigma)`` for every ``n``.

        Returns the containment verdict and whether equality held at every
        ``n``. Strict containment is recorded as a note, not a failure.
        """

        if self.group.order > self.settings.engine.comm_lemma_max_order:
            return None
        contained = exact = True
        for n in range(1, self.algebra.nilpotency_class() + 1):
            result = check_comm_lemma(self.group, n)
            witness = list(result.witness.coords.coords) if result.witness else None
            if not result.contained:
                self._fail("comm_lemma", f"commutator containment fails at n={n}", witness=witness)
                contained = False
            elif not result.holds:
                self._notes.append(
                    {
                        "check": "comm_lemma_exact",
                        "message": f"containment is strict at n={n}",
                        "left_order": result.left_order,
                        "right_order": result.right_order,
                        "witness": witness,
                    }
                )
            exact &= result.holds
        return contained, exact

    def check_orthogonality(self, table: CharacterTable) -> bool:
        try:
            check_table(table)
        except InternalConsistencyError as error:
            self._fail("orthogonality", str(error))
            return False
        return True

    def check_layers(self) -> bool:
        """Layer quotients of ``C_G(sigma)`` match those of ``C_J(sigma)``.

        ``1 + x -> x mod J^m`` maps ``C_{G_(m-1)}(sigma)`` homomorphically
        onto ``C_{J^(m-1)}(sigma)`` modulo ``C_{J^m}(sigma)``; the image is
        counted directly.
        """

        algebra, group = self.algebra, self.group
        ok = True
        top = algebra.nilpotency_class()
        for m in range(2, top + 2):
            upper_space = algebra.power(m - 1)
            lower_space = algebra.power(m)
            upper = fixed_subgroup(group, upper_space, label=f"C_G_{m - 1}(sigma)")
            lower = fixed_subgroup(group, lower_space, label=f"C_G_{m}(sigma)")
            residues = residual(lower_space.basis, lower_space.pivots, upper.elements, group.p)
            image = np.unique(group.encode(residues)).size
            expected = self.q_sigma ** (upper.space.dim - lower.space.dim)
            if not image == upper.order // lower.order == expected:
                self._fail("layers", f"layer {m - 1}/{m} has image {image}, expected {expected}")
                ok = False
        return ok

    def check_normality(self) -> bool:
        """``G_n`` is normal in ``G`` and ``C_{G_n}(sigma)`` in ``C_G(sigma)``."""

        algebra, group = self.algebra, self.group
        fixed = self.decomposer.fixed
        ok = True
        for n in range(1, algebra.nilpotency_class() + 1):
            layer = algebra.power(n)
            if not algebra.is_ideal_of(layer, algebra.whole()):
                ok = False
            layer_fixed = fixed_subgroup(group, layer)
            inner = layer_fixed.generators
            outer = fixed.generators
            if inner.size and outer.size:
                images = group.conjugate(
                    np.repeat(outer, inner.shape[0], axis=0), np.tile(inner, (outer.shape[0], 1))
                )
                if not layer_fixed.contains(images).all():
                    ok = False
        if not ok:
            self._fail("normality", "a filtration layer is not normal")
        return ok

    def check_reciprocity(self, table: CharacterTable) -> bool:
        """``<Ind theta, chi> = <theta, Res chi>`` on random pairs."""

        algebra = self.algebra
        subgroups = [
            fixed_subgroup(self.group, algebra.power(m), label=f"C_G_{m}(sigma)")
            for m in range(1, algebra.nilpotency_class() + 1)
        ]
        if not subgroups:
            return True
        ok = True
        for _ in range(self.settings.engine.reciprocity_samples):
            subgroup = subgroups[self._rng.integers(len(subgroups))]
            thetas = linear_characters(subgroup)
            theta = thetas[self._rng.integers(len(thetas))].class_function()
            chi = table.characters[self._rng.integers(len(table))]
            left = inner_product(induce(theta, table.group), chi)
            right = inner_product(theta, restrict(chi, subgroup))
            if left != right:
                self._fail("reciprocity", f"{left} != {right} on {subgroup!r}")
                ok = False
                break
        return ok

    def check_seed_independence(self, table: CharacterTable) -> bool:
        other = self.oracle.fresh_table(table.group, seed=self.settings.engine.seed + 1)
        ok = set(other.characters) == set(table.characters)
        if not ok:
            self._fail("oracle_seed", "character table depends on the seed")
        return ok

    def check_degrees(self, table: CharacterTable) -> tuple[bool, bool]:
        degrees = table.degrees
        total = sum(d * d for d in degrees) == table.group.order
        if not total:
            self._fail("degree_sum", "sum of squared degrees differs from |C_G(sigma)|")
        powers = all(_is_power(d, self.q_sigma) for d in degrees)
        if not powers:
            self._fail("degree_powers", f"a degree is not a power of {self.q_sigma}")
        return total, powers

    # -- entry point ----------------------------------------------------

    def verify(self) -> TheoremReport:
        """Decompose every irreducible character of ``C_G(sigma)`` and run all suites."""

        self._failures = []
        self._notes = []
        fixed = self.decomposer.fixed
        table = self.oracle.table(fixed)
        logger.info(
            "C_G(sigma) has order %d and %d irreducible characters", fixed.order, len(table)
        )
        certificates = [self.certify(index, chi) for index, chi in enumerate(table.characters)]
        twisted = self.twisted_part()
        degree_sum, degree_powers = self.check_degrees(table)
        comm = self.check_comm_lemma()

        checks: dict[str, bool | None] = {
            "field": self.check_field(),
            "cayley": self.check_cayley(),
            "sigma_action": self.check_sigma_action(),
            "twisted_part": twisted is not None if self.group.order <= self.group.max_order else None,
            "comm_lemma": comm[0] if comm else None,
            "comm_lemma_exact": comm[1] if comm else None,
            "layers": self.check_layers(),
            "normality": self.check_normality(),
            "orthogonality": self.check_orthogonality(table),
            "reciprocity": self.check_reciprocity(table),
            "oracle_seed": self.check_seed_independence(table),
            "degree_sum": degree_sum,
            "degree_powers": degree_powers,
            "decompositions": all(c.matched for c in certificates),
        }
        lemma_checks = {name: value for name, value in checks.items() if value is not None}
        report = TheoremReport(
            order_G=self.group.order,
            order_C=fixed.order,
            order_twisted=twisted.order if twisted is not None else None,
            order_twisted_subgroup=twisted.generated.order if twisted is not None else None,
            table=table,
            certificates=certificates,
            lemma_checks=lemma_checks,
            failures=list(self._failures),
            notes=list(self._notes),
        )
        if report.passed:
            logger.info("All %d characters decomposed", len(certificates))
        else:
            logger.warning("Verification found %d failures", len(report.failures))
        return report


def _is_power(value: int, base: int) -> bool:
    if value < 1:
        return False
    while value % base == 0:
        value //= base
    return value == 1


def verify_theorem(spec: AlgebraSpec, settings: Settings | None = None) -> TheoremReport:
    """Convenience wrapper around :meth:`VerificationService.verify`."""

    if spec.field.p == 2:
        raise DomainError("characteristic 2 is not supported: p must be odd")
    return VerificationService(spec, settings or get_settings()).verify()


__all__ = [
    "CharacterCertificate",
    "TheoremReport",
    "VerificationService",
    "verify_theorem",
]
