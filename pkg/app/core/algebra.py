"""Nilpotent associative algebras with involution over a finite field.

An algebra ``J`` of dimension ``d`` over ``F_q = GF(p^f)`` is handled as the
``F_p``-vector space of dimension ``d * f``: coordinate ``i * f + r`` of a
vector is the coefficient of ``x^r e_i``. Multiplication is a single
``F_p``-bilinear structure tensor and the involution is an ``F_p``-linear
matrix, so every operation works on batches of row vectors at once.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from app.core.field import FieldSpec, FiniteField, Scalar, get_field
from app.core.linalg import as_rows, in_span, left_nullspace, rref, span_elements
from app.errors import DomainError, InternalConsistencyError

logger = logging.getLogger(__name__)

_BATCH_ROWS = 1 << 14


class ScalarField(str, Enum):
    """Scalars a :class:`Subspace` is closed under."""

    FULL = "F"
    FIXED = "F^sigma"


@dataclass(frozen=True, slots=True)
class StructureConstant:
    """``e_i * e_j`` contributes ``coeff * e_k``."""

    i: int
    j: int
    k: int
    coeff: Scalar


@dataclass(frozen=True, slots=True)
class AlgebraSpec:
    """Declarative description of ``J`` and of the involution ``sigma``.

    Row ``i`` of ``involution_matrix`` holds the coordinates of ``sigma(e_i)``.
    """

    field: FieldSpec
    dim: int
    basis_names: tuple[str, ...]
    struct_consts: tuple[StructureConstant, ...]
    involution_matrix: tuple[tuple[Scalar, ...], ...]
    metadata: tuple[tuple[str, str], ...] = ()

    @property
    def nilpotency_class(self) -> int:
        return get_algebra(self).nilpotency_class()


@dataclass(frozen=True, slots=True)
class AlgebraElement:
    """Element of ``J`` by its flattened ``F_p`` coordinates (``f`` per basis vector)."""

    coords: tuple[int, ...]

    @classmethod
    def from_vector(cls, vector: np.ndarray) -> AlgebraElement:
        return cls(tuple(int(c) for c in np.asarray(vector).reshape(-1)))

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)

    def scalars(self, f: int) -> tuple[Scalar, ...]:
        return tuple(Scalar(self.coords[i : i + f]) for i in range(0, len(self.coords), f))


@dataclass(frozen=True, slots=True)
class GroupElement:
    """The element ``1 + coords`` of the algebra group ``G = 1 + J``."""

    coords: AlgebraElement

    @property
    def vector(self) -> np.ndarray:
        return self.coords.vector


@dataclass(frozen=True, slots=True, eq=False)
class Subspace:
    """``F_p``-subspace of ``J`` closed under the scalars named by ``scalars``.

    ``basis`` is in reduced row echelon form, so equality is coordinate
    equality of the bases.
    """

    basis: np.ndarray
    pivots: tuple[int, ...]
    p: int
    scalars: ScalarField
    degree: int

    @property
    def rank(self) -> int:
        return int(self.basis.shape[0])

    @property
    def dim(self) -> int:
        """Dimension over the declared scalar field."""

        return self.rank // self.degree

    @property
    def order(self) -> int:
        return self.p**self.rank

    @property
    def is_zero(self) -> bool:
        return self.rank == 0

    @property
    def key(self) -> tuple[int, bytes]:
        return self.rank, np.ascontiguousarray(self.basis).tobytes()

    def contains(self, vectors: np.ndarray) -> np.ndarray:
        return in_span(self.basis, self.pivots, vectors, self.p)

    def issubset(self, other: Subspace) -> bool:
        return bool(other.contains(self.basis).all()) if self.rank else True

    def elements(self) -> np.ndarray:
        return span_elements(self.basis, self.p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} over {self.scalars.value}, rank={self.rank})"


@dataclass(slots=True)
class Violation:
    axiom: str
    indices: tuple[int, ...]

    def as_dict(self) -> dict[str, object]:
        return {"axiom": self.axiom, "indices": list(self.indices)}


@dataclass(slots=True)
class ValidationReport:
    passed: bool
    nilpotency_class: int | None
    violations: list[Violation]


class Algebra:
    """Runtime tables for a declared :class:`AlgebraSpec`."""

    def __init__(self, spec: AlgebraSpec) -> None:
        self.spec = spec
        self.field: FiniteField = get_field(spec.field)
        self.p = self.field.p
        self.f = self.field.f
        self.d = spec.dim
        self.width = self.d * self.f
        self._check_shapes()
        self.table = self._structure_tensor()
        self.sigma = self._involution_matrix()
        self._powers: dict[tuple[tuple[int, bytes], int], Subspace] = {}

    def _check_shapes(self) -> None:
        spec = self.spec
        if spec.dim < 0:
            raise DomainError("dimension must be nonnegative")
        if len(spec.basis_names) != spec.dim:
            raise DomainError(f"expected {spec.dim} basis names, got {len(spec.basis_names)}")
        if len(spec.involution_matrix) != spec.dim or any(
            len(row) != spec.dim for row in spec.involution_matrix
        ):
            raise DomainError(f"involution matrix must be {spec.dim}x{spec.dim}")
        for const in spec.struct_consts:
            if not all(0 <= index < spec.dim for index in (const.i, const.j, const.k)):
                raise DomainError(f"structure constant index out of range: {const}")

    def _structure_tensor(self) -> np.ndarray:
        f, width = self.f, self.width
        tensor = np.zeros((width, width, width), dtype=np.int64)
        for const in self.spec.struct_consts:
            block = self.field.mul_tensor @ self.field.multiplication_matrix(const.coeff)
            tensor[
                const.i * f : (const.i + 1) * f,
                const.j * f : (const.j + 1) * f,
                const.k * f : (const.k + 1) * f,
            ] += block
        return (tensor % self.p).reshape(width * width, width)

    def _involution_matrix(self) -> np.ndarray:
        f = self.f
        matrix = np.zeros((self.width, self.width), dtype=np.int64)
        for i, row in enumerate(self.spec.involution_matrix):
            for j, entry in enumerate(row):
                block = self.field.tau @ self.field.multiplication_matrix(entry)
                matrix[i * f : (i + 1) * f, j * f : (j + 1) * f] = block % self.p
        return matrix

    # -- elements -------------------------------------------------------

    def basis_vectors(self) -> np.ndarray:
        """The vectors ``e_1, ..., e_d`` (scalar coefficient ``1``)."""

        vectors = np.zeros((self.d, self.width), dtype=np.int64)
        vectors[np.arange(self.d), np.arange(self.d) * self.f] = 1
        return vectors

    def scalar_matrix(self, alpha: Scalar | np.ndarray) -> np.ndarray:
        """Matrix of ``a -> alpha * a`` acting on row vectors."""

        block = self.field.multiplication_matrix(alpha)
        return np.kron(np.eye(self.d, dtype=np.int64), block) % self.p

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Row-wise products of two (broadcastable) batches of vectors."""

        a, b = np.broadcast_arrays(np.atleast_2d(a), np.atleast_2d(b))
        rows = a.shape[0]
        out = np.empty((rows, self.width), dtype=np.int64)
        for start in range(0, rows, _BATCH_ROWS):
            stop = min(rows, start + _BATCH_ROWS)
            outer = (a[start:stop, :, None] * b[start:stop, None, :]).reshape(
                stop - start, self.width * self.width
            )
            out[start:stop] = (outer @ self.table) % self.p
        return out

    def bracket(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (self.multiply(a, b) - self.multiply(b, a)) % self.p

    def involute(self, a: np.ndarray) -> np.ndarray:
        return (np.atleast_2d(a) @ self.sigma) % self.p

    def negated_series(self, a: np.ndarray) -> np.ndarray:
        """Return ``sum_{k >= 1} (-a)^k`` row-wise; finite because ``J`` is nilpotent."""

        minus = (-np.atleast_2d(a)) % self.p
        term = minus.copy()
        total = np.zeros_like(minus)
        for _ in range(self.d + 1):
            if not term.any():
                return total
            total = (total + term) % self.p
            term = self.multiply(term, minus)
        if term.any():
            raise DomainError("algebra is not nilpotent")
        return total

    def cayley(self, a: np.ndarray) -> np.ndarray:
        """Offsets of ``Psi(a) = (1 - a)(1 + a)^-1 = 1 - 2a + 2a^2 - ...``."""

        return (2 * self.negated_series(a)) % self.p

    def cayley_inverse(self, x: np.ndarray) -> np.ndarray:
        """Offsets ``a`` with ``Psi(a) = 1 + x``."""

        half = (self.p + 1) // 2
        return self.negated_series((np.atleast_2d(x) * half) % self.p)

    # -- subspaces ------------------------------------------------------

    def _scalar_generators(self, scalars: ScalarField) -> list[np.ndarray]:
        if scalars is ScalarField.FULL:
            units = np.eye(self.f, dtype=np.int64)
        else:
            units = self.field.fixed_basis_vectors
        return [self.scalar_matrix(unit) for unit in units]

    def scalar_degree(self, scalars: ScalarField) -> int:
        return self.f if scalars is ScalarField.FULL else self.spec.field.fixed_degree

    def span(self, vectors: np.ndarray, scalars: ScalarField = ScalarField.FULL) -> Subspace:
        """Smallest ``scalars``-subspace containing the rows of ``vectors``."""

        vectors = as_rows(vectors, self.width) % self.p
        if vectors.shape[0]:
            vectors = np.vstack([(vectors @ m) % self.p for m in self._scalar_generators(scalars)])
        basis, pivots = rref(vectors, self.p)
        return Subspace(basis, pivots, self.p, scalars, self.scalar_degree(scalars))

    def whole(self) -> Subspace:
        return self.span(np.eye(self.width, dtype=np.int64))

    def zero(self, scalars: ScalarField = ScalarField.FULL) -> Subspace:
        return self.span(np.zeros((0, self.width), dtype=np.int64), scalars)

    def add(self, first: Subspace, second: Subspace) -> Subspace:
        return self.span(np.vstack([first.basis, second.basis]), first.scalars)

    def power(self, m: int, within: Subspace | None = None) -> Subspace:
        """``within^m``, the span of all ``m``-fold products (``within`` defaults to ``J``)."""

        if m < 1:
            raise DomainError("power exponent must be positive")
        base = within if within is not None else self.whole()
        if m == 1:
            return base
        key = (base.key, m)
        cached = self._powers.get(key)
        if cached is not None:
            return cached
        previous = self.power(m - 1, base)
        if previous.is_zero or base.is_zero:
            result = self.zero()
        else:
            products = self.multiply(
                np.repeat(previous.basis, base.rank, axis=0),
                np.tile(base.basis, (previous.rank, 1)),
            )
            result = self.span(products)
        self._powers[key] = result
        return result

    def nilpotency_class(self, within: Subspace | None = None) -> int:
        """Largest ``n`` with ``J^n != 0``; zero for the zero algebra."""

        base = within if within is not None else self.whole()
        n = 0
        while not self.power(n + 1, base).is_zero:
            n += 1
            if n > self.d:
                raise DomainError("algebra is not nilpotent")
        return n

    def is_subalgebra(self, space: Subspace) -> bool:
        if space.is_zero:
            return True
        products = self.multiply(
            np.repeat(space.basis, space.rank, axis=0), np.tile(space.basis, (space.rank, 1))
        )
        return bool(space.contains(products).all())

    def is_ideal_of(self, space: Subspace, ambient: Subspace) -> bool:
        if space.is_zero or ambient.is_zero:
            return True
        left = np.repeat(space.basis, ambient.rank, axis=0)
        right = np.tile(ambient.basis, (space.rank, 1))
        products = np.vstack([self.multiply(left, right), self.multiply(right, left)])
        return bool(space.contains(products).all())

    def is_sigma_invariant(self, space: Subspace) -> bool:
        return space.is_zero or bool(space.contains(self.involute(space.basis)).all())

    def is_lie_closed(self, space: Subspace) -> bool:
        if space.is_zero:
            return True
        brackets = self.bracket(
            np.repeat(space.basis, space.rank, axis=0), np.tile(space.basis, (space.rank, 1))
        )
        return bool(space.contains(brackets).all())

    def fixed_core(self, within: Subspace | None = None) -> Subspace:
        """Largest ``F``-subspace of ``within`` on which ``sigma`` is the identity.

        Zero whenever ``sigma`` is semilinear over a nontrivial ``tau``.
        """

        base = within if within is not None else self.whole()
        if base.is_zero:
            return self.zero()
        shift = (self.sigma - np.eye(self.width, dtype=np.int64)) % self.p
        blocks = [
            (base.basis @ self.scalar_matrix(unit) @ shift) % self.p
            for unit in np.eye(self.f, dtype=np.int64)
        ]
        coefficients = left_nullspace(np.hstack(blocks), self.p)
        return self.span((coefficients @ base.basis) % self.p, ScalarField.FULL)

    def minus_fixed_space(self, within: Subspace | None = None) -> Subspace:
        """``C_within(sigma) = {a in within : sigma(a) = -a}`` as an ``F^sigma``-space."""

        base = within if within is not None else self.whole()
        if not self.is_sigma_invariant(base):
            raise DomainError("subspace is not sigma-invariant")
        if base.is_zero:
            return self.zero(ScalarField.FIXED)
        condition = (base.basis @ self.sigma + base.basis) % self.p
        coefficients = left_nullspace(condition, self.p)
        return self.span((coefficients @ base.basis) % self.p, ScalarField.FIXED)


@lru_cache(maxsize=None)
def get_algebra(spec: AlgebraSpec) -> Algebra:
    return Algebra(spec)


def validate_algebra(spec: AlgebraSpec) -> ValidationReport:
    """Check associativity, nilpotency and the involution axioms on basis triples."""

    algebra = get_algebra(spec)
    d, p = algebra.d, algebra.p
    violations: list[Violation] = []
    units = algebra.basis_vectors()

    if d:
        pairs = algebra.multiply(np.repeat(units, d, axis=0), np.tile(units, (d, 1)))
        left = algebra.multiply(np.repeat(pairs, d, axis=0), np.tile(units, (d * d, 1)))
        right = algebra.multiply(np.repeat(units, d * d, axis=0), np.tile(pairs, (d, 1)))
        for index in np.nonzero((left != right).any(axis=1))[0]:
            i, rest = divmod(int(index), d * d)
            violations.append(Violation("associativity", (i, *divmod(rest, d))))

        images = algebra.involute(units)
        lhs = algebra.involute(pairs)
        rhs = algebra.multiply(np.tile(images, (d, 1)), np.repeat(images, d, axis=0))
        for index in np.nonzero((lhs != rhs).any(axis=1))[0]:
            violations.append(Violation("anti-multiplicativity", divmod(int(index), d)))

    square = (algebra.sigma @ algebra.sigma) % p
    identity = np.eye(algebra.width, dtype=np.int64)
    broken = sorted({int(row) // algebra.f for row in np.nonzero((square != identity).any(axis=1))[0]})
    violations.extend(Violation("involutivity", (i,)) for i in broken)

    nilpotency: int | None = None
    whole = algebra.whole()
    if algebra.power(d + 1, whole).is_zero:
        nilpotency = algebra.nilpotency_class()
    else:
        violations.append(Violation("nilpotency", ()))

    report = ValidationReport(passed=not violations, nilpotency_class=nilpotency, violations=violations)
    if violations:
        logger.debug("Algebra validation found %d violations", len(violations))
    return report


def multiply(spec: AlgebraSpec, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return AlgebraElement.from_vector(get_algebra(spec).multiply(a.vector, b.vector)[0])


def ideal_power(spec: AlgebraSpec, m: int, within: Subspace | None = None) -> Subspace:
    return get_algebra(spec).power(m, within)


def apply_involution(spec: AlgebraSpec, a: AlgebraElement) -> AlgebraElement:
    return AlgebraElement.from_vector(get_algebra(spec).involute(a.vector)[0])


def minus_fixed_space(spec: AlgebraSpec, within: Subspace | None = None) -> Subspace:
    return get_algebra(spec).minus_fixed_space(within)


def cayley(spec: AlgebraSpec, a: AlgebraElement) -> GroupElement:
    return GroupElement(AlgebraElement.from_vector(get_algebra(spec).cayley(a.vector)[0]))


def cayley_inverse(spec: AlgebraSpec, g: GroupElement) -> AlgebraElement:
    return AlgebraElement.from_vector(get_algebra(spec).cayley_inverse(g.vector)[0])


def line_decomposition(spec: AlgebraSpec, outer: Subspace, inner: Subspace) -> list[Subspace]:
    """Split ``outer`` into lines ``inner + F^sigma * u_i`` in echelon order.

    The directions ``u_i`` are the reductions modulo ``inner`` of the echelon
    rows of ``outer`` that are new at each step, so the result is canonical.
    """

    algebra = get_algebra(spec)
    if not inner.issubset(outer):
        raise DomainError("inner subspace is not contained in outer subspace")
    scalars = outer.scalars
    lines: list[Subspace] = []
    current = inner
    for row in outer.basis:
        if current.contains(row)[0]:
            continue
        direction = line_direction(inner, row)
        lines.append(algebra.span(np.vstack([inner.basis, direction]), scalars))
        current = algebra.span(np.vstack([current.basis, direction]), scalars)
    return lines


def line_direction(inner: Subspace, vector: np.ndarray) -> np.ndarray:
    """Reduce ``vector`` modulo the echelon basis of ``inner``."""

    vector = np.atleast_2d(vector) % inner.p
    if inner.is_zero:
        return vector[0]
    coefficients = vector[:, list(inner.pivots)]
    return ((vector - coefficients @ inner.basis) % inner.p)[0]


def build_J0(spec: AlgebraSpec, S: Subspace, within: Subspace | None = None) -> Subspace:
    """Return ``J_0 = F * S + J^2 + J^+`` for a codimension-one ``S`` inside ``C_J(sigma)``.

    ``J^+`` is the largest ``F``-subspace fixed by ``sigma`` (see
    :meth:`Algebra.fixed_core`). Without it ``F * S + J^2`` loses one more
    dimension for every ``sigma``-fixed direction of ``J / J^2`` when ``sigma``
    is ``F``-linear; with it ``J_0`` has codimension one and ``C_{J_0}(sigma) = S``.
    """

    algebra = get_algebra(spec)
    current = within if within is not None else algebra.whole()
    square = algebra.power(2, current)
    fixed = algebra.minus_fixed_space(current)
    fixed_square = algebra.minus_fixed_space(square)
    if not S.issubset(fixed) or not fixed_square.issubset(S) or S.dim != fixed.dim - 1:
        raise DomainError("S must contain C_{J^2}(sigma) with codimension one in C_J(sigma)")

    hull = algebra.span(S.basis, ScalarField.FULL)
    result = algebra.add(algebra.add(hull, square), algebra.fixed_core(current))
    checks = {
        "subalgebra": algebra.is_subalgebra(result),
        "ideal": algebra.is_ideal_of(result, current),
        "sigma-invariant": algebra.is_sigma_invariant(result),
        "dimension": result.dim == current.dim - 1,
        "contains J^2": square.issubset(result),
    }
    if all(checks.values()):
        checks["minus-fixed part"] = algebra.minus_fixed_space(result) == S
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise InternalConsistencyError(
            f"J_0 postconditions failed: {', '.join(failed)}",
            trace=[{"stage": "build_J0", "failed": failed, "dim_J": current.dim}],
        )
    return result


__all__ = [
    "Algebra",
    "AlgebraElement",
    "AlgebraSpec",
    "GroupElement",
    "ScalarField",
    "StructureConstant",
    "Subspace",
    "ValidationReport",
    "Violation",
    "apply_involution",
    "build_J0",
    "cayley",
    "cayley_inverse",
    "get_algebra",
    "ideal_power",
    "line_decomposition",
    "line_direction",
    "minus_fixed_space",
    "multiply",
    "validate_algebra",
]
