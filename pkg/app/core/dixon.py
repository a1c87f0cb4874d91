"""Character tables of enumerated subgroups by the Burnside-Dixon method.

Class sums act on the centre of the group algebra; working modulo a prime
``ell`` with ``ell = 1 (mod exp H)`` and ``ell > 2 sqrt|H|`` their common
eigenvectors are the central characters, from which degrees and exact
cyclotomic values are recovered.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import sympy
from sympy.ntheory import discrete_log, primitive_root

from app.core import cyclotomic
from app.core.characters import ClassFunction
from app.core.group import SubgroupHandle
from app.core.linalg import left_nullspace, rref
from app.config import ConfigurationError
from app.errors import InternalConsistencyError

logger = logging.getLogger(__name__)


@dataclass(slots=True)
class CharacterTable:
    group: SubgroupHandle
    characters: list[ClassFunction]
    prime: int
    exponent: int
    attempts: int

    @property
    def degrees(self) -> list[int]:
        return [chi.degree for chi in self.characters]

    def __len__(self) -> int:
        return len(self.characters)

    def __iter__(self):
        return iter(self.characters)


def group_exponent(group: SubgroupHandle) -> int:
    return int(group.group.element_orders(group.classes.representatives).max())


def choose_prime(order: int, exponent: int, bound: int) -> int:
    """Smallest prime ``ell = 1 (mod exponent)`` with ``ell > 2 sqrt(order)``."""

    floor = 2 * math.isqrt(order) + 1
    candidate = floor + (1 - floor) % exponent
    while candidate <= bound:
        if candidate * candidate > 4 * order and sympy.isprime(candidate):
            return candidate
        candidate += exponent
    raise ConfigurationError(f"no prime ell = 1 mod {exponent} below {bound} for order {order}")


def class_sum_matrix(group: SubgroupHandle, weights: np.ndarray, ell: int) -> np.ndarray:
    """Matrix of ``sum_j weights[j] C_j`` on class sums, acting on row vectors."""

    classes = group.classes
    inverses = group.group.inv(group.elements)
    weights = np.asarray(weights, dtype=np.int64) % ell
    r = len(classes)
    matrix = np.zeros((r, r), dtype=np.int64)
    for k, z in enumerate(classes.representatives):
        targets = classes.labels[group.index_of(group.group.mul(inverses, z[None, :]))]
        # counts[i, j] = #{x in C_j : x^-1 z_k in C_i}
        counts = np.bincount(targets * r + classes.labels, minlength=r * r).reshape(r, r)
        matrix[:, k] = (counts @ weights) % ell
    return matrix.T.copy()


def _eigenspaces(basis: np.ndarray, matrix: np.ndarray, ell: int) -> list[np.ndarray]:
    reduced, pivots = rref(basis, ell)
    restricted = ((reduced @ matrix) % ell)[:, list(pivots)]
    size = restricted.shape[0]
    spaces = []
    found = 0
    identity = np.eye(size, dtype=np.int64)
    for value in range(ell):
        kernel = left_nullspace((restricted - value * identity) % ell, ell)
        if kernel.shape[0]:
            spaces.append((kernel @ reduced) % ell)
            found += kernel.shape[0]
            if found == size:
                break
    return spaces


def _split(group: SubgroupHandle, ell: int, rng: np.random.Generator, attempts: int) -> tuple[np.ndarray, int]:
    r = len(group.classes)
    pending = [np.eye(r, dtype=np.int64)]
    done: list[np.ndarray] = []
    for attempt in range(1, attempts + 1):
        if r == 1:
            return np.eye(1, dtype=np.int64), attempt
        weights = rng.integers(0, ell, size=r)
        matrix = class_sum_matrix(group, weights, ell)
        still = []
        for space in pending:
            parts = _eigenspaces(space, matrix, ell)
            if sum(part.shape[0] for part in parts) != space.shape[0]:
                raise InternalConsistencyError("class sum matrix is not diagonalisable modulo ell")
            for part in parts:
                (done if part.shape[0] == 1 else still).append(part)
        pending = still
        if not pending:
            return np.vstack(done), attempt
    raise InternalConsistencyError(
        f"eigenspaces stayed degenerate after {attempts} class-matrix combinations"
    )


def character_table(
    group: SubgroupHandle, *, seed: int = 0, prime_bound: int = 10**6, max_attempts: int = 64
) -> CharacterTable:
    """Compute all irreducible characters of ``group`` exactly."""

    classes = group.classes
    order = group.order
    exponent = group_exponent(group)
    ell = choose_prime(order, exponent, prime_bound)
    rng = np.random.default_rng(seed)
    vectors, attempts = _split(group, ell, rng, max_attempts)

    sizes = classes.sizes % ell
    size_inverses = np.array([pow(int(h), -1, ell) for h in sizes], dtype=np.int64)
    generator = primitive_root(ell)
    zeta = pow(generator, (ell - 1) // exponent, ell)
    exponent_inverse = pow(exponent, -1, ell)

    powers = np.zeros((len(classes), exponent), dtype=np.int64)
    current = np.zeros_like(classes.representatives)
    for t in range(exponent):
        powers[:, t] = group.class_of(current)
        current = group.group.mul(current, classes.representatives)

    characters = []
    for vector in vectors:
        omega = (vector * pow(int(vector[0]), -1, ell)) % ell
        total = int((omega * omega[classes.inverse] % ell * size_inverses).sum() % ell)
        target = (order % ell) * pow(total, -1, ell) % ell
        degree = next(
            (d for d in range(1, math.isqrt(order) + 1) if (d * d - target) % ell == 0), None
        )
        if degree is None:
            raise InternalConsistencyError("no admissible degree for a central character")
        modular = (omega * degree % ell) * size_inverses % ell
        characters.append(
            _lift(group, modular, degree, powers, exponent, ell, zeta, exponent_inverse)
        )

    characters.sort(key=ClassFunction.sort_key)
    table = CharacterTable(group, characters, ell, exponent, attempts)
    check_table(table)
    logger.debug("Character table of %r: %d characters, ell=%d", group, len(characters), ell)
    return table


def _lift(
    group: SubgroupHandle,
    modular: np.ndarray,
    degree: int,
    powers: np.ndarray,
    exponent: int,
    ell: int,
    zeta: int,
    exponent_inverse: int,
) -> ClassFunction:
    r = modular.shape[0]
    expanded = np.zeros((r, exponent), dtype=np.int64)
    if exponent == 1:
        expanded[:, 0] = degree
        return ClassFunction.from_expanded(group, expanded, exponent)
    if degree == 1:
        for j in range(r):
            expanded[j, discrete_log(ell, int(modular[j]), zeta) % exponent] = 1
        return ClassFunction.from_expanded(group, expanded, exponent)

    zeta_powers = np.array([pow(zeta, -k % exponent, ell) for k in range(exponent)], dtype=np.int64)
    for j in range(r):
        values = modular[powers[j]]
        for k in range(exponent):
            twist = zeta_powers[(k * np.arange(exponent)) % exponent]
            multiplicity = int((values * twist % ell).sum() % ell) * exponent_inverse % ell
            if multiplicity > degree:
                raise InternalConsistencyError("eigenvalue multiplicity exceeds the degree")
            expanded[j, k] = multiplicity
    return ClassFunction.from_expanded(group, expanded, exponent)


def _gram(values: np.ndarray, weights: np.ndarray | None) -> np.ndarray:
    """``sum_a w_a X[i, a] conj(X[j, a])`` in the expanded layout."""

    count, width, order = values.shape
    left = values if weights is None else values * weights[None, :, None]
    gram = np.zeros((count, count, order), dtype=np.int64)
    flat_left = left.reshape(count, width * order)
    # coefficient of zeta^k in x * conj(y) is sum_s x[s] y[s - k]
    for shift in range(order):
        rolled = np.roll(values, shift, axis=2).reshape(count, width * order)
        gram[:, :, shift] = flat_left @ rolled.T
    return gram


def check_table(table: CharacterTable) -> None:
    """Check the degree sum and both orthogonality relations exactly."""

    group = table.group
    classes = group.classes
    order = table.exponent
    values = np.stack([chi.expanded(order) for chi in table.characters])
    problems = []
    if sum(d * d for d in table.degrees) != group.order:
        problems.append("sum of squared degrees")
    if len(table.characters) != len(classes):
        problems.append("number of characters")

    rows = cyclotomic.reduce(_gram(values, classes.sizes), order)
    if rows[..., 1:].any() or not np.array_equal(rows[..., 0], group.order * np.eye(len(table), dtype=np.int64)):
        problems.append("row orthogonality")

    columns = cyclotomic.reduce(_gram(values.transpose(1, 0, 2), None), order)
    expected = np.diag(group.order // classes.sizes)
    if columns[..., 1:].any() or not np.array_equal(columns[..., 0], expected):
        problems.append("column orthogonality")

    if problems:
        raise InternalConsistencyError(f"character table of {group!r} failed: {', '.join(problems)}")


__all__ = [
    "CharacterTable",
    "character_table",
    "check_table",
    "choose_prime",
    "class_sum_matrix",
    "group_exponent",
]
