"""Class functions with exact cyclotomic values and linear characters.

Values of a :class:`ClassFunction` are stored class by class in reduced
cyclotomic coordinates; a :class:`LinearCharacter` is an exponent tuple
against the cyclic factors of the abelianization and is evaluated on demand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from app.core import cyclotomic
from app.core.algebra import GroupElement
from app.core.cyclotomic import Cyclotomic
from app.core.field import RootOfUnity
from app.core.group import SubgroupHandle, enumerated_subgroup
from app.errors import DomainError, InternalConsistencyError


@dataclass(frozen=True, eq=False)
class ClassFunction:
    """Cyclotomic-valued function on the conjugacy classes of ``group``."""

    group: SubgroupHandle
    order: int
    values: np.ndarray

    @classmethod
    def from_expanded(cls, group: SubgroupHandle, values: np.ndarray, order: int) -> ClassFunction:
        return cls(group, order, cyclotomic.reduce(values, order))

    def expanded(self, order: int | None = None) -> np.ndarray:
        vectors = cyclotomic.expand(self.values, self.order)
        return cyclotomic.lift(vectors, self.order, order or self.order)

    @property
    def degree(self) -> int:
        return int(cyclotomic.rational_part(self.values[0]))

    def value(self, class_index: int) -> Cyclotomic:
        return Cyclotomic(self.order, tuple(int(c) for c in self.values[class_index]))

    def _common(self, other: ClassFunction) -> int:
        if self.group.key != other.group.key:
            raise DomainError("class functions live on different groups")
        return cyclotomic.common_order(self.order, other.order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClassFunction):
            return NotImplemented
        if self.group.key != other.group.key:
            return False
        order = self._common(other)
        first = cyclotomic.reduce(self.expanded(order), order)
        second = cyclotomic.reduce(other.expanded(order), order)
        return bool(np.array_equal(first, second))

    def __hash__(self) -> int:
        return hash((self.group.key, self.values[:, 0].tobytes()))

    def __mul__(self, other: ClassFunction) -> ClassFunction:
        order = self._common(other)
        product = cyclotomic.multiply(self.expanded(order), other.expanded(order))
        return ClassFunction.from_expanded(self.group, product, order)

    def conjugate(self) -> ClassFunction:
        return ClassFunction.from_expanded(self.group, cyclotomic.conjugate(self.expanded()), self.order)

    def sort_key(self) -> tuple[int, ...]:
        return (self.degree, *self.values.reshape(-1).tolist())

    def as_values(self) -> list[dict[str, object]]:
        return [self.value(i).as_dict() for i in range(self.values.shape[0])]


@dataclass(frozen=True, eq=False)
class LinearCharacter:
    """Homomorphism ``H -> C^x`` given by exponents against the abelian factors of ``H``."""

    group: SubgroupHandle
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        orders = self.group.abelian.orders
        if len(self.exponents) != len(orders) or any(
            not 0 <= t < d for t, d in zip(self.exponents, orders)
        ):
            raise DomainError(f"invalid exponents {self.exponents} for factors {orders}")

    @property
    def order(self) -> int:
        return self.group.abelian.exponent

    @property
    def is_trivial(self) -> bool:
        return not any(self.exponents)

    @classmethod
    def trivial(cls, group: SubgroupHandle) -> LinearCharacter:
        return cls(group, (0,) * len(group.abelian.factors))

    @classmethod
    def from_generator_values(
        cls, group: SubgroupHandle, values: np.ndarray, order: int
    ) -> LinearCharacter:
        """Build the character taking ``zeta_order^values[i]`` on the ``i``-th factor."""

        exponents = []
        for value, (_, d) in zip(np.asarray(values).reshape(-1), group.abelian.factors):
            scaled = int(value) * d
            if scaled % order:
                raise DomainError("value is not a root of unity of the factor's order")
            exponents.append((scaled // order) % d)
        return cls(group, tuple(exponents))

    def exponents_at(self, vectors: np.ndarray) -> np.ndarray:
        """Exponents ``k`` with value ``zeta_E^k`` at each row, ``E = self.order``."""

        abelian = self.group.abelian
        coordinates = abelian.coordinates(vectors)
        if not coordinates.shape[1]:
            return np.zeros(coordinates.shape[0], dtype=np.int64)
        weights = np.array(
            [t * (self.order // d) for t, d in zip(self.exponents, abelian.orders)], dtype=np.int64
        )
        return (coordinates @ weights) % self.order

    def __call__(self, g: GroupElement) -> RootOfUnity:
        return RootOfUnity(int(self.exponents_at(g.vector)[0]), self.order)

    def class_function(self) -> ClassFunction:
        exponents = self.exponents_at(self.group.classes.representatives)
        return ClassFunction.from_expanded(
            self.group, cyclotomic.roots(exponents, self.order), self.order
        )

    def __mul__(self, other: LinearCharacter) -> LinearCharacter:
        if self.group.key != other.group.key:
            raise DomainError("characters live on different groups")
        orders = self.group.abelian.orders
        return LinearCharacter(
            self.group, tuple((a + b) % d for a, b, d in zip(self.exponents, other.exponents, orders))
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearCharacter):
            return NotImplemented
        return self.group.key == other.group.key and self.exponents == other.exponents

    def __hash__(self) -> int:
        return hash((self.group.key, self.exponents))

    def __repr__(self) -> str:
        return f"LinearCharacter({self.exponents} on {self.group!r})"


def linear_characters(group: SubgroupHandle) -> list[LinearCharacter]:
    """All linear characters of ``group`` in lexicographic exponent order."""

    ranges = [range(order) for order in group.abelian.orders]
    return [LinearCharacter(group, tuple(t)) for t in itertools.product(*ranges)]


def trivial_character(group: SubgroupHandle) -> ClassFunction:
    values = np.zeros((len(group.classes), 1), dtype=np.int64)
    values[:, 0] = 1
    return ClassFunction(group, 1, values)


def as_linear_character(chi: ClassFunction) -> LinearCharacter:
    """Convert a degree-one class function into a :class:`LinearCharacter`."""

    if chi.degree != 1:
        raise DomainError("class function is not of degree one")
    group = chi.group
    factors = group.abelian.factors
    exponents = []
    if factors:
        generators = np.array([g.vector for g, _ in factors])
        exponents = list(scalar_exponents(chi)[group.class_of(generators)])
    if any(k < 0 for k in exponents):
        raise DomainError("class function is not multiplicative")
    result = LinearCharacter.from_generator_values(group, np.array(exponents, dtype=np.int64), chi.order)
    if result.class_function() != chi:
        raise DomainError("class function is not a linear character")
    return result


def scalar_exponents(chi: ClassFunction) -> np.ndarray:
    """For each class, ``k`` with ``chi = chi(1) * zeta^k`` there, or ``-1``."""

    table = cyclotomic.root_table(chi.order) * chi.degree
    matches = (chi.values[:, None, :] == table[None, :, :]).all(axis=2)
    found = matches.any(axis=1)
    return np.where(found, matches.argmax(axis=1), -1)


def restrict(chi: ClassFunction, subgroup: SubgroupHandle) -> ClassFunction:
    if not subgroup.issubgroup(chi.group):
        raise DomainError(f"{subgroup!r} is not contained in {chi.group!r}")
    fusion = chi.group.class_of(subgroup.classes.representatives)
    return ClassFunction(subgroup, chi.order, chi.values[fusion])


def induce(theta: ClassFunction, group: SubgroupHandle) -> ClassFunction:
    """``Ind_K^G theta(c) = |G| / (|K| |c|) * sum_{k in c ∩ K} theta(k)``."""

    subgroup = theta.group
    if not subgroup.issubgroup(group):
        raise DomainError(f"{subgroup!r} is not contained in {group!r}")
    classes = group.classes
    fusion = group.class_of(subgroup.classes.representatives)
    weighted = theta.expanded() * subgroup.classes.sizes[:, None]
    sums = np.zeros((len(classes), theta.order), dtype=np.int64)
    np.add.at(sums, fusion, weighted)
    reduced = cyclotomic.reduce(sums * (group.order // subgroup.order), theta.order)
    sizes = classes.sizes[:, None]
    if (reduced % sizes).any():
        raise InternalConsistencyError("induced values are not algebraic integers")
    return ClassFunction(group, theta.order, reduced // sizes)


def inner_product(first: ClassFunction, second: ClassFunction) -> Fraction:
    order = first._common(second)
    products = cyclotomic.multiply(first.expanded(order), cyclotomic.conjugate(second.expanded(order)))
    total = (products * first.group.classes.sizes[:, None]).sum(axis=0)
    value = cyclotomic.rational_part(cyclotomic.reduce(total, order))
    return Fraction(int(value), first.group.order)


def _normalizes(group: SubgroupHandle, normal: SubgroupHandle) -> bool:
    outer, inner = group.generators, normal.generators
    if not outer.size or not inner.size:
        return True
    images = group.group.conjugate(
        np.repeat(outer, inner.shape[0], axis=0), np.tile(inner, (outer.shape[0], 1))
    )
    return bool(normal.contains(images).all())


def conjugate_character(xi: LinearCharacter, g: GroupElement | np.ndarray) -> LinearCharacter:
    """``xi^g(x) = xi(g x g^-1)``; a right action in ``g``."""

    group = xi.group.group
    vector = np.atleast_2d(g.vector if isinstance(g, GroupElement) else g)
    inner = xi.group.generators
    if inner.size and not xi.group.contains(group.conjugate(np.repeat(vector, inner.shape[0], axis=0), inner)).all():
        raise DomainError("element does not normalize the character's group")
    factors = xi.group.abelian.factors
    if not factors:
        return xi
    generators = np.array([h.vector for h, _ in factors])
    images = group.conjugate(np.repeat(vector, len(factors), axis=0), generators)
    return LinearCharacter.from_generator_values(xi.group, xi.exponents_at(images), xi.order)


def stabilizer_of_character(xi: LinearCharacter, group: SubgroupHandle) -> SubgroupHandle:
    """``{g in group : xi^g = xi}`` for ``xi`` on a subgroup normalized by ``group``."""

    if not _normalizes(group, xi.group):
        raise DomainError("group does not normalize the character's group")
    elements = group.elements
    keep = np.ones(group.order, dtype=bool)
    for h, _ in xi.group.abelian.factors:
        target = xi.exponents_at(h.vector)[0]
        images = group.group.conjugate(elements, h.vector[None, :])
        keep &= xi.exponents_at(images) == target
    return enumerated_subgroup(group.group, group.codes[keep], label="stabilizer")


def linear_multiplicities(chi: ClassFunction, characters: list[LinearCharacter]) -> np.ndarray:
    """``<Res_N chi, xi>`` for every ``xi`` in ``characters`` (all on the same ``N``)."""

    if not characters:
        return np.zeros(0, dtype=np.int64)
    normal = characters[0].group
    restricted = restrict(chi, normal)
    order = cyclotomic.common_order(restricted.order, characters[0].order)
    scale = order // characters[0].order
    values = restricted.expanded(order)
    representatives = normal.classes.representatives
    exponents = np.array([xi.exponents_at(representatives) for xi in characters]) * scale
    rotated = cyclotomic.rotate(values[None, :, :], -exponents)
    totals = (rotated * normal.classes.sizes[None, :, None]).sum(axis=1)
    rational = cyclotomic.rational_part(cyclotomic.reduce(totals, order))
    if (rational % normal.order).any():
        raise InternalConsistencyError("multiplicities are not integers")
    return rational // normal.order


def spectral_support(
    chi: ClassFunction, normal: SubgroupHandle
) -> list[tuple[LinearCharacter, int]]:
    """Linear characters of ``normal`` occurring in ``Res chi`` with their multiplicities."""

    if not _normalizes(chi.group, normal):
        raise DomainError(f"{normal!r} is not normal in {chi.group!r}")
    characters = linear_characters(normal)
    multiplicities = linear_multiplicities(chi, characters)
    return [(xi, int(m)) for xi, m in zip(characters, multiplicities) if m > 0]


def clifford_component(
    chi: ClassFunction, xi: LinearCharacter, stabilizer: SubgroupHandle
) -> ClassFunction:
    """The constituent of ``Res_T chi`` lying over ``xi``, for ``T`` the stabilizer of ``xi``.

    Computed as the character of the ``xi``-isotypic part,
    ``psi(t) = 1/|N| sum_{n in N} conj(xi(n)) chi(t n)``, and checked to be
    irreducible and to induce back to ``chi``.
    """

    group = chi.group
    normal = xi.group
    if not normal.issubgroup(stabilizer) or not stabilizer.issubgroup(group):
        raise DomainError("expected N <= T <= G")
    order = cyclotomic.common_order(chi.order, xi.order)
    chi_values = chi.expanded(order)
    shifts = xi.exponents_at(normal.elements) * (order // xi.order)
    representatives = stabilizer.classes.representatives
    sums = np.zeros((representatives.shape[0], order), dtype=np.int64)
    for index, t in enumerate(representatives):
        labels = group.class_of(group.group.mul(t[None, :], normal.elements))
        sums[index] = cyclotomic.rotate(chi_values[labels], -shifts).sum(axis=0)
    reduced = cyclotomic.reduce(sums, order)
    if (reduced % normal.order).any():
        raise InternalConsistencyError("isotypic projection has non-integral values")
    psi = ClassFunction(stabilizer, order, reduced // normal.order)

    problems = []
    if inner_product(psi, psi) != 1:
        problems.append("component is not irreducible")
    elif inner_product(restrict(chi, stabilizer), psi) == 0:
        problems.append("component does not occur in the restriction")
    elif linear_multiplicities(psi, [xi])[0] <= 0:
        problems.append("component does not lie over xi")
    elif induce(psi, group) != chi:
        problems.append("component does not induce back")
    if problems:
        raise InternalConsistencyError(f"Clifford component check failed: {problems[0]}")
    return psi


__all__ = [
    "ClassFunction",
    "LinearCharacter",
    "as_linear_character",
    "clifford_component",
    "conjugate_character",
    "induce",
    "inner_product",
    "linear_characters",
    "linear_multiplicities",
    "restrict",
    "scalar_exponents",
    "spectral_support",
    "stabilizer_of_character",
    "trivial_character",
]
