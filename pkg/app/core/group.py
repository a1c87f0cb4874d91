"""The algebra group ``G = 1 + J``, its subgroups and their class data.

Group elements ``1 + a`` are handled through the offset ``a``. Enumerated
subgroups keep their elements as sorted integer codes (base-``p`` digits of
the flattened coordinates), so membership is a binary search and subgroup
equality is array equality.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np

from app.core.algebra import Algebra, AlgebraElement, GroupElement, ScalarField, Subspace
from app.core.linalg import as_rows, smith_form
from app.errors import DomainError, GuardrailError, InternalConsistencyError

logger = logging.getLogger(__name__)

DEFAULT_MAX_ORDER = 3**12


class SubgroupKind(str, Enum):
    ALGEBRA = "algebra-subgroup"
    FIXED_POINTS = "fixed-points-of"
    ENUMERATED = "enumerated"


class AlgebraGroup:
    """Group operations on offsets, i.e. on ``a`` for the element ``1 + a``."""

    def __init__(self, algebra: Algebra, max_order: int = DEFAULT_MAX_ORDER) -> None:
        if algebra.p**algebra.width >= 2**62:
            raise GuardrailError("algebra too large for integer element codes")
        self.algebra = algebra
        self.p = algebra.p
        self.width = algebra.width
        self.max_order = max_order
        self.weights = self.p ** np.arange(self.width, dtype=np.int64)
        self.identity = np.zeros(self.width, dtype=np.int64)

    @property
    def order(self) -> int:
        return self.p**self.width

    def guard(self, order: int) -> None:
        if order > self.max_order:
            raise GuardrailError(f"group of order {order} exceeds the limit {self.max_order}")

    def encode(self, vectors: np.ndarray) -> np.ndarray:
        return np.atleast_2d(vectors) @ self.weights

    def decode(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64).reshape(-1)
        return (codes[:, None] // self.weights[None, :]) % self.p

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """``(1 + a)(1 + b) = 1 + (a + b + ab)``."""

        a, b = np.broadcast_arrays(np.atleast_2d(a), np.atleast_2d(b))
        return (a + b + self.algebra.multiply(a, b)) % self.p

    def inv(self, a: np.ndarray) -> np.ndarray:
        return self.algebra.negated_series(a)

    def sigma_act(self, a: np.ndarray) -> np.ndarray:
        """``g^sigma = sigma(g^-1)``."""

        return self.algebra.involute(self.inv(a))

    def conjugate(self, g: np.ndarray, x: np.ndarray) -> np.ndarray:
        """``g x g^-1`` row-wise."""

        return self.mul(self.mul(g, x), self.inv(g))

    def commutator(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """``[x, y] = x y x^-1 y^-1`` row-wise."""

        return self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))

    def power(self, a: np.ndarray, exponent: int) -> np.ndarray:
        base = np.atleast_2d(a) % self.p
        result = np.zeros_like(base)
        while exponent:
            if exponent & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            exponent >>= 1
        return result

    def element_orders(self, a: np.ndarray) -> np.ndarray:
        current = np.atleast_2d(a) % self.p
        orders = np.ones(current.shape[0], dtype=np.int64)
        pending = current.any(axis=1)
        while pending.any():
            orders[pending] *= self.p
            current = self.power(current, self.p)
            pending = current.any(axis=1)
        return orders

    def element(self, vector: np.ndarray) -> GroupElement:
        return GroupElement(AlgebraElement.from_vector(vector))


@dataclass(eq=False)
class SubgroupHandle:
    """An enumerated subgroup, possibly remembering the subspace it comes from.

    For ``ALGEBRA`` handles ``space`` is the subalgebra ``L`` with ``H = 1 + L``;
    for ``FIXED_POINTS`` handles it is ``C_L(sigma)`` and the elements are its
    Cayley images.
    """

    group: AlgebraGroup
    kind: SubgroupKind
    codes: np.ndarray
    space: Subspace | None = None
    label: str = ""
    _cache: dict[str, object] = field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return int(self.codes.size)

    @property
    def key(self) -> bytes:
        return self.codes.tobytes()

    @cached_property
    def elements(self) -> np.ndarray:
        return self.group.decode(self.codes)

    def contains(self, vectors: np.ndarray) -> np.ndarray:
        codes = self.group.encode(vectors)
        positions = np.minimum(np.searchsorted(self.codes, codes), self.order - 1)
        return self.codes[positions] == codes

    def index_of(self, vectors: np.ndarray) -> np.ndarray:
        codes = self.group.encode(vectors)
        positions = np.minimum(np.searchsorted(self.codes, codes), self.order - 1)
        if not (self.codes[positions] == codes).all():
            raise DomainError(f"element outside of subgroup {self.label or self.kind.value}")
        return positions

    def issubgroup(self, other: SubgroupHandle) -> bool:
        return bool(np.isin(self.codes, other.codes, assume_unique=True).all())

    @cached_property
    def generators(self) -> np.ndarray:
        return greedy_generators(self)

    @cached_property
    def classes(self) -> ClassData:
        return conjugacy_classes(self)

    @cached_property
    def abelian(self) -> Abelianization:
        return abelianization(self)

    def class_of(self, vectors: np.ndarray) -> np.ndarray:
        return self.classes.labels[self.index_of(vectors)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubgroupHandle):
            return NotImplemented
        return self.group is other.group and np.array_equal(self.codes, other.codes)

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"SubgroupHandle({self.label or self.kind.value}, order={self.order})"


@dataclass(frozen=True, eq=False)
class ConjClass:
    representative: GroupElement
    size: int
    inverse_class: int
    power_class: int


@dataclass(eq=False)
class ClassData:
    """Conjugacy classes of an enumerated subgroup.

    Class ``0`` is the class of the identity; each representative is the
    element of smallest code in its class. ``labels`` is aligned with the
    subgroup's ``codes``.
    """

    classes: list[ConjClass]
    labels: np.ndarray
    representatives: np.ndarray
    sizes: np.ndarray
    inverse: np.ndarray
    power: np.ndarray

    def __len__(self) -> int:
        return len(self.classes)


@dataclass(eq=False)
class Abelianization:
    """Presentation of ``H / [H, H]`` as a product of cyclic factors.

    ``generators`` is a polycyclic sequence of ``H`` relative to ``[H, H]``;
    ``coordinates`` maps group elements to exponents against ``factors``.
    """

    handle: SubgroupHandle
    derived: SubgroupHandle
    generators: np.ndarray
    chain: list[np.ndarray]
    indices: list[int]
    transform: np.ndarray
    moduli: np.ndarray
    factors: list[tuple[GroupElement, int]]

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(order for _, order in self.factors)

    @property
    def exponent(self) -> int:
        return max(self.orders, default=1)

    @property
    def size(self) -> int:
        return int(np.prod(self.orders, dtype=np.int64)) if self.factors else 1

    def polycyclic_exponents(self, vectors: np.ndarray) -> np.ndarray:
        group = self.handle.group
        current = np.atleast_2d(vectors) % group.p
        exponents = np.zeros((current.shape[0], len(self.indices)), dtype=np.int64)
        for j in reversed(range(len(self.indices))):
            below = self.chain[j]
            step = group.inv(self.generators[j])
            candidate = current.copy()
            remaining = np.ones(current.shape[0], dtype=bool)
            for e in range(self.indices[j]):
                codes = group.encode(candidate)
                positions = np.minimum(np.searchsorted(below, codes), below.size - 1)
                hit = remaining & (below[positions] == codes)
                exponents[hit, j] = e
                current[hit] = candidate[hit]
                remaining &= ~hit
                if not remaining.any():
                    break
                candidate = group.mul(candidate, step)
            if remaining.any():
                raise InternalConsistencyError("element does not decompose along the polycyclic chain")
        return exponents

    def coordinates(self, vectors: np.ndarray) -> np.ndarray:
        """Exponents of ``vectors`` modulo ``[H, H]`` against ``factors``."""

        if not self.factors:
            return np.zeros((np.atleast_2d(vectors).shape[0], 0), dtype=np.int64)
        raw = self.polycyclic_exponents(vectors) @ self.transform
        keep = self.moduli > 1
        return raw[:, keep] % self.moduli[keep]


def _closure(
    group: AlgebraGroup, seeds: np.ndarray, conjugators: np.ndarray | None = None
) -> np.ndarray:
    """Sorted codes of the subgroup generated by ``seeds``.

    With ``conjugators`` the result is also closed under conjugation by them.
    """

    seeds = as_rows(np.atleast_2d(seeds), group.width)
    seeds = seeds[seeds.any(axis=1)]
    known = np.zeros(1, dtype=np.int64)
    if not seeds.size:
        return known
    if conjugators is not None and conjugators.size:
        conjugators = np.atleast_2d(conjugators)
        inverses = group.inv(conjugators)
    else:
        conjugators = None
    frontier = np.vstack([group.identity[None, :], seeds])
    while frontier.shape[0]:
        batches = []
        if seeds.size:
            batches.append(
                group.mul(
                    np.repeat(frontier, seeds.shape[0], axis=0), np.tile(seeds, (frontier.shape[0], 1))
                )
            )
        if conjugators is not None:
            g = np.repeat(conjugators, frontier.shape[0], axis=0)
            g_inv = np.repeat(inverses, frontier.shape[0], axis=0)
            x = np.tile(frontier, (conjugators.shape[0], 1))
            batches.append(group.mul(group.mul(g, x), g_inv))
        batches.append(frontier)
        codes = np.unique(group.encode(np.vstack(batches)))
        fresh = codes[~np.isin(codes, known, assume_unique=True)]
        if not fresh.size:
            break
        known = np.union1d(known, fresh)
        group.guard(known.size)
        frontier = group.decode(fresh)
    return known


def generate(
    group: AlgebraGroup,
    seeds: np.ndarray,
    conjugators: np.ndarray | None = None,
    label: str = "",
) -> SubgroupHandle:
    """Subgroup generated by ``seeds`` (normal closure under ``conjugators`` if given)."""

    codes = _closure(group, seeds, conjugators)
    return SubgroupHandle(group, SubgroupKind.ENUMERATED, codes, label=label)


def greedy_generators(handle: SubgroupHandle) -> np.ndarray:
    """Scan elements in code order, keeping each one not yet generated."""

    group = handle.group
    chosen: list[np.ndarray] = []
    generated = np.zeros(1, dtype=np.int64)
    while generated.size < handle.order:
        missing = handle.codes[~np.isin(handle.codes, generated, assume_unique=True)]
        candidate = group.decode(missing[:1])[0]
        chosen.append(candidate)
        generated = _closure(group, np.array(chosen))
    return as_rows(chosen, group.width)


def enumerated_subgroup(
    group: AlgebraGroup, codes: np.ndarray, label: str = "", verify: bool = True
) -> SubgroupHandle:
    """Wrap a set of codes as a subgroup, checking closure when ``verify`` is set."""

    codes = np.unique(np.asarray(codes, dtype=np.int64))
    handle = SubgroupHandle(group, SubgroupKind.ENUMERATED, codes, label=label)
    if verify:
        if not codes.size or codes[0] != 0:
            raise DomainError("subset does not contain the identity")
        closure = _closure(group, group.decode(codes))
        if not np.array_equal(closure, codes):
            raise DomainError("subset is not closed under multiplication")
    return handle


def algebra_subgroup(group: AlgebraGroup, space: Subspace, label: str = "") -> SubgroupHandle:
    """``1 + L`` for a subalgebra ``L``."""

    if not group.algebra.is_subalgebra(space):
        raise DomainError("subspace is not multiplicatively closed")
    group.guard(space.order)
    codes = np.sort(group.encode(space.elements()))
    return SubgroupHandle(group, SubgroupKind.ALGEBRA, codes, space=space, label=label)


def fixed_subgroup(
    group: AlgebraGroup, source: SubgroupHandle | Subspace, label: str = ""
) -> SubgroupHandle:
    """``C_H(sigma)`` enumerated as the Cayley image of ``C_L(sigma)``."""

    if isinstance(source, SubgroupHandle):
        if source.kind is not SubgroupKind.ALGEBRA or source.space is None:
            raise DomainError("fixed points are taken of algebra subgroups only")
        space = source.space
    else:
        space = source
    algebra = group.algebra
    fixed = algebra.minus_fixed_space(space)
    group.guard(fixed.order)
    images = algebra.cayley(fixed.elements())
    if not np.array_equal(group.sigma_act(images), images):
        raise InternalConsistencyError("Cayley image of C_L(sigma) is not sigma-fixed")
    codes = np.sort(group.encode(images))
    expected = algebra.spec.field.q_sigma**fixed.dim
    if codes.size != expected or np.unique(codes).size != codes.size:
        raise InternalConsistencyError(
            f"fixed-point subgroup has {codes.size} elements, expected {expected}"
        )
    return SubgroupHandle(group, SubgroupKind.FIXED_POINTS, codes, space=fixed, label=label)


def commutator_closure(first: SubgroupHandle, second: SubgroupHandle, label: str = "") -> SubgroupHandle:
    """``[X, Y]``: normal closure in ``<X, Y>`` of commutators of generators."""

    group = first.group
    x, y = first.generators, second.generators
    if not x.size or not y.size:
        return SubgroupHandle(group, SubgroupKind.ENUMERATED, np.zeros(1, dtype=np.int64), label=label)
    seeds = group.commutator(np.repeat(x, y.shape[0], axis=0), np.tile(y, (x.shape[0], 1)))
    return generate(group, seeds, conjugators=np.vstack([x, y]), label=label)


def derived_subgroup(handle: SubgroupHandle) -> SubgroupHandle:
    return commutator_closure(handle, handle, label=f"[{handle.label}, {handle.label}]")


@dataclass(eq=False)
class TwistedPart:
    """``[G, sigma]`` as the set ``K = {g sigma(g) : g in G}``.

    ``K`` is a transversal of ``C_G(sigma)`` normalized by ``C_G(sigma)``; it
    need not be closed under multiplication, so the subgroup it generates is
    kept separately in ``generated``.
    """

    codes: np.ndarray
    generated: SubgroupHandle

    @property
    def order(self) -> int:
        return int(self.codes.size)

    @property
    def is_subgroup(self) -> bool:
        return self.generated.order == self.order


def sigma_twisted_part(whole: SubgroupHandle, fixed: SubgroupHandle | None = None) -> TwistedPart:
    """Enumerate ``K = {g sigma(g)}`` and check ``G = K C_G(sigma)``.

    Every element of ``G`` must factor uniquely as ``k h`` with ``k`` in ``K``
    and ``h`` in ``C_G(sigma)``, ``K`` must meet ``C_G(sigma)`` only in the
    identity and ``C_G(sigma)`` must normalize ``K``. The subgroup generated by
    ``K`` is the normal closure of ``x sigma(x)`` over generators ``x`` of ``G``.
    """

    group = whole.group
    algebra = group.algebra
    elements = whole.elements
    codes = np.unique(group.encode(group.mul(elements, algebra.involute(elements))))
    twisted = group.decode(codes)
    fixed = fixed if fixed is not None else fixed_subgroup(group, whole, label="C_G(sigma)")

    problems = []
    if fixed.order * codes.size != whole.order:
        problems.append("order product")
    if np.intersect1d(fixed.codes, codes, assume_unique=True).size != 1:
        problems.append("intersection")
    products = group.mul(
        np.repeat(twisted, fixed.order, axis=0), np.tile(fixed.elements, (codes.size, 1))
    )
    if np.unique(group.encode(products)).size != whole.order:
        problems.append("factorization")
    outer = fixed.generators
    if outer.size:
        conjugates = group.conjugate(
            np.repeat(outer, codes.size, axis=0), np.tile(twisted, (outer.shape[0], 1))
        )
        if not np.isin(group.encode(conjugates), codes).all():
            problems.append("normality")
    if problems:
        raise InternalConsistencyError(f"G != [G, sigma] C_G(sigma): {', '.join(problems)}")

    gens = whole.generators
    seeds = group.mul(gens, algebra.involute(gens)) if gens.size else gens
    generated = generate(group, seeds, conjugators=gens, label="<[G, sigma]>")
    if generated.order != codes.size:
        logger.info(
            "[G, sigma] has %d elements but generates a subgroup of order %d",
            codes.size,
            generated.order,
        )
    return TwistedPart(codes, generated)


@dataclass(slots=True)
class CommLemmaResult:
    """Comparison of ``[G, G_n] ∩ C_G(sigma)`` with ``[C_G(sigma), C_{G_n}(sigma)]``.

    The right side is always contained in the left one; ``holds`` records
    whether they are equal.
    """

    n: int
    holds: bool
    contained: bool
    left_order: int
    right_order: int
    witness: GroupElement | None = None


def check_comm_lemma(group: AlgebraGroup, n: int) -> CommLemmaResult:
    """Compare ``[G, G_n] ∩ C_G(sigma)`` with ``[C_G(sigma), C_{G_n}(sigma)]``."""

    if n < 1:
        raise DomainError("n must be positive")
    algebra = group.algebra
    whole = algebra_subgroup(group, algebra.whole(), label="G")
    layer = algebra_subgroup(group, algebra.power(n), label=f"G_{n}")
    fixed = fixed_subgroup(group, whole, label="C_G(sigma)")
    fixed_layer = fixed_subgroup(group, layer, label=f"C_G_{n}(sigma)")
    left = np.intersect1d(commutator_closure(whole, layer).codes, fixed.codes, assume_unique=True)
    right = commutator_closure(fixed, fixed_layer).codes
    holds = np.array_equal(left, right)
    contained = bool(np.isin(right, left, assume_unique=True).all())
    witness = None
    if not holds:
        difference = np.setxor1d(left, right, assume_unique=True)
        witness = group.element(group.decode(difference[:1])[0])
        logger.info(
            "Commutator identity is strict at n=%d: %d elements on the left, %d on the right",
            n,
            left.size,
            right.size,
        )
    return CommLemmaResult(
        n=n,
        holds=holds,
        contained=contained,
        left_order=int(left.size),
        right_order=int(right.size),
        witness=witness,
    )


def conjugacy_classes(handle: SubgroupHandle) -> ClassData:
    group = handle.group
    elements = handle.elements
    gens = handle.generators
    gens_inv = group.inv(gens) if gens.size else gens
    labels = np.full(handle.order, -1, dtype=np.int64)
    starts: list[int] = []
    cursor = 0
    while cursor < handle.order:
        if labels[cursor] >= 0:
            cursor += 1
            continue
        orbit = handle.codes[cursor : cursor + 1]
        frontier = elements[cursor : cursor + 1]
        while frontier.shape[0] and gens.size:
            g = np.repeat(gens, frontier.shape[0], axis=0)
            g_inv = np.repeat(gens_inv, frontier.shape[0], axis=0)
            images = group.mul(group.mul(g, np.tile(frontier, (gens.shape[0], 1))), g_inv)
            codes = np.unique(group.encode(images))
            fresh = codes[~np.isin(codes, orbit, assume_unique=True)]
            orbit = np.union1d(orbit, fresh)
            frontier = group.decode(fresh)
        labels[np.searchsorted(handle.codes, orbit)] = len(starts)
        starts.append(cursor)

    representatives = elements[starts]
    sizes = np.bincount(labels, minlength=len(starts))
    inverse = labels[handle.index_of(group.inv(representatives))]
    power = labels[handle.index_of(group.power(representatives, group.p))]
    classes = [
        ConjClass(group.element(rep), int(size), int(inv), int(pw))
        for rep, size, inv, pw in zip(representatives, sizes, inverse, power)
    ]
    logger.debug("%r has %d conjugacy classes", handle, len(classes))
    return ClassData(classes, labels, representatives, sizes, inverse, power)


def abelianization(handle: SubgroupHandle) -> Abelianization:
    """Cyclic decomposition of ``H / [H, H]`` from the Smith form of a relation matrix."""

    group = handle.group
    derived = derived_subgroup(handle)
    chain = [derived.codes]
    generators: list[np.ndarray] = []
    indices: list[int] = []
    while chain[-1].size < handle.order:
        current = chain[-1]
        missing = handle.codes[~np.isin(handle.codes, current, assume_unique=True)]
        g = group.decode(missing[:1])
        cosets = [current]
        step = g
        while not np.isin(group.encode(step), current).all():
            cosets.append(np.sort(group.encode(group.mul(group.decode(current), step))))
            step = group.mul(step, g)
        generators.append(g[0])
        indices.append(len(cosets))
        chain.append(np.unique(np.concatenate(cosets)))

    k = len(generators)
    gens = np.array(generators, dtype=np.int64).reshape(k, group.width)
    draft = Abelianization(
        handle, derived, gens, chain, indices, np.eye(k, dtype=np.int64), np.zeros(k, dtype=np.int64), []
    )
    relations = np.zeros((k, k), dtype=np.int64)
    for j in range(k):
        relations[j] -= draft.polycyclic_exponents(group.power(gens[j], indices[j]))[0]
        relations[j, j] += indices[j]

    moduli, coordinates, transform = smith_form(relations)
    if int(np.prod(moduli, dtype=np.int64)) != handle.order // derived.order:
        raise InternalConsistencyError("abelian invariants do not multiply to the index of [H, H]")

    factors: list[tuple[GroupElement, int]] = []
    for i in range(k):
        if moduli[i] <= 1:
            continue
        element = group.identity[None, :]
        for j in range(k):
            element = group.mul(element, group.power(gens[j], int(transform[i, j]) % handle.order))
        factors.append((group.element(element[0]), int(moduli[i])))

    draft.transform = coordinates
    draft.moduli = moduli
    draft.factors = factors
    return draft


def whole_group(group: AlgebraGroup) -> SubgroupHandle:
    return algebra_subgroup(group, group.algebra.whole(), label="G")


def layer_subgroup(group: AlgebraGroup, m: int, within: Subspace | None = None) -> SubgroupHandle:
    """``G_m = 1 + J^m``."""

    return algebra_subgroup(group, group.algebra.power(m, within), label=f"G_{m}")


def cayley_images(group: AlgebraGroup, space: Subspace) -> np.ndarray:
    """Sorted codes of ``Psi(space)``."""

    if space.scalars is not ScalarField.FIXED:
        space = group.algebra.span(space.basis, ScalarField.FIXED)
    return np.sort(group.encode(group.algebra.cayley(space.elements())))


__all__ = [
    "Abelianization",
    "AlgebraGroup",
    "ClassData",
    "CommLemmaResult",
    "ConjClass",
    "DEFAULT_MAX_ORDER",
    "SubgroupHandle",
    "SubgroupKind",
    "TwistedPart",
    "abelianization",
    "algebra_subgroup",
    "cayley_images",
    "check_comm_lemma",
    "commutator_closure",
    "conjugacy_classes",
    "derived_subgroup",
    "enumerated_subgroup",
    "fixed_subgroup",
    "generate",
    "greedy_generators",
    "layer_subgroup",
    "sigma_twisted_part",
    "whole_group",
]
