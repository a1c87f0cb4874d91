"""Exact arithmetic in finite fields ``F_q = GF(p^f)`` of odd characteristic.

Elements are stored in the polynomial basis ``1, x, ..., x^(f-1)`` modulo a
fixed monic irreducible polynomial. The field automorphism induced by the
involution is either the identity or the Frobenius power ``x -> x^(p^(f/2))``.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Literal

import numpy as np
import sympy

from app.core.linalg import left_nullspace, rref
from app.errors import DomainError

FieldOperation = Literal["add", "mul", "neg", "inv"]


@dataclass(frozen=True, slots=True)
class FieldSpec:
    """Declaration of a finite field together with the order of ``tau``."""

    p: int
    f: int
    modulus: tuple[int, ...]
    tau_order: int = 1

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def fixed_degree(self) -> int:
        """Degree of the fixed subfield ``F^sigma`` over ``F_p``."""

        return self.f // self.tau_order

    @property
    def q_sigma(self) -> int:
        """Size of the fixed subfield ``F^sigma``."""

        return self.p**self.fixed_degree

    def validate(self) -> None:
        """Raise :class:`DomainError` unless the declaration is admissible."""

        if not sympy.isprime(self.p):
            raise DomainError(f"p={self.p} is not a prime")
        if self.p == 2:
            raise DomainError("characteristic 2 is not supported: p must be odd")
        if self.f < 1:
            raise DomainError("extension degree f must be at least 1")
        if len(self.modulus) != self.f + 1:
            raise DomainError(f"modulus must have {self.f + 1} coefficients")
        if any(not 0 <= coefficient < self.p for coefficient in self.modulus):
            raise DomainError("modulus coefficients must be reduced modulo p")
        if self.modulus[-1] != 1:
            raise DomainError("modulus must be monic")
        if self.tau_order not in (1, 2):
            raise DomainError("tau_order must be 1 or 2")
        if self.tau_order == 2 and self.f % 2:
            raise DomainError("tau_order 2 requires an even extension degree")
        if not is_irreducible(self.p, self.modulus):
            raise DomainError(f"modulus {list(self.modulus)} is reducible over F_{self.p}")

    @classmethod
    def prime(cls, p: int) -> FieldSpec:
        return cls(p=p, f=1, modulus=(0, 1), tau_order=1)

    @classmethod
    def of_order(cls, q: int, tau_order: int = 1) -> FieldSpec:
        """Return the canonical declaration of ``F_q``.

        The modulus is the first monic irreducible polynomial in lexicographic
        order of its lower coefficients, constant term first.
        """

        factors = sympy.factorint(q)
        if len(factors) != 1:
            raise DomainError(f"q={q} is not a prime power")
        ((p, f),) = factors.items()
        return cls(p=int(p), f=int(f), modulus=first_irreducible(int(p), int(f)), tau_order=tau_order)


@dataclass(frozen=True, slots=True)
class Scalar:
    """Element of ``F_q`` given by its coordinates in the polynomial basis."""

    coeffs: tuple[int, ...]

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coeffs)


@dataclass(frozen=True, slots=True)
class RootOfUnity:
    """The complex number ``exp(2 pi i exponent / order)``."""

    exponent: int
    order: int

    def __post_init__(self) -> None:
        if self.order < 1 or not 0 <= self.exponent < self.order:
            raise DomainError(f"invalid root of unity {self.exponent}/{self.order}")

    def __mul__(self, other: RootOfUnity) -> RootOfUnity:
        order = self.order * other.order // np.gcd(self.order, other.order)
        exponent = self.exponent * (order // self.order) + other.exponent * (order // other.order)
        return RootOfUnity(exponent=int(exponent % order), order=int(order))

    @property
    def is_trivial(self) -> bool:
        return self.exponent == 0


def is_irreducible(p: int, coefficients: Sequence[int]) -> bool:
    """Return ``True`` if the polynomial (constant term first) is irreducible over ``F_p``."""

    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(list(coefficients))), x, modulus=p)
    return bool(poly.is_irreducible)


def first_irreducible(p: int, f: int) -> tuple[int, ...]:
    for lower in itertools.product(range(p), repeat=f):
        candidate = (*lower, 1)
        if is_irreducible(p, candidate):
            return candidate
    raise DomainError(f"no irreducible polynomial of degree {f} over F_{p}")  # pragma: no cover


class FiniteField:
    """Runtime arithmetic for a validated :class:`FieldSpec`.

    All tables are built once in the constructor; instances are immutable
    afterwards and safe to share.
    """

    def __init__(self, spec: FieldSpec) -> None:
        spec.validate()
        self.spec = spec
        self.p = spec.p
        self.f = spec.f
        self.q = spec.q
        self._power_table = self._reduced_powers()
        # mul_tensor[r, s] holds the coordinates of x^r * x^s.
        index = np.add.outer(np.arange(self.f), np.arange(self.f))
        self.mul_tensor = self._power_table[index]
        self.frobenius = np.array(
            [self._power_vector(self._unit(r), self.p) for r in range(self.f)], dtype=np.int64
        )
        if spec.tau_order == 2:
            self.tau = self.frobenius.copy()
            for _ in range(self.f // 2 - 1):
                self.tau = (self.tau @ self.frobenius) % self.p
        else:
            self.tau = np.eye(self.f, dtype=np.int64)

    def _unit(self, r: int) -> np.ndarray:
        vector = np.zeros(self.f, dtype=np.int64)
        vector[r] = 1
        return vector

    def _reduced_powers(self) -> np.ndarray:
        lower = np.array(self.spec.modulus[: self.f], dtype=np.int64)
        table = np.zeros((2 * self.f - 1, self.f), dtype=np.int64)
        current = self._unit(0)
        for k in range(2 * self.f - 1):
            table[k] = current
            carry = current[-1]
            shifted = np.roll(current, 1)
            shifted[0] = 0
            current = (shifted - carry * lower) % self.p
        return table

    def vector(self, x: Scalar | int | Sequence[int]) -> np.ndarray:
        """Return the coordinate vector of ``x``; integers embed the prime field."""

        if isinstance(x, Scalar):
            coeffs = x.coeffs
        elif isinstance(x, (int, np.integer)):
            coeffs = (int(x) % self.p,) + (0,) * (self.f - 1)
        else:
            coeffs = tuple(x)
        if len(coeffs) != self.f:
            raise DomainError(f"expected {self.f} coordinates, got {len(coeffs)}")
        return np.array(coeffs, dtype=np.int64) % self.p

    def scalar(self, vector: np.ndarray | Sequence[int]) -> Scalar:
        return Scalar(tuple(int(c) % self.p for c in vector))

    @property
    def zero(self) -> Scalar:
        return Scalar((0,) * self.f)

    @property
    def one(self) -> Scalar:
        return self.scalar(self._unit(0))

    def _mul_vectors(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("r,s,rst->t", x, y, self.mul_tensor) % self.p

    def _power_vector(self, x: np.ndarray, exponent: int) -> np.ndarray:
        result = self._unit(0)
        base = x % self.p
        while exponent:
            if exponent & 1:
                result = self._mul_vectors(result, base)
            base = self._mul_vectors(base, base)
            exponent >>= 1
        return result

    def add(self, x: Scalar, y: Scalar) -> Scalar:
        return self.scalar(self.vector(x) + self.vector(y))

    def neg(self, x: Scalar) -> Scalar:
        return self.scalar(-self.vector(x))

    def sub(self, x: Scalar, y: Scalar) -> Scalar:
        return self.scalar(self.vector(x) - self.vector(y))

    def mul(self, x: Scalar, y: Scalar) -> Scalar:
        return self.scalar(self._mul_vectors(self.vector(x), self.vector(y)))

    def power(self, x: Scalar, exponent: int) -> Scalar:
        return self.scalar(self._power_vector(self.vector(x), exponent))

    def inv(self, x: Scalar) -> Scalar:
        vector = self.vector(x)
        if not vector.any():
            raise DomainError("cannot invert zero")
        return self.scalar(self._power_vector(vector, self.q - 2))

    def multiplication_matrix(self, x: Scalar | np.ndarray) -> np.ndarray:
        """Return ``M`` with ``vector(y) @ M == vector(y * x)`` for every ``y``."""

        vector = x if isinstance(x, np.ndarray) else self.vector(x)
        return np.einsum("s,rst->rt", vector, self.mul_tensor) % self.p

    def tau_apply(self, x: Scalar) -> Scalar:
        return self.scalar(self.vector(x) @ self.tau)

    @cached_property
    def fixed_basis_vectors(self) -> np.ndarray:
        """Echelon ``F_p``-basis of the fixed subfield, one vector per row."""

        kernel = left_nullspace((self.tau - np.eye(self.f, dtype=np.int64)) % self.p, self.p)
        basis, _ = rref(kernel, self.p)
        return basis

    def fixed_subfield_basis(self) -> list[Scalar]:
        return [self.scalar(row) for row in self.fixed_basis_vectors]

    def trace(self, x: Scalar) -> int:
        """Absolute trace ``Tr_{F_q/F_p}(x)`` as an integer modulo ``p``."""

        term = self.vector(x)
        total = np.zeros(self.f, dtype=np.int64)
        for _ in range(self.f):
            total = (total + term) % self.p
            term = (term @ self.frobenius) % self.p
        return int(total[0])

    def elements(self) -> np.ndarray:
        """All ``q`` elements as coordinate rows, in lexicographic order."""

        return np.indices((self.p,) * self.f).reshape(self.f, -1).T.astype(np.int64)


@lru_cache(maxsize=None)
def get_field(spec: FieldSpec) -> FiniteField:
    """Return the cached runtime field for ``spec``."""

    return FiniteField(spec)


def field_ops(
    spec: FieldSpec, x: Scalar, y: Scalar | None, kind: FieldOperation
) -> Scalar:
    """Apply one of the basic field operations."""

    field = get_field(spec)
    if kind == "add":
        return field.add(x, y if y is not None else field.zero)
    if kind == "mul":
        return field.mul(x, y if y is not None else field.one)
    if kind == "neg":
        return field.neg(x)
    if kind == "inv":
        return field.inv(x)
    raise DomainError(f"unknown field operation {kind!r}")


def tau_apply(spec: FieldSpec, x: Scalar) -> Scalar:
    return get_field(spec).tau_apply(x)


def fixed_subfield_basis(spec: FieldSpec) -> list[Scalar]:
    return get_field(spec).fixed_subfield_basis()


def additive_character(spec: FieldSpec, a: Scalar, x: Scalar) -> RootOfUnity:
    """Evaluate ``xi_a(x) = exp(2 pi i Tr(a x) / p)``."""

    field = get_field(spec)
    return RootOfUnity(exponent=field.trace(field.mul(a, x)), order=field.p)


__all__ = [
    "FieldOperation",
    "FieldSpec",
    "FiniteField",
    "RootOfUnity",
    "Scalar",
    "additive_character",
    "field_ops",
    "first_irreducible",
    "fixed_subfield_basis",
    "get_field",
    "is_irreducible",
    "tau_apply",
]
