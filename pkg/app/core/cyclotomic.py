"""Exact arithmetic in the rings ``Z[zeta_e]`` for prime-power orders ``e``.

Two layouts are used. The *expanded* layout is a length-``e`` integer vector
of coefficients of ``1, zeta, ..., zeta^(e-1)``; it is not unique but makes
multiplication a cyclic convolution and conjugation an index reversal. The
*reduced* layout keeps the first ``phi(e)`` coordinates after reducing modulo
the cyclotomic polynomial and is canonical. Arrays carry the ring index on
the last axis so whole character tables are processed at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy

from app.errors import DomainError


def _prime_of(order: int) -> int | None:
    if order == 1:
        return None
    factors = sympy.factorint(order)
    if len(factors) != 1:
        raise DomainError(f"order {order} is not a prime power")
    return int(next(iter(factors)))


def totient(order: int) -> int:
    prime = _prime_of(order)
    return 1 if prime is None else order - order // prime


def common_order(first: int, second: int) -> int:
    low, high = sorted((first, second))
    if high % low:
        raise DomainError(f"orders {first} and {second} belong to different primes")
    return high


def reduce(values: np.ndarray, order: int) -> np.ndarray:
    """Map expanded vectors to their canonical reduced coordinates."""

    values = np.asarray(values, dtype=np.int64)
    prime = _prime_of(order)
    if prime is None:
        return values.copy()
    block = order // prime
    size = order - block
    # zeta^(size + s) = -sum_{j < prime - 1} zeta^(j * block + s)
    top = values[..., size:]
    return values[..., :size] - np.tile(top, prime - 1)


def expand(values: np.ndarray, order: int) -> np.ndarray:
    values = np.asarray(values, dtype=np.int64)
    pad = [(0, 0)] * (values.ndim - 1) + [(0, order - values.shape[-1])]
    return np.pad(values, pad)


def lift(values: np.ndarray, order: int, target: int) -> np.ndarray:
    """Re-express expanded vectors of ``order`` in the expanded layout of ``target``."""

    if order == target:
        return np.asarray(values, dtype=np.int64)
    if target % order:
        raise DomainError(f"cannot lift order {order} to {target}")
    values = np.asarray(values, dtype=np.int64)
    out = np.zeros(values.shape[:-1] + (target,), dtype=np.int64)
    out[..., :: target // order] = values
    return out


def multiply(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Cyclic convolution of expanded vectors along the last axis."""

    first = np.asarray(first, dtype=np.int64)
    second = np.asarray(second, dtype=np.int64)
    order = first.shape[-1]
    out = np.zeros(np.broadcast_shapes(first.shape, second.shape), dtype=np.int64)
    for shift in range(order):
        coefficient = first[..., shift : shift + 1]
        if coefficient.any():
            out += coefficient * np.roll(second, shift, axis=-1)
    return out


def conjugate(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values)
    order = values.shape[-1]
    return values[..., (-np.arange(order)) % order]


def rotate(values: np.ndarray, exponents: np.ndarray) -> np.ndarray:
    """Multiply each expanded vector by ``zeta^exponent`` (broadcast over leading axes)."""

    values = np.asarray(values)
    order = values.shape[-1]
    index = (np.arange(order) - np.asarray(exponents)[..., None]) % order
    return np.take_along_axis(values, index, axis=-1)


def roots(exponents: np.ndarray, order: int) -> np.ndarray:
    """Expanded vectors of ``zeta_order^exponent``."""

    exponents = np.asarray(exponents, dtype=np.int64) % order
    out = np.zeros(exponents.shape + (order,), dtype=np.int64)
    np.put_along_axis(out, exponents[..., None], 1, axis=-1)
    return out


@lru_cache(maxsize=None)
def root_table(order: int) -> np.ndarray:
    """Reduced coordinates of every ``zeta^k``, row ``k``."""

    table = reduce(roots(np.arange(order), order), order)
    table.setflags(write=False)
    return table


def rational_part(reduced: np.ndarray) -> np.ndarray:
    """Return the integer value of reduced vectors that lie in ``Z``.

    Raises :class:`DomainError` if some vector is not a rational integer.
    """

    reduced = np.asarray(reduced)
    if reduced[..., 1:].any():
        raise DomainError("cyclotomic value is not rational")
    return reduced[..., 0]


@dataclass(frozen=True, slots=True)
class Cyclotomic:
    """A single cyclotomic integer in reduced coordinates."""

    order: int
    coeffs: tuple[int, ...]

    @classmethod
    def from_expanded(cls, values: np.ndarray, order: int) -> Cyclotomic:
        return cls(order, tuple(int(c) for c in reduce(values, order)))

    @classmethod
    def integer(cls, value: int, order: int = 1) -> Cyclotomic:
        return cls.from_expanded(value * roots(0, order), order)

    @classmethod
    def root(cls, exponent: int, order: int) -> Cyclotomic:
        return cls.from_expanded(roots(exponent, order), order)

    def expanded(self, order: int | None = None) -> np.ndarray:
        vector = expand(np.array(self.coeffs, dtype=np.int64), self.order)
        return lift(vector, self.order, order or self.order)

    def _align(self, other: Cyclotomic) -> tuple[np.ndarray, np.ndarray, int]:
        order = common_order(self.order, other.order)
        return self.expanded(order), other.expanded(order), order

    def __add__(self, other: Cyclotomic) -> Cyclotomic:
        first, second, order = self._align(other)
        return Cyclotomic.from_expanded(first + second, order)

    def __mul__(self, other: Cyclotomic) -> Cyclotomic:
        first, second, order = self._align(other)
        return Cyclotomic.from_expanded(multiply(first, second), order)

    def conjugate(self) -> Cyclotomic:
        return Cyclotomic.from_expanded(conjugate(self.expanded()), self.order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        first, second, order = self._align(other)
        return bool((reduce(first, order) == reduce(second, order)).all())

    def __hash__(self) -> int:
        # Lifting a reduced vector keeps it reduced, so the constant term is order-independent.
        return hash(self.coeffs[0])

    def as_dict(self) -> dict[str, object]:
        return {"order": self.order, "coeffs": list(self.coeffs)}


__all__ = [
    "Cyclotomic",
    "common_order",
    "conjugate",
    "expand",
    "lift",
    "multiply",
    "rational_part",
    "reduce",
    "root_table",
    "roots",
    "rotate",
    "totient",
]
