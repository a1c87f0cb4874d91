"""Dense linear algebra over prime fields and Smith forms of integer matrices.

Everything here works on ``numpy`` integer arrays. Vectors are rows; a
subspace is stored as the reduced row echelon form of a spanning set, so two
subspaces are equal exactly when their echelon bases are equal.
"""

from __future__ import annotations

import numpy as np
from sympy import Matrix
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DM
from sympy.polys.matrices.normalforms import smith_normal_decomp


def as_rows(vectors: np.ndarray, width: int) -> np.ndarray:
    """View ``vectors`` as a ``(rows, width)`` integer array.

    For ``width == 0`` a two-dimensional input keeps its row count and any
    other input has no rows.
    """

    array = np.asarray(vectors, dtype=np.int64)
    if width:
        return array.reshape(-1, width)
    return array.reshape(array.shape[0] if array.ndim == 2 else 0, 0)


def rref(matrix: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Return the reduced row echelon form of ``matrix`` over ``F_p`` and its pivots.

    Zero rows are dropped, so the returned array is a basis of the row space.
    """

    work = np.array(matrix, dtype=np.int64, copy=True) % p
    if work.ndim != 2:
        raise ValueError("rref expects a two-dimensional array")

    rows, cols = work.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        candidates = np.nonzero(work[row:, col])[0]
        if candidates.size == 0:
            continue
        chosen = row + int(candidates[0])
        if chosen != row:
            work[[row, chosen]] = work[[chosen, row]]
        inverse = pow(int(work[row, col]), -1, p)
        work[row] = (work[row] * inverse) % p
        others = np.nonzero(work[:, col])[0]
        others = others[others != row]
        if others.size:
            work[others] = (work[others] - np.outer(work[others, col], work[row])) % p
        pivots.append(col)
        row += 1
    return work[:row], tuple(pivots)


def nullspace(matrix: np.ndarray, p: int) -> np.ndarray:
    """Return a basis, as rows, of ``{x : matrix @ x = 0}`` over ``F_p``."""

    matrix = np.asarray(matrix, dtype=np.int64)
    cols = matrix.shape[1]
    reduced, pivots = rref(matrix, p)
    pivot_set = set(pivots)
    free = [col for col in range(cols) if col not in pivot_set]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for index, col in enumerate(free):
        basis[index, col] = 1
        for row, pivot in enumerate(pivots):
            basis[index, pivot] = (-reduced[row, col]) % p
    return basis


def left_nullspace(matrix: np.ndarray, p: int) -> np.ndarray:
    """Return a basis of ``{c : c @ matrix = 0}`` over ``F_p``."""

    return nullspace(np.asarray(matrix, dtype=np.int64).T, p)


def residual(basis: np.ndarray, pivots: tuple[int, ...], vectors: np.ndarray, p: int) -> np.ndarray:
    """Reduce ``vectors`` against an echelon ``basis``; zero rows lie in the span."""

    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.int64)) % p
    if not pivots:
        return vectors
    coefficients = vectors[:, list(pivots)]
    return (vectors - coefficients @ basis) % p


def in_span(basis: np.ndarray, pivots: tuple[int, ...], vectors: np.ndarray, p: int) -> np.ndarray:
    """Return a boolean mask telling which rows of ``vectors`` lie in the span."""

    return ~residual(basis, pivots, vectors, p).any(axis=1)


def span_elements(basis: np.ndarray, p: int) -> np.ndarray:
    """Enumerate every ``F_p``-combination of the rows of ``basis``.

    The order is lexicographic in the coefficient tuple, last row fastest.
    """

    rank, width = basis.shape
    if rank == 0:
        return np.zeros((1, width), dtype=np.int64)
    grids = np.indices((p,) * rank).reshape(rank, -1).T
    return (grids @ basis) % p


def smith_form(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Smith normal form of a square integer matrix.

    Returns ``(invariants, right, right_inv)`` where ``s @ matrix @ right`` is
    diagonal for some unimodular ``s`` and ``invariants`` lists the absolute
    values of that diagonal, each dividing the next.
    """

    rows, cols = matrix.shape
    if rows != cols:
        raise ValueError("relation matrix must be square")
    if rows == 0:
        empty = np.zeros((0, 0), dtype=np.int64)
        return np.zeros(0, dtype=np.int64), empty, empty
    smf, _, right = smith_normal_decomp(DM(np.asarray(matrix, dtype=np.int64).tolist(), ZZ))
    diagonal = smf.to_Matrix()
    right = right.to_Matrix()
    invariants = np.array([abs(int(diagonal[i, i])) for i in range(rows)], dtype=np.int64)
    return invariants, _as_int_array(right), _as_int_array(right.inv())


def _as_int_array(matrix: Matrix) -> np.ndarray:
    return np.array([[int(x) for x in row] for row in matrix.tolist()], dtype=np.int64)


__all__ = [
    "as_rows",
    "in_span",
    "left_nullspace",
    "nullspace",
    "residual",
    "rref",
    "smith_form",
    "span_elements",
]
