from __future__ import annotations

import numpy as np
import pytest

from app.core.linalg import as_rows, in_span, nullspace, rref, smith_form, span_elements


def test_smith_form_of_a_diagonal_matrix() -> None:
    invariants, right, right_inv = smith_form(np.array([[2, 0], [0, 3]]))
    assert invariants.tolist() == [1, 6]
    assert np.array_equal(right @ right_inv, np.eye(2, dtype=np.int64))


def test_smith_form_of_a_relation_matrix() -> None:
    relations = np.array([[3, -1, 0], [0, 3, 0], [0, 0, 9]])
    invariants, right, right_inv = smith_form(relations)
    assert int(np.prod(invariants)) == 81
    assert all(b % a == 0 for a, b in zip(invariants, invariants[1:]) if a)
    assert np.array_equal(right_inv @ right, np.eye(3, dtype=np.int64))


def test_smith_form_rejects_rectangular_input() -> None:
    with pytest.raises(ValueError):
        smith_form(np.zeros((2, 3), dtype=np.int64))


def test_empty_smith_form() -> None:
    invariants, right, right_inv = smith_form(np.zeros((0, 0), dtype=np.int64))
    assert invariants.shape == (0,)
    assert right.shape == right_inv.shape == (0, 0)


def test_as_rows_keeps_zero_width_row_counts() -> None:
    assert as_rows(np.zeros((3, 0)), 0).shape == (3, 0)
    assert as_rows([], 0).shape == (0, 0)
    assert as_rows([], 2).shape == (0, 2)
    assert as_rows(np.arange(6), 3).tolist() == [[0, 1, 2], [3, 4, 5]]


def test_rref_and_nullspace() -> None:
    matrix = np.array([[1, 2, 0], [2, 4, 1]])
    basis, pivots = rref(matrix, 5)
    assert pivots == (0, 2)
    kernel = nullspace(matrix, 5)
    assert kernel.shape == (1, 3)
    assert not (matrix @ kernel.T % 5).any()
    assert in_span(basis, pivots, matrix, 5).all()


def test_span_elements_of_the_zero_space() -> None:
    assert span_elements(np.zeros((0, 0), dtype=np.int64), 3).shape == (1, 0)
    assert span_elements(np.eye(2, dtype=np.int64), 3).shape == (9, 2)
