"""Generators for the unipotent radicals of classical groups.

``J`` is the algebra of strictly upper triangular ``n x n`` matrices over
``F_q`` with basis ``e_ij`` (``i < j``, lexicographic). The involution is
``a -> K tau(a)^T K^-1`` for an antidiagonal ``K``, which sends ``e_ij`` to
``(k_j' / k_i') e_j'i'`` with ``x' = n + 1 - x``.
"""

from __future__ import annotations

from typing import Final, Literal

from app.core.algebra import AlgebraSpec, StructureConstant
from app.core.field import FieldSpec, Scalar
from app.errors import DomainError
from app.formats.algebra_file import canonical, check_spec

Family = Literal["un-flip", "un-symplectic", "un-unitary", "abelian"]
FAMILIES: Final[tuple[str, ...]] = ("un-flip", "un-symplectic", "un-unitary", "abelian")


def _scalar(value: int, spec: FieldSpec) -> Scalar:
    return Scalar((value % spec.p,) + (0,) * (spec.f - 1))


def _signs(family: str, n: int) -> list[int]:
    """Entries ``k_1, ..., k_n`` of the antidiagonal matrix ``K``."""

    if family == "un-symplectic":
        if n % 2:
            raise DomainError("symplectic type needs an even n")
        return [1] * (n // 2) + [-1] * (n // 2)
    return [1] * n


def _field(family: str, q: int) -> FieldSpec:
    tau_order = 2 if family == "un-unitary" else 1
    spec = FieldSpec.of_order(q, tau_order=tau_order)
    if spec.p == 2:
        raise DomainError("characteristic 2 is not supported: p must be odd")
    if tau_order == 2 and spec.f % 2:
        raise DomainError("unitary type needs a square q")
    spec.validate()
    return spec


def unitriangular(family: str, n: int, q: int) -> AlgebraSpec:
    """Strictly upper triangular matrices with the involution of ``family``."""

    if n < 2:
        raise DomainError("n must be at least 2")
    field_spec = _field(family, q)
    signs = _signs(family, n)
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    index = {pair: position for position, pair in enumerate(pairs)}
    one = _scalar(1, field_spec)
    zero = _scalar(0, field_spec)

    consts = [
        StructureConstant(index[(i, j)], index[(j, l)], index[(i, l)], one)
        for (i, j) in pairs
        for l in range(j + 1, n + 1)
    ]

    def mirror(x: int) -> int:
        return n + 1 - x

    rows = []
    for i, j in pairs:
        row = [zero] * len(pairs)
        # k_j' / k_i' with signs in {1, -1}
        row[index[(mirror(j), mirror(i))]] = _scalar(signs[mirror(j) - 1] * signs[mirror(i) - 1], field_spec)
        rows.append(tuple(row))

    spec = AlgebraSpec(
        field=field_spec,
        dim=len(pairs),
        basis_names=tuple(f"e{i}{j}" if n < 10 else f"e{i}_{j}" for i, j in pairs),
        struct_consts=tuple(consts),
        involution_matrix=tuple(rows),
        metadata=(("family", family), ("n", str(n)), ("q", str(q))),
    )
    return canonical(spec)


def abelian(dim: int, q: int) -> AlgebraSpec:
    """Zero multiplication with ``sigma = -1``, so ``C_G(sigma) = G``."""

    if dim < 1:
        raise DomainError("dim must be at least 1")
    field_spec = _field("abelian", q)
    minus_one = _scalar(-1, field_spec)
    zero = _scalar(0, field_spec)
    rows = tuple(
        tuple(minus_one if i == j else zero for j in range(dim)) for i in range(dim)
    )
    return AlgebraSpec(
        field=field_spec,
        dim=dim,
        basis_names=tuple(f"e{i + 1}" for i in range(dim)),
        struct_consts=(),
        involution_matrix=rows,
        metadata=(("family", "abelian"), ("n", str(dim)), ("q", str(q))),
    )


def make_example(family: str, n: int, q: int) -> AlgebraSpec:
    """Build and validate a member of one of the example families."""

    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    spec = abelian(n, q) if family == "abelian" else unitriangular(family, n, q)
    check_spec(spec)
    return spec


__all__ = ["FAMILIES", "Family", "abelian", "make_example", "unitriangular"]
