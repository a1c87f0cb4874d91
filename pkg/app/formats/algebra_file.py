"""Text format for algebra declarations.

A file is a sequence of ``[section]`` blocks; ``#`` starts a comment::

    [field]
    p = 3
    f = 2
    modulus = 1,0,1
    tau_order = 2

    [algebra]
    dim = 3
    basis = e12 e13 e23

    [products]
    # i j k coeff, 0-based; e_i * e_j contributes coeff * e_k
    0 2 1 1

    [involution]
    # row i holds sigma(e_i)
    0 0 1
    0 1 0
    1 0 0

    [metadata]
    family = un-unitary

Scalars are written as comma-separated polynomial-basis coordinates,
constant term first; a bare integer denotes an element of the prime field.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator
from dataclasses import dataclass, field
from pathlib import Path

from app.core.algebra import AlgebraSpec, StructureConstant, get_algebra, validate_algebra
from app.core.field import FieldSpec, Scalar, first_irreducible, get_field
from app.errors import DomainError, GuardrailError, InputError

logger = logging.getLogger(__name__)

SECTIONS = ("field", "algebra", "products", "involution", "metadata")
_REQUIRED = ("field", "algebra")


@dataclass(slots=True)
class _Section:
    name: str
    line: int
    entries: list[tuple[int, str]] = field(default_factory=list)

    def settings(self) -> dict[str, tuple[int, str]]:
        values: dict[str, tuple[int, str]] = {}
        for number, text in self.entries:
            key, sep, value = text.partition("=")
            if not sep:
                raise InputError(f"expected 'key = value' in [{self.name}]", line=number)
            key = key.strip()
            if key in values:
                raise InputError(f"duplicate key {key!r} in [{self.name}]", line=number)
            values[key] = (number, value.strip())
        return values


def _split_sections(text: str) -> dict[str, _Section]:
    sections: dict[str, _Section] = {}
    current: _Section | None = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip().lower()
            if name not in SECTIONS:
                raise InputError(f"unknown section [{name}]", line=number)
            if name in sections:
                raise InputError(f"section [{name}] appears twice", line=number)
            current = sections[name] = _Section(name, number)
            continue
        if current is None:
            raise InputError("content before the first section", line=number)
        current.entries.append((number, line))
    for name in _REQUIRED:
        if name not in sections:
            raise InputError(f"missing section [{name}]")
    return sections


def _int(value: str, line: int, what: str) -> int:
    try:
        return int(value)
    except ValueError as error:
        raise InputError(f"{what} must be an integer, got {value!r}", line=line) from error


def _ints(value: str, line: int, what: str) -> tuple[int, ...]:
    return tuple(_int(part.strip(), line, what) for part in value.split(","))


def _scalar(token: str, spec: FieldSpec, line: int) -> Scalar:
    coeffs = _ints(token, line, "scalar coordinate")
    if len(coeffs) == 1:
        coeffs = coeffs + (0,) * (spec.f - 1)
    if len(coeffs) != spec.f:
        raise InputError(f"scalar {token!r} needs {spec.f} coordinates", line=line)
    return Scalar(tuple(c % spec.p for c in coeffs))


def _parse_field(section: _Section, max_field_order: int | None) -> FieldSpec:
    values = section.settings()
    if "p" not in values:
        raise InputError("[field] needs p", line=section.line)
    line, raw = values["p"]
    p = _int(raw, line, "p")
    if p == 2:
        raise InputError("characteristic 2 is not supported: p must be odd", line=line)
    f = _int(values["f"][1], values["f"][0], "f") if "f" in values else 1
    tau_order = (
        _int(values["tau_order"][1], values["tau_order"][0], "tau_order")
        if "tau_order" in values
        else 1
    )
    if "modulus" in values:
        modulus = _ints(values["modulus"][1], values["modulus"][0], "modulus coefficient")
    else:
        if p < 2 or f < 1:
            raise InputError("p and f must be positive", line=line)
        modulus = first_irreducible(p, f)
    spec = FieldSpec(p=p, f=f, modulus=modulus, tau_order=tau_order)
    try:
        spec.validate()
    except DomainError as error:
        raise InputError(str(error), line=section.line) from error
    if max_field_order is not None and spec.q > max_field_order:
        raise GuardrailError(f"field of order {spec.q} exceeds the limit {max_field_order}")
    return spec


def _rows(section: _Section | None) -> Iterator[tuple[int, list[str]]]:
    if section is None:
        return
    for number, text in section.entries:
        yield number, text.split()


def parse_algebra_text(text: str, *, max_field_order: int | None = None) -> AlgebraSpec:
    """Parse and validate an algebra declaration."""

    sections = _split_sections(text)
    field_spec = _parse_field(sections["field"], max_field_order)

    algebra_values = sections["algebra"].settings()
    if "dim" not in algebra_values:
        raise InputError("[algebra] needs dim", line=sections["algebra"].line)
    dim_line, dim_raw = algebra_values["dim"]
    dim = _int(dim_raw, dim_line, "dim")
    if dim < 0:
        raise InputError("dim must be nonnegative", line=dim_line)
    if "basis" in algebra_values:
        basis_line, basis_raw = algebra_values["basis"]
        names = tuple(basis_raw.split())
        if len(names) != dim or len(set(names)) != dim:
            raise InputError(f"expected {dim} distinct basis names", line=basis_line)
    else:
        names = tuple(f"e{i + 1}" for i in range(dim))

    consts = []
    for number, tokens in _rows(sections.get("products")):
        if len(tokens) != 4:
            raise InputError("product rows are 'i j k coeff'", line=number)
        i, j, k = (_int(token, number, "index") for token in tokens[:3])
        if not all(0 <= index < dim for index in (i, j, k)):
            raise InputError(f"index out of range 0..{dim - 1}", line=number)
        consts.append(StructureConstant(i, j, k, _scalar(tokens[3], field_spec, number)))

    involution = sections.get("involution")
    rows = []
    for number, tokens in _rows(involution):
        if len(tokens) != dim:
            raise InputError(f"involution rows need {dim} entries", line=number)
        rows.append(tuple(_scalar(token, field_spec, number) for token in tokens))
    if len(rows) != dim:
        anchor = involution.line if involution is not None else None
        raise InputError(f"involution needs {dim} rows, got {len(rows)}", line=anchor)

    metadata_section = sections.get("metadata")
    metadata = []
    if metadata_section is not None:
        metadata = [(key, value) for key, (_, value) in metadata_section.settings().items()]

    spec = canonical(
        AlgebraSpec(
            field=field_spec,
            dim=dim,
            basis_names=names,
            struct_consts=tuple(consts),
            involution_matrix=tuple(rows),
            metadata=tuple(metadata),
        )
    )
    check_spec(spec)
    return spec


def check_spec(spec: AlgebraSpec) -> None:
    """Raise :class:`InputError` naming every failed algebra axiom."""

    try:
        get_algebra(spec)
        report = validate_algebra(spec)
    except DomainError as error:
        raise InputError(str(error)) from error
    if not report.passed:
        details = "; ".join(
            f"{violation.axiom} at {tuple(violation.indices)}" for violation in report.violations[:8]
        )
        raise InputError(f"algebra axioms violated: {details}")


def load_algebra_file(path: str | Path, *, max_field_order: int | None = None) -> AlgebraSpec:
    """Read ``path`` and parse it with :func:`parse_algebra_text`."""

    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as error:
        raise InputError(f"cannot read {path}: {error.strerror}") from error
    logger.debug("Parsing algebra file %s", path)
    return parse_algebra_text(text, max_field_order=max_field_order)


def canonical(spec: AlgebraSpec) -> AlgebraSpec:
    """Merge repeated products, drop zero ones and sort everything."""

    runtime = get_field(spec.field)
    merged: dict[tuple[int, int, int], Scalar] = {}
    for const in spec.struct_consts:
        key = (const.i, const.j, const.k)
        merged[key] = runtime.add(merged[key], const.coeff) if key in merged else const.coeff
    zero = runtime.zero
    consts = tuple(
        StructureConstant(i, j, k, coeff)
        for (i, j, k), coeff in sorted(merged.items())
        if coeff != zero
    )
    return AlgebraSpec(
        field=spec.field,
        dim=spec.dim,
        basis_names=spec.basis_names,
        struct_consts=consts,
        involution_matrix=spec.involution_matrix,
        metadata=tuple(sorted(spec.metadata)),
    )


def _format_scalar(scalar: Scalar) -> str:
    if all(c == 0 for c in scalar.coeffs[1:]):
        return str(scalar.coeffs[0])
    return ",".join(str(c) for c in scalar.coeffs)


def emit_algebra_text(spec: AlgebraSpec) -> str:
    """Serialize ``spec`` in canonical form; :func:`parse_algebra_text` reads it back."""

    spec = canonical(spec)
    field_spec = spec.field
    lines = [
        "[field]",
        f"p = {field_spec.p}",
        f"f = {field_spec.f}",
        f"modulus = {','.join(str(c) for c in field_spec.modulus)}",
        f"tau_order = {field_spec.tau_order}",
        "",
        "[algebra]",
        f"dim = {spec.dim}",
    ]
    if spec.dim:
        lines.append(f"basis = {' '.join(spec.basis_names)}")
    lines += ["", "[products]"]
    lines += [f"{c.i} {c.j} {c.k} {_format_scalar(c.coeff)}" for c in spec.struct_consts]
    lines += ["", "[involution]"]
    lines += [" ".join(_format_scalar(entry) for entry in row) for row in spec.involution_matrix]
    if spec.metadata:
        lines += ["", "[metadata]"]
        lines += [f"{key} = {value}" for key, value in spec.metadata]
    return "\n".join(lines) + "\n"


def write_algebra_file(spec: AlgebraSpec, path: str | Path) -> None:
    Path(path).write_text(emit_algebra_text(spec), encoding="utf-8")


__all__ = [
    "canonical",
    "check_spec",
    "emit_algebra_text",
    "load_algebra_file",
    "parse_algebra_text",
    "write_algebra_file",
]
