"""Finite subsets of an ambient group, plus the on-disk set format.

File format (UTF-8 text): line 1 is ``group: <literal>``, every following
non-blank line is one element with comma-separated coordinates.  Files
written by :func:`write_set` round-trip bit-exactly.
"""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

from . import groups
from .groups import Elem, GroupSpec


class SetFileError(ValueError):
    """Set file parse failure; carries the offending line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class GSet:
    """Immutable finite subset: sorted unique reduced elements."""

    __slots__ = ("group", "elems", "_set", "_hash")

    def __init__(self, group: GroupSpec, elems: Iterable = ()):  # elems: ints or tuples
        normalized = {groups.as_elem(group, e) for e in elems}
        self.group = group
        self.elems: tuple[Elem, ...] = tuple(sorted(normalized))
        self._set = frozenset(self.elems)
        self._hash = hash((group, self.elems))

    def __len__(self) -> int:
        return len(self.elems)

    def __iter__(self) -> Iterator[Elem]:
        return iter(self.elems)

    def __contains__(self, x) -> bool:
        return groups.as_elem(self.group, x) in self._set

    def __eq__(self, other) -> bool:
        return isinstance(other, GSet) and self.group == other.group and self.elems == other.elems

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inner = ",".join("(" + groups.format_elem(e) + ")" for e in self.elems[:8])
        if len(self.elems) > 8:
            inner += ",..."
        return f"GSet({self.group}, {{{inner}}}, n={len(self)})"

    @property
    def as_set(self) -> frozenset:
        return self._set

    def flat_indices(self) -> np.ndarray:
        """Element ranks for a cyclic product, sorted ascending."""
        g = self.group
        if not g.is_cyclic:
            raise groups.GroupError("flat indices need a finite cyclic product")
        return np.array([groups.flat_index(g, e) for e in self.elems], dtype=np.int64)

    def coord_matrix(self) -> np.ndarray:
        """len x dim int64 matrix of coordinates."""
        if not self.elems:
            return np.zeros((0, self.group.dim), dtype=np.int64)
        return np.array(self.elems, dtype=np.int64)

    def indicator(self) -> np.ndarray:
        """Dense 0/1 array shaped by the moduli (cyclic products only)."""
        g = self.group
        if not g.is_cyclic:
            raise groups.GroupError("dense indicator needs a cyclic product")
        arr = np.zeros(g.order, dtype=np.int64)
        arr[self.flat_indices()] = 1
        return arr.reshape(g.moduli)

    def translate(self, t) -> "GSet":
        t = groups.as_elem(self.group, t)
        return GSet(self.group, (groups.op_add(self.group, e, t) for e in self.elems))

    def negate(self) -> "GSet":
        return GSet(self.group, (groups.op_neg(self.group, e) for e in self.elems))

    def intersect(self, other: "GSet") -> "GSet":
        _require_same_group(self, other)
        return GSet(self.group, self._set & other._set)

    def union(self, other: "GSet") -> "GSet":
        _require_same_group(self, other)
        return GSet(self.group, self._set | other._set)

    def issubset(self, other: "GSet") -> bool:
        _require_same_group(self, other)
        return self._set <= other._set


def _require_same_group(a: GSet, b: GSet) -> None:
    if a.group != b.group:
        raise groups.GroupError(f"operands live in different groups: {a.group} vs {b.group}")


def full_group(g: GroupSpec) -> GSet:
    if not g.is_cyclic:
        raise groups.GroupError("the lattice is not a finite set")
    return GSet(g, groups.enumerate_elements(g))


def gset(group: GroupSpec, elems: Iterable) -> GSet:
    return GSet(group, elems)


def zset(elems: Iterable[int]) -> GSet:
    """Convenience: a subset of the 1-dimensional integer lattice."""
    return GSet(groups.lattice(1), elems)


def write_set(a: GSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_set(a))


def dumps_set(a: GSet) -> str:
    lines = [f"group: {groups.format_group(a.group)}"]
    lines.extend(groups.format_elem(e) for e in a.elems)
    return "\n".join(lines) + "\n"


def read_set(path) -> GSet:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_set(fh.read())


def loads_set(text: str) -> GSet:
    lines = text.splitlines()
    if not lines:
        raise SetFileError("empty set file", 1)
    head = lines[0].strip()
    if not head.startswith("group:"):
        raise SetFileError("first line must be 'group: <literal>'", 1)
    try:
        g = groups.parse_group(head[len("group:"):])
    except groups.GroupError as exc:
        raise SetFileError(str(exc), 1) from None
    elems = []
    for i, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            elems.append(groups.parse_elem(g, line))
        except groups.GroupError as exc:
            raise SetFileError(str(exc), i, _bad_column(raw)) from None
    return GSet(g, elems)


def _bad_column(raw: str) -> int:
    """1-based offset of the first coordinate token that fails to parse."""
    offset = len(raw) - len(raw.lstrip())
    for piece in raw.strip().split(","):
        try:
            int(piece)
        except ValueError:
            return offset + 1
        offset += len(piece) + 1
    return 1
