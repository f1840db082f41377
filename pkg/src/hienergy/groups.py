"""Ambient abelian groups: finite products of cyclic groups and integer lattices.

Elements are coordinate tuples.  For a cyclic product Z/n_1 x ... x Z/n_d
coordinates are kept reduced into [0, n_i); for the lattice Z^d they are
arbitrary integers.  The dual of a cyclic product is identified with the
group itself through the pairing xi.x = sum_i xi_i x_i / n_i.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

Elem = tuple[int, ...]

CYCLIC = "cyclic"
LATTICE = "lattice"


class GroupError(ValueError):
    """Malformed group description or mismatched operands."""


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    moduli: tuple[int, ...] = ()
    dim: int = 0

    @property
    def order(self) -> int | None:
        """|G| for a cyclic product, None for a lattice."""
        if self.kind == CYCLIC:
            return math.prod(self.moduli)
        return None

    @property
    def is_cyclic(self) -> bool:
        return self.kind == CYCLIC

    def __str__(self) -> str:
        return format_group(self)


def make_group(kind: str, moduli: Iterable[int] = (), dim: int = 0) -> GroupSpec:
    if kind == CYCLIC:
        mods = tuple(int(n) for n in moduli)
        if not mods:
            raise GroupError("cyclic product needs at least one modulus")
        if any(n < 2 for n in mods):
            raise GroupError(f"moduli must all be >= 2, got {mods}")
        return GroupSpec(CYCLIC, mods, len(mods))
    if kind == LATTICE:
        if dim < 1:
            raise GroupError(f"lattice dimension must be >= 1, got {dim}")
        return GroupSpec(LATTICE, (), dim)
    raise GroupError(f"unknown group kind {kind!r}")


def cyclic(*moduli: int) -> GroupSpec:
    return make_group(CYCLIC, moduli)


def lattice(dim: int = 1) -> GroupSpec:
    return make_group(LATTICE, dim=dim)


def parse_group(text: str) -> GroupSpec:
    """Parse a group literal: ``Z``, ``Z^3``, ``Z/12`` or ``Z/4xZ/2``."""
    s = text.strip()
    if s == "Z":
        return lattice(1)
    if s.startswith("Z^"):
        try:
            return lattice(int(s[2:]))
        except ValueError:
            raise GroupError(f"bad lattice literal {text!r}") from None
    parts = s.split("x")
    moduli = []
    for part in parts:
        part = part.strip()
        if not part.startswith("Z/"):
            raise GroupError(f"bad group literal {text!r}")
        try:
            moduli.append(int(part[2:]))
        except ValueError:
            raise GroupError(f"bad group literal {text!r}") from None
    return cyclic(*moduli)


def format_group(g: GroupSpec) -> str:
    if g.kind == LATTICE:
        return "Z" if g.dim == 1 else f"Z^{g.dim}"
    return "x".join(f"Z/{n}" for n in g.moduli)


def as_elem(g: GroupSpec, x) -> Elem:
    """Normalize ``x`` (int or coordinate sequence) to a reduced element."""
    if isinstance(x, int):
        coords = (x,)
    else:
        coords = tuple(int(c) for c in x)
    if len(coords) != g.dim:
        raise GroupError(f"element {x!r} has {len(coords)} coordinates, group {g} needs {g.dim}")
    if g.kind == CYCLIC:
        return tuple(c % n for c, n in zip(coords, g.moduli))
    return coords


def op_add(g: GroupSpec, x: Elem, y: Elem) -> Elem:
    if len(x) != g.dim or len(y) != g.dim:
        raise GroupError("dimension mismatch in op_add")
    if g.kind == CYCLIC:
        return tuple((a + b) % n for a, b, n in zip(x, y, g.moduli))
    return tuple(a + b for a, b in zip(x, y))


def op_neg(g: GroupSpec, x: Elem) -> Elem:
    if len(x) != g.dim:
        raise GroupError("dimension mismatch in op_neg")
    if g.kind == CYCLIC:
        return tuple((-a) % n for a, n in zip(x, g.moduli))
    return tuple(-a for a in x)


def op_sub(g: GroupSpec, x: Elem, y: Elem) -> Elem:
    return op_add(g, x, op_neg(g, y))


def op_scale(g: GroupSpec, c: int, x: Elem) -> Elem:
    if g.kind == CYCLIC:
        return tuple((c * a) % n for a, n in zip(x, g.moduli))
    return tuple(c * a for a in x)


def zero(g: GroupSpec) -> Elem:
    return (0,) * g.dim


def character(g: GroupSpec, xi: Elem, x: Elem) -> complex:
    """e(-xi.x) where xi.x = sum_i xi_i x_i / n_i; unit-modulus complex."""
    if g.kind != CYCLIC:
        raise GroupError("characters are only enumerable on cyclic products")
    phase = sum((a * b) / n for a, b, n in zip(xi, x, g.moduli))
    return cmath.exp(-2j * math.pi * phase)


def enumerate_elements(g: GroupSpec) -> Iterator[Elem]:
    """All elements of a cyclic product in lexicographic order."""
    if g.kind != CYCLIC:
        raise GroupError("cannot enumerate an infinite lattice")
    return itertools.product(*(range(n) for n in g.moduli))


def flat_index(g: GroupSpec, x: Elem) -> int:
    """Mixed-radix rank of a reduced element; matches enumeration order."""
    idx = 0
    for c, n in zip(x, g.moduli):
        idx = idx * n + c
    return idx


def from_flat(g: GroupSpec, idx: int) -> Elem:
    coords = []
    for n in reversed(g.moduli):
        coords.append(idx % n)
        idx //= n
    return tuple(reversed(coords))


def format_elem(x: Elem) -> str:
    return ",".join(str(c) for c in x)


def parse_elem(g: GroupSpec, text: str) -> Elem:
    try:
        coords = tuple(int(c) for c in text.strip().split(","))
    except ValueError:
        raise GroupError(f"bad element literal {text!r}") from None
    return as_elem(g, coords)
