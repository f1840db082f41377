import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hienergy import groups
from hienergy.groups import GroupError, character, cyclic, lattice


def test_make_group_examples():
    g = cyclic(12)
    assert g.order == 12 and g.dim == 1
    g2 = cyclic(4, 2)
    assert g2.order == 8
    z = lattice(1)
    assert z.order is None


def test_make_group_rejects_bad_moduli():
    with pytest.raises(GroupError):
        groups.make_group("cyclic", [])
    with pytest.raises(GroupError):
        cyclic(1)
    with pytest.raises(GroupError):
        lattice(0)


def test_literal_round_trip():
    for text in ["Z", "Z^3", "Z/12", "Z/4xZ/2", "Z/2xZ/3xZ/5"]:
        g = groups.parse_group(text)
        assert groups.format_group(g) == text
    with pytest.raises(GroupError):
        groups.parse_group("Q/12")


def test_add_neg_examples():
    g5 = cyclic(5)
    assert groups.op_add(g5, (3,), (4,)) == (2,)
    z = lattice(1)
    assert groups.op_add(z, (3,), (4,)) == (7,)
    g42 = cyclic(4, 2)
    assert groups.op_add(g42, (3, 1), (1, 1)) == (0, 0)
    with pytest.raises(GroupError):
        groups.op_add(g5, (1,), (1, 2))


def test_character_examples():
    g4 = cyclic(4)
    assert character(g4, (1,), (2,)) == pytest.approx(-1)
    assert character(g4, (0,), (3,)) == pytest.approx(1)
    g5 = cyclic(5)
    assert character(g5, (1,), (1,)) == pytest.approx(cmath.exp(-2j * math.pi / 5))
    with pytest.raises(GroupError):
        character(lattice(1), (1,), (1,))


def test_enumeration_order():
    assert list(groups.enumerate_elements(cyclic(3))) == [(0,), (1,), (2,)]
    assert list(groups.enumerate_elements(cyclic(2, 2))) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_flat_index_round_trip():
    g = cyclic(4, 3, 2)
    for i, x in enumerate(groups.enumerate_elements(g)):
        assert groups.flat_index(g, x) == i
        assert groups.from_flat(g, i) == x


small_groups = st.sampled_from([cyclic(5), cyclic(8), cyclic(4, 2), cyclic(3, 3)])


@st.composite
def group_and_elems(draw, count):
    g = draw(small_groups)
    xs = [tuple(draw(st.integers(0, n - 1)) for n in g.moduli) for _ in range(count)]
    return g, xs


@given(group_and_elems(3))
def test_add_associative_commutative(data):
    g, (x, y, z) = data
    assert groups.op_add(g, x, y) == groups.op_add(g, y, x)
    assert groups.op_add(g, groups.op_add(g, x, y), z) == \
        groups.op_add(g, x, groups.op_add(g, y, z))
    assert groups.op_add(g, groups.op_neg(g, x), x) == groups.zero(g)


@given(group_and_elems(3))
def test_character_multiplicative(data):
    g, (xi, x, y) = data
    lhs = character(g, xi, groups.op_add(g, x, y))
    rhs = character(g, xi, x) * character(g, xi, y)
    assert abs(lhs - rhs) < 1e-12


@settings(max_examples=20)
@given(small_groups)
def test_character_orthogonality(g):
    n = g.order
    for xi in groups.enumerate_elements(g):
        total = sum(character(g, xi, x) for x in groups.enumerate_elements(g))
        expected = n if xi == groups.zero(g) else 0
        assert abs(total - expected) <= 1e-9 * n
