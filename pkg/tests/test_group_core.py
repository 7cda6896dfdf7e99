import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdlattice import constructions as cons
from cdlattice import group_core as gc
from cdlattice.group_core import CapExceededError, CayleyGroup, GroupError, SubgroupSet

from conftest import brute_subgroups, matrix_group

SMALL = {
    "C12": (lambda: cons.cyclic(12), 6),
    "S3": (cons.symmetric3, 6),
    "D8": (lambda: cons.dihedral(8), 10),
    "Q8": (lambda: cons.quaternion(8), 6),
    "D16": (lambda: cons.dihedral(16), 19),
    "Q16": (lambda: cons.quaternion(16), 11),
    "UT3(3)": (lambda: matrix_group(3), 19),
}


@pytest.mark.parametrize("name", sorted(SMALL))
def test_subgroup_counts_match_oracle(name):
    build, count = SMALL[name]
    g = build()
    subs = gc.all_subgroups(g)
    got = {frozenset(h.elements()) for h in subs}
    assert len(subs) == len(got) == count
    assert got == set(brute_subgroups(g, 2))


@pytest.mark.parametrize("kind,count", [("plus", 110), ("minus", 78)])
def test_extraspecial_32_subgroups(kind, count):
    g = cons.extraspecial(2, 2, kind)
    subs = {frozenset(h.elements()) for h in gc.all_subgroups(g)}
    assert subs == set(brute_subgroups(g, 3))
    assert len(subs) == count


def test_bad_tables_name_the_row():
    with pytest.raises(GroupError, match="row 1"):
        CayleyGroup([[0, 1], [1, 1]])
    with pytest.raises(GroupError, match="column 0"):
        CayleyGroup([[0, 1], [0, 1]])
    with pytest.raises(GroupError):
        CayleyGroup([[0, 1], [1, 2]])
    with pytest.raises(GroupError):
        CayleyGroup([])


def test_non_associative_latin_square():
    # a Latin square with identity 0 that is not associative
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(GroupError, match="associativity"):
        CayleyGroup(t)


def test_cap():
    with pytest.raises(CapExceededError):
        gc.all_subgroups(cons.cyclic(200))
    assert len(gc.all_subgroups(cons.cyclic(200), cap=256)) == 12


def test_d8_structure(d8):
    z = gc.center(d8)
    assert z.order == 2 and z.elements() == [0, 2]
    assert gc.commutator_subgroup(d8) == z
    assert gc.nilpotency_class(d8) == 2
    assert not gc.is_abelian(d8.whole())
    r = gc.generate(d8, [1])
    assert r.order == 4 and gc.is_normal(r)
    assert gc.centralizer(d8, r) == r
    assert d8.element_order(1) == 4
    assert gc.lcm_of_orders(d8) == 4


def test_s3_not_nilpotent(s3):
    assert gc.nilpotency_class(s3) is None
    assert gc.center(s3).order == 1


def test_quotients(d8, q8):
    for g in (d8, q8):
        z = gc.center(g)
        q, coset = gc.quotient(g, z)
        assert q.order == 4
        assert gc.is_elementary_abelian(q.whole())
        assert gc.quotient_is_elementary_abelian(g.whole(), z)
    with pytest.raises(GroupError):
        gc.quotient(d8, gc.generate(d8, [d8.order // 2]))


def test_elementary_abelian():
    e = cons.elementary_abelian(2, 3)
    assert e.order == 8 and gc.is_elementary_abelian(e.whole())
    assert not gc.is_elementary_abelian(cons.cyclic(4).whole())


def test_central_product_orders(d8, q8):
    assert cons.extraspecial(2, 2, "plus").order == 32
    g = gc.central_product([d8, d8, d8], [[0, 2]] * 3)
    assert g.order == 128
    assert gc.center(g).order == 2


def test_central_product_rejects_non_central(d8):
    with pytest.raises(GroupError):
        gc.central_product([d8, d8], [[0, 2], [0, 4]])


def test_induced_group(d8):
    r = gc.generate(d8, [1])
    sub, els = gc.induced_group(r)
    assert sub.order == 4 and sorted(els) == r.elements()
    assert gc.is_abelian(sub.whole())


def test_direct_product():
    g = gc.direct_product(cons.cyclic(2), cons.cyclic(3))
    assert g.order == 6 and gc.is_abelian(g.whole())
    assert max(g.element_order(x) for x in range(6)) == 6


def test_elements_of_order_dividing_power():
    g = cons.cyclic(12)
    assert gc.indices_of(gc.elements_of_order_dividing_power(g, 2)) == [0, 3, 6, 9]


# ---------------------------------------------------------------- properties

GROUPS = [cons.dihedral(8), cons.quaternion(8), cons.symmetric3(), cons.cyclic(12), matrix_group(3), cons.dihedral(12)]
SUBS = [gc.all_subgroups(g) for g in GROUPS]


@st.composite
def group_and_subgroups(draw, k=2):
    i = draw(st.integers(0, len(GROUPS) - 1))
    return GROUPS[i], [draw(st.sampled_from(SUBS[i])) for _ in range(k)]


@settings(max_examples=200, deadline=None)
@given(group_and_subgroups())
def test_centralizer_reverses_inclusion(data):
    g, (h, k) = data
    if h <= k:
        assert gc.centralizer(g, k) <= gc.centralizer(g, h)
    c = gc.centralizer(g, h)
    assert h <= gc.centralizer(g, c)
    assert gc.centralizer(g, gc.centralizer(g, c)) == c


@settings(max_examples=200, deadline=None)
@given(group_and_subgroups())
def test_join_meet_and_lagrange(data):
    g, (h, k) = data
    j, m = h.join(k), h & k
    assert j.is_closed() and m.is_closed()
    assert g.order % h.order == 0
    assert h <= j and k <= j and m <= h and m <= k
    assert gc.generate(g, h.elements()) == h
    assert gc.generate(g, gc.small_generating_set(h)) == h
    # |HK| = |H||K|/|H n K|
    assert bin(gc.product_set(h, k)).count("1") * m.order == h.order * k.order


@settings(max_examples=100, deadline=None)
@given(st.integers(0, len(GROUPS) - 1), st.data())
def test_commutator_identities(i, data):
    g = GROUPS[i]
    a = data.draw(st.integers(0, g.order - 1))
    b = data.draw(st.integers(0, g.order - 1))
    c = g.commutator(a, b)
    # a b = b a [a, b]
    assert g.mul(a, b) == g.mul(g.mul(b, a), c)
    assert g.commutator(b, a) == g.inverse[c]
