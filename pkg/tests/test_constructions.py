import itertools

import pytest

from cdlattice import class2 as c2
from cdlattice import constructions as cons
from cdlattice import group_core as gc
from cdlattice.class2 import cd_lattice_class2, commutator
from cdlattice.constructions import RecipeError, U_phi, build, factor, lifts, phi_elements, underlying_subspace, v_phi
from cdlattice.fp_linalg import Subspace, dot_perp, enumerate_subspaces
from cdlattice.lattice import find_isomorphism, from_subgroup_family, subspace_lattice

from conftest import matrix_group


def dot(u, v, p):
    return sum(a * b for a, b in zip(u, v)) % p


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (2, 3)])
def test_commuting_criterion(p, n):
    recipe = build("paper_Gn", p=p, n=n)
    pres = recipe.product
    vecs = list(itertools.product(range(p), repeat=n))
    for v, u in itertools.product(vecs, repeat=2):
        gv, gu = phi_elements(recipe, v), phi_elements(recipe, u)
        commute = all(commutator(pres, a, b) == pres.identity() for a in gv for b in gu)
        assert commute == (dot(v, u, p) == 0)


def test_lifts():
    assert lifts(3, 2, [1, 2]) == [(1, 0, 0, 2, 0, 0), (0, 1, 0, 0, 2, 0), (0, 0, 1, 0, 0, 2)]
    with pytest.raises(RecipeError):
        lifts(3, 2, [1])


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (2, 3)])
def test_U_phi_is_lattice_embedding(p, n):
    recipe = build("paper_Gn", p=p, n=n)
    subs = list(enumerate_subspaces(p, n))
    images = [U_phi(recipe, u) for u in subs]
    assert len(set(images)) == len(subs)
    for u, img in zip(subs, images):
        assert img.order_exponent == 3 + 3 * u.dim
        assert underlying_subspace(recipe, img) == u
        assert c2.centralizer(recipe.product, img) == U_phi(recipe, dot_perp(u))
    for (u, a), (v, b) in itertools.combinations(zip(subs, images), 2):
        assert (u <= v) == (a <= b)
        assert U_phi(recipe, u + v) == a.join(b)
        assert U_phi(recipe, u & v) == (a & b)


def test_v_phi_and_factor():
    recipe = build("paper_Gn", p=3, n=2)
    assert factor(recipe, 0) == v_phi(recipe, [1, 0])
    assert factor(recipe, 1).order == 3**6
    assert underlying_subspace(recipe, c2.CentralSubgroup(recipe.product, Subspace.span(3, 6, [[1, 0, 0, 0, 0, 0]]))) is None


def test_factor_is_a_copy_of_P():
    pres = cons.paper_Gn(2, 2)
    f = factor(pres, 1)
    sub = pres.restrict(f.w)
    assert sub.r == 3
    assert (sub.form == cons.paper_P(2).form).all()


@pytest.mark.parametrize("p", [3, 5])
def test_odd_extraspecial_matches_matrix_group(p):
    # CD of the collected extraspecial group equals CD of the unitriangular matrix group
    mine = cons.extraspecial(p, 1, "plus")
    oracle = matrix_group(p)
    from cdlattice.cd_engine import cd_lattice

    a, b = cd_lattice(mine), cd_lattice(oracle)
    assert a.max_measure == b.max_measure == p**4
    assert sorted(m.order for m in a.members) == sorted(m.order for m in b.members)
    assert gc.lcm_of_orders(mine) == gc.lcm_of_orders(oracle) == p


def test_extraspecial_invariants():
    for p, kind, exp in [(2, "plus", 4), (2, "minus", 4), (3, "plus", 3), (3, "minus", 9)]:
        g = cons.extraspecial(p, 1, kind)
        assert g.order == p**3 and gc.center(g).order == p
        assert gc.lcm_of_orders(g) == exp
    for kind, involutions in [("plus", 19), ("minus", 11)]:
        g = cons.extraspecial(2, 2, kind)
        assert sum(g.element_order(x) == 2 for x in range(32)) == involutions


def test_extraspecial_class2_agrees_with_central_product():
    from cdlattice.cd_engine import cd_lattice

    for kind in ("plus", "minus"):
        pres = cons.extraspecial_presentation(2, 2, kind)
        g, _ = c2.to_cayley(pres)
        direct = cons.extraspecial(2, 2, kind)
        inv = lambda h: sum(h.element_order(x) == 2 for x in range(h.order))
        assert inv(g) == inv(direct)
        assert len(gc.all_subgroups(g)) == len(gc.all_subgroups(direct))
        assert len(cd_lattice_class2(pres)) == len(cd_lattice(direct)) == 67


def test_builder_registry():
    assert build("dihedral", n=8).product.order == 8
    assert build("paper_Gn", p=2, n=2).label == "paper_Gn(p=2,n=2)"
    with pytest.raises(RecipeError):
        build("nope")
    with pytest.raises(RecipeError):
        build("cyclic", m=3)
    with pytest.raises(RecipeError):
        build("dihedral", n=7)
    with pytest.raises(RecipeError):
        build("quaternion", n=12)
    with pytest.raises(RecipeError):
        build("paper_Gn", p=4, n=1)


def test_small_builders():
    assert cons.cyclic(1).order == 1
    assert cons.elementary_abelian(3, 2).order == 9
    assert cons.symmetric3().order == 6
    assert gc.center(cons.quaternion(16)).order == 2


def test_cd_of_Gn_is_subspace_lattice():
    recipe = build("paper_Gn", p=3, n=2)
    cd = cd_lattice_class2(recipe.product)
    lat = from_subgroup_family(cd.subgroups)
    assert find_isomorphism(lat, subspace_lattice(3, 2)) is not None
