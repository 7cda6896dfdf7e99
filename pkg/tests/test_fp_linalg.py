import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdlattice.fp_linalg import (
    FieldMismatchError,
    FpMatrix,
    Subspace,
    dot_perp,
    enumerate_subspaces,
    gaussian_binomial,
    is_prime,
    nullspace,
    rref,
    scalar_pair_solution_dim,
    scalar_pair_solutions,
    split_pair,
    subspace_count,
    subspace_intersection,
    subspace_sum,
)


def span_set(p, n, vecs):
    """All vectors of the span, by brute linear combination."""
    vecs = list(vecs)
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(vecs)):
        out.add(tuple(sum(c * v[j] for c, v in zip(coeffs, vecs)) % p for j in range(n)))
    return frozenset(out)


def brute_subspace_family(p, n):
    """Every subspace of F_p^n as a set of vectors: spans of all tuples of <= n vectors."""
    space = list(itertools.product(range(p), repeat=n))
    fam = set()
    for k in range(n + 1):
        for vecs in itertools.combinations(space, k):
            fam.add(span_set(p, n, vecs))
    return fam


@pytest.mark.parametrize(
    "n,k,p,expected",
    [(2, 1, 2, 3), (2, 1, 3, 4), (3, 1, 2, 7), (4, 2, 2, 35), (4, 1, 2, 15), (3, 1, 3, 13), (5, 2, 2, 155), (0, 0, 7, 1)],
)
def test_gaussian_binomial_values(n, k, p, expected):
    assert gaussian_binomial(n, k, p) == expected


def test_subspace_counts():
    assert subspace_count(4, 2) == 1 + 15 + 35 + 15 + 1 == 67
    assert subspace_count(2, 3) == 6
    assert subspace_count(3, 2) == 16
    # F_2^9 drives the largest scan
    assert subspace_count(9, 2) == 8_283_458


def test_gaussian_binomial_huge_is_exact():
    # Python integers are unbounded; check the symmetry on a value far beyond 128 bits
    big = gaussian_binomial(60, 30, 7)
    assert big == gaussian_binomial(60, 30, 7) and big > 2**1000


def test_gaussian_binomial_rejects_bad_k():
    with pytest.raises(ValueError):
        gaussian_binomial(3, 4, 2)
    with pytest.raises(ValueError):
        gaussian_binomial(3, -1, 2)


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (3, 2), (3, 3), (5, 2)])
def test_enumeration_matches_brute_family(p, n):
    got = [frozenset(s.vectors()) for s in enumerate_subspaces(p, n)]
    assert len(got) == len(set(got)) == subspace_count(n, p)
    assert set(got) == brute_subspace_family(p, n)


def test_enumeration_by_dimension():
    for k in range(5):
        subs = list(enumerate_subspaces(2, 4, k))
        assert len(subs) == gaussian_binomial(4, k, 2)
        assert all(s.dim == k for s in subs)


def test_is_prime():
    assert [q for q in range(30) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_non_prime_field_rejected():
    with pytest.raises(ValueError):
        list(enumerate_subspaces(4, 2))


def test_span_length_mismatch():
    with pytest.raises(FieldMismatchError):
        Subspace.span(2, 3, [[1, 0]])


def test_non_rref_basis_rejected():
    with pytest.raises(ValueError):
        Subspace(2, 2, ((1, 1), (0, 1)))


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatchError):
        Subspace.full(2, 2) + Subspace.full(3, 2)


def test_rref_and_rank():
    m = FpMatrix.from_rows(3, [[1, 2, 0], [2, 1, 0], [0, 0, 2]])
    assert m.rank() == 2
    assert rref(m).entries[0] == (1, 2, 0)


def test_nullspace_example():
    m = FpMatrix.from_rows(2, [[1, 1, 0], [0, 1, 1]])
    assert nullspace(m) == Subspace.span(2, 3, [[1, 1, 1]])


def test_matrix_arithmetic():
    a = FpMatrix.from_rows(5, [[1, 2], [3, 4]])
    i = FpMatrix.identity(5, 2)
    assert a @ i == a
    assert (a + a.scale(4)) == FpMatrix.zeros(5, 2, 2)
    assert a.transpose().transpose() == a


def brute_scalar_dim(n, p):
    """log_p of the number of (A, B) with A Z = Z B for all alternating Z, by exhaustion."""
    zs = []
    for i, j in itertools.combinations(range(n), 2):
        z = np.zeros((n, n), dtype=np.int64)
        z[i, j], z[j, i] = 1, -1
        zs.append(z)
    mats = np.array(list(itertools.product(range(p), repeat=n * n)), dtype=np.int64).reshape(-1, n, n)
    count = 0
    for a in mats:
        az = [(a @ z) % p for z in zs]
        ok = np.ones(len(mats), dtype=bool)
        for zq, azq in zip(zs, az):
            ok &= ((zq @ mats) % p == azq).all(axis=(1, 2))
        count += int(ok.sum())
    d = 0
    while count > 1:
        assert count % p == 0
        count //= p
        d += 1
    return d


@pytest.mark.parametrize("n,p", [(2, 2), (2, 3), (3, 2)])
def test_scalar_pair_dimension_matches_exhaustion(n, p):
    assert scalar_pair_solution_dim(n, p) == brute_scalar_dim(n, p)


@pytest.mark.parametrize("n,p", [(n, p) for n in (3, 4, 5) for p in (2, 3, 5)])
def test_scalar_pair_solution_is_identity_pair(n, p):
    sol = scalar_pair_solutions(n, p)
    assert sol.dim == 1
    a, b = split_pair(p, n, sol.basis[0])
    c = a.entries[0][0]
    assert a == FpMatrix.identity(p, n).scale(c) and b == a


def test_scalar_pair_escape_case():
    assert scalar_pair_solution_dim(2, 2) == 4
    assert scalar_pair_solution_dim(2, 5) == 4


# ---------------------------------------------------------------- properties

@st.composite
def subspaces(draw, p=None, n=None):
    p = p or draw(st.sampled_from([2, 3, 5]))
    n = n if n is not None else draw(st.integers(1, 5))
    k = draw(st.integers(0, n + 1))
    vecs = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=k, max_size=k))
    return Subspace.span(p, n, vecs)


@st.composite
def subspace_pairs(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    n = draw(st.integers(1, 5))
    return draw(subspaces(p, n)), draw(subspaces(p, n)), draw(subspaces(p, n))


@settings(max_examples=150, deadline=None)
@given(subspaces())
def test_perp_dimension_and_involution(u):
    perp = dot_perp(u)
    assert u.dim + perp.dim == u.ambient_dim
    assert dot_perp(perp) == u


@settings(max_examples=150, deadline=None)
@given(subspaces(), st.randoms(use_true_random=False))
def test_span_is_canonical(u, rnd):
    # a shuffled, rescaled and redundant spanning set gives the same basis
    p = u.p
    vecs = [tuple((c * x) % p for x in v) for v in u.basis for c in [rnd.randrange(1, p)]]
    vecs += [tuple((a + b) % p for a, b in zip(vecs[0], vecs[-1]))] if vecs else []
    rnd.shuffle(vecs)
    assert Subspace.span(p, u.ambient_dim, vecs) == u


@settings(max_examples=150, deadline=None)
@given(subspace_pairs())
def test_lattice_identities(triple):
    u, v, w = triple
    s, i = subspace_sum(u, v), subspace_intersection(u, v)
    assert s == u + v and i == (u & v)
    assert u <= s and v <= s and i <= u and i <= v
    assert s.dim + i.dim == u.dim + v.dim
    assert dot_perp(s) == dot_perp(u) & dot_perp(v)
    assert frozenset(i.vectors()) == frozenset(u.vectors()) & frozenset(v.vectors())
    if u <= w:
        assert u + (v & w) == (u + v) & w


@settings(max_examples=100, deadline=None)
@given(subspaces())
def test_membership_matches_vectors(u):
    vecs = set(u.vectors())
    assert len(vecs) == u.p**u.dim
    for v in itertools.islice(itertools.product(range(u.p), repeat=u.ambient_dim), 64):
        assert (v in u) == (v in vecs)
