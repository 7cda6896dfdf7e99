"""Exact linear algebra over a prime field F_p.

Matrices are immutable tuples of residue rows.  Subspaces are always kept in
reduced row echelon form, so two :class:`Subspace` values compare equal exactly
when they span the same set of vectors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

Vector = tuple[int, ...]


class FieldMismatchError(ValueError):
    """Operands live over different primes or ambient dimensions."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"modulus must be prime, got {p!r}")


@dataclass(frozen=True)
class FpMatrix:
    p: int
    rows: int
    cols: int
    entries: tuple[Vector, ...]

    def __post_init__(self):
        _check_prime(self.p)
        if len(self.entries) != self.rows:
            raise ValueError("row count does not match entries")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")
            for x in row:
                if not 0 <= x < self.p:
                    raise ValueError(f"entry {x} not reduced mod {self.p}")

    @classmethod
    def from_rows(cls, p: int, rows: Iterable[Sequence[int]], cols: int | None = None) -> "FpMatrix":
        entries = tuple(tuple(int(x) % p for x in row) for row in rows)
        if cols is None:
            if not entries:
                raise ValueError("cols required for an empty matrix")
            cols = len(entries[0])
        return cls(p, len(entries), cols, entries)

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls.from_rows(p, [[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls.from_rows(p, [[0] * cols for _ in range(rows)], cols)

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if self.p != other.p or self.cols != other.rows:
            raise FieldMismatchError("incompatible matrix product")
        p = self.p
        cols_t = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = [[sum(a * b for a, b in zip(row, col)) % p for col in cols_t] for row in self.entries]
        return FpMatrix.from_rows(p, out, other.cols)

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        if (self.p, self.rows, self.cols) != (other.p, other.rows, other.cols):
            raise FieldMismatchError("incompatible matrix sum")
        return FpMatrix.from_rows(
            self.p,
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
            self.cols,
        )

    def scale(self, c: int) -> "FpMatrix":
        return FpMatrix.from_rows(self.p, [[c * a for a in r] for r in self.entries], self.cols)

    def transpose(self) -> "FpMatrix":
        return FpMatrix.from_rows(self.p, list(zip(*self.entries)) if self.rows else [], self.rows)

    def rank(self) -> int:
        return rref(self).rows


def _reduce_rows(rows: list[list[int]], p: int, ncols: int) -> list[list[int]]:
    """Row-reduce ``rows`` in place to RREF and return the nonzero rows."""
    pivot_row = 0
    nrows = len(rows)
    for col in range(ncols):
        if pivot_row == nrows:
            break
        sel = None
        for i in range(pivot_row, nrows):
            if rows[i][col]:
                sel = i
                break
        if sel is None:
            continue
        rows[pivot_row], rows[sel] = rows[sel], rows[pivot_row]
        prow = rows[pivot_row]
        inv = pow(prow[col], -1, p)
        if inv != 1:
            for j in range(col, ncols):
                prow[j] = prow[j] * inv % p
        for i in range(nrows):
            if i != pivot_row and rows[i][col]:
                f = rows[i][col]
                ri = rows[i]
                for j in range(col, ncols):
                    if prow[j]:
                        ri[j] = (ri[j] - f * prow[j]) % p
        pivot_row += 1
    return rows[:pivot_row]


def rref(m: FpMatrix) -> FpMatrix:
    """Reduced row echelon form of ``m`` with zero rows dropped."""
    rows = _reduce_rows([list(r) for r in m.entries], m.p, m.cols)
    return FpMatrix(m.p, len(rows), m.cols, tuple(tuple(r) for r in rows))


def pivots_of(rows: Sequence[Sequence[int]]) -> tuple[int, ...]:
    out = []
    for r in rows:
        for j, x in enumerate(r):
            if x:
                out.append(j)
                break
    return tuple(out)


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^n stored by its canonical RREF basis."""

    p: int
    ambient_dim: int
    basis: tuple[Vector, ...]

    def __post_init__(self):
        if len(self.basis) > self.ambient_dim:
            raise ValueError("more basis rows than ambient dimension")
        canon = _reduce_rows([list(r) for r in self.basis], self.p, self.ambient_dim)
        if tuple(tuple(r) for r in canon) != self.basis:
            raise ValueError("basis is not in reduced row echelon form")

    @classmethod
    def span(cls, p: int, n: int, vectors: Iterable[Sequence[int]]) -> "Subspace":
        rows = [[int(x) % p for x in v] for v in vectors]
        for r in rows:
            if len(r) != n:
                raise FieldMismatchError(f"vector of length {len(r)} in F_{p}^{n}")
        canon = _reduce_rows(rows, p, n)
        return cls(p, n, tuple(tuple(r) for r in canon))

    @classmethod
    def zero(cls, p: int, n: int) -> "Subspace":
        return cls(p, n, ())

    @classmethod
    def full(cls, p: int, n: int) -> "Subspace":
        return cls(p, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return pivots_of(self.basis)

    def matrix(self) -> FpMatrix:
        return FpMatrix(self.p, self.dim, self.ambient_dim, self.basis)

    def __contains__(self, v: Sequence[int]) -> bool:
        # reduce v against the RREF basis; membership iff it vanishes
        p = self.p
        w = [int(x) % p for x in v]
        for row, piv in zip(self.basis, self.pivots):
            c = w[piv]
            if c:
                for j in range(piv, self.ambient_dim):
                    if row[j]:
                        w[j] = (w[j] - c * row[j]) % p
        return not any(w)

    def vectors(self) -> Iterator[Vector]:
        """Every vector of the subspace, in coefficient order."""
        p, n = self.p, self.ambient_dim
        for coeffs in itertools.product(range(p), repeat=self.dim):
            v = [0] * n
            for c, row in zip(coeffs, self.basis):
                if c:
                    for j in range(n):
                        v[j] = (v[j] + c * row[j]) % p
            yield tuple(v)

    def _check_compatible(self, other: "Subspace") -> None:
        if self.p != other.p or self.ambient_dim != other.ambient_dim:
            raise FieldMismatchError(
                f"F_{self.p}^{self.ambient_dim} vs F_{other.p}^{other.ambient_dim}"
            )

    def __le__(self, other: "Subspace") -> bool:
        self._check_compatible(other)
        return self.dim <= other.dim and all(r in other for r in self.basis)

    def __lt__(self, other: "Subspace") -> bool:
        return self.dim < other.dim and self <= other

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return subspace_intersection(self, other)

    def sort_key(self) -> tuple:
        return (self.dim, self.basis)

    def __repr__(self) -> str:
        rows = ",".join("".join(map(str, r)) if self.p < 10 else str(r) for r in self.basis)
        return f"Subspace(F_{self.p}^{self.ambient_dim}; {rows or '0'})"


def nullspace(m: FpMatrix) -> Subspace:
    """Solutions of ``m @ v = 0`` as a canonical subspace of F_p^cols."""
    p, n = m.p, m.cols
    red = rref(m).entries
    piv = pivots_of(red)
    free = [j for j in range(n) if j not in set(piv)]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for row, pc in zip(red, piv):
            if row[f]:
                v[pc] = (-row[f]) % p
        basis.append(v)
    return Subspace.span(p, n, basis)


def dot_perp(u: Subspace) -> Subspace:
    """Orthogonal complement under the standard dot product."""
    if u.dim == 0:
        return Subspace.full(u.p, u.ambient_dim)
    return nullspace(u.matrix())


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    a._check_compatible(b)
    return Subspace.span(a.p, a.ambient_dim, a.basis + b.basis)


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    """a ∩ b as the solutions of both annihilator systems."""
    a._check_compatible(b)
    n = a.ambient_dim
    constraints = dot_perp(a).basis + dot_perp(b).basis
    if not constraints:
        return Subspace.full(a.p, n)
    return nullspace(FpMatrix(a.p, len(constraints), n, constraints))


def gaussian_binomial(n: int, k: int, p: int) -> int:
    """Number of k-dimensional subspaces of F_p^n (exact integer arithmetic)."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (k - i) - 1
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError("gaussian binomial did not divide exactly")
    return q


def subspace_count(n: int, p: int) -> int:
    return sum(gaussian_binomial(n, k, p) for k in range(n + 1))


def _free_positions(piv: Sequence[int], n: int) -> list[tuple[int, int]]:
    pset = set(piv)
    return [(i, j) for i, pc in enumerate(piv) for j in range(pc + 1, n) if j not in pset]


def enumerate_subspaces(p: int, n: int, k: int | None = None) -> Iterator[Subspace]:
    """Yield each subspace of F_p^n of dimension ``k`` (all dimensions if None).

    Walks pivot patterns in lexicographic order and fills the free RREF
    entries with every residue combination, so no subspace is produced twice.
    """
    _check_prime(p)
    dims = range(n + 1) if k is None else [k]
    for d in dims:
        if not 0 <= d <= n:
            raise ValueError(f"need 0 <= k <= n, got k={d}, n={n}")
        for piv in itertools.combinations(range(n), d):
            free = _free_positions(piv, n)
            for fill in itertools.product(range(p), repeat=len(free)):
                rows = [[0] * n for _ in range(d)]
                for i, pc in enumerate(piv):
                    rows[i][pc] = 1
                for (i, j), x in zip(free, fill):
                    rows[i][j] = x
                yield Subspace(p, n, tuple(tuple(r) for r in rows))


def scalar_pair_system(n: int, p: int) -> FpMatrix:
    """Linear constraints on (A, B) expressing A Z = Z B for every alternating Z.

    Unknowns are the entries of A then B, row-major, 2n^2 in total.  It is
    enough to impose the relation on the basis matrices E_ij - E_ji, i < j.
    """
    _check_prime(p)
    if n < 2:
        raise ValueError("n must be at least 2")
    nn = n * n
    rows = []

    def a_idx(r: int, c: int) -> int:
        return r * n + c

    def b_idx(r: int, c: int) -> int:
        return nn + r * n + c

    for i, j in itertools.combinations(range(n), 2):
        z = {(i, j): 1, (j, i): -1}
        for r in range(n):
            for c in range(n):
                row = [0] * (2 * nn)
                # (A Z)[r][c] = sum_k A[r][k] Z[k][c]
                for (zk, zc), val in z.items():
                    if zc == c:
                        row[a_idx(r, zk)] += val
                # (Z B)[r][c] = sum_k Z[r][k] B[k][c]
                for (zr, zk), val in z.items():
                    if zr == r:
                        row[b_idx(zk, c)] -= val
                rows.append([x % p for x in row])
    return FpMatrix.from_rows(p, rows, 2 * nn)


def scalar_pair_solutions(n: int, p: int) -> Subspace:
    return nullspace(scalar_pair_system(n, p))


def scalar_pair_solution_dim(n: int, p: int) -> int:
    return scalar_pair_solutions(n, p).dim


def split_pair(p: int, n: int, vec: Sequence[int]) -> tuple[FpMatrix, FpMatrix]:
    """Unpack a solution vector of :func:`scalar_pair_system` into (A, B)."""
    nn = n * n
    if len(vec) != 2 * nn:
        raise ValueError(f"expected {2 * nn} entries, got {len(vec)}")
    a = FpMatrix.from_rows(p, [vec[r * n:(r + 1) * n] for r in range(n)], n)
    b = FpMatrix.from_rows(p, [vec[nn + r * n:nn + (r + 1) * n] for r in range(n)], n)
    return a, b
