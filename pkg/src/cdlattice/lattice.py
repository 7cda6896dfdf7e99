"""Finite lattices: order tables, intervals, quasi-antichains, isomorphism search."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from .fp_linalg import Subspace, enumerate_subspaces

DEFAULT_ISO_BUDGET = 10_000


class LatticeError(ValueError):
    def __init__(self, message: str, witness: Any = None):
        super().__init__(message if witness is None else f"{message}: {witness!r}")
        self.witness = witness


class FiniteLattice:
    """A finite lattice given by its order relation.

    ``leq[i, j]`` is True iff element i <= element j.  Meets, joins, covers and
    the rank function are computed (and the lattice axioms checked) up front.
    """

    def __init__(self, leq, labels: Sequence[Any] | None = None):
        leq = np.array(leq, dtype=bool)
        n = leq.shape[0]
        if leq.shape != (n, n) or n == 0:
            raise LatticeError("order relation must be a non-empty square matrix")
        if not leq.diagonal().all():
            raise LatticeError("relation is not reflexive")
        anti = leq & leq.T & ~np.eye(n, dtype=bool)
        if anti.any():
            raise LatticeError("relation is not antisymmetric", tuple(int(x) for x in np.argwhere(anti)[0]))
        li = leq.astype(np.int64)
        if ((li @ li > 0) & ~leq).any():
            raise LatticeError("relation is not transitive")
        self.size = n
        self.leq = leq
        self.labels = list(labels) if labels is not None else list(range(n))
        if len(self.labels) != n:
            raise LatticeError("label count does not match size")
        bottoms = np.flatnonzero(leq.all(axis=1))
        tops = np.flatnonzero(leq.all(axis=0))
        if len(bottoms) != 1 or len(tops) != 1:
            raise LatticeError("no unique minimum and maximum")
        self.bottom, self.top = int(bottoms[0]), int(tops[0])
        self.meet_table = self._bound_table(leq)
        self.join_table = self._bound_table(leq.T)
        lt = leq & ~np.eye(n, dtype=bool)
        lti = lt.astype(np.int64)
        self.cover = lt & ~((lti @ lti) > 0)
        self.rank = self._ranks()

    @staticmethod
    def _bound_table(leq: np.ndarray) -> np.ndarray:
        # greatest common lower bound via the largest down-set among the common ones
        n = leq.shape[0]
        down = leq.sum(axis=0)
        out = np.empty((n, n), dtype=np.int64)
        for i in range(n):
            common = leq & leq[:, i:i + 1]
            score = np.where(common, down[:, None], -1)
            best = score.argmax(axis=0)
            if (common.sum(axis=0) == 0).any() or (down[best] != common.sum(axis=0)).any():
                j = int(np.flatnonzero(down[best] != common.sum(axis=0))[0])
                raise LatticeError("pair has no unique meet/join", (i, j))
            out[i] = best
        return out

    def _ranks(self) -> list[int]:
        order = sorted(range(self.size), key=lambda x: int(self.leq[:, x].sum()))
        rank = [0] * self.size
        for x in order:
            below = np.flatnonzero(self.cover[:, x])
            rank[x] = max((rank[int(y)] + 1 for y in below), default=0)
        return rank

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"FiniteLattice(size={self.size}, height={self.height})"

    def meet(self, a: int, b: int) -> int:
        return int(self.meet_table[a, b])

    def join(self, a: int, b: int) -> int:
        return int(self.join_table[a, b])

    @property
    def height(self) -> int:
        return self.rank[self.top]

    def covers(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in np.argwhere(self.cover)]

    def atoms(self) -> list[int]:
        return [int(x) for x in np.flatnonzero(self.cover[self.bottom])]

    def coatoms(self) -> list[int]:
        return [int(x) for x in np.flatnonzero(self.cover[:, self.top])]

    def up_degree(self, x: int) -> int:
        return int(self.cover[x].sum())

    def down_degree(self, x: int) -> int:
        return int(self.cover[:, x].sum())

    def signature(self, x: int) -> tuple[int, int, int, int, int]:
        """Isomorphism invariant of an element: rank, cover degrees, up/down-set sizes."""
        return (self.rank[x], self.down_degree(x), self.up_degree(x), int(self.leq[:, x].sum()), int(self.leq[x].sum()))

    def is_graded(self) -> bool:
        return all(self.rank[b] == self.rank[a] + 1 for a, b in self.covers())


def dual(l: FiniteLattice) -> FiniteLattice:
    return FiniteLattice(l.leq.T, l.labels)


def from_subgroup_family(members: Sequence[Any], leq: Callable[[Any, Any], bool] | None = None,
                         labels: Sequence[Any] | None = None, check_closed: bool = True) -> FiniteLattice:
    """Lattice of ``members`` ordered by inclusion.

    With ``check_closed`` the family must be a sublattice of the ambient
    subgroup (or subspace) lattice: members need ``join`` (or ``+``) and ``&``.
    """
    le = leq or (lambda a, b: a <= b)
    n = len(members)
    rel = [[le(members[i], members[j]) for j in range(n)] for i in range(n)]
    lat = FiniteLattice(rel, labels if labels is not None else list(members))
    if check_closed:
        index = {m: i for i, m in enumerate(members)}
        for i in range(n):
            for j in range(i + 1, n):
                a, b = members[i], members[j]
                jn = a.join(b) if hasattr(a, "join") else a + b
                if index.get(jn) != lat.join(i, j) or index.get(a & b) != lat.meet(i, j):
                    raise LatticeError("family is not closed under join and meet", (a, b))
    return lat


def subspace_lattice(p: int, n: int) -> FiniteLattice:
    """All subspaces of F_p^n ordered by containment."""
    subs: list[Subspace] = list(enumerate_subspaces(p, n))
    subs.sort(key=Subspace.sort_key)
    return from_subgroup_family(subs, check_closed=False)


def is_modular(l: FiniteLattice) -> tuple[bool, tuple[int, int, int] | None]:
    """Check x <= z  =>  x v (y ^ z) = (x v y) ^ z on all triples; return a witness on failure."""
    J, M, leq = l.join_table, l.meet_table, l.leq
    for x in range(l.size):
        zs = np.flatnonzero(leq[x])
        for y in range(l.size):
            lhs = J[x, M[y, zs]]
            rhs = M[J[x, y], zs]
            bad = np.flatnonzero(lhs != rhs)
            if bad.size:
                return False, (x, y, int(zs[bad[0]]))
    return True, None


@dataclass(frozen=True)
class LatticeIso:
    mapping: tuple[int, ...]
    direction: str  # "preserving" or "reversing"

    def verify(self, a: FiniteLattice, b: FiniteLattice) -> bool:
        f = np.array(self.mapping)
        if a.size != b.size or sorted(self.mapping) != list(range(b.size)):
            return False
        image = b.leq[np.ix_(f, f)]
        want = a.leq if self.direction == "preserving" else a.leq.T
        return bool(np.array_equal(image, want))


def is_antiautomorphism(l: FiniteLattice, mapping: Sequence[int]) -> bool:
    return LatticeIso(tuple(mapping), "reversing").verify(l, l)


def is_order_reversing_involution(l: FiniteLattice, mapping: Sequence[int]) -> bool:
    return is_antiautomorphism(l, mapping) and all(mapping[mapping[i]] == i for i in range(l.size))


def find_isomorphism(a: FiniteLattice, b: FiniteLattice, reverse: bool = False,
                     budget: int = DEFAULT_ISO_BUDGET) -> LatticeIso | None:
    """Backtracking search for an order isomorphism a -> b (anti-isomorphism if ``reverse``).

    Candidates are pruned by the element signature and by consistency with
    every earlier assignment; each assignment also forces the images of joins
    and meets with earlier elements.  Exhaustive, so None means no isomorphism.
    """
    for l in (a, b):
        if l.size > budget:
            raise LatticeError(f"lattice of size {l.size} exceeds the isomorphism budget {budget}")
    target = dual(b) if reverse else b
    direction = "reversing" if reverse else "preserving"
    if a.size != target.size:
        return None
    sig_a = [a.signature(x) for x in range(a.size)]
    sig_b = [target.signature(y) for y in range(target.size)]
    if Counter(sig_a) != Counter(sig_b):
        return None
    by_sig: dict = {}
    for y, s in enumerate(sig_b):
        by_sig.setdefault(s, []).append(y)

    n = a.size
    f = [-1] * n
    finv = [-1] * n
    assigned: list[int] = []
    # breadth-first over covers from the bottom: each new element touches earlier ones
    order = sorted(range(n), key=lambda x: (a.rank[x], len(by_sig[sig_a[x]]), x))

    def consistent(x: int, y: int) -> bool:
        if sig_a[x] != sig_b[y]:
            return False
        if not assigned:
            return True
        xs = np.array(assigned)
        ys = np.array([f[i] for i in assigned])
        return bool(np.array_equal(a.leq[xs, x], target.leq[ys, y]) and np.array_equal(a.leq[x, xs], target.leq[y, ys]))

    def assign(x: int, y: int, trail: list[int]) -> bool:
        queue = [(x, y)]
        while queue:
            u, v = queue.pop()
            if f[u] != -1 or finv[v] != -1:
                if f[u] != v:
                    return False
                continue
            if not consistent(u, v):
                return False
            f[u], finv[v] = v, u
            assigned.append(u)
            trail.append(u)
            for u2 in list(assigned):
                v2 = f[u2]
                for tu, tv in ((a.join_table, target.join_table), (a.meet_table, target.meet_table)):
                    ju, jv = int(tu[u, u2]), int(tv[v, v2])
                    if f[ju] == -1 and finv[jv] == -1:
                        queue.append((ju, jv))
                    elif f[ju] != jv:
                        return False
        return True

    def undo(trail: list[int]) -> None:
        for u in reversed(trail):
            finv[f[u]] = -1
            f[u] = -1
            assigned.pop()

    def search() -> bool:
        x = next((u for u in order if f[u] == -1), None)
        if x is None:
            return True
        for y in by_sig[sig_a[x]]:
            if finv[y] != -1:
                continue
            trail: list[int] = []
            if assign(x, y, trail) and search():
                return True
            undo(trail)
        return False

    if not search():
        return None
    iso = LatticeIso(tuple(f), direction)
    if not iso.verify(a, b):
        raise LatticeError("isomorphism search produced an invalid mapping")
    return iso


def is_self_dual(l: FiniteLattice) -> LatticeIso | None:
    return find_isomorphism(l, l, reverse=True)


def interval(l: FiniteLattice, lo: int, hi: int) -> tuple[FiniteLattice, list[int]]:
    """The interval [lo, hi] as a lattice, with the list of its elements in ``l``."""
    if not l.leq[lo, hi]:
        raise LatticeError("lower end is not below the upper end", (lo, hi))
    idx = [int(x) for x in np.flatnonzero(l.leq[lo] & l.leq[:, hi])]
    sub = l.leq[np.ix_(idx, idx)]
    return FiniteLattice(sub, [l.labels[i] for i in idx]), idx


def quasi_antichain_width(l: FiniteLattice) -> int | None:
    """w if the lattice is a minimum, a maximum and w >= 2 incomparable middle elements."""
    middle = [x for x in range(l.size) if x not in (l.bottom, l.top)]
    if len(middle) < 2:
        return None
    sub = l.leq[np.ix_(middle, middle)]
    if (sub & ~np.eye(len(middle), dtype=bool)).any():
        return None
    return len(middle)


def height(l: FiniteLattice) -> int:
    return l.height


def atoms(l: FiniteLattice) -> list[int]:
    return l.atoms()


def length_two_intervals(l: FiniteLattice) -> list[tuple[int, int]]:
    """Pairs (lo, hi) whose interval has length 2 (longest chain lo < x < hi)."""
    out = []
    for lo in range(l.size):
        for hi in np.flatnonzero(l.leq[lo]):
            hi = int(hi)
            if hi == lo:
                continue
            _, idx = interval(l, lo, hi)
            if _interval_length(l, idx) == 2:
                out.append((lo, hi))
    return out


def _interval_length(l: FiniteLattice, idx: Sequence[int]) -> int:
    ranks = {i: 0 for i in idx}
    for i in sorted(idx, key=lambda x: int(l.leq[:, x].sum())):
        for j in idx:
            if l.cover[j, i]:
                ranks[i] = max(ranks[i], ranks[j] + 1)
    return max(ranks.values())


def interval_length(l: FiniteLattice, lo: int, hi: int) -> int:
    _, idx = interval(l, lo, hi)
    return _interval_length(l, idx)
