"""Class-2 p-groups with an elementary abelian central subgroup.

Elements are pairs ``(a, z)`` with ``a`` in F_p^r (exponents of the generators
e_0..e_{r-1} in collected order) and ``z`` in F_p^s (coordinates in the central
basis z_1..z_s).  Commutators land in the central part and are described by
an alternating bilinear form, so the centralizer of a subgroup containing the
central part is the preimage of a perp space and the whole Chermak-Delgado
search turns into a scan over subspaces of F_p^r.

Conventions: ``[g, h] = g^-1 h^-1 g h``, so ``gh = hg[g, h]``; ``comm[i][j]``
for i > j is the value of ``[e_i, e_j]``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .fp_linalg import FpMatrix, Subspace, Vector, _check_prime, enumerate_subspaces, nullspace, subspace_count
from .group_core import CapExceededError, CayleyGroup, DEFAULT_CAP, MAX_CAP

DEFAULT_BUDGET = 20_000_000
_KERNEL_CAP = 4096


class BudgetExceededError(RuntimeError):
    def __init__(self, count: int, budget: int):
        super().__init__(f"subspace scan needs {count} subspaces, over the budget of {budget} (raise --budget)")
        self.count = count
        self.budget = budget


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class PElement:
    a: Vector
    z: Vector


class Class2Presentation:
    """A class-2 p-group given by a commutator tensor and p-th power data."""

    def __init__(self, p: int, r: int, s: int, commutators: Iterable[tuple[int, int, Sequence[int]]] = (),
                 powers: Sequence[Sequence[int]] | None = None, name: str = "G", check: bool = True):
        _check_prime(p)
        if r < 0 or s < 0:
            raise PresentationError("ranks must be non-negative")
        self.p, self.r, self.s, self.name = p, r, s, name
        # form[i, j] = value of [e_i, e_j]; alternating
        form = np.zeros((r, r, s), dtype=np.int64)
        seen = set()
        for i, j, vec in commutators:
            i, j = int(i), int(j)
            if not (0 <= i < r and 0 <= j < r) or i == j:
                raise PresentationError(f"bad commutator index pair ({i}, {j})")
            if len(vec) != s:
                raise PresentationError(f"commutator vector for ({i}, {j}) must have length {s}")
            key = (max(i, j), min(i, j))
            if key in seen:
                raise PresentationError(f"commutator ({i}, {j}) given twice")
            seen.add(key)
            v = np.array([int(x) % p for x in vec], dtype=np.int64)
            form[i, j] = v
            form[j, i] = (-v) % p
        self.form = form
        if powers is None:
            powers = [[0] * s for _ in range(r)]
        if len(powers) != r or any(len(v) != s for v in powers):
            raise PresentationError(f"powers must be {r} vectors of length {s}")
        self.powers = np.array([[int(x) % p for x in v] for v in powers], dtype=np.int64).reshape(r, s)
        if check:
            self._spot_check()

    # ``comm[i][j]`` for i > j, as stored in group-spec files
    @property
    def commutators(self) -> list[tuple[int, int, Vector]]:
        out = []
        for i in range(self.r):
            for j in range(i):
                v = tuple(int(x) for x in self.form[i, j])
                if any(v):
                    out.append((i, j, v))
        return out

    @property
    def order_exponent(self) -> int:
        return self.r + self.s

    @property
    def order(self) -> int:
        return self.p ** (self.r + self.s)

    def __repr__(self) -> str:
        return f"Class2Presentation({self.name}, p={self.p}, r={self.r}, s={self.s})"

    def _spot_check(self, trials: int = 64) -> None:
        rng = random.Random(0)
        for _ in range(trials):
            x, y, w = (self.random_element(rng) for _ in range(3))
            if multiply(self, multiply(self, x, y), w) != multiply(self, x, multiply(self, y, w)):
                raise PresentationError("collection product is not associative")

    def random_element(self, rng: random.Random) -> PElement:
        p = self.p
        return PElement(tuple(rng.randrange(p) for _ in range(self.r)), tuple(rng.randrange(p) for _ in range(self.s)))

    def identity(self) -> PElement:
        return PElement((0,) * self.r, (0,) * self.s)

    def generator(self, i: int) -> PElement:
        return PElement(tuple(int(k == i) for k in range(self.r)), (0,) * self.s)

    def central(self, k: int) -> PElement:
        return PElement((0,) * self.r, tuple(int(c == k) for c in range(self.s)))

    def lift(self, v: Sequence[int]) -> PElement:
        return PElement(tuple(int(x) % self.p for x in v), (0,) * self.s)

    def restrict(self, w: Subspace, name: str | None = None) -> "Class2Presentation":
        """Presentation of the preimage of ``w`` on the lifts of its basis vectors.

        The central part is unchanged; commutators come from the form and the
        p-th powers are computed by collection.
        """
        basis = w.basis
        comms = []
        for i in range(len(basis)):
            for j in range(i):
                comms.append((i, j, commutator_form(self, basis[i], basis[j])))
        powers = [power(self, self.lift(u), self.p).z for u in basis]
        return Class2Presentation(self.p, len(basis), self.s, comms, powers, name=name or f"{self.name}|sub", check=False)


def multiply(pres: Class2Presentation, g1: PElement, g2: PElement) -> PElement:
    """Collected product ``g1 * g2``."""
    p, s = pres.p, pres.s
    a1, a2 = g1.a, g2.a
    z = list(g1.z)
    for c in range(s):
        z[c] += g2.z[c]
    form = pres.form
    a = []
    for i in range(pres.r):
        t = a1[i] + a2[i]
        if t >= p:
            t -= p
            for c in range(s):
                z[c] += pres.powers[i, c]
        a.append(t)
        if a1[i]:
            # moving e_j^{a2[j]} (j < i) left past e_i^{a1[i]} costs [e_i, e_j]^{a1[i] a2[j]}
            for j in range(i):
                if a2[j]:
                    coef = a1[i] * a2[j]
                    for c in range(s):
                        z[c] += coef * form[i, j, c]
    return PElement(tuple(a), tuple(int(x) % p for x in z))


def power(pres: Class2Presentation, g: PElement, k: int) -> PElement:
    out = pres.identity()
    for _ in range(k):
        out = multiply(pres, out, g)
    return out


def inverse(pres: Class2Presentation, g: PElement) -> PElement:
    # g has order dividing p^2, so g^{-1} = g^{p^2 - 1}
    return power(pres, g, pres.p * pres.p - 1)


def commutator(pres: Class2Presentation, g: PElement, h: PElement) -> PElement:
    """Element commutator ``g^-1 h^-1 g h`` computed by collection."""
    gi, hi = inverse(pres, g), inverse(pres, h)
    return multiply(pres, multiply(pres, multiply(pres, gi, hi), g), h)


def commutator_form(pres: Class2Presentation, v: Sequence[int], u: Sequence[int]) -> Vector:
    """Central coordinates of ``[lift(v), lift(u)]``: sum_{i,j} v_i u_j [e_i, e_j]."""
    p = pres.p
    vv = np.asarray(v, dtype=np.int64)
    uu = np.asarray(u, dtype=np.int64)
    val = np.einsum("i,j,ijc->c", vv, uu, pres.form) % p
    return tuple(int(x) for x in val)


def _perp_matrix(pres: Class2Presentation, vectors: Sequence[Sequence[int]]) -> FpMatrix:
    # row (u, c): v -> coordinate c of b(u, v)
    rows = []
    for u in vectors:
        m = np.einsum("i,ijc->cj", np.asarray(u, dtype=np.int64), pres.form) % pres.p
        rows.extend(m.tolist())
    return FpMatrix.from_rows(pres.p, rows, pres.r)


def perp(pres: Class2Presentation, w: Subspace) -> Subspace:
    """{v : b(u, v) = 0 for all u in w}."""
    if w.p != pres.p or w.ambient_dim != pres.r:
        raise PresentationError("subspace does not live in F_p^r of this presentation")
    if w.dim == 0 or pres.s == 0:
        return Subspace.full(pres.p, pres.r)
    return nullspace(_perp_matrix(pres, w.basis))


def radical(pres: Class2Presentation) -> Subspace:
    return perp(pres, Subspace.full(pres.p, pres.r))


@dataclass(frozen=True)
class CentralSubgroup:
    """The full preimage in G of a subspace ``w`` of F_p^r."""

    presentation: Class2Presentation
    w: Subspace

    def __eq__(self, other) -> bool:
        return isinstance(other, CentralSubgroup) and self.presentation is other.presentation and self.w == other.w

    def __hash__(self) -> int:
        return hash(self.w)

    @property
    def order_exponent(self) -> int:
        return self.presentation.s + self.w.dim

    @property
    def order(self) -> int:
        return self.presentation.p ** self.order_exponent

    def __contains__(self, g: PElement) -> bool:
        return g.a in self.w

    def __le__(self, other: "CentralSubgroup") -> bool:
        return self.w <= other.w

    def __lt__(self, other: "CentralSubgroup") -> bool:
        return self.w < other.w

    def __and__(self, other: "CentralSubgroup") -> "CentralSubgroup":
        return CentralSubgroup(self.presentation, self.w & other.w)

    def join(self, other: "CentralSubgroup") -> "CentralSubgroup":
        return CentralSubgroup(self.presentation, self.w + other.w)

    def generators(self) -> list[PElement]:
        pres = self.presentation
        return [pres.lift(u) for u in self.w.basis] + [pres.central(k) for k in range(pres.s)]

    def sort_key(self) -> tuple:
        return self.w.sort_key()

    def is_abelian(self) -> bool:
        return self.w <= perp(self.presentation, self.w)

    def is_normal_in(self, other: "CentralSubgroup") -> bool:
        pres = self.presentation
        return all(commutator(pres, x, y) in self for x in other.generators() for y in self.generators())

    def quotient_is_elementary_abelian(self, bottom: "CentralSubgroup") -> bool:
        """Whether self/bottom is elementary abelian (bottom must be normal in self)."""
        if not bottom <= self:
            raise PresentationError("bottom is not contained in top")
        if not bottom.is_normal_in(self):
            raise PresentationError("quotient by a non-normal subgroup")
        pres = self.presentation
        gens = self.generators()
        for x in gens:
            if power(pres, x, pres.p) not in bottom:
                return False
            for y in gens:
                if commutator(pres, x, y) not in bottom:
                    return False
        return True

    def __repr__(self) -> str:
        return f"CentralSubgroup(order={self.presentation.p}^{self.order_exponent}, {self.w!r})"


def center(pres: Class2Presentation) -> CentralSubgroup:
    return CentralSubgroup(pres, radical(pres))


def centralizer(pres: Class2Presentation, h: CentralSubgroup) -> CentralSubgroup:
    return CentralSubgroup(pres, perp(pres, h.w))


def measure_of(pres: Class2Presentation, w: Subspace) -> int:
    """Exponent e with m_G(preimage of w) = p^e."""
    return 2 * pres.s + w.dim + perp(pres, w).dim


def scan_maximizers(pres: Class2Presentation, budget: int = DEFAULT_BUDGET, use_kernel: bool = True) -> tuple[int, list[Subspace]]:
    """Max of dim w + dim perp(w) over all subspaces, and every subspace attaining it.

    ``use_kernel=False`` runs the pure-Python enumeration (slow; used as a
    cross-check of the compiled scan).
    """
    p, r, s = pres.p, pres.r, pres.s
    total = subspace_count(r, p)
    if total > budget:
        raise BudgetExceededError(total, budget)
    if not use_kernel:
        best, winners = -1, []
        for w in enumerate_subspaces(p, r):
            score = w.dim + perp(pres, w).dim
            if score > best:
                best, winners = score, []
            if score == best:
                winners.append(w)
        return best, sorted(winners, key=Subspace.sort_key)
    beta = np.ascontiguousarray(pres.form.transpose(0, 2, 1))  # [t, c, j]
    cap = _KERNEL_CAP
    while True:
        if p == 2 and r <= 62:
            weights = np.left_shift(np.int64(1), np.arange(r, dtype=np.int64))
            masks = (beta * weights[None, None, :]).sum(axis=2).astype(np.int64) if r else np.zeros((0, s), np.int64)
            best, count, dims, rows = _kernels.scan_gf2(r, s, np.ascontiguousarray(masks.reshape(r, s)), cap)
            if count <= cap:
                winners = [
                    Subspace.span(p, r, [[(int(rows[i, k]) >> j) & 1 for j in range(r)] for k in range(int(dims[i]))])
                    for i in range(count)
                ]
                break
        else:
            best, count, dims, rows = _kernels.scan_generic(p, r, s, beta, cap)
            if count <= cap:
                winners = [Subspace.span(p, r, rows[i, : int(dims[i])].tolist()) for i in range(count)]
                break
        cap = 2 * count
    return int(best), sorted(winners, key=Subspace.sort_key)


def to_cayley(pres: Class2Presentation, cap: int = DEFAULT_CAP) -> tuple[CayleyGroup, list[PElement]]:
    """Explicit Cayley table; also returns the element behind each index."""
    if cap > MAX_CAP:
        raise ValueError(f"cap may not exceed {MAX_CAP}")
    n = pres.order
    if n > cap:
        raise CapExceededError(n, cap)
    p, r, s = pres.p, pres.r, pres.s
    elements = []
    for idx in range(n):
        digits = [(idx // p**k) % p for k in range(r + s)][::-1]
        elements.append(PElement(tuple(digits[:r]), tuple(digits[r:])))
    index = {e: i for i, e in enumerate(elements)}
    table = [[index[multiply(pres, x, y)] for y in elements] for x in elements]
    labels = [_label(pres, e) for e in elements]
    return CayleyGroup(table, labels, name=pres.name), elements


def _label(pres: Class2Presentation, e: PElement) -> str:
    parts = [f"e{i}^{k}" if k > 1 else f"e{i}" for i, k in enumerate(e.a) if k]
    parts += [f"z{c + 1}^{k}" if k > 1 else f"z{c + 1}" for c, k in enumerate(e.z) if k]
    return "*".join(parts) or "1"


def preimage_bits(elements: Sequence[PElement], w: Subspace) -> int:
    """Bitset (over to_cayley indices) of the preimage of ``w``."""
    out = 0
    for i, e in enumerate(elements):
        if e.a in w:
            out |= 1 << i
    return out


def cd_lattice_class2(pres: Class2Presentation, budget: int = DEFAULT_BUDGET, use_kernel: bool = True):
    """CD(G) over preimages of subspaces of F_p^r.

    Restricting to subgroups that contain the central part loses nothing:
    m_G(H) <= m_G(HZ) because C_G(HZ) = C_G(H), and every member contains the
    minimal member, which contains Z(G).
    """
    from .cd_engine import MeasuredSubgroup, finish_members

    p, s = pres.p, pres.s
    best, winners = scan_maximizers(pres, budget, use_kernel)
    members = []
    for w in winners:
        h = CentralSubgroup(pres, w)
        c = centralizer(pres, h)
        members.append(MeasuredSubgroup(h, c, p ** (2 * s + best)))
    return finish_members(
        pres,
        members,
        join=lambda a, b: a.join(b),
        meet=lambda a, b: a & b,
        cent=lambda h: centralizer(pres, h),
        engine="class2",
        prime=p,
    )
