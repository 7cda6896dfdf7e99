"""Finite groups as explicit Cayley tables.

Subgroups are bitsets over element indices (plain Python ints), which keeps
inclusion, intersection and hashing cheap.  Everything is deterministic in
element-index order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_CAP = 128
MAX_CAP = 1024
_EXHAUSTIVE_ASSOC_LIMIT = 256


class GroupError(ValueError):
    """A table or construction does not describe a valid group."""


class CapExceededError(RuntimeError):
    def __init__(self, order: int, cap: int):
        super().__init__(f"group order {order} exceeds the brute-force cap of {cap} (raise --cap, max {MAX_CAP})")
        self.order = order
        self.cap = cap


def bits_of(indices: Iterable[int]) -> int:
    b = 0
    for i in indices:
        b |= 1 << int(i)
    return b


def indices_of(bits: int) -> list[int]:
    out = []
    i = 0
    while bits:
        low = bits & -bits
        i = low.bit_length() - 1
        out.append(i)
        bits ^= low
    return out


def _mask_to_bits(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask.astype(np.uint8), bitorder="little").tobytes(), "little")


class CayleyGroup:
    """A finite group given by its full multiplication table.

    ``table[a][b]`` is the index of the product ``a*b``.  The table is checked
    for the Latin-square property, identity, inverses, and associativity
    (exhaustively up to order 256, on sampled triples beyond).
    """

    def __init__(self, table, labels: Sequence[str] | None = None, name: str = "G", check: bool = True):
        arr = np.asarray(table, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise GroupError("Cayley table must be a non-empty square array")
        self.order = n = arr.shape[0]
        self.table = arr
        self.rows: list[list[int]] = arr.tolist()
        self.name = name
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        if len(self.labels) != n:
            raise GroupError("label count does not match order")
        if check:
            self._validate()
        ident = [a for a in range(n) if self.rows[a][a] == a]
        if len(ident) != 1:
            raise GroupError("no unique identity element")
        self.identity = ident[0]
        inv = [0] * n
        for a in range(n):
            inv[a] = self.rows[a].index(self.identity)
        self.inverse = inv
        self._centralizers: list[int] | None = None

    def _validate(self) -> None:
        n = self.order
        t = self.table
        if t.min() < 0 or t.max() >= n:
            raise GroupError("table entry out of range")
        want = np.arange(n)
        for i in range(n):
            if not np.array_equal(np.sort(t[i]), want):
                raise GroupError(f"row {i} is not a permutation of the elements")
            if not np.array_equal(np.sort(t[:, i]), want):
                raise GroupError(f"column {i} is not a permutation of the elements")
        e = [a for a in range(n) if t[a, a] == a]
        if len(e) != 1 or not np.array_equal(t[e[0]], want) or not np.array_equal(t[:, e[0]], want):
            raise GroupError("no two-sided identity element")
        if n <= _EXHAUSTIVE_ASSOC_LIMIT:
            for a in range(n):
                # (a*b)*c == a*(b*c) for all b, c
                lhs = t[t[a]]
                rhs = t[a][t]
                if not np.array_equal(lhs, rhs):
                    b, c = np.argwhere(lhs != rhs)[0]
                    raise GroupError(f"associativity fails at ({a}, {b}, {c})")
        else:
            rng = np.random.default_rng(0)
            trip = rng.integers(0, n, size=(4096, 3))
            a, b, c = trip.T
            if not np.array_equal(t[t[a, b], c], t[a, t[b, c]]):
                raise GroupError("associativity fails on a sampled triple")

    def __repr__(self) -> str:
        return f"CayleyGroup({self.name}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def power(self, a: int, k: int) -> int:
        x = self.identity
        for _ in range(k):
            x = self.rows[x][a]
        return x

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.rows[x][a]
            k += 1
        return k

    def commutator(self, a: int, b: int) -> int:
        inv = self.inverse
        r = self.rows
        return r[r[r[inv[a]][inv[b]]][a]][b]

    @property
    def full_bits(self) -> int:
        return (1 << self.order) - 1

    def element_centralizers(self) -> list[int]:
        """Bitset C_G(g) for every element g."""
        if self._centralizers is None:
            t = self.table
            comm = t == t.T
            self._centralizers = [_mask_to_bits(comm[g]) for g in range(self.order)]
        return self._centralizers

    def whole(self) -> "SubgroupSet":
        return SubgroupSet(self, self.full_bits)

    def trivial(self) -> "SubgroupSet":
        return SubgroupSet(self, 1 << self.identity)


@dataclass(frozen=True, eq=False)
class SubgroupSet:
    """A subgroup of ``parent`` held as a bitset of element indices."""

    parent: CayleyGroup
    bits: int
    gens: tuple[int, ...] = field(default=(), compare=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, SubgroupSet) and self.parent is other.parent and self.bits == other.bits

    def __hash__(self) -> int:
        return hash(self.bits)

    @property
    def order(self) -> int:
        return self.bits.bit_count()

    def elements(self) -> list[int]:
        return indices_of(self.bits)

    def __contains__(self, g: int) -> bool:
        return bool(self.bits >> g & 1)

    def __le__(self, other: "SubgroupSet") -> bool:
        return self.bits & ~other.bits == 0

    def __lt__(self, other: "SubgroupSet") -> bool:
        return self.bits != other.bits and self <= other

    def __and__(self, other: "SubgroupSet") -> "SubgroupSet":
        return SubgroupSet(self.parent, self.bits & other.bits)

    def join(self, other: "SubgroupSet") -> "SubgroupSet":
        return generate(self.parent, self.generators() + other.generators())

    def generators(self) -> list[int]:
        if self.gens:
            return list(self.gens)
        return small_generating_set(self)

    def sort_key(self) -> tuple:
        return (self.order, self.elements())

    def is_closed(self) -> bool:
        g = self.parent
        els = self.elements()
        if not self.bits >> g.identity & 1:
            return False
        for a in els:
            if not self.bits >> g.inverse[a] & 1:
                return False
            row = g.rows[a]
            for b in els:
                if not self.bits >> row[b] & 1:
                    return False
        return True

    def __repr__(self) -> str:
        return f"SubgroupSet(order={self.order}, gens={self.generators()})"


def _closure_add(g: CayleyGroup, bits: int, elements: list[int], gens: list[int], new: int) -> tuple[int, list[int]]:
    """Dimino step: extend the subgroup (bits, elements) generated by ``gens`` with ``new``.

    The result is built as a union of right cosets of the old subgroup.
    """
    if bits >> new & 1:
        return bits, elements
    rows = g.rows
    all_gens = gens + [new]
    base = list(elements)
    out = list(elements)
    coset = [rows[h][new] for h in base]
    for x in coset:
        bits |= 1 << x
    out.extend(coset)
    pos = len(base)
    while pos < len(out):
        rep = out[pos]
        for s in all_gens:
            y = rows[rep][s]
            if not bits >> y & 1:
                coset = [rows[h][y] for h in base]
                for x in coset:
                    bits |= 1 << x
                out.extend(coset)
        pos += len(base)
    return bits, out


def generate(parent: CayleyGroup, seeds: Iterable[int]) -> SubgroupSet:
    """Smallest subgroup containing ``seeds``."""
    bits = 1 << parent.identity
    elements = [parent.identity]
    gens: list[int] = []
    for s in seeds:
        s = int(s)
        if not 0 <= s < parent.order:
            raise GroupError(f"element index {s} out of range")
        if bits >> s & 1:
            continue
        bits, elements = _closure_add(parent, bits, elements, gens, s)
        gens.append(s)
    return SubgroupSet(parent, bits, tuple(gens))


def small_generating_set(h: SubgroupSet) -> list[int]:
    g = h.parent
    gens: list[int] = []
    cur = 1 << g.identity
    for x in h.elements():
        if not cur >> x & 1:
            cur = generate(g, gens + [x]).bits
            gens.append(x)
    return gens


def subgroup(parent: CayleyGroup, bits: int) -> SubgroupSet:
    """Wrap a bitset, checking that it is a subgroup."""
    h = SubgroupSet(parent, bits)
    if not h.is_closed():
        raise GroupError("element set is not closed under the group operations")
    return h


def centralizer(parent: CayleyGroup, h: SubgroupSet) -> SubgroupSet:
    cents = parent.element_centralizers()
    bits = parent.full_bits
    for x in h.generators():
        bits &= cents[x]
    return SubgroupSet(parent, bits)


def center(parent: CayleyGroup) -> SubgroupSet:
    return centralizer(parent, parent.whole())


def all_subgroups(parent: CayleyGroup, cap: int = DEFAULT_CAP) -> list[SubgroupSet]:
    """Every subgroup of ``parent``, sorted by (order, elements).

    Starts from the cyclic subgroups and repeatedly joins each newly found
    subgroup with every cyclic subgroup it does not contain, until no new
    subgroup appears.
    """
    if cap > MAX_CAP:
        raise ValueError(f"cap may not exceed {MAX_CAP}")
    if parent.order > cap:
        raise CapExceededError(parent.order, cap)
    cyclic: dict[int, int] = {}
    for x in range(parent.order):
        c = generate(parent, [x])
        cyclic.setdefault(c.bits, x)
    cyc = sorted(cyclic.items(), key=lambda kv: (kv[0].bit_count(), kv[1]))
    found: dict[int, tuple[list[int], list[int]]] = {}
    triv = 1 << parent.identity
    found[triv] = ([], [parent.identity])
    frontier = [triv]
    while frontier:
        nxt = []
        for hb in frontier:
            gens, elements = found[hb]
            for cb, x in cyc:
                if cb & ~hb == 0:
                    continue
                jb, jel = _closure_add(parent, hb, elements, gens, x)
                if jb not in found:
                    found[jb] = (gens + [x], jel)
                    nxt.append(jb)
        frontier = nxt
    subs = [SubgroupSet(parent, b, tuple(gs)) for b, (gs, _) in found.items()]
    subs.sort(key=lambda h: (h.order, h.elements()))
    return subs


def product_set(a: SubgroupSet, b: SubgroupSet) -> int:
    """Bitset of the set product AB (not necessarily a subgroup)."""
    g = a.parent
    ea = np.array(a.elements())
    eb = np.array(b.elements())
    mask = np.zeros(g.order, np.bool_)
    mask[g.table[np.ix_(ea, eb)].ravel()] = True
    return _mask_to_bits(mask)


def is_normal(h: SubgroupSet, in_group: SubgroupSet | None = None) -> bool:
    """Whether ``h`` is normalized by ``in_group`` (default: the whole parent)."""
    g = h.parent
    conj = in_group.generators() if in_group is not None else list(range(g.order))
    rows, inv = g.rows, g.inverse
    hel = h.generators()
    for x in conj:
        for y in hel:
            if not h.bits >> rows[rows[inv[x]][y]][x] & 1:
                return False
    return True


def commutator_of(a: SubgroupSet, b: SubgroupSet) -> SubgroupSet:
    """[A, B], generated by all commutators [x, y], x in A, y in B."""
    g = a.parent
    comms = {g.commutator(x, y) for x in a.elements() for y in b.elements()}
    return generate(g, sorted(comms))


def commutator_subgroup(parent: CayleyGroup) -> SubgroupSet:
    w = parent.whole()
    return commutator_of(w, w)


def nilpotency_class(parent: CayleyGroup) -> int | None:
    """Length of the lower central series, or None if the group is not nilpotent."""
    w = parent.whole()
    cur = w
    c = 0
    while cur.order > 1:
        nxt = commutator_of(cur, w)
        if nxt == cur:
            return None
        cur = nxt
        c += 1
    return c


def is_abelian(h: SubgroupSet) -> bool:
    cents = h.parent.element_centralizers()
    return all(h.bits & ~cents[x] == 0 for x in h.generators())


def prime_of_order(n: int) -> int | None:
    """The prime p if n is a nontrivial power of p."""
    if n < 2:
        return None
    p = next(d for d in range(2, n + 1) if n % d == 0)
    while n % p == 0:
        n //= p
    return p if n == 1 else None


def is_elementary_abelian(h: SubgroupSet) -> bool:
    if h.order == 1:
        return True
    p = prime_of_order(h.order)
    if p is None or not is_abelian(h):
        return False
    g = h.parent
    return all(g.power(x, p) == g.identity for x in h.generators())


def quotient_is_elementary_abelian(h: SubgroupSet, l: SubgroupSet) -> bool:
    """Whether H/L is elementary abelian: [H,H] <= L and x^p in L for x in H."""
    if not l <= h:
        raise GroupError("bottom subgroup is not contained in the top one")
    if not is_normal(l, h):
        raise GroupError("quotient by a non-normal subgroup")
    idx = h.order // l.order
    if idx == 1:
        return True
    p = prime_of_order(idx)
    if p is None:
        return False
    g = h.parent
    gens = h.generators()
    for x in gens:
        if not l.bits >> g.power(x, p) & 1:
            return False
        for y in gens:
            if not l.bits >> g.commutator(x, y) & 1:
                return False
    return True


def elements_of_order_dividing_power(parent: CayleyGroup, p: int) -> int:
    """Bitset of elements whose order is a power of p."""
    out = 0
    for x in range(parent.order):
        o = parent.element_order(x)
        if o == 1 or prime_of_order(o) == p:
            out |= 1 << x
    return out


def induced_group(h: SubgroupSet, name: str | None = None) -> tuple[CayleyGroup, list[int]]:
    """``h`` as a standalone CayleyGroup, with the list mapping new -> parent indices."""
    g = h.parent
    els = h.elements()
    pos = {x: i for i, x in enumerate(els)}
    table = [[pos[g.rows[a][b]] for b in els] for a in els]
    sub = CayleyGroup(table, [g.labels[x] for x in els], name=name or f"{g.name}_sub", check=False)
    return sub, els


def direct_product(a: CayleyGroup, b: CayleyGroup, name: str | None = None) -> CayleyGroup:
    """A x B with (i, j) stored at index i*|B| + j."""
    na, nb = a.order, b.order
    ta, tb = a.table, b.table
    table = (ta[:, None, :, None] * nb + tb[None, :, None, :]).reshape(na * nb, na * nb)
    labels = [f"({la},{lb})" for la in a.labels for lb in b.labels]
    return CayleyGroup(table, labels, name=name or f"{a.name}x{b.name}", check=False)


def quotient(g: CayleyGroup, n: SubgroupSet, name: str | None = None) -> tuple[CayleyGroup, list[int]]:
    """G/N for normal N; returns the quotient and the coset index of each element."""
    if not is_normal(n):
        raise GroupError("quotient by a non-normal subgroup")
    coset_of = [-1] * g.order
    reps = []
    nel = n.elements()
    for x in range(g.order):
        if coset_of[x] >= 0:
            continue
        k = len(reps)
        reps.append(x)
        for y in nel:
            coset_of[g.rows[x][y]] = k
    table = [[coset_of[g.rows[a][b]] for b in reps] for a in reps]
    q = CayleyGroup(table, [g.labels[x] for x in reps], name=name or f"{g.name}/N", check=False)
    return q, coset_of


def central_product(factors: Sequence[CayleyGroup], centers: Sequence[Sequence[int]], name: str | None = None) -> CayleyGroup:
    """Central product of ``factors`` identifying designated central subgroups.

    ``centers[i]`` lists the elements of a central subgroup of ``factors[i]``;
    the lists correspond positionally, and that correspondence must be an
    isomorphism onto the first factor's designated subgroup.
    """
    if len(factors) != len(centers) or not factors:
        raise GroupError("need one designated center per factor")
    c0 = list(centers[0])
    f0 = factors[0]
    for f, c in zip(factors, centers):
        c = list(c)
        if len(c) != len(c0) or len(set(c)) != len(c):
            raise GroupError("designated centers have different sizes")
        if c[0] != f.identity:
            raise GroupError("designated centers must list the identity first")
        cb = bits_of(c)
        if not SubgroupSet(f, cb).is_closed():
            raise GroupError("designated center is not a subgroup")
        if cb & ~center(f).bits:
            raise GroupError("designated subgroup is not central")
        pos = {x: i for i, x in enumerate(c)}
        for i in range(len(c)):
            for j in range(len(c)):
                if pos[f.rows[c[i]][c[j]]] != c0.index(f0.rows[c0[i]][c0[j]]):
                    raise GroupError("center correspondence is not an isomorphism")
    g = f0
    cur = list(c0)
    for f, c in zip(factors[1:], centers[1:]):
        d = direct_product(g, f)
        nb = f.order
        # anti-diagonal {(z, z'^{-1})}
        anti = [cur[i] * nb + f.inverse[c[i]] for i in range(len(c0))]
        g, coset_of = quotient(d, generate(d, anti))
        cur = [coset_of[z * nb + f.identity] for z in cur]
    g.name = name or "*".join(f.name for f in factors)
    return g


def lcm_of_orders(parent: CayleyGroup) -> int:
    return math.lcm(*(parent.element_order(x) for x in range(parent.order)))
