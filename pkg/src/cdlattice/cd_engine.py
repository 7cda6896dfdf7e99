"""Brute-force Chermak-Delgado measures and lattices over Cayley tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .group_core import (
    DEFAULT_CAP,
    CayleyGroup,
    GroupError,
    SubgroupSet,
    all_subgroups,
    centralizer,
    prime_of_order,
)


class ClosureViolation(RuntimeError):
    """The computed member set is not a self-dual sublattice.

    Raised with the offending members attached; this would contradict the
    basic theory, so it is never swallowed.
    """

    def __init__(self, message: str, witnesses: Sequence[Any]):
        super().__init__(f"{message}: {list(witnesses)!r}")
        self.witnesses = list(witnesses)


@dataclass(frozen=True)
class MeasuredSubgroup:
    subgroup: Any
    centralizer: Any
    measure: int

    @property
    def order(self) -> int:
        return self.subgroup.order


@dataclass
class CDResult:
    """Members of CD(G) in canonical order plus the centralizer involution."""

    group: Any
    max_measure: int
    members: list[MeasuredSubgroup]
    duality: list[tuple[int, int]]
    engine: str
    prime: int | None = None
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {m.subgroup: i for i, m in enumerate(self.members)}

    def __len__(self) -> int:
        return len(self.members)

    @property
    def subgroups(self) -> list:
        return [m.subgroup for m in self.members]

    def index_of(self, h) -> int:
        try:
            return self._index[h]
        except KeyError:
            raise KeyError(f"{h!r} is not a member of CD(G)") from None

    def __contains__(self, h) -> bool:
        return h in self._index

    def dual(self, i: int) -> int:
        return dict(self.duality)[i]

    @property
    def minimum(self) -> MeasuredSubgroup:
        return self.members[0]

    @property
    def maximum(self) -> MeasuredSubgroup:
        return self.members[-1]

    def exponent(self, n: int) -> int | None:
        """e with n = p^e when the group is a p-group."""
        if self.prime is None:
            return None
        e = 0
        while n > 1:
            n, r = divmod(n, self.prime)
            if r:
                return None
            e += 1
        return e


def measure(g: CayleyGroup, h: SubgroupSet) -> MeasuredSubgroup:
    """m_G(H) = |H| |C_G(H)| with the centralizer as witness."""
    if h.parent is not g:
        raise GroupError("subgroup belongs to a different group")
    if not h.is_closed():
        raise GroupError("element set is not a subgroup")
    c = centralizer(g, h)
    return MeasuredSubgroup(h, c, h.order * c.order)


def finish_members(group, measured: list[MeasuredSubgroup], join: Callable, meet: Callable,
                   cent: Callable, engine: str, prime: int | None) -> CDResult:
    """Sort members canonically, then check closure and the centralizer duality."""
    measured = sorted(measured, key=lambda m: m.subgroup.sort_key())
    best = measured[0].measure if measured else 0
    index = {m.subgroup: i for i, m in enumerate(measured)}
    for i, a in enumerate(measured):
        for b in measured[i + 1:]:
            j = join(a.subgroup, b.subgroup)
            if j not in index:
                raise ClosureViolation("join of two members is not a member", [a.subgroup, b.subgroup, j])
            mt = meet(a.subgroup, b.subgroup)
            if mt not in index:
                raise ClosureViolation("meet of two members is not a member", [a.subgroup, b.subgroup, mt])
    duality = []
    for i, m in enumerate(measured):
        c = cent(m.subgroup)
        if c not in index:
            raise ClosureViolation("centralizer of a member is not a member", [m.subgroup, c])
        duality.append((i, index[c]))
    return CDResult(group, best, measured, duality, engine, prime)


def cd_lattice(g: CayleyGroup, cap: int = DEFAULT_CAP) -> CDResult:
    """All subgroups attaining the maximal Chermak-Delgado measure."""
    subs = all_subgroups(g, cap)
    measured = [measure_fast(g, h) for h in subs]
    best = max(m.measure for m in measured)
    members = [m for m in measured if m.measure == best]
    return finish_members(
        g,
        members,
        join=lambda a, b: a.join(b),
        meet=lambda a, b: a & b,
        cent=lambda h: centralizer(g, h),
        engine="brute",
        prime=prime_of_order(g.order),
    )


def measure_fast(g: CayleyGroup, h: SubgroupSet) -> MeasuredSubgroup:
    # skips the closure re-check for subgroups produced by all_subgroups
    c = centralizer(g, h)
    return MeasuredSubgroup(h, c, h.order * c.order)


def measure_table(g: CayleyGroup, cap: int = DEFAULT_CAP) -> list[MeasuredSubgroup]:
    return [measure_fast(g, h) for h in all_subgroups(g, cap)]


def cd_interval(result: CDResult, bottom, top) -> list:
    """Members K with bottom <= K <= top."""
    for x in (bottom, top):
        if x not in result:
            raise KeyError(f"{x!r} is not a member of CD(G)")
    if not bottom <= top:
        raise ValueError("bottom is not contained in top")
    return [m.subgroup for m in result.members if bottom <= m.subgroup and m.subgroup <= top]
