"""Runnable checks of the structural facts about Chermak-Delgado lattices.

Each check returns a :class:`CheckReport`.  A failing report always carries a
concrete witness; ``not_applicable`` names the hypothesis that did not hold.
Checks work on results from either engine: brute-force results hold
:class:`SubgroupSet` members, class-2 results hold :class:`CentralSubgroup`
members.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import class2 as c2
from . import group_core as gc
from .cd_engine import CDResult, cd_interval, cd_lattice, measure_table
from .class2 import CentralSubgroup, Class2Presentation
from .constructions import U_phi, factor, paper_Gn, underlying_subspace
from .fp_linalg import FpMatrix, Subspace, dot_perp, enumerate_subspaces, gaussian_binomial, is_prime, scalar_pair_solutions, split_pair, subspace_count
from .group_core import CayleyGroup, SubgroupSet
from .lattice import (
    FiniteLattice,
    find_isomorphism,
    from_subgroup_family,
    interval,
    interval_length,
    is_order_reversing_involution,
    quasi_antichain_width,
    subspace_lattice,
)

PASS, FAIL, NOT_APPLICABLE = "pass", "fail", "not_applicable"
DEFAULT_SEED = 20240601
_MAX_PAIRS = 40_000


@dataclass
class CheckReport:
    check_name: str
    subject: str
    status: str
    witnesses: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def line(self) -> str:
        tag = {PASS: "PASS", FAIL: "FAIL", NOT_APPLICABLE: "N/A "}[self.status]
        return f"{tag}  {self.check_name:<26} {self.subject:<22} {self.elapsed:7.3f}s"

    def to_dict(self) -> dict:
        return {
            "check": self.check_name,
            "subject": self.subject,
            "status": self.status,
            "witnesses": self.witnesses,
            "elapsed": round(self.elapsed, 6),
        }


def describe(h) -> dict:
    """JSON-friendly description of a subgroup from either engine."""
    if isinstance(h, CentralSubgroup):
        pres = h.presentation
        return {"order": f"{pres.p}^{h.order_exponent}", "basis": [list(v) for v in h.w.basis]}
    if isinstance(h, SubgroupSet):
        g = h.parent
        return {"order": h.order, "generators": [g.labels[x] for x in h.generators()]}
    return {"value": repr(h)}


def _subject(obj) -> str:
    if isinstance(obj, CDResult):
        obj = obj.group
    return getattr(obj, "name", repr(obj))


def _report(name: str, subject: str, failures: list, t0: float, **info) -> CheckReport:
    w = dict(info)
    if failures:
        w["failures"] = failures[:5]
        w["failure_count"] = len(failures)
    return CheckReport(name, subject, FAIL if failures else PASS, w, time.perf_counter() - t0)


# ---------------------------------------------------------------- engine glue

def _center_of(cd: CDResult, h):
    if cd.engine == "class2":
        return CentralSubgroup(h.presentation, h.w & c2.perp(h.presentation, h.w))
    return h & gc.centralizer(cd.group, h)


def _centralizer(cd: CDResult, h):
    if cd.engine == "class2":
        return c2.centralizer(cd.group, h)
    return gc.centralizer(cd.group, h)


def _whole(cd: CDResult):
    if cd.engine == "class2":
        return CentralSubgroup(cd.group, Subspace.full(cd.group.p, cd.group.r))
    return cd.group.whole()


def _group_center(cd: CDResult):
    if cd.engine == "class2":
        return c2.center(cd.group)
    return gc.center(cd.group)


def _is_abelian(cd: CDResult, h) -> bool:
    return h.is_abelian() if cd.engine == "class2" else gc.is_abelian(h)


def _is_normal_in(cd: CDResult, k, h) -> bool:
    return k.is_normal_in(h) if cd.engine == "class2" else gc.is_normal(k, h)


def _quotient_elem_abelian(cd: CDResult, h, l) -> bool:
    return h.quotient_is_elementary_abelian(l) if cd.engine == "class2" else gc.quotient_is_elementary_abelian(h, l)


def _standalone_cd(cd: CDResult, h) -> set:
    """CD(H) computed with H as the ambient group, mapped back into G."""
    if cd.engine == "class2":
        pres = cd.group
        sub = pres.restrict(h.w)
        res = c2.cd_lattice_class2(sub)
        out = set()
        for m in res.subgroups:
            vecs = [[sum(c * u[j] for c, u in zip(row, h.w.basis)) % pres.p for j in range(pres.r)] for row in m.w.basis]
            out.add(CentralSubgroup(pres, Subspace.span(pres.p, pres.r, vecs)))
        return out
    sub, els = gc.induced_group(h)
    res = cd_lattice(sub, cap=gc.MAX_CAP)
    return {SubgroupSet(cd.group, gc.bits_of(els[i] for i in m.elements())) for m in res.subgroups}


def cd_to_lattice(cd: CDResult) -> FiniteLattice:
    return from_subgroup_family(cd.subgroups, labels=[describe(h) for h in cd.subgroups])


# --------------------------------------------------------------------- checks

def check_basic_properties(cd: CDResult) -> CheckReport:
    """Products, centralizer of meets, double centralizers, the minimal and maximal members."""
    t0 = time.perf_counter()
    fails = []
    subs = cd.subgroups
    for h, k in itertools.combinations_with_replacement(subs, 2):
        meet = h & k
        join = h.join(k)
        # (1) <H, K> = HK
        if cd.engine == "class2":
            hk_ok = h.order * k.order == join.order * meet.order
        else:
            hk_ok = gc.product_set(h, k) == join.bits
        if not hk_ok:
            fails.append({"property": 1, "H": describe(h), "K": describe(k)})
        # (2) C(H n K) = C(H) C(K)
        ch, ck, cm = _centralizer(cd, h), _centralizer(cd, k), _centralizer(cd, meet)
        if cd.engine == "class2":
            c_ok = cm.w == ch.w + ck.w
        else:
            c_ok = gc.product_set(ch, ck) == cm.bits
        if not c_ok:
            fails.append({"property": 2, "H": describe(h), "K": describe(k)})
    for h in subs:
        # (3) C(C(H)) = H and C(H) in CD(G)
        c = _centralizer(cd, h)
        if c not in cd or _centralizer(cd, c) != h:
            fails.append({"property": 3, "H": describe(h)})
    bottom = cd.minimum.subgroup
    if not _is_abelian(cd, bottom) or not _group_center(cd) <= bottom:
        fails.append({"property": 5, "minimal_member": describe(bottom)})
    top = cd.maximum.subgroup
    if not all(h <= top for h in subs):
        fails.append({"property": 4, "reason": "no unique maximal member"})
    elif _standalone_cd(cd, top) != set(subs):
        fails.append({"property": 4, "reason": "CD(M) differs from CD(G)", "M": describe(top)})
    return _report("basic-properties", _subject(cd), fails, t0, members=len(subs))


def _pairs(n: int, trials: int | None, seed: int) -> tuple[list[tuple[int, int]], bool]:
    if trials is None and n * n <= _MAX_PAIRS:
        return [(i, j) for i in range(n) for j in range(n)], True
    rng = random.Random(seed)
    k = trials or _MAX_PAIRS
    return [(rng.randrange(n), rng.randrange(n)) for _ in range(k)], False


def check_isaacs_inequality(g: CayleyGroup, trials: int | None = None, seed: int = DEFAULT_SEED, cap: int = gc.DEFAULT_CAP) -> CheckReport:
    """m(H) m(K) <= m(<H,K>) m(H n K), with the equality criterion, on subgroup pairs."""
    t0 = time.perf_counter()
    table = measure_table(g, cap)
    index = {m.subgroup: m for m in table}
    pairs, exhaustive = _pairs(len(table), trials, seed)
    fails = []
    equalities = 0
    for i, j in pairs:
        a, b = table[i], table[j]
        h, k = a.subgroup, b.subgroup
        meet, join = index[h & k], index[h.join(k)]
        lhs, rhs = a.measure * b.measure, join.measure * meet.measure
        crit = gc.product_set(h, k) == join.subgroup.bits and gc.product_set(a.centralizer, b.centralizer) == meet.centralizer.bits
        if lhs > rhs:
            fails.append({"H": describe(h), "K": describe(k), "lhs": lhs, "rhs": rhs})
        elif (lhs == rhs) != crit:
            fails.append({"H": describe(h), "K": describe(k), "equality": lhs == rhs, "criterion": crit})
        equalities += lhs == rhs
    info = {"pairs": len(pairs), "exhaustive": exhaustive, "equalities": equalities}
    if not exhaustive:
        info["seed"] = seed
    return _report("isaacs-inequality", g.name, fails, t0, **info)


def check_ratio_lemma(g: CayleyGroup, cap: int = gc.DEFAULT_CAP) -> CheckReport:
    """m_H(K)/m_G(K) <= m_H(H)/m_G(H) on every chain K <= H, by cross-multiplication."""
    t0 = time.perf_counter()
    table = measure_table(g, cap)
    fails = []
    chains = 0
    for mh in table:
        h = mh.subgroup
        hc = gc.product_set(h, mh.centralizer)
        m_hh = h.order * (h.bits & mh.centralizer.bits).bit_count()
        for mk in table:
            k = mk.subgroup
            if not k <= h:
                continue
            chains += 1
            m_hk = k.order * (h.bits & mk.centralizer.bits).bit_count()
            lhs, rhs = m_hk * mh.measure, m_hh * mk.measure
            crit = mk.centralizer.bits & ~hc == 0
            if lhs > rhs or (lhs == rhs) != crit:
                fails.append({"K": describe(k), "H": describe(h), "lhs": lhs, "rhs": rhs, "criterion": crit})
    return _report("ratio-lemma", g.name, fails, t0, chains=chains)


def check_maximal_member_lemma(g: CayleyGroup | Class2Presentation, candidates: Sequence | None = None,
                               cap: int = gc.DEFAULT_CAP) -> CheckReport:
    """Every H with G = H C_G(H) and H in CD(H) lies below the top member of CD(G).

    For a presentation, ``candidates`` are subspaces of F_p^r (default: all).
    """
    t0 = time.perf_counter()
    if isinstance(g, Class2Presentation):
        cd = c2.cd_lattice_class2(g)
        top = cd.maximum.subgroup
        if candidates is None:
            candidates = list(enumerate_subspaces(g.p, g.r))
        hs = [c if isinstance(c, CentralSubgroup) else CentralSubgroup(g, c) for c in candidates]
        full = Subspace.full(g.p, g.r)
        qualifying = [h for h in hs if h.w + c2.perp(g, h.w) == full]
    else:
        cd = cd_lattice(g, cap)
        top = cd.maximum.subgroup
        hs = list(candidates) if candidates is not None else gc.all_subgroups(g, cap)
        qualifying = [h for h in hs if gc.product_set(h, gc.centralizer(g, h)) == g.full_bits]
    fails = []
    applied = 0
    for h in qualifying:
        if h not in _standalone_cd(cd, h):
            continue
        applied += 1
        if not h <= top:
            fails.append({"H": describe(h), "max_member": describe(top)})
    return _report("maximal-member-lemma", _subject(g), fails, t0, candidates=len(hs), hypotheses_met=applied)


def check_interval_theorem(cd: CDResult) -> CheckReport:
    """For each member H, CD(H) computed standalone equals the interval [Z(H), H] of CD(G)."""
    t0 = time.perf_counter()
    fails = []
    for h in cd.subgroups:
        z = _center_of(cd, h)
        if z not in cd:
            fails.append({"H": describe(h), "reason": "Z(H) is not a member"})
            continue
        want = set(cd_interval(cd, z, h))
        got = _standalone_cd(cd, h)
        if got != want:
            fails.append({"H": describe(h), "standalone": len(got), "interval": len(want)})
    return _report("interval-theorem", _subject(cd), fails, t0, members=len(cd))


def _prime_power(n: int) -> tuple[int, int] | None:
    q = gc.prime_of_order(n)
    if q is None:
        return None
    e = 0
    while n > 1:
        n //= q
        e += 1
    return q, e


def check_quasi_antichain_intervals(cd: CDResult) -> CheckReport:
    """Structure of length-2 quasi-antichain intervals and of intervals built from them."""
    t0 = time.perf_counter()
    lat = cd_to_lattice(cd)
    subs = cd.subgroups
    fails = []
    qa = {}
    widths = []
    for lo in range(lat.size):
        for hi in range(lat.size):
            if lo == hi or not lat.leq[lo, hi] or interval_length(lat, lo, hi) != 2:
                continue
            sub, idx = interval(lat, lo, hi)
            w = quasi_antichain_width(sub)
            qa[(lo, hi)] = w
            if w is None or w < 3:
                continue
            widths.append(w)
            l, h = subs[lo], subs[hi]
            atoms = [subs[i] for i in idx if i not in (lo, hi)]
            pp = _prime_power(h.order // l.order)
            problems = []
            if not _is_normal_in(cd, l, h) or not all(_is_normal_in(cd, k, h) for k in atoms):
                problems.append("not normal")
            elif not _quotient_elem_abelian(cd, h, l):
                problems.append("H/L not elementary abelian")
            if pp is None or pp[1] % 2:
                problems.append("|H/L| is not an even prime power")
            else:
                q, e = pp
                a = e // 2
                if any(h.order // k.order != q**a or k.order // l.order != q**a for k in atoms):
                    problems.append("atom indices differ from p^a")
                b = next((b for b in range(1, a + 1) if q**b + 1 == w), None)
                if b is None:
                    problems.append(f"width {w} is not p^b + 1 with b <= a")
            if problems:
                fails.append({"L": describe(l), "H": describe(h), "width": w, "problems": problems})
    # longer intervals all of whose length-2 subintervals are wide quasi-antichains
    long_checked = 0
    for lo in range(lat.size):
        for hi in range(lat.size):
            if lo == hi or not lat.leq[lo, hi]:
                continue
            length = interval_length(lat, lo, hi)
            if length < 3:
                continue
            _, idx = interval(lat, lo, hi)
            inner = [qa.get((x, y)) for x in idx for y in idx if (x, y) in qa]
            if not inner or any(w is None or w < 3 for w in inner):
                continue
            long_checked += 1
            l, h = subs[lo], subs[hi]
            step = {subs[y].order // subs[x].order for x in idx for y in idx if lat.cover[x, y]}
            pp = _prime_power(h.order // l.order)
            ok = len(step) == 1 and pp is not None
            if ok:
                q, e = pp
                sp = _prime_power(step.pop())
                ok = sp is not None and sp[0] == q and e == sp[1] * length
                ok = ok and _is_normal_in(cd, l, h) and _quotient_elem_abelian(cd, h, l)
            if not ok:
                fails.append({"L": describe(l), "H": describe(h), "length": length})
    return _report("quasi-antichain-intervals", _subject(cd), fails, t0,
                   length2_quasi_antichains=len(widths), widths=sorted(set(widths)), longer_intervals=long_checked)


def check_duality(cd: CDResult) -> CheckReport:
    """The centralizer map on CD(G) is an order-reversing involution preserving m*."""
    t0 = time.perf_counter()
    lat = cd_to_lattice(cd)
    mapping = [cd.dual(i) for i in range(len(cd))]
    fails = []
    if not is_order_reversing_involution(lat, mapping):
        fails.append({"reason": "centralizer map is not an order-reversing involution"})
    for i, j in cd.duality:
        m = cd.members[j]
        if m.measure != cd.max_measure:
            fails.append({"member": describe(m.subgroup), "measure": m.measure})
    return _report("duality", _subject(cd), fails, t0, members=len(cd))


def _match_subspace_lattice(lat: FiniteLattice) -> tuple[int, int] | None:
    """(p, n) with lat isomorphic to the subspace lattice of F_p^n, n >= 2, if any."""
    n = lat.height
    if n < 2:
        return None
    k = len(lat.atoms())
    for q in range(2, k + 1):
        if not is_prime(q):
            continue
        if gaussian_binomial(n, 1, q) == k:
            if find_isomorphism(lat, subspace_lattice(q, n)) is not None:
                return q, n
            return None
    return None


def check_theorem_a(g: CayleyGroup | Class2Presentation, cap: int = gc.DEFAULT_CAP) -> CheckReport:
    """If G is in CD(G) and CD(G) is a subspace lattice of rank >= 2, then G = P x Q as described."""
    t0 = time.perf_counter()
    cd = c2.cd_lattice_class2(g) if isinstance(g, Class2Presentation) else cd_lattice(g, cap)
    name = _subject(g)
    if cd.maximum.subgroup != _whole(cd):
        return CheckReport("theorem-a", name, NOT_APPLICABLE, {"hypothesis": "G is not in CD(G)"}, time.perf_counter() - t0)
    match = _match_subspace_lattice(cd_to_lattice(cd))
    if match is None:
        return CheckReport("theorem-a", name, NOT_APPLICABLE,
                           {"hypothesis": "CD(G) is not a subspace lattice of rank >= 2", "members": len(cd)},
                           time.perf_counter() - t0)
    p, n = match
    fails = []
    if isinstance(g, Class2Presentation):
        if g.p != p:
            fails.append({"reason": f"lattice prime {p} differs from group prime {g.p}"})
        for i in range(g.r):
            for j in range(g.r):
                if any(c2.commutator(g, g.generator(i), g.generator(j)).a):
                    fails.append({"reason": "commutator outside the central part", "pair": [i, j]})
        whole = _whole(cd)
        if not whole.quotient_is_elementary_abelian(c2.center(g)):
            fails.append({"reason": "P/Z(P) is not elementary abelian"})
        info = {"p": p, "n": n, "sylow_order": f"{g.p}^{g.order_exponent}", "hall_order": 1}
    else:
        cls = gc.nilpotency_class(g)
        if cls is None or cls > 2:
            fails.append({"reason": "not nilpotent of class <= 2", "class": cls})
        pbits = gc.elements_of_order_dividing_power(g, p)
        qbits = 0
        for x in range(g.order):
            if g.element_order(x) % p:
                qbits |= 1 << x
        P, Q = SubgroupSet(g, pbits), SubgroupSet(g, qbits)
        if not P.is_closed() or not Q.is_closed():
            fails.append({"reason": "Sylow or Hall part is not a subgroup"})
        else:
            if P.order * Q.order != g.order or (P & Q).order != 1 or not gc.is_normal(P) or not gc.is_normal(Q):
                fails.append({"reason": "G is not P x Q"})
            if not gc.is_abelian(Q) or not Q <= gc.center(g):
                fails.append({"reason": "Hall p'-part is not abelian and central"})
            sub, els = gc.induced_group(P)
            zp = gc.center(sub)
            if not gc.quotient_is_elementary_abelian(sub.whole(), zp):
                fails.append({"reason": "P/Z(P) is not elementary abelian"})
            cdp = cd_lattice(sub, cap=gc.MAX_CAP)
            if find_isomorphism(cd_to_lattice(cd), cd_to_lattice(cdp)) is None:
                fails.append({"reason": "CD(G) is not isomorphic to CD(P)"})
        info = {"p": p, "n": n, "sylow_order": P.order, "hall_order": Q.order, "class": cls}
    return _report("theorem-a", name, fails, t0, **info)


def check_theorem_b(p: int, n: int, budget: int = c2.DEFAULT_BUDGET) -> CheckReport:
    """Build G_n over F_p, compute CD(G_n) and match it with the subspace lattice of F_p^n."""
    t0 = time.perf_counter()
    pres = paper_Gn(p, n)
    fails = []
    # special: Z(G) = G' = the central part
    if c2.radical(pres).dim != 0:
        fails.append({"reason": "center is larger than the central part"})
    span = Subspace.span(p, 3, [c2.commutator_form(pres, pres.generator(i).a, pres.generator(j).a)
                                for i in range(pres.r) for j in range(pres.r)])
    if span.dim != 3:
        fails.append({"reason": "derived subgroup is smaller than the central part"})
    cd = c2.cd_lattice_class2(pres, budget)
    exponent = cd.exponent(cd.max_measure)
    if exponent != 3 * n + 6:
        fails.append({"reason": "max measure", "exponent": exponent, "expected": 3 * n + 6})
    whole = _whole(cd)
    if cd.maximum.subgroup != whole:
        fails.append({"reason": "G is not the top member"})
    for i in range(n):
        f = factor(pres, i)
        if f not in cd:
            fails.append({"reason": "factor subgroup is not a member", "factor": i})
        others = Subspace.span(p, pres.r, [e for j in range(n) if j != i for e in factor(pres, j).w.basis])
        if c2.perp(pres, f.w) != others:
            fails.append({"reason": "centralizer of a factor is not the product of the others", "factor": i})
    seen = {}
    for h in cd.subgroups:
        e = h.order_exponent
        if (e - 3) % 3 or not 0 <= (e - 3) // 3 <= n:
            fails.append({"reason": "member order not p^(3m+3)", "member": describe(h)})
        u = underlying_subspace(pres, h)
        if u is None:
            fails.append({"reason": "member is not U_phi(u)", "member": describe(h)})
            continue
        seen[u] = h
        if c2.centralizer(pres, h) != U_phi(pres, dot_perp(u)):
            fails.append({"reason": "centralizer is not U_phi of the perp", "u": [list(v) for v in u.basis]})
    total = subspace_count(n, p)
    if len(cd) != total or len(seen) != total:
        fails.append({"reason": "member count", "members": len(cd), "subspaces": total})
    lat = cd_to_lattice(cd)
    target = subspace_lattice(p, n)
    iso = find_isomorphism(lat, target)
    if iso is None:
        fails.append({"reason": "no lattice isomorphism to the subspace lattice"})
    return _report("theorem-b", f"G_{n}(p={p})", fails, t0, members=len(cd), max_measure_exponent=exponent,
                   isomorphism=iso is not None)


def check_scalar_matrix_lemma(n: int, p: int) -> CheckReport:
    """Solutions of A Z = Z B over all alternating Z are exactly the scalar pairs (n >= 3)."""
    t0 = time.perf_counter()
    sol = scalar_pair_solutions(n, p)
    subject = f"n={n}, p={p}"
    if n < 3:
        return CheckReport("scalar-matrix-lemma", subject, NOT_APPLICABLE,
                           {"hypothesis": "n >= 3", "solution_dim": sol.dim}, time.perf_counter() - t0)
    fails = []
    if sol.dim != 1:
        fails.append({"solution_dim": sol.dim})
    else:
        a, b = split_pair(p, n, sol.basis[0])
        lam = a.entries[0][0]
        if a != b or a != FpMatrix.identity(p, n).scale(lam) or lam == 0:
            fails.append({"reason": "solution is not a scalar pair", "A": [list(r) for r in a.entries]})
    return _report("scalar-matrix-lemma", subject, fails, t0, solution_dim=sol.dim)


def check_cross_engine(pres: Class2Presentation, cap: int = 64) -> CheckReport:
    """Brute-force CD of the explicit Cayley table agrees with the class-2 scan."""
    t0 = time.perf_counter()
    if pres.order > cap:
        return CheckReport("cross-engine", pres.name, NOT_APPLICABLE,
                           {"hypothesis": f"order {pres.order} <= {cap}"}, time.perf_counter() - t0)
    fast = c2.cd_lattice_class2(pres)
    g, elements = c2.to_cayley(pres, cap=max(cap, gc.DEFAULT_CAP))
    slow = cd_lattice(g, cap=max(cap, gc.DEFAULT_CAP))
    fails = []
    if fast.max_measure != slow.max_measure:
        fails.append({"class2": fast.max_measure, "brute": slow.max_measure})
    fast_bits = {c2.preimage_bits(elements, h.w) for h in fast.subgroups}
    slow_bits = {h.bits for h in slow.subgroups}
    if fast_bits != slow_bits:
        fails.append({"only_class2": len(fast_bits - slow_bits), "only_brute": len(slow_bits - fast_bits)})
    return _report("cross-engine", pres.name, fails, t0, members=len(fast), max_measure=fast.max_measure)


CD_CHECKS = {
    "basic-properties": check_basic_properties,
    "interval-theorem": check_interval_theorem,
    "quasi-antichain-intervals": check_quasi_antichain_intervals,
    "duality": check_duality,
}
GROUP_CHECKS = {
    "isaacs-inequality": check_isaacs_inequality,
    "ratio-lemma": check_ratio_lemma,
    "maximal-member-lemma": check_maximal_member_lemma,
    "theorem-a": check_theorem_a,
    "cross-engine": check_cross_engine,
}
PARAM_CHECKS = {
    "theorem-b": check_theorem_b,
    "scalar-matrix-lemma": check_scalar_matrix_lemma,
}
CHECK_NAMES = sorted([*CD_CHECKS, *GROUP_CHECKS, *PARAM_CHECKS])
