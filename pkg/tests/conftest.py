import itertools

import pytest

from cdlattice import constructions as cons
from cdlattice.group_core import CayleyGroup


def matrix_group(p: int) -> CayleyGroup:
    """Upper unitriangular 3x3 matrices over F_p, built from matrix products.

    Independent of the class-2 collector, so it serves as an oracle for the
    extraspecial group of order p^3 and exponent p (odd p).
    """
    mats = [(a, b, c) for a, b, c in itertools.product(range(p), repeat=3)]
    pos = {m: i for i, m in enumerate(mats)}

    def mul(x, y):
        # [[1,a,c],[0,1,b],[0,0,1]] stored as (a, b, c)
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2] + x[0] * y[1]) % p)

    table = [[pos[mul(x, y)] for y in mats] for x in mats]
    return CayleyGroup(table, [str(m) for m in mats], name=f"UT3({p})")


def brute_subgroups(g: CayleyGroup, k: int = 2) -> list[frozenset]:
    """Every subgroup generated by at most ``k`` elements, plus G itself.

    Plain Python over the table: the closure of a generating set under right
    multiplication by the generators.  An oracle for the engine's enumeration
    on groups whose proper subgroups are all k-generated.
    """
    n = g.order
    out = {frozenset(range(n))}
    for gens in itertools.combinations_with_replacement(range(n), k):
        s = {g.identity}
        frontier = [g.identity]
        while frontier:
            x = frontier.pop()
            for y in gens:
                z = g.mul(x, y)
                if z not in s:
                    s.add(z)
                    frontier.append(z)
        out.add(frozenset(s))
    return sorted(out, key=lambda h: (len(h), sorted(h)))


def brute_cd(g: CayleyGroup, k: int = 2):
    """(m*, members) by direct counting over the table."""
    subs = brute_subgroups(g, k)
    n = g.order

    def cent(h):
        return frozenset(x for x in range(n) if all(g.mul(x, y) == g.mul(y, x) for y in h))

    ms = [(len(h) * len(cent(h)), h) for h in subs]
    best = max(m for m, _ in ms)
    return best, {h for m, h in ms if m == best}


@pytest.fixture(scope="session")
def d8():
    return cons.dihedral(8)


@pytest.fixture(scope="session")
def q8():
    return cons.quaternion(8)


@pytest.fixture(scope="session")
def s3():
    return cons.symmetric3()


@pytest.fixture(scope="session")
def es32_plus():
    return cons.extraspecial(2, 2, "plus")


@pytest.fixture(scope="session")
def es32_minus():
    return cons.extraspecial(2, 2, "minus")


# acceptance criteria record (criterion, ok, detail) here; printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
