"""Builders for the groups used throughout: small classical groups, extraspecial
groups, the rank-3 special group P and the central powers G_n of P.

G_n uses generators x_1, y_1, w_1, ..., x_n, y_n, w_n in that collected order
(index 3i, 3i+1, 3i+2 for copy i) with [x_i, y_i] = z_1, [y_i, w_i] = z_2,
[w_i, x_i] = z_3 and all generators of order p.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .class2 import CentralSubgroup, Class2Presentation, PElement, multiply, power, to_cayley
from .fp_linalg import Subspace, is_prime
from .group_core import CayleyGroup, central_product, direct_product


class RecipeError(ValueError):
    pass


@dataclass(frozen=True)
class GroupRecipe:
    name: str
    params: dict = field(hash=False)
    product: CayleyGroup | Class2Presentation = field(hash=False, compare=False)

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        args = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.name}({args})"


def cyclic(n: int) -> CayleyGroup:
    if n < 1:
        raise RecipeError("cyclic group needs n >= 1")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return CayleyGroup(table, [f"a^{i}" if i > 1 else ("a" if i else "1") for i in range(n)], name=f"C{n}")


def elementary_abelian(p: int, n: int) -> CayleyGroup:
    if not is_prime(p) or n < 0:
        raise RecipeError("elementary_abelian needs prime p and n >= 0")
    g = CayleyGroup([[0]], ["1"], name="C1")
    for _ in range(n):
        g = direct_product(g, cyclic(p))
    g.name = f"E{p}^{n}"
    return g


def dihedral(n: int) -> CayleyGroup:
    """Dihedral group of order n; element r^i s^j at index i + (n/2) j."""
    if n < 4 or n % 2:
        raise RecipeError("dihedral order must be even and >= 4")
    m = n // 2
    table = [[0] * n for _ in range(n)]
    for i, a, k, b in itertools.product(range(m), range(2), range(m), range(2)):
        table[i + m * a][k + m * b] = (i + (-1) ** a * k) % m + m * ((a + b) % 2)
    labels = [_word({"r": i, "s": j}) for j in range(2) for i in range(m)]
    return CayleyGroup(table, labels, name=f"D{n}")


def quaternion(n: int = 8) -> CayleyGroup:
    """Generalized quaternion group of order n = 2^k >= 8; a^i b^j at index i + (n/2) j."""
    if n < 8 or n & (n - 1):
        raise RecipeError("quaternion order must be a power of 2, at least 8")
    m = n // 2
    table = [[0] * n for _ in range(n)]
    for i, a, k, b in itertools.product(range(m), range(2), range(m), range(2)):
        e = i + (-1) ** a * k + (m // 2 if a and b else 0)
        table[i + m * a][k + m * b] = e % m + m * ((a + b) % 2)
    labels = [_word({"a": i, "b": j}) for j in range(2) for i in range(m)]
    return CayleyGroup(table, labels, name=f"Q{n}")


def symmetric3() -> CayleyGroup:
    perms = list(itertools.permutations(range(3)))
    pos = {q: i for i, q in enumerate(perms)}
    # (f*g)(x) = f(g(x))
    table = [[pos[tuple(f[g[x]] for x in range(3))] for g in perms] for f in perms]
    return CayleyGroup(table, ["".join(map(str, q)) for q in perms], name="S3")


def _word(exps: dict) -> str:
    parts = [f"{k}^{v}" if v > 1 else k for k, v in exps.items() if v]
    return "".join(parts) or "1"


def extraspecial_presentation(p: int, n: int, kind: str = "plus") -> Class2Presentation:
    """Extraspecial group of order p^{2n+1} as a class-2 presentation.

    Generator pairs (2i, 2i+1) commute to z.  ``kind='minus'`` makes the first
    pair quaternion (p = 2) or gives its first generator order p^2 (odd p).
    """
    if not is_prime(p) or n < 1:
        raise RecipeError("extraspecial needs prime p and n >= 1")
    if kind not in ("plus", "minus"):
        raise RecipeError("kind must be 'plus' or 'minus'")
    comms = [(2 * i, 2 * i + 1, [1]) for i in range(n)]
    powers = [[0] for _ in range(2 * n)]
    if kind == "minus":
        powers[0] = [1]
        if p == 2:
            powers[1] = [1]
    return Class2Presentation(p, 2 * n, 1, comms, powers, name=f"ES{p}^{2 * n + 1}{'+' if kind == 'plus' else '-'}")


def extraspecial(p: int, n: int, kind: str = "plus") -> CayleyGroup:
    """Extraspecial Cayley group as a central product of n factors of order p^3.

    For p = 2 the factors are D8 (and one Q8 for ``kind='minus'``); for odd p
    they are the order-p^3 groups of exponent p (and p^2 for the first factor
    when ``kind='minus'``).
    """
    if not is_prime(p) or n < 1:
        raise RecipeError("extraspecial needs prime p and n >= 1")
    if kind not in ("plus", "minus"):
        raise RecipeError("kind must be 'plus' or 'minus'")
    factors, centers = [], []
    for i in range(n):
        k = "minus" if kind == "minus" and i == 0 else "plus"
        if p == 2:
            f = quaternion(8) if k == "minus" else dihedral(8)
            z = 2  # r^2 resp. a^2
            zs = [f.identity, z]
        else:
            f, elements = to_cayley(extraspecial_presentation(p, 1, k))
            zi = elements.index(PElement((0, 0), (1,)))
            zs = [f.identity] + [f.power(zi, t) for t in range(1, p)]
        factors.append(f)
        centers.append(zs)
    g = central_product(factors, centers) if n > 1 else factors[0]
    g.name = f"ES{p}^{2 * n + 1}{'+' if kind == 'plus' else '-'}"
    return g


def paper_P(p: int) -> Class2Presentation:
    return paper_Gn(p, 1, name=f"P({p})")


def paper_Gn(p: int, n: int, name: str | None = None) -> Class2Presentation:
    """Central product of n copies of P: r = 3n, s = 3, block-diagonal commutators."""
    if not is_prime(p) or n < 1:
        raise RecipeError("paper_Gn needs prime p and n >= 1")
    comms = []
    for i in range(n):
        x, y, w = 3 * i, 3 * i + 1, 3 * i + 2
        comms += [(x, y, [1, 0, 0]), (y, w, [0, 1, 0]), (w, x, [0, 0, 1])]
    return Class2Presentation(p, 3 * n, 3, comms, None, name=name or f"G_{n}({p})")


BUILDERS = {
    "cyclic": (cyclic, ("n",)),
    "elementary_abelian": (elementary_abelian, ("p", "n")),
    "dihedral": (dihedral, ("n",)),
    "quaternion": (quaternion, ("n",)),
    "symmetric3": (symmetric3, ()),
    "extraspecial": (extraspecial, ("p", "n", "kind")),
    "extraspecial_class2": (extraspecial_presentation, ("p", "n", "kind")),
    "paper_P": (paper_P, ("p",)),
    "paper_Gn": (paper_Gn, ("p", "n")),
}


def build(name: str, **params) -> GroupRecipe:
    try:
        fn, allowed = BUILDERS[name]
    except KeyError:
        raise RecipeError(f"unknown group name {name!r}; known: {', '.join(sorted(BUILDERS))}") from None
    extra = set(params) - set(allowed)
    if extra:
        raise RecipeError(f"{name} does not take parameter(s) {sorted(extra)}")
    try:
        product = fn(**params)
    except TypeError as exc:
        raise RecipeError(f"bad parameters for {name}: {exc}") from None
    return GroupRecipe(name, dict(params), product)


def _gn_info(recipe: GroupRecipe | Class2Presentation) -> tuple[Class2Presentation, int]:
    if isinstance(recipe, GroupRecipe):
        if recipe.name not in ("paper_Gn", "paper_P"):
            raise RecipeError("v_phi/U_phi need a paper_Gn recipe")
        pres = recipe.product
    else:
        pres = recipe
    if pres.s != 3 or pres.r % 3:
        raise RecipeError("presentation is not of paper_Gn shape")
    return pres, pres.r // 3


def lifts(p: int, n: int, v: Sequence[int]) -> list[tuple[int, ...]]:
    """Exponent vectors of alpha_v, beta_v, gamma_v in F_p^{3n}."""
    if len(v) != n:
        raise RecipeError(f"vector must have length {n}")
    out = []
    for offset in range(3):
        a = [0] * (3 * n)
        for i, si in enumerate(v):
            a[3 * i + offset] = int(si) % p
        out.append(tuple(a))
    return out


def phi_elements(recipe, v: Sequence[int]) -> list[PElement]:
    """alpha_v, beta_v, gamma_v as actual group elements: products of generator powers."""
    pres, n = _gn_info(recipe)
    out = []
    for offset in range(3):
        g = pres.identity()
        for i, si in enumerate(v):
            g = multiply(pres, g, power(pres, pres.generator(3 * i + offset), int(si) % pres.p))
        out.append(g)
    return out


def v_phi(recipe, v: Sequence[int]) -> CentralSubgroup:
    pres, n = _gn_info(recipe)
    return CentralSubgroup(pres, Subspace.span(pres.p, pres.r, lifts(pres.p, n, v)))


def U_phi(recipe, u: Subspace) -> CentralSubgroup:
    pres, n = _gn_info(recipe)
    if u.p != pres.p or u.ambient_dim != n:
        raise RecipeError(f"subspace must live in F_{pres.p}^{n}")
    vecs = [x for b in u.basis for x in lifts(pres.p, n, b)]
    return CentralSubgroup(pres, Subspace.span(pres.p, pres.r, vecs))


def factor(recipe, i: int) -> CentralSubgroup:
    """The i-th copy <x_i, y_i, w_i> of P (times the center), 0-based."""
    pres, n = _gn_info(recipe)
    return v_phi(pres, [int(k == i) for k in range(n)])


def underlying_subspace(recipe, h: CentralSubgroup) -> Subspace | None:
    """The subspace u of F_p^n with U_phi(u) = h, or None if there is none."""
    pres, n = _gn_info(recipe)
    p = pres.p
    # candidate u: read off the x-coordinates of the member's vectors
    xs = Subspace.span(p, n, [[vec[3 * i] for i in range(n)] for vec in h.w.basis])
    return xs if U_phi(pres, xs) == h else None
