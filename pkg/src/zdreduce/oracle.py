"""Brute-force reference implementations for tests.

Everything here enumerates elements explicitly, so it only works at desk
scale. Guards raise :class:`OracleSizeError` instead of truncating.
"""

from __future__ import annotations

import builtins
import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import DimensionError, OracleSizeError
from .lagrangian import Classification
from .linalg import Submodule, ZdMatrix
from .symplectic import SymplecticSpace
from .zmod import Modulus, as_modulus, factorize, order

__all__ = [
    "ElementSet",
    "enumerate",
    "brute_membership",
    "brute_equal",
    "brute_orthogonal",
    "brute_classify",
    "all_vectors",
    "all_submodules",
    "enumerate_symplectic_group",
    "symplectic_group_order",
    "random_symplectic",
    "random_invertible",
    "count_order_preimages",
    "brute_count_order_preimages",
]

LIMIT = 10**6

Vector = tuple[int, ...]


def _guard(count: int, what: str, limit: int = LIMIT):
    if count > limit:
        raise OracleSizeError(f"{what} would need {count} steps (limit {limit})")


def _omega(x: Sequence[int], y: Sequence[int], d: int) -> int:
    return sum(x[2 * m] * y[2 * m + 1] - x[2 * m + 1] * y[2 * m] for m in range(len(x) // 2)) % d


@dataclass(frozen=True)
class ElementSet:
    """All elements of a submodule of Z_d^n, sorted."""

    modulus: Modulus
    ambient: int
    elements: tuple[Vector, ...]

    def __post_init__(self):
        d = self.modulus.d
        members = set(self.elements)
        zero = (0,) * self.ambient
        if zero not in members:
            raise ValueError("element set does not contain 0")
        for x in self.elements:
            if tuple(-a % d for a in x) not in members:
                raise ValueError("element set is not closed under negation")
        if len(self.elements) <= 4096:
            for x, y in itertools.product(self.elements, repeat=2):
                if tuple((a + b) % d for a, b in zip(x, y)) not in members:
                    raise ValueError("element set is not closed under addition")

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return tuple(int(a) % self.modulus.d for a in x) in self._set

    @property
    def _set(self) -> frozenset:
        return frozenset(self.elements)

    def __iter__(self):
        return iter(self.elements)


def _span(generators: Iterable[Sequence[int]], n: int, d: int) -> frozenset:
    current = {(0,) * n}
    for g in generators:
        g = tuple(a % d for a in g)
        multiples = {tuple(c * a % d for a in g) for c in range(order(math.gcd(d, *g), d))}
        current = {tuple((a + b) % d for a, b in zip(x, m)) for x in current for m in multiples}
    return frozenset(current)


def enumerate(S: Submodule, limit: int = LIMIT) -> ElementSet:  # noqa: A001
    """Every element of ``S``. Shadows the builtin inside this module on purpose."""
    d = S.mod.d
    _guard(d ** S.basis.cols, "enumerating the coefficient tuples", limit)
    elements = _span(S.basis.columns(), S.ambient, d)
    return ElementSet(S.mod, S.ambient, tuple(sorted(elements)))


def brute_membership(x, S: Submodule) -> bool:
    return tuple(x) in enumerate(S)


def brute_equal(S: Submodule, T: Submodule) -> bool:
    if S.ambient != T.ambient or S.mod.d != T.mod.d:
        raise DimensionError("submodules live in different spaces")
    return enumerate(S).elements == enumerate(T).elements


def all_vectors(n: int, mod, limit: int = LIMIT) -> Iterable[Vector]:
    d = int(mod)
    _guard(d**n, "listing the ambient space", limit)
    return itertools.product(range(d), repeat=n)


def brute_orthogonal(S: Submodule, space: SymplecticSpace, limit: int = LIMIT) -> ElementSet:
    """All ``x`` with ``omega(x, m) == 0`` for every generator ``m``."""
    d = space.d
    gens = S.basis.columns()
    out = tuple(x for x in all_vectors(space.dim, d, limit) if all(_omega(x, g, d) == 0 for g in gens))
    return ElementSet(S.mod, space.dim, out)


def brute_classify(S: Submodule, space: SymplecticSpace) -> Classification:
    M = set(enumerate(S).elements)
    P = set(brute_orthogonal(S, space).elements)
    zero = {(0,) * space.dim}
    return Classification(
        isotropic=M <= P,
        coisotropic=P <= M,
        symplectic=(M & P) == zero,
        lagrangian=M == P,
    )


def all_submodules(mod, n: int, limit: int = 4096) -> list[Submodule]:
    """One generating matrix for every submodule of Z_d^n, smallest first."""
    mod = as_modulus(mod)
    d = mod.d
    _guard(d**n, "listing submodules", limit)
    vectors = list(itertools.product(range(d), repeat=n))
    zero = frozenset({(0,) * n})
    found = {zero: ()}
    frontier = [zero]
    while frontier:
        nxt = []
        for elements in frontier:
            gens = found[elements]
            for v in vectors:
                if v in elements:
                    continue
                bigger = frozenset(
                    tuple((a + b) % d for a, b in zip(x, y)) for x in elements for y in _span([v], n, d)
                )
                if bigger not in found:
                    found[bigger] = gens + (v,)
                    nxt.append(bigger)
        frontier = nxt
    out = sorted(found.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
    return [Submodule(ZdMatrix.from_columns(list(g), mod, n)) for _, g in out]


def enumerate_symplectic_group(space: SymplecticSpace, limit: int = LIMIT) -> list[ZdMatrix]:
    """Every ``L`` with ``L^T J L == J``, built column by column."""
    d, dim = space.d, space.dim
    _guard(d ** (dim * dim), "enumerating all matrices", limit)
    J = space.J.tolist()
    vectors = list(itertools.product(range(d), repeat=dim))
    out = []

    def extend(cols):
        k = len(cols)
        if k == dim:
            out.append(ZdMatrix.from_columns(cols, space.mod, dim))
            return
        for v in vectors:
            if all(_omega(c, v, d) == J[a][k] % d for a, c in builtins.enumerate(cols)):
                extend(cols + [v])

    extend([])
    return out


def symplectic_group_order(n: int, d: int) -> int:
    """``|Sp(2n, Z_d)|`` from the classical formula over each Chinese factor."""
    total = 1
    for p, s in factorize(d):
        over_field = p ** (n * n) * math.prod(p ** (2 * i) - 1 for i in range(1, n + 1))
        # the kernel of reduction mod p has p^dim elements per extra power
        total *= over_field * p ** ((s - 1) * n * (2 * n + 1))
    return total


def random_invertible(n: int, mod, rng: random.Random) -> ZdMatrix:
    """A random invertible ``n x n`` matrix, as a product of elementary moves."""
    mod = as_modulus(mod)
    d = mod.d
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n + 2):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            c = rng.randrange(d)
            for row in M:
                row[j] = (row[j] + c * row[i]) % d
        else:
            u = rng.randrange(1, d)
            while math.gcd(u, d) != 1:
                u = rng.randrange(1, d)
            for row in M:
                row[i] = row[i] * u % d
    perm = list(range(n))
    rng.shuffle(perm)
    return ZdMatrix([[row[k] for k in perm] for row in M], mod, n, n)


def random_symplectic(space: SymplecticSpace, rng: random.Random, steps: Optional[int] = None) -> ZdMatrix:
    """A random symplectic matrix: a product of transvections and pair swaps.

    A transvection ``x -> x + c omega(v, x) v`` preserves the form for any
    ``v`` and ``c``.
    """
    d, dim = space.d, space.dim
    M = [[int(i == j) for j in range(dim)] for i in range(dim)]
    for _ in range(steps if steps is not None else 2 * dim + 2):
        v = [rng.randrange(d) for _ in range(dim)]
        c = rng.randrange(d)
        for col in range(dim):
            x = [M[r][col] for r in range(dim)]
            w = c * _omega(v, x, d)
            for r in range(dim):
                M[r][col] = (M[r][col] + w * v[r]) % d
    if space.n > 1:
        perm = list(range(space.n))
        rng.shuffle(perm)
        M = [M[2 * perm[r // 2] + r % 2] for r in range(dim)]
    return ZdMatrix(M, space.mod, dim, dim)


def _levels_and_r(r_levels: Sequence[int], r: Optional[int]) -> int:
    total = sum(r_levels)
    if r is None:
        return total
    if r < total:
        raise ValueError(f"r = {r} is smaller than the sum of the levels {total}")
    return r


def count_order_preimages(r_levels: Sequence[int], p: int, s: int, i: int, r: Optional[int] = None) -> int:
    """Number of ``X`` in ``(Z/p^s)^r`` with ``D X`` of order ``p^(s-i)``.

    ``D`` is diagonal with ``r_levels[k]`` entries of valuation ``k`` for
    ``k < s`` and zeros in the remaining ``r - sum(r_levels)`` slots.
    """
    if len(r_levels) != s:
        raise ValueError(f"expected {s} level counts, got {len(r_levels)}")
    r = _levels_and_r(r_levels, r)
    free = p ** (s * (r - sum(r_levels)))
    if i == s:
        return math.prod(p ** (k * rk) for k, rk in builtins.enumerate(r_levels)) * free
    if not 0 <= i < s:
        raise ValueError(f"i must lie in 0..{s}")
    total = 0
    for j in range(i + 1):
        below = math.prod(p ** ((s - 1 - (i - k)) * r_levels[k]) for k in range(j))
        at = p ** ((s - 1 - (i - j - 1)) * r_levels[j]) - p ** ((s - 1 - (i - j)) * r_levels[j])
        above = math.prod(p ** ((s - 1 - (i - k - 1)) * r_levels[k]) for k in range(j + 1, i + 1))
        total += below * at * above
    return total * math.prod(p ** (s * r_levels[m]) for m in range(i + 1, s)) * free


def brute_count_order_preimages(r_levels: Sequence[int], p: int, s: int, i: int, r: Optional[int] = None) -> int:
    r = _levels_and_r(r_levels, r)
    q = p**s
    diag = [p**k for k, rk in builtins.enumerate(r_levels) for _ in range(rk)]
    diag += [0] * (r - len(diag))
    target = p ** (s - i)
    _guard(q**r, "counting preimages")
    count = 0
    for X in itertools.product(range(q), repeat=r):
        y = [a * x % q for a, x in zip(diag, X)]
        if order(math.gcd(q, *y), q) == target:
            count += 1
    return count

