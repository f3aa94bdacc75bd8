"""Simple reduction of basis matrices over Z/dZ.

The central routine is :func:`d0`, which brings a ``k x l`` matrix ``B`` to
a diagonal ``D = L B R`` whose diagonal entries divide each other in turn.
It is assembled from two building blocks:

* :func:`reduce_vector` sends one vector onto a multiple of ``e_1`` with a
  cascade of determinant-one 2x2 blocks;
* :func:`max_order_combination` mixes two vectors into one whose order is
  the lcm of theirs, which :func:`algorithm_A` folds over all columns.

All indices in this module are 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import CompositeModulusError, DimensionError
from .linalg import Submodule, ZdMatrix, inverse, is_invertible, membership
from .zmod import (
    Modulus,
    bezout_invertible,
    crt_join,
    divide,
    egcd,
    vp,
)

__all__ = [
    "ReductionCertificate",
    "reduce_vector",
    "max_order_combination",
    "algorithm_A",
    "algorithm_A_ij",
    "d0",
    "simple_reduce",
    "characteristic_sequence",
    "build_isomorphism",
    "k_levels",
    "sigma_d_contains",
]


@dataclass(frozen=True)
class ReductionCertificate:
    """Change-of-basis matrices witnessing ``L @ source @ R == D``.

    ``rents`` and ``pivots`` are only filled in by the symplectic reduction,
    where ``D`` is a staircase rather than a diagonal matrix.
    """

    L: ZdMatrix
    R: ZdMatrix
    D: ZdMatrix
    source: ZdMatrix
    rents: tuple = ()
    permutation: Optional[tuple[int, ...]] = None
    pivots: tuple = ()

    def verify(self) -> bool:
        """Re-multiply and check that both transforms are invertible."""
        return (
            self.L @ self.source @ self.R == self.D
            and is_invertible(self.L)
            and is_invertible(self.R)
        )

    @property
    def diagonal(self) -> list[int]:
        return self.D.diagonal()

    @property
    def rank(self) -> int:
        """Number of nonzero diagonal entries (meaningful for :func:`d0` output)."""
        return sum(1 for x in self.D.diagonal() if x)

    def has_divisibility_chain(self) -> bool:
        d = self.D.d
        gs = [math.gcd(x, d) for x in self.D.diagonal()]
        return self.D.is_diagonal() and all(b % a == 0 for a, b in zip(gs, gs[1:]))


# -- in-place kernels on lists of lists ------------------------------------


def _row_op(M, i, j, a, b, c, e, d):
    """Rows (i, j) <- [[a, b], [c, e]] @ rows (i, j)."""
    ri, rj = M[i], M[j]
    for t in range(len(ri)):
        x, y = ri[t], rj[t]
        ri[t] = (a * x + b * y) % d
        rj[t] = (c * x + e * y) % d


def _col_op(M, i, j, a, b, c, e, d):
    """Columns (i, j) <- columns (i, j) @ [[a, b], [c, e]]."""
    for row in M:
        x, y = row[i], row[j]
        row[i] = (a * x + c * y) % d
        row[j] = (b * x + e * y) % d


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _vector_cascade(a: Sequence[int], d: int):
    """Bezout blocks for ``a``: list of (i, block) with rows (i, i+1) acted on.

    Returns the blocks in application order and the final first component.
    """
    n = len(a)
    if n == 0:
        return [], 0
    ops = []
    delta = a[n - 1] % d
    for i in range(n - 2, -1, -1):
        ai = a[i] % d
        if delta == 0:
            delta = ai
            continue
        g, k, l = egcd(ai, delta)
        # det = (k*ai + l*delta) / g = 1
        ops.append((i, (k, l, -(delta // g), ai // g)))
        delta = g
    return ops, delta % d


def _combination_transform(a1: Sequence[int], a2: Sequence[int], mod: Modulus):
    """Invertible 2x2 ``T`` with ``(a1|a2) @ T`` having a first column of lcm order."""
    d = mod.d
    ops, k = _vector_cascade(a1, d)
    # first coordinate of L a2
    w = list(a2)
    for i, (p0, p1, p2, p3) in ops:
        x, y = w[i], w[i + 1]
        w[i], w[i + 1] = p0 * x + p1 * y, p2 * x + p3 * y
    k1 = w[0] % d if w else 0
    parts = []
    for p, s in mod.factors:
        q = p**s
        n1 = q // math.gcd(q, *a1) if a1 else 1
        n2 = q // math.gcd(q, *a2) if a2 else 1
        if n2 == 1:
            T = (1, 0, 0, 1)
        elif n1 == 1:
            T = (0, 1, 1, 0)
        elif p == 2:
            # keep whichever vector already has the larger order
            T = (1, 0, 0, 1) if n1 >= n2 else (0, 1, 1, 0)
        else:
            u, v, _, _ = bezout_invertible(k % q, k1 % q, q)
            T = (u, 0, v, pow(u, -1, q))
        parts.append(T)
    if len(parts) == 1:
        return tuple(x % d for x in parts[0])
    return tuple(crt_join([t[idx] for t in parts], mod) for idx in range(4))


# -- public building blocks -------------------------------------------------


def reduce_vector(a: ZdMatrix) -> tuple[ZdMatrix, int]:
    """Determinant-one ``L`` and scalar ``k`` with ``L @ a == k e_1``."""
    if a.cols != 1:
        raise DimensionError("reduce_vector expects a single column")
    d, n = a.d, a.rows
    ops, k = _vector_cascade(a.column(0), d)
    L = _identity(n)
    for i, (p0, p1, p2, p3) in ops:
        _row_op(L, i, i + 1, p0, p1, p2, p3, d)
    return ZdMatrix(L, a.mod, n, n), k


def max_order_combination(a1: ZdMatrix, a2: ZdMatrix) -> tuple[ZdMatrix, int, ZdMatrix]:
    """Combine two vectors into one of order ``lcm(order(a1), order(a2))``.

    Returns ``(a, replaced, T)`` where ``(a1|a2) @ T`` has first column ``a``
    and ``replaced`` (1 or 2) names the original vector that ``a`` can stand
    in for: the other one together with ``a`` still spans ``<a1, a2>``.
    """
    if a1.cols != 1 or a2.cols != 1 or a1.rows != a2.rows:
        raise DimensionError("max_order_combination expects two columns of equal length")
    a1._check_mod(a2)
    mod = a1.mod
    t = _combination_transform(a1.column(0), a2.column(0), mod)
    T = ZdMatrix([[t[0], t[1]], [t[2], t[3]]], mod)
    pair = a1.hstack(a2)
    a = (pair @ T).select_columns([0])
    if membership(a2, Submodule(a.hstack(a1))):
        return a, 2, T
    return a, 1, T


def _algorithm_A_inplace(B, row0, col0, R, d, mod):
    """Fold max orders into column ``col0`` using rows ``row0..`` as the order structure."""
    rows, cols = len(B), len(B[0]) if B else 0
    for j in range(col0 + 1, cols):
        c1 = [B[i][col0] for i in range(row0, rows)]
        c2 = [B[i][j] for i in range(row0, rows)]
        if not any(c2):
            continue
        t = _combination_transform(c1, c2, mod)
        if t == (1, 0, 0, 1):
            continue
        _col_op(B, col0, j, *t, d)
        _col_op(R, col0, j, *t, d)


def algorithm_A(B: ZdMatrix) -> tuple[ZdMatrix, ZdMatrix]:
    """Right-multiply ``B`` so that its first column has the largest order in its span."""
    return algorithm_A_ij(B, 0, 0)


def algorithm_A_ij(B: ZdMatrix, i: int, j: int) -> tuple[ZdMatrix, ZdMatrix]:
    """:func:`algorithm_A` driven by the ``(i.., j..)`` submatrix.

    Only columns ``j..`` are touched, and they are combined as full columns.
    """
    if not (0 <= i < max(B.rows, 1) and 0 <= j < max(B.cols, 1)):
        raise IndexError(f"({i}, {j}) outside a {B.rows}x{B.cols} matrix")
    d = B.d
    M = B.tolist()
    R = _identity(B.cols)
    if B.cols:
        _algorithm_A_inplace(M, i, j, R, d, B.mod)
    return ZdMatrix(M, B.mod, B.rows, B.cols), ZdMatrix(R, B.mod, B.cols, B.cols)


def _d0_lists(M, d, mod, cols=None):
    """Diagonalise ``M`` in place; return lists ``L`` and ``R``."""
    k = len(M)
    l = len(M[0]) if k else (cols or 0)
    L, R = _identity(k), _identity(l)
    for t in range(min(k, l)):
        _algorithm_A_inplace(M, t, t, R, d, mod)
        ops, _ = _vector_cascade([M[i][t] for i in range(t, k)], d)
        for i, blk in ops:
            _row_op(M, t + i, t + i + 1, *blk, d)
            _row_op(L, t + i, t + i + 1, *blk, d)
        pivot = M[t][t]
        for j in range(t + 1, l):
            if M[t][j]:
                c = divide(M[t][j], pivot, d)
                for row in (M, R):
                    for r in row:
                        r[j] = (r[j] - c * r[t]) % d
    return L, R


def d0(B: ZdMatrix) -> ReductionCertificate:
    """Diagonal reduction ``L @ B @ R == D`` with a divisibility chain on ``D``."""
    M = B.tolist()
    L, R = _d0_lists(M, B.d, B.mod, B.cols)
    return ReductionCertificate(
        L=ZdMatrix(L, B.mod, B.rows, B.rows),
        R=ZdMatrix(R, B.mod, B.cols, B.cols),
        D=ZdMatrix(M, B.mod, B.rows, B.cols),
        source=B,
    )


def simple_reduce(S: Submodule) -> tuple[ReductionCertificate, ZdMatrix]:
    """Run :func:`d0` and keep the nonzero diagonal columns.

    Returns the certificate and a minimal basis of ``S`` (``L^-1`` times the
    truncated diagonal), whose column count is the rank of ``S``.
    """
    cert = d0(S.basis)
    r = cert.rank
    reduced = cert.D.select_columns(range(r))
    return cert, inverse(cert.L) @ reduced


def characteristic_sequence(S: Submodule) -> tuple[int, ...]:
    """The sequence ``d / order(b_ii)`` of the simple reduction of ``S``."""
    cert = d0(S.basis)
    d = S.mod.d
    return tuple(math.gcd(x, d) for x in cert.D.diagonal() if x)


def build_isomorphism(S: Submodule, T: Submodule) -> Optional[ZdMatrix]:
    """An automorphism ``A`` of Z_d^n with ``A S == T``, or None if none exists."""
    if S.ambient != T.ambient or S.mod.d != T.mod.d:
        raise DimensionError("submodules live in different spaces")
    cs, ct = d0(S.basis), d0(T.basis)
    d = S.mod.d
    seq_s = [math.gcd(x, d) for x in cs.D.diagonal() if x]
    seq_t = [math.gcd(x, d) for x in ct.D.diagonal() if x]
    if seq_s != seq_t:
        return None
    # both L's send their module onto the span of the same diagonal
    return inverse(ct.L) @ cs.L


def _prime_of(mod: Modulus, p: Optional[int] = None) -> tuple[int, int]:
    if not mod.is_prime_power:
        raise CompositeModulusError(f"d = {mod.d} is not a prime power; split it by CRT first")
    q, s = mod.factors[0]
    if p is not None and p != q:
        raise CompositeModulusError(f"d = {mod.d} is not a power of {p}")
    return q, s


def k_levels(S: Submodule, p: Optional[int] = None) -> list[int]:
    """Level ``kappa(i)`` of every ambient index: the valuation of the i-th diagonal entry.

    Indices beyond the rank sit at level ``s``.
    """
    p, s = _prime_of(S.mod, p)
    cert = d0(S.basis)
    diag = cert.D.diagonal()
    return [vp(diag[i], p, S.mod) if i < len(diag) else s for i in range(S.ambient)]


def sigma_d_contains(P: ZdMatrix, S: Submodule, p: Optional[int] = None) -> bool:
    """Whether ``P`` keeps the convenient pairs of ``S`` convenient.

    ``P`` must be invertible and every entry ``P[j][k]`` whose row sits at a
    higher level than its column must be divisible by ``p`` to the level gap.
    """
    p, s = _prime_of(S.mod, p)
    if P.rows != S.ambient or P.cols != S.ambient:
        raise DimensionError("P must be n x n")
    if not is_invertible(P):
        return False
    kappa = k_levels(S, p)
    n = S.ambient
    for j in range(n):
        for k in range(n):
            gap = kappa[j] - kappa[k]
            if gap > 0 and vp(P[j, k], p, S.mod) < gap:
                return False
    return True
