"""Symplectic structure on Z_d^{2n} and symplectic reduction of basis matrices.

The form is the block-diagonal ``J_n`` built from ``[[0, 1], [-1, 0]]``, so
coordinates ``(2m, 2m+1)`` (0-based) form a symplectic pair.

:func:`symplectic_reduce` is the analogue of the simple reduction where
left multiplications must be symplectic. It cannot always diagonalise: on
some second rows of a pair it leaves a *rent*, a row whose trailing entries
could not be cleared. Those rows are reported as :class:`RentRecord`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import CompositeModulusError, DimensionError, ZdError
from .linalg import ZdMatrix
from .reduce import ReductionCertificate, _d0_lists, _algorithm_A_inplace, _identity, _vector_cascade
from .zmod import (
    Modulus,
    as_modulus,
    bezout_invertible,
    divide,
    egcd,
    multi_bezout,
    unit_inverse,
    vp,
)

__all__ = [
    "SymplecticSpace",
    "RentRecord",
    "symplectic_form",
    "omega",
    "is_symplectic_matrix",
    "substep1",
    "substep2",
    "substep3",
    "substep4",
    "trigonalisable",
    "symplectic_reduce",
    "symplectic_reduce_factors",
    "check_shape",
]


def symplectic_form(n: int, mod) -> ZdMatrix:
    """The ``2n x 2n`` matrix ``J_n``."""
    mod = as_modulus(mod)
    J = [[0] * (2 * n) for _ in range(2 * n)]
    for m in range(n):
        J[2 * m][2 * m + 1] = 1
        J[2 * m + 1][2 * m] = -1
    return ZdMatrix(J, mod, 2 * n, 2 * n)


@dataclass(frozen=True)
class SymplecticSpace:
    """Z_d^{2n} equipped with the canonical symplectic form."""

    n: int
    mod: Modulus

    def __init__(self, n: int, mod: Union[Modulus, int]):
        if n < 0:
            raise DimensionError("half-dimension must be nonnegative")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "mod", as_modulus(mod))

    @property
    def dim(self) -> int:
        return 2 * self.n

    @property
    def d(self) -> int:
        return self.mod.d

    @property
    def J(self) -> ZdMatrix:
        return symplectic_form(self.n, self.mod)

    def factor(self, p: int) -> "SymplecticSpace":
        return SymplecticSpace(self.n, self.mod.factor(p))


@dataclass(frozen=True)
class RentRecord:
    """A rent line of a symplectic reduction (0-based indices).

    ``row`` is always the second row of a pair, ``col`` the column of the
    rent point and ``pivot_below`` the entry at ``(row + 1, col)``.
    """

    row: int
    col: int
    pivot_below: int


def _as_vector(v) -> list[int]:
    if isinstance(v, ZdMatrix):
        if v.cols != 1:
            raise DimensionError("expected a column vector")
        return v.column(0)
    return list(v)


def omega(x, y, space: SymplecticSpace) -> int:
    """``x^T J_n y``."""
    xs, ys = _as_vector(x), _as_vector(y)
    if len(xs) != space.dim or len(ys) != space.dim:
        raise DimensionError(f"vectors must have {space.dim} components")
    total = 0
    for m in range(space.n):
        a, b = 2 * m, 2 * m + 1
        total += xs[a] * ys[b] - xs[b] * ys[a]
    return total % space.d


def is_symplectic_matrix(L: ZdMatrix, space: SymplecticSpace) -> bool:
    if L.shape != (space.dim, space.dim):
        return False
    J = space.J
    return L.T @ J @ L == J


# -- the four substeps, on a window of two symplectic pairs ---------------


def _window(v, mod) -> tuple[list[int], Modulus]:
    v = _as_vector(v)
    if len(v) != 4:
        raise DimensionError("substeps act on 4 components")
    mod = as_modulus(mod)
    return [x % mod.d for x in v], mod


def _substep1_matrix(v, d, mod):
    x, y, z, t = v
    k1, c, k2, k3 = multi_bezout([x, y, z, t], 1, mod)
    u = unit_inverse(c, d)
    return [
        [u, 0, 0, 0],
        [k1, c, k2, k3],
        [-k3 * u % d, 0, 1, 0],
        [k2 * u % d, 0, 0, 1],
    ]


def _substep2_matrix(v, d):
    z, t = v[2], v[3]
    if t == 0:
        return _identity(4)
    g, a, b = egcd(z, t)
    return [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, a % d, b % d],
        [0, 0, -(t // g) % d, (z // g) % d],
    ]


def _substep3_matrix(v, d):
    delta, z2 = v[1], v[2]
    k6 = divide(-z2, delta, d)
    return [
        [1, 0, 0, k6],
        [0, 1, 0, 0],
        [0, k6, 1, 0],
        [0, 0, 0, 1],
    ]


def _substep4_matrix(v, d, mod):
    y, z = v[1], v[2]
    v_, k, _, _ = bezout_invertible(z, y, mod)
    vinv = unit_inverse(v_, d)
    return [
        [1, 0, 0, k * vinv % d],
        [0, 1, 0, 0],
        [0, k, v_, 0],
        [0, 0, 0, vinv],
    ]


def _apply(S, v, d):
    return [sum(a * b for a, b in zip(row, v)) % d for row in S]


def substep1(v, mod) -> tuple[ZdMatrix, list[int]]:
    """Symplectic ``S1`` with ``S1 v = (x1, gcd(v), z1, t1)``."""
    v, mod = _window(v, mod)
    S = _substep1_matrix(v, mod.d, mod)
    return ZdMatrix(S, mod), _apply(S, v, mod.d)


def substep2(v, mod) -> tuple[ZdMatrix, list[int]]:
    """Symplectic ``S2`` acting on the second pair: ``(x, y, z, t) -> (x, y, z2, 0)``."""
    v, mod = _window(v, mod)
    S = _substep2_matrix(v, mod.d)
    return ZdMatrix(S, mod), _apply(S, v, mod.d)


def substep3(v, mod) -> tuple[ZdMatrix, list[int]]:
    """Symplectic ``S3`` with ``(x, y, z, 0) -> (x, y, 0, 0)`` when ``y`` divides ``z``."""
    v, mod = _window(v, mod)
    if v[3]:
        raise ZdError("substep3 expects a zero fourth component")
    if v[2] % math.gcd(v[1], mod.d):
        raise ZdError("substep3 expects the third component to be a multiple of the second")
    S = _substep3_matrix(v, mod.d)
    return ZdMatrix(S, mod), _apply(S, v, mod.d)


def substep4(v, mod) -> tuple[ZdMatrix, list[int]]:
    """Symplectic ``S4`` with ``(x, y, z, 0) -> (x, y, gcd(y, z), 0)``."""
    v, mod = _window(v, mod)
    if v[3]:
        raise ZdError("substep4 expects a zero fourth component")
    S = _substep4_matrix(v, mod.d, mod)
    return ZdMatrix(S, mod), _apply(S, v, mod.d)


def trigonalisable(a: int, x: int, y: int, z: int, mod) -> bool:
    """Whether ``[[a, x], [0, y], [0, z], [0, 0]]`` can be made upper triangular symplectically."""
    d = as_modulus(mod).d
    a, x, y, z = a % d, x % d, y % d, z % d
    if a == 0:
        raise ZdError("the criterion needs a nonzero a")
    if x % math.gcd(a, d):
        raise ZdError("the criterion needs x to be a multiple of a")
    return z % math.gcd(y, d) == 0


# -- symplectic reduction ---------------------------------------------------


class _Work:
    """Mutable state of one reduction: the matrix, S and R."""

    def __init__(self, B: ZdMatrix):
        self.d = B.d
        self.mod = B.mod
        self.M = B.tolist()
        self.rows, self.cols = B.rows, B.cols
        self.S = _identity(B.rows)
        self.R = _identity(B.cols)

    def left(self, idx: Sequence[int], small):
        """Rows ``idx`` <- ``small`` @ rows ``idx`` on both M and S."""
        d = self.d
        for A in (self.M, self.S):
            old = [A[i] for i in idx]
            new = [
                [sum(small[a][b] * old[b][c] for b in range(len(idx))) % d for c in range(len(A[0]))]
                for a in range(len(idx))
            ]
            for i, row in zip(idx, new):
                A[i] = row

    def col_axpy(self, target: int, source: int, c: int):
        """Column ``target`` -= c * column ``source`` on both M and R."""
        d = self.d
        for A in (self.M, self.R):
            for row in A:
                row[target] = (row[target] - c * row[source]) % d

    def column(self, c: int, rows: Sequence[int]) -> list[int]:
        return [self.M[i][c] for i in rows]

    def clear_column(self, base: int, c: int, final_pair: bool):
        """Zero column ``c`` below pair ``base`` with windows of substeps 1 to 3.

        With ``final_pair`` the second row of the pair is cleared as well.
        """
        d, mod = self.d, self.mod
        for Q in range(self.rows - 2, base, -2):
            idx = [base, base + 1, Q, Q + 1]
            v = self.column(c, idx)
            if v[2] == 0 and v[3] == 0:
                continue
            self.left(idx, _substep1_matrix(v, d, mod))
            self.left(idx, _substep2_matrix(self.column(c, idx), d))
            self.left(idx, _substep3_matrix(self.column(c, idx), d))
        if final_pair:
            self.reduce_pair(base, c)

    def reduce_pair(self, base: int, c: int):
        """Determinant-one block on pair ``base`` sending column ``c`` onto ``(g, 0)``."""
        ops, _ = _vector_cascade(self.column(c, [base, base + 1]), self.d)
        for _, (a, b, e, f) in ops:
            self.left([base, base + 1], [[a, b], [e, f]])

    def clear_row(self, r: int, c: int):
        """Zero row ``r`` right of column ``c`` using the pivot at ``(r, c)``."""
        pivot = self.M[r][c]
        for t in range(c + 1, self.cols):
            if self.M[r][t]:
                self.col_axpy(t, c, divide(self.M[r][t], pivot, self.d))

    def trailing_zero(self, i: int, j: int) -> bool:
        return all(self.M[r][c] == 0 for r in range(i, self.rows) for c in range(j, self.cols))


def symplectic_reduce(B: ZdMatrix, space: SymplecticSpace | None = None) -> ReductionCertificate:
    """Reduce ``B`` with a symplectic ``S`` on the left and an invertible ``R`` on the right.

    Only defined for a prime-power modulus. The certificate carries the
    staircase ``D = S B R``, the rents and the pivot cells (in ``pivots``).
    """
    mod = B.mod
    if not mod.is_prime_power:
        raise CompositeModulusError(
            f"symplectic reduction needs a prime-power modulus, got {mod.d}; "
            "use symplectic_reduce_factors or crt-split first"
        )
    if B.rows % 2:
        raise DimensionError("symplectic reduction needs an even number of rows")
    if space is None:
        space = SymplecticSpace(B.rows // 2, mod)
    if space.dim != B.rows or space.d != mod.d:
        raise DimensionError("matrix does not live in the given symplectic space")
    p = mod.factors[0][0]
    w = _Work(B)
    d, k, rows = w.d, w.cols, w.rows
    pivots: list[tuple[int, int]] = []
    rents: list[tuple[int, int]] = []
    i = j = 0
    pending = False  # step 1 already done by the previous pass
    stopped = False
    while i <= rows - 4 and j <= k - 2:
        if w.trailing_zero(i, j):
            stopped = True
            break
        if not pending:
            _algorithm_A_inplace(w.M, i, j, w.R, d, mod)
            w.clear_column(i, j, final_pair=True)
        pending = False
        # step 2
        _algorithm_A_inplace(w.M, i + 1, j + 1, w.R, d, mod)
        w.clear_column(i + 2, j + 1, final_pair=False)
        # step 3: substeps 2 and 4 on the window of pairs i and i+2
        idx = [i, i + 1, i + 2, i + 3]
        w.left(idx, _substep2_matrix(w.column(j + 1, idx), d))
        w.left(idx, _substep4_matrix(w.column(j + 1, idx), d, mod))
        y, z = w.M[i + 1][j + 1], w.M[i + 2][j + 1]
        x_unit = vp(y, p, mod) <= vp(z, p, mod)
        # step 4
        if x_unit:
            w.left(idx, _substep3_matrix(w.column(j + 1, idx), d))
        # steps 5 and 6
        w.clear_row(i, j)
        pivots.append((i, j))
        if x_unit:
            w.clear_row(i + 1, j + 1)
            pivots.append((i + 1, j + 1))
            i, j = i + 2, j + 2
        else:
            rents.append((i + 1, j + 1))
            i, j = i + 2, j + 1
            pending = True
    if not stopped and j < k:
        if i == rows - 2:
            if pending:
                # column j is already (pivot, 0) on the last pair
                w.clear_row(i, j)
                pivots.append((i, j))
                i, j = i + 1, j + 1
                sub_rows = [i]
            else:
                sub_rows = [i, i + 1]
            _last_rows_reduce(w, sub_rows, j, pivots)
        elif i < rows - 2 and j == k - 1:
            if not pending:
                w.clear_column(i, j, final_pair=True)
            if any(w.M[r][j] for r in range(i, rows)):
                pivots.append((i, j))
    D = ZdMatrix(w.M, mod, rows, k)
    rent_records = tuple(RentRecord(r, c, D[r + 1, c]) for r, c in rents)
    return ReductionCertificate(
        L=ZdMatrix(w.S, mod, rows, rows),
        R=ZdMatrix(w.R, mod, k, k),
        D=D,
        source=B,
        rents=rent_records,
        pivots=tuple((r, c) for r, c in pivots if D[r, c]),
    )


def _last_rows_reduce(w: _Work, sub_rows: list[int], j: int, pivots: list):
    """Simple reduction of the trailing rows with a determinant-one left factor."""
    d = w.d
    sub = [[w.M[r][c] for c in range(j, w.cols)] for r in sub_rows]
    L, R = _d0_lists(sub, d, w.mod)
    w.left(sub_rows, L)
    width = w.cols - j
    for A in (w.M, w.R):
        for row in A:
            tail = row[j:]
            row[j:] = [sum(tail[a] * R[a][b] for a in range(width)) % d for b in range(width)]
    for t, r in enumerate(sub_rows):
        if t < width:
            pivots.append((r, j + t))


def symplectic_reduce_factors(B: ZdMatrix, space: SymplecticSpace | None = None) -> dict[int, ReductionCertificate]:
    """One symplectic reduction per Chinese factor, keyed by prime."""
    out = {}
    for p, s in B.mod.factors:
        Bp = B.reduce_mod(p**s)
        out[p] = symplectic_reduce(Bp, SymplecticSpace(B.rows // 2, p**s))
    return out


def check_shape(cert: ReductionCertificate) -> bool:
    """Check the staircase-with-rents grammar of a symplectic reduction.

    Off the rent rows, every row and every column carries at most one nonzero
    entry, and those pivots move strictly down and right. A rent row is zero
    left of its rent column, sits on the second row of a pair, and every entry
    of the trailing block from it is a multiple of the pivot below the rent point.
    """
    D = cert.D
    d = D.d
    rent_rows = {r.row: r for r in cert.rents}
    for r in rent_rows:
        if r % 2 != 1 or r + 1 >= D.rows:
            return False
    cells = []
    for r in range(D.rows):
        if r in rent_rows:
            continue
        nz = [c for c in range(D.cols) if D[r, c]]
        if len(nz) > 1:
            return False
        if nz:
            cells.append((r, nz[0]))
    if any(b[0] <= a[0] or b[1] <= a[1] for a, b in zip(cells, cells[1:])):
        return False
    used_cols = [c for _, c in cells]
    if len(set(used_cols)) != len(used_cols):
        return False
    for rec in cert.rents:
        if any(D[rec.row, c] for c in range(rec.col)):
            return False
        g = math.gcd(D[rec.row + 1, rec.col], d)
        for r in range(rec.row, D.rows):
            for c in range(rec.col, D.cols):
                if D[r, c] % g:
                    return False
    return True
