"""Dense matrices over Z/dZ and the submodules they generate.

Matrices are immutable and hold canonical residues. Vectors are matrices
with a single column. Shapes are stored explicitly so that empty matrices
(``k x 0`` or ``0 x l``) behave like any other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import DimensionError, FamilyNotFreeError, NotAUnitError
from .zmod import Modulus, as_modulus, canonical_gcd, order, unit_inverse, vp

__all__ = [
    "ZdMatrix",
    "Submodule",
    "vector_order",
    "det",
    "is_invertible",
    "inverse",
    "matrix_vp",
    "matrix_pi_p",
    "kernel",
    "complete_free_family",
    "membership",
    "submodule_equal",
    "contains",
]


class ZdMatrix:
    """A ``rows x cols`` matrix with entries in Z/dZ."""

    __slots__ = ("rows", "cols", "mod", "_data", "_hash")

    def __init__(self, entries, mod: Union[Modulus, int], rows: int | None = None, cols: int | None = None):
        self.mod = as_modulus(mod)
        d = self.mod.d
        data = tuple(tuple(int(x) % d for x in row) for row in entries)
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise DimensionError(f"entries do not form a {rows}x{cols} matrix")
        self.rows = rows
        self.cols = cols
        self._data = data
        self._hash = None

    # constructors

    @classmethod
    def zeros(cls, rows: int, cols: int, mod) -> "ZdMatrix":
        return cls([[0] * cols for _ in range(rows)], mod, rows, cols)

    @classmethod
    def identity(cls, n: int, mod) -> "ZdMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], mod, n, n)

    @classmethod
    def diag(cls, values: Sequence[int], mod, rows: int | None = None, cols: int | None = None) -> "ZdMatrix":
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        m = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            m[i][i] = v
        return cls(m, mod, rows, cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], mod, rows: int | None = None) -> "ZdMatrix":
        columns = [list(c) for c in columns]
        if rows is None:
            if not columns:
                raise DimensionError("row count required for an empty column list")
            rows = len(columns[0])
        m = [[c[i] for c in columns] for i in range(rows)]
        return cls(m, mod, rows, len(columns))

    @classmethod
    def vector(cls, values: Sequence[int], mod) -> "ZdMatrix":
        return cls([[v] for v in values], mod, len(values), 1)

    # access

    @property
    def d(self) -> int:
        return self.mod.d

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._data[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def row(self, i: int) -> list[int]:
        return list(self._data[i])

    def column(self, j: int) -> list[int]:
        return [r[j] for r in self._data]

    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(self.cols)]

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "ZdMatrix":
        rows, cols = list(rows), list(cols)
        return ZdMatrix([[self._data[i][j] for j in cols] for i in rows], self.mod, len(rows), len(cols))

    def select_columns(self, cols: Iterable[int]) -> "ZdMatrix":
        return self.submatrix(range(self.rows), cols)

    def hstack(self, other: "ZdMatrix") -> "ZdMatrix":
        self._check_mod(other)
        if self.rows != other.rows:
            raise DimensionError("hstack needs equal row counts")
        data = [self._data[i] + other._data[i] for i in range(self.rows)]
        return ZdMatrix(data, self.mod, self.rows, self.cols + other.cols)

    def diagonal(self) -> list[int]:
        return [self._data[i][i] for i in range(min(self.rows, self.cols))]

    def is_diagonal(self) -> bool:
        return all(
            self._data[i][j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j
        )

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def reduce_mod(self, mod) -> "ZdMatrix":
        """The same integer entries reduced modulo another modulus."""
        return ZdMatrix(self._data, mod, self.rows, self.cols)

    # arithmetic

    def _check_mod(self, other: "ZdMatrix"):
        if self.mod.d != other.mod.d:
            raise DimensionError(f"moduli differ: {self.mod.d} vs {other.mod.d}")

    def __matmul__(self, other: "ZdMatrix") -> "ZdMatrix":
        self._check_mod(other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = list(zip(*other._data)) if other.rows else [()] * other.cols
        data = [[sum(a * b for a, b in zip(r, c)) for c in ocols] for r in self._data]
        return ZdMatrix(data, self.mod, self.rows, other.cols)

    def __add__(self, other: "ZdMatrix") -> "ZdMatrix":
        self._check_mod(other)
        if self.shape != other.shape:
            raise DimensionError("shapes differ")
        data = [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)]
        return ZdMatrix(data, self.mod, self.rows, self.cols)

    def __neg__(self) -> "ZdMatrix":
        return ZdMatrix([[-a for a in r] for r in self._data], self.mod, self.rows, self.cols)

    def __sub__(self, other: "ZdMatrix") -> "ZdMatrix":
        return self + (-other)

    def scale(self, c: int) -> "ZdMatrix":
        return ZdMatrix([[c * a for a in r] for r in self._data], self.mod, self.rows, self.cols)

    @property
    def T(self) -> "ZdMatrix":
        return ZdMatrix([list(c) for c in zip(*self._data)] if self.rows else [[] for _ in range(self.cols)],
                        self.mod, self.cols, self.rows)

    # dunder plumbing

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZdMatrix):
            return NotImplemented
        return self.mod.d == other.mod.d and self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.mod.d, self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        return f"ZdMatrix({self.tolist()!r}, mod={self.mod.d})"

    def __str__(self) -> str:
        if not self.rows or not self.cols:
            return f"[{self.rows}x{self.cols} matrix mod {self.mod.d}]"
        width = max(len(str(x)) for r in self._data for x in r)
        return "\n".join(" ".join(str(x).rjust(width) for x in r) for r in self._data)


@dataclass(frozen=True)
class Submodule:
    """The submodule of Z_d^n spanned by the columns of ``basis``."""

    basis: ZdMatrix

    @property
    def ambient(self) -> int:
        return self.basis.rows

    @property
    def mod(self) -> Modulus:
        return self.basis.mod

    @classmethod
    def from_columns(cls, columns, mod, ambient: int | None = None) -> "Submodule":
        return cls(ZdMatrix.from_columns(columns, mod, ambient))

    @classmethod
    def zero(cls, ambient: int, mod) -> "Submodule":
        return cls(ZdMatrix.zeros(ambient, 0, mod))

    @classmethod
    def full(cls, ambient: int, mod) -> "Submodule":
        return cls(ZdMatrix.identity(ambient, mod))


def vector_order(a: ZdMatrix) -> int:
    """Order of a column vector: the lcm of the component orders."""
    if a.cols != 1:
        raise DimensionError("vector_order expects a single column")
    return order(canonical_gcd(a.column(0), a.mod), a.mod)


def _det_cofactor(m: list[list[int]], d: int) -> int:
    n = len(m)
    if n == 0:
        return 1 % d
    if n == 1:
        return m[0][0] % d
    if n == 2:
        return (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % d
    total = 0
    for j in range(n):
        if m[0][j]:
            minor = [r[:j] + r[j + 1:] for r in m[1:]]
            sign = -1 if j % 2 else 1
            total += sign * m[0][j] * _det_cofactor(minor, d)
    return total % d


def _det_bareiss(m: list[list[int]]) -> int:
    """Fraction-free elimination on the integer lifts (exact integer determinant)."""
    m = [list(r) for r in m]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def det(M: ZdMatrix) -> int:
    if M.rows != M.cols:
        raise DimensionError("determinant of a non-square matrix")
    if M.rows <= 4:
        return _det_cofactor(M.tolist(), M.d)
    return _det_bareiss(M.tolist()) % M.d


def is_invertible(M: ZdMatrix) -> bool:
    return M.rows == M.cols and math.gcd(det(M), M.d) == 1


def inverse(M: ZdMatrix) -> ZdMatrix:
    """Inverse via the adjugate, valid over any commutative ring."""
    if M.rows != M.cols:
        raise DimensionError("inverse of a non-square matrix")
    n, d = M.rows, M.d
    dinv = unit_inverse(det(M), d)
    if n == 0:
        return M
    if n == 1:
        return ZdMatrix([[dinv]], M.mod)
    m = M.tolist()
    det_fn = _det_cofactor if n <= 5 else (lambda a, dd: _det_bareiss(a) % dd)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(m) if k != i]
            cof = det_fn(minor, d)
            adj[j][i] = -cof if (i + j) % 2 else cof
    return ZdMatrix(adj, M.mod).scale(dinv)


def matrix_vp(M: ZdMatrix, p: int) -> int:
    """Minimum p-valuation over the entries (``s`` for the zero matrix)."""
    s = M.mod.exponent(p)
    return min((vp(x, p, M.mod) for r in M.tolist() for x in r), default=s)


def matrix_pi_p(M: ZdMatrix, p: int) -> ZdMatrix:
    """Projection onto the Chinese factor Z/p^sZ."""
    return M.reduce_mod(M.mod.factor(p))


def kernel(M: ZdMatrix) -> ZdMatrix:
    """Columns generating ``{x : M x = 0}``, read off the diagonal reduction of ``M``."""
    from .reduce import d0

    cert = d0(M)
    D, R = cert.D, cert.R
    d = M.d
    cols = []
    for i in range(M.cols):
        r_i = R.column(i)
        if i < M.rows:
            w = order(D[i, i], d)
            if w == d:
                continue
            r_i = [w * x % d for x in r_i]
        if any(r_i):
            cols.append(r_i)
    return ZdMatrix.from_columns(cols, M.mod, M.cols)


def complete_free_family(B: ZdMatrix, n: int | None = None) -> ZdMatrix:
    """Extend a free family to a free basis of Z_d^n.

    The first ``r`` columns of the result are the columns of ``B`` itself.
    """
    from .reduce import d0

    n = B.rows if n is None else n
    if n != B.rows:
        raise DimensionError(f"family lives in Z_d^{B.rows}, not Z_d^{n}")
    r = B.cols
    if r > n:
        raise FamilyNotFreeError(f"{r} vectors cannot be free in Z_d^{n}")
    cert = d0(B)
    for x in cert.D.diagonal():
        if math.gcd(x, B.d) != 1:
            raise FamilyNotFreeError("family is not free: a diagonal entry is not a unit")
    # D R^-1 is the top r x r block of L B, which then extends by I_{n-r}
    top = (cert.D @ inverse(cert.R)).tolist()[:r]
    block = [row + [0] * (n - r) for row in top]
    block += [[0] * r + [int(i == j) for j in range(n - r)] for i in range(n - r)]
    return inverse(cert.L) @ ZdMatrix(block, B.mod, n, n)


def _as_column_list(x) -> list[int]:
    if isinstance(x, ZdMatrix):
        if x.cols != 1:
            raise DimensionError("expected a column vector")
        return x.column(0)
    return list(x)


def membership(x, S: Submodule) -> bool:
    """Whether the vector ``x`` lies in ``S``."""
    from .reduce import d0

    xs = _as_column_list(x)
    if len(xs) != S.ambient:
        raise DimensionError(f"vector of length {len(xs)} in Z_d^{S.ambient}")
    d = S.mod.d
    cert = d0(S.basis)
    y = (cert.L @ ZdMatrix.vector(xs, S.mod)).column(0)
    D = cert.D
    for i, yi in enumerate(y):
        g = math.gcd(D[i, i], d) if i < D.cols else d
        if yi % g:
            return False
    return True


def submodule_equal(S: Submodule, T: Submodule) -> bool:
    if S.ambient != T.ambient or S.mod.d != T.mod.d:
        raise DimensionError("submodules live in different spaces")
    return all(membership(c, T) for c in S.basis.columns()) and all(
        membership(c, S) for c in T.basis.columns()
    )


def contains(S: Submodule, T: Submodule) -> bool:
    """Whether ``T`` is a subset of ``S``."""
    if S.ambient != T.ambient or S.mod.d != T.mod.d:
        raise DimensionError("submodules live in different spaces")
    return all(membership(c, S) for c in T.basis.columns())
