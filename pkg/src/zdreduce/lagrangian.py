"""Symplectic orthogonals, isotropy classes and the Lagrangian canonical form.

A Lagrangian submodule ``M = M^omega`` of Z_d^{2n} is, up to a symplectic
change of basis, spanned by ``diag(d_1, d/d_1, ..., d_n, d/d_n)`` for a unique
chain ``d_1 | ... | d_n`` of divisors of ``prod p^(s_p // 2)``.
:func:`lagrangian_canonical` finds that chain and a symplectic witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import DimensionError, InternalCheckError, ZdError
from .linalg import Submodule, ZdMatrix, contains, inverse, kernel, submodule_equal
from .symplectic import SymplecticSpace, is_symplectic_matrix, symplectic_reduce
from .zmod import as_modulus, crt_join, vp

__all__ = [
    "Classification",
    "LagrangianForm",
    "orthogonal",
    "classify",
    "lagrangian_canonical",
    "enumerate_signatures",
    "signature_bound",
]


@dataclass(frozen=True)
class Classification:
    isotropic: bool
    coisotropic: bool
    symplectic: bool
    lagrangian: bool


@dataclass(frozen=True)
class LagrangianForm:
    """``S @ diag(d_1, d/d_1, ...)`` spans the module, with ``S`` symplectic."""

    signature: tuple[int, ...]
    S: ZdMatrix

    def diagonal(self) -> ZdMatrix:
        d = self.S.d
        entries = []
        for di in self.signature:
            entries += [di, d // di]
        return ZdMatrix.diag(entries, self.S.mod)

    def basis(self) -> ZdMatrix:
        return self.S @ self.diagonal()


def _check_space(S: Submodule, space: SymplecticSpace):
    if S.ambient != space.dim or S.mod.d != space.d:
        raise DimensionError(f"submodule of Z_{S.mod.d}^{S.ambient} is not in Z_{space.d}^{space.dim}")


def orthogonal(S: Submodule, space: SymplecticSpace) -> Submodule:
    """``S^omega``, the vectors orthogonal to every generator of ``S``."""
    _check_space(S, space)
    return Submodule(kernel(S.basis.T @ space.J))


def classify(S: Submodule, space: SymplecticSpace) -> Classification:
    _check_space(S, space)
    B = S.basis
    G = B.T @ space.J @ B
    isotropic = G.is_zero()
    perp = orthogonal(S, space)
    coisotropic = contains(S, perp)
    # S meets S^omega exactly in B ker(G)
    symplectic = (B @ kernel(G)).is_zero()
    return Classification(isotropic, coisotropic, symplectic, isotropic and coisotropic)


def signature_bound(mod) -> int:
    """``prod p^(s // 2)``, the largest admissible signature entry."""
    return math.prod(p ** (s // 2) for p, s in as_modulus(mod).factors)


def _divisors(m: int) -> list[int]:
    return [k for k in range(1, m + 1) if m % k == 0]


def enumerate_signatures(space: SymplecticSpace) -> list[tuple[int, ...]]:
    """All chains ``d_1 | ... | d_n`` of divisors of :func:`signature_bound`, lexicographic."""
    divs = _divisors(signature_bound(space.mod))
    out: list[tuple[int, ...]] = []

    def extend(prefix):
        if len(prefix) == space.n:
            out.append(tuple(prefix))
            return
        for k in divs:
            if not prefix or k % prefix[-1] == 0:
                extend(prefix + [k])

    extend([])
    return out


def _canonical_factor(B: ZdMatrix, space: SymplecticSpace) -> tuple[list[int], list[list[int]]]:
    """Exponents ``s_i`` and a symplectic ``S`` for one Chinese factor ``p^s``."""
    p, s = B.mod.factors[0]
    q = B.d
    n = space.n
    cert = symplectic_reduce(B, space)
    M = cert.D.tolist()
    cols = [[M[r][c] for r in range(2 * n)] for c in range(cert.D.cols)]
    # every rent row is repaired by an extra column p^(s-t) e_row
    for rent in cert.rents:
        r = rent.row
        t = vp(M[r - 1][rent.col - 1], p, q)
        unit_step = p ** (s - t) % q
        for col in cols:
            if col[r] % (p ** (s - t)):
                raise ZdError("module is not isotropic: a rent row is not divisible")
            col[r] = 0
        extra = [0] * (2 * n)
        extra[r] = unit_step
        cols.append(extra)
    val = [s] * (2 * n)
    for col in cols:
        nz = [r for r, x in enumerate(col) if x]
        if len(nz) > 1:
            raise ZdError("rent repair did not produce a monomial basis")
        if nz:
            r = nz[0]
            val[r] = min(val[r], vp(col[r], p, q))
    pairs = [(val[2 * m], val[2 * m + 1]) for m in range(n)]
    if any(a + b != s for a, b in pairs):
        raise ZdError("module is not Lagrangian in this Chinese factor")
    # Q sends e_{2m}, e_{2m+1} of the reduced frame to the sorted pair slots
    order = sorted(range(n), key=lambda m: (min(pairs[m]), m))
    Q = [[0] * (2 * n) for _ in range(2 * n)]
    exps = []
    for slot, m in enumerate(order):
        a, b = pairs[m]
        if a <= b:
            Q[2 * slot][2 * m] = 1
            Q[2 * slot + 1][2 * m + 1] = 1
        else:
            # the 2x2 block [[0, 1], [-1, 0]] swaps the pair symplectically
            Q[2 * slot][2 * m + 1] = 1
            Q[2 * slot + 1][2 * m] = q - 1
        exps.append(min(a, b))
    QS = ZdMatrix(Q, B.mod) @ cert.L
    return exps, inverse(QS).tolist()


def lagrangian_canonical(S: Submodule, space: SymplecticSpace) -> Optional[LagrangianForm]:
    """Signature and symplectic witness of a Lagrangian ``S``; None otherwise."""
    _check_space(S, space)
    if not classify(S, space).lagrangian:
        return None
    mod = S.mod
    n = space.n
    exps_by_factor, mats = [], []
    for p, s in mod.factors:
        q = p**s
        exps, Sq = _canonical_factor(S.basis.reduce_mod(q), SymplecticSpace(n, q))
        exps_by_factor.append((p, exps))
        mats.append(Sq)
    signature = tuple(math.prod(p ** e[i] for p, e in exps_by_factor) for i in range(n))
    if len(mats) == 1:
        W = ZdMatrix(mats[0], mod)
    else:
        W = ZdMatrix(
            [[crt_join([m[r][c] for m in mats], mod) for c in range(2 * n)] for r in range(2 * n)], mod, 2 * n, 2 * n
        )
    form = LagrangianForm(signature, W)
    if not is_symplectic_matrix(W, space) or not submodule_equal(Submodule(form.basis()), S):
        raise InternalCheckError("internal check failed: canonical form does not regenerate the module")
    return form
