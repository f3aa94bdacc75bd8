"""Gram matrices, fringes and symplectic diagonalisation.

Everything here works inside one Chinese factor ``d = p^s`` (composite
moduli are rejected with :class:`CompositeModulusError`), except
:func:`d_omega` and :func:`is_nearly_symplectic`, which run per factor and
CRT-join the witnesses.

Each ambient index ``i`` carries a *level* ``kappa(i)``, the p-valuation
of the i-th diagonal entry of the simple reduction of the reference module.
Block valuations ``v_p(G_ij)`` are never stored as normalised blocks; the
checks below are entrywise, which is equivalent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .errors import DimensionError, InternalCheckError, ZdError
from .lagrangian import classify, orthogonal
from .linalg import Submodule, ZdMatrix, det, inverse, submodule_equal
from .reduce import _prime_of, d0, k_levels
from .symplectic import SymplecticSpace, is_symplectic_matrix
from .zmod import crt_join, is_unit, unit_inverse, vp

__all__ = [
    "GramData",
    "FringeReport",
    "DOmegaResult",
    "gram",
    "k_partition",
    "fringe_report",
    "fringe_report_levels",
    "check_fringe_preservation",
    "alpha_valuation",
    "beta_level",
    "d_omega",
    "is_nearly_symplectic",
    "is_symplectic_submodule",
]


@dataclass(frozen=True)
class GramData:
    """``G = B^T J B`` for a family of ``size`` vectors, with ``det(G)``."""

    G: ZdMatrix
    size: int
    discriminant: int


def gram(B: ZdMatrix, space: SymplecticSpace) -> GramData:
    if B.rows != space.dim:
        raise DimensionError(f"family vectors need {space.dim} components, got {B.rows}")
    if B.d != space.d:
        raise DimensionError(f"family lives mod {B.d}, space mod {space.d}")
    G = B.T @ space.J @ B
    return GramData(G, B.cols, det(G) if B.cols else 1 % B.d)


def _intervals(kappa: Sequence[int], s: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(i for i, k in enumerate(kappa) if k == level) for level in range(s + 1))


def k_partition(S: Submodule) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Index sets ``K_0, ..., K_s`` (0-based) and the level map ``kappa``."""
    _, s = _prime_of(S.mod)
    kappa = tuple(k_levels(S))
    return _intervals(kappa, s), kappa


@dataclass(frozen=True)
class FringeReport:
    """Fringe data of a Gram matrix relative to a level map.

    ``scalar_fringe`` is None when ``G`` has no unit entry. ``admissible``
    lists every pivot pair satisfying the nice-fringe conditions in
    row-major order; ``pivot`` is its first element.
    """

    K: tuple[tuple[int, ...], ...]
    kappa: tuple[int, ...]
    scalar_fringe: Optional[int]
    good: bool
    nice: bool
    pivot: Optional[tuple[int, int]]
    admissible: tuple[tuple[int, int], ...] = field(default=(), repr=False)

    def as_dict(self) -> dict:
        return {
            "K": [list(k) for k in self.K],
            "kappa": list(self.kappa),
            "scalar_fringe": self.scalar_fringe,
            "good": self.good,
            "nice": self.nice,
            "pivot": list(self.pivot) if self.pivot else None,
        }


def fringe_report_levels(G: ZdMatrix, kappa: Sequence[int], p: Optional[int] = None) -> FringeReport:
    """Fringe report of ``G`` for an explicit level map (one level per row)."""
    p, s = _prime_of(G.mod, p)
    c = G.rows
    if G.cols != c or len(kappa) != c:
        raise DimensionError("G must be square with one level per index")
    kappa = tuple(kappa)
    K = _intervals(kappa, s)
    g = G.tolist()
    units = [(i, j) for i in range(c) for j in range(c) if is_unit(g[i][j], G.mod)]
    if not units:
        return FringeReport(K, kappa, None, False, False, None)
    fr = min(kappa[i] + kappa[j] for i, j in units)
    val = [[vp(x, p, G.mod) for x in row] for row in g]

    def gamma(i, j):
        return fr - kappa[i] - kappa[j]

    def covered(i, j):
        # x lies in p^gamma Z_d, and p^gamma Z_d = {0} once gamma >= s
        return val[i][j] >= min(gamma(i, j), s)

    good = all(covered(i, j) for i in range(c) for j in range(c) if gamma(i, j) >= 0)
    admissible = []
    for i, j in units:
        if gamma(i, j) != 0:
            continue
        if all(covered(k, j) for k in range(i + 1)) and all(covered(i, m) for m in range(j + 1)):
            admissible.append((i, j))
    nice = bool(admissible)
    return FringeReport(K, kappa, fr, good, nice, admissible[0] if nice else None, tuple(admissible))


def _gram_matrix(G) -> ZdMatrix:
    return G.G if isinstance(G, GramData) else G


def fringe_report(G, S: Submodule) -> FringeReport:
    """Fringe report of a Gram matrix (or :class:`GramData`) relative to ``S``.

    The family behind ``G`` may be shorter than the ambient dimension; only
    the first ``G.rows`` levels are used then.
    """
    G = _gram_matrix(G)
    if G.rows > S.ambient:
        raise DimensionError("Gram matrix is larger than the ambient space")
    kappa = k_levels(S)
    return fringe_report_levels(G, kappa[: G.rows])


def check_fringe_preservation(G, P: ZdMatrix, S: Submodule) -> bool:
    """Whether ``P^T G P`` is good with the same scalar fringe as ``G``."""
    G = _gram_matrix(G)
    before = fringe_report(G, S)
    after = fringe_report(P.T @ G @ P, S)
    return after.good and after.scalar_fringe == before.scalar_fringe


def alpha_valuation(x, S: Submodule, space: SymplecticSpace) -> int:
    """``min v_p(omega(x, m))`` over the generators ``m`` of ``S`` (``s`` if all vanish)."""
    p, s = _prime_of(S.mod)
    xs = x.column(0) if isinstance(x, ZdMatrix) else list(x)
    row = (ZdMatrix.from_columns([xs], S.mod, space.dim).T @ space.J @ S.basis).row(0) if S.basis.cols else []
    return min((vp(v, p, S.mod) for v in row), default=s)


def beta_level(G, kappa: Sequence[int], i: int, p: Optional[int] = None) -> Optional[int]:
    """Smallest level carrying a unit on row ``i`` of ``G``, None if the row has none."""
    G = _gram_matrix(G)
    levels = [kappa[k] for k in range(G.cols) if is_unit(G[i, k], G.mod)]
    return min(levels, default=None)


@dataclass(frozen=True)
class DOmegaResult:
    """Outcome of :func:`d_omega`.

    On success ``basis`` is symplectic and ``basis @ permutation @ D``
    generates the module, ``D`` being diagonal with valuations increasing
    in every Chinese factor. ``levels`` gives the level of each basis vector
    and ``sigma`` the sorting permutation (prime-power moduli only). On
    failure ``report`` is the fringe report of the iteration where niceness
    failed and ``failed_prime`` names the factor.
    """

    success: bool
    basis: Optional[ZdMatrix] = None
    D: Optional[ZdMatrix] = None
    permutation: Optional[ZdMatrix] = None
    sigma: Optional[tuple[int, ...]] = None
    levels: Optional[tuple[int, ...]] = None
    report: Optional[FringeReport] = None
    failed_prime: Optional[int] = None
    discriminants: tuple[int, ...] = ()
    pivots: tuple[tuple[int, int], ...] = ()

    def witness(self) -> ZdMatrix:
        if not self.success:
            raise ZdError("no witness: the module is not nearly symplectic")
        return self.basis @ self.permutation @ self.D

    def pair_diagonal(self) -> ZdMatrix:
        """``D`` in the order of ``basis`` itself, so ``basis @ pair_diagonal()`` generates the module."""
        if self.levels is None:
            raise ZdError("levels are only recorded for prime-power moduli")
        p = self.basis.mod.factors[0][0]
        return ZdMatrix.diag([p**k % self.basis.d for k in self.levels], self.basis.mod)


Chooser = Callable[[Sequence[tuple[int, int]]], tuple[int, int]]


def _d_omega_factor(B: ZdMatrix, space: SymplecticSpace, choose: Optional[Chooser]) -> DOmegaResult:
    p, s = B.mod.factors[0]
    q = B.d
    mod = B.mod
    cert = d0(B)
    diag = cert.D.diagonal()
    dim = space.dim
    kappa = [vp(diag[i], p, q) if i < len(diag) else s for i in range(dim)]
    Linv = inverse(cert.L)
    f = [Linv.column(c) for c in range(dim)]
    out_vectors, out_levels, discs, pivots = [], [], [], []
    J = space.J
    while f:
        F = ZdMatrix.from_columns(f, mod, dim)
        G = F.T @ J @ F
        discs.append(det(G))
        report = fringe_report_levels(G, kappa, p)
        if not report.nice:
            return DOmegaResult(False, report=report, failed_prime=p, discriminants=tuple(discs), pivots=tuple(pivots))
        i, j = choose(report.admissible) if choose else report.pivot
        pivots.append((i, j))
        g = G.tolist()
        ginv = unit_inverse(g[i][j], q)
        fi, fj = f[i], f[j]
        rest, rest_levels = [], []
        for k in range(len(f)):
            if k in (i, j):
                continue
            a = -ginv * g[i][k] % q
            b = ginv * g[j][k] % q
            rest.append([(x + a * y + b * z) % q for x, y, z in zip(f[k], fj, fi)])
            rest_levels.append(kappa[k])
        out_vectors += [[ginv * x % q for x in fi], fj]
        out_levels += [kappa[i], kappa[j]]
        f, kappa = rest, rest_levels
    basis = ZdMatrix.from_columns(out_vectors, mod, dim)
    sigma = tuple(sorted(range(dim), key=lambda m: (out_levels[m], m)))
    P = [[0] * dim for _ in range(dim)]
    for m, src in enumerate(sigma):
        P[src][m] = 1
    permutation = ZdMatrix(P, mod, dim, dim)
    D = ZdMatrix.diag([p ** out_levels[m] % q for m in sigma], mod)
    result = DOmegaResult(
        True,
        basis=basis,
        D=D,
        permutation=permutation,
        sigma=sigma,
        levels=tuple(out_levels),
        discriminants=tuple(discs),
        pivots=tuple(pivots),
    )
    if not is_symplectic_matrix(basis, space) or not submodule_equal(Submodule(result.witness()), Submodule(B)):
        raise InternalCheckError("internal check failed: symplectic diagonalisation does not regenerate the module")
    return result


def _join(mats: Sequence[ZdMatrix], mod) -> ZdMatrix:
    rows, cols = mats[0].shape
    lists = [m.tolist() for m in mats]
    return ZdMatrix([[crt_join([m[r][c] for m in lists], mod) for c in range(cols)] for r in range(rows)], mod, rows, cols)


def d_omega(S: Submodule, space: SymplecticSpace, choose: Optional[Chooser] = None) -> DOmegaResult:
    """Symplectic diagonalisation of ``S`` by fringe-guided Gram-Schmidt steps.

    ``choose`` picks the pivot among the admissible pairs; the default is
    the first one in row-major order. Composite moduli are handled factor
    by factor and the factor witnesses are CRT-joined.
    """
    if S.ambient != space.dim or S.mod.d != space.d:
        raise DimensionError(f"submodule of Z_{S.mod.d}^{S.ambient} is not in Z_{space.d}^{space.dim}")
    mod = S.mod
    if mod.is_prime_power:
        return _d_omega_factor(S.basis, space, choose)
    parts = []
    for p, s in mod.factors:
        q = p**s
        res = _d_omega_factor(S.basis.reduce_mod(q), SymplecticSpace(space.n, q), choose)
        if not res.success:
            return res
        parts.append(res)
    basis = _join([r.basis for r in parts], mod)
    permutation = _join([r.permutation for r in parts], mod)
    D = _join([r.D for r in parts], mod)
    result = DOmegaResult(True, basis=basis, D=D, permutation=permutation)
    if not is_symplectic_matrix(basis, space) or not submodule_equal(Submodule(result.witness()), S):
        raise InternalCheckError("internal check failed: joined witness does not regenerate the module")
    return result


def is_nearly_symplectic(S: Submodule, space: SymplecticSpace) -> bool:
    return d_omega(S, space).success


def is_symplectic_submodule(S: Submodule, space: SymplecticSpace, check: bool = False) -> bool:
    """Whether ``S`` meets its orthogonal only in 0.

    With ``check=True`` the characterisation through near symplecticity
    and ``S + S^omega`` being everything is re-derived and compared, along
    with the freeness and even rank of symplectic modules.
    """
    flag = classify(S, space).symplectic
    if check:
        perp = orthogonal(S, space)
        total = Submodule(S.basis.hstack(perp.basis))
        spans = submodule_equal(total, Submodule.full(space.dim, S.mod))
        if flag != (is_nearly_symplectic(S, space) and spans):
            raise InternalCheckError("internal check failed: symplectic characterisation disagrees")
        if flag:
            diag = [x for x in d0(S.basis).D.diagonal() if x]
            if any(not is_unit(x, S.mod) for x in diag) or len(diag) % 2:
                raise InternalCheckError("internal check failed: symplectic module is not free of even rank")
    return flag
