"""Random generators shared by the test modules."""

import random

from zdreduce.linalg import Submodule, ZdMatrix, is_invertible
from zdreduce.oracle import random_invertible, random_symplectic
from zdreduce.symplectic import SymplecticSpace


def random_matrix(rng: random.Random, rows: int, cols: int, d: int, zero_bias: float = 0.3) -> ZdMatrix:
    """Random entries, with a share of zeros so that degenerate shapes show up."""
    return ZdMatrix(
        [[0 if rng.random() < zero_bias else rng.randrange(d) for _ in range(cols)] for _ in range(rows)],
        d,
        rows,
        cols,
    )


def random_submodule(rng: random.Random, n: int, d: int, max_cols: int = 4) -> Submodule:
    return Submodule(random_matrix(rng, n, rng.randint(0, max_cols), d))


def regenerate(rng: random.Random, S: Submodule, extra: int = 2) -> Submodule:
    """Another generating set of ``S``: mixed columns plus random combinations."""
    B = S.basis
    d = B.d
    if B.cols:
        B = B @ random_invertible(B.cols, d, rng)
    cols = B.columns()
    for _ in range(rng.randint(0, extra)):
        coeffs = [rng.randrange(d) for _ in range(B.cols)]
        cols.append([sum(c * col[i] for c, col in zip(coeffs, B.columns())) % d for i in range(B.rows)])
    rng.shuffle(cols)
    return Submodule(ZdMatrix.from_columns(cols, d, B.rows))


def prime_of(d: int) -> int:
    return next(p for p in range(2, d + 1) if d % p == 0)


def random_levels(rng: random.Random, size: int, s: int) -> list[int]:
    return sorted(rng.randint(0, s) for _ in range(size))


def diagonal_module(levels, p: int, d: int) -> Submodule:
    return Submodule(ZdMatrix.diag([p**k % d for k in levels], d))


def random_sigma_d(rng: random.Random, levels, p: int, d: int) -> ZdMatrix:
    """Random invertible ``P`` whose entries below a level jump carry the right power of ``p``."""
    n = len(levels)
    while True:
        rows = []
        for j in range(n):
            row = []
            for k in range(n):
                gap = levels[j] - levels[k]
                step = p**gap if gap > 0 else 1
                row.append(step * rng.randrange(d) % d)
            rows.append(row)
        P = ZdMatrix(rows, d, n, n)
        if is_invertible(P):
            return P


def random_good_gram(rng: random.Random, levels, p: int, d: int, s: int) -> ZdMatrix:
    """Antisymmetric ``G`` with a good fringe for the given levels.

    A pair is drawn and forced to be a unit; its level sum is the fringe
    ``fr``. Entries with ``gamma = fr - kappa(i) - kappa(j) > 0`` get valuation
    at least ``gamma`` and all other entries are free.
    """
    n = len(levels)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    i0, j0 = rng.choice(pairs)
    fr = levels[i0] + levels[j0]
    G = [[0] * n for _ in range(n)]
    for i, j in pairs:
        gamma = fr - levels[i] - levels[j]
        # only entries strictly inside the fringe are constrained
        x = p ** min(gamma, s) * rng.randrange(d) % d if gamma > 0 else rng.randrange(d)
        if (i, j) == (i0, j0):
            x = rng.choice([u for u in range(1, d) if u % p])
        G[i][j] = x
        G[j][i] = -x % d
    return ZdMatrix(G, d, n, n)


def random_nearly_symplectic(rng: random.Random, n: int, d: int):
    """``W diag(...) X`` with ``W`` symplectic and ``X`` invertible, plus ``W``."""
    space = SymplecticSpace(n, d)
    W = random_symplectic(space, rng)
    p = prime_of(d)
    powers = sorted({p**k % d for k in range(8)} | {0})
    diag = [rng.choice(powers) for _ in range(2 * n)]
    B = W @ ZdMatrix.diag(diag, d) @ random_invertible(2 * n, d, rng)
    return Submodule(B), space, W, diag
