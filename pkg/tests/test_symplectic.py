import itertools
import math
import random

import pytest

from support import random_matrix
from zdreduce import oracle
from zdreduce.errors import CompositeModulusError, DimensionError, ZdError
from zdreduce.linalg import Submodule, ZdMatrix, det, inverse
from zdreduce.symplectic import (
    SymplecticSpace,
    check_shape,
    is_symplectic_matrix,
    omega,
    substep1,
    substep2,
    substep3,
    substep4,
    symplectic_form,
    symplectic_reduce,
    symplectic_reduce_factors,
    trigonalisable,
)
from zdreduce.zmod import canonical_gcd


def test_form_properties():
    for d in (2, 5, 12):
        for n in (1, 2, 3):
            J = symplectic_form(n, d)
            assert J.T == -J
            assert det(J) == 1
            assert J.T @ J == ZdMatrix.identity(2 * n, d)


def test_omega_examples():
    space = SymplecticSpace(2, 7)
    e = [[int(i == k) for i in range(4)] for k in range(4)]
    assert omega(e[0], e[1], space) == 1
    assert omega(e[1], e[0], space) == 6
    assert omega(e[0], e[2], space) == 0
    with pytest.raises(DimensionError):
        omega([1, 0], [0, 1], space)


def test_omega_antisymmetric():
    rng = random.Random(0)
    for _ in range(200):
        d = rng.randint(2, 20)
        space = SymplecticSpace(rng.randint(1, 3), d)
        x = [rng.randrange(d) for _ in range(space.dim)]
        y = [rng.randrange(d) for _ in range(space.dim)]
        assert omega(x, x, space) == 0
        assert (omega(x, y, space) + omega(y, x, space)) % d == 0


def test_is_symplectic_examples():
    space = SymplecticSpace(2, 4)
    assert is_symplectic_matrix(ZdMatrix.identity(4, 4), space)
    assert is_symplectic_matrix(space.J, space)
    assert not is_symplectic_matrix(ZdMatrix.diag([2, 1, 1, 1], 4), space)
    assert not is_symplectic_matrix(ZdMatrix.identity(2, 4), space)


def test_random_symplectic_group_closure():
    rng = random.Random(1)
    for _ in range(50):
        d = rng.randint(2, 12)
        space = SymplecticSpace(rng.randint(1, 3), d)
        A, B = oracle.random_symplectic(space, rng), oracle.random_symplectic(space, rng)
        assert is_symplectic_matrix(A @ B, space)
        assert is_symplectic_matrix(inverse(A), space)


def test_substep1_example():
    S, v = substep1([0, 2, 3, 4], 6)
    assert is_symplectic_matrix(S, SymplecticSpace(2, 6))
    assert v[1] == 1


def test_substep4_example():
    S, v = substep4([1, 4, 6, 0], 12)
    assert is_symplectic_matrix(S, SymplecticSpace(2, 12))
    assert v[2] == 2
    assert v[:2] == [1, 4] and v[3] == 0


def test_substeps_on_trivial_vector():
    for step in (substep2, substep3, substep4):
        S, v = step([5, 0, 0, 0], 9)
        assert is_symplectic_matrix(S, SymplecticSpace(2, 9))
        assert v == [5, 0, 0, 0]
    # substep 1 moves the gcd into the second slot
    S, v = substep1([5, 0, 0, 0], 9)
    assert is_symplectic_matrix(S, SymplecticSpace(2, 9))
    assert v[1] == 1 and v[2:] == [0, 0]


def test_substep_preconditions():
    with pytest.raises(ZdError):
        substep3([1, 2, 1, 0], 4)
    with pytest.raises(ZdError):
        substep3([1, 2, 2, 1], 4)
    with pytest.raises(ZdError):
        substep4([1, 2, 2, 1], 4)
    with pytest.raises(DimensionError):
        substep1([1, 2, 3], 4)


@pytest.mark.parametrize("d", [2, 4, 6, 8, 9, 12, 25])
def test_substep_chain(d):
    rng = random.Random(d)
    space = SymplecticSpace(2, d)
    for _ in range(150):
        v = [rng.randrange(d) for _ in range(4)]
        S1, v1 = substep1(v, d)
        assert is_symplectic_matrix(S1, space)
        assert math.gcd(v1[1], d) % d == canonical_gcd(v, d)
        S2, v2 = substep2(v1, d)
        assert is_symplectic_matrix(S2, space)
        assert v2[:2] == v1[:2] and v2[3] == 0
        S3, v3 = substep3(v2, d)
        assert is_symplectic_matrix(S3, space)
        assert v3[:2] == v1[:2] and v3[2:] == [0, 0]
        assert (S3 @ S2 @ S1 @ ZdMatrix.vector(v, d)).column(0) == v3


@pytest.mark.parametrize("d", [4, 8, 12, 27])
def test_substep4_gives_gcd(d):
    rng = random.Random(d)
    for _ in range(150):
        x, y, z = (rng.randrange(d) for _ in range(3))
        S, v = substep4([x, y, z, 0], d)
        assert is_symplectic_matrix(S, SymplecticSpace(2, d))
        assert v[:2] == [x, y] and v[3] == 0
        assert math.gcd(v[2], d) % d == canonical_gcd([y, z], d)


def test_trigonalisable_examples():
    assert trigonalisable(1, 0, 2, 0, 4)
    assert not trigonalisable(1, 0, 2, 1, 4)
    assert trigonalisable(2, 2, 3, 6, 9)
    with pytest.raises(ZdError):
        trigonalisable(0, 0, 1, 1, 4)
    with pytest.raises(ZdError):
        trigonalisable(2, 1, 1, 1, 4)


def test_trigonalisable_witness_at_d4():
    space = SymplecticSpace(2, 4)
    for a, x, y, z in itertools.product([1, 2, 3], range(4), range(4), range(4)):
        if x % math.gcd(a, 4):
            continue
        if trigonalisable(a, x, y, z, 4):
            m = ZdMatrix([[a, x], [0, y], [0, z], [0, 0]], 4)
            # the substep 3 witness is enough when z is a multiple of y
            S, _ = substep3([x, y, z, 0], 4)
            out = S @ m
            assert is_symplectic_matrix(S, space)
            assert all(out[r, 0] == 0 for r in (1, 2, 3)) and out[2, 1] == out[3, 1] == 0


def _rows_match_oracle(cert, B, space):
    S = cert.L
    image = Submodule(S @ B)
    return oracle.brute_equal(Submodule(cert.D), image)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 8, 9])
def test_symplectic_reduce_random(d):
    rng = random.Random(d)
    for _ in range(60):
        n = rng.randint(1, 3)
        space = SymplecticSpace(n, d)
        B = random_matrix(rng, 2 * n, rng.randint(1, 2 * n + 1), d)
        cert = symplectic_reduce(B, space)
        assert cert.verify()
        assert is_symplectic_matrix(cert.L, space)
        assert check_shape(cert)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_symplectic_reduce_preserves_module(d):
    rng = random.Random(10 + d)
    for _ in range(40):
        n = rng.randint(1, 2)
        space = SymplecticSpace(n, d)
        B = random_matrix(rng, 2 * n, rng.randint(1, 4), d)
        cert = symplectic_reduce(B, space)
        assert _rows_match_oracle(cert, B, space)
        back = Submodule(inverse(cert.L) @ cert.D)
        assert oracle.brute_equal(back, Submodule(B))


def test_symplectic_reduce_identity_like():
    B = ZdMatrix([[1, 0], [0, 2]], 4)
    cert = symplectic_reduce(B)
    assert cert.verify() and not cert.rents
    assert cert.D.is_diagonal()


def test_impossibility_fixture_has_rent():
    B = ZdMatrix([[1, 0], [0, 2], [0, 1], [0, 0]], 4)
    cert = symplectic_reduce(B)
    assert cert.verify()
    assert check_shape(cert)
    assert len(cert.rents) == 1
    rent = cert.rents[0]
    assert rent.row == 1 and rent.col == 1
    assert rent.pivot_below % 2 == 1


def test_symplectic_reduce_errors():
    with pytest.raises(CompositeModulusError):
        symplectic_reduce(ZdMatrix.identity(2, 6))
    with pytest.raises(DimensionError):
        symplectic_reduce(ZdMatrix.zeros(3, 1, 4))


def test_symplectic_reduce_factors():
    rng = random.Random(3)
    B = random_matrix(rng, 4, 3, 12)
    certs = symplectic_reduce_factors(B)
    assert sorted(certs) == [2, 3]
    assert certs[2].L.d == 4 and certs[3].L.d == 3
    for p, cert in certs.items():
        assert cert.verify()
        assert is_symplectic_matrix(cert.L, SymplecticSpace(2, cert.L.d))


def test_rent_rows_are_divisible():
    rng = random.Random(4)
    seen = 0
    for _ in range(300):
        d = rng.choice([4, 8, 9])
        n = rng.randint(2, 3)
        B = random_matrix(rng, 2 * n, rng.randint(2, 2 * n), d, zero_bias=0.5)
        cert = symplectic_reduce(B)
        for rent in cert.rents:
            seen += 1
            assert rent.row % 2 == 1
            assert cert.D[rent.row + 1, rent.col] == rent.pivot_below
    assert seen > 0
