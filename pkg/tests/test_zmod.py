import math
import random

import pytest

from zdreduce.errors import NotAUnitError, ZdError
from zdreduce.zmod import (
    Modulus,
    associated_unit,
    bezout_invertible,
    canonical_gcd,
    crt_join,
    crt_split,
    divide,
    egcd,
    factorize,
    is_unit,
    lcm_zd,
    multi_bezout,
    order,
    unit_inverse,
    vp,
)


def test_modulus_factors():
    m = Modulus(360)
    assert m.factors == ((2, 3), (3, 2), (5, 1))
    assert math.prod(p**s for p, s in m.factors) == 360
    assert m.primes == (2, 3, 5)
    assert not m.is_prime_power
    assert Modulus(27).is_prime_power
    assert m.factor(3).d == 9
    assert m(-1) == 359


@pytest.mark.parametrize("d", [0, 1, -5])
def test_modulus_rejects_small(d):
    with pytest.raises(ZdError):
        Modulus(d)


def test_factorize_random():
    rng = random.Random(0)
    for _ in range(200):
        d = rng.randint(2, 10**6)
        f = factorize(d)
        assert math.prod(p**s for p, s in f) == d
        assert [p for p, _ in f] == sorted(p for p, _ in f)


def test_egcd():
    rng = random.Random(1)
    for _ in range(500):
        a, b = rng.randint(-1000, 1000), rng.randint(-1000, 1000)
        g, x, y = egcd(a, b)
        assert g == math.gcd(a, b)
        assert a * x + b * y == g


@pytest.mark.parametrize("a, d, expected", [(0, 6, 1), (4, 6, 3), (5, 6, 6)])
def test_order_examples(a, d, expected):
    assert order(a, d) == expected


def test_order_is_cyclic_size():
    for d in range(2, 30):
        for a in range(d):
            assert order(a, d) == len({k * a % d for k in range(d)})


@pytest.mark.parametrize("values, d, expected", [([4], 6, 2), ([2, 3], 6, 1), ([8, 6], 12, 2), ([0, 0], 6, 0)])
def test_canonical_gcd_examples(values, d, expected):
    assert canonical_gcd(values, d) == expected


@pytest.mark.parametrize("values, d, expected", [([2, 3], 12, 6), ([4], 6, 2), ([1, 5], 12, 1), ([], 6, 1)])
def test_lcm_examples(values, d, expected):
    assert lcm_zd(values, d) == expected


def test_lcm_of_one_and_anything():
    for d in range(2, 20):
        for x in range(d):
            # 1 generates Z_d, so its ideal meets aZ_d in aZ_d
            assert lcm_zd([1, x], d) == math.gcd(x, d) % d


@pytest.mark.parametrize("a, p, d, expected", [(12, 2, 16, 2), (0, 3, 9, 2), (8, 2, 8, 3), (6, 3, 18, 1), (6, 2, 18, 1)])
def test_vp_examples(a, p, d, expected):
    assert vp(a, p, d) == expected


def test_vp_rejects_foreign_prime():
    with pytest.raises(ZdError):
        vp(3, 5, 12)


def test_crt_examples():
    assert crt_split(5, 6) == (1, 2)
    assert all(crt_join(crt_split(a, 12), 12) == a for a in range(12))
    a, b = 3, 4
    prod = tuple(x * y % q for x, y, q in zip(crt_split(a, 6), crt_split(b, 6), (2, 3)))
    assert crt_split(a * b % 6, 6) == prod == (0, 0)


def test_crt_is_a_ring_isomorphism():
    rng = random.Random(2)
    for _ in range(300):
        d = rng.randint(2, 400)
        m = Modulus(d)
        a, b = rng.randrange(d), rng.randrange(d)
        qs = [p**s for p, s in m.factors]
        sa, sb = crt_split(a, m), crt_split(b, m)
        assert crt_split((a + b) % d, m) == tuple((x + y) % q for x, y, q in zip(sa, sb, qs))
        assert crt_split(a * b % d, m) == tuple(x * y % q for x, y, q in zip(sa, sb, qs))
        assert crt_join(sa, m) == a


def test_crt_join_length_mismatch():
    with pytest.raises(ZdError):
        crt_join([1], 6)


@pytest.mark.parametrize("a, d, expected", [(1, 9, 1), (5, 6, 5), (3, 7, 5)])
def test_unit_inverse_examples(a, d, expected):
    assert unit_inverse(a, d) == expected


def test_unit_inverse_rejects_non_unit():
    with pytest.raises(NotAUnitError):
        unit_inverse(4, 6)


def test_associated_unit_examples():
    assert associated_unit(2, 4, 6) == 5
    assert associated_unit(7, 7, 12) == 1
    assert associated_unit(2, 3, 6) is None


def test_associated_unit_exhaustive():
    for d in range(2, 25):
        for a in range(d):
            for b in range(d):
                lam = associated_unit(a, b, d)
                if order(a, d) == order(b, d):
                    assert lam is not None and is_unit(lam, d) and lam * b % d == a
                else:
                    assert lam is None


def test_divide():
    assert divide(4, 2, 6) * 2 % 6 == 4
    assert divide(0, 0, 6) == 0
    with pytest.raises(ZdError):
        divide(1, 2, 4)


def _bezout_ok(a, b, d, res):
    return (res.u * a + res.v * b) % d == res.delta and is_unit(res.u, d)


@pytest.mark.parametrize("a, b, d", [(2, 3, 5), (1, 2, 4), (2, 2, 4), (0, 0, 6), (4, 6, 12), (6, 10, 30)])
def test_bezout_examples(a, b, d):
    res = bezout_invertible(a, b, d)
    assert _bezout_ok(a, b, d, res)
    assert res.delta == canonical_gcd([a, b], d)


def test_bezout_one_sided_case():
    # the even case with equal 2-valuations below v_2(d)
    res = bezout_invertible(2, 2, 4)
    assert res.delta == 2
    assert not res.both_units
    assert not any((u * 2 + v * 2) % 4 == 2 for u in (1, 3) for v in (1, 3))


def test_bezout_frozen_examples():
    # frozen from a search over unit pairs
    assert bezout_invertible(2, 3, 5).both_units
    assert bezout_invertible(1, 2, 4).both_units


def test_bezout_random_large():
    rng = random.Random(3)
    for _ in range(500):
        d = rng.randint(2, 5000)
        a, b = rng.randrange(d), rng.randrange(d)
        res = bezout_invertible(a, b, d)
        assert _bezout_ok(a, b, d, res)
        if res.both_units:
            assert is_unit(res.v, d)


@pytest.mark.parametrize(
    "values, index, d",
    [([6], 0, 9), ([0, 0, 0], 2, 6), ([2, 3], 0, 6), ([4, 6, 9], 1, 36), ([0, 5, 10], 0, 25)],
)
def test_multi_bezout_examples(values, index, d):
    k = multi_bezout(values, index, d)
    assert sum(x * y for x, y in zip(k, values)) % d == canonical_gcd(values, d)
    assert is_unit(k[index], d)


def test_multi_bezout_random():
    rng = random.Random(4)
    for _ in range(500):
        d = rng.randint(2, 200)
        values = [rng.randrange(d) for _ in range(rng.randint(1, 5))]
        idx = rng.randrange(len(values))
        k = multi_bezout(values, idx, d)
        assert sum(x * y for x, y in zip(k, values)) % d == canonical_gcd(values, d)
        assert is_unit(k[idx], d)


def test_multi_bezout_bad_index():
    with pytest.raises(IndexError):
        multi_bezout([1, 2], 2, 6)
