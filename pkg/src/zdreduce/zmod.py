"""Scalar arithmetic in the residue ring Z/dZ.

Residues are plain Python ints held in their canonical range ``[0, d)``;
the ring itself is described by a :class:`Modulus`, which caches the prime
factorisation of ``d``. Every function accepts either a :class:`Modulus` or
a bare integer ``d``.

gcd and lcm follow the ideal-theoretic definitions: the *canonical* gcd of a
family is the unique generator of the ideal it spans that divides ``d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence, Union

from .errors import NotAUnitError, ZdError

__all__ = [
    "Modulus",
    "as_modulus",
    "factorize",
    "egcd",
    "is_unit",
    "order",
    "canonical_gcd",
    "lcm_zd",
    "Bezout",
    "bezout_invertible",
    "multi_bezout",
    "vp",
    "crt_split",
    "crt_join",
    "unit_inverse",
    "associated_unit",
    "divide",
]


def factorize(d: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation of ``d`` by trial division, primes increasing."""
    if d < 1:
        raise ZdError(f"cannot factor {d}")
    factors = []
    p = 2
    while p * p <= d:
        if d % p == 0:
            s = 0
            while d % p == 0:
                d //= p
                s += 1
            factors.append((p, s))
        p += 1 if p == 2 else 2
    if d > 1:
        factors.append((d, 1))
    return tuple(factors)


@dataclass(frozen=True)
class Modulus:
    """The ring Z/dZ, d >= 2, together with its prime factorisation."""

    d: int
    factors: tuple[tuple[int, int], ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 2:
            raise ZdError(f"modulus must be an integer >= 2, got {self.d!r}")
        object.__setattr__(self, "factors", _factor_cached(self.d))

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def is_prime_power(self) -> bool:
        return len(self.factors) == 1

    def exponent(self, p: int) -> int:
        """Exponent of ``p`` in ``d``; raises if ``p`` does not divide ``d``."""
        for q, s in self.factors:
            if q == p:
                return s
        raise ZdError(f"{p} is not a prime factor of {self.d}")

    def factor(self, p: int) -> "Modulus":
        """The Chinese factor Z/p^sZ belonging to the prime ``p``."""
        return Modulus(p ** self.exponent(p))

    def __call__(self, a: int) -> int:
        return a % self.d

    def __int__(self) -> int:
        return self.d


@lru_cache(maxsize=None)
def _factor_cached(d: int) -> tuple[tuple[int, int], ...]:
    return factorize(d)


def as_modulus(mod: Union[Modulus, int]) -> Modulus:
    return mod if isinstance(mod, Modulus) else Modulus(mod)


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b)`` over the integers."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def is_unit(a: int, mod: Union[Modulus, int]) -> bool:
    return math.gcd(a, int(mod)) == 1


def order(a: int, mod: Union[Modulus, int]) -> int:
    """Additive order of ``a``: ``d / gcd(a, d)``."""
    d = int(mod)
    return d // math.gcd(a, d)


def canonical_gcd(values: Iterable[int], mod: Union[Modulus, int]) -> int:
    """The gcd of ``values`` in Z/dZ that divides ``d`` (0 for the zero ideal)."""
    d = int(mod)
    return math.gcd(d, *values) % d


def lcm_zd(values: Iterable[int], mod: Union[Modulus, int]) -> int:
    """Generator dividing ``d`` of the intersection of the ideals ``a Z_d``."""
    d = int(mod)
    values = [v % d for v in values]
    if not values:
        return 1 % d
    return math.gcd(math.lcm(*values), d) % d


def divide(x: int, k: int, mod: Union[Modulus, int]) -> int:
    """Some ``c`` with ``c*k == x`` mod d; raises :class:`ZdError` if ``k`` does not divide ``x``."""
    d = int(mod)
    x %= d
    k %= d
    g = math.gcd(k, d)
    if x % g:
        raise ZdError(f"{k} does not divide {x} modulo {d}")
    if g == d:
        return 0
    m = d // g
    return (x // g) * pow(k // g, -1, m) % m


def unit_inverse(a: int, mod: Union[Modulus, int]) -> int:
    d = int(mod)
    if math.gcd(a, d) != 1:
        raise NotAUnitError(f"{a % d} is not a unit modulo {d}")
    return pow(a, -1, d)


def vp(a: int, p: int, mod: Union[Modulus, int]) -> int:
    """p-valuation of ``a`` inside the Chinese factor Z/p^sZ (``s`` for zero)."""
    mod = as_modulus(mod)
    s = mod.exponent(p)
    a %= p**s
    if a == 0:
        return s
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


def crt_split(a: int, mod: Union[Modulus, int]) -> tuple[int, ...]:
    """Components of ``a`` in the Chinese factors, in the order of ``mod.factors``."""
    mod = as_modulus(mod)
    return tuple(a % p**s for p, s in mod.factors)


def crt_join(components: Sequence[int], mod: Union[Modulus, int]) -> int:
    """Inverse of :func:`crt_split`."""
    mod = as_modulus(mod)
    if len(components) != len(mod.factors):
        raise ZdError(f"expected {len(mod.factors)} components, got {len(components)}")
    d = mod.d
    total = 0
    for c, (p, s) in zip(components, mod.factors):
        q = p**s
        rest = d // q
        total += (c % q) * rest * pow(rest, -1, q)
    return total % d


def associated_unit(a: int, b: int, mod: Union[Modulus, int]) -> int | None:
    """A unit ``lam`` with ``a == lam * b``, or None when the orders differ."""
    mod = as_modulus(mod)
    if order(a, mod) != order(b, mod):
        return None
    parts = []
    for p, s in mod.factors:
        q = p**s
        aq, bq = a % q, b % q
        if bq == 0:
            parts.append(1)
            continue
        t = vp(bq, p, q)
        alpha, beta = aq // p**t, bq // p**t
        parts.append(alpha * pow(beta, -1, q) % q)
    return crt_join(parts, mod)


class Bezout(NamedTuple):
    u: int
    v: int
    delta: int
    both_units: bool


def _bezout_prime_power(a: int, b: int, p: int, q: int) -> tuple[int, int, bool]:
    """u, v with u*a + v*b associated to gcd(a, b) in Z/q, u a unit."""
    if a == 0 and b == 0:
        return 1, 1, True
    g, u0, v0 = egcd(a, b)
    a1, b1 = a // g, b // g
    candidates = [(u0, v0), (u0 + b1, v0 - a1), (u0 - b1, v0 + a1)]
    for u, v in candidates:
        if u % p and v % p:
            return u % q, v % q, True
    for u, v in candidates:
        if u % p:
            return u % q, v % q, False
    raise AssertionError("no Bezout pair with a unit first coefficient")  # pragma: no cover


def bezout_invertible(a: int, b: int, mod: Union[Modulus, int]) -> Bezout:
    """Bezout relation ``u*a + v*b == delta`` with ``u`` a unit.

    ``delta`` is the canonical gcd of ``a`` and ``b``. ``v`` is a unit as well
    whenever that is possible at all, which ``both_units`` reports.
    """
    mod = as_modulus(mod)
    us, vs, both = [], [], True
    for p, s in mod.factors:
        q = p**s
        u, v, ok = _bezout_prime_power(a % q, b % q, p, q)
        us.append(u)
        vs.append(v)
        both = both and ok
    u, v = crt_join(us, mod), crt_join(vs, mod)
    delta = canonical_gcd((a, b), mod)
    lam = associated_unit(delta, (u * a + v * b) % mod.d, mod)
    return Bezout(lam * u % mod.d, lam * v % mod.d, delta, both)


def multi_bezout(values: Sequence[int], unit_index: int, mod: Union[Modulus, int]) -> list[int]:
    """Coefficients ``k`` with ``sum(k[j] * values[j]) == canonical_gcd(values)``.

    ``k[unit_index]`` (0-based) is guaranteed to be a unit.
    """
    mod = as_modulus(mod)
    d = mod.d
    n = len(values)
    if not 0 <= unit_index < n:
        raise IndexError(f"unit_index {unit_index} out of range for {n} values")
    values = [v % d for v in values]
    # integer Bezout coefficients for the gcd of the other entries
    coeffs = [0] * n
    g = 0
    for j, a in enumerate(values):
        if j == unit_index:
            continue
        g2, x, y = egcd(g, a)
        for jj in range(n):
            coeffs[jj] *= x
        coeffs[j] = y
        g = g2
    u, v, _, _ = bezout_invertible(values[unit_index], g % d, mod)
    k = [v * c % d for c in coeffs]
    k[unit_index] = u
    return k
