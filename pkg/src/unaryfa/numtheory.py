"""Primes, Chinese remaindering and guarded lcm on Python's big integers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


@dataclass(frozen=True)
class ResidueClass:
    modulus: int
    residue: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        if not 0 <= self.residue < self.modulus:
            raise ValueError(f"residue {self.residue} out of range mod {self.modulus}")

    def contains(self, value: int) -> bool:
        return value % self.modulus == self.residue

    def least_at_least(self, bound: int) -> int:
        """Smallest member of the class that is >= bound."""
        gap = (self.residue - bound) % self.modulus
        return bound + gap


@dataclass(frozen=True)
class PrimeBasis:
    primes: tuple
    lower_bound: int
    count: int


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_upto(n: int) -> list[int]:
    """All primes <= n by the sieve of Eratosthenes."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, n + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


def first_primes_ge(count: int, lower: int) -> PrimeBasis:
    if count < 0:
        raise ValueError("count must be >= 0")
    found = []
    candidate = max(lower, 2)
    while len(found) < count:
        if is_prime(candidate):
            found.append(candidate)
        candidate += 1
    return PrimeBasis(primes=tuple(found), lower_bound=lower, count=count)


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division (n is an automaton size here)."""
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _combine(a: ResidueClass, b: ResidueClass) -> Optional[ResidueClass]:
    g = math.gcd(a.modulus, b.modulus)
    if (b.residue - a.residue) % g:
        return None
    lcm = a.modulus // g * b.modulus
    # x = a.residue + a.modulus * t, with a.modulus * t = b.residue - a.residue (mod b.modulus)
    m_b = b.modulus // g
    if m_b == 1:
        return ResidueClass(lcm, a.residue % lcm)
    inv = pow(a.modulus // g, -1, m_b)
    t = ((b.residue - a.residue) // g * inv) % m_b
    return ResidueClass(lcm, (a.residue + a.modulus * t) % lcm)


def crt_solve(classes: Sequence[ResidueClass]) -> Optional[ResidueClass]:
    """Intersect residue classes; None when they are incompatible."""
    if not classes:
        raise ValueError("crt_solve needs at least one class")
    acc = classes[0]
    for cls in classes[1:]:
        acc = _combine(acc, cls)
        if acc is None:
            return None
    return acc


def lcm_guarded(values: Iterable[int], cap: int) -> Optional[int]:
    """lcm of values, or None as soon as it exceeds cap."""
    acc = 1
    for v in values:
        if v < 1:
            raise ValueError("lcm_guarded needs values >= 1")
        acc = math.lcm(acc, v)
        if acc > cap:
            return None
    return acc


def ceil_log2(n: int) -> int:
    return max(0, (n - 1).bit_length()) if n > 1 else 0


def floor_log2(n: int) -> int:
    return n.bit_length() - 1 if n >= 1 else 0


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]
