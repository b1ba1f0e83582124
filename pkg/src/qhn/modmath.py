"""Residue arithmetic over a prime modulus.

Plain ``int`` is the working type throughout the package; :class:`Residue`
is a small value wrapper for callers that want the modulus carried along.
Moduli are capped below 2**31 so that a product of two residues plus a
running sum always fits an int64 (the numeric kernels rely on this).
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import CompositeModulus, ZeroInverse

MAX_MODULUS = 2**31

# Deterministic for every n < 3.3e24, which covers 64-bit input.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (exact for 64-bit n)."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def mod_pow(base: int, exp: int, p: int) -> int:
    if exp < 0:
        raise ValueError("exponent must be non-negative")
    return pow(base % p, exp, p)


def mod_inverse(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroInverse(f"0 has no inverse mod {p}")
    return pow(a, p - 2, p)


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n by trial division (n < 2**31 here)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def multiplicative_order(a: int, p: int) -> int:
    """Order of a in (Z/p)^*, p prime."""
    a %= p
    if a == 0:
        raise ZeroInverse("0 is not a unit")
    order = p - 1
    for q in prime_factors(p - 1):
        while order % q == 0 and pow(a, order // q, p) == 1:
            order //= q
    return order


@dataclass(frozen=True)
class PrimeModulus:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise TypeError("modulus must be an int")
        if not is_prime(self.p):
            raise CompositeModulus(f"{self.p} is not prime")
        if self.p >= MAX_MODULUS:
            raise CompositeModulus(f"modulus {self.p} exceeds 2**31")

    def __int__(self):
        return self.p

    def __call__(self, value: int) -> Residue:
        return Residue(value, self)


@dataclass(frozen=True)
class Residue:
    """Canonical residue: ``value`` always lies in ``[0, p)``."""

    value: int
    modulus: PrimeModulus

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.modulus.p)

    @property
    def p(self) -> int:
        return self.modulus.p

    def _coerce(self, other):
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ValueError("residues belong to different moduli")
            return other.value
        return int(other)

    def __add__(self, other):
        return Residue(self.value + self._coerce(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return Residue(self.value - self._coerce(other), self.modulus)

    def __rsub__(self, other):
        return Residue(self._coerce(other) - self.value, self.modulus)

    def __mul__(self, other):
        return Residue(self.value * self._coerce(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def __pow__(self, exp: int):
        return Residue(mod_pow(self.value, exp, self.p), self.modulus)

    def inverse(self) -> Residue:
        return Residue(mod_inverse(self.value, self.p), self.modulus)

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"Residue({self.value} mod {self.p})"
