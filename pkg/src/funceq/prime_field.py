"""Arithmetic in Z_p, the finite integral domains used as the domain X."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterator

DEFAULT_MAX_P = 1 << 16


def max_prime() -> int:
    """Largest modulus accepted, overridable through ``FUNCEQ_MAX_P``."""
    raw = os.environ.get("FUNCEQ_MAX_P")
    if raw is None:
        return DEFAULT_MAX_P
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"FUNCEQ_MAX_P must be an integer, got {raw!r}") from None


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


class FieldMismatch(ValueError):
    pass


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise TypeError("modulus must be an int")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        cap = max_prime()
        if self.p > cap:
            raise ValueError(f"{self.p} exceeds the prime cap {cap} (set FUNCEQ_MAX_P)")

    def __call__(self, value: int) -> Elem:
        return Elem(value % self.p, self)

    def __iter__(self) -> Iterator[Elem]:
        return (Elem(v, self) for v in range(self.p))

    def __len__(self) -> int:
        return self.p

    @property
    def zero(self) -> Elem:
        return Elem(0, self)

    @property
    def one(self) -> Elem:
        return Elem(1 % self.p, self)

    def inv(self, a: int) -> int:
        """Inverse of a residue, as a plain int."""
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return pow(a, -1, self.p)

    def uniquely_divisible_by(self, n: int) -> bool:
        return uniquely_divisible_by(self, n)


@dataclass(frozen=True)
class Elem:
    value: int
    field: PrimeField

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.field.p:
            raise ValueError(f"{self.value} is not a canonical residue mod {self.field.p}")

    def _coerce(self, other: Elem | int) -> int:
        if isinstance(other, Elem):
            if other.field != self.field:
                raise FieldMismatch(f"Z_{self.field.p} vs Z_{other.field.p}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: Elem | int) -> Elem:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.field(self.value + o)

    __radd__ = __add__

    def __sub__(self, other: Elem | int) -> Elem:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.field(self.value - o)

    def __rsub__(self, other: int) -> Elem:
        return self.field(other - self.value)

    def __mul__(self, other: Elem | int) -> Elem:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.field(self.value * o)

    __rmul__ = __mul__

    def __neg__(self) -> Elem:
        return self.field(-self.value)

    def __pow__(self, n: int) -> Elem:
        if n < 0:
            return self.inverse() ** (-n)
        return Elem(pow(self.value, n, self.field.p), self.field)

    def __truediv__(self, other: Elem | int) -> Elem:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * self.field.inv(o)

    def inverse(self) -> Elem:
        return Elem(self.field.inv(self.value), self.field)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Elem):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.field.p))

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.p})"


def add(a: Elem, b: Elem) -> Elem:
    return a + b


def mul(a: Elem, b: Elem) -> Elem:
    return a * b


def neg(a: Elem) -> Elem:
    return -a


def inv(a: Elem) -> Elem:
    return a.inverse()


def uniquely_divisible_by(field: PrimeField, n: int) -> bool:
    """True iff x -> n*x is a bijection of Z_p, i.e. gcd(n, p) == 1."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    return math.gcd(n, field.p) == 1
