"""Genus of Shimura curves over Q, for side-by-side comparison with X^R."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ._arith import factorize, is_prime
from .errors import BudgetExceeded, ContractViolation, DomainError, InvariantViolation
from .field_poly import FieldSpec

MAX_D = 10**9


@dataclass(frozen=True)
class RationalDiscriminant:
    """Squarefree d > 0 with an even number (>= 2) of prime factors."""

    d: int
    primes: tuple[int, ...]

    def __post_init__(self):
        if math.prod(self.primes) != self.d or list(self.primes) != sorted(set(self.primes)):
            raise DomainError(f"{self.primes} is not the sorted prime support of {self.d}")
        if not all(is_prime(p) for p in self.primes):
            raise DomainError(f"non-prime in {self.primes}")
        if len(self.primes) < 2 or len(self.primes) % 2:
            raise DomainError(f"d={self.d} has {len(self.primes)} prime factors; need an even number >= 2")

    @classmethod
    def from_int(cls, d: int) -> "RationalDiscriminant":
        if d < 1:
            raise DomainError(f"d must be positive, got {d}")
        if d > MAX_D:
            raise BudgetExceeded("max_d", MAX_D, d)
        fac = factorize(d)
        if any(e > 1 for e in fac.values()):
            raise DomainError(f"d={d} is not squarefree")
        return cls(d, tuple(sorted(fac)))


def legendre_qi(p: int) -> int:
    """Splitting of p in Q(sqrt(-1))."""
    if not is_prime(p):
        raise ContractViolation(f"{p} is not prime")
    if p == 2:
        return 0
    return 1 if p % 4 == 1 else -1


def legendre_q3(p: int) -> int:
    """Splitting of p in Q(sqrt(-3))."""
    if not is_prime(p):
        raise ContractViolation(f"{p} is not prime")
    if p == 3:
        return 0
    return 1 if p % 3 == 1 else -1


def shimura_genus(d: RationalDiscriminant | int) -> int:
    if isinstance(d, int):
        d = RationalDiscriminant.from_int(d)
    ps = d.primes
    value = (
        1
        + Fraction(math.prod(p - 1 for p in ps), 12)
        - Fraction(1, 2) * (
            Fraction(1, 2) * math.prod(1 - legendre_qi(p) for p in ps)
            + Fraction(2, 3) * math.prod(1 - legendre_q3(p) for p in ps)
        )
    )
    if value.denominator != 1 or value < 0:
        raise InvariantViolation(f"Shimura genus for d={d.d} came out as {value}")
    return value.numerator


def zeta_constants(field: FieldSpec | int) -> tuple[Fraction, Fraction]:
    """(-zeta_Z(-1), -zeta_A(-1)) = (1/6, 1/(q^2 - 1))."""
    q = field if isinstance(field, int) else field.q
    return Fraction(1, 6), Fraction(1, q * q - 1)
