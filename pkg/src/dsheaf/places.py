"""Places of the projective line over F_q.

A finite place is a monic irreducible polynomial in T; the place at infinity
is a separate degree-1 value because F_q[T] has no generator for it.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._arith import divisors, mobius
from .errors import ContractViolation, DomainError
from .field_poly import Budget, FieldSpec, Poly, enumerate_monic_irreducibles, is_irreducible, parse_poly

INFINITY_TOKEN = "inf"


@dataclass(frozen=True)
class Place:
    field: FieldSpec
    poly: Poly | None = None  # None marks the place at infinity

    def __post_init__(self):
        f = self.poly
        if f is None:
            return
        if f.field != self.field:
            raise DomainError("place polynomial lives over a different field")
        if not f.is_monic or f.degree < 1 or not is_irreducible(f):
            raise ContractViolation(f"{f} is not a monic irreducible polynomial")

    @classmethod
    def _trusted(cls, field: FieldSpec, poly: Poly) -> "Place":
        # skips the irreducibility test for polynomials that already passed it
        obj = object.__new__(cls)
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "poly", poly)
        return obj

    @classmethod
    def infinity(cls, field: FieldSpec) -> "Place":
        return cls(field, None)

    @classmethod
    def parse(cls, field: FieldSpec, text: str) -> "Place":
        if text.strip().lower() == INFINITY_TOKEN:
            return cls.infinity(field)
        return cls(field, parse_poly(field, text))

    @property
    def is_infinity(self) -> bool:
        return self.poly is None

    @property
    def is_finite(self) -> bool:
        return self.poly is not None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree

    @property
    def residue_size(self) -> int:
        """q_x = q ** deg(x)."""
        return self.field.q ** self.degree

    def sort_key(self) -> tuple:
        if self.poly is None:
            return (0,)
        return (1,) + self.poly.sort_key()

    def __lt__(self, other: "Place") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return INFINITY_TOKEN if self.poly is None else str(self.poly)


class PlaceSet(tuple):
    """Canonically ordered tuple of distinct places (infinity first, then by degree and polynomial)."""

    def __new__(cls, places=()):
        items = list(places)
        if len(set(items)) != len(items):
            raise DomainError(f"duplicate places in {[str(x) for x in items]}")
        fields = {x.field for x in items}
        if len(fields) > 1:
            raise DomainError("places over different fields")
        return super().__new__(cls, sorted(items, key=Place.sort_key))

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(x.degree for x in self)

    def __repr__(self):
        return "PlaceSet(" + ", ".join(str(x) for x in self) + ")"


def count_places_of_degree(field: FieldSpec | int, d: int) -> int:
    """Number of finite places of degree d: (1/d) * sum_{e | d} mu(e) q^(d/e)."""
    if d < 1:
        raise ContractViolation(f"degree must be >= 1, got {d}")
    q = field if isinstance(field, int) else field.q
    total = sum(mobius(e) * q ** (d // e) for e in divisors(d))
    n, r = divmod(total, d)
    assert r == 0, "necklace count not divisible by degree"
    return n


def places_of_degree(field: FieldSpec, d: int, budget: Budget | None = None) -> list[Place]:
    return [Place._trusted(field, f) for f in enumerate_monic_irreducibles(field, d, budget)]


def enumerate_places(field: FieldSpec, max_degree: int, include_infinity: bool = True,
                     budget: Budget | None = None) -> PlaceSet:
    """All places of degree <= max_degree in canonical order."""
    out = [Place.infinity(field)] if include_infinity else []
    for d in range(1, max_degree + 1):
        out.extend(places_of_degree(field, d, budget))
    return PlaceSet(out)


def artin_legendre_constant_ext(x: Place) -> int:
    """Splitting symbol of x in the constant extension F_{q^2}F: +1 if deg x is even, else -1.

    That extension is unramified everywhere, so 0 never occurs.
    """
    return 1 if x.degree % 2 == 0 else -1
