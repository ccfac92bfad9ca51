"""Closed-form invariants of the curves X^R attached to a quaternion discriminant R.

Every function computes with :class:`fractions.Fraction` and converts to
``int`` only through :func:`as_int`, which raises
:class:`~dsheaf.errors.InvariantViolation` on a fractional value.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import DomainError, InvariantViolation
from .field_poly import FieldSpec, Poly, smallest_irreducibles
from .places import Place, PlaceSet, artin_legendre_constant_ext, count_places_of_degree, places_of_degree


def as_int(value: Fraction | int, what: str) -> int:
    value = Fraction(value)
    if value.denominator != 1:
        raise InvariantViolation(f"{what} is not an integer: {value}")
    return value.numerator


def wp(places: Iterable[Place]) -> int:
    """0 if some place has even degree, else 1 (so 1 on the empty set)."""
    return 0 if any(x.degree % 2 == 0 for x in places) else 1


def _prod_residue_minus_one(places: Iterable[Place]) -> int:
    return math.prod(x.residue_size - 1 for x in places)


# -- domain types ------------------------------------------------------------


@dataclass(frozen=True)
class Discriminant:
    """Ramification set R of a quaternion division algebra over F_q(T)."""

    places: PlaceSet

    def __post_init__(self):
        ps = PlaceSet(self.places)
        object.__setattr__(self, "places", ps)
        if any(x.is_infinity for x in ps):
            raise DomainError("infinity cannot ramify in D")
        if len(ps) < 2 or len(ps) % 2:
            raise DomainError(
                f"R must have even cardinality >= 2 (division algebra), got {len(ps)}"
            )

    @classmethod
    def from_degrees(cls, field: FieldSpec, degrees: Iterable[int], avoid: Iterable[Place] = ()) -> "Discriminant":
        """Canonical realisation: the smallest places of each degree, skipping ``avoid``."""
        degrees = sorted(degrees)
        if any(d < 1 for d in degrees):
            raise DomainError(f"place degrees must be positive: {degrees}")
        skip = [x.poly for x in avoid if x.is_finite]
        chosen: list[Place] = []
        for d, group in itertools.groupby(degrees):
            k = len(list(group))
            skip_d = [f for f in skip if f.degree == d]
            available = count_places_of_degree(field, d) - len(skip_d)
            if available < k:
                raise DomainError(
                    f"F_{field.q} has only {available} usable places of degree {d}, need {k}"
                )
            chosen.extend(Place._trusted(field, f) for f in smallest_irreducibles(field, d, k, skip_d))
        return cls(PlaceSet(chosen))

    @property
    def field(self) -> FieldSpec:
        return self.places[0].field

    @property
    def cardinality(self) -> int:
        return len(self.places)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted(x.degree for x in self.places))

    @property
    def degree(self) -> int:
        """deg of the product ideal r."""
        return sum(self.degrees)

    @property
    def wp(self) -> int:
        return wp(self.places)

    def product(self) -> Poly:
        out = Poly(self.field, (1,))
        for x in self.places:
            out = out * x.poly
        return out

    def __str__(self):
        return "{" + ", ".join(str(x) for x in self.places) + "}"


@dataclass(frozen=True)
class LevelIdeal:
    """Nonzero ideal I of F_q[T] as ((place, exponent), ...)."""

    factors: tuple[tuple[Place, int], ...]

    def __post_init__(self):
        facs = tuple(sorted(((x, int(e)) for x, e in self.factors), key=lambda t: t[0].sort_key()))
        object.__setattr__(self, "factors", facs)
        if not facs:
            raise DomainError("level ideal must be nonempty")
        places = [x for x, _ in facs]
        if len(set(places)) != len(places):
            raise DomainError("repeated place in level factorisation")
        for x, e in facs:
            if x.is_infinity:
                raise DomainError("level ideal cannot be supported at infinity")
            if e < 1:
                raise DomainError(f"exponent {e} at {x} must be >= 1")

    @classmethod
    def prime_power(cls, x: Place, e: int = 1) -> "LevelIdeal":
        return cls(((x, e),))

    @property
    def field(self) -> FieldSpec:
        return self.factors[0][0].field

    @property
    def support(self) -> tuple[Place, ...]:
        return tuple(x for x, _ in self.factors)

    def __str__(self):
        return "*".join(str(x) if e == 1 else f"({x})^{e}" for x, e in self.factors)


def _check_o(R: Discriminant, o: Place) -> None:
    if o.is_infinity:
        raise DomainError("o must be a finite place")
    if o.field != R.field:
        raise DomainError("o lives over a different field")
    if o in R.places:
        raise DomainError(f"o = {o} lies in R; the auxiliary algebra would not ramify at R and o")


def _check_level(R: Discriminant, I: LevelIdeal) -> None:
    if I.field != R.field:
        raise DomainError("level ideal lives over a different field")
    overlap = set(I.support) & set(R.places)
    if overlap:
        raise DomainError(f"level ideal meets R at {sorted(str(x) for x in overlap)}")


# -- supersingular locus -------------------------------------------------------


def mass(R: Discriminant, o: Place) -> Fraction:
    """Mass of the definite algebra ramified at R and o: prod_{R+o}(q_x - 1) / (q^2 - 1)."""
    _check_o(R, o)
    q = R.field.q
    return Fraction(_prod_residue_minus_one(R.places) * (o.residue_size - 1), q * q - 1)


def class_number(R: Discriminant, o: Place) -> int:
    q = R.field.q
    m = mass(R, o)
    correction = Fraction(q, q + 1) * 2**R.cardinality * wp(list(R.places) + [o])
    return as_int(m + correction, "class number")


def supersingular_count(R: Discriminant, o: Place) -> int:
    """Supersingular points on the fibre at o; all are rational over the quadratic extension of F_o."""
    return class_number(R, o)


def extra_autos(R: Discriminant) -> int:
    """Points with automorphism group F_{q^2}^*: 2^#R * wp(R)."""
    return 2**R.cardinality * R.wp


def extra_auto_type(R: Discriminant, o: Place) -> str | None:
    """'ordinary' if deg o is even, 'supersingular' if odd; None when there are no such points."""
    if not R.wp:
        return None
    return "ordinary" if o.degree % 2 == 0 else "supersingular"


# -- level structure -------------------------------------------------------


def gl2_order(q_x: int, e: int) -> int:
    """#GL_2 over a local ring of length e with residue field of size q_x."""
    if q_x < 2 or e < 1:
        raise DomainError(f"need q_x >= 2 and e >= 1, got q_x={q_x}, e={e}")
    return q_x ** (4 * (e - 1)) * (q_x**2 - 1) * (q_x**2 - q_x)


def _gl2_level(I: LevelIdeal) -> int:
    return math.prod(gl2_order(x.residue_size, e) for x, e in I.factors)


def covering_degree(I: LevelIdeal, field: FieldSpec | None = None) -> int:
    """Degree of X_I -> X_empty: #GL_2(O_I) / (q - 1)."""
    q = (field or I.field).q
    return as_int(Fraction(_gl2_level(I), q - 1), "covering degree")


def chi_level(R: Discriminant, I: LevelIdeal) -> int:
    """Euler characteristic of the level-I curve."""
    _check_level(R, I)
    q = R.field.q
    value = -Fraction(2 * _gl2_level(I), (q - 1) * (q * q - 1)) * _prod_residue_minus_one(R.places)
    return as_int(value, "chi at level I")


def chi_bare(R: Discriminant) -> int:
    """Euler characteristic of X^R."""
    q = R.field.q
    value = (
        -Fraction(2, q * q - 1) * _prod_residue_minus_one(R.places)
        + Fraction(q, q + 1) * 2**R.cardinality * R.wp
    )
    return as_int(value, "chi of X^R")


def riemann_hurwitz_residual(R: Discriminant, I: LevelIdeal) -> int:
    """chi_I - (deg(pi) chi_0 - deg(pi) q/(q+1) w); zero for every valid input."""
    q = R.field.q
    deg_pi = covering_degree(I, R.field)
    predicted = deg_pi * chi_bare(R) - deg_pi * Fraction(q, q + 1) * extra_autos(R)
    return as_int(chi_level(R, I) - predicted, "Riemann-Hurwitz residual")


# -- genus -------------------------------------------------------------------


def _assert_genus(g: int, q: int) -> int:
    if g < 0:
        raise InvariantViolation(f"negative genus {g}")
    if g % q:
        raise InvariantViolation(f"genus {g} not divisible by q={q}")
    return g


def genus(R: Discriminant) -> int:
    q = R.field.q
    value = 1 + Fraction(
        _prod_residue_minus_one(R.places) - q * (q - 1) * 2 ** (R.cardinality - 1) * R.wp,
        q * q - 1,
    )
    return _assert_genus(as_int(value, "genus"), q)


def genus_artin_legendre_form(R: Discriminant) -> int:
    """Same genus, written with the splitting symbols of R in F_{q^2}F."""
    q = R.field.q
    symbol_term = math.prod(1 - artin_legendre_constant_ext(x) for x in R.places)
    value = (
        1
        + Fraction(_prod_residue_minus_one(R.places), q * q - 1)
        - Fraction(1, 2) * Fraction(q, q + 1) * symbol_term
    )
    return _assert_genus(as_int(value, "genus (Artin-Legendre form)"), q)


@dataclass(frozen=True)
class Classification:
    genus: int
    genus_zero: bool
    hyperelliptic: str  # "yes" | "no" | "unknown"


def _is_t4_minus_t(R: Discriminant) -> bool:
    F = R.field
    if F.q != 4 or R.degrees != (1, 1, 1, 1):
        return False
    # T^4 - T = T^4 + T in characteristic 2
    return R.product() == Poly(F, (0, 1, 0, 0, 1))


def classify(R: Discriminant) -> Classification:
    """Genus-zero and hyperelliptic flags from the structural criteria, not from the genus value.

    Genus zero iff deg r = 2, or q = 4 and r = (T^4 - T).  For odd q,
    hyperelliptic iff deg r = 3.  Even q with positive genus is ``unknown``.
    Genus-zero curves are reported as not hyperelliptic.
    """
    g = genus(R)
    zero = R.degree == 2 or _is_t4_minus_t(R)
    if zero:
        hyper = "no"
    elif R.field.q % 2:
        hyper = "yes" if R.degree == 3 else "no"
    else:
        hyper = "unknown"
    return Classification(genus=g, genus_zero=zero, hyperelliptic=hyper)


# -- reports -------------------------------------------------------------------


@dataclass(frozen=True)
class InvariantReport:
    q: int
    r_degrees: tuple[int, ...]
    r_polys: tuple[str, ...]
    o: str | None
    mass: Fraction | None
    class_number: int | None
    supersingular: int | None
    extra_autos: int
    genus: int
    chi0: int
    ratio: Fraction | None = None
    rational_over: int | None = None
    extra_auto_type: str | None = None

    def __post_init__(self):
        if self.chi0 != 2 - 2 * self.genus:
            raise InvariantViolation(f"chi0={self.chi0} disagrees with genus {self.genus}")
        if self.genus < 0 or self.genus % self.q:
            raise InvariantViolation(f"genus {self.genus} invalid for q={self.q}")
        if self.class_number != self.supersingular:
            raise InvariantViolation("class number and supersingular count differ")

    def to_dict(self) -> dict:
        frac = lambda x: None if x is None else str(x)  # noqa: E731
        return {
            "q": self.q,
            "r_degrees": list(self.r_degrees),
            "r_polys": list(self.r_polys),
            "o": self.o,
            "mass": frac(self.mass),
            "class_number": self.class_number,
            "supersingular": self.supersingular,
            "extra_autos": self.extra_autos,
            "genus": self.genus,
            "chi0": self.chi0,
            "ratio": frac(self.ratio),
            "ratio_decimal": None if self.ratio is None else f"{float(self.ratio):.4f}",
            "rational_over": self.rational_over,
            "extra_auto_type": self.extra_auto_type,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "InvariantReport":
        frac = lambda x: None if x is None else Fraction(x)  # noqa: E731
        return cls(
            q=int(d["q"]),
            r_degrees=tuple(d["r_degrees"]),
            r_polys=tuple(d["r_polys"]),
            o=d.get("o"),
            mass=frac(d.get("mass")),
            class_number=d.get("class_number"),
            supersingular=d.get("supersingular"),
            extra_autos=int(d["extra_autos"]),
            genus=int(d["genus"]),
            chi0=int(d["chi0"]),
            ratio=frac(d.get("ratio")),
            rational_over=d.get("rational_over"),
            extra_auto_type=d.get("extra_auto_type"),
        )


def build_report(R: Discriminant, o: Place | None = None) -> InvariantReport:
    g = genus(R)
    if o is None:
        m = c = ss = ratio = rat_over = kind = None
    else:
        m = mass(R, o)
        c = class_number(R, o)
        ss = supersingular_count(R, o)
        ratio = Fraction(ss, g) if g else None
        rat_over = o.residue_size**2
        kind = extra_auto_type(R, o)
    return InvariantReport(
        q=R.field.q,
        r_degrees=R.degrees,
        r_polys=tuple(str(x) for x in R.places),
        o=None if o is None else str(o),
        mass=m,
        class_number=c,
        supersingular=ss,
        extra_autos=extra_autos(R),
        genus=g,
        chi0=chi_bare(R),
        ratio=ratio,
        rational_over=rat_over,
        extra_auto_type=kind,
    )


# -- sweeps --------------------------------------------------------------------


def degree_multisets(total: int, cardinality: int, min_part: int = 1) -> Iterator[tuple[int, ...]]:
    """Nondecreasing tuples of ``cardinality`` positive ints summing to ``total``, lexicographic."""
    if cardinality == 0:
        if total == 0:
            yield ()
        return
    for first in range(min_part, total // cardinality + 1):
        for rest in degree_multisets(total - first, cardinality - 1, first):
            yield (first,) + rest


def _cardinalities(max_disc_degree: int, r_cardinality: int | None) -> list[int]:
    if r_cardinality is None:
        return list(range(2, max_disc_degree + 1, 2))
    if r_cardinality < 2 or r_cardinality % 2:
        raise DomainError(f"#R must be even and >= 2, got {r_cardinality}")
    return [r_cardinality]


def enumerate_discriminants(
    field: FieldSpec,
    max_disc_degree: int,
    r_cardinality: int | None = None,
    avoid: Iterable[Place] = (),
    canonical_only: bool = False,
) -> Iterator[Discriminant]:
    """Every valid R with deg r <= max_disc_degree, ordered by (deg r, degree multiset, places).

    ``r_cardinality=None`` means every even cardinality.  With
    ``canonical_only`` only the smallest realisation of each degree multiset
    is produced, found without enumerating whole degrees.
    """
    avoid = set(avoid)
    cards = _cardinalities(max_disc_degree, r_cardinality)
    pool: dict[int, list[Place]] = {}

    def usable(d: int) -> list[Place]:
        if d not in pool:
            pool[d] = [x for x in places_of_degree(field, d) if x not in avoid]
        return pool[d]

    for n in range(2, max_disc_degree + 1):
        shapes = sorted(m for k in cards for m in degree_multisets(n, k))
        for shape in shapes:
            groups = [(d, len(list(g))) for d, g in itertools.groupby(shape)]
            if any(count_places_of_degree(field, d) - sum(1 for x in avoid if x.degree == d and x.is_finite) < k
                   for d, k in groups):
                continue
            if canonical_only:
                yield Discriminant.from_degrees(field, shape, avoid)
                continue
            choices = [itertools.combinations(usable(d), k) for d, k in groups]
            for combo in itertools.product(*choices):
                yield Discriminant(PlaceSet(itertools.chain.from_iterable(combo)))


def optimality_scan(
    field: FieldSpec,
    o: Place,
    max_disc_degree: int,
    r_cardinality: int | None = 2,
    canonical_only: bool = False,
) -> list[InvariantReport]:
    """Reports (with supersingular/genus ratios) for every R avoiding o up to the given degree."""
    if o.is_infinity:
        raise DomainError("o must be a finite place")
    return [
        build_report(R, o)
        for R in enumerate_discriminants(field, max_disc_degree, r_cardinality, [o], canonical_only)
    ]
