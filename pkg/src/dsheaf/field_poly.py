"""Finite fields F_q (q = p^e) and polynomials over them.

Field elements are plain ints in ``range(q)``.  For ``e == 1`` the int is the
residue mod p.  For ``e > 1`` it encodes the base-p digit vector of a
polynomial in the generator ``w`` (lowest digit = constant term), reduced
modulo a fixed primitive polynomial of degree e over F_p.

Polynomials in ``T`` are immutable :class:`Poly` values holding a tuple of
coefficients, low degree first, with no trailing zeros.
"""

from __future__ import annotations

import functools
import os
import re
from dataclasses import dataclass
from typing import Iterator, Sequence

from ._arith import factorize, is_prime, prime_power
from .errors import BudgetExceeded, ContractViolation, DomainError

VARIABLE = "T"
GENERATOR = "w"


# -- budgets ---------------------------------------------------------------


@dataclass(frozen=True)
class Budget:
    """Limits on exhaustive enumeration.

    ``max_candidates`` bounds ``q**degree``, the number of monic polynomials
    scanned when enumerating one degree.
    """

    max_q: int = 16
    max_degree: int = 12
    max_candidates: int = 1 << 16

    @classmethod
    def parse(cls, text: str) -> "Budget":
        """Parse ``"N"`` (candidate limit) or ``"max_q=..,max_degree=..,max_candidates=.."``."""
        text = text.strip()
        if text.isdigit():
            return cls(max_candidates=int(text))
        kwargs = {}
        for item in text.split(","):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in ("max_q", "max_degree", "max_candidates"):
                raise DomainError(f"bad DSHEAF_BUDGET entry {item!r}")
            try:
                kwargs[key] = int(value)
            except ValueError:
                raise DomainError(f"bad DSHEAF_BUDGET entry {item!r}") from None
        return cls(**kwargs)

    def check_degree(self, q: int, degree: int) -> None:
        if degree > self.max_degree:
            raise BudgetExceeded("max_degree", self.max_degree, degree)
        if q**degree > self.max_candidates:
            raise BudgetExceeded("max_candidates", self.max_candidates, q**degree)


def current_budget() -> Budget:
    raw = os.environ.get("DSHEAF_BUDGET")
    return Budget.parse(raw) if raw else Budget()


# -- prime-field helpers used to pick the modulus --------------------------


def _fp_rem(a: list[int], m: Sequence[int], p: int) -> list[int]:
    a = list(a)
    inv_lead = pow(m[-1], -1, p)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    a = a[:dm]
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_monics(p: int, degree: int) -> Iterator[tuple[int, ...]]:
    for idx in range(p**degree):
        digits = []
        for _ in range(degree):
            idx, r = divmod(idx, p)
            digits.append(r)
        yield tuple(digits) + (1,)


def _fp_irreducible_exhaustive(f: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(f)//2."""
    n = len(f) - 1
    for d in range(1, n // 2 + 1):
        for g in _fp_monics(p, d):
            if not _fp_rem(list(f), g, p):
                return False
    return True


# -- the field ---------------------------------------------------------------


class FieldSpec:
    """The finite field with ``q = p**e`` elements.

    For ``e > 1`` the modulus is the least monic irreducible polynomial of
    degree e over F_p (ordered by the integer value of its base-p digits) whose
    root generates the multiplicative group, so every nonzero element is a
    power of ``w``.
    """

    def __init__(self, p: int, e: int = 1):
        if not is_prime(p):
            raise DomainError(f"characteristic {p} is not prime")
        if e < 1:
            raise DomainError(f"exponent {e} must be positive")
        budget = current_budget()
        if p**e > budget.max_q:
            raise BudgetExceeded("max_q", budget.max_q, p**e)
        self.p = p
        self.e = e
        self.q = q = p**e
        self.modulus: tuple[int, ...] = (0, 1) if e == 1 else self._choose_modulus()

        if e == 1:
            self._add = tuple(tuple((a + b) % p for b in range(q)) for a in range(q))
            self._mul = tuple(tuple(a * b % p for b in range(q)) for a in range(q))
        else:
            self._add = tuple(
                tuple(self._encode([(x + y) % p for x, y in zip(self._digits(a), self._digits(b))])
                      for b in range(q))
                for a in range(q)
            )
            self._mul = tuple(tuple(self._slow_mul(a, b) for b in range(q)) for a in range(q))
        self._neg = tuple(next(b for b in range(q) if self._add[a][b] == 0) for a in range(q))
        self._inv = (None,) + tuple(
            next(b for b in range(1, q) if self._mul[a][b] == 1) for a in range(1, q)
        )
        if e > 1:
            self._exp = [1]
            for _ in range(q - 2):
                self._exp.append(self._mul[self._exp[-1]][p])
            self._log = {v: k for k, v in enumerate(self._exp)}
            if len(self._log) != q - 1:
                raise AssertionError("modulus root is not primitive")

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def _encode(self, digits: Sequence[int]) -> int:
        return sum(d * self.p**i for i, d in enumerate(digits))

    def _slow_mul(self, a: int, b: int) -> int:
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % self.p
        rem = _fp_rem(prod, self.modulus, self.p)
        return self._encode(rem + [0] * (self.e - len(rem)))

    def _choose_modulus(self) -> tuple[int, ...]:
        p, e = self.p, self.e
        order = p**e - 1
        prime_divs = list(factorize(order))
        for f in _fp_monics(p, e):
            if f[0] == 0 or not _fp_irreducible_exhaustive(f, p):
                continue
            # w is primitive iff w^(order/l) != 1 mod f for every prime l | order
            if all(_fp_pow_x(order // l, f, p) != [1] for l in prime_divs):
                return f
        raise AssertionError(f"no primitive polynomial of degree {e} over F_{p}")

    # element arithmetic
    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError("inverse of zero in F_%d" % self.q)
        return self._inv[a]

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        result = 1
        while n:
            if n & 1:
                result = self._mul[result][a]
            a = self._mul[a][a]
            n >>= 1
        return result

    @property
    def generator(self) -> int:
        """The element ``w`` (only meaningful for e > 1)."""
        if self.e == 1:
            raise DomainError(f"F_{self.q} is a prime field; no generator symbol")
        return self.p

    def elements(self) -> range:
        return range(self.q)

    def modulus_poly(self) -> "Poly":
        return Poly(gf(self.p), self.modulus)

    # text form
    def format_element(self, a: int) -> str:
        if self.e == 1 or a == 0:
            return str(a)
        k = self._log[a]
        if k == 0:
            return "1"
        return GENERATOR if k == 1 else f"{GENERATOR}^{k}"

    def parse_element(self, text: str) -> int:
        s = text.strip()
        if s.isdigit():
            n = int(s)
            if n >= self.p:
                raise DomainError(f"coefficient {n} is not a residue mod {self.p}")
            return n
        m = re.fullmatch(GENERATOR + r"(?:\^(\d+))?", s)
        if m is None:
            raise DomainError(f"cannot parse F_{self.q} element {text!r}")
        if self.e == 1:
            raise DomainError(f"F_{self.q} is a prime field; {GENERATOR!r} is undefined")
        return self.pow(self.generator, int(m.group(1) or 1))

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self):
        return hash((FieldSpec, self.p, self.e))

    def __repr__(self):
        return f"FieldSpec(p={self.p}, e={self.e})"


def _fp_pow_x(n: int, f: Sequence[int], p: int) -> list[int]:
    """x^n mod f over F_p, as a trimmed coefficient list."""
    result, base = [1], [0, 1]
    while n:
        if n & 1:
            result = _fp_rem(_fp_mul(result, base, p), f, p)
        base = _fp_rem(_fp_mul(base, base, p), f, p)
        n >>= 1
    return result


def _fp_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


@functools.lru_cache(maxsize=None)
def gf(q: int) -> FieldSpec:
    """The (cached) field with q elements."""
    pe = prime_power(q)
    if pe is None:
        raise DomainError(f"q={q} is not a prime power")
    return FieldSpec(*pe)


# -- polynomial kernels on coefficient tuples ------------------------------


def _trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(F: FieldSpec, a, b) -> tuple[int, ...]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] = F._add[out[i]][y]
    return _trim(out)


def _pmul(F: FieldSpec, a, b) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    if F.e == 1:
        p = F.p
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return _trim([c % p for c in out])
    add, mul = F._add, F._mul
    for i, x in enumerate(a):
        if x:
            row = mul[x]
            for j, y in enumerate(b):
                out[i + j] = add[out[i + j]][row[y]]
    return _trim(out)


def _pdivmod(F: FieldSpec, a, b) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if not b:
        raise DomainError("polynomial division by zero")
    db = len(b) - 1
    if len(a) - 1 < db:
        return (), tuple(a)
    rem = list(a)
    quo = [0] * (len(a) - db)
    inv_lead = F._inv[b[-1]]
    add, mul, neg = F._add, F._mul, F._neg
    for i in range(len(a) - 1, db - 1, -1):
        c = mul[rem[i]][inv_lead]
        if c:
            quo[i - db] = c
            nc = neg[c]
            row = mul[nc]
            for j in range(db + 1):
                rem[i - db + j] = add[rem[i - db + j]][row[b[j]]]
    return _trim(quo), _trim(rem[:db])


@dataclass(frozen=True)
class Poly:
    """A polynomial over ``field`` in the variable T."""

    field: FieldSpec
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = tuple(self.coeffs)
        q = self.field.q
        if any(not 0 <= x < q for x in c):
            raise DomainError(f"coefficients {c} not in F_{q}")
        object.__setattr__(self, "coeffs", _trim(list(c)))

    @classmethod
    def monomial(cls, field: FieldSpec, degree: int, coeff: int = 1) -> "Poly":
        return cls(field, (0,) * degree + (coeff,))

    @classmethod
    def x(cls, field: FieldSpec) -> "Poly":
        return cls(field, (0, 1))

    @classmethod
    def parse(cls, field: FieldSpec, text: str) -> "Poly":
        return parse_poly(field, text)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        inv = self.field.inv(self.leading)
        return Poly(self.field, tuple(self.field.mul(c, inv) for c in self.coeffs))

    def _check(self, other: "Poly") -> None:
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other.field != self.field:
            raise DomainError(f"field mismatch: F_{self.field.q} vs F_{other.field.q}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        return Poly(self.field, _padd(self.field, self.coeffs, other.coeffs))

    def __neg__(self) -> "Poly":
        return Poly(self.field, tuple(self.field.neg(c) for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        return Poly(self.field, _pmul(self.field, self.coeffs, other.coeffs))

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._check(other)
        s, r = _pdivmod(self.field, self.coeffs, other.coeffs)
        return Poly(self.field, s), Poly(self.field, r)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __call__(self, x: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def sort_key(self) -> tuple:
        """Degree first, then coefficients from the top down (integer value order)."""
        return (self.degree,) + tuple(reversed(self.coeffs))

    def __lt__(self, other: "Poly") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly(F_{self.field.q}, {format_poly(self)!r})"


def gcd(f: Poly, g: Poly) -> Poly:
    """Monic greatest common divisor (zero if both inputs are zero)."""
    f._check(g)
    a, b = f.coeffs, g.coeffs
    F = f.field
    while b:
        a, b = b, _pdivmod(F, a, b)[1]
    return Poly(F, a).monic()


def powmod(base: Poly, n: int, modulus: Poly) -> Poly:
    """``base**n mod modulus`` by repeated squaring."""
    if n < 0:
        raise ContractViolation("negative exponent")
    F = base.field
    m = modulus.coeffs
    result = _pdivmod(F, (1,), m)[1]
    b = _pdivmod(F, base.coeffs, m)[1]
    while n:
        if n & 1:
            result = _pdivmod(F, _pmul(F, result, b), m)[1]
        n >>= 1
        if n:
            b = _pdivmod(F, _pmul(F, b, b), m)[1]
    return Poly(F, result)


def is_irreducible(f: Poly) -> bool:
    """Rabin's test: f | T^(q^n) - T and gcd(f, T^(q^(n/l)) - T) = 1 for primes l | n."""
    if not f.is_monic or f.degree < 1:
        raise ContractViolation(f"is_irreducible needs a monic nonconstant polynomial, got {f}")
    n = f.degree
    if n == 1:
        return True
    F = f.field
    x = Poly.x(F)
    # frob[k] = T^(q^k) mod f
    frob = [x % f]
    for _ in range(n):
        frob.append(powmod(frob[-1], F.q, f))
    if not (frob[n] - frob[0]).is_zero:
        return False
    for ell in factorize(n):
        if gcd(frob[n // ell] - x, f).degree > 0:
            return False
    return True


def monic_polys(field: FieldSpec, degree: int) -> Iterator[Poly]:
    """All monic polynomials of the given degree, in increasing integer-value order."""
    q = field.q
    for idx in range(q**degree):
        digits = []
        for _ in range(degree):
            idx, r = divmod(idx, q)
            digits.append(r)
        yield Poly(field, tuple(digits) + (1,))


def enumerate_monic_irreducibles(field: FieldSpec, degree: int, budget: Budget | None = None) -> list[Poly]:
    """Every monic irreducible of ``degree`` over ``field``, in canonical order."""
    if degree < 1:
        raise ContractViolation(f"degree must be >= 1, got {degree}")
    (budget or current_budget()).check_degree(field.q, degree)
    return list(_irreducibles_cached(field, degree))


@functools.lru_cache(maxsize=None)
def _irreducibles_cached(field: FieldSpec, degree: int) -> tuple[Poly, ...]:
    out = []
    for f in monic_polys(field, degree):
        # a zero constant term means T | f
        if degree > 1 and f.coeffs[0] == 0:
            continue
        if is_irreducible(f):
            out.append(f)
    return tuple(out)


def smallest_irreducibles(field: FieldSpec, degree: int, count: int, exclude=()) -> list[Poly]:
    """The first ``count`` monic irreducibles of ``degree`` in canonical order, skipping ``exclude``.

    Stops scanning as soon as enough are found, so large degrees are cheap
    when few places are needed; the candidate budget applies to the
    polynomials actually scanned.  Returns fewer than ``count`` if the degree
    does not have that many.
    """
    budget = current_budget()
    if degree > budget.max_degree:
        raise BudgetExceeded("max_degree", budget.max_degree, degree)
    excluded = set(exclude)
    out: list[Poly] = []
    if count <= 0:
        return out
    for scanned, f in enumerate(monic_polys(field, degree), start=1):
        if scanned > budget.max_candidates:
            raise BudgetExceeded("max_candidates", budget.max_candidates, scanned)
        if degree > 1 and f.coeffs[0] == 0:
            continue
        if f not in excluded and is_irreducible(f):
            out.append(f)
            if len(out) == count:
                break
    return out


# -- text form -------------------------------------------------------------


def format_poly(f: Poly) -> str:
    if f.is_zero:
        return "0"
    F = f.field
    terms = []
    for k in range(f.degree, -1, -1):
        c = f.coeffs[k]
        if c == 0:
            continue
        if k == 0:
            terms.append(F.format_element(c))
            continue
        mono = VARIABLE if k == 1 else f"{VARIABLE}^{k}"
        terms.append(mono if c == 1 else f"{F.format_element(c)}*{mono}")
    return "+".join(terms)


_TERM = re.compile(r"([+-]?)([^+-]+)")


def parse_poly(field: FieldSpec, text: str) -> Poly:
    """Parse e.g. ``T^2+T+1``, ``2*T+1``, ``2T-1`` or (over F_4) ``T+w^2``."""
    s = text.replace(" ", "")
    if not s:
        raise DomainError("empty polynomial")
    pos = 0
    acc: dict[int, int] = {}
    for m in _TERM.finditer(s):
        if m.start() != pos:
            raise DomainError(f"cannot parse polynomial {text!r}")
        pos = m.end()
        sign, body = m.groups()
        idx = body.find(VARIABLE)
        if idx < 0:
            coeff, deg = field.parse_element(body), 0
        else:
            head, tail = body[:idx], body[idx + 1:]
            if head.endswith("*"):
                head = head[:-1]
            coeff = field.parse_element(head) if head else 1
            if tail == "":
                deg = 1
            elif re.fullmatch(r"\^\d+", tail):
                deg = int(tail[1:])
            else:
                raise DomainError(f"cannot parse term {body!r} in {text!r}")
        if sign == "-":
            coeff = field.neg(coeff)
        acc[deg] = field.add(acc.get(deg, 0), coeff)
    if pos != len(s):
        raise DomainError(f"cannot parse polynomial {text!r}")
    top = max(acc)
    return Poly(field, tuple(acc.get(k, 0) for k in range(top + 1)))
