import itertools

import pytest
from hypothesis import given, settings, strategies as st

from dsheaf.errors import BudgetExceeded, ContractViolation, DomainError
from dsheaf.field_poly import (
    Budget,
    Poly,
    enumerate_monic_irreducibles,
    gcd,
    gf,
    is_irreducible,
    monic_polys,
    parse_poly,
    powmod,
)

QS = [2, 3, 4, 5, 7, 8, 9, 16]


def P(q, text):
    return parse_poly(gf(q), text)


def _naive_irreducible(f):
    # trial division by every monic polynomial of degree 1..deg(f)//2
    return all(
        not (f % g).is_zero
        for d in range(1, f.degree // 2 + 1)
        for g in monic_polys(f.field, d)
    )


def _naive_pow(base, n, mod):
    acc = Poly(base.field, (1,)) % mod
    for _ in range(n):
        acc = (acc * base) % mod
    return acc


# -- field elements ------------------------------------------------------------


def test_f2_one_plus_one():
    assert gf(2).add(1, 1) == 0


def test_f3_inverse_of_two():
    assert gf(3).inv(2) == 2


def test_f4_omega_squared_is_omega_plus_one():
    F = gf(4)
    w = F.generator
    # w^2 = w + 1 under the modulus x^2 + x + 1
    assert F.modulus == (1, 1, 1)
    assert F.mul(w, w) == F.add(w, 1)


def test_inverse_of_zero_is_domain_error():
    with pytest.raises(DomainError):
        gf(5).inv(0)


@pytest.mark.parametrize("q", [1, 6, 12, 0])
def test_non_prime_power_rejected(q):
    with pytest.raises(DomainError):
        gf(q)


def test_q_over_budget(monkeypatch):
    monkeypatch.setenv("DSHEAF_BUDGET", "max_q=16")
    with pytest.raises(BudgetExceeded):
        from dsheaf.field_poly import FieldSpec

        FieldSpec(5, 2)


@pytest.mark.parametrize("q", QS)
def test_modulus_irreducible_and_deterministic(q):
    F = gf(q)
    if F.e > 1:
        m = F.modulus_poly()
        assert _naive_irreducible(m)
        from dsheaf.field_poly import FieldSpec

        assert FieldSpec(F.p, F.e).modulus == F.modulus


@pytest.mark.parametrize("q", QS)
def test_field_axioms_exhaustive(q):
    F = gf(q)
    els = list(F.elements())
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        assert F.mul(a, 1) == a
        if a:
            assert F.mul(a, F.inv(a)) == 1
    for a, b, c in itertools.product(els, repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))


@pytest.mark.parametrize("q", [4, 8, 9, 16])
def test_every_nonzero_element_is_a_power_of_w(q):
    F = gf(q)
    powers = {F.pow(F.generator, k) for k in range(q - 1)}
    assert powers == set(range(1, q))
    for a in range(1, q):
        assert F.parse_element(F.format_element(a)) == a


# -- polynomials -------------------------------------------------------------


def test_freshman_dream_f2():
    assert P(2, "T+1") * P(2, "T+1") == P(2, "T^2+1")


def test_gcd_f2():
    assert gcd(P(2, "T^2+T"), P(2, "T")) == P(2, "T")


def test_divmod_f3():
    s, r = divmod(P(3, "T^3+1"), P(3, "T+1"))
    assert s == P(3, "T^2-T+1")
    assert r.is_zero


def test_division_by_zero():
    with pytest.raises(DomainError):
        divmod(P(2, "T"), Poly(gf(2), ()))


def test_canonical_form_strips_trailing_zeros():
    f = Poly(gf(3), (1, 2, 0, 0))
    assert f.coeffs == (1, 2)
    assert f.degree == 1
    assert Poly(gf(3), (0, 0)).coeffs == ()


@pytest.mark.parametrize("text", ["T^2+T+1", "2*T^3+T", "T", "1", "T^4+2"])
def test_format_parse_roundtrip_prime(text):
    f = P(3, text)
    assert P(3, str(f)) == f


def test_format_extension_field():
    f = P(4, "T+w^2")
    assert str(f) == "T+w^2"
    assert P(4, "w*T^2+T") == Poly(gf(4), (0, 1, gf(4).generator))


@pytest.mark.parametrize("bad", ["T^", "T**2", "3T", "w", "", "T+x"])
def test_parse_rejects(bad):
    with pytest.raises(DomainError):
        P(3, bad)


def polys(q, max_deg=5):
    return st.lists(st.integers(0, q - 1), max_size=max_deg + 1).map(lambda c: Poly(gf(q), tuple(c)))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4, 9]).flatmap(lambda q: st.tuples(polys(q), polys(q))))
def test_ring_properties(pair):
    f, g = pair
    if not f.is_zero and not g.is_zero:
        assert (f * g).degree == f.degree + g.degree
    assert f * g == g * f
    assert (f + g) - g == f
    if not g.is_zero:
        s, r = divmod(f, g)
        assert s * g + r == f
        assert r.degree < g.degree
        d = gcd(f, g)
        assert d.is_monic
        assert (f % d).is_zero and (g % d).is_zero


# -- irreducibility ------------------------------------------------------------


@pytest.mark.parametrize("q,text,expected", [(2, "T^2+T+1", True), (2, "T^2+1", False), (3, "T^2+1", True)])
def test_is_irreducible_examples(q, text, expected):
    assert is_irreducible(P(q, text)) is expected


@pytest.mark.parametrize("text", ["2*T+1", "1"])
def test_is_irreducible_contract(text):
    with pytest.raises(ContractViolation):
        is_irreducible(P(3, text))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_is_irreducible_matches_trial_division(q):
    for d in range(1, 5):
        for f in monic_polys(gf(q), d):
            assert is_irreducible(f) == _naive_irreducible(f), str(f)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_powmod_matches_naive(q):
    F = gf(q)
    for d in range(1, 4):
        for m in monic_polys(F, d):
            for n in (0, 1, 2, q, q**2, q**3 - 1):
                assert powmod(Poly.x(F), n, m) == _naive_pow(Poly.x(F), n, m)


def test_enumerate_f2():
    assert [str(f) for f in enumerate_monic_irreducibles(gf(2), 1)] == ["T", "T+1"]
    assert [str(f) for f in enumerate_monic_irreducibles(gf(2), 3)] == ["T^3+T+1", "T^3+T^2+1"]


def test_enumerate_f3_quadratics():
    out = enumerate_monic_irreducibles(gf(3), 2)
    assert len(out) == 3
    assert len(set(out)) == 3
    assert out == sorted(out)


def test_enumerate_budget():
    with pytest.raises(BudgetExceeded, match="max_candidates"):
        enumerate_monic_irreducibles(gf(16), 5, Budget(max_candidates=1000))
    with pytest.raises(BudgetExceeded, match="max_degree"):
        enumerate_monic_irreducibles(gf(2), 13)


def test_budget_env(monkeypatch):
    monkeypatch.setenv("DSHEAF_BUDGET", "10")
    with pytest.raises(BudgetExceeded):
        enumerate_monic_irreducibles(gf(2), 4)
    monkeypatch.setenv("DSHEAF_BUDGET", "max_degree=3,max_candidates=100")
    with pytest.raises(BudgetExceeded):
        enumerate_monic_irreducibles(gf(2), 4)
    monkeypatch.setenv("DSHEAF_BUDGET", "nonsense=1")
    with pytest.raises(DomainError):
        enumerate_monic_irreducibles(gf(2), 1)
