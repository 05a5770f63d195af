import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from weilheights.errors import AllZero, ReduciblePolynomial, ZeroAtFinitePlace, ZeroIdeal, DomainError
from weilheights.nfcore import (IdealZ, absolute_value, content_ideal_norm, dedekind_zeta, eisenstein,
                                factor_rational_prime, field_from_minpoly, gaussian, moebius_ideal,
                                nonzero_valuation_places, rationals, residue_at_one)

FIELDS = [rationals(), gaussian(), eisenstein()]


def trace_form_det(minpoly):
    """Discriminant of the power basis from the roots (independent of the constructor)."""
    roots = mpmath.polyroots(list(reversed(minpoly)))
    d = len(roots)
    V = mpmath.matrix([[r ** k for r in roots] for k in range(d)])
    return int(mpmath.nint(mpmath.re(mpmath.det(V) ** 2)))


@pytest.mark.parametrize("F, disc, w, sig", [(FIELDS[0], 1, 2, (1, 0)), (FIELDS[1], -4, 4, (0, 1)),
                                             (FIELDS[2], -3, 6, (0, 1))])
def test_builtin_fields(F, disc, w, sig):
    assert F.discriminant == disc
    assert F.roots_of_unity == w and F.class_number == 1
    assert F.signature == sig
    assert F.r1 + 2 * F.r2 == F.degree
    if F.degree > 1:
        assert trace_form_det(F.minpoly) == disc
    assert len(F.units()) == w


def test_field_from_minpoly_and_errors():
    K = field_from_minpoly([1, 0, 1])
    assert K.discriminant == -4
    with pytest.raises(ReduciblePolynomial):
        field_from_minpoly([-1, 0, 1])
    with pytest.raises(ReduciblePolynomial):
        field_from_minpoly([1, 2])  # not monic


def elements(F, bound=6):
    return st.lists(st.integers(-bound, bound), min_size=F.degree, max_size=F.degree).map(F)


@pytest.mark.parametrize("F", FIELDS[1:])
def test_mult_table_matches_polynomial_product(F):
    rng = random.Random(1)
    for _ in range(50):
        a = F([rng.randint(-9, 9) for _ in range(2)])
        b = F([rng.randint(-9, 9) for _ in range(2)])
        # (a0 + a1 t)(b0 + b1 t) reduced by t^2 = -c1 t - c0
        c0, c1 = F.minpoly[0], F.minpoly[1]
        a0, a1 = a.coords
        b0, b1 = b.coords
        expect = (a0 * b0 - c0 * a1 * b1, a0 * b1 + a1 * b0 - c1 * a1 * b1)
        assert (a * b).coords == expect


@given(st.data())
def test_field_axioms(data):
    F = data.draw(st.sampled_from(FIELDS))
    a, b, c = (data.draw(elements(F)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if not a.is_zero():
        assert a * a.inverse() == F.one


@given(st.data())
def test_norm_trace_vs_embeddings(data):
    F = data.draw(st.sampled_from(FIELDS[1:]))
    a = data.draw(elements(F))
    z = a.embed(0)
    assert abs(float(a.norm()) - float(abs(z) ** 2)) < 1e-9
    assert abs(float(a.trace()) - 2 * float(mpmath.re(z))) < 1e-9


def test_absolute_values_examples():
    Q, G = FIELDS[0], FIELDS[1]
    two = Q(2)
    assert absolute_value(two, Q.archimedean_places()[0]) == 2
    assert absolute_value(two, factor_rational_prime(2, Q)[0]) == Fraction(1, 2)
    assert absolute_value(two, factor_rational_prime(7, Q)[0]) == 1
    x = 1 + G.gen
    assert absolute_value(x, G.archimedean_places()[0]) == 2
    assert absolute_value(x, factor_rational_prime(2, G)[0]) == Fraction(1, 2)
    for v in G.archimedean_places() + factor_rational_prime(5, G):
        assert absolute_value(G.one, v) == 1
    with pytest.raises(ZeroAtFinitePlace):
        absolute_value(G.zero, factor_rational_prime(2, G)[0])


@pytest.mark.parametrize("p, F, shape", [(5, 1, [(1, 1), (1, 1)]), (3, 1, [(1, 2)]), (2, 1, [(2, 1)]),
                                         (3, 2, [(2, 1)]), (7, 2, [(1, 1), (1, 1)]), (5, 2, [(1, 2)])])
def test_factor_rational_prime(p, F, shape):
    K = FIELDS[F]
    places = factor_rational_prime(p, K)
    assert sorted((v.e, v.f) for v in places) == shape
    assert sum(v.e * v.f for v in places) == K.degree
    prod = IdealZ.unit(K)
    for v in places:
        for _ in range(v.e):
            prod = prod * v.ideal
    assert prod == IdealZ.from_generators(K, [K(p)])


def test_content_ideal_norm_examples():
    Q, G = FIELDS[0], FIELDS[1]
    assert content_ideal_norm([Q(2), Q(3)]) == 1
    assert content_ideal_norm([Q(2), Q(4)]) == 2
    assert content_ideal_norm([1 + G.gen, G(2)]) == 2
    with pytest.raises(AllZero):
        content_ideal_norm([G.zero, G.zero])


def test_moebius_examples():
    G = FIELDS[1]
    assert moebius_ideal(IdealZ.unit(G), G) == 1
    x = 1 + G.gen
    assert moebius_ideal(IdealZ.from_generators(G, [x * x]), G) == 0
    assert moebius_ideal(IdealZ.from_generators(G, [G(5)]), G) == 1
    assert moebius_ideal(IdealZ.from_generators(G, [G(3)]), G) == -1


def test_moebius_multiplicative_on_coprime_pairs():
    rng = random.Random(7)
    for F in FIELDS[1:]:
        done = 0
        while done < 50:
            a = F([rng.randint(-12, 12) for _ in range(2)])
            b = F([rng.randint(-12, 12) for _ in range(2)])
            if a.is_zero() or b.is_zero() or math.gcd(int(a.norm()), int(b.norm())) != 1:
                continue
            Ia, Ib = IdealZ.from_generators(F, [a]), IdealZ.from_generators(F, [b])
            assert moebius_ideal(Ia * Ib, F) == moebius_ideal(Ia, F) * moebius_ideal(Ib, F)
            assert (Ia * Ib).norm() == Ia.norm() * Ib.norm()
            done += 1
    with pytest.raises(ZeroIdeal):
        moebius_ideal(IdealZ.from_generators(FIELDS[1], [FIELDS[1].zero]), FIELDS[1])


def test_dedekind_zeta():
    val, err = dedekind_zeta(FIELDS[0], 2, prime_cutoff=10 ** 5)
    partial = sum(1 / k ** 2 for k in range(1, 200001))
    assert abs(val - math.pi ** 2 / 6) <= err
    assert abs(partial - math.pi ** 2 / 6) < 1e-5
    assert abs(residue_at_one(FIELDS[1]) - math.pi / 4) < 1e-12
    assert abs(residue_at_one(FIELDS[2]) - 2 * math.pi / (6 * math.sqrt(3))) < 1e-12
    for F in FIELDS:
        for s in (1.1, 2, 3.5):
            assert dedekind_zeta(F, s, prime_cutoff=1000)[0] >= 1
    with pytest.raises(DomainError):
        dedekind_zeta(FIELDS[1], 1)


@pytest.mark.parametrize("F", FIELDS)
def test_product_formula(F):
    rng = random.Random(3)
    for _ in range(200):
        x = F([rng.randint(-30, 30) for _ in range(F.degree)])
        if x.is_zero():
            continue
        tot = sum(mpmath.log(absolute_value(x, v)) for v in F.archimedean_places())
        tot += sum(math.log(absolute_value(x, v)) for v in nonzero_valuation_places(x))
        assert abs(tot) < 1e-9
