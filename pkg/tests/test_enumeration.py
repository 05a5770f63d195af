import math
from fractions import Fraction
from itertools import combinations, product

import pytest

import oracles
from weilheights.enumeration import (CountSeries, EnumerationTask, count_series, enum_projective, enum_subvariety,
                                     geometric_ladder, moebius_count_series, moebius_counts_all,
                                     moebius_inverted_count, restriction_count_check, structured_counts)
from weilheights.errors import UnsupportedField
from weilheights.nfcore import eisenstein, field_from_minpoly, gaussian, rationals
from weilheights.polys import Polynomial

Q, G, E3 = rationals(), gaussian(), eisenstein()
ORACLE_FIELD = {id(Q): None, id(G): oracles.GAUSS, id(E3): oracles.EISEN}


def canon(p):
    return tuple(tuple(c.coords) for c in p.canonical().coords)


def test_p1_small_examples():
    pts = enum_projective(EnumerationTask(Q, (1,), bound=1))
    assert sorted(tuple(int(c.coords[0]) for c in p.coords) for p in pts) == [(0, 1), (1, -1), (1, 0), (1, 1)]
    assert len(enum_projective(EnumerationTask(Q, (1,), bound=2))) == 8
    gpts = enum_projective(EnumerationTask(G, (1,), bound=1))
    assert len(gpts) == 6


@pytest.mark.parametrize("F", [Q, G, E3])
@pytest.mark.parametrize("n, bmax", [(1, 6), (2, 3)])
def test_enum_matches_brute_force(F, n, bmax):
    f = ORACLE_FIELD[id(F)]
    for B in range(1, bmax + 1):
        assert len(enum_projective(EnumerationTask(F, (n,), bound=B))) == oracles.brute_projective_count(n, B, f)


@pytest.mark.parametrize("F", [Q, G, E3])
def test_no_two_points_proportional(F):
    pts = enum_projective(EnumerationTask(F, (2,), bound=4))
    keys = [canon(p) for p in pts]
    assert len(set(keys)) == len(keys)
    # stronger: pairwise 2x2 minors do not all vanish
    for p, q in combinations(pts[:60], 2):
        minors = [p.coords[i] * q.coords[j] - p.coords[j] * q.coords[i] for i in range(3) for j in range(i + 1, 3)]
        assert not all(m.is_zero() for m in minors)


def test_subvariety_quadric_vs_brute_force():
    u = [Polynomial.variable(Q, 4, j) for j in range(4)]
    quad = u[0] * u[3] - u[1] * u[1] - u[2] * u[2]
    pts = enum_subvariety(EnumerationTask(Q, (3,), equations=[quad], bound=1))
    brute = set()
    for t in product((-1, 0, 1), repeat=4):
        if any(t) and t[0] * t[3] == t[1] ** 2 + t[2] ** 2:
            lead = next(x for x in t if x)
            brute.add(tuple(x * lead for x in t))
    got = {tuple(int(c.coords[0]) for c in p.canonical().coords) for p in pts}
    assert {(1, 0, 0, 0), (0, 0, 0, 1), (1, 1, 0, 1), (1, 0, 1, 1)} <= got
    assert len(pts) == len(brute)


def test_subvariety_trivial_predicates():
    amb = len(enum_projective(EnumerationTask(Q, (2,), bound=5)))
    assert len(enum_subvariety(EnumerationTask(Q, (2,), bound=5))) == amb
    one = Polynomial.constant(Q, 3, 1)
    assert len(enum_subvariety(EnumerationTask(Q, (2,), equations=[one], bound=5))) == 0
    x0 = Polynomial.variable(Q, 3, 0)
    open_pts = enum_subvariety(EnumerationTask(Q, (2,), nonvanishing=[x0], bound=5))
    assert all(not p.coords[0].is_zero() for p in open_pts)
    assert len(open_pts) == amb - len(enum_projective(EnumerationTask(Q, (1,), bound=5)))


def test_count_series_examples():
    s = count_series(EnumerationTask(Q, (1,)), [1, 2])
    assert s.counts == [4, 8]
    assert count_series(EnumerationTask(Q, (1,)), [7]).counts == [len(enum_projective(EnumerationTask(Q, (1,), bound=7)))]
    per_rung = [len(enum_projective(EnumerationTask(Q, (2,), bound=B))) for B in range(1, 7)]
    assert count_series(EnumerationTask(Q, (2,)), list(range(1, 7))).counts == per_rung
    for method in ("enumerate", "structured", "moebius"):
        assert count_series(EnumerationTask(G, (1,)), [1, 3, 9, 16], method=method).counts == \
            count_series(EnumerationTask(G, (1,)), [1, 3, 9, 16], method="enumerate").counts


def test_count_series_monotone_and_timing():
    s = count_series(EnumerationTask(E3, (1,)), geometric_ladder(1, 2, 8), timing=True)
    assert all(a <= b for a, b in zip(s.counts, s.counts[1:]))
    assert len(s.elapsed_ms) == len(s.ladder)


def test_partitioned_runs_agree():
    for F in (Q, G):
        single = structured_counts(F, 1, 300, chunks=1)
        assert list(structured_counts(F, 1, 300, chunks=4)) == list(single)
        t1 = EnumerationTask(F, (2,), bound=4, chunks=1)
        t3 = EnumerationTask(F, (2,), bound=4, chunks=3)
        assert [canon(p) for p in enum_projective(t1)] == [canon(p) for p in enum_projective(t3)]


def test_moebius_examples():
    assert moebius_inverted_count(Q, 1, 10) == len(enum_projective(EnumerationTask(Q, (1,), bound=10)))
    assert moebius_inverted_count(G, 1, 20) == len(enum_projective(EnumerationTask(G, (1,), bound=20)))
    assert moebius_inverted_count(Q, 2, 0) == 0
    assert moebius_inverted_count(G, 1, Fraction(1, 2)) == 0


@pytest.mark.parametrize("F", [Q, G, E3])
@pytest.mark.parametrize("n", [1, 2])
def test_moebius_vs_enumeration_small(F, n):
    B = 12 if n == 1 else 5
    direct = [len(enum_projective(EnumerationTask(F, (n,), bound=b))) for b in range(1, B + 1)]
    allc = moebius_counts_all(F, n, B)
    assert [int(allc[b]) for b in range(1, B + 1)] == direct
    assert [moebius_inverted_count(F, n, b) for b in range(1, B + 1)] == direct
    assert list(moebius_count_series(F, n, list(range(1, B + 1)))) == direct


def test_schanuel_growth():
    # N(P^1(Q), B) / B^2 -> 12 / pi^2
    B = 4000
    N = int(moebius_counts_all(Q, 1, B)[B])
    assert abs(N / B ** 2 - 12 / math.pi ** 2) < 1e-3


def test_unsupported_fields():
    real = field_from_minpoly([-2, 0, 1])
    with pytest.raises(UnsupportedField):
        enum_projective(EnumerationTask(real, (1,), bound=2))
    fake_h2 = field_from_minpoly([5, 0, 1], class_number=2, roots_of_unity=2)
    with pytest.raises(UnsupportedField):
        enum_projective(EnumerationTask(fake_h2, (1,), bound=2))


def test_restriction_count_check_small():
    rep = restriction_count_check(G, [1, 2, 5, 10], verify_bound=6)
    assert rep["ok"]
    assert rep["F_counts"][0] == rep["E_counts"][0] == 6
    assert rep["F_counts"] == rep["E_counts"]
    rep3 = restriction_count_check(E3, [1, 3, 9], verify_bound=4)
    assert rep3["ok"] and rep3["F_counts"] == rep3["E_counts"]


def test_restriction_trivial_extension():
    rep = restriction_count_check(Q, [1, 2, 4, 8], verify_bound=4)
    assert rep["ok"] and rep["F_counts"] == rep["E_counts"] == [oracles.brute_projective_count(1, B) for B in (1, 2, 4, 8)]
    assert isinstance(count_series(EnumerationTask(Q, (1,)), [1]), CountSeries)
