import math
from fractions import Fraction

import numpy as np
import pytest
from sympy import primerange

import oracles
from weilheights.errors import NonConvergent, NonStabilized
from weilheights.heights import ArchNorm
from weilheights.nfcore import eisenstein, factor_rational_prime, gaussian, rationals, splitting_type
from weilheights.piclattice import GaloisLattice, PicardLattice, preset, swap_action, trivial_action
from weilheights.polys import Polynomial
from weilheights.tamagawa import (ProjectiveVariety, TamagawaConfig, TamagawaInput, archimedean_density,
                                  archimedean_density_pn, ci_eligibility, circle_parametrization_density,
                                  count_points_prime, count_points_residue, frobenius_data, l_factor,
                                  l_factor_induction_check, leray_integral, local_density, peyre_constant,
                                  projective_region_volume, quadric_bad_primes, restricted_quadric_metric,
                                  tamagawa_number, tamagawa_restriction_check)
from weilheights.weilres import ExtensionData, res_p1_quadric

Q, G, E3 = rationals(), gaussian(), eisenstein()
X = [Polynomial.variable(Q, 3, j) for j in range(3)]
CIRCLE = X[0] * X[0] + X[1] * X[1] - X[2] * X[2]


def circle():
    return ProjectiveVariety(Q, 2, [CIRCLE], "circle", quadric_bad_primes(CIRCLE))


def p_n(F, n):
    return ProjectiveVariety(F, n, [], f"P{n}")


def quadric_variety(F):
    quad = res_p1_quadric(ExtensionData.over_Q(F))
    f = quad.equation
    return quad, ProjectiveVariety(Q, 3, [f], "Res P1", quadric_bad_primes(f), restricted_quadric_metric(quad))


# -- local densities --------------------------------------------------------------

@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 101])
def test_p1_density_closed_form(p):
    dens, _ = local_density(p_n(Q, 1), p=p)
    assert dens == Fraction(p + 1, p)
    assert count_points_prime(p_n(Q, 1), p) == p + 1
    assert count_points_prime(p_n(Q, 2), p) == p * p + p + 1


def test_circle_densities():
    assert local_density(circle(), p=5)[0] == Fraction(6, 5)
    assert count_points_prime(circle(), 5) == 6


def test_circle_density_at_two_by_brute_force():
    # primitive solutions of x^2 + y^2 = z^2 mod 2^k, divided by units and 2^k
    dens = []
    for k in (4, 5, 6):
        m = 2 ** k
        r = np.arange(m)
        Xg, Yg, Zg = np.meshgrid(r, r, r, indexing="ij")
        on = (Xg * Xg + Yg * Yg - Zg * Zg) % m == 0
        prim = (Xg % 2 == 1) | (Yg % 2 == 1) | (Zg % 2 == 1)
        count = int((on & prim).sum())
        dens.append(Fraction(count, (m - m // 2) * m))
    assert dens[0] == dens[1] == dens[2] == 2
    assert local_density(circle(), p=2)[0] == 2
    with pytest.raises(NonStabilized):
        local_density(circle(), p=2, lift_depth=1)


@pytest.mark.parametrize("p", [3, 7, 11])
def test_quadric_density_inert(p):
    # p = 3 mod 4 is inert in Q(i): the quadric has p^2 + 1 points over F_p
    _, var = quadric_variety(G)
    brute = oracles.brute_quadric_points(lambda u: u[0] * u[3] - u[1] ** 2 - u[2] ** 2, p)
    assert brute == p * p + 1
    assert count_points_prime(var, p) == brute
    assert local_density(var, p=p)[0] == Fraction(p * p + 1, p * p)


def test_quadric_density_bad_prime():
    _, var = quadric_variety(G)
    assert 2 in var.bad_primes
    assert local_density(var, p=2)[0] == Fraction(3, 2)


@pytest.mark.parametrize("F, form", [(G, (1, 0, 1)), (E3, (1, -1, 1))])
def test_density_factorisation_good_primes(F, form):
    _, var = quadric_variety(F)
    for p in primerange(3, 60):
        if p in var.bad_primes:
            continue
        assert count_points_prime(var, p) == oracles.quadric_count_grid(form, p)
        rhs, counts = Fraction(1), 1
        for place in factor_rational_prime(p, F):
            d, _ = local_density(p_n(F, 1), place=place)
            rhs *= d
            counts *= count_points_residue(p_n(F, 1), place)
        assert local_density(var, p=p)[0] == rhs
        assert count_points_prime(var, p) == counts


# -- L-factors ------------------------------------------------------------------

def test_l_factor_examples():
    triv = trivial_action(preset("Pn", n=1))
    assert l_factor(triv, ((1,),), 7) == Fraction(7, 6)
    sw = GaloisLattice(PicardLattice(2, ((1, 0), (0, 1)), (-2, -2)), (swap_action(1),))
    assert l_factor(sw, ((1, 0), (0, 1)), 5) == Fraction(5, 4) ** 2
    assert l_factor(sw, sw.g, 3) == 1 / (1 - Fraction(1, 9))
    for p, expect in [(5, ((1, 0), (0, 1))), (3, sw.g)]:
        frob, inert = frobenius_data(sw, p, G)
        assert frob == expect and inert is None
    frob, inert = frobenius_data(sw, 2, G)
    assert inert == sw.g
    # ramified: only the invariant line survives
    assert l_factor(sw, frob, 2, inert) == Fraction(2, 1)


@pytest.mark.parametrize("F", [G, E3])
def test_l_factor_induction(F):
    triv = trivial_action(preset("Pn", n=1))
    for p in primerange(2, 200):
        rep = l_factor_induction_check(triv, F, p)
        assert rep["ok"], rep
        kinds = splitting_type(p, F)
        if kinds == [(1, 2)]:
            assert rep["rows"][0]["E"] == 1 / (1 - Fraction(1, p * p))
    assert l_factor_induction_check(triv, Q, 5)["ok"]


# -- archimedean ---------------------------------------------------------------------

def test_projective_space_archimedean():
    assert projective_region_volume(1) == 2
    assert archimedean_density_pn(1) == 4
    assert abs(archimedean_density_pn(1, "complex") - 4 * math.pi) < 1e-12
    # (n + 1) vol{max |x_i| <= 1} / 2: 3 * 8 / 2
    assert abs(archimedean_density_pn(2) - 12) < 1e-12


def test_circle_leray_vs_parametrisation():
    val, se = archimedean_density(circle(), mc_samples=200_000, seed=3)
    exact = circle_parametrization_density()
    assert abs(exact - math.pi) < 1e-12
    assert abs(val - exact) <= 3 * se


def test_leray_symmetry_invariance():
    f1 = X[0] * X[0] + 2 * X[1] * X[1] - X[2] * X[2]
    f2 = 2 * X[0] * X[0] + X[1] * X[1] - X[2] * X[2]                 # x0 <-> x1
    g1 = X[0] * X[0] + X[0] * X[1] + 2 * X[1] * X[1] - X[2] * X[2]
    g2 = X[0] * X[0] - X[0] * X[1] + 2 * X[1] * X[1] - X[2] * X[2]   # x0 -> -x0
    for u, v in ((f1, f2), (g1, g2)):
        a, sa = leray_integral(u, samples=200_000, seed=1)
        b, sb = leray_integral(v, samples=200_000, seed=2)
        assert abs(a - b) <= 3 * math.hypot(sa, sb)


def test_euclidean_norm_changes_density():
    d_max = archimedean_density_pn(1)
    d_euc = archimedean_density_pn(1, "real", ArchNorm("euclidean"))
    assert d_euc != d_max and d_euc > 0


# -- assembly ------------------------------------------------------------------------

def test_peyre_p1_over_q():
    pc = peyre_constant(TamagawaInput(p_n(Q, 1), trivial_action(preset("Pn", n=1))),
                        TamagawaConfig(prime_cutoff=2000))
    assert pc.alpha == Fraction(1, 2) and pc.beta == 1
    assert abs(pc.c - 12 / math.pi ** 2) <= pc.tau_error + 1e-9


def test_peyre_p2_over_q():
    pc = peyre_constant(TamagawaInput(p_n(Q, 2), trivial_action(preset("Pn", n=2))),
                        TamagawaConfig(prime_cutoff=500))
    zeta3 = sum(1 / k ** 3 for k in range(1, 200000))
    assert abs(pc.c - 4 / zeta3) < 1e-6


def test_truncation_monotone():
    inp = TamagawaInput(p_n(Q, 1), trivial_action(preset("Pn", n=1)))
    taus = [tamagawa_number(inp, TamagawaConfig(prime_cutoff=P, tail_tolerance=1))[0] for P in (50, 100, 200, 400)]
    exact = 24 / math.pi ** 2
    diffs = [abs(t - exact) for t in taus]
    assert all(d2 < d1 for d1, d2 in zip(diffs, diffs[1:]))
    steps = [abs(b - a) for a, b in zip(taus, taus[1:])]
    assert steps[-1] < steps[0]


def test_tail_tolerance_enforced():
    inp = TamagawaInput(p_n(Q, 1), trivial_action(preset("Pn", n=1)))
    with pytest.raises(NonConvergent):
        tamagawa_number(inp, TamagawaConfig(prime_cutoff=100, tail_tolerance=1e-9))


def test_restriction_check_trivial_extension():
    inp = TamagawaInput(p_n(Q, 1), trivial_action(preset("Pn", n=1)))
    rep = tamagawa_restriction_check(inp, inp, TamagawaConfig(prime_cutoff=200))
    assert rep["relative_difference"] == 0 and rep["ok"]
    assert rep["ledger_F"] == rep["ledger_E"]


def test_restriction_check_gaussian_small():
    quad, var = quadric_variety(G)
    inpF = TamagawaInput(p_n(G, 1), trivial_action(preset("Pn", n=1)))
    lat = PicardLattice(2, ((1, 0), (0, 1)), (-2, -2))
    inpE = TamagawaInput(var, GaloisLattice(lat, (swap_action(1),)), G)
    rep = tamagawa_restriction_check(inpF, inpE, TamagawaConfig(prime_cutoff=200, mc_samples=400_000))
    assert not rep["euler_factor_mismatches"]
    assert rep["relative_difference"] < 0.03


def test_ci_eligibility():
    r = ci_eligibility(1, 2, 5, 1)
    assert r["birch"] and r["birch_slack"] == 1
    assert not ci_eligibility(1, 2, 3)["birch"]
    assert not ci_eligibility(1, 3, 9)["birch"]
    assert ci_eligibility(1, 3, 9)["birch_slack"] == 9 + 1 - 1 - 16
