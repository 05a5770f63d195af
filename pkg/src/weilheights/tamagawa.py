"""Tamagawa numbers and the Peyre constant.

Conventions: Lebesgue measure at real places, twice Lebesgue at complex
places, ``vol(O_v) = 1`` at finite places, so ``mu_F = sqrt|disc F|``.

    tau = mu_F^{-dim} * lim (s-1)^rho L(s, Pic) * prod_v lambda_v^{-1} tau_v

with ``lambda_v = L_v(1, Pic)`` at finite places.  For a smooth model at v
``tau_v = #X(k_v) / q_v^dim``; at bad places the count is done modulo
``p^k`` until two depths agree.  Archimedean factors are closed forms for
P^n and Leray-form Monte Carlo for hypersurfaces.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import factorial, gamma, log, log1p, pi, sqrt

import numpy as np
from sympy import factorint, primerange

from .errors import (
    GradientVanishes,
    NonConvergent,
    NonStabilized,
    SingularFactor,
    UnsupportedField,
)
from .heights import ArchNorm, MetrizedBundle
from .intlinalg import det, identity, integer_kernel, matmul, solve_in_span
from .nfcore import NumberField, factor_rational_prime, rationals, residue_at_one, splitting_type
from .piclattice import GaloisLattice, alpha_invariant, fixed_sublattice, h1_cyclic, invariant_lattice
from .polys import Polynomial

BRUTE_LIMIT = 4_000_000


# ---------------------------------------------------------------------------
# varieties

@dataclass(frozen=True)
class ConeMetric:
    """An archimedean norm on the affine cone given as a vectorised function.

    ``box`` holds coordinate half-widths containing ``{||y|| <= 1}`` on the
    cone; the Monte Carlo samples inside it.
    """

    name: str
    fn: object
    box: tuple


def restricted_quadric_metric(quad):
    """Metric on ``u0 u3 = q(u1, u2)`` induced by the max norm on ``Res P^1``.

    ``u0 = |x0|^2`` and ``u3 = |x1|^2`` so the norm is ``max(|u0|, |u3|)``;
    on the cone ``|u_j| <= kappa`` for j = 1, 2.
    """
    kappa = sqrt(float(quad.ratio_bound_sq()))
    return ConeMetric("restricted", lambda Y: np.maximum(np.abs(Y[:, 0]), np.abs(Y[:, 3])),
                      (1.0, kappa, kappa, 1.0))

@dataclass
class ProjectiveVariety:
    """Complete intersection ``{f_1 = .. = f_m = 0}`` in ``P^n`` over ``field``."""

    field: NumberField
    n: int
    equations: list = dc_field(default_factory=list)
    name: str = ""
    bad_primes: tuple = ()
    metric: ConeMetric | None = None

    def __post_init__(self):
        for f in self.equations:
            if f.nvars != self.n + 1 or not f.is_homogeneous():
                raise ValueError("equations must be homogeneous in n+1 variables")

    @property
    def dim(self):
        return self.n - len(self.equations)

    @property
    def degrees(self):
        return [f.total_degree() for f in self.equations]

    @property
    def anticanonical_degree(self):
        return self.n + 1 - sum(self.degrees)


def quadric_bad_primes(f: Polynomial):
    """2 and the primes dividing the Hessian determinant of an integral quadric."""
    n = f.nvars
    H = [[f.derivative(i).derivative(j) for j in range(n)] for i in range(n)]
    M = [[h.rational_terms().get((0,) * n, Fraction(0)) for h in row] for row in H]
    D = det(M)
    if D == 0:
        raise GradientVanishes("singular quadric")
    primes = {2}
    num = abs(D.numerator) * D.denominator
    primes.update(factorint(int(num)).keys())
    return tuple(sorted(primes))


# ---------------------------------------------------------------------------
# residue fields

class ResidueField:
    """``O_F / P`` as integer codes ``0..q-1`` with full tables (small q only)."""

    def __init__(self, F: NumberField, place):
        self.F = F
        self.p = place.p if place is not None else None
        self.place = place
        if F.degree == 1:
            raise ValueError("use the prime field path over Q")
        p, f = place.p, place.f
        self.f = f
        self.q = p ** f
        g = self._residue_poly(place)
        self.g = g  # monic of degree f over F_p (ascending)
        q = self.q
        if q > 2000:
            raise UnsupportedField("residue field too large for table arithmetic")
        digits = np.array([[(c // p ** k) % p for k in range(f)] for c in range(q)], dtype=np.int64)
        self.digits = digits
        self.add = np.zeros((q, q), dtype=np.int64)
        self.mul = np.zeros((q, q), dtype=np.int64)
        weights = np.array([p ** k for k in range(f)], dtype=np.int64)
        for a in range(q):
            s = (digits[a][None, :] + digits) % p
            self.add[a] = s @ weights
            prod = np.zeros((q, 2 * f - 1), dtype=np.int64)
            for i in range(f):
                prod[:, i:i + f] += digits[a][i] * digits
            prod %= p
            for k in range(2 * f - 2, f - 1, -1):
                c = prod[:, k].copy()
                for t in range(f):
                    prod[:, k - f + t] = (prod[:, k - f + t] - c * g[t]) % p
            self.mul[a] = (prod[:, :f] % p) @ weights
        self._theta = self._theta_code(place)

    def _residue_poly(self, place):
        from sympy import Poly, Symbol
        x = Symbol("x")
        F, p = self.F, place.p
        # generator of P / (p) as a polynomial in theta: find its irreducible factor mod p
        P = Poly(list(reversed(F.minpoly)), x, modulus=p)
        for fac, e in P.factor_list()[1]:
            coeffs = [int(c) % p for c in reversed(fac.all_coeffs())]
            gt = F.zero
            t = F.one
            for c in coeffs:
                gt = gt + c * t
                t = t * F.gen
            if place.ideal.contains(gt):
                lead = coeffs[-1]
                inv = pow(lead, -1, p)
                return [(c * inv) % p for c in coeffs]
        raise ValueError("no factor of the minimal polynomial vanishes at the place")

    def _theta_code(self, place):
        p, f = place.p, self.f
        if f == 1:
            return (-self.g[0]) % p
        return p  # the class of theta is the polynomial variable t = digit vector (0, 1, 0..)

    def reduce(self, x):
        """Image of a p-integral FieldElement."""
        pw = x.power_coords()
        acc = 0
        tpow = 1
        for c in pw:
            num = c.numerator % self.p
            den = c.denominator % self.p
            if den == 0:
                raise ValueError("element is not p-integral")
            cc = num * pow(den, -1, self.p) % self.p
            acc = self.add[acc, self.mul[cc, tpow]]
            tpow = self.mul[tpow, self._theta]
        return int(acc)

    def evaluate(self, poly: Polynomial, cols):
        acc = np.zeros(np.shape(cols[0]), dtype=np.int64)
        for e, c in poly.terms.items():
            term = np.full(np.shape(cols[0]), self.reduce(c), dtype=np.int64)
            for x, k in zip(cols, e):
                for _ in range(k):
                    term = self.mul[term, x]
            acc = self.add[acc, term]
        return acc


# ---------------------------------------------------------------------------
# point counts over residue fields and local densities

def _chart_assignments(q, m):
    """All ``q^m`` assignments of m variables in F_q (codes), as m columns."""
    if m == 0:
        return [np.zeros(1, dtype=np.int64)]
    grids = np.meshgrid(*[np.arange(q, dtype=np.int64)] * m, indexing="ij")
    return [g.ravel() for g in grids]


def _legendre_vec(a, p):
    r = np.ones_like(a)
    base = a % p
    e = (p - 1) // 2
    while e:
        if e & 1:
            r = r * base % p
        base = base * base % p
        e >>= 1
    return np.where(a % p == 0, 0, np.where(r == 1, 1, -1))


def _count_chart_prime(equations, n, k, p):
    """``#{x in F_p^{n+1} : x_j = 0 (j<k), x_k = 1, f(x) = 0}``."""
    free = n - k
    if not equations:
        return p ** free
    if free == 0:
        cols = [np.zeros(1, dtype=np.int64)] * k + [np.ones(1, dtype=np.int64)]
        return int(all(f.eval_mod(cols, p)[0] == 0 for f in equations))
    single = len(equations) == 1 and p > 2
    f = equations[0]
    if single:
        last = n
        degs = {e[last] for e in f.terms}
        if max(degs) <= 2:
            if p ** (free - 1) > BRUTE_LIMIT * 8:
                raise UnsupportedField(f"p = {p} too large for chart counting")
            rest = _chart_assignments(p, free - 1)
            size = rest[0].shape
            base = [np.zeros(size, dtype=np.int64)] * k + [np.ones(size, dtype=np.int64)] + rest
            coef = []
            for deg in range(3):
                part = Polynomial(f.field, f.nvars, {e: c for e, c in f.terms.items() if e[last] == deg})
                if part.is_zero():
                    coef.append(np.zeros(size, dtype=np.int64))
                    continue
                shaved = Polynomial(f.field, n, {e[:last]: c for e, c in part.terms.items()})
                coef.append(shaved.eval_mod(base, p))
            c0, c1, c2 = coef
            quad = c2 != 0
            disc = (c1 * c1 - 4 * c2 * c0) % p
            cnt_q = 1 + _legendre_vec(disc, p)
            lin = (~quad) & (c1 != 0)
            const = (~quad) & (c1 == 0) & (c0 == 0)
            return int(np.sum(np.where(quad, cnt_q, 0)) + np.sum(lin) + p * np.sum(const))
    if p ** free > BRUTE_LIMIT * 8:
        raise UnsupportedField(f"p = {p} too large for brute-force chart counting")
    cols = _chart_assignments(p, free)
    size = cols[0].shape
    full = [np.zeros(size, dtype=np.int64)] * k + [np.ones(size, dtype=np.int64)] + cols
    ok = np.ones(size, dtype=bool)
    for g in equations:
        ok &= g.eval_mod(full, p) == 0
    return int(np.count_nonzero(ok))


def count_points_prime(var: ProjectiveVariety, p: int):
    """``#X(F_p)`` for a variety over Q."""
    return sum(_count_chart_prime(var.equations, var.n, k, p) for k in range(var.n + 1))


def count_points_residue(var: ProjectiveVariety, place):
    """``#X(O_F / P)`` for a variety over a number field (table arithmetic)."""
    F = var.field
    if F.degree == 1:
        return count_points_prime(var, place.p if place is not None else None)
    q = place.p ** place.f
    if not var.equations:
        return sum(q ** (var.n - k) for k in range(var.n + 1))
    R = ResidueField(F, place)
    total = 0
    for k in range(var.n + 1):
        free = var.n - k
        if q ** free > BRUTE_LIMIT:
            raise UnsupportedField("residue field chart too large to enumerate")
        cols = _chart_assignments(q, free)
        size = cols[0].shape
        full = [np.zeros(size, dtype=np.int64)] * k + [np.ones(size, dtype=np.int64)] + cols
        ok = np.ones(size, dtype=bool)
        for g in var.equations:
            ok &= R.evaluate(g, full) == 0
        total += int(np.count_nonzero(ok))
    return total


def _smooth_mod_p(var: ProjectiveVariety, p):
    """Are all F_p-points of the reduction smooth (Jacobian of full rank on the cone)?"""
    eqs = var.equations
    if not eqs:
        return True
    if var.bad_primes and p not in var.bad_primes:
        return True
    if var.bad_primes and p in var.bad_primes:
        return False
    m = len(eqs)
    grads = [[f.derivative(j) for j in range(var.n + 1)] for f in eqs]
    for k in range(var.n + 1):
        free = var.n - k
        if p ** free > BRUTE_LIMIT:
            raise UnsupportedField("cannot certify smoothness at this prime; supply bad_primes")
        cols = _chart_assignments(p, free)
        size = cols[0].shape
        full = [np.zeros(size, dtype=np.int64)] * k + [np.ones(size, dtype=np.int64)] + cols
        ok = np.ones(size, dtype=bool)
        for f in eqs:
            ok &= f.eval_mod(full, p) == 0
        if not np.any(ok):
            continue
        pts = [c[ok] for c in full]
        J = np.stack([np.stack([g.eval_mod(pts, p) for g in row], axis=-1) for row in grads], axis=1)
        if m == 1:
            if np.any(np.all(J[:, 0, :] % p == 0, axis=1)):
                return False
        else:
            for row in J:
                if _rank_mod_p(row, p) < m:
                    return False
    return True


def _rank_mod_p(M, p):
    M = [list(map(int, r)) for r in M]
    rk, rows, cols = 0, len(M), len(M[0])
    for c in range(cols):
        piv = next((i for i in range(rk, rows) if M[i][c] % p), None)
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        inv = pow(M[rk][c], -1, p)
        for i in range(rows):
            if i != rk and M[i][c] % p:
                f = M[i][c] * inv % p
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[rk])]
        rk += 1
    return rk


def _cone_solutions_lifted(var, p, k_max):
    """Densities from primitive cone solutions modulo ``p^k`` for k = 1..k_max (Hensel lifting)."""
    n1 = var.n + 1
    cols = _chart_assignments(p, n1)
    pts = np.stack(cols, axis=1)
    pts = pts[np.any(pts % p != 0, axis=1)]
    mod = p

    def vanish(points, modulus):
        ok = np.ones(len(points), dtype=bool)
        for f in var.equations:
            ok &= f.eval_mod([points[:, j] for j in range(n1)], modulus) == 0
        return points[ok]

    sols = vanish(pts, mod)
    out = []
    lifts = np.stack(_chart_assignments(p, n1), axis=1)
    for k in range(1, k_max + 1):
        proj = Fraction(len(sols), p ** (k - 1) * (p - 1))
        out.append(proj / Fraction(p) ** (k * var.dim))
        if k == k_max:
            break
        if len(sols) * len(lifts) > 4 * BRUTE_LIMIT:
            break
        cand = (sols[:, None, :] + mod * lifts[None, :, :]).reshape(-1, n1)
        mod *= p
        sols = vanish(cand, mod)
    return out


@dataclass
class LocalDensityReport:
    p: int
    q: int
    count: int | None
    density: Fraction
    depth: int
    lam: Fraction
    factor: Fraction
    smooth: bool


def local_density(var: ProjectiveVariety, place=None, p=None, lift_depth=8):
    """Volume of ``X(O_v)``: ``#X(k_v)/q^dim`` at smooth places, else stabilised count mod ``p^k``."""
    F = var.field
    if F.degree == 1:
        p = p if p is not None else place.p
        if _smooth_mod_p(var, p):
            return Fraction(count_points_prime(var, p), p ** var.dim), 1
        dens = _cone_solutions_lifted(var, p, lift_depth)
        for k in range(1, len(dens)):
            if dens[k] == dens[k - 1]:
                return dens[k], k + 1
        raise NonStabilized(f"density at p = {p} not stable", depths=list(range(1, len(dens) + 1)))
    q = place.p ** place.f
    if var.equations and place.e > 1:
        raise UnsupportedField("equations at ramified places of non-rational fields")
    return Fraction(count_points_residue(var, place), q ** var.dim), 1


# ---------------------------------------------------------------------------
# L-factors

def l_factor(gal: GaloisLattice | None, frob, q, inertia=None, s=1):
    """``1 / det(1 - q^{-s} Frob | V^I)`` as an exact rational."""
    V = [list(r) for r in frob]
    if gal is not None and len(V) != gal.rank:
        raise ValueError("Frobenius matrix does not match the lattice rank")
    rho = len(V)
    if inertia is not None:
        I = [list(r) for r in inertia]
        basis = integer_kernel([[I[i][j] - int(i == j) for j in range(rho)] for i in range(rho)]) \
            if any(I[i][j] != int(i == j) for i in range(rho) for j in range(rho)) else identity(rho)
        cols = []
        for b in basis:
            img = [sum(V[i][j] * b[j] for j in range(rho)) for i in range(rho)]
            c = solve_in_span(basis, img)
            if c is None:
                raise SingularFactor("Frobenius does not preserve the inertia invariants")
            cols.append(c)
        k = len(basis)
        V = [[cols[j][i] for j in range(k)] for i in range(k)]
        rho = k
    if rho == 0:
        return Fraction(1)
    t = Fraction(1, q ** s)
    M = [[int(i == j) - t * V[i][j] for j in range(rho)] for i in range(rho)]
    D = det(M)
    if D == 0:
        raise SingularFactor("det(1 - q^{-s} Frob) vanishes")
    return 1 / D


def frobenius_data(gal: GaloisLattice, p, K: NumberField | None):
    """``(Frob, inertia)`` at p for an action of order <= 2 cut out by the quadratic field K."""
    I = tuple(map(tuple, identity(gal.rank)))
    if K is None or gal.order == 1:
        return I, None
    if gal.order != 2:
        raise UnsupportedField("Frobenius data implemented for actions of order at most 2")
    st = splitting_type(p, K)
    if st == [(1, 1), (1, 1)]:
        return I, None
    if st == [(1, 2)]:
        return gal.g, None
    return I, gal.g


def l_factor_induction_check(gal: GaloisLattice, F: NumberField, p, s_values=(1, 2)):
    """``L_p(s, Ind Pic) = prod_{w | p} L_w(s, Pic)`` for an F-side lattice with trivial action."""
    from .piclattice import induce
    if gal.order != 1:
        raise UnsupportedField("induction check implemented for trivial F-side actions")
    rank = gal.rank
    ind = induce(gal, F.degree)
    rows = []
    ok = True
    for s in s_values:
        frob, inert = frobenius_data(ind, p, F)
        lhs = l_factor(ind, frob, p, inert, s)
        rhs = Fraction(1)
        for e, f in splitting_type(p, F):
            rhs *= l_factor(gal, identity(rank), p ** f, None, s)
        rows.append({"s": s, "E": lhs, "F": rhs, "equal": lhs == rhs})
        ok &= lhs == rhs
    return {"p": p, "rows": rows, "ok": ok}


# ---------------------------------------------------------------------------
# archimedean densities

def unit_ball_volume(n1, norm: ArchNorm, kind="real"):
    """Volume of ``{y in F_v^{n+1} : ||y||_v <= 1}`` (twice Lebesgue at complex places)."""
    if kind == "real":
        if norm.kind == "euclidean":
            v = pi ** (n1 / 2) / gamma(n1 / 2 + 1)
        else:
            v = 2.0 ** n1
        if norm.kind == "matrix":
            v /= abs(float(det(norm.matrix)))
        return v
    if norm.kind == "euclidean":
        v = (2 * pi) ** n1 / factorial(n1)
    else:
        v = (2 * pi) ** n1
    if norm.kind == "matrix":
        v /= abs(float(det(norm.matrix))) ** 2
    return v


def projective_region_volume(n, kind="real", norm: ArchNorm = ArchNorm("max")):
    """Volume of the height-<=1 cone divided by the roots of unity of F_v (2 real, 2 pi complex)."""
    v = unit_ball_volume(n + 1, norm, kind)
    return v / 2 if kind == "real" else v / (2 * pi)


def archimedean_density_pn(n, kind="real", norm: ArchNorm = ArchNorm("max")):
    """Closed form ``tau_v(P^n) = (n+1) * vol(ball) / 2`` (real) or ``/ 2 pi`` (complex)."""
    return (n + 1) * projective_region_volume(n, kind, norm)


def _real_roots_batch(coefs):
    """Real roots of a batch of polynomials (coefficients ascending, shape (N, deg+1))."""
    N, D = coefs.shape
    deg = D - 1
    roots = []
    lead = coefs[:, -1]
    if deg == 1:
        with np.errstate(divide="ignore", invalid="ignore"):
            r = -coefs[:, 0] / coefs[:, 1]
        return [np.where(lead != 0, r, np.nan)[:, None]][0]
    if deg == 2:
        a, b, c = coefs[:, 2], coefs[:, 1], coefs[:, 0]
        disc = b * b - 4 * a * c
        with np.errstate(divide="ignore", invalid="ignore"):
            sq = np.sqrt(np.where(disc >= 0, disc, np.nan))
            q = -0.5 * (b + np.copysign(sq, b))
            r1 = q / a
            r2 = c / q
            lin = -c / b
        r1 = np.where(a != 0, r1, lin)
        r2 = np.where(a != 0, r2, np.nan)
        return np.stack([r1, r2], axis=1)
    comp = np.zeros((N, deg, deg))
    with np.errstate(divide="ignore", invalid="ignore"):
        comp[:, 0, :] = -coefs[:, -2::-1] / lead[:, None]
    comp[:, np.arange(1, deg), np.arange(deg - 1)] = 1.0
    good = np.isfinite(comp).all(axis=(1, 2))
    out = np.full((N, deg), np.nan)
    ev = np.linalg.eigvals(comp[good])
    real = np.abs(ev.imag) < 1e-9 * (1 + np.abs(ev.real))
    out[good] = np.where(real, ev.real, np.nan)
    roots.append(out)
    return out


def leray_integral(f: Polynomial, norm: ArchNorm = ArchNorm("max"), samples=200_000, seed=0,
                   metric: ConeMetric | None = None):
    """Monte Carlo ``int_{f = 0, ||y|| <= 1} dy_{hat j} / |d_j f|`` over the real affine cone.

    Chart j solves for ``y_j`` and is used only where ``|d_j f|`` is the
    largest partial derivative, so the charts partition the cone.  Chart j
    draws from ``default_rng([seed, j])``.  Returns ``(value, standard error)``.
    """
    n1 = f.nvars
    terms = f.rational_terms()
    grads = [f.derivative(j).rational_terms() for j in range(n1)]

    def ev(tdict, Y):
        acc = np.zeros(len(Y))
        for e, c in tdict.items():
            t = np.full(len(Y), float(c))
            for j, k in enumerate(e):
                if k:
                    t = t * Y[:, j] ** k
            acc += t
        return acc

    total, var = 0.0, 0.0
    for j in range(n1):
        rng = np.random.default_rng([seed, j])
        box = np.array(metric.box if metric else [1.0] * n1)
        others = [i for i in range(n1) if i != j]
        Z = rng.uniform(-1.0, 1.0, size=(samples, n1 - 1)) * box[others]
        deg = max(e[j] for e in terms)
        coefs = np.zeros((samples, deg + 1))
        for e, c in terms.items():
            t = np.full(samples, float(c))
            idx = 0
            for i in range(n1):
                if i == j:
                    continue
                if e[i]:
                    t = t * Z[:, idx] ** e[i]
                idx += 1
            coefs[:, e[j]] += t
        roots = _real_roots_batch(coefs)
        contrib = np.zeros(samples)
        for r in roots.T:
            ok = np.isfinite(r)
            Y = np.zeros((samples, n1))
            Y[:, [i for i in range(n1) if i != j]] = Z
            Y[:, j] = np.where(ok, r, 0.0)
            if metric is not None:
                inside = ok & (metric.fn(Y) <= 1.0)
            elif norm.kind == "max":
                inside = ok & (np.abs(Y).max(axis=1) <= 1.0)
            elif norm.kind == "euclidean":
                inside = ok & (np.sqrt((Y * Y).sum(axis=1)) <= 1.0)
            else:
                M = np.array([[float(x) for x in row] for row in norm.matrix])
                inside = ok & (np.abs(Y @ M.T).max(axis=1) <= 1.0)
            G = np.stack([np.abs(ev(g, Y)) for g in grads], axis=1)
            chart_ok = inside & (np.argmax(G, axis=1) == j)
            gj = G[:, j]
            if np.any(chart_ok & (gj == 0)):
                raise GradientVanishes("gradient vanishes on a sampled point")
            contrib += np.where(chart_ok, 1.0 / np.where(gj == 0, 1.0, gj), 0.0)
        vol = float(np.prod(2.0 * box[others]))
        total += vol * contrib.mean()
        var += (vol * contrib.std(ddof=1)) ** 2 / samples
    return total, sqrt(var)


def archimedean_density(var: ProjectiveVariety, bundle: MetrizedBundle | None = None, place=None,
                        mc_samples=200_000, seed=0):
    """``(tau_v, standard error)`` at an archimedean place."""
    F = var.field
    place = place or F.archimedean_places()[0]
    bundle = bundle or MetrizedBundle((var.n,), (1,))
    norm = bundle.norm_at(F.archimedean_places().index(place))
    if not var.equations:
        return archimedean_density_pn(var.n, place.kind, norm), 0.0
    if place.kind != "real" or F.degree != 1:
        raise UnsupportedField("hypersurface densities implemented at the real place of Q")
    if len(var.equations) != 1:
        raise UnsupportedField("Leray densities implemented for hypersurfaces")
    val, se = leray_integral(var.equations[0], norm, mc_samples, seed, var.metric)
    k = var.anticanonical_degree / 2.0
    return k * val, k * se


def circle_parametrization_density():
    """``tau_inf`` of ``x^2 + y^2 = z^2`` with the max norm, integrated along the parametrisation.

    The cone is ``(r cos t, r sin t, +-r)``; the Leray form pulls back to
    ``dr dt`` and the max-norm condition is ``r <= 1``, so the integral is
    ``2 * int_0^{2 pi} int_0^1 dr dt / 2``; times ``(n+1-r)/2 = 1/2``.
    """
    import mpmath
    inner = mpmath.quad(lambda t: mpmath.quad(lambda r: 1, [0, 1]), [0, 2 * mpmath.pi])
    return float(inner) / 2


# ---------------------------------------------------------------------------
# residues and assembly

def residue_factor(gal: GaloisLattice, F: NumberField, K: NumberField | None):
    """``lim (s-1)^rho L(s, Pic)`` for actions of order <= 2 (split by K over F)."""
    rho = gal.rank
    resF = residue_at_one(F)
    if gal.order == 1 or K is None:
        return resF ** rho
    if gal.order != 2:
        raise UnsupportedField("residue factor implemented for actions of order at most 2")
    g = gal.g
    mplus = len(fixed_sublattice(gal))
    minus = [[g[i][j] + int(i == j) for j in range(rho)] for i in range(rho)]
    mminus = len(integer_kernel(minus)) if any(any(r) for r in minus) else rho
    if mplus + mminus != rho:
        raise UnsupportedField("action not diagonalisable over Q")
    return resF ** mplus * (residue_at_one(K) / resF) ** mminus


@dataclass
class TamagawaInput:
    variety: ProjectiveVariety
    lattice: GaloisLattice
    splitting_field: NumberField | None = None
    bundle: MetrizedBundle | None = None
    weak_approximation: bool = True
    label: str = ""


@dataclass
class TamagawaConfig:
    prime_cutoff: int = 1000
    density_cutoff: int | None = None
    mc_samples: int = 200_000
    seed: int = 0
    lift_depth: int = 8
    tail_tolerance: float = 0.05


@dataclass
class PeyreConstant:
    alpha: Fraction
    beta: int
    tau: float
    tau_error: float
    c: float
    ledger: list
    meta: dict


def euler_factor(inp: TamagawaInput, p, cfg: TamagawaConfig):
    """``prod_{w | p} lambda_w^{-1} tau_w`` (exact) with per-place reports."""
    var = inp.variety
    F = var.field
    reports = []
    total = Fraction(1)
    if F.degree == 1:
        frob, inert = frobenius_data(inp.lattice, p, inp.splitting_field)
        lam = l_factor(inp.lattice, frob, p, inert)
        dens, depth = local_density(var, p=p, lift_depth=cfg.lift_depth)
        reports.append(LocalDensityReport(p, p, None, dens, depth, lam, dens / lam, depth == 1))
        return dens / lam, reports
    if inp.lattice.order != 1:
        raise UnsupportedField("nontrivial actions over non-rational base fields")
    if var.equations:
        local = [(pl.p ** pl.f, pl) for pl in factor_rational_prime(p, F)]
    else:
        local = [(p ** f, None) for e, f in splitting_type(p, F)]
    for q, pl in local:
        lam = l_factor(inp.lattice, identity(inp.lattice.rank), q)
        if pl is not None:
            dens, depth = local_density(var, place=pl)
        else:
            dens, depth = Fraction(sum(q ** (var.n - k) for k in range(var.n + 1)), q ** var.dim), 1
        reports.append(LocalDensityReport(p, q, None, dens, depth, lam, dens / lam, True))
        total *= dens / lam
    return total, reports


def _tail_estimate(primes, logs, tol):
    """Fit ``|log factor_p| <= C p^{-kappa}`` on the top half; bound the tail after the cutoff."""
    P = primes[-1]
    half = len(primes) // 2
    xs = np.array(primes[half:], dtype=float)
    ys = np.abs(np.array(logs[half:], dtype=float))
    keep = ys > 0
    if keep.sum() < 3:
        return 0.0, float("inf")
    slope, _ = np.polyfit(np.log(xs[keep]), np.log(ys[keep]), 1)
    kappa = -slope
    if kappa <= 1.05:
        raise NonConvergent(f"Euler factors decay like p^-{kappa:.2f}; product not convergent enough")
    C = float(np.max(ys[keep] * xs[keep] ** kappa))
    tail = C * P ** (1 - kappa) / ((kappa - 1) * log(P))
    if tail > tol:
        raise NonConvergent(f"tail estimate {tail:.3g} exceeds tolerance {tol}")
    return tail, kappa


def tamagawa_number(inp: TamagawaInput, cfg: TamagawaConfig | None = None):
    """``tau(X)`` with a factor ledger and an error estimate (truncation + Monte Carlo)."""
    cfg = cfg or TamagawaConfig()
    var = inp.variety
    F = var.field
    mu = sqrt(abs(F.discriminant))
    ledger = []
    pref = mu ** (-var.dim)
    ledger.append(("mu_F^-dim", pref))
    res = residue_factor(inp.lattice, F, inp.splitting_field)
    ledger.append(("residue", res))
    cutoff = cfg.density_cutoff or cfg.prime_cutoff
    primes = list(primerange(2, cutoff + 1))
    logs = []
    prod = 0.0
    per_prime = []
    for p in primes:
        fac, reps = euler_factor(inp, p, cfg)
        lf = log1p(float(fac - 1))
        logs.append(lf)
        prod += lf
        per_prime.append((p, fac, reps))
    tail, kappa = _tail_estimate(primes, logs, cfg.tail_tolerance)
    euler = float(np.exp(prod))
    ledger.append((f"euler_product(p<={cutoff})", euler))
    arch_total, arch_rel = 1.0, 0.0
    for i, pl in enumerate(F.archimedean_places()):
        val, se = archimedean_density(var, inp.bundle, pl, cfg.mc_samples, cfg.seed + i)
        ledger.append((f"tau_{pl.kind}{pl.index}", val))
        arch_total *= val
        arch_rel += se / val if val else 0.0
    tau = pref * res * euler * arch_total
    err = abs(tau) * (tail + arch_rel)
    meta = {"prime_cutoff": cutoff, "tail": tail, "kappa": kappa, "mc_samples": cfg.mc_samples,
            "seed": cfg.seed, "weak_approximation": inp.weak_approximation, "per_prime": per_prime}
    return tau, err, ledger, meta


def peyre_constant(inp: TamagawaInput, cfg: TamagawaConfig | None = None):
    """``alpha * beta * tau`` with alpha, beta from the Galois-invariant Picard lattice."""
    lat, _ = invariant_lattice(inp.lattice)
    alpha = alpha_invariant(lat)
    beta = h1_cyclic(inp.lattice)
    tau, err, ledger, meta = tamagawa_number(inp, cfg)
    ledger = [("alpha", float(alpha)), ("beta", beta)] + ledger + [("tau", tau)]
    c = float(alpha) * beta * tau
    return PeyreConstant(alpha, beta, tau, err, c, ledger, meta)


def tamagawa_restriction_check(inp_F: TamagawaInput, inp_E: TamagawaInput, cfg: TamagawaConfig | None = None,
                               tolerance=0.03):
    """Compare ``tau(X)`` over F with ``tau(Res X)`` over E, factor by factor."""
    cfg = cfg or TamagawaConfig()
    tF, eF, lF, mF = tamagawa_number(inp_F, cfg)
    tE, eE, lE, mE = tamagawa_number(inp_E, cfg)
    rel = abs(tF - tE) / abs(tE)
    within = rel <= tolerance or abs(tF - tE) <= eF + eE
    # per-prime identity of Euler factors
    mism = [p for (p, fF, _), (_, fE, _) in zip(mF["per_prime"], mE["per_prime"]) if fF != fE]
    return {"tau_F": tF, "tau_E": tE, "err_F": eF, "err_E": eE, "relative_difference": rel,
            "ledger_F": lF, "ledger_E": lE, "euler_factor_mismatches": mism, "ok": within}


def ci_eligibility(m, r, n, dimXstar_bound=None):
    """Circle-method bounds for m forms of degree r in n+1 variables."""
    dX = m if dimXstar_bound is None else dimXstar_bound
    lhs1, rhs1 = n + 1 - dX, m * (m + 1) * (r - 1) * 2 ** (r - 1)
    lhs2, rhs2 = n, (m + 1) * (r - 1) * 2 ** (r - 1) + m
    return {"birch": lhs1 > rhs1, "birch_slack": lhs1 - rhs1,
            "simplified": lhs2 >= rhs2, "simplified_slack": lhs2 - rhs2,
            "eligible": lhs1 > rhs1}
