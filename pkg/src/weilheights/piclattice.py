"""Neron-Severi lattices with effective cones and cyclic Galois actions.

All cone questions are exact: membership and optimisation go through the
rational simplex in :mod:`intlinalg`, never floating-point LP.  Group actions
are integer matrices acting on column vectors.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from math import factorial

import numpy as np

from .errors import (
    DegenerateCone,
    DivergentIntegral,
    IncompatibleAction,
    NonCyclic,
    NotBig,
    NotOnBoundary,
)
from .intlinalg import (
    clear_denominators,
    det,
    elementary_divisors,
    identity,
    integer_kernel,
    lp_minimize,
    matmul,
    matpow,
    primitive,
    rank,
    solve_in_span,
)


def _vec(v):
    return tuple(int(x) for x in v)


def _apply(g, v):
    return tuple(sum(g[i][j] * v[j] for j in range(len(v))) for i in range(len(g)))


@dataclass(frozen=True)
class PicardLattice:
    """``NS`` as ``Z^rho`` with a finitely generated effective cone and the canonical class."""

    rank: int
    eff_generators: tuple
    canonical: tuple
    labels: tuple = dc_field(default_factory=tuple)
    allow_lines: bool = False

    def __post_init__(self):
        gens = tuple(_vec(g) for g in self.eff_generators)
        object.__setattr__(self, "eff_generators", gens)
        object.__setattr__(self, "canonical", _vec(self.canonical))
        object.__setattr__(self, "labels", tuple(self.labels))
        if not gens:
            raise ValueError("need at least one effective generator")
        if any(len(g) != self.rank for g in gens) or len(self.canonical) != self.rank:
            raise ValueError("vector length differs from the rank")
        if any(not any(g) for g in gens):
            raise ValueError("zero effective generator")
        if not self.allow_lines and self.contains_line():
            raise DegenerateCone("effective cone contains a line; pass allow_lines=True to accept")

    def contains_line(self):
        """Is there a nonzero nonnegative combination of generators summing to zero?"""
        k = len(self.eff_generators)
        A = [[g[i] for g in self.eff_generators] for i in range(self.rank)]
        A.append([1] * k)
        res = lp_minimize([0] * k, A, [0] * self.rank + [1])
        return res.status == "optimal"

    def in_cone(self, v):
        k = len(self.eff_generators)
        A = [[g[i] for g in self.eff_generators] for i in range(self.rank)]
        return lp_minimize([0] * k, A, list(v)).status == "optimal"

    @property
    def anticanonical(self):
        return tuple(-x for x in self.canonical)


@dataclass(frozen=True)
class GaloisLattice:
    """A :class:`PicardLattice` with a finite group generated by integer matrices."""

    base: PicardLattice
    generators: tuple
    order: int = 0

    def __post_init__(self):
        gens = tuple(tuple(_vec(r) for r in g) for g in self.generators) or (tuple(map(tuple, identity(self.base.rank))),)
        object.__setattr__(self, "generators", gens)
        rho = self.base.rank
        I = [list(r) for r in identity(rho)]
        for g in gens:
            if len(g) != rho or any(len(r) != rho for r in g):
                raise IncompatibleAction("action matrix has the wrong size")
        g = gens[0]
        m = self.order
        if m == 0:
            m, P = 1, [list(r) for r in g]
            while P != I:
                P = matmul(P, g)
                m += 1
                if m > 10 * rho + 720:
                    raise IncompatibleAction("action generator has no small finite order")
            object.__setattr__(self, "order", m)
        elif matpow(g, m) != I:
            raise IncompatibleAction(f"generator does not satisfy g^{m} = 1")
        rays = {tuple(primitive(v)) for v in self.base.eff_generators}
        for h in gens:
            if {tuple(primitive(_apply(h, v))) for v in self.base.eff_generators} != rays:
                raise IncompatibleAction("action does not preserve the effective generators")
            if _apply(h, self.base.canonical) != self.base.canonical:
                raise IncompatibleAction("action does not fix the canonical class")

    @property
    def rank(self):
        return self.base.rank

    @property
    def g(self):
        return self.generators[0]

    def is_cyclic(self):
        g = [list(r) for r in self.g]
        powers = [[list(r) for r in identity(self.rank)]]
        P = powers[0]
        for _ in range(self.order - 1):
            P = matmul(P, g)
            powers.append(P)
        return all([list(r) for r in h] in powers for h in self.generators)


def trivial_action(lat: PicardLattice) -> GaloisLattice:
    return GaloisLattice(lat, (tuple(map(tuple, identity(lat.rank))),), 1)


# ---------------------------------------------------------------------------
# a(L), b(L)

def a_invariant(lat: PicardLattice, L):
    """Least rational ``r`` with ``r L + omega`` effective (exact simplex).

    Variables ``r+, r-, lambda_i >= 0`` with
    ``sum lambda_i g_i - (r+ - r-) L = omega``; minimise ``r+ - r-``.
    """
    L = _vec(L)
    if len(L) != lat.rank:
        raise ValueError("L has the wrong length")
    gens = lat.eff_generators
    k = len(gens)
    A = [[-L[i], L[i]] + [g[i] for g in gens] for i in range(lat.rank)]
    res = lp_minimize([1, -1] + [0] * k, A, list(lat.canonical))
    if res.status == "infeasible":
        raise NotBig(f"no r makes r*{L} + omega effective")
    if res.status == "unbounded":
        raise DegenerateCone(f"r*{L} + omega effective for arbitrarily negative r")
    return res.value


def minimal_face(lat: PicardLattice, P):
    """Indices of generators lying in the minimal face of Eff containing ``P``.

    Generator ``i`` lies in that face iff some representation of ``P`` uses it
    with positive weight, i.e. ``max lambda_i`` over representations is > 0.
    """
    gens = lat.eff_generators
    k = len(gens)
    A = [[g[i] for g in gens] for i in range(lat.rank)]
    face = []
    for j in range(k):
        c = [0] * k
        c[j] = -1
        res = lp_minimize(c, A, list(P))
        if res.status == "infeasible":
            raise NotOnBoundary(f"{P} is not in the effective cone")
        if res.status == "unbounded" or res.value < 0:
            face.append(j)
    return face


def b_invariant(lat: PicardLattice, L, a=None):
    """Codimension of the minimal face of Eff containing ``a(L) L + omega``."""
    a = a_invariant(lat, L) if a is None else Fraction(a)
    P = [a * x + w for x, w in zip(L, lat.canonical)]
    face = minimal_face(lat, P)
    dim = rank([lat.eff_generators[j] for j in face]) if face else 0
    if dim == lat.rank:
        raise NotOnBoundary("a(L) L + omega lies in the interior of Eff")
    return lat.rank - dim


# ---------------------------------------------------------------------------
# alpha

def dual_cone_rays(lat: PicardLattice):
    """Primitive integer rays of ``Eff^vee`` (the cone must be full dimensional)."""
    rho = lat.rank
    gens = lat.eff_generators
    if rank(list(gens)) < rho:
        raise DivergentIntegral("effective cone not full dimensional: dual cone has a line")
    if rho == 1:
        return [(1,)] if gens[0][0] > 0 else [(-1,)]
    rays = set()
    for sub in combinations(range(len(gens)), rho - 1):
        rows = [list(gens[j]) for j in sub]
        if rank(rows) != rho - 1:
            continue
        ker = integer_kernel(rows)
        y = tuple(primitive(ker[0]))
        for s in (1, -1):
            ys = tuple(s * t for t in y)
            if all(sum(a * b for a, b in zip(g, ys)) >= 0 for g in gens):
                rays.add(ys)
    return sorted(rays)


def _triangulate(rays, normals, dim):
    """Triangulate the cone spanned by ``rays`` (of dimension ``dim``) using only its rays.

    Faces are cut out by ``normals`` (the defining inequalities ``<n, y> >= 0``).
    Pulling triangulation: cone over the first ray with every facet not containing it.
    """
    if len(rays) == dim:
        return [list(rays)]
    r0 = rays[0]
    facets = []
    seen = set()
    for nrm in normals:
        if sum(a * b for a, b in zip(nrm, r0)) == 0:
            continue
        F = tuple(r for r in rays if sum(a * b for a, b in zip(nrm, r)) == 0)
        if F in seen or len(F) < dim - 1 or rank([list(r) for r in F]) != dim - 1:
            continue
        seen.add(F)
        facets.append(F)
    out = []
    for F in facets:
        for simp in _triangulate(list(F), normals, dim - 1):
            out.append([r0] + simp)
    return out


def dual_cone_triangulation(lat: PicardLattice):
    rays = dual_cone_rays(lat)
    return _triangulate(rays, lat.eff_generators, lat.rank)


def alpha_invariant(lat: PicardLattice):
    """``alpha = 1/(rho-1)! * int_{Eff^vee} exp(-<omega^{-1}, y>) dy`` (exact rational).

    Evaluated simplex by simplex: a simplicial cone with rays ``r_i`` contributes
    ``|det r| / prod <omega^{-1}, r_i>``.
    """
    u = lat.anticanonical
    rho = lat.rank
    total = Fraction(0)
    for simp in dual_cone_triangulation(lat):
        pairings = [sum(a * b for a, b in zip(u, r)) for r in simp]
        if any(p <= 0 for p in pairings):
            raise DivergentIntegral("omega^{-1} is not in the interior of Eff")
        d = abs(det([list(r) for r in simp]))
        term = Fraction(d)
        for p in pairings:
            term /= p
        total += term
    if total == 0:
        raise DivergentIntegral("degenerate dual cone")
    return total / factorial(rho - 1)


def alpha_monte_carlo(lat: PicardLattice, samples=200_000, seed=0):
    """Seeded estimate of alpha via ``alpha = rho * vol{y in Eff^vee : <omega^{-1}, y> <= 1}``.

    Returns ``(value, standard error)``.
    """
    u = np.array(lat.anticanonical, dtype=float)
    rays = np.array(dual_cone_rays(lat), dtype=float)
    pair = rays @ u
    if np.any(pair <= 0):
        raise DivergentIntegral("omega^{-1} is not in the interior of Eff")
    verts = np.vstack([np.zeros(lat.rank), rays / pair[:, None]])
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    box = float(np.prod(hi - lo))
    rng = np.random.default_rng(seed)
    y = lo + (hi - lo) * rng.random((samples, lat.rank))
    G = np.array(lat.eff_generators, dtype=float)
    inside = np.all(y @ G.T >= 0, axis=1) & (y @ u <= 1)
    p = inside.mean()
    val = lat.rank * box * p
    se = lat.rank * box * np.sqrt(p * (1 - p) / samples)
    return float(val), float(se)


# ---------------------------------------------------------------------------
# group-theoretic invariants

def invariants_rank(gal: GaloisLattice):
    """Rank of the fixed sublattice of the whole group."""
    rho = gal.rank
    rows = []
    for g in gal.generators:
        rows.extend([[g[i][j] - int(i == j) for j in range(rho)] for i in range(rho)])
    return rho - rank(rows)


def fixed_sublattice(gal: GaloisLattice):
    """Z-basis (rows) of the saturated fixed sublattice."""
    rho = gal.rank
    rows = []
    for g in gal.generators:
        rows.extend([[g[i][j] - int(i == j) for j in range(rho)] for i in range(rho)])
    if not any(any(r) for r in rows):
        return [list(r) for r in identity(rho)]
    return integer_kernel(rows)


def h1_cyclic(gal: GaloisLattice):
    """``#H^1(<g>, Lambda) = [ker N : im(g - 1)]`` via Smith normal form."""
    if not gal.is_cyclic():
        raise NonCyclic("h1_cyclic needs a cyclic group")
    rho, m = gal.rank, gal.order
    g = [list(r) for r in gal.g]
    N = [[0] * rho for _ in range(rho)]
    P = identity(rho)
    for _ in range(m):
        N = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(N, P)]
        P = matmul(P, g)
    if all(not any(r) for r in N):
        K = [list(r) for r in identity(rho)]
    else:
        K = integer_kernel(N)
    if not K:
        return 1
    gm1 = [[g[i][j] - int(i == j) for j in range(rho)] for i in range(rho)]
    cols = [[gm1[i][j] for i in range(rho)] for j in range(rho)]
    coords = []
    for c in cols:
        x = solve_in_span(K, c)
        if x is None or any(t.denominator != 1 for t in x):
            raise IncompatibleAction("image of g - 1 not inside ker N")
        coords.append([int(t) for t in x])
    divs = elementary_divisors(coords) if any(any(r) for r in coords) else []
    if len(divs) < len(K):
        raise IncompatibleAction("H^1 infinite: im(g - 1) has smaller rank than ker N")
    out = 1
    for dv in divs:
        out *= dv
    return out


def beta_invariant(gal: GaloisLattice):
    return h1_cyclic(gal)


def _coset_cycle_ok(coset_action, d):
    if coset_action is None:
        return True
    perm = list(coset_action)
    if sorted(perm) != list(range(d)):
        return False
    seen, i = 0, 0
    for _ in range(d):
        i = perm[i]
        seen += 1
        if i == 0:
            break
    return seen == d and i == 0


def induce(gal: GaloisLattice, d: int, coset_action=None) -> GaloisLattice:
    """Induced lattice ``Ind_{G_F}^{G_E}`` for a cyclic ``G_E`` with ``[G_E : G_F] = d``.

    The E-side generator ``s`` moves block ``i`` to block ``i+1`` and sends the
    last block back to the first through the F-side generator ``g``
    (``s^d`` acts as ``g`` on every block), so ``s`` has order ``d * m``.
    ``coset_action``, when given, must be a single d-cycle on ``range(d)``.
    """
    if d < 1:
        raise IncompatibleAction("extension degree must be positive")
    if not gal.is_cyclic():
        raise NonCyclic("induction implemented for cyclic actions")
    if not _coset_cycle_ok(coset_action, d):
        raise IncompatibleAction("coset action must be a transitive d-cycle")
    if d == 1:
        return gal
    rho = gal.rank
    R = d * rho
    s = [[0] * R for _ in range(R)]
    for blk in range(d - 1):
        for i in range(rho):
            s[(blk + 1) * rho + i][blk * rho + i] = 1
    for i in range(rho):
        for j in range(rho):
            s[i][(d - 1) * rho + j] = gal.g[i][j]
    gens = []
    for blk in range(d):
        for v in gal.base.eff_generators:
            e = [0] * R
            e[blk * rho:(blk + 1) * rho] = v
            gens.append(tuple(e))
    base = PicardLattice(R, tuple(gens), tuple(gal.base.canonical) * d,
                         tuple(f"{lab}[{b}]" for b in range(d) for lab in gal.base.labels)
                         if gal.base.labels else (), gal.base.allow_lines)
    return GaloisLattice(base, (tuple(map(tuple, s)),), d * gal.order)


def block_class(L, d):
    """The class ``(L, ..., L)`` of the restricted bundle on the induced lattice."""
    return tuple(L) * d


def invariant_lattice(gal: GaloisLattice):
    """``(Pic X, basis)``: the fixed sublattice with the invariant effective cone.

    The invariant cone is spanned by orbit sums of the generators (averaging
    maps Eff onto its invariant part); coordinates are taken in a Z-basis of
    the saturated fixed lattice.
    """
    basis = fixed_sublattice(gal)
    if not basis:
        raise DegenerateCone("no invariant classes")
    mats = [list(map(list, h)) for h in gal.generators]
    orbit_sums = set()
    for v in gal.base.eff_generators:
        orbit = {tuple(v)}
        frontier = [tuple(v)]
        while frontier:
            w = frontier.pop()
            for h in mats:
                u = _apply(h, w)
                if u not in orbit:
                    orbit.add(u)
                    frontier.append(u)
        tot = [sum(c) for c in zip(*orbit)]
        orbit_sums.add(tuple(primitive(tot)))
    gens = []
    for v in sorted(orbit_sums):
        c = solve_in_span(basis, list(v))
        gens.append(tuple(clear_denominators(c)))
    canon = solve_in_span(basis, list(gal.base.canonical))
    if canon is None or any(t.denominator != 1 for t in canon):
        raise IncompatibleAction("canonical class not in the invariant lattice")
    lat = PicardLattice(len(basis), tuple(sorted(set(gens))), tuple(int(t) for t in canon),
                        allow_lines=gal.base.allow_lines)
    return lat, basis


def to_invariant_coords(basis, v):
    c = solve_in_span(basis, list(v))
    if c is None or any(t.denominator != 1 for t in c):
        raise IncompatibleAction(f"{v} is not an invariant class")
    return tuple(int(t) for t in c)


def invariant_ab(gal: GaloisLattice, L):
    """``a`` and ``b`` of an invariant class ``L`` (geometric coordinates) on ``Pic X``."""
    lat, basis = invariant_lattice(gal)
    Lc = to_invariant_coords(basis, L)
    a = a_invariant(lat, Lc)
    return a, b_invariant(lat, Lc, a)


def res_preservation_check(gal: GaloisLattice, d: int, L, coset_action=None):
    """Compare ``a, b`` of ``L`` on X with those of ``Res L`` on ``Res X``.

    Both sides are evaluated on Galois-invariant Picard lattices; the geometric
    induced lattice is reported too (there b is multiplied by d).
    """
    aF, bF = invariant_ab(gal, L)
    ind = induce(gal, d, coset_action)
    LE = block_class(L, d)
    aE, bE = invariant_ab(ind, LE)
    a_geo = a_invariant(ind.base, LE)
    b_geo = b_invariant(ind.base, LE, a_geo)
    return {"a_F": aF, "b_F": bF, "a_E": aE, "b_E": bE, "a_geometric": a_geo, "b_geometric": b_geo,
            "beta_F": h1_cyclic(gal), "beta_E": h1_cyclic(ind),
            "ok": aF == aE and bF == bE}


# ---------------------------------------------------------------------------
# presets

def preset(name, **kw) -> PicardLattice:
    """Library of effective-cone data: Pn, PnxPm, P1xP1, quadric, dP6, CI, BT."""
    key = name.lower()
    if key in ("pn", "projective"):
        n = int(kw.get("n", 1))
        return PicardLattice(1, ((1,),), (-(n + 1),), ("H",))
    if key in ("p1xp1", "quadric"):
        return PicardLattice(2, ((1, 0), (0, 1)), (-2, -2), ("H1", "H2"))
    if key in ("pnxpm", "multiprojective"):
        dims = tuple(kw.get("dims", (1, 1)))
        k = len(dims)
        gens = tuple(tuple(int(i == j) for j in range(k)) for i in range(k))
        return PicardLattice(k, gens, tuple(-(n + 1) for n in dims), tuple(f"H{i + 1}" for i in range(k)))
    if key == "dp6":
        gens = ((0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, -1, -1, 0), (1, -1, 0, -1), (1, 0, -1, -1))
        return PicardLattice(4, gens, (-3, 1, 1, 1), ("H", "E1", "E2", "E3"))
    if key == "ci":
        n, m, r = int(kw["n"]), int(kw.get("m", 1)), int(kw["r"])
        if n + 1 - m * r <= 0:
            raise NotBig("complete intersection is not Fano")
        return PicardLattice(1, ((1,),), (-(n + 1 - m * r),), ("H",))
    if key == "bt":
        return PicardLattice(2, ((1, 0), (0, 1)), (-3, -1), ("H1", "H2"))
    raise KeyError(f"unknown lattice preset {name!r}")


def swap_action(rho):
    """``Z^rho + Z^rho`` swap; used for quadratic twists of split data."""
    R = 2 * rho
    s = [[0] * R for _ in range(R)]
    for i in range(rho):
        s[i][rho + i] = 1
        s[rho + i][i] = 1
    return tuple(map(tuple, s))
