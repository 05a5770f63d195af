"""Points of bounded height over Q and imaginary quadratic fields of class number one.

Three independent counting routes live here:

* ``enum_projective`` / ``enum_subvariety``: explicit streams of canonical
  points, exact filters, no cleverness.  Oracle grade, small B only.
* ``structured_counts``: for P^n with max norms, enumerate the first n
  coordinates (vectorised) and count the last one with a coprimality table;
  returns N(B) for every integer B up to the cutoff in one pass.
* ``moebius_inverted_count``: Moebius inversion over ideals with ideal
  lattice-point counts.

Heights for max norms over these fields are integers once the point is
primitive, so N(B) = N(floor(B)).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product as iproduct
from math import floor, isqrt

import numpy as np

from .errors import MismatchFound, UnsupportedField
from .heights import MetrizedBundle, ProjectivePoint, height, height_leq
from .nfcore import NumberField, content_norm_quadratic, rationals, squarefree_ideals
from .polys import Polynomial


# ---------------------------------------------------------------------------
# vectorised arithmetic in Z or a quadratic order with power basis

class VecRing:
    """Vectorised integers of Q or of an imaginary quadratic field with basis {1, theta}."""

    def __init__(self, F: NumberField):
        self.F = F
        self.w = F.roots_of_unity
        if F.degree == 1:
            self.d = 1
            self.c0 = self.c1 = 0
        else:
            if not F.is_imaginary_quadratic:
                raise UnsupportedField("enumeration needs Q or an imaginary quadratic field")
            self.d = 2
            self.c0, self.c1 = F.quadratic_data()
            if (self.c0, self.c1) not in ((1, 0), (1, 1), (2, 0), (2, 1), (3, 1)):
                raise UnsupportedField("vectorised gcd needs a norm-Euclidean field")
        if F.class_number != 1:
            raise UnsupportedField("enumeration needs class number one")

    def norm(self, a, b):
        if self.d == 1:
            return a * a
        return a * a - self.c1 * a * b + self.c0 * b * b

    def abs_height(self, a, b):
        """``|x|_v`` at the unique archimedean place: |a| over Q, N(x) otherwise."""
        return np.abs(a) if self.d == 1 else self.norm(a, b)

    def elements(self, bound):
        """All integers with ``|x|_v <= bound`` sorted by (|x|_v, a, b)."""
        bound = int(floor(bound))
        if self.d == 1:
            a = np.arange(-bound, bound + 1, dtype=np.int64)
            b = np.zeros_like(a)
        else:
            # q(a, b) <= B forces b^2 <= 4B/disc and a^2 <= 4 c0 B/disc
            disc = 4 * self.c0 - self.c1 * self.c1
            rb = isqrt(4 * bound // disc) + 1
            ra = isqrt(4 * self.c0 * bound // disc) + 1
            A, Bm = np.meshgrid(np.arange(-ra, ra + 1, dtype=np.int64),
                                np.arange(-rb, rb + 1, dtype=np.int64), indexing="ij")
            a, b = A.ravel(), Bm.ravel()
            keep = self.norm(a, b) <= bound
            a, b = a[keep], b[keep]
        h = self.abs_height(a, b)
        order = np.lexsort((b, a, h))
        return a[order], b[order]

    def mul(self, a1, b1, a2, b2):
        if self.d == 1:
            return a1 * a2, np.zeros_like(a1)
        return a1 * a2 - self.c0 * b1 * b2, a1 * b2 + a2 * b1 - self.c1 * b1 * b2

    def conj(self, a, b):
        return a - self.c1 * b, -b

    def gcd(self, a1, b1, a2, b2):
        """Elementwise generator of the ideal (x, y), canonicalised (gcd(0, 0) = 0)."""
        if self.d == 1:
            g = np.gcd(a1, a2)
            return g, np.zeros_like(g)
        xa, xb = a1.copy(), b1.copy()
        ya, yb = a2.copy(), b2.copy()
        active = (ya != 0) | (yb != 0)
        while np.any(active):
            idx = np.nonzero(active)[0]
            pa, pb = xa[idx], xb[idx]
            qa_, qb_ = ya[idx], yb[idx]
            n = self.norm(qa_, qb_)
            ca, cb = self.conj(qa_, qb_)
            ma, mb = self.mul(pa, pb, ca, cb)
            ra = np.floor_divide(2 * ma + n, 2 * n)
            rb = np.floor_divide(2 * mb + n, 2 * n)
            ta, tb = self.mul(ra, rb, qa_, qb_)
            xa[idx], xb[idx] = qa_, qb_
            ya[idx], yb[idx] = pa - ta, pb - tb
            active[idx] = (ya[idx] != 0) | (yb[idx] != 0)
        return self.canonical(xa, xb)

    def _rotate(self, a, b):
        """Multiply by a generator of the unit group."""
        if self.w == 4:
            return -b, a
        if self.w == 6:
            return -b, a - b
        return -a, -b

    def in_sector(self, a, b):
        if self.d == 1:
            return a > 0
        if self.w == 4:
            return (a > 0) & (b >= 0)
        if self.w == 6:
            return (b >= 0) & (b < a)
        return (b > 0) | ((b == 0) & (a > 0))

    def canonical(self, a, b):
        a, b = np.array(a, dtype=np.int64, copy=True), np.array(b, dtype=np.int64, copy=True)
        if self.d == 1:
            return np.abs(a), b
        todo = ~self.in_sector(a, b) & ((a != 0) | (b != 0))
        for _ in range(self.w):
            if not np.any(todo):
                break
            ra, rb = self._rotate(a[todo], b[todo])
            a[todo], b[todo] = ra, rb
            todo = ~self.in_sector(a, b) & ((a != 0) | (b != 0))
        return a, b

    def unit_test(self, a, b):
        return self.abs_height(a, b) == 1


def _supported_max(F, m: MetrizedBundle):
    return len(m.ambient) == 1 and m.degree == (1,) and m.is_max and (F.degree == 1 or F.is_imaginary_quadratic)


# ---------------------------------------------------------------------------
# tasks and series

@dataclass
class EnumerationTask:
    field: NumberField
    ambient: tuple = (1,)
    bundle: MetrizedBundle | None = None
    equations: list = dc_field(default_factory=list)
    nonvanishing: list = dc_field(default_factory=list)
    bound: float = 1
    chunks: int = 1

    def __post_init__(self):
        if isinstance(self.ambient, int):
            self.ambient = (self.ambient,)
        self.ambient = tuple(self.ambient)
        if self.bundle is None:
            self.bundle = MetrizedBundle(self.ambient, (1,) * len(self.ambient))
        F = self.field
        if F.class_number != 1 or not (F.degree == 1 or F.is_imaginary_quadratic):
            raise UnsupportedField("enumeration needs Q or an imaginary quadratic field with h = 1")
        if self.bound < 1:
            self.bound = max(self.bound, 0)


@dataclass
class CountSeries:
    ladder: list
    counts: list
    elapsed_ms: list = dc_field(default_factory=list)
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if any(b2 < b1 for b1, b2 in zip(self.ladder, self.ladder[1:])):
            raise ValueError("ladder must be increasing")
        if any(c2 < c1 for c1, c2 in zip(self.counts, self.counts[1:])):
            raise ValueError("counts must be nondecreasing")


def geometric_ladder(b0, factor, rungs):
    """``B_k = b0 * factor^k`` rounded to integers (deduplicated, increasing)."""
    out = []
    for k in range(rungs):
        b = int(round(b0 * factor ** k))
        if not out or b > out[-1]:
            out.append(b)
    return out


# ---------------------------------------------------------------------------
# oracle-grade streams

def _box_radius(F, norm, B):
    """Coordinate bound (on |x|_v) of a primitive point with archimedean part <= B."""
    if norm.kind == "matrix":
        from .intlinalg import solve
        M = norm.matrix
        n = len(M)
        inv = [solve(M, [int(i == j) for i in range(n)]) for j in range(n)]
        rowsum = max(sum(abs(inv[j][i]) for j in range(n)) for i in range(n))
        return B * rowsum if F.degree == 1 else B * rowsum * rowsum
    return B


def _primitive_tuples(F, n, B, box):
    """Canonical primitive integral (n+1)-tuples with coordinates in the box (lexicographic order).

    A tuple is canonical iff its coordinates generate the unit ideal and the
    leading nonzero coordinate lies in the unit sector; both are tested
    vectorised, one leading index at a time, before any exact element is built.
    """
    R = VecRing(F)
    a, b = R.elements(box)
    k = len(a)
    elems = [F([int(x)]) if F.degree == 1 else F([int(x), int(y)]) for x, y in zip(a, b)]
    rest = np.indices((k,) * n).reshape(n, -1) if n else np.zeros((0, 1), dtype=np.int64)
    for i0 in range(k):
        cols = [np.full(rest.shape[1], i0, dtype=np.int64)] + [rest[j] for j in range(n)]
        ga = np.zeros(rest.shape[1], dtype=np.int64)
        gb = np.zeros_like(ga)
        la, lb = ga.copy(), gb.copy()
        for c in cols:
            ca, cb = a[c], b[c]
            unset = (la == 0) & (lb == 0)
            la, lb = np.where(unset, ca, la), np.where(unset, cb, lb)
            ga, gb = R.gcd(ga, gb, ca, cb)
        keep = np.nonzero(R.unit_test(ga, gb) & R.in_sector(la, lb))[0]
        for t in keep:
            yield tuple(elems[c[t]] for c in cols)


def enum_projective(task: EnumerationTask):
    """All points of the ambient with ``H <= B`` as canonical ProjectivePoints (sorted)."""
    F, B, m = task.field, Fraction(task.bound).limit_denominator(10**12), task.bundle
    if B < 1:
        return []
    factors = []
    for i, n in enumerate(task.ambient):
        box = max(_box_radius(F, m.norm_at(k), B) for k in range(len(F.archimedean_places())))
        single = MetrizedBundle((n,), (1,), m.norms)
        pts = []
        for tup in _primitive_tuples(F, n, B, int(floor(box))):
            p = ProjectivePoint(tup, F)
            p._canon = p
            pts.append((height(p, single), p))
        factors.append(pts)
    out = []
    for combo in iproduct(*factors):
        if len(combo) == 1:
            pt = combo[0][1]
        else:
            pt = tuple(c[1] for c in combo)
        if height_leq(pt, m, B):
            out.append(pt)
    return out


def enum_subvariety(task: EnumerationTask):
    """Ambient points satisfying every equation and no nonvanishing condition (filter-based)."""
    pts = enum_projective(task)
    out = []
    for p in pts:
        coords = list(p.coords) if isinstance(p, ProjectivePoint) else [c for q in p for c in q.coords]
        if all(f(coords).is_zero() for f in task.equations) and \
                all(not g(coords).is_zero() for g in task.nonvanishing):
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# structured counting for P^n with max norms

def coprime_table(R: VecRing, bmax, keys_a, keys_b):
    """``C[k, B]`` = #{z : |z|_v <= B, (z, g_k) = 1} for canonical gcd values g_k (g = 0: units)."""
    a, b = R.elements(bmax)
    h = R.abs_height(a, b)
    K = len(keys_a)
    C = np.zeros((K, bmax + 1), dtype=np.int64)
    for k in range(K):
        ga, gb = keys_a[k], keys_b[k]
        if ga == 0 and gb == 0:
            ok = R.unit_test(a, b)
        else:
            ca, cb = R.gcd(np.full_like(a, ga), np.full_like(b, gb), a, b)
            ok = R.unit_test(ca, cb)
        C[k] = np.cumsum(np.bincount(h[ok], minlength=bmax + 1)[: bmax + 1])
    return C


def structured_counts(F: NumberField, n: int, bmax: int, chunks: int = 1):
    """``N(B)`` for ``B = 0..bmax`` on ``P^n(F)`` with the max norm (exact integers).

    Tuples with gcd 1 are counted by enumerating the first n coordinates and
    reading the number of admissible last coordinates from a coprimality
    table; the total is divided by the number of units.  ``chunks`` splits
    the first coordinate range; the result does not depend on it.
    """
    bmax = int(floor(bmax))
    if bmax < 1:
        return np.zeros(max(bmax, 0) + 1, dtype=np.int64)
    R = VecRing(F)
    a, b = R.elements(bmax)
    h = R.abs_height(a, b)
    # histogram cnt[(gcd class), max height] over prefixes
    hist = {}
    if n == 0:
        return np.concatenate([[0], np.ones(bmax, dtype=np.int64)])
    idx = np.arange(len(a))
    parts = np.array_split(idx, max(1, chunks))

    def add(ga, gb, hm):
        key = np.stack([ga, gb], axis=1)
        uniq, inv = np.unique(key, axis=0, return_inverse=True)
        inv = inv.ravel()
        flat = inv * (bmax + 1) + hm
        cnt = np.bincount(flat, minlength=len(uniq) * (bmax + 1)).reshape(len(uniq), bmax + 1)
        for u, row in zip(map(tuple, uniq), cnt):
            if u in hist:
                hist[u] += row
            else:
                hist[u] = row.copy()

    for part in parts:
        if n == 1:
            ga, gb = R.canonical(a[part], b[part])
            add(ga, gb, h[part])
            continue
        for i0 in part:
            ga = np.full(len(a), a[i0])
            gb = np.full(len(a), b[i0])
            hm0 = np.full(len(a), h[i0])
            _prefix_recurse(R, a, b, h, ga, gb, hm0, n - 1, add)
    keys = sorted(hist)
    ka = [k[0] for k in keys]
    kb = [k[1] for k in keys]
    C = coprime_table(R, bmax, ka, kb)
    total = np.zeros(bmax + 1, dtype=np.int64)
    for k, key in enumerate(keys):
        cum = np.cumsum(hist[key])
        total += cum * C[k]
    if np.any(total % R.w):
        raise ArithmeticError("tuple count not divisible by the number of units")
    return total // R.w


def _prefix_recurse(R, a, b, h, ga, gb, hm, depth, add):
    """Extend prefixes by one coordinate (all elements); depth = coordinates still to add."""
    na, nb = R.gcd(ga, gb, a, b)
    nh = np.maximum(hm, h)
    if depth == 1:
        add(na, nb, nh)
        return
    for j in range(len(a)):
        _prefix_recurse(R, a, b, h, np.full(len(a), na[j]), np.full(len(a), nb[j]),
                        np.full(len(a), nh[j]), depth - 1, add)


# ---------------------------------------------------------------------------
# Moebius route

def _mobius_sieve(N):
    mu = np.ones(N + 1, dtype=np.int64)
    mu[0] = 0
    is_comp = np.zeros(N + 1, dtype=bool)
    for p in range(2, N + 1):
        if not is_comp[p]:
            is_comp[2 * p::p] = True
            mu[p::p] *= -1
            if p * p <= N:
                mu[p * p::p * p] = 0
    return mu


def _mobius_sieve_fast(N):
    mu = np.ones(N + 1, dtype=np.int64)
    mu[0] = 0
    sieve = np.ones(N + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(N) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    primes = np.nonzero(sieve)[0]
    for p in primes:
        mu[p::p] *= -1
        pp = int(p) * int(p)
        if pp <= N:
            mu[pp::pp] = 0
    return mu


def ideal_lattice_count(F: NumberField, hnf_rows, B):
    """``#{z in a : |z|_v <= B}`` (zero included) for an ideal given by its HNF."""
    B = int(floor(B))
    if B < 0:
        return 0
    if F.degree == 1:
        g = abs(hnf_rows[0][0])
        return 2 * (B // g) + 1
    R = VecRing(F)
    (h11, h12), (_, h22) = hnf_rows
    disc = 4 * R.c0 - R.c1 * R.c1
    amax = isqrt(4 * R.c0 * B // disc) + 1
    bmax = isqrt(4 * B // disc) + 1
    i = np.arange(-(amax // h11) - 1, amax // h11 + 2, dtype=np.int64)
    j = np.arange(-((bmax + abs(h12) * (amax // h11 + 2)) // h22) - 1,
                  (bmax + abs(h12) * (amax // h11 + 2)) // h22 + 2, dtype=np.int64)
    I, J = np.meshgrid(i, j, indexing="ij")
    a = I * h11
    b = I * h12 + J * h22
    return int(np.count_nonzero(R.norm(a, b) <= B))


def moebius_inverted_count(F: NumberField, n: int, B):
    """``(1/w) sum_{N a <= B} mu(a) (G_a(B)^{n+1} - 1)`` with ``G_a`` the ideal lattice count."""
    if B < 1:
        return 0
    B = int(floor(B))
    w = F.roots_of_unity
    if F.degree == 1:
        mu = _mobius_sieve_fast(B)
        ks = np.arange(1, B + 1, dtype=np.int64)
        G = 2 * (B // ks) + 1
        nz = mu[1:] != 0
        terms = [int(m) * (int(g) ** (n + 1) - 1) for m, g in zip(mu[1:][nz], G[nz])] if B <= 5000 else None
        if terms is not None:
            total = sum(terms)
        else:
            total = _big_sum(mu[1:][nz], G[nz], n + 1)
        if total % w:
            raise ArithmeticError("Moebius sum not divisible by w")
        return total // w
    total = 0
    for norm, mu, ideal in squarefree_ideals(F, B):
        G = ideal_lattice_count(F, ideal.hnf, B)
        total += mu * (G ** (n + 1) - 1)
    if total % w:
        raise ArithmeticError("Moebius sum not divisible by w")
    return total // w


def _big_sum(mu, G, e):
    """Exact ``sum mu * (G^e - 1)`` using int64 where safe and Python ints otherwise."""
    Gf = G.astype(np.float64)
    if float(np.max(Gf)) ** e * len(G) < 2**62:
        return int(np.sum(mu * (G ** e - 1)))
    return sum(int(m) * (int(g) ** e - 1) for m, g in zip(mu, G))


def ideal_norm_histogram(F: NumberField, hnf_rows, bmax):
    """``G_a(B)`` for ``B = 0..bmax`` (cumulative counts of ideal points by ``|z|_v``)."""
    if F.degree == 1:
        g = abs(hnf_rows[0][0])
        B = np.arange(bmax + 1, dtype=np.int64)
        return 2 * (B // g) + 1
    R = VecRing(F)
    a, b = R.elements(bmax)
    # membership in the ideal lattice: solve against the triangular HNF
    (h11, h12), (_, h22) = hnf_rows
    inside = (a % h11 == 0)
    inside &= ((b - (a // h11) * h12) % h22 == 0)
    h = R.abs_height(a[inside], b[inside])
    return np.cumsum(np.bincount(h, minlength=bmax + 1)[: bmax + 1])


def moebius_counts_all(F: NumberField, n: int, bmax: int):
    """Moebius-route ``N(B)`` for every integer ``B = 0..bmax`` at once."""
    bmax = int(floor(bmax))
    total = np.zeros(bmax + 1, dtype=object if bmax > 10**4 else np.int64)
    if bmax < 1:
        return total
    if F.degree == 1:
        mu = _mobius_sieve_fast(bmax)
        for a in np.nonzero(mu)[0]:
            G = ideal_norm_histogram(F, [[int(a)]], bmax)
            total += int(mu[a]) * (G ** (n + 1) - 1)
    else:
        for norm, mu, ideal in squarefree_ideals(F, bmax):
            G = ideal_norm_histogram(F, ideal.hnf, bmax)
            total += mu * (G ** (n + 1) - 1)
    w = F.roots_of_unity
    if np.any(total % w != 0):
        raise ArithmeticError("Moebius sum not divisible by w")
    return total // w


def moebius_count_series(F: NumberField, n: int, ladder):
    return [moebius_inverted_count(F, n, B) for B in ladder]


# ---------------------------------------------------------------------------
# series

def count_series(task: EnumerationTask, ladder, method="auto", timing=False):
    """Counts at each rung from one pass with cutoff at ``max(ladder)``.

    ``method``: ``structured`` (P^n, max norm), ``moebius`` (same scope,
    independent route), ``enumerate`` (explicit stream + exact heights).
    """
    ladder = sorted(ladder)
    F, m = task.field, task.bundle
    t0 = time.perf_counter()
    plain = _supported_max(F, m) and not task.equations and not task.nonvanishing
    if method == "auto":
        method = "structured" if plain else "enumerate"
    if method in ("structured", "moebius") and not plain:
        raise UnsupportedField(f"{method} counting needs P^n with the max norm and no equations")
    if method == "structured":
        table = structured_counts(F, task.ambient[0], int(floor(ladder[-1])), task.chunks)
        counts = [int(table[int(floor(B))]) if B >= 1 else 0 for B in ladder]
    elif method == "moebius":
        counts = moebius_count_series(F, task.ambient[0], ladder)
    else:
        big = EnumerationTask(F, task.ambient, m, task.equations, task.nonvanishing, ladder[-1], task.chunks)
        pts = enum_subvariety(big)
        hs = [height(p, m) for p in pts]
        counts = []
        for B in ladder:
            Bq = Fraction(B).limit_denominator(10**12)
            counts.append(sum(1 for p, h in zip(pts, hs)
                              if (h <= Bq if isinstance(h, Fraction) else height_leq(p, m, Bq))))
    elapsed = (time.perf_counter() - t0) * 1000
    return CountSeries(list(ladder), counts, [elapsed] * len(ladder) if timing else [],
                       {"field": F.name, "ambient": task.ambient, "method": method})


# ---------------------------------------------------------------------------
# restriction counting

def quadric_point_chunks(quadric, M):
    """Canonical primitive integer points of ``u0 u3 = q(u1, u2)`` with ``max |u| <= M``.

    Yields arrays ``(u0, u1, u2, u3)`` grouped by ``u0``; the two coordinate
    points ``(1:0:0:0)`` and ``(0:0:0:1)`` come first.  Canonical means
    ``u0, u3 >= 0`` (they share a sign because q is definite) and not both 0.
    """
    qt = quadric.norm_form.rational_terms()
    qa, qb, qc = int(qt.get((2, 0), 0)), int(qt.get((1, 1), 0)), int(qt.get((0, 2), 0))
    one, zero = np.array([1], dtype=np.int64), np.array([0], dtype=np.int64)
    yield one, zero, zero, zero
    yield zero, zero, zero, one
    rng = np.arange(-M, M + 1, dtype=np.int64)
    U1, U2 = np.meshgrid(rng, rng, indexing="ij")
    U1, U2 = U1.ravel(), U2.ravel()
    Q = qa * U1 * U1 + qb * U1 * U2 + qc * U2 * U2
    keep = (Q > 0) & (Q <= M * M)
    U1, U2, Q = U1[keep], U2[keep], Q[keep]
    order = np.argsort(Q, kind="stable")
    U1, U2, Q = U1[order], U2[order], Q[order]
    u3 = np.arange(1, M + 1, dtype=np.int64)
    for u0 in range(1, M + 1):
        n = u0 * u3
        lo = np.searchsorted(Q, n, side="left")
        hi = np.searchsorted(Q, n, side="right")
        cnt = hi - lo
        tot = int(cnt.sum())
        if not tot:
            continue
        sel = np.repeat(lo, cnt) + np.arange(tot) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        a, b, v3 = U1[sel], U2[sel], np.repeat(u3, cnt)
        prim = np.gcd(np.gcd(np.gcd(a, b), v3), u0) == 1
        yield np.full(int(prim.sum()), u0, dtype=np.int64), a[prim], b[prim], v3[prim]


def quadric_restriction_heights(quadric, u0, u1, u2, u3):
    """Vectorised ``H_{Res O(1)}`` of quadric points via ``p(u) = (u1 alpha_1 + u2 alpha_2 : u3)``.

    The finite part is the norm of the content ideal of ``(z, u3)`` (gcd of
    the 2x2 minors of its Z-lattice generators).
    """
    ext = quadric.ext
    c0, c1 = ext.F.quadratic_data()
    za, zb = _rel_to_power(ext, u1, u2)
    h = np.ones_like(u0)
    fin = u3 != 0
    za, zb, v3 = za[fin], zb[fin], u3[fin]
    cn = content_norm_quadratic(za, zb, v3, np.zeros_like(v3), c0, c1)
    num = np.maximum(za * za - c1 * za * zb + c0 * zb * zb, v3 * v3)
    if np.any(num % cn):
        raise ArithmeticError("content norm does not divide the archimedean part")
    h[fin] = num // cn
    return h


def quadric_sweep_heights(quadric, M, bmax):
    """Histogram of restriction heights ``<= bmax`` over the quadric points in the box ``M``."""
    hist = np.zeros(bmax + 1, dtype=np.int64)
    scanned = 0
    for u0, u1, u2, u3 in quadric_point_chunks(quadric, M):
        scanned += len(u0)
        h = quadric_restriction_heights(quadric, u0, u1, u2, u3)
        h = h[h <= bmax]
        hist += np.bincount(h, minlength=bmax + 1)[: bmax + 1]
    return hist, scanned


def _rel_to_power(ext, a, b):
    F = ext.F
    B = F.basis
    return a * int(B[0][0]) + b * int(B[1][0]), a * int(B[0][1]) + b * int(B[1][1])


def restriction_count_check(F: NumberField, ladder, verify_bound=30, chunks=1):
    """Exact comparison of ``N(O(1), P^1_F, B)`` with ``N(Res O(1), Res P^1, B)``.

    F side: structured enumeration over F.  E side: sweep of the quadric model
    of Res P^1 inside the box ``max |u| <= kappa B`` that provably contains
    every E-point of restriction height <= B.  Up to ``verify_bound`` the
    bijection is checked point by point through the compiled chart atlas.
    """
    from .weilres import ExtensionData, projective_space, res_p1_quadric, restrict_projective
    from .heights import restriction_height

    ladder = sorted(int(floor(B)) for B in ladder)
    ext = ExtensionData.over_Q(F)
    if F.degree == 1:
        table = structured_counts(F, 1, ladder[-1], chunks)
        counts = [int(table[B]) for B in ladder]
        return {"ladder": ladder, "F_counts": counts, "E_counts": counts, "ok": True, "verified_points": 0}
    quad = res_p1_quadric(ext)
    kappa_sq = quad.ratio_bound_sq()
    bmax = ladder[-1]
    M = isqrt(int(floor(kappa_sq * bmax * bmax)))
    t0 = time.perf_counter()
    fF = structured_counts(F, 1, bmax, chunks)
    tF = time.perf_counter() - t0
    hist, scanned = quadric_sweep_heights(quad, M, bmax)
    eE = np.cumsum(hist)
    tE = time.perf_counter() - t0 - tF
    F_counts = [int(fF[B]) for B in ladder]
    E_counts = [int(eE[B]) for B in ladder]
    for B, a, b in zip(ladder, F_counts, E_counts):
        if a != b:
            raise MismatchFound(f"N_F({B}) = {a} but N_E({B}) = {b}", witness={"B": B, "F": a, "E": b})
    # point-level bijection at small height
    vb = min(verify_bound, bmax)
    verified = 0
    if vb >= 1:
        atlas = restrict_projective(projective_space(F, 1), ext)
        mF = MetrizedBundle((1,), (1,))
        Fpts = enum_projective(EnumerationTask(F, (1,), mF, bound=vb))
        Epts = set()
        Mv = isqrt(int(floor(kappa_sq * vb * vb)))
        for u in _quadric_points_small(quad, Mv):
            x = quad.point_up(u)
            if height_leq(x, mF, vb):
                Epts.add(u)
        images = set()
        for x in Fpts:
            y = atlas.point_down(x)
            if not atlas.charts[y.chart].satisfies(y.coords):
                raise MismatchFound("compiled chart system rejects the image", witness=x)
            if restriction_height(y, atlas, mF) != height(x, mF):
                raise MismatchFound("restriction height differs", witness=x)
            if atlas.point_up(y) != x:
                raise MismatchFound("point_up does not invert point_down", witness=x)
            images.add(quad.point_down(x))
            verified += 1
        if images != Epts:
            extra = next(iter(images.symmetric_difference(Epts)))
            raise MismatchFound("point sets differ", witness=extra)
    return {"ladder": ladder, "F_counts": F_counts, "E_counts": E_counts, "ok": True,
            "verified_points": verified, "sweep_box": M, "scanned": scanned,
            "seconds_F": tF, "seconds_E": tE}


def _quadric_points_small(quad, M):
    """Canonical quadric points with ``max |u| <= M`` as ProjectivePoints over E."""
    Q = quad.ext.E
    out = []
    for cols in quadric_point_chunks(quad, M):
        for row in zip(*cols):
            out.append(ProjectivePoint([Q(int(t)) for t in row], Q))
    return out
