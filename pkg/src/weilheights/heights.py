"""Heights of projective points with adelic max-type metrics.

``H(x) = prod_{v | inf} ||sigma_v x||_v / N(content ideal of x)``

Finite places always carry the max norm, which is why the whole finite part
collapses to the norm of the content ideal.  At a complex place the norm is
squared (the normalisation of ``absolute_value``).  Heights are relative: no
``1/[F:Q]`` root is taken.

Over Q and imaginary quadratic fields the archimedean part is rational for
max and matrix norms and has a rational square for the euclidean norm, so
height comparisons are decided exactly.  Elsewhere we compare at increasing
precision and give up with ``PrecisionExhausted``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd

import mpmath

from .errors import AllZero, IndeterminacyPoint, PrecisionExhausted, UnsupportedField
from .nfcore import (
    DEFAULT_PREC,
    FieldElement,
    NumberField,
    content_ideal_norm,
    element_gcd,
)

MAX_PREC = 4096


@dataclass(frozen=True)
class ArchNorm:
    """Norm at one archimedean place: ``max``, ``euclidean`` or ``matrix`` (max after M)."""

    kind: str = "max"
    matrix: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("max", "euclidean", "matrix"):
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind == "matrix":
            from .intlinalg import det
            M = tuple(tuple(Fraction(x) for x in row) for row in self.matrix)
            object.__setattr__(self, "matrix", M)
            if len(M) != len(M[0]) or det(M) == 0:
                raise ValueError("matrix norm needs an invertible square matrix")


MAX = ArchNorm("max")


@dataclass(frozen=True)
class MetrizedBundle:
    """``O(d_1, ..., d_k)`` on ``P^{n_1} x ... x P^{n_k}`` with archimedean norm descriptors.

    ``norms`` lists one descriptor per archimedean place (empty = max
    everywhere); the same descriptor is used on every factor.
    """

    ambient: tuple = (1,)
    degree: tuple = (1,)
    norms: tuple = dc_field(default_factory=tuple)

    def __post_init__(self):
        amb = (self.ambient,) if isinstance(self.ambient, int) else tuple(self.ambient)
        deg = (self.degree,) if isinstance(self.degree, int) else tuple(self.degree)
        if len(amb) != len(deg):
            raise ValueError("degree must have one entry per projective factor")
        object.__setattr__(self, "ambient", amb)
        object.__setattr__(self, "degree", deg)
        object.__setattr__(self, "norms", tuple(self.norms))
        for nm in self.norms:
            if nm.kind == "matrix" and any(len(nm.matrix) != n + 1 for n in amb):
                raise ValueError("matrix norm size must match the ambient")

    def norm_at(self, i):
        return self.norms[i] if i < len(self.norms) else MAX

    def tensor(self, other):
        if self.ambient != other.ambient or self.norms != other.norms:
            raise ValueError("tensor product needs a shared ambient and metric")
        return MetrizedBundle(self.ambient, tuple(a + b for a, b in zip(self.degree, other.degree)), self.norms)

    def dual(self):
        return MetrizedBundle(self.ambient, tuple(-a for a in self.degree), self.norms)

    def power(self, k):
        return MetrizedBundle(self.ambient, tuple(k * a for a in self.degree), self.norms)

    @property
    def is_max(self):
        return all(nm.kind == "max" for nm in self.norms)


def O(n=1, degree=1, norms=()):
    """Shorthand for ``O(degree)`` on ``P^n``."""
    return MetrizedBundle((n,), (degree,), tuple(norms))


# ---------------------------------------------------------------------------
# canonical representatives

def _canonical_unit_exponent_ok(z: FieldElement):
    """Is ``z`` in the canonical sector (argument in ``[0, 2 pi / w)``)?"""
    F = z.field
    if F.degree == 1:
        return z.coords[0] > 0
    a, b = z.power_coords()
    w = F.roots_of_unity
    c0, c1 = F.minpoly[0], F.minpoly[1]
    if w == 2:
        return b > 0 or (b == 0 and a > 0)
    if w == 4 and (c0, c1) == (1, 0):
        return a > 0 and b >= 0
    if w == 6 and (c0, c1) == (1, 1):
        return 0 <= b < a
    raise UnsupportedField("canonical sector only implemented for Q, Q(i), Q(sqrt(-3)) and w = 2")


def canonical_coords(coords):
    """Integral coprime representative with the leading coordinate in the canonical sector.

    Requires class number one (and, for degree 2, a norm-Euclidean field).
    """
    coords = list(coords)
    F = coords[0].field
    if all(c.is_zero() for c in coords):
        raise AllZero("all coordinates vanish")
    if F.class_number != 1:
        raise UnsupportedField("canonical representatives need class number one")
    den = 1
    for c in coords:
        d = c.denominator()
        den = den * d // gcd(den, d)
    coords = [c * den for c in coords]
    if F.degree == 1:
        g = 0
        for c in coords:
            g = gcd(g, int(c.coords[0]))
        coords = [F(Fraction(int(c.coords[0]) // g)) for c in coords]
    else:
        if not F.is_imaginary_quadratic:
            raise UnsupportedField("canonical representatives only over Q and imaginary quadratic fields")
        g = F.zero
        for c in coords:
            g = element_gcd(g, c) if not g.is_zero() else c
        ginv = g.inverse()
        coords = [c * ginv for c in coords]
    lead = next(c for c in coords if not c.is_zero())
    for u in F.units():
        if _canonical_unit_exponent_ok(lead * u):
            return tuple(c * u for c in coords)
    raise UnsupportedField("no unit moves the leading coordinate into the canonical sector")


class ProjectivePoint:
    """Point of ``P^n(F)``; equality and hashing go through the canonical representative."""

    __slots__ = ("field", "coords", "_canon")

    def __init__(self, coords, field: NumberField | None = None):
        if field is None:
            field = next(c.field for c in coords if isinstance(c, FieldElement))
        self.field = field
        self.coords = tuple(field(c) for c in coords)
        if all(c.is_zero() for c in self.coords):
            raise AllZero("projective point with all coordinates zero")
        self._canon = None

    @property
    def n(self):
        return len(self.coords) - 1

    def canonical(self):
        if self._canon is None:
            self._canon = ProjectivePoint.__new__(ProjectivePoint)
            self._canon.field = self.field
            self._canon.coords = canonical_coords(self.coords)
            self._canon._canon = self._canon
        return self._canon

    def scaled(self, lam):
        return ProjectivePoint([c * lam for c in self.coords], self.field)

    def __eq__(self, other):
        return isinstance(other, ProjectivePoint) and self.canonical().coords == other.canonical().coords

    def __hash__(self):
        return hash(self.canonical().coords)

    def __repr__(self):
        return "(" + " : ".join(repr(c) for c in self.coords) + ")"


def _as_point(x, field=None):
    if isinstance(x, ProjectivePoint):
        return x
    return ProjectivePoint(x, field)


# ---------------------------------------------------------------------------
# archimedean parts

def _exact_arch(coords, norm: ArchNorm, F, place_kind):
    """Exact ``||sigma x||_v`` (or its square, flagged) when it is rational.

    Returns ``(value, squared)``: ``squared`` means ``value`` is the square
    of the archimedean factor.  ``None`` when not rational.
    """
    if F.degree == 1:
        vals = [c.coords[0] * F.basis[0][0] for c in coords]
        if norm.kind == "matrix":
            vals = [sum(m * v for m, v in zip(row, vals)) for row in norm.matrix]
        if norm.kind == "euclidean":
            return sum(v * v for v in vals), True
        return max(abs(v) for v in vals), False
    if F.degree == 2 and place_kind == "complex":
        if norm.kind == "matrix":
            coords = [sum((c * m for m, c in zip(row, coords)), F.zero) for row in norm.matrix]
        norms = [c.norm() for c in coords]
        if norm.kind == "euclidean":
            return sum(norms), False
        return max(norms), False
    return None


def _float_arch(coords, norm: ArchNorm, place, prec):
    with mpmath.workprec(prec):
        vals = [c.embed(place.index, prec) for c in coords]
        if norm.kind == "matrix":
            vals = [sum(mpmath.mpf(m.numerator) / m.denominator * v for m, v in zip(row, vals))
                    for row in norm.matrix]
        mods = [abs(v) for v in vals]
        if norm.kind == "euclidean":
            r = mpmath.sqrt(sum(m * m for m in mods))
        else:
            r = max(mods)
        return r * r if place.kind == "complex" else r


def _single_height_exact(coords, norms_fn, F):
    """``(H or H^2 as Fraction, exponent)`` or ``None`` if not exactly computable."""
    num = Fraction(1)
    sq = False
    places = F.archimedean_places()
    parts = []
    for i, pl in enumerate(places):
        r = _exact_arch(coords, norms_fn(i), F, pl.kind)
        if r is None:
            return None
        parts.append(r)
    if any(s for _, s in parts):
        sq = True
    for v, s in parts:
        num *= v if (s or not sq) else v * v
    cn = Fraction(content_ideal_norm(coords))
    den = cn * cn if sq else cn
    return num / den, (2 if sq else 1)


def _single_height_float(coords, norms_fn, F, prec):
    with mpmath.workprec(prec):
        num = mpmath.mpf(1)
        for i, pl in enumerate(F.archimedean_places()):
            num *= _float_arch(coords, norms_fn(i), pl, prec)
        cn = Fraction(content_ideal_norm(coords))
        return num * cn.denominator / cn.numerator


def _factors(x, m: MetrizedBundle):
    if len(m.ambient) == 1:
        pts = [x] if not (isinstance(x, tuple) and x and isinstance(x[0], ProjectivePoint)) else list(x)
    else:
        pts = list(x)
    if len(pts) != len(m.ambient):
        raise ValueError("point does not match the multiprojective ambient")
    out = []
    for p, n in zip(pts, m.ambient):
        p = _as_point(p)
        if p.n != n:
            raise ValueError(f"point in P^{p.n} but bundle on P^{n}")
        out.append(p)
    return out


def height_power(x, m: MetrizedBundle):
    """Exact ``(value, e)`` with ``H_L(x)^e = value`` and ``e`` in {1, 2}; None if unavailable."""
    pts = _factors(x, m)
    total = Fraction(1)
    parts = []
    for p, k in zip(pts, m.degree):
        r = _single_height_exact(p.coords, m.norm_at, p.field)
        if r is None:
            return None
        parts.append((r, k))
    e = 2 if any(r[1] == 2 for r, _ in parts) else 1
    for (v, ei), k in parts:
        v = v if ei == e else v * v
        total *= v ** k
    return total, e


def height(x, m: MetrizedBundle | None = None, F: NumberField | None = None, prec=DEFAULT_PREC):
    """``H_L(x)``: a Fraction when exact, otherwise an mpmath number at ``prec`` bits."""
    m = m or MetrizedBundle()
    if F is not None and not isinstance(x, ProjectivePoint) and not (
            isinstance(x, tuple) and x and isinstance(x[0], ProjectivePoint)):
        x = ProjectivePoint(x, F) if len(m.ambient) == 1 else tuple(ProjectivePoint(p, F) for p in x)
    r = height_power(x, m)
    if r is not None:
        v, e = r
        if e == 1:
            return v
        with mpmath.workprec(prec):
            return mpmath.sqrt(mpmath.mpf(v.numerator) / v.denominator)
    return _height_float(x, m, prec)


def _height_float(x, m, prec):
    pts = _factors(x, m)
    with mpmath.workprec(prec):
        tot = mpmath.mpf(1)
        for p, k in zip(pts, m.degree):
            tot *= _single_height_float(p.coords, m.norm_at, p.field, prec) ** k
        return tot


def height_leq(x, m: MetrizedBundle, B, prec=DEFAULT_PREC):
    """Decide ``H_L(x) <= B`` exactly (ties included)."""
    B = Fraction(B)
    r = height_power(x, m)
    if r is not None:
        v, e = r
        return v <= B ** e
    p = prec
    while p <= MAX_PREC:
        h1 = _height_float(x, m, p)
        h2 = _height_float(x, m, 2 * p)
        with mpmath.workprec(2 * p):
            err = 4 * abs(h1 - h2) + abs(h2) * mpmath.ldexp(1, -p)
            diff = h2 - mpmath.mpf(B.numerator) / B.denominator
            if abs(diff) > err:
                return diff < 0
        p *= 2
    raise PrecisionExhausted(f"cannot decide H(x) <= {B} up to {MAX_PREC} bits")


# ---------------------------------------------------------------------------
# derived heights

def pullback_height(f, y, m: MetrizedBundle, F: NumberField | None = None):
    """``H_{f^* L}(y) = H_L(f(y))`` for a polynomial map ``f`` (list of Polynomials)."""
    y = _as_point(y, F)
    image = [fi(y.coords) for fi in f]
    if all(c.is_zero() for c in image):
        raise IndeterminacyPoint(f"map undefined at {y}")
    return height(ProjectivePoint(image, y.field), m)


def height_algebra_check(x, m1: MetrizedBundle, m2: MetrizedBundle):
    """Tensor multiplicativity and dual inversion at ``x``; returns a report dict."""
    h1, h2 = height(x, m1), height(x, m2)
    ht = height(x, m1.tensor(m2))
    hd = height(x, m1.dual())
    exact = all(isinstance(h, Fraction) for h in (h1, h2, ht, hd))
    if exact:
        tensor_ok = ht == h1 * h2
        dual_ok = hd * h1 == 1
    else:
        with mpmath.workprec(DEFAULT_PREC):
            tol = mpmath.ldexp(1, -DEFAULT_PREC // 2)
            tensor_ok = abs(mpmath.mpf(ht) / (mpmath.mpf(h1) * h2) - 1) < tol
            dual_ok = abs(mpmath.mpf(hd) * h1 - 1) < tol
    return {"h1": h1, "h2": h2, "tensor": ht, "dual": hd, "exact": exact,
            "tensor_ok": bool(tensor_ok), "dual_ok": bool(dual_ok), "ok": bool(tensor_ok and dual_ok)}


def restriction_height(y, compiled, m: MetrizedBundle | None = None):
    """Height of an E-point of a compiled restriction: ``H_{Res L}(y) = H_L(p(y))``."""
    x = compiled.point_up(y)
    return height(x, m or MetrizedBundle((len(x.coords) - 1,), (1,)))


def ambient_height_ratio(u, quadric, m: MetrizedBundle | None = None):
    """``log(H_{P^3,E}(u) / H_{Res L}(u))`` for a point ``u`` on the Res P^1 quadric."""
    E = quadric.ext.E
    u = _as_point(u, E)
    hE = height(u, MetrizedBundle((3,), (1,)))
    hF = height(quadric.point_up(u), m or MetrizedBundle((1,), (1,)))
    with mpmath.workprec(DEFAULT_PREC):
        return mpmath.log(mpmath.mpf(hE) / mpmath.mpf(hF)) if not isinstance(hE, Fraction) or not isinstance(hF, Fraction) \
            else mpmath.log(mpmath.mpf(hE.numerator) / hE.denominator) - mpmath.log(mpmath.mpf(hF.numerator) / hF.denominator)
