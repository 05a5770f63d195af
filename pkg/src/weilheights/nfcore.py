"""Exact arithmetic in number fields of small degree.

A field is given by a monic minimal polynomial (coefficients listed constant
term first) and an integral basis written in powers of the root ``theta``.
Elements are coordinate vectors of ``Fraction`` in that basis, ideals are row
HNF matrices of their Z-basis in the same coordinates.

Absolute values follow the normalisation ``|x|_v = |N_{F_v/Q_p}(x)|_p``: a
complex place returns the *square* of the usual modulus.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, pi, prod, sqrt

import mpmath
import sympy
from sympy import Poly, Symbol, factorint, primerange

from .errors import (
    AllZero,
    DomainError,
    IndexDivisor,
    InconsistentBasis,
    ReduciblePolynomial,
    UnsupportedField,
    ZeroAtFinitePlace,
    ZeroIdeal,
)
from .intlinalg import det, hnf, solve

_X = Symbol("x")

DEFAULT_PREC = 128


def _polymulmod(a, b, mod):
    """Multiply ascending coefficient lists modulo a monic ``mod``."""
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    d = len(mod) - 1
    for k in range(len(out) - 1, d - 1, -1):
        c = out[k]
        if c:
            for t in range(d + 1):
                out[k - d + t] -= c * mod[t]
    out = out[:d] + [Fraction(0)] * max(0, d - len(out))
    return out


class NumberField:
    """A number field with a chosen integral basis.

    ``class_number`` and ``roots_of_unity`` are asserted by the caller; every
    other invariant (commutative/associative multiplication table, closure of
    the basis, discriminant, signature) is checked or derived here.
    """

    def __init__(self, minpoly, basis=None, class_number=1, roots_of_unity=2, name=None):
        mp = [int(c) for c in minpoly]
        if len(mp) < 2 or mp[-1] != 1:
            raise ReduciblePolynomial("minimal polynomial must be monic of degree >= 1")
        d = len(mp) - 1
        if d > 1 and not Poly(list(reversed(mp)), _X, domain="QQ").is_irreducible:
            raise ReduciblePolynomial(f"{mp} is reducible over Q")
        if basis is None:
            basis = [[int(i == j) for j in range(d)] for i in range(d)]
        B = [[Fraction(c) for c in row] for row in basis]
        if len(B) != d or any(len(r) != d for r in B):
            raise InconsistentBasis("basis must consist of d vectors of length d")
        if det(B) == 0:
            raise InconsistentBasis("basis vectors are linearly dependent")
        self.minpoly = tuple(mp)
        self.degree = d
        self.basis = tuple(tuple(r) for r in B)
        self.class_number = int(class_number)
        self.roots_of_unity = int(roots_of_unity)
        self.name = name or f"Q[x]/({self._poly_str()})"
        self._binv_t = None
        self._mult_table = self._build_table()
        self._check_table()
        self.discriminant = int(det([[self._trace_coords(self._mul_coords(self._unit(i), self._unit(j)))
                                      for j in range(d)] for i in range(d)]))
        self.r1 = Poly(list(reversed(mp)), _X).count_roots() if d > 1 else 1
        if (d - self.r1) % 2:
            raise InconsistentBasis("odd number of non-real roots")
        self.r2 = (d - self.r1) // 2
        self._embed_cache = {}
        self._prime_cache = {}

    # -- construction helpers ------------------------------------------------
    def _poly_str(self):
        return " + ".join(f"{c}*x^{i}" for i, c in enumerate(self.minpoly) if c)

    def _unit(self, i):
        return tuple(Fraction(int(i == j)) for j in range(self.degree))

    def _to_power(self, coords):
        d = self.degree
        return [sum(coords[i] * self.basis[i][k] for i in range(d)) for k in range(d)]

    def _from_power(self, pw):
        d = self.degree
        if self._binv_t is None:
            Bt = [[self.basis[i][k] for i in range(d)] for k in range(d)]
            self._binv_t = Bt
        x = solve(self._binv_t, list(pw))
        return tuple(x)

    def _build_table(self):
        d = self.degree
        mod = [Fraction(c) for c in self.minpoly]
        table = []
        for i in range(d):
            row = []
            for j in range(d):
                pw = _polymulmod(list(self.basis[i]), list(self.basis[j]), mod)
                c = self._from_power(pw)
                if any(x.denominator != 1 for x in c):
                    raise InconsistentBasis("basis is not closed under multiplication")
                row.append(tuple(int(x) for x in c))
            table.append(tuple(row))
        return tuple(table)

    def _check_table(self):
        d = self.degree
        T = self._mult_table
        for i in range(d):
            for j in range(d):
                if T[i][j] != T[j][i]:
                    raise InconsistentBasis("multiplication table not commutative")
                for k in range(d):
                    lhs = self._mul_coords(self._mul_coords(self._unit(i), self._unit(j)), self._unit(k))
                    rhs = self._mul_coords(self._unit(i), self._mul_coords(self._unit(j), self._unit(k)))
                    if lhs != rhs:
                        raise InconsistentBasis("multiplication table not associative")
        one = self._from_power([Fraction(int(k == 0)) for k in range(d)])
        if any(x.denominator != 1 for x in one):
            raise InconsistentBasis("1 is not in the span of the basis")

    @property
    def mult_table(self):
        return self._mult_table

    def _mul_coords(self, a, b):
        d = self.degree
        out = [Fraction(0)] * d
        T = self._mult_table
        for i in range(d):
            ai = a[i]
            if not ai:
                continue
            for j in range(d):
                bj = b[j]
                if not bj:
                    continue
                c = ai * bj
                for k, t in enumerate(T[i][j]):
                    if t:
                        out[k] += c * t
        return tuple(out)

    def _mult_matrix(self, coords):
        """Matrix of multiplication by ``coords``: row j = coords * b_j."""
        return [list(self._mul_coords(coords, self._unit(j))) for j in range(self.degree)]

    def _trace_coords(self, coords):
        M = self._mult_matrix(coords)
        return sum(M[j][j] for j in range(self.degree))

    # -- element constructors ------------------------------------------------
    def __call__(self, value):
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise ValueError("element of another field")
            return value
        if isinstance(value, (list, tuple)):
            if len(value) != self.degree:
                raise ValueError("wrong number of coordinates")
            return FieldElement(self, tuple(Fraction(v) for v in value))
        q = Fraction(value)
        return FieldElement(self, tuple(q * c for c in self.one.coords))

    @property
    def one(self):
        return FieldElement(self, self._from_power([Fraction(int(k == 0)) for k in range(self.degree)]))

    @property
    def zero(self):
        return FieldElement(self, tuple(Fraction(0) for _ in range(self.degree)))

    @property
    def gen(self):
        """The root ``theta`` of the minimal polynomial."""
        if self.degree == 1:
            return self(-self.minpoly[0])
        return FieldElement(self, self._from_power([Fraction(int(k == 1)) for k in range(self.degree)]))

    def basis_element(self, i):
        return FieldElement(self, self._unit(i))

    # -- structure -----------------------------------------------------------
    @property
    def signature(self):
        return (self.r1, self.r2)

    @property
    def is_rational(self):
        return self.degree == 1

    @property
    def is_imaginary_quadratic(self):
        return self.degree == 2 and self.r2 == 1

    def polynomial_index(self):
        """Index of ``Z[theta]`` in the order spanned by the basis."""
        if self.degree == 1:
            return 1
        pd = int(sympy.discriminant(Poly(list(reversed(self.minpoly)), _X)))
        q = Fraction(pd, self.discriminant)
        r = isqrt(int(abs(q)))
        if q.denominator != 1 or r * r != abs(q):
            raise InconsistentBasis("basis does not contain Z[theta]")
        return r

    def embeddings(self, prec=DEFAULT_PREC):
        """Images of ``theta``: the r1 real roots, then one root per complex pair (Im > 0)."""
        if prec in self._embed_cache:
            return self._embed_cache[prec]
        with mpmath.workprec(prec + 32):
            roots = mpmath.polyroots(list(reversed(self.minpoly)), maxsteps=200, extraprec=2 * prec)
            roots = sorted(roots, key=lambda z: (abs(mpmath.im(z)), mpmath.re(z)))
            real = [mpmath.mpf(mpmath.re(z)) for z in roots[: self.r1]]
            cplx = [z if mpmath.im(z) > 0 else mpmath.conj(z) for z in roots[self.r1:]][::2]
            cplx = sorted(cplx, key=lambda z: (mpmath.re(z), mpmath.im(z)))
        out = tuple(real) + tuple(cplx)
        self._embed_cache[prec] = out
        return out

    def archimedean_places(self):
        return [Place("real", index=i) for i in range(self.r1)] + \
               [Place("complex", index=self.r1 + j) for j in range(self.r2)]

    def places_above(self, p):
        return factor_rational_prime(p, self)

    def quadratic_data(self):
        """``(c0, c1)`` with ``theta^2 = -c1*theta - c0`` for power-basis quadratic fields."""
        if self.degree != 2 or self.basis != ((1, 0), (0, 1)):
            raise UnsupportedField("needs a quadratic field with power basis {1, theta}")
        return self.minpoly[0], self.minpoly[1]

    def units(self):
        """All roots of unity (the whole unit group for Q and imaginary quadratic fields)."""
        if self.degree == 1:
            return [self(1), self(-1)]
        if not self.is_imaginary_quadratic:
            raise UnsupportedField("unit group only available for Q and imaginary quadratic fields")
        out = []
        for a in range(-2, 3):
            for b in range(-2, 3):
                z = self([a, b])
                if z.is_integral() and z.norm() == 1:
                    out.append(z)
        if len(out) != self.roots_of_unity:
            raise InconsistentBasis(f"asserted w={self.roots_of_unity} but found {len(out)} units")
        return out

    def __repr__(self):
        return f"NumberField({self.name}, d={self.degree}, disc={self.discriminant})"

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly and self.basis == other.basis

    def __hash__(self):
        return hash((self.minpoly, self.basis))

    def __reduce__(self):
        return (NumberField, (self.minpoly, [list(r) for r in self.basis], self.class_number,
                              self.roots_of_unity, self.name))


def field_from_minpoly(coeffs, integral_basis=None, class_number=1, roots_of_unity=2, name=None):
    """Build a :class:`NumberField`; all structural invariants are verified."""
    return NumberField(coeffs, integral_basis, class_number, roots_of_unity, name)


@lru_cache(maxsize=None)
def rationals():
    return NumberField((0, 1), None, 1, 2, "Q")


@lru_cache(maxsize=None)
def gaussian():
    return NumberField((1, 0, 1), None, 1, 4, "Q(i)")


@lru_cache(maxsize=None)
def eisenstein():
    return NumberField((1, 1, 1), None, 1, 6, "Q(sqrt(-3))")


BUILTIN_FIELDS = {"Q": rationals, "Q(i)": gaussian, "Q(sqrt(-3))": eisenstein}


def builtin_field(name):
    aliases = {"QQ": "Q", "Qi": "Q(i)", "Q(sqrt-1)": "Q(i)", "Q(sqrt(-1))": "Q(i)",
               "Q(sqrt-3)": "Q(sqrt(-3))", "Qw": "Q(sqrt(-3))", "Q(zeta3)": "Q(sqrt(-3))"}
    key = aliases.get(name, name)
    if key not in BUILTIN_FIELDS:
        raise UnsupportedField(f"unknown built-in field {name!r}")
    return BUILTIN_FIELDS[key]()


class FieldElement:
    """Immutable element of a :class:`NumberField` in integral-basis coordinates."""

    __slots__ = ("field", "coords", "_hash")

    def __init__(self, field, coords):
        self.field = field
        self.coords = coords
        self._hash = None

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field._mul_coords(self.coords, o.coords))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        F = self.field
        M = F._mult_matrix(self.coords)
        # x * y = 1  <=>  sum_j y_j (x*b_j) = 1
        Mt = [[M[j][k] for j in range(F.degree)] for k in range(F.degree)]
        return FieldElement(F, tuple(solve(Mt, list(F.one.coords))))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.field(other) * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        r = self.field.one
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.coords == self.field(other).coords
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coords)
        return self._hash

    def __repr__(self):
        if self.field.degree == 1:
            return str(self.coords[0])
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def is_zero(self):
        return not any(self.coords)

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coords)

    def denominator(self):
        den = 1
        for c in self.coords:
            den = den * c.denominator // gcd(den, c.denominator)
        return den

    def norm(self):
        return det(self.field._mult_matrix(self.coords))

    def trace(self):
        return self.field._trace_coords(self.coords)

    def conjugate(self):
        """Non-trivial automorphism of a quadratic field (identity on Q)."""
        F = self.field
        if F.degree == 1:
            return self
        if F.degree != 2:
            raise UnsupportedField("conjugation needs a quadratic field")
        a, b = F._to_power(self.coords)
        c1 = F.minpoly[1]
        return FieldElement(F, F._from_power([a - b * c1, -b]))

    def power_coords(self):
        return tuple(self.field._to_power(self.coords))

    def embed(self, k, prec=DEFAULT_PREC):
        """Image under the k-th embedding (real places first)."""
        roots = self.field.embeddings(prec)
        pw = self.power_coords()
        with mpmath.workprec(prec + 32):
            z = mpmath.mpf(0)
            t = mpmath.mpf(1)
            for c in pw:
                z += mpmath.mpf(c.numerator) / c.denominator * t
                t *= roots[k]
        return z


# ---------------------------------------------------------------------------
# ideals

class IdealZ:
    """Fractional-free integral ideal stored as its row HNF (d x d)."""

    __slots__ = ("field", "hnf")

    def __init__(self, field, rows):
        self.field = field
        self.hnf = tuple(tuple(int(x) for x in r) for r in rows)

    @classmethod
    def from_generators(cls, field, gens):
        rows = []
        for g in gens:
            g = field(g)
            if not g.is_integral():
                raise ValueError("ideal generators must be integral")
            for j in range(field.degree):
                rows.append([int(c) for c in field._mul_coords(g.coords, field._unit(j))])
        H = hnf(rows)
        if len(H) < field.degree:
            raise ZeroIdeal("generators span the zero ideal")
        return cls(field, H)

    @classmethod
    def unit(cls, field):
        return cls(field, [[int(i == j) for j in range(field.degree)] for i in range(field.degree)])

    def norm(self):
        return abs(prod(self.hnf[i][i] for i in range(self.field.degree)))

    def contains(self, x):
        x = self.field(x)
        if not x.is_integral():
            return False
        v = [int(c) for c in x.coords]
        for i, row in enumerate(self.hnf):
            piv = row[i]
            if v[i] % piv:
                return False
            q = v[i] // piv
            v = [a - q * b for a, b in zip(v, row)]
        return not any(v)

    def contains_ideal(self, other):
        return all(self.contains(FieldElement(self.field, tuple(Fraction(c) for c in row)))
                   for row in other.hnf)

    def elements(self):
        return [FieldElement(self.field, tuple(Fraction(c) for c in row)) for row in self.hnf]

    def __mul__(self, other):
        gens = []
        F = self.field
        rows = []
        for a in self.hnf:
            for b in other.hnf:
                rows.append([int(c) for c in F._mul_coords(tuple(map(Fraction, a)), tuple(map(Fraction, b)))])
        del gens
        return IdealZ(F, hnf(rows))

    def __pow__(self, e):
        r = IdealZ.unit(self.field)
        for _ in range(e):
            r = r * self
        return r

    def __eq__(self, other):
        return isinstance(other, IdealZ) and self.field == other.field and self.hnf == other.hnf

    def __hash__(self):
        return hash(self.hnf)

    def __repr__(self):
        return f"IdealZ(norm={self.norm()}, hnf={self.hnf})"


# ---------------------------------------------------------------------------
# places

@dataclass(frozen=True)
class Place:
    """An archimedean place (``real``/``complex`` with embedding index) or a
    finite place above ``p`` given by its prime ideal."""

    kind: str
    index: int = 0
    p: int = 0
    e: int = 1
    f: int = 1
    ideal: IdealZ | None = None
    uniformizer: FieldElement | None = None

    @property
    def is_archimedean(self):
        return self.kind in ("real", "complex")

    @property
    def residue_cardinality(self):
        return self.p ** self.f

    def __repr__(self):
        if self.is_archimedean:
            return f"Place({self.kind}, {self.index})"
        return f"Place(p={self.p}, e={self.e}, f={self.f})"


def _poly_from_sympy(fac, p):
    coeffs = [int(c) % p for c in reversed(fac.all_coeffs())]
    return coeffs


def factor_rational_prime(p, F):
    """Prime ideals above ``p`` via Kummer-Dedekind on the minimal polynomial.

    Valid whenever ``p`` does not divide the index of ``Z[theta]`` in the
    supplied order; otherwise :class:`IndexDivisor` is raised.
    """
    if p in F._prime_cache:
        return F._prime_cache[p]
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    if F.degree == 1:
        ideal = IdealZ(F, [[p]])
        out = [Place("finite", p=p, e=1, f=1, ideal=ideal, uniformizer=F(p))]
        F._prime_cache[p] = out
        return out
    if F.polynomial_index() % p == 0:
        raise IndexDivisor(f"{p} divides the index of Z[theta]; supply the factorisation explicitly")
    poly = Poly(list(reversed(F.minpoly)), _X, modulus=p)
    _, facs = poly.factor_list()
    theta = F.gen
    out = []
    for fac, e in facs:
        g = _poly_from_sympy(fac, p)
        gt = F.zero
        t = F.one
        for c in g:
            gt = gt + c * t
            t = t * theta
        ideal = IdealZ.from_generators(F, [F(p), gt])
        f = len(g) - 1
        out.append(Place("finite", p=p, e=e, f=f, ideal=ideal, uniformizer=None))
    # uniformisers: an element of P \ P^2
    fixed = []
    for pl in out:
        P2 = pl.ideal * pl.ideal
        pi_ = next(x for x in list(pl.ideal.elements()) + [x + y for x in pl.ideal.elements()
                                                          for y in pl.ideal.elements()]
                   if not P2.contains(x))
        fixed.append(Place("finite", p=p, e=pl.e, f=pl.f, ideal=pl.ideal, uniformizer=pi_))
    fixed.sort(key=lambda pl: (pl.f, pl.e, pl.ideal.hnf))
    if sum(pl.e * pl.f for pl in fixed) != F.degree:
        raise InconsistentBasis("sum of e*f differs from the degree")
    F._prime_cache[p] = fixed
    return fixed


def splitting_type(p, F):
    """Sorted list of ``(e, f)`` above ``p``; a fast path for quadratic fields."""
    if F.degree == 1:
        return [(1, 1)]
    if F.degree == 2 and p != 2 and F.discriminant % p != 0:
        return [(1, 1), (1, 1)] if sympy.jacobi_symbol(F.discriminant % p, p) == 1 else [(1, 2)]
    return sorted((pl.e, pl.f) for pl in factor_rational_prime(p, F))


def _ideal_power(place, k):
    F = place.ideal.field
    cache = F._prime_cache.setdefault(("pow", place.ideal.hnf), [IdealZ.unit(F)])
    while len(cache) <= k:
        cache.append(cache[-1] * place.ideal)
    return cache[k]


def valuation(x, place):
    """``ord_P(x)`` for a nonzero element at a finite place."""
    F = place.ideal.field
    x = F(x)
    if x.is_zero():
        raise ZeroAtFinitePlace("valuation of zero")
    D = x.denominator()
    y = x * D
    vD = 0
    while D % place.p == 0:
        D //= place.p
        vD += 1
    n = abs(y.norm())
    vmax = 0
    while n % place.p == 0:
        n //= place.p
        vmax += 1
    k = 0
    while k < vmax // place.f and _ideal_power(place, k + 1).contains(y):
        k += 1
    return k - place.e * vD


def ideal_valuation(a, place):
    k = 0
    while _ideal_power(place, k + 1).contains_ideal(a):
        k += 1
    return k


def absolute_value(x, v, prec=DEFAULT_PREC):
    """Normalised absolute value ``|x|_v``.

    Exact (``Fraction``) at finite places and wherever the archimedean value is
    rational (real place of Q, complex place of a quadratic field, where it
    equals the norm); otherwise an ``mpmath`` number at ``prec`` bits.
    """
    if v.is_archimedean:
        return archimedean_absolute_value(x, v, prec)
    x = v.ideal.field(x)
    if x.is_zero():
        raise ZeroAtFinitePlace("|0|_v at a finite place")
    return Fraction(v.p) ** (-v.f * valuation(x, v))


def archimedean_absolute_value(x, v, prec=DEFAULT_PREC):
    F = x.field
    if v.kind == "real":
        if F.degree == 1:
            return abs(x.coords[0] * F.basis[0][0])
        with mpmath.workprec(prec):
            return abs(x.embed(v.index, prec))
    if v.kind == "complex":
        if F.degree == 2:
            return abs(x.norm())
        with mpmath.workprec(prec):
            z = x.embed(v.index, prec)
            return mpmath.re(z) ** 2 + mpmath.im(z) ** 2
    raise ValueError(f"not archimedean: {v}")


def nonzero_valuation_places(x):
    """Finite places where ``x`` has nonzero valuation."""
    F = x.field
    D = x.denominator()
    y = x * D
    n = abs(y.norm())
    primes = set(factorint(int(n)).keys()) | set(factorint(D).keys())
    out = []
    for p in sorted(primes):
        for pl in factor_rational_prime(p, F):
            if valuation(x, pl) != 0:
                out.append(pl)
    return out


def content_ideal(coords):
    """Integral ideal generated by a scaled copy of ``coords`` and the scale factor."""
    coords = list(coords)
    if not coords:
        raise AllZero("empty coordinate list")
    F = coords[0].field
    if all(c.is_zero() for c in coords):
        raise AllZero("all coordinates vanish")
    D = 1
    for c in coords:
        den = c.denominator()
        D = D * den // gcd(D, den)
    return IdealZ.from_generators(F, [c * D for c in coords if not c.is_zero()]), D


def content_ideal_norm(coords):
    """Norm of the fractional ideal generated by ``coords`` (an integer for integral input)."""
    I, D = content_ideal(coords)
    F = I.field
    val = Fraction(I.norm(), D ** F.degree)
    return int(val) if val.denominator == 1 else val


def content_norm_quadratic(a0, b0, a1, b1, c0, c1):
    """Vectorised norm of the ideal ``(x0, x1)`` in a quadratic power-basis order.

    ``x_k = a_k + b_k*theta`` with ``theta^2 = -c1*theta - c0``; arguments may
    be numpy integer arrays.  The ideal's Z-lattice is spanned by
    ``x0, x0*theta, x1, x1*theta``; its index in ``Z^2`` is the gcd of all 2x2
    minors of those four vectors.
    """
    import numpy as np

    def times_theta(a, b):
        return -b * c0, a - b * c1

    v = [(a0, b0), times_theta(a0, b0), (a1, b1), times_theta(a1, b1)]
    g = None
    for i in range(4):
        for j in range(i + 1, 4):
            m = v[i][0] * v[j][1] - v[i][1] * v[j][0]
            g = np.abs(m) if g is None else np.gcd(g, m)
    return g


def moebius_ideal(a, F=None):
    """Moebius function of a nonzero integral ideal."""
    F = F or a.field
    n = a.norm()
    if n == 0:
        raise ZeroIdeal("zero ideal")
    mu = 1
    for p, k in factorint(n).items():
        seen = 0
        for pl in factor_rational_prime(p, F):
            v = ideal_valuation(a, pl)
            if v >= 2:
                return 0
            if v == 1:
                mu = -mu
            seen += v * pl.f
        if seen != k:
            raise InconsistentBasis("ideal factorisation does not account for its norm")
    return mu


def squarefree_ideals(F, bound):
    """All squarefree integral ideals of norm <= bound, with their Moebius values.

    Returns a list of ``(norm, mu, IdealZ)`` sorted by norm then HNF.
    """
    primes = []
    for p in primerange(2, int(bound) + 1):
        for pl in factor_rational_prime(p, F):
            if pl.residue_cardinality <= bound:
                primes.append(pl)
    primes.sort(key=lambda pl: (pl.residue_cardinality, pl.ideal.hnf))
    out = [(1, 1, IdealZ.unit(F))]

    def rec(start, norm, mu, ideal):
        for i in range(start, len(primes)):
            q = primes[i].residue_cardinality
            if norm * q > bound:
                break
            new = ideal * primes[i].ideal
            out.append((norm * q, -mu, new))
            rec(i + 1, norm * q, -mu, new)

    rec(0, 1, 1, IdealZ.unit(F))
    out.sort(key=lambda t: (t[0], t[2].hnf))
    return out


# ---------------------------------------------------------------------------
# zeta

def dedekind_zeta(F, s, prime_cutoff=10**5):
    """Truncated Euler product of ``zeta_F(s)`` and a bound on the truncation error.

    The tail satisfies ``log(zeta/partial) <= d * P^(1-s) / ((s-1)(1-P^-s))``
    which bounds the absolute error by ``partial * (exp(tail) - 1)``.
    """
    if s <= 1:
        raise DomainError("truncated Euler product needs s > 1")
    P = int(prime_cutoff)
    if P < 2:
        raise DomainError("prime cutoff must be >= 2")
    logv = 0.0
    for p in primerange(2, P + 1):
        for e, f in splitting_type(p, F):
            logv -= mpmath.log1p(-mpmath.mpf(p) ** (-f * s))
    partial = float(mpmath.exp(logv))
    tail = F.degree * P ** (1 - s) / ((s - 1) * (1 - P ** (-s)))
    return partial, partial * float(mpmath.expm1(tail))


def residue_at_one(F):
    """Residue of ``zeta_F`` at ``s = 1`` by the class number formula.

    Only Q and imaginary quadratic fields (regulator 1) are supported.
    """
    if F.degree == 1:
        return 1.0
    if F.is_imaginary_quadratic:
        return 2 * pi * F.class_number / (F.roots_of_unity * sqrt(abs(F.discriminant)))
    raise UnsupportedField("residue needs the regulator; only Q and imaginary quadratic fields are built in")


def haar_covolume(F):
    """Volume of ``A_F / F``: Lebesgue at real places, twice Lebesgue at complex ones."""
    return sqrt(abs(F.discriminant))


# ---------------------------------------------------------------------------
# Euclidean gcd in norm-Euclidean imaginary quadratic orders and Z

def _round_div(n, d):
    """Nearest integer to n/d (ties toward +inf), exact."""
    return (2 * n + d) // (2 * d)


def element_gcd(x, y):
    """A generator of the ideal ``(x, y)`` for integral x, y (Euclid)."""
    F = x.field
    if F.degree == 1:
        return F(gcd(int(x.coords[0]), int(y.coords[0])))
    c0, c1 = F.quadratic_data()
    if (c0, c1) not in ((1, 0), (1, 1), (2, 0), (2, 1), (3, 1)):
        raise UnsupportedField("Euclidean gcd only for norm-Euclidean imaginary quadratic fields")
    a, b = x, y
    while not b.is_zero():
        n = b.norm()
        q_num = a * b.conjugate()
        q = F([_round_div(int(q_num.coords[0]), int(n)), _round_div(int(q_num.coords[1]), int(n))])
        a, b = b, a - q * b
    return a
