"""Sparse multivariate polynomials with number-field coefficients.

A polynomial is a dict ``exponent tuple -> FieldElement`` over a fixed
:class:`NumberField`.  Only what the compiler, the height machine and the
density code need is implemented: ring operations, evaluation, partial
derivatives, homogeneity checks and a sympy-based parser.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np
import sympy

from .nfcore import FieldElement, NumberField, rationals


class Polynomial:
    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: NumberField, nvars: int, terms=None):
        self.field = field
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} does not match {nvars} variables")
            c = field(c)
            if not c.is_zero():
                clean[e] = clean[e] + c if e in clean else c
                if clean[e].is_zero():
                    del clean[e]
        self.terms = clean

    # -- constructors --------------------------------------------------------
    @classmethod
    def constant(cls, field, nvars, c):
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, field, nvars, j):
        e = [0] * nvars
        e[j] = 1
        return cls(field, nvars, {tuple(e): 1})

    @classmethod
    def parse(cls, text, variables, field=None, theta="t"):
        """Parse ``text`` (sympy syntax); the symbol ``theta`` denotes the field generator."""
        field = field or rationals()
        syms = sympy.symbols(list(variables))
        if not isinstance(syms, (list, tuple)):
            syms = [syms]
        th = sympy.Symbol(theta)
        local = {str(s): s for s in syms}
        local[theta] = th
        expr = sympy.sympify(text, locals=local)
        if isinstance(expr, sympy.Equality):
            expr = expr.lhs - expr.rhs
        poly = sympy.Poly(sympy.expand(expr), *syms, th, domain="QQ")
        gen = field.gen
        n = len(syms)
        terms = {}
        for mon, c in poly.terms():
            e, k = mon[:n], mon[n]
            val = field(Fraction(int(c.p), int(c.q))) * gen ** k
            terms[e] = terms[e] + val if e in terms else val
        return cls(field, n, terms)

    # -- arithmetic ----------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(self.field, self.nvars, other)

    def __add__(self, other):
        o = self._lift(other)
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t[e] + c if e in t else c
        return Polynomial(self.field, self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.field, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                t[e] = t[e] + v if e in t else v
        return Polynomial(self.field, self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, k):
        r = Polynomial.constant(self.field, self.nvars, 1)
        for _ in range(k):
            r = r * self
        return r

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def is_zero(self):
        return not self.terms

    # -- structure -----------------------------------------------------------
    def total_degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def block_degrees(self, blocks):
        """Set of degree vectors per variable block (``blocks`` = block sizes)."""
        out = set()
        for e in self.terms:
            degs, i = [], 0
            for b in blocks:
                degs.append(sum(e[i:i + b]))
                i += b
            out.add(tuple(degs))
        return out

    def is_homogeneous(self, blocks=None):
        blocks = blocks or [self.nvars]
        return len(self.block_degrees(blocks)) <= 1

    def derivative(self, j):
        t = {}
        for e, c in self.terms.items():
            if e[j]:
                f = list(e)
                f[j] -= 1
                t[tuple(f)] = c * e[j]
        return Polynomial(self.field, self.nvars, t)

    def substitute(self, images, nvars_out):
        """Compose with ``x_j -> images[j]`` (polynomials in ``nvars_out`` variables)."""
        out = Polynomial(self.field, nvars_out)
        cache = {}

        def power(j, k):
            if (j, k) not in cache:
                cache[(j, k)] = images[j] ** k
            return cache[(j, k)]

        for e, c in self.terms.items():
            term = Polynomial.constant(self.field, nvars_out, c)
            for j, k in enumerate(e):
                if k:
                    term = term * power(j, k)
            out = out + term
        return out

    def fix_variable(self, j, value):
        """Substitute a constant for ``x_j`` and drop that variable."""
        value = self.field(value)
        t = {}
        for e, c in self.terms.items():
            v = c * value ** e[j] if e[j] else c
            f = e[:j] + e[j + 1:]
            t[f] = t[f] + v if f in t else v
        return Polynomial(self.field, self.nvars - 1, t)

    def has_rational_coefficients(self):
        return all(_rational_value(c) is not None for c in self.terms.values())

    def rational_terms(self):
        """Terms as ``exp -> Fraction``; raises if some coefficient is irrational."""
        out = {}
        for e, c in self.terms.items():
            q = _rational_value(c)
            if q is None:
                raise ValueError("coefficient not in Q")
            out[e] = q
        return out

    # -- evaluation ----------------------------------------------------------
    def __call__(self, point):
        F = self.field
        pt = [F(x) for x in point]
        if len(pt) != self.nvars:
            raise ValueError("wrong number of coordinates")
        acc = F.zero
        for e, c in self.terms.items():
            term = c
            for x, k in zip(pt, e):
                if k:
                    term = term * x ** k
            acc = acc + term
        return acc

    def eval_int_numpy(self, cols):
        """Evaluate a Q-polynomial with integer coefficients on integer arrays."""
        acc = None
        for e, c in self.rational_terms().items():
            if c.denominator != 1:
                raise ValueError("integer coefficients required")
            term = np.full(np.shape(cols[0]), int(c), dtype=np.int64) if not any(e) else int(c)
            for x, k in zip(cols, e):
                if k:
                    term = term * x ** k
            acc = term if acc is None else acc + term
        if acc is None:
            return np.zeros(np.shape(cols[0]), dtype=np.int64)
        return acc

    def eval_mod(self, cols, modulus):
        """Evaluate a Q-polynomial with p-integral coefficients on integer arrays mod ``modulus``."""
        acc = np.zeros(np.shape(cols[0]), dtype=np.int64)
        for e, c in self.rational_terms().items():
            cm = c.numerator * pow(c.denominator, -1, modulus) % modulus
            term = np.full(np.shape(cols[0]), cm, dtype=np.int64)
            for x, k in zip(cols, e):
                for _ in range(k):
                    term = term * x % modulus
            acc = (acc + term) % modulus
        return acc

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mon = "*".join(f"x{j}^{k}" if k > 1 else f"x{j}" for j, k in enumerate(e) if k)
            parts.append(f"{c}" + (f"*{mon}" if mon else ""))
        return " + ".join(parts)


def _rational_value(c: FieldElement):
    """Return ``c`` as a Fraction if it lies in Q, else None."""
    F = c.field
    if F.degree == 1:
        return c.coords[0] * F.basis[0][0]
    pw = F._to_power(c.coords)
    if any(pw[1:]):
        return None
    return pw[0]


def change_field(poly: Polynomial, field: NumberField):
    """Reinterpret a polynomial with rational coefficients over another field."""
    return Polynomial(field, poly.nvars, {e: field(q) for e, q in poly.rational_terms().items()})
