"""Restriction of scalars for polynomial systems.

Given ``F / E`` with an E-basis ``alpha_1..alpha_d`` of F, every F-variable
``x_j`` is replaced by ``sum_i alpha_i x_{j,i}`` and every polynomial is split
into its d alpha-coordinates.  The resulting E-system has E-points in
bijection with the F-points of the source (the map ``p`` is ``point_up``).

Elements of F are handled as coordinate vectors over E (``RelElement``
tuples) so the compiler only touches the multiplication table.  When
``E = Q`` and the alpha-basis is the integral basis of F these coordinates
coincide with ``FieldElement.coords``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product as iproduct

from .errors import InconsistentExtensionTable, NotOnVariety, NotQuadratic
from .heights import ProjectivePoint
from .intlinalg import det
from .nfcore import FieldElement, NumberField, rationals
from .polys import Polynomial


# ---------------------------------------------------------------------------
# extension data

class ExtensionData:
    """``F`` as a d-dimensional E-algebra: ``alpha_i alpha_j = sum_k T[i][j][k] alpha_k``."""

    def __init__(self, E: NumberField, table, F: NumberField | None = None, names=None):
        self.E = E
        d = len(table)
        self.d = d
        T = [[[E(c) for c in table[i][j]] for j in range(d)] for i in range(d)]
        if any(len(T[i]) != d or any(len(T[i][j]) != d for j in range(d)) for i in range(d)):
            raise InconsistentExtensionTable("table must be d x d x d")
        self.table = T
        self.F = F
        self.names = names or [f"a{i + 1}" for i in range(d)]
        self._check()

    @classmethod
    def over_Q(cls, F: NumberField):
        """``F / Q`` with the integral basis of F as alpha-basis."""
        Q = rationals()
        return cls(Q, [[list(F.mult_table[i][j]) for j in range(F.degree)] for i in range(F.degree)], F)

    @classmethod
    def trivial(cls, E: NumberField):
        return cls(E, [[[1]]], E)

    def _check(self):
        d = self.d
        unit = [[self.E(int(i == k)) for k in range(d)] for i in range(d)]
        for i in range(d):
            for j in range(d):
                if self.mul(unit[i], unit[j]) != self.mul(unit[j], unit[i]):
                    raise InconsistentExtensionTable("table not commutative")
                for k in range(d):
                    if self.mul(self.mul(unit[i], unit[j]), unit[k]) != self.mul(unit[i], self.mul(unit[j], unit[k])):
                        raise InconsistentExtensionTable("table not associative")
        if self.E.degree == 1:
            tr = [[self.trace(self.mul(unit[i], unit[j])).coords[0] for j in range(d)] for i in range(d)]
            if det(tr) == 0:
                raise InconsistentExtensionTable("trace form degenerate: basis dependent or algebra not etale")
        self._one = self._find_one()

    def _find_one(self):
        d = self.d
        # one is the unique e with e * alpha_i = alpha_i; solve linear system over Q when E = Q
        if self.E.degree != 1:
            for i in range(d):
                cand = [self.E(int(k == i)) for k in range(d)]
                if all(self.mul(cand, [self.E(int(k == j)) for k in range(d)]) == [self.E(int(k == j)) for k in range(d)]
                       for j in range(d)):
                    return cand
            raise InconsistentExtensionTable("unit element must be a basis vector for non-rational E")
        from .intlinalg import solve
        # columns: e_i -> e_i * alpha_0
        A = [[self.table[i][0][k].coords[0] for i in range(d)] for k in range(d)]
        x = solve(A, [int(k == 0) for k in range(d)])
        if x is None:
            raise InconsistentExtensionTable("algebra has no unit")
        return [self.E(c) for c in x]

    @property
    def one(self):
        return list(self._one)

    def mul(self, a, b):
        d = self.d
        out = [self.E.zero for _ in range(d)]
        for i in range(d):
            if a[i].is_zero():
                continue
            for j in range(d):
                if b[j].is_zero():
                    continue
                c = a[i] * b[j]
                for k in range(d):
                    t = self.table[i][j][k]
                    if not t.is_zero():
                        out[k] = out[k] + c * t
        return out

    def trace(self, a):
        d = self.d
        acc = self.E.zero
        for j in range(d):
            col = self.mul(a, [self.E(int(k == j)) for k in range(d)])
            acc = acc + col[j]
        return acc

    def to_rel(self, x):
        """F-element -> E-coordinates (E = Q with integral basis, or already a vector)."""
        if isinstance(x, FieldElement) and self.F is not None and x.field == self.F and self.E.degree == 1:
            return [self.E(c) for c in x.coords]
        if isinstance(x, (list, tuple)) and len(x) == self.d:
            return [self.E(c) for c in x]
        if self.F is not None and self.E.degree == 1:
            return [self.E(c) for c in self.F(x).coords]
        raise TypeError("cannot interpret value as an F-element")

    def from_rel(self, v):
        if self.F is not None and self.E.degree == 1:
            return self.F([c.coords[0] for c in v])
        return tuple(v)

    def norm_form(self):
        """``N_{F/E}(sum u_i alpha_i)`` as a polynomial in d variables over E."""
        d = self.d
        xs = [Polynomial.variable(self.E, d, i) for i in range(d)]
        # determinant of the multiplication matrix with polynomial entries
        M = [[Polynomial(self.E, d) for _ in range(d)] for _ in range(d)]
        for j in range(d):
            for i in range(d):
                for k in range(d):
                    t = self.table[i][j][k]
                    if not t.is_zero():
                        M[k][j] = M[k][j] + xs[i] * t
        return _poly_det(M, self.E, d)

    def __repr__(self):
        return f"ExtensionData(E={self.E.name}, d={self.d}, F={self.F.name if self.F else None})"


def _poly_det(M, E, nv):
    n = len(M)
    if n == 1:
        return M[0][0]
    acc = Polynomial(E, nv)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _poly_det(minor, E, nv)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


# ---------------------------------------------------------------------------
# systems

@dataclass
class PolynomialSystem:
    """Polynomials over F in named variables.

    ``ambient`` is ``"affine"``, ``"projective"`` or ``"multiprojective"``;
    ``blocks`` gives the block sizes for multiprojective systems.
    ``nonvanishing`` lists polynomials that must not vanish (the open set U).
    """

    field: NumberField
    variables: list
    polynomials: list
    ambient: str = "affine"
    blocks: list = dc_field(default_factory=list)
    nonvanishing: list = dc_field(default_factory=list)

    def __post_init__(self):
        n = len(self.variables)
        for f in list(self.polynomials) + list(self.nonvanishing):
            if f.nvars != n:
                raise ValueError("polynomial arity differs from the variable list")
        if self.ambient == "projective" and not self.blocks:
            self.blocks = [n]
        if self.ambient in ("projective", "multiprojective"):
            if sum(self.blocks) != n:
                raise ValueError("block sizes must add up to the number of variables")
            for f in self.polynomials:
                if not f.is_homogeneous(self.blocks):
                    raise ValueError(f"{f} is not multihomogeneous for blocks {self.blocks}")

    @classmethod
    def parse(cls, field, variables, equations, ambient="affine", blocks=None, nonvanishing=(), theta="t"):
        polys = [Polynomial.parse(e, variables, field, theta) for e in equations]
        nv = [Polynomial.parse(e, variables, field, theta) for e in nonvanishing]
        return cls(field, list(variables), polys, ambient, list(blocks or []), nv)

    def contains(self, point):
        return all(f(point).is_zero() for f in self.polynomials) and \
            all(not g(point).is_zero() for g in self.nonvanishing)


# relative polynomials: exponent -> list of d E-elements

def _rel_mul(ext, p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            v = ext.mul(c1, c2)
            if e in out:
                out[e] = [a + b for a, b in zip(out[e], v)]
            else:
                out[e] = v
    return {e: c for e, c in out.items() if any(not x.is_zero() for x in c)}


def _rel_add(p, q):
    out = dict(p)
    for e, c in q.items():
        out[e] = [a + b for a, b in zip(out[e], c)] if e in out else c
    return {e: c for e, c in out.items() if any(not x.is_zero() for x in c)}


@dataclass
class CompiledRestriction:
    """Affine E-system of a restriction with the point maps ``p`` and ``p^{-1}``."""

    ext: ExtensionData
    source: PolynomialSystem
    variables: list
    equations: list
    nonvanishing: list
    fixed: dict = dc_field(default_factory=dict)

    @property
    def nvars(self):
        return len(self.variables)

    def var_index(self, j, i):
        return j * self.ext.d + i

    def satisfies(self, y):
        E = self.ext.E
        y = [E(c) for c in y]
        if len(y) != self.nvars:
            return False
        if any(not f(y).is_zero() for f in self.equations):
            return False
        for group in self.nonvanishing:
            if all(g(y).is_zero() for g in group):
                return False
        return True

    def point_up(self, y):
        """``p``: E-coordinates -> F-point of the source (verified)."""
        if not self.satisfies(y):
            raise NotOnVariety(f"{tuple(y)} does not satisfy the compiled system")
        d = self.ext.d
        E = self.ext.E
        y = [E(c) for c in y]
        x = [self.ext.from_rel(y[j * d:(j + 1) * d]) for j in range(len(y) // d)]
        if self.ext.F is not None and not self.source.contains(x):
            raise NotOnVariety("image does not satisfy the source system")
        return tuple(x)

    def point_down(self, x):
        """``p^{-1}``: F-point of the source -> E-coordinates (verified)."""
        if self.ext.F is not None:
            x = [self.ext.F(c) for c in x]
            if not self.source.contains(x):
                raise NotOnVariety(f"{tuple(x)} is not on the source variety")
        out = []
        for c in x:
            out.extend(self.ext.to_rel(c))
        return tuple(out)

    def dump(self):
        """Deterministic text serialisation (variables, then sorted terms per equation)."""
        lines = ["variables: " + " ".join(self.variables)]
        for k, f in enumerate(self.equations):
            terms = " + ".join(f"{c!r}*[{','.join(map(str, e))}]" for e, c in f.sorted_terms())
            lines.append(f"eq{k}: {terms or '0'}")
        for k, group in enumerate(self.nonvanishing):
            for i, g in enumerate(group):
                terms = " + ".join(f"{c!r}*[{','.join(map(str, e))}]" for e, c in g.sorted_terms())
                lines.append(f"nz{k}.{i}: {terms or '0'}")
        return "\n".join(lines) + "\n"


def _compile_poly(f: Polynomial, ext: ExtensionData, nvars_out, lin_cache):
    d = ext.d
    acc = {}
    zero_e = (0,) * nvars_out
    for e, c in f.terms.items():
        term = {zero_e: ext.to_rel(c)}
        for j, k in enumerate(e):
            if k:
                key = (j, k)
                if key not in lin_cache:
                    base = lin_cache[(j, 1)]
                    pw = base
                    for _ in range(k - 1):
                        pw = _rel_mul(ext, pw, base)
                    lin_cache[key] = pw
                term = _rel_mul(ext, term, lin_cache[key])
        acc = _rel_add(acc, term)
    return [Polynomial(ext.E, nvars_out, {e: c[k] for e, c in acc.items()}) for k in range(d)]


def restrict_affine(sys: PolynomialSystem, ext: ExtensionData) -> CompiledRestriction:
    """Substitute ``x_j = sum_i alpha_i x_{j,i}`` and split each polynomial into d E-polynomials."""
    d = ext.d
    n = len(sys.variables)
    N = n * d
    lin = {}
    for j in range(n):
        form = {}
        for i in range(d):
            e = [0] * N
            e[j * d + i] = 1
            form[tuple(e)] = [ext.E(int(k == i)) for k in range(d)]
        lin[(j, 1)] = form
    eqs = []
    for f in sys.polynomials:
        eqs.extend(_compile_poly(f, ext, N, lin))
    nz = [_compile_poly(g, ext, N, lin) for g in sys.nonvanishing]
    names = [f"{v}_{i + 1}" for v in sys.variables for i in range(d)]
    return CompiledRestriction(ext, sys, names, eqs, nz)


# ---------------------------------------------------------------------------
# projective systems: chart atlases

@dataclass
class ChartPoint:
    chart: tuple
    coords: tuple


@dataclass
class ProjectiveRestriction:
    """Chart atlas of a restricted (multi)projective system.

    Chart ``c = (k_1, .., k_r)`` sets the ``k_b``-th variable of block ``b`` to 1;
    each chart carries its compiled affine restriction over the free variables.
    """

    ext: ExtensionData
    source: PolynomialSystem
    charts: dict

    def chart_free_indices(self, chart):
        fixed, off = set(), 0
        for b, k in zip(self.source.blocks, chart):
            fixed.add(off + k)
            off += b
        return [j for j in range(len(self.source.variables)) if j not in fixed]

    def _full_coords(self, chart, xs):
        free = self.chart_free_indices(chart)
        F = self.ext.F
        full = [None] * len(self.source.variables)
        for j, x in zip(free, xs):
            full[j] = x
        for j in range(len(full)):
            if full[j] is None:
                full[j] = F(1) if F is not None else tuple(self.ext.one)
        return full

    def point_up(self, y):
        """E-chart point -> F-point (a ProjectivePoint, or a tuple of them per block)."""
        if not isinstance(y, ChartPoint):
            y = ChartPoint(*y)
        comp = self.charts[tuple(y.chart)]
        xs = comp.point_up(y.coords)
        full = self._full_coords(tuple(y.chart), xs)
        return self._to_points(full)

    def _to_points(self, full):
        F = self.ext.F
        pts, off = [], 0
        for b in self.source.blocks:
            pts.append(ProjectivePoint(full[off:off + b], F))
            off += b
        return pts[0] if len(pts) == 1 else tuple(pts)

    def point_down(self, x):
        """F-point -> ChartPoint in the first chart containing it (x_k != 0, normalised)."""
        pts = [x] if isinstance(x, ProjectivePoint) else list(x)
        if len(pts) != len(self.source.blocks):
            raise NotOnVariety("point does not match the blocks")
        chart, normed = [], []
        for p in pts:
            p = p if isinstance(p, ProjectivePoint) else ProjectivePoint(p, self.ext.F)
            k = next(i for i, c in enumerate(p.coords) if not c.is_zero())
            inv = p.coords[k].inverse()
            chart.append(k)
            normed.extend(c * inv for c in p.coords)
        if not self.source.contains(normed):
            raise NotOnVariety(f"{x} is not on the source variety")
        chart = tuple(chart)
        free = self.chart_free_indices(chart)
        return ChartPoint(chart, self.charts[chart].point_down([normed[j] for j in free]))

    def dimensions(self):
        return {c: (comp.nvars, len(comp.equations)) for c, comp in self.charts.items()}


def restrict_projective(sys: PolynomialSystem, ext: ExtensionData) -> ProjectiveRestriction:
    """One compiled affine restriction per standard chart of each projective block."""
    if sys.ambient not in ("projective", "multiprojective"):
        raise ValueError("restrict_projective needs a (multi)projective system")
    F = sys.field
    charts = {}
    ranges = [range(b) for b in sys.blocks]
    for chart in iproduct(*ranges):
        fixed, off = [], 0
        for b, k in zip(sys.blocks, chart):
            fixed.append(off + k)
            off += b
        polys = list(sys.polynomials)
        nz = list(sys.nonvanishing)
        for j in sorted(fixed, reverse=True):
            polys = [f.fix_variable(j, 1) for f in polys]
            nz = [g.fix_variable(j, 1) for g in nz]
        free_vars = [v for j, v in enumerate(sys.variables) if j not in fixed]
        polys = [f for f in polys if not f.is_zero()]
        aff = PolynomialSystem(F, free_vars, polys, "affine", [], nz)
        charts[chart] = restrict_affine(aff, ext)
    return ProjectiveRestriction(ext, sys, charts)


def projective_space(F: NumberField, n: int) -> PolynomialSystem:
    return PolynomialSystem(F, [f"x{i}" for i in range(n + 1)], [], "projective", [n + 1])


# ---------------------------------------------------------------------------
# Res P^1 as a quadric surface

@dataclass
class QuadricEmbedding:
    """``Res_{F/E} P^1`` inside ``P^3_E``: ``u0 u3 = q(u1, u2)`` with q the norm form.

    ``u0 = N(x0)``, ``u3 = N(x1)``, ``u1 alpha_1 + u2 alpha_2 = x0 * conj(x1)``.
    """

    ext: ExtensionData
    equation: Polynomial
    norm_form: Polynomial

    def point_down(self, x):
        """F-point of P^1 -> point on the quadric (over E)."""
        x = x if isinstance(x, ProjectivePoint) else ProjectivePoint(x, self.ext.F)
        x0, x1 = x.coords
        z = x0 * x1.conjugate()
        zr = self.ext.to_rel(z)
        u = [self.ext.E(x0.norm()), zr[0], zr[1], self.ext.E(x1.norm())]
        return ProjectivePoint(u, self.ext.E)

    to_quadric = point_down

    def point_up(self, u):
        """Point on the quadric -> F-point ``(u1 alpha_1 + u2 alpha_2 : u3)``."""
        u = u if isinstance(u, ProjectivePoint) else ProjectivePoint(u, self.ext.E)
        if not self.equation(u.coords).is_zero():
            raise NotOnVariety(f"{u} is not on the quadric")
        F = self.ext.F
        u0, u1, u2, u3 = u.coords
        if u3.is_zero():
            return ProjectivePoint([F(1), F(0)], F)
        z = self.ext.from_rel([u1, u2])
        return ProjectivePoint([z, F(u3.coords[0])], F)

    def ratio_bound_sq(self):
        """``max_j (G^{-1})_{jj}``: ``|u_j|^2 <= kappa^2 q(u1, u2)`` on the quadric."""
        t = self.norm_form.rational_terms()
        a = t.get((2, 0), Fraction(0))
        b = t.get((1, 1), Fraction(0))
        c = t.get((0, 2), Fraction(0))
        disc = 4 * a * c - b * b
        if disc <= 0 or a <= 0:
            raise NotQuadratic("norm form not positive definite")
        return max(4 * c / disc, 4 * a / disc)


def res_p1_quadric(ext: ExtensionData) -> QuadricEmbedding:
    if ext.d != 2 or ext.F is None:
        raise NotQuadratic("the quadric model of Res P^1 needs a quadratic extension")
    if ext.F.degree != 2 or ext.E.degree != 1:
        raise NotQuadratic("implemented for quadratic fields over Q")
    q = ext.norm_form()
    E = ext.E
    u = [Polynomial.variable(E, 4, i) for i in range(4)]
    q4 = q.substitute([u[1], u[2]], 4)
    return QuadricEmbedding(ext, u[0] * u[3] - q4, q)
