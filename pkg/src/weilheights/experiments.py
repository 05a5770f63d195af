"""Packaged experiments: Schanuel fits against Peyre constants, restriction
equalities for counts and Tamagawa numbers, and the BT fibration mechanism."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .config import ExperimentConfig, config_from_dict, rational
from .enumeration import (CountSeries, EnumerationTask, count_series, enum_subvariety,
                          geometric_ladder, restriction_count_check)
from .errors import ConfigError, DomainError, MismatchFound, NonSplitWitness, UnsupportedField
from .fitting import fit_asymptotic
from .heights import ArchNorm, MetrizedBundle, height
from .nfcore import NumberField, builtin_field
from .outputs import ledger_text, loglog_svg, per_prime_csv, series_csv
from .piclattice import (GaloisLattice, PicardLattice, a_invariant, b_invariant, induce, invariants_rank,
                         preset, swap_action, trivial_action)
from .polys import Polynomial
from .tamagawa import (ProjectiveVariety, TamagawaConfig, TamagawaInput, peyre_constant,
                       quadric_bad_primes, restricted_quadric_metric, tamagawa_restriction_check)

PRESETS = {
    "schanuel-p1": {"kind": "schanuel", "name": "schanuel-p1", "field": {"name": "Q"},
                    "variety": {"ambient": [1]},
                    "ladder": {"b0": 10, "factor": "2", "rungs": 17, "bmax": 1000000},
                    "fit": {"mode": "fix_a", "a": "2"}, "cutoffs": {"prime_cutoff": 100000}},
    "schanuel-p2": {"kind": "schanuel", "name": "schanuel-p2", "field": {"name": "Q"},
                    "variety": {"ambient": [2], "lattice_args": {"n": 2}},
                    "ladder": {"b0": 10, "factor": "2", "rungs": 14, "bmax": 100000},
                    "fit": {"mode": "fix_a", "a": "3"}, "cutoffs": {"prime_cutoff": 100000}},
    "schanuel-p1-gaussian": {"kind": "schanuel", "name": "schanuel-p1-gaussian", "field": {"name": "Q(i)"},
                             "variety": {"ambient": [1]},
                             "ladder": {"b0": 10, "factor": "2", "rungs": 11, "bmax": 20000},
                             "fit": {"mode": "fix_a", "a": "2"}, "cutoffs": {"prime_cutoff": 10000}},
    "restriction-check": {"kind": "restriction-check", "name": "restriction-check", "field": {"name": "Q(i)"},
                          "variety": {"ambient": [1]},
                          "ladder": {"b0": 2, "factor": "2", "rungs": 9, "bmax": 1000},
                          "cutoffs": {"verify_bound": 20}},
    "tamagawa-check": {"kind": "tamagawa-check", "name": "tamagawa-check", "field": {"name": "Q(i)"},
                       "variety": {"ambient": [1]},
                       "cutoffs": {"prime_cutoff": 1000, "mc_samples": 1000000}},
    "bt": {"kind": "bt", "name": "bt", "field": {"name": "Q(sqrt(-3))"},
           "variety": {"ambient": [3, 3], "lattice": "BT"},
           "bt": {"samples": 20, "coefficient_bound": 3, "fiber_bound": 48,
                  "fiber_ladder": [3, 4, 7, 12, 19, 27, 37, 48]}},
}


def preset_config(name, **overrides) -> ExperimentConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    data = {k: (dict(v) if isinstance(v, dict) else v) for k, v in PRESETS[name].items()}
    for k, v in overrides.items():
        if isinstance(v, dict):
            data.setdefault(k, {}).update(v)
        else:
            data[k] = v
    return config_from_dict(data)


@dataclass
class Artifacts:
    files: dict = field(default_factory=dict)
    report: dict = field(default_factory=dict)
    ok: bool = True


# ---------------------------------------------------------------------------
# config -> objects

def field_from_config(cfg: ExperimentConfig) -> NumberField:
    fb = cfg.field
    if fb.minpoly is None:
        return builtin_field(fb.name)
    basis = None if fb.basis is None else [[rational(c) for c in row] for row in fb.basis]
    return NumberField([int(c) for c in fb.minpoly], basis, fb.class_number, fb.roots_of_unity, fb.name)


def ladder_from_config(cfg: ExperimentConfig):
    lb = cfg.ladder
    lad = geometric_ladder(lb.b0, float(rational(lb.factor)), lb.rungs)
    if lb.bmax is not None:
        lad = [B for B in lad if B < lb.bmax] + [lb.bmax]
    return lad


def parse_ladder(text):
    """``"B0:factor:rungs"`` -> increasing integer ladder."""
    try:
        b0, fac, rungs = text.split(":")
        return geometric_ladder(int(b0), float(Fraction(fac)), int(rungs))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad ladder spec {text!r}; expected B0:factor:rungs") from exc


def metric_from_config(cfg: ExperimentConfig, F: NumberField, ambient):
    mb = cfg.metric
    if mb.kind == "matrix":
        norm = ArchNorm("matrix", tuple(tuple(rational(x) for x in row) for row in mb.matrix))
    else:
        norm = ArchNorm(mb.kind)
    places = len(F.archimedean_places())
    return MetrizedBundle(tuple(ambient), (1,) * len(ambient), (norm,) * places)


def _variables(cfg, ambient):
    vb = cfg.variety
    if vb.variables:
        return list(vb.variables)
    if len(ambient) == 1:
        return [f"x{i}" for i in range(ambient[0] + 1)]
    return [f"x{b}_{i}" for b, n in enumerate(ambient) for i in range(n + 1)]


def variety_polys(cfg, F):
    ambient = list(cfg.variety.ambient)
    names = _variables(cfg, ambient)
    eqs = [Polynomial.parse(e, names, F) for e in cfg.variety.equations]
    nz = [Polynomial.parse(e, names, F) for e in cfg.variety.nonvanishing]
    return ambient, names, eqs, nz


def lattice_from_config(cfg: ExperimentConfig, F: NumberField):
    vb = cfg.variety
    args = dict(vb.lattice_args)
    if vb.lattice.lower() in ("pn", "projective") and "n" not in args:
        args["n"] = vb.ambient[0]
    if vb.lattice.lower() in ("pnxpm", "multiprojective") and "dims" not in args:
        args["dims"] = tuple(vb.ambient)
    lat = preset(vb.lattice, **args)
    K = builtin_field(vb.splitting_field) if vb.splitting_field else None
    if vb.action == "trivial":
        return trivial_action(lat), K
    if vb.action == "swap":
        return GaloisLattice(lat, (swap_action(lat.rank // 2),)), K
    raise ConfigError(f"unknown action {vb.action!r}")


def tamagawa_config(cfg: ExperimentConfig) -> TamagawaConfig:
    c = cfg.cutoffs
    return TamagawaConfig(prime_cutoff=c.prime_cutoff, density_cutoff=c.density_cutoff,
                          mc_samples=c.mc_samples, seed=cfg.seed)


def tamagawa_input(cfg: ExperimentConfig) -> TamagawaInput:
    F = field_from_config(cfg)
    ambient, _, eqs, _ = variety_polys(cfg, F)
    if len(ambient) != 1:
        raise UnsupportedField("Tamagawa assembly implemented for subvarieties of a single P^n")
    bad = tuple(cfg.variety.bad_primes or ())
    if not bad and len(eqs) == 1 and eqs[0].total_degree() == 2 and F.degree == 1:
        bad = quadric_bad_primes(eqs[0])
    var = ProjectiveVariety(F, ambient[0], eqs, cfg.name, bad)
    gal, K = lattice_from_config(cfg, F)
    if cfg.variety.lattice.lower() in ("pn", "projective") and gal.rank == 1 \
            and -gal.base.canonical[0] != var.dim + 1:
        raise ConfigError(f"lattice Pn(n={-gal.base.canonical[0] - 1}) does not match a variety of "
                          f"dimension {var.dim}")
    return TamagawaInput(var, gal, K, metric_from_config(cfg, F, ambient), True, cfg.name)


# ---------------------------------------------------------------------------
# experiments

def _series(cfg, F, ambient, eqs, nz, ladder):
    task = EnumerationTask(F, tuple(ambient), metric_from_config(cfg, F, ambient), eqs, nz,
                           ladder[-1], 1)
    plain = not eqs and not nz and len(ambient) == 1 and cfg.metric.kind == "max"
    method = "moebius" if plain else "enumerate"
    return count_series(task, ladder, method=method, timing=cfg.output.timing)


def run_enumerate(cfg: ExperimentConfig, ladder=None) -> Artifacts:
    F = field_from_config(cfg)
    ambient, _, eqs, nz = variety_polys(cfg, F)
    ladder = ladder or ladder_from_config(cfg)
    s = _series(cfg, F, ambient, eqs, nz, ladder)
    return Artifacts({"series.csv": series_csv(s)}, {"series": s})


def run_schanuel(cfg: ExperimentConfig, ladder=None) -> Artifacts:
    """Count series for P^n, fit with a pinned (or free) exponent, compare with alpha*beta*tau."""
    F = field_from_config(cfg)
    ambient, _, eqs, nz = variety_polys(cfg, F)
    if eqs or len(ambient) != 1:
        raise UnsupportedField("the Schanuel experiment runs on P^n")
    n = ambient[0]
    ladder = ladder or ladder_from_config(cfg)
    s = _series(cfg, F, ambient, eqs, nz, ladder)
    lat = preset("Pn", n=n)
    a_pred = a_invariant(lat, (1,))
    b_pred = b_invariant(lat, (1,), a_pred)
    pinned = float(rational(cfg.fit.a)) if cfg.fit.a is not None else float(a_pred)
    inp = TamagawaInput(ProjectiveVariety(F, n, []), trivial_action(lat), None,
                        metric_from_config(cfg, F, ambient), True, cfg.name)
    pc = peyre_constant(inp, tamagawa_config(cfg))
    fit = fit_asymptotic(s, cfg.fit.mode, a=pinned if cfg.fit.mode == "fix_a" else None,
                         predicted={"a": a_pred, "b": b_pred, "c": pc.c})
    rel = abs(fit.c - pc.c) / pc.c
    rows = [("field", F.name), ("n", n), ("fit.mode", fit.mode), ("fit.a", fit.a), ("fit.b", fit.b),
            ("fit.se_b", fit.se_b), ("fit.c", fit.c), ("fit.se_c", fit.se_c),
            ("predicted.a", a_pred), ("predicted.b", b_pred)] + list(pc.ledger) + \
        [("peyre.c", pc.c), ("peyre.tau_error", pc.tau_error), ("relative_difference", rel)]
    meta = {"prime_cutoff": pc.meta["prime_cutoff"], "seed": cfg.seed, "tail": pc.meta["tail"],
            "window": " ".join(map(str, fit.window))}
    files = {"series.csv": series_csv(s), "peyre.txt": ledger_text(f"{cfg.name} Peyre ledger", rows, meta),
             "plot.svg": loglog_svg(s, fit, cfg.name)}
    return Artifacts(files, {"series": s, "fit": fit, "peyre": pc, "relative_difference": rel})


def run_restriction_check(cfg: ExperimentConfig, ladder=None) -> Artifacts:
    F = field_from_config(cfg)
    ladder = ladder or ladder_from_config(cfg)
    rep = restriction_count_check(F, ladder, cfg.cutoffs.verify_bound)
    s = CountSeries(rep["ladder"], rep["F_counts"])
    lines = ["B,F_count,E_count,equal"] + [f"{B},{a},{b},{str(a == b).lower()}"
                                           for B, a, b in zip(rep["ladder"], rep["F_counts"], rep["E_counts"])]
    rows = [("field", F.name), ("rungs", len(rep["ladder"])), ("verified_points", rep["verified_points"]),
            ("sweep_box", rep.get("sweep_box", 0)), ("all_equal", rep["ok"])]
    files = {"series.csv": series_csv(s), "restriction.csv": "\n".join(lines) + "\n",
             "restriction.txt": ledger_text(f"{cfg.name} restriction counts", rows)}
    return Artifacts(files, rep, rep["ok"])


def tamagawa_pair(cfg: ExperimentConfig):
    """``(X = P^1 over F, Res X = quadric over Q)`` assembly inputs."""
    from .weilres import ExtensionData, res_p1_quadric
    from .nfcore import rationals
    F = field_from_config(cfg)
    if not F.is_imaginary_quadratic:
        raise UnsupportedField("the Tamagawa comparison restricts P^1 from an imaginary quadratic field")
    inpF = TamagawaInput(ProjectiveVariety(F, 1, [], f"P1/{F.name}"), trivial_action(preset("Pn", n=1)))
    quad = res_p1_quadric(ExtensionData.over_Q(F))
    f = quad.equation
    XE = ProjectiveVariety(rationals(), 3, [f], f"Res P1/{F.name}", quadric_bad_primes(f),
                           restricted_quadric_metric(quad))
    lat = PicardLattice(2, ((1, 0), (0, 1)), (-2, -2), ("H1", "H2"))
    inpE = TamagawaInput(XE, GaloisLattice(lat, (swap_action(1),)), F)
    return inpF, inpE


def run_tamagawa_check(cfg: ExperimentConfig) -> Artifacts:
    inpF, inpE = tamagawa_pair(cfg)
    tol = float(rational(cfg.cutoffs.tolerance))
    rep = tamagawa_restriction_check(inpF, inpE, tamagawa_config(cfg), tol)
    diff = ["factor_F,value_F,factor_E,value_E"]
    for (ka, va), (kb, vb) in zip(rep["ledger_F"], rep["ledger_E"]):
        diff.append(f"{ka},{float(va):.12g},{kb},{float(vb):.12g}")
    rows = [("tau_F", rep["tau_F"]), ("err_F", rep["err_F"]), ("tau_E", rep["tau_E"]), ("err_E", rep["err_E"]),
            ("relative_difference", rep["relative_difference"]),
            ("euler_factor_mismatches", len(rep["euler_factor_mismatches"])), ("ok", bool(rep["ok"]))]
    meta = {"prime_cutoff": cfg.cutoffs.prime_cutoff, "mc_samples": cfg.cutoffs.mc_samples, "seed": cfg.seed}
    files = {"ledger_F.txt": ledger_text("tau(X) over F", rep["ledger_F"], meta),
             "ledger_E.txt": ledger_text("tau(Res X) over Q", rep["ledger_E"], meta),
             "ledger_diff.csv": "\n".join(diff) + "\n",
             "tamagawa.txt": ledger_text(f"{cfg.name} tau comparison", rows, meta)}
    return Artifacts(files, rep, bool(rep["ok"]))


def run_peyre(cfg: ExperimentConfig) -> Artifacts:
    inp = tamagawa_input(cfg)
    pc = peyre_constant(inp, tamagawa_config(cfg))
    meta = {"prime_cutoff": pc.meta["prime_cutoff"], "mc_samples": pc.meta["mc_samples"], "seed": cfg.seed,
            "weak_approximation": inp.weak_approximation}
    rows = list(pc.ledger) + [("c", pc.c), ("tau_error", pc.tau_error)]
    return Artifacts({"peyre.txt": ledger_text(f"{cfg.name} Peyre ledger", rows, meta),
                      "per_prime.csv": per_prime_csv(pc.meta["per_prime"])}, {"peyre": pc})


# ---------------------------------------------------------------------------
# BT fibration

def cube_root(x):
    """Exact cube root of ``x`` in an imaginary quadratic field, or None."""
    F = x.field
    if x.is_zero():
        return x
    D = x.denominator()
    y = x * F(D ** 3)
    idx = F.polynomial_index()
    with mpmath.workprec(200):
        z = y.embed(len(F.embeddings()) - 1)
        th = F.embeddings()[-1]
        r, phi = abs(z), mpmath.arg(z)
        for k in range(3):
            c = mpmath.cbrt(r) * mpmath.expj((phi + 2 * mpmath.pi * k) / 3)
            b = mpmath.im(c) / mpmath.im(th) if F.degree == 2 else 0
            a = mpmath.re(c) - b * mpmath.re(th) if F.degree == 2 else mpmath.re(c)
            pw = [Fraction(int(mpmath.nint(a * idx)), idx), Fraction(int(mpmath.nint(b * idx)), idx)][:F.degree]
            cand = F(list(F._from_power(pw)))
            if cand ** 3 == y:
                return cand / F(D)
    return None


def primitive_cube_root_of_unity(F):
    one = F.one
    for z in F.units():
        if z != one and z ** 3 == one:
            return z
    raise NonSplitWitness("F contains no primitive cube root of unity", witness={"field": F.name})


def check_base_point(t):
    if any(c.is_zero() for c in t):
        raise DomainError(f"base point {t} has a vanishing coordinate (prod t_i = 0)")


def diagonal_cubic(F, coeffs):
    y = [Polynomial.variable(F, 4, i) for i in range(4)]
    out = Polynomial(F, 4, {})
    for a, v in zip(coeffs, y):
        out = out + Polynomial.constant(F, 4, a) * v ** 3
    return out


def lines_of_diagonal_cubic(coeffs):
    """All 27 lines of ``sum a_i y_i^3 = 0`` over F, each verified to lie on the surface.

    Raises :class:`NonSplitWitness` when a ratio ``a_j / a_0`` has no cube root in F.
    """
    F = coeffs[0].field
    zeta = primitive_cube_root_of_unity(F)
    r = [F.one]
    for j in range(1, 4):
        c = cube_root(coeffs[j] / coeffs[0])
        if c is None:
            raise NonSplitWitness(f"a_{j}/a_0 is not a cube in {F.name}",
                                  witness={"j": j, "ratio": coeffs[j] / coeffs[0]})
        r.append(c)
    cubic = diagonal_cubic(F, coeffs)
    lines = set()
    pairings = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))
    for (i, j), (k, l) in pairings:
        for m in range(3):
            for n in range(3):
                # z_i + zeta^m z_j = 0, z_k + zeta^n z_l = 0 with z = r * y
                P1 = [F.zero] * 4
                P1[j] = F.one / r[j]
                P1[i] = -(zeta ** m) / r[i]
                P2 = [F.zero] * 4
                P2[l] = F.one / r[l]
                P2[k] = -(zeta ** n) / r[k]
                for s in range(4):
                    pt = [p + F(s) * q for p, q in zip(P1, P2)]
                    if not cubic(pt).is_zero():
                        raise NonSplitWitness("constructed line leaves the surface",
                                              witness={"pairing": ((i, j), (k, l)), "m": m, "n": n})
                if not cubic(P2).is_zero():
                    raise NonSplitWitness("constructed line leaves the surface",
                                          witness={"pairing": ((i, j), (k, l)), "m": m, "n": n})
                f1 = [F.zero] * 4
                f1[i], f1[j] = r[i], zeta ** m * r[j]
                f2 = [F.zero] * 4
                f2[k], f2[l] = r[k], zeta ** n * r[l]
                lines.add(frozenset((_normalise(f1), _normalise(f2))))
    if len(lines) != 27:
        raise NonSplitWitness(f"found {len(lines)} distinct lines instead of 27", witness={"coeffs": coeffs})
    return lines


def _normalise(form):
    k = next(i for i, c in enumerate(form) if not c.is_zero())
    inv = form[k].inverse()
    return tuple(tuple(c * inv for c in form)[i].coords for i in range(len(form)))


def diagonal_cubic_counts(F, coeffs, ladder):
    """``N(B)`` for ``sum c_i y_i^3 = 0`` in ``P^3(F)`` (max norm), vectorised.

    Triples (y0, y1, y2) are enumerated; y3 is read off a table of cubes.
    Tuples are kept when primitive and led by a coordinate in the canonical
    sector, so each projective point is counted once.
    """
    from .enumeration import VecRing
    R = VecRing(F)
    bmax = int(max(ladder))
    a, b = R.elements(bmax)
    n = len(a)
    cs = [tuple(int(x) for x in c.power_coords()) for c in coeffs]
    if any(Fraction(x).denominator != 1 for c in coeffs for x in c.power_coords()):
        raise DomainError("coefficients must be integral")

    def cube(ai, bi):
        sa, sb = R.mul(ai, bi, ai, bi)
        return R.mul(sa, sb, ai, bi)

    ca, cb = cube(a, b)
    terms = [R.mul(np.full(n, c[0], dtype=np.int64), np.full(n, c[1], dtype=np.int64), ca, cb) for c in cs]
    # cube table for the last coordinate: key -> up to w/2 preimages
    k3a, k3b = terms[3]
    span = int(max(np.abs(k3a).max(), np.abs(k3b).max())) * 4 + 1
    keys = k3a * (2 * span + 1) + k3b
    order = np.argsort(keys, kind="stable")
    skeys = keys[order]
    uniq, start, cnt = np.unique(skeys, return_index=True, return_counts=True)
    width = int(cnt.max())
    pre = np.full((len(uniq), width), -1, dtype=np.int64)
    for j in range(width):
        has = cnt > j
        pre[has, j] = order[start[has] + j]
    hist = np.zeros(bmax + 1, dtype=np.int64)
    h = R.abs_height(a, b)
    for i0 in range(n):
        I1, I2 = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        I1, I2 = I1.ravel(), I2.ravel()
        Sa = terms[0][0][i0] + terms[1][0][I1] + terms[2][0][I2]
        Sb = terms[0][1][i0] + terms[1][1][I1] + terms[2][1][I2]
        ok = (np.abs(Sa) <= span) & (np.abs(Sb) <= span)
        key = (-Sa) * (2 * span + 1) + (-Sb)
        pos = np.searchsorted(uniq, key)
        pos = np.minimum(pos, len(uniq) - 1)
        ok &= uniq[pos] == key
        for j in range(width):
            i3 = np.where(ok, pre[pos, j], -1)
            m = i3 >= 0
            if not np.any(m):
                continue
            idx = [np.full(int(m.sum()), i0), I1[m], I2[m], i3[m]]
            ya = [a[t] for t in idx]
            yb = [b[t] for t in idx]
            nz = [(x != 0) | (y != 0) for x, y in zip(ya, yb)]
            lead_a = np.select(nz, ya, 0)
            lead_b = np.select(nz, yb, 0)
            anyz = np.any(nz, axis=0)
            canon = anyz & R.in_sector(lead_a, lead_b)
            g01 = R.gcd(ya[0], yb[0], ya[1], yb[1])
            g23 = R.gcd(ya[2], yb[2], ya[3], yb[3])
            g = R.gcd(g01[0], g01[1], g23[0], g23[1])
            prim = R.norm(g[0], g[1]) == 1
            keep = canon & prim
            ht = np.max(np.stack([h[t] for t in idx]), axis=0)[keep]
            np.add.at(hist, ht, 1)
    cum = np.cumsum(hist)
    return [int(cum[int(B)]) for B in ladder]


def sample_base_points(F, samples, bound, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < samples:
        coords = rng.integers(-bound, bound + 1, size=(4, F.degree))
        t = [F([int(c) for c in row]) for row in coords]
        if any(c.is_zero() for c in t):
            continue
        out.append(t)
    return out


def bt_exponent_ledger():
    """``b = rho = 2`` on the total space versus the ``(log B)^3`` fiber floor; dP6 ranks."""
    lat = preset("BT")
    L = lat.anticanonical
    a = a_invariant(lat, L)
    b = b_invariant(lat, L, a)
    dp6 = trivial_action(preset("dP6"))
    ind = induce(dp6, 2)
    split_rank = invariants_rank(trivial_action(ind.base))
    swap_rank = invariants_rank(ind)
    return {"rho_total": lat.rank, "a_total": a, "b_total": b, "total_log_exponent": b - 1,
            "fiber_floor_log_exponent": lat.rank + 1, "rho_dP6_split": split_rank, "rho_dP6_swap": swap_rank}


def bt_experiment(cfg: ExperimentConfig) -> Artifacts:
    from .weilres import ExtensionData, PolynomialSystem, restrict_projective
    F = field_from_config(cfg)
    bb = cfg.bt
    base = sample_base_points(F, bb.samples, bb.coefficient_bound, cfg.seed)
    split = 0
    for t in base:
        check_base_point(t)
        lines_of_diagonal_cubic([c ** 3 for c in t])
        split += 1
    fiber = [F.one] * 4
    lines_of_diagonal_cubic(fiber)
    ladder = sorted(int(B) for B in bb.fiber_ladder if B <= bb.fiber_bound)
    counts = diagonal_cubic_counts(F, fiber, ladder)
    s = CountSeries(ladder, counts)
    try:
        fit = fit_asymptotic(s, "free", min_rungs=6)
        fit_rows = [("fiber_fit.a", fit.a), ("fiber_fit.b", fit.b), ("fiber_fit.se_b", fit.se_b), ("fiber_fit.c", fit.c)]
    except Exception as exc:  # reported, not fatal: the growth fit is beyond desk scale
        fit = None
        fit_rows = [("fiber_fit", f"unavailable: {type(exc).__name__}")]
    ext = ExtensionData.over_Q(F)
    sys = PolynomialSystem.parse(F, [f"x{i}" for i in range(4)] + [f"y{i}" for i in range(4)],
                                 ["x0*y0^3 + x1*y1^3 + x2*y2^3 + x3*y3^3"], "multiprojective", [4, 4])
    dims = sorted(set(restrict_projective(sys, ext).dimensions().values()))
    led = bt_exponent_ledger()
    rows = [("field", F.name), ("sampled_fibers", bb.samples), ("split_fibers", split),
            ("lines_per_fiber", 27)] + sorted(led.items()) + \
        [("restricted_chart_vars", dims[0][0]), ("restricted_chart_equations", dims[0][1])] + fit_rows
    meta = {"seed": cfg.seed, "coefficient_bound": bb.coefficient_bound, "fiber_bound": ladder[-1]}
    files = {"series.csv": series_csv(s), "bt.txt": ledger_text(f"{cfg.name} BT mechanism", rows, meta)}
    return Artifacts(files, {"split": split, "samples": bb.samples, "ledger": led, "series": s, "fit": fit,
                             "chart_dims": dims}, split == bb.samples)


RUNNERS = {"schanuel": run_schanuel, "restriction-check": run_restriction_check,
           "tamagawa-check": run_tamagawa_check, "bt": bt_experiment, "peyre": run_peyre,
           "enumerate": run_enumerate}


def run_experiment(cfg: ExperimentConfig) -> Artifacts:
    t0 = time.perf_counter()
    art = RUNNERS[cfg.kind](cfg)
    art.report["seconds"] = time.perf_counter() - t0
    return art
