"""Least-squares fits of counting series against ``c B^a (log B)^(b-1)``."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateWindow, InsufficientRungs


@dataclass
class FitReport:
    a: float
    b: float
    c: float
    se_a: float
    se_b: float
    se_c: float
    mode: str
    window: list
    residuals: list
    predicted: dict = field(default_factory=dict)

    def as_dict(self):
        return {"a": self.a, "b": self.b, "c": self.c, "se_a": self.se_a, "se_b": self.se_b,
                "se_c": self.se_c, "mode": self.mode, "window": list(self.window),
                "predicted": dict(self.predicted)}


def fit_window(ladder):
    """Top half of the ladder (the upper ceil(n/2) rungs)."""
    k = len(ladder)
    return list(range(k // 2, k))


def fit_asymptotic(series, mode="free", a=None, predicted=None, min_rungs=6):
    """Fit ``log N = a log B + (b - 1) log log B + log c`` on the top-half window.

    ``mode`` is ``"free"`` or ``"fix_a"`` (then ``a`` is pinned and only b, c
    are fitted).  Standard errors come from the residual covariance; they are
    ``nan`` when the window has no spare degrees of freedom.
    """
    ladder = [int(B) for B in series.ladder]
    counts = [float(N) for N in series.counts]
    usable = [i for i, B in enumerate(ladder) if B >= 3]
    if len(usable) < min_rungs:
        raise InsufficientRungs(f"need at least {min_rungs} rungs with B >= 3, got {len(usable)}")
    idx = [usable[j] for j in fit_window(usable)]
    B = np.array([ladder[i] for i in idx], dtype=float)
    N = np.array([counts[i] for i in idx], dtype=float)
    if np.any(N <= 0):
        raise DegenerateWindow("counts must be positive on the fit window")
    lB, llB, lN = np.log(B), np.log(np.log(B)), np.log(N)
    if mode == "free":
        X = np.column_stack([lB, llB, np.ones_like(lB)])
        y = lN
    elif mode == "fix_a":
        if a is None:
            raise ValueError("fix_a mode needs the pinned exponent a")
        X = np.column_stack([llB, np.ones_like(lB)])
        y = lN - a * lB
    else:
        raise ValueError(f"unknown fit mode {mode!r}")
    sv = np.linalg.svd(X, compute_uv=False)
    if sv[-1] <= 1e-10 * sv[0] or len(np.unique(B)) < X.shape[1]:
        raise DegenerateWindow("collinear regressors on the fit window")
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    fitted = X @ coef
    res = y - fitted
    dof = len(y) - X.shape[1]
    if dof > 0:
        s2 = float(res @ res) / dof
        cov = s2 * np.linalg.inv(X.T @ X)
        se = np.sqrt(np.diag(cov))
    else:
        se = np.full(X.shape[1], np.nan)
    if mode == "free":
        a_hat, bm1, logc = coef
        se_a, se_b, se_logc = se
    else:
        a_hat, (bm1, logc) = float(a), coef
        se_a, (se_b, se_logc) = 0.0, se
    c = float(np.exp(logc))
    table = [(int(Bi), float(Ni), float(np.exp(fi + (0 if mode == "free" else a * np.log(Bi)))), float(r))
             for Bi, Ni, fi, r in zip(B, N, fitted, res)]
    return FitReport(float(a_hat), float(bm1 + 1), c, float(se_a), float(se_b), float(c * se_logc), mode,
                     [int(x) for x in B], table, dict(predicted or {}))
