"""Grid verification of the scaling inequalities behind the curvature bounds.

Four strict inequalities are checked over dense parameter grids, each exposed
as a margin (left-hand side minus right-hand side, oriented so that positive
means the inequality holds):

  * sinh scaling:  sinh(xy) - xy < y^3 (sinh x - x)       for x > 0, y in (0,1)
  * coth ratio:    psi(xy) psi(x) x / (psi(x) - psi(xy))
                      < y^2 (sinh 2x - 2x) / (4 (1-y^2))  for x > 0, y in (0,1)
  * coth polynomial: x^3 (coth x + x (1 - coth^2 x)) > 6 (x coth x - 1)^2
  * sin scaling:   sin(xy) >= y sin(x)                    for x in (0,pi), y in [0,1]

The margins share the phi/psi code paths of the curvature module, so that
substituting (x, y) = (2 r, sqrt(beta)) or (r, sqrt(beta)) reproduces the
exact inequalities the curvature discriminant bound rests on.  The two
Taylor-series identities (sinh scaling and coth polynomial) are exposed as
independent summation routes for cross-checking the direct evaluations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curvature import phi, psi

BOUNDARY_INSET = 1e-3
SERIES_REL_STOP = 1e-16
SERIES_MAX_TERMS = 200


def lemma_sinh_scaling(x, y):
    """Margin y^3 phi(x) - phi(x y); positive for x > 0, 0 < y < 1."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = y ** 3 * phi(x) - phi(x * y)
    return float(out) if np.ndim(out) == 0 else out


def sinh_scaling_series(x, y, max_terms=SERIES_MAX_TERMS):
    """The margin as its positive-term Taylor sum y^3 sum x^(2k+1)(1 - y^(2k-2))/(2k+1)!.

    Adaptive truncation: stops once a term falls below 1e-16 of the partial
    sum.  The k = 1 term vanishes identically.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    total = np.zeros(np.broadcast(x, y).shape)
    for k in range(2, max_terms + 1):
        term = x ** (2 * k + 1) * (1.0 - y ** (2 * k - 2)) / math.factorial(2 * k + 1)
        total = total + term
        if np.all(term <= SERIES_REL_STOP * np.abs(total)):
            break
    out = y ** 3 * total
    return float(out) if np.ndim(out) == 0 else out


def lemma_coth_ratio(x, y):
    """Margin y^2 phi(2x)/(4(1-y^2)) - x psi(xy) psi(x)/(psi(x) - psi(xy)).

    Positive for x > 0, 0 < y < 1.  The denominator psi(x) - psi(xy) is
    positive by monotonicity of psi; a nonpositive value indicates a bug and
    raises.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    denom = psi(x) - psi(x * y)
    if np.any(denom <= 0.0):
        raise ArithmeticError("psi(x) - psi(xy) must be positive for y < 1")
    lhs = x * psi(x * y) * psi(x) / denom
    rhs = y ** 2 * phi(2.0 * x) / (4.0 * (1.0 - y) * (1.0 + y))
    out = rhs - lhs
    return float(out) if np.ndim(out) == 0 else out


def coth_ratio_path(x, y):
    """The auxiliary function whose decrease in y proves the coth ratio bound.

    f(x, y) = (psi(x) - psi(xy)) / (x psi(xy) psi(x)) + 4 (1 - y^-2) / phi(2x);
    tends to 0 as y -> 1 and is positive and decreasing on y in (0, 1).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = (psi(x) - psi(x * y)) / (x * psi(x * y) * psi(x)) \
        + 4.0 * (1.0 - y ** -2) / phi(2.0 * x)
    return float(out) if np.ndim(out) == 0 else out


def coth_poly_I_direct(x):
    """I(x) = x^3 (sinh(2x)/2 - x) - 6 (x cosh x - sinh x)^2, evaluated directly.

    Cancellation-limited below x ~ 0.5 (the true value is O(x^10) while the
    operands are O(x^6)); use the series there.
    """
    x = np.asarray(x, dtype=float)
    out = x ** 3 * (np.sinh(2.0 * x) / 2.0 - x) - 6.0 * (x * np.cosh(x) - np.sinh(x)) ** 2
    return float(out) if np.ndim(out) == 0 else out


def coth_poly_I_series(x, max_terms=SERIES_MAX_TERMS):
    """I(x) as its all-positive Taylor sum over k >= 3.

    sum 2^(2k+2) x^(2k+4) (2k+3)(k-1)(k-2) / (2k+4)!; every term through x^8
    of the direct form cancels, which is why the series route is exact where
    the direct one is noise.
    """
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x)
    for k in range(3, max_terms + 1):
        term = (2.0 ** (2 * k + 2) * x ** (2 * k + 4)
                * (2 * k + 3) * (k - 1) * (k - 2) / math.factorial(2 * k + 4))
        total = total + term
        if np.all(term <= SERIES_REL_STOP * np.abs(total)):
            break
    return float(total) if np.ndim(total) == 0 else total


def lemma_coth_poly(x):
    """Margin x^3 (coth x + x (1 - coth^2 x)) - 6 (x coth x - 1)^2; positive for x > 0.

    Equals I(x)/sinh^2(x); the series route is used below x = 0.5 where the
    direct form is destroyed by cancellation.
    """
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        coth = 1.0 / np.tanh(x)
        direct = x ** 3 * (coth + x * (1.0 - coth ** 2)) - 6.0 * (x * coth - 1.0) ** 2
    series = coth_poly_I_series(x) / np.sinh(x) ** 2
    out = np.where(x < 0.5, series, direct)
    return float(out) if np.ndim(out) == 0 else out


def lemma_sin_scaling(x, y):
    """Margin sin(xy) - y sin(x); nonnegative for x in (0, pi), y in [0, 1]."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.sin(x * y) - y * np.sin(x)
    return float(out) if np.ndim(out) == 0 else out


def sin_scaling_slope(x, y):
    """d/dx of the sin-scaling margin: y (cos(xy) - cos(x)); positive on (0,pi)x(0,1)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = y * (np.cos(x * y) - np.cos(x))
    return float(out) if np.ndim(out) == 0 else out


# --- grid reports ------------------------------------------------------------

@dataclass
class GridReport:
    """Result of sweeping one inequality margin over a parameter grid."""

    lemma: str
    grid: dict
    min_margin: float
    min_at: dict
    n_points: int
    violations: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.violations and self.min_margin > 0.0

    def to_dict(self):
        return {
            "lemma": self.lemma,
            "grid": self.grid,
            "n_points": self.n_points,
            "min_margin": self.min_margin,
            "min_at": self.min_at,
            "violations": self.violations,
            "passed": self.passed,
        }


def open_interval_grid(lo, hi, n, open_lo=True, open_hi=True, inset=BOUNDARY_INSET):
    """n-ish points of [lo, hi] inset from open endpoints, log-refined toward them.

    Strict inequalities degenerate at the closure of their domain; the
    refinement distinguishes margins tending to zero from violations.
    """
    a = lo + inset if open_lo else lo
    b = hi - inset if open_hi else hi
    parts = [np.linspace(a, b, max(n - 16, 2))]
    span = min(1.0, (b - a) / 4.0)
    if open_lo:
        parts.append(lo + np.geomspace(inset, span, 8))
    if open_hi:
        parts.append(hi - np.geomspace(inset, span, 8))
    return np.unique(np.concatenate(parts))


def _sweep(lemma_name, margin_fn, xs, ys, grid_desc, max_recorded=20):
    if ys is None:
        margins = margin_fn(xs)
        coords = [("x", xs)]
    else:
        margins = margin_fn(xs[:, None], ys[None, :])
        coords = [("x", xs), ("y", ys)]
    flat = np.asarray(margins).ravel()
    idx_min = int(np.argmin(flat))
    unravel = np.unravel_index(idx_min, np.shape(margins)) if ys is not None else (idx_min,)
    min_at = {name: float(axis[unravel[k]]) for k, (name, axis) in enumerate(coords)}
    violations = []
    bad = np.nonzero(flat <= 0.0)[0]
    for j in bad[:max_recorded]:
        uv = np.unravel_index(int(j), np.shape(margins)) if ys is not None else (int(j),)
        rec = {name: float(axis[uv[k]]) for k, (name, axis) in enumerate(coords)}
        rec["margin"] = float(flat[j])
        violations.append(rec)
    if len(bad) > max_recorded:
        violations.append({"suppressed": int(len(bad) - max_recorded)})
    return GridReport(lemma=lemma_name, grid=grid_desc,
                      min_margin=float(flat[idx_min]), min_at=min_at,
                      n_points=int(flat.size), violations=violations)


def verify_sinh_scaling(n=500):
    xs = open_interval_grid(0.0, 10.0, n, open_lo=True, open_hi=False)
    ys = open_interval_grid(0.0, 1.0, n)
    return _sweep("sinh-scaling", lemma_sinh_scaling, xs, ys,
                  {"x": [0.0, 10.0], "y": [0.0, 1.0], "n": n, "inset": BOUNDARY_INSET})


def verify_coth_ratio(n=500):
    xs = open_interval_grid(0.0, 10.0, n, open_lo=True, open_hi=False)
    ys = open_interval_grid(0.0, 1.0, n)
    return _sweep("coth-ratio", lemma_coth_ratio, xs, ys,
                  {"x": [0.0, 10.0], "y": [0.0, 1.0], "n": n, "inset": BOUNDARY_INSET})


def verify_coth_poly(n=500):
    xs = open_interval_grid(0.0, 10.0, n, open_lo=True, open_hi=False)
    return _sweep("coth-polynomial", lemma_coth_poly, xs, None,
                  {"x": [0.0, 10.0], "n": n, "inset": BOUNDARY_INSET})


def verify_sin_scaling(n=500):
    xs = open_interval_grid(0.0, math.pi, n)
    ys = open_interval_grid(0.0, 1.0, n)
    return _sweep("sin-scaling", lemma_sin_scaling, xs, ys,
                  {"x": [0.0, math.pi], "y": [0.0, 1.0], "n": n, "inset": BOUNDARY_INSET})


def verify_all(n=500):
    return [verify_sinh_scaling(n), verify_coth_ratio(n),
            verify_coth_poly(n), verify_sin_scaling(n)]
