"""Sampled estimators for growth orders, Hoelder exponents and equivalences.

All estimators work on a fixed :class:`SampleCloud`, so repeated calls give
identical answers.  None of them proves anything; they produce evidence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from ..base import DomainError, VariableCountError
from .expr import MapExpr
from .sampling import SampleCloud

ZERO_TOL = 1e-13
RANK_RTOL = 1e-8


def _loglog_fit(logx: np.ndarray, logy: np.ndarray) -> Tuple[float, float]:
    """Least-squares slope and its standard error."""
    if logx.size < 2:
        return float("nan"), float("inf")
    if logx.size == 2:
        slope = (logy[1] - logy[0]) / (logx[1] - logx[0])
        return float(slope), 0.0
    fit = stats.linregress(logx, logy)
    return float(fit.slope), float(fit.stderr)


def _norms(values: np.ndarray) -> np.ndarray:
    return np.linalg.norm(values, axis=-1)


def _evaluate_cloud(F: MapExpr, cloud: SampleCloud) -> np.ndarray:
    pts = cloud.points()
    r, k, n = pts.shape
    if n != F.n_inputs:
        raise VariableCountError(f"cloud lives in R^{n} but the map takes {F.n_inputs} inputs")
    return F(pts.reshape(-1, n)).reshape(r, k, F.n_outputs)


# ---------------------------------------------------------------------------
# order

@dataclass(frozen=True)
class OrderEstimate:
    value: float
    width: float
    infinite: bool
    slopes: Tuple[float, ...]
    direction: Optional[int]

    @property
    def interval(self):
        return (self.value - self.width, self.value + self.width)


def estimate_order(F: MapExpr, x0, cloud: SampleCloud, base_value=None,
                   fit_fraction: float = 0.25) -> OrderEstimate:
    """Growth exponent of ``F(x0 + t v) - F(x0)`` as t -> 0.

    For each direction the log-norm is regressed on log t over the finest
    ``fit_fraction`` of the radii; the smallest slope over directions is the
    estimate, reported with a 95% half-width from the regression.
    ``base_value`` overrides F(x0) for maps not defined at the base point.
    """
    x0 = np.asarray(x0, dtype=float).ravel()
    if cloud.radii.size < 4 or cloud.directions.shape[0] < 1:
        raise ValueError("order estimation needs at least 4 radii and one direction")
    if base_value is None:
        base = F(x0)
        if not np.all(np.isfinite(base)):
            raise DomainError("map undefined at the base point; pass base_value")
    else:
        base = np.broadcast_to(np.asarray(base_value, dtype=float), (F.n_outputs,))
    vals = _evaluate_cloud(F, cloud)
    diff = _norms(vals - base)
    start = int(np.floor(cloud.radii.size * (1 - fit_fraction)))
    start = min(start, cloud.radii.size - 3)
    logt = np.log(cloud.radii[start:])
    slopes, errs = [], []
    for j in range(diff.shape[1]):
        d = diff[start:, j]
        ok = np.isfinite(d) & (d > 0)
        if ok.sum() < 3:
            slopes.append(np.inf)
            errs.append(0.0)
            continue
        s, e = _loglog_fit(logt[ok], np.log(d[ok]))
        slopes.append(s)
        errs.append(e)
    slopes_arr = np.array(slopes)
    if np.all(np.isinf(slopes_arr)):
        return OrderEstimate(float("inf"), 0.0, True, tuple(slopes), None)
    j = int(np.argmin(slopes_arr))
    n_fit = max(int(np.sum(np.isfinite(diff[start:, j]) & (diff[start:, j] > 0))), 3)
    width = float(stats.t.ppf(0.975, n_fit - 2) * errs[j]) if n_fit > 2 else float("inf")
    return OrderEstimate(float(slopes_arr[j]), width, False, tuple(float(s) for s in slopes), j)


# ---------------------------------------------------------------------------
# asymptotic equivalence

@dataclass(frozen=True)
class EquivReport:
    c_lower: float
    c_upper: float
    violated: bool
    worst_point: Optional[Tuple[float, ...]]
    mismatches: int
    drift: float
    samples_used: int


def asymptotic_ratio_check(F: MapExpr, G: MapExpr, cloud: SampleCloud,
                           bounds: Optional[Tuple[float, float]] = (1e-3, 1e3),
                           zero_tol: float = ZERO_TOL) -> EquivReport:
    """Sampled bounds c_lower <= |G| / |F| <= c_upper over the cloud.

    A norm counts as zero when it is below ``zero_tol`` times the largest
    norm of either map on the same radius shell.  The check is violated if
    exactly one of the two maps vanishes at a sample, or if a ratio leaves
    ``bounds``.  ``drift`` is the largest |slope| of log ratio against log t
    over the directions; bounded ratios have no drift.
    """
    if F.n_inputs != G.n_inputs or F.n_outputs != G.n_outputs:
        raise VariableCountError("maps must have the same arity and co-arity")
    pts = cloud.points()
    nf = _norms(_evaluate_cloud(F, cloud))
    ng = _norms(_evaluate_cloud(G, cloud))
    finite = np.isfinite(nf) & np.isfinite(ng)
    scale = np.nanmax(np.where(finite, np.maximum(nf, ng), np.nan), axis=1, keepdims=True)
    scale = np.where(np.isfinite(scale), scale, 0.0)
    zf = nf <= zero_tol * scale
    zg = ng <= zero_tol * scale
    mismatch = finite & (zf ^ zg)
    use = finite & ~zf & ~zg
    worst = None
    if not use.any():
        c_lo = c_hi = float("nan")
        drift = float("nan")
    else:
        ratio = np.where(use, ng / np.where(use, nf, 1.0), np.nan)
        c_lo, c_hi = float(np.nanmin(ratio)), float(np.nanmax(ratio))
        dev = np.abs(np.log(np.where(use, ratio, 1.0)))
        idx = np.unravel_index(int(np.argmax(dev)), dev.shape)
        worst = tuple(float(a) for a in pts[idx])
        logt = np.log(cloud.radii)
        drifts = []
        for j in range(ratio.shape[1]):
            ok = use[:, j]
            if ok.sum() >= 3:
                drifts.append(abs(_loglog_fit(logt[ok], np.log(ratio[ok, j]))[0]))
        drift = max(drifts) if drifts else float("nan")
    out_of_bounds = False
    if bounds is not None and use.any():
        out_of_bounds = c_lo < bounds[0] or c_hi > bounds[1]
    if mismatch.any():
        idx = np.unravel_index(int(np.argmax(mismatch)), mismatch.shape)
        worst = tuple(float(a) for a in pts[idx])
    violated = bool(mismatch.any() or out_of_bounds)
    return EquivReport(c_lo, c_hi, violated, worst, int(mismatch.sum()), drift, int(use.sum()))


# ---------------------------------------------------------------------------
# Hoelder exponent

@dataclass(frozen=True)
class HolderEstimate:
    alpha: float
    alpha_upper: float
    slopes: Tuple[float, ...]
    degenerate: bool


def holder_exponent_estimate(phi: MapExpr, x0, cloud: SampleCloud) -> HolderEstimate:
    """Slopes of log|phi(p) - phi(q)| against log|p - q| at shrinking scales.

    Two pair families are used: (x0, x0 + t v) for each direction v, and
    (x0 + t u, x0 + t w) for consecutive directions u, w.  ``alpha`` is the
    smallest slope (the Hoelder exponent of phi), ``alpha_upper`` the largest
    (its reciprocal bounds the exponent of the inverse).
    """
    x0 = np.asarray(x0, dtype=float).ravel()
    if x0.size != phi.n_inputs:
        raise VariableCountError("base point has the wrong dimension")
    pts = cloud.points()
    r, k, n = pts.shape
    vals = phi(pts.reshape(-1, n)).reshape(r, k, phi.n_outputs)
    base = phi(x0)
    slopes = []
    families = [(vals - base, np.broadcast_to(cloud.radii[:, None], (r, k)))]
    if k >= 2:
        nxt = np.roll(np.arange(k), -1)
        dx = np.linalg.norm(pts - pts[:, nxt, :], axis=2)
        families.append((vals - vals[:, nxt, :], dx))
    for dphi, dx in families:
        dn = _norms(dphi)
        for j in range(k):
            ok = np.isfinite(dn[:, j]) & (dn[:, j] > 0) & (dx[:, j] > 0)
            if ok.sum() >= 3:
                slopes.append(_loglog_fit(np.log(dx[ok, j]), np.log(dn[ok, j]))[0])
    if not slopes:
        return HolderEstimate(float("nan"), float("nan"), (), True)
    return HolderEstimate(float(min(slopes)), float(max(slopes)), tuple(slopes), False)


# ---------------------------------------------------------------------------
# pseudo-Lipschitz derivative

@dataclass(frozen=True)
class PseudoDerivative:
    j: Tuple[int, ...]
    values: np.ndarray
    flagged: Tuple[bool, ...]
    tail_distance: float

    @property
    def last(self) -> np.ndarray:
        good = [i for i, f in enumerate(self.flagged) if not f]
        return self.values[good[-1]] if good else np.full(self.values.shape[1], np.nan)


def pseudo_lipschitz_derivative_estimate(phi: MapExpr, x, v, j_list: Sequence[int]) -> PseudoDerivative:
    """The rescalings j (phi(x + v / j) - phi(x)) for j in ``j_list``.

    Entries where phi is undefined are flagged and skipped; ``tail_distance``
    is the largest pairwise distance among the last three good entries.
    """
    j_arr = [int(j) for j in j_list]
    if not j_arr or any(j <= 0 for j in j_arr) or any(b <= a for a, b in zip(j_arr, j_arr[1:])):
        raise ValueError("j_list must be increasing positive integers")
    x = np.asarray(x, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    base = phi(x)
    pts = x + v[None, :] / np.array(j_arr, dtype=float)[:, None]
    vals = np.array(j_arr, dtype=float)[:, None] * (phi(pts) - base)
    flagged = tuple(bool(not np.all(np.isfinite(row))) for row in vals)
    good = [i for i, f in enumerate(flagged) if not f][-3:]
    tail = 0.0
    for a in good:
        for b in good:
            tail = max(tail, float(np.linalg.norm(vals[a] - vals[b])))
    if not good:
        tail = float("nan")
    return PseudoDerivative(tuple(j_arr), vals, flagged, tail)


# ---------------------------------------------------------------------------
# ranks and kernels

def numeric_jacobian(F: MapExpr, x, step: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian, shape (p, n)."""
    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    E = np.eye(n) * step
    pts = np.vstack([x + E, x - E])
    vals = F(pts)
    J = (vals[:n] - vals[n:]).T / (2 * step)
    if not np.all(np.isfinite(J)):
        raise DomainError(f"Jacobian undefined near {tuple(x)}")
    return J


def numeric_rank(J: np.ndarray, rtol: float = RANK_RTOL, atol: float = 1e-9) -> int:
    s = np.linalg.svd(J, compute_uv=False)
    if s.size == 0 or s[0] <= atol:
        return 0
    return int(np.sum(s > max(rtol * s[0], atol)))


def _kernel(J: np.ndarray, rank: int) -> np.ndarray:
    _, _, vt = np.linalg.svd(J)
    return vt[rank:].T


@dataclass(frozen=True)
class RankReport:
    point: Tuple[float, ...]
    rank_F: Optional[int]
    rank_G_at_phi: Optional[int]
    kernels_match: bool
    error: Optional[str] = None

    @property
    def ranks_equal(self) -> bool:
        return self.rank_F is not None and self.rank_F == self.rank_G_at_phi


def rank_and_singular_check(F: MapExpr, G: MapExpr, phi: MapExpr, points, step: float = 1e-6,
                            rank_rtol: float = RANK_RTOL, kernel_tol: float = 1e-5):
    """Compare rank D_xF with rank D_phi(x)G and check d_x phi(ker D_xF) = ker D_phi(x)G."""
    reports = []
    for x in np.atleast_2d(np.asarray(points, dtype=float)):
        pt = tuple(float(a) for a in x)
        try:
            JF = numeric_jacobian(F, x, step)
            y = phi.evaluate_strict(x)
            JG = numeric_jacobian(G, y, step)
            Dphi = numeric_jacobian(phi, x, step)
        except DomainError as exc:
            reports.append(RankReport(pt, None, None, False, str(exc)))
            continue
        rF, rG = numeric_rank(JF, rank_rtol), numeric_rank(JG, rank_rtol)
        match = False
        if rF == rG:
            K = _kernel(JF, rF)
            if K.shape[1] == 0:
                match = True
            else:
                W = Dphi @ K
                full = numeric_rank(W, rank_rtol) == K.shape[1]
                resid = np.linalg.norm(JG @ W)
                scale = max(1.0, np.linalg.norm(JG)) * max(np.linalg.norm(W), 1e-300)
                match = bool(full and resid <= kernel_tol * scale)
        reports.append(RankReport(pt, rF, rG, match))
    return reports
