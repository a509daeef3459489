"""Tools for germs whose initial part has an isolated singularity.

For such germs the Milnor number is ``(ord f - 1)^n`` and the germ is
determined by its jet of order ``(ord f - 1)^n + 1``.  This module also
builds the rescaled family ``h_t(x) = t^-m g(t x)`` and scans its gradient
on a small sphere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np
from scipy.stats import norm, qmc

from .base import PreconditionError
from .germ import initial_part, order_at
from .local_algebra import milnor_number
from .poly import Polynomial


@dataclass(frozen=True)
class HomogeneityReport:
    is_homogeneous: bool
    degree: Optional[int]
    isolated: bool


def homogeneity_report(f: Polynomial) -> HomogeneityReport:
    """Whether f is homogeneous, and whether its initial part at 0 is isolated."""
    homogeneous = not f.is_zero and f.is_homogeneous()
    degree = f.degree if homogeneous else None
    isolated = False if f.is_zero else milnor_number(initial_part(f)).is_finite
    return HomogeneityReport(homogeneous, degree, isolated)


def _require_isolated_initial_part(f: Polynomial, max_steps=None):
    if f.is_zero:
        raise PreconditionError("initial part not algebraically isolated: zero germ")
    lead = initial_part(f)
    if not milnor_number(lead, max_steps=max_steps).is_finite:
        raise PreconditionError(
            f"initial part not algebraically isolated: in(f) = {lead} has infinite Milnor number"
        )
    return lead


def homogeneous_milnor_formula(f: Polynomial, max_steps=None) -> int:
    """(ord f - 1)^n, valid when in(f) has an algebraically isolated singularity."""
    _require_isolated_initial_part(f, max_steps)
    return (order_at(f) - 1) ** f.nvars


def determinacy_bound(f: Polynomial, max_steps=None) -> int:
    """Jet order (ord f - 1)^n + 1 that determines f up to smooth coordinate change."""
    return homogeneous_milnor_formula(f, max_steps) + 1


def jet(f: Polynomial, k: int) -> Polynomial:
    """Truncation of f to total degree <= k."""
    if k < 0:
        raise ValueError("jet order must be non-negative")
    return f.truncate(k)


@dataclass(frozen=True)
class FormulaCheck:
    mu_exact: object
    mu_formula: int
    agree: bool


def verify_milnor_equals_formula(f: Polynomial, max_steps=None) -> FormulaCheck:
    formula = homogeneous_milnor_formula(f, max_steps)
    exact = milnor_number(f, max_steps=max_steps).value
    return FormulaCheck(exact, formula, exact == formula)


# ---------------------------------------------------------------------------
# rescaled family

@dataclass(frozen=True)
class RescaledFamily:
    """``g`` split into graded parts ``g_m, g_{m+1}, ...`` with ``m = ord g``.

    ``parts[i]`` is the homogeneous component of degree ``m + i`` (possibly
    zero), so that ``h_t = sum_i t^i parts[i]``.
    """

    base: Polynomial
    m: int
    parts: Tuple[Polynomial, ...]

    @classmethod
    def from_polynomial(cls, g: Polynomial) -> "RescaledFamily":
        if g.is_zero:
            raise PreconditionError("the zero germ has no rescaled family")
        if g.constant_term():
            raise PreconditionError("the germ must vanish at the origin")
        m = g.low_degree
        parts = tuple(g.homogeneous_component(d) for d in range(m, g.degree + 1))
        return cls(g, m, parts)

    @property
    def initial(self) -> Polynomial:
        return self.parts[0]


def rescaled_member(fam: RescaledFamily, t) -> Polynomial:
    """h_t(x) = t^-m g(t x); the t = 0 member is the initial part g_m."""
    t = Fraction(t)
    out = Polynomial.zero(fam.base.nvars)
    power = Fraction(1)
    for i, part in enumerate(fam.parts):
        if i:
            power *= t
            if not power:
                break
        out = out + part.scale(power)
    return out


@dataclass(frozen=True)
class GradientScan:
    ok: bool
    min_gradient_norm: float
    witness: Optional[Tuple[float, ...]]
    witness_t: Optional[float]


def sphere_points(n: int, count: int, radius: float = 1.0, seed: int = 0) -> np.ndarray:
    """Quasi-uniform points on the sphere of the given radius in R^n.

    A scrambled Halton sequence is pushed through the Gaussian quantile
    function and normalized, so the result is deterministic given ``seed``.
    """
    if n == 1:
        return np.array([[radius], [-radius]])
    u = qmc.Halton(d=n, scramble=True, seed=seed).random(count)
    u = np.clip(u, 1e-12, 1 - 1e-12)
    z = norm.ppf(u)
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return radius * z


def _poly_values(p: Polynomial, pts: np.ndarray) -> np.ndarray:
    out = np.zeros(len(pts))
    for m, c in p.terms:
        term = np.full(len(pts), float(c))
        for i, e in enumerate(m):
            if e:
                term *= pts[:, i] ** e
        out += term
    return out


def gradient_nonvanishing_scan(fam: RescaledFamily, t0, eps: float, samples: int,
                               t_steps: int = 16, seed: int = 0, zero_tol: float = 1e-12,
                               check_precondition: bool = True) -> GradientScan:
    """Sample |grad h_t| on the real sphere of radius eps for t in (0, t0].

    Advisory only: the homotopy argument lives on the complex sphere and
    is not certified by a finite real scan.
    """
    if check_precondition and not milnor_number(fam.initial).is_finite:
        raise PreconditionError(
            f"initial part not algebraically isolated: {fam.initial} has infinite Milnor number"
        )
    t0 = float(t0)
    if not t0 > 0:
        raise ValueError("t0 must be positive")
    pts = sphere_points(fam.base.nvars, samples, eps, seed)
    grads = [[d for d in part.gradient()] for part in fam.parts]
    best = (np.inf, None, None)
    for t in t0 * np.arange(1, t_steps + 1) / t_steps:
        comps = np.zeros((len(pts), fam.base.nvars))
        for i, gpart in enumerate(grads):
            w = t ** i
            for j, d in enumerate(gpart):
                if not d.is_zero:
                    comps[:, j] += w * _poly_values(d, pts)
        norms = np.linalg.norm(comps, axis=1)
        k = int(np.argmin(norms))
        if norms[k] < best[0]:
            best = (float(norms[k]), pts[k], float(t))
    min_norm, where, t_at = best
    ok = min_norm > zero_tol
    witness = None if ok else tuple(float(a) for a in where)
    return GradientScan(ok, min_norm, witness, None if ok else t_at)
