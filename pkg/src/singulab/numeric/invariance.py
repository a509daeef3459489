"""Classify a (f, g, phi) triple against the Milnor-number invariance theorems.

Each theorem has a short list of hypotheses, checked in a fixed order.  The
first failing one is reported as ``failed_hypothesis``.  A contradiction to
a theorem would require every hypothesis to hold while the conclusion
fails; such a report would point at the sampled evidence, not the theorem.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..base import INFINITE
from ..germ import initial_part, order_at
from ..local_algebra import milnor_number
from ..poly import Polynomial, default_names
from .estimators import ZERO_TOL, asymptotic_ratio_check, holder_exponent_estimate
from .expr import MapExpr
from .sampling import SampleCloud, unit_directions

THEOREMS = ("asymptotic-lipschitz", "c1-equivalence", "variety-diffeomorphism")

# failure labels
NOT_EQUIVALENT = "not_equivalent"
ZERO_SET_ONLY = "zero_set_only_equivalence"
HOLDER_NOT_LIPSCHITZ = "holder_not_lipschitz"
INVERSE_NOT_LIPSCHITZ = "inverse_not_lipschitz"
NON_ISOLATED_INITIAL_PART = "non_isolated_initial_part"
NOT_A_COMPOSITION = "not_a_composition"
INSUFFICIENT_SMOOTHNESS = "insufficient_smoothness"
ZERO_SETS_DIFFER = "zero_sets_differ"


# ---------------------------------------------------------------------------
# zero sets

def _circle_zeros(F: MapExpr, x0, e1, e2, radius, n_angles):
    theta = np.linspace(0.0, 2 * np.pi, n_angles, endpoint=False)

    def at(th):
        th = np.atleast_1d(th)
        pts = x0 + radius * (np.cos(th)[:, None] * e1 + np.sin(th)[:, None] * e2)
        return pts, F(pts)[:, 0]

    pts, vals = at(theta)
    zeros = [pts[i] for i in np.flatnonzero(vals == 0)]
    nxt = np.roll(np.arange(n_angles), -1)
    step = 2 * np.pi / n_angles
    for i in np.flatnonzero(np.sign(vals) * np.sign(vals[nxt]) < 0):
        lo, hi = theta[i], theta[i] + step
        flo = vals[i]
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            _, fm = at(mid)
            if fm[0] == 0:
                lo = hi = mid
                break
            if np.sign(fm[0]) == np.sign(flo):
                lo, flo = mid, fm[0]
            else:
                hi = mid
        zeros.append(at(0.5 * (lo + hi))[0][0])
    return zeros, pts


def _planes(n: int, seed: int, count: int = 6):
    if n == 2:
        return [(np.array([1.0, 0.0]), np.array([0.0, 1.0]))]
    dirs = unit_directions(n, 2 * count, seed)
    out = []
    for a, b in zip(dirs[0::2], dirs[1::2]):
        b = b - a * (a @ b)
        out.append((a, b / np.linalg.norm(b)))
    return out


def _contained(F: MapExpr, H: MapExpr, x0, radii, seed, n_angles, rel_tol):
    # every sampled zero of F is (relatively) a zero of H
    for e1, e2 in _planes(F.n_inputs, seed):
        for r in radii:
            zeros, circle = _circle_zeros(F, x0, e1, e2, r, n_angles)
            if not zeros:
                continue
            scale = np.nanmax(np.abs(H(circle)[:, 0]))
            if not np.isfinite(scale) or scale == 0:
                continue
            hz = np.abs(H(np.array(zeros))[:, 0])
            if np.any(~np.isfinite(hz)) or np.any(hz > rel_tol * scale):
                return False
    return True


def zero_sets_correspond(F: MapExpr, H: MapExpr, x0, radii: Sequence[float], seed: int = 0,
                         n_angles: int = 720, rel_tol: float = 1e-6) -> bool:
    """Sampled check that F and H have the same zero set near x0.

    Zeros are located by sign changes on circles in a few 2-planes; zeros of
    even multiplicity (no sign change) are not seen.
    """
    x0 = np.asarray(x0, dtype=float).ravel()
    if F.n_outputs != 1 or H.n_outputs != 1:
        raise ValueError("zero-set comparison needs scalar functions")
    h0, f0 = H(x0)[0], F(x0)[0]
    if (f0 == 0) != (h0 == 0):
        return False
    return (_contained(F, H, x0, radii, seed, n_angles, rel_tol)
            and _contained(H, F, x0, radii, seed, n_angles, rel_tol))


# ---------------------------------------------------------------------------
# case report

@dataclass
class CaseReport:
    theorem: str
    ord_f: object
    ord_g: object
    mu_f: object
    mu_g: object
    mu_in_f: object
    mu_in_g: object
    holder_alpha: float
    holder_alpha_upper: float
    phi_smoothness: object
    c_lower: float
    c_upper: float
    ratio_drift: float
    radius_range: Tuple[float, float]
    equivalence_verdict: str
    hypotheses: Dict[str, bool]
    failed_hypotheses: List[str]
    failed_hypothesis: Optional[str]
    conclusion_holds: bool
    theorem_consistent: bool
    counterexample: bool
    notes: List[str] = field(default_factory=list)


def check_invariance_case(f: Polynomial, g: Polynomial, phi: MapExpr, cloud: Optional[SampleCloud] = None,
                          theorem: str = "asymptotic-lipschitz", lipschitz_tol: float = 0.05,
                          drift_tol: float = 0.05, composition_tol: float = 1e-6,
                          zero_tol: float = ZERO_TOL, max_steps: Optional[int] = None) -> CaseReport:
    """Assemble symbolic invariants and sampled evidence for f versus g o phi.

    ``theorem`` selects the invariance statement whose hypotheses are tested:

    * ``asymptotic-lipschitz``: f ~ g o phi near 0 with phi bi-Lipschitz and
      both initial parts algebraically isolated imply equal orders and mu;
    * ``c1-equivalence``: f = g o phi with phi C^1 and in(f) isolated;
    * ``variety-diffeomorphism``: phi a C^infinity diffeomorphism carrying
      V(f) onto V(g) (irreducibility and analyticity are not checked).
    """
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem {theorem!r}; expected one of {THEOREMS}")
    if f.nvars != g.nvars or phi.n_inputs != f.nvars or phi.n_outputs != f.nvars:
        raise ValueError("f, g and phi must all live on the same R^n")
    n = f.nvars
    names = phi.variables or default_names(n)
    x0 = np.zeros(n)
    if cloud is None:
        cloud = SampleCloud.default(x0)

    ord_f, ord_g = order_at(f), order_at(g)
    mu_f = milnor_number(f, max_steps=max_steps).value
    mu_g = milnor_number(g, max_steps=max_steps).value
    mu_in_f = milnor_number(initial_part(f), max_steps=max_steps).value if not f.is_zero else INFINITE
    mu_in_g = milnor_number(initial_part(g), max_steps=max_steps).value if not g.is_zero else INFINITE

    F = MapExpr.from_polynomial(f, names)
    G_phi = MapExpr.from_polynomial(g, names).compose(phi)
    ratio = asymptotic_ratio_check(F, G_phi, cloud, zero_tol=zero_tol)
    holder = holder_exponent_estimate(phi, x0, cloud)
    smooth = phi.smoothness_class(x0)
    zero_ok = zero_sets_correspond(F, G_phi, x0, cloud.radii[::5], seed=cloud.seed)

    equivalent = (not ratio.violated) and np.isfinite(ratio.drift) and ratio.drift <= drift_tol
    composition = (not ratio.violated and abs(ratio.c_lower - 1) <= composition_tol
                   and abs(ratio.c_upper - 1) <= composition_tol)
    if equivalent:
        verdict = "asymptotic"
    elif zero_ok:
        verdict = "zero-set-only"
    else:
        verdict = "none"

    checks = []  # (hypothesis name, holds, failure label)
    if theorem == "asymptotic-lipschitz":
        checks.append(("asymptotically_equivalent", equivalent,
                       ZERO_SET_ONLY if zero_ok else NOT_EQUIVALENT))
        lip_low = not holder.degenerate and holder.alpha >= 1 - lipschitz_tol
        lip_high = not holder.degenerate and holder.alpha_upper <= 1 + lipschitz_tol
        checks.append(("phi_lipschitz", lip_low, HOLDER_NOT_LIPSCHITZ))
        checks.append(("phi_inverse_lipschitz", lip_high, INVERSE_NOT_LIPSCHITZ))
        checks.append(("initial_parts_isolated", mu_in_f != INFINITE and mu_in_g != INFINITE,
                       NON_ISOLATED_INITIAL_PART))
        conclusion = mu_f == mu_g and ord_f == ord_g
    elif theorem == "c1-equivalence":
        checks.append(("f_equals_g_of_phi", composition, ZERO_SET_ONLY if zero_ok else NOT_A_COMPOSITION))
        checks.append(("phi_c1", smooth >= 1, INSUFFICIENT_SMOOTHNESS))
        checks.append(("initial_part_f_isolated", mu_in_f != INFINITE, NON_ISOLATED_INITIAL_PART))
        conclusion = mu_f == mu_g
    else:
        checks.append(("zero_sets_correspond", zero_ok, ZERO_SETS_DIFFER))
        checks.append(("phi_smooth", smooth == INFINITE, INSUFFICIENT_SMOOTHNESS))
        conclusion = mu_f == mu_g

    hypotheses = {name: bool(ok) for name, ok, _ in checks}
    failed = [label for _, ok, label in checks if not ok]
    all_hold = not failed
    consistent = (not all_hold) or conclusion
    notes = []
    if verdict == "zero-set-only":
        notes.append("phi matches the zero sets but f is not asymptotically equivalent to g o phi")
    if theorem == "variety-diffeomorphism":
        notes.append("irreducibility and analyticity of f, g are not checked")
    if not consistent:
        notes.append("all sampled hypotheses hold but the conclusion fails; suspect the sampled evidence")
    return CaseReport(
        theorem=theorem,
        ord_f=ord_f, ord_g=ord_g, mu_f=mu_f, mu_g=mu_g, mu_in_f=mu_in_f, mu_in_g=mu_in_g,
        holder_alpha=holder.alpha, holder_alpha_upper=holder.alpha_upper,
        phi_smoothness=smooth,
        c_lower=ratio.c_lower, c_upper=ratio.c_upper, ratio_drift=ratio.drift,
        radius_range=(float(cloud.radii[0]), float(cloud.radii[-1])),
        equivalence_verdict=verdict,
        hypotheses=hypotheses,
        failed_hypotheses=failed,
        failed_hypothesis=failed[0] if failed else None,
        conclusion_holds=bool(conclusion),
        theorem_consistent=bool(consistent),
        counterexample=not consistent,
        notes=notes,
    )
