"""Built-in inventory of worked examples with their published values.

Every expected value carries a provenance tag: ``paper`` when the number is
printed in the source text, ``derived`` when it follows from a stated result
(for instance the (d - 1)^n formula at intermediate family parameters).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np

from .base import INFINITE
from .germ import initial_part
from .local_algebra import milnor_number
from .numeric.estimators import asymptotic_ratio_check, estimate_order, holder_exponent_estimate
from .numeric.expr import MapExpr
from .numeric.invariance import check_invariance_case
from .numeric.sampling import SampleCloud
from .parser import parse_map, parse_polynomial

XY = ("x", "y")
K_VALUES = (1, 2, 3)
T_GRID = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))


@dataclass(frozen=True)
class Expect:
    value: object
    source: str = "paper"
    tol: float = 0.0

    def matches(self, computed) -> bool:
        if isinstance(self.value, (bool, str)) or self.value is None:
            return computed == self.value
        if computed is None or isinstance(computed, (bool, str)):
            return False
        if self.tol == 0:
            return computed == self.value
        return abs(float(computed) - float(self.value)) <= self.tol


@dataclass
class CaseSpec:
    case: str
    family: str
    params: Dict[str, object]
    expected: Dict[str, Expect]
    compute: Callable[[], Dict[str, object]]


@dataclass
class CaseResult:
    case: str
    expected: Dict[str, object]
    computed: Dict[str, object]
    passed: bool
    provenance: Dict[str, str] = field(default_factory=dict)
    error: Optional[str] = None


def _poly(src, names=XY):
    return parse_polynomial(src, names).value


def _map(src, names=XY):
    return parse_map(src, names).value


def _mu(src, names=XY):
    return milnor_number(_poly(src, names)).value


def _mu_in(src, names=XY):
    return milnor_number(initial_part(_poly(src, names))).value


def _fmt_t(t: Fraction) -> str:
    return str(t.numerator) if t.denominator == 1 else f"{t.numerator}/{t.denominator}"


# ---------------------------------------------------------------------------
# families

def _ex1_2(i):
    names = ("x1", "x2", "x3")
    src = f"x1^{2 * i} + x2^2 - x3^2"
    return CaseSpec(f"ex1.2i{i}", "ex1.2", {"i": i, "f": src},
                    {"mu": Expect(2 * i - 1)},
                    lambda: {"mu": _mu(src, names)})


def _ex1_3():
    return CaseSpec("ex1.3", "ex1.3", {"f": "x^4 - y^3", "g": "y"},
                    {"mu_f": Expect(6), "mu_g": Expect(0)},
                    lambda: {"mu_f": _mu("x^4 - y^3"), "mu_g": _mu("y")})


def _ex1_4():
    def run():
        rep = check_invariance_case(_poly("x^4 - y^3"), _poly("y"), _map("x; x^(4/3) - y"))
        return {"mu_f": rep.mu_f, "mu_g": rep.mu_g, "phi_smoothness": rep.phi_smoothness,
                "equivalence_verdict": rep.equivalence_verdict,
                "failed_hypothesis": rep.failed_hypothesis,
                "theorem_consistent": rep.theorem_consistent}

    return CaseSpec("ex1.4", "ex1.4", {"f": "x^4 - y^3", "g": "y", "phi": "x; x^(4/3) - y"},
                    {"mu_f": Expect(6), "mu_g": Expect(0),
                     "phi_smoothness": Expect(1),
                     "equivalence_verdict": Expect("zero-set-only", "derived"),
                     "failed_hypothesis": Expect("zero_set_only_equivalence", "derived"),
                     "theorem_consistent": Expect(True, "derived")},
                    run)


def _ex3_3():
    def run():
        F = _map("x/abs(x)^(1/2)", ("x",))
        est = estimate_order(F, [0.0], SampleCloud.default([0.0]), base_value=0.0)
        return {"order_estimate": est.value}

    return CaseSpec("ex3.3", "ex3.3", {"f": "x/abs(x)^(1/2)"},
                    {"order_estimate": Expect(0.5, "paper", 0.05)}, run)


def _ex4_4(k):
    a, b = 2 * k + 1, 2 * k + 3
    f_src, g_src = f"x^{a} + y^{a}", f"x^{b} + y^{b}"
    phi_src = f"x^({a}/{b}); y^({a}/{b})"

    def run():
        f, g, phi = _poly(f_src), _poly(g_src), _map(phi_src)
        cloud = SampleCloud.default([0.0, 0.0])
        hol = holder_exponent_estimate(phi, [0.0, 0.0], cloud)
        ratio = asymptotic_ratio_check(MapExpr.from_polynomial(f, XY),
                                       MapExpr.from_polynomial(g, XY).compose(phi), cloud)
        rep = check_invariance_case(f, g, phi, cloud)
        return {"mu_f": rep.mu_f, "mu_g": rep.mu_g, "ord_f": rep.ord_f, "ord_g": rep.ord_g,
                "holder_alpha": hol.alpha,
                "ratio_in_band": bool(not ratio.violated and 0.99 <= ratio.c_lower and ratio.c_upper <= 1.01),
                "failed_hypothesis": rep.failed_hypothesis,
                "theorem_consistent": rep.theorem_consistent}

    return CaseSpec(f"ex4.4k{k}", "ex4.4", {"k": k, "f": f_src, "g": g_src, "phi": phi_src},
                    {"mu_f": Expect(4 * k * k), "mu_g": Expect((2 * k + 2) ** 2),
                     "ord_f": Expect(a, "derived"), "ord_g": Expect(b, "derived"),
                     "holder_alpha": Expect(a / b, "paper", 0.02),
                     "ratio_in_band": Expect(True, "paper"),
                     "failed_hypothesis": Expect("holder_not_lipschitz", "derived"),
                     "theorem_consistent": Expect(True, "derived")},
                    run)


def _ex4_6_src(t: Fraction) -> str:
    return f"x^4 + y^4 + 2*({_fmt_t(t)})*(x^2*y^2 + y^6)"


def _ex4_6(t: Fraction):
    src = _ex4_6_src(t)
    if t == 0:
        mu = Expect(9)
    elif t == 1:
        mu = Expect(13)
    else:
        mu = Expect(9, "derived")
    expected = {"mu": mu, "initial_isolated": Expect(t != 1, "paper")}

    def run():
        return {"mu": _mu(src), "initial_isolated": _mu_in(src) != INFINITE}

    return CaseSpec(f"ex4.6t{_fmt_t(t)}", "ex4.6", {"t": _fmt_t(t), "f": src}, expected, run)


def _ex4_6_pair():
    f0, f1 = _ex4_6_src(Fraction(0)), _ex4_6_src(Fraction(1))

    def run():
        rep = check_invariance_case(_poly(f0), _poly(f1), MapExpr.identity(XY))
        return {"mu_f": rep.mu_f, "mu_g": rep.mu_g, "failed_hypothesis": rep.failed_hypothesis,
                "theorem_consistent": rep.theorem_consistent}

    return CaseSpec("ex4.6pair", "ex4.6", {"f": f0, "g": f1, "phi": "x; y"},
                    {"mu_f": Expect(9), "mu_g": Expect(13),
                     "failed_hypothesis": Expect("non_isolated_initial_part", "derived"),
                     "theorem_consistent": Expect(True, "derived")},
                    run)


def _ex4_7(t: Fraction):
    src = f"x^4 + y^4 + 2*({_fmt_t(t)})*x^2*y^2"
    return CaseSpec(f"ex4.7t{_fmt_t(t)}", "ex4.7", {"t": _fmt_t(t), "f": src},
                    {"mu": Expect(INFINITE if t == 1 else 9)},
                    lambda: {"mu": _mu(src)})


def _ex5_3(k, t: Fraction):
    src = f"x^4 + 2*x^2*y^2 + y^4 + ({_fmt_t(t)})*y^{k + 5}"
    mu = Expect(INFINITE) if t == 0 else Expect(2 * (k + 5) + 1)
    return CaseSpec(f"ex5.3k{k}t{_fmt_t(t)}", "ex5.3", {"k": k, "t": _fmt_t(t), "f": src},
                    {"mu": mu, "initial_isolated": Expect(False)},
                    lambda: {"mu": _mu(src), "initial_isolated": _mu_in(src) != INFINITE})


def _ex5_5(k):
    f_src = f"x^{3 * k + 1} - y^3"
    phi_src = f"x; x^({3 * k + 1}/3) - y"

    def run():
        rep = check_invariance_case(_poly(f_src), _poly("y"), _map(phi_src),
                                    theorem="variety-diffeomorphism")
        return {"mu_f": rep.mu_f, "mu_g": rep.mu_g, "phi_smoothness": rep.phi_smoothness,
                "failed_hypothesis": rep.failed_hypothesis,
                "theorem_consistent": rep.theorem_consistent}

    return CaseSpec(f"ex5.5k{k}", "ex5.5", {"k": k, "f": f_src, "g": "y", "phi": phi_src},
                    {"mu_f": Expect(6 * k), "mu_g": Expect(0), "phi_smoothness": Expect(k),
                     "failed_hypothesis": Expect("insufficient_smoothness", "derived"),
                     "theorem_consistent": Expect(True, "derived")},
                    run)


FAMILIES = ("ex1.2", "ex1.3", "ex1.4", "ex3.3", "ex4.4", "ex4.6", "ex4.7", "ex5.3", "ex5.5")


def inventory(k: Optional[int] = None, t: Optional[Fraction] = None) -> List[CaseSpec]:
    """All cases, with family parameters optionally pinned by ``k`` and ``t``.

    ``k`` also selects ``i`` for the ex1.2 family.  Without ``t`` the t-grid
    families use {0, 1/4, 1/2, 3/4, 1} and ex5.3 uses t = 1.
    """
    if k is not None and k < 1:
        raise ValueError("k must be a positive integer")
    if t is not None and not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    ks = (k,) if k is not None else K_VALUES
    is_ = (k,) if k is not None else (1, 2, 3, 4)
    ts = (t,) if t is not None else T_GRID
    cases = [_ex1_2(i) for i in is_]
    cases += [_ex1_3(), _ex1_4(), _ex3_3()]
    cases += [_ex4_4(kk) for kk in ks]
    cases += [_ex4_6(tt) for tt in ts]
    if t is None:
        cases.append(_ex4_6_pair())
    cases += [_ex4_7(tt) for tt in ts]
    cases += [_ex5_3(kk, t if t is not None else Fraction(1)) for kk in ks]
    cases += [_ex5_5(kk) for kk in ks]
    return cases


def select(cases: Iterable[CaseSpec], case_id: Optional[str]) -> List[CaseSpec]:
    cases = list(cases)
    if case_id is None:
        return cases
    chosen = [c for c in cases if c.case == case_id or c.family == case_id]
    if not chosen:
        raise KeyError(case_id)
    return chosen


def jsonable(value):
    if isinstance(value, float) and math.isinf(value):
        return "infinite"
    if isinstance(value, (np.floating,)):
        return jsonable(float(value))
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, Fraction):
        return str(value)
    return value


def run_case(spec: CaseSpec) -> CaseResult:
    expected = {name: jsonable(e.value) for name, e in spec.expected.items()}
    provenance = {name: e.source for name, e in spec.expected.items()}
    try:
        computed = spec.compute()
    except Exception as exc:  # one broken case must not abort the run
        return CaseResult(spec.case, expected, {}, False, provenance, f"{type(exc).__name__}: {exc}")
    ok = all(e.matches(computed.get(name)) for name, e in spec.expected.items())
    return CaseResult(spec.case, expected, {n: jsonable(v) for n, v in computed.items()}, ok, provenance)


def run_cases(case_id: Optional[str] = None, k: Optional[int] = None,
              t: Optional[Fraction] = None) -> List[CaseResult]:
    return [run_case(spec) for spec in select(inventory(k, t), case_id)]

