"""Coefficients of tail dependence.

eta_C is recovered from a gauge g as

    eta_C = [ min g(x)  over  x_i >= 1 (i in C),  x_i >= 0 (i not in C) ]^-1

which this module evaluates three ways, in order of preference: closed
forms where they exist (bivariate gallery, inverted-logistic trivariate,
the D-/C-vine recursions, the mixed trivariate cases), one-dimensional
root solves for the stationary points with proved unique roots, and
multi-start constrained numerical minimisation as the general fallback.
1/g(1, ..., 1) is always a lower bound for eta, with equality exactly when
the minimiser sits at the all-ones point.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .copulas import EV, IEV, PairCopula
from .errors import ConvergenceError, DomainError, ParameterError, UnsupportedCombinationError
from .gauges import Gauge, _minimise_coordinate, gauge_cvine, gauge_dvine, gauge_trivariate
from .measures import Logistic
from .vines import CVINE, DVINE, TRIVARIATE, VineSpec

__all__ = [
    "EtaResult",
    "eta_numeric",
    "eta_trivariate_ilog_closed",
    "eta13_trivariate_ilog",
    "eta_mixed_trivariate",
    "eta_dvine",
    "eta_cvine",
    "eta_dvine_ilog_closed",
]

CLOSED = "closed"
ROOT = "root"
NUMERIC = "numeric"

_ROOT_LO = 1e-12
_ROOT_HI = 1.0 - 1e-12
_ROOT_XTOL = 1e-12


@dataclass(frozen=True)
class EtaResult:
    """A coefficient of tail dependence with its minimiser and provenance."""

    eta: float
    argmin: np.ndarray
    method: str
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (0.0 < self.eta <= 1.0 + 1e-9):
            raise DomainError(f"eta must lie in (0, 1], got {self.eta}")


def _normalise_labels(C, dim):
    C = tuple(sorted(set(int(c) for c in C)))
    if not C or C[0] < 1 or C[-1] > dim:
        raise DomainError(f"index set must be a subset of 1..{dim}")
    return C


# ---------------------------------------------------------------------------
# generic numeric minimisation
# ---------------------------------------------------------------------------

def _nm(objective, y0, maxfev):
    return optimize.minimize(
        objective,
        y0,
        method="Nelder-Mead",
        options={"xatol": 1e-6, "fatol": 1e-10, "maxfev": maxfev, "maxiter": maxfev},
    )


def eta_numeric(g: Gauge, C=None, n_starts: int = 8, maxfev: int = 400) -> EtaResult:
    """eta_C by constrained multi-start minimisation of the gauge.

    Constrained coordinates are reparameterised as x = 1 + exp(y) and free
    coordinates as x = exp(y); on top of the log-spaced starts, the corner
    candidate (ones on C, zeros elsewhere) is evaluated exactly and every
    boundary subspace (a subset of the free coordinates pinned to zero) is
    scanned, so minima on the boundary are found exactly rather than
    approached through the reparameterisation.
    """
    d = g.dim
    C = _normalise_labels(C if C is not None else range(1, d + 1), d)
    if len(C) < 2:
        raise DomainError("eta is defined for index sets with at least two variables")
    cons = [c - 1 for c in C]
    free = [k for k in range(d) if k + 1 not in C]

    evals = {"count": 0}
    scalar = g.scalar_evaluator()  # points built below are always valid

    def gauge_at(x):
        evals["count"] += 1
        return float(scalar(*x))

    def run(pinned, scale, budget):
        """One Nelder-Mead run with the coordinates in `pinned` fixed at 0."""
        active_free = [k for k in free if k not in pinned]
        n_cons = len(cons)

        def unpack(y):
            x = [0.0] * d
            for pos, k in enumerate(cons):
                x[k] = 1.0 + math.exp(min(float(y[pos]), 700.0))
            for pos, k in enumerate(active_free):
                x[k] = math.exp(min(float(y[n_cons + pos]), 700.0))
            return x

        y0 = np.full(n_cons + len(active_free), np.log(scale))
        res = _nm(lambda y: gauge_at(unpack(y)), y0, budget)
        return float(res.fun), np.array(unpack(res.x))

    candidates = []

    # exact corner: ones on C, zeros on the free coordinates
    corner = np.zeros(d)
    corner[cons] = 1.0
    corner_val = gauge_at(corner.tolist())
    candidates.append((corner_val, corner, "corner"))

    scales = np.geomspace(0.05, 20.0, int(n_starts))
    full_runs = []
    for s in scales:
        val, x = run((), s, maxfev)
        full_runs.append(val)
        candidates.append((val, x, f"start{s:.3g}"))
    val, x = run((), 1e-8, maxfev)
    full_runs.append(val)
    candidates.append((val, x, "near-corner"))

    for r in range(1, len(free) + 1):
        for pinned in itertools.combinations(free, r):
            for s in (0.05, 1.0, 20.0):
                val, x = run(pinned, s, maxfev)
                candidates.append((val, x, f"boundary{pinned}"))

    best_val, best_x, _ = min(candidates, key=lambda c: c[0])
    if not np.isfinite(best_val):
        raise ConvergenceError("no minimisation start produced a finite gauge value",
                               {"C": C, "candidates": len(candidates)})

    # homogeneity clean-up: scale so that min over C equals one exactly
    m = float(np.min(best_x[cons]))
    if m > 0 and abs(m - 1.0) > 1e-12:
        best_x = best_x / m
        best_val = gauge_at(best_x.tolist())

    # snap to the corner when the optimum matches it to rounding
    if corner_val <= best_val + 1e-12:
        best_val, best_x = corner_val, corner

    spread = float(np.max(full_runs) - np.min(full_runs)) if full_runs else 0.0
    diagnostics = {
        "n_starts": len(full_runs),
        "spread": spread,
        "suspicious_landscape": bool(spread > 1e-4),
        "n_gauge_evals": evals["count"],
        "best_value": best_val,
    }
    return EtaResult(eta=1.0 / best_val, argmin=best_x, method=NUMERIC, diagnostics=diagnostics)


# ---------------------------------------------------------------------------
# inverted-logistic trivariate closed forms and root solves
# ---------------------------------------------------------------------------

def _check_ilog_param(name, a, allow_one=False):
    a = float(a)
    hi_ok = a <= 1.0 if allow_one else a < 1.0
    if not (0.0 < a and hi_ok):
        rng = "(0, 1]" if allow_one else "(0, 1)"
        raise ParameterError(f"{name} must lie in {rng}, got {a}")
    return a


def eta_trivariate_ilog_closed(alpha: float, beta: float, gamma: float) -> float:
    """eta_{123} for the all inverted-logistic trivariate vine.

    The gauge minimum over min(x) >= 1 sits at the all-ones point, giving
    [1 + {(2^a - 1)^(1/g) + (2^b - 1)^(1/g)}^g]^-1.
    """
    a = _check_ilog_param("alpha", alpha, allow_one=True)
    b = _check_ilog_param("beta", beta, allow_one=True)
    c = _check_ilog_param("gamma", gamma, allow_one=True)
    return 1.0 / (1.0 + ((2.0**a - 1.0) ** (1.0 / c) + (2.0**b - 1.0) ** (1.0 / c)) ** c)


def _ilog_g1v1(alpha, beta, gamma, v):
    f1 = (1.0 + v ** (1.0 / alpha)) ** alpha - v
    f2 = (1.0 + v ** (1.0 / beta)) ** beta - v
    return v + (f1 ** (1.0 / gamma) + f2 ** (1.0 / gamma)) ** gamma

def _ilog_g1v1_deriv(alpha, beta, gamma, v):
    with np.errstate(over="ignore"):
        f1 = (1.0 + v ** (1.0 / alpha)) ** alpha - v
        f2 = (1.0 + v ** (1.0 / beta)) ** beta - v
        d1 = (1.0 + v ** (-1.0 / alpha)) ** (alpha - 1.0) - 1.0
        d2 = (1.0 + v ** (-1.0 / beta)) ** (beta - 1.0) - 1.0
    s = f1 ** (1.0 / gamma) + f2 ** (1.0 / gamma)
    return 1.0 + s ** (gamma - 1.0) * (f1 ** (1.0 / gamma - 1.0) * d1 + f2 ** (1.0 / gamma - 1.0) * d2)


def eta13_trivariate_ilog(alpha: float, beta: float, gamma: float, force_root: bool = False) -> EtaResult:
    """eta_{13} for the all inverted-logistic trivariate vine.

    Minimises g(1, v, 1) over the middle coordinate: the stationarity
    equation has a unique root in (0, 1), found by bisection; for
    alpha = beta the root and the resulting eta have closed forms, used
    unless force_root is set.
    """
    a = _check_ilog_param("alpha", alpha)
    b = _check_ilog_param("beta", beta)
    c = _check_ilog_param("gamma", gamma)

    if a == b and not force_root:
        base = (1.0 - 2.0 ** (-c)) ** (-1.0 / (1.0 - a))
        v = (base - 1.0) ** (-a)
        eta = (base - 1.0) ** a / (1.0 - 2.0**c + 2.0**c * (1.0 - 2.0 ** (-c)) ** (-a / (1.0 - a)))
        return EtaResult(eta=eta, argmin=np.array([1.0, v, 1.0]), method=CLOSED,
                         diagnostics={"v": v})

    lo, hi = _ROOT_LO, _ROOT_HI
    flo = _ilog_g1v1_deriv(a, b, c, lo)
    fhi = _ilog_g1v1_deriv(a, b, c, hi)
    if not (flo < 0.0 < fhi):
        raise ConvergenceError("stationarity equation not bracketed on (0, 1); "
                               "uniqueness of the root makes this an implementation bug",
                               {"f(lo)": flo, "f(hi)": fhi})
    v = optimize.bisect(lambda t: _ilog_g1v1_deriv(a, b, c, t), lo, hi,
                        xtol=_ROOT_XTOL, maxiter=200)
    eta = 1.0 / _ilog_g1v1(a, b, c, v)
    return EtaResult(eta=eta, argmin=np.array([1.0, v, 1.0]), method=ROOT,
                     diagnostics={"v": v})


# ---------------------------------------------------------------------------
# mixed EV / inverted-EV trivariate cases
# ---------------------------------------------------------------------------

def _is_logistic(pc):
    return isinstance(pc.measure, Logistic)


def _free_coordinate_min(gauge, point, j):
    """Minimise the gauge over coordinate j with the others held fixed."""
    x = np.array(point, dtype=float)

    def f(t):
        x[j] = t
        return float(gauge(x))

    hi = max(10.0 * float(np.max(np.delete(x, j))), 1.05 * f(0.0), 1e-6)
    t_star, val = _minimise_coordinate(f, hi)
    x[j] = t_star
    return val, x


def _pair_margin_eta(spec, gauge, i, j, other):
    """eta for a pair directly linked in tree 1 (its copula is the margin)."""
    pc = spec.copula(i, j)
    point = np.zeros(3)
    point[[i - 1, j - 1]] = 1.0
    if pc.family == EV:
        eta = 1.0
    else:
        eta = 1.0 / float(pc.measure.V(1.0, 1.0))
    _, x = _free_coordinate_min(gauge, point, other - 1)
    return EtaResult(eta=eta, argmin=x, method=CLOSED, diagnostics={"pair": (i, j)})


def _eta13_eii_root(alpha, beta, gamma):
    """Stationary point of g(1, v, 1) for the (EV, IEV, IEV) logistic case."""

    def deriv(v):
        A = (1.0 - v) / alpha
        B = (1.0 + v ** (1.0 / beta)) ** beta - v
        dB = (1.0 + v ** (-1.0 / beta)) ** (beta - 1.0) - 1.0
        s = A ** (1.0 / gamma) + B ** (1.0 / gamma)
        return 1.0 + s ** (gamma - 1.0) * (
            -(alpha ** (-1.0 / gamma)) * (1.0 - v) ** (1.0 / gamma - 1.0)
            + B ** (1.0 / gamma - 1.0) * dB
        )

    v = optimize.bisect(deriv, _ROOT_LO, _ROOT_HI, xtol=_ROOT_XTOL, maxiter=200)
    A = (1.0 - v) / alpha
    B = (1.0 + v ** (1.0 / beta)) ** beta - v
    g = v + (A ** (1.0 / gamma) + B ** (1.0 / gamma)) ** gamma
    return 1.0 / g, v


def _eta13_eie_root(alpha, beta):
    """Root of (1 + v^(1/b))^b - (1 - v)/a - v on (0, 1)."""

    def f(v):
        return (1.0 + v ** (1.0 / beta)) ** beta - (1.0 - v) / alpha - v

    v = optimize.bisect(f, _ROOT_LO, _ROOT_HI, xtol=_ROOT_XTOL, maxiter=200)
    return (1.0 + v ** (1.0 / beta)) ** (-beta), v


def eta_mixed_trivariate(spec: VineSpec, C) -> EtaResult:
    """eta_C for a trivariate vine of EV / inverted-EV components.

    Dispatches to the derived closed form or root-solved value for the
    matched family pattern; parameter combinations without a derived result
    fall back to numeric minimisation of the analytic gauge, flagged by
    method = "numeric".  Patterns with the families of edges 12 and 23
    exchanged are handled by the x1 <-> x3 relabelling.
    """
    if spec.d != 3:
        raise UnsupportedCombinationError("eta_mixed_trivariate needs a trivariate vine")
    C = _normalise_labels(C, 3)
    gauge = gauge_trivariate(spec)

    if C in ((1, 2), (2, 3)):
        i, j = C
        return _pair_margin_eta(spec, gauge, i, j, other=({1, 2, 3} - set(C)).pop())

    c12, c23, c13 = spec.copula(1, 2), spec.copula(2, 3), spec.copula(1, 3)
    fams = (c12.family, c23.family, c13.family)

    if fams[0] == IEV and fams[1] == EV:
        mirrored = VineSpec.trivariate(
            PairCopula(c23.family, c23.measure.transposed()),
            PairCopula(c12.family, c12.measure.transposed()),
            PairCopula(c13.family, c13.measure.transposed()),
        )
        res = eta_mixed_trivariate(mirrored, C)
        return EtaResult(eta=res.eta, argmin=np.asarray(res.argmin)[::-1].copy(),
                         method=res.method, diagnostics=res.diagnostics | {"relabelled": "x1<->x3"})

    all_logistic = all(_is_logistic(pc) for pc in (c12, c23, c13))
    v12_11 = float(c12.measure.V(1.0, 1.0))
    v23_11 = float(c23.measure.V(1.0, 1.0))

    def numeric():
        return eta_numeric(gauge, C)

    if fams == (IEV, IEV, IEV):
        if not all_logistic:
            return numeric()
        a, b, g_ = c12.measure.alpha, c23.measure.alpha, c13.measure.alpha
        if C == (1, 2, 3):
            eta = eta_trivariate_ilog_closed(a, b, g_)
            return EtaResult(eta=eta, argmin=np.ones(3), method=CLOSED, diagnostics={})
        return eta13_trivariate_ilog(a, b, g_)

    if fams == (IEV, IEV, EV):
        if C == (1, 2, 3):
            eta = min(1.0 / v12_11, 1.0 / v23_11)
            # the minimum sits where the smaller tree-1 term catches the larger
            if v12_11 >= v23_11:
                x3 = optimize.bisect(
                    lambda t: float(c23.measure.V(1.0, 1.0 / t)) - v12_11,
                    1.0, max(v12_11, 1.0) + 1e-9, xtol=_ROOT_XTOL, maxiter=200,
                ) if v12_11 > v23_11 else 1.0
                arg = np.array([1.0, 1.0, x3])
            else:
                x1 = optimize.bisect(
                    lambda t: float(c12.measure.V(1.0 / t, 1.0)) - v23_11,
                    1.0, max(v23_11, 1.0) + 1e-9, xtol=_ROOT_XTOL, maxiter=200,
                )
                arg = np.array([x1, 1.0, 1.0])
            return EtaResult(eta=eta, argmin=arg, method=CLOSED, diagnostics={})
        # g(1, 0, 1) = 1, the smallest value a gauge can attain on the region
        return EtaResult(eta=1.0, argmin=np.array([1.0, 0.0, 1.0]), method=CLOSED, diagnostics={})

    if fams == (EV, IEV, IEV):
        if C == (1, 2, 3):
            return EtaResult(eta=1.0 / v23_11, argmin=np.ones(3), method=CLOSED, diagnostics={})
        if all_logistic:
            a, b, g_ = c12.measure.alpha, c23.measure.alpha, c13.measure.alpha
            eta, v = _eta13_eii_root(a, b, g_)
            x1 = 1.0  # minimum at x1 = x3 = 1 with x2 = v
            return EtaResult(eta=eta, argmin=np.array([x1, v, 1.0]), method=ROOT,
                             diagnostics={"v": v})
        return numeric()

    if fams == (EV, IEV, EV):
        if not all_logistic:
            return numeric()
        a, b = c12.measure.alpha, c23.measure.alpha
        if C == (1, 2, 3):
            eta = 2.0 ** (-b)
            arg = np.array([a * 2.0**b + 1.0 - a, 1.0, 1.0])
            return EtaResult(eta=eta, argmin=arg, method=CLOSED, diagnostics={})
        eta, v = _eta13_eie_root(a, b)
        x1 = v + a * ((1.0 + v ** (1.0 / b)) ** b - v)
        return EtaResult(eta=eta, argmin=np.array([x1, v, 1.0]), method=ROOT,
                         diagnostics={"v": v})

    if fams in ((EV, EV, IEV), (EV, EV, EV)):
        # g(1,1,1) = 1: asymptotic dependence, every eta_C equals one
        return EtaResult(eta=1.0, argmin=np.ones(3), method=CLOSED, diagnostics={})

    raise UnsupportedCombinationError(f"no mixed-case result for family pattern {fams}")


# ---------------------------------------------------------------------------
# D-vine and C-vine recursions
# ---------------------------------------------------------------------------

def eta_dvine(spec: VineSpec) -> float:
    """eta_D for an all-IEV D-vine via the nested sub-vine recursion.

    Reciprocals of eta combine exactly like the block gauges evaluated at
    the all-ones point; singletons contribute eta = 1.  Derived for
    inverted-logistic components; other all-IEV measures fall back to
    numeric minimisation of the recursive gauge (with a warning).
    """
    if spec.structure not in (DVINE, TRIVARIATE):
        raise UnsupportedCombinationError("eta_dvine requires a dvine structure")
    if not spec.all_iev():
        raise UnsupportedCombinationError("eta_dvine requires all-IEV edges")
    d = spec.d
    if not all(_is_logistic(pc) for pc in spec.edges.values()):
        warnings.warn("non-logistic IEV edges: eta_dvine falls back to numeric minimisation")
        return eta_numeric(gauge_dvine(spec)).eta
    if d == 2:
        return 1.0 / float(spec.copula(1, 2).measure.V(1.0, 1.0))

    memo = {}

    def r(i, j):  # reciprocal eta of the block [i, j]
        key = (i, j)
        if key not in memo:
            if i == j:
                memo[key] = 1.0
            elif j == i + 1:
                memo[key] = float(spec.copula(i, j).measure.V(1.0, 1.0))
            else:
                inner = r(i + 1, j - 1)
                left = r(i, j - 1)
                right = r(i + 1, j)
                V = spec.copula(i, j).measure.V
                memo[key] = inner + float(V(1.0 / (left - inner), 1.0 / (right - inner)))
        return memo[key]

    return 1.0 / r(1, d)


def eta_cvine(spec: VineSpec) -> float:
    """eta_D for an all-IEV C-vine; the C-vine analogue of the D-vine
    recursion, over the sub-vines {1..k} and {1..k-1, m}."""
    if spec.structure != CVINE:
        raise UnsupportedCombinationError("eta_cvine requires a cvine structure")
    if not spec.all_iev():
        raise UnsupportedCombinationError("eta_cvine requires all-IEV edges")
    d = spec.d
    if not all(_is_logistic(pc) for pc in spec.edges.values()):
        warnings.warn("non-logistic IEV edges: eta_cvine falls back to numeric minimisation")
        return eta_numeric(gauge_cvine(spec)).eta
    if d == 2:
        return 1.0 / float(spec.copula(1, 2).measure.V(1.0, 1.0))

    memo = {}

    def r(k, m):  # reciprocal eta of the set {1..k} U {m}
        key = (k, m)
        if key not in memo:
            if k == 0:
                memo[key] = 1.0
            elif k == 1:
                memo[key] = float(spec.copula(1, m).measure.V(1.0, 1.0))
            else:
                inner = r(k - 2, k - 1)
                no_m = r(k - 1, k)
                no_k = r(k - 1, m)
                V = spec.copula(k, m).measure.V
                memo[key] = inner + float(V(1.0 / (no_m - inner), 1.0 / (no_k - inner)))
        return memo[key]

    return 1.0 / r(d - 1, d)


def eta_dvine_ilog_closed(alpha: float, d: int) -> float:
    """eta_D for a D-vine of inverted-logistic copulas with equal parameter.

    d = 2 recovers the known bivariate value 2^-alpha; for d >= 3 the
    recursion telescopes into a geometric series with separate odd and even
    forms.
    """
    a = _check_ilog_param("alpha", alpha, allow_one=True)
    d = int(d)
    if d < 2:
        raise ParameterError(f"dimension must be at least 2, got {d}")
    if d == 2:
        return 2.0 ** (-a)
    if a == 1.0:
        return 1.0 / d  # independence edges; the geometric series telescopes to d
    q = 2.0**a - 1.0
    if d % 2 == 1:
        return 1.0 / (1.0 + q * (1.0 - q ** (d - 1)) / (2.0 - 2.0**a))
    return (2.0 - 2.0**a) / (1.0 - q**d)
