"""Extreme value and inverted extreme value pair copulas on uniform margins.

Both families are driven by an exponent measure V:

    EV:   C(u, v) = exp{-V(-1/ln u, -1/ln v)}
    IEV:  C(u, v) = u + v - 1 + exp{-V(-1/ln(1-u), -1/ln(1-v))}

The h-function is the conditional distribution d C(u, v) / d v, and all four
operations (cdf, h-function, its numerical inverse, density) are evaluated
through the log-scale variables z = -ln u (EV) and x = -ln(1-u) (IEV), which
is where the exponential-margin sample clouds live.  Everything broadcasts
over numpy arrays.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError, DegenerateConditionerError, DomainError, ParameterError
from .measures import ExponentMeasure

__all__ = ["PairCopula", "EV", "IEV"]

EV = "ev"
IEV = "iev"

# inputs within this distance of {0, 1} are clamped before log transforms
_EDGE = 1e-15
_HINV_TOL = 1e-10
_HINV_MAXITER = 200


def _check_unit(name, a, lo_open=False, hi_open=False):
    a = np.asarray(a, dtype=float)
    if np.any(np.isnan(a)):
        raise DomainError(f"{name} must not be NaN")
    lo_bad = a <= 0.0 if lo_open else a < 0.0
    hi_bad = a >= 1.0 if hi_open else a > 1.0
    if np.any(lo_bad) or np.any(hi_bad):
        lo, hi = "(" if lo_open else "[", ")" if hi_open else "]"
        raise DomainError(f"{name} must lie in {lo}0, 1{hi}")
    return a


def _clamped(a):
    return np.clip(a, _EDGE, 1.0 - _EDGE)


def _maybe_scalar(a):
    a = np.asarray(a)
    return float(a) if a.ndim == 0 else a


class PairCopula:
    """A bivariate EV or IEV copula built from an exponent measure.

    ``hfunc(u, v)`` conditions on the second argument; conditioning on the
    first is available through ``swapped()``, which transposes the measure.
    """

    def __init__(self, family: str, measure: ExponentMeasure):
        family = str(family).lower()
        if family not in (EV, IEV):
            raise ParameterError(f"family must be 'ev' or 'iev', got {family!r}")
        if not isinstance(measure, ExponentMeasure):
            raise ParameterError("measure must be an ExponentMeasure")
        self.family = family
        self.measure = measure
        self._swapped = None

    def __repr__(self):
        return f"PairCopula({self.family!r}, {self.measure!r})"

    def __eq__(self, other):
        return (
            isinstance(other, PairCopula)
            and other.family == self.family
            and other.measure == self.measure
        )

    @property
    def is_ev(self):
        return self.family == EV

    def swapped(self) -> "PairCopula":
        """Copula of (V, U); conditional on the first argument of self."""
        if self._swapped is None:
            self._swapped = PairCopula(self.family, self.measure.transposed())
            self._swapped._swapped = self
        return self._swapped

    # log-scale coordinate of a uniform value
    def _t(self, a):
        if self.is_ev:
            return -np.log(a)
        return -np.log1p(-a)

    def cdf(self, u, v):
        """C(u, v), boundary values honoured exactly."""
        u = _check_unit("u", u)
        v = _check_unit("v", v)
        uc, vc = _clamped(u), _clamped(v)
        tu, tv = self._t(uc), self._t(vc)
        V = self.measure._v(1.0 / tu, 1.0 / tv)
        if self.is_ev:
            inner = np.exp(-V)
        else:
            inner = uc + vc - 1.0 + np.exp(-V)
        out = np.where(u <= 0.0, 0.0, np.where(v <= 0.0, 0.0, inner))
        out = np.where((v >= 1.0) & (u > 0.0), u, out)
        out = np.where((u >= 1.0) & (v > 0.0), v, out)
        return _maybe_scalar(np.clip(out, 0.0, 1.0))

    def hfunc(self, u, v):
        """d C(u, v) / d v: the distribution of U at u given V = v."""
        u = _check_unit("u", u)
        v = _check_unit("v", v)
        if np.any(v <= 0.0) or np.any(v >= 1.0):
            raise DegenerateConditionerError("h-function conditioner must lie strictly inside (0, 1)")
        uc = _clamped(u)
        tu, tv = self._t(uc), self._t(_clamped(v))
        w = self.measure._cond_exponent(tu, tv)
        # EV: h = e^w; inverted EV: h = 1 - e^w, via expm1 so that tiny
        # conditional masses keep full relative precision
        inner = np.exp(w) if self.is_ev else -np.expm1(w)
        out = np.where(u <= 0.0, 0.0, np.where(u >= 1.0, 1.0, inner))
        return _maybe_scalar(np.clip(out, 0.0, 1.0))

    def density(self, u, v):
        """Copula density c(u, v) on the open unit square."""
        u = _check_unit("u", u, lo_open=True, hi_open=True)
        v = _check_unit("v", v, lo_open=True, hi_open=True)
        tu, tv = self._t(u), self._t(v)
        au, av = 1.0 / tu, 1.0 / tv
        V = self.measure._v(au, av)
        V1 = self.measure._v1(au, av)
        V2 = self.measure._v2(au, av)
        V12 = self.measure._v12(au, av)
        # for both families 1/(uv) (EV) and 1/((1-u)(1-v)) (IEV) equal e^(tu+tv)
        out = np.exp(tu + tv - V) * (V1 * V2 - V12) / (tu * tv) ** 2
        return _maybe_scalar(np.maximum(out, 0.0))

    def hinv(self, p, v):
        """u with hfunc(u, v) = p, by bracketed bisection plus a Newton polish.

        Monotonicity of the h-function in u guarantees the bracket; failure
        to shrink it within the iteration cap signals an implementation bug
        and raises ConvergenceError.
        """
        p = _check_unit("p", p)
        v = _check_unit("v", v)
        if np.any(v <= 0.0) or np.any(v >= 1.0):
            raise DegenerateConditionerError("h-function conditioner must lie strictly inside (0, 1)")
        p_b, v_b = np.broadcast_arrays(p, v)
        lo = np.zeros(p_b.shape)
        hi = np.ones(p_b.shape)
        for _ in range(_HINV_MAXITER):
            if np.all(hi - lo <= 1e-12):
                break
            mid = 0.5 * (lo + hi)
            below = self.hfunc(mid, v_b) < p_b
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        else:
            raise ConvergenceError(
                "h-function inversion failed to bracket within 200 iterations",
                {"max_width": float(np.max(hi - lo))},
            )
        u = 0.5 * (lo + hi)
        # one Newton step with the analytic density, kept inside the bracket
        inside = (u > _EDGE) & (u < 1.0 - _EDGE)
        dens = np.where(inside, self.density(np.clip(u, _EDGE, 1.0 - _EDGE), v_b), np.inf)
        with np.errstate(invalid="ignore", divide="ignore"):
            step = (self.hfunc(u, v_b) - p_b) / dens
        u = np.where(np.isfinite(step), np.clip(u - step, lo, hi), u)
        u = np.where(p_b <= 0.0, 0.0, np.where(p_b >= 1.0, 1.0, u))
        return _maybe_scalar(u)
