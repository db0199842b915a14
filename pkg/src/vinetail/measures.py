"""Parametric bivariate exponent measures.

An exponent measure V(x, y) is homogeneous of order -1, non-increasing in
each argument, and satisfies the marginal constraints V(x, inf) = 1/x and
V(inf, y) = 1/y.  Together with its partial derivatives V1, V2, V12 it
determines both the extreme value copula exp{-V(-1/ln u, -1/ln v)} and its
inverted counterpart, and the interior spectral density

    h(w) = -V12(w*s, (1-w)*s) * s^3 / 2     (any s > 0)

whose tail exponents s1 (w -> 1) and s2 (w -> 0) drive every gauge-function
result for vines with asymptotically dependent components.

All evaluators broadcast over numpy arrays and accept ``inf`` arguments, for
which the exact analytic limits are returned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError, UnsupportedMeasureError

__all__ = ["TailOrders", "ExponentMeasure", "Logistic", "AsymmetricLogistic"]


@dataclass(frozen=True)
class TailOrders:
    """Spectral-density tail exponents and constants.

    h(w) ~ c1 * (1-w)^s1 as w -> 1 and h(w) ~ c2 * w^s2 as w -> 0, with
    s1, s2 > -1.  The constants only affect O(ln t) terms and never enter a
    gauge function; they are carried for completeness.
    """

    s1: float
    s2: float
    c1: float
    c2: float

    def __post_init__(self):
        if not (self.s1 > -1.0 and self.s2 > -1.0):
            raise ParameterError(f"tail exponents must exceed -1, got {self.s1}, {self.s2}")

    def transposed(self) -> "TailOrders":
        return TailOrders(self.s2, self.s1, self.c2, self.c1)


def _validate_positive(x, y, allow_inf):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(np.isnan(x)) or np.any(np.isnan(y)):
        raise DomainError("exponent measure arguments must not be NaN")
    if np.any(x <= 0.0) or np.any(y <= 0.0):
        raise DomainError("exponent measure arguments must be > 0")
    if not allow_inf and (np.any(np.isinf(x)) or np.any(np.isinf(y))):
        raise DomainError("derivatives of the exponent measure require finite arguments")
    return x, y


def _maybe_scalar(a):
    a = np.asarray(a)
    return float(a) if a.ndim == 0 else a


class ExponentMeasure:
    """Interface for bivariate exponent measures.

    Any implementation supplying V, its partials and tail orders plugs into
    every downstream module (pair copulas, gauges, eta, simulation).
    """

    def V(self, x, y):
        """V(x, y); extended-real inputs allowed, limits honoured exactly."""
        x, y = _validate_positive(x, y, allow_inf=True)
        return _maybe_scalar(self._v(x, y))

    def V1(self, x, y):
        """dV/dx; finite positive arguments only.  Homogeneous of order -2."""
        x, y = _validate_positive(x, y, allow_inf=False)
        return _maybe_scalar(self._v1(x, y))

    def V2(self, x, y):
        """dV/dy; finite positive arguments only.  Homogeneous of order -2."""
        x, y = _validate_positive(x, y, allow_inf=False)
        return _maybe_scalar(self._v2(x, y))

    def V12(self, x, y):
        """d2V/dxdy; finite positive arguments only.  Homogeneous of order -3."""
        x, y = _validate_positive(x, y, allow_inf=False)
        return _maybe_scalar(self._v12(x, y))

    def tail_orders(self) -> TailOrders:
        """Tail exponents of the interior spectral density, if it has one."""
        raise UnsupportedMeasureError(f"{type(self).__name__} has no regularly varying interior spectral density")

    def transposed(self) -> "ExponentMeasure":
        """The measure with swapped arguments, Vt(x, y) = V(y, x)."""
        raise NotImplementedError

    def _cond_exponent(self, tu, tv):
        """w = tv - V(1/tu, 1/tv) + ln(-V2(1/tu, 1/tv)) - 2 ln(tv).

        This is the log of the conditional survival weight behind both
        h-functions (EV: h = e^w on -ln-scale; inverted EV: h = 1 - e^w on
        -ln(1-.)-scale).  The generic form cancels badly where w is tiny;
        measures override it with an exact rearrangement where available.
        """
        au, av = 1.0 / tu, 1.0 / tv
        with np.errstate(divide="ignore"):
            return tv - self._v(au, av) + np.log(-self._v2(au, av)) - 2.0 * np.log(tv)

    # raw evaluators on validated float arrays; subclasses implement these
    def _v(self, x, y):
        raise NotImplementedError

    def _v1(self, x, y):
        raise NotImplementedError

    def _v2(self, x, y):
        raise NotImplementedError

    def _v12(self, x, y):
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


class Logistic(ExponentMeasure):
    """Logistic exponent measure V(x, y) = (x^(-1/alpha) + y^(-1/alpha))^alpha.

    alpha in (0, 1]; alpha = 1 is independence, V = 1/x + 1/y, and small
    alpha approaches perfect dependence.  Exchangeable in its arguments.
    """

    def __init__(self, alpha: float):
        alpha = float(alpha)
        if not 0.0 < alpha <= 1.0:
            raise ParameterError(f"logistic dependence parameter must be in (0, 1], got {alpha}")
        self.alpha = alpha

    def __repr__(self):
        return f"Logistic(alpha={self.alpha})"

    def __eq__(self, other):
        return isinstance(other, Logistic) and other.alpha == self.alpha

    def _v(self, x, y):
        # arguments live in (0, inf]; infinite arguments take the exact
        # marginal limits V(inf, y) = 1/y, V(x, inf) = 1/x, V(inf, inf) = 0
        q = 1.0 / self.alpha
        if type(x) is float and type(y) is float:
            if x == np.inf:
                return 0.0 if y == np.inf else 1.0 / y
            if y == np.inf:
                return 1.0 / x
            return (x ** (-q) + y ** (-q)) ** self.alpha
        out = (x ** (-q) + y ** (-q)) ** self.alpha
        if np.any(np.isinf(x)) or np.any(np.isinf(y)):
            x_inf, y_inf = np.isinf(x), np.isinf(y)
            with np.errstate(divide="ignore"):
                out = np.where(x_inf, np.where(y_inf, 0.0, 1.0 / y), out)
                out = np.where(y_inf & ~x_inf, 1.0 / x, out)
        return out

    def _v1(self, x, y):
        a = self.alpha
        q = 1.0 / a
        s = x ** (-q) + y ** (-q)
        return -(s ** (a - 1.0)) * x ** (-q - 1.0)

    def _v2(self, x, y):
        return self._v1(y, x)

    def _v12(self, x, y):
        a = self.alpha
        if a == 1.0:
            return np.zeros(np.broadcast(x, y).shape)
        q = 1.0 / a
        s = x ** (-q) + y ** (-q)
        return ((a - 1.0) / a) * (x * y) ** (-q - 1.0) * s ** (a - 2.0)

    def tail_orders(self) -> TailOrders:
        if self.alpha >= 1.0:
            raise UnsupportedMeasureError(
                "logistic measure with alpha = 1 has no regularly varying interior spectral density"
            )
        s = 1.0 / self.alpha - 2.0
        c = (1.0 - self.alpha) / (2.0 * self.alpha)
        return TailOrders(s1=s, s2=s, c1=c, c2=c)

    def _cond_exponent(self, tu, tv):
        # exact rearrangement: with r = (min/max)^(1/alpha) the 2 ln(tv)
        # term cancels against ln(-V2), leaving expm1/log1p forms with full
        # relative precision however small the conditional mass is
        a = self.alpha
        q = 1.0 / a
        m = np.maximum(tu, tv)
        r = (np.minimum(tu, tv) / m) ** q
        l1p = np.log1p(r)
        grow = np.expm1(a * l1p)
        low = -tv * grow + (a - 1.0) * l1p
        with np.errstate(divide="ignore", invalid="ignore"):
            high = (tv - tu) - tu * grow + (q - 1.0) * (np.log(tv) - np.log(tu)) + (a - 1.0) * l1p
        return np.where(tv >= tu, low, high)

    def transposed(self) -> "Logistic":
        return self

    def to_dict(self) -> dict:
        return {"type": "logistic", "alpha": self.alpha}


class AsymmetricLogistic(ExponentMeasure):
    """Asymmetric logistic exponent measure.

    V(x, y) = theta1/x + theta2/y
              + [{(1-theta1)/x}^(1/alpha) + {(1-theta2)/y}^(1/alpha)]^alpha

    with alpha in (0, 1] and theta1, theta2 in [0, 1].  The spectral measure
    has atoms of mass theta2 at {0} and theta1 at {1}, so no tail orders are
    available; the corresponding gauge is handled directly in the gauges
    module instead of via the regular-variation route.
    """

    def __init__(self, alpha: float, theta1: float, theta2: float):
        alpha, theta1, theta2 = float(alpha), float(theta1), float(theta2)
        if not 0.0 < alpha <= 1.0:
            raise ParameterError(f"asymmetric logistic alpha must be in (0, 1], got {alpha}")
        if not (0.0 <= theta1 <= 1.0 and 0.0 <= theta2 <= 1.0):
            raise ParameterError(f"asymmetric logistic weights must be in [0, 1], got {theta1}, {theta2}")
        self.alpha = alpha
        self.theta1 = theta1
        self.theta2 = theta2

    def __repr__(self):
        return f"AsymmetricLogistic(alpha={self.alpha}, theta1={self.theta1}, theta2={self.theta2})"

    def __eq__(self, other):
        return (
            isinstance(other, AsymmetricLogistic)
            and (other.alpha, other.theta1, other.theta2) == (self.alpha, self.theta1, self.theta2)
        )

    @property
    def _degenerate(self):
        # either weight at 1 collapses the dependent component: V = 1/x + 1/y
        return self.theta1 == 1.0 or self.theta2 == 1.0

    def _p(self, x, y):
        q = 1.0 / self.alpha
        return ((1.0 - self.theta1) ** q) * x ** (-q) + ((1.0 - self.theta2) ** q) * y ** (-q)

    def _v(self, x, y):
        if self._degenerate:
            return 1.0 / x + 1.0 / y
        if type(x) is float and type(y) is float:
            if x == np.inf:
                return 0.0 if y == np.inf else 1.0 / y
            if y == np.inf:
                return 1.0 / x
            return self.theta1 / x + self.theta2 / y + self._p(x, y) ** self.alpha
        out = self.theta1 / x + self.theta2 / y + self._p(x, y) ** self.alpha
        if np.any(np.isinf(x)) or np.any(np.isinf(y)):
            x_inf, y_inf = np.isinf(x), np.isinf(y)
            with np.errstate(divide="ignore"):
                out = np.where(x_inf, np.where(y_inf, 0.0, 1.0 / y), out)
                out = np.where(y_inf & ~x_inf, 1.0 / x, out)
        return out

    def _v1(self, x, y):
        a = self.alpha
        q = 1.0 / a
        if self._degenerate:
            return -1.0 / x**2
        p = self._p(x, y)
        return -self.theta1 / x**2 - ((1.0 - self.theta1) ** q) * x ** (-q - 1.0) * p ** (a - 1.0)

    def _v2(self, x, y):
        return self.transposed()._v1(y, x)

    def _v12(self, x, y):
        a = self.alpha
        q = 1.0 / a
        if a == 1.0 or self._degenerate:
            return np.zeros(np.broadcast(x, y).shape)
        p = self._p(x, y)
        w = ((1.0 - self.theta1) * (1.0 - self.theta2)) ** q
        return ((a - 1.0) / a) * w * (x * y) ** (-q - 1.0) * p ** (a - 2.0)

    def tail_orders(self) -> TailOrders:
        raise UnsupportedMeasureError("asymmetric logistic spectral measure has atoms at {0} and {1}")

    def transposed(self) -> "AsymmetricLogistic":
        if self.theta1 == self.theta2:
            return self
        return AsymmetricLogistic(self.alpha, self.theta2, self.theta1)

    def to_dict(self) -> dict:
        return {
            "type": "asymmetric_logistic",
            "alpha": self.alpha,
            "theta1": self.theta1,
            "theta2": self.theta2,
        }


_MEASURE_TYPES = {"logistic", "asymmetric_logistic"}


def measure_from_dict(doc: dict) -> ExponentMeasure:
    """Build a measure from its JSON description, rejecting unknown keys."""
    if not isinstance(doc, dict):
        raise ParameterError(f"measure description must be an object, got {type(doc).__name__}")
    kind = doc.get("type")
    if kind == "logistic":
        extra = set(doc) - {"type", "alpha"}
        if extra:
            raise ParameterError(f"unknown keys in logistic measure: {sorted(extra)}")
        if "alpha" not in doc:
            raise ParameterError("logistic measure requires 'alpha'")
        return Logistic(doc["alpha"])
    if kind == "asymmetric_logistic":
        extra = set(doc) - {"type", "alpha", "theta1", "theta2"}
        if extra:
            raise ParameterError(f"unknown keys in asymmetric_logistic measure: {sorted(extra)}")
        missing = {"alpha", "theta1", "theta2"} - set(doc)
        if missing:
            raise ParameterError(f"asymmetric_logistic measure requires {sorted(missing)}")
        return AsymmetricLogistic(doc["alpha"], doc["theta1"], doc["theta2"])
    raise ParameterError(f"unknown measure type {kind!r}; expected one of {sorted(_MEASURE_TYPES)}")
