"""Permittivity models and the angular weight f(t, eps).

    f(t, eps) = r_TE(|t|, eps) + (1 - 2 t^2) r_TM(|t|, eps)

with r_TE = (t - s)/(t + s), r_TM = (eps t - s)/(eps t + s) and
s = sqrt(eps - 1 + t^2). Both coefficients are written as
kappa * (...) / (...)^2 so that they stay accurate for eps close to 1.
"""
import math
import cmath
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

import settings
from errors import (
    DomainError,
    PreconditionError,
    SingularPointError,
    UnsupportedOrderError,
    ValidityError,
)

logger = logging.getLogger(__name__)

# f(0+, eps) for every eps > 1
F0_LIMIT = -2.0

MODEL_KINDS = ("constant", "single_relaxation", "tabulated")
INTERPOLATIONS = ("pchip", "linear")


@dataclass(frozen=True)
class DielectricModel:
    """eps(k) of the half-space; immutable once constructed.

    constant:          eps
    single_relaxation: 1 + chi0 / (1 + (k/kc)^2)
    tabulated:         interpolation of (k, eps) samples, no extrapolation
    """
    kind: str
    epsilon: float | None = None
    chi0: float | None = None
    kc: float | None = None
    table: tuple[tuple[float, float], ...] | None = None
    interpolation: str = "pchip"
    _interp: object = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValidityError(f"unknown dielectric kind {self.kind!r}")
        if self.kind == "constant":
            self._check_constant()
        elif self.kind == "single_relaxation":
            self._check_relaxation()
        else:
            self._check_table()

    def _check_constant(self):
        eps = self.epsilon
        if eps is None or math.isnan(eps) or eps < 1:
            raise ValidityError(f"constant permittivity must be >= 1, got {eps}")

    def _check_relaxation(self):
        if self.chi0 is None or not math.isfinite(self.chi0) or self.chi0 < 0:
            raise ValidityError(f"chi0 must be finite and >= 0, got {self.chi0}")
        if self.kc is None or not math.isfinite(self.kc) or self.kc <= 0:
            raise ValidityError(f"kc must be positive, got {self.kc}")

    def _check_table(self):
        if self.interpolation not in INTERPOLATIONS:
            raise ValidityError(f"unknown interpolation {self.interpolation!r}")
        if not self.table or len(self.table) < 2:
            raise ValidityError("a tabulated model needs at least two (k, eps) samples")
        ks = np.array([float(k) for k, _ in self.table])
        eps = np.array([float(e) for _, e in self.table])
        if not (np.all(np.isfinite(ks)) and np.all(np.isfinite(eps))):
            raise ValidityError("tabulated samples must be finite")
        if ks[0] < 0 or np.any(np.diff(ks) <= 0):
            raise ValidityError("tabulated k grid must be nonnegative and strictly increasing")
        bad = np.nonzero(eps < 1)[0]
        if bad.size:
            i = int(bad[0])
            raise ValidityError(f"tabulated eps({ks[i]}) = {eps[i]} is below 1")
        if self.interpolation == "pchip":
            interp = PchipInterpolator(ks, eps, extrapolate=False)
        else:
            interp = lambda k: np.interp(k, ks, eps)  # noqa: E731
        object.__setattr__(self, "_interp", interp)

    @classmethod
    def constant(cls, epsilon: float) -> "DielectricModel":
        return cls(kind="constant", epsilon=float(epsilon))

    @classmethod
    def single_relaxation(cls, chi0: float, kc: float) -> "DielectricModel":
        return cls(kind="single_relaxation", chi0=float(chi0), kc=float(kc))

    @classmethod
    def tabulated(cls, samples, interpolation: str = "pchip") -> "DielectricModel":
        table = tuple((float(k), float(e)) for k, e in samples)
        return cls(kind="tabulated", table=table, interpolation=interpolation)

    @property
    def k_range(self) -> tuple[float, float]:
        if self.kind == "tabulated":
            return self.table[0][0], self.table[-1][0]
        return 0.0, math.inf

    @property
    def static_epsilon(self) -> float:
        """eps(0), the value the constant-eps closed forms are evaluated at."""
        return permittivity(self, self.k_range[0])


def permittivity(model: DielectricModel, k: float) -> float:
    k = float(k)
    if math.isnan(k) or k < 0:
        raise DomainError(f"wavenumber must be >= 0, got {k}")

    if model.kind == "constant":
        value = model.epsilon
    elif model.kind == "single_relaxation":
        if math.isinf(k):
            return 1.0
        value = 1.0 + model.chi0 / (1.0 + (k / model.kc) ** 2)
    else:
        lo, hi = model.k_range
        if k < lo or k > hi:
            raise ValidityError(f"k = {k} is outside the tabulated range [{lo}, {hi}]")
        value = float(model._interp(k))

    if not value >= 1:
        raise ValidityError(f"eps({k}) = {value} is below 1")
    return float(value)


@dataclass(frozen=True)
class AngularPoint:
    """A direction t with its eps; only |t| enters any quantity."""
    t: float
    eps: float

    def __post_init__(self):
        if math.isnan(self.eps) or self.eps < 1:
            raise ValidityError(f"eps must be >= 1, got {self.eps}")
        if math.isnan(self.t):
            raise DomainError("t is NaN")

    @property
    def abs_t(self) -> float:
        return abs(self.t)

    @property
    def kappa(self) -> float:
        return self.eps - 1.0

    @property
    def s(self) -> float:
        return math.sqrt(self.kappa + self.t * self.t)


def _unit_interval_point(t: float, eps: float) -> AngularPoint:
    point = AngularPoint(float(t), float(eps))
    if point.abs_t == 0:
        raise SingularPointError("t = 0 is singular; use the limit F0_LIMIT", limit_value=F0_LIMIT)
    if point.abs_t > 1:
        raise DomainError(f"|t| must be <= 1, got {t}")
    return point


def _root(value):
    # principal branch; complex only on the shifted contour
    if isinstance(value, complex):
        return cmath.sqrt(value)
    return math.sqrt(value)


def _r_te(t: float, eps: float) -> float:
    if math.isinf(eps):
        return -1.0
    kappa = eps - 1.0
    s = _root(kappa + t * t)
    return -kappa / (t + s) ** 2


def _r_tm(t: float, eps: float) -> float:
    if math.isinf(eps):
        return 1.0
    kappa = eps - 1.0
    s = _root(kappa + t * t)
    return kappa * ((eps + 1.0) * t * t - 1.0) / (eps * t + s) ** 2


def fresnel_te(t: float, eps: float) -> float:
    p = _unit_interval_point(t, eps)
    return _r_te(p.abs_t, p.eps)


def fresnel_tm(t: float, eps: float) -> float:
    p = _unit_interval_point(t, eps)
    return _r_tm(p.abs_t, p.eps)


def angular_weight(t: float, eps: float) -> float:
    """f(t, eps); raises SingularPointError at t = 0 (limit F0_LIMIT)."""
    p = _unit_interval_point(t, eps)
    return fresnel_te(p.abs_t, p.eps) + (1.0 - 2.0 * p.abs_t ** 2) * fresnel_tm(p.abs_t, p.eps)


def _reflection_derivatives(m: float, t: float, kappa: float, s: float) -> tuple[float, float, float]:
    """First three t-derivatives of (m t - s)/(m t + s)."""
    w = m * t + s
    p = m * t * t + 3.0 * t * s + 2.0 * m * s * s
    dp = 6.0 * m * t + 3.0 * s + 3.0 * t * t / s
    c = 2.0 * m * kappa
    d1 = c / (s * w * w)
    d2 = -c * p / (s ** 3 * w ** 3)
    d3 = -c / (s ** 5 * w ** 4) * (dp * s * s * w - 3.0 * t * p * w - 3.0 * p * s * (m * s + t))
    return d1, d2, d3


def _weight_derivatives(t: float, eps: float) -> tuple[float, float, float, float]:
    """(f, f', f'', f''') at t > 0; t may exceed 1."""
    if math.isinf(eps):
        return -2.0 * t * t, -4.0 * t, -4.0, 0.0
    kappa = eps - 1.0
    if kappa == 0.0:
        return 0.0, 0.0, 0.0, 0.0
    s = _root(kappa + t * t)
    a1, a2, a3 = _reflection_derivatives(1.0, t, kappa, s)
    b1, b2, b3 = _reflection_derivatives(eps, t, kappa, s)
    r_tm = _r_tm(t, eps)
    u = 1.0 - 2.0 * t * t
    f0 = _r_te(t, eps) + u * r_tm
    f1 = a1 + u * b1 - 4.0 * t * r_tm
    f2 = a2 + u * b2 - 8.0 * t * b1 - 4.0 * r_tm
    f3 = a3 + u * b3 - 12.0 * t * b2 - 12.0 * b1
    return f0, f1, f2, f3


def angular_weight_derivative(order: int, t: float, eps: float) -> float:
    if order not in (1, 2, 3):
        raise UnsupportedOrderError(f"derivative order must be 1, 2 or 3, got {order}")
    p = _unit_interval_point(t, eps)
    if p.t < 0:
        raise DomainError(f"derivatives are defined for 0 < t <= 1, got {t}")
    return _weight_derivatives(p.t, p.eps)[order]


def angular_weight_on_ray(order: int, p: float, eps: float) -> float:
    """f and its t-derivatives continued to p >= 1 (the rotated contour)."""
    if order not in (0, 1, 2, 3):
        raise UnsupportedOrderError(f"order must be 0..3, got {order}")
    point = AngularPoint(float(p), float(eps))
    if point.t < 1:
        raise DomainError(f"ray evaluation needs p >= 1, got {p}")
    return _weight_derivatives(point.t, point.eps)[order]


def angular_weight_continued(order: int, u: complex, eps: float) -> complex:
    """f and its t-derivatives at a complex point of the closed right half-plane.

    |t| is continued as sqrt(u*u) and every other root on its principal
    branch. The exact weight has no singularity at t = 0; its nearest
    branch points sit at +-i sqrt(eps - 1).
    """
    if order not in (0, 1, 2, 3):
        raise UnsupportedOrderError(f"order must be 0..3, got {order}")
    u = complex(u)
    eps = float(eps)
    if math.isnan(eps) or eps < 1:
        raise ValidityError(f"eps must be >= 1, got {eps}")
    if u.real < 0:
        raise DomainError(f"continuation is defined for Re u >= 0, got {u}")
    return complex(_weight_derivatives(cmath.sqrt(u * u), eps)[order])


def f3_series(t: float | complex, kappa: float, regime: str, n_terms: int) -> float | complex:
    """Truncated small- or large-kappa series of f'''(|t|).

    A complex t is a point of the shifted contour (Re t >= 0); |t| is then
    continued as sqrt(t*t) and the result is complex.
    """
    if isinstance(t, complex):
        if t.real < 0 or t == 0:
            raise DomainError(f"contour points need Re t >= 0 and t != 0, got {t}")
        t = cmath.sqrt(t * t)
    else:
        t = float(t)
        if not 0 < t <= 1:
            raise DomainError(f"t must lie in (0, 1], got {t}")
    kappa = float(kappa)
    if not kappa > 0:
        raise DomainError(f"kappa must be positive, got {kappa}")
    if n_terms not in (1, 2, 3):
        raise UnsupportedOrderError(f"n_terms must be 1, 2 or 3, got {n_terms}")

    if regime == "small":
        if kappa > settings.SMALL_KAPPA_MAX:
            raise PreconditionError(
                f"small-kappa series needs kappa <= {settings.SMALL_KAPPA_MAX}, got {kappa}"
            )
        t5 = t ** 5
        terms = [
            12.0 * kappa / t5,
            (6.0 - 30.0 / t ** 2) * kappa ** 2 / t5,
            -(3.0 + 15.0 / t ** 2 - 105.0 / (2.0 * t ** 4)) * kappa ** 3 / t5,
        ]
    elif regime == "large":
        if kappa < settings.LARGE_KAPPA_MIN:
            raise PreconditionError(
                f"large-kappa series needs kappa >= {settings.LARGE_KAPPA_MIN}, got {kappa}"
            )
        terms = [
            12.0 / (t ** 4 * math.sqrt(kappa)),
            -48.0 / (t ** 5 * kappa),
            (18.0 - 36.0 / t ** 4 + 120.0 / t ** 6) / kappa ** 1.5,
        ]
    else:
        raise PreconditionError(f"unknown regime {regime!r}; expected 'small' or 'large'")
    value = sum(terms[:n_terms])
    return complex(value) if isinstance(value, complex) else float(value)
