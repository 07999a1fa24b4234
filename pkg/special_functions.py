"""Sine/cosine integrals and the auxiliary functions F, G.

    F(x) = Ci(x) sin x - si(x) cos x = int_0^inf sin(u) / (u + x) du
    G(x) = F'(x) = Ci(x) cos x + si(x) sin x

with si(x) = Si(x) - pi/2. For large x both are evaluated from the
asymptotic series F(x) ~ sum_k (-1)^k (2k)! / x^(2k+1), truncated at its
smallest term, which avoids the cancellation in G and in the higher
derivatives.
"""
import math
import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import sici

import settings
from errors import DomainError, PreconditionError, UnsupportedOrderError

logger = logging.getLogger(__name__)

EULER_GAMMA = float(np.euler_gamma)
F_AT_ZERO = math.pi / 2


@dataclass(frozen=True)
class EvalPoint:
    x: float

    def __post_init__(self):
        if not math.isfinite(self.x) or self.x <= 0:
            raise DomainError(f"argument must be positive and finite, got {self.x}")


def cosine_integral(x: float) -> float:
    """Ci(x) = gamma + ln x + int_0^x (cos t - 1)/t dt, for x > 0."""
    x = EvalPoint(float(x)).x
    _, ci = sici(x)
    return float(ci)


def shifted_sine_integral(x: float) -> float:
    """si(x) = Si(x) - pi/2, for x >= 0."""
    x = float(x)
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"si(x) needs a finite x >= 0, got {x}")
    if x == 0.0:
        return -math.pi / 2
    si_, _ = sici(x)
    return float(si_) - math.pi / 2


def _series_derivative(n: int, x: float) -> float:
    """n-th derivative of F from the large-x series, optimally truncated.

    F^(n)(x) ~ (-1)^n sum_k (-1)^k (2k+n)! / x^(2k+n+1)
    """
    term = math.factorial(n) / x ** (n + 1)
    total = term
    k = 0
    while True:
        ratio = (2 * k + n + 1) * (2 * k + n + 2) / (x * x)
        nxt = -term * ratio
        # asymptotic: stop at the smallest term
        if abs(nxt) >= abs(term) or abs(nxt) < 1e-17 * abs(total):
            break
        total += nxt
        term = nxt
        k += 1
    return (-1) ** n * total


def _F_direct(x: float) -> float:
    si_, ci = sici(x)
    return float(ci * math.sin(x) - (si_ - math.pi / 2) * math.cos(x))


def _G_direct(x: float) -> float:
    si_, ci = sici(x)
    return float(ci * math.cos(x) + (si_ - math.pi / 2) * math.sin(x))


def _F_series(x: float) -> float:
    return _series_derivative(0, x)


def aux_F(x: float) -> float:
    """F(x); for x -> 0+ the caller must use F_AT_ZERO = pi/2."""
    x = EvalPoint(float(x)).x
    if x >= settings.F_SERIES_SWITCH:
        return _F_series(x)
    return _F_direct(x)


def aux_G(x: float) -> float:
    """G(x) = F'(x); diverges like gamma + ln x at the origin."""
    x = EvalPoint(float(x)).x
    if x >= settings.F_SERIES_SWITCH:
        return _series_derivative(1, x)
    return _G_direct(x)


def aux_F_derivative(n: int, x: float) -> float:
    """n-th derivative of F through the closed recurrences.

    F^(2m)(x)   = (-1)^m [F(x) - sum_{j<m} (-1)^j (2j)! / x^(2j+1)]
    F^(2m+1)(x) = (-1)^m [G(x) + sum_{j<m} (-1)^j (2j+1)! / x^(2j+2)]
    """
    if int(n) != n or n < 0:
        raise UnsupportedOrderError(f"derivative order must be a nonnegative integer, got {n}")
    n = int(n)
    if n > settings.MAX_DERIVATIVE_ORDER:
        raise UnsupportedOrderError(
            f"derivative order {n} exceeds {settings.MAX_DERIVATIVE_ORDER}"
        )
    x = EvalPoint(float(x)).x
    if n == 0:
        return aux_F(x)
    if n == 1:
        return aux_G(x)
    if x >= settings.DERIVATIVE_SERIES_SWITCH:
        return _series_derivative(n, x)

    m, odd = divmod(n, 2)
    if odd:
        acc = _G_direct(x)
        for j in range(m):
            acc += (-1) ** j * math.factorial(2 * j + 1) / x ** (2 * j + 2)
    else:
        acc = _F_direct(x)
        for j in range(m):
            acc -= (-1) ** j * math.factorial(2 * j) / x ** (2 * j + 1)
    return (-1) ** m * acc


def aux_F_asymptotic(x: float, regime: str, n_terms: int) -> float:
    """Truncated small- or large-argument expansion of F.

    small: pi/2 - (1 - gamma) x + x ln x - pi x^2 / 4   (up to 4 terms)
    large: 1/x - 2/x^3 + 24/x^5 - 720/x^7 + ...
    """
    x = float(x)
    if n_terms < 1:
        raise UnsupportedOrderError(f"n_terms must be positive, got {n_terms}")

    if regime == "small":
        if not (0.0 <= x <= settings.SMALL_X_MAX):
            raise PreconditionError(
                f"small-x expansion needs 0 <= x <= {settings.SMALL_X_MAX}, got {x}"
            )
        if n_terms > 4:
            raise UnsupportedOrderError("small-x expansion is known to 4 terms")
        terms = [
            math.pi / 2,
            -(1.0 - EULER_GAMMA) * x,
            x * math.log(x) if x > 0 else 0.0,
            -math.pi * x * x / 4,
        ]
        return float(sum(terms[:n_terms]))

    if regime == "large":
        if x < settings.LARGE_X_MIN:
            raise PreconditionError(
                f"large-x expansion needs x >= {settings.LARGE_X_MIN}, got {x}"
            )
        total = 0.0
        for k in range(n_terms):
            total += (-1) ** k * math.factorial(2 * k) / x ** (2 * k + 1)
        return total

    raise PreconditionError(f"unknown regime {regime!r}; expected 'small' or 'large'")


def aux_F_quadrature(x: float, tol: float = 1e-10) -> float:
    """F(x) straight from its integral, int_0^inf sin(u)/(u + x) du."""
    from quadrature import semiinfinite_oscillatory_integrate

    x = EvalPoint(float(x)).x
    result = semiinfinite_oscillatory_integrate(
        lambda u: math.sin(u) / (u + x),
        k_break=20 * math.pi,
        tol=tol,
        period=2 * math.pi,
    )
    logger.debug(f"F({x}) by quadrature: {result.value} (+/- {result.error_estimate})")
    return result.value
