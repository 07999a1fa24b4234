"""Adaptive, finite-part and semi-infinite oscillatory integration.

All routines return a ``QuadratureResult``. Failures raise a subclass of
``NumericalError`` carrying the best estimate reached.
"""
import math
import logging
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

import settings
from errors import (
    AccelerationError,
    BudgetExceededError,
    DomainError,
    RegularizationError,
    UnsupportedOrderError,
)

logger = logging.getLogger(__name__)

# Real part used for points "on" the imaginary axis: just right of the
# branch cut of sqrt(u^2).
_ZERO_PLUS = 1e-150
# Height of the detour contour for the finite-part integral
_CONTOUR_HEIGHT = 1.0
MAX_SINGULARITY_ORDER = 5

_EPS = float(np.finfo(float).eps)
# epsrel never asks QUADPACK for less than _REL_FLOOR ulps
_REL_FLOOR = 50.0
# a roundoff-flagged result is kept if its error is within this many ulps
_ROUNDOFF_ACCEPT = 1e3


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(
            self.value + other.value,
            self.error_estimate + other.error_estimate,
            self.evaluations + other.evaluations,
        )

    def scaled(self, factor: float) -> "QuadratureResult":
        return QuadratureResult(self.value * factor, self.error_estimate * abs(factor), self.evaluations)


@dataclass(frozen=True)
class DeltaSchedule:
    """Geometric sequence of shifts delta for the finite-part extrapolation."""
    deltas: tuple[float, ...]
    extrapolation_order: int = settings.EXTRAPOLATION_ORDER

    def __post_init__(self):
        d = np.asarray(self.deltas, dtype=float)
        if d.size < 3:
            raise DomainError("a delta schedule needs at least 3 values")
        if np.any(d <= 0) or d[0] >= _CONTOUR_HEIGHT:
            raise DomainError(f"deltas must lie in (0, {_CONTOUR_HEIGHT})")
        ratios = d[1:] / d[:-1]
        if np.any(ratios >= 1) or not np.allclose(ratios, ratios[0], rtol=1e-9):
            raise DomainError("deltas must decrease with a constant ratio")
        if self.extrapolation_order < 1:
            raise DomainError("extrapolation_order must be at least 1")

    @classmethod
    def geometric(cls, start: float, ratio: float, count: int,
                  extrapolation_order: int = settings.EXTRAPOLATION_ORDER) -> "DeltaSchedule":
        deltas = tuple(start * ratio ** n for n in range(count))
        return cls(deltas, extrapolation_order)

    @classmethod
    def default(cls) -> "DeltaSchedule":
        return cls.geometric(settings.DELTA_START, settings.DELTA_RATIO, settings.DELTA_COUNT)

    @classmethod
    def for_order(cls, order: int) -> "DeltaSchedule":
        """Default schedule for a declared singularity order.

        Above order 2 the first shift is raised to DELTA_START^(1/(order-1)),
        which keeps the divergent part at that shift near 1/DELTA_START.
        """
        if order <= 2:
            return cls.default()
        start = settings.DELTA_START ** (1.0 / (order - 1))
        return cls.geometric(start, settings.DELTA_RATIO, settings.DELTA_COUNT)

    @property
    def ratio(self) -> float:
        return self.deltas[1] / self.deltas[0]

    def extended(self, count: int) -> "DeltaSchedule":
        """Same start and ratio, continued to ``count`` values."""
        if count <= len(self.deltas):
            return self
        return DeltaSchedule.geometric(self.deltas[0], self.ratio, count, self.extrapolation_order)


def adaptive_integrate(g: Callable[[float], float], a: float, b: float,
                       tol: float = settings.DEFAULT_TOL,
                       points: Sequence[float] | None = None,
                       rel_tol: float = 0.0,
                       limit: int | None = None) -> QuadratureResult:
    """Integrate g over [a, b] (b may be +inf) with QUADPACK.

    ``points`` are interior kinks or near-singularities to subdivide at.
    """
    if not a < b:
        raise DomainError(f"need a < b, got [{a}, {b}]")
    if tol <= 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    limit = limit or settings.QUAD_LIMIT

    inner = sorted(p for p in (points or ()) if a < p < b)
    if math.isinf(b) and inner:
        # QUADPACK refuses break points on infinite ranges
        head = adaptive_integrate(g, a, inner[-1], tol / 2, inner[:-1], rel_tol, limit)
        tail = adaptive_integrate(g, inner[-1], b, tol / 2, None, rel_tol, limit)
        return head + tail

    out = quad(g, a, b, epsabs=tol, epsrel=max(rel_tol, _REL_FLOOR * _EPS), limit=limit,
               points=inner or None, full_output=1)
    value, err, info = out[0], out[1], out[2]
    if len(out) > 3:
        message = str(out[3])
        # QUADPACK flags roundoff when tol is below what doubles can resolve;
        # the estimate is still good if its error is at that level
        roundoff = "roundoff" in message.lower()
        if not (roundoff and err <= max(tol, _ROUNDOFF_ACCEPT * _EPS * abs(value))):
            logger.debug(f"quad on [{a}, {b}] failed: {message}")
            raise BudgetExceededError(
                f"adaptive quadrature on [{a}, {b}] did not reach tol={tol}: {message}",
                best_estimate=float(value),
            )
        logger.debug(f"quad on [{a}, {b}] hit roundoff at error {err:.3g}; accepted")
    return QuadratureResult(float(value), float(err), int(info["neval"]))


def _finite_part_below(deltas: np.ndarray, samples: np.ndarray, order: int,
                       q: int) -> tuple[float, float]:
    """FP int_0^deltas[0] of the axis integrand from its samples.

    samples are y^order * axis(y) at y = deltas, fitted with the Laurent
    part a_m (m <= order) of axis, regular powers y^0..y^q and ln y.
    Returns the finite part and the largest misfit at the samples.
    """
    powers = list(range(order)) + [order + k for k in range(q + 1)]
    cols = [deltas ** p for p in powers]
    cols.append(deltas ** order * np.log(deltas))
    a = np.column_stack(cols)
    scale = np.max(np.abs(a), axis=0)
    coef, *_ = np.linalg.lstsq(a / scale, samples, rcond=None)
    misfit = float(np.max(np.abs(a / scale @ coef - samples)))
    coef = coef / scale

    top = deltas[0]
    total = 0.0
    for p, c in zip(powers[:order], coef[:order]):
        m = order - p
        total += c * math.log(top) if m == 1 else c * top ** (1 - m) / (1 - m)
    for k, c in enumerate(coef[order:order + q + 1]):
        total += c * top ** (k + 1) / (k + 1)
    total += coef[-1] * (top * math.log(top) - top)
    return float(total), misfit


def finite_part_integrate(g: Callable[[complex], complex], interval: str = "doubled",
                          schedule: DeltaSchedule | None = None, order: int = 2,
                          tol: float = settings.DEFAULT_TOL, side: int = 1,
                          residual_tol: float | None = None) -> QuadratureResult:
    """Hadamard finite part of the integral of g across t = 0.

    interval "symmetric" means [-1, 1]; "doubled" means 2 * [0, 1] for an
    even g. Re int g(t + i side delta) dt is deformed onto a contour that
    leaves t = i side delta straight up the imaginary axis, so delta only
    enters through the axis leg below the first shift. That leg's Laurent
    expansion (delta^-m for m <= order, ln, regular powers) is fitted from
    the integrand sampled at the schedule's shifts, and the constant term
    of the delta -> 0 expansion is taken from it analytically.

    g must accept complex arguments; |t| is continued as sqrt(t*t).
    Without a schedule, DeltaSchedule.for_order(order) is used.
    """
    if interval not in ("doubled", "symmetric"):
        raise DomainError(f"interval must be 'doubled' or 'symmetric', got {interval!r}")
    if not 0 <= order <= MAX_SINGULARITY_ORDER:
        raise UnsupportedOrderError(f"singularity order must be 0..{MAX_SINGULARITY_ORDER}, got {order}")
    if side not in (1, -1):
        raise DomainError("side must be +1 or -1")
    schedule = schedule or DeltaSchedule.for_order(order)
    q = schedule.extrapolation_order
    unknowns = order + q + 2
    schedule = schedule.extended(unknowns + 2)
    height = _CONTOUR_HEIGHT
    leg_rel = 1e-2 * tol

    if interval == "doubled":
        def folded(u):
            return 2.0 * complex(g(u))
    else:
        def folded(u):
            return complex(g(u)) + complex(g(-u))

    def axis(y):
        return (1j * side * folded(complex(_ZERO_PLUS, side * y))).real

    deltas = np.array(schedule.deltas)
    top = adaptive_integrate(lambda x: folded(complex(x + _ZERO_PLUS, side * height)).real, 0.0, 1.0, tol,
                             rel_tol=leg_rel)
    down = adaptive_integrate(
        lambda y: -(1j * side * folded(complex(1.0, side * y))).real, 0.0, height, tol, rel_tol=leg_rel
    )
    upper = adaptive_integrate(axis, deltas[0], height, tol, rel_tol=leg_rel)
    known = top + down + upper

    samples = np.array([y ** order * axis(y) for y in deltas])
    if not np.all(np.isfinite(samples)):
        raise RegularizationError("integrand is not finite at the shifted points", best_estimate=known.value)
    below, misfit = _finite_part_below(deltas, samples, order, q)
    lower, _ = _finite_part_below(deltas, samples, order, q - 1)
    constant = known.value + below
    residual = abs(below - lower)
    logger.debug(
        f"finite part ({interval}, order {order}): {constant} with residual {residual} "
        f"over {len(deltas)} shifts"
    )
    limit = residual_tol if residual_tol is not None else max(1e3 * tol, 1e-8)
    sample_scale = max(float(np.max(np.abs(samples))), 1e-300)
    if residual > limit * max(1.0, abs(constant)) or misfit > 1e2 * limit * sample_scale:
        raise RegularizationError(
            f"finite-part extrapolation residual {residual:.3g} (misfit {misfit / sample_scale:.3g}) "
            f"exceeds {limit:.3g}; is the singularity order ({order}) right?",
            best_estimate=constant,
        )
    evaluations = known.evaluations + len(deltas)
    return QuadratureResult(constant, known.error_estimate + residual, evaluations)


def finite_part_by_subtraction(g: Callable[[float], float], coefficients: Mapping[int, float],
                               tol: float = settings.DEFAULT_TOL, doubled: bool = False,
                               cutoffs: Sequence[float] | None = None) -> QuadratureResult:
    """Finite part of int_0^1 g dt from its declared Laurent terms.

    ``coefficients`` maps m -> c_m for the terms c_m / t^m (1 <= m <= 5).
    For each cutoff e the ordinary integral over [e, 1] plus the finite
    part of the Laurent terms over [0, e] differs from the answer by the
    integral of the regular remainder over [0, e], which vanishes as e -> 0;
    the constant of a fit in e is returned.
    """
    for m in coefficients:
        if not 1 <= int(m) <= MAX_SINGULARITY_ORDER:
            raise UnsupportedOrderError(f"Laurent order {m} is outside 1..{MAX_SINGULARITY_ORDER}")
    if cutoffs is None:
        cutoffs = [0.25 * 0.8 ** k for k in range(10)]
    cutoffs = np.array(sorted(cutoffs, reverse=True))

    def laurent_part(e):
        total = 0.0
        for m, c in coefficients.items():
            total += c * math.log(e) if m == 1 else c * e ** (1 - m) / (1 - m)
        return total

    running = adaptive_integrate(g, cutoffs[0], 1.0, tol, rel_tol=1e-2 * tol)
    evaluations, error = running.evaluations, running.error_estimate
    acc = running.value
    values = [acc + laurent_part(cutoffs[0])]
    for hi, lo in zip(cutoffs[:-1], cutoffs[1:]):
        piece = adaptive_integrate(g, lo, hi, tol, rel_tol=1e-2 * tol)
        acc += piece.value
        evaluations += piece.evaluations
        error += piece.error_estimate
        values.append(acc + laurent_part(lo))
    values = np.array(values)

    a = np.column_stack([cutoffs ** k for k in range(5)] + [cutoffs * np.log(cutoffs)])
    coef, *_ = np.linalg.lstsq(a, values, rcond=None)
    result = QuadratureResult(float(coef[0]), error, evaluations)
    return result.scaled(2.0) if doubled else result


def finite_part_by_complement(h: Callable[[float], float],
                              tol: float = settings.DEFAULT_TOL) -> QuadratureResult:
    """FP int_0^1 h as -int_1^inf h.

    Valid when h is analytic on (0, inf), decays at least like 1/t^2 and
    FP int_0^inf h = 0, which holds for the Laurent terms t^-m (m >= 2)
    and for f'''(t) F(x0 t) of the potential.
    """
    return adaptive_integrate(h, 1.0, math.inf, tol).scaled(-1.0)


def _iterated_aitken(sums: np.ndarray) -> tuple[float, float]:
    """Repeated Aitken delta^2 on a sequence of partial sums."""
    levels = [np.asarray(sums, dtype=float)]
    while len(levels[-1]) >= 3:
        s = levels[-1]
        d1 = s[1:-1] - s[:-2]
        d2 = s[2:] - 2.0 * s[1:-1] + s[:-2]
        safe = np.where(d2 == 0.0, 1.0, d2)
        nxt = np.where(d2 == 0.0, s[2:], s[:-2] - d1 * d1 / safe)
        levels.append(nxt)
    # deep levels amplify rounding noise; keep the level that settled best
    candidates = [(abs(lv[-1] - lv[-2]), lv[-1]) for lv in levels[1:] if len(lv) >= 2]
    if not candidates:
        return float(levels[-1][-1]), float(abs(levels[0][-1] - levels[0][-2]))
    change, best = min(candidates, key=lambda c: c[0])
    return float(best), float(change)


def _tail_zeros(g, start: float, period: float, wanted: int) -> tuple[list[float], int]:
    step = period / 8.0
    zeros: list[float] = []
    x0, g0 = start, g(start)
    evaluations = 1
    end = start + (wanted + 2) * period
    while x0 < end and len(zeros) < wanted:
        x1 = x0 + step
        g1 = g(x1)
        evaluations += 1
        if g1 == 0.0:
            zeros.append(x1)
        elif g0 != 0.0 and (g0 > 0) != (g1 > 0):
            zeros.append(brentq(g, x0, x1, xtol=1e-14, rtol=4 * np.finfo(float).eps))
        x0, g0 = x1, g1
    return zeros, evaluations


def semiinfinite_oscillatory_integrate(g: Callable[[float], float], k_break: float,
                                       tol: float = settings.DEFAULT_TOL,
                                       period: float = 2 * math.pi,
                                       lobes: int = 24) -> QuadratureResult:
    """int_0^inf g for g oscillating with the given period at large k.

    [0, k_break] is done adaptively; beyond it the tail is cut at the
    zeros of g and the alternating lobe sums are accelerated. A tail with
    no sign changes is integrated directly to infinity.
    """
    if k_break <= 0:
        raise DomainError(f"k_break must be positive, got {k_break}")
    head = adaptive_integrate(g, 0.0, k_break, tol / 2)

    zeros, scanned = _tail_zeros(g, k_break, period, lobes + 1)
    if len(zeros) < 3:
        try:
            tail = adaptive_integrate(g, k_break, math.inf, tol / 2)
        except BudgetExceededError as e:
            raise AccelerationError(
                "tail neither oscillates nor decays integrably", best_estimate=head.value
            ) from e
        return head + tail + QuadratureResult(0.0, 0.0, scanned)

    if zeros[0] > k_break:
        first = adaptive_integrate(g, k_break, zeros[0], tol / 4)
    else:
        first = QuadratureResult(0.0, 0.0, 0)
    pieces = [adaptive_integrate(g, lo, hi, tol / (4 * lobes)) for lo, hi in zip(zeros[:-1], zeros[1:])]
    lobe_values = np.array([p.value for p in pieces])
    evaluations = head.evaluations + first.evaluations + scanned + sum(p.evaluations for p in pieces)
    base = head.value + first.value
    partial = base + np.cumsum(lobe_values)

    if np.all(np.abs(lobe_values[-3:]) < tol * 1e-3):
        logger.debug("oscillatory tail negligible; summing lobes directly")
        return QuadratureResult(float(partial[-1]), head.error_estimate + tol, evaluations)

    signs = np.sign(lobe_values)
    if np.any(signs[1:] == signs[:-1]):
        raise AccelerationError(
            "tail lobes do not alternate in sign; series acceleration does not apply",
            best_estimate=float(partial[-1]),
        )

    value, accel_err = _iterated_aitken(partial)
    logger.debug(f"tail accelerated over {len(lobe_values)} lobes, change {accel_err:.3g}")
    if accel_err > tol:
        raise AccelerationError(
            f"lobe acceleration did not settle to {tol} (last change {accel_err:.3g})",
            best_estimate=value,
        )
    err = head.error_estimate + first.error_estimate + sum(p.error_estimate for p in pieces) + accel_err
    return QuadratureResult(value, err, evaluations)
