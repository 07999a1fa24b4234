"""Self-checks run by ``cli.py validate``.

Every check compares a computed value with an independently known one.
The quick level covers special functions, limits and series; the full
level adds the dispersive/constant-eps equivalence grid and the
finite-part regularization grid.
"""
import math
import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

import potential
import quadrature
import special_functions
from dielectric import DielectricModel
from errors import CasimirError
from potential import AtomParams, SeriesSpec

logger = logging.getLogger(__name__)

LEVELS = ("quick", "full")


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    expected: float
    tolerance: float
    passed: bool
    detail: str = ""


def _compare(name: str, measured: float, expected: float, tolerance: float, relative: bool = False) -> Check:
    scale = abs(expected) if relative else 1.0
    passed = bool(abs(measured - expected) <= tolerance * scale)
    return Check(name, float(measured), float(expected), tolerance, passed)


def _guarded(name: str, fn: Callable[[], Check]) -> Check:
    try:
        return fn()
    except CasimirError as e:
        logger.error(f"Error running check {name}: {e}")
        return Check(name, math.nan, math.nan, 0.0, False, detail=str(e))


def _quick_checks(f_impl: Callable[[float], float]) -> list[tuple[str, Callable[[], Check]]]:
    def recurrence():
        x, h = 2.0, 1e-3
        second = (f_impl(x + h) - 2.0 * f_impl(x) + f_impl(x - h)) / h ** 2
        return _compare("F'' + F = 1/x at x = 2", second + f_impl(x), 1.0 / x, 1e-5)

    def london_slope():
        kappa = 1e-6
        slope = potential.london_pairwise_reduced(kappa) / kappa
        exact = (potential.short_range_reduced(1.0 + kappa) - potential.short_range_reduced(1.0)) / kappa
        return _compare("short-range slope is twice the London pairwise slope", exact, 2.0 * slope, 1e-4, True)

    return [
        ("F(1)", lambda: _compare("F(1)", f_impl(1.0), 0.6214496, 1e-7)),
        ("G(1)", lambda: _compare("G(1)", special_functions.aux_G(1.0), -0.3433780, 1e-7)),
        ("recurrence", recurrence),
        ("series switch", lambda: _compare(
            "F continuous at the series switch", special_functions._F_direct(30.0),
            special_functions._F_series(30.0), 1e-10)),
        ("conductor x0=1", lambda: _compare(
            "perfect conductor v0(1)", potential.perfect_conductor_reduced(1.0).v_reduced, -0.0918406, 1e-7)),
        ("conductor short", lambda: _compare(
            "perfect conductor v0(0+)", potential.perfect_conductor_reduced(1e-8).v_reduced, -0.125, 1e-6)),
        ("conductor long", lambda: _compare(
            "perfect conductor x0 v0(x0) at x0 = 1e3",
            1e3 * potential.perfect_conductor_reduced(1e3).v_reduced, -3.0 / (4.0 * math.pi), 1e-3, True)),
        ("eps=1", lambda: _compare(
            "v vanishes for eps = 1", potential.reduced_potential_nondispersive(1.0, 1.0).v_reduced, 0.0, 1e-10)),
        ("short eps=3", lambda: _compare(
            "v(1e-3, 3) against -(1/8)(eps-1)/(eps+1)",
            potential.reduced_potential_nondispersive(1e-3, 3.0).v_reduced, -0.0625, 5e-3, True)),
        ("short bracket", lambda: _compare(
            "short-range bracket at eps = 3", potential.short_range_bracket_numeric(3.0), 0.5, 5e-3, True)),
        ("long large kappa", lambda: _compare(
            "long-range factor at kappa = 100",
            potential.long_range_factor_numeric(101.0),
            potential.long_range_factor(100.0, SeriesSpec("large_kappa", 3)), 1e-2, True)),
        ("long small kappa", lambda: _compare(
            "long-range factor at kappa = 0.1",
            potential.long_range_factor_numeric(1.1),
            potential.long_range_factor(0.1, SeriesSpec("small_kappa", 3)), 2e-3, True)),
        ("fp 1/t^2", lambda: _compare(
            "FP int_-1^1 dt/t^2",
            quadrature.finite_part_integrate(lambda t: 1.0 / t ** 2, "symmetric", order=2).value, -2.0, 1e-8)),
        ("fp t^-5", lambda: _compare(
            "FP int_0^1 12/t^5 by complement and subtraction",
            quadrature.finite_part_by_complement(lambda t: 12.0 / t ** 5).value,
            quadrature.finite_part_by_subtraction(lambda t: 12.0 / t ** 5, {5: 12.0}).value, 1e-6, True)),
        ("fp shifted t^-5", lambda: _compare(
            "FP int_-1^1 6/|t|^5 on the shifted contour",
            quadrature.finite_part_integrate(lambda t: 6.0 / t ** 5, "doubled", order=5).value, -3.0, 1e-6, True)),
        ("london", london_slope),
        ("pairwise long", lambda: _compare(
            "pairwise Casimir-Polder factor at kappa = 0.1",
            potential.casimir_polder_pairwise_reduced(0.1),
            23.0 / 60.0 * 0.1 * potential.pairwise_integrated_factor(0.1, 3), 1e-4, True)),
        ("nonadditivity", lambda: _compare(
            "non-additivity ratio at kappa = 0.1",
            potential.nonadditivity_ratio_numeric(0.1), potential.nonadditivity_ratio(0.1, 3), 1e-4)),
    ]


def _full_checks() -> list[tuple[str, Callable[[], Check]]]:
    checks = []
    atom = AtomParams(k0=1.0, alpha0=1.0)
    for x0 in (0.1, 1.0, 10.0):
        for eps in (1.5, 2.0, 10.0):
            def equivalence(x0=x0, eps=eps):
                a = potential.reduced_potential_nondispersive(x0, eps, 1e-10)
                b = potential.reduced_potential_dispersive(x0, DielectricModel.constant(eps), atom, 1e-9)
                tolerance = max(2.0 * (a.error_estimate + b.error_estimate), 1e-8)
                return _compare(f"dispersive = constant-eps at x0={x0}, eps={eps}", b.v_reduced, a.v_reduced,
                                tolerance)
            checks.append((f"equivalence {x0} {eps}", equivalence))

    rng = np.random.default_rng(7)
    for i, (a, b, c) in enumerate(rng.uniform(-1.0, 1.0, size=(3, 3))):
        def laurent(a=a, b=b, c=c, i=i):
            g = lambda t: (a + b * t ** 2 + c * np.sqrt(t * t) ** 3) / t ** 4  # noqa: E731
            fp = quadrature.finite_part_integrate(g, "symmetric", order=4).value
            return _compare(f"delta-shift finite part, Laurent case {i}", fp, -2.0 * a / 3.0 - 2.0 * b, 1e-6)
        checks.append((f"laurent {i}", laurent))

    checks.append(("series finite part", lambda: _compare(
        "short-range bracket from the shifted finite part of the leading f''' term, kappa = 5e-3",
        potential.short_range_bracket_series(5e-3, SeriesSpec("small_kappa", 1)),
        potential.short_range_bracket_numeric(1.005), 2.0 * 5e-3 ** 2)))

    for x in (1.0, 5.0):
        checks.append((f"F quadrature {x}", lambda x=x: _compare(
            f"F({x}) from its integral", special_functions.aux_F_quadrature(x), special_functions.aux_F(x), 1e-8)))
    return checks


def run_validation(level: str = "quick", f_impl: Callable[[float], float] | None = None) -> list[Check]:
    """Run the checks of ``level``; ``f_impl`` replaces F for the F checks."""
    if level not in LEVELS:
        raise ValueError(f"unknown validation level {level!r}")
    f_impl = f_impl or special_functions.aux_F
    plan = _quick_checks(f_impl)
    if level == "full":
        plan += _full_checks()
    results = [_guarded(name, fn) for name, fn in plan]
    failed = sum(not r.passed for r in results)
    logger.info(f"Validation ({level}): {len(results) - failed}/{len(results)} checks passed")
    return results
