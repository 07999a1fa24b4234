import math
import pytest
import numpy as np

from errors import (
    AccelerationError,
    BudgetExceededError,
    DomainError,
    RegularizationError,
    UnsupportedOrderError,
)
from quadrature import (
    DeltaSchedule,
    QuadratureResult,
    adaptive_integrate,
    finite_part_by_complement,
    finite_part_by_subtraction,
    finite_part_integrate,
    semiinfinite_oscillatory_integrate,
)


def _close(result: QuadratureResult, oracle: float, tol: float) -> bool:
    return abs(result.value - oracle) <= max(tol, 10 * result.error_estimate)


# ------------------------------------------------
# adaptive_integrate
# ------------------------------------------------
def test_adaptive_examples():
    assert _close(adaptive_integrate(lambda t: t * t, 0.0, 1.0, 1e-12), 1.0 / 3.0, 1e-12)
    assert _close(adaptive_integrate(lambda t: math.cos(10 * t), -1.0, 1.0, 1e-12), 2 * math.sin(10) / 10, 1e-12)
    assert _close(adaptive_integrate(math.log, 0.0, 1.0, 1e-10), -1.0, 1e-10)


def test_adaptive_reports_evaluations():
    res = adaptive_integrate(lambda t: t, 0.0, 1.0)
    assert res.evaluations >= 21
    assert res.error_estimate >= 0


@pytest.mark.parametrize("degree", range(11))
def test_polynomials_are_exact(degree):
    coeffs = np.arange(1, degree + 2, dtype=float)
    poly = np.polynomial.Polynomial(coeffs)
    exact = poly.integ()(2.0) - poly.integ()(-1.0)
    res = adaptive_integrate(lambda t: float(poly(t)), -1.0, 2.0, 1e-13)
    assert res.value == pytest.approx(exact, rel=1e-13)


def test_breakpoint_at_kink():
    res = adaptive_integrate(abs, -1.0, 2.0, 1e-12, points=[0.0])
    assert res.value == pytest.approx(2.5, abs=1e-12)


def test_infinite_range_with_breakpoints():
    res = adaptive_integrate(lambda t: math.exp(-abs(t - 1.0)), 0.0, math.inf, 1e-10, points=[1.0])
    assert res.value == pytest.approx(2.0 - math.exp(-1.0), abs=1e-10)


def test_budget_exceeded_carries_estimate():
    with pytest.raises(BudgetExceededError) as info:
        adaptive_integrate(lambda t: math.sin(1.0 / t) / t, 1e-8, 1.0, 1e-14, limit=5)
    assert info.value.best_estimate is not None


def test_tight_tolerance_on_smooth_integrand():
    # asks for less than QUADPACK can resolve in double precision
    res = adaptive_integrate(math.exp, 0.0, 1.0, 1e-16, rel_tol=1e-17)
    assert res.value == pytest.approx(math.e - 1.0, rel=1e-13)


def test_adaptive_domain_errors():
    with pytest.raises(DomainError):
        adaptive_integrate(lambda t: t, 1.0, 0.0)
    with pytest.raises(DomainError):
        adaptive_integrate(lambda t: t, 0.0, 1.0, tol=0.0)


# ------------------------------------------------
# DeltaSchedule
# ------------------------------------------------
def test_default_schedule():
    schedule = DeltaSchedule.default()
    assert schedule.deltas[0] == 1e-2
    assert len(schedule.deltas) == 7
    assert schedule.ratio == pytest.approx(0.5)
    assert schedule.extrapolation_order == 3


def test_schedule_extension_keeps_ratio():
    schedule = DeltaSchedule.default().extended(10)
    assert len(schedule.deltas) == 10
    assert schedule.deltas[-1] == pytest.approx(1e-2 * 0.5 ** 9)


@pytest.mark.parametrize("order", [0, 1, 2])
def test_low_orders_use_default_schedule(order):
    assert DeltaSchedule.for_order(order).deltas == DeltaSchedule.default().deltas


def test_high_order_schedule_starts_wider():
    schedule = DeltaSchedule.for_order(5)
    assert schedule.deltas[0] == pytest.approx(1e-2 ** 0.25)
    assert schedule.ratio == pytest.approx(DeltaSchedule.default().ratio)
    assert len(schedule.deltas) == len(DeltaSchedule.default().deltas)


@pytest.mark.parametrize("deltas", [
    (1e-2, 5e-3),
    (1e-2, 5e-3, 1e-3),
    (1e-2, 2e-2, 4e-2),
    (2.0, 1.0, 0.5),
])
def test_invalid_schedules(deltas):
    with pytest.raises(DomainError):
        DeltaSchedule(deltas)


# ------------------------------------------------
# finite_part_integrate
# ------------------------------------------------
def test_inverse_square():
    res = finite_part_integrate(lambda t: 1.0 / t ** 2, "symmetric", order=2)
    assert res.value == pytest.approx(-2.0, abs=1e-9)


def test_log_abs():
    res = finite_part_integrate(lambda t: np.log(np.sqrt(t * t)), "symmetric", order=0)
    assert res.value == pytest.approx(-2.0, abs=1e-9)


def test_odd_integrand():
    res = finite_part_integrate(lambda t: np.cos(t) / t, "symmetric", order=1)
    assert res.value == pytest.approx(0.0, abs=1e-12)


def test_inverse_abs_has_zero_finite_part():
    res = finite_part_integrate(lambda t: 1.0 / np.sqrt(t * t), "doubled", order=1)
    assert res.value == pytest.approx(0.0, abs=1e-9)


def test_ordinary_integrand_unchanged():
    res = finite_part_integrate(lambda t: np.cos(t), "doubled", order=0)
    assert res.value == pytest.approx(2 * math.sin(1.0), abs=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_laurent_oracle(seed):
    a, b, c = np.random.default_rng(seed).uniform(-1.0, 1.0, 3)
    g = lambda t: (a + b * t ** 2 + c * np.sqrt(t * t) ** 3) / t ** 4  # noqa: E731
    shifted = finite_part_integrate(g, "symmetric", order=4).value
    subtracted = finite_part_by_subtraction(
        lambda t: (a + b * t ** 2 + c * t ** 3) / t ** 4, {4: a, 2: b, 1: c}, doubled=True
    ).value
    assert shifted == pytest.approx(-2 * a / 3 - 2 * b, rel=1e-6, abs=1e-9)
    assert shifted == pytest.approx(subtracted, rel=1e-6, abs=1e-9)


def test_shift_side_independence():
    g = lambda t: np.exp(t) / t ** 2  # noqa: E731
    up = finite_part_integrate(g, "symmetric", order=2, side=1)
    down = finite_part_integrate(g, "symmetric", order=2, side=-1)
    assert up.value == pytest.approx(down.value, abs=up.error_estimate + down.error_estimate + 1e-12)


def test_exp_over_square_matches_subtraction():
    # e^t/t^2 on [-1, 1]: even part is cosh t / t^2 = 1/t^2 + regular
    shifted = finite_part_integrate(lambda t: np.exp(t) / t ** 2, "symmetric", order=2)
    subtracted = finite_part_by_subtraction(lambda t: math.cosh(t) / t ** 2, {2: 1.0}, doubled=True)
    assert shifted.value == pytest.approx(subtracted.value, abs=1e-7)


def test_linearity():
    g1 = lambda t: 1.0 / t ** 2  # noqa: E731
    g2 = lambda t: np.cos(t) / t ** 2  # noqa: E731
    r1 = finite_part_integrate(g1, "symmetric", order=2)
    r2 = finite_part_integrate(g2, "symmetric", order=2)
    r = finite_part_integrate(lambda t: 2.0 * g1(t) - 3.0 * g2(t), "symmetric", order=2)
    bound = 2 * r1.error_estimate + 3 * r2.error_estimate + r.error_estimate + 1e-10
    assert r.value == pytest.approx(2.0 * r1.value - 3.0 * r2.value, abs=bound)


def test_fifth_order_with_wide_schedule():
    schedule = DeltaSchedule.geometric(0.8, 0.7, 12)
    res = finite_part_integrate(lambda t: 6.0 / t ** 5, "doubled", schedule=schedule, order=5,
                                residual_tol=1e-5)
    # FP int_0^1 12/t^5 dt = -3
    assert res.value == pytest.approx(-3.0, abs=1e-6)


@pytest.mark.parametrize("order", [3, 4, 5])
def test_high_orders_with_default_schedule(order):
    # FP int_0^1 t^-n dt = 1/(1 - n)
    res = finite_part_integrate(lambda t: 0.5 / t ** order, "doubled", order=order)
    assert res.value == pytest.approx(1.0 / (1 - order), rel=1e-6)


def test_fifth_order_power_series():
    # 1/t^5 + 1/t^3 + 1: -1/4 - 1/2 + 1
    res = finite_part_integrate(lambda t: 0.5 * (t ** -5 + t ** -3 + 1.0), "doubled", order=5)
    assert res.value == pytest.approx(0.25, abs=1e-6)


def test_misdeclared_order_is_detected():
    with pytest.raises(RegularizationError) as info:
        finite_part_integrate(lambda t: 1.0 / t ** 3 + np.exp(t), "doubled", order=1)
    assert info.value.best_estimate is not None


def test_unsupported_singularity_order():
    with pytest.raises(UnsupportedOrderError):
        finite_part_integrate(lambda t: 1.0 / t ** 6, "doubled", order=6)


# ------------------------------------------------
# Subtraction and complement strategies
# ------------------------------------------------
def test_subtraction_and_complement_agree_on_fifth_power():
    by_subtraction = finite_part_by_subtraction(lambda t: 12.0 / t ** 5, {5: 12.0})
    by_complement = finite_part_by_complement(lambda t: 12.0 / t ** 5)
    assert by_subtraction.value == pytest.approx(-3.0, rel=1e-6)
    assert by_complement.value == pytest.approx(-3.0, rel=1e-6)


def test_subtraction_inverse_t_is_zero():
    res = finite_part_by_subtraction(lambda t: 1.0 / t, {1: 1.0})
    assert res.value == pytest.approx(0.0, abs=1e-10)


def test_subtraction_with_regular_remainder():
    # FP int_0^1 (1 + t)^2 / t^2 = -1 + 0 + 1 = 0 from the 1/t^2, 2/t and 1 terms
    res = finite_part_by_subtraction(lambda t: (1 + t) ** 2 / t ** 2, {2: 1.0, 1: 2.0})
    assert res.value == pytest.approx(0.0, abs=1e-9)


# ------------------------------------------------
# semiinfinite_oscillatory_integrate
# ------------------------------------------------
def test_exponential_tail():
    res = semiinfinite_oscillatory_integrate(lambda k: math.exp(-k), 10.0, 1e-10)
    assert res.value == pytest.approx(1.0, abs=1e-9)


def test_dirichlet_integral():
    res = semiinfinite_oscillatory_integrate(lambda k: math.sin(k) / k, 20 * math.pi, 1e-10)
    assert res.value == pytest.approx(math.pi / 2, abs=1e-8)


def test_lorentzian_cosine():
    res = semiinfinite_oscillatory_integrate(lambda k: math.cos(k) / (1 + k * k), 10.0, 1e-10)
    assert res.value == pytest.approx(math.pi / 2 * math.exp(-1.0), abs=1e-8)
    assert res.value == pytest.approx(0.5778637, abs=1e-7)


def test_non_alternating_tail_rejected():
    with pytest.raises(AccelerationError):
        semiinfinite_oscillatory_integrate(lambda k: math.sin(k) ** 2 / (1 + k), 10.0, 1e-10)

