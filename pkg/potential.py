"""Ground-state atom / dielectric half-space potential in reduced units.

    V(z) = (hbar c alpha0 k0 / z^3) * v(x0, eps),    x0 = 2 k0 z

v is evaluated from the integrated-by-parts angular form

    v = -(1/16 pi) { [f(1) x0^2 - f''(1)] F(x0) + f'(1) x0 G(x0) - x0 f(1)
                     + FP int_0^1 f'''(t) F(x0 t) dt }

where the finite part is taken as -int_1^inf f'''(p) F(x0 p) dp, or, for a
k-dependent eps, from the same integral rotated onto the imaginary
wavenumber axis.
"""
import math
import logging
from dataclasses import dataclass

from scipy import constants
from scipy.integrate import dblquad

import settings
from dielectric import DielectricModel, angular_weight_on_ray, f3_series, permittivity
from errors import DivergentTailError, DomainError, PoleError, PreconditionError, UnsupportedOrderError, ValidityError
from quadrature import QuadratureResult, adaptive_integrate, finite_part_by_complement, finite_part_integrate
from special_functions import aux_F, aux_F_derivative, aux_G

logger = logging.getLogger(__name__)

REGIMES = ("general", "short_asymptotic", "long_asymptotic", "perfect_conductor")
UNIT_SYSTEMS = ("si", "atomic", "reduced")

# Outer cut-off of the imaginary-axis integral; the integrand falls like y^2 e^-y
_Y_MAX = 50.0
# Beyond this the angular weight over p^2 has reached its p -> inf limit
_P_CAP = 1e100


@dataclass(frozen=True)
class AtomParams:
    k0: float
    alpha0: float

    def __post_init__(self):
        if not (math.isfinite(self.k0) and self.k0 > 0):
            raise DomainError(f"k0 must be positive, got {self.k0}")
        if not (math.isfinite(self.alpha0) and self.alpha0 > 0):
            raise DomainError(f"alpha0 must be positive, got {self.alpha0}")


@dataclass(frozen=True)
class ReducedPoint:
    x0: float
    z: float

    @classmethod
    def from_distance(cls, atom: AtomParams, z: float) -> "ReducedPoint":
        if not (math.isfinite(z) and z > 0):
            raise DomainError(f"distance must be positive, got {z}")
        return cls(x0=2.0 * atom.k0 * z, z=z)


@dataclass(frozen=True)
class PotentialResult:
    v_reduced: float
    error_estimate: float
    regime: str = "general"

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise DomainError(f"unknown regime tag {self.regime!r}")


@dataclass(frozen=True)
class SeriesSpec:
    regime: str
    n_terms: int = 3

    def __post_init__(self):
        if self.regime not in ("small_kappa", "large_kappa"):
            raise PreconditionError(f"unknown series regime {self.regime!r}")
        if self.n_terms not in (1, 2, 3):
            raise UnsupportedOrderError(f"n_terms must be 1, 2 or 3, got {self.n_terms}")


def _check_x0(x0: float) -> float:
    x0 = float(x0)
    if not (math.isfinite(x0) and x0 > 0):
        raise DomainError(f"x0 must be positive and finite, got {x0}")
    return x0


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if math.isnan(eps) or eps < 1:
        raise ValidityError(f"eps must be >= 1, got {eps}")
    return eps


def _distance_regime(x0: float) -> str:
    """Tag for a material evaluation: which asymptotic form x0 falls under, if any."""
    if x0 <= settings.SMALL_X_MAX:
        return "short_asymptotic"
    if x0 >= settings.LARGE_X_MIN:
        return "long_asymptotic"
    return "general"


def two_level_susceptibility(omega: float, atom: AtomParams) -> float:
    """Ground-state dynamic polarizability chi'(omega) of the two-level atom."""
    if math.isinf(omega):
        return 0.0
    w0 = atom.k0 * constants.c
    if abs(abs(omega) - w0) <= 1e-12 * w0:
        raise PoleError(f"omega = {omega} is on the atomic resonance {w0}")
    return atom.alpha0 * w0 / 2.0 * (1.0 / (w0 + omega) + 1.0 / (w0 - omega))


def perfect_conductor_reduced(x0: float) -> PotentialResult:
    """v0(x0) = (1/8 pi)[(x0^2 - 2) F + 2 x0 G - x0].

    Written as -x0^2 F'' + 2 x0 G - 2 F, using x0^2 F - x0 = -x0^2 F'', so
    the large-x0 tail carries no cancellation.
    """
    x0 = _check_x0(x0)
    bracket = -x0 * x0 * aux_F_derivative(2, x0) + 2.0 * x0 * aux_G(x0) - 2.0 * aux_F(x0)
    value = bracket / (8.0 * math.pi)
    return PotentialResult(value, 1e-14 * max(abs(value), 1e-16), "perfect_conductor")


def reduced_potential_nondispersive(x0: float, eps: float,
                                    tol: float = settings.DEFAULT_TOL) -> PotentialResult:
    """v(x0, eps) for a constant eps.

    The exact weight is analytic at t = 0, so a shifted contour over it
    returns the ordinary int_0^1 f''' F; the finite part that carries the
    kappa-series regularization is -int_1^inf f''' F instead
    (see series_finite_part for the shifted contour on the series).
    """
    x0 = _check_x0(x0)
    eps = _check_eps(eps)
    if eps == 1.0:
        return PotentialResult(0.0, 0.0, _distance_regime(x0))

    f0, f1, f2 = (angular_weight_on_ray(n, 1.0, eps) for n in range(3))
    if math.isinf(eps):
        fp = QuadratureResult(0.0, 0.0, 0)
    else:
        fp = finite_part_by_complement(lambda p: angular_weight_on_ray(3, p, eps) * aux_F(x0 * p), tol)

    boundary = (-f0 * x0 * x0 * aux_F_derivative(2, x0) - f2 * aux_F(x0)
                + f1 * x0 * aux_G(x0))
    value = -(boundary + fp.value) / (16.0 * math.pi)
    logger.debug(f"v({x0}, {eps}) = {value} ({fp.evaluations} evaluations)")
    return PotentialResult(min(value, 0.0), fp.error_estimate / (16.0 * math.pi), _distance_regime(x0))


def _rotated_table_limit(model: DielectricModel, atom: AtomParams, x0: float, tol: float) -> float:
    """Largest y the model covers; raises if the tail beyond it still matters."""
    if model.kind != "tabulated":
        return _Y_MAX
    lo, hi = model.k_range
    if lo > 0:
        raise DivergentTailError(f"tabulated model must start at k = 0, starts at {lo}")
    y_end = hi * x0 / atom.k0
    if y_end >= _Y_MAX:
        return _Y_MAX
    tail = math.exp(-y_end) * (y_end * y_end + 2.0 * y_end + 2.0)
    if tail > tol:
        raise DivergentTailError(
            f"tabulated eps ends at k = {hi}; the neglected tail ({tail:.3g}) exceeds tol={tol}"
        )
    return y_end


def reduced_potential_dispersive(x0: float, model: DielectricModel, atom: AtomParams,
                                 tol: float = settings.DEFAULT_TOL) -> PotentialResult:
    """v for a k-dependent eps, evaluated on the imaginary wavenumber axis.

        v = (x0/16 pi) int_0^inf dy y^3/(x0^2 + y^2) int_1^inf f(p, eps(y k0/x0)) e^(-p y) dp

    The inner integral is taken in u = p y.
    """
    x0 = _check_x0(x0)
    if model.kind == "single_relaxation" and model.chi0 == 0:
        return PotentialResult(0.0, 0.0, _distance_regime(x0))
    if model.kind == "constant" and model.epsilon == 1:
        return PotentialResult(0.0, 0.0, _distance_regime(x0))
    y_end = _rotated_table_limit(model, atom, x0, tol)
    inner_evals = [0]

    def inner(y: float) -> float:
        eps = permittivity(model, y * atom.k0 / x0)
        if eps == 1.0:
            return 0.0

        def weight(u: float) -> float:
            p = min(max(u / y, 1.0), _P_CAP)
            return angular_weight_on_ray(0, p, eps) / (p * p) * u * u * math.exp(-u)

        res = adaptive_integrate(weight, y, math.inf, tol * 1e-2, rel_tol=tol * 1e-2)
        inner_evals[0] += res.evaluations
        return res.value / (x0 * x0 + y * y)

    scale = 16.0 * math.pi / x0
    breaks = [b for b in (x0, 10.0 * x0, 100.0 * x0) if b < y_end]
    outer = adaptive_integrate(inner, 0.0, y_end, tol * scale, points=breaks, rel_tol=tol)
    value = outer.value / scale
    logger.debug(
        f"dispersive v({x0}) = {value} ({outer.evaluations} outer, {inner_evals[0]} inner evaluations)"
    )
    return PotentialResult(min(value, 0.0), outer.error_estimate / scale, _distance_regime(x0))


def evaluate_potential(x0: float, model: DielectricModel, atom: AtomParams,
                       tol: float = settings.DEFAULT_TOL) -> PotentialResult:
    """Dispatch to the constant-eps or the dispersive evaluator."""
    if model.kind == "constant":
        return reduced_potential_nondispersive(x0, model.epsilon, tol)
    return reduced_potential_dispersive(x0, model, atom, tol)


def short_range_reduced(eps: float) -> float:
    eps = _check_eps(eps)
    if math.isinf(eps):
        return -0.125
    return -0.125 * (eps - 1.0) / (eps + 1.0)


def long_range_factor(kappa: float, spec: SeriesSpec) -> float:
    """g(kappa) with V ~ g * (-3 hbar c alpha0 / 8 pi z^4) at large x0."""
    kappa = float(kappa)
    if not kappa > 0:
        raise DomainError(f"kappa must be positive, got {kappa}")
    n = spec.n_terms
    if spec.regime == "large_kappa":
        if kappa < settings.LARGE_KAPPA_MIN:
            raise PreconditionError(
                f"large-kappa series needs kappa >= {settings.LARGE_KAPPA_MIN}, got {kappa}"
            )
        terms = [1.0, -5.0 / (4.0 * math.sqrt(kappa)), 22.0 / (15.0 * kappa)]
        return sum(terms[:n])
    if kappa > settings.SMALL_KAPPA_MAX:
        raise PreconditionError(
            f"small-kappa series needs kappa <= {settings.SMALL_KAPPA_MAX}, got {kappa}"
        )
    terms = [1.0, -169.0 * kappa / 322.0, 2263.0 * kappa ** 2 / 7728.0]
    return 23.0 / 60.0 * kappa * sum(terms[:n])


def short_range_bracket_numeric(eps: float, tol: float = settings.DEFAULT_TOL) -> float:
    """-(1/4)[f''(1) + int_1^inf f''' dp], normalized so that it is 1 at eps = inf."""
    eps = _check_eps(eps)
    if eps == 1.0:
        return 0.0
    if math.isinf(eps):
        return 1.0
    ray = adaptive_integrate(lambda p: angular_weight_on_ray(3, p, eps), 1.0, math.inf, tol)
    return -0.25 * (angular_weight_on_ray(2, 1.0, eps) + ray.value)


# highest series term the shifted contour can regularize (t^-5)
_SERIES_FP_TERMS = {"small_kappa": 1, "large_kappa": 2}


def series_finite_part(kappa: float, spec: SeriesSpec,
                       tol: float = settings.DEFAULT_TOL) -> QuadratureResult:
    """FP int_0^1 of the truncated f''' series, taken on the shifted contour t -> t + i delta."""
    kappa = float(kappa)
    if not kappa > 0:
        raise DomainError(f"kappa must be positive, got {kappa}")
    usable = _SERIES_FP_TERMS[spec.regime]
    if spec.n_terms > usable:
        raise UnsupportedOrderError(
            f"{spec.regime} series terms beyond {usable} are more singular than t^-5"
        )
    regime = "small" if spec.regime == "small_kappa" else "large"
    f3_series(1.0, kappa, regime, spec.n_terms)  # regime preconditions
    doubled = finite_part_integrate(
        lambda u: f3_series(u, kappa, regime, spec.n_terms), "doubled", order=5, tol=tol
    )
    return doubled.scaled(0.5)


def short_range_bracket_series(kappa: float, spec: SeriesSpec,
                               tol: float = settings.DEFAULT_TOL) -> float:
    """-(1/4)[f''(1) - FP int_0^1 f'''], with f''' replaced by its truncated series."""
    fp = series_finite_part(kappa, spec, tol)
    return -0.25 * (angular_weight_on_ray(2, 1.0, 1.0 + float(kappa)) - fp.value)


def long_range_factor_numeric(eps: float, tol: float = settings.DEFAULT_TOL) -> float:
    """g(eps) from -(1/12)[2 f(1) + f'(1) + f''(1) + int_1^inf f'''/p dp], no kappa expansion."""
    eps = _check_eps(eps)
    if eps == 1.0:
        return 0.0
    f0, f1, f2 = (angular_weight_on_ray(n, 1.0, eps) for n in range(3))
    if math.isinf(eps):
        tail = 0.0
    else:
        tail = adaptive_integrate(lambda p: angular_weight_on_ray(3, p, eps) / p, 1.0, math.inf, tol).value
    return -(2.0 * f0 + f1 + f2 + tail) / 12.0


def pairwise_integrated_factor(kappa: float, n_terms: int) -> float:
    """Bracket 1 - kappa/3 + kappa^2/9 of the pairwise-summed long-range potential."""
    kappa = float(kappa)
    if n_terms not in (1, 2, 3):
        raise UnsupportedOrderError(f"n_terms must be 1, 2 or 3, got {n_terms}")
    if not 0 <= kappa <= settings.PAIRWISE_KAPPA_MAX:
        raise PreconditionError(
            f"pairwise series needs 0 <= kappa <= {settings.PAIRWISE_KAPPA_MAX}, got {kappa}"
        )
    return sum([1.0, -kappa / 3.0, kappa ** 2 / 9.0][:n_terms])


def pairwise_integrated_closed(kappa: float) -> float:
    """3 / (3 + kappa), the Clausius-Mosotti form the bracket expands."""
    kappa = float(kappa)
    if not kappa >= 0:
        raise DomainError(f"kappa must be >= 0, got {kappa}")
    return 3.0 / (3.0 + kappa)


def nonadditivity_ratio(kappa: float, n_terms: int) -> float:
    """(V - V_pairwise)/V at long range, as a truncated kappa series."""
    kappa = float(kappa)
    if n_terms not in (1, 2, 3):
        raise UnsupportedOrderError(f"n_terms must be 1, 2 or 3, got {n_terms}")
    if not 0 <= kappa <= settings.SMALL_KAPPA_MAX:
        raise PreconditionError(
            f"non-additivity series needs 0 <= kappa <= {settings.SMALL_KAPPA_MAX}, got {kappa}"
        )
    terms = [
        -185.0 / 966.0 * kappa,
        303113.0 / 3732624.0 * kappa ** 2,
        -1325388223.0 / 39662862624.0 * kappa ** 3,
    ]
    return sum(terms[:n_terms])


def nonadditivity_ratio_numeric(kappa: float, tol: float = settings.DEFAULT_TOL) -> float:
    kappa = float(kappa)
    if not kappa > 0:
        raise DomainError(f"kappa must be positive, got {kappa}")
    g = long_range_factor_numeric(1.0 + kappa, tol)
    pairwise = 23.0 / 60.0 * kappa * pairwise_integrated_closed(kappa)
    return 1.0 - pairwise / g


def _clausius_mosotti(kappa: float) -> float:
    """N alpha0 of a medium with eps = 1 + kappa."""
    return 3.0 * kappa / (4.0 * math.pi * (kappa + 3.0))


def _half_space_moment(power: int) -> float:
    """int over the half-space of r^-power for an atom at unit distance."""
    value, _ = dblquad(
        lambda rho, d: 2.0 * math.pi * rho / (rho * rho + d * d) ** (power / 2.0),
        1.0, math.inf, 0.0, math.inf, epsabs=1e-12, epsrel=1e-10,
    )
    return value


def london_pairwise_reduced(kappa: float) -> float:
    """Reduced short-range v from summing -3 hbar w0 alpha0^2 / 4 r^6 over the medium."""
    kappa = float(kappa)
    if not kappa >= 0:
        raise DomainError(f"kappa must be >= 0, got {kappa}")
    return -0.75 * _clausius_mosotti(kappa) * _half_space_moment(6)


def casimir_polder_pairwise_reduced(kappa: float) -> float:
    """Long-range factor g from summing -23 hbar c alpha0^2 / 4 pi r^7 over the medium."""
    kappa = float(kappa)
    if not kappa >= 0:
        raise DomainError(f"kappa must be >= 0, got {kappa}")
    # g * (3/8 pi) = (23/4 pi) N alpha0 I7
    return 46.0 / 3.0 * _clausius_mosotti(kappa) * _half_space_moment(7)


def to_physical(result: PotentialResult, atom: AtomParams, z: float, units: str = "si") -> float:
    """V = (hbar c alpha0 k0 / z^3) v.

    si: alpha0 in m^3, k0 in 1/m, z in m, V in J.
    atomic: lengths in bohr, V in hartree (hbar = 1, c = 1/alpha).
    reduced: v itself.
    """
    units = units.lower()
    if units not in UNIT_SYSTEMS:
        raise DomainError(f"unknown unit system {units!r}")
    if not (math.isfinite(z) and z > 0):
        raise DomainError(f"distance must be positive, got {z}")
    if units == "reduced":
        return result.v_reduced
    hbar_c = constants.hbar * constants.c if units == "si" else 1.0 / constants.fine_structure
    return hbar_c * atom.alpha0 * atom.k0 / z ** 3 * result.v_reduced
