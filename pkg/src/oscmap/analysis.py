"""Benchmark quantities of a scheme: frequency series, phase error, cost.

For a time-reversible (palindromic) scheme the one-step map has equal
diagonal entries g = h and unit determinant, so its rotation angle satisfies
sin(theta) = sqrt(nu * tau). The modified-frequency expansion

    omega_a / omega = asin(sqrt(nu * tau)) / x,    x = eps * omega,

is computed here entirely inside the truncated series ring, which makes the
coefficients exact in rational mode. The leading coefficient beyond 1 is the
order coefficient c_n, the per-period phase error being 2*pi*c_n*x^n to
leading order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import mpmath

from . import series as series_mod
from .phasemap import Regime, RegimeError, scheme_matrix, scheme_series_matrix, spectral
from .schemes import DRIFT, GKICK, Scheme, get_scheme, is_symmetric
from .series import Series

__all__ = [
    "AnalysisError", "PhaseErrorReport", "StabilityLimit", "ConvergenceRow",
    "ConvergenceStudy", "omega_a_series", "effective_param_series",
    "phase_error", "order_coefficient", "normalized_coefficient",
    "stability_limit", "convergence_study", "analyze",
    "RICHARDSON_GRID", "RICHARDSON_RTOL",
]

#: Series coefficients at or below this magnitude count as zero when the
#: leading order is extracted.
COEFF_TOL = 1e-14

#: Grid for the numeric Richardson cross-check of the order coefficient.
RICHARDSON_GRID = (1e-2, 5e-3, 2.5e-3)
RICHARDSON_RTOL = 1e-6

_STABILITY_BRACKET = 10.0
_STABILITY_SCAN_STEP = 1e-3
_STABILITY_TOL = 1e-10


class AnalysisError(ValueError):
    """A benchmark quantity is undefined or a cross-check failed."""


class StabilityLimit(NamedTuple):
    """Largest stable x = eps*omega; bounded is False if none found in (0, 10]."""

    x_max: float
    bounded: bool


def _reversible_series_matrix(s: Scheme, order: int, exact: bool | None):
    if not is_symmetric(s):
        raise AnalysisError(
            f"scheme {s.name!r} is not palindromic: the series route assumes "
            "equal diagonal entries (time reversibility)"
        )
    return scheme_series_matrix(s, order, exact)


def omega_a_series(s: Scheme, order: int = 10,
                   exact: bool | None = None) -> Series:
    """Series of omega_a/omega in x = eps*omega for a reversible scheme.

    Both tau and nu are odd with leading coefficient x, so xi = sqrt(nu*tau)
    is built by stripping one power of x from each factor, taking the square
    root of the even ratio, and restoring the power; the result is
    asin(xi)/x, truncated at `order`.
    """
    m = _reversible_series_matrix(s, order + 2, exact)
    t1 = m.tau.divided_by_x()
    n1 = m.nu.divided_by_x()
    xi = (t1 * n1).sqrt().times_x()
    return series_mod.asin(xi).divided_by_x().truncated(order)


def effective_param_series(s: Scheme, order: int = 10,
                           exact: bool | None = None) -> tuple[Series, Series]:
    """Series of (1/m*, k*/omega^2): the effective mass and spring constant.

    1/m* = (omega_a/omega) * sqrt(tau/nu) and k*/omega^2 =
    (omega_a/omega) * sqrt(nu/tau), with the product equal to
    (omega_a/omega)^2 term by term.
    """
    m = _reversible_series_matrix(s, order + 2, exact)
    t1 = m.tau.divided_by_x()
    n1 = m.nu.divided_by_x()
    wa = series_mod.asin((t1 * n1).sqrt().times_x()).divided_by_x()
    ratio = (t1 * n1.reciprocal()).sqrt()
    inv_mass = (wa * ratio).truncated(order)
    k_star = (wa * ratio.reciprocal()).truncated(order)
    return inv_mass, k_star


def phase_error(s: Scheme, x: float) -> float:
    """Per-period phase error 2*pi*(omega_a/omega - 1) at x = eps*omega."""
    data = spectral(scheme_matrix(s, x, 1.0))
    if data.regime is not Regime.ELLIPTIC:
        raise RegimeError(f"{data.regime.value} map at x = {x}: {data.detail}")
    return 2.0 * math.pi * (data.omega_a - 1.0)


# ------------------------------------------------------- order coefficient

def _mp_half_trace(s: Scheme, x: mpmath.mpf) -> mpmath.mpf:
    """Half trace of the scheme matrix at working precision (direct shears)."""
    one, zero = mpmath.mpf(1), mpmath.mpf(0)
    m = [[one, zero], [zero, one]]
    for st in s.active_steps():
        c = _to_mpf(st.c)
        if st.kind == DRIFT:
            f = [[one, c * x], [zero, one]]
        else:
            mu = c * x
            if st.kind == GKICK:
                mu += _to_mpf(st.u) * x**3
            f = [[one, zero], [-mu, one]]
        m = [
            [f[0][0] * m[0][0] + f[0][1] * m[1][0],
             f[0][0] * m[0][1] + f[0][1] * m[1][1]],
            [f[1][0] * m[0][0] + f[1][1] * m[1][0],
             f[1][0] * m[0][1] + f[1][1] * m[1][1]],
        ]
    return (m[0][0] + m[1][1]) / 2


def _to_mpf(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / mpmath.mpf(v.denominator)
    return mpmath.mpf(v)


def _richardson_order_coefficient(s: Scheme, n: int) -> float:
    """Numeric c_n: Richardson extrapolation of (omega_a/omega - 1)/x^n.

    Works at 50 digits because the deviation is as small as c4*x^4 ~ 1e-16
    on the pinned grid; the route (shear product, trace, arccos, Richardson)
    shares nothing with the series ring. The deviation is measured relative
    to its x -> 0 floor: float rounding of the consistency sums (~1e-17)
    shifts omega_a/omega by a constant, which the 1/x^n division would
    otherwise amplify through the extrapolation.
    """
    with mpmath.workdps(50):
        x_floor = mpmath.mpf("1e-6")
        floor = mpmath.acos(_mp_half_trace(s, x_floor)) / x_floor - 1
        r = []
        for x in RICHARDSON_GRID:
            xm = mpmath.mpf(x)
            dev = mpmath.acos(_mp_half_trace(s, xm)) / xm - 1
            r.append((dev - floor) / xm**n)
        # eliminate the x^2 and x^4 corrections of the even remainder
        r1a = (4 * r[1] - r[0]) / 3
        r1b = (4 * r[2] - r[1]) / 3
        return float((16 * r1b - r1a) / 15)


def order_coefficient(s: Scheme, max_order: int | None = None):
    """Leading deviation order and coefficient: omega_a/omega = 1 + c_n x^n + ...

    The series value is cross-checked against the independent numeric
    Richardson estimate; disagreement beyond 1e-6 relative raises instead of
    averaging.
    """
    order = max_order if max_order is not None else max(10, s.order + 4)
    wa = omega_a_series(s, order)
    n = None
    for k in range(1, order + 1):
        c = wa.coeffs[k]
        if not (abs(c) <= COEFF_TOL if isinstance(c, float) else c == 0):
            n = k
            break
    if n is None:
        raise AnalysisError(
            f"leading order of {s.name!r} exceeds truncation order {order}"
        )
    c_n = wa.coeffs[n]
    numeric = _richardson_order_coefficient(s, n)
    if abs(numeric - float(c_n)) > RICHARDSON_RTOL * abs(float(c_n)):
        raise AnalysisError(
            f"order-coefficient cross-check failed for {s.name!r}: series "
            f"gives {float(c_n)!r}, Richardson gives {numeric!r}"
        )
    return n, c_n


def normalized_coefficient(s: Scheme, reference: Scheme | None = None) -> float:
    """Cost-normalized coefficient c* = c4 * (force_evals/3)^4 / |c4(ref)|.

    Defined for the fourth-order benchmark table only; the reference defaults
    to the Forest-Ruth scheme and one gradient evaluation counts as one force
    evaluation through the declared force_evals metadata.
    """
    ref = reference if reference is not None else get_scheme("FR")
    for scheme in (s, ref):
        if scheme.order != 4:
            raise AnalysisError(
                f"normalization is defined for 4th-order schemes; "
                f"{scheme.name!r} declares order {scheme.order}"
            )
    n, c4 = order_coefficient(s)
    if n != 4:
        raise AnalysisError(
            f"{s.name!r} declares order 4 but its leading deviation is x^{n}"
        )
    n_ref, c4_ref = order_coefficient(ref)
    if n_ref != 4:
        raise AnalysisError(
            f"reference {ref.name!r} leading deviation is x^{n_ref}, not x^4"
        )
    return float(c4) * (s.force_evals / 3.0) ** 4 / abs(float(c4_ref))


# ------------------------------------------------------------ stability

def stability_limit(s: Scheme) -> StabilityLimit:
    """First x > 0 where |Tr M(x)/2| reaches 1, by scan plus bisection.

    Scans (0, 10] in steps of 1e-3 and bisects the first bracket to 1e-10.
    Returns (10.0, False) when no crossing lies in the bracket.
    """

    def excess(x: float) -> float:
        m = scheme_matrix(s, x, 1.0)
        return abs(m.trace()) / 2.0 - 1.0

    lo = 0.0
    hi = None
    steps = int(round(_STABILITY_BRACKET / _STABILITY_SCAN_STEP))
    for k in range(1, steps + 1):
        x = k * _STABILITY_SCAN_STEP
        if excess(x) >= 0.0:
            hi = x
            break
        lo = x
    if hi is None:
        return StabilityLimit(_STABILITY_BRACKET, False)
    while hi - lo > _STABILITY_TOL:
        mid = 0.5 * (lo + hi)
        if excess(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
    return StabilityLimit(0.5 * (lo + hi), True)


# ----------------------------------------------------------- convergence

@dataclass(frozen=True)
class ConvergenceRow:
    order: int
    partial_sum: float
    abs_error: float | None


@dataclass(frozen=True)
class ConvergenceStudy:
    scheme: str
    x: float
    closed_form: float | None
    rows: tuple[ConvergenceRow, ...]
    radius_estimate: float | None


def convergence_study(s: Scheme, x: float, order: int = 20,
                      exact: bool | None = None) -> ConvergenceStudy:
    """Partial sums of the frequency series against the closed form.

    Rows k = 0..order hold the partial sum through x^k and, when the map is
    elliptic at this x, the absolute error against the arccos closed form.
    The radius estimate is a plain ratio test over the last four nonzero
    coefficients (diagnostic only).
    """
    wa = omega_a_series(s, order, exact)
    data = spectral(scheme_matrix(s, float(x), 1.0))
    closed = data.omega_a if data.regime is Regime.ELLIPTIC else None
    rows = []
    acc = 0.0
    power = 1.0
    for k, c in enumerate(wa.coeffs):
        acc += float(c) * power
        power *= x
        err = abs(acc - closed) if closed is not None else None
        rows.append(ConvergenceRow(k, acc, err))
    nonzero = [
        (k, abs(float(c))) for k, c in enumerate(wa.coeffs)
        if k >= 1 and not (abs(float(c)) <= COEFF_TOL)
    ]
    radius = None
    if len(nonzero) >= 2:
        tail = nonzero[-4:]
        estimates = [
            (c1 / c2) ** (1.0 / (k2 - k1))
            for (k1, c1), (k2, c2) in zip(tail, tail[1:])
        ]
        radius = sum(estimates) / len(estimates)
    return ConvergenceStudy(s.name, float(x), closed, tuple(rows), radius)


# -------------------------------------------------------------- report

@dataclass(frozen=True)
class PhaseErrorReport:
    """Everything cmd_analyze prints for one reversible scheme."""

    scheme: str
    order_declared: int
    n: int
    c_n: float
    c_star: float | None
    stability: StabilityLimit
    omega_a: Series
    inv_mass: Series
    k_star: Series


def analyze(s: Scheme, order: int = 10,
            reference: Scheme | None = None) -> PhaseErrorReport:
    """Full phase-error report; raises AnalysisError for non-reversible schemes."""
    n, c_n = order_coefficient(s)
    try:
        c_star = normalized_coefficient(s, reference)
    except AnalysisError:
        c_star = None
    wa = omega_a_series(s, order)
    inv_mass, k_star = effective_param_series(s, order)
    return PhaseErrorReport(
        scheme=s.name,
        order_declared=s.order,
        n=n,
        c_n=float(c_n),
        c_star=c_star,
        stability=stability_limit(s),
        omega_a=wa,
        inv_mass=inv_mass,
        k_star=k_star,
    )
