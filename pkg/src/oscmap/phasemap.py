"""Exact per-timestep 2x2 phase-space maps and their spectral analysis.

A scheme acting on the oscillator is a linear map of (q, p). Its matrix is
stored through the four entries [[g, tau], [-nu, h]]; symplecticity means
det = g*h + tau*nu = 1. Entries are either floats (numeric mode, explicit
timestep eps and frequency omega) or Series in x = eps*omega (series mode,
omega fixed to 1).

Ordering convention: the first step of a scheme acts first on the phase
point, so the matrix product carries the first step rightmost. The
Stoermer/Verlet anchor g = 1 - x^2/2, tau = eps, nu = eps*omega^2*(1 - x^2/4)
pins this choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .series import Series
from .schemes import DRIFT, GKICK, Scheme, Step, is_symmetric

__all__ = [
    "PhaseMatrix", "SpectralData", "Regime", "RegimeError",
    "step_matrix", "scheme_matrix", "step_series_matrix",
    "scheme_series_matrix", "spectral", "propagate_closed_form",
    "modified_hamiltonian", "invariant_quadratic_form",
    "PARABOLIC_TOL", "REVERSIBLE_TOL",
]

#: |Tr M| within this of 2 is classified parabolic rather than elliptic.
PARABOLIC_TOL = 1e-12
#: |g - h| at or below this counts as time-reversible in numeric mode.
REVERSIBLE_TOL = 1e-12


class Regime(str, Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


class RegimeError(ValueError):
    """Raised when a quantity is requested outside the elliptic regime."""


@dataclass(frozen=True)
class PhaseMatrix:
    """One-timestep map [[g, tau], [-nu, h]] acting on the column (q, p)."""

    g: object
    tau: object
    nu: object
    h: object
    eps: float | None = None     # numeric mode only
    omega: float | None = None   # numeric mode only

    def __matmul__(self, other: "PhaseMatrix") -> "PhaseMatrix":
        return PhaseMatrix(
            g=self.g * other.g - self.tau * other.nu,
            tau=self.g * other.tau + self.tau * other.h,
            nu=self.nu * other.g + self.h * other.nu,
            h=self.h * other.h - self.nu * other.tau,
            eps=self.eps,
            omega=self.omega,
        )

    def det(self):
        return self.g * self.h + self.tau * self.nu

    def trace(self):
        return self.g + self.h

    @property
    def is_series(self) -> bool:
        return isinstance(self.g, Series)

    def is_reversible(self, tol: float = REVERSIBLE_TOL) -> bool:
        if self.is_series:
            return self.g == self.h
        return abs(self.g - self.h) <= tol

    def as_array(self) -> np.ndarray:
        """Numeric 2x2 array; series-mode matrices have no single array."""
        if self.is_series:
            raise TypeError("series-mode matrix cannot be converted to an array")
        return np.array([[self.g, self.tau], [-self.nu, self.h]], dtype=float)


@dataclass(frozen=True)
class SpectralData:
    """Rotation data of an elliptic map; degenerate fields are None."""

    theta: float | None
    xi: float | None
    omega_a: float | None
    m_star: float | None
    k_star: float | None
    regime: Regime
    reversible: bool
    detail: str = ""


# --------------------------------------------------------------- numeric mode

def step_matrix(step: Step, eps: float, omega: float) -> PhaseMatrix:
    """Numeric matrix of one elementary step; eps may be negative."""
    if step.kind == DRIFT:
        return PhaseMatrix(1.0, float(step.c) * eps, 0.0, 1.0, eps, omega)
    mu = float(step.c) * eps * omega**2
    if step.kind == GKICK:
        mu += float(step.u) * eps**3 * omega**4
    return PhaseMatrix(1.0, 0.0, mu, 1.0, eps, omega)


def _numeric_identity(eps, omega) -> PhaseMatrix:
    return PhaseMatrix(1.0, 0.0, 0.0, 1.0, eps, omega)


def _series_identity(order: int) -> PhaseMatrix:
    return PhaseMatrix(Series.one(order), Series.zero(order),
                       Series.zero(order), Series.one(order))


def _assemble(mats: list[PhaseMatrix], palindromic: bool,
              identity: PhaseMatrix) -> PhaseMatrix:
    """Product with the first factor rightmost.

    Palindromic sequences are multiplied center-outward, M -> m_i M m_i, so
    equal diagonal entries stay exactly equal (bitwise, even with float
    coefficients): conjugating a matrix with g = h by one shear preserves the
    equality term by term.
    """
    if not mats:
        return identity
    n = len(mats)
    if palindromic:
        m = mats[n // 2] if n % 2 else identity
        for k in range(n // 2 - 1, -1, -1):
            m = mats[n - 1 - k] @ m @ mats[k]
        return m
    m = mats[0]
    for factor in mats[1:]:
        m = factor @ m
    return m


def scheme_matrix(s: Scheme, eps: float, omega: float) -> PhaseMatrix:
    """Numeric one-timestep matrix of a scheme (identity steps ignored)."""
    mats = [step_matrix(st, eps, omega) for st in s.active_steps()]
    return _assemble(mats, is_symmetric(s), _numeric_identity(eps, omega))


# --------------------------------------------------------------- series mode

def _series_coeff(value, exact: bool):
    if exact:
        if not isinstance(value, (int, Fraction)):
            raise TypeError(
                f"coefficient {value!r} is not exact; rational series mode "
                "needs int or Fraction scheme coefficients"
            )
        return value
    return float(value)


def step_series_matrix(step: Step, order: int, exact: bool = False) -> PhaseMatrix:
    """Series-mode matrix of one step in x = eps*omega (omega = 1)."""
    one, zero = Series.one(order), Series.zero(order)
    c = _series_coeff(step.c, exact)
    if step.kind == DRIFT:
        return PhaseMatrix(one, Series([0, c][: order + 1], order), zero, one)
    mu = [0, c, 0]
    if step.kind == GKICK:
        mu.append(_series_coeff(step.u, exact))
    return PhaseMatrix(one, zero, Series(mu[: order + 1], order), one)


def scheme_series_matrix(s: Scheme, order: int,
                         exact: bool | None = None) -> PhaseMatrix:
    """Series-mode one-timestep matrix; exact defaults to the coefficients."""
    if exact is None:
        from .schemes import has_exact_coefficients
        exact = has_exact_coefficients(s)
    mats = [step_series_matrix(st, order, exact) for st in s.active_steps()]
    return _assemble(mats, is_symmetric(s), _series_identity(order))


# ------------------------------------------------------------------ spectral

def spectral(mat: PhaseMatrix) -> SpectralData:
    """Classify the map and extract rotation angle and effective parameters.

    In the elliptic regime (|Tr M| < 2) the eigenvalues are exp(+-i*theta)
    with theta on (0, pi); the map rotates an invariant ellipse at the
    modified frequency omega_a = theta/eps, with effective mass and spring
    constant 1/m* = omega_a*sqrt(tau/nu), k* = omega_a*sqrt(nu/tau) when
    nu*tau > 0. Parabolic (|Tr M| = 2) and hyperbolic (|Tr M| > 2) maps carry
    only the regime flag and a detail message.
    """
    if mat.is_series:
        raise TypeError("spectral analysis needs a numeric-mode matrix")
    g, tau, nu, h = mat.g, mat.tau, mat.nu, mat.h
    half_trace = (g + h) / 2.0
    reversible = abs(g - h) <= REVERSIBLE_TOL
    if abs(g + h) - 2.0 > PARABOLIC_TOL:
        return SpectralData(
            None, None, None, None, None, Regime.HYPERBOLIC, reversible,
            detail=f"|trace|/2 = {abs(half_trace)!r} exceeds 1; the map is "
                   "unstable and has no real rotation angle",
        )
    w = (g - h) / 2.0
    # det = 1 makes nu*tau - w^2 = sin^2(theta); testing it instead of the
    # trace keeps the classification sharp near theta -> 0, where the trace
    # is quadratically insensitive.
    disc = nu * tau - w * w
    if disc <= 0.0:
        return SpectralData(
            None, None, None, None, None, Regime.PARABOLIC, reversible,
            detail="|trace| equals 2 within tolerance; the rotation angle is "
                   "degenerate and no spectral quantities are defined",
        )
    xi = math.sqrt(disc)
    # atan2 form of arccos(half_trace): same principal branch (0, pi) since
    # det = 1 forces xi = sin(theta), but well conditioned as theta -> 0.
    theta = math.atan2(xi, half_trace)
    omega_a = theta / mat.eps
    m_star = k_star = None
    if nu * tau > 0:
        root = math.sqrt(tau / nu)
        m_star = 1.0 / (omega_a * root)
        k_star = omega_a / root
    return SpectralData(theta, xi, omega_a, m_star, k_star,
                        Regime.ELLIPTIC, reversible)


def _require_elliptic(mat: PhaseMatrix) -> SpectralData:
    data = spectral(mat)
    if data.regime is not Regime.ELLIPTIC:
        raise RegimeError(f"{data.regime.value} map: {data.detail}")
    return data


def propagate_closed_form(mat: PhaseMatrix, t: float) -> np.ndarray:
    """Exact evolution over continuous time t as rotation plus translation.

    Returns R + Sigma where R is the pure rotation with angle theta*t/eps and
    Sigma = ((g-h)/(2 xi)) sin(theta t/eps) diag(1, -1). Sigma vanishes
    exactly for time-reversible maps (h = g). t need not be a multiple of
    the timestep; at t = N*eps the result equals the N-fold matrix power.
    """
    data = _require_elliptic(mat)
    angle = data.theta * t / mat.eps
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([
        [c, (mat.tau / data.xi) * s],
        [-(mat.nu / data.xi) * s, c],
    ])
    shift = ((mat.g - mat.h) / (2.0 * data.xi)) * s
    rot[0, 0] += shift
    rot[1, 1] -= shift
    return rot


def modified_hamiltonian(data: SpectralData, q: float, p: float) -> float:
    """Shadow energy p^2/(2 m*) + k* q^2/2 conserved by a reversible map."""
    if data.regime is not Regime.ELLIPTIC:
        raise RegimeError(f"{data.regime.value} map: {data.detail}")
    if not data.reversible:
        raise ValueError(
            "the modified Hamiltonian in this quadratic form is defined for "
            "time-reversible maps only (equal diagonal entries)"
        )
    if data.m_star is None:
        raise ValueError("m* and k* undefined: nu*tau is not positive")
    return p * p / (2.0 * data.m_star) + 0.5 * data.k_star * q * q


def invariant_quadratic_form(mat: PhaseMatrix) -> np.ndarray:
    """The symmetric matrix Q = [[nu, (g-h)/2], [(g-h)/2, tau]].

    The quadratic form (q, p) Q (q, p)^T is exactly conserved by the map:
    M^T Q M = Q whenever det M = 1, reversible or not. For non-reversible
    maps the off-diagonal entry tilts the invariant ellipse.
    """
    _require_elliptic(mat)
    w = (mat.g - mat.h) / 2.0
    return np.array([[mat.nu, w], [w, mat.tau]], dtype=float)
