"""Tests for the 2x2 map construction, spectral data, and closed-form power."""

import math
from fractions import Fraction

import numpy as np
import pytest

from oscmap.schemes import DRIFT, GKICK, KICK, Step, get_scheme, registry
from oscmap.phasemap import (
    PhaseMatrix, Regime, RegimeError, invariant_quadratic_form,
    modified_hamiltonian, propagate_closed_form, scheme_matrix,
    scheme_series_matrix, spectral, step_matrix,
)

F = Fraction


# ------------------------------------------------------------- step matrices

def test_drift_step_matrix():
    m = step_matrix(Step(DRIFT, 1), 0.1, 1.0).as_array()
    assert np.allclose(m, [[1, 0.1], [0, 1]], rtol=0, atol=0)


def test_kick_step_matrix():
    m = step_matrix(Step(KICK, 0.5), 0.1, 1.0).as_array()
    assert np.allclose(m, [[1, 0], [-0.05, 1]], rtol=0, atol=1e-18)


def test_gradient_kick_step_matrix():
    # lower-left entry -(c*eps*w^2 + u*eps^3*w^4) at eps=0.3, w=1
    m = step_matrix(Step(GKICK, 2 / 3, 1 / 36), 0.3, 1.0).as_array()
    assert math.isclose(m[1, 0], -0.20075, rel_tol=0, abs_tol=1e-15)


# ------------------------------------------------------------ scheme matrices

def test_sv_anchor_matrix():
    m = scheme_matrix(get_scheme("SV"), 1.0, 1.0)
    assert math.isclose(m.g, 0.5, abs_tol=1e-15)
    assert math.isclose(m.tau, 1.0, abs_tol=1e-15)
    assert math.isclose(m.nu, 0.75, abs_tol=1e-15)
    assert math.isclose(m.h, 0.5, abs_tol=1e-15)


def test_sv_symbolic_entries():
    # g = 1 - x^2/2, tau = eps, nu = eps*w^2*(1 - x^2/4) at several (eps, w)
    for eps, w in [(0.3, 1.0), (0.17, 2.5), (1.2, 0.6)]:
        m = scheme_matrix(get_scheme("SV"), eps, w)
        x2 = (eps * w) ** 2
        assert math.isclose(m.g, 1 - x2 / 2, rel_tol=1e-15)
        assert math.isclose(m.tau, eps, rel_tol=1e-15)
        assert math.isclose(m.nu, eps * w**2 * (1 - x2 / 4), rel_tol=1e-15)
        assert m.h == m.g


def test_any_scheme_identity_at_zero_step():
    for s in registry():
        m = scheme_matrix(s, 0.0, 1.0).as_array()
        assert np.array_equal(m, np.eye(2))


def test_sv_series_matrix_exact():
    m = scheme_series_matrix(get_scheme("SV"), 6)
    assert m.g.coeffs == [1, 0, F(-1, 2), 0, 0, 0, 0]
    assert m.tau.coeffs == [0, 1, 0, 0, 0, 0, 0]
    assert m.nu.coeffs == [0, 1, 0, F(-1, 4), 0, 0, 0]
    assert m.h == m.g


def test_fr_series_matrix_against_surd_polynomials():
    cbrt2 = 2.0 ** (1.0 / 3.0)
    cbrt4 = 2.0 ** (2.0 / 3.0)
    m = scheme_series_matrix(get_scheme("FR"), 8)
    g_ref = [1, 0, -0.5, 0, 1 / 24, 0, (6 + 5 * cbrt2 + 4 * cbrt4) / 288, 0, 0]
    tau_ref = [0, 1, 0, -1 / 6, 0, -(1 + cbrt2) / (72 * cbrt4), 0,
               (25 + 20 * cbrt2 + 16 * cbrt4) / 1728, 0]
    nu_ref = [0, 1, 0, -1 / 6, 0, -(4 + 4 * cbrt2 + 3 * cbrt4) / 144, 0, 0, 0]
    for got, ref in ((m.g.coeffs, g_ref), (m.tau.coeffs, tau_ref),
                     (m.nu.coeffs, nu_ref)):
        for a, b in zip(got, ref):
            assert abs(a - b) <= 1e-12
    assert m.g.coeffs == m.h.coeffs


def test_series_matrix_det_is_one():
    for name in ("SV", "FR", "C", "LF1"):
        m = scheme_series_matrix(get_scheme(name), 8)
        det = m.det()
        assert all(abs(c) <= 1e-13 for c in det.coeffs[1:])
        assert det.coeffs[0] == 1


def test_symmetric_series_parity():
    for name in ("SV", "FR", "C", "M", "BM"):
        m = scheme_series_matrix(get_scheme(name), 9)
        assert m.g.coeffs == m.h.coeffs        # exact, including float mode
        assert m.g.is_even(tol=0.0)            # structural zeros are exact
        assert m.tau.is_odd(tol=0.0)
        assert m.nu.is_odd(tol=0.0)


def test_lf1_series_diagonal_gap():
    m = scheme_series_matrix(get_scheme("LF1"), 4)
    gap = m.g - m.h
    assert gap.coeffs == [0, 0, 1, 0, 0]  # g - h = +x^2


def test_rational_mode_requires_exact_coefficients():
    with pytest.raises(TypeError, match="not exact"):
        scheme_series_matrix(get_scheme("FR"), 6, exact=True)


# ------------------------------------------------------------------ spectral

def test_spectral_sv_at_unit_step():
    d = spectral(scheme_matrix(get_scheme("SV"), 1.0, 1.0))
    assert d.regime is Regime.ELLIPTIC
    assert math.isclose(d.theta, math.pi / 3, rel_tol=1e-14)
    assert math.isclose(d.omega_a, 1.0471975511965976, rel_tol=1e-12)
    assert d.reversible


def test_spectral_hyperbolic_beyond_limit():
    d = spectral(scheme_matrix(get_scheme("SV"), 2.5, 1.0))
    assert d.regime is Regime.HYPERBOLIC
    assert d.theta is None and d.omega_a is None
    assert "unstable" in d.detail


def test_spectral_parabolic_at_limit():
    d = spectral(scheme_matrix(get_scheme("SV"), 2.0, 1.0))
    assert d.regime is Regime.PARABOLIC


def test_spectral_small_step_limit():
    d = spectral(scheme_matrix(get_scheme("SV"), 1e-8, 1.0))
    assert math.isclose(d.omega_a, 1.0, abs_tol=1e-6)


def test_spectral_carries_omega_scaling():
    d = spectral(scheme_matrix(get_scheme("SV"), 0.25, 2.0))
    x = 0.5
    assert math.isclose(d.omega_a, math.acos(1 - x * x / 2) / 0.25, rel_tol=1e-13)
    assert math.isclose(d.k_star, d.omega_a * 2.0 * math.sqrt(1 - x * x / 4),
                        rel_tol=1e-12)


# ------------------------------------------------------------- closed form

def test_propagate_zero_time_is_identity():
    m = scheme_matrix(get_scheme("SV"), 0.3, 1.0)
    assert np.allclose(propagate_closed_form(m, 0.0), np.eye(2), atol=0)


def test_propagate_single_step_reproduces_matrix():
    for name in ("SV", "FR", "LF1", "C"):
        m = scheme_matrix(get_scheme(name), 0.4, 1.0)
        assert np.allclose(propagate_closed_form(m, 0.4), m.as_array(),
                           rtol=0, atol=1e-14)


def test_propagate_matches_matrix_power():
    m = scheme_matrix(get_scheme("SV"), 0.3, 1.0)
    for n in (1, 10, 1000, 10000):
        brute = np.linalg.matrix_power(m.as_array(), n)
        closed = propagate_closed_form(m, n * 0.3)
        assert np.max(np.abs(brute - closed)) <= 1e-9


def test_propagate_matches_matrix_power_nonreversible():
    m = scheme_matrix(get_scheme("LF1"), 0.5, 1.0)
    for n in (1, 10, 1000):
        brute = np.linalg.matrix_power(m.as_array(), n)
        closed = propagate_closed_form(m, n * 0.5)
        assert np.max(np.abs(brute - closed)) <= 1e-10


def test_propagate_requires_elliptic():
    m = scheme_matrix(get_scheme("SV"), 2.5, 1.0)
    with pytest.raises(RegimeError, match="hyperbolic"):
        propagate_closed_form(m, 1.0)


def test_sigma_amplitude_first_order():
    # non-reversible map: translation amplitude (g-h)/(2 xi) is nonzero
    x = 0.5
    m = scheme_matrix(get_scheme("LF1"), x, 1.0)
    d = spectral(m)
    amp = (m.g - m.h) / (2 * d.xi)
    assert math.isclose(abs(m.g - m.h), x * x, rel_tol=1e-13)
    assert abs(amp) > 0.2
    # reversible scheme: exactly zero
    msv = scheme_matrix(get_scheme("SV"), x, 1.0)
    assert msv.g - msv.h == 0.0


# ------------------------------------------------------ modified Hamiltonian

def test_modified_hamiltonian_continuum_limit():
    d = spectral(scheme_matrix(get_scheme("SV"), 1e-4, 1.0))
    h_a = modified_hamiltonian(d, 1.0, 0.0)
    assert math.isclose(h_a, 0.5, abs_tol=1e-8)  # H = w^2 q^2 / 2 = 0.5


def test_modified_hamiltonian_sv_closed_form():
    x = 0.5
    d = spectral(scheme_matrix(get_scheme("SV"), x, 1.0))
    k_star = d.omega_a * math.sqrt(1 - x * x / 4)
    assert math.isclose(modified_hamiltonian(d, 1.0, 0.0), k_star / 2,
                        rel_tol=1e-13)


def test_modified_hamiltonian_rejects_nonreversible():
    d = spectral(scheme_matrix(get_scheme("LF1"), 0.3, 1.0))
    with pytest.raises(ValueError, match="time-reversible"):
        modified_hamiltonian(d, 1.0, 0.0)


# ------------------------------------------------------------ invariant form

def test_invariant_form_reversible_is_diagonal():
    q = invariant_quadratic_form(scheme_matrix(get_scheme("SV"), 0.3, 1.0))
    assert q[0, 1] == 0.0 and q[1, 0] == 0.0


def test_invariant_form_conserved_under_map():
    for name in ("SV", "LF1", "FR", "C", "M", "BM"):
        m = scheme_matrix(get_scheme(name), 0.2, 1.0)
        q = invariant_quadratic_form(m)
        a = m.as_array()
        assert np.max(np.abs(a.T @ q @ a - q)) <= 1e-12


def test_invariant_form_first_order_cross_term():
    # cross term magnitude relative to the p^2 entry is eps*w^2/2
    x = 0.2
    m = scheme_matrix(get_scheme("LF1"), x, 1.0)
    q = invariant_quadratic_form(m)
    assert math.isclose(abs(q[0, 1]) / q[1, 1], x / 2, rel_tol=1e-12)


def test_invariant_form_tilt_approaches_45_degrees():
    for x in (0.05, 0.02):
        q = invariant_quadratic_form(scheme_matrix(get_scheme("LF1"), x, 1.0))
        evals, evecs = np.linalg.eigh(q)
        major = evecs[:, 0]  # smaller eigenvalue = longer axis
        tilt = math.degrees(math.atan2(major[1], major[0]))
        if tilt > 90:
            tilt -= 180
        elif tilt <= -90:
            tilt += 180
        assert abs(abs(tilt) - 45.0) <= 0.5


# --------------------------------------------------------------- properties

def test_det_one_across_sweep():
    for s in registry():
        for x in np.linspace(0.01, 1.99, 50):
            m = scheme_matrix(s, float(x), 1.0)
            assert abs(m.det() - 1.0) <= 1e-12


def test_time_reversibility_of_symmetric_schemes():
    for s in registry():
        from oscmap.schemes import is_symmetric
        if not is_symmetric(s):
            continue
        for x in (0.1, 0.7, 1.4):
            fwd = scheme_matrix(s, x, 1.0)
            back = scheme_matrix(s, -x, 1.0)
            prod = (back @ fwd).as_array()
            assert np.max(np.abs(prod - np.eye(2))) <= 1e-12
