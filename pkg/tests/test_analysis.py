"""Tests for the frequency-series and phase-error benchmark machinery."""

import math
from fractions import Fraction

import pytest

from oscmap.analysis import (
    AnalysisError, analyze, convergence_study, effective_param_series,
    normalized_coefficient, omega_a_series, order_coefficient, phase_error,
    stability_limit,
)
from oscmap.phasemap import RegimeError
from oscmap.schemes import adjoint, get_scheme

F = Fraction
CBRT2 = 2.0 ** (1.0 / 3.0)
CBRT4 = 2.0 ** (2.0 / 3.0)


# ------------------------------------------------------------ omega_a series

def test_sv_frequency_series_exact():
    wa = omega_a_series(get_scheme("SV"), 6)
    assert wa.coeffs == [1, 0, F(1, 24), 0, F(3, 640), 0, F(5, 7168)]


def test_fr_frequency_series():
    wa = omega_a_series(get_scheme("FR"), 6)
    c4 = -(32 + 25 * CBRT2 + 20 * CBRT4) / 1440
    c6 = -(89 + 70 * CBRT2 + 56 * CBRT4) / 24192
    assert abs(wa.coeffs[0] - 1) <= 1e-15
    assert abs(wa.coeffs[2]) <= 1e-15
    assert abs(wa.coeffs[4] - c4) <= 1e-12
    assert abs(wa.coeffs[6] - c6) <= 1e-12


def test_c_frequency_series_exact():
    wa = omega_a_series(get_scheme("C"), 4)
    assert wa.coeffs == [1, 0, 0, 0, F(1, 7680)]


def test_omega_a_series_rejects_nonreversible():
    with pytest.raises(AnalysisError, match="not palindromic"):
        omega_a_series(get_scheme("LF1"), 6)


def test_symmetric_series_have_no_odd_terms():
    for name in ("SV", "FR", "C", "M", "BM"):
        wa = omega_a_series(get_scheme(name), 10)
        assert all(
            (c == 0 if not isinstance(c, float) else abs(c) <= 1e-14)
            for c in wa.coeffs[1::2]
        )


# ------------------------------------------------------- effective parameters

def test_sv_effective_parameters_exact():
    inv_mass, k_star = effective_param_series(get_scheme("SV"), 6)
    assert inv_mass.coeffs == [1, 0, F(1, 6), 0, F(1, 30), 0, F(1, 140)]
    assert k_star.coeffs == [1, 0, F(-1, 12), 0, F(-1, 120), 0, F(-1, 840)]


def test_fr_effective_parameters():
    inv_mass, k_star = effective_param_series(get_scheme("FR"), 6)
    im4 = -(6 + 5 * CBRT2 + 5 * CBRT4) / 720
    im6 = (71 + 56 * CBRT2 + 42 * CBRT4) / 12096
    ks4 = -(26 + 20 * CBRT2 + 15 * CBRT4) / 720
    ks6 = -(80 + 63 * CBRT2 + 49 * CBRT4) / 6048
    assert abs(inv_mass.coeffs[2]) <= 1e-14
    assert abs(inv_mass.coeffs[4] - im4) <= 1e-12
    assert abs(inv_mass.coeffs[6] - im6) <= 1e-12
    assert abs(k_star.coeffs[2]) <= 1e-14
    assert abs(k_star.coeffs[4] - ks4) <= 1e-12
    assert abs(k_star.coeffs[6] - ks6) <= 1e-12


@pytest.mark.parametrize("name", ["SV", "FR", "C", "M", "BM"])
def test_mass_times_spring_is_frequency_squared(name):
    s = get_scheme(name)
    inv_mass, k_star = effective_param_series(s, 8)
    wa = omega_a_series(s, 8)
    assert all(
        abs(a - b) <= 1e-12
        for a, b in zip((inv_mass * k_star).coeffs, (wa * wa).coeffs)
    )


# ----------------------------------------------------------------- phase error

def test_phase_error_sv_small_step():
    got = phase_error(get_scheme("SV"), 0.1)
    ref = 2 * math.pi * (2 * math.asin(0.05) / 0.1 - 1)
    assert math.isclose(got, ref, rel_tol=1e-12)
    assert math.isclose(got, 2.621e-3, rel_tol=1e-3)


def test_phase_error_vanishes_in_continuum():
    assert abs(phase_error(get_scheme("SV"), 1e-6)) <= 1e-11


def test_phase_error_outside_window():
    with pytest.raises(RegimeError, match="hyperbolic"):
        phase_error(get_scheme("SV"), 2.5)


# ----------------------------------------------------------- order coefficient

def test_order_coefficient_sv():
    n, c = order_coefficient(get_scheme("SV"))
    assert n == 2 and c == F(1, 24)


def test_order_coefficient_fr():
    n, c = order_coefficient(get_scheme("FR"))
    assert n == 4
    assert abs(c - (-0.0661431)) <= 1e-6


def test_order_coefficient_bm():
    n, c = order_coefficient(get_scheme("BM"))
    assert n == 4
    assert abs(c - (-0.0000133432)) <= 1e-6


def test_order_coefficient_m_exact_surd():
    n, c = order_coefficient(get_scheme("M"))
    ref = (-2956612 + 124595 * math.sqrt(471)) / 2797262640
    assert n == 4
    assert abs(c - ref) <= 1e-12


def test_order_coefficient_c_scheme():
    n, c = order_coefficient(get_scheme("C"))
    assert n == 4 and c == F(1, 7680)


# ------------------------------------------------------ normalized coefficient

def test_normalized_coefficients_table():
    assert math.isclose(normalized_coefficient(get_scheme("FR")), -1.0,
                        abs_tol=1e-12)
    assert abs(normalized_coefficient(get_scheme("M")) - (-0.0043)) <= 1e-4
    assert abs(normalized_coefficient(get_scheme("BM")) - (-0.0032)) <= 1e-4
    assert abs(normalized_coefficient(get_scheme("C")) - 0.0062) <= 1e-4


def test_normalized_coefficient_needs_order_four():
    with pytest.raises(AnalysisError, match="order"):
        normalized_coefficient(get_scheme("SV"))


# ------------------------------------------------------------------ stability

def test_stability_limit_sv():
    lim = stability_limit(get_scheme("SV"))
    assert lim.bounded
    assert abs(lim.x_max - 2.0) <= 1e-9


def test_stability_limit_first_order():
    lim = stability_limit(get_scheme("LF1"))
    assert lim.bounded
    assert abs(lim.x_max - 2.0) <= 1e-9


def test_stability_limit_fr():
    lim = stability_limit(get_scheme("FR"))
    assert lim.bounded
    assert 0.0 < lim.x_max < 2.0
    # regression against the polynomial root of |g| = 1
    assert abs(lim.x_max - 1.5734019474) <= 1e-8


def test_stability_limit_invariant_under_adjoint():
    for name in ("SV", "FR", "LF1"):
        s = get_scheme(name)
        assert math.isclose(
            stability_limit(s).x_max, stability_limit(adjoint(s)).x_max,
            rel_tol=0, abs_tol=1e-10,
        )


# ---------------------------------------------------------------- convergence

def test_convergence_inside_window():
    study = convergence_study(get_scheme("SV"), 1.0, 20)
    errs = [r.abs_error for r in study.rows]
    assert study.closed_form is not None
    # errors decrease monotonically beyond k = 2 toward < 1e-6
    tail = [e for e in errs[2::2]]
    assert all(b < a for a, b in zip(tail, tail[1:]))
    assert errs[-1] < 1e-6


def test_convergence_slow_near_limit():
    study = convergence_study(get_scheme("SV"), 1.9, 20)
    errs = [r.abs_error for r in study.rows]
    assert errs[-1] < errs[2]          # converging
    assert errs[-1] > 1e-3             # but slowly
    assert study.closed_form is not None


def test_divergence_outside_window():
    study = convergence_study(get_scheme("SV"), 2.1, 60)
    assert study.closed_form is None
    terms = [
        abs(study.rows[k].partial_sum - study.rows[k - 2].partial_sum)
        for k in range(36, 61, 2)
    ]
    assert all(b > a for a, b in zip(terms, terms[1:]))


def test_radius_estimate_sv():
    study = convergence_study(get_scheme("SV"), 1.0, 20)
    assert study.radius_estimate is not None
    assert abs(study.radius_estimate - 2.0) <= 0.2


# --------------------------------------------------------------------- report

def test_analyze_report_sv():
    rep = analyze(get_scheme("SV"), 6)
    assert rep.n == 2
    assert math.isclose(rep.c_n, 1 / 24, rel_tol=1e-12)
    assert rep.c_star is None
    assert abs(rep.stability.x_max - 2.0) <= 1e-9
    assert rep.omega_a.coeffs[2] == F(1, 24)


def test_analyze_report_fr():
    rep = analyze(get_scheme("FR"), 6)
    assert rep.n == 4
    assert abs(rep.c_n - (-0.0661431)) <= 1e-6
    assert math.isclose(rep.c_star, -1.0, abs_tol=1e-12)
