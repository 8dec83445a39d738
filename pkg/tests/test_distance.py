import math
from fractions import Fraction

import numpy as np
import pytest

from qriemann import distance as dist
from qriemann.scalar import ONE, q_int


@pytest.fixture(scope="module")
def series():
    return dist.solve_distance_series(0.5, 1.0, 400, exact_terms=30)


def test_coefficients():
    assert dist.central_binomial(0) == 1
    assert dist.central_binomial(3) == Fraction(5, 16)
    assert dist.series_coefficient(0) == ONE / q_int(Fraction(1, 2), "q^-1")


def test_exact_residuals_vanish(series):
    assert not any(dist.functional_equation_residuals(series))
    assert not any(dist.w_residuals(series))
    assert not dist.w_constant_residual()
    assert not dist.w_constant_residual(4)


def test_numeric_coefficients_match_exact(series):
    num = series.numeric_coefficients(30)
    exact = [a.eval_float(0.5) for a in series.coefficients]
    assert np.allclose(num, exact, rtol=1e-12)


def test_classical_coefficients_are_arcsine():
    s = dist.solve_distance_series(1.0, 4.0, 11, exact_terms=11)
    got = [Fraction(-1, 2) * a.evaluate_s(Fraction(1)) for a in s.coefficients]
    assert got == dist.arcsine_coefficients(10)


def test_invalid_arguments():
    for q0 in (0, -0.3, 1.2):
        with pytest.raises(ValueError):
            dist.solve_distance_series(q0, 1.0, 10)
    with pytest.raises(ValueError):
        dist.solve_distance_series(0.5, 0.0, 10)
    with pytest.raises(ValueError):
        dist.solve_distance_series(0.5, 1.0, 0)


def test_distances_positive_and_monotone(series):
    F = [dist.evaluate_F(series, k) for k in range(20)]
    assert all(a < b for a, b in zip(F, F[1:]))
    assert dist.distance_states(3, 3, series) == 0
    assert dist.distance_states(5, 2, series) > 0
    with pytest.raises(ValueError):
        dist.distance_states(1, 4, series)


def test_distance_additive_along_the_spectrum(series):
    d = dist.distance_states
    assert math.isclose(d(6, 1, series), d(6, 3, series) + d(3, 1, series), rel_tol=1e-12)


def test_periodic_functions_do_not_contribute(series):
    # h(q^2 rho) = h(rho) on the spectrum means h is constant there
    F = np.array([dist.evaluate_F(series, k) for k in range(12)])
    h = np.full(12, 2.75)
    assert np.allclose(np.abs((F + h)[:, None] - (F + h)[None, :]), np.abs(F[:, None] - F[None, :]))


def test_truncation_error_carries_bound():
    short = dist.solve_distance_series(0.999, 4.0, 10, exact_terms=1)
    with pytest.raises(dist.TruncationError) as exc:
        dist.distance_report(None, 0, short, tol=1e-6)
    assert exc.value.bound > 1e-6


def test_report_keys(series):
    r = dist.distance_report(4, 0, series)
    assert set(r) == {"m", "n", "q", "c", "distance", "terms", "tail_bound"}


def test_classical_north_south():
    s = dist.solve_distance_series(1.0, 4.0, 100_000, exact_terms=1)
    r = dist.distance_report(None, 0, s)
    assert abs(abs(r["distance"]) - math.pi / 2) < 5e-3


def test_dF_norm_away_from_the_south_pole(series):
    vals = dist.dF_norm_squared(series, 30)
    assert np.abs(vals[1:31] - 1).max() < 1e-8


def test_sanity_search_on_F_and_constants(series):
    rep = dist.distance_sanity_search(
        series, trial_count=0, k_max=40,
        candidates=[lambda r: dist.evaluate_F(series, round(-math.log(r) / (2 * math.log(0.5)))), lambda r: 1.0],
    )
    assert abs(rep.ratios[0] - 1) < 1e-6
    assert rep.ratios[1] == 0


def test_exact_prefactor_matches_float(series):
    p2 = series.prefactor_squared.eval_float(0.5) / series.c
    assert math.isclose(series.prefactor**2, p2, rel_tol=1e-12)
