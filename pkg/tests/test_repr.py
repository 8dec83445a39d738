import numpy as np
import pytest

from qriemann import representation as rp
from qriemann.distance import solve_distance_series


@pytest.fixture(scope="module")
def dirac():
    return rp.build_dirac(rp.build_rep(0.5, 1.0, 0.0, 40))


def test_build_rep_validation():
    with pytest.raises(ValueError):
        rp.build_rep(1.0, 1.0)
    with pytest.raises(ValueError):
        rp.build_rep(0.5, 1.0, K_max=1)


def test_relations_on_interior(dirac):
    assert max(rp.relation_residuals(dirac.rep).values()) < 1e-12


def test_commutator_realizes_differentials(dirac):
    res = rp.check_commutator_realization(dirac.rep, dirac)
    assert res["dz"]["interior"] < 1e-10
    assert res["dzb"]["interior"] < 1e-10
    # the top basis vector is a truncation artifact and is reported, not hidden
    assert res["dz"]["boundary"] > res["dz"]["interior"]


def test_exact_matrix_identities():
    assert not any(x for row in rp.tau_identity_residual() for x in row)
    assert not rp.aux_trace_exact()


def test_grading(dirac):
    assert max(rp.gamma_residuals(dirac).values()) == 0


def test_aux_and_stokes(dirac):
    rng = np.random.default_rng(3)
    a = dirac.rep.function(rng.standard_normal(dirac.rep.size))
    assert rp.relative_trace(rp.aux_field(dirac, a), dirac, margin=1) < 1e-12
    assert rp.stokes_residual(dirac, rng) < 1e-9


@pytest.mark.parametrize("power", [1, 2, 3])
def test_volume_ratio_matches_recursion(dirac, power):
    assert abs(rp.volume_ratio(dirac, power) - rp.stokes_recursion_ratio(power).eval_float(0.5)) < 1e-6


def test_singular_operator_detected(dirac):
    zero = rp.DiracRep(dirac.rep, dirac.k_D, 0 * dirac.D, dirac.tau, dirac.taudag, dirac.gamma, dirac.curly_I)
    with pytest.raises(rp.SingularOperatorError):
        rp.inverse_abs_dirac_squared(zero)


def test_state_expectation(dirac):
    rep = dirac.rep
    assert rp.state_expectation(rep, {1: 1}, 0) == 1
    assert abs(rp.state_expectation(rep, {-1: 1}, 2) - 0.0625) < 1e-15
    assert rp.state_expectation(rep, lambda r: 2 * r, 1) == 8
    with pytest.raises(ValueError):
        rp.state_expectation(rep, {1: 1}, 41)


def test_state_expectation_classical_limit():
    s = solve_distance_series(1.0, 4.0, 100_000, exact_terms=1)
    assert abs(rp.state_expectation(None, s, 0) + np.pi / 2) < 5e-3


def test_trace_is_not_cyclic(dirac):
    # documentation of a known property, not a requirement
    a = dirac.dz()
    b = dirac.dzb()
    assert abs(rp.trace_integrate(a @ b, dirac) - rp.trace_integrate(b @ a, dirac)) > 1e-6
