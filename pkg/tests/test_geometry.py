import json

import pytest

from qriemann import geometry as geo
from qriemann.spaces import cpqn, sq2
from qriemann.scalar import Q


@pytest.fixture(scope="module")
def sphere():
    return sq2()


def test_connection_and_curvature(sphere):
    E = sphere.element
    omega = sphere.connection()
    assert omega[0][0] == E("-q^2*(1+q^2)*dz*rho^-1*zb")
    R = geo.curvature(omega)
    assert R[0][0] == E("q^4*(1+q^2)*dz*dzb*rho^-2")
    assert not geo.torsion(omega, sphere.basis_elements())[0]


def test_metricity_detects_a_wrong_connection(sphere):
    omega = sphere.connection()
    wrong = [[omega[0][0] * Q]]
    assert geo.metricity_residual(sphere.metric, wrong)[0][0]
    assert not geo.metricity_residual(sphere.metric, omega)[0][0]


def test_scalar_curvature_and_ricci_variants(sphere):
    E = sphere.element
    res = sphere.compute()
    assert res.scalar_curvature == E("c*q^2*(1+q^2)")
    assert res.ricci[0][0] == E("c*q^4*(1+q^2)")
    right = sphere.compute("right")
    assert right.ricci_variant == "right"
    with pytest.raises(ValueError):
        sphere.compute("middle")


def test_result_json_shape(sphere):
    d = json.loads(sphere.compute().to_json())
    assert set(d) == {"space", "variant", "connection", "curvature", "torsion", "scalar_curvature", "ricci", "ricci_variant"}
    assert d["scalar_curvature"] == "c*q^2*(1+q^2)"


def test_hodge_table(sphere):
    E = sphere.element
    h = sphere.hodge()
    assert h(E("1")) == E("i*c^-1*rho^-1*dz*dzb*rho^-1")
    assert h(E("rho^-1*dz")) == E("i*rho^-1*dz")
    assert h(E("dzb*rho^-1")) == E("-i*dzb*rho^-1")
    assert h(E("rho^-1*dz*dzb*rho^-1")) == E("-i*c")
    # functions pass through on the left
    assert h(E("z*rho^-1*dz")) == E("i*z*rho^-1*dz")


def test_laplacian_two_routes(sphere):
    E = sphere.element
    h = sphere.hodge()
    f = E("rho^-1")
    lap = geo.laplacian(f, h)
    assert lap == geo.derivation_laplacian(f, E("-c*rho^2"))
    assert lap == E("c*q^2*(1+q^2)*rho^-1 - c*q^2")


def test_codifferential_kills_functions(sphere):
    h = sphere.hodge()
    assert not geo.codifferential(sphere.element("z*rho"), h)


def test_raise_lower_round_trip(sphere):
    E = sphere.element
    alpha = [E("rho*z*dz")]
    assert geo.raise_index(geo.lower_index(alpha, sphere.metric), sphere.metric) == alpha


def test_kahler_form_is_real_and_central_on_cp2():
    sp = cpqn(2)
    K = sp.kahler_form()
    assert K.star() == K
    for name in ["z1", "zb2", "dz1", "rho"]:
        x = sp.pres.letter(name)
        assert K * x == x * K


def test_inverse_check():
    sp = sq2()
    E = sp.element
    bad = geo.Metric([[E("rho")]], [[E("rho")]])
    with pytest.raises(geo.GeometryError):
        geo.connection_from_metric(bad)
