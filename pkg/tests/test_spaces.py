import pytest

from qriemann import spaces as sp
from qriemann.scalar import ZERO, QScalar


def test_preset_registry():
    assert set(sp.PRESETS) == {"sq2", "cp1", "cp2", "cp3", "z2"}
    assert sp.preset("sq2", "riemannian").variant == "riemannian"
    with pytest.raises(KeyError):
        sp.preset("s3")
    with pytest.raises(ValueError):
        sp.sq2("lorentzian")


@pytest.mark.parametrize("name,variant", [("sq2", "complex"), ("sq2", "riemannian"), ("cp2", None), ("z2", None)])
def test_export_import_is_byte_stable(name, variant):
    text = sp.export_space(sp.preset(name, variant))
    again = sp.import_space(text)
    assert sp.export_space(again) == text


def test_imported_sphere_recomputes_geometry():
    again = sp.import_space(sp.export_space(sp.sq2()))
    assert str(again.compute().scalar_curvature) == "c*q^2*(1+q^2)"


def test_radius_substitution():
    sphere = sp.sq2(c="4")
    assert str(sphere.compute().scalar_curvature) == "4*q^2*(1+q^2)"


def test_riemannian_expected_values():
    sphere = sp.sq2("riemannian")
    res = sphere.compute()
    want = sphere.expected_elements()
    assert res.scalar_curvature == want["scalar_curvature"]
    assert res.ricci == want["ricci"]


def test_cp_connection_closed_form():
    for n in (1, 2):
        space = sp.cpqn(n)
        assert space.connection() == sp.cp_connection_closed_form(space.pres, n)


def test_cp2_scalar_curvature():
    res = sp.cpqn(2).compute()
    assert str(res.scalar_curvature) == "-q^4*(1+q^2+q^4)/(1+q^2)"


def test_two_sheeted():
    z2 = sp.two_sheeted()
    E = z2.element
    assert E("e*de") == E("-de*e")
    assert E("e*e") == E("1")
    assert sp.z2_integrate(E("de*(3 + 5*e)")) == QScalar(3)
    assert sp.z2_integrate(E("e*de")) == ZERO
    assert sp.z2_components(E("de*(2 - e)")) == (QScalar(2), QScalar(-1))
    with pytest.raises(ValueError):
        sp.z2_components(E("e"))
    with pytest.raises(ValueError):
        sp.two_sheeted(mu_dim=4)


def test_braided_two_point():
    p = sp.braided_presentation()
    z2 = sp.doubleprime_coordinate(p)
    assert str(z2) == "v + q^2*zb*v*zp"
    z = p.letter("z")
    assert z * z2 == z2 * z


def test_doubleprime_density_at_origin():
    num, den = sp.rho_doubleprime_at_origin()
    assert str(num) == "q^-2*rho"
    assert str(den) == "rho - 1"


def test_suq2_matrix_and_diagonal_invariance():
    assert not any(sp.suq2_matrix_residuals().values())
    assert not sp.diagonal_kahler_residual()


def test_suq2_extension_is_confluent():
    from qriemann.ncalg import check_local_confluence

    assert check_local_confluence(sp.adjoin_suq2_coaction(), 3).ok
