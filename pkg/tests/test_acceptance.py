"""Acceptance criteria 1-11.

Each test prints one line ``criterion N: PASS|FAIL`` naming any failing
sub-check; the lines are also repeated in the terminal summary.
"""

import time


from qriemann import geometry as geo
from qriemann import spaces as sp
from qriemann import verify as vf

RESULTS = {}


def record(number, title, checks, elapsed, limit):
    checks = dict(checks)
    checks["runtime"] = vf.check(elapsed, limit)
    failing = [k for k, v in checks.items() if not v["pass"]]
    status = "PASS" if not failing else "FAIL"
    line = f"criterion {number:>2} ({title}): {status}"
    if failing:
        line += " [" + ", ".join(f"{k}: residual {checks[k]['residual']:.3g} > {checks[k]['threshold']:.3g}" for k in failing) + "]"
    RESULTS[number] = line
    print(line)
    assert not failing, line


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def test_criterion_01_sphere_connection():
    def run():
        space = sp.sq2()
        omega = geo.connection_from_metric(space.metric)
        return {"omega_0^0": vf.check(0 if omega[0][0] == space.element("-q^2*(1+q^2)*dz*rho^-1*zb") else 1)}

    checks, dt = timed(run)
    record(1, "S_q^2 connection", checks, dt, 1.0)


def test_criterion_02_sphere_curvature():
    def run():
        cx, re = sp.sq2(), sp.sq2("riemannian")
        R = geo.curvature(cx.connection())
        Rr = geo.curvature(re.connection())
        return {
            "R_0^0": vf.check(0 if R[0][0] == cx.element("q^4*(1+q^2)*dz*dzb*rho^-2") else 1),
            "real R_0b^0b": vf.check(0 if Rr[1][1] == re.element("(1+q^-2)*dzb*dz*rho^-2") else 1),
        }

    checks, dt = timed(run)
    record(2, "S_q^2 curvature", checks, dt, 1.0)


def test_criterion_03_scalar_curvatures():
    def run():
        cx = sp.sq2().compute()
        re = sp.sq2("riemannian").compute()
        E = sp.sq2().element
        want = {
            "complex scalar": (cx.scalar_curvature, E("c*q^2*(1+q^2)")),
            "complex ricci": (cx.ricci[0][0], E("c*q^4*(1+q^2)")),
            "real scalar": (re.scalar_curvature, E("c/4*(1+q^2)^3")),
            "real ricci 0": (re.ricci[0][0], E("c*q^4/4*(1+q^2)^2")),
            "real ricci 1": (re.ricci[1][1], E("c*q^-2/4*(1+q^2)^2")),
            "real ricci off-diagonal": (re.ricci[0][1] + re.ricci[1][0], E("0")),
        }
        return {k: vf.check(0 if a == b else 1) for k, (a, b) in want.items()}

    checks, dt = timed(run)
    record(3, "scalar curvatures", checks, dt, 2.0)


def test_criterion_04_structural_identities():
    def run():
        out = {}
        for preset in (sp.sq2(), sp.sq2("riemannian"), sp.cpqn(2), sp.cpqn(3), sp.two_sheeted()):
            out.update(vf.suite_structure(preset, samples=200, seed=4))
        return out

    checks, dt = timed(run)
    record(4, "structural identities", checks, dt, 60.0)


def test_criterion_05_hodge():
    checks, dt = timed(lambda: vf.suite_hodge(samples=50, seed=5))
    record(5, "Hodge star and Laplacian", checks, dt, 10.0)


def test_criterion_06_cpn():
    def run():
        out = vf.suite_cp(2)
        out.update(vf.suite_cp(3))
        return out

    checks, dt = timed(run)
    record(6, "CP_q(N)", checks, dt, 300.0)


def test_criterion_07_distance():
    checks, dt = timed(lambda: vf.suite_distance(north_south_terms=50_000, trials=1000))
    record(7, "spectral distance", checks, dt, 120.0)


def test_criterion_08_braided():
    checks, dt = timed(vf.suite_braided)
    record(8, "braided two-point", checks, dt, 5.0)


def test_criterion_09_representation():
    checks, dt = timed(lambda: vf.suite_repr(0.5, 1.0, 40))
    record(9, "representation", checks, dt, 30.0)


def test_criterion_10_two_sheeted():
    checks, dt = timed(vf.suite_z2)
    record(10, "two-sheeted space", checks, dt, 1.0)


def test_criterion_11_confluence():
    checks, dt = timed(lambda: vf.suite_confluence(4))
    record(11, "confluence", checks, dt, 60.0)
