"""Verification suites.

Each suite returns ``{check_name: {"residual", "threshold", "pass"}}``.
Symbolic checks report the number of non-zero residual entries with
threshold 0; numeric checks report a float residual.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np

from . import distance as dist
from . import geometry as geo
from . import representation as rp
from . import spaces as sp
from .ncalg import Element, apply_d, check_local_confluence, graded_components, star
from .scalar import Q, QScalar

__all__ = [
    "SUITES",
    "check",
    "random_element",
    "random_homogeneous",
    "run_suites",
    "suite_sq2",
    "suite_structure",
    "suite_hodge",
    "suite_cp",
    "suite_distance",
    "suite_braided",
    "suite_repr",
    "suite_z2",
    "suite_confluence",
]


def check(residual, threshold=0.0):
    residual = float(residual)
    return {"residual": residual, "threshold": float(threshold), "pass": bool(residual <= threshold)}


def _nonzero(x):
    """Count non-zero entries in an Element, QScalar or nested list of them."""
    if isinstance(x, (list, tuple)):
        return sum(_nonzero(y) for y in x)
    if isinstance(x, dict):
        return sum(_nonzero(y) for y in x.values())
    return 0 if not x else 1


def exact(x):
    return check(_nonzero(x))


def _mismatch(got, want):
    if isinstance(got, (list, tuple)):
        return sum(_mismatch(a, b) for a, b in zip(got, want, strict=True))
    return 0 if got == want else 1


# -- random elements ---------------------------------------------------------


def _letters(p):
    out = []
    for g in p.generators:
        if g.derivation or g.central:
            continue
        out.append((g.name, g.invertible))
    return out


def _coefficient(rng):
    k = rng.choice([x for x in range(-3, 4) if x])
    return QScalar(k) * Q ** rng.randint(-2, 2)


def random_element(p, rng, terms=3, length=3):
    """A sum of random products of generators, multiplied out in the engine."""
    letters = _letters(p)
    acc = Element(p, {})
    for _ in range(rng.randint(1, terms)):
        t = Element.scalar(p, _coefficient(rng))
        for _ in range(rng.randint(0, length)):
            name, inv = rng.choice(letters)
            e = rng.choice([-1, 1, 2]) if inv else rng.randint(1, 2)
            t = t * p.letter(name, e)
        acc = acc + t
    return acc


def random_homogeneous(p, rng, terms=3, length=3):
    """The lowest-degree component of a random element (never zero)."""
    while True:
        e = random_element(p, rng, terms, length)
        if e:
            return next(iter(graded_components(e).values()))


# -- criteria ----------------------------------------------------------------


def suite_sq2():
    """Connection, curvature and curvature scalars of both S_q^2 variants."""
    out = {}
    for variant in ("complex", "riemannian"):
        preset = sp.sq2(variant)
        want = preset.expected_elements()
        res = preset.compute()
        tag = variant
        out[f"{tag}.connection"] = check(_mismatch(res.connection, want["connection"]))
        out[f"{tag}.curvature"] = check(_mismatch(res.curvature, want["curvature"]))
        out[f"{tag}.torsion"] = exact(res.torsion)
        out[f"{tag}.scalar_curvature"] = check(_mismatch(res.scalar_curvature, want["scalar_curvature"]))
        out[f"{tag}.ricci"] = check(_mismatch(res.ricci, want["ricci"]))
    return out


def _connection_checks(preset):
    g = preset.metric
    omega = preset.connection()
    R = geo.curvature(omega)
    basis = preset.basis_elements()
    T = geo.torsion(omega, basis)
    return {
        "metricity": exact(geo.metricity_residual(g, omega)),
        "torsion": exact(T),
        "bianchi": exact(geo.bianchi_residual(omega, R)),
        "dT=xiR": exact(geo.consistency_residual(T, R, basis)),
    }


def suite_structure(preset, samples=200, seed=0):
    """Structural identities on one preset, ``samples`` random elements each."""
    p = preset.pres
    rng = random.Random(seed)
    d2 = leib = starm = invol = rl = 0
    for _ in range(samples):
        a = random_homogeneous(p, rng)
        b = random_element(p, rng)
        d2 += _nonzero(apply_d(apply_d(a)))
        sign = -1 if a.degree() % 2 else 1
        leib += _nonzero(apply_d(a * b) - (apply_d(a) * b + sign * (a * apply_d(b))))
        starm += _nonzero(star(a * b) - star(b) * star(a))
        invol += _nonzero(star(star(a)) - a)
    out = {
        "d^2=0": check(d2),
        "graded_leibniz": check(leib),
        "star_antimultiplicative": check(starm),
        "star_involution": check(invol),
    }
    if preset.metric is not None:
        g = preset.metric
        n = g.n
        forms = preset.basis_elements()
        for _ in range(samples):
            alpha = [random_element(p, rng, terms=2, length=2) * forms[rng.randrange(n)] for _ in range(n)]
            back = geo.raise_index(geo.lower_index(alpha, g), g)
            rl += sum(_nonzero(x - y) for x, y in zip(back, alpha, strict=True))
        out["raise_lower"] = check(rl)
        out.update(_connection_checks(preset))
    label = f"{preset.name}[{preset.variant}]" if preset.name == "sq2" else preset.name
    return {f"{label}.{k}": v for k, v in out.items()}


def _random_radial(p, rng):
    """f(rho) z^n with f a random Laurent polynomial in rho."""
    f = Element(p, {})
    for k in rng.sample(range(-3, 4), rng.randint(1, 3)):
        f = f + _coefficient(rng) * p.letter("rho", k) if k else f + Element.scalar(p, _coefficient(rng))
    n = rng.randint(0, 3)
    return f * p.letter("z", n) if n else f


def suite_hodge(samples=50, seed=0):
    """The S_q^2 Hodge table, its reality, delta^2 and the Laplacian."""
    preset = sp.sq2()
    p = preset.pres
    E = p.element
    h = preset.hodge()
    e, eb = "rho^-1*dz", "dzb*rho^-1"
    table = {
        "1": "i*c^-1*" + e + "*" + eb,
        e: "i*" + e,
        eb: "-i*" + eb,
        e + "*" + eb: "-i*c",
    }
    mism = sum(0 if h(E(k)) == E(v) else 1 for k, v in table.items())
    words = ["1", "dz", "dzb", "dz*dzb", "dzb*dz", e, eb, e + "*" + eb]
    reality = {w: _nonzero(star(h(E(w))) - h(star(E(w)))) for w in words}
    rng = random.Random(seed)
    dd = lap = 0
    for _ in range(samples):
        f = _random_radial(p, rng)
        dd += _nonzero(geo.codifferential(geo.codifferential(f, h), h))
        dd += _nonzero(geo.codifferential(geo.codifferential(f * E("dz*dzb"), h), h))
        lap += _nonzero(geo.laplacian(f, h) - geo.derivation_laplacian(f, E("-c*rho^2")))
    return {
        "table": check(mism),
        "star_commutes_degree1": check(sum(v for w, v in reality.items() if E(w).degree() == 1)),
        "star_commutes_degree0_2": check(sum(v for w, v in reality.items() if E(w).degree() != 1)),
        "delta^2=0": check(dd),
        "laplacian": check(lap),
    }


def suite_cp(n):
    """Kahler form, connection and curvature scalars on CP_q(n)."""
    preset = sp.cpqn(n)
    p = preset.pres
    K = preset.kahler_form()
    letters = [p.letter(g.name) for g in p.generators if not g.central and not g.derivation]
    central = sum(_nonzero(K * x - x * K) for x in letters)
    omega = preset.connection()
    want = sp.cp_connection_closed_form(p, n)
    lit = sp.cp_literal_c_formula(p, n)
    res = preset.compute()
    sc = res.scalar_curvature
    constant = sc.degree() == 0 and all(all(g < p.n_central for g, _ in w) for w in sc.terms)
    ric = res.ricci
    prop = sum(
        _nonzero(ric[a][b] - (sc * 0 if a != b else ric[0][0])) for a in range(n) for b in range(n)
    )
    out = {
        "kahler_real": exact(star(K) - K),
        "kahler_central": check(central),
        "connection_closed_form": check(_mismatch(omega, want)),
        "connection_literal_c_formula": check(_mismatch(omega, lit)),
        "scalar_curvature_constant": check(0 if constant else 1),
        "ricci_proportional_identity": check(prop),
    }
    out.update(_connection_checks(preset))
    return {f"cp{n}.{k}": v for k, v in out.items()}


def _arcsine_mismatch(n_max):
    series = dist.solve_distance_series(1.0, 4.0, n_max + 1, exact_terms=n_max + 1)
    # P = -sqrt((1 + q^-2) / (2 c q^2)) = -1/2 at q = 1, c = 4
    got = [Fraction(-1, 2) * a.evaluate_s(Fraction(1)) for a in series.coefficients]
    want = dist.arcsine_coefficients(n_max)
    return sum(0 if x == y else 1 for x, y in zip(got, want, strict=True))


def suite_distance(north_south_terms=50_000, trials=1000):
    s = dist.solve_distance_series(0.5, 1.0, 400, exact_terms=50)
    ff = _nonzero(dist.functional_equation_residuals(s))
    w = _nonzero(dist.w_residuals(s)) + _nonzero(dist.w_constant_residual())
    arc = _arcsine_mismatch(50)
    ns = dist.solve_distance_series(0.999, 4.0, north_south_terms, exact_terms=1)
    d_ns = dist.distance_report(None, 0, ns)["distance"]
    dF = dist.dF_norm_squared(s, 30)
    sanity = dist.distance_sanity_search(dist.solve_distance_series(0.5, 1.0, 400, exact_terms=1), trials, 3, 60)
    return {
        "functional_equation": check(ff),
        "w_constant": check(w),
        "arcsine": check(arc),
        "north_south": check(abs(abs(d_ns) - math.pi / 2), 5e-3),
        "dF_norm_k0": check(abs(dF[0] - 1), 1e-8),
        "dF_norm_k1_30": check(float(np.abs(dF[1:31] - 1).max()), 1e-8),
        "sanity_search": check(max(sanity.max_ratio - 1, 0.0), 1e-6),
    }


def suite_braided():
    p = sp.braided_presentation()
    z2 = sp.doubleprime_coordinate(p)
    z = p.letter("z")
    return {"z*z''-z''*z": exact(z * z2 - z2 * z)}


def suite_repr(q0=0.5, c=1.0, K_max=40, seed=0):
    rep = rp.build_rep(q0, c, 0.0, K_max)
    D = rp.build_dirac(rep)
    inv = rp.inverse_abs_dirac_squared(D)
    rel = rp.relation_residuals(rep)
    comm = rp.check_commutator_realization(rep, D)
    rng = np.random.default_rng(seed)
    a = rep.function(rng.standard_normal(rep.size))
    aux_num = rp.relative_trace(rp.aux_field(D, a), D, inv, margin=1)
    stokes = max(rp.stokes_residual(D, rng) for _ in range(5))
    ratios = max(
        abs(rp.volume_ratio(D, k) - rp.stokes_recursion_ratio(k).eval_float(q0)) for k in (1, 2, 3)
    )
    out = {f"relation {k}": check(v, 1e-12) for k, v in rel.items()}
    out["[D,z]=pi(dz)"] = check(comm["dz"]["interior"], 1e-10)
    out["[D,zb]=pi(dzb)"] = check(comm["dzb"]["interior"], 1e-10)
    out["tau_identity"] = exact(rp.tau_identity_residual())
    out["aux_exact"] = exact(rp.aux_trace_exact())
    out["aux_numeric"] = check(aux_num, 1e-12)
    out.update({f"gamma {k}": check(v, 1e-12) for k, v in rp.gamma_residuals(D).items()})
    out["stokes"] = check(stokes, 1e-9)
    out["normalization_ratio"] = check(ratios, 1e-6)
    return out


def suite_z2():
    preset = sp.two_sheeted()
    p = preset.pres
    E = p.element
    e, de = E("e"), E("de")
    one = E("1")
    rel = _nonzero(e * e - one) + _nonzero(e * de + de * e) + _nonzero(de * de)
    d2 = _nonzero(apply_d(apply_d(e))) + _nonzero(apply_d(de))
    rng = random.Random(0)
    integ = 0
    for _ in range(20):
        a, b = rng.randint(-9, 9), rng.randint(-9, 9)
        # the volume factor of the continuum sector is trivial here; de carries the measure
        integ += 0 if sp.z2_integrate(de * E(f"{a} + {b}*e")) == QScalar(a) else 1
    return {
        "relations": check(rel),
        "d^2=0": check(d2),
        "integral": check(integ),
        "integral de*e": exact(sp.z2_integrate(de * e)),
    }


def _confluence_presets():
    return {
        "sq2": sp.sq2("complex").pres,
        "cp1": sp.cpqn(1).pres,
        "cp2": sp.cpqn(2).pres,
        "cp3": sp.cpqn(3).pres,
        "z2": sp.two_sheeted().pres,
    }


def suite_confluence(max_word_len=4):
    out = {}
    for name, p in _confluence_presets().items():
        rep = check_local_confluence(p, max_word_len)
        out[name] = check(len(rep.violations))
    return out


SUITES = {
    "sq2": suite_sq2,
    "structure": lambda: {
        k: v
        for preset in (sp.sq2(), sp.sq2("riemannian"), sp.cpqn(2), sp.cpqn(3), sp.two_sheeted())
        for k, v in suite_structure(preset).items()
    },
    "hodge": suite_hodge,
    "cp2": lambda: suite_cp(2),
    "cp3": lambda: suite_cp(3),
    "distance": suite_distance,
    "braided": suite_braided,
    "repr": suite_repr,
    "z2": suite_z2,
    "confluence": suite_confluence,
}


def run_suites(names):
    return {name: SUITES[name]() for name in names}
