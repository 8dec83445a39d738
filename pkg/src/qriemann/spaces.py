"""Preset quantum spaces and the space-definition file format."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from . import geometry as geo
from .ncalg import Element, Generator, PowerDerivation, Presentation, QCommute, Replace, apply_d
from .scalar import LAMBDA, ONE, Q, ZERO, QScalar

__all__ = [
    "SpacePreset",
    "RHat",
    "sq2",
    "cpqn",
    "two_sheeted",
    "z2_integrate",
    "z2_components",
    "sq2_presentation",
    "cpqn_presentation",
    "braided_presentation",
    "doubleprime_coordinate",
    "rho_doubleprime",
    "rho_doubleprime_at_origin",
    "diagonal_kahler_residual",
    "diagonal_coaction",
    "sphere_with_root",
    "suq2_relations",
    "cp_metric",
    "cp_connection_closed_form",
    "cp_literal_c_formula",
    "adjoin_suq2_coaction",
    "suq2_matrix_residuals",
    "preset",
    "PRESETS",
    "export_space",
    "import_space",
]


def _constants():
    return [
        Generator("c", central=True, invertible=True),
        Generator("i", central=True, square=-1, star="-i"),
    ]


def sq2_presentation():
    """Functions, forms and derivations on the standard quantum sphere."""
    q = Q
    gens = _constants() + [
        Generator("rho", invertible=True),
        Generator("z", conjugate="zb"),
        Generator("zb", conjugate="z"),
        Generator("dz", degree=1, conjugate="dzb", square=0),
        Generator("dzb", degree=1, conjugate="dz", square=0),
        Generator("del", derivation=True, star="-q^-2*rho^2*delb*rho^-2"),
        Generator("delb", derivation=True, star="-q^2*rho^2*del*rho^-2"),
    ]
    order = ["rho", "z", "zb", "dz", "dzb", "del", "delb"]
    rules = [
        QCommute("z", "rho", q**-2),
        QCommute("zb", "rho", q**2),
        Replace("zb", "z", "rho - 1"),
        Replace("z", "zb", "q^-2*rho - 1"),
        QCommute("dz", "rho", 1),
        QCommute("dzb", "rho", 1),
        QCommute("dz", "z", q**2),
        QCommute("dz", "zb", q**-2),
        QCommute("dzb", "z", q**2),
        QCommute("dzb", "zb", q**-2),
        QCommute("dzb", "dz", -(q**2)),
        Replace("del", "z", "1 + q^-2*z*del"),
        QCommute("del", "zb", q**2),
        QCommute("delb", "z", q**-2),
        Replace("delb", "zb", "1 + q^2*zb*delb"),
        QCommute("delb", "del", q**2),
        PowerDerivation("del", "rho", 1, q**2, q / LAMBDA, "zb"),
        PowerDerivation("delb", "rho", 1, q**-2, -q / LAMBDA, "z"),
    ]
    d_frame = [("hol", "dz", "del"), ("antihol", "dzb", "delb")]
    d_table = {
        "z": {"hol": "dz"},
        "zb": {"antihol": "dzb"},
        "rho": {"hol": "zb*dz", "antihol": "dzb*z"},
    }
    return Presentation("sq2", gens, order, rules, d_frame, d_table)


# -- GL_q(N) R-matrix --------------------------------------------------------


class RHat:
    """The GL_q(N) R-hat matrix, ``R[(a, b)][(c, d)]`` = R^{ab}_{cd}.

    q on coinciding indices, a plain swap otherwise, plus the lambda
    correction on the diagonal for a < b.
    """

    def __init__(self, n, lower=False):
        self.n = n
        self.lower = lower
        idx = [(a, b) for a in range(n) for b in range(n)]
        self.index = idx
        self.entries = {}
        for a, b in idx:
            for c, d in idx:
                v = ZERO
                if a == d and b == c:
                    v = v + (Q if a == b else ONE)
                if a == c and b == d and (a > b if lower else a < b):
                    v = v + LAMBDA
                if v:
                    self.entries[(a, b, c, d)] = v

    def __call__(self, a, b, c, d):
        return self.entries.get((a, b, c, d), ZERO)

    def inverse(self, a, b, c, d):
        """R^{-1} = R - lambda (from the Hecke relation)."""
        v = self(a, b, c, d)
        if a == c and b == d:
            v = v - LAMBDA
        return v

    def matrix(self):
        return [[self(a, b, c, d) for c, d in self.index] for a, b in self.index]

    def hecke_residual(self):
        """Entries of (R - q)(R + 1/q)."""
        m = self.matrix()
        size = len(m)
        eye = [[ONE if i == j else ZERO for j in range(size)] for i in range(size)]
        left = [[m[i][j] - Q * eye[i][j] for j in range(size)] for i in range(size)]
        right = [[m[i][j] + Q.inv() * eye[i][j] for j in range(size)] for i in range(size)]
        return _qmatmul(left, right)

    def braid_residual(self):
        """R12 R23 R12 - R23 R12 R23 on three tensor factors."""
        n = self.n
        trip = list(itertools.product(range(n), repeat=3))
        pos = {t: k for k, t in enumerate(trip)}
        size = len(trip)
        r12 = [[ZERO] * size for _ in range(size)]
        r23 = [[ZERO] * size for _ in range(size)]
        for a, b, c in trip:
            for d, e, f in trip:
                if c == f:
                    r12[pos[(a, b, c)]][pos[(d, e, f)]] = self(a, b, d, e)
                if a == d:
                    r23[pos[(a, b, c)]][pos[(d, e, f)]] = self(b, c, e, f)
        lhs = _qmatmul(_qmatmul(r12, r23), r12)
        rhs = _qmatmul(_qmatmul(r23, r12), r23)
        return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(lhs, rhs)]


def _qmatmul(a, b):
    n, m = len(a), len(b[0])
    out = [[ZERO] * m for _ in range(n)]
    for i in range(n):
        for k, x in enumerate(a[i]):
            if not x:
                continue
            for j in range(m):
                y = b[k][j]
                if y:
                    out[i][j] = out[i][j] + x * y
    return out


# -- orienting relations into rules ------------------------------------------


def _orient(stub, relations):
    """Turn quadratic relations (term maps equal to zero) into rules.

    Each relation is solved for its largest word in the normal order, after
    full Gaussian elimination so that leading words are distinct.
    """

    def key(w):
        return (sum(abs(e) for _, e in w), tuple((g, e) for g, e in w))

    rows = [dict(r) for r in relations if r]
    reduced = []
    for row in rows:
        row = dict(row)
        for lead, other in reduced:
            if lead in row:
                f = row[lead]
                for w, c in other.items():
                    _acc_terms(row, w, -f * c)
        if not row:
            continue
        lead = max(row, key=key)
        inv = row[lead].inv()
        row = {w: c * inv for w, c in row.items()}
        for k, (l2, o2) in enumerate(reduced):
            if lead in o2:
                f = o2[lead]
                o2 = dict(o2)
                for w, c in row.items():
                    _acc_terms(o2, w, -f * c)
                reduced[k] = (l2, o2)
        reduced.append((lead, row))
    rules = []
    for lead, row in reduced:
        rest = {w: -c for w, c in row.items() if w != lead}
        if len(lead) == 1:
            g, e = lead[0]
            if e == 2 and not rest:
                continue  # a square that vanishes; carried by the generator flag
            raise ValueError(f"cannot orient relation with leading word {stub.word_str(lead)}")
        if len(lead) != 2 or lead[0][1] != 1 or lead[1][1] != 1:
            raise ValueError(f"unexpected leading word {stub.word_str(lead)}")
        (g, _), (h, _) = lead
        left, right = stub.gens[g].name, stub.gens[h].name
        swapped = ((h, 1), (g, 1))
        if len(rest) == 1 and swapped in rest:
            rules.append(QCommute(left, right, rest[swapped]))
        else:
            rules.append(Replace(left, right, str(Element(stub, rest)) if rest else "0"))
    return rules


def _acc_terms(d, w, c):
    if not c:
        return
    v = d.get(w, ZERO) + c
    if v:
        d[w] = v
    else:
        d.pop(w, None)


# -- CP_q(N) -----------------------------------------------------------------


def _cp_names(n):
    z = [f"z{a}" for a in range(1, n + 1)]
    zb = [f"zb{a}" for a in range(1, n + 1)]
    dz = [f"dz{a}" for a in range(1, n + 1)]
    dzb = [f"dzb{a}" for a in range(1, n + 1)]
    return z, zb, dz, dzb


def _cp_generators(n, with_rho):
    z, zb, dz, dzb = _cp_names(n)
    gens = _constants()
    if with_rho:
        gens.append(Generator("rho", invertible=True))
    for a in range(n):
        gens += [
            Generator(z[a], conjugate=zb[a]),
            Generator(zb[a], conjugate=z[a]),
            Generator(dz[a], degree=1, conjugate=dzb[a], square=0),
            Generator(dzb[a], degree=1, conjugate=dz[a], square=0),
        ]
    order = (["rho"] if with_rho else []) + z + zb[::-1] + dzb[::-1] + dz
    return gens, order


def _cp_relations(stub, n, lower=False):
    z, zb, dz, dzb = _cp_names(n)
    R = RHat(n, lower)
    qi = Q.inv()
    ix = stub.index

    def w(*names):
        return tuple((ix[x], 1) for x in names)

    rels = []
    pairs = list(itertools.product(range(n), repeat=2))
    for a, b in pairs:
        r1, r1s, r2, r2s, r3, r3s, r4, r4s, r5, r5s, r6, r6s = ({} for _ in range(12))
        r1[w(z[a], z[b])] = ONE
        r1s[w(zb[b], zb[a])] = ONE
        r2[w(zb[a], z[b])] = ONE
        r2s[w(zb[b], z[a])] = ONE
        if a == b:
            r2[()] = qi * LAMBDA
            r2s[()] = qi * LAMBDA
        r3[w(z[a], dz[b])] = ONE
        r3s[w(dzb[b], zb[a])] = ONE
        r4[w(zb[a], dz[b])] = ONE
        r4s[w(dzb[b], z[a])] = ONE
        r5[w(dz[a], dz[b])] = ONE
        r5s[w(dzb[b], dzb[a])] = ONE
        r6[w(dzb[a], dz[b])] = ONE
        r6s[w(dzb[b], dz[a])] = ONE
        for c, d in pairs:
            rv, ri = R(a, b, c, d), R.inverse(b, d, a, c)
            if rv:
                _acc_terms(r1, w(z[c], z[d]), -qi * rv)
                _acc_terms(r1s, w(zb[d], zb[c]), -qi * rv)
                _acc_terms(r3, w(dz[c], z[d]), -Q * rv)
                _acc_terms(r3s, w(zb[d], dzb[c]), -Q * rv)
                _acc_terms(r5, w(dz[c], dz[d]), Q * rv)
                _acc_terms(r5s, w(dzb[d], dzb[c]), Q * rv)
            if ri:
                _acc_terms(r2, w(z[c], zb[d]), -qi * ri)
                _acc_terms(r2s, w(z[d], zb[c]), -qi * ri)
                _acc_terms(r4, w(dz[c], zb[d]), -qi * ri)
                _acc_terms(r4s, w(z[d], dzb[c]), -qi * ri)
                _acc_terms(r6, w(dz[c], dzb[d]), qi * ri)
                _acc_terms(r6s, w(dz[d], dzb[c]), qi * ri)
        rels += [_merge_squares(r) for r in (r1, r1s, r2, r2s, r3, r3s, r4, r4s, r5, r5s, r6, r6s)]
    return rels


def _merge_squares(rel):
    out = {}
    for wd, c in rel.items():
        if len(wd) == 2 and wd[0][0] == wd[1][0]:
            wd = ((wd[0][0], 2),)
        _acc_terms(out, wd, c)
    return out


def cpqn_presentation(n, lower=False):
    """Quantum projective space CP_q(N) with its differential calculus."""
    if n < 1:
        raise ValueError("N must be at least 1")
    z, zb, dz, dzb = _cp_names(n)
    gens0, order0 = _cp_generators(n, with_rho=False)
    stub0 = Presentation(f"cp{n}-stub", gens0, order0)
    rules0 = _orient(stub0, _cp_relations(stub0, n, lower))
    bare = Presentation(f"cp{n}-bare", gens0, order0, rules0)
    rho = bare.element("1 + " + " + ".join(f"{z[a]}*{zb[a]}" for a in range(n)))
    rho_rules = []
    for name in z + zb[::-1] + dzb[::-1] + dz:
        x = bare.letter(name)
        left, right = x * rho, rho * x
        ratio = _proportionality(left, right)
        rho_rules.append(QCommute(name, "rho", ratio))
    top = n - 1
    elim = "rho - 1" + "".join(f" - {z[a]}*{zb[a]}" for a in range(top))
    gens, order = _cp_generators(n, with_rho=True)
    rules = rules0 + [Replace(z[top], zb[top], elim)] + rho_rules
    d_table = {}
    for a in range(n):
        d_table[z[a]] = {"hol": dz[a]}
        d_table[zb[a]] = {"antihol": dzb[a]}
    d_table["rho"] = {
        "hol": " + ".join(f"{dz[a]}*{zb[a]}" for a in range(n)),
        "antihol": " + ".join(f"{z[a]}*{dzb[a]}" for a in range(n)),
    }
    return Presentation(f"cp{n}", gens, order, rules, d_table=d_table)


def _proportionality(left, right):
    """The scalar k with left = k * right, or an error."""
    for w, c in right.terms.items():
        k = left.terms.get(w, ZERO) / c
        break
    else:
        raise ValueError("zero element")
    if left != right * k:
        raise ValueError(f"{left} is not proportional to {right}")
    return k


# -- presets -----------------------------------------------------------------


@dataclass
class SpacePreset:
    """A presentation together with the geometric data living on it.

    ``basis`` names the one-forms xi^a the connection acts on, ``hol`` and
    ``antihol`` the coordinate differentials used for the Kahler form and the
    Hodge map.  ``kahler_metric`` is the complex metric whose Kahler form
    builds the Hodge map; it defaults to ``metric``.
    """

    name: str
    pres: Presentation
    metric: geo.Metric | None = None
    basis: list = field(default_factory=list)
    hol: list = field(default_factory=list)
    antihol: list = field(default_factory=list)
    norms: dict = field(default_factory=dict)
    dimension: int = 0
    parts: list | None = None
    kahler_metric: geo.Metric | None = None
    expected: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    variant: str = ""

    def element(self, text):
        return self.pres.element(text)

    def basis_elements(self):
        return [self.pres.letter(x) for x in self.basis]

    def kahler_form(self):
        return geo.kahler_form(self.kahler_metric or self.metric, self.hol, self.antihol)

    def hodge(self):
        if getattr(self, "_hodge", None) is None:
            K = self.kahler_form()
            g = self.kahler_metric or self.metric
            self._hodge = geo.build_hodge_from_kahler(K, g, self.pres, self.hol, self.antihol, self.norms)
        return self._hodge

    def connection(self):
        return geo.connection_from_metric(self.metric, parts=self.parts)

    def compute(self, ricci_variant="left"):
        """Connection, curvature, torsion, scalar curvature and Ricci tensor."""
        omega = self.connection()
        R = geo.curvature(omega)
        basis = self.basis_elements()
        T = geo.torsion(omega, basis)
        low = geo.lower_basis(basis, self.metric)
        h = self.hodge()
        sc = geo.scalar_curvature(R, h, basis, low, self.dimension)
        ric = geo.ricci(R, h, basis, low, variant=ricci_variant)
        return geo.GeometryResult(omega, R, T, sc, ric, self.name, self.variant, ricci_variant)

    def expected_elements(self):
        """``expected`` with every string parsed in this presentation."""

        def conv(v):
            if isinstance(v, str):
                return self.pres.element(v)
            return [conv(x) for x in v]

        return {k: conv(v) for k, v in self.expected.items()}


def _fmt(template, **kw):
    return template.format(**kw)


def _diag(E, entries):
    n = len(entries)
    return [[E(entries[a]) if a == b else E("0") for b in range(n)] for a in range(n)]


SQ2_NORMS = {
    "complex": {(0, 0): "i*q^2", (1, 0): "i", (0, 1): "-i", (1, 1): "i"},
    "riemannian": {(0, 0): "2*i*q^2", (1, 0): "i", (0, 1): "-i", (1, 1): "i/2"},
}


def sq2(variant="complex", c="c"):
    """The standard quantum sphere with its Fubini-Study type metric.

    ``c`` is an expression substituted for the radius parameter; by default
    it stays the central letter ``c``.
    """
    p = sq2_presentation()
    E = p.element
    c = f"({c})"
    gc = geo.Metric([[E(_fmt("q^2*{c}*rho^2", c=c))]], [[E(_fmt("q^-2*{c}^-1*rho^-2", c=c))]])
    norms = dict(SQ2_NORMS.get(variant, {}))
    if variant == "complex":
        expected = {
            "connection": [["-q^2*(1+q^2)*dz*rho^-1*zb"]],
            "curvature": [["q^4*(1+q^2)*dz*dzb*rho^-2"]],
            "torsion": ["0"],
            "scalar_curvature": _fmt("{c}*q^2*(1+q^2)", c=c),
            "ricci": [[_fmt("{c}*q^4*(1+q^2)", c=c)]],
        }
        return SpacePreset(
            "sq2", p, gc, ["dz"], ["dz"], ["dzb"], norms, 2,
            expected=_canon(p, expected), params={"c": c[1:-1]}, variant=variant,
        )
    if variant == "riemannian":
        up = _fmt("{c}/(1+q^-2)*rho^2", c=c)
        lo = _fmt("(1+q^-2)*{c}^-1*rho^-2", c=c)
        g = geo.Metric(_diag(E, [up, up]), _diag(E, [lo, lo]), complex=False)
        expected = {
            "connection": [["-q^2*(1+q^2)*dz*rho^-1*zb", "0"], ["0", "-(1+q^-2)*dzb*rho^-1*z"]],
            "curvature": [["q^4*(1+q^2)*dz*dzb*rho^-2", "0"], ["0", "(1+q^-2)*dzb*dz*rho^-2"]],
            "torsion": ["0", "0"],
            "scalar_curvature": _fmt("{c}/4*(1+q^2)^3", c=c),
            "ricci": [
                [_fmt("{c}*q^4/4*(1+q^2)^2", c=c), "0"],
                ["0", _fmt("{c}*q^-2/4*(1+q^2)^2", c=c)],
            ],
        }
        return SpacePreset(
            "sq2", p, g, ["dz", "dzb"], ["dz"], ["dzb"], norms, 2, parts=["hol", "antihol"],
            kahler_metric=gc, expected=_canon(p, expected), params={"c": c[1:-1]}, variant=variant,
        )
    raise ValueError(f"unknown S_q^2 variant {variant!r}")


def _canon(p, table):
    """Reprint every expression in canonical form."""

    def conv(v):
        if isinstance(v, str):
            return str(p.element(v))
        return [conv(x) for x in v]

    return {k: conv(v) for k, v in table.items()}


def cp_metric(p, n):
    """Deformed Fubini-Study metric on CP_q(N)."""
    z, zb, _, _ = _cp_names(n)
    E = p.element
    lower = [
        [E(f"q^-1*rho^-2*({'rho' if a == b else '0'} - q^2*{zb[a]}*{z[b]})") for b in range(n)]
        for a in range(n)
    ]
    upper = [[E(f"q*rho*({'1' if a == b else '0'} + {zb[a]}*{z[b]})") for b in range(n)] for a in range(n)]
    return geo.Metric(upper, lower)


def cp_connection_closed_form(p, n):
    """omega_a^b = -(d_ac d_bd + q^(2(N-d)) d_ab d_cd) rho^-1 zb^c dz^d, d counted from 0."""
    _, zb, dz, _ = _cp_names(n)
    E = p.element
    out = []
    for a in range(n):
        row = []
        for b in range(n):
            acc = E("0")
            for c in range(n):
                for d in range(n):
                    k = (ONE if (a == c and b == d) else ZERO) + (Q ** (2 * (n - d)) if (a == b and c == d) else ZERO)
                    if k:
                        acc = acc - E(f"rho^-1*{zb[c]}*{dz[d]}") * k
            row.append(acc)
        out.append(row)
    return out


def cp_literal_c_formula(p, n):
    """The connection with C = d_ac d_bd + q^(N-d) d_ab d_cd taken literally."""
    _, zb, dz, _ = _cp_names(n)
    E = p.element
    out = []
    for a in range(n):
        row = []
        for b in range(n):
            acc = E("0")
            for c in range(n):
                for d in range(n):
                    k = (ONE if (a == c and b == d) else ZERO) + (Q ** (n - d) if (a == b and c == d) else ZERO)
                    if k:
                        acc = acc + E(f"{zb[c]}*rho^-1*{dz[d]}") * k
            row.append(acc)
        out.append(row)
    return out


def cpqn(n, lower=False):
    """CP_q(N) with the deformed Fubini-Study metric."""
    p = cpqn_presentation(n, lower)
    z, zb, dz, dzb = _cp_names(n)
    g = cp_metric(p, n)
    om = cp_connection_closed_form(p, n)
    expected = {
        "connection": [[str(x) for x in row] for row in om],
        "torsion": ["0"] * n,
    }
    return SpacePreset(
        f"cp{n}", p, g, list(dz), list(dz), list(dzb), {}, 2 * n,
        expected=expected, params={"N": n}, variant="complex",
    )


# -- the two-sheeted space ---------------------------------------------------


def two_sheeted(mu_dim=0):
    """The discrete two-point factor: e^2 = 1, e de = -de e, de de = 0."""
    if mu_dim != 0:
        raise ValueError("only the discrete sector is modeled")
    gens = [
        Generator("de", degree=1, square=0),
        Generator("e", square=1),
    ]
    rules = [QCommute("e", "de", -ONE)]
    p = Presentation("z2", gens, ["de", "e"], rules, d_table={"e": {"full": "de"}})
    return SpacePreset("z2", p, expected={}, params={}, variant="discrete")


def z2_components(alpha):
    """(a, b) with alpha = de (a + b e)."""
    p = alpha.pres
    de, e = p.index["de"], p.index["e"]
    a = b = ZERO
    for w, c in alpha.terms.items():
        if w == ((de, 1),):
            a = a + c
        elif w == ((de, 1), (e, 1)):
            b = b + c
        else:
            raise ValueError(f"not a one-form on the two-point space: {alpha}")
    return a, b


def z2_integrate(alpha):
    """Integral over the two points: the coefficient a of de (a + b e)."""
    return z2_components(alpha)[0]


# -- two points on the sphere ------------------------------------------------


def braided_presentation():
    """Two points z, z' on the sphere with the covariant braiding.

    ``v`` stands for (z - z')^-1 and ``vb`` for its conjugate; ``sr`` is
    rho^(1/2) and acts as a grading, so rho itself is not a letter and
    z zb is rewritten through zb z.  Relations between zb and z' are not
    part of the braiding and are left free.
    """
    q = Q
    gens = [
        Generator("sr", invertible=True),
        Generator("z", conjugate="zb"),
        Generator("zb", conjugate="z"),
        Generator("zp", conjugate="zbp"),
        Generator("zbp", conjugate="zp"),
        Generator("v", conjugate="vb"),
        Generator("vb", conjugate="v"),
    ]
    order = ["sr", "zb", "vb", "zbp", "z", "v", "zp"]
    rules = [
        QCommute("z", "sr", q**-1),
        QCommute("zb", "sr", q),
        QCommute("zp", "sr", q**-1),
        QCommute("zbp", "sr", q),
        QCommute("v", "sr", q),
        QCommute("vb", "sr", q**-1),
        Replace("z", "zb", "q^-2*zb*z + q^-2 - 1"),
        Replace("zp", "z", "q^-2*z*zp + q^-1*lambda*zp^2"),
        Replace("zbp", "zb", "q^2*zb*zbp - q*lambda*zbp^2"),
        QCommute("zp", "v", q**2),
        Replace("z", "v", "1 + q^2*v*zp"),
        Replace("v", "z", "1 + v*zp"),
        QCommute("vb", "zbp", q**2),
        Replace("vb", "zb", "1 + vb*zbp"),
        Replace("zb", "vb", "1 + q^-2*vb*zbp"),
    ]
    return Presentation("braided", gens, order, rules)


def doubleprime_coordinate(p):
    """z'' = (delta z' - q^-1 beta)(-q gamma z' + alpha)^-1 for the matrix
    (z rho^-1/2, -q rho^-1/2; rho^-1/2, rho^-1/2 zb).

    The denominator equals q rho^-1/2 (z - z'), whose inverse is
    q^-1 v rho^1/2; both facts are checked before use.
    """
    E = p.element
    alpha, beta, gamma, delta = E("z*sr^-1"), E("-q*sr^-1"), E("sr^-1"), E("sr^-1*zb")
    zp = E("zp")
    den = -Q * gamma * zp + alpha
    if den != E("q*sr^-1*(z - zp)"):
        raise ValueError("unexpected denominator")
    den_inv = E("q^-1*v*sr")
    if den * den_inv != E("1") or den_inv * den != E("1"):
        raise ValueError("denominator inverse failed")
    return (delta * zp - beta * Q.inv()) * den_inv


def rho_doubleprime(p=None):
    """rho'' = (1 + z zb)(1 + z' zb')(z - z')^-1 (zb - zb')^-1."""
    p = p or braided_presentation()
    return p.element("(1 + z*zb)*(1 + zp*zbp)*v*vb")


def rho_doubleprime_at_origin():
    """With z' = 0, rho'' = (1 + z zb)(zb z)^-1; returns numerator and
    denominator, both functions of rho, in the sphere presentation."""
    p = sq2_presentation()
    return p.element("1 + z*zb"), p.element("zb*z")


# -- SU_q(2) coaction ----------------------------------------------------------


_FRT = ["tb", "tc", "ta", "td"]


def _frt_rules():
    """a b = q b a, a c = q c a, b d = q d b, c d = q d c, b c = c b,
    a d - d a = lambda b c, a d - q b c = 1."""
    q = Q
    return [
        QCommute("ta", "tb", q),
        QCommute("ta", "tc", q),
        QCommute("tc", "tb", ONE),
        QCommute("td", "tb", q**-1),
        QCommute("td", "tc", q**-1),
        Replace("ta", "td", "1 + q*tb*tc"),
        Replace("td", "ta", "1 + q^-1*tb*tc"),
    ]


def adjoin_suq2_coaction(preset=None):
    """Extend the sphere by SU_q(2) generators commuting with all of it."""
    base = preset.pres if preset is not None else sq2_presentation()
    gens = list(base.generators) + [
        Generator("ta", conjugate="td"),
        Generator("tb", star="-q*tc"),
        Generator("tc", star="-q^-1*tb"),
        Generator("td", conjugate="ta"),
    ]
    order = _FRT + list(base.order)
    rules = list(base.rules) + _frt_rules()
    for name in base.order:
        for t in _FRT:
            rules.append(QCommute(name, t, ONE))
    return Presentation(base.name + "+suq2", gens, order, rules, base.d_frame, base.d_table)


def suq2_relations(a, b, c, d):
    """Residuals of the SU_q(2) relations for the matrix (a b; c d)."""
    q = Q
    return {
        "ab-q*ba": a * b - b * a * q,
        "ac-q*ca": a * c - c * a * q,
        "bd-q*db": b * d - d * b * q,
        "cd-q*dc": c * d - d * c * q,
        "bc-cb": b * c - c * b,
        "ad-da-lambda*bc": a * d - d * a - b * c * LAMBDA,
        "ad-q*bc-1": a * d - b * c * q - 1,
    }


def sphere_with_root():
    """The sphere presentation with sr = rho^(1/2) in place of rho."""
    q = Q
    gens = _constants() + [
        Generator("sr", invertible=True),
        Generator("z", conjugate="zb"),
        Generator("zb", conjugate="z"),
    ]
    rules = [
        QCommute("z", "sr", q**-1),
        QCommute("zb", "sr", q),
        Replace("zb", "z", "sr^2 - 1"),
        Replace("z", "zb", "q^-2*sr^2 - 1"),
    ]
    return Presentation("sq2-root", gens, ["sr", "z", "zb"], rules)


def suq2_matrix_residuals():
    """The relations evaluated on (z rho^-1/2, -q rho^-1/2; rho^-1/2, rho^-1/2 zb)."""
    p = sphere_with_root()
    E = p.element
    res = suq2_relations(E("z*sr^-1"), E("-q*sr^-1"), E("sr^-1"), E("sr^-1*zb"))
    # unitarity: the conjugate matrix entries are a* = d and b* = -q c
    res["a*-d"] = E("z*sr^-1").star() - E("sr^-1*zb")
    res["b*+q*c"] = E("-q*sr^-1").star() + E("sr^-1") * Q
    return res


def diagonal_coaction():
    """The sphere extended by the diagonal subgroup (b = c = 0, d = a^-1)."""
    base = sq2_presentation()
    gens = list(base.generators) + [Generator("ta", invertible=True)]
    rules = list(base.rules) + [QCommute(name, "ta", ONE) for name in base.order]
    return Presentation("sq2+torus", gens, ["ta"] + list(base.order), rules, base.d_frame, base.d_table)


def diagonal_kahler_residual():
    """K transformed under z -> a z d^-1 = a z a (b = c = 0) minus K."""
    p = diagonal_coaction()
    E = p.element
    a, d = E("ta"), E("ta^-1")
    zt, zbt = a * E("z") * a, d * E("zb") * d
    if E("1") + zbt * zt != E("rho"):
        raise ValueError("rho is not invariant")
    dzt, dzbt = apply_d(zt), apply_d(zbt)
    K = E("q^-2*c^-1*dz*rho^-2*dzb")
    return dzt * E("q^-2*c^-1*rho^-2") * dzbt - K


# -- preset registry and the definition file ----------------------------------


PRESETS = {
    "sq2": lambda variant=None: sq2(variant or "complex"),
    "cp1": lambda variant=None: cpqn(1),
    "cp2": lambda variant=None: cpqn(2),
    "cp3": lambda variant=None: cpqn(3),
    "z2": lambda variant=None: two_sheeted(),
}


def preset(name, variant=None):
    try:
        return PRESETS[name](variant)
    except KeyError:
        raise KeyError(f"unknown space {name!r}; choose from {', '.join(PRESETS)}") from None


def _rule_dict(r):
    out = {"kind": r.kind, "pattern": [r.left, r.right]}
    if isinstance(r, QCommute):
        out["factor"] = str(QScalar(r.factor))
    elif isinstance(r, Replace):
        out["template"] = r.template
    else:
        out.update(
            twist=str(QScalar(r.twist)),
            base=str(QScalar(r.base)),
            prefactor=str(QScalar(r.prefactor)),
            template=r.tail,
            parametric=True,
        )
    return out


def _rule_from(d):
    left, right = d["pattern"]
    if d["kind"] == "qcommute":
        return QCommute(left, right, QScalar.parse(d["factor"]))
    if d["kind"] == "replace":
        return Replace(left, right, d["template"])
    if d["kind"] == "power_derivation":
        return PowerDerivation(
            left, right, QScalar.parse(d["twist"]), QScalar.parse(d["base"]),
            QScalar.parse(d["prefactor"]), d["template"],
        )
    raise ValueError(f"unknown rule kind {d['kind']!r}")


def _matrix_strs(m):
    return [[str(x) for x in row] for row in m]


def space_dict(sp):
    p = sp.pres
    gens = []
    for g in p.generators:
        gens.append({
            "name": g.name,
            "degree": g.degree,
            "conjugate": g.conjugate,
            "flags": g.flags,
            "square": g.square,
        })
    star_table = {g.name: g.star for g in p.generators if g.star is not None}
    doc = {
        "name": sp.name,
        "variant": sp.variant,
        "params": sp.params,
        "generators": gens,
        "order": p.order,
        "rules": [_rule_dict(r) for r in p.rules],
        "star": star_table,
        "d_frame": [list(t) for t in p.d_frame],
        "d_table": p.d_table,
        "metric": None,
        "hodge": {
            "hol": sp.hol,
            "antihol": sp.antihol,
            "norms": {f"{a},{b}": v for (a, b), v in sorted(sp.norms.items())},
        },
        "basis": sp.basis,
        "dimension": sp.dimension,
        "parts": sp.parts,
        "expected": sp.expected,
    }
    if sp.metric is not None:
        doc["metric"] = {
            "upper": _matrix_strs(sp.metric.upper),
            "lower": _matrix_strs(sp.metric.lower),
            "complex": sp.metric.complex,
        }
    if sp.kahler_metric is not None:
        doc["kahler_metric"] = {
            "upper": _matrix_strs(sp.kahler_metric.upper),
            "lower": _matrix_strs(sp.kahler_metric.lower),
            "complex": sp.kahler_metric.complex,
        }
    return doc


def export_space(sp):
    """Canonical JSON text of a preset."""
    return json.dumps(space_dict(sp), indent=2, sort_keys=True) + "\n"


def _metric_from(p, d):
    if d is None:
        return None
    E = p.element
    return geo.Metric(
        [[E(x) for x in row] for row in d["upper"]],
        [[E(x) for x in row] for row in d["lower"]],
        complex=d.get("complex", True),
    )


def import_space(text):
    """Rebuild a preset from its JSON text."""
    doc = json.loads(text)
    gens = []
    for g in doc["generators"]:
        flags = set(g.get("flags", []))
        gens.append(Generator(
            g["name"],
            degree=g.get("degree", 0),
            conjugate=g.get("conjugate"),
            invertible="invertible" in flags,
            derivation="derivation" in flags,
            central="central" in flags,
            square=g.get("square"),
            star=doc.get("star", {}).get(g["name"]),
        ))
    rules = [_rule_from(r) for r in doc["rules"]]
    p = Presentation(
        doc["name"], gens, doc["order"], rules,
        [tuple(t) for t in doc.get("d_frame", [])], doc.get("d_table"),
    )
    hodge = doc.get("hodge", {})
    norms = {}
    for k, v in hodge.get("norms", {}).items():
        a, b = k.split(",")
        norms[(int(a), int(b))] = v
    return SpacePreset(
        doc["name"], p, _metric_from(p, doc.get("metric")), doc.get("basis", []),
        hodge.get("hol", []), hodge.get("antihol", []), norms, doc.get("dimension", 0),
        parts=doc.get("parts"), kahler_metric=_metric_from(p, doc.get("kahler_metric")),
        expected=doc.get("expected", {}), params=doc.get("params", {}), variant=doc.get("variant", ""),
    )
