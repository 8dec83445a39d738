"""Metric, connection, curvature, Hodge star and curvature scalars."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .ncalg import Element, apply_d, star
from .scalar import ONE, ZERO, QScalar

__all__ = [
    "Metric",
    "HodgeStar",
    "GeometryResult",
    "GeometryError",
    "connection_from_metric",
    "metricity_residual",
    "curvature",
    "torsion",
    "bianchi_residual",
    "consistency_residual",
    "build_hodge_from_kahler",
    "scalar_curvature",
    "ricci",
    "laplacian",
    "derivation_laplacian",
    "codifferential",
    "raise_index",
    "lower_index",
    "lower_basis",
    "kahler_form",
]


class GeometryError(ValueError):
    pass


def _zero(p):
    return Element(p, {})


def _matmul(a, b):
    n, m, k = len(a), len(b), len(b[0])
    p = a[0][0].pres
    out = [[_zero(p) for _ in range(k)] for _ in range(n)]
    for i in range(n):
        for j in range(k):
            acc = _zero(p)
            for t in range(m):
                acc = acc + a[i][t] * b[t][j]
            out[i][j] = acc
    return out


@dataclass
class Metric:
    """``upper[a][b]`` is g^{ab} (g^{\\bar a b} in the complex case) and
    ``lower[a][b]`` its inverse g_{ab} (g_{a\\bar b})."""

    upper: list
    lower: list
    complex: bool = True

    @property
    def n(self):
        return len(self.upper)

    @property
    def pres(self):
        return self.upper[0][0].pres

    def check_inverse(self):
        prod = _matmul(self.lower, self.upper)
        for i, row in enumerate(prod):
            for j, v in enumerate(row):
                if v != (1 if i == j else 0):
                    raise GeometryError(f"metric is not invertible: (g_lower g_upper)[{i}][{j}] = {v}")
        return True

    def hermiticity_residual(self):
        return [[star(self.upper[a][b]) - self.upper[b][a] for b in range(self.n)] for a in range(self.n)]


def connection_from_metric(g, p=None, check=True, parts=None):
    """omega_a^b = - g_{a c} (delta g^{c b}).

    The differential is holomorphic unless ``parts[b]`` names another part
    for column b (the real form of a complex space pairs dz with the
    holomorphic and dzb with the antiholomorphic differential).
    """
    if check:
        g.check_inverse()
    n = g.n
    parts = parts or ["hol"] * n
    dg = [[apply_d(g.upper[c][b], part=parts[b]) for b in range(n)] for c in range(n)]
    om = _matmul(g.lower, dg)
    return [[-x for x in row] for row in om]


def metricity_residual(g, omega, p=None):
    """dg^{ab} + g^{ac} omega_c^b + (g^{bc} omega_c^a)^*; zero iff metric."""
    n = g.n
    gom = _matmul(g.upper, omega)
    return [[apply_d(g.upper[a][b]) + gom[a][b] + star(gom[b][a]) for b in range(n)] for a in range(n)]


def curvature(omega, p=None):
    """R_a^b = d omega_a^b - omega_a^c omega_c^b."""
    oo = _matmul(omega, omega)
    n = len(omega)
    return [[apply_d(omega[a][b]) - oo[a][b] for b in range(n)] for a in range(n)]


def torsion(omega, basis, p=None):
    """T^a = d xi^a - xi^b omega_b^a."""
    n = len(basis)
    out = []
    for a in range(n):
        acc = apply_d(basis[a])
        for b in range(n):
            acc = acc - basis[b] * omega[b][a]
        out.append(acc)
    return out


def bianchi_residual(omega, R, p=None):
    n = len(omega)
    oR = _matmul(omega, R)
    Ro = _matmul(R, omega)
    return [[apply_d(R[a][b]) - oR[a][b] + Ro[a][b] for b in range(n)] for a in range(n)]


def consistency_residual(T, R, basis, p=None):
    """dT^a - xi^b R_b^a."""
    n = len(basis)
    out = []
    for a in range(n):
        acc = apply_d(T[a])
        for b in range(n):
            acc = acc - basis[b] * R[b][a]
        out.append(acc)
    return out


def raise_index(alpha, g):
    """alpha^a = (alpha_b)^* g^{ba}."""
    n = g.n
    return [sum((star(alpha[b]) * g.upper[b][a] for b in range(n)), _zero(g.pres)) for a in range(n)]


def lower_index(alpha, g):
    """alpha_a = g_{ab} (alpha^b)^*."""
    n = g.n
    return [sum((g.lower[a][b] * star(alpha[b]) for b in range(n)), _zero(g.pres)) for a in range(n)]


def lower_basis(basis, g):
    return lower_index(basis, g)


def kahler_form(g, hol, antihol):
    """K = dz^a g_{a b} dzb^b."""
    p = g.pres
    acc = _zero(p)
    for a in range(g.n):
        for b in range(g.n):
            acc = acc + p.letter(hol[a]) * g.lower[a][b] * p.letter(antihol[b])
    return acc


# -- linear algebra over QScalar ---------------------------------------------


def _solve(columns, target):
    """Solve sum_j x_j columns[j] = target for term-map vectors (exact)."""
    rows = sorted({w for col in columns for w in col} | set(target))
    ncol = len(columns)
    mat = [[col.get(w, ZERO) for col in columns] + [target.get(w, ZERO)] for w in rows]
    piv_cols = []
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = mat[r][c].inv()
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, len(mat)):
        if mat[i][-1]:
            raise GeometryError("linear system has no solution")
    x = [ZERO] * ncol
    for i, c in enumerate(piv_cols):
        x[c] = mat[i][-1]
    return x


# -- Hodge star --------------------------------------------------------------


@dataclass
class HodgeStar:
    """Hodge map given on normal-ordered pure form words.

    Applied with the ordering prescription ``*(F alpha) = F (*alpha)`` where
    ``F`` is the function prefix of a normal word.
    """

    pres: object
    table: dict
    prescription: str = "left"
    norms: dict = field(default_factory=dict)
    holomorphic_first: bool = False

    def __call__(self, alpha):
        p = self.pres
        out = _zero(p)
        for w, c in alpha.terms.items():
            k = len(w)
            while k and p.gens[w[k - 1][0]].degree:
                k -= 1
            fun, form = w[:k], w[k:]
            if any(p.gens[g].degree for g, _ in fun):
                raise GeometryError(f"form letters are not a suffix of {p.word_str(w)}")
            img = self.table.get(form)
            if img is None:
                raise GeometryError(f"Hodge star undefined on {p.word_str(form) or '1'}")
            out = out + Element(p, {fun: c}) * img
        return out

    def entries(self):
        p = self.pres
        return {p.word_str(w) or "1": str(v) for w, v in sorted(self.table.items())}


def _check_real_central(K, p):
    if star(K) != K:
        raise GeometryError(f"Kahler form is not real: K* - K = {star(K) - K}")
    for gen in p.generators:
        if gen.derivation:
            continue
        x = p.letter(gen.name)
        if K * x != x * K:
            raise GeometryError(f"Kahler form does not commute with {gen.name}")


def _single_word_ratio(a, b):
    """a / b for two elements proportional to the same single word."""
    if not a.terms:
        return ZERO
    if len(a.terms) != 1 or len(b.terms) != 1 or a.terms.keys() != b.terms.keys():
        raise GeometryError(f"{a} is not proportional to {b}")
    (w,) = a.terms
    return a.terms[w] / b.terms[w]


def _volume_density(KN, H, A, p):
    """Solve K^N = H mu A for the function mu by linear algebra."""
    basis = set()
    for w in KN.terms:
        k = len(w)
        while k and p.gens[w[k - 1][0]].degree:
            k -= 1
        basis.add(w[:k])
    for _ in range(4):
        cols = sorted(basis)
        images = [(H * Element(p, {w: ONE}) * A).terms for w in cols]
        try:
            x = _solve(images, KN.terms)
        except GeometryError:
            extra = set()
            for img in images:
                for w in img:
                    k = len(w)
                    while k and p.gens[w[k - 1][0]].degree:
                        k -= 1
                    extra.add(w[:k])
            if extra <= basis:
                raise
            basis |= extra
            continue
        return Element(p, {w: c for w, c in zip(cols, x) if c})
    raise GeometryError("could not extract the volume density")


def build_hodge_from_kahler(K, g, p, hol, antihol, norms=None, holomorphic_first=False, check=True):
    """Hodge map patched from powers of a real central Kahler form.

    ``norms`` maps ``(p, r)`` (holomorphic, antiholomorphic degree) to a
    constant factor; missing entries default to 1.
    """
    p = K.pres
    if check:
        _check_real_central(K, p)
    N = len(hol)
    norms = dict(norms or {})
    H = _prod(p, [p.letter(x) for x in hol])
    A = _prod(p, [p.letter(x) for x in reversed(antihol)])
    KN = _prod(p, [K] * N)
    mu = _volume_density(KN, H, A, p)
    mu_inv = mu.inverse()
    xi = [sum((g.lower[a][b] * p.letter(antihol[b]) for b in range(N)), _zero(p)) for a in range(N)]
    eta = [star(x) for x in xi]

    def eps(perm):
        return _single_word_ratio(_prod(p, [p.letter(hol[a]) for a in perm]), H)

    def hol_part(given):
        rest = [a for a in range(N) if a not in given]
        acc = _zero(p)
        for tail in itertools.permutations(rest):
            e = eps(list(given) + list(tail))
            if e:
                acc = acc + _prod(p, [xi[a] for a in reversed(tail)]) * e
        return acc

    def antihol_part(given):
        rest = [b for b in range(N) if b not in given]
        acc = _zero(p)
        for tail in itertools.permutations(rest):
            e = eps(list(given) + list(tail))
            if e:
                acc = acc + _prod(p, [eta[b] for b in tail]) * e
        return acc

    raw = {}
    for r in range(N + 1):
        for pd in range(N + 1):
            for bs in itertools.combinations(range(N), r):
                for as_ in itertools.combinations(range(N), pd):
                    dzb = _prod(p, [p.letter(antihol[b]) for b in bs])
                    dz = _prod(p, [p.letter(hol[a]) for a in as_])
                    form = dz * dzb if holomorphic_first else dzb * dz
                    image = antihol_part(bs) * mu_inv * hol_part(as_)
                    nrm = norms.get((pd, r), 1)
                    image = image * nrm if isinstance(nrm, (int, QScalar)) else p.element(nrm) * image
                    raw.setdefault((pd, r), []).append((form, image))
    table = {}
    for (pd, r), pairs in raw.items():
        forms = [f.terms for f, _ in pairs]
        words = sorted({w for f in forms for w in f})
        for w in words:
            x = _solve(forms, {w: ONE})
            acc = _zero(p)
            for coeff, (_, image) in zip(x, pairs):
                if coeff:
                    acc = acc + image * coeff
            table[w] = acc
    hodge = HodgeStar(p, table, norms=norms, holomorphic_first=holomorphic_first)
    hodge.mu = mu
    return hodge


def _prod(p, factors):
    acc = Element.scalar(p, 1)
    for f in factors:
        acc = acc * f
    return acc


def hodge_from_table(p, entries):
    """Hodge map from ``{form expression: image expression}`` strings."""
    table = {}
    for form, image in entries.items():
        f = p.element(form)
        if len(f.terms) != 1:
            raise GeometryError(f"table key {form!r} is not a single word")
        ((w, c),) = f.terms.items()
        table[w] = p.element(image) * c.inv()
    return HodgeStar(p, table)


# -- curvature scalars -------------------------------------------------------


def scalar_curvature(R, hodge, basis, lowered, D, p=None):
    """(-1)^(D+1) * ( xi^a (*R_a^b) xi_b )."""
    n = len(basis)
    pres = basis[0].pres
    acc = _zero(pres)
    for a in range(n):
        for b in range(n):
            if R[a][b]:
                acc = acc + basis[a] * hodge(R[a][b]) * lowered[b]
    val = hodge(acc)
    return val if D % 2 else -val


def ricci(R, hodge, basis, lowered, p=None, variant="left"):
    """Left: *((*R_a^c) xi_c xi^b).  Right: *(xi_a xi^c (*R_c^b))."""
    n = len(basis)
    pres = basis[0].pres
    starR = [[hodge(R[a][b]) for b in range(n)] for a in range(n)]
    out = []
    for a in range(n):
        row = []
        for b in range(n):
            acc = _zero(pres)
            for c in range(n):
                if variant == "left":
                    acc = acc + starR[a][c] * lowered[c] * basis[b]
                elif variant == "right":
                    acc = acc + lowered[a] * basis[c] * starR[c][b]
                else:
                    raise ValueError(f"unknown Ricci variant {variant!r}")
            row.append(hodge(acc))
        out.append(row)
    return out


def codifferential(alpha, hodge):
    """delta = - * d *."""
    return -hodge(apply_d(hodge(alpha)))


def laplacian(f, hodge, p=None, normalization=None):
    """-normalization * (d + delta)^2 f, normalization defaulting to 1/2."""
    from fractions import Fraction

    norm = QScalar(Fraction(1, 2)) if normalization is None else QScalar(normalization)

    def D(x):
        return apply_d(x) + codifferential(x, hodge)

    return -(D(D(f)) * norm)


def derivation_laplacian(f, prefactor, outer="delb", inner="del"):
    """prefactor * (outer inner f) computed by moving derivations through f."""
    p = f.pres
    word = ((p.index[outer], 1), (p.index[inner], 1))
    acc = _zero(p)
    for w, c in f.terms.items():
        terms = p.normal_word(word + w)
        for tw, tc in terms.items():
            if not p.has_derivation(tw):
                acc = acc + Element(p, {tw: c * tc})
    return prefactor * acc


# -- results -----------------------------------------------------------------


@dataclass
class GeometryResult:
    connection: list
    curvature: list
    torsion: list
    scalar_curvature: Element
    ricci: list
    space: str = ""
    variant: str = ""
    ricci_variant: str = "left"

    def to_dict(self):
        def mat(m):
            return [[str(x) for x in row] for row in m]

        return {
            "space": self.space,
            "variant": self.variant,
            "connection": mat(self.connection),
            "curvature": mat(self.curvature),
            "torsion": [str(x) for x in self.torsion],
            "scalar_curvature": str(self.scalar_curvature),
            "ricci": mat(self.ricci),
            "ricci_variant": self.ricci_variant,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)
