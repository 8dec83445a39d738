"""Truncated Hilbert-space representation of the quantum sphere and the
Dirac-operator realization of its differential calculus.

Basis |k>, 0 <= k <= K_max; z lowers k, zb raises it, rho is diagonal with
entries q^-2k.  Operators on the doubled space act on |psi> (x) v with the
two-component index v as the outer block index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ncalg import apply_d
from .scalar import ONE, Q, ZERO
from .spaces import sq2_presentation

__all__ = [
    "TruncatedRep",
    "DiracRep",
    "SingularOperatorError",
    "build_rep",
    "build_dirac",
    "relation_residuals",
    "check_commutator_realization",
    "tau_identity_residual",
    "dirac_square_blocks",
    "aux_trace_exact",
    "gamma_residuals",
    "inverse_abs_dirac_squared",
    "trace_integrate",
    "aux_field",
    "relative_trace",
    "stokes_residual",
    "random_function",
    "two_form",
    "volume_ratio",
    "stokes_recursion_ratio",
    "state_expectation",
]


class SingularOperatorError(ValueError):
    pass


@dataclass
class TruncatedRep:
    K_max: int
    q0: float
    c: float
    theta: float
    z: np.ndarray
    zb: np.ndarray
    rho: np.ndarray

    @property
    def size(self):
        return self.K_max + 1

    def interior(self, margin=1):
        """Indices k < K_max - margin + 1 where relations hold untruncated."""
        return np.arange(self.K_max - margin + 1)

    def function(self, values):
        """diag(f(rho_k)) from values on the spectrum or a callable of rho."""
        if callable(values):
            values = [values(r) for r in np.diag(self.rho).real]
        return np.diag(np.asarray(values, dtype=complex))


def build_rep(q0, c, theta=0.0, K_max=40):
    if not 0 < q0 < 1:
        raise ValueError("q0 must lie in (0, 1)")
    if K_max < 2:
        raise ValueError("K_max must be at least 2")
    n = K_max + 1
    z = np.zeros((n, n), dtype=complex)
    for k in range(1, n):
        z[k - 1, k] = np.exp(1j * theta) * math.sqrt(q0 ** (-2 * k) - 1)
    zb = z.conj().T
    rho = np.diag([q0 ** (-2 * k) for k in range(n)]).astype(complex)
    return TruncatedRep(K_max, float(q0), float(c), float(theta), z, zb, rho)


def relation_residuals(rep, margin=1):
    """Relative residuals of the degree-0 relations on interior vectors."""
    q = rep.q0
    one = np.eye(rep.size)
    z, zb, rho = rep.z, rep.zb, rep.rho
    checks = {
        "1+zb*z-rho": one + zb @ z - rho,
        "z*zb-(q^-2*rho-1)": z @ zb - (q**-2 * rho - one),
        "z*rho-q^-2*rho*z": z @ rho - q**-2 * rho @ z,
        "zb*rho-q^2*rho*zb": zb @ rho - q**2 * rho @ zb,
    }
    idx = rep.interior(margin)
    scale = np.abs(rho[np.ix_(idx, idx)]).max()
    return {k: float(np.abs(v[np.ix_(idx, idx)]).max() / scale) for k, v in checks.items()}


@dataclass
class DiracRep:
    rep: TruncatedRep
    k_D: float
    D: np.ndarray
    tau: np.ndarray
    taudag: np.ndarray
    gamma: np.ndarray
    curly_I: np.ndarray

    def lift(self, a):
        """A function-algebra operator acting on |psi> (x) v."""
        return np.kron(np.eye(2), a)

    def dz(self):
        r = self.rep
        return math.sqrt(r.c * (1 + r.q0**2)) * np.kron(self.tau, r.rho)

    def dzb(self):
        r = self.rep
        return math.sqrt(r.c * (1 + r.q0**2)) * np.kron(self.taudag, r.rho)

    def d(self, a):
        """[D, a] for a function a."""
        A = self.lift(a)
        return self.D @ A - A @ self.D


def build_dirac(rep):
    q, c = rep.q0, rep.c
    lam = q - 1 / q
    k = q / lam * math.sqrt(c * (1 + q**2))
    one = np.eye(rep.size)
    e11 = np.array([[1, 0], [0, 0]], dtype=complex)
    e12 = np.array([[0, 1], [0, 0]], dtype=complex)
    e21 = e12.T.copy()
    e22 = np.array([[0, 0], [0, 1]], dtype=complex)
    D = k * (np.kron(e11, 1j * one) + np.kron(e12, rep.zb) - np.kron(e21, rep.z) - np.kron(e22, 1j * one))
    gamma = np.kron(np.diag([1.0, -1.0]), one).astype(complex)
    curly = np.diag([q, 1 / q]).astype(complex)
    return DiracRep(rep, k, D, e12, e21, gamma, curly)


def _block_interior(rep, margin):
    idx = rep.interior(margin)
    n = rep.size
    return np.concatenate([idx, idx + n])


def check_commutator_realization(rep, dirac, margin=2):
    """Residuals of [D, z] = pi(dz) and [D, zb] = pi(dzb).

    ``interior`` excludes the top ``margin`` basis vectors of each block;
    ``boundary`` is the residual over the full truncated space.
    """
    out = {}
    for name, a, target in (("dz", rep.z, dirac.dz()), ("dzb", rep.zb, dirac.dzb())):
        diff = dirac.d(a) - target
        idx = _block_interior(rep, margin)
        sub = np.ix_(idx, idx)
        out[name] = {
            "interior": float(np.abs(diff[sub]).max() / np.abs(target[sub]).max()),
            "boundary": float(np.abs(diff).max() / np.abs(target).max()),
        }
    return out


def tau_identity_residual():
    """q tau tau^+ + q^-1 tau^+ tau - diag(q, q^-1), exactly."""
    tau = [[ZERO, ONE], [ZERO, ZERO]]
    taud = [[ZERO, ZERO], [ONE, ZERO]]

    def mm(a, b):
        return [[sum((a[i][k] * b[k][j] for k in range(2)), ZERO) for j in range(2)] for i in range(2)]

    t1, t2 = mm(tau, taud), mm(taud, tau)
    target = [[Q, ZERO], [ZERO, Q.inv()]]
    return [[Q * t1[i][j] + Q.inv() * t2[i][j] - target[i][j] for j in range(2)] for i in range(2)]


def dirac_square_blocks():
    """D^+ D / k^2 computed in the sphere algebra: expected diag(rho, q^-2 rho)."""
    p = sq2_presentation()
    E = p.element
    Dm = [[E("i"), E("zb")], [E("-z"), E("-i")]]
    Dd = [[E("-i"), E("-zb")], [E("z"), E("i")]]
    return [[Dd[i][0] * Dm[0][j] + Dd[i][1] * Dm[1][j] for j in range(2)] for i in range(2)]


def aux_trace_exact():
    """Tr_2(gamma I |D|^-2) in units of k^-2 rho^-1; zero for any function factor.

    With D^+ D = k^2 diag(rho, q^-2 rho), |D|^-2 = k^-2 rho^-1 diag(1, q^2).
    """
    blocks = dirac_square_blocks()
    p = blocks[0][0].pres
    if blocks[0][1] or blocks[1][0] or blocks[0][0] != p.element("rho") or blocks[1][1] != p.element("q^-2*rho"):
        raise ValueError("D^+ D is not diag(rho, q^-2 rho)")
    gamma = [ONE, -ONE]
    curly = [Q, Q.inv()]
    inv = [ONE, Q**2]
    return sum((gamma[i] * curly[i] * inv[i] for i in range(2)), ZERO)


def gamma_residuals(dirac):
    """gamma^2 - 1, {gamma, dz}, {gamma, dzb}, [gamma, f] for a random f."""
    g = dirac.gamma
    rep = dirac.rep
    f = dirac.lift(random_function(rep, np.random.default_rng(1)))
    n = g.shape[0]
    return {
        "gamma^2-1": float(np.abs(g @ g - np.eye(n)).max()),
        "{gamma,dz}": float(np.abs(g @ dirac.dz() + dirac.dz() @ g).max()),
        "{gamma,dzb}": float(np.abs(g @ dirac.dzb() + dirac.dzb() @ g).max()),
        "[gamma,f]": float(np.abs(g @ f - f @ g).max()),
    }


def inverse_abs_dirac_squared(dirac, eps=1e-12):
    """|D|^-2 = (D^+ D)^-1 via eigendecomposition."""
    DD = dirac.D.conj().T @ dirac.D
    w, V = np.linalg.eigh(DD)
    if w.min() <= eps * dirac.k_D**2:
        raise SingularOperatorError(f"|D| is singular on the truncation (smallest eigenvalue {w.min():.3g})")
    return (V / w) @ V.conj().T


def trace_integrate(alpha, dirac, inv=None):
    """Tr(gamma alpha |D|^-2) over the doubled space."""
    inv = inverse_abs_dirac_squared(dirac) if inv is None else inv
    return complex(np.trace(dirac.gamma @ alpha @ inv))


def aux_field(dirac, a):
    """a (x) diag(q, q^-1)."""
    return np.kron(dirac.curly_I, a)


def relative_trace(alpha, dirac, inv=None, margin=0):
    """|Tr(gamma alpha |D|^-2)| over the sum of absolute diagonal entries.

    ``margin`` > 0 drops the top basis vectors of each block, where the
    truncated z zb no longer equals q^-2 rho - 1.
    """
    inv = inverse_abs_dirac_squared(dirac) if inv is None else inv
    d = np.diag(dirac.gamma @ alpha @ inv)
    if margin:
        d = d[_block_interior(dirac.rep, margin)]
    scale = np.abs(d).sum()
    return float(abs(d.sum()) / scale) if scale else 0.0


def random_function(rep, rng, degree=3):
    """A random polynomial in z, zb with a random function of rho in front."""
    n = rep.size
    acc = np.zeros((n, n), dtype=complex)
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            coeff = rng.standard_normal() + 1j * rng.standard_normal()
            acc = acc + coeff * np.linalg.matrix_power(rep.z, i) @ np.linalg.matrix_power(rep.zb, j)
    f = rep.function(rng.standard_normal(n) * np.diag(rep.rho).real ** -1)
    return f @ acc


def stokes_residual(dirac, rng, terms=2, degree=2):
    """Integral of d alpha for alpha = sum a_i [D, b_i], d alpha = {D, alpha},
    relative to the sum of absolute diagonal contributions."""
    rep = dirac.rep
    alpha = np.zeros_like(dirac.D)
    for _ in range(terms):
        a = dirac.lift(random_function(rep, rng, degree))
        b = random_function(rep, rng, degree)
        alpha = alpha + a @ dirac.d(b)
    return relative_trace(dirac.D @ alpha + alpha @ dirac.D, dirac)


def two_form(dirac, f_values):
    """f(rho) dz dzb in the representation."""
    return dirac.lift(dirac.rep.function(f_values)) @ dirac.dz() @ dirac.dzb()


def volume_ratio(dirac, power):
    """Integral of dz dzb rho^-2 rho^-power over the integral of dz dzb rho^-2."""
    rep = dirac.rep
    rho = np.diag(rep.rho).real
    inv = inverse_abs_dirac_squared(dirac)
    num = trace_integrate(two_form(dirac, rho ** (-2.0 - power)), dirac, inv)
    den = trace_integrate(two_form(dirac, rho**-2.0), dirac, inv)
    return (num / den).real


def stokes_recursion_ratio(power):
    """The same ratio from the exact Stokes relation.

    For alpha = rho^-m z dzb, d alpha is a combination of rho^j dz dzb, and
    integral(d alpha) = 0 relates I(j) = integral(rho^j dz dzb) for
    neighbouring j.  Returns I(-2-power) / I(-2) as an exact QScalar.
    Only m >= 2 is used: rho^-1 z dzb is singular at the pole.
    """
    p = sq2_presentation()
    E = p.element
    rho_i, dz_i, dzb_i = p.index["rho"], p.index["dz"], p.index["dzb"]

    def relation(m):
        da = apply_d(E(f"rho^{-m}*z*dzb"))
        coeffs = {}
        for w, c in da.terms.items():
            exps = dict((g, e) for g, e in w)
            if set(exps) - {rho_i, dz_i, dzb_i} or exps.get(dz_i) != 1 or exps.get(dzb_i) != 1:
                raise ValueError(f"unexpected term in d alpha: {p.word_str(w)}")
            j = exps.get(rho_i, 0)
            coeffs[j] = coeffs.get(j, ZERO) + c
        return coeffs

    ratio = ONE
    j = -2
    for _ in range(power):
        rel = relation(-j)
        # rel has exactly the two powers j and j - 1
        keys = sorted(rel)
        if keys != [j - 1, j]:
            raise ValueError(f"unexpected Stokes relation powers {keys}")
        ratio = ratio * (-rel[j] / rel[j - 1])
        j -= 1
    return ratio


def state_expectation(rep, f, k):
    """<k| f(rho) |k> = f(q^-2k).

    ``f`` is a callable of rho, a mapping {power: coefficient} for
    sum c_p rho^p, or a distance series.
    """
    from .distance import DistanceSeries, evaluate_F

    if isinstance(f, DistanceSeries):
        return evaluate_F(f, k)
    if rep is not None and k > rep.K_max:
        raise ValueError("k exceeds the truncation")
    rho = rep.q0 ** (-2 * k)
    if callable(f):
        return float(f(rho))
    return float(sum(c * rho**p for p, c in dict(f).items()))
