"""Spectral distance on the quantum sphere.

The distance function is F(rho) = P * sum_n a_n rho^(-n-1/2) with
a_n = b_n / [n+1/2]_{q^-1}, b_n = (2n)! / (2^n n!)^2 and
P = -sqrt((1 + q^-2) / (2 c q^2)).  Coefficients are exact; sums are
taken in floating point with an explicit tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .scalar import LAMBDA, ONE, Q, S, ZERO, QScalar, q_int

__all__ = [
    "DistanceSeries",
    "TruncationError",
    "central_binomial",
    "series_coefficient",
    "solve_distance_series",
    "functional_equation_residuals",
    "w_residuals",
    "w_constant_residual",
    "arcsine_coefficients",
    "evaluate_F",
    "distance_states",
    "distance_report",
    "dF_norm_squared",
    "df_norm_squared_values",
    "distance_sanity_search",
    "SanityReport",
]


class TruncationError(ValueError):
    """The series is too short for the requested precision."""

    def __init__(self, message, bound):
        super().__init__(f"{message} (tail bound {bound:.3g})")
        self.bound = bound


def central_binomial(n):
    """b_n = (2n)! / (2^n n!)^2, the coefficients of (1 - x)^(-1/2)."""
    return Fraction(math.comb(2 * n, n), 4**n)


def series_coefficient(n):
    """a_n as an exact rational function of s."""
    return QScalar(central_binomial(n)) / q_int(Fraction(2 * n + 1, 2), base="q^-1")


@dataclass
class DistanceSeries:
    coefficients: list
    q0: float
    c: float
    n_terms: int
    # P^2 without the 1/c factor: (1 + q^-2) / (2 q^2)
    prefactor_squared: QScalar = field(default_factory=lambda: (ONE + Q**-2) / (2 * Q**2))

    @property
    def prefactor(self):
        """P as a float."""
        q = self.q0
        return -math.sqrt((1 + q**-2) / (2 * self.c * q**2))

    def numeric_coefficients(self, n_terms=None):
        """a_n as floats, using a form that stays finite for large n."""
        n_terms = self.n_terms if n_terms is None else n_terms
        n = np.arange(n_terms, dtype=float)
        ratios = np.ones(n_terms)
        ratios[1:] = (2 * n[1:] - 1) / (2 * n[1:])
        b = np.cumprod(ratios)
        q = self.q0
        if q == 1:
            return b / (n + 0.5)
        q2n1 = np.power(q, 2 * n + 1)
        return b * (q**-2 - 1) * q2n1 / (1 - q2n1)


def solve_distance_series(q0, c, n_terms, exact_terms=None):
    """The series solution of the distance functional equation.

    ``exact_terms`` (default min(n_terms, 50)) coefficients are kept as
    exact rational functions; all ``n_terms`` enter numeric sums.
    """
    if not 0 < q0 <= 1:
        raise ValueError("q0 must lie in (0, 1]")
    if c <= 0:
        raise ValueError("c must be positive")
    if n_terms < 1:
        raise ValueError("n_terms must be at least 1")
    k = min(n_terms, 50) if exact_terms is None else exact_terms
    return DistanceSeries([series_coefficient(n) for n in range(k)], float(q0), float(c), n_terms)


def functional_equation_residuals(series):
    """q a_n (q^(-2n-1) - 1) + lambda b_n for each exact order.

    This is F(q^2 rho) - F(rho) = lambda (2 c q^4 (rho - 1)/(1 + q^-2))^(-1/2)
    compared coefficient by coefficient in rho^(-n-1/2), after dividing by
    the common factor.
    """
    out = []
    for n, a in enumerate(series.coefficients):
        shift = S ** (-(4 * n + 2)) - ONE
        out.append(Q * a * shift + LAMBDA * QScalar(central_binomial(n)))
    return out


def w_residuals(series):
    """Coefficients of (1 - x)(sum_n D_n x^n)^2 - lambda^2 q^-2, x = 1/rho.

    D_n = a_n (q^(-2n-1) - 1) are the coefficients of F(q^2 rho) - F(rho)
    in units of P rho^(-1/2), so W = P^2 * (this constant).
    """
    N = len(series.coefficients)
    D = [a * (S ** (-(4 * n + 2)) - ONE) for n, a in enumerate(series.coefficients)]
    sq = [ZERO] * N
    for i in range(N):
        for j in range(N - i):
            sq[i + j] = sq[i + j] + D[i] * D[j]
    out = []
    for n in range(N):
        v = sq[n] - (sq[n - 1] if n else ZERO)
        if n == 0:
            v = v - LAMBDA**2 * Q**-2
        out.append(v)
    return out


def w_constant_residual(c=None):
    """P^2 lambda^2 q^-2 - (1/2) c^-1 q^-4 lambda^2 (1 + q^-2) (c symbolic as 1)."""
    cc = QScalar(Fraction(c)) if c is not None else ONE
    p2 = (ONE + Q**-2) / (2 * Q**2 * cc)
    return p2 * LAMBDA**2 * Q**-2 - (LAMBDA**2 * (ONE + Q**-2)) / (2 * cc * Q**4)


def arcsine_coefficients(n_max):
    """Taylor coefficients of -asin(x) at x^(2n+1), n <= n_max, from sympy."""
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.series(-sympy.asin(x), x, 0, 2 * n_max + 3).removeO()
    return [Fraction(str(sympy.Rational(poly.coeff(x, 2 * n + 1)))) for n in range(n_max + 1)]


def _tail_bound(series, x, n_terms):
    """Bound on |P| sum_{n >= N} a_n x^(n+1/2) for x = 1/rho <= 1."""
    q = series.q0
    N = n_terms
    if x == 0:
        return 0.0
    P = abs(series.prefactor)
    if q < 1:
        aN = series.numeric_coefficients(N + 1)[-1]
        r = q * q * x
        return P * aN * x ** (N + 0.5) / (1 - r)
    if x < 1:
        aN = series.numeric_coefficients(N + 1)[-1]
        return P * aN * x ** (N + 0.5) / (1 - x)
    # q = 1 on the boundary: a_n <= n^(-3/2) / sqrt(pi)
    return P * 2 / math.sqrt(math.pi) / math.sqrt(max(N - 1, 1))


def evaluate_F(series, k, n_terms=None, with_bound=False):
    """F at rho = q^(-2k); ``k=None`` means rho = infinity (F = 0)."""
    n_terms = series.n_terms if n_terms is None else n_terms
    if k is None:
        return (0.0, 0.0) if with_bound else 0.0
    q = series.q0
    x = q ** (2 * k) if q < 1 else 1.0
    a = series.numeric_coefficients(n_terms)
    n = np.arange(n_terms, dtype=float)
    with np.errstate(under="ignore"):
        terms = a * np.power(x, n + 0.5)
    val = series.prefactor * float(np.sum(terms[::-1]))
    if with_bound:
        return val, _tail_bound(series, x, n_terms)
    return val


def _state(m, series):
    """Index k, or None for the north pole (rho infinite or q^(2m) == 0)."""
    if m is None or m == math.inf:
        return None
    if series.q0 < 1 and series.q0 ** (2 * m) == 0.0:
        return None
    return m


def distance_report(m, n, series, tol=None):
    """Distance between |m> and |n> with its tail bound."""
    if n is not None and m is not None and m < n:
        raise ValueError("need m >= n")
    if m == n:
        return {"m": m, "n": n, "q": series.q0, "c": series.c, "distance": 0.0,
                "terms": series.n_terms, "tail_bound": 0.0}
    Fm, bm = evaluate_F(series, _state(m, series), with_bound=True)
    Fn, bn = evaluate_F(series, _state(n, series), with_bound=True)
    bound = bm + bn
    if tol is not None and bound > tol:
        raise TruncationError(f"{series.n_terms} terms do not reach tolerance {tol:g}", bound)
    return {
        "m": m,
        "n": n,
        "q": series.q0,
        "c": series.c,
        "distance": Fm - Fn,
        "terms": series.n_terms,
        "tail_bound": float(bound),
    }


def distance_states(m, n, series, tol=None):
    """F(q^-2m) - F(q^-2n) for m >= n."""
    return distance_report(m, n, series, tol)["distance"]


def df_norm_squared_values(f_values, q0, c):
    """Diagonal of |df|^2 on |k> for a function of rho given on the spectrum.

    |df|^2 = C (z D+^2 zb + zb D-^2 z) with C = c q^4 / (lambda^2 (1 + q^-2)),
    D+ f = f(q^2 rho) - f(rho), D- f = f(q^-2 rho) - f(rho).  On |k> this is
    C [ (rho_{k+1} - 1)(f_k - f_{k+1})^2 + (rho_k - 1)(f_{k-1} - f_k)^2 ].
    Entries are returned for k < len(f_values) - 1.
    """
    f = np.asarray(f_values, dtype=float)
    q = q0
    lam = q - 1 / q
    C = c * q**4 / (lam**2 * (1 + q**-2))
    K = len(f)
    k = np.arange(K - 1, dtype=float)
    rho_next = q ** (-2 * (k + 1))
    rho_k = q ** (-2 * k)
    up = (rho_next - 1) * (f[:-1] - f[1:]) ** 2
    down = np.zeros(K - 1)
    down[1:] = (rho_k[1:] - 1) * (f[:-2] - f[1:-1]) ** 2
    return C * (up + down)


def dF_norm_squared(series, k_max):
    """|dF|^2 on |k> for k <= k_max."""
    vals = [evaluate_F(series, k) for k in range(k_max + 2)]
    return df_norm_squared_values(vals, series.q0, series.c)


@dataclass
class SanityReport:
    trials: int
    max_ratio: float
    worst: dict
    ratios: list = field(repr=False, default_factory=list)
    tolerance: float = 1e-6

    @property
    def ok(self):
        return self.max_ratio <= 1 + self.tolerance


def _ratio_for(f_vals, dist, q0, c, kmax):
    norm = df_norm_squared_values(f_vals, q0, c)[:kmax].max()
    if norm <= 0:
        return 0.0, (0, 0)
    fv = np.asarray(f_vals[:kmax]) / math.sqrt(norm)
    diff = np.abs(fv[:, None] - fv[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(dist > 0, diff / np.where(dist > 0, dist, 1), 0.0)
    i, j = np.unravel_index(int(np.argmax(r)), r.shape)
    return float(r[i, j]), (int(i), int(j))


def distance_sanity_search(series, trial_count=1000, degree_bound=3, k_max=60, seed=0, candidates=None):
    """Random functions of rho, rescaled to |df|^2 <= 1, against the distance.

    Each candidate is a polynomial in 1/rho of degree ``degree_bound`` with
    standard normal coefficients.  ``candidates`` may supply extra
    functions as callables of rho.  Pairs m, n < k_max - 1 are compared.
    """
    q = series.q0
    kmax = k_max - 1
    Fv = np.array([evaluate_F(series, k) for k in range(k_max + 1)])
    dist = np.abs(Fv[:kmax, None] - Fv[None, :kmax])
    rho = q ** (-2.0 * np.arange(k_max + 1))
    rng = np.random.default_rng(seed)
    ratios = []
    worst = {"ratio": -1.0}
    funcs = list(candidates or [])
    for t in range(trial_count + len(funcs)):
        if t < len(funcs):
            vals = np.array([funcs[t](r) for r in rho], dtype=float)
            coeffs = None
        else:
            coeffs = rng.standard_normal(degree_bound + 1)
            vals = sum(cf * rho ** (-i) for i, cf in enumerate(coeffs))
        r, (i, j) = _ratio_for(vals, dist, q, series.c, kmax)
        ratios.append(r)
        if r > worst["ratio"]:
            worst = {"ratio": r, "m": max(i, j), "n": min(i, j), "trial": t,
                     "coefficients": None if coeffs is None else coeffs.tolist()}
    return SanityReport(len(ratios), max(ratios), worst, ratios)
