"""Exact rational functions of the deformation parameter.

Values live in Q(s) with q = s**2, so half-integer powers of q are plain
monomials.  A value is stored as ``s**shift * num(s) / den(s)`` where
``num`` and ``den`` are integer polynomials (ascending coefficient tuples)
with nonzero constant terms, coprime, and ``den`` has a positive leading
coefficient.  Equality is therefore structural.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from sympy.polys.densearith import dup_exquo
from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_gcd

from ._parse import parse_expression

__all__ = ["QScalar", "PoleError", "q_int", "eval_float", "Q", "S", "LAMBDA", "ONE", "ZERO"]


class PoleError(ZeroDivisionError):
    """Denominator vanishes at the requested evaluation point."""


_ONE_POLY = (1,)


def _strip(coeffs):
    """Drop trailing zeros; return (low_order_zeros, trimmed tuple)."""
    hi = len(coeffs)
    while hi and not coeffs[hi - 1]:
        hi -= 1
    lo = 0
    while lo < hi and not coeffs[lo]:
        lo += 1
    return lo, tuple(coeffs[lo:hi])


def _pmul(a, b):
    if a == _ONE_POLY:
        return b
    if b == _ONE_POLY:
        return a
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] += y
    return out


def _pscale(a, k):
    return [k * x for x in a]


def _to_dup(a):
    # sympy dense polys are descending
    return [ZZ(x) for x in reversed(a)]


def _from_dup(f):
    return tuple(int(x) for x in reversed(f))


def _reduce(num, den):
    """Cancel the gcd (content included) of two ascending polynomials."""
    if den == _ONE_POLY:
        return num, den
    if len(den) == 1 and len(num) >= 1:
        g = math.gcd(den[0], *num)
        if g != 1:
            num = tuple(x // g for x in num)
            den = (den[0] // g,)
    else:
        fn, fd = _to_dup(num), _to_dup(den)
        g = dup_gcd(fn, fd, ZZ)
        if len(g) > 1 or abs(g[0]) != 1:
            num = _from_dup(dup_exquo(fn, g, ZZ))
            den = _from_dup(dup_exquo(fd, g, ZZ))
    if den[-1] < 0:
        num = tuple(-x for x in num)
        den = tuple(-x for x in den)
    return num, den


class QScalar:
    """Immutable element of Q(s), q = s**2."""

    __slots__ = ("_num", "_den", "_shift", "_hash")

    def __init__(self, value=0):
        if isinstance(value, QScalar):
            self._num, self._den, self._shift = value._num, value._den, value._shift
        elif isinstance(value, (int, Rational)):
            fr = Fraction(value)
            if fr:
                self._num, self._den = (fr.numerator,), (fr.denominator,)
            else:
                self._num, self._den = (), _ONE_POLY
            self._shift = 0
        elif isinstance(value, str):
            other = QScalar.parse(value)
            self._num, self._den, self._shift = other._num, other._den, other._shift
        else:
            raise TypeError(f"cannot build QScalar from {type(value).__name__}")
        self._hash = None

    @classmethod
    def _raw(cls, num, den, shift):
        obj = object.__new__(cls)
        obj._num, obj._den, obj._shift, obj._hash = num, den, shift, None
        return obj

    @classmethod
    def from_polys(cls, num, den=_ONE_POLY, shift=0):
        """Build from ascending integer coefficient lists of ``s``."""
        lo_n, num = _strip(list(num))
        if not num:
            return ZERO
        lo_d, den = _strip(list(den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        num, den = _reduce(num, den)
        return cls._raw(num, den, shift + lo_n - lo_d)

    @classmethod
    def monomial(cls, coeff, s_exp):
        """``coeff * s**s_exp``."""
        fr = Fraction(coeff)
        if not fr:
            return ZERO
        return cls._raw((fr.numerator,), (fr.denominator,), s_exp)

    @classmethod
    def qpow(cls, e):
        """``q**e`` for integer or half-integer ``e``."""
        two_e = Fraction(e) * 2
        if two_e.denominator != 1:
            raise ValueError(f"q exponent must be a half-integer, got {e}")
        return cls._raw((1,), _ONE_POLY, int(two_e))

    # -- structure ---------------------------------------------------------

    @property
    def parts(self):
        """(numerator coeffs, denominator coeffs, s-shift), ascending in s."""
        return self._num, self._den, self._shift

    def is_zero(self):
        return not self._num

    def __bool__(self):
        return bool(self._num)

    def is_polynomial(self):
        """True when the value is a Laurent polynomial in s."""
        return self._den == _ONE_POLY

    def is_rational(self):
        return len(self._num) <= 1 and len(self._den) == 1 and (not self._num or self._shift == 0)

    def to_fraction(self):
        if not self._num:
            return Fraction(0)
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational constant")
        return Fraction(self._num[0], self._den[0])

    def __eq__(self, other):
        if not isinstance(other, QScalar):
            if isinstance(other, (int, Rational)):
                other = QScalar(other)
            else:
                return NotImplemented
        return (self._num, self._den, self._shift) == (other._num, other._den, other._shift) or (
            not self._num and not other._num
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._num, self._den, self._shift if self._num else 0))
        return self._hash

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, QScalar):
            return x
        if isinstance(x, (int, Rational)):
            return QScalar(x)
        return None

    def __neg__(self):
        if not self._num:
            return self
        return QScalar._raw(tuple(-x for x in self._num), self._den, self._shift)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self._num:
            return other
        if not other._num:
            return self
        m = min(self._shift, other._shift)
        a = [0] * (self._shift - m) + list(self._num)
        b = [0] * (other._shift - m) + list(other._num)
        if self._den == other._den:
            num = _padd(a, b)
            den = self._den
        else:
            num = _padd(_pmul(a, other._den), _pmul(b, self._den))
            den = _pmul(self._den, other._den)
        lo, num = _strip(num)
        if not num:
            return ZERO
        num, den = _reduce(num, tuple(den))
        return QScalar._raw(num, den, m + lo)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self._num or not other._num:
            return ZERO
        shift = self._shift + other._shift
        if self._den == _ONE_POLY and other._den == _ONE_POLY:
            return QScalar._raw(tuple(_pmul(self._num, other._num)), _ONE_POLY, shift)
        # cross-cancel to keep intermediate degrees small
        n1, d2 = _reduce(self._num, other._den)
        n2, d1 = _reduce(other._num, self._den)
        num = tuple(_pmul(n1, n2))
        den = tuple(_pmul(d1, d2))
        if den[-1] < 0:
            num = tuple(-x for x in num)
            den = tuple(-x for x in den)
        return QScalar._raw(num, den, shift)

    __rmul__ = __mul__

    def inv(self):
        if not self._num:
            raise ZeroDivisionError("inverse of zero QScalar")
        num, den = self._den, self._num
        if den[-1] < 0:
            num = tuple(-x for x in num)
            den = tuple(-x for x in den)
        return QScalar._raw(num, den, -self._shift)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inv()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def subs_q_inverse(self):
        """Substitute q -> 1/q."""
        if not self._num:
            return self
        dn, dd = len(self._num) - 1, len(self._den) - 1
        num, den = tuple(reversed(self._num)), tuple(reversed(self._den))
        if den[-1] < 0:
            num = tuple(-x for x in num)
            den = tuple(-x for x in den)
        return QScalar._raw(num, den, -self._shift - dn + dd)

    # -- evaluation --------------------------------------------------------

    def evaluate_s(self, s):
        """Evaluate at a given value of s using that value's arithmetic."""

        def horner(coeffs):
            acc = 0
            for c in reversed(coeffs):
                acc = acc * s + c
            return acc

        if not self._num:
            return 0 * s
        den = horner(self._den)
        if den == 0:
            raise PoleError(f"{self} has a pole at s={s}")
        return s**self._shift * horner(self._num) / den

    def eval_float(self, q0):
        q0 = float(q0)
        if q0 <= 0:
            raise ValueError("q0 must be positive")
        if q0 == 1.0:
            if not self._num:
                return 0.0
            d = sum(self._den)
            if d == 0:
                raise PoleError(f"{self} has a pole at q=1")
            return float(Fraction(sum(self._num), d))
        return float(self.evaluate_s(math.sqrt(q0)))

    def __float__(self):
        return float(self.to_fraction())

    # -- text --------------------------------------------------------------

    def _uses_q(self):
        if self._shift % 2:
            return False
        return all(not c for c in self._num[1::2]) and all(not c for c in self._den[1::2])

    def __str__(self):
        if not self._num:
            return "0"
        in_q = self._uses_q()
        var, step = ("q", 2) if in_q else ("s", 1)
        num = self._num[::step]
        den = self._den[::step]
        shift = self._shift // step
        g = math.gcd(*num)
        if num[-1] < 0 or (len(num) == 1 and num[0] < 0):
            g = -g
        num = tuple(x // g for x in num)
        sign = "-" if g < 0 else ""
        content = abs(g)
        factors = []
        if content != 1:
            factors.append(str(content))
        if shift:
            factors.append(var if shift == 1 else f"{var}^{shift}")
        if num != (1,):
            poly = _poly_str(num, var)
            factors.append(f"({poly})" if factors or sign or den != (1,) else poly)
        text = "*".join(factors) if factors else "1"
        if den != (1,):
            dpoly = _poly_str(den, var)
            text += "/" + (dpoly if len(den) == 1 else f"({dpoly})")
        return sign + text

    def __repr__(self):
        return f"QScalar('{self}')"

    @classmethod
    def parse(cls, text):
        names = {"q": Q, "s": S, "lambda": LAMBDA}

        def on_name(name):
            return names[name]

        return parse_expression(text, on_name, QScalar)


def _poly_str(coeffs, var):
    parts = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("-" if c < 0 else "+") + body)
    return "".join(parts)


ZERO = QScalar._raw((), _ONE_POLY, 0)
ONE = QScalar._raw((1,), _ONE_POLY, 0)
S = QScalar._raw((1,), _ONE_POLY, 1)
Q = QScalar._raw((1,), _ONE_POLY, 2)
LAMBDA = Q - Q.inv()


def q_int(n, base="q"):
    """The q-integer ``(b**(2n) - 1)/(b**2 - 1)`` with ``b`` = q or 1/q."""
    two_n = Fraction(n) * 2
    if two_n.denominator != 1:
        raise ValueError(f"q_int needs a half-integer, got {n}")
    t = int(two_n)
    if base in ("q", 1):
        sign = 1
    elif base in ("q^-1", "1/q", -1):
        sign = -1
    else:
        raise ValueError(f"base must be 'q' or 'q^-1', got {base!r}")
    num = QScalar.monomial(1, 2 * sign * t) - ONE
    return num / (QScalar.monomial(1, 4 * sign) - ONE)


def eval_float(a, q0):
    return QScalar(a).eval_float(q0)
