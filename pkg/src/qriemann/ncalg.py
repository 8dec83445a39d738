"""Graded *-algebras given by generators and ordered rewrite rules.

Words are tuples of ``(generator_index, exponent)`` letters.  Central
generators (constants such as ``c`` and the imaginary unit ``i``) always sit
in a sorted prefix.  An :class:`Element` is a map from normal words to
:class:`~qriemann.scalar.QScalar` coefficients and is kept in normal form.

Normal forms are computed by multiplying a normal word by one letter at a
time.  Each step either merges the letter into the last letter, applies the
rule declared for that adjacent pair, or appends it.  Results are memoized
per presentation.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field

from ._parse import parse_expression
from .scalar import LAMBDA, ONE, Q, S, ZERO, QScalar

__all__ = [
    "Generator",
    "Presentation",
    "Element",
    "QCommute",
    "Replace",
    "PowerDerivation",
    "RewriteError",
    "RewriteBudgetError",
    "normal_form",
    "mul",
    "star",
    "apply_d",
    "check_local_confluence",
    "graded_components",
]

if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)

DEFAULT_BUDGET = 10**6


class RewriteError(ValueError):
    pass


class RewriteBudgetError(RewriteError):
    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int = 0
    conjugate: str | None = None
    invertible: bool = False
    derivation: bool = False
    central: bool = False
    # value of g**2 when the generator squares to a constant (0 for one-forms)
    square: int | None = None
    # image under the involution when it is not just the conjugate letter
    star: str | None = None

    @property
    def flags(self):
        out = []
        if self.invertible:
            out.append("invertible")
        if self.derivation:
            out.append("derivation")
        if self.central:
            out.append("central")
        return out


# -- rules -------------------------------------------------------------------


@dataclass(frozen=True)
class QCommute:
    """``g^m h^n -> factor^(m n) h^n g^m``."""

    left: str
    right: str
    factor: QScalar
    kind: str = "qcommute"


@dataclass(frozen=True)
class Replace:
    """``g h -> template``; powers are peeled one letter at a time."""

    left: str
    right: str
    template: str
    kind: str = "replace"


@dataclass(frozen=True)
class PowerDerivation:
    """``D h^n -> twist^n h^n D + prefactor (base^n - 1) h^(n-1) tail``."""

    left: str
    right: str
    twist: QScalar
    base: QScalar
    prefactor: QScalar
    tail: str
    kind: str = "power_derivation"


# -- the free (unreduced) algebra used while parsing templates ---------------


class _Free:
    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = terms

    @staticmethod
    def scalar(c):
        c = QScalar(c)
        return _Free({(): c} if c else {})

    def _coerce(self, other):
        if isinstance(other, _Free):
            return other
        return _Free.scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w, ZERO) + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return _Free(out)

    __radd__ = __add__

    def __neg__(self):
        return _Free({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = _concat(w1, w2)
                v = out.get(w, ZERO) + c1 * c2
                if v:
                    out[w] = v
                else:
                    out.pop(w, None)
        return _Free(out)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __truediv__(self, other):
        if isinstance(other, _Free):
            if len(other.terms) == 1 and () in other.terms:
                other = other.terms[()]
            else:
                raise TypeError("division by a non-scalar expression")
        return _Free({w: c / other for w, c in self.terms.items()})

    def __pow__(self, n):
        if len(self.terms) == 1:
            ((w, c),) = self.terms.items()
            if len(w) == 1:
                return _Free({((w[0][0], w[0][1] * n),): c**n})
            if not w:
                return _Free({(): c**n})
        if n < 0:
            raise TypeError("negative power of a sum")
        out = _Free.scalar(1)
        for _ in range(n):
            out = out * self
        return out


def _concat(w1, w2):
    if w1 and w2 and w1[-1][0] == w2[0][0]:
        e = w1[-1][1] + w2[0][1]
        mid = ((w1[-1][0], e),) if e else ()
        return _concat(w1[:-1] + mid, w2[1:]) if not e else w1[:-1] + mid + w2[1:]
    return w1 + w2


# -- presentation ------------------------------------------------------------

_SCALAR_NAMES = {"q": Q, "s": S, "lambda": LAMBDA}


class Presentation:
    """Generators, normal order, rewrite rules and exterior-derivative data.

    ``d_frame`` lists ``(part, one_form, derivation)`` triples; when present,
    ``d`` of a degree-0 letter is computed by moving the derivation through
    it.  ``d_table`` maps a generator name to ``{part: expression}`` and is
    used otherwise (or on request).
    """

    def __init__(self, name, generators, order, rules=(), d_frame=(), d_table=None, budget=DEFAULT_BUDGET):
        self.name = name
        self.generators = list(generators)
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        central = [g.name for g in self.generators if g.central]
        if sorted(order) != sorted(n for n in names if n not in central):
            raise ValueError("order must list every non-central generator exactly once")
        self.order = list(order)
        full = central + self.order
        self.index = {n: i for i, n in enumerate(full)}
        self.gens = [None] * len(full)
        for g in self.generators:
            self.gens[self.index[g.name]] = g
        self.n_central = len(central)
        for g in self.generators:
            if g.conjugate is not None:
                partner = self.gen(g.conjugate)
                if partner.conjugate != g.name:
                    raise ValueError(f"conjugation is not an involution on {g.name}")
        self.rules = list(rules)
        self.d_frame = list(d_frame)
        self.d_table = dict(d_table or {})
        self.budget = budget
        self._rule_map = {}
        for r in self.rules:
            key = (self.index[r.left], self.index[r.right])
            if key in self._rule_map:
                raise ValueError(f"two rules for the pair {r.left} {r.right}")
            self._rule_map[key] = self._compile(r)
        self._cache = {}
        self._steps = 0
        self._star_cache = {}
        self._d_cache = {}

    # -- lookup

    def gen(self, name):
        try:
            return self.gens[self.index[name]]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def is_central(self, gi):
        return gi < self.n_central

    def word_degree(self, w):
        return sum(self.gens[g].degree * e for g, e in w)

    def has_derivation(self, w):
        return any(self.gens[g].derivation for g, _ in w)

    # -- parsing

    def free(self, text):
        """Parse ``text`` without rewriting; returns the raw term map."""
        return self._parse(text, free=True).terms

    def _parse(self, text, free):
        def on_name(name):
            if name in self.index:
                return _Free({((self.index[name], 1),): ONE})
            return _Free.scalar(_SCALAR_NAMES[name])

        value = parse_expression(text, on_name, _Free.scalar)
        if not isinstance(value, _Free):
            value = _Free.scalar(value)
        return value

    def element(self, text):
        """Parse and normalize an expression."""
        if isinstance(text, Element):
            return text
        if isinstance(text, (int, QScalar)):
            return Element.scalar(self, text)
        return self.from_terms(self.free(text))

    __call__ = element

    def from_terms(self, terms):
        out = {}
        for w, c in terms.items():
            for nw, c2 in self.normal_word(w).items():
                _acc(out, nw, c * c2)
        return Element(self, out)

    def letter(self, name, exp=1):
        return self.from_terms({((self.index[name], exp),): ONE})

    # -- rules

    def _compile(self, r):
        if isinstance(r, QCommute):
            return ("q", QScalar(r.factor))
        if isinstance(r, Replace):
            return ("r", self.free(r.template))
        if isinstance(r, PowerDerivation):
            return ("p", QScalar(r.twist), QScalar(r.base), QScalar(r.prefactor), self.free(r.tail))
        raise TypeError(f"unknown rule {r!r}")

    def rule_for(self, left, right):
        return self._rule_map.get((self.index[left], self.index[right]))

    # -- normal form core

    def normal_word(self, w):
        """Normal form of an arbitrary word as ``{normal_word: coeff}``."""
        self._steps = 0
        return self._normal_word(w)

    def _normal_word(self, w):
        cur = {(): ONE}
        for g, e in w:
            nxt = {}
            for nw, c in cur.items():
                for nw2, c2 in self._mul_letter(nw, g, e).items():
                    _acc(nxt, nw2, c * c2)
            cur = nxt
            if not cur:
                break
        return cur

    def _times_word(self, nw, w):
        """Normal form of ``nw * w`` where ``nw`` is normal."""
        cur = {nw: ONE}
        for g, e in w:
            nxt = {}
            for a, c in cur.items():
                for b, c2 in self._mul_letter(a, g, e).items():
                    _acc(nxt, b, c * c2)
            cur = nxt
            if not cur:
                break
        return cur

    def _power_letter(self, g, e):
        """``g^e`` as ``(coeff, exponent)`` after the square rule."""
        gen = self.gens[g]
        if e < 0 and not gen.invertible and gen.square is None:
            raise RewriteError(f"negative power of non-invertible generator {gen.name}")
        if gen.square is None or e in (0, 1):
            return ONE, e
        sq = QScalar(gen.square)
        k, r = divmod(e, 2)
        if not sq:
            return ZERO, 0
        return sq**k, r

    def _mul_letter(self, nw, g, e):
        if not e:
            return {nw: ONE}
        nc = 0
        while nc < len(nw) and nw[nc][0] < self.n_central:
            nc += 1
        if g < self.n_central:
            cen = list(nw[:nc])
            coeff = ONE
            for k, (h, f) in enumerate(cen):
                if h == g:
                    coeff, r = self._power_letter(g, f + e)
                    if r:
                        cen[k] = (g, r)
                    else:
                        del cen[k]
                    break
                if h > g:
                    coeff, r = self._power_letter(g, e)
                    if r:
                        cen.insert(k, (g, r))
                    break
            else:
                coeff, r = self._power_letter(g, e)
                if r:
                    cen.append((g, r))
            if not coeff:
                return {}
            return {tuple(cen) + nw[nc:]: coeff}
        if not nc:
            return self._mul_body(nw, g, e)
        cen = nw[:nc]
        return {cen + b: c for b, c in self._mul_body(nw[nc:], g, e).items()}

    def _mul_body(self, body, g, e):
        key = (body, g, e)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        result = self._mul_body_uncached(body, g, e)
        self._cache[key] = result
        return result

    def _mul_body_uncached(self, body, g, e):
        self._steps += 1
        if self._steps > self.budget:
            raise RewriteBudgetError(
                f"rewrite budget of {self.budget} steps exceeded",
                self.word_str(body) + " * " + self.word_str(((g, e),)),
            )
        if not body:
            c, r = self._power_letter(g, e)
            if not c:
                return {}
            return {((g, r),) if r else (): c}
        h, f = body[-1]
        prefix = body[:-1]
        if h == g:
            c, r = self._power_letter(g, f + e)
            if not c:
                return {}
            return {prefix + ((g, r),) if r else prefix: c}
        rule = self._rule_map.get((h, g))
        if rule is None:
            c, r = self._power_letter(g, e)
            if not c:
                return {}
            return {body + ((g, r),) if r else body: c}
        kind = rule[0]
        out = {}
        if kind == "q":
            factor = rule[1] ** (f * e)
            for w, c in self._mul_body(prefix, g, e).items():
                for w2, c2 in self._mul_letter(w, h, f).items():
                    _acc(out, w2, factor * c * c2)
            return out
        if kind == "r":
            if f < 1 or e < 1:
                raise RewriteError(
                    f"rule {self.gens[h].name} {self.gens[g].name} needs positive exponents, got {f}, {e}"
                )
            head = prefix + ((h, f - 1),) if f > 1 else prefix
            tail = ((g, e - 1),) if e > 1 else ()
            for tw, tc in rule[1].items():
                for w, c in self._times_word(head, tw + tail).items():
                    _acc(out, w, tc * c)
            return out
        # power derivation: D^f h^e with D = h here, h^e = g^e
        _, twist, base, pref, tail_terms = rule
        if f < 1:
            raise RewriteError(f"derivation {self.gens[h].name} with exponent {f}")
        head = prefix + ((h, f - 1),) if f > 1 else prefix
        for w, c in self._times_word(head, ((g, e), (h, 1))).items():
            _acc(out, w, twist**e * c)
        coeff = pref * (base**e - 1)
        if coeff:
            for tw, tc in tail_terms.items():
                for w, c in self._times_word(head, ((g, e - 1),) + tw if e != 1 else tw).items():
                    _acc(out, w, coeff * tc * c)
        return out

    # -- printing

    def word_str(self, w):
        return "*".join(
            self.gens[g].name if e == 1 else f"{self.gens[g].name}^{e}" for g, e in w
        )

    def word_key(self, w):
        nc = 0
        while nc < len(w) and w[nc][0] < self.n_central:
            nc += 1
        return (w[nc:], w[:nc])

    def clear_cache(self):
        self._cache.clear()
        self._star_cache.clear()
        self._d_cache.clear()


def _acc(d, w, c):
    if not c:
        return
    v = d.get(w)
    if v is None:
        d[w] = c
    else:
        v = v + c
        if v:
            d[w] = v
        else:
            del d[w]


# -- elements ----------------------------------------------------------------


class Element:
    """A normal-ordered linear combination of words over QScalar."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres, terms):
        self.pres = pres
        self.terms = terms

    @classmethod
    def scalar(cls, pres, c):
        c = QScalar(c)
        return cls(pres, {(): c} if c else {})

    def _coerce(self, other):
        if isinstance(other, Element):
            if other.pres is not self.pres:
                raise ValueError("elements of different presentations")
            return other
        if isinstance(other, (int, QScalar)):
            return Element.scalar(self.pres, other)
        if isinstance(other, str):
            return self.pres.element(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            _acc(out, w, c)
        return Element(self.pres, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.pres, {w: -c for w, c in self.terms.items()})

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
        if isinstance(other, (int, QScalar)):
            c = QScalar(other)
            if not c:
                return Element(self.pres, {})
            return Element(self.pres, {w: v * c for w, v in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, QScalar)):
            return self * other
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return mul(other, self)

    def __truediv__(self, other):
        if isinstance(other, (int, QScalar)):
            return self * QScalar(other).inv()
        return NotImplemented

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = Element.scalar(self.pres, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self):
        """Inverse of a monomial in invertible letters."""
        if len(self.terms) != 1:
            raise RewriteError(f"cannot invert {self}")
        ((w, c),) = self.terms.items()
        p = self.pres
        inv_w = tuple((g, -e) for g, e in reversed(w))
        for g, e in inv_w:
            gen = p.gens[g]
            if not gen.invertible and gen.square in (None, 0):
                raise RewriteError(f"{gen.name} is not invertible")
        return Element(p, p.normal_word(inv_w)) * c.inv()

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, Element) else other
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, word=()):
        if isinstance(word, str):
            (word,) = self.pres.free(word).keys() or [()]
        return self.terms.get(word, ZERO)

    def scalar_value(self):
        """The QScalar if the element is a plain scalar, else ``None``."""
        if not self.terms:
            return ZERO
        if len(self.terms) == 1 and () in self.terms:
            return self.terms[()]
        return None

    def degree(self):
        degs = {self.pres.word_degree(w) for w in self.terms}
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous element {self}")
        return degs.pop() if degs else 0

    def sorted_terms(self):
        key = self.pres.word_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        p = self.pres
        pieces = []
        for w, c in self.sorted_terms():
            nc = 0
            while nc < len(w) and w[nc][0] < p.n_central:
                nc += 1
            cstr = str(c)
            neg = cstr.startswith("-") and not _top_level_sum(cstr)
            if neg:
                cstr = cstr[1:]
            factors = []
            if nc:
                # integer content reads before the central letters: 3*c*(...)
                lead, star_, rest = cstr.partition("*")
                if lead.isdigit() and lead != "1" and (star_ or not rest):
                    factors.append(lead)
                    cstr = rest or "1"
                factors.append(p.word_str(w[:nc]))
            if cstr != "1" or len(w) == 0:
                if len(w) and _top_level_sum(cstr):
                    cstr = f"({cstr})"
                factors.append(cstr)
            if len(w) > nc:
                factors.append(p.word_str(w[nc:]))
            body = "*".join(factors)
            if not pieces:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append((" - " if neg else " + ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"Element({self.pres.name}: {self})"

    def star(self):
        return star(self)

    def d(self, part=None):
        return apply_d(self, part=part)


def _top_level_sum(text):
    depth = 0
    for k, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and k and text[k - 1] != "^":
            return True
    return False


# -- operations --------------------------------------------------------------


def normal_form(e, p=None):
    """Normal form of an element, a raw term map, or an expression string."""
    if isinstance(e, Element):
        p = e.pres
        return p.from_terms(e.terms)
    if isinstance(e, str):
        return p.element(e)
    return p.from_terms(e)


def mul(a, b, p=None):
    p = a.pres
    out = {}
    p._steps = 0
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            for w, c in p._times_word(w1, w2).items():
                _acc(out, w, c1 * c2 * c)
    return Element(p, out)


def _star_letter(p, g):
    hit = p._star_cache.get(g)
    if hit is None:
        gen = p.gens[g]
        if gen.star is not None:
            hit = p.element(gen.star)
        elif gen.conjugate is not None:
            hit = p.letter(gen.conjugate)
        else:
            hit = p.letter(gen.name)
        p._star_cache[g] = hit
    return hit


def star(e, p=None):
    """Antilinear, order-reversing involution (q real, so coefficients fixed)."""
    p = e.pres
    out = Element(p, {})
    for w, c in e.terms.items():
        acc = Element.scalar(p, c)
        for g, k in w:
            img = _star_letter(p, g)
            acc = (img**k) * acc
        out = out + acc
    return out


def _table_value(p, entry, part):
    if not entry:
        return Element(p, {})
    if part is None:
        out = Element(p, {})
        for text in entry.values():
            out = out + p.element(text)
        return out
    text = entry.get(part)
    return p.element(text) if text else Element(p, {})


def _d_by_derivations(p, g, part, exp=1):
    out = {}
    for fpart, form, der in p.d_frame:
        if part is not None and fpart != part:
            continue
        start = ((p.index[form], 1), (p.index[der], 1))
        p._steps = 0
        for w, c in p._times_word(start, ((g, exp),)).items():
            ders = [i for i, (h, _) in enumerate(w) if p.gens[h].derivation]
            if not ders:
                _acc(out, w, c)
            elif ders[0] != len(w) - 1 or len(ders) > 1:
                bad = w[ders[0] + 1][0] if ders[0] + 1 < len(w) else w[ders[0]][0]
                raise RewriteError(
                    f"derivation {p.gens[w[ders[0]][0]].name} has no rule past {p.gens[bad].name}"
                )
    return Element(p, out)


def apply_d(e, p=None, part=None, method=None):
    """Exterior derivative (``part`` selects a graded piece, e.g. 'hol').

    ``method`` forces 'table' or 'derivation'; by default derivations are
    used for degree-0 letters whenever the presentation declares a frame.
    """
    p = e.pres
    use_table = method == "table" or not p.d_frame
    out = Element(p, {})
    for w, c in e.terms.items():
        sign = 1
        for k, (g, x) in enumerate(w):
            gen = p.gens[g]
            if gen.central:
                continue
            if gen.derivation:
                raise RewriteError(f"d applied to derivation symbol {gen.name}")
            if gen.degree == 0 and not use_table:
                dg = _d_by_derivations(p, g, part, x)
            else:
                dg = _d_power(p, g, x, part)
            if dg:
                left = Element(p, {w[:k]: c if sign > 0 else -c})
                right = Element(p, {w[k + 1 :]: ONE})
                out = out + left * dg * right
            if gen.degree * x % 2:
                sign = -sign
    return out


def _d_power(p, g, x, part):
    gen = p.gens[g]
    if gen.degree and gen.square is None:
        # only exponent one can survive for one-forms
        if x != 1:
            raise RewriteError(f"unexpected power {gen.name}^{x}")
    if gen.degree == 0 and gen.name not in p.d_table and not gen.central:
        raise RewriteError(f"no differential declared for {gen.name}")
    d1 = _d_letter_table(p, g, part)
    if x == 1:
        return d1
    if x > 0:
        base = p.letter(gen.name)
        out = Element(p, {})
        for k in range(x):
            out = out + (base**k) * d1 * (base ** (x - 1 - k))
        return out
    inv = p.letter(gen.name, -1)
    dinv = -(inv * d1 * inv)
    n = -x
    out = Element(p, {})
    for k in range(n):
        out = out + (inv**k) * dinv * (inv ** (n - 1 - k))
    return out


def _d_letter_table(p, g, part):
    key = ("t", g, part)
    hit = p._d_cache.get(key)
    if hit is None:
        gen = p.gens[g]
        if gen.central:
            hit = Element(p, {})
        else:
            hit = _table_value(p, p.d_table.get(gen.name), part)
        p._d_cache[key] = hit
    return hit


def graded_components(e):
    out = {}
    for w, c in e.terms.items():
        out.setdefault(e.pres.word_degree(w), {})[w] = c
    return {k: Element(e.pres, v) for k, v in sorted(out.items())}


# -- confluence --------------------------------------------------------------


@dataclass
class ConfluenceReport:
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def check_local_confluence(p, max_word_len=4, exponents=None):
    """Compare every bracketing of every short word; report disagreements.

    Each split ``NF(u) * NF(v)`` of a word ``uv`` resolves the overlaps of
    the rules in a different order, so agreement on all words up to the
    length bound is the critical-pair (diamond) condition.
    """
    if max_word_len < 3:
        raise ValueError("max_word_len must be at least 3")
    letters = []
    for name in p.order:
        gen = p.gen(name)
        exps = exponents or ((1, -1, 2, -2) if gen.invertible else (1, 2) if gen.square is None and not gen.degree else (1,))
        letters.extend((p.index[name], x) for x in exps)
    short = [(p.index[n], 1) for n in p.order]
    report = ConfluenceReport()
    for length in range(3, max_word_len + 1):
        pool = letters if length == 3 else short
        for w in itertools.product(pool, repeat=length):
            if any(w[i][0] == w[i + 1][0] for i in range(length - 1)):
                continue
            report.checked += 1
            ref = None
            for k in range(1, length):
                try:
                    u = Element(p, p.normal_word(w[:k]))
                    v = Element(p, p.normal_word(w[k:]))
                    val = mul(u, v)
                except RewriteError as exc:
                    report.violations.append((p.word_str(w), k, f"error: {exc}"))
                    break
                if ref is None:
                    ref = val
                elif val != ref:
                    report.violations.append((p.word_str(w), k, str(val - ref)))
                    break
    return report
