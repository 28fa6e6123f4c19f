"""Exact arithmetic in Z[q, q^-1] and its fraction field Q(q).

Two value types live here. ``LaurentPoly`` is an integer Laurent polynomial,
``RatFunc`` a reduced quotient of two of them. Both are immutable and hashable.
Polynomial work (products, gcds, exact division) is delegated to FLINT's
``fmpz_poly`` through python-flint; this module only keeps track of the
power of q that has been factored out and of the canonical form.

A ``RatFunc`` is stored as ``q^sh * num / den`` where

* ``num`` and ``den`` are ordinary polynomials in q with nonzero constant
  term (or ``num == 0``, in which case ``sh == 0`` and ``den == 1``),
* ``gcd(num, den) == 1`` over Z[q], which also makes the pair jointly
  primitive,
* ``den`` has a positive leading coefficient.

Equal values therefore have identical stored data, and equality is a
comparison of three fields.
"""

from __future__ import annotations

import re
from fractions import Fraction

from flint import fmpz_poly

__all__ = [
    "LaurentPoly",
    "RatFunc",
    "QDivisionByZero",
    "PoleAtOne",
    "qint",
    "arith",
    "eval_at_one",
    "q",
    "ZERO",
    "ONE",
    "as_ratfunc",
    "parse_ratfunc",
    "parse_laurent",
]


class QDivisionByZero(ZeroDivisionError):
    """Division of a rational function by zero."""


class PoleAtOne(ArithmeticError):
    """A rational function cannot be specialised at q = 1."""


_P0 = fmpz_poly([])
_P1 = fmpz_poly([1])


def _valuation(p):
    # exponent of the lowest nonzero coefficient; p must be nonzero
    k = 0
    while p[k] == 0:
        k += 1
    return k


def _strip(p):
    """Split a nonzero polynomial as q^k * p' with p'(0) != 0."""
    if p[0] != 0:
        return 0, p
    k = _valuation(p)
    return k, p.right_shift(k)


# ---------------------------------------------------------------------------
# rendering and parsing


def _render(sh, p):
    """Render q^sh * p with terms in decreasing exponent."""
    coeffs = p.coeffs()
    out = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = int(coeffs[i])
        if c == 0:
            continue
        e = sh + i
        neg = c < 0
        a = -c if neg else c
        if e == 0:
            body = str(a)
        else:
            mono = "q" if e == 1 else "q^%d" % e
            body = mono if a == 1 else "%d*%s" % (a, mono)
        if not out:
            out.append("-" + body if neg else body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out) if out else "0"


_TERM = re.compile(r"([+-]?)(\d*)(\*?q(?:\^(-?\d+))?)?")


def _parse_terms(text):
    """Parse a Laurent polynomial string into an exponent -> int dict."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    out = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError("cannot parse %r at offset %d" % (text, pos))
        sign, digits, mono, exp = m.groups()
        if pos > 0 and not sign:
            raise ValueError("missing operator in %r at offset %d" % (text, pos))
        if not digits and not mono:
            raise ValueError("dangling sign in %r" % text)
        if mono and mono.startswith("*") and not digits:
            raise ValueError("stray '*' in %r" % text)
        if digits and mono and not mono.startswith("*"):
            raise ValueError("expected '*' between coefficient and q in %r" % text)
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        e = 0 if not mono else (int(exp) if exp is not None else 1)
        out[e] = out.get(e, 0) + c
        pos = m.end()
    return {e: c for e, c in out.items() if c}


def _poly_from_dict(d):
    """Return (sh, poly) for an exponent -> coefficient dict."""
    d = {e: c for e, c in d.items() if c}
    if not d:
        return 0, _P0
    lo = min(d)
    hi = max(d)
    coeffs = [0] * (hi - lo + 1)
    for e, c in d.items():
        coeffs[e - lo] = c
    return lo, fmpz_poly(coeffs)


# ---------------------------------------------------------------------------
# Laurent polynomials


class LaurentPoly:
    """An element of Z[q, q^-1], stored as q^shift times a polynomial.

    The polynomial part has nonzero constant term unless the value is zero.
    Construct from a dict ``{exponent: coefficient}``, an int, or via
    ``LaurentPoly.q_power``.
    """

    __slots__ = ("_sh", "_p", "_hash")

    def __init__(self, coeffs=None):
        if coeffs is None:
            coeffs = {}
        elif isinstance(coeffs, int):
            coeffs = {0: coeffs}
        sh, p = _poly_from_dict(coeffs)
        self._sh = sh
        self._p = p
        self._hash = None

    @classmethod
    def _raw(cls, sh, p):
        obj = cls.__new__(cls)
        if p.is_zero():
            obj._sh, obj._p = 0, _P0
        else:
            k, p = _strip(p)
            obj._sh, obj._p = sh + k, p
        obj._hash = None
        return obj

    @classmethod
    def q_power(cls, k, c=1):
        return cls._raw(k, fmpz_poly([c]))

    @property
    def coeffs(self):
        """Mapping exponent -> nonzero integer coefficient."""
        return {self._sh + i: int(c) for i, c in enumerate(self._p.coeffs()) if c != 0}

    def is_zero(self):
        return self._p.is_zero()

    def degree_range(self):
        """(lowest, highest) exponent; None for zero."""
        if self._p.is_zero():
            return None
        return self._sh, self._sh + self._p.degree()

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self, other
        if a._sh > b._sh:
            a, b = b, a
        return LaurentPoly._raw(a._sh, a._p + b._p.left_shift(b._sh - a._sh))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self._sh, -self._p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return LaurentPoly._raw(self._sh + other._sh, self._p * other._p)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power of a Laurent polynomial; use RatFunc")
        out = LaurentPoly(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(other)
        if isinstance(other, RatFunc):
            return RatFunc.from_laurent(self) == other
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._sh == other._sh and self._p == other._p

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(RatFunc.from_laurent(self))
        return self._hash

    def __call__(self, x):
        """Evaluate at a rational number x (nonzero if negative exponents occur)."""
        x = Fraction(x)
        return sum((Fraction(c) * x**e for e, c in self.coeffs.items()), Fraction(0))

    def __str__(self):
        return _render(self._sh, self._p)

    def __repr__(self):
        return "LaurentPoly(%s)" % self


# ---------------------------------------------------------------------------
# rational functions


class RatFunc:
    """An element of Q(q) in canonical reduced form.

    Accepts ints, Fractions and Laurent polynomials wherever a scalar is
    expected. Use ``RatFunc.parse`` to read the rendered text form back.
    """

    __slots__ = ("_sh", "_n", "_d", "_hash")

    def __init__(self, value=0):
        r = as_ratfunc(value)
        self._sh, self._n, self._d, self._hash = r._sh, r._n, r._d, None

    @classmethod
    def _raw(cls, sh, n, d):
        # caller guarantees canonical form
        obj = cls.__new__(cls)
        obj._sh = sh
        obj._n = n
        obj._d = d
        obj._hash = None
        return obj

    @classmethod
    def _make(cls, sh, n, d):
        """Canonicalize q^sh * n / d for arbitrary polynomials n, d (d != 0)."""
        if n.is_zero():
            return ZERO
        if d.is_zero():
            raise QDivisionByZero("zero denominator")
        k, n = _strip(n)
        sh += k
        k, d = _strip(d)
        sh -= k
        if not d.is_one():
            g = n.gcd(d)
            if not g.is_one():
                n = n // g
                d = d // g
            if d.leading_coefficient() < 0:
                n = -n
                d = -d
        return cls._raw(sh, n, d)

    @classmethod
    def from_laurent(cls, p):
        if p.is_zero():
            return ZERO
        return cls._raw(p._sh, p._p, _P1)

    @classmethod
    def from_fraction(cls, x):
        x = Fraction(x)
        return cls._make(0, fmpz_poly([x.numerator]), fmpz_poly([x.denominator]))

    @classmethod
    def q_power(cls, k, c=1):
        if c == 0:
            return ZERO
        return cls._raw(k, fmpz_poly([c]), _P1)

    @classmethod
    def parse(cls, text):
        return parse_ratfunc(text)

    # -- accessors ---------------------------------------------------------

    @property
    def num(self):
        return LaurentPoly._raw(self._sh, self._n)

    @property
    def den(self):
        return LaurentPoly._raw(0, self._d)

    def is_zero(self):
        return self._n.is_zero()

    def is_laurent(self):
        return self._d.is_one()

    def to_laurent(self):
        if not self._d.is_one():
            raise ValueError("%s is not a Laurent polynomial" % self)
        return LaurentPoly._raw(self._sh, self._n)

    def normalize(self):
        return RatFunc._make(self._sh, self._n, self._d)

    def bar(self):
        """The image under q -> q^-1."""
        if self.is_zero():
            return ZERO
        n = fmpz_poly(list(reversed(self._n.coeffs())))
        d = fmpz_poly(list(reversed(self._d.coeffs())))
        return RatFunc._make(-self._sh - self._n.degree() + self._d.degree(), n, d)

    def canonical_data(self):
        """(shift, numerator coefficients, denominator coefficients) as ints."""
        return (
            self._sh,
            tuple(int(c) for c in self._n.coeffs()),
            tuple(int(c) for c in self._d.coeffs()),
        )

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if type(other) is not RatFunc:
            other = _coerce(other)
            if other is NotImplemented:
                return NotImplemented
        if self._n.is_zero():
            return other
        if other._n.is_zero():
            return self
        a, b = self, other
        if a._sh > b._sh:
            a, b = b, a
        bn = b._n.left_shift(b._sh - a._sh) if b._sh != a._sh else b._n
        if a._d == b._d:
            n = a._n + bn
            if n.is_zero():
                return ZERO
            if a._d.is_one():
                k, n = _strip(n)
                return RatFunc._raw(a._sh + k, n, _P1)
            return RatFunc._make(a._sh, n, a._d)
        return RatFunc._make(a._sh, a._n * b._d + bn * a._d, a._d * b._d)

    __radd__ = __add__

    def __neg__(self):
        if self._n.is_zero():
            return self
        return RatFunc._raw(self._sh, -self._n, self._d)

    def __sub__(self, other):
        if type(other) is not RatFunc:
            other = _coerce(other)
            if other is NotImplemented:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if type(other) is not RatFunc:
            if type(other) is int:
                if other == 0 or self._n.is_zero():
                    return ZERO
                if self._d.is_one():
                    return RatFunc._raw(self._sh, self._n * other, _P1)
            other = _coerce(other)
            if other is NotImplemented:
                return NotImplemented
        if self._n.is_zero() or other._n.is_zero():
            return ZERO
        sh = self._sh + other._sh
        d1, d2 = self._d, other._d
        if d1.is_one() and d2.is_one():
            return RatFunc._raw(sh, self._n * other._n, _P1)
        n1, n2 = self._n, other._n
        if not d2.is_one():
            g = n1.gcd(d2)
            if not g.is_one():
                n1 = n1 // g
                d2 = d2 // g
        if not d1.is_one():
            g = n2.gcd(d1)
            if not g.is_one():
                n2 = n2 // g
                d1 = d1 // g
        n = n1 * n2
        d = d1 * d2
        if d.leading_coefficient() < 0:
            n = -n
            d = -d
        return RatFunc._raw(sh, n, d)

    __rmul__ = __mul__

    def inverse(self):
        if self._n.is_zero():
            raise QDivisionByZero("inverse of zero")
        n, d = self._d, self._n
        if d.leading_coefficient() < 0:
            n = -n
            d = -d
        return RatFunc._raw(-self._sh, n, d)

    def __truediv__(self, other):
        if type(other) is not RatFunc:
            other = _coerce(other)
            if other is NotImplemented:
                return NotImplemented
        if other._n.is_zero():
            raise QDivisionByZero("division by zero in Q(q)")
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if self._d.is_one() and self._n.degree() == 0:
            # monomial fast path
            return RatFunc._raw(self._sh * k, self._n**k, _P1)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison, hashing, output ---------------------------------------

    def __eq__(self, other):
        if type(other) is not RatFunc:
            other = _coerce(other)
            if other is NotImplemented:
                return NotImplemented
        return self._sh == other._sh and self._n == other._n and self._d == other._d

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash(self.canonical_data())
        return h

    def __bool__(self):
        return not self._n.is_zero()

    def __call__(self, x):
        """Evaluate at a rational number x; raises on a pole."""
        x = Fraction(x)
        d = _eval_poly(self._d, x)
        if d == 0:
            raise QDivisionByZero("pole at q = %s" % x)
        return _eval_poly(self._n, x) * x**self._sh / d

    def __str__(self):
        num = _render(self._sh, self._n)
        if self._d.is_one():
            return num
        return "(%s)/(%s)" % (num, _render(0, self._d))

    def __repr__(self):
        return "RatFunc(%s)" % self

    def __reduce__(self):
        return (parse_ratfunc, (str(self),))


def _eval_poly(p, x):
    acc = Fraction(0)
    for c in reversed(p.coeffs()):
        acc = acc * x + int(c)
    return acc


def _coerce(x):
    if type(x) is RatFunc:
        return x
    if isinstance(x, int):
        if x == 0:
            return ZERO
        return RatFunc._raw(0, fmpz_poly([x]), _P1)
    if isinstance(x, LaurentPoly):
        return RatFunc.from_laurent(x)
    if isinstance(x, Fraction):
        return RatFunc.from_fraction(x)
    return NotImplemented


def as_ratfunc(x):
    """Coerce an int, Fraction, LaurentPoly or RatFunc to a RatFunc."""
    r = _coerce(x)
    if r is NotImplemented:
        raise TypeError("cannot interpret %r as an element of Q(q)" % (x,))
    return r


ZERO = RatFunc._raw(0, _P0, _P1)
ONE = RatFunc._raw(0, _P1, _P1)
q = RatFunc._raw(1, _P1, _P1)


def parse_laurent(text):
    """Parse text such as ``"q^2 - 3*q + 1 + q^-4"`` into a LaurentPoly."""
    return LaurentPoly(_parse_terms(text))


def parse_ratfunc(text):
    """Parse the rendering produced by ``str(RatFunc)``."""
    s = text.strip()
    m = re.fullmatch(r"\(([^()]*)\)\s*/\s*\(([^()]*)\)", s)
    if m:
        num = parse_laurent(m.group(1))
        den = parse_laurent(m.group(2))
        if den.is_zero():
            raise QDivisionByZero("zero denominator in %r" % text)
        return RatFunc.from_laurent(num) / RatFunc.from_laurent(den)
    return RatFunc.from_laurent(parse_laurent(s))


def qint(n):
    """The quantum integer [n]_q = q^(n-1) + q^(n-3) + ... + q^(1-n)."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("qint needs a positive integer, got %r" % (n,))
    return LaurentPoly({n - 1 - 2 * k: 1 for k in range(n)})


_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}


def arith(a, b, op):
    """Apply one of add, sub, mul, div to two scalars, returning a RatFunc."""
    try:
        f = _OPS[op]
    except KeyError:
        raise ValueError("unknown operation %r" % (op,)) from None
    return f(as_ratfunc(a), as_ratfunc(b))


def eval_at_one(a):
    """Specialise a (reduced) rational function at q = 1.

    Canonical form already has every common factor, in particular every
    shared power of (q - 1), cancelled, so a vanishing denominator means a
    genuine pole.
    """
    a = as_ratfunc(a)
    n = int(a._n(1))
    d = int(a._d(1))
    if d == 0:
        raise PoleAtOne("%s has a pole at q = 1" % a)
    return Fraction(n, d)
