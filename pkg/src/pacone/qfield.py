"""Exact arithmetic in a real quadratic field Q(sqrt d).

Elements are stored canonically as ``(p + q*sqrt(d)) / den`` with integer
``p, q``, positive ``den`` and ``gcd(p, q, den) == 1``.  A :class:`QuadField`
object is the shared context carrying ``d``; combining elements of two
different fields raises :class:`FieldMismatchError`.

Plain ``int`` and :class:`fractions.Fraction` operands are accepted and
coerced into the field of the other operand.

A small truncated Laurent series type, :class:`Series`, with ``QuadNum``
coefficients is provided for the rescaling limits used elsewhere.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering
from numbers import Rational

__all__ = [
    "QuadField",
    "QuadNum",
    "Series",
    "FieldMismatchError",
    "PoleError",
    "is_squarefree",
]


class FieldMismatchError(ValueError):
    pass


class PoleError(ArithmeticError):
    """Raised when a series expected to have a finite limit at 0 has a pole."""


def is_squarefree(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


class QuadField:
    """The field Q(sqrt d) for a squarefree integer d >= 2."""

    _cache: dict[int, "QuadField"] = {}

    def __new__(cls, d: int):
        d = int(d)
        if d in cls._cache:
            return cls._cache[d]
        if not is_squarefree(d):
            raise ValueError(f"d must be a squarefree integer >= 2, got {d}")
        self = super().__new__(cls)
        self.d = d
        cls._cache[d] = self
        return self

    def __reduce__(self):
        return (QuadField, (self.d,))

    def __repr__(self):
        return f"QuadField({self.d})"

    def __call__(self, p=0, q=0, den=1) -> "QuadNum":
        if isinstance(p, QuadNum):
            if p.field is not self:
                raise FieldMismatchError(f"cannot coerce {p!r} into {self!r}")
            return p
        if isinstance(p, str):
            return self.parse(p)
        if isinstance(p, Fraction) or isinstance(q, Fraction):
            p, q = Fraction(p), Fraction(q)
            common = p.denominator * q.denominator // math.gcd(p.denominator, q.denominator)
            return QuadNum(
                self,
                p.numerator * (common // p.denominator),
                q.numerator * (common // q.denominator),
                common * int(den),
            )
        return QuadNum(self, int(p), int(q), int(den))

    @property
    def zero(self) -> "QuadNum":
        return QuadNum(self, 0, 0, 1)

    @property
    def one(self) -> "QuadNum":
        return QuadNum(self, 1, 0, 1)

    @property
    def sqrt(self) -> "QuadNum":
        return QuadNum(self, 0, 1, 1)

    _literal = re.compile(
        r"""^\s*(?:
            \(\s*(?P<p>[+-]?\d+)\s*(?P<qs>[+-])\s*(?P<q>\d+)\s*\*\s*r\s*\)\s*(?:/\s*(?P<den>\d+))?
          | (?P<rq>[+-]?\d*)\s*\*?\s*r\s*(?:/\s*(?P<rden>\d+))?
          | (?P<int>[+-]?\d+)\s*(?:/\s*(?P<iden>\d+))?
        )\s*$""",
        re.VERBOSE,
    )

    def parse(self, text: str) -> "QuadNum":
        """Parse a literal such as ``"(-3+1*r)/2"``, ``"7"``, ``"5/3"`` or ``"-4*r"``."""
        m = self._literal.match(text)
        if not m:
            raise ValueError(f"malformed QuadNum literal: {text!r}")
        if m.group("p") is not None:
            q = int(m.group("q"))
            if m.group("qs") == "-":
                q = -q
            den = int(m.group("den") or 1)
            return self(int(m.group("p")), q, den)
        if m.group("int") is not None:
            return self(int(m.group("int")), 0, int(m.group("iden") or 1))
        rq = m.group("rq")
        q = {"": 1, "+": 1, "-": -1}.get(rq)
        if q is None:
            q = int(rq)
        return self(0, q, int(m.group("rden") or 1))


@total_ordering
class QuadNum:
    """An element (p + q*sqrt(d))/den of a real quadratic field.  Immutable."""

    __slots__ = ("field", "p", "q", "den")

    def __init__(self, field: QuadField, p: int, q: int, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            p, q, den = -p, -q, -den
        g = math.gcd(p, q, den)
        if g > 1:
            p, q, den = p // g, q // g, den // g
        _set_field(self, field)
        _set_p(self, p)
        _set_q(self, q)
        _set_den(self, den)

    def __setattr__(self, name, value):
        raise AttributeError("QuadNum is immutable")

    def __reduce__(self):
        return (QuadNum, (self.field, self.p, self.q, self.den))

    @property
    def d(self) -> int:
        return self.field.d

    def _coerce(self, other) -> "QuadNum | None":
        if isinstance(other, QuadNum):
            if other.field is not self.field:
                raise FieldMismatchError(
                    f"mixing Q(sqrt {self.field.d}) and Q(sqrt {other.field.d})"
                )
            return other
        if isinstance(other, int):
            return QuadNum(self.field, other, 0, 1)
        if isinstance(other, Rational):
            return QuadNum(self.field, other.numerator, 0, other.denominator)
        return None

    # arithmetic
    def __add__(self, other):
        if type(other) is QuadNum and other.field is self.field:
            o = other
        else:
            o = self._coerce(other)
            if o is None:
                return NotImplemented
        if not (o.p or o.q):
            return self
        if not (self.p or self.q):
            return o
        if self.den == o.den:
            return _new(self.field, self.p + o.p, self.q + o.q, self.den)
        return _new(self.field, self.p * o.den + o.p * self.den, self.q * o.den + o.q * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return _new(self.field, -self.p, -self.q, self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if type(other) is QuadNum and other.field is self.field:
            o = other
        else:
            o = self._coerce(other)
            if o is None:
                return NotImplemented
        sp, sq, op, oq = self.p, self.q, o.p, o.q
        if not (sp or sq):
            return self
        if not (op or oq):
            return o
        # multiplying by 1 is common in triangular products
        if not oq and op == o.den:
            return self
        if not sq and sp == self.den:
            return o
        if not sq and not oq:
            return _new(self.field, sp * op, 0, self.den * o.den)
        return _new(self.field, sp * op + self.field.d * sq * oq, sp * oq + sq * op, self.den * o.den)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadNum":
        """Galois conjugate, sqrt d -> -sqrt d."""
        return QuadNum(self.field, self.p, -self.q, self.den)

    def norm(self) -> Fraction:
        return Fraction(self.p * self.p - self.field.d * self.q * self.q, self.den * self.den)

    def trace(self) -> Fraction:
        return Fraction(2 * self.p, self.den)

    def inverse(self) -> "QuadNum":
        if not self:
            raise ZeroDivisionError("division by zero in QuadNum")
        # 1/x = conj(x) / N(x); N(x) = (p^2 - d q^2)/den^2
        n = self.p * self.p - self.field.d * self.q * self.q
        return QuadNum(self.field, self.p * self.den, -self.q * self.den, n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparisons
    def __bool__(self):
        return self.p != 0 or self.q != 0

    def __eq__(self, other):
        if isinstance(other, QuadNum) and other.field is not self.field:
            return False
        try:
            o = self._coerce(other)
        except FieldMismatchError:
            return False
        if o is None:
            return NotImplemented
        return self.p == o.p and self.q == o.q and self.den == o.den

    def __hash__(self):
        if self.q == 0:
            return hash(Fraction(self.p, self.den))
        return hash((self.field.d, self.p, self.q, self.den))

    def sign(self) -> int:
        """Exact sign of the real embedding with sqrt d > 0."""
        p, q = self.p, self.q
        if q == 0:
            return (p > 0) - (p < 0)
        if p == 0:
            return 1 if q > 0 else -1
        if p > 0 and q > 0:
            return 1
        if p < 0 and q < 0:
            return -1
        # opposite signs: compare p^2 with d q^2
        lhs, rhs = p * p, self.field.d * q * q
        if lhs == rhs:
            return 0  # unreachable for squarefree d >= 2
        return (1 if p > 0 else -1) if lhs > rhs else (1 if q > 0 else -1)

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __float__(self):
        return (self.p + self.q * math.sqrt(self.field.d)) / self.den

    def is_rational(self) -> bool:
        return self.q == 0

    def as_fraction(self) -> Fraction:
        if self.q:
            raise ValueError(f"{self} is irrational")
        return Fraction(self.p, self.den)

    def literal(self) -> str:
        """Canonical text form: ``"(p+q*r)/den"``, ``"p/den"``, ``"q*r"`` or ``"p"``."""
        p, q, den = self.p, self.q, self.den
        if q == 0:
            return f"{p}" if den == 1 else f"{p}/{den}"
        if p == 0:
            body = f"{q}*r"
            return body if den == 1 else f"{body}/{den}"
        body = f"({p}{'+' if q > 0 else '-'}{abs(q)}*r)"
        return body if den == 1 else f"{body}/{den}"

    __str__ = literal

    def __repr__(self):
        return f"QuadNum({self.literal()!r}, d={self.field.d})"


_set_field = QuadNum.field.__set__
_set_p = QuadNum.p.__set__
_set_q = QuadNum.q.__set__
_set_den = QuadNum.den.__set__


def _new(field: QuadField, p: int, q: int, den: int) -> QuadNum:
    """Fast constructor for a positive denominator."""
    g = math.gcd(p, q, den)
    if g != 1:
        p, q, den = p // g, q // g, den // g
    obj = object.__new__(QuadNum)
    _set_field(obj, field)
    _set_p(obj, p)
    _set_q(obj, q)
    _set_den(obj, den)
    return obj


class Series:
    """Truncated Laurent series sum c_k s^k, k in [lo, hi], coefficients in a QuadField.

    Terms above ``hi`` are discarded by every operation; a product's window is
    ``[a.lo + b.lo, min(a.hi, b.hi)]`` intersected with what can be known
    exactly, i.e. ``hi = min(a.hi + b.lo, b.hi + a.lo)``.
    """

    __slots__ = ("field", "coeffs", "lo", "hi")

    def __init__(self, field: QuadField, coeffs: dict[int, QuadNum] | None = None, lo: int = 0, hi: int = 2):
        if lo > hi:
            raise ValueError("empty window")
        clean = {}
        for k, c in (coeffs or {}).items():
            if k < lo:
                raise ValueError(f"exponent {k} below window start {lo}")
            if k > hi:
                continue
            c = field(c)
            if c:
                clean[k] = c
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("Series is immutable")

    @classmethod
    def const(cls, field: QuadField, c, lo: int = 0, hi: int = 2) -> "Series":
        return cls(field, {0: field(c)} if lo <= 0 else {}, lo=min(lo, 0), hi=hi)

    @classmethod
    def monomial(cls, field: QuadField, c, k: int, hi: int = 2) -> "Series":
        return cls(field, {k: field(c)}, lo=min(k, 0), hi=hi)

    def __getitem__(self, k: int) -> QuadNum:
        return self.coeffs.get(k, self.field.zero)

    def _lift(self, other) -> "Series | None":
        if isinstance(other, Series):
            if other.field is not self.field:
                raise FieldMismatchError("series over different fields")
            return other
        if isinstance(other, (int, Rational, QuadNum)):
            return Series(self.field, {0: self.field(other)}, lo=min(0, self.lo), hi=self.hi)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        lo, hi = min(self.lo, o.lo), min(self.hi, o.hi)
        out = dict(self.coeffs)
        for k, c in o.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return Series(self.field, out, lo, hi)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.field, {k: -c for k, c in self.coeffs.items()}, self.lo, self.hi)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        lo = self.lo + o.lo
        hi = min(self.hi + o.lo, o.hi + self.lo)
        out: dict[int, QuadNum] = {}
        for i, a in self.coeffs.items():
            for j, b in o.coeffs.items():
                k = i + j
                if k > hi:
                    continue
                out[k] = out[k] + a * b if k in out else a * b
        return Series(self.field, out, lo, max(hi, lo))

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, Series) else other
        if o is None:
            return NotImplemented
        hi = min(self.hi, o.hi)
        keys = {k for k in set(self.coeffs) | set(o.coeffs) if k <= hi}
        return all(self[k] == o[k] for k in keys)

    __hash__ = None

    def limit0(self) -> QuadNum:
        """Value at s = 0; raises :class:`PoleError` if a negative power survives."""
        poles = sorted(k for k in self.coeffs if k < 0)
        if poles:
            raise PoleError(f"pole at 0: coefficient of s^{poles[0]} is {self.coeffs[poles[0]]}")
        if self.hi < 0:
            raise PoleError("truncation window too narrow to read the constant term")
        return self[0]

    def literal(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(
            f"{c.literal()}" if k == 0 else f"{c.literal()}*s^{k}" for k, c in sorted(self.coeffs.items())
        )

    def __repr__(self):
        return f"Series({self.literal()}, window=[{self.lo},{self.hi}])"
