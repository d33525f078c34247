"""Affine expressions ``c + sum k_u * u`` over named unknowns, coefficients in Q(sqrt d)."""
from __future__ import annotations

from numbers import Rational
from typing import Mapping

from .qfield import QuadField, QuadNum

__all__ = ["LinExpr", "NonlinearError"]


class NonlinearError(ArithmeticError):
    pass


class LinExpr:
    """Immutable affine form; zero coefficients are never stored."""

    __slots__ = ("field", "terms", "constant")

    def __init__(self, field: QuadField, terms: Mapping[str, QuadNum] | None = None, constant=0):
        clean = {}
        for k, v in (terms or {}).items():
            v = field(v)
            if v:
                clean[k] = v
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "terms", dict(sorted(clean.items(), key=lambda kv: _unknown_key(kv[0]))))
        object.__setattr__(self, "constant", field(constant))

    def __setattr__(self, name, value):
        raise AttributeError("LinExpr is immutable")

    @classmethod
    def var(cls, field: QuadField, name: str, coeff=1) -> "LinExpr":
        return cls(field, {name: field(coeff)})

    @classmethod
    def const(cls, field: QuadField, c) -> "LinExpr":
        return cls(field, {}, c)

    def is_constant(self) -> bool:
        return not self.terms

    def coeff(self, name: str) -> QuadNum:
        return self.terms.get(name, self.field.zero)

    def unknowns(self) -> list[str]:
        return list(self.terms)

    def _lift(self, other) -> "LinExpr | None":
        if isinstance(other, LinExpr):
            return other
        if isinstance(other, (QuadNum, int, Rational)):
            return LinExpr(self.field, {}, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for k, v in o.terms.items():
            terms[k] = terms[k] + v if k in terms else v
        return LinExpr(self.field, terms, self.constant + o.constant)

    __radd__ = __add__

    def __neg__(self):
        return LinExpr(self.field, {k: -v for k, v in self.terms.items()}, -self.constant)

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
        if isinstance(other, LinExpr):
            if other.is_constant():
                other = other.constant
            elif self.is_constant():
                return other * self.constant
            else:
                raise NonlinearError("product of two non-constant affine expressions")
        if not isinstance(other, (QuadNum, int, Rational)):
            return NotImplemented
        c = self.field(other)
        return LinExpr(self.field, {k: v * c for k, v in self.terms.items()}, self.constant * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, LinExpr):
            if not other.is_constant():
                raise NonlinearError("division by a non-constant expression")
            other = other.constant
        return self * (1 / self.field(other))

    def __rtruediv__(self, other):
        if not self.is_constant():
            raise NonlinearError("division by a non-constant expression")
        return LinExpr(self.field, {}, self.field(other) / self.constant)

    def __bool__(self):
        return bool(self.terms) or bool(self.constant)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms and self.constant == o.constant

    __hash__ = None

    def substitute(self, values: Mapping[str, "QuadNum | LinExpr"]) -> "LinExpr":
        out = LinExpr(self.field, {}, self.constant)
        for k, v in self.terms.items():
            out = out + (values[k] * v if k in values else LinExpr.var(self.field, k, v))
        return out

    def value(self) -> QuadNum:
        if self.terms:
            raise ValueError(f"expression {self} still depends on {list(self.terms)}")
        return self.constant

    def literal(self) -> str:
        parts = []
        if self.constant or not self.terms:
            parts.append(self.constant.literal())
        for k, v in self.terms.items():
            lit = v.literal()
            parts.append(k if lit == "1" else f"-{k}" if lit == "-1" else f"{lit}*{k}")
        return " + ".join(parts).replace("+ -", "- ")

    __str__ = literal

    def __repr__(self):
        return f"LinExpr({self.literal()})"


def _unknown_key(name: str):
    # x1 < x2 < x10 < y0 ...; names without a trailing integer sort by name
    head = name.rstrip("0123456789")
    tail = name[len(head):]
    return (head, int(tail) if tail else -1, name)
