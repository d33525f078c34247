"""Dense matrices over exact rings, with linear algebra over Q(sqrt d).

:class:`Matrix` only relies on ``+``, ``-`` and ``*`` of its entries, so the same
class carries :class:`~pacone.qfield.QuadNum`, :class:`~pacone.qfield.Series`,
:class:`~pacone.linexpr.LinExpr` or even sympy expressions.  Elimination
routines (``rref``, ``kernel``, ``det`` ...) additionally need exact division
and a zero test, which QuadNum provides.
"""
from __future__ import annotations

from typing import Any, Callable, Iterable, Sequence

from .qfield import QuadNum

__all__ = ["Matrix", "Poly", "poly_divmod", "poly_mul", "poly_str"]


class Matrix:
    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Sequence[Any]]):
        rows = tuple(tuple(r) for r in rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # constructors
    @classmethod
    def identity(cls, n: int, one=1, zero=0) -> "Matrix":
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, m: int, n: int, zero=0) -> "Matrix":
        return cls([[zero] * n for _ in range(m)])

    @classmethod
    def from_func(cls, m: int, n: int, f: Callable[[int, int], Any]) -> "Matrix":
        return cls([[f(i, j) for j in range(n)] for i in range(m)])

    @classmethod
    def column(cls, v: Sequence[Any]) -> "Matrix":
        return cls([[x] for x in v])

    # shape / access
    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return self.shape[1]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> tuple:
        return self.rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.rows[i][j] for j in cols] for i in rows])

    def transpose(self) -> "Matrix":
        m, n = self.shape
        return Matrix([[self.rows[i][j] for i in range(m)] for j in range(n)])

    T = property(transpose)

    def map(self, f: Callable[[Any], Any]) -> "Matrix":
        return Matrix([[f(x) for x in r] for r in self.rows])

    def replace(self, i: int, j: int, value) -> "Matrix":
        rows = [list(r) for r in self.rows]
        rows[i][j] = value
        return Matrix(rows)

    # arithmetic
    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "Matrix":
        return self.map(lambda x: -x)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        m, k = self.shape
        k2, n = other.shape
        if k != k2:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = [other.col(j) for j in range(n)]
        out = []
        for r in self.rows:
            out_row = []
            for c in cols:
                acc = r[0] * c[0]
                for a, b in zip(r[1:], c[1:]):
                    acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return Matrix(out)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self @ other
        return self.map(lambda x: x * other)

    def __rmul__(self, other):
        return self.map(lambda x: other * x)

    def apply(self, v: Sequence[Any]) -> list:
        return [x for (x,) in (self @ Matrix.column(v)).rows]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and all(
            a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s)
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return all(not x for r in self.rows for x in r)

    def __repr__(self):
        return "Matrix(" + repr([[str(x) for x in r] for r in self.rows]) + ")"

    def to_text(self) -> str:
        cells = [[str(x) for x in r] for r in self.rows]
        if not cells:
            return "[]"
        widths = [max(len(c[j]) for c in cells) for j in range(len(cells[0]))]
        return "\n".join("[ " + "  ".join(c.rjust(w) for c, w in zip(r, widths)) + " ]" for r in cells)

    def to_json(self) -> list[list[str]]:
        return [[x.literal() if hasattr(x, "literal") else str(x) for x in r] for r in self.rows]

    # exact linear algebra (QuadNum entries)
    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form with pivots chosen at the lowest nonzero row index."""
        rows = [list(r) for r in self.rows]
        m, n = self.shape
        pivots: list[int] = []
        pr = 0
        for c in range(n):
            if pr == m:
                break
            sel = next((i for i in range(pr, m) if rows[i][c]), None)
            if sel is None:
                continue
            rows[pr], rows[sel] = rows[sel], rows[pr]
            inv = 1 / rows[pr][c]
            rows[pr] = [x * inv for x in rows[pr]]
            for i in range(m):
                if i != pr and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[pr])]
            pivots.append(c)
            pr += 1
        return Matrix(rows), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> list[list[QuadNum]]:
        """Exact nullspace basis: one vector per free column, 1 in that column."""
        red, pivots = self.rref()
        m, n = self.shape
        zero = _zero_like(self)
        basis = []
        for f in (c for c in range(n) if c not in pivots):
            v = [zero] * n
            v[f] = zero + 1
            for i, p in enumerate(pivots):
                v[p] = -red.rows[i][f]
            basis.append(v)
        return basis

    def nullity(self) -> int:
        return self.ncols - self.rank()

    def det(self) -> QuadNum:
        """Bareiss fraction-free determinant."""
        n, n2 = self.shape
        if n != n2:
            raise ValueError("det of non-square matrix")
        if n == 0:
            return 1
        a = [list(r) for r in self.rows]
        sign = 1
        prev = _zero_like(self) + 1
        for k in range(n - 1):
            if not a[k][k]:
                sel = next((i for i in range(k + 1, n) if a[i][k]), None)
                if sel is None:
                    return _zero_like(self)
                a[k], a[sel] = a[sel], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
            prev = a[k][k]
        return a[n - 1][n - 1] * sign

    def inverse(self) -> "Matrix":
        n, n2 = self.shape
        if n != n2:
            raise ValueError("inverse of non-square matrix")
        zero = _zero_like(self)
        aug = Matrix([list(r) + [zero + (1 if i == j else 0) for j in range(n)] for i, r in enumerate(self.rows)])
        red, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return red.submatrix(range(n), range(n, 2 * n))

    def solve(self, rhs: Sequence[Any]) -> tuple[list, list]:
        """Particular solution of ``self @ x = rhs`` with free variables set to 0.

        ``rhs`` entries may be any exact type closed under QuadNum scaling
        (e.g. LinExpr).  Returns ``(x, residuals)``; ``residuals`` are the
        reduced right-hand-side entries of zero rows, which must all vanish
        for the system to be consistent.
        """
        m, n = self.shape
        rows = [list(r) for r in self.rows]
        b = list(rhs)
        pivots: list[int] = []
        pr = 0
        for c in range(n):
            if pr == m:
                break
            sel = next((i for i in range(pr, m) if rows[i][c]), None)
            if sel is None:
                continue
            rows[pr], rows[sel] = rows[sel], rows[pr]
            b[pr], b[sel] = b[sel], b[pr]
            inv = 1 / rows[pr][c]
            rows[pr] = [x * inv for x in rows[pr]]
            b[pr] = b[pr] * inv
            for i in range(m):
                if i != pr and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[pr])]
                    b[i] = b[i] - b[pr] * f
            pivots.append(c)
            pr += 1
        zero = _zero_like(self)
        x = [zero] * n
        for i, p in enumerate(pivots):
            x[p] = b[i]
        return x, b[pr:]

    def char_poly(self) -> "Poly":
        """Coefficients (lowest degree first) of det(x I - M), by Bareiss over K[x]."""
        n, n2 = self.shape
        if n != n2:
            raise ValueError("char_poly of non-square matrix")
        zero = _zero_like(self)
        one = zero + 1
        a = [[[-self.rows[i][j], one] if i == j else [-self.rows[i][j]] for j in range(n)] for i in range(n)]
        a = [[_ptrim(p) for p in r] for r in a]
        sign = 1
        prev = [one]
        for k in range(n - 1):
            if not a[k][k]:
                sel = next((i for i in range(k + 1, n) if a[i][k]), None)
                if sel is None:
                    return []
                a[k], a[sel] = a[sel], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = _psub(poly_mul(a[i][j], a[k][k]), poly_mul(a[i][k], a[k][j]))
                    q, r = poly_divmod(num, prev)
                    if r:
                        raise ArithmeticError("inexact Bareiss division")
                    a[i][j] = q
            prev = a[k][k]
        res = a[n - 1][n - 1] if n else [one]
        return [c * sign for c in res]


def _zero_like(m: Matrix):
    for r in m.rows:
        for x in r:
            if isinstance(x, QuadNum):
                return x.field.zero
    return 0


# polynomials: lists of coefficients, lowest degree first, no trailing zeros
Poly = list


def _ptrim(p: list) -> list:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _padd(p: list, q: list) -> list:
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        if i < len(p) and i < len(q):
            out.append(p[i] + q[i])
        else:
            out.append(p[i] if i < len(p) else q[i])
    return _ptrim(out)


def _psub(p: list, q: list) -> list:
    return _padd(p, [-c for c in q])


def poly_mul(p: list, q: list) -> list:
    if not p or not q:
        return []
    out = [None] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            t = a * b
            out[i + j] = t if out[i + j] is None else out[i + j] + t
    return _ptrim(out)


def poly_divmod(num: list, den: list) -> tuple[list, list]:
    num, den = _ptrim(num), _ptrim(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(num)
    if len(rem) < len(den):
        return [], rem
    quot = [None] * (len(rem) - len(den) + 1)
    lead = den[-1]
    for k in range(len(rem) - len(den), -1, -1):
        c = rem[k + len(den) - 1] / lead
        quot[k] = c
        if c:
            for i, d in enumerate(den):
                rem[k + i] = rem[k + i] - c * d
    rem = _ptrim(rem[: len(den) - 1])
    return _ptrim(quot), rem


def poly_str(p: list, var: str = "x") -> str:
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if not c:
            continue
        cs = str(c)
        if k == 0:
            terms.append(cs)
        elif cs == "1":
            terms.append(var if k == 1 else f"{var}^{k}")
        elif cs == "-1":
            terms.append("-" + (var if k == 1 else f"{var}^{k}"))
        else:
            terms.append(f"{cs}*{var}" if k == 1 else f"{cs}*{var}^{k}")
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"
