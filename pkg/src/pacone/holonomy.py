"""Holonomy matrices: rho0, the half-pipe representation built from a cocycle, and Sol.

Points of the Hermitian model are ``P_s(x) = [[x1+x2, x3+k x4], [x3-k x4, x1-x2]]``
over ``B_s = R + R k`` with ``k^2 = -s^2``.  ``M`` acts by ``P -> M P M*`` and
the resulting 4x4 matrix has the image of ``e_j`` as its ``j``-th column.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Mapping

from .matrix import Matrix
from .presentation import MappingTorusInput
from .qfield import PoleError, QuadField, QuadNum, Series
from .words import TAU, Gen, Word

__all__ = [
    "BNum",
    "Mat2B",
    "HPConditionError",
    "rho0_matrix",
    "rho0_word",
    "hp_from_pair",
    "hp_rep",
    "sol_rep",
    "rep_word",
    "verify_relations",
    "RelationCheck",
    "RelationReport",
    "rescale_r1",
    "sol_limit",
    "hermitian_action",
    "is_hp_form",
    "lorentz_form",
]


class HPConditionError(ValueError):
    pass


class BNum:
    """``re + im * k`` with ``k^2 = -s^2``; ``s`` is a nonnegative rational."""

    __slots__ = ("re", "im", "s")

    def __init__(self, re, im=0, s=0):
        self.re, self.im, self.s = re, im, Fraction(s)
        if self.s < 0:
            raise ValueError("s must be >= 0")

    def _lift(self, other) -> "BNum":
        if isinstance(other, BNum):
            if other.s != self.s:
                raise ValueError(f"mixing B_s with s={self.s} and s={other.s}")
            return other
        return BNum(other, self.re * 0, self.s)

    def __add__(self, other):
        o = self._lift(other)
        return BNum(self.re + o.re, self.im + o.im, self.s)

    __radd__ = __add__

    def __neg__(self):
        return BNum(-self.re, -self.im, self.s)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        s2 = self.s * self.s
        return BNum(self.re * o.re - self.im * o.im * s2, self.re * o.im + self.im * o.re, self.s)

    __rmul__ = __mul__

    def conjugate(self) -> "BNum":
        return BNum(self.re, -self.im, self.s)

    def norm(self):
        return self.re * self.re + self.im * self.im * (self.s * self.s)

    def __eq__(self, other):
        o = self._lift(other)
        return self.re == o.re and self.im == o.im

    __hash__ = None

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"BNum({self.re!r}, {self.im!r}, s={self.s})"


class Mat2B:
    """2x2 matrix over B_s, stored as a real part and a k-part."""

    __slots__ = ("re", "im", "s")

    def __init__(self, re: Matrix, im: Matrix | None = None, s=0):
        self.re = re
        self.im = im if im is not None else re * 0
        self.s = Fraction(s)

    def entry(self, i: int, j: int) -> BNum:
        return BNum(self.re[i, j], self.im[i, j], self.s)

    def __matmul__(self, other: "Mat2B") -> "Mat2B":
        s2 = self.s * self.s
        return Mat2B(self.re @ other.re - (self.im @ other.im) * s2, self.re @ other.im + self.im @ other.re, self.s)

    def star(self) -> "Mat2B":
        """Conjugate transpose."""
        return Mat2B(self.re.T, -self.im.T, self.s)

    def det(self) -> BNum:
        e = self.entry
        return e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0)

    def __eq__(self, other):
        return isinstance(other, Mat2B) and self.re == other.re and self.im == other.im and self.s == other.s

    __hash__ = None

    def __repr__(self):
        return f"Mat2B(re={self.re!r}, im={self.im!r}, s={self.s})"


def rho0_matrix(gen: Gen, inp: MappingTorusInput) -> Mat2B:
    K = inp.field
    if gen == TAU:
        return Mat2B(Matrix([[inp.lam, K.zero], [K.zero, K.one]]))
    a = inp.a[gen.slot(inp.g, inp.n)]
    return Mat2B(Matrix([[K.one, a], [K.zero, K.one]]))


def rho0_word(w: Word, inp: MappingTorusInput) -> Matrix:
    """Real 2x2 matrix rho0(w) in the GL2 representatives."""
    K = inp.field
    out = Matrix.identity(2, K.one, K.zero)
    for gen, e in w:
        m = rho0_matrix(gen, inp).re
        out = out @ (m if e == 1 else m.inverse())
    return out


def _is_zero(v) -> bool:
    if hasattr(v, "expand"):  # sympy expressions
        v = v.expand()
    return v == 0


def _hermitian_basis(zero, one):
    # (real part X, k-part Y) of P(e_j)
    Z = Matrix([[zero, zero], [zero, zero]])
    return [
        (Matrix([[one, zero], [zero, one]]), Z),
        (Matrix([[one, zero], [zero, -one]]), Z),
        (Matrix([[zero, one], [one, zero]]), Z),
        (Z, Matrix([[zero, one], [-one, zero]])),
    ]


def hp_from_pair(A: Matrix, B: Matrix, check: bool = True) -> Matrix:
    """The G_HP matrix of ``A + B k0`` acting on Herm(2, B_0), normalized by det A.

    Entries may be any ring elements with exact division by 2 and by det A
    (QuadNum, Fraction, LinExpr in B, sympy expressions).
    """
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    zero = det * 0
    one = zero + 1
    if check:
        if _is_zero(det):
            raise HPConditionError("det A = 0")
        pos = _is_positive(det)
        if pos is False:
            raise HPConditionError(f"det A must be positive, got {det}")
        adj = Matrix([[A[1, 1], -A[0, 1]], [-A[1, 0], A[0, 0]]])
        tr = (B @ adj)
        if not _is_zero(tr[0, 0] + tr[1, 1]):
            raise HPConditionError("tr(B A^-1) must vanish")
    cols = []
    At, Bt = A.T, B.T
    for X, Y in _hermitian_basis(zero, one):
        R = A @ X @ At
        Q = B @ X @ At - A @ X @ Bt + A @ Y @ At
        cols.append([
            (R[0, 0] + R[1, 1]) / 2 / det,
            (R[0, 0] - R[1, 1]) / 2 / det,
            R[0, 1] / det,
            Q[0, 1] / det,
        ])
    return Matrix(cols).T


def _is_positive(v):
    if isinstance(v, QuadNum):
        return v.sign() > 0
    if isinstance(v, (int, Fraction)):
        return v > 0
    return getattr(v, "is_positive", None)


def hp_rep(inp: MappingTorusInput, z) -> dict[Gen, Matrix]:
    """Generator-wise hp_from_pair(rho0(g), z(g) rho0(g)) for a DeformationCocycle ``z``."""
    out = {}
    for gen, (x, y, zz) in z.generator_values(inp).items():
        A = rho0_matrix(gen, inp).re
        Z = Matrix([[y, x], [zz, -y]])
        out[gen] = hp_from_pair(A, Z @ A)
    return out


def sol_rep(inp: MappingTorusInput) -> dict[Gen, Matrix]:
    K = inp.field
    o, l = K.zero, K.one
    out = {}
    for gen in inp.generators():
        i = gen.slot(inp.g, inp.n)
        a, b = inp.a[i], inp.b[i]
        out[gen] = Matrix([[l, o, o, o], [o, l, o, o], [b, b, l, o], [a, -a, o, l]])
    lam, lami = inp.lam, 1 / inp.lam
    ch, sh = (lam + lami) / 2, (lam - lami) / 2
    out[TAU] = Matrix([[ch, sh, o, o], [sh, ch, o, o], [o, o, l, o], [o, o, o, l]])
    return out


def rep_word(rep: Mapping[Gen, Matrix], w: Word, inverses: dict | None = None) -> Matrix:
    inverses = {} if inverses is None else inverses
    first = next(iter(rep.values()))
    zero = first[0, 1] * 0
    out = Matrix.identity(first.nrows, zero + 1, zero)
    for gen, e in w:
        if e == 1:
            m = rep[gen]
        else:
            if gen not in inverses:
                inverses[gen] = rep[gen].inverse()
            m = inverses[gen]
        out = out @ m
    return out


@dataclass
class RelationCheck:
    relator: str
    ok: bool
    sign_flip: bool
    max_residual: str
    residual: Matrix | None = None


@dataclass
class RelationReport:
    checks: list[RelationCheck] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failed(self) -> list[RelationCheck]:
        return [c for c in self.checks if not c.ok]


def _max_entry(M: Matrix) -> str:
    nz = [x for r in M.rows for x in r if x]
    if not nz:
        return "0"
    try:
        best = max(nz, key=lambda v: abs(float(v)))
    except (TypeError, ValueError):
        best = nz[0]
    return best.literal() if hasattr(best, "literal") else str(best)


def verify_relations(rep: Mapping[Gen, Matrix], inp: MappingTorusInput) -> RelationReport:
    from .deformation import relators

    first = next(iter(rep.values()))
    zero = first[0, 1] * 0
    one = zero + 1
    n = first.nrows
    I = Matrix.identity(n, one, zero)
    inverses: dict = {}
    report = RelationReport()
    for label, r in relators(inp):
        P = rep_word(rep, r, inverses)
        res = P - I
        if res.is_zero():
            report.checks.append(RelationCheck(label, True, False, "0"))
        elif (P + I).is_zero():
            # projectively trivial; flagged
            report.checks.append(RelationCheck(label, True, True, "0"))
        else:
            report.checks.append(RelationCheck(label, False, False, _max_entry(res), res))
    return report


def rescale_r1(field: QuadField, hi: int = 2, sign: int = -1) -> tuple[Matrix, Matrix]:
    """The s-rescaling map and its inverse as matrices of Laurent series in s.

    ``sign`` is the sign of the (3,4) entry; the (4,3) entry is ``s^-1``.
    """
    def S(coeffs, lo=-1):
        return Series(field, coeffs, lo=lo, hi=hi)

    h = Fraction(1, 2)
    ch = S({1: h, -1: h})
    sh = S({1: h, -1: -h})
    z = S({})
    r = Matrix([
        [ch, sh, z, z],
        [sh, ch, z, z],
        [z, z, z, S({1: sign})],
        [z, z, S({-1: 1}), z],
    ])
    rinv = Matrix([
        [ch, -sh, z, z],
        [-sh, ch, z, z],
        [z, z, z, S({1: 1})],
        [z, z, S({-1: sign}), z],
    ])
    return r, rinv


def _field_of(M: Matrix) -> QuadField:
    for row in M.rows:
        for x in row:
            if isinstance(x, (QuadNum, Series)):
                return x.field
    raise TypeError("matrix has no QuadNum entries")


def sol_limit(rep_hp: Mapping[Gen, Matrix], sign: int = -1) -> dict[Gen, Matrix]:
    """Entry-wise s -> 0 limit of r1(s) M r1(s)^-1; PoleError if an entry blows up."""
    out = {}
    for gen, M in rep_hp.items():
        field = _field_of(M)
        r, rinv = rescale_r1(field, sign=sign)
        Ms = M.map(lambda x: Series(field, {0: x}, lo=0, hi=2))
        conj = r @ Ms @ rinv
        try:
            out[gen] = conj.map(lambda e: e.limit0())
        except PoleError as exc:
            raise PoleError(f"{gen}: {exc}") from None
    return out


def lorentz_form(x, s) -> Any:
    s = Fraction(s)
    return -x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] * (s * s)


def hermitian_action(A: Mat2B, x) -> list:
    """x' with A P_s(x) A* = P_s(x') / det(A); det A must be real and nonzero."""
    d = A.det()
    if d.im:
        raise HPConditionError("det A must be real")
    if not d.re:
        raise HPConditionError("A is not invertible")
    x1, x2, x3, x4 = x
    P = Mat2B(Matrix([[x1 + x2, x3], [x3, x1 - x2]]), Matrix([[x1 * 0, x4], [-x4, x1 * 0]]), A.s)
    Q = A @ P @ A.star()
    return [
        (Q.re[0, 0] + Q.re[1, 1]) / 2 / d.re,
        (Q.re[0, 0] - Q.re[1, 1]) / 2 / d.re,
        Q.re[0, 1] / d.re,
        Q.im[0, 1] / d.re,
    ]


def is_hp_form(M: Matrix) -> bool:
    """Upper 3x3 block preserves diag(-1,1,1) and the last column is (0,0,0,1)."""
    zero = M[0, 3] * 0
    one = zero + 1
    if not (M[0, 3] == zero and M[1, 3] == zero and M[2, 3] == zero and M[3, 3] == one):
        return False
    U = M.submatrix(range(3), range(3))
    J = Matrix([[-one, zero, zero], [zero, one, zero], [zero, zero, one]])
    return U.T @ J @ U == J
