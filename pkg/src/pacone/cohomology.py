"""The induced action on H^1 of the punctured surface and related exact data.

Conventions: row ``i`` of :func:`action_matrix` is the abelianization of
``phi(gamma_i)`` restricted to the ``2g+n`` surface slots, so that the
unstable measure vector ``a`` satisfies ``M a = lambda a`` (the measure of
``phi(gamma)`` is ``lambda`` times that of ``gamma``).  The lower-left block is
zero and the lower-right block is the permutation matrix ``P`` of the
singular points.
"""
from __future__ import annotations

from typing import TYPE_CHECKING, Sequence

from .matrix import Matrix, Poly, poly_divmod
from .qfield import QuadNum
from .words import abelianize, surface_generators

if TYPE_CHECKING:
    from .presentation import MappingTorusInput

__all__ = [
    "action_matrix",
    "char_poly",
    "kernel",
    "intersection_pairing",
    "eigenvalue_one_check",
    "closed_block",
    "divides",
    "same_line",
    "rational_factors",
]


def action_matrix(inp: "MappingTorusInput") -> Matrix:
    g, n, K = inp.g, inp.n, inp.field
    rows = []
    for gen in surface_generators(g, n):
        v = abelianize(inp.phi[gen], g, n)[: 2 * g + n]
        rows.append([K(c) for c in v])
    return Matrix(rows)


def closed_block(inp: "MappingTorusInput") -> Matrix:
    """The 2g x 2g block acting on H^1 of the closed surface."""
    M = action_matrix(inp)
    return M.submatrix(range(2 * inp.g), range(2 * inp.g))


def char_poly(M: Matrix) -> Poly:
    """det(xI - M) as a coefficient list, lowest degree first."""
    return M.char_poly()


def kernel(M: Matrix) -> list[list[QuadNum]]:
    return M.kernel()


def divides(p: Poly, q: Poly) -> bool:
    """Whether polynomial ``p`` divides ``q`` exactly."""
    _, r = poly_divmod(q, p)
    return not r


def intersection_pairing(u: Sequence, v: Sequence, g: int):
    """Symplectic pairing sum_i (u_i v_{g+i} - u_{g+i} v_i) on the first 2g entries."""
    if len(u) < 2 * g or len(v) < 2 * g:
        raise ValueError(f"vectors need at least 2g = {2 * g} entries")
    acc = u[0] * v[g] - u[g] * v[0]
    for i in range(1, g):
        acc = acc + (u[i] * v[g + i] - u[g + i] * v[i])
    return acc


def eigenvalue_one_check(inp: "MappingTorusInput") -> bool:
    """True iff 1 is not an eigenvalue of phi^* on H^1 of the closed surface."""
    Phi = closed_block(inp)
    one = inp.field.one
    return bool((Phi - Matrix.identity(Phi.nrows, one, inp.field.zero)).det())


def same_line(u: Sequence[QuadNum], v: Sequence[QuadNum]) -> QuadNum | None:
    """Return c with u = c v if the two vectors are proportional, else None."""
    if len(u) != len(v):
        return None
    c = None
    for x, y in zip(u, v):
        if not y:
            if x:
                return None
            continue
        ratio = x / y
        if c is None:
            c = ratio
        elif ratio != c:
            return None
    return c


def rational_factors(p: Poly) -> list[tuple[Poly, int]]:
    """Irreducible factors over Q of a monic polynomial with rational coefficients."""
    import sympy

    if any(not c.is_rational() for c in p):
        raise ValueError("polynomial has irrational coefficients")
    K = p[0].field
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.as_fraction().numerator, c.as_fraction().denominator) * x**k for k, c in enumerate(p))
    _, facs = sympy.factor_list(expr, x)
    out = []
    for f, mult in facs:
        coeffs = sympy.Poly(f, x).all_coeffs()[::-1]
        lead = coeffs[-1]
        out.append(([K(sympy.Rational(c / lead).p, 0, sympy.Rational(c / lead).q) for c in coeffs], int(mult)))
    out.sort(key=lambda fm: (len(fm[0]), [str(c) for c in fm[0]]))
    return out
