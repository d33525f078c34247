"""Twisted cocycles of the mapping-torus group at the metabelian representation.

A cocycle ``z`` is stored through its values on the generators, written in
the sl2 basis ``e1 = [[0,1],[0,0]]``, ``e2 = [[1,0],[0,-1]]``,
``e3 = [[0,0],[1,0]]``, i.e. ``z(gamma_i) = [[y_i, x_i], [z_i, -y_i]]`` and
``z(tau) = [[y0, x0], [z0, -y0]]``.  Coordinates are always ordered
``(x, y, z)``.

The linear system is produced by evaluating ``z`` on every relator with the
extension rule ``z(uv) = z(u) + Ad(rho0(u)) z(v)``, never by hand-assembling
Fox-derivative blocks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .linexpr import LinExpr
from .matrix import Matrix
from .presentation import MappingTorusInput, boundary_data, surface_relator
from .qfield import QuadNum
from .words import TAU, Gen, Word, concat_inv

__all__ = [
    "ad_letter",
    "ad_rho0",
    "ad_of_matrix",
    "relators",
    "CocycleSystem",
    "build_system",
    "dim_z1",
    "dim_h1",
    "Blocks",
    "extract_blocks",
    "DeformationCocycle",
    "DeformationSolution",
    "InconsistentParametersError",
    "SingularSolveError",
    "solve_deformation",
    "default_gauge_pivot",
    "coboundary",
    "evaluate_cocycle",
    "cocycle_residuals",
    "verify_cocycle",
]

COORDS = ("x", "y", "z")


class InconsistentParametersError(ValueError):
    pass


class SingularSolveError(ArithmeticError):
    pass


def ad_letter(gen: Gen, e: int, inp: MappingTorusInput) -> Matrix:
    """Ad of rho0(gen)^e on sl2 in the (x, y, z) coordinates."""
    K = inp.field
    if gen == TAU:
        lam = inp.lam if e == 1 else 1 / inp.lam
        return Matrix([[lam, K.zero, K.zero], [K.zero, K.one, K.zero], [K.zero, K.zero, 1 / lam]])
    a = inp.a[gen.slot(inp.g, inp.n)] * e
    return Matrix([[K.one, -2 * a, -(a * a)], [K.zero, K.one, a], [K.zero, K.zero, K.one]])


def ad_rho0(w: Word, inp: MappingTorusInput) -> Matrix:
    K = inp.field
    out = Matrix.identity(3, K.one, K.zero)
    for gen, e in w:
        out = out @ ad_letter(gen, e, inp)
    return out


def ad_of_matrix(g: Matrix) -> Matrix:
    """Ad(g) on sl2 computed by direct conjugation g X g^-1 of the basis matrices."""
    zero = g[0, 0] * 0
    one = zero + 1
    ginv = g.inverse()
    basis = [
        Matrix([[zero, one], [zero, zero]]),
        Matrix([[one, zero], [zero, -one]]),
        Matrix([[zero, zero], [one, zero]]),
    ]
    cols = []
    for X in basis:
        Y = g @ X @ ginv
        cols.append([Y[0, 1], Y[0, 0], Y[1, 0]])
    return Matrix(cols).T


def relators(inp: MappingTorusInput) -> list[tuple[str, Word]]:
    """Labelled relators: phi(g) t g^-1 t^-1 for each surface generator, then the surface relator."""
    out = []
    t = Word.gen(TAU)
    for gen in inp.generators():
        r = concat_inv(inp.phi[gen], t * Word.gen(gen, -1) * Word.gen(TAU, -1))
        out.append((f"conj:{gen.token}", r))
    out.append(("surface", surface_relator(inp.g, inp.n)))
    return out


def unknown_names(inp: MappingTorusInput) -> list[str]:
    N = inp.rank
    return (
        [f"x{i}" for i in range(N + 1)]
        + [f"y{i}" for i in range(N + 1)]
        + [f"z{i}" for i in range(N + 1)]
    )


def _slot_name(gen: Gen, inp: MappingTorusInput) -> int:
    return 0 if gen == TAU else gen.slot(inp.g, inp.n) + 1


def symbolic_values(inp: MappingTorusInput) -> dict[Gen, list[LinExpr]]:
    K = inp.field
    vals = {}
    for gen in inp.generators() + [TAU]:
        i = _slot_name(gen, inp)
        vals[gen] = [LinExpr.var(K, f"{c}{i}") for c in COORDS]
    return vals


def evaluate_cocycle(w: Word, values: Mapping[Gen, Sequence], inp: MappingTorusInput) -> list:
    """z(w) from generator values via z(uv) = z(u) + Ad(rho0(u)) z(v)."""
    K = inp.field
    P = Matrix.identity(3, K.one, K.zero)
    acc = [K.zero, K.zero, K.zero]
    for gen, e in w:
        if e == 1:
            contrib = P.apply(values[gen])
            acc = [s + c for s, c in zip(acc, contrib)]
            P = P @ ad_letter(gen, 1, inp)
        else:
            P = P @ ad_letter(gen, -1, inp)
            contrib = P.apply(values[gen])
            acc = [s - c for s, c in zip(acc, contrib)]
    return acc


@dataclass
class CocycleSystem:
    unknowns: list[str]
    equations: list[tuple[str, str, LinExpr]]  # (relator label, coordinate, expression)

    def matrix(self, unknowns: Sequence[str] | None = None) -> Matrix:
        cols = list(unknowns if unknowns is not None else self.unknowns)
        return Matrix([[eq.coeff(u) for u in cols] for _, _, eq in self.equations])

    def rows(self, label_prefix: str, coord: str) -> list[LinExpr]:
        return [eq for lab, c, eq in self.equations if lab.startswith(label_prefix) and c == coord]

    def residuals(self, values: Mapping[str, object]) -> list[tuple[str, str, LinExpr]]:
        out = []
        for lab, c, eq in self.equations:
            r = eq.substitute(values)
            if r:
                out.append((lab, c, r))
        return out

    def satisfied_by(self, values: Mapping[str, object]) -> bool:
        """True iff every equation vanishes at numeric ``values`` covering all unknowns."""
        for _, _, eq in self.equations:
            acc = eq.constant
            for name, coeff in eq.terms.items():
                acc = acc + coeff * values[name]
            if acc:
                return False
        return True


def build_system(inp: MappingTorusInput) -> CocycleSystem:
    vals = symbolic_values(inp)
    eqs = []
    for label, r in relators(inp):
        zr = evaluate_cocycle(r, vals, inp)
        for c, expr in zip(COORDS, zr):
            if expr.constant:
                raise AssertionError("cocycle equations must be homogeneous")
            eqs.append((label, c, expr))
    return CocycleSystem(unknown_names(inp), eqs)


def dim_z1(system: CocycleSystem) -> int:
    return system.matrix().nullity()


def dim_h1(system: CocycleSystem) -> int:
    # B^1 is 3-dimensional because rho0 is non-abelian
    return dim_z1(system) - 3


def coboundary(u: Sequence[QuadNum], inp: MappingTorusInput) -> dict[str, QuadNum]:
    """Generator values of the coboundary z(g) = u - Ad(rho0(g)) u."""
    out = {}
    for gen in inp.generators() + [TAU]:
        i = _slot_name(gen, inp)
        Au = ad_letter(gen, 1, inp).apply(u)
        for c, ui, ai in zip(COORDS, u, Au):
            out[f"{c}{i}"] = ui - ai
    return out


@dataclass
class Blocks:
    K: Matrix
    C: Matrix
    D: Matrix
    x_block: Matrix  # coefficients of x in the x-equations: M - lambda I
    y0_col: list     # coefficient of y0 in the x-equations: -2 lambda a
    y_block: Matrix  # coefficients of y in the y-equations: M - I


def extract_blocks(system: CocycleSystem, inp: MappingTorusInput) -> Blocks:
    N = inp.rank
    xs = [f"x{i}" for i in range(1, N + 1)]
    ys = [f"y{i}" for i in range(1, N + 1)]
    zs = [f"z{i}" for i in range(1, N + 1)]
    xeq = system.rows("conj:", "x")
    yeq = system.rows("conj:", "y")

    def block(rows, cols):
        return Matrix([[r.coeff(c) for c in cols] for r in rows])

    return Blocks(
        K=block(xeq, ys),
        C=block(xeq, zs),
        D=block(yeq, zs),
        x_block=block(xeq, xs),
        y0_col=[r.coeff("y0") for r in xeq],
        y_block=block(yeq, ys),
    )


def default_gauge_pivot(inp: MappingTorusInput) -> int:
    """Highest index i <= 2g with a_i != 0; x_i is zeroed to fix the e_lambda gauge."""
    for i in range(2 * inp.g, 0, -1):
        if inp.a[i - 1]:
            return i
    raise ValueError("unstable measure vanishes on the closed surface")


@dataclass
class DeformationCocycle:
    x: tuple
    y: tuple
    z: tuple
    x0: object
    y0: object
    z0: object

    def values(self) -> dict[str, object]:
        out = {"x0": self.x0, "y0": self.y0, "z0": self.z0}
        for i, (xi, yi, zi) in enumerate(zip(self.x, self.y, self.z), start=1):
            out[f"x{i}"], out[f"y{i}"], out[f"z{i}"] = xi, yi, zi
        return out

    def generator_values(self, inp: MappingTorusInput) -> dict[Gen, list]:
        vals = {TAU: [self.x0, self.y0, self.z0]}
        for i, gen in enumerate(inp.generators()):
            vals[gen] = [self.x[i], self.y[i], self.z[i]]
        return vals

    def substitute(self, values: Mapping[str, object]) -> "DeformationCocycle":
        def sub(v):
            return v.substitute(values) if isinstance(v, LinExpr) else v

        return DeformationCocycle(
            tuple(map(sub, self.x)), tuple(map(sub, self.y)), tuple(map(sub, self.z)),
            sub(self.x0), sub(self.y0), sub(self.z0),
        )

    def is_numeric(self) -> bool:
        return not any(isinstance(v, LinExpr) and not v.is_constant() for v in self.values().values())

    def numeric(self) -> "DeformationCocycle":
        def num(v):
            return v.value() if isinstance(v, LinExpr) else v

        return DeformationCocycle(
            tuple(map(num, self.x)), tuple(map(num, self.y)), tuple(map(num, self.z)),
            num(self.x0), num(self.y0), num(self.z0),
        )

    @classmethod
    def zero(cls, inp: MappingTorusInput) -> "DeformationCocycle":
        z = inp.field.zero
        N = inp.rank
        return cls((z,) * N, (z,) * N, (z,) * N, z, z, z)


@dataclass
class DeformationSolution:
    cocycle: DeformationCocycle
    constraints: list[LinExpr]          # affine conditions on the free symbols, each == 0
    free: dict[int, object]             # orbit representative j -> value or symbol
    gauge_pivot: int
    z_scale: QuadNum
    symbols: list[str] = field(default_factory=list)


def solve_deformation(
    inp: MappingTorusInput,
    z_scale=1,
    free_y: Mapping[int, object] | None = None,
    gauge_pivot: int | None = None,
    system: CocycleSystem | None = None,
) -> DeformationSolution:
    """Solve for the deformation cocycle with z-part ``z_scale * b``.

    ``free_y`` maps an orbit representative ``j`` (1-based puncture index) to
    the value of ``y_{2g+j}``.  Orbits not mentioned stay symbolic with the
    symbol ``y{2g+j}``.  The surface relator ties these values together; the
    tie is returned in ``constraints`` when symbols remain and enforced
    (raising :class:`InconsistentParametersError`) when all are numeric.
    """
    from .cohomology import eigenvalue_one_check

    K = inp.field
    z_scale = K(z_scale)
    if not z_scale:
        raise ValueError("z_scale must be nonzero")
    if not eigenvalue_one_check(inp):
        raise ValueError("phi^* has eigenvalue 1 on the closed surface; the deformation solve is not unique")
    g, N = inp.g, inp.rank
    bd = boundary_data(inp)
    free_y = dict(free_y or {})
    reps = {o[0]: o for o in bd.orbits}
    for j in free_y:
        if j not in reps:
            raise ValueError(f"y{2 * g + j}: puncture {j} is not the first element of an orbit {list(bd.orbits)}")
    pivot = gauge_pivot if gauge_pivot is not None else default_gauge_pivot(inp)
    if not 1 <= pivot <= N:
        raise ValueError(f"gauge pivot x{pivot} out of range")

    system = system or build_system(inp)
    fixed: dict[str, object] = {"x0": K.zero, "z0": K.zero, f"x{pivot}": K.zero}
    for i in range(N):
        fixed[f"z{i + 1}"] = z_scale * inp.b[i]
    symbols = []
    free_vals = {}
    for j in sorted(reps):
        name = f"y{2 * g + j}"
        if j in free_y:
            val = free_y[j]
            val = val if isinstance(val, LinExpr) else K(val)
        else:
            val = LinExpr.var(K, name)
            symbols.append(name)
        fixed[name] = val
        free_vals[j] = val

    unknowns = [u for u in system.unknowns if u not in fixed]
    rows = []
    rhs = []
    for _, _, eq in system.equations:
        rows.append([eq.coeff(u) for u in unknowns])
        rest = LinExpr(K, {k: v for k, v in eq.terms.items() if k in fixed}).substitute(fixed)
        rhs.append(-rest if isinstance(rest, LinExpr) else -K(rest))
    A = Matrix(rows)
    if A.rank() != len(unknowns):
        raise SingularSolveError(f"deformation system has rank {A.rank()} < {len(unknowns)} unknowns")
    sol, residual = A.solve([r if isinstance(r, LinExpr) else LinExpr.const(K, r) for r in rhs])

    constraints = []
    for r in residual:
        if not isinstance(r, LinExpr):
            r = LinExpr.const(K, r)
        if not r:
            continue
        if r.is_constant():
            raise InconsistentParametersError(
                f"free y values violate the surface-relator constraint (defect {r.constant.literal()})"
            )
        constraints.append(r)
    constraints = _independent(constraints)

    values = dict(fixed)
    values.update(zip(unknowns, sol))

    def val(name):
        v = values[name]
        if isinstance(v, LinExpr) and v.is_constant():
            return v.constant
        return v

    cocycle = DeformationCocycle(
        x=tuple(val(f"x{i}") for i in range(1, N + 1)),
        y=tuple(val(f"y{i}") for i in range(1, N + 1)),
        z=tuple(val(f"z{i}") for i in range(1, N + 1)),
        x0=val("x0"), y0=val("y0"), z0=val("z0"),
    )
    return DeformationSolution(cocycle, constraints, free_vals, pivot, z_scale, symbols)


def _independent(exprs: list[LinExpr]) -> list[LinExpr]:
    """Drop constraints that are combinations of earlier ones."""
    if not exprs:
        return []
    names = sorted({n for e in exprs for n in e.terms})
    kept: list[LinExpr] = []
    for e in exprs:
        trial = kept + [e]
        M = Matrix([[x.coeff(n) for n in names] + [x.constant] for x in trial])
        if M.rank() == len(trial):
            kept.append(e)
    # normalise: leading coefficient 1
    out = []
    for e in kept:
        lead = next(iter(e.terms.values()))
        out.append(e / lead)
    return out


# -- independent oracle -------------------------------------------------------
#
# Dual-number route: gamma -> (I + eps z(gamma)) rho0(gamma) with eps^2 = 0,
# multiplied out along each relator.  Shares nothing with evaluate_cocycle.

def _dot(a, b, c, d):
    # a*b + c*d, skipping zero factors (rho0 matrices are triangular)
    if a and b:
        return a * b + c * d if c and d else a * b
    return c * d if c and d else a * 0


def _mm(p, q):
    (a, b), (c, d) = p
    (e, f), (g, h) = q
    return [[_dot(a, e, b, g), _dot(a, f, b, h)], [_dot(c, e, d, g), _dot(c, f, d, h)]]


def _madd(p, q):
    return [[p[i][j] + q[i][j] for j in range(2)] for i in range(2)]


def _dual_generators(z: DeformationCocycle, inp: MappingTorusInput) -> dict:
    K = inp.field
    out = {}
    vals = z.generator_values(inp)
    for gen, (x, y, zz) in vals.items():
        if gen == TAU:
            m0 = [[inp.lam, K.zero], [K.zero, K.one]]
            m0i = [[1 / inp.lam, K.zero], [K.zero, K.one]]
        else:
            a = inp.a[gen.slot(inp.g, inp.n)]
            m0 = [[K.one, a], [K.zero, K.one]]
            m0i = [[K.one, -a], [K.zero, K.one]]
        Z = [[y, x], [zz, -y]]
        m1 = _mm(Z, m0)
        # (M0 + eps M1)^-1 = M0^-1 - eps M0^-1 M1 M0^-1
        m1i = [[-e for e in row] for row in _mm(_mm(m0i, m1), m0i)]
        out[gen] = ((m0, m1), (m0i, m1i))
    return out


_RHO0_CHAINS: dict[int, tuple] = {}


def _rho0_chains(inp: MappingTorusInput, gens: dict) -> list:
    """Per relator: the letters with the rho0 prefix product before each letter.

    Depends only on rho0, so it is computed once per input.
    """
    hit = _RHO0_CHAINS.get(id(inp))
    if hit is not None and hit[0] is inp:
        return hit[1]
    K = inp.field
    I = [[K.one, K.zero], [K.zero, K.one]]
    chains = []
    for label, r in relators(inp):
        p0 = I
        steps = []
        for gen, e in r:
            steps.append((p0, gen, 0 if e == 1 else 1))
            p0 = _mm(p0, gens[gen][steps[-1][2]][0])
        # rho0 is a homomorphism up to the scalar from diag(lam, 1); tau-exponent sums vanish
        if p0 != I:
            raise AssertionError(f"rho0 fails relator {label}")
        chains.append((label, steps))
    _RHO0_CHAINS[id(inp)] = (inp, chains)
    return chains


def cocycle_residuals(z: DeformationCocycle, inp: MappingTorusInput) -> list[tuple[str, list]]:
    """For each relator, the eps-part of the dual-number product (zero iff the relator holds)."""
    K = inp.field
    gens = _dual_generators(z, inp)
    out = []
    for label, steps in _rho0_chains(inp, gens):
        p1 = [[K.zero, K.zero], [K.zero, K.zero]]
        for p0, gen, side in steps:
            q0, q1 = gens[gen][side]
            # (p0 + eps p1)(q0 + eps q1) = p0 q0 + eps (p0 q1 + p1 q0)
            p1 = _madd(_mm(p0, q1), _mm(p1, q0))
        out.append((label, p1))
    return out


def verify_cocycle(z: DeformationCocycle, inp: MappingTorusInput) -> bool:
    return all(not any(e for row in p1 for e in row) for _, p1 in cocycle_residuals(z, inp))
