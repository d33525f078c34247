"""Infinitesimal cone angles along the singular locus.

The meridian of the component through singular point ``j`` is ``delta_j`` and
its infinitesimal rotation is ``omega_j = 2 y_{2g+j}``.  The pairing
normalization is ``omega_tot = 2 i(a, b) = -2 i(b, a)`` with ``i`` from
:func:`pacone.cohomology.intersection_pairing`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .cohomology import intersection_pairing
from .deformation import DeformationCocycle, InconsistentParametersError, solve_deformation
from .holonomy import rho0_word
from .matrix import Matrix
from .presentation import MappingTorusInput, boundary_data
from .qfield import PoleError, QuadNum, Series
from .words import Dl, Word, extract_conjugacy, substitute

__all__ = [
    "ConeError",
    "meridian_omega",
    "boundary_conjugator",
    "boundary_compat",
    "commutator_omega",
    "commutator_omega_matrix",
    "total_omega",
    "decreasing_choice",
    "model_torus_limit",
    "ModelTorusReport",
    "ComponentReport",
    "ConeReport",
    "cone_report",
]


class ConeError(ValueError):
    pass


def meridian_omega(z: DeformationCocycle, j: int, inp: MappingTorusInput):
    if not 1 <= j <= inp.n:
        raise ConeError(f"singular point {j} out of range 1..{inp.n}")
    return 2 * z.y[2 * inp.g + j - 1]


def boundary_conjugator(inp: MappingTorusInput, orbit) -> tuple[Word, int]:
    """(v, m) with phi^m(delta_j) = v delta_j v^-1 for the orbit representative j."""
    j, m = orbit[0], len(orbit)
    w = Word.gen(Dl(j))
    for _ in range(m):
        w = substitute(w, inp.phi)
    v, (core, e) = extract_conjugacy(w)
    if core != Dl(j) or e != 1:
        raise ConeError(f"phi^{m}(d{j}) is conjugate to {core.token}^{e}, expected d{j}")
    return v, m


def boundary_compat(inp: MappingTorusInput, z: DeformationCocycle, orbit) -> bool:
    """x_{2g+j} (lambda^m - 1) == -2 y_{2g+j} A with A the translation of rho0(v_j)."""
    v, m = boundary_conjugator(inp, orbit)
    j = orbit[0]
    A = rho0_word(v, inp)[0, 1]
    i = 2 * inp.g + j - 1
    lhs = z.x[i] * (inp.lam ** m - 1)
    rhs = -2 * z.y[i] * A
    return lhs == rhs


def commutator_omega(inp: MappingTorusInput, i: int) -> QuadNum:
    g = inp.g
    if not 1 <= i <= g:
        raise ConeError(f"handle {i} out of range 1..{g}")
    a, b = inp.a, inp.b
    return 2 * (a[i - 1] * b[g + i - 1] - a[g + i - 1] * b[i - 1])


def commutator_omega_matrix(rep_hp, inp: MappingTorusInput, i: int):
    """(4,3) entry of rho_HP([alpha_i, beta_i])."""
    from .words import A as alpha, B as beta

    P, Q = rep_hp[alpha(i)], rep_hp[beta(i)]
    C = P @ Q @ P.inverse() @ Q.inverse()
    return C[3, 2]


def total_omega(inp: MappingTorusInput) -> QuadNum:
    tot = inp.field.zero
    for i in range(1, inp.g + 1):
        tot = tot + commutator_omega(inp, i)
    if not tot:
        raise ConeError("degenerate intersection pairing: input inconsistent with omega_tot != 0")
    # pinned normalization, see module docstring
    assert tot == 2 * intersection_pairing(inp.a, inp.b, inp.g)
    return tot


def _scaled(inp: MappingTorusInput, z_scale) -> MappingTorusInput:
    c = inp.field(z_scale)
    if c == 1:
        return inp
    return inp.with_(mu_s=tuple(c * x for x in inp.mu_s))


def decreasing_choice(inp: MappingTorusInput, z_scale=1) -> dict[int, QuadNum]:
    """Equal split of the constrained total so that every omega_j < 0.

    Returns free y values per orbit representative; raises ConeError if
    omega_tot > 0 or the deformation solve rejects the split.
    """
    tot = total_omega(_scaled(inp, z_scale))
    if tot.sign() > 0:
        raise ConeError(
            f"omega_tot = {tot.literal()} > 0: flip the orientation of the stable measure "
            "(negate mu_s or pass a negative --z-scale)"
        )
    Y = tot / 2
    per_point = Y / inp.n
    bd = boundary_data(inp)
    choice = {orb[0]: per_point for orb in bd.orbits}
    try:
        solve_deformation(inp, z_scale=z_scale, free_y=choice)
    except InconsistentParametersError as exc:
        raise ConeError(f"equal split y = {per_point.literal()} rejected by the deformation solve: {exc}") from None
    return choice


# -- model torus ---------------------------------------------------------------

@dataclass
class ModelTorusReport:
    ok: bool
    meridian_limit: Matrix | None
    longitude_limit: Matrix | None
    meridian_target: Matrix
    longitude_target: Matrix
    detail: str = ""


def model_torus_limit(omega: QuadNum, mu: QuadNum, ed: QuadNum, sign: int = 1) -> ModelTorusReport:
    """First-order limit of the rotation family conjugated by diag(1, 1, 1, 1/t).

    ``cos(th t) = 1 - th^2 t^2/2`` and ``sin(th t) = th t`` modulo ``t^3``;
    ``cosh d``, ``sinh d`` are ``(e^d +- e^-d)/2`` with ``e^d = ed``.
    """
    K = ed.field
    omega, mu = K(omega), K(mu)

    def T(coeffs, lo=0):
        return Series(K, coeffs, lo=lo, hi=2)

    def cos(th):
        return T({0: 1, 2: -th * th / 2})

    def sin(th):
        return T({1: th})

    ch, sh = (ed + 1 / ed) / 2, (ed - 1 / ed) / 2
    o, l = T({}), T({0: 1})
    m_t = Matrix([[l, o, o, o], [o, l, o, o], [o, o, cos(omega), -sin(omega)], [o, o, sin(omega), cos(omega)]])
    l_t = Matrix([
        [T({0: ch}), T({0: sh}), o, o],
        [T({0: sh}), T({0: ch}), o, o],
        [o, o, cos(mu) * sign, -sin(mu)],
        [o, o, sin(mu), cos(mu) * sign],
    ])
    r = Matrix([[l, o, o, o], [o, l, o, o], [o, o, l, o], [o, o, o, T({-1: 1}, lo=-1)]])
    rinv = Matrix([[l, o, o, o], [o, l, o, o], [o, o, l, o], [o, o, o, T({1: 1})]])

    z, one, s = K.zero, K.one, K(sign)
    m_target = Matrix([[one, z, z, z], [z, one, z, z], [z, z, one, z], [z, z, omega, one]])
    l_target = Matrix([[ch, sh, z, z], [sh, ch, z, z], [z, z, s, z], [z, z, mu, s]])
    try:
        m_lim = (r @ m_t @ rinv).map(lambda e: e.limit0())
        l_lim = (r @ l_t @ rinv).map(lambda e: e.limit0())
    except PoleError as exc:
        return ModelTorusReport(False, None, None, m_target, l_target, str(exc))
    ok = m_lim == m_target and l_lim == l_target
    return ModelTorusReport(ok, m_lim, l_lim, m_target, l_target, "" if ok else "limit differs from target")


# -- report --------------------------------------------------------------------

@dataclass
class ComponentReport:
    orbit: tuple[int, ...]
    m: int
    omega: object
    x: object
    compatible: bool


@dataclass
class ConeReport:
    components: list[ComponentReport]
    omega_tot: QuadNum
    pairing: QuadNum                      # i(a, b); omega_tot = 2 * pairing
    constraint_ok: bool                   # sum of omega_j / 2 over points equals omega_tot / 2
    decreasing: dict[int, QuadNum] | None
    decreasing_error: str = ""
    model: ModelTorusReport | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.compatible for c in self.components) and self.constraint_ok


def cone_report(inp: MappingTorusInput, z: DeformationCocycle, z_scale=1) -> ConeReport:
    scaled = _scaled(inp, z_scale)
    bd = boundary_data(inp)
    comps = []
    total_y = inp.field.zero
    for orb in bd.orbits:
        j = orb[0]
        comps.append(ComponentReport(
            tuple(orb), len(orb), meridian_omega(z, j, inp), z.x[2 * inp.g + j - 1],
            boundary_compat(inp, z, orb),
        ))
    for j in range(1, inp.n + 1):
        total_y = total_y + z.y[2 * inp.g + j - 1]
    tot = total_omega(scaled)
    diff = total_y * 2 - tot
    constraint_ok = not diff
    try:
        dec, err = decreasing_choice(inp, z_scale), ""
    except ConeError as exc:
        dec, err = None, str(exc)
    model = None
    if z.is_numeric():
        j = bd.orbits[0][0]
        model = model_torus_limit(meridian_omega(z, j, inp), 2 * z.y0, inp.lam)
    return ConeReport(comps, tot, intersection_pairing(scaled.a, scaled.b, inp.g), constraint_ok, dec, err, model)
