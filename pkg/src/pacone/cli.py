"""Command-line front end.

Examples:
  pacone report --fixture genus2 --format json
  pacone deform --fixture genus2 --set y5=0 --set y6=-2*r
  pacone validate --input my_map.json

Exit codes: 0 success, 1 validation failure, 2 verification or limit
failure, 3 parse or usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import cohomology as coh
from .cone import ConeError, cone_report, decreasing_choice
from .deformation import (
    DeformationSolution,
    InconsistentParametersError,
    SingularSolveError,
    build_system,
    cocycle_residuals,
    dim_h1,
    dim_z1,
    extract_blocks,
    solve_deformation,
)
from .holonomy import hp_rep, rho0_matrix, sol_limit, sol_rep, verify_relations
from .linexpr import LinExpr
from .matrix import Matrix, poly_str
from .presentation import (
    InputError,
    MappingTorusInput,
    ValidationError,
    boundary_data,
    load_fixture,
    load_input,
    serialize,
    validate_homology,
)
from .qfield import PoleError
from .words import TAU

COMMANDS = ("validate", "analyze", "deform", "holonomy", "cone", "report")
OK, INVALID, UNVERIFIED, USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Run:
    """Accumulates report sections and the exit status."""

    def __init__(self, command: str):
        self.command = command
        self.sections: dict[str, object] = {}
        self.summary: list[str] = []
        self.failures: list[str] = []
        self.code = OK

    def fail(self, code: int, where: str, message: str):
        self.failures.append(f"{where}: {message}")
        self.code = max(self.code, code)

    def document(self) -> dict:
        doc = {"command": self.command}
        doc.update(self.sections)
        doc["status"] = {"exit_code": self.code, "failures": list(self.failures)}
        return doc


def lit(v) -> str:
    return v.literal() if hasattr(v, "literal") else str(v)


def mat(M: Matrix) -> list[list[str]]:
    return M.to_json()


# -- pipeline stages --------------------------------------------------------------

def stage_validate(run: Run, inp: MappingTorusInput) -> bool:
    rep = validate_homology(inp)
    run.sections["validation"] = {
        "ok": rep.ok,
        "checks": [
            {"name": c.name, "ok": c.ok, "warning": c.warning, "detail": c.detail, "residual": list(c.residual)}
            for c in rep.checks
        ],
    }
    for c in rep.checks:
        if not c.ok:
            if c.warning:
                run.summary.append(f"warning: {c.name}")
            else:
                run.fail(INVALID, "presentation", c.name)
    return rep.ok


def stage_analyze(run: Run, inp: MappingTorusInput, system=None):
    M = coh.action_matrix(inp)
    p = coh.char_poly(M)
    lamI = Matrix.identity(M.nrows, inp.lam, inp.field.zero)
    ker = coh.kernel(M - lamI)
    bd = boundary_data(inp)
    system = system or build_system(inp)
    z1, h1 = dim_z1(system), dim_h1(system)
    blocks = extract_blocks(system, inp)
    run.sections["analysis"] = {
        "action_matrix": mat(M),
        "char_poly": poly_str(p),
        "char_poly_factors": [[poly_str(f), m] for f, m in coh.rational_factors(p)],
        "lambda_eigenspace": [[lit(x) for x in v] for v in ker],
        "eigenvalue_one_free": coh.eigenvalue_one_check(inp),
        "permutation": {str(j): bd.perm[j] for j in sorted(bd.perm)},
        "orbits": [list(o) for o in bd.orbits],
        "k": bd.k,
        "equations": len(system.equations),
        "unknowns": len(system.unknowns),
        "dim_Z1": z1,
        "dim_H1": h1,
        "blocks": {"K": mat(blocks.K), "C": mat(blocks.C), "D": mat(blocks.D)},
    }
    if h1 == bd.k:
        run.summary.append(f"dim H^1 = {h1} = k")
    else:
        run.summary.append(f"dim H^1 = {h1} != k = {bd.k}")
        run.fail(UNVERIFIED, "deformation", f"dim H^1 = {h1} differs from the number of boundary components k = {bd.k}")
    return system


def parse_sets(items: list[str], inp: MappingTorusInput) -> dict[int, object]:
    bd = boundary_data(inp)
    reps = {o[0] for o in bd.orbits}
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or not name.startswith("y") or not name[1:].isdigit():
            raise UsageError(f"--set expects y<index>=<literal>, got {item!r}")
        j = int(name[1:]) - 2 * inp.g
        if j not in reps:
            names = ", ".join(f"y{2 * inp.g + r}" for r in sorted(reps))
            raise UsageError(f"--set {name}: free parameters are {names}")
        try:
            out[j] = inp.field.parse(value.strip())
        except ValueError as exc:
            raise UsageError(f"--set {name}: {exc}") from None
    return out


def _pin_from_constraints(sol: DeformationSolution):
    """Values of the remaining symbols if the constraints determine all of them."""
    if not sol.symbols or len(sol.constraints) < len(sol.symbols):
        return None
    A = Matrix([[c.coeff(s) for s in sol.symbols] for c in sol.constraints])
    rhs = [-c.constant for c in sol.constraints]
    if A.rank() < len(sol.symbols):
        return None
    x, res = A.solve(rhs)
    if any(res):
        return None
    return dict(zip(sol.symbols, x))


def stage_deform(run: Run, inp: MappingTorusInput, args, system, need_numeric: bool):
    try:
        z_scale = inp.field.parse(args.z_scale)
    except ValueError as exc:
        raise UsageError(f"--z-scale: {exc}") from None
    if not z_scale:
        raise UsageError("--z-scale must be nonzero")
    free = parse_sets(args.set or [], inp)
    notes = []
    if args.decreasing:
        try:
            free = decreasing_choice(inp, z_scale)
        except ConeError as exc:
            # recorded, then the run continues so the remaining sections are still reported
            run.fail(UNVERIFIED, "cone", f"decreasing_choice: {exc}")
            notes.append("decreasing_choice rejected; free values from --set and the constraints")
        else:
            notes.append("free values from decreasing_choice")
    try:
        sol = solve_deformation(inp, z_scale=z_scale, free_y=free, system=system)
    except InconsistentParametersError as exc:
        run.fail(UNVERIFIED, "deformation", str(exc))
        return None
    except SingularSolveError as exc:
        run.fail(UNVERIFIED, "deformation", f"internal: {exc}")
        return None
    if sol.symbols and need_numeric:
        pinned = _pin_from_constraints(sol)
        if pinned is None:
            names = ", ".join(sol.symbols)
            raise UsageError(f"free parameter(s) {names} unset; pass --set or --decreasing")
        g = inp.g
        for name, v in pinned.items():
            free[int(name[1:]) - 2 * g] = v
        notes.append("free values fixed by the surface-relator constraints")
        sol = solve_deformation(inp, z_scale=z_scale, free_y=free, system=system)

    ok, failing = oracle_check(sol, inp)
    run.sections["deformation"] = {
        "z_scale": lit(z_scale),
        "gauge_pivot": f"x{sol.gauge_pivot}",
        "free": {f"y{2 * inp.g + j}": lit(v) for j, v in sorted(sol.free.items())},
        "symbols": list(sol.symbols),
        "constraints": [f"{lit(c)} = 0" for c in sol.constraints],
        "cocycle": {k: lit(v) for k, v in _ordered_values(sol, inp)},
        "oracle": {"ok": ok, "failing_relators": failing},
        "notes": notes,
    }
    if not ok:
        run.fail(UNVERIFIED, "deformation", f"verify_cocycle fails on {', '.join(failing)}")
    return sol


def _ordered_values(sol: DeformationSolution, inp: MappingTorusInput):
    vals = sol.cocycle.values()
    N = inp.rank
    for c in "xyz":
        for i in range(N + 1):
            yield f"{c}{i}", vals[f"{c}{i}"]


def oracle_check(sol: DeformationSolution, inp: MappingTorusInput) -> tuple[bool, list[str]]:
    """Dual-number check; with symbols left, residuals must lie in the span of the constraints."""
    failing = []
    cons = sol.constraints
    for label, p1 in cocycle_residuals(sol.cocycle, inp):
        entries = [e for row in p1 for e in row if e]
        if not entries:
            continue
        if cons and all(isinstance(e, LinExpr) and _in_span(e, cons) for e in entries):
            continue
        failing.append(label)
    return not failing, failing


def _in_span(e: LinExpr, cons: list[LinExpr]) -> bool:
    names = sorted({n for c in cons + [e] for n in c.terms})
    rows = [[c.coeff(n) for n in names] + [c.constant] for c in cons]
    return Matrix(rows).rank() == Matrix(rows + [[e.coeff(n) for n in names] + [e.constant]]).rank()


def stage_holonomy(run: Run, inp: MappingTorusInput, sol: DeformationSolution):
    z = sol.cocycle
    gens = inp.generators() + [TAU]
    hp = hp_rep(inp, z)
    sol_m = sol_rep(inp)
    rel_hp = verify_relations(hp, inp)
    rel_sol = verify_relations(sol_m, inp)
    limit = {"ok": False, "detail": ""}
    try:
        lim = sol_limit(hp)
        bad = [g.token for g in gens if lim[g] != sol_m[g]]
        limit = {"ok": not bad, "detail": "" if not bad else "differs on " + ", ".join(bad)}
    except PoleError as exc:
        limit["detail"] = str(exc)

    def table(rep):
        return [{"relator": c.relator, "ok": c.ok, "sign_flip": c.sign_flip, "max_residual": c.max_residual}
                for c in rep.checks]

    run.sections["holonomy"] = {
        "rho0": {g.token: mat(rho0_matrix(g, inp).re) for g in gens},
        "rho_hp": {g.token: mat(hp[g]) for g in gens},
        "rho_sol": {g.token: mat(sol_m[g]) for g in gens},
        "relations_hp": table(rel_hp),
        "relations_sol": table(rel_sol),
        "sol_limit": limit,
    }
    for name, rep in (("rho_HP", rel_hp), ("rho_Sol", rel_sol)):
        for c in rep.failed():
            run.fail(UNVERIFIED, "holonomy", f"{name} relator {c.relator} residual {c.max_residual}")
    if not limit["ok"]:
        run.fail(UNVERIFIED, "holonomy", f"Sol limit: {limit['detail']}")
    return hp


def stage_cone(run: Run, inp: MappingTorusInput, sol: DeformationSolution):
    rep = cone_report(inp, sol.cocycle, sol.z_scale)
    model = rep.model
    run.sections["cone"] = {
        "components": [
            {"orbit": list(c.orbit), "m": c.m, "omega": lit(c.omega), "x": lit(c.x), "compatible": c.compatible}
            for c in rep.components
        ],
        "omega_tot": lit(rep.omega_tot),
        "pairing_a_b": lit(rep.pairing),
        "pairing_normalization": "omega_tot = 2*i(a,b)",
        "constraint_ok": rep.constraint_ok,
        "decreasing_choice": None if rep.decreasing is None
        else {f"y{2 * inp.g + j}": lit(v) for j, v in sorted(rep.decreasing.items())},
        "decreasing_error": rep.decreasing_error,
        "model_torus": None if model is None else {
            "ok": model.ok,
            "meridian_limit": mat(model.meridian_limit) if model.meridian_limit else None,
            "longitude_limit": mat(model.longitude_limit) if model.longitude_limit else None,
            "detail": model.detail,
        },
    }
    run.summary.append(f"omega_tot = {lit(rep.omega_tot)}")
    for c in rep.components:
        if not c.compatible:
            run.fail(UNVERIFIED, "cone", f"boundary_compat fails on orbit {list(c.orbit)}")
    if not rep.constraint_ok:
        run.fail(UNVERIFIED, "cone", "meridian angles do not sum to omega_tot")
    if model is not None and not model.ok:
        run.fail(UNVERIFIED, "cone", f"model torus limit: {model.detail}")


# -- driver ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pacone", description="Exact deformation data for pseudo-Anosov mapping tori.")
    ap.add_argument("command", choices=COMMANDS)
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="input JSON file")
    src.add_argument("--fixture", help="bundled example (genus2)")
    ap.add_argument("--set", action="append", metavar="NAME=LIT", help="free parameter value, e.g. y5=0 (repeatable)")
    ap.add_argument("--z-scale", default="1", help="scale of the z-part (QuadNum literal, default 1)")
    ap.add_argument("--decreasing", action="store_true", help="choose decreasing cone angles")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--out", help="write the report here instead of standard output")
    return ap


def execute(args) -> Run:
    run = Run(args.command)
    inp = load_fixture(args.fixture) if args.fixture else load_input(args.input)
    run.sections["input"] = json.loads(serialize(inp))
    valid = stage_validate(run, inp)
    if args.command == "validate" or not valid:
        return run
    system = build_system(inp)
    if args.command in ("analyze", "report"):
        stage_analyze(run, inp, system)
        if args.command == "analyze":
            return run
    numeric = args.command in ("holonomy", "cone", "report")
    sol = stage_deform(run, inp, args, system, need_numeric=numeric)
    if sol is None or args.command == "deform":
        return run
    if args.command in ("holonomy", "report"):
        stage_holonomy(run, inp, sol)
    if args.command in ("cone", "report"):
        stage_cone(run, inp, sol)
    return run


def render(run: Run, fmt: str) -> str:
    doc = run.document()
    if fmt == "json":
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    lines = [f"pacone {run.command}"]
    lines += run.summary
    for key, val in doc.items():
        if key == "command":
            continue
        lines.append("")
        lines.append(f"== {key} ==")
        lines += _text(val, "")
    return "\n".join(lines) + "\n"


def _inline(v) -> bool:
    if not isinstance(v, list) or _is_matrix(v):
        return False
    return all(not isinstance(x, dict) and (not isinstance(x, list) or all(not isinstance(y, (list, dict)) for y in x))
               for x in v)


def _is_matrix(v) -> bool:
    return isinstance(v, list) and v and all(isinstance(r, list) and all(isinstance(c, str) for c in r) for r in v)


def _text(val, indent: str) -> list[str]:
    out = []
    if isinstance(val, dict):
        width = max((len(k) for k in val), default=0)
        for k, v in val.items():
            if isinstance(v, (dict, list)) and v and not _inline(v):
                out.append(f"{indent}{k}:")
                out += _text(v, indent + "  ")
            else:
                out.append(f"{indent}{k.ljust(width)} = {_scalar(v)}")
    elif _is_matrix(val):
        out += [indent + line for line in Matrix(val).to_text().splitlines()]
    elif isinstance(val, list):
        for item in val:
            if isinstance(item, dict):
                out.append(indent + "  ".join(f"{k}={_scalar(v)}" for k, v in item.items()))
            else:
                out += _text(item, indent)
    else:
        out.append(indent + _scalar(val))
    return out


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_scalar(x)}" for k, x in v.items()) + "}"
    return str(v)


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else USAGE
    try:
        run = execute(args)
    except ValidationError as exc:
        print(f"error: presentation: {exc}", file=sys.stderr)
        return INVALID
    except InputError as exc:
        print(f"error: presentation: {exc}", file=sys.stderr)
        return USAGE
    except UsageError as exc:
        print(f"error: cli: {exc}", file=sys.stderr)
        return USAGE
    text = render(run, args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    for f in run.failures:
        print(f"failure: {f}", file=sys.stderr)
    return run.code


if __name__ == "__main__":
    raise SystemExit(main())
