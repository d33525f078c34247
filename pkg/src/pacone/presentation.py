"""Input data for a mapping torus of a pseudo-Anosov map, with validation.

The input document is JSON::

    {
      "disc": 21, "genus": 2, "num_sing": 2,
      "lambda": "(5+1*r)/2",
      "word_order": "rtl",                      # optional, default "ltr"
      "phi": {"a1": "...", "a2": "...", "b1": "...", "b2": "...", "d1": "...", "d2": "..."},
      "mu_u": ["(3+1*r)/2", ...],               # 2g+n entries
      "mu_s": [...]
    }

``word_order`` says how the image strings are multiplied out: ``"ltr"``
means the written word is the group element read left to right, ``"rtl"``
means the letters compose right to left, so the string is reversed on
ingestion.  After parsing every image is stored in left-to-right form.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .qfield import QuadField, QuadNum
from .words import (
    Gen,
    GenClass,
    NotConjugateError,
    Word,
    WordSyntaxError,
    abelianize,
    commutator,
    concat_inv,
    extract_conjugacy,
    parse_word,
    surface_generators,
)

__all__ = [
    "InputError",
    "MappingTorusInput",
    "BoundaryData",
    "Check",
    "HomologyReport",
    "parse_input",
    "load_input",
    "load_fixture",
    "serialize",
    "boundary_data",
    "validate_homology",
    "surface_relator",
    "FIXTURES",
    "ValidationError",
]

FIXTURES = {"genus2": "genus2.json"}


class InputError(ValueError):
    """Schema or validation failure; ``where`` names the offending field."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where
        self.message = message


class ValidationError(InputError):
    """Well-formed input that fails a semantic validation check."""


@dataclass(frozen=True)
class MappingTorusInput:
    g: int
    n: int
    field: QuadField
    lam: QuadNum
    phi: dict[Gen, Word]
    mu_u: tuple[QuadNum, ...]
    mu_s: tuple[QuadNum, ...]
    word_order: str = "ltr"

    @property
    def d(self) -> int:
        return self.field.d

    @property
    def a(self) -> tuple[QuadNum, ...]:
        return self.mu_u

    @property
    def b(self) -> tuple[QuadNum, ...]:
        return self.mu_s

    @property
    def rank(self) -> int:
        return 2 * self.g + self.n

    def generators(self) -> list[Gen]:
        return surface_generators(self.g, self.n)

    def with_(self, **changes) -> "MappingTorusInput":
        """Copy with fields replaced; the result is *not* re-validated."""
        data = {f: getattr(self, f) for f in self.__dataclass_fields__}
        data.update(changes)
        return MappingTorusInput(**data)


@dataclass(frozen=True)
class BoundaryData:
    perm: dict[int, int]
    conjugators: dict[int, Word]
    orbits: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.orbits)

    def orbit_of(self, j: int) -> tuple[int, ...]:
        return next(o for o in self.orbits if j in o)


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""
    residual: list[str] = field(default_factory=list)
    warning: bool = False


@dataclass
class HomologyReport:
    checks: list[Check]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks if not c.warning)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.ok and not c.warning]


def _require(doc: dict, key: str, typ):
    if key not in doc:
        raise InputError(key, "missing field")
    val = doc[key]
    if typ is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise InputError(key, f"expected integer, got {val!r}")
    if typ is not int and not isinstance(val, typ):
        raise InputError(key, f"expected {typ.__name__}, got {type(val).__name__}")
    return val


def _quad(K: QuadField, text: Any, where: str) -> QuadNum:
    if isinstance(text, int) and not isinstance(text, bool):
        return K(text)
    if not isinstance(text, str):
        raise InputError(where, f"expected QuadNum literal, got {text!r}")
    try:
        return K.parse(text)
    except ValueError as exc:
        raise InputError(where, str(exc)) from None


def parse_input(document: str | dict) -> MappingTorusInput:
    """Parse and fully validate an input document (JSON text or decoded dict)."""
    if isinstance(document, str):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InputError(f"line {exc.lineno}", f"invalid JSON: {exc.msg}") from None
    else:
        doc = document
    if not isinstance(doc, dict):
        raise InputError("<root>", "expected a JSON object")

    disc = _require(doc, "disc", int)
    try:
        K = QuadField(disc)
    except ValueError as exc:
        raise InputError("disc", str(exc)) from None
    g = _require(doc, "genus", int)
    n = _require(doc, "num_sing", int)
    if g < 1:
        raise InputError("genus", "genus must be >= 1")
    if n < 1:
        raise InputError("num_sing", "num_sing must be >= 1")
    lam = _quad(K, _require(doc, "lambda", (str, int)), "lambda")
    order = doc.get("word_order", "ltr")
    if order not in ("ltr", "rtl"):
        raise InputError("word_order", f"expected 'ltr' or 'rtl', got {order!r}")

    phi_doc = _require(doc, "phi", dict)
    gens = surface_generators(g, n)
    expected = {gen.token for gen in gens}
    extra = set(phi_doc) - expected
    if extra:
        raise InputError("phi", f"unexpected generator keys {sorted(extra)}")
    phi: dict[Gen, Word] = {}
    for gen in gens:
        where = f"phi.{gen.token}"
        if gen.token not in phi_doc:
            raise InputError(where, "missing image")
        text = phi_doc[gen.token]
        if not isinstance(text, str):
            raise InputError(where, "expected word string")
        try:
            w = parse_word(text)
        except WordSyntaxError as exc:
            raise InputError(where, str(exc)) from None
        for h in w.gens():
            if h.cls is GenClass.TAU:
                raise InputError(where, "tau may not appear in a monodromy image")
            limit = n if h.cls is GenClass.DELTA else g
            if h.index > limit:
                raise InputError(where, f"generator {h.token} out of range")
        phi[gen] = w.reversed() if order == "rtl" else w

    mu = {}
    for key in ("mu_u", "mu_s"):
        vals = _require(doc, key, list)
        if len(vals) != 2 * g + n:
            raise InputError(key, f"expected {2 * g + n} entries, got {len(vals)}")
        mu[key] = tuple(_quad(K, v, f"{key}[{i}]") for i, v in enumerate(vals))

    inp = MappingTorusInput(g, n, K, lam, phi, mu["mu_u"], mu["mu_s"], order)
    validate_input(inp)
    return inp


def validate_input(inp: MappingTorusInput) -> None:
    if inp.lam <= 1:
        raise ValidationError("lambda", "dilatation must exceed 1")
    g, n = inp.g, inp.n
    for key, vec in (("mu_u", inp.mu_u), ("mu_s", inp.mu_s)):
        for j in range(n):
            if vec[2 * g + j]:
                raise ValidationError(f"{key}[{2 * g + j}]", "measure of puncture loop must vanish")
    boundary_data(inp)


def boundary_data(inp: MappingTorusInput) -> BoundaryData:
    n = inp.n
    perm: dict[int, int] = {}
    conj: dict[int, Word] = {}
    for j in range(1, n + 1):
        where = f"phi.d{j}"
        try:
            u, (core, e) = extract_conjugacy(inp.phi[Gen(GenClass.DELTA, j)])
        except NotConjugateError as exc:
            raise ValidationError(where, str(exc)) from None
        if core.cls is not GenClass.DELTA:
            raise ValidationError(where, f"image is conjugate to {core.token}, not to a puncture loop")
        if e != 1:
            raise ValidationError(where, "orientation-reversing image of a puncture loop")
        perm[j] = core.index
        conj[j] = u
    if sorted(perm.values()) != list(range(1, n + 1)):
        raise ValidationError("phi", f"puncture images {perm} do not form a permutation")
    seen: set[int] = set()
    orbits = []
    for j in range(1, n + 1):
        if j in seen:
            continue
        cyc = [j]
        seen.add(j)
        nxt = perm[j]
        while nxt != j:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt]
        orbits.append(tuple(cyc))
    return BoundaryData(perm, conj, tuple(orbits))


def surface_relator(g: int, n: int) -> Word:
    """prod_i [alpha_i, beta_i] * (prod_j delta_j)^-1."""
    gens = surface_generators(g, n)
    lhs = Word()
    for i in range(g):
        lhs = lhs * commutator(Word.gen(gens[i]), Word.gen(gens[g + i]))
    rhs = Word()
    for j in range(n):
        rhs = rhs * Word.gen(gens[2 * g + j])
    return concat_inv(lhs, rhs, invert_b=True)


def validate_homology(inp: MappingTorusInput) -> HomologyReport:
    from . import cohomology as coh
    from .matrix import Matrix
    from .words import substitute

    K = inp.field
    g, n = inp.g, inp.n
    M = coh.action_matrix(inp)
    checks = []

    res_a = [x - inp.lam * y for x, y in zip(M.apply(inp.mu_u), inp.mu_u)]
    checks.append(
        Check("unstable measure is a lambda-eigenvector", all(not r for r in res_a),
              "M a = lambda a", [r.literal() for r in res_a])
    )
    lam_inv = 1 / inp.lam
    res_b = [x - lam_inv * y for x, y in zip(M.apply(inp.mu_s), inp.mu_s)]
    checks.append(
        Check("stable measure is a 1/lambda-eigenvector", all(not r for r in res_b),
              "M b = lambda^-1 b", [r.literal() for r in res_b])
    )

    # surface relation respected in homology
    rel_img = Word()
    for i in range(g):
        rel_img = rel_img * commutator(inp.phi[surface_generators(g, n)[i]], inp.phi[surface_generators(g, n)[g + i]])
    prod_d = Word()
    for j in range(1, n + 1):
        prod_d = prod_d * inp.phi[Gen(GenClass.DELTA, j)]
    ab = abelianize(concat_inv(rel_img, prod_d, invert_b=True), g, n)
    head, dpart = ab[: 2 * g], ab[2 * g: 2 * g + n]
    in_span = not any(head) and len(set(dpart)) <= 1 and not ab[-1]
    checks.append(
        Check("surface relation respected in homology", in_span,
              "abelianization of phi(prod [a_i,b_i]) (prod phi(d_j))^-1 in span of delta-ones",
              [str(x) for x in ab])
    )

    Phi = coh.closed_block(inp)
    det = (Phi - Matrix.identity(2 * g, K.one, K.zero)).det()
    checks.append(
        Check("1 is not an eigenvalue of phi^* on the closed surface", bool(det),
              f"det(phi^* - I) = {det.literal()}", [det.literal()])
    )

    # free-group level: phi(R) conjugate to R or R^-1; warning only
    rel = surface_relator(g, n)
    img = substitute(rel, inp.phi)
    ok = _cyclically_equal(img, rel) or _cyclically_equal(img, rel.inverse())
    checks.append(
        Check("phi preserves the surface relator up to conjugacy (free group)", ok,
              "checked on cyclically reduced words", [] if ok else [img.to_string()], warning=True)
    )
    return HomologyReport(checks)


def _cyclic_reduce(w: Word) -> Word:
    letters = list(w.letters)
    while len(letters) > 1 and letters[0][0] == letters[-1][0] and letters[0][1] == -letters[-1][1]:
        letters = letters[1:-1]
    return Word(letters)


def _cyclically_equal(u: Word, v: Word) -> bool:
    cu, cv = _cyclic_reduce(u), _cyclic_reduce(v)
    if len(cu) != len(cv):
        return False
    if not cu:
        return True
    s = cu.letters + cu.letters
    return any(s[i:i + len(cv)] == cv.letters for i in range(len(cu)))


def serialize(inp: MappingTorusInput) -> str:
    phi = {}
    for gen in inp.generators():
        w = inp.phi[gen]
        phi[gen.token] = (w.reversed() if inp.word_order == "rtl" else w).to_string()
    doc = {
        "disc": inp.d,
        "genus": inp.g,
        "num_sing": inp.n,
        "lambda": inp.lam.literal(),
        "word_order": inp.word_order,
        "phi": phi,
        "mu_u": [x.literal() for x in inp.mu_u],
        "mu_s": [x.literal() for x in inp.mu_s],
    }
    return json.dumps(doc, indent=2) + "\n"


def load_input(path: str | Path) -> MappingTorusInput:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(str(path), f"cannot read input: {exc.strerror}") from None
    return parse_input(text)


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise InputError("--fixture", f"unknown fixture {name!r}; known: {sorted(FIXTURES)}")
    return resources.files("pacone.data").joinpath(FIXTURES[name]).read_text(encoding="utf-8")


def load_fixture(name: str = "genus2") -> MappingTorusInput:
    return parse_input(fixture_text(name))
