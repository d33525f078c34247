"""Free-group words over the generators alpha_i, beta_i, delta_j, tau.

Token syntax: ``a<i>``, ``b<i>``, ``d<j>``, ``t``; a trailing apostrophe marks
an inverse, e.g. ``"a1 b1' d1'"``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

__all__ = [
    "GenClass",
    "Gen",
    "Letter",
    "Word",
    "WordSyntaxError",
    "NotConjugateError",
    "reduce",
    "parse_word",
    "concat_inv",
    "abelianize",
    "extract_conjugacy",
    "substitute",
    "commutator",
    "surface_generators",
]


class WordSyntaxError(ValueError):
    pass


class NotConjugateError(ValueError):
    pass


class GenClass(Enum):
    ALPHA = "a"
    BETA = "b"
    DELTA = "d"
    TAU = "t"


@dataclass(frozen=True, order=True)
class Gen:
    cls: GenClass
    index: int = 1

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("generator index must be positive")
        if self.cls is GenClass.TAU and self.index != 1:
            raise ValueError("tau has index 1")

    @property
    def token(self) -> str:
        return "t" if self.cls is GenClass.TAU else f"{self.cls.value}{self.index}"

    def slot(self, g: int, n: int) -> int:
        """Position in the ordering (alpha_1..alpha_g, beta_1..beta_g, delta_1..delta_n, tau)."""
        if self.cls is GenClass.ALPHA:
            return self.index - 1
        if self.cls is GenClass.BETA:
            return g + self.index - 1
        if self.cls is GenClass.DELTA:
            return 2 * g + self.index - 1
        return 2 * g + n

    def __str__(self):
        return self.token

    def __repr__(self):
        return f"Gen({self.token})"


def A(i: int) -> Gen:
    return Gen(GenClass.ALPHA, i)


def B(i: int) -> Gen:
    return Gen(GenClass.BETA, i)


def Dl(j: int) -> Gen:
    return Gen(GenClass.DELTA, j)


TAU = Gen(GenClass.TAU, 1)

Letter = tuple  # (Gen, +1 | -1)


def reduce(raw: Iterable[tuple[Gen, int]]) -> "Word":
    out: list[tuple[Gen, int]] = []
    for gen, e in raw:
        if e not in (1, -1):
            raise ValueError(f"letter exponent must be +-1, got {e}")
        if out and out[-1][0] == gen and out[-1][1] == -e:
            out.pop()
        else:
            out.append((gen, e))
    return Word(tuple(out), _reduced=True)


class Word:
    """A freely reduced word; immutable and hashable."""

    __slots__ = ("letters",)

    def __init__(self, letters: Sequence[tuple[Gen, int]] = (), _reduced: bool = False):
        if not _reduced:
            letters = reduce(letters).letters
        object.__setattr__(self, "letters", tuple(letters))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @classmethod
    def gen(cls, gen: Gen, e: int = 1) -> "Word":
        return cls(((gen, e),), _reduced=True)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return concat_inv(self, other)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)), _reduced=True)

    def reversed(self) -> "Word":
        """The same letters in the opposite order (not the inverse)."""
        return reduce(reversed(self.letters))

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        out = Word()
        for _ in range(abs(k)):
            out = out * base
        return out

    def gens(self) -> set[Gen]:
        return {g for g, _ in self.letters}

    def to_string(self) -> str:
        return " ".join(g.token + ("'" if e < 0 else "") for g, e in self.letters)

    __str__ = to_string

    def __repr__(self):
        return f"Word({self.to_string()!r})"


_token = re.compile(r"^(?:(?P<cls>[abd])(?P<idx>[1-9]\d*)|(?P<tau>t))(?P<inv>'?)$")


def parse_word(text: str) -> Word:
    """Parse whitespace-separated tokens; ``""`` and ``"1"`` give the empty word."""
    text = text.strip()
    if text in ("", "1"):
        return Word()
    letters = []
    for tok in text.split():
        m = _token.match(tok)
        if not m:
            raise WordSyntaxError(f"unknown generator token {tok!r}")
        if m.group("tau"):
            gen = TAU
        else:
            gen = Gen(GenClass(m.group("cls")), int(m.group("idx")))
        letters.append((gen, -1 if m.group("inv") else 1))
    return reduce(letters)


def concat_inv(a: Word, b: Word, invert_b: bool = False) -> Word:
    if invert_b:
        b = b.inverse()
    return reduce(a.letters + b.letters)


def abelianize(w: Word, g: int, n: int) -> list[int]:
    """Exponent sums ordered (alpha_1..alpha_g, beta_1..beta_g, delta_1..delta_n, tau)."""
    v = [0] * (2 * g + n + 1)
    for gen, e in w:
        v[gen.slot(g, n)] += e
    return v


def extract_conjugacy(w: Word) -> tuple[Word, tuple[Gen, int]]:
    """Write ``w = u * core * u^-1`` with a single-letter core.

    Strips matching outer letters (each stripped pair must be x ... x^-1) until
    one letter remains.  Anything else raises :class:`NotConjugateError`.
    """
    if not w:
        raise NotConjugateError("empty word is not a conjugate of a generator")
    letters = w.letters
    lo, hi = 0, len(letters) - 1
    while hi > lo:
        g1, e1 = letters[lo]
        g2, e2 = letters[hi]
        if g1 != g2 or e1 != -e2:
            break
        lo += 1
        hi -= 1
    if hi != lo:
        raise NotConjugateError(f"{w} is not a conjugate of a generator")
    return Word(letters[:lo], _reduced=True), letters[lo]


def substitute(w: Word, images: dict[Gen, Word]) -> Word:
    """Apply the endomorphism determined by ``images`` (missing generators fixed)."""
    out: list[tuple[Gen, int]] = []
    for gen, e in w:
        img = images.get(gen, Word.gen(gen))
        out.extend(img.letters if e == 1 else img.inverse().letters)
    return reduce(out)


def commutator(u: Word, v: Word) -> Word:
    return reduce(u.letters + v.letters + u.inverse().letters + v.inverse().letters)


def surface_generators(g: int, n: int) -> list[Gen]:
    """gamma_1..gamma_{2g+n} = alpha_1..alpha_g, beta_1..beta_g, delta_1..delta_n."""
    return [A(i) for i in range(1, g + 1)] + [B(i) for i in range(1, g + 1)] + [Dl(j) for j in range(1, n + 1)]
