"""Clebsch-Gordan coefficients.

Arguments are half-integers. Internally every ``j``/``m`` is passed around in
doubled form (``2j`` as an int); :class:`HalfInt` is a thin wrapper for callers
that prefer explicit objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .exact import Surd, surd_canon

__all__ = [
    "HalfInt",
    "CGKey",
    "DomainError",
    "triangle",
    "delta",
    "cg",
    "cg2",
    "cg_special",
    "special_key",
    "SPECIAL_KINDS",
]


class DomainError(ValueError):
    """A closed form was evaluated outside its factorial domain."""


@dataclass(frozen=True, order=True)
class HalfInt:
    doubled: int

    @classmethod
    def of(cls, x) -> HalfInt:
        if isinstance(x, HalfInt):
            return x
        x2 = Fraction(x) * 2
        if x2.denominator != 1:
            raise ValueError(f"{x} is not a half-integer")
        return cls(int(x2))

    @property
    def is_integer(self) -> bool:
        return self.doubled % 2 == 0

    def __str__(self) -> str:
        return str(self.doubled // 2) if self.is_integer else f"{self.doubled}/2"


@dataclass(frozen=True)
class CGKey:
    j1: HalfInt
    m1: HalfInt
    j2: HalfInt
    m2: HalfInt
    j3: HalfInt
    m3: HalfInt

    @classmethod
    def of(cls, j1, m1, j2, m2, j3, m3) -> CGKey:
        return cls(*(HalfInt.of(x) for x in (j1, m1, j2, m2, j3, m3)))

    def doubled(self) -> tuple[int, int, int, int, int, int]:
        return (self.j1.doubled, self.m1.doubled, self.j2.doubled,
                self.m2.doubled, self.j3.doubled, self.m3.doubled)

    def __str__(self) -> str:
        j1, m1, j2, m2, j3, m3 = (str(x) for x in (self.j1, self.m1, self.j2, self.m2, self.j3, self.m3))
        return f"cg({j1},{m1};{j2},{m2}|{j3},{m3})"


def _tri2(a2: int, b2: int, c2: int) -> bool:
    if a2 < 0 or b2 < 0 or c2 < 0:
        return False
    if (a2 + b2 + c2) % 2:
        return False
    return abs(a2 - b2) <= c2 <= a2 + b2


def triangle(j1, j2, j3) -> bool:
    """True iff ``j1+j2+j3`` is an integer and ``|j1-j2| <= j3 <= j1+j2``."""
    return _tri2(HalfInt.of(j1).doubled, HalfInt.of(j2).doubled, HalfInt.of(j3).doubled)


def _fact(n2: int) -> int:
    # n2 is a doubled argument known to be even
    if n2 < 0 or n2 % 2:
        raise DomainError(f"factorial of {n2}/2")
    return factorial(n2 // 2)


@lru_cache(maxsize=None)
def _delta_sq(a2: int, b2: int, c2: int) -> Fraction:
    num = _fact(a2 + b2 - c2) * _fact(a2 - b2 + c2) * _fact(-a2 + b2 + c2)
    return Fraction(num, _fact(a2 + b2 + c2 + 2))


def delta(j1, j2, j3) -> Surd:
    a2, b2, c2 = (HalfInt.of(x).doubled for x in (j1, j2, j3))
    if not _tri2(a2, b2, c2):
        return Surd(0)
    return surd_canon(1, _delta_sq(a2, b2, c2))


def _admissible(j1, m1, j2, m2, j3, m3) -> bool:
    if m1 + m2 != m3:
        return False
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        if abs(m) > j or (j - m) % 2:
            return False
    return _tri2(j1, j2, j3)


def _cg_core(j1, m1, j2, m2, j3, m3) -> Surd:
    """Racah sum; requires m3 >= 0 and j1 >= j2 (doubled arguments)."""
    d2 = _delta_sq(j1, j2, j3)
    rad = d2 * (j3 + 1)
    for x in (j1 + m1, j1 - m1, j2 + m2, j2 - m2, j3 + m3, j3 - m3):
        rad *= _fact(x)
    # r ranges over every integer keeping all six factorial arguments >= 0
    dec = [j1 + j2 - j3, j1 - m1, j2 + m2]  # arguments of the form x - r
    inc = [j3 - j2 + m1, j3 - j1 - m2]  # arguments of the form x + r
    if any(x % 2 for x in dec + inc):
        return Surd(0)
    dec = [x // 2 for x in dec]
    inc = [x // 2 for x in inc]
    lo = max([0] + [-x for x in inc])
    hi = min(dec)
    total = Fraction(0)
    for r in range(lo, hi + 1):
        den = factorial(r)
        for x in dec:
            den *= factorial(x - r)
        for x in inc:
            den *= factorial(x + r)
        total += Fraction(-1 if r % 2 else 1, den)
    return surd_canon(total, rad)


@lru_cache(maxsize=200_000)
def cg2(j1: int, m1: int, j2: int, m2: int, j3: int, m3: int) -> Surd:
    """CG coefficient with every argument given in doubled form."""
    if not _admissible(j1, m1, j2, m2, j3, m3):
        return Surd(0)
    sign_exp = (j1 + j2 - j3) // 2
    sign = -1 if sign_exp % 2 else 1
    if m3 < 0:
        return sign * cg2(j1, -m1, j2, -m2, j3, -m3)
    if j1 < j2:
        return sign * cg2(j2, m2, j1, m1, j3, m3)
    return _cg_core(j1, m1, j2, m2, j3, m3)


def cg(j1, m1=None, j2=None, m2=None, j3=None, m3=None) -> Surd:
    """CG(j1,m1; j2,m2 | j3,m3) as an exact canonical surd.

    Accepts either a :class:`CGKey` or six half-integer values (int,
    Fraction, or HalfInt). Out-of-range keys evaluate to 0.
    """
    if isinstance(j1, CGKey):
        return cg2(*j1.doubled())
    vals = (j1, m1, j2, m2, j3, m3)
    return cg2(*(HalfInt.of(x).doubled for x in vals))


SPECIAL_KINDS = ("sum-top", "diff-a", "diff-b", "aligned")


def _ratio(num: list[int], den: list[int]) -> Fraction:
    for x in num + den:
        if x < 0:
            raise DomainError("negative factorial argument in closed form")
    out = Fraction(1)
    for x in num:
        out *= factorial(x)
    for x in den:
        out /= factorial(x)
    return out


def cg_special(kind: str, a: int, b: int, i: int, j: int) -> Surd:
    """Closed-form CG values for the extreme components of V(a)⊗V(b).

    ``sum-top``  CG(a/2,a/2-i; b/2,b/2-j | (a+b)/2, (a+b)/2-i-j)
    ``diff-a``   CG(a/2,a/2-i; b/2,j-b/2 | (a-b)/2, (a-b)/2-i+j)
    ``diff-b``   CG(a/2,i-a/2; b/2,b/2-j | (b-a)/2, (b-a)/2+i-j)
    ``aligned``  CG(a/2,a/2-i; b/2,b/2-j | c/2, c/2) with c = a+b-2(i+j)
    """
    if not (0 <= i <= a and 0 <= j <= b):
        raise DomainError(f"indices i={i}, j={j} outside 0..{a}, 0..{b}")
    if kind == "sum-top":
        val = _ratio([a, b, a + b - i - j, i + j], [i, j, a + b, a - i, b - j])
        return surd_canon(1, val)
    if kind == "diff-a":
        val = _ratio([a - i, i, b, a - b + 1], [a + 1, j, b - j, a - b - i + j, i - j])
        return surd_canon((-1) ** j, val)
    if kind == "diff-b":
        # mirror of diff-a through the factor swap; the swap contributes (-1)^a
        val = _ratio([b - j, j, a, b - a + 1], [b + 1, i, a - i, b - a - j + i, j - i])
        return surd_canon((-1) ** (a + i), val)
    if kind == "aligned":
        val = _ratio(
            [a + b - 2 * i - 2 * j + 1, i + j, a - i, b - j],
            [a + b - i - j + 1, a - i - j, b - i - j, i, j],
        )
        return surd_canon((-1) ** i, val)
    raise ValueError(f"unknown kind {kind!r}; expected one of {SPECIAL_KINDS}")


def special_key(kind: str, a: int, b: int, i: int, j: int) -> CGKey:
    """The general-formula key that ``cg_special(kind, a, b, i, j)`` evaluates."""
    if kind == "sum-top":
        args = (a, a - 2 * i, b, b - 2 * j, a + b, a + b - 2 * i - 2 * j)
    elif kind == "diff-a":
        args = (a, a - 2 * i, b, 2 * j - b, a - b, a - b - 2 * i + 2 * j)
    elif kind == "diff-b":
        args = (a, 2 * i - a, b, b - 2 * j, b - a, b - a + 2 * i - 2 * j)
    elif kind == "aligned":
        c = a + b - 2 * i - 2 * j
        args = (a, a - 2 * i, b, b - 2 * j, c, c)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return CGKey(*(HalfInt(x) for x in args))
