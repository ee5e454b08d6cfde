"""Exact scalars and exact linear algebra.

Three scalar types are used throughout the package:

* :class:`fractions.Fraction` (and plain ``int``) for rationals,
* :class:`Surd` for values ``q*sqrt(n)`` with ``n`` squarefree,
* :class:`SurdSum` for finite rational combinations of square roots, i.e.
  elements of a multiquadratic field ``Q(sqrt(p1), ..., sqrt(pk))``.

Kernels are computed by fraction-free elimination over the integers
(:func:`rat_kernel`) or, when irrational entries occur, by Gauss-Jordan
elimination over the field generated by the radicals (:func:`surdsum_kernel`).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

__all__ = [
    "Surd",
    "SurdSum",
    "RadicandExplosion",
    "surd_canon",
    "sqrt",
    "as_surdsum",
    "is_rational",
    "to_fraction",
    "format_scalar",
    "parse_scalar",
    "rat_kernel",
    "surdsum_kernel",
    "kernel",
    "rank",
    "MAX_RADICANDS",
]

MAX_RADICANDS = 8

Rational = Union[int, Fraction]


class RadicandExplosion(ArithmeticError):
    """Too many distinct square roots for the multiquadratic kernel."""


_SMALL_PRIMES: list[int] = []


def _small_primes(limit: int = 10_000) -> list[int]:
    if not _SMALL_PRIMES:
        sieve = bytearray([1]) * (limit + 1)
        sieve[0:2] = b"\x00\x00"
        for p in range(2, math.isqrt(limit) + 1):
            if sieve[p]:
                sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
        _SMALL_PRIMES.extend(i for i, flag in enumerate(sieve) if flag)
    return _SMALL_PRIMES


@lru_cache(maxsize=65536)
def square_split(n: int) -> tuple[int, int]:
    """Return ``(s, r)`` with ``n == s*s*r`` and ``r`` squarefree."""
    if n <= 0:
        raise ValueError(f"square_split needs a positive integer, got {n}")
    s, r = 1, 1
    rest = n
    for p in _small_primes():
        if p * p > rest:
            break
        if rest % p:
            continue
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            r *= p
    if rest > 1:
        root = math.isqrt(rest)
        if root * root == rest:
            s *= root
        elif rest < _small_primes()[-1] ** 2:
            r *= rest
        else:
            # large cofactor; never reached for factorial ratios of desk-scale inputs
            from sympy import factorint

            for p, e in factorint(rest).items():
                s *= p ** (e // 2)
                if e % 2:
                    r *= p
    return s, r


@lru_cache(maxsize=4096)
def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    rest = n
    for p in _small_primes():
        if p * p > rest:
            break
        if rest % p == 0:
            out.append(p)
            while rest % p == 0:
                rest //= p
    if rest > 1:
        out.append(rest)
    return tuple(out)


def _mul_radicands(r1: int, r2: int) -> tuple[int, int]:
    """sqrt(r1)*sqrt(r2) == k*sqrt(r) for squarefree r1, r2; returns (k, r)."""
    if r1 == 1:
        return 1, r2
    if r2 == 1:
        return 1, r1
    g = math.gcd(r1, r2)
    return g, (r1 // g) * (r2 // g)


class Surd:
    """``coeff * sqrt(radicand)`` in canonical form (radicand squarefree)."""

    __slots__ = ("coeff", "radicand")

    def __init__(self, coeff: Rational = 0, radicand: int = 1):
        # trusted constructor; use surd_canon for arbitrary radicands
        coeff = Fraction(coeff)
        self.coeff = coeff
        self.radicand = 1 if coeff == 0 else radicand

    def __repr__(self) -> str:
        return f"Surd({self.coeff!r}, {self.radicand})"

    def __str__(self) -> str:
        return format_scalar(self)

    def __eq__(self, other) -> bool:
        if isinstance(other, Surd):
            return self.coeff == other.coeff and self.radicand == other.radicand
        if isinstance(other, (int, Fraction)):
            return self.radicand == 1 and self.coeff == other
        if isinstance(other, SurdSum):
            return as_surdsum(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.radicand == 1:
            return hash(self.coeff)
        return hash((self.coeff, self.radicand))

    def __bool__(self) -> bool:
        return self.coeff != 0

    def __neg__(self) -> Surd:
        return Surd(-self.coeff, self.radicand)

    def __mul__(self, other):
        if isinstance(other, Surd):
            k, r = _mul_radicands(self.radicand, other.radicand)
            return Surd(self.coeff * other.coeff * k, r)
        if isinstance(other, (int, Fraction)):
            return Surd(self.coeff * other, self.radicand)
        if isinstance(other, SurdSum):
            return as_surdsum(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> Surd:
        if not self.coeff:
            raise ZeroDivisionError("inverse of zero surd")
        return Surd(1 / (self.coeff * self.radicand), self.radicand)

    def __truediv__(self, other):
        if isinstance(other, Surd):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            return Surd(self.coeff / other, self.radicand)
        if isinstance(other, SurdSum):
            return as_surdsum(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Surd, SurdSum)):
            total = as_surdsum(self) + other
            return total
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def square(self) -> Fraction:
        return self.coeff * self.coeff * self.radicand

    def __float__(self) -> float:
        return float(self.coeff) * math.sqrt(self.radicand)

    @property
    def is_rational(self) -> bool:
        return self.radicand == 1


def surd_canon(coeff: Rational, radicand: Rational) -> Surd:
    """Canonical ``Surd`` with value ``coeff * sqrt(radicand)``."""
    coeff = Fraction(coeff)
    radicand = Fraction(radicand)
    if radicand < 0:
        raise ValueError("negative radicand")
    if coeff == 0 or radicand == 0:
        return Surd(0)
    # sqrt(p/q) = sqrt(p*q)/q
    p, q = radicand.numerator, radicand.denominator
    s, r = square_split(p * q)
    return Surd(coeff * s / q, r)


def sqrt(x: Rational) -> Surd:
    return surd_canon(1, x)


class SurdSum:
    """Finite sum ``sum_r c_r * sqrt(r)`` over squarefree radicands ``r``."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: dict[int, Fraction] | None = None):
        self.terms = {r: Fraction(c) for r, c in (terms or {}).items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[int, Fraction]) -> SurdSum:
        out = cls.__new__(cls)
        out.terms = terms
        out._hash = None
        return out

    def __repr__(self) -> str:
        return f"SurdSum({dict(sorted(self.terms.items()))!r})"

    def __str__(self) -> str:
        return format_scalar(self)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        try:
            other = as_surdsum(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            if set(self.terms) <= {1}:
                self._hash = hash(self.terms.get(1, Fraction(0)))
            else:
                self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    @property
    def radicands(self) -> tuple[int, ...]:
        return tuple(sorted(self.terms))

    @property
    def is_rational(self) -> bool:
        return set(self.terms) <= {1}

    def to_surd(self) -> Surd:
        if len(self.terms) > 1:
            raise ValueError(f"{self} has more than one radicand")
        if not self.terms:
            return Surd(0)
        (r, c), = self.terms.items()
        return Surd(c, r)

    def __neg__(self) -> SurdSum:
        return SurdSum._raw({r: -c for r, c in self.terms.items()})

    def __add__(self, other):
        try:
            other = as_surdsum(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for r, c in other.terms.items():
            v = out.get(r, 0) + c
            if v:
                out[r] = v
            else:
                out.pop(r, None)
        return SurdSum._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = as_surdsum(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return as_surdsum(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return SurdSum._raw({})
            return SurdSum._raw({r: c * other for r, c in self.terms.items()})
        try:
            other = as_surdsum(other)
        except TypeError:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for r1, c1 in self.terms.items():
            for r2, c2 in other.terms.items():
                k, r = _mul_radicands(r1, r2)
                v = out.get(r, 0) + c1 * c2 * k
                if v:
                    out[r] = v
                else:
                    out.pop(r, None)
        return SurdSum._raw(out)

    __rmul__ = __mul__

    def inverse(self) -> SurdSum:
        if not self.terms:
            raise ZeroDivisionError("inverse of zero SurdSum")
        if len(self.terms) == 1:
            return as_surdsum(self.to_surd().inverse())
        # rationalize against one prime at a time: x * conj_p(x) lies in a smaller field
        p = max(q for r in self.terms for q in _prime_factors(r))
        conj = SurdSum._raw({r: (-c if r % p == 0 else c) for r, c in self.terms.items()})
        norm = self * conj
        return conj * norm.inverse()

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        try:
            other = as_surdsum(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_surdsum(other) * self.inverse()

    def conjugates_sign(self) -> int:
        """Sign of the real value, decided exactly."""
        return _sign(self)

    def __float__(self) -> float:
        return sum(float(c) * math.sqrt(r) for r, c in self.terms.items())


def _sign(x: SurdSum) -> int:
    if not x.terms:
        return 0
    if len(x.terms) == 1:
        (_, c), = x.terms.items()
        return 1 if c > 0 else -1
    # split off one prime: x = A + B*sqrt(p); sign decided by comparing A^2 and p*B^2
    p = max(q for r in x.terms for q in _prime_factors(r))
    a = SurdSum._raw({r: c for r, c in x.terms.items() if r % p})
    b = SurdSum._raw({r // p: c for r, c in x.terms.items() if r % p == 0})
    sa, sb = _sign(a), _sign(b)
    if sa == 0:
        return sb
    if sb == 0 or sa == sb:
        return sa
    diff = _sign(a * a - b * b * p)
    return sa if diff > 0 else (sb if diff < 0 else 0)


def as_surdsum(x) -> SurdSum:
    if isinstance(x, SurdSum):
        return x
    if isinstance(x, Surd):
        return SurdSum._raw({x.radicand: x.coeff} if x.coeff else {})
    if isinstance(x, (int, Fraction)):
        return SurdSum._raw({1: Fraction(x)} if x else {})
    raise TypeError(f"cannot convert {type(x).__name__} to SurdSum")


def is_rational(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return True
    return x.is_rational


def to_fraction(x) -> Fraction:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, Surd):
        if x.radicand != 1:
            raise ValueError(f"{x} is irrational")
        return x.coeff
    if isinstance(x, SurdSum):
        if not x.is_rational:
            raise ValueError(f"{x} is irrational")
        return x.terms.get(1, Fraction(0))
    raise TypeError(type(x).__name__)


def simplify(x):
    """Demote a scalar to the simplest exact type that represents it."""
    if isinstance(x, SurdSum):
        if x.is_rational:
            return x.terms.get(1, Fraction(0))
        return x
    if isinstance(x, Surd):
        return x.coeff if x.radicand == 1 else x
    return x


def _format_term(c: Fraction, r: int) -> str:
    if r == 1:
        return str(c)
    return f"{c}*sqrt({r})"


def format_scalar(x) -> str:
    """Canonical text: ``p/q*sqrt(n)``, ``p/q`` when n == 1, ``0`` for zero."""
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    if isinstance(x, Surd):
        return _format_term(x.coeff, x.radicand) if x.coeff else "0"
    if isinstance(x, SurdSum):
        if not x.terms:
            return "0"
        return "+".join(_format_term(x.terms[r], r) for r in sorted(x.terms))
    raise TypeError(type(x).__name__)


def _parse_term(text: str):
    text = text.strip()
    if "sqrt(" in text:
        head, _, tail = text.partition("sqrt(")
        radicand = int(tail.rstrip(")"))
        head = head.rstrip("*").strip()
        coeff = Fraction(head) if head not in ("", "+", "-") else Fraction(f"{head}1")
        return surd_canon(coeff, radicand)
    return surd_canon(Fraction(text), 1)


def parse_scalar(text: str):
    """Inverse of :func:`format_scalar`."""
    parts = [p for p in text.split("+") if p.strip()]
    if len(parts) <= 1:
        return _parse_term(text) if parts else Surd(0)
    total = SurdSum()
    for part in parts:
        total = total + _parse_term(part)
    return total


# ---------------------------------------------------------------------------
# kernels


def _integer_rows(M: Iterable[Sequence], ncols: int) -> list[list[int]]:
    rows = []
    seen = set()
    for row in M:
        if len(row) != ncols:
            raise ValueError("ragged matrix")
        fr = [to_fraction(x) for x in row]
        den = 1
        for x in fr:
            if x.denominator != 1:
                den = den * x.denominator // math.gcd(den, x.denominator)
        ints = [int(x * den) for x in fr]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        if g == 0:
            continue
        first = next(v for v in ints if v)
        if first < 0:
            g = -g
        ints = [v // g for v in ints]
        key = tuple(ints)
        if key in seen:
            continue
        seen.add(key)
        rows.append(ints)
    return rows


def _bareiss_echelon(A: list[list[int]], ncols: int) -> list[int]:
    """In-place fraction-free row echelon form; returns pivot columns."""
    nrows = len(A)
    r = 0
    prev = 1
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if A[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            A[r], A[piv] = A[piv], A[r]
        prow = A[r]
        p = prow[c]
        for i in range(r + 1, nrows):
            row = A[i]
            a = row[c]
            if a:
                for j in range(c + 1, ncols):
                    row[j] = (p * row[j] - a * prow[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    row[j] = (p * row[j]) // prev
            row[c] = 0
        prev = p
        pivots.append(c)
        r += 1
    return pivots


def _normalize_rational(vec: Sequence[Fraction]) -> list[int]:
    den = 1
    for x in vec:
        x = Fraction(x)
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(Fraction(x) * den) for x in vec]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    first = next(v for v in ints if v)
    if first < 0:
        g = -g
    return [v // g for v in ints]


def rat_kernel(M: Sequence[Sequence], ncols: int | None = None) -> list[list[int]]:
    """Basis of the right nullspace of a rational matrix.

    Vectors are integer, coprime, with positive first non-zero entry; one
    vector per free column of the echelon form, in column order.
    """
    M = list(M)
    if ncols is None:
        if not M:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(M[0])
    A = _integer_rows(M, ncols)
    pivots = _bareiss_echelon(A, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        x: list[Fraction] = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            row = A[r]
            s = Fraction(0)
            for j in range(c + 1, ncols):
                if row[j] and x[j]:
                    s += row[j] * x[j]
            x[c] = -s / row[c]
        basis.append(_normalize_rational(x))
    return basis


def _count_radicands(M) -> set[int]:
    rads: set[int] = set()
    for row in M:
        for x in row:
            if isinstance(x, Surd):
                if x.coeff:
                    rads.add(x.radicand)
            elif isinstance(x, SurdSum):
                rads.update(x.terms)
    rads.discard(1)
    return rads


def surdsum_kernel(M: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Right nullspace over the real field generated by the radicals in ``M``.

    Gauss-Jordan elimination with the first non-zero pivot scanning down each
    column. Each basis vector has a 1 at its free column; vectors with all
    rational entries are renormalized exactly like :func:`rat_kernel`.
    """
    M = [list(row) for row in M]
    if ncols is None:
        if not M:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(M[0])
    rads = _count_radicands(M)
    if len(rads) > MAX_RADICANDS:
        raise RadicandExplosion(
            f"{len(rads)} distinct radicands exceed the bound {MAX_RADICANDS}"
        )
    A = [[as_surdsum(x) for x in row] for row in M if any(row)]
    nrows = len(A)
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = A[r][c].inverse()
        A[r] = [x * inv if x else x for x in A[r]]
        prow = A[r]
        for i in range(nrows):
            if i != r and A[i][c]:
                a = A[i][c]
                A[i] = [x - a * y if y else x for x, y in zip(A[i], prow)]
        pivots.append(c)
        r += 1
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        x = [SurdSum() for _ in range(ncols)]
        x[f] = as_surdsum(1)
        for row_idx, c in enumerate(pivots):
            x[c] = -A[row_idx][f]
        if all(v.is_rational for v in x):
            basis.append(_normalize_rational([to_fraction(v) for v in x]))
        else:
            basis.append([simplify(v) for v in x])
    return basis


def _all_rational(M) -> bool:
    for row in M:
        for x in row:
            if not isinstance(x, (int, Fraction)) and not x.is_rational:
                return False
    return True


def kernel(M: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Nullspace basis, taking the rational route whenever possible."""
    M = list(M)
    if _all_rational(M):
        return rat_kernel(M, ncols)
    return surdsum_kernel(M, ncols)


def rank(M: Sequence[Sequence], ncols: int | None = None) -> int:
    M = list(M)
    if ncols is None:
        if not M:
            return 0
        ncols = len(M[0])
    return ncols - len(kernel(M, ncols))
