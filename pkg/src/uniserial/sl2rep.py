"""Irreducible sl(2)-modules V(a) and their tensor products.

Two bases of V(a) are kept side by side.

* The *unitary* basis ``v_0..v_a`` with
  ``e v_k = sqrt(k(a-k+1)) v_{k-1}`` and ``f v_k = sqrt((k+1)(a-k)) v_{k+1}``.
  Clebsch-Gordan coefficients are defined relative to it.
* The *rational* basis ``w_k = v_k / c_k`` with ``c_k = sqrt(k!(a-k)!)``, in
  which ``e w_k = (a-k+1) w_{k-1}`` and ``f w_k = (k+1) w_{k+1}``.

Coordinates convert as ``x_w = D x_v`` and matrices as ``X_w = D X_v D^-1``
where ``D = diag(c_0..c_a)``. All heavy linear algebra runs in the rational
basis; reports convert back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Hashable, Iterable

from .clebsch import cg2, triangle
from .exact import Surd, as_surdsum, rank, sqrt, surd_canon

__all__ = [
    "TriangleViolation",
    "NotInvariant",
    "Sl2Rep",
    "WeightVector",
    "sl2_matrices",
    "basis_scale",
    "dual_iso",
    "cg_embedding",
    "hw_decompose",
    "cg_range",
    "hw_rational",
    "lower_rational",
    "raise_rational",
    "cg_coordinates",
    "tensor_e_unitary",
    "tensor_f_unitary",
    "weight_range",
]


class TriangleViolation(ValueError):
    pass


class NotInvariant(ValueError):
    pass


@lru_cache(maxsize=None)
def basis_scale(a: int, k: int) -> Surd:
    """``c_k = sqrt(k!(a-k)!)``: unitary ``v_k`` equals ``c_k`` times rational ``w_k``."""
    return surd_canon(1, factorial(k) * factorial(a - k))


def _zeros(n: int) -> list[list]:
    return [[0] * n for _ in range(n)]


def sl2_matrices(a: int, basis: str = "unitary"):
    """Matrices ``(E, H, F)`` of V(a); column k is the image of basis vector k."""
    if a < 0:
        raise ValueError("highest weight must be non-negative")
    n = a + 1
    E, H, F = _zeros(n), _zeros(n), _zeros(n)
    for k in range(n):
        H[k][k] = a - 2 * k
        if basis == "unitary":
            if k > 0:
                E[k - 1][k] = sqrt(k * (a - k + 1))
            if k < a:
                F[k + 1][k] = sqrt((k + 1) * (a - k))
        elif basis == "rational":
            if k > 0:
                E[k - 1][k] = a - k + 1
            if k < a:
                F[k + 1][k] = k + 1
        else:
            raise ValueError(f"unknown basis {basis!r}")
    return E, H, F


@dataclass(frozen=True)
class Sl2Rep:
    """V(a) with its matrices in both bases."""

    a: int

    @property
    def dim(self) -> int:
        return self.a + 1

    def unitary(self):
        return sl2_matrices(self.a, "unitary")

    def rational(self):
        return sl2_matrices(self.a, "rational")

    def scales(self) -> list[Surd]:
        return [basis_scale(self.a, k) for k in range(self.a + 1)]

    def weight(self, k: int) -> int:
        return self.a - 2 * k


def dual_iso(a: int, k: int) -> tuple[int, int]:
    """``v_k -> sign * (v_index)^*`` realizing V(a) ≅ V(a)^*."""
    if not 0 <= k <= a:
        raise ValueError(f"index {k} outside 0..{a}")
    return (-1) ** (a - k), a - k


@dataclass
class WeightVector:
    """A vector of a weight space, stored as a sparse map basis-key -> scalar."""

    coords: dict
    weight: int
    ambient: Hashable = None

    def __post_init__(self):
        self.coords = {k: v for k, v in self.coords.items() if v}

    def scale(self, c) -> WeightVector:
        return WeightVector({k: v * c for k, v in self.coords.items()}, self.weight, self.ambient)

    def __add__(self, other: WeightVector) -> WeightVector:
        if self.weight != other.weight:
            raise ValueError("adding vectors of different weight")
        out = dict(self.coords)
        for k, v in other.coords.items():
            out[k] = as_surdsum(out.get(k, 0)) + v
        return WeightVector(out, self.weight, self.ambient)

    def __sub__(self, other: WeightVector) -> WeightVector:
        return self + other.scale(-1)

    def is_zero(self) -> bool:
        return not self.coords


def cg_range(a: int, b: int) -> list[int]:
    return list(range(a + b, abs(a - b) - 1, -2))


def cg_embedding(a: int, b: int, c: int, k: int) -> WeightVector:
    """``v_k^{a,b,c}`` in the unitary basis of V(a)⊗V(b), keys ``(i, j)``."""
    if not triangle(Fraction(a, 2), Fraction(b, 2), Fraction(c, 2)):
        raise TriangleViolation(f"({a}/2, {b}/2, {c}/2) violates the triangle condition")
    if not 0 <= k <= c:
        raise ValueError(f"index {k} outside 0..{c}")
    coords = {}
    # i + j = k + (a+b-c)/2 by weight
    n = k + (a + b - c) // 2
    for i in range(max(0, n - b), min(a, n) + 1):
        j = n - i
        val = cg2(a, a - 2 * i, b, b - 2 * j, c, c - 2 * k)
        if val:
            coords[(i, j)] = val
    return WeightVector(coords, c - 2 * k, ("tensor", a, b))


def tensor_e_unitary(a: int, b: int, vec: WeightVector) -> WeightVector:
    out: dict = {}
    for (i, j), x in vec.coords.items():
        if i > 0:
            key = (i - 1, j)
            out[key] = as_surdsum(out.get(key, 0)) + x * sqrt(i * (a - i + 1))
        if j > 0:
            key = (i, j - 1)
            out[key] = as_surdsum(out.get(key, 0)) + x * sqrt(j * (b - j + 1))
    return WeightVector(out, vec.weight + 2, vec.ambient)


def tensor_f_unitary(a: int, b: int, vec: WeightVector) -> WeightVector:
    out: dict = {}
    for (i, j), x in vec.coords.items():
        if i < a:
            key = (i + 1, j)
            out[key] = as_surdsum(out.get(key, 0)) + x * sqrt((i + 1) * (a - i))
        if j < b:
            key = (i, j + 1)
            out[key] = as_surdsum(out.get(key, 0)) + x * sqrt((j + 1) * (b - j))
    return WeightVector(out, vec.weight - 2, vec.ambient)


def _span_rank(vectors: list[WeightVector], keys: list) -> int:
    if not vectors:
        return 0
    # rows = vectors, so rank counts independent vectors
    M = [[v.coords.get(k, 0) for k in keys] for v in vectors]
    return rank(M, len(keys))


def hw_decompose(subspace: Iterable[WeightVector], e_action, check: bool = True) -> dict[int, int]:
    """Highest weights of an e,h-invariant span of weight vectors.

    ``e_action`` maps a WeightVector to its image under e. The multiplicity of
    c is ``dim S_c - dim e(S_c)`` for each weight ``c >= 0``.
    Returns a map weight -> multiplicity (zero entries dropped).
    """
    by_weight: dict[int, list[WeightVector]] = {}
    for v in subspace:
        if not v.is_zero():
            by_weight.setdefault(v.weight, []).append(v)
    images = {w: [e_action(v) for v in vs] for w, vs in by_weight.items()}
    out: dict[int, int] = {}
    for w, vs in by_weight.items():
        keys = sorted({k for v in vs + images[w] for k in v.coords})
        dim_s = _span_rank(vs, keys)
        dim_e = _span_rank([x for x in images[w] if not x.is_zero()], keys)
        if check:
            targets = by_weight.get(w + 2, [])
            imgs = [x for x in images[w] if not x.is_zero()]
            if imgs:
                tkeys = sorted({k for v in targets + imgs for k in v.coords})
                if _span_rank(targets, tkeys) != _span_rank(targets + imgs, tkeys):
                    raise NotInvariant(f"e maps weight {w} outside the subspace")
        if w >= 0 and dim_s - dim_e:
            out[w] = dim_s - dim_e
    return dict(sorted(out.items(), reverse=True))


# ---------------------------------------------------------------------------
# rational-basis helpers for V(a)⊗V(b); vectors in a weight space are lists
# indexed by i, the component being w_i ⊗ w_{n-i}


def weight_range(a: int, b: int, lam: int) -> tuple[int, int, int]:
    """``(n, lo, hi)``: weight-lam space of V(a)⊗V(b) has keys i=lo..hi, j = n-i."""
    n2 = a + b - lam
    if n2 % 2:
        raise ValueError("weight parity mismatch")
    n = n2 // 2
    return n, max(0, n - b), min(a, n)


@lru_cache(maxsize=None)
def hw_rational(a: int, b: int, c: int) -> tuple[Fraction, ...]:
    """Highest-weight vector of weight c: coefficients of w_i⊗w_{n-i}, i=0..n, x_0 = 1."""
    n = (a + b - c) // 2
    xs = [Fraction(1)]
    for i in range(1, n + 1):
        xs.append(-xs[-1] * (b - n + i) / (a - i + 1))
    return tuple(xs)


def lower_rational(a: int, b: int, vec: dict, times: int = 1) -> dict:
    """Apply f ``times`` times to a sparse rational vector keyed (i, j)."""
    for _ in range(times):
        out: dict = {}
        for (i, j), x in vec.items():
            if i < a:
                out[(i + 1, j)] = out.get((i + 1, j), 0) + (i + 1) * x
            if j < b:
                out[(i, j + 1)] = out.get((i, j + 1), 0) + (j + 1) * x
        vec = {k: v for k, v in out.items() if v}
    return vec


def raise_rational(a: int, b: int, vec: dict, times: int = 1) -> dict:
    """Apply e ``times`` times to a sparse rational vector keyed (i, j)."""
    for _ in range(times):
        out: dict = {}
        for (i, j), x in vec.items():
            if i > 0:
                out[(i - 1, j)] = out.get((i - 1, j), 0) + (a - i + 1) * x
            if j > 0:
                out[(i, j - 1)] = out.get((i, j - 1), 0) + (b - j + 1) * x
        vec = {k: v for k, v in out.items() if v}
    return vec


def _invert(M: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(M)
    A = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next(r for r in range(c, n) if A[r][c])
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


@lru_cache(maxsize=None)
def cg_coordinates(a: int, b: int, lam: int):
    """Change of basis on the weight-lam space of V(a)⊗V(b).

    Returns ``(cs, lo, T)`` where ``cs`` lists the highest weights in
    the CG range with c >= |lam| and ``T`` is a matrix with ``coords = T @ x`` giving, for
    each c, the coefficient of ``f^p u_c / p!`` (``p = (c-lam)/2``, ``u_c`` the
    rational highest-weight vector) in the vector ``x`` indexed by i-lo.
    """
    n, lo, hi = weight_range(a, b, lam)
    cs = [c for c in cg_range(a, b) if c >= abs(lam)]
    cols = []
    for c in cs:
        p = (c - lam) // 2
        nc = (a + b - c) // 2
        hw = {(i, nc - i): x for i, x in enumerate(hw_rational(a, b, c))}
        v = lower_rational(a, b, hw, p)
        fp = factorial(p)
        cols.append([Fraction(v.get((i, n - i), 0), fp) for i in range(lo, hi + 1)])
    size = hi - lo + 1
    B = [[cols[k][r] for k in range(len(cs))] for r in range(size)]
    return tuple(cs), lo, tuple(tuple(row) for row in _invert(B))
