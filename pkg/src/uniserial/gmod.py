"""Modules over g_m = sl(2) ⋉ V(m).

A :class:`GmModule` is stored as a list of sl(2)-layers ``V(a_0), ..., V(a_l)``
(socle first) in the rational basis of each layer, plus *arrows*: for a pair
of layers ``(src, dst)`` the m+1 matrices of the operators

    eps_s = e_s / c_s,      c_s = sqrt(s!(m-s)!),

restricted to ``V(a_src) -> V(a_dst)``. ``eps_s`` is the rational basis of
r = V(m), so ``[e, eps_s] = (m-s+1) eps_{s-1}`` and ``[f, eps_s] = (s+1) eps_{s+1}``.

The module's basis vector ``(k, i)`` equals ``tau_k * v_i / c_i`` in terms of
the unitary basis ``v_i`` of layer k; the layer scales ``tau_k`` absorb the
common surd factor of each arrow so that chain modules have rational entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Optional

from .clebsch import cg2, delta, triangle
from .exact import Surd, as_surdsum, simplify, surd_canon
from .sl2rep import TriangleViolation, basis_scale

__all__ = [
    "SpecInvalid",
    "UniserialSpec",
    "GmModule",
    "ValidationReport",
    "parse_spec",
    "r_arrow",
    "rationalize_arrow",
    "arrow_gamma",
    "build",
    "dualize",
    "validate",
    "direct_E",
]


class SpecInvalid(ValueError):
    pass


KINDS = ("Z", "Zd", "E", "E3", "E4")


@dataclass(frozen=True)
class UniserialSpec:
    """Symbolic uniserial module: ``Z(a,l)``, ``Z(a,l)^*``, ``E(a,b)``, ``E3(c)`` or ``E4(t)``."""

    kind: str
    m: int
    params: tuple

    def __post_init__(self):
        check_spec(self)

    @classmethod
    def Z(cls, m, a, l):
        return cls("Z", m, (a, l))

    @classmethod
    def Zd(cls, m, a, l):
        return cls("Zd", m, (a, l))

    def normalized(self) -> UniserialSpec:
        # Z(a,0) and Z(a,0)^* are both V(a)
        if self.kind == "Zd" and self.params[1] == 0:
            return UniserialSpec("Z", self.m, self.params)
        return self

    def layers(self) -> list[int]:
        m = self.m
        if self.kind == "Z":
            a, l = self.params
            return [a + k * m for k in range(l + 1)]
        if self.kind == "Zd":
            a, l = self.params
            return [a + k * m for k in range(l, -1, -1)]
        if self.kind == "E":
            return list(self.params)
        if self.kind == "E3":
            return [0, m, self.params[0]]
        return [0, m, m, 0]

    @property
    def is_ztype(self) -> bool:
        return self.kind in ("Z", "Zd")

    @property
    def length(self) -> int:
        return len(self.layers())

    def __str__(self) -> str:
        if self.kind == "E4":
            return f"E4:{self.params[0]}"
        return ":".join([self.kind] + [str(p) for p in self.params])


def check_spec(spec: UniserialSpec) -> None:
    k, m, p = spec.kind, spec.m, spec.params
    if k not in KINDS:
        raise SpecInvalid(f"unknown kind {k!r}")
    if not isinstance(m, int) or m < 1:
        raise SpecInvalid(f"m must be a positive integer, got {m!r}")
    if k in ("Z", "Zd"):
        if len(p) != 2 or p[0] < 0 or p[1] < 0:
            raise SpecInvalid(f"{k} needs (a, l) with a, l >= 0")
    elif k == "E":
        if len(p) != 2:
            raise SpecInvalid("E needs (a, b)")
        a, b = p
        if a < 0 or b < 0:
            raise SpecInvalid("E(a,b) needs a, b >= 0")
        if (a + b - m) % 2:
            raise SpecInvalid(f"E({a},{b}) violates a+b ≡ m (mod 2)")
        if not abs(a - b) <= m <= a + b:
            raise SpecInvalid(f"E({a},{b}) violates |a-b| <= m <= a+b")
    elif k == "E3":
        (c,) = p
        if not 0 <= c <= 2 * m:
            raise SpecInvalid(f"E3({c}) violates 0 <= c <= 2m")
        if (c - 2 * m) % 4:
            raise SpecInvalid(f"E3({c}) violates c ≡ 2m (mod 4)")
    else:
        (t,) = p
        if m % 4:
            raise SpecInvalid(f"E4 needs m ≡ 0 (mod 4), got m={m}")
        if Fraction(t) == 0:
            raise SpecInvalid("E4(t) needs t != 0")


def parse_spec(text: str, m: int) -> UniserialSpec:
    """Parse ``Z:a:l``, ``Zd:a:l``, ``E:a:b``, ``E3:c`` or ``E4:p/q``."""
    parts = text.strip().split(":")
    kind = parts[0]
    try:
        if kind in ("Z", "Zd", "E") and len(parts) == 3:
            return UniserialSpec(kind, m, (int(parts[1]), int(parts[2])))
        if kind == "E3" and len(parts) == 2:
            return UniserialSpec(kind, m, (int(parts[1]),))
        if kind == "E4" and len(parts) == 2:
            return UniserialSpec(kind, m, (Fraction(parts[1]),))
    except ValueError as exc:
        if isinstance(exc, SpecInvalid):
            raise
        raise SpecInvalid(f"malformed spec {text!r}: {exc}") from None
    raise SpecInvalid(f"malformed spec {text!r}")


# ---------------------------------------------------------------------------
# arrows


def r_arrow(a: int, b: int, m: int) -> list[list[list[Surd]]]:
    """Unitary matrices of ``e_0..e_m`` acting V(b) -> V(a) (rows i, columns j)."""
    if not triangle(Fraction(a, 2), Fraction(b, 2), Fraction(m, 2)):
        raise TriangleViolation(f"({a}/2, {b}/2, {m}/2) violates the triangle condition")
    shift = (a - b - m) // 2
    out = []
    for s in range(m + 1):
        M = [[Surd(0)] * (b + 1) for _ in range(a + 1)]
        for j in range(b + 1):
            i = j + s + shift
            if 0 <= i <= a:
                val = cg2(a, a - 2 * i, b, 2 * j - b, m, m - 2 * s)
                M[i][j] = -val if j % 2 else val
        out.append(M)
    return out


@lru_cache(maxsize=None)
def arrow_gamma(a: int, b: int, m: int) -> Surd:
    """The surd common to every entry of the rescaled arrow V(b) -> V(a)."""
    d = delta(Fraction(a, 2), Fraction(b, 2), Fraction(m, 2))
    return surd_canon(d.coeff, d.radicand * (m + 1))


@lru_cache(maxsize=None)
def rationalize_arrow(a: int, b: int, m: int):
    """``(gamma, R)`` with ``D_a M_s D_b^{-1} / c_s = gamma * R_s`` and ``R_s`` rational.

    ``D = diag(c_0, c_1, ...)`` converts unitary to rational coordinates and
    ``c_s`` turns ``e_s`` into ``eps_s``. ``R_s`` is returned sparse, as a
    dict column j -> list of (row i, value).
    """
    gamma = arrow_gamma(a, b, m)
    M = r_arrow(a, b, m)
    inv_gamma = gamma.inverse()
    R = []
    for s in range(m + 1):
        cs = basis_scale(m, s)
        cols: dict[int, list] = {}
        for j in range(b + 1):
            for i in range(a + 1):
                x = M[s][i][j]
                if not x:
                    continue
                q = x * basis_scale(a, i) / (basis_scale(b, j) * cs) * inv_gamma
                if q.radicand != 1:
                    raise AssertionError(f"arrow ({a},{b},{m}) entry {(s, i, j)} is irrational after rescaling")
                cols.setdefault(j, []).append((i, q.coeff))
        R.append(cols)
    return gamma, tuple(R)


# ---------------------------------------------------------------------------
# modules


Arrow = list  # list over s of dict j -> list[(i, value)]


@dataclass
class GmModule:
    m: int
    layers: list[int]
    arrows: dict  # (src, dst) -> Arrow
    scales: list  # tau_k, Surd
    spec: Optional[UniserialSpec] = None
    label: str = ""
    offsets: list = field(init=False, repr=False)

    def __post_init__(self):
        self.offsets = []
        off = 0
        for a in self.layers:
            self.offsets.append(off)
            off += a + 1
        self._dim = off
        self._out: dict[int, list] = {}
        for (src, dst) in self.arrows:
            self._out.setdefault(src, []).append(dst)

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def length(self) -> int:
        return len(self.layers)

    @property
    def is_chain(self) -> bool:
        """Every arrow drops the layer index by exactly one."""
        return all(src - dst == 1 for src, dst in self.arrows)

    @property
    def is_rational(self) -> bool:
        for arrow in self.arrows.values():
            for cols in arrow:
                for entries in cols.values():
                    for _, x in entries:
                        if not isinstance(x, (int, Fraction)):
                            return False
        return True

    def keys(self):
        for k, a in enumerate(self.layers):
            for i in range(a + 1):
                yield (k, i)

    def weight(self, key) -> int:
        k, i = key
        return self.layers[k] - 2 * i

    def index(self, key) -> int:
        return self.offsets[key[0]] + key[1]

    # actions on sparse vectors {(k, i): value}

    def act_e(self, vec: dict) -> dict:
        out: dict = {}
        for (k, i), x in vec.items():
            if i > 0:
                key = (k, i - 1)
                out[key] = out.get(key, 0) + (self.layers[k] - i + 1) * x
        return {k: v for k, v in out.items() if v}

    def act_f(self, vec: dict) -> dict:
        out: dict = {}
        for (k, i), x in vec.items():
            if i < self.layers[k]:
                key = (k, i + 1)
                out[key] = out.get(key, 0) + (i + 1) * x
        return {k: v for k, v in out.items() if v}

    def act_h(self, vec: dict) -> dict:
        return {key: self.weight(key) * x for key, x in vec.items() if self.weight(key)}

    def act_r(self, s: int, vec: dict) -> dict:
        out: dict = {}
        for (k, j), x in vec.items():
            for dst in self._out.get(k, ()):
                for i, val in self.arrows[(k, dst)][s].get(j, ()):
                    key = (dst, i)
                    out[key] = out.get(key, 0) + val * x
        return {k: v for k, v in out.items() if v}

    def act(self, op, vec: dict) -> dict:
        """``op`` is 'e', 'f', 'h' or an int s for eps_s."""
        if op == "e":
            return self.act_e(vec)
        if op == "f":
            return self.act_f(vec)
        if op == "h":
            return self.act_h(vec)
        return self.act_r(op, vec)

    def unitary_arrow(self, src: int, dst: int, s: int) -> list[list]:
        """Matrix of ``e_s``: V(a_src) -> V(a_dst) in the unitary layer bases."""
        a, b = self.layers[dst], self.layers[src]
        M = [[Surd(0)] * (b + 1) for _ in range(a + 1)]
        cols = self.arrows.get((src, dst))
        if cols is None:
            return M
        # basis (k,i) is tau_k v_i / c_i and e_s = c_s eps_s
        ratio = as_surdsum(self.scales[dst]) / self.scales[src]
        for j, entries in cols[s].items():
            for i, x in entries:
                val = as_surdsum(x) * ratio * basis_scale(b, j) * basis_scale(self.m, s) / basis_scale(a, i)
                M[i][j] = simplify(val)
        return M

    def to_unitary(self, vec: dict) -> dict:
        """Coordinates w.r.t. the unitary layer bases ``v_i`` of a rational-basis vector."""
        out = {}
        for (k, i), x in vec.items():
            val = as_surdsum(x) * self.scales[k] / basis_scale(self.layers[k], i)
            out[(k, i)] = simplify(val)
        return out

    def perturbed(self, src: int, dst: int, s: int, i: int, j: int, amount=1) -> GmModule:
        """Copy with one arrow entry shifted by ``amount`` (breaks the module axioms)."""
        arrows = {key: [dict((jj, list(v)) for jj, v in cols.items()) for cols in arrow]
                  for key, arrow in self.arrows.items()}
        if (src, dst) not in arrows:
            arrows[(src, dst)] = [dict() for _ in range(self.m + 1)]
        entries = arrows[(src, dst)][s].setdefault(j, [])
        for n, (ii, x) in enumerate(entries):
            if ii == i:
                entries[n] = (i, x + amount)
                break
        else:
            entries.append((i, Fraction(amount)))
        return GmModule(self.m, list(self.layers), arrows, list(self.scales), None, self.label + "~")

    def scaled_arrows(self, factor) -> GmModule:
        arrows = {key: [{j: [(i, x * factor) for i, x in v] for j, v in cols.items()} for cols in arrow]
                  for key, arrow in self.arrows.items()}
        return GmModule(self.m, list(self.layers), arrows, list(self.scales), self.spec, self.label)

    def __repr__(self) -> str:
        return f"GmModule(m={self.m}, layers={self.layers}, label={self.label!r})"


def _arrow_from_rational(R, factor) -> Arrow:
    return [{j: [(i, x * factor) for i, x in entries] for j, entries in cols.items()} for cols in R]


def _chain(m: int, layers: list[int], arrow_scale=1) -> tuple[dict, list]:
    """Chain of CG-normalized arrows layer k -> k-1, rescaled to rational entries."""
    arrows = {}
    scales = [surd_canon(1, 1)]
    for k in range(1, len(layers)):
        gamma, R = rationalize_arrow(layers[k - 1], layers[k], m)
        arrows[(k, k - 1)] = _arrow_from_rational(R, Fraction(arrow_scale))
        scales.append(scales[-1] * gamma.inverse())
    return arrows, scales


@lru_cache(maxsize=512)
def _build_cached(spec: UniserialSpec, arrow_scale) -> GmModule:
    m = spec.m
    kind = spec.kind
    if kind == "Zd":
        a, l = spec.params
        if l == 0:
            return _build_cached(UniserialSpec("Z", m, (a, 0)), arrow_scale)
        base = _build_cached(UniserialSpec("Z", m, (a, l)), arrow_scale)
        out = dualize(base)
        out.spec = spec
        out.label = str(spec)
        return out
    layers = spec.layers()
    if kind in ("Z", "E", "E3"):
        arrows, scales = _chain(m, layers, arrow_scale)
        return GmModule(m, layers, arrows, scales, spec, str(spec))
    # E4: chain 0 <- m <- m <- 0 plus t times the CG-normalized map V(0) -> V(m) into layer 1
    arrows, scales = _chain(m, layers, arrow_scale)
    t = Fraction(spec.params[0])
    _, R = rationalize_arrow(m, 0, m)
    # in module coordinates the bent arrow carries tau_3 * gamma(m,0,m) / tau_1 = 1/gamma(m,m,m)
    g = arrow_gamma(m, m, m).inverse()
    bent = t * Fraction(arrow_scale)
    arrows[(3, 1)] = [{j: [(i, simplify(g * (x * bent))) for i, x in entries] for j, entries in cols.items()}
                      for cols in R]
    return GmModule(m, layers, arrows, scales, spec, str(spec))


def build(spec: UniserialSpec, arrow_scale=1) -> GmModule:
    """Construct the module described by ``spec``.

    ``arrow_scale`` multiplies every arrow (an isomorphic module for Z types).
    """
    check_spec(spec)
    return _build_cached(spec, Fraction(arrow_scale))


def direct_E(m: int, a: int, b: int) -> GmModule:
    """E(a,b) with the CG-normalized arrow, without any dualization."""
    return build(UniserialSpec("E", m, (a, b)))


def dualize(M: GmModule) -> GmModule:
    """The dual module, re-expressed in standard rational layer bases.

    Dual layer ``l-k`` has basis ``u_i = (-1)^i C(a,i) w*_{a-i}`` where ``w*`` is
    the dual basis of layer k; this carries the standard sl(2) formulas.
    """
    last = M.length - 1
    layers = list(reversed(M.layers))

    def kappa(a, i):
        return (-1) ** i * comb(a, i)

    arrows: dict = {}
    for (src, dst), arrow in M.arrows.items():
        a_src, a_dst = M.layers[src], M.layers[dst]
        nsrc, ndst = last - dst, last - src  # dual arrow runs nsrc -> ndst
        new = []
        for cols in arrow:
            out: dict[int, list] = {}
            for j, entries in cols.items():
                for i, x in entries:
                    # X[(dst,i)][(src,j)] -> D[(ndst, a_src-j)][(nsrc, a_dst-i)]
                    col = a_dst - i
                    row = a_src - j
                    val = -x * Fraction(kappa(a_dst, col), kappa(a_src, row))
                    out.setdefault(col, []).append((row, simplify(as_surdsum(val))))
            new.append(out)
        arrows[(nsrc, ndst)] = new
    scales = []
    for k2 in range(M.length):
        k = last - k2
        a = M.layers[k]
        scales.append(simplify(as_surdsum((-1) ** a * factorial(a)) / M.scales[k]))
    label = f"({M.label})*" if M.label else ""
    spec = None
    if M.spec is not None and M.spec.kind in ("Z", "Zd"):
        a, l = M.spec.params
        spec = UniserialSpec("Zd" if M.spec.kind == "Z" else "Z", M.m, (a, l)).normalized()
    return GmModule(M.m, layers, arrows, scales, spec, label)


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    ok: bool
    failures: list = field(default_factory=list)
    socle_factors: Optional[list] = None

    @property
    def first(self) -> Optional[str]:
        return self.failures[0] if self.failures else None

    def __bool__(self) -> bool:
        return self.ok


def _sub(x: dict, y: dict, c=1) -> dict:
    out = dict(x)
    for k, v in y.items():
        out[k] = out.get(k, 0) - c * v
    return {k: v for k, v in out.items() if v}


def validate(M: GmModule, uniserial: Optional[bool] = None, stop_first: bool = True) -> ValidationReport:
    """Check the g_m-module axioms exactly.

    * ``[eps_s, eps_t] = 0``
    * ``[e, eps_s] = (m-s+1) eps_{s-1}``, ``[f, eps_s] = (s+1) eps_{s+1}``,
      ``[h, eps_s] = (m-2s) eps_s``
    * uniseriality (each socle-series factor irreducible), checked when
      ``uniserial`` is true or, by default, when the module came from a spec.
    """
    m = M.m
    failures: list[str] = []
    for key in M.keys():
        b = {key: 1}
        images = [M.act_r(s, b) for s in range(m + 1)]
        for s in range(m + 1):
            e_s_b = images[s]
            # [e, eps_s] b
            lhs = _sub(M.act_e(e_s_b), M.act_r(s, M.act_e(b)))
            rhs = images[s - 1] if s > 0 else {}
            if _sub(lhs, rhs, m - s + 1):
                failures.append(f"[e, e_{s}] != {m - s + 1} e_{s - 1} on basis vector {key}")
            lhs = _sub(M.act_f(e_s_b), M.act_r(s, M.act_f(b)))
            rhs = images[s + 1] if s < m else {}
            if _sub(lhs, rhs, s + 1):
                failures.append(f"[f, e_{s}] != {s + 1} e_{s + 1} on basis vector {key}")
            lhs = _sub(M.act_h(e_s_b), M.act_r(s, M.act_h(b)))
            if _sub(lhs, e_s_b, m - 2 * s):
                failures.append(f"[h, e_{s}] != {m - 2 * s} e_{s} on basis vector {key}")
            for t in range(s + 1, m + 1):
                if _sub(M.act_r(s, images[t]), M.act_r(t, e_s_b)):
                    failures.append(f"[e_{s}, e_{t}] != 0 on basis vector {key}")
            if failures and stop_first:
                return ValidationReport(False, failures)
    factors = None
    if uniserial is None:
        uniserial = M.spec is not None
    if uniserial and not failures:
        from .socle import socle_series

        factors = socle_series(M)
        for n, level in enumerate(factors):
            if sum(level.values()) != 1:
                failures.append(f"socle factor {n} is {dict(level)}, not irreducible")
                break
    return ValidationReport(not failures, failures, factors)
