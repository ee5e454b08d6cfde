"""Closed-form predictions for tensor products of type-Z uniserials.

A type-Z module is ``Z(a, l)`` (layers ``a, a+m, ..., a+lm``, socle ``V(a)``)
or its dual ``Z(a, l)^*`` (the same layers in reverse, socle ``V(a+lm)``).
Throughout, ``a_0, ..., a_l`` denote the layers of V in socle order and
``b_0, ..., b_l'`` those of W.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .exact import as_surdsum, simplify, sqrt
from .gmod import UniserialSpec
from .sl2rep import basis_scale, cg_embedding, cg_range

__all__ = [
    "LengthMismatch",
    "OrderingViolated",
    "ZTypeSpec",
    "SocPrediction",
    "S1Entry",
    "s1_closed",
    "materialize_u0",
    "soc_closed",
    "soc_series_closed",
    "series_condition",
    "hom_dim",
    "invariants_dim",
    "s1_conjecture",
    "a2_set",
    "am_set",
]


class LengthMismatch(ValueError):
    pass


class OrderingViolated(ValueError):
    pass


@dataclass(frozen=True)
class ZTypeSpec:
    kind: str  # "Z" or "Zd"
    a: int
    l: int
    m: int

    def __post_init__(self):
        if self.kind not in ("Z", "Zd"):
            raise ValueError(f"not a type-Z kind: {self.kind!r}")
        if self.a < 0 or self.l < 0 or self.m < 1:
            raise ValueError("need a, l >= 0 and m >= 1")
        if self.l == 0 and self.kind == "Zd":
            # Z(a,0) = Z(a,0)^* = V(a)
            object.__setattr__(self, "kind", "Z")

    @classmethod
    def from_spec(cls, spec: UniserialSpec) -> ZTypeSpec:
        if spec.kind not in ("Z", "Zd"):
            raise ValueError(f"{spec} is not of type Z")
        return cls(spec.kind, spec.params[0], spec.params[1], spec.m)

    def to_spec(self) -> UniserialSpec:
        return UniserialSpec(self.kind, self.m, (self.a, self.l))

    @property
    def dual(self) -> bool:
        return self.kind == "Zd"

    def layers(self) -> list[int]:
        ks = range(self.l + 1)
        if self.dual:
            return [self.a + (self.l - k) * self.m for k in ks]
        return [self.a + k * self.m for k in ks]

    @property
    def soc(self) -> int:
        return self.layers()[0]

    def dualized(self) -> ZTypeSpec:
        return ZTypeSpec("Z" if self.dual else "Zd", self.a, self.l, self.m)

    def sort_key(self):
        return (self.kind != "Z", self.a, self.l)

    def __str__(self) -> str:
        return f"{self.kind}:{self.a}:{self.l}"


def _counter(ws) -> Counter:
    return Counter(ws)


# ---------------------------------------------------------------------------
# length two


@dataclass
class S1Entry:
    weight: int
    q: tuple  # coefficients of v_0^{a,d,mu} and v_0^{b,c,mu}


def s1_closed(V1: ZTypeSpec, V2: ZTypeSpec) -> Optional[S1Entry]:
    """The weight of ``S_1`` for two length-two type-Z modules, with its vector.

    With socle decompositions ``V1 = V(a)+V(b)`` and ``V2 = V(c)+V(d)`` the
    highest-weight vector is ``q1 v_0^{a,d,mu} + q2 v_0^{b,c,mu}``.
    """
    if V1.l != 1 or V2.l != 1 or V1.m != V2.m:
        raise LengthMismatch("both modules must have two layers and the same m")
    m = V1.m
    a, b = V1.layers()
    c, d = V2.layers()
    q1 = sqrt(d + 1)
    if not V1.dual and not V2.dual:
        return S1Entry(a + d, (q1, -sqrt(b + 1)))
    if not V1.dual and V2.dual:
        if a <= d:
            return S1Entry(d - a, (q1, -sqrt(b + 1)))
        return None
    if V1.dual and not V2.dual:
        if b >= c:
            sign = -1 if m % 2 == 0 else 1
            return S1Entry(b - c, (q1, sign * sqrt(b + 1)))
        return None
    return None


def materialize_u0(T, entry: S1Entry) -> dict:
    """``u_0`` of ``entry`` as a vector of ``T = V1 ⊗ V2`` in T's rational basis.

    T must be a tensor of two length-two modules whose arrows carry the
    unitary normalization, layer 0 being the socle of each factor.
    """
    (a, b), (c, d) = T.left.layers, T.right.layers
    mu = entry.weight
    vec: dict = {}
    for (p, r), (x, y), q in (((0, 1), (a, d), entry.q[0]), ((1, 0), (b, c), entry.q[1])):
        emb = cg_embedding(x, y, mu, 0)
        tau = as_surdsum(T.left.scales[p]) * T.right.scales[r]
        for (i, j), val in emb.coords.items():
            # unitary v_i ⊗ v_j = c_i c_j w_i ⊗ w_j, and module basis vectors carry tau
            coef = as_surdsum(val) * q * basis_scale(x, i) * basis_scale(y, j) / tau
            vec[((p, i), (r, j))] = simplify(coef)
    return vec


# ---------------------------------------------------------------------------
# socles


@dataclass
class SocPrediction:
    a2: list  # step-2 part: highest weights of soc(V) ⊗ soc(W)
    am: list  # step-m part, ascending
    t_cap: int
    graded: dict = field(default_factory=dict)  # t -> Counter

    @property
    def total(self) -> Counter:
        return _counter(self.a2 + self.am)


def a2_set(a0: int, b0: int) -> list[int]:
    return sorted(cg_range(a0, b0))


def _case(V: ZTypeSpec, W: ZTypeSpec) -> str:
    if V.l == 0 or W.l == 0:
        # V(a)⊗W: every case formula agrees; treat as (i) unless a dual factor has length
        if V.dual:
            return "ii*"
        if W.dual:
            return "ii"
        return "i"
    if not V.dual and not W.dual:
        return "i"
    if not V.dual and W.dual:
        return "ii"
    if V.dual and not W.dual:
        return "ii*"
    return "iii"


def am_set(V: ZTypeSpec, W: ZTypeSpec) -> tuple[list[int], int]:
    """``(A_m, T)`` for ``V ⊗ W``: the S_t weights for t = 1..T."""
    m = V.m
    a0, b0 = V.soc, W.soc
    lmin = min(V.l, W.l)
    case = _case(V, W)
    if case == "i":
        return [a0 + b0 + m * t for t in range(1, lmin + 1)], lmin
    if case in ("ii", "ii*"):
        if case == "ii*":
            a0, b0 = b0, a0
        if a0 > b0:
            return [], 0
        T = min(lmin, (b0 - a0) // m)
        return sorted(b0 - a0 - t * m for t in range(1, T + 1)), T
    return [], 0


def soc_closed(V: ZTypeSpec, W: ZTypeSpec) -> SocPrediction:
    """Highest weights of ``soc(V ⊗ W)`` split into the step-2 and step-m parts."""
    if V.m != W.m:
        raise ValueError("mixed m")
    a2 = a2_set(V.soc, W.soc)
    am, T = am_set(V, W)
    graded = {0: _counter(a2)}
    m = V.m
    a0, b0 = V.soc, W.soc
    case = _case(V, W)
    for t in range(1, V.l + W.l + 1):
        graded[t] = Counter()
    if case == "i":
        for t in range(1, T + 1):
            graded[t][a0 + b0 + m * t] += 1
    elif case in ("ii", "ii*"):
        x, y = (a0, b0) if case == "ii" else (b0, a0)
        for t in range(1, T + 1):
            graded[t][y - x - t * m] += 1
    return SocPrediction(a2, am, T, graded)


def series_condition(V: ZTypeSpec, W: ZTypeSpec) -> Optional[str]:
    """Which of the conditions (a)-(d) makes ``soc(V⊗W) = soc V ⊗ soc W``, if any."""
    m = V.m
    if V.l == 0 or W.l == 0:
        return "a"
    if V.dual and W.dual:
        return "b"
    if not V.dual and W.dual and W.soc < V.soc + m:
        return "c"
    if V.dual and not W.dual and V.soc < W.soc + m:
        return "d"
    return None


def soc_series_closed(V: ZTypeSpec, W: ZTypeSpec) -> Optional[list[Counter]]:
    """Socle factors of ``V⊗W`` when one of the conditions (a)-(d) holds.

    Level t is then ``⊕_{i+j=t} V(a_i)⊗V(b_j)`` as an sl(2)-module.
    """
    if series_condition(V, W) is None:
        return None
    A, B = V.layers(), W.layers()
    out = []
    for t in range(len(A) + len(B) - 1):
        level: Counter = Counter()
        for i in range(len(A)):
            j = t - i
            if 0 <= j < len(B):
                level.update(cg_range(A[i], B[j]))
        out.append(level)
    return out


# ---------------------------------------------------------------------------
# invariants and intertwiners


def invariants_dim(V: ZTypeSpec, W: ZTypeSpec) -> int:
    """``dim (V⊗W)^g``: 1 iff ``b_0`` is a layer of V and ``a_0`` a layer of W."""
    A, B = V.layers(), W.layers()
    return int(B[0] in A and A[0] in B)


def hom_dim(V: ZTypeSpec, W: ZTypeSpec) -> int:
    """``dim Hom_g(V, W)``: 1 iff ``b_0`` is a layer of V and ``a_l`` a layer of W."""
    A, B = V.layers(), W.layers()
    return int(B[0] in A and A[-1] in B)


# ---------------------------------------------------------------------------
# conjectural S_1 for arbitrary length-two uniserials


@dataclass
class S1Conjecture:
    weight: Optional[int]
    case: Optional[str]
    conjectural: bool = True
    boundary: bool = False  # a ">= 0" condition held with equality


def s1_conjecture(ab: tuple[int, int], cd: tuple[int, int], m: int) -> S1Conjecture:
    """Conjectured ``S_1`` for ``V1 = V(a)+V(b)`` and ``V2 = V(c)+V(d)`` (socle first).

    Requires ``a < c`` or ``a == c and b <= d``. Returns the first matching case.
    Never a theorem: results are flagged conjectural.
    """
    a, b = ab
    c, d = cd
    if not (a < c or (a == c and b <= d)):
        raise OrderingViolated(f"need a < c or (a = c and b <= d), got [{a},{b}], [{c},{d}]")
    if (a, b) == (0, m):
        return S1Conjecture(d, "1")
    if a > 0:
        if a + b == m and c + d == m and d - a == b - c and d - a >= 0:
            return S1Conjecture(d - a, "2.1", boundary=(d - a == 0))
        if b - a == m and d - c == m:
            return S1Conjecture(d + a, "2.2")
        if b - a == m and c - d == m and d - a == c - b and d - a >= 0:
            return S1Conjecture(d - a, "2.3", boundary=(d - a == 0))
    if (c, d) == (b, a):
        return S1Conjecture(0, "3")
    return S1Conjecture(None, None)
