"""Recovering the type-Z factors of ``U = V ⊗ W`` from socle data.

The input is a :class:`SocleSignature`: the top weight Λ of U and the
highest weights of ``soc(U)`` and ``soc(U^*)``. Each socle splits as a full
step-2 progression ``A_2`` plus a step-m progression ``A_m``; every split is
tried, each applicable recovery formula is evaluated, and a candidate is
accepted only if its predicted signature reproduces the input exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .gmod import dualize
from .socle import TensorModule, max_weight, socle_of, tensor
from .theory import ZTypeSpec, soc_closed

__all__ = [
    "AmbiguousM2",
    "NoCandidate",
    "MultipleCandidates",
    "SocleSignature",
    "FactorizationResult",
    "signature_of",
    "signature_closed",
    "splits",
    "candidates",
    "recover",
    "verify",
    "verify_pair",
    "canonical_pair",
]


class AmbiguousM2(ValueError):
    """Factor recovery is only established for m != 2."""

    def __init__(self, msg, candidates=None):
        super().__init__(msg)
        self.candidates = candidates or []


class NoCandidate(ValueError):
    pass


class MultipleCandidates(ValueError):
    def __init__(self, msg, candidates):
        super().__init__(msg)
        self.candidates = candidates


@dataclass(frozen=True)
class SocleSignature:
    m: int
    lam: int
    soc: tuple
    soc_dual: tuple

    def __post_init__(self):
        object.__setattr__(self, "soc", tuple(sorted(self.soc)))
        object.__setattr__(self, "soc_dual", tuple(sorted(self.soc_dual)))
        if any(w < 0 for w in self.soc + self.soc_dual):
            raise ValueError("weights must be non-negative")
        if self.soc and self.lam < max(self.soc) or self.soc_dual and self.lam < max(self.soc_dual):
            raise ValueError("lambda must dominate both socles")

    def to_json(self) -> dict:
        return {"m": self.m, "lambda": self.lam, "soc": list(self.soc), "soc_dual": list(self.soc_dual)}

    @classmethod
    def from_json(cls, data: dict) -> SocleSignature:
        return cls(int(data["m"]), int(data["lambda"]), tuple(data["soc"]), tuple(data["soc_dual"]))


@dataclass
class FactorizationResult:
    case: str
    left: ZTypeSpec
    right: ZTypeSpec
    split_used: tuple  # (A2, Am, A2*, Am*)
    also: list = field(default_factory=list)  # other case tags reaching the same pair

    def pair(self) -> tuple:
        return (self.left, self.right)

    def specs(self) -> tuple:
        return (self.left.to_spec(), self.right.to_spec())

    def __str__(self) -> str:
        return f"{self.left} ⊗ {self.right}"

    def to_json(self) -> dict:
        A2, Am, A2s, Ams = self.split_used
        return {
            "case": self.case,
            "left": str(self.left),
            "right": str(self.right),
            "split": {"A2": list(A2), "Am": list(Am), "A2*": list(A2s), "Am*": list(Ams)},
        }


def signature_of(T: TensorModule) -> SocleSignature:
    """Signature computed by the oracle, using ``(V⊗W)^* ≅ V^*⊗W^*``."""
    soc = socle_of(T)
    dual = socle_of(tensor(dualize(T.left), dualize(T.right)))
    return SocleSignature(T.m, max_weight(T), tuple(soc.elements()), tuple(dual.elements()))


def signature_closed(V: ZTypeSpec, W: ZTypeSpec) -> SocleSignature:
    soc = soc_closed(V, W).total
    dual = soc_closed(V.dualized(), W.dualized()).total
    lam = max(V.layers()) + max(W.layers())
    return SocleSignature(V.m, lam, tuple(soc.elements()), tuple(dual.elements()))


def _is_progression(ws: list[int], step: int) -> bool:
    return all(y - x == step for x, y in zip(ws, ws[1:]))


def splits(weights, m: int) -> list[tuple[tuple, tuple]]:
    """All ways to write a multiplicity-free weight set as A_2 ⊔ A_m."""
    ws = sorted(weights)
    if len(set(ws)) != len(ws) or not ws:
        return []
    out = []
    for i, lo in enumerate(ws):
        for hi in ws[i:]:
            if (hi - lo) % 2:
                continue
            a2 = tuple(range(lo, hi + 1, 2))
            if not set(a2) <= set(ws):
                continue
            am = tuple(w for w in ws if w not in set(a2))
            if _is_progression(list(am), m):
                out.append((a2, am))
    return out


def _int(x) -> Optional[int]:
    x = Fraction(x)
    if x.denominator != 1 or x < 0:
        return None
    return int(x)


def canonical_pair(V: ZTypeSpec, W: ZTypeSpec) -> tuple:
    return tuple(sorted((V, W), key=lambda z: z.sort_key()))


def _case_formulas(m, lam, A2, Am, A2s, Ams):
    """Yield (case, V, W) for each applicable recovery formula."""
    if max(A2s) == lam:
        lp = Fraction(max(Am) - max(A2), m) if Am else Fraction(0)
        l = Fraction(max(A2s) - max(A2), m) - lp
        if (l - lp) * m == min(A2s) - min(A2):
            a, b = Fraction(max(A2) + min(A2), 2), Fraction(max(A2) - min(A2), 2)
        else:
            a, b = Fraction(max(A2) - min(A2), 2), Fraction(max(A2) + min(A2), 2)
        yield "i", ("Z", a, l), ("Z", b, lp)
    if max(A2) == lam:
        lp = Fraction(max(Ams) - max(A2s), m) if Ams else Fraction(0)
        l = Fraction(max(A2) - max(A2s), m) - lp
        if (l - lp) * m == min(A2) - min(A2s):
            a, b = Fraction(max(A2s) + min(A2s), 2), Fraction(max(A2s) - min(A2s), 2)
        else:
            a, b = Fraction(max(A2s) - min(A2s), 2), Fraction(max(A2s) + min(A2s), 2)
        yield "ii", ("Zd", a, l), ("Zd", b, lp)
    if max(A2) != lam and max(A2s) != lam:
        lp = Fraction(lam - max(A2s), m)
        l = Fraction(lam - max(A2), m)
        if (l + lp) * m == min(A2s) - min(A2):
            a, b = Fraction(max(A2) + min(A2), 2), Fraction(max(A2) - min(A2), 2) - lp * m
        else:
            a, b = Fraction(max(A2) - min(A2), 2), Fraction(max(A2) + min(A2), 2) - lp * m
        yield "iii", ("Z", a, l), ("Zd", b, lp)


def candidates(sig: SocleSignature) -> list[FactorizationResult]:
    """Every validated factorization, one per unordered factor pair."""
    m = sig.m
    found: dict = {}
    for A2, Am in splits(sig.soc, m):
        for A2s, Ams in splits(sig.soc_dual, m):
            for case, (k1, a, l), (k2, b, lp) in _case_formulas(m, sig.lam, A2, Am, A2s, Ams):
                vals = [_int(x) for x in (a, l, b, lp)]
                if None in vals:
                    continue
                a, l, b, lp = vals
                V, W = ZTypeSpec(k1, a, l, m), ZTypeSpec(k2, b, lp, m)
                if not verify_pair(V, W, sig):
                    continue
                key = canonical_pair(V, W)
                if key in found:
                    if case not in found[key].also and case != found[key].case:
                        found[key].also.append(case)
                    continue
                found[key] = FactorizationResult(case, key[0], key[1], (A2, Am, A2s, Ams))
    return [found[k] for k in sorted(found, key=lambda p: (p[0].sort_key(), p[1].sort_key()))]


def verify_pair(V: ZTypeSpec, W: ZTypeSpec, sig: SocleSignature) -> bool:
    return signature_closed(V, W) == sig


def verify(result: FactorizationResult, sig: SocleSignature) -> bool:
    """True iff the recovered pair reproduces the signature exactly."""
    return verify_pair(result.left, result.right, sig)


def recover(sig: SocleSignature) -> FactorizationResult:
    if sig.m == 2:
        raise AmbiguousM2(
            "factor recovery is not established for m = 2; the step-2 and step-m parts of the socle cannot be told apart",
            candidates(sig),
        )
    found = candidates(sig)
    if not found:
        raise NoCandidate("no type-Z factor pair reproduces this signature")
    if len(found) > 1:
        raise MultipleCandidates(f"{len(found)} factor pairs reproduce this signature", found)
    return found[0]
