"""Brute-force socles of g_m-modules and of their tensor products.

Everything is organised by sl(2)-*blocks*: a layer ``V(a_k)`` of a module,
or a product ``V(a_i)⊗V(b_j)`` of layers of two modules. Since every
submodule we care about is an sl(2)-submodule, it is determined by its
highest-weight vectors, and those are combinations of the highest-weight
vectors of the blocks. For a highest-weight vector ``v`` the annihilator of
``v`` in r is stable under ``e``, so ``eps_m v = 0`` already forces
``r v = 0``; the same holds modulo a submodule. The oracle therefore only
needs the lowest operator ``eps_m``; ``full=True`` uses all of them.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .exact import as_surdsum, kernel, simplify
from .gmod import GmModule
from .sl2rep import basis_scale, cg_coordinates, cg_range, hw_rational
from .clebsch import cg2

__all__ = [
    "MixedM",
    "NotBigraded",
    "TensorModule",
    "HighestWeightVectorReport",
    "SocleReport",
    "tensor",
    "socle_of",
    "graded_socle",
    "socle_series",
    "socle_report",
    "socle_bruteforce",
    "intertwiner_dim",
    "invariant_dim",
    "max_weight",
]


class MixedM(ValueError):
    pass


class NotBigraded(ValueError):
    pass


class TensorModule:
    """``left ⊗ right`` with the Leibniz action; basis keys are pairs of factor keys."""

    def __init__(self, left: GmModule, right: GmModule):
        if left.m != right.m:
            raise MixedM(f"cannot tensor modules with m={left.m} and m={right.m}")
        self.left = left
        self.right = right
        self.m = left.m
        self._cache: dict = {}

    @property
    def dim(self) -> int:
        return self.left.dim * self.right.dim

    @property
    def is_bigraded(self) -> bool:
        return self.left.is_chain and self.right.is_chain

    @property
    def is_rational(self) -> bool:
        return self.left.is_rational and self.right.is_rational

    def keys(self):
        for x in self.left.keys():
            for y in self.right.keys():
                yield (x, y)

    def weight(self, key) -> int:
        return self.left.weight(key[0]) + self.right.weight(key[1])

    def bigrade(self, key) -> tuple[int, int]:
        return key[0][0], key[1][0]

    def _image(self, side: int, op, key):
        ck = (side, op, key)
        hit = self._cache.get(ck)
        if hit is None:
            mod = self.left if side == 0 else self.right
            hit = list(mod.act(op, {key: 1}).items())
            self._cache[ck] = hit
        return hit

    def act(self, op, vec: dict) -> dict:
        out: dict = {}
        for (x, y), c in vec.items():
            for x2, v in self._image(0, op, x):
                k = (x2, y)
                out[k] = out.get(k, 0) + v * c
            for y2, v in self._image(1, op, y):
                k = (x, y2)
                out[k] = out.get(k, 0) + v * c
        return {k: v for k, v in out.items() if v}

    def act_e(self, vec):
        return self.act("e", vec)

    def act_f(self, vec):
        return self.act("f", vec)

    def act_h(self, vec):
        return {k: self.weight(k) * v for k, v in vec.items() if self.weight(k)}

    def act_r(self, s, vec):
        return self.act(s, vec)

    def to_unitary(self, vec: dict) -> dict:
        out = {}
        for (x, y), c in vec.items():
            k1, i = x
            k2, j = y
            scale = as_surdsum(self.left.scales[k1]) * self.right.scales[k2]
            scale = scale / (basis_scale(self.left.layers[k1], i) * basis_scale(self.right.layers[k2], j))
            out[(x, y)] = simplify(scale * c)
        return out

    def __repr__(self) -> str:
        return f"TensorModule({self.left.label or self.left.layers} ⊗ {self.right.label or self.right.layers})"


def tensor(A: GmModule, B: GmModule) -> TensorModule:
    return TensorModule(A, B)


Module = Union[GmModule, TensorModule]


# ---------------------------------------------------------------------------
# block structure


class _Blocks:
    """sl(2)-block bookkeeping shared by modules and tensor products."""

    def __init__(self, M: Module):
        self.M = M
        self.m = M.m
        if isinstance(M, TensorModule):
            self.tensor = True
            L, R = M.left.layers, M.right.layers
            self.blocks = [(p, q) for p in range(len(L)) for q in range(len(R))]
            self.dims = {(p, q): (L[p], R[q]) for p, q in self.blocks}
            self.graded = M.is_bigraded
        else:
            self.tensor = False
            self.blocks = list(range(M.length))
            self.dims = {k: (a,) for k, a in enumerate(M.layers)}
            self.graded = M.is_chain
        self.dim = M.dim

    def grade(self, B):
        if not self.graded:
            return 0
        return B[0] + B[1] if self.tensor else B

    def hw_weights(self, B) -> list[int]:
        d = self.dims[B]
        return cg_range(*d) if self.tensor else [d[0]]

    def hw_vector(self, B, mu: int) -> dict:
        if not self.tensor:
            return {(B, 0): Fraction(1)}
        a, b = self.dims[B]
        n = (a + b - mu) // 2
        p, q = B
        return {((p, i), (q, n - i)): x for i, x in enumerate(hw_rational(a, b, mu))}

    def block_of(self, key):
        return (key[0][0], key[1][0]) if self.tensor else key[0]

    def coordinates(self, vec: dict, lam: int) -> dict:
        """Split a weight-lam vector into (block, c) -> coefficient of f^p u_c / p!."""
        parts: dict = {}
        for key, x in vec.items():
            parts.setdefault(self.block_of(key), {})[key] = x
        out = {}
        for B, part in parts.items():
            if not self.tensor:
                ((_, i), x), = part.items()
                out[(B, self.dims[B][0])] = x
                continue
            a, b = self.dims[B]
            cs, lo, T = cg_coordinates(a, b, lam)
            p, q = B
            xs = [0] * len(T)
            for ((_, i), _y), x in part.items():
                xs[i - lo] = x
            for c, row in zip(cs, T):
                acc = 0
                for t, x in zip(row, xs):
                    if t and x:
                        acc = acc + t * x
                if acc:
                    out[(B, c)] = acc
        return out


@dataclass
class HighestWeightVectorReport:
    weight: int
    degree: Optional[int]
    level: int
    q: dict  # block -> coefficient of that block's highest-weight vector
    coords: dict  # rational module basis
    unitary: dict = field(default_factory=dict)
    q_unitary: dict = field(default_factory=dict)  # block -> coefficient of v_0^{a,b,mu}


@dataclass
class _Level:
    """Highest-weight spaces of one submodule, per (grade, weight)."""

    spaces: dict = field(default_factory=dict)  # (g, c) -> list of dict block -> coef
    annihilators: dict = field(default_factory=dict)  # (g, c) -> (blocks, rows)


def _annihilator(space: list[dict], blocks: list) -> list[list]:
    if not space:
        return [[1 if i == j else 0 for j in range(len(blocks))] for i in range(len(blocks))]
    M = [[h.get(B, 0) for B in blocks] for h in space]
    return kernel(M, len(blocks))


class _Oracle:
    def __init__(self, M: Module, full: bool = False):
        self.M = M
        self.bk = _Blocks(M)
        self.full = full
        self._hw_cache: dict = {}
        # blocks per (grade, c)
        self.by_gc: dict = {}
        for B in self.bk.blocks:
            for c in self.bk.hw_weights(B):
                self.by_gc.setdefault((self.bk.grade(B), c), []).append(B)

    def _images(self, B, mu):
        key = (B, mu)
        hit = self._hw_cache.get(key)
        if hit is None:
            h = self.bk.hw_vector(B, mu)
            ops = range(self.M.m + 1) if self.full else [self.M.m]
            hit = []
            for s in ops:
                lam = mu + self.M.m - 2 * s
                hit.append((lam, self.bk.coordinates(self.M.act_r(s, h), lam)))
            self._hw_cache[key] = hit
        return hit

    def next_level(self, prev: Optional[_Level]) -> _Level:
        """Highest-weight spaces of ``{v : r v ⊂ prev}`` (the socle when prev is None)."""
        out = _Level()
        for (g, mu), blocks in sorted(self.by_gc.items()):
            tg = g - 1 if self.bk.graded else 0
            rows: list[list] = []
            # equations: for each image coordinate (c, block) apply annihilator of prev
            eqs: dict = {}
            for t, B in enumerate(blocks):
                for n, (lam, coords) in enumerate(self._images(B, mu)):
                    for (B2, c), x in coords.items():
                        eqs.setdefault((n, c), {}).setdefault(B2, {})[t] = x
            for (n, c), per_block in sorted(eqs.items(), key=lambda kv: repr(kv[0])):
                if prev is None:
                    for B2 in sorted(per_block, key=repr):
                        row = [per_block[B2].get(t, 0) for t in range(len(blocks))]
                        rows.append(row)
                    continue
                tblocks, ann = self._ann(prev, tg, c)
                if not ann:
                    continue
                idx = {B2: i for i, B2 in enumerate(tblocks)}
                for arow in ann:
                    row = [0] * len(blocks)
                    for B2, col in per_block.items():
                        a = arow[idx[B2]]
                        if not a:
                            continue
                        for t, x in col.items():
                            row[t] = row[t] + a * x
                    if any(row):
                        rows.append(row)
            sols = kernel(rows, len(blocks)) if rows else [
                [1 if i == j else 0 for j in range(len(blocks))] for i in range(len(blocks))]
            if sols:
                out.spaces[(g, mu)] = [{B: x for B, x in zip(blocks, v) if x} for v in sols]
        return out

    def _ann(self, level: _Level, g, c):
        key = (g, c)
        hit = level.annihilators.get(key)
        if hit is None:
            blocks = self.by_gc.get(key, [])
            hit = (blocks, _annihilator(level.spaces.get(key, []), blocks))
            level.annihilators[key] = hit
        return hit

    @staticmethod
    def counts(level: _Level) -> Counter:
        out: Counter = Counter()
        for (g, mu), space in level.spaces.items():
            out[mu] += len(space)
        return out

    @staticmethod
    def graded_counts(level: _Level) -> dict:
        out: dict = {}
        for (g, mu), space in level.spaces.items():
            out.setdefault(g, Counter())[mu] += len(space)
        return out

    def levels(self, limit: Optional[int] = None):
        prev = None
        filled_before = 0
        while True:
            cur = self.next_level(prev)
            yield cur
            filled = sum(n * (mu + 1) for mu, n in self.counts(cur).items())
            if filled == self.bk.dim or (limit is not None and limit <= 1):
                return
            if filled == filled_before:
                raise ArithmeticError("socle series stalled")
            filled_before = filled
            if limit is not None:
                limit -= 1
            prev = cur

    def vector(self, combo: dict, mu: int) -> dict:
        vec: dict = {}
        for B, x in combo.items():
            for key, y in self.bk.hw_vector(B, mu).items():
                vec[key] = vec.get(key, 0) + x * y
        return {k: v for k, v in vec.items() if v}


def _ms(counter) -> list[int]:
    return sorted(counter.elements())


def socle_of(M: Module, full: bool = False) -> Counter:
    """Highest weights (with multiplicity) of ``soc(M) = M^r``."""
    orc = _Oracle(M, full)
    return orc.counts(orc.next_level(None))


def graded_socle(T: Module, full: bool = False) -> dict:
    """``t -> `` highest weights of ``S_t``, the socle part in total layer degree t."""
    bk = _Blocks(T)
    if not bk.graded:
        raise NotBigraded("graded socle needs chain-type factors")
    orc = _Oracle(T, full)
    graded = orc.graded_counts(orc.next_level(None))
    top = max(bk.grade(B) for B in bk.blocks)
    return {t: graded.get(t, Counter()) for t in range(top + 1)}


def socle_series(M: Module, full: bool = False) -> list[Counter]:
    """Highest weights of each socle factor ``soc^{k+1} / soc^k``."""
    orc = _Oracle(M, full)
    out = []
    prev: Counter = Counter()
    for level in orc.levels():
        cur = orc.counts(level)
        out.append(cur - prev)
        prev = cur
    return out


@dataclass
class SocleReport:
    total: Counter
    graded: Optional[dict] = None
    series: Optional[list] = None
    witnesses: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"socle": _ms(self.total)}
        if self.graded is not None:
            out["graded"] = {str(t): _ms(c) for t, c in sorted(self.graded.items())}
        if self.series is not None:
            out["series"] = [_ms(c) for c in self.series]
        return out


def _unitary_q(M: Module, B, mu, x):
    """Coefficient of the unitary embedding vector v_0^{a,b,mu} carried by block B."""
    if not isinstance(M, TensorModule):
        k = B
        return simplify(as_surdsum(x) * M.scales[k] / basis_scale(M.layers[k], 0))
    p, q = B
    a, b = M.left.layers[p], M.right.layers[q]
    n = (a + b - mu) // 2
    # compare the (0, n) component
    coef = as_surdsum(x) * M.left.scales[p] * M.right.scales[q]
    coef = coef / (basis_scale(a, 0) * basis_scale(b, n))
    return simplify(coef / cg2(a, a, b, b - 2 * n, mu, mu))


def socle_report(M: Module, series: bool = False, graded: bool = False,
                 witnesses: bool = False, full: bool = False) -> SocleReport:
    orc = _Oracle(M, full)
    levels = []
    gen = orc.levels(None if series else 1)
    for level in gen:
        levels.append(level)
    first = levels[0]
    rep = SocleReport(orc.counts(first))
    if graded:
        if not orc.bk.graded:
            raise NotBigraded("graded socle needs chain-type factors")
        gc = orc.graded_counts(first)
        top = max(orc.bk.grade(B) for B in orc.bk.blocks)
        rep.graded = {t: gc.get(t, Counter()) for t in range(top + 1)}
    if series:
        prev: Counter = Counter()
        rep.series = []
        for level in levels:
            cur = orc.counts(level)
            rep.series.append(cur - prev)
            prev = cur
    if witnesses:
        for (g, mu), space in sorted(first.spaces.items()):
            for combo in space:
                vec = orc.vector(combo, mu)
                rep.witnesses.append(HighestWeightVectorReport(
                    weight=mu,
                    degree=g if orc.bk.graded else None,
                    level=0,
                    q=dict(combo),
                    coords=vec,
                    unitary=M.to_unitary(vec),
                    q_unitary={B: _unitary_q(M, B, mu, x) for B, x in combo.items()},
                ))
    return rep


# ---------------------------------------------------------------------------
# independent checks (dense, small inputs only)


def _basis(M: Module) -> list:
    return list(M.keys())


def socle_bruteforce(M: Module) -> Counter:
    """``hw_decompose`` of the common kernel of every ``eps_s`` on the whole space."""
    from .sl2rep import WeightVector, hw_decompose

    keys = _basis(M)
    out: Counter = Counter()
    # r preserves no weight, but the kernel is spanned by weight vectors: slice by weight
    by_w: dict = {}
    for k in keys:
        by_w.setdefault(M.weight(k), []).append(k)
    vecs = []
    for w, ks in by_w.items():
        rows = []
        for s in range(M.m + 1):
            images = [M.act_r(s, {k: 1}) for k in ks]
            targets = sorted({t for im in images for t in im}, key=repr)
            for t in targets:
                rows.append([im.get(t, 0) for im in images])
        sols = kernel(rows, len(ks)) if rows else [[int(i == j) for j in range(len(ks))] for i in range(len(ks))]
        for v in sols:
            vecs.append(WeightVector({k: x for k, x in zip(ks, v)}, w))

    def e_action(v):
        return WeightVector(M.act_e(v.coords), v.weight + 2)

    out.update(hw_decompose(vecs, e_action, check=False))
    return out


def intertwiner_dim(V: GmModule, W: GmModule) -> int:
    """Dimension of Hom_g(V, W) by solving ``phi x = x phi`` for all generators."""
    vk = list(V.keys())
    wk = list(W.keys())
    unknowns = [(p, q) for q in vk for p in wk if V.weight(q) == W.weight(p)]
    uidx = {u: n for n, u in enumerate(unknowns)}
    by_src: dict = {}
    for p, q in unknowns:
        by_src.setdefault(q, []).append(p)
    rows = []
    ops = ["e", "f"] + list(range(V.m + 1))
    for op in ops:
        for q in vk:
            # (phi x - x phi)(q) = 0
            eq: dict = {}
            for q2, c in V.act(op, {q: 1}).items():
                for p in by_src.get(q2, ()):
                    eq.setdefault(p, {})
                    eq[p][uidx[(p, q2)]] = eq[p].get(uidx[(p, q2)], 0) + c
            for p in by_src.get(q, ()):
                for p2, c in W.act(op, {p: 1}).items():
                    eq.setdefault(p2, {})
                    eq[p2][uidx[(p, q)]] = eq[p2].get(uidx[(p, q)], 0) - c
            for target, coeffs in eq.items():
                if any(coeffs.values()):
                    row = [0] * len(unknowns)
                    for n, c in coeffs.items():
                        row[n] = c
                    rows.append(row)
    if not unknowns:
        return 0
    return len(kernel(rows, len(unknowns))) if rows else len(unknowns)


def invariant_dim(T: Module) -> int:
    """Dimension of the g-invariants: the weight-0 vectors killed by e, f and every eps_s."""
    ks = [k for k in T.keys() if T.weight(k) == 0]
    if not ks:
        return 0
    rows = []
    for op in ["e", "f"] + list(range(T.m + 1)):
        images = [T.act(op, {k: 1}) if op not in ("h",) else {} for k in ks]
        targets = sorted({t for im in images for t in im}, key=repr)
        for t in targets:
            rows.append([im.get(t, 0) for im in images])
    return len(kernel(rows, len(ks))) if rows else len(ks)


def max_weight(M: Module) -> int:
    if isinstance(M, TensorModule):
        return max(M.left.layers) + max(M.right.layers)
    return max(M.layers)
