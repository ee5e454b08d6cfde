from fractions import Fraction

from uniserial.exact import as_surdsum, rank


def same_span(vs, ws) -> bool:
    """Row spaces of ``vs`` and ``ws`` agree (entries may be surds)."""
    if not vs or not ws:
        return not vs and not ws
    n = len(vs[0])
    r = rank([list(v) for v in vs], n)
    return r == rank([list(w) for w in ws], n) == rank([list(v) for v in vs] + [list(w) for w in ws], n)


def is_zero_vec(v) -> bool:
    return all(as_surdsum(x) == 0 for x in v)


def matvec(M, v):
    return [sum((as_surdsum(a) * b for a, b in zip(row, v)), as_surdsum(0)) for row in M]


def frac(x) -> Fraction:
    return Fraction(x)
