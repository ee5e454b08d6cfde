from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uniserial.exact import (
    MAX_RADICANDS,
    RadicandExplosion,
    Surd,
    as_surdsum,
    format_scalar,
    is_rational,
    kernel,
    parse_scalar,
    rank,
    rat_kernel,
    simplify,
    sqrt,
    square_split,
    surd_canon,
    surdsum_kernel,
    to_fraction,
)

from _util import matvec, is_zero_vec, same_span

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=30)
radicands = st.integers(min_value=1, max_value=200)
surds = st.builds(surd_canon, rationals, radicands)


def test_canon_examples():
    assert surd_canon(1, 8) == Surd(2, 2)
    assert surd_canon(1, F(9, 4)) == F(3, 2)
    assert sqrt(2) * sqrt(3) == Surd(1, 6)
    assert str(sqrt(2) * sqrt(3)) == "1*sqrt(6)"


def test_canon_rational_radicand():
    # sqrt(1/2) = (1/2) sqrt(2)
    assert surd_canon(1, F(1, 2)) == Surd(F(1, 2), 2)
    assert surd_canon(0, 7) == 0
    with pytest.raises(ValueError):
        surd_canon(1, -2)


def test_square_split():
    assert square_split(72) == (6, 2)
    assert square_split(1) == (1, 1)
    assert square_split(97) == (1, 97)
    # past the trial-division table
    p = 1_000_003
    assert square_split(p * p * 5) == (p, 5)


def test_rat_kernel_examples():
    assert rat_kernel([[1, 0], [0, 1]]) == []
    assert same_span(rat_kernel([[0, 0], [0, 0]]), [[1, 0], [0, 1]])
    ker = rat_kernel([[1, 2], [2, 4]])
    assert same_span(ker, [[-2, 1]])
    # normalized: coprime integers, first nonzero entry positive
    assert ker == [[2, -1]]


def test_surdsum_kernel_examples():
    k1 = surdsum_kernel([[sqrt(2), -2]])
    assert same_span(k1, [[sqrt(2), 1]])
    k2 = surdsum_kernel([[1, sqrt(2)], [sqrt(2), 2]])
    assert same_span(k2, [[-sqrt(2), 1]])
    assert same_span(kernel([[1, 1]]), [[-1, 1]])


def test_kernel_vectors_annihilated():
    M = [[1, sqrt(2), sqrt(3)], [sqrt(6), 2 * sqrt(3), 3 * sqrt(2)]]
    ker = kernel(M)
    assert len(ker) == 2
    for v in ker:
        assert is_zero_vec(matvec(M, v))


def test_radicand_explosion():
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    row = [sqrt(p) for p in primes[: MAX_RADICANDS + 1]]
    with pytest.raises(RadicandExplosion):
        surdsum_kernel([row])


def test_format_parse():
    assert format_scalar(F(3, 2)) == "3/2"
    assert format_scalar(0) == "0"
    assert format_scalar(surd_canon(F(1, 2), 2)) == "1/2*sqrt(2)"
    x = as_surdsum(sqrt(2)) + sqrt(3) + 1
    assert parse_scalar(format_scalar(x)) == x
    assert parse_scalar("-1/3*sqrt(3)") == surd_canon(F(-1, 3), 3)


def test_simplify_and_rational():
    x = as_surdsum(sqrt(2)) * sqrt(2)
    assert is_rational(x)
    assert to_fraction(x) == 2
    assert simplify(x) == 2 and isinstance(simplify(x), F)
    with pytest.raises(ValueError):
        to_fraction(sqrt(2))


@given(surds, surds, surds)
def test_surd_mul_assoc_comm(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x


@given(surds)
def test_surd_inverse(x):
    if x:
        assert x * x.inverse() == 1


@settings(max_examples=60)
@given(st.lists(st.tuples(rationals, st.sampled_from([1, 2, 3, 5, 6, 7])), min_size=1, max_size=4))
def test_surdsum_inverse_and_sign(terms):
    x = sum((as_surdsum(surd_canon(c, r)) for c, r in terms), as_surdsum(0))
    if x:
        assert x * x.inverse() == 1
        # exact comparison agrees with floating point when far from 0
        f = float(x)
        if abs(f) > 1e-6:
            assert x.conjugates_sign() == (1 if f > 0 else -1)


def test_sign_near_cancellation():
    # 99^2 * 2 = 19602 versus 140^2 = 19600: a tight but nonzero difference
    x = as_surdsum(surd_canon(99, 2)) - 140
    assert x.conjugates_sign() == 1
    y = as_surdsum(sqrt(2)) + sqrt(3) - sqrt(10)
    assert y.conjugates_sign() == -1


@settings(max_examples=40)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=1, max_size=4))
def test_rat_kernel_rank_nullity(M):
    ker = rat_kernel(M)
    assert len(ker) + rank(M, 4) == 4
    for v in ker:
        assert is_zero_vec(matvec(M, v))
