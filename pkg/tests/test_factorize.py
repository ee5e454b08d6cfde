import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uniserial.factorize import (
    AmbiguousM2,
    NoCandidate,
    SocleSignature,
    candidates,
    canonical_pair,
    recover,
    signature_closed,
    signature_of,
    splits,
    verify,
)
from uniserial.gmod import UniserialSpec, build
from uniserial.socle import tensor
from uniserial.theory import ZTypeSpec


def z(kind, a, l, m):
    return ZTypeSpec(kind, a, l, m)


def built(V, W, scale=1):
    return tensor(build(V.to_spec(), arrow_scale=scale), build(W.to_spec(), arrow_scale=scale))


def test_signature_examples():
    sig = signature_of(built(z("Z", 1, 2, 3), z("Z", 2, 1, 3)))
    assert sig == SocleSignature(3, 12, (1, 3, 6), (2, 4, 6, 8, 10, 12))
    sig = signature_of(built(z("Z", 3, 0, 2), z("Z", 1, 0, 2)))
    assert sig == SocleSignature(2, 4, (2, 4), (2, 4))
    sig = signature_of(built(z("Z", 0, 1, 1), z("Zd", 0, 1, 1)))
    assert sig == SocleSignature(1, 2, (0, 1), (0, 1))


def test_signature_json_roundtrip():
    sig = SocleSignature(3, 12, (6, 1, 3), (12, 10, 8, 6, 4, 2))
    assert sig.soc == (1, 3, 6)
    assert SocleSignature.from_json(sig.to_json()) == sig
    with pytest.raises(ValueError):
        SocleSignature(3, 2, (1, 3), (1,))


def test_splits():
    assert splits((1, 3, 6), 3) == [((1,), (3, 6)), ((1, 3), (6,))]
    assert splits((1, 1), 3) == []
    assert ((2, 4, 6, 8, 10, 12), ()) in splits((2, 4, 6, 8, 10, 12), 3)


def test_recover_case_i():
    res = recover(SocleSignature(3, 12, (1, 3, 6), (2, 4, 6, 8, 10, 12)))
    assert res.case == "i"
    assert res.pair() == (z("Z", 1, 2, 3), z("Z", 2, 1, 3))
    assert str(res) == "Z:1:2 ⊗ Z:2:1"
    assert res.split_used[:2] == ((1, 3), (6,))
    assert res.specs() == (UniserialSpec.Z(3, 1, 2), UniserialSpec.Z(3, 2, 1))


def test_recover_case_iii():
    res = recover(SocleSignature(1, 2, (0, 1), (0, 1)))
    assert res.case == "iii"
    assert res.pair() == (z("Z", 0, 1, 1), z("Zd", 0, 1, 1))


def test_recover_case_ii():
    V, W = z("Zd", 1, 2, 3), z("Zd", 0, 1, 3)
    res = recover(signature_closed(V, W))
    assert res.case == "ii" and res.pair() == canonical_pair(V, W)


def test_m2_ambiguous():
    sig = signature_closed(z("Z", 0, 1, 2), z("Z", 1, 1, 2))
    with pytest.raises(AmbiguousM2) as info:
        recover(sig)
    # the true pair is among the validated candidates, but not alone
    pairs = [c.pair() for c in info.value.candidates]
    assert (z("Z", 0, 1, 2), z("Z", 1, 1, 2)) in pairs
    assert len(pairs) == 2


def test_no_candidate():
    with pytest.raises(NoCandidate):
        recover(SocleSignature(3, 12, (1, 3), (2, 4, 6, 8, 10, 12)))
    with pytest.raises(NoCandidate):
        recover(SocleSignature(3, 5, (1, 1), (5,)))


def test_verify():
    sig = signature_of(built(z("Z", 1, 2, 3), z("Z", 2, 1, 3)))
    res = recover(sig)
    assert verify(res, sig)
    swapped = type(res)(res.case, res.right, res.left, res.split_used)
    assert verify(swapped, sig)
    dropped = SocleSignature(sig.m, sig.lam, sig.soc[1:], sig.soc_dual)
    assert not verify(res, dropped)


@pytest.mark.parametrize("m", [1, 3, 4, 5])
def test_round_trip_closed(m):
    for k1, k2 in itertools.product(["Z", "Zd"], repeat=2):
        for a, b, l, lp in itertools.product(range(5), range(5), range(4), range(4)):
            V, W = z(k1, a, l, m), z(k2, b, lp, m)
            assert recover(signature_closed(V, W)).pair() == canonical_pair(V, W)


@pytest.mark.parametrize("m", [1, 3])
def test_round_trip_oracle_small(m):
    for k1, k2 in itertools.product(["Z", "Zd"], repeat=2):
        for a, b, l, lp in itertools.product(range(3), range(3), range(3), range(3)):
            V, W = z(k1, a, l, m), z(k2, b, lp, m)
            sig = signature_of(built(V, W))
            assert sig == signature_closed(V, W)
            assert recover(sig).pair() == canonical_pair(V, W)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([1, 3, 4]), st.sampled_from(["Z", "Zd"]), st.sampled_from(["Z", "Zd"]),
       st.integers(0, 3), st.integers(0, 3), st.integers(0, 2), st.integers(0, 2))
def test_recover_independent_of_normalization(m, k1, k2, a, b, l, lp):
    V, W = z(k1, a, l, m), z(k2, b, lp, m)
    assert signature_of(built(V, W, scale=3)) == signature_of(built(V, W))


def test_candidates_are_unique_on_grid():
    for m in (1, 3):
        for k1, k2 in itertools.product(["Z", "Zd"], repeat=2):
            for a, b, l, lp in itertools.product(range(3), range(3), range(3), range(3)):
                assert len(candidates(signature_closed(z(k1, a, l, m), z(k2, b, lp, m)))) == 1
