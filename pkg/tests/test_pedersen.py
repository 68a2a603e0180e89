import itertools

import pytest
from hypothesis import given, settings, strategies as st

from hrng.crypto import Commitment, Opening, commit, hom_combine, open_verify, secp256k1_group
from hrng.errors import EmptyAggregation

P = 11


def brute_commit(m, r):
    return pow(2, m, 23) * pow(3, r, 23) % 23


def test_commit_example(tiny):
    assert commit(tiny, Opening(3, 2)).element == 3
    assert commit(tiny, Opening(0, 0)).element == 1


def test_commit_reduces_exponents(tiny):
    for m, r in [(14, 2), (3, 13), (-8, 24), (110, 121)]:
        assert commit(tiny, Opening(m, r)) == commit(tiny, Opening(m % P, r % P))


def test_commit_matches_fixture(tiny, vectors):
    for v in vectors["commit"]:
        assert commit(tiny, Opening(v["m"], v["r"])).element == v["c"]


def test_open_verify_examples(tiny):
    c = commit(tiny, Opening(3, 2))
    assert open_verify(tiny, c, Opening(3, 2))
    assert not open_verify(tiny, c, Opening(4, 2))
    assert commit(tiny, Opening(4, 2)).element == 6
    assert open_verify(tiny, Commitment(1), Opening(0, 0))


def test_roundtrip_exhaustive(tiny):
    for m, r in itertools.product(range(P), repeat=2):
        assert open_verify(tiny, commit(tiny, Opening(m, r)), Opening(m, r))


def test_perfect_hiding_exhaustive(tiny):
    subgroup = {pow(2, e, 23) for e in range(P)}
    for m in range(P):
        image = {commit(tiny, Opening(m, r)).element for r in range(P)}
        assert image == subgroup


def test_hom_combine_examples(tiny):
    a, b = commit(tiny, Opening(3, 2)), commit(tiny, Opening(4, 5))
    assert b.element == 1
    assert hom_combine(tiny, [a, b]).element == 3 == commit(tiny, Opening(7, 7)).element
    assert hom_combine(tiny, [a]) == a
    for m, r in itertools.product(range(P), repeat=2):
        cancel = hom_combine(tiny, [commit(tiny, Opening(m, r)), commit(tiny, Opening(P - m, P - r))])
        assert cancel.element == 1


def test_hom_combine_empty(tiny):
    with pytest.raises(EmptyAggregation):
        hom_combine(tiny, [])


def test_homomorphism_against_brute_force(tiny):
    for m1, r1, m2, r2 in itertools.product(range(P), repeat=4):
        prod = hom_combine(tiny, [commit(tiny, Opening(m1, r1)), commit(tiny, Opening(m2, r2))])
        assert prod.element == brute_commit((m1 + m2) % P, (r1 + r2) % P)


@settings(max_examples=10, deadline=None)
@given(*(st.integers(min_value=0, max_value=2**260) for _ in range(4)))
def test_homomorphism_production_group(m1, r1, m2, r2):
    gp = secp256k1_group()
    p = gp.p
    prod = hom_combine(gp, [commit(gp, Opening(m1, r1)), commit(gp, Opening(m2, r2))])
    assert prod == commit(gp, Opening((m1 + m2) % p, (r1 + r2) % p))
    assert open_verify(gp, commit(gp, Opening(m1, r1)), Opening(m1, r1))
    assert not open_verify(gp, commit(gp, Opening(m1, r1)), Opening(m1 + 1, r1))
