import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from hrng.crypto import Opening, Share, ShareSet, reconstruct, secp256k1_group, shares_from_polynomials, split
from hrng.crypto.shamir import eval_poly, lagrange_at_zero
from hrng.errors import DuplicateShareIndex, FieldTooSmall, InsufficientShares, InvalidThreshold

P = 11


def test_split_example():
    ss = shares_from_polynomials([5, 3], [0, 0], k=3, p=P)
    assert [(s.index, s.message_part) for s in ss.shares] == [(1, 8), (2, 0), (3, 3)]


def test_split_matches_fixture(vectors):
    for v in vectors["split"]:
        ss = shares_from_polynomials(v["message_coeffs"], v["blinding_coeffs"], v["k"], v["p"])
        assert [[s.index, s.message_part, s.blinding_part] for s in ss.shares] == v["shares"]


def test_reconstruct_example():
    shares = [Share(1, 8, 0), Share(3, 3, 0)]
    assert reconstruct(shares, 2, P).message == 5
    # Lagrange weights at 0 for x = {1, 3}: 3/2 and -1/2
    assert lagrange_at_zero([1, 3], P) == [3 * pow(2, -1, P) % P, (-pow(2, -1, P)) % P]


def test_threshold_one_shares_are_the_secret():
    ss = split(Opening(7, 4), 1, 5, P, random.Random(1))
    assert all((s.message_part, s.blinding_part) == (7, 4) for s in ss.shares)
    assert reconstruct([ss.shares[3]], 1, P) == Opening(7, 4)


def test_boundaries():
    split(Opening(1, 1), P - 1, P - 1, P, random.Random(0))
    with pytest.raises(FieldTooSmall):
        split(Opening(1, 1), 2, P, P, random.Random(0))
    with pytest.raises(InvalidThreshold):
        split(Opening(1, 1), 4, 3, P, random.Random(0))
    with pytest.raises(InvalidThreshold):
        split(Opening(1, 1), 0, 3, P, random.Random(0))


def test_reconstruct_errors():
    ss = split(Opening(2, 3), 3, 4, P, random.Random(0))
    with pytest.raises(InsufficientShares):
        reconstruct(ss.shares[:2], 3, P)
    with pytest.raises(DuplicateShareIndex):
        reconstruct([ss.shares[0], ss.shares[0], ss.shares[1]], 3, P)


def test_shareset_invariants():
    with pytest.raises(DuplicateShareIndex):
        ShareSet((Share(1, 0, 0), Share(1, 1, 1)), 1, 2)
    with pytest.raises(InvalidThreshold):
        ShareSet((Share(1, 0, 0),), 2, 1)


def test_reconstruct_all_secrets_all_polynomials():
    # every secret and every degree-1 polynomial at p=11, all k=3 shares
    for s, a in itertools.product(range(P), repeat=2):
        ss = shares_from_polynomials([s, a], [a, s], 3, P)
        assert reconstruct(list(ss.shares), 2, P) == Opening(s, a)


@pytest.mark.parametrize("t,k", [(1, 1), (1, 3), (2, 2), (2, 4), (3, 3), (3, 4)])
def test_every_t_subset_reconstructs(t, k):
    rng = random.Random(t * 10 + k)
    for s in range(P):
        secret = Opening(s, rng.randrange(P))
        ss = split(secret, t, k, P, rng)
        for subset in itertools.combinations(ss.shares, t):
            assert reconstruct(list(subset), t, P) == secret


@pytest.mark.parametrize("t,k", [(2, 3), (2, 4), (3, 4)])
def test_t_minus_one_shares_reveal_nothing(t, k):
    """Any t-1 share values are consistent with every candidate secret."""
    for xs in itertools.combinations(range(1, k + 1), t - 1):
        for ys in itertools.product(range(P), repeat=t - 1):
            for secret in range(P):
                # brute force for a degree-(t-1) polynomial with f(0)=secret through the points
                found = any(
                    all(eval_poly([secret, *rest], x, P) == y for x, y in zip(xs, ys))
                    for rest in itertools.product(range(P), repeat=t - 1)
                )
                assert found


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0), st.integers(min_value=0), st.integers(min_value=1, max_value=8),
       st.data())
def test_roundtrip_production_field(m, r, k, data):
    p = secp256k1_group().p
    t = data.draw(st.integers(min_value=1, max_value=k))
    seed = data.draw(st.integers(min_value=0, max_value=2**32))
    ss = split(Opening(m, r), t, k, p, random.Random(seed))
    subset = data.draw(st.permutations(ss.shares)).copy()[:t]
    assert reconstruct(subset, t, p) == Opening(m % p, r % p)
