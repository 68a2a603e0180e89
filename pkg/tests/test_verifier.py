import itertools
import random

import pytest

from hrng.crypto import BitString, Commitment, Opening, commit, tiny_group
from hrng.errors import Rejected
from hrng.gas import OpCounts, VerifierMode, expected_counts
from hrng.messages import RandomRequest, RevealRecord
from hrng.pool import PoolEntry, make_entry_id
from hrng.verifier import (
    aggregate_non_optimized,
    aggregate_optimized,
    measure_ops,
    validate_request,
)

P = 11


def pool_of(openings, gateways=None, tiny=None):
    tiny = tiny or tiny_group()
    view = {}
    for i, op in enumerate(openings):
        g = gateways[i] if gateways else i + 1
        eid = make_entry_id(1, g, 1, i + 1)
        view[eid] = PoolEntry(eid, 1, g, 1, i + 1, commit(tiny, op), b"", i)
    return view


def reveals_for(view, openings, bits=None):
    out = []
    for i, (eid, op) in enumerate(zip(view, openings)):
        rb = bits[i] if bits else BitString(op.message, 68)
        out.append(RevealRecord(eid, op, (), b"", rb))
    return out


def request(ids, method="sum_mod_p", at=100):
    return RandomRequest("req/1", 1, tuple(ids), method, "dapp", at)


def test_validate_request_cases():
    view = pool_of([Opening(1, 1)] * 4, gateways=[1, 1, 2, 3])
    ids = list(view)
    assert validate_request(request(ids[1:]), view, ell=3, n_mg=1)
    v = validate_request(request(ids[:2]), view, ell=2, n_mg=1)
    assert (v.ok, v.reason) == (False, "GatewayDiversity")
    v = validate_request(request(ids[1:], method="median"), view, ell=3, n_mg=1)
    assert v.reason == "UnsupportedAggregation"
    v = validate_request(request(ids[1:3] + ["r1/g9/d9/s9"]), view, ell=3, n_mg=1)
    assert v.reason == "UnpublishedEntry"
    v = validate_request(request(ids[1:3] + ids[1:2]), view, ell=3, n_mg=1)
    assert v.reason == "DuplicateSelection"
    v = validate_request(request(ids[1:]), view, ell=2, n_mg=1)
    assert v.reason == "ArityMismatch"
    v = validate_request(request(ids[1:], at=1), view, ell=3, n_mg=1)
    assert v.reason == "UnpublishedEntry"
    v = validate_request(request(ids[1:], method="xor"), view, ell=3, n_mg=1, mode=VerifierMode.OPTIMIZED)
    assert v.reason == "ModeMismatch"
    assert validate_request(request(ids[:2]), view, ell=2, n_mg=1, enforce_diversity=False)


def test_xor_example():
    ops = [Opening(10, 1), Opening(6, 2)]
    view = pool_of(ops)
    res = aggregate_non_optimized(
        reveals_for(view, ops, [BitString.parse("1010"), BitString.parse("0110")]), view, tiny_group(), 4)
    assert str(res.value) == "1100"
    assert res.ops == OpCounts(ecadd=2, ecmul=4, addmod=1)


def test_sum_example():
    ops = [Opening(3, 2), Opening(4, 5)]
    view = pool_of(ops)
    res = aggregate_optimized(reveals_for(view, ops), view, tiny_group())
    assert res.value == 7
    assert res.ops == OpCounts(ecadd=2, ecmul=2, addmod=2)


def test_single_entry_degenerates_to_one_open():
    ops = [Opening(9, 3)]
    view = pool_of(ops)
    res = aggregate_optimized(reveals_for(view, ops), view, tiny_group())
    assert res.value == 9 and res.ops == OpCounts(ecadd=1, ecmul=2)


def test_tampered_opening_named():
    ops = [Opening(3, 2), Opening(4, 5), Opening(1, 1)]
    view = pool_of(ops)
    bad = reveals_for(view, [ops[0], Opening(5, 5), ops[2]])
    with pytest.raises(Rejected) as exc:
        aggregate_non_optimized(bad, view, tiny_group(), 68)
    assert exc.value.reason == "BadOpening" and exc.value.detail == list(view)[1]
    with pytest.raises(Rejected) as exc:
        aggregate_optimized(bad, view, tiny_group())
    assert exc.value.reason == "BadAggregateOpening" and exc.value.detail == list(view)[1]


@pytest.mark.parametrize("mode", list(VerifierMode))
def test_measured_counts_match_table(mode):
    for ell in range(1, 40):
        assert measure_ops(mode, ell) == expected_counts(mode, ell)


def test_optimized_accepts_iff_sums_match():
    """On the tiny group: accept exactly when (sum m, sum r) opens the product commitment."""
    tiny = tiny_group()
    base = [Opening(3, 2), Opening(4, 5)]
    view = pool_of(base)
    target = commit(tiny, Opening(7, 7)).element
    for m1, r1, m2, r2 in itertools.product(range(P), repeat=4):
        claimed = [Opening(m1, r1), Opening(m2, r2)]
        expect = commit(tiny, Opening((m1 + m2) % P, (r1 + r2) % P)).element == target
        try:
            aggregate_optimized(reveals_for(view, claimed), view, tiny)
            accepted = True
        except Rejected:
            accepted = False
        assert accepted == expect
