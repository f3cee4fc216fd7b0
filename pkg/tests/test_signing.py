import random
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from dtms import fixtures
from dtms.dealer import MemberRecord, dealer_setup
from dtms.errors import BoardInconsistencyError, NonceReuseError, ProtocolError, ShareError
from dtms.group import keypair_gen
from dtms.shamir import lagrange_coefficients
from dtms.signing import (
    CommitmentTriple,
    NonceSecret,
    RecoveredShare,
    SignerContext,
    aggregate_commitments,
    commit_with,
    compute_challenge,
    modify_shadow,
    nonce_commit,
    partial_sign,
    recover_share,
)

EXP = fixtures.EXPECTED


def _record(index, deal):
    return deal.board.member(fixtures.uid_of(index))


@pytest.mark.parametrize("index, x, l_i", [(1, 13, 10), (2, 18, 20)])
def test_recover_share_examples(deal, toy, index, x, l_i):
    rec = _record(index, deal)
    assert recover_share(rec, deal.board.w, x, toy) == RecoveredShare(rec.uid, l_i)


def test_recover_share_with_wrong_key(deal, toy):
    with pytest.raises(BoardInconsistencyError):
        recover_share(_record(1, deal), deal.board.w, 12, toy)


def test_recover_share_detects_board_mismatch(deal, toy):
    rec = replace(_record(1, deal), m=9)
    with pytest.raises(BoardInconsistencyError, match="does not match"):
        recover_share(rec, deal.board.w, 13, toy)


def test_all_members_recover_their_shares(deal, toy):
    for index, x in enumerate(fixtures.MEMBER_SECRETS, start=1):
        assert recover_share(_record(index, deal), deal.board.w, x, toy).l == EXP["l"][index - 1]


@pytest.mark.parametrize("index", sorted(fixtures.SIGNING_NONCES))
def test_commitment_goldens(toy, index):
    k1, k2 = fixtures.SIGNING_NONCES[index]
    _, triple = commit_with(toy, pow(25, 9, 47), k1, k2)
    assert (triple.a, triple.b, triple.c) == EXP["commitments"][index]


def test_commitment_when_receiver_key_is_g(toy):
    # y_R = g collapses C to g^(k1+k2)
    _, triple = commit_with(toy, 25, 5, 7)
    assert triple.c == pow(25, 12, 47)
    assert triple.a * triple.c % 47 == triple.b


def test_aggregates_and_challenge(toy):
    triples = [CommitmentTriple(*EXP["commitments"][i]) for i in fixtures.SIGNER_INDEXES]
    agg = aggregate_commitments(triples, fixtures.signer_uids(), b"m", toy, threshold=5)
    assert (agg.u_s, agg.v_s, agg.w_s) == EXP["aggregates"]
    assert agg.r_s == 9
    assert compute_challenge(36, b"m", toy) == 9


def test_aggregation_rejects_short_or_mismatched_input(toy):
    triples = [CommitmentTriple(1, 1, 1)] * 2
    with pytest.raises(ProtocolError):
        aggregate_commitments(triples, (1, 2, 3), b"m", toy)
    with pytest.raises(ProtocolError):
        aggregate_commitments(triples, (1, 2), b"m", toy, threshold=3)
    with pytest.raises(ShareError):
        aggregate_commitments(triples, (1, 1), b"m", toy)


def test_derived_weights():
    lam = fixtures.derived_lagrange()
    assert [lam[u] for u in fixtures.signer_uids()] == [12, 10, 15, 4, 6]
    assert lagrange_coefficients(fixtures.signer_uids(), 23) == lam


@pytest.mark.parametrize("l_i, lam, ms", [(20, 12, 10), (5, 15, 6), (20, 10, 16), (7, 6, 19)])
def test_modify_shadow_examples(l_i, lam, ms):
    ctx = modify_shadow(RecoveredShare(4, l_i), (4, 8), 23, lam)
    assert ctx == SignerContext(4, lam, ms)


def test_modify_shadow_outside_subset():
    with pytest.raises(ShareError):
        modify_shadow(RecoveredShare(4, 1), (8, 16), 23)


def test_modified_shadow_goldens(deal, toy):
    lam = fixtures.derived_lagrange()
    subset = fixtures.signer_uids()
    got = []
    for index, x in zip(fixtures.SIGNER_INDEXES, (18, 20, 17, 22, 15)):
        share = recover_share(_record(index, deal), deal.board.w, x, toy)
        got.append(modify_shadow(share, subset, 23, lam[share.uid]).ms)
    assert tuple(got) == EXP["ms"]


@pytest.mark.parametrize("k1, ms, r_s, s", [(18, 10, 9, 16), (17, 16, 9, 0), (18, 10, 0, 18)])
def test_partial_sign_examples(toy, k1, ms, r_s, s):
    ps = partial_sign(NonceSecret(k1, 1), SignerContext(4, 1, ms), r_s, toy)
    assert ps.s == s
    assert ps.b == pow(25, k1, 47)


def test_partial_goldens(toy):
    got = []
    for index, ms in zip(fixtures.SIGNER_INDEXES, EXP["ms"]):
        k1, k2 = fixtures.SIGNING_NONCES[index]
        got.append(partial_sign(NonceSecret(k1, k2), SignerContext(index, 1, ms), 9, toy).s)
    assert tuple(got) == EXP["s"]


def test_nonce_reuse_is_refused(toy):
    nonce = NonceSecret(3, 4)
    partial_sign(nonce, SignerContext(1, 1, 1), 2, toy)
    with pytest.raises(NonceReuseError):
        partial_sign(nonce, SignerContext(1, 1, 1), 5, toy)


def test_challenge_out_of_range(toy):
    with pytest.raises(ValueError):
        partial_sign(NonceSecret(3, 4), SignerContext(1, 1, 1), 23, toy)


def test_nonce_repr_hides_values():
    assert "17" not in repr(NonceSecret(17, 17))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_modified_shadows_sum_to_masked_secret(seed, toy16):
    rng = random.Random(seed)
    uids = sorted(rng.sample(range(1, toy16.q), 5))
    keys = {u: keypair_gen(toy16, rng) for u in uids}
    board, secrets = dealer_setup(toy16, 3, [(u, keys[u].y) for u in uids], rng)
    subset = tuple(sorted(rng.sample(uids, rng.randint(3, 5))))
    q, p = toy16.q, toy16.p
    total = 0
    for uid in subset:
        share = recover_share(board.member(uid), board.w, keys[uid].x, toy16)
        total += modify_shadow(share, subset, q).ms
    lam = lagrange_coefficients(subset, q)
    assert total % q == (secrets.polynomial.secret + sum(secrets.nonces[u] * lam[u] for u in subset)) % q
    e = 1
    for uid in subset:
        e = e * pow(board.member(uid).n, lam[uid], p) % p
    assert toy16.gexp(total) == e * board.y_s % p


def test_random_commitments_are_consistent(toy16):
    rng = random.Random(5)
    y_r = keypair_gen(toy16, rng).y
    for _ in range(20):
        nonce, tr = nonce_commit(toy16, y_r, rng)
        assert tr.b == toy16.gexp(nonce.k1)
        assert tr.a * toy16.gexp(nonce.k2) % toy16.p == 1
        assert 1 <= nonce.k1 < toy16.q and 1 <= nonce.k2 < toy16.q


def test_member_record_is_plain_data():
    assert MemberRecord(1, 2, 3, 4, 5).v == 5
