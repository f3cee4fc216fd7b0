"""The nine acceptance criteria, one test each.

Every test records a single PASS/FAIL line; conftest prints them in the
terminal summary.
"""

import random
import time
from contextlib import contextmanager
from itertools import combinations

import pytest

import conftest
from dtms import fixtures
from dtms import fileformat as ff
from dtms.combiner import combine, verify_partial
from dtms.dealer import dealer_setup_from_values
from dtms.group import GroupParams, HashMode, generate_params, validate_params
from dtms.receiver import (
    build_confirmation_package,
    compute_e,
    recover_commitment,
    third_party_check,
    verify_group_signature,
    zk_run,
)
from dtms.shamir import SecretPolynomial, poly_eval, reconstruct_at_zero
from dtms.signing import aggregate_commitments, commit_with, modify_shadow, partial_sign, recover_share
from dtms.sim import SCENARIOS, SimConfig, forge_attempt, replay, run_session, simulate

from oracles import interpolate_constant

EXP = fixtures.EXPECTED


@contextmanager
def criterion(number, title, budget=None):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        if budget is not None:
            assert elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        line = f"[{status}] criterion {number}: {title} ({elapsed:.2f}s)"
        conftest.ACCEPTANCE_LINES.append(line)
        print(line)


def _golden_session():
    params = fixtures.params()
    deal = fixtures.deal(params)
    receiver = fixtures.receiver_keypair(params)
    subset = fixtures.signer_uids()
    lam = fixtures.derived_lagrange()
    nonces, triples = {}, {}
    for i in fixtures.SIGNER_INDEXES:
        nonces[i], triples[i] = commit_with(params, receiver.y, *fixtures.SIGNING_NONCES[i])
    agg = aggregate_commitments([triples[i] for i in fixtures.SIGNER_INDEXES], subset, fixtures.MESSAGE, params, 5)
    contexts, partials = [], []
    for i in fixtures.SIGNER_INDEXES:
        uid = fixtures.uid_of(i)
        share = recover_share(deal.board.member(uid), deal.board.w, deal.keys[uid].x, params)
        ctx = modify_shadow(share, subset, params.q, lam[uid])
        contexts.append(ctx)
        partials.append(partial_sign(nonces[i], ctx, agg.r_s, params))
    return params, deal, receiver, subset, lam, triples, agg, contexts, partials


def test_criterion_1_dealer_golden():
    with criterion(1, "dealer golden values", budget=1.0):
        params = fixtures.params()
        keys = fixtures.member_keypairs(params)
        board, secrets = dealer_setup_from_values(
            params, 5, [(u, keys[u].y) for u in fixtures.UIDS], SecretPolynomial((13, 0, 0, 0, 18), 23),
            K=14, nonces=dict(zip(fixtures.UIDS, fixtures.MEMBER_NONCES)),
            share_values=dict(zip(fixtures.UIDS, fixtures.SHARE_VALUES)),
        )
        assert board.y_s == 16 and board.w == 2
        assert tuple(secrets.masked[u] for u in fixtures.UIDS) == (10, 20, 3, 20, 5, 7, 20)
        assert tuple(r.m for r in board.members) == (3, 9, 21, 9, 12, 27, 9)
        assert tuple(r.n for r in board.members) == (17, 32, 3, 34, 24, 7, 37)
        assert tuple(r.v for r in board.members) == (41, 29, 1, 19, 38, 14, 44)


def test_criterion_2_signing_golden():
    with criterion(2, "signing golden values", budget=1.0):
        _, _, _, subset, lam, triples, agg, contexts, partials = _golden_session()
        for i, expected in EXP["commitments"].items():
            assert (triples[i].a, triples[i].b, triples[i].c) == expected
        assert (agg.u_s, agg.v_s, agg.w_s) == (8, 36, 14)
        assert agg.r_s == 9
        assert tuple(lam[u] for u in subset) == (12, 10, 15, 4, 6)
        assert tuple(c.ms for c in contexts) == (10, 16, 6, 5, 5)
        assert tuple(p.s for p in partials) == (16, 0, 22, 18, 15)


def test_criterion_3_combine_verify_golden():
    with criterion(3, "combine and verify golden values", budget=1.0):
        params, deal, receiver, subset, lam, _, agg, _, partials = _golden_session()
        assert pow(25, 16, 47) == 4 * pow(pow(9, 12, 47), 9, 47) % 47
        assert verify_partial(partials[0], deal.board, subset, params, lam)
        sig = combine(partials, agg.u_s, agg.w_s, fixtures.MESSAGE, deal.board, params, lagrange=lam)
        assert sig.s_s == 2
        assert compute_e(subset, deal.board, params, lam) == 18
        assert recover_commitment(sig.w_s, sig.u_s, receiver.x, params) == 36
        assert pow(25, 2, 47) == 36 * pow(18 * 16, 9, 47) % 47 == 14
        assert verify_group_signature(sig, deal.board, receiver, params, lam)


def test_criterion_4_confirmation_golden():
    with criterion(4, "confirmation golden values", budget=1.0):
        params, deal, receiver, subset, lam, _, agg, _, partials = _golden_session()
        sig = combine(partials, agg.u_s, agg.w_s, fixtures.MESSAGE, deal.board, params, lagrange=lam)
        pkg = build_confirmation_package(sig, deal.board, receiver, params, lam)
        assert pkg.mu == 16
        assert (pkg.r_r, pkg.e, pkg.s_s, pkg.u_s, pkg.message, pkg.mu) == (36, 18, 2, 8, b"m", 16)
        assert third_party_check(pkg, deal.board.y_s, params)
        tr = zk_run(pkg, receiver, params=params, u=9, v=11, alpha=37)
        assert tr.w == 25 and tr.beta == 36 and tr.gamma == 9
        assert tr.accepted


def _complete(res):
    assert res.transcript.outcome == "accept", res.transcript.reason
    assert all(verify_partial(ps, res.board, res.subset, res.params) for ps in res.partials)
    assert res.verified and res.third_party_ok and res.zk.accepted


@pytest.mark.slow
def test_criterion_5_honest_completeness():
    with criterion(5, "honest completeness, 100 toy + 3 standard sessions", budget=60.0):
        toy47 = GroupParams(47, 23, 25, HashMode.real())
        for seed in range(50):
            _complete(simulate(SimConfig(seed=seed, t=1 + seed % 4, n=4 + seed % 4, params=toy47)))
        for seed in range(50):
            _complete(simulate(SimConfig(seed=seed, t=1 + seed % 5, n=5 + seed % 3, q_bits=16, p_bits=40)))
        for seed in range(3):
            rng = random.Random(1000 + seed)
            big = generate_params(160, 512, rng)
            assert validate_params(big, size="standard").ok
            _complete(simulate(SimConfig(seed=seed, t=3, n=5, params=big)))


def test_criterion_6_shamir_oracle():
    with criterion(6, "Shamir reconstruction against the interpolation oracle", budget=5.0):
        poly = SecretPolynomial((13, 0, 0, 0, 18), 23)
        shares = [(u, poly_eval(poly, u)) for u in fixtures.UIDS]
        fives = list(combinations(shares, 5))
        assert len(fives) == 21
        for subset in fives:
            assert reconstruct_at_zero(list(subset), 23) == interpolate_constant(list(subset), 23) == 13
        fours = list(combinations(shares, 4))
        assert len(fours) == 35
        hits = sum(reconstruct_at_zero(list(s), 23) == 13 for s in fours)
        assert all(reconstruct_at_zero(list(s), 23) == interpolate_constant(list(s), 23) for s in fours)
        assert hits <= 2


@pytest.mark.slow
def test_criterion_7_adversarial_rejection():
    with criterion(7, "adversarial scenarios reject 100/100, forgery 0/1000"):
        for scenario in ("impersonate", "tamper_partial", "forge_signature", "wrong_receiver"):
            outcomes = [simulate(SimConfig(scenario, seed=s)).transcript.outcome for s in range(100)]
            assert outcomes.count("reject") == 100, scenario
        res = simulate(SimConfig(seed=0))
        q = res.params.q
        rng = random.Random(7)
        accepted = 0
        for k in range(1000):
            strategy = ("pick_commitment", "pick_scalars")[k % 2]
            sig = forge_attempt(res.board, res.receiver.y, res.config.message, res.subset, rng, strategy)
            accepted += verify_group_signature(sig, res.board, res.receiver)
        assert accepted <= 1000 / q


def test_criterion_8_linkage_invariants():
    with criterion(8, "linkage invariants in honest sessions"):
        nonzero = 0
        configs = [SimConfig(fixture=True)] + [SimConfig(seed=s, t=2 + s % 3, n=5) for s in range(40)]
        for cfg in configs:
            res = simulate(cfg)
            p, q = res.params.p, res.params.q
            assert res.r_r == res.aggregates.v_s
            ms_sum = sum(c.ms for c in res.contexts.values()) % q
            assert res.params.gexp(ms_sum) == res.package.e * res.board.y_s % p
            lam = {c.uid: c.lam for c in res.contexts.values()}
            pooled = sum(
                recover_share(res.board.member(u), res.board.w, res.member_keys[u].x, res.params).l * lam[u]
                for u in res.subset
            ) % q
            f0 = res.secrets.polynomial.secret
            masked = sum(res.secrets.nonces[u] * lam[u] for u in res.subset) % q
            assert pooled == (f0 + masked) % q
            if masked:
                nonzero += 1
                assert pooled != f0
        assert nonzero > 0
        collusion = simulate(SimConfig("collude_reconstruct", fixture=True))
        assert collusion.reconstruction == 19 and pow(25, 19, 47) == 18 * 16 % 47


def test_criterion_9_determinism_and_round_trip():
    with criterion(9, "replay determinism and file round trips"):
        for scenario in SCENARIOS:
            for seed in range(5):
                cfg = SimConfig(scenario, seed=seed)
                first = run_session(cfg)
                assert replay(first, cfg)
                assert run_session(cfg).to_text().encode() == first.to_text().encode()
        res = simulate(SimConfig(seed=9))
        records = [
            ff.params_to_record(res.params),
            ff.keypair_to_record(res.receiver, 1),
            ff.board_to_record(res.board),
            ff.partial_to_record(res.partials[0], (1, 2, res.subset, res.config.message)),
            ff.signature_to_record(res.signature),
            ff.package_to_record(res.package),
            ff.transcript_to_record(res.zk),
        ]
        assert sorted(r.kind for r in records) == sorted(ff.RECORD_TYPES)
        loaders = {
            "params": ff.params_from_record, "keypair": ff.keypair_from_record, "board": ff.board_from_record,
            "partial": ff.partial_from_record, "sig": ff.signature_from_record,
            "package": ff.package_from_record, "transcript": ff.transcript_from_record,
        }
        dumpers = {
            "params": ff.params_to_record, "keypair": lambda v: ff.keypair_to_record(*v),
            "board": ff.board_to_record, "partial": lambda v: ff.partial_to_record(*v),
            "sig": ff.signature_to_record, "package": ff.package_to_record,
            "transcript": ff.transcript_to_record,
        }
        for rec in records:
            text = ff.emit(rec)
            value = loaders[rec.kind](ff.parse(text))
            assert ff.emit(dumpers[rec.kind](value)) == text
