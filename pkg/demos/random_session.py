"""
A fresh session over a random group
===================================

Generates a 16-bit group, deals shares to six members and lets a random
threshold subset sign for a designated receiver.
"""

import random

from dtms import (
    Combiner,
    aggregate_commitments,
    build_confirmation_package,
    dealer_setup,
    generate_params,
    keypair_gen,
    modify_shadow,
    nonce_commit,
    partial_sign,
    recover_share,
    verify_group_signature,
    zk_run,
)

rng = random.Random(12)
params = generate_params(16, 40, rng)
print(f"p = {params.p}, q = {params.q}, g = {params.g}")

members = {uid: keypair_gen(params, rng) for uid in (3, 17, 101, 4242, 9000, 31337)}
receiver = keypair_gen(params, rng)
board, secrets = dealer_setup(params, 4, [(u, kp.y) for u, kp in members.items()], rng)

subset = tuple(sorted(rng.sample(sorted(members), 4)))
message = b"release batch 7"
print("signers:", subset)

committed = [nonce_commit(params, receiver.y, rng) for _ in subset]
agg = aggregate_commitments([c[1] for c in committed], subset, message, params, board.t)

partials = []
for uid, (nonce, _) in zip(subset, committed):
    share = recover_share(board.member(uid), board.w, members[uid].x, params)
    partials.append(partial_sign(nonce, modify_shadow(share, subset, params.q), agg.r_s, params))

sig = Combiner(board).combine(partials, agg.u_s, agg.w_s, message)
print("S_S =", sig.s_s)
print("designated receiver:", verify_group_signature(sig, board, receiver))
print("some other key:     ", verify_group_signature(sig, board, keypair_gen(params, rng)))

pkg = build_confirmation_package(sig, board, receiver)
print("confirmation:", zk_run(pkg, receiver, rng, rng, params).verdict)
