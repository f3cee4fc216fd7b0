"""
The 47/23/25 worked example, step by step
=========================================

Seven members, threshold five, receiver key 9.  Every printed value can
be checked by hand.
"""

from dtms import fixtures
from dtms.combiner import combine
from dtms.receiver import build_confirmation_package, compute_e, recover_commitment, verify_group_signature, zk_run
from dtms.signing import aggregate_commitments, commit_with, modify_shadow, partial_sign, recover_share

# the challenge is posited as 9, so this group uses a fixture hash
params = fixtures.params()
deal = fixtures.deal(params)
board = deal.board
print("y_S =", board.y_s, " W =", board.w)
for rec in board.members:
    print(f"  uid {rec.uid:2}: m={rec.m:2} n={rec.n:2} v={rec.v:2}")

# signers 2, 4, 5, 6, 7 commit toward the receiver
receiver = fixtures.receiver_keypair(params)
subset = fixtures.signer_uids()
nonces, triples = {}, []
for i in fixtures.SIGNER_INDEXES:
    nonce, triple = commit_with(params, receiver.y, *fixtures.SIGNING_NONCES[i])
    nonces[fixtures.uid_of(i)] = nonce
    triples.append(triple)
    print(f"signer {i}: A={triple.a} B={triple.b} C={triple.c}")
agg = aggregate_commitments(triples, subset, fixtures.MESSAGE, params, board.t)
print("U_S, V_S, W_S =", agg.u_s, agg.v_s, agg.w_s, " R_S =", agg.r_s)

# Lagrange weights follow from the stated modified shadows: lambda = MS / l
lam = fixtures.derived_lagrange()
partials = []
for i in fixtures.SIGNER_INDEXES:
    uid = fixtures.uid_of(i)
    share = recover_share(board.member(uid), board.w, deal.keys[uid].x, params)
    ctx = modify_shadow(share, subset, params.q, lam[uid])
    ps = partial_sign(nonces[uid], ctx, agg.r_s, params)
    partials.append(ps)
    print(f"signer {i}: l={share.l:2} lambda={ctx.lam:2} MS={ctx.ms:2} s={ps.s:2}")

sig = combine(partials, agg.u_s, agg.w_s, fixtures.MESSAGE, board, params, lagrange=lam)
print("S_S =", sig.s_s)

# only the receiver can rebuild R_R
print("E =", compute_e(subset, board, params, lam), " R_R =", recover_commitment(sig.w_s, sig.u_s, receiver.x, params))
print("receiver accepts:", verify_group_signature(sig, board, receiver, params, lam))

pkg = build_confirmation_package(sig, board, receiver, params, lam)
print("package:", pkg)
tr = zk_run(pkg, receiver, params=params, u=fixtures.ZK_U, v=fixtures.ZK_V, alpha=fixtures.ZK_ALPHA)
print(f"w={tr.w} beta={tr.beta} gamma={tr.gamma} -> {tr.verdict}")
