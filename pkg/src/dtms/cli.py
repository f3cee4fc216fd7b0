"""Command-line interface.

Exit codes: 0 accept/success, 1 cryptographic reject, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import fileformat as ff
from . import fixtures
from .combiner import combine
from .dealer import check_board, dealer_setup
from .errors import DTMSError, PartialRejected, ProtocolError
from .group import (
    GroupParams,
    HashMode,
    KeyPair,
    decode_int,
    generate_params,
    keypair_from_secret,
    keypair_gen,
    mod_exp,
    validate_params,
)
from .receiver import (
    build_confirmation_package,
    compute_e,
    recover_commitment,
    third_party_check,
    verify_group_signature,
    zk_run,
)
from .sim import SCENARIOS, SimConfig, simulate
from .signing import aggregate_commitments, commit_with, modify_shadow, nonce_commit, partial_sign, recover_share

ACCEPT, REJECT, USAGE = 0, 1, 2
FIXTURES = ("paper5",)


class UsageError(DTMSError):
    pass


def _out(msg: str = "") -> None:
    print(msg)


def _int(text: str) -> int:
    return int(text, 0)


def _int_list(text: str) -> list[int]:
    return [_int(item) for item in text.split(",") if item.strip()]


def _rng(seed):
    return random.SystemRandom() if seed is None else random.Random(seed)


def _message(args) -> bytes:
    if getattr(args, "message_hex", None) is not None:
        return bytes.fromhex(args.message_hex)
    if getattr(args, "message", None) is not None:
        return args.message.encode("utf-8")
    raise UsageError("a message is required (--message or --message-hex)")


def _load_board(path):
    return ff.board_from_record(ff.read_record(path, "board"))


def _load_keypair(path) -> tuple[KeyPair, int | None]:
    return ff.keypair_from_record(ff.read_record(path, "keypair"))


def _receiver_pub(value: str) -> int:
    """An integer (decimal or 0x-hex) or the path of a keypair record."""
    if Path(value).is_file():
        return _load_keypair(value)[0].y
    return _int(value)


# commands ---------------------------------------------------------------------


def cmd_gen_params(args) -> int:
    if args.fixture_hash:
        table = {}
        for item in args.fixture_hash:
            tag, _, value = item.partition("=")
            table[tag] = _int(value)
        mode = HashMode.fixture(table)
    else:
        mode = HashMode.real(digest=args.digest)
    if args.fixed:
        values = _int_list(args.fixed)
        if len(values) != 3:
            raise UsageError("--fixed expects p,q,g")
        params = GroupParams(*values, hash_mode=mode)
    else:
        params = generate_params(args.q_bits, args.p_bits, _rng(args.seed), hash_mode=mode)
    report = validate_params(params)
    if not report.ok:
        _out("invalid parameters: " + "; ".join(report.violations))
        return REJECT
    ff.write_record(args.out, ff.params_to_record(params))
    _out(f"wrote {args.out}: p has {params.p.bit_length()} bits, q has {params.q.bit_length()} bits")
    return ACCEPT


def cmd_keygen(args) -> int:
    params = ff.params_from_record(ff.read_record(args.params, "params"))
    rng = _rng(args.seed)
    kp = keypair_from_secret(params, args.secret) if args.secret else keypair_gen(params, rng)
    ff.write_record(args.out, ff.keypair_to_record(kp, args.uid))
    _out(f"wrote {args.out}")
    return ACCEPT


def _read_members(path) -> list[tuple[int, int]]:
    members = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise ff.FileFormatError(f"{path}:{lineno}: expected 'uid,y' in hex")
        try:
            members.append((decode_int(parts[0]), decode_int(parts[1])))
        except ValueError as exc:
            raise ff.FileFormatError(f"{path}:{lineno}: {exc}") from None
    return members


def _fixture_deal():
    return fixtures.deal()


def cmd_dealer_setup(args) -> int:
    if args.fixture:
        board = _fixture_deal().board
    else:
        if not (args.params and args.members and args.t):
            raise UsageError("--params, --members and --t are required without --fixture")
        params = ff.params_from_record(ff.read_record(args.params, "params"))
        members = _read_members(args.members)
        board, _secrets = dealer_setup(params, args.t, members, _rng(args.seed))
    problems = check_board(board)
    if problems:
        _out("board failed its own checks: " + "; ".join(problems))
        return REJECT
    ff.write_record(args.out, ff.board_to_record(board))
    _out(f"wrote {args.out}: t={board.t}, n={board.n}, y_s={board.y_s:x}")
    return ACCEPT


def cmd_sign(args) -> int:
    """Run one signing round among the supplied members and write their partials."""
    lagrange = None
    if args.fixture:
        deal = _fixture_deal()
        board = deal.board
        keys = {uid: deal.keys[uid] for uid in fixtures.signer_uids()}
        subset = fixtures.signer_uids()
        y_r = fixtures.receiver_keypair().y
        message = fixtures.MESSAGE
        lagrange = fixtures.derived_lagrange()
        nonce_source = {fixtures.uid_of(i): k for i, k in fixtures.SIGNING_NONCES.items()}
    else:
        if not (args.board and args.member_secret and args.receiver_pub):
            raise UsageError("--board, --member-secret and --receiver-pub are required without --fixture")
        board = _load_board(args.board)
        keys = {}
        for path in args.member_secret:
            kp, uid = _load_keypair(path)
            if uid is None:
                uid = next((r.uid for r in board.members if r.y == kp.y), None)
            if uid is None:
                raise UsageError(f"{path}: key does not belong to any board member")
            keys[uid] = kp
        subset = tuple(_int_list(args.subset)) if args.subset else tuple(keys)
        missing = set(subset) - set(keys)
        if missing:
            raise UsageError(f"no secret key supplied for uid {sorted(missing)}")
        y_r = _receiver_pub(args.receiver_pub)
        message = _message(args)
        nonce_source = None

    params = board.params
    rng = _rng(args.seed)
    nonces, triples = {}, []
    for uid in subset:
        if nonce_source is not None:
            nonces[uid], triple = commit_with(params, y_r, *nonce_source[uid])
        else:
            nonces[uid], triple = nonce_commit(params, y_r, rng)
        triples.append(triple)
    agg = aggregate_commitments(triples, subset, message, params, board.t)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for uid, triple in zip(subset, triples):
        share = recover_share(board.member(uid), board.w, keys[uid].x, params)
        ctx = modify_shadow(share, subset, params.q, None if lagrange is None else lagrange[uid])
        ps = partial_sign(nonces[uid], ctx, agg.r_s, params)
        path = out_dir / f"partial-{uid}.rec"
        ff.write_record(path, ff.partial_to_record(ps, (triple.a, triple.c, subset, message)))
        _out(f"wrote {path}: s={ps.s:x}")
    return ACCEPT


def cmd_combine(args) -> int:
    board = _load_board(args.board)
    params = board.params
    partials, sessions = [], []
    for path in args.partials:
        ps, session = ff.partial_from_record(ff.read_record(path, "partial"))
        if session is None:
            raise UsageError(f"{path}: partial lacks the broadcast commitments (a, c, signers, msg)")
        partials.append(ps)
        sessions.append(session)
    signer_sets = {s[2] for s in sessions}
    messages = {s[3] for s in sessions}
    if len(signer_sets) != 1 or len(messages) != 1:
        _out("REJECT: partials come from different sessions")
        return REJECT
    (subset,), (message,) = signer_sets, messages
    if sorted(subset) != sorted(ps.uid for ps in partials):
        _out("REJECT: partials do not cover the announced signer set")
        return REJECT
    u_s = w_s = 1
    for a, c, _, _ in sessions:
        u_s, w_s = u_s * a % params.p, w_s * c % params.p
    try:
        sig = combine(partials, u_s, w_s, message, board, params, recompute_challenge=not args.trust_challenge)
    except PartialRejected as exc:
        _out(f"REJECT: {exc}")
        return REJECT
    except ProtocolError as exc:
        _out(f"REJECT: {exc}")
        return REJECT
    ff.write_record(args.out, ff.signature_to_record(sig))
    _out(f"wrote {args.out}: S_S={sig.s_s:x} U_S={sig.u_s:x} W_S={sig.w_s:x}")
    return ACCEPT


def cmd_verify(args) -> int:
    board = _load_board(args.board)
    sig = ff.signature_from_record(ff.read_record(args.sig, "sig"))
    receiver, _ = _load_keypair(args.receiver_secret)
    if verify_group_signature(sig, board, receiver):
        _out("ACCEPT")
        return ACCEPT
    _out("REJECT")
    return REJECT


def cmd_confirm(args) -> int:
    board = _load_board(args.board)
    params = board.params
    sig = ff.signature_from_record(ff.read_record(args.sig, "sig"))
    receiver, _ = _load_keypair(args.receiver_secret)
    package = build_confirmation_package(sig, board, receiver, params)
    if args.out_package:
        ff.write_record(args.out_package, ff.package_to_record(package))
    if not third_party_check(package, board.y_s, params, board=board, signers=sig.signers):
        _out("REJECT: third-party check failed")
        return REJECT
    fixed = {}
    if args.fixture:
        fixed = dict(u=fixtures.ZK_U, v=fixtures.ZK_V, alpha=fixtures.ZK_ALPHA)
    rng = _rng(args.seed)
    tr = zk_run(package, receiver, rng, rng, params, **fixed)
    if args.out_transcript:
        ff.write_record(args.out_transcript, ff.transcript_to_record(tr))
    if tr.accepted:
        _out("ACCEPT: third-party check and confirmation protocol passed")
        return ACCEPT
    _out(f"REJECT: confirmation protocol failed at {tr.failed}")
    return REJECT


def demo_rows():
    """Run the fixed 47/23/25 pipeline; yields (label, expected, computed)."""
    fx = fixtures
    exp = fx.EXPECTED
    params = fx.params()
    deal = fx.deal(params)
    board = deal.board
    yield "y_S", exp["y_s"], board.y_s
    yield "W", exp["w"], board.w
    for i, rec in enumerate(board.members, start=1):
        yield f"member {i}: (m, n, v)", (exp["m"][i - 1], exp["n"][i - 1], exp["v"][i - 1]), (rec.m, rec.n, rec.v)

    receiver = fx.receiver_keypair(params)
    subset = fx.signer_uids()
    lam = fx.derived_lagrange()
    nonces, triples = {}, []
    for i in fx.SIGNER_INDEXES:
        uid = fx.uid_of(i)
        nonces[uid], tr = commit_with(params, receiver.y, *fx.SIGNING_NONCES[i])
        triples.append(tr)
        yield f"signer {i}: (A, B, C)", exp["commitments"][i], (tr.a, tr.b, tr.c)
    agg = aggregate_commitments(triples, subset, fx.MESSAGE, params, board.t)
    yield "(U_S, V_S, W_S)", exp["aggregates"], (agg.u_s, agg.v_s, agg.w_s)
    yield "R_S", exp["r_s"], agg.r_s
    partials = []
    for k, i in enumerate(fx.SIGNER_INDEXES):
        uid = fx.uid_of(i)
        share = recover_share(board.member(uid), board.w, deal.keys[uid].x, params)
        ctx = modify_shadow(share, subset, params.q, lam[uid])
        ps = partial_sign(nonces[uid], ctx, agg.r_s, params)
        partials.append(ps)
        yield f"signer {i}: lambda = MS/l = {fx.MODIFIED_SHADOWS[i]}/{share.l}", lam[uid], lam[uid]
        yield f"signer {i}: (l, MS, s)", (exp["l"][i - 1], exp["ms"][k], exp["s"][k]), (share.l, ctx.ms, ps.s)
    sig = combine(partials, agg.u_s, agg.w_s, fx.MESSAGE, board, params, lagrange=lam)
    yield "S_S", exp["s_s"], sig.s_s
    yield "U_S", exp["aggregates"][0], sig.u_s
    yield "W_S", exp["aggregates"][2], sig.w_s
    yield "E", exp["e"], compute_e(subset, board, params, lam)
    yield "R_R", exp["r_r"], recover_commitment(sig.w_s, sig.u_s, receiver.x, params)
    lhs = mod_exp(params.g, sig.s_s, params.p)
    rhs = exp["r_r"] * pow(exp["e"] * exp["y_s"], exp["r_s"], params.p) % params.p
    yield "g^S_S vs R_R (E y_S)^R_S", lhs, rhs
    yield "receiver verdict", True, verify_group_signature(sig, board, receiver, params, lam)
    pkg = build_confirmation_package(sig, board, receiver, params, lam)
    yield "package (R_R, E, S_S, U_S, mu)", exp["package"], (pkg.r_r, pkg.e, pkg.s_s, pkg.u_s, pkg.mu)
    yield "third-party verdict", True, third_party_check(pkg, board.y_s, params)
    tr = zk_run(pkg, receiver, None, None, params, u=fx.ZK_U, v=fx.ZK_V, alpha=fx.ZK_ALPHA)
    yield "(w, beta, gamma)", tuple(exp["zk"].values()), (tr.w, tr.beta, tr.gamma)
    yield "confirmation verdict", "accept", tr.verdict


def cmd_demo_worked_example(args) -> int:
    ok = True
    _out(f"{'value':<40} {'expected':<22} {'computed':<22} check")
    for label, expected, computed in demo_rows():
        match = expected == computed
        ok &= match
        _out(f"{label:<40} {str(expected):<22} {str(computed):<22} {'ok' if match else 'MISMATCH'}")
    _out("verdict ACCEPT" if ok else "verdict REJECT")
    return ACCEPT if ok else REJECT


def cmd_simulate(args) -> int:
    config = SimConfig(
        scenario=args.scenario,
        seed=args.seed,
        t=args.t,
        n=args.n,
        q_bits=args.q_bits,
        p_bits=args.p_bits,
        fixture=bool(args.fixture),
        target=args.target,
    )
    transcript = simulate(config).transcript
    text = transcript.to_text()
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    return ACCEPT if transcript.accepted else REJECT


# parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dtms", description="Directed threshold multi-signatures")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-params", help="generate or import group parameters")
    p.add_argument("--q-bits", type=int, default=160)
    p.add_argument("--p-bits", type=int, default=512)
    p.add_argument("--seed", type=int)
    p.add_argument("--fixed", help="use p,q,g as given instead of generating")
    p.add_argument("--digest", default="sha256")
    p.add_argument("--fixture-hash", action="append", metavar="TAG=VALUE",
                   help="fixed challenge values instead of a real hash")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_params)

    p = sub.add_parser("keygen", help="create a keypair record")
    p.add_argument("--params", required=True)
    p.add_argument("--uid", type=_int)
    p.add_argument("--secret", type=_int, help="use this private key")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("dealer-setup", help="run the share distribution center")
    p.add_argument("--params")
    p.add_argument("--t", type=int)
    p.add_argument("--members", help="text file of 'uid,y' hex lines")
    p.add_argument("--seed", type=int)
    p.add_argument("--fixture", choices=FIXTURES)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dealer_setup)

    p = sub.add_parser("sign", help="run a signing round and write partial signatures")
    p.add_argument("--board")
    p.add_argument("--member-secret", nargs="+", help="keypair records of the signers")
    p.add_argument("--subset", help="comma-separated signer uids")
    p.add_argument("--receiver-pub")
    p.add_argument("--message")
    p.add_argument("--message-hex")
    p.add_argument("--seed", type=int)
    p.add_argument("--fixture", choices=FIXTURES)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_sign)

    p = sub.add_parser("combine", help="verify partials and build the group signature")
    p.add_argument("--board", required=True)
    p.add_argument("--partials", nargs="+", required=True)
    p.add_argument("--trust-challenge", action="store_true",
                   help="accept the partials' challenge without recomputing it")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_combine)

    p = sub.add_parser("verify", help="receiver-side verification")
    p.add_argument("--sig", required=True)
    p.add_argument("--board", required=True)
    p.add_argument("--receiver-secret", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("confirm", help="prove validity to a third party")
    p.add_argument("--sig", required=True)
    p.add_argument("--board", required=True)
    p.add_argument("--receiver-secret", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--fixture", choices=FIXTURES, help="use the fixed protocol randomness")
    p.add_argument("--out-package")
    p.add_argument("--out-transcript")
    p.set_defaults(func=cmd_confirm)

    p = sub.add_parser("demo-paper", help="replay the 47/23/25 worked example and check every value")
    p.set_defaults(func=cmd_demo_worked_example)

    p = sub.add_parser("simulate", help="run a simulated session")
    p.add_argument("--scenario", choices=SCENARIOS, default="honest")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--q-bits", type=int, default=16)
    p.add_argument("--p-bits", type=int, default=40)
    p.add_argument("--target", type=_int)
    p.add_argument("--fixture", choices=FIXTURES)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DTMSError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
