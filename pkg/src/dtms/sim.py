"""Deterministic in-process simulation of a whole signing session.

Every role (dealer, signers, combiner, receiver, third party, adversary)
runs in one process and talks through a logging ``Network``.  One seed
drives every random draw, so a configuration always yields the same
transcript.  Adversarial scenarios replace one step of the honest flow:

* ``impersonate``: a forger without the member's share signs in its place.
* ``tamper_partial``: one honest partial is altered on its way to the combiner.
* ``forge_signature``: an outsider fabricates ``{S_S, U_S, W_S, m}``.
* ``collude_reconstruct``: ``t`` shareholders pool their masked shares.
* ``wrong_receiver``: someone other than the designated receiver verifies.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field

from . import fixtures
from .combiner import Combiner, GroupSignature
from .dealer import DealerPublicBoard, DealerSecrets, dealer_setup
from .errors import ConfigError, PartialRejected, ProtocolError
from .group import (
    GroupParams,
    KeyPair,
    encode_int,
    generate_params,
    keypair_gen,
    random_scalar,
)
from .receiver import (
    ConfirmationPackage,
    ConfirmingParty,
    Prover,
    ZkTranscript,
    build_confirmation_package,
    compute_e,
    recover_commitment,
    third_party_check,
    verify_group_signature,
)
from .shamir import lagrange_coefficients
from .signing import (
    PartialSignature,
    RecoveredShare,
    SessionAggregates,
    SignerContext,
    aggregate_commitments,
    commit_with,
    modify_shadow,
    nonce_commit,
    partial_sign,
    recover_share,
)

__all__ = [
    "SCENARIOS",
    "SimConfig",
    "TranscriptEntry",
    "SimTranscript",
    "SessionResult",
    "Network",
    "simulate",
    "run_session",
    "replay",
    "forge_attempt",
]

SCENARIOS = (
    "honest",
    "impersonate",
    "tamper_partial",
    "forge_signature",
    "collude_reconstruct",
    "wrong_receiver",
)
BROADCAST = "BROADCAST"


def private(uid: int) -> str:
    return f"PRIVATE({uid})"


def signer(uid: int) -> str:
    return f"S{uid}"


@dataclass(frozen=True)
class SimConfig:
    """One session. ``params=None`` generates a group from the seed.

    ``fixture=True`` replays the fixed 47/23/25 worked example and ignores
    ``t``, ``n``, ``subset``, ``message`` and the group settings.
    """

    scenario: str = "honest"
    seed: int = 0
    t: int = 3
    n: int = 5
    subset: tuple[int, ...] | None = None
    message: bytes = b"transfer 100 units to R"
    params: GroupParams | None = None
    q_bits: int = 16
    p_bits: int = 40
    fixture: bool = False
    target: int | None = None
    dc_recompute: bool = True

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; choose from {', '.join(SCENARIOS)}")
        if not self.fixture:
            if not 1 <= self.t <= self.n:
                raise ConfigError(f"need 1 <= t <= n, got t={self.t}, n={self.n}")
            if self.subset is not None and len(set(self.subset)) < self.t:
                raise ConfigError("signing subset is smaller than the threshold")


@dataclass(frozen=True)
class TranscriptEntry:
    step: int
    sender: str
    receiver: str
    kind: str
    digest: str

    def line(self) -> str:
        return f"step {self.step} | {self.sender} | {self.receiver} | {self.kind} | {self.digest}"


@dataclass(frozen=True)
class SimTranscript:
    entries: tuple[TranscriptEntry, ...]
    outcome: str
    reason: str

    def to_text(self) -> str:
        lines = [e.line() for e in self.entries]
        lines.append(f"outcome | {self.outcome} | {self.reason}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()

    @property
    def accepted(self) -> bool:
        return self.outcome == "accept"


def _payload_digest(kind: str, payload) -> str:
    h = hashlib.sha256(kind.encode())
    for item in payload:
        h.update(b"\x00")
        h.update(bytes(item) if isinstance(item, (bytes, bytearray)) else encode_int(item).encode())
    return h.hexdigest()[:16]


class Network:
    """Records every message in delivery order."""

    def __init__(self):
        self.entries: list[TranscriptEntry] = []

    def send(self, sender: str, receiver: str, kind: str, *payload):
        step = len(self.entries) + 1
        self.entries.append(TranscriptEntry(step, sender, receiver, kind, _payload_digest(kind, payload)))
        return payload[0] if len(payload) == 1 else payload


@dataclass
class SessionResult:
    """The transcript plus every intermediate value, for tests and demos."""

    config: SimConfig
    transcript: SimTranscript
    params: GroupParams
    board: DealerPublicBoard
    secrets: DealerSecrets
    member_keys: dict[int, KeyPair]
    receiver: KeyPair
    subset: tuple[int, ...] = ()
    lagrange: dict[int, int] | None = None
    views: dict[int, SessionAggregates] = field(default_factory=dict)
    contexts: dict[int, SignerContext] = field(default_factory=dict)
    partials: list[PartialSignature] = field(default_factory=list)
    signature: GroupSignature | None = None
    r_r: int | None = None
    verified: bool | None = None
    package: ConfirmationPackage | None = None
    third_party_ok: bool | None = None
    zk: ZkTranscript | None = None
    reconstruction: int | None = None
    forgeries: list[GroupSignature] = field(default_factory=list)

    @property
    def aggregates(self) -> SessionAggregates | None:
        return next(iter(self.views.values()), None)


def forge_attempt(
    board: DealerPublicBoard,
    y_r: int,
    message: bytes,
    signers,
    rng,
    strategy: str = "pick_commitment",
) -> GroupSignature:
    """Fabricate a signature from public data only.

    ``pick_commitment`` fixes a random ``R_R`` (reachable through
    ``U_S = g^-a``, ``W_S = R_R * y_R^a``), hashes it, and guesses ``S_S``.
    ``pick_scalars`` fixes ``S_S`` and ``R_S`` first, solves for ``R_R`` and
    hopes the hash agrees.
    """
    params = board.params
    p, q = params.p, params.q
    a = random_scalar(q, rng)
    if strategy == "pick_commitment":
        r_r = params.gexp(random_scalar(q, rng))
        s_s = rng.randrange(q)
    elif strategy == "pick_scalars":
        s_s, r_s = rng.randrange(q), rng.randrange(q)
        base = compute_e(signers, board, params) * board.y_s % p
        r_r = params.gexp(s_s) * pow(base, -r_s, p) % p
    else:
        raise ValueError(f"unknown forging strategy {strategy!r}")
    u_s = params.gexp(-a)
    w_s = r_r * pow(y_r, a, p) % p
    return GroupSignature(s_s, u_s, w_s, message, tuple(signers))


class _Session:
    def __init__(self, config: SimConfig):
        self.config = config
        self.rng = random.Random(config.seed)
        self.net = Network()
        self.fixed_nonces = None
        self.zk_randomness = None
        self.lagrange = None
        if config.fixture:
            self._setup_fixture()
        else:
            self._setup_random()

    def _setup_fixture(self):
        fx = fixtures
        self.params = fx.params()
        deal = fx.deal(self.params)
        self.board, self.secrets, self.member_keys = deal.board, deal.secrets, deal.keys
        self.receiver = fx.receiver_keypair(self.params)
        self.subset = fx.signer_uids()
        self.message = fx.MESSAGE
        self.lagrange = fx.derived_lagrange()
        self.fixed_nonces = {fx.uid_of(i): k for i, k in fx.SIGNING_NONCES.items()}
        self.zk_randomness = (fx.ZK_U, fx.ZK_V, fx.ZK_ALPHA)

    def _setup_random(self):
        cfg, rng = self.config, self.rng
        self.params = cfg.params or generate_params(cfg.q_bits, cfg.p_bits, rng)
        q = self.params.q
        if cfg.n >= q:
            raise ConfigError(f"group of {cfg.n} members does not fit in Z_{q}")
        # random.sample cannot index a range wider than a C ssize_t
        drawn = set()
        while len(drawn) < cfg.n:
            drawn.add(rng.randrange(1, q))
        uids = sorted(drawn)
        self.member_keys = {uid: keypair_gen(self.params, rng) for uid in uids}
        self.receiver = keypair_gen(self.params, rng)
        self.board, self.secrets = dealer_setup(
            self.params, cfg.t, [(uid, self.member_keys[uid].y) for uid in uids], rng,
        )
        if cfg.subset is None:
            self.subset = tuple(sorted(rng.sample(uids, cfg.t)))
        else:
            missing = set(cfg.subset) - set(uids)
            if missing:
                raise ConfigError(f"subset names unknown members {sorted(missing)}")
            self.subset = tuple(cfg.subset)
        self.message = cfg.message

    def _result(self, outcome, reason, **values) -> SessionResult:
        transcript = SimTranscript(tuple(self.net.entries), outcome, reason)
        return SessionResult(
            config=self.config,
            transcript=transcript,
            params=self.params,
            board=self.board,
            secrets=self.secrets,
            member_keys=self.member_keys,
            receiver=self.receiver,
            subset=self.subset,
            lagrange=self.lagrange,
            **values,
        )

    def _target(self) -> int:
        target = self.config.target
        if target is None:
            return self.rng.choice(self.subset)
        if target not in self.subset:
            raise ConfigError(f"target {target} is not in the signing subset")
        return target

    def run(self) -> SessionResult:
        scenario = self.config.scenario
        b = self.board
        self.net.send("SDC", BROADCAST, "board", b.y_s, b.w, *(v for r in b.members for v in (r.uid, r.m, r.n, r.v)))
        if scenario == "forge_signature":
            return self._forge()
        if scenario == "collude_reconstruct":
            return self._collude()
        return self._sign_and_verify(scenario)

    # signing rounds ----------------------------------------------------------

    def _commit_round(self, forged: int | None):
        params, rng, y_r = self.params, self.rng, self.receiver.y
        order = list(self.subset)
        rng.shuffle(order)
        nonces, triples = {}, {}
        for uid in order:
            if self.fixed_nonces is not None:
                nonces[uid], triples[uid] = commit_with(params, y_r, *self.fixed_nonces[uid])
            else:
                nonces[uid], triples[uid] = nonce_commit(params, y_r, rng)
            sender = f"ADV({uid})" if uid == forged else signer(uid)
            tr = triples[uid]
            self.net.send(sender, BROADCAST, "commit_a", tr.a)
            self.net.send(sender, BROADCAST, "commit_c", tr.c)
            for other in order:
                if other != uid:
                    self.net.send(sender, private(other), "commit_b", tr.b)
            if self.config.dc_recompute:
                self.net.send(sender, "DC", "commit_b", tr.b)
        # each signer aggregates its own view of the round
        ordered = [triples[uid] for uid in self.subset]
        views = {
            uid: aggregate_commitments(ordered, self.subset, self.message, params, self.board.t)
            for uid in order
        }
        if len({(v.u_s, v.v_s, v.w_s, v.r_s) for v in views.values()}) != 1:
            raise ProtocolError("signers disagree on the session aggregates")
        return order, nonces, views

    def _sign_and_verify(self, scenario: str) -> SessionResult:
        params, q = self.params, self.params.q
        forged = self._target() if scenario == "impersonate" else None
        order, nonces, views = self._commit_round(forged)
        agg = next(iter(views.values()))
        tampered = self._target() if scenario == "tamper_partial" else None

        contexts, partials = {}, []
        for uid in order:
            lam = None if self.lagrange is None else self.lagrange[uid]
            if uid == forged:
                # no share: guess one and sign with it
                guess = random_scalar(q, self.rng)
                ctx = modify_shadow(RecoveredShare(uid, guess), self.subset, q, lam)
                ps = partial_sign(nonces[uid], ctx, agg.r_s, params)
                self.net.send(f"ADV({uid})", "DC", "partial", ps.uid, ps.s, ps.b, ps.r_s)
            else:
                share = recover_share(self.board.member(uid), self.board.w, self.member_keys[uid].x, params)
                ctx = modify_shadow(share, self.subset, q, lam)
                ps = partial_sign(nonces[uid], ctx, agg.r_s, params)
                if uid == tampered:
                    delta = random_scalar(q, self.rng)
                    ps = PartialSignature(ps.uid, (ps.s + delta) % q, ps.b, ps.r_s)
                    self.net.send("ADV", "DC", "partial", ps.uid, ps.s, ps.b, ps.r_s)
                else:
                    self.net.send(signer(uid), "DC", "partial", ps.uid, ps.s, ps.b, ps.r_s)
            contexts[uid] = ctx
            partials.append(ps)

        values = dict(views=views, contexts=contexts, partials=partials)
        dc = Combiner(self.board, recompute_challenge=self.config.dc_recompute)
        try:
            sig = dc.combine(partials, agg.u_s, agg.w_s, self.message, self.lagrange)
        except PartialRejected as exc:
            return self._result("reject", f"combiner rejected partial from uid {','.join(map(str, exc.uids))}", **values)
        except ProtocolError as exc:
            return self._result("reject", f"combiner protocol error: {exc}", **values)
        self.net.send("DC", "R", "signature", sig.s_s, sig.u_s, sig.w_s, sig.message, *sig.signers)
        values["signature"] = sig

        if scenario == "wrong_receiver":
            impostor = self._impostor()
            ok = verify_group_signature(sig, self.board, impostor, params, self.lagrange)
            values["verified"] = ok
            if ok:
                return self._result("accept", "non-designated key verified the signature", **values)
            return self._result("reject", "signature does not verify under a non-designated key", **values)

        values["r_r"] = recover_commitment(sig.w_s, sig.u_s, self.receiver.x, params)
        ok = verify_group_signature(sig, self.board, self.receiver, params, self.lagrange)
        values["verified"] = ok
        if not ok:
            return self._result("reject", "receiver verification failed", **values)
        return self._confirm(sig, values)

    def _impostor(self) -> KeyPair:
        while True:
            key = keypair_gen(self.params, self.rng)
            if key.x != self.receiver.x:
                return key

    def _confirm(self, sig: GroupSignature, values: dict) -> SessionResult:
        params, rng = self.params, self.rng
        pkg = build_confirmation_package(sig, self.board, self.receiver, params, self.lagrange)
        self.net.send("R", "C", "package", pkg.r_r, pkg.e, pkg.s_s, pkg.u_s, pkg.message, pkg.mu)
        values["package"] = pkg
        ok = third_party_check(pkg, self.board.y_s, params)
        values["third_party_ok"] = ok
        if not ok:
            return self._result("reject", "third-party check failed", **values)

        u = v = alpha = None
        if self.zk_randomness is not None:
            u, v, alpha = self.zk_randomness
        verifier = ConfirmingParty(pkg.u_s, pkg.mu, self.receiver.y, params, rng)
        prover = Prover(self.receiver, pkg.u_s, params, rng)
        tr = ZkTranscript()
        tr.w = self.net.send("C", "R", "zk_w", verifier.commit(u, v))
        tr.beta, tr.gamma = self.net.send("R", "C", "zk_beta_gamma", *prover.respond(tr.w, alpha))
        tr.u, tr.v = self.net.send("C", "R", "zk_uv", *verifier.receive_response(tr.beta, tr.gamma))
        tr.alpha = prover.open(tr.u, tr.v)
        if tr.alpha is None:
            tr.verdict, tr.failed = "reject", "w"
        else:
            self.net.send("R", "C", "zk_alpha", tr.alpha)
            tr.failed = verifier.finish(tr.alpha)
            tr.verdict = "reject" if tr.failed else "accept"
        values["zk"] = tr
        if not tr.accepted:
            return self._result("reject", f"confirmation protocol failed at {tr.failed}", **values)
        return self._result("accept", "signature verified and confirmed", **values)

    # adversarial scenarios without a signing round ---------------------------

    def _forge(self) -> SessionResult:
        signers = self.subset
        forgeries = []
        for strategy in ("pick_commitment", "pick_scalars"):
            sig = forge_attempt(self.board, self.receiver.y, self.message, signers, self.rng, strategy)
            self.net.send("ADV", "R", "signature", sig.s_s, sig.u_s, sig.w_s, sig.message, *sig.signers)
            forgeries.append(sig)
            if verify_group_signature(sig, self.board, self.receiver, self.params, self.lagrange):
                return self._result("accept", f"forged signature ({strategy}) verified", forgeries=forgeries)
        return self._result("reject", "forged signatures failed verification", forgeries=forgeries)

    def _collude(self) -> SessionResult:
        params, q = self.params, self.params.q
        lam = self.lagrange or lagrange_coefficients(self.subset, q)
        pooled = {}
        for uid in self.subset:
            share = recover_share(self.board.member(uid), self.board.w, self.member_keys[uid].x, params)
            pooled[uid] = share.l
            for other in self.subset:
                if other != uid:
                    self.net.send(signer(uid), private(other), "pooled_share", share.l)
        rec = sum(pooled[uid] * lam[uid] for uid in self.subset) % q
        values = dict(reconstruction=rec)
        e = compute_e(self.subset, self.board, params, self.lagrange)
        if params.gexp(rec) != e * self.board.y_s % params.p:
            raise ProtocolError("pooled reconstruction is inconsistent with E * y_S")
        if params.gexp(rec) == self.board.y_s:
            return self._result("accept", "colluders recovered the group secret", **values)
        return self._result("reject", "pooled shares reconstruct a masked value, not the group secret", **values)


def simulate(config: SimConfig) -> SessionResult:
    return _Session(config).run()


def run_session(config: SimConfig) -> SimTranscript:
    return simulate(config).transcript


def replay(transcript: SimTranscript, config: SimConfig) -> bool:
    return run_session(config).to_text() == transcript.to_text()
