"""Receiver-side verification and the confirmation protocol toward a third party.

Only the designated receiver can check a group signature, because the
commitment ``R_R = W_S * U_S^x_R`` needs its private key.  The receiver
can later hand a third party a confirmation package and prove
interactively that ``log_{U_S} mu == log_g y_R``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .combiner import GroupSignature
from .dealer import DealerPublicBoard
from .group import GroupParams, KeyPair, default_rng
from .shamir import check_uids, lagrange_at_zero
from .signing import compute_challenge

__all__ = [
    "ConfirmationPackage",
    "ZkTranscript",
    "compute_e",
    "recover_commitment",
    "verify_group_signature",
    "build_confirmation_package",
    "third_party_check",
    "ConfirmingParty",
    "Prover",
    "zk_run",
]


def compute_e(
    signers: Sequence[int],
    board: DealerPublicBoard,
    params: GroupParams | None = None,
    lagrange: Mapping[int, int] | None = None,
) -> int:
    """``E = prod n_i^lambda_i mod p`` over the signing subset."""
    params = params or board.params
    signers = check_uids(signers, params.q)
    e = 1
    for uid in signers:
        record = board.member(uid)
        lam = lagrange[uid] % params.q if lagrange is not None else lagrange_at_zero(uid, signers, params.q)
        e = e * pow(record.n, lam, params.p) % params.p
    return e


def recover_commitment(w_s: int, u_s: int, x_r: int, params: GroupParams) -> int:
    return w_s * pow(u_s, x_r, params.p) % params.p


def _congruence(s_s, r_r, e, y_s, message, params) -> bool:
    p = params.p
    r_s = compute_challenge(r_r, message, params)
    return params.gexp(s_s) == r_r * pow(e * y_s % p, r_s, p) % p


def verify_group_signature(
    sig: GroupSignature,
    board: DealerPublicBoard,
    receiver: KeyPair,
    params: GroupParams | None = None,
    lagrange: Mapping[int, int] | None = None,
) -> bool:
    params = params or board.params
    if len(sig.signers) < board.t:
        return False
    try:
        e = compute_e(sig.signers, board, params, lagrange)
    except LookupError:
        return False
    r_r = recover_commitment(sig.w_s, sig.u_s, receiver.x, params)
    return _congruence(sig.s_s, r_r, e, board.y_s, sig.message, params)


@dataclass(frozen=True)
class ConfirmationPackage:
    r_r: int
    e: int
    s_s: int
    u_s: int
    message: bytes
    mu: int


def build_confirmation_package(
    sig: GroupSignature,
    board: DealerPublicBoard,
    receiver: KeyPair,
    params: GroupParams | None = None,
    lagrange: Mapping[int, int] | None = None,
) -> ConfirmationPackage:
    params = params or board.params
    mu = pow(sig.u_s, receiver.x, params.p)
    return ConfirmationPackage(
        r_r=mu * sig.w_s % params.p,
        e=compute_e(sig.signers, board, params, lagrange),
        s_s=sig.s_s,
        u_s=sig.u_s,
        message=sig.message,
        mu=mu,
    )


def third_party_check(
    package: ConfirmationPackage,
    y_s: int,
    params: GroupParams,
    *,
    board: DealerPublicBoard | None = None,
    signers: Sequence[int] | None = None,
    lagrange: Mapping[int, int] | None = None,
) -> bool:
    """The third party's check of the package.

    Passing ``board`` and ``signers`` additionally recomputes ``E`` instead
    of trusting the one carried in the package.
    """
    if board is not None and signers is not None:
        try:
            if compute_e(signers, board, params, lagrange) != package.e:
                return False
        except LookupError:
            return False
    return _congruence(package.s_s, package.r_r, package.e, y_s, package.message, params)


@dataclass
class ZkTranscript:
    """Moves in order: C->R w; R->C beta, gamma; C->R u, v; R->C alpha."""

    w: int | None = None
    beta: int | None = None
    gamma: int | None = None
    u: int | None = None
    v: int | None = None
    alpha: int | None = None
    verdict: str = "pending"
    failed: str | None = None

    @property
    def accepted(self) -> bool:
        return self.verdict == "accept"

    def moves(self) -> list[tuple[str, str, int]]:
        order = [("C", "w"), ("R", "beta"), ("R", "gamma"), ("C", "u"), ("C", "v"), ("R", "alpha")]
        return [(role, name, getattr(self, name)) for role, name in order if getattr(self, name) is not None]


# u, v and alpha are drawn from [1, p-1] and used unreduced; inside the
# order-q subgroup that agrees with reducing them mod q.

@dataclass
class ConfirmingParty:
    """The third party C. Knows only public values and the package."""

    u_s: int
    mu: int
    y_r: int
    params: GroupParams
    rng: object = None
    _u: int = field(default=0, repr=False)
    _v: int = field(default=0, repr=False)
    _w: int = field(default=0, repr=False)
    _beta: int = field(default=0, repr=False)
    _gamma: int = field(default=0, repr=False)

    def commit(self, u: int | None = None, v: int | None = None) -> int:
        rng = default_rng(self.rng)
        p = self.params.p
        self._u = rng.randint(1, p - 1) if u is None else u
        self._v = rng.randint(1, p - 1) if v is None else v
        self._w = pow(self.u_s, self._u, p) * self.params.gexp(self._v) % p
        return self._w

    def receive_response(self, beta: int, gamma: int) -> tuple[int, int]:
        self._beta, self._gamma = beta, gamma
        return self._u, self._v

    def finish(self, alpha: int) -> str | None:
        """Return the name of the first failing check, or None when both hold."""
        p = self.params.p
        exponent = self._v + alpha
        if self._beta != pow(self.u_s, self._u, p) * pow(self.params.g, exponent, p) % p:
            return "beta"
        if self._gamma != pow(self.mu, self._u, p) * pow(self.y_r, exponent, p) % p:
            return "gamma"
        return None


@dataclass
class Prover:
    """The receiver R, showing ``mu`` was formed with its own private key."""

    keypair: KeyPair
    u_s: int
    params: GroupParams
    rng: object = None
    _w: int = field(default=0, repr=False)
    _alpha: int = field(default=0, repr=False)

    def respond(self, w: int, alpha: int | None = None) -> tuple[int, int]:
        p = self.params.p
        self._w = w
        self._alpha = default_rng(self.rng).randint(1, p - 1) if alpha is None else alpha
        beta = w * pow(self.params.g, self._alpha, p) % p
        return beta, pow(beta, self.keypair.x, p)

    def open(self, u: int, v: int) -> int | None:
        """Check C's opening of ``w``; release alpha only if it matches."""
        p = self.params.p
        if self._w != pow(self.u_s, u, p) * pow(self.params.g, v, p) % p:
            return None
        return self._alpha


def zk_run(
    package: ConfirmationPackage,
    receiver: KeyPair,
    third_party_rng=None,
    receiver_rng=None,
    params: GroupParams | None = None,
    *,
    u: int | None = None,
    v: int | None = None,
    alpha: int | None = None,
) -> ZkTranscript:
    """Run the four-move exchange; explicit ``u``, ``v``, ``alpha`` replay fixed randomness."""
    if params is None:
        raise TypeError("zk_run needs the group parameters")
    verifier = ConfirmingParty(package.u_s, package.mu, receiver.y, params, third_party_rng)
    prover = Prover(receiver, package.u_s, params, receiver_rng)
    tr = ZkTranscript()

    tr.w = verifier.commit(u, v)
    tr.beta, tr.gamma = prover.respond(tr.w, alpha)
    tr.u, tr.v = verifier.receive_response(tr.beta, tr.gamma)
    tr.alpha = prover.open(tr.u, tr.v)
    if tr.alpha is None:
        tr.verdict, tr.failed = "reject", "w"
        return tr
    tr.failed = verifier.finish(tr.alpha)
    tr.verdict = "reject" if tr.failed else "accept"
    return tr
