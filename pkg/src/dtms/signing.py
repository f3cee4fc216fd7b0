"""Signer side of a session: share recovery, commitments, challenge and partials.

Commitment naming: each signer publishes ``A_i = g^-k2`` and
``C_i = g^k1 * y_R^k2`` and sends ``B_i = g^k1`` privately to the other
signers.  Aggregates are products mod p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .dealer import MemberRecord
from .errors import BoardInconsistencyError, NonceReuseError, ProtocolError, ShareError
from .group import CHALLENGE_TAG, GroupParams, default_rng, hash_to_zq, random_scalar
from .shamir import check_uids, lagrange_at_zero

__all__ = [
    "RecoveredShare",
    "NonceSecret",
    "CommitmentTriple",
    "SessionAggregates",
    "SignerContext",
    "PartialSignature",
    "recover_share",
    "nonce_commit",
    "commit_with",
    "aggregate_commitments",
    "compute_challenge",
    "modify_shadow",
    "partial_sign",
]


@dataclass(frozen=True)
class RecoveredShare:
    uid: int
    l: int


@dataclass(eq=False)
class NonceSecret:
    """Single-use signing nonces; ``partial_sign`` consumes them."""

    k1: int
    k2: int
    used: bool = field(default=False, repr=False)

    def consume(self) -> int:
        if self.used:
            raise NonceReuseError("signing nonce already used in another session")
        self.used = True
        return self.k1

    def __repr__(self):
        return "NonceSecret(<redacted>)"


@dataclass(frozen=True)
class CommitmentTriple:
    a: int
    b: int
    c: int


@dataclass(frozen=True)
class SessionAggregates:
    u_s: int
    v_s: int
    w_s: int
    r_s: int
    signers: tuple[int, ...]


@dataclass(frozen=True)
class SignerContext:
    uid: int
    lam: int
    ms: int


@dataclass(frozen=True)
class PartialSignature:
    uid: int
    s: int
    b: int
    r_s: int


def recover_share(record: MemberRecord, w: int, x: int, params: GroupParams) -> RecoveredShare:
    """Unmask ``l_i = v_i * W^x_i mod p`` and check it against the board."""
    l_i = record.v * pow(w, x, params.p) % params.p
    if not 0 < l_i < params.q:
        raise BoardInconsistencyError(
            f"member {record.uid}: recovered share is not a Z_q scalar (wrong key?)"
        )
    if params.gexp(l_i) != record.m:
        raise BoardInconsistencyError(f"member {record.uid}: g^l does not match the board")
    return RecoveredShare(record.uid, l_i)


def commit_with(params: GroupParams, y_r: int, k1: int, k2: int) -> tuple[NonceSecret, CommitmentTriple]:
    b = params.gexp(k1)
    triple = CommitmentTriple(
        a=params.gexp(-k2),
        b=b,
        c=b * pow(y_r, k2, params.p) % params.p,
    )
    return NonceSecret(k1, k2), triple


def nonce_commit(params: GroupParams, y_r: int, rng=None) -> tuple[NonceSecret, CommitmentTriple]:
    rng = default_rng(rng)
    k1 = random_scalar(params.q, rng)
    k2 = random_scalar(params.q, rng)
    return commit_with(params, y_r, k1, k2)


def compute_challenge(v_s: int, message: bytes, params: GroupParams) -> int:
    return hash_to_zq(CHALLENGE_TAG, [v_s], message, params)


def aggregate_commitments(
    triples: Sequence[CommitmentTriple],
    subset: Sequence[int],
    message: bytes,
    params: GroupParams,
    threshold: int = 1,
) -> SessionAggregates:
    """Multiply the subset's commitments together and derive the challenge.

    ``triples[k]`` belongs to ``subset[k]``.
    """
    subset = check_uids(subset, params.q)
    if len(triples) != len(subset):
        raise ProtocolError("need exactly one commitment triple per signer")
    if len(subset) < threshold:
        raise ProtocolError(f"{len(subset)} signers is below the threshold {threshold}")
    p = params.p
    u_s = v_s = w_s = 1
    for tr in triples:
        u_s = u_s * tr.a % p
        v_s = v_s * tr.b % p
        w_s = w_s * tr.c % p
    return SessionAggregates(u_s, v_s, w_s, compute_challenge(v_s, message, params), tuple(subset))


def modify_shadow(share: RecoveredShare, subset: Iterable[int], q: int, lam: int | None = None) -> SignerContext:
    """Scale the share by its Lagrange weight for ``subset``.

    ``lam`` bypasses the computation; fixtures whose identities are not
    published supply it directly.
    """
    subset = tuple(subset)
    if share.uid not in subset:
        raise ShareError(f"uid {share.uid} is not in the signing subset")
    if lam is None:
        lam = lagrange_at_zero(share.uid, subset, q)
    lam %= q
    return SignerContext(share.uid, lam, share.l * lam % q)


def partial_sign(nonce: NonceSecret, context: SignerContext, r_s: int, params: GroupParams) -> PartialSignature:
    q = params.q
    if not 0 <= r_s < q:
        raise ValueError("challenge must lie in [0, q-1]")
    k1 = nonce.consume()
    return PartialSignature(
        uid=context.uid,
        s=(k1 + context.ms * r_s) % q,
        b=params.gexp(k1),
        r_s=r_s,
    )
