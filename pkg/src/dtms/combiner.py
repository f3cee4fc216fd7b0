"""The designated combiner: checks partial signatures and sums them.

The combiner only ever sees the public board, the broadcast commitments
and the partials, so it holds nothing secret.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .dealer import DealerPublicBoard
from .errors import PartialRejected, ProtocolError, ShareError
from .group import GroupParams
from .shamir import check_uids, lagrange_at_zero
from .signing import PartialSignature, compute_challenge

__all__ = ["GroupSignature", "Combiner", "verify_partial", "combine"]


@dataclass(frozen=True)
class GroupSignature:
    """What the receiver gets: ``S_S, U_S, W_S``, the message, and who signed."""

    s_s: int
    u_s: int
    w_s: int
    message: bytes
    signers: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "signers", tuple(sorted(self.signers)))


def _weight(uid, subset, q, lagrange):
    if lagrange is not None:
        return lagrange[uid] % q
    return lagrange_at_zero(uid, subset, q)


def verify_partial(
    ps: PartialSignature,
    board: DealerPublicBoard,
    subset: Sequence[int],
    params: GroupParams | None = None,
    lagrange: Mapping[int, int] | None = None,
) -> bool:
    """Check ``g^s_i == B_i * m_i^(lambda_i * R_S) mod p``.

    Unknown uids raise instead of returning False.
    """
    params = params or board.params
    record = board.member(ps.uid)
    if ps.uid not in subset:
        raise ShareError(f"uid {ps.uid} is not in the signing subset")
    q, p = params.q, params.p
    exponent = _weight(ps.uid, subset, q, lagrange) * ps.r_s % q
    return params.gexp(ps.s) == ps.b * pow(record.m, exponent, p) % p


def combine(
    partials: Sequence[PartialSignature],
    u_s: int,
    w_s: int,
    message: bytes,
    board: DealerPublicBoard,
    params: GroupParams | None = None,
    *,
    recompute_challenge: bool = True,
    lagrange: Mapping[int, int] | None = None,
) -> GroupSignature:
    """Verify every partial and fold them into a group signature.

    With ``recompute_challenge`` the combiner rebuilds ``V_S`` from the
    partials' ``B_i`` and checks the shared challenge against its own hash.
    """
    params = params or board.params
    if not partials:
        raise ProtocolError("no partial signatures to combine")
    subset = check_uids([ps.uid for ps in partials], params.q)
    for uid in subset:
        board.member(uid)
    if len(subset) < board.t:
        raise ProtocolError(f"{len(subset)} partials is below the threshold {board.t}")
    challenges = {ps.r_s for ps in partials}
    if len(challenges) != 1:
        raise ProtocolError(f"partials disagree on the challenge: {sorted(challenges)}")
    (r_s,) = challenges
    if recompute_challenge:
        v_s = 1
        for ps in partials:
            v_s = v_s * ps.b % params.p
        if compute_challenge(v_s, message, params) != r_s:
            raise ProtocolError("challenge does not match hash of the aggregated commitments")

    bad = [ps.uid for ps in partials if not verify_partial(ps, board, subset, params, lagrange)]
    if bad:
        raise PartialRejected(bad)
    s_s = sum(ps.s for ps in partials) % params.q
    return GroupSignature(s_s, u_s, w_s, bytes(message), subset)


@dataclass(frozen=True)
class Combiner:
    """Combiner role state: public inputs only."""

    board: DealerPublicBoard
    recompute_challenge: bool = True

    def verify(self, ps: PartialSignature, subset: Sequence[int], lagrange=None) -> bool:
        return verify_partial(ps, self.board, subset, self.board.params, lagrange)

    def combine(self, partials, u_s, w_s, message, lagrange=None) -> GroupSignature:
        return combine(
            partials, u_s, w_s, message, self.board, self.board.params,
            recompute_challenge=self.recompute_challenge, lagrange=lagrange,
        )

