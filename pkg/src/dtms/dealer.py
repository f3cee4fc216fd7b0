"""The trusted share distribution center.

The dealer picks the group polynomial ``f``, a masking key ``K`` and a
nonce ``K_i`` per member.  Each member's masked share is
``l_i = K_i + f(u_i) mod q``, shipped publicly as ``v_i = l_i * y_i^K mod p``
and unlocked with ``W = g^-K`` and the member's private key.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import DealerError, UnknownMemberError
from .group import GroupParams, default_rng, random_scalar
from .shamir import SecretPolynomial, check_uids, poly_eval, poly_sample

__all__ = [
    "MemberRecord",
    "DealerPublicBoard",
    "DealerSecrets",
    "dealer_setup",
    "dealer_setup_from_values",
    "check_board",
]


@dataclass(frozen=True)
class MemberRecord:
    uid: int
    y: int
    m: int
    n: int
    v: int


@dataclass(frozen=True)
class DealerPublicBoard:
    params: GroupParams
    y_s: int
    w: int
    t: int
    members: tuple[MemberRecord, ...]

    @property
    def n(self) -> int:
        return len(self.members)

    @property
    def uids(self) -> tuple[int, ...]:
        return tuple(rec.uid for rec in self.members)

    def member(self, uid: int) -> MemberRecord:
        for rec in self.members:
            if rec.uid == uid:
                return rec
        raise UnknownMemberError(uid)


@dataclass(frozen=True)
class DealerSecrets:
    """Everything only the dealer knows. Kept for test oracles, never serialized."""

    polynomial: SecretPolynomial
    K: int
    nonces: Mapping[int, int]
    shares: Mapping[int, int]
    masked: Mapping[int, int] = field(repr=False)

    def __repr__(self):
        return f"DealerSecrets(<{len(self.nonces)} members, redacted>)"

    @property
    def group_secret(self) -> int:
        return self.polynomial.secret


def _check_members(params: GroupParams, t: int, members: Sequence[tuple[int, int]]):
    if not 1 <= t <= len(members):
        raise DealerError(f"need 1 <= t <= n, got t={t}, n={len(members)}")
    check_uids((u for u, _ in members), params.q)
    for uid, y in members:
        if not 2 <= y < params.p:
            raise DealerError(f"member {uid} public key outside [2, p-1]")


def _build(params, t, members, polynomial, K, nonces, shares) -> tuple[DealerPublicBoard, DealerSecrets]:
    p, q = params.p, params.q
    records, masked = [], {}
    for uid, y in members:
        l_i = (nonces[uid] + shares[uid]) % q
        if l_i == 0:
            raise DealerError(f"masked share of member {uid} is zero")
        # l_i < q < p, so the product stays recoverable after unmasking
        masked[uid] = l_i
        records.append(MemberRecord(
            uid=uid,
            y=y,
            m=params.gexp(l_i),
            n=params.gexp(nonces[uid]),
            v=l_i * pow(y, K, p) % p,
        ))
    board = DealerPublicBoard(
        params=params,
        y_s=params.gexp(polynomial.secret),
        w=params.gexp(-K),
        t=t,
        members=tuple(records),
    )
    secrets = DealerSecrets(polynomial, K, dict(nonces), dict(shares), masked)
    return board, secrets


def dealer_setup(
    params: GroupParams,
    t: int,
    members: Sequence[tuple[int, int]],
    rng=None,
    *,
    secret: int | None = None,
    max_resample: int = 64,
) -> tuple[DealerPublicBoard, DealerSecrets]:
    """Run the dealer for ``members`` given as ``(uid, public key)`` pairs.

    Returns the public board and the retained dealer secrets.  A member
    nonce that would make its masked share zero is resampled.
    """
    rng = default_rng(rng)
    members = [(int(u), int(y)) for u, y in members]
    _check_members(params, t, members)
    q = params.q
    polynomial = poly_sample(t, secret or random_scalar(q, rng), q, rng)
    K = random_scalar(q, rng)
    shares = {uid: poly_eval(polynomial, uid) for uid, _ in members}
    nonces = {}
    for uid, _ in members:
        for _attempt in range(max_resample):
            k_i = random_scalar(q, rng)
            if (k_i + shares[uid]) % q:
                break
        else:
            raise DealerError(f"could not draw a usable nonce for member {uid}")
        nonces[uid] = k_i
    return _build(params, t, members, polynomial, K, nonces, shares)


def dealer_setup_from_values(
    params: GroupParams,
    t: int,
    members: Sequence[tuple[int, int]],
    polynomial: SecretPolynomial,
    K: int,
    nonces: Mapping[int, int],
    share_values: Mapping[int, int] | None = None,
) -> tuple[DealerPublicBoard, DealerSecrets]:
    """Deterministic dealer for fixtures and tests.

    ``share_values`` overrides ``f(u_i)`` per uid for fixtures whose
    identities are not the evaluation points of ``polynomial``.
    """
    members = [(int(u), int(y)) for u, y in members]
    _check_members(params, t, members)
    if share_values is None:
        shares = {uid: poly_eval(polynomial, uid) for uid, _ in members}
    else:
        shares = {uid: share_values[uid] % params.q for uid, _ in members}
    return _build(params, t, members, polynomial, K % params.q, nonces, shares)


def check_board(board: DealerPublicBoard, secrets: DealerSecrets | None = None) -> list[str]:
    """Publicly checkable invariants, plus the secret-side ones when ``secrets`` is given."""
    params = board.params
    p, q = params.p, params.q
    problems = []
    in_group = lambda a: 1 <= a < p and pow(a, q, p) == 1  # noqa: E731
    if not in_group(board.y_s):
        problems.append("y_s not in subgroup")
    if not in_group(board.w):
        problems.append("W not in subgroup")
    if not 1 <= board.t <= board.n:
        problems.append("t outside [1, n]")
    try:
        check_uids(board.uids, q)
    except Exception as exc:  # noqa: BLE001
        problems.append(str(exc))
    for rec in board.members:
        for name in ("m", "n"):
            if not in_group(getattr(rec, name)):
                problems.append(f"member {rec.uid}: {name} not in subgroup")
        if not 1 <= rec.v < p:
            problems.append(f"member {rec.uid}: v outside Z_p*")
    if secrets is not None:
        if board.y_s != params.gexp(secrets.group_secret):
            problems.append("y_s != g^f(0)")
        if board.w != params.gexp(-secrets.K):
            problems.append("W != g^-K")
        for rec in board.members:
            l_i = secrets.masked[rec.uid]
            if l_i != (secrets.nonces[rec.uid] + secrets.shares[rec.uid]) % q or not 0 < l_i < q:
                problems.append(f"member {rec.uid}: bad masked share")
            if rec.m != params.gexp(l_i):
                problems.append(f"member {rec.uid}: m != g^l")
            if rec.n != params.gexp(secrets.nonces[rec.uid]):
                problems.append(f"member {rec.uid}: n != g^K_i")
            if rec.v != l_i * pow(rec.y, secrets.K, p) % p:
                problems.append(f"member {rec.uid}: v != l * y^K")
    return problems
