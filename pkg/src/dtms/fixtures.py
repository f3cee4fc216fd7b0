"""Fixed worked example over p = 47, q = 23, g = 25.

Seven members, five signers, receiver key 9.  The challenge is posited
as 9 rather than hashed, so this example runs with a fixture hash.

The member identities are not part of the original data.  The values
``UIDS`` below are the assignment (unique up to negating every uid) that
reproduces both the share column and the Lagrange weights implied by the
modified shadows; the fixture still injects the share values and weights
directly so nothing depends on that reconstruction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dealer import DealerPublicBoard, DealerSecrets, dealer_setup_from_values
from .group import GroupParams, HashMode, KeyPair, keypair_from_secret
from .shamir import SecretPolynomial

P, Q, G = 47, 23, 25
CHALLENGE = 9
MESSAGE = b"m"

COEFFICIENTS = (13, 0, 0, 0, 18)  # f(x) = 13 + 18 x^4
MASK_KEY = 14
MEMBER_SECRETS = (13, 18, 19, 20, 17, 22, 15)
MEMBER_NONCES = (8, 22, 10, 17, 14, 16, 21)
SHARE_VALUES = (2, 21, 16, 3, 14, 14, 22)
UIDS = (2, 4, 5, 8, 16, 7, 3)

RECEIVER_SECRET = 9
SIGNER_INDEXES = (2, 4, 5, 6, 7)  # 1-based member numbers
SIGNING_NONCES = {2: (18, 17), 4: (17, 19), 5: (14, 13), 6: (19, 21), 7: (16, 18)}
MODIFIED_SHADOWS = {2: 10, 4: 16, 5: 6, 6: 5, 7: 5}

ZK_U, ZK_V, ZK_ALPHA = 9, 11, 37

# expected published values, indexed by member number 1..7
EXPECTED = {
    "y_s": 16,
    "w": 2,
    "l": (10, 20, 3, 20, 5, 7, 20),
    "m": (3, 9, 21, 9, 12, 27, 9),
    "n": (17, 32, 3, 34, 24, 7, 37),
    "v": (41, 29, 1, 19, 38, 14, 44),
    "y": (16, 4, 6, 9, 34, 32, 36),
    "commitments": {2: (18, 4, 3), 4: (8, 34, 8), 5: (3, 24, 7), 6: (14, 6, 25), 7: (12, 7, 34)},
    "aggregates": (8, 36, 14),
    "r_s": 9,
    "ms": (10, 16, 6, 5, 5),
    "s": (16, 0, 22, 18, 15),
    "s_s": 2,
    "e": 18,
    "r_r": 36,
    "mu": 16,
    "package": (36, 18, 2, 8, 16),
    "zk": {"w": 25, "beta": 36, "gamma": 9},
}


def params() -> GroupParams:
    return GroupParams(P, Q, G, HashMode.fixture({"challenge": CHALLENGE}))


def uid_of(index: int) -> int:
    """Member number (1..7) to uid."""
    return UIDS[index - 1]


def signer_uids() -> tuple[int, ...]:
    return tuple(uid_of(i) for i in SIGNER_INDEXES)


def member_keypairs(group: GroupParams | None = None) -> dict[int, KeyPair]:
    group = group or params()
    return {uid: keypair_from_secret(group, x) for uid, x in zip(UIDS, MEMBER_SECRETS)}


def receiver_keypair(group: GroupParams | None = None) -> KeyPair:
    return keypair_from_secret(group or params(), RECEIVER_SECRET)


def derived_lagrange() -> dict[int, int]:
    """Weights recovered as MS_i / l_i mod q from the signers' stated values."""
    out = {}
    for index in SIGNER_INDEXES:
        l_i = EXPECTED["l"][index - 1]
        out[uid_of(index)] = MODIFIED_SHADOWS[index] * pow(l_i, -1, Q) % Q
    return out


@dataclass(frozen=True)
class ToyDeal:
    board: DealerPublicBoard
    secrets: DealerSecrets
    keys: dict


def deal(group: GroupParams | None = None) -> ToyDeal:
    group = group or params()
    keys = member_keypairs(group)
    board, secrets = dealer_setup_from_values(
        group,
        t=len(COEFFICIENTS),
        members=[(uid, keys[uid].y) for uid in UIDS],
        polynomial=SecretPolynomial(COEFFICIENTS, Q),
        K=MASK_KEY,
        nonces=dict(zip(UIDS, MEMBER_NONCES)),
        share_values=dict(zip(UIDS, SHARE_VALUES)),
    )
    return ToyDeal(board, secrets, keys)
