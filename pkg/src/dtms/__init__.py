"""Directed (t, n)-threshold multi-signatures over a Schnorr group.

A trusted dealer hands masked Shamir shares to ``n`` members; any ``t``
of them produce partial signatures that a secretless combiner sums into
one group signature.  Only the designated receiver can verify it, and
the receiver can later convince a third party interactively.
"""

from .combiner import Combiner, GroupSignature, combine, verify_partial
from .dealer import DealerPublicBoard, DealerSecrets, MemberRecord, check_board, dealer_setup
from .errors import DTMSError, PartialRejected
from .group import (
    GroupParams,
    HashMode,
    KeyPair,
    generate_params,
    hash_to_zq,
    keypair_gen,
    mod_exp,
    mod_inv,
    validate_params,
)
from .receiver import (
    ConfirmationPackage,
    ZkTranscript,
    build_confirmation_package,
    compute_e,
    recover_commitment,
    third_party_check,
    verify_group_signature,
    zk_run,
)
from .shamir import SecretPolynomial, lagrange_at_zero, poly_eval, poly_sample, reconstruct_at_zero
from .signing import (
    CommitmentTriple,
    PartialSignature,
    aggregate_commitments,
    modify_shadow,
    nonce_commit,
    partial_sign,
    recover_share,
)
from .sim import SimConfig, SimTranscript, replay, run_session, simulate

__version__ = "0.1.0"
