"""Schnorr-group arithmetic, parameters, keypairs and hashing into Z_q.

Everything in the scheme lives in the order-``q`` subgroup of ``Z_p*``
generated by ``g``.  Group elements and scalars are plain Python ints.
"""

from __future__ import annotations

import hashlib
import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from sympy import isprime

from .errors import FixtureMissError, NotInvertibleError, ParameterGenerationError

__all__ = [
    "HashMode",
    "GroupParams",
    "KeyPair",
    "ValidationReport",
    "encode_int",
    "decode_int",
    "mod_exp",
    "mod_inv",
    "random_scalar",
    "generate_params",
    "validate_params",
    "keypair_gen",
    "keypair_from_secret",
    "hash_to_zq",
    "default_rng",
]

CHALLENGE_TAG = "challenge"
DEFAULT_DOMAIN = "dtms-v1"
DEFAULT_DIGEST = "sha256"
_HEX = re.compile(r"[0-9a-f]+")


def default_rng(rng=None):
    """Return ``rng`` unchanged, or an OS-backed generator when it is None."""
    return random.SystemRandom() if rng is None else rng


def encode_int(n: int) -> str:
    """Canonical encoding: lowercase big-endian hex without leading zeros."""
    if n < 0:
        raise ValueError("canonical encoding is defined for non-negative integers")
    return format(n, "x")


def decode_int(text: str) -> int:
    text = text.strip()
    if not _HEX.fullmatch(text) or (len(text) > 1 and text[0] == "0"):
        raise ValueError(f"not a canonical hex integer: {text!r}")
    return int(text, 16)


@dataclass(frozen=True)
class HashMode:
    """How challenges are derived.

    ``real`` hashes a framed encoding of the inputs with ``digest`` under
    the domain tag.  ``fixture`` ignores the inputs and returns a fixed
    value per call tag; it exists to replay hand-worked examples where the
    challenge value is simply posited.
    """

    variant: str = "real"
    domain: str = DEFAULT_DOMAIN
    digest: str = DEFAULT_DIGEST
    table: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        if self.variant not in ("real", "fixture"):
            raise ValueError(f"unknown hash variant {self.variant!r}")
        if self.variant == "real":
            hashlib.new(self.digest)  # fail early on unknown digests

    @classmethod
    def real(cls, domain: str = DEFAULT_DOMAIN, digest: str = DEFAULT_DIGEST) -> "HashMode":
        return cls("real", domain, digest)

    @classmethod
    def fixture(cls, table: Mapping[str, int]) -> "HashMode":
        return cls("fixture", table=tuple(table.items()))

    def lookup(self, tag: str) -> int:
        for key, value in self.table:
            if key == tag:
                return value
        raise FixtureMissError(tag)

    def descriptor(self) -> str:
        """One-token description stored in parameter files."""
        if self.variant == "real":
            return f"real/{self.digest}/{self.domain}"
        body = ";".join(f"{k}:{encode_int(v)}" for k, v in self.table)
        return f"fixture/{body}"

    @classmethod
    def from_descriptor(cls, text: str) -> "HashMode":
        variant, _, rest = text.partition("/")
        if variant == "real":
            digest, _, domain = rest.partition("/")
            if not digest or not domain:
                raise ValueError(f"bad hash descriptor {text!r}")
            return cls.real(domain=domain, digest=digest)
        if variant == "fixture":
            table = {}
            for item in filter(None, rest.split(";")):
                tag, _, value = item.partition(":")
                if tag in table or not value:
                    raise ValueError(f"bad hash descriptor {text!r}")
                table[tag] = decode_int(value)
            return cls.fixture(table)
        raise ValueError(f"bad hash descriptor {text!r}")


@dataclass(frozen=True)
class GroupParams:
    p: int
    q: int
    g: int
    hash_mode: HashMode = field(default_factory=HashMode)

    def with_hash(self, hash_mode: HashMode) -> "GroupParams":
        return GroupParams(self.p, self.q, self.g, hash_mode)

    def exp(self, base: int, exponent: int) -> int:
        return mod_exp(base, exponent, self.p)

    def gexp(self, exponent: int) -> int:
        return mod_exp(self.g, exponent, self.p)


@dataclass(frozen=True)
class KeyPair:
    x: int
    y: int

    def public(self) -> int:
        return self.y


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def mod_inv(a: int, modulus: int) -> int:
    if a % modulus == 0:
        raise NotInvertibleError(f"{a} has no inverse modulo {modulus}")
    try:
        return pow(a, -1, modulus)
    except ValueError as exc:  # gcd(a, modulus) > 1
        raise NotInvertibleError(f"{a} has no inverse modulo {modulus}") from exc


def mod_exp(base: int, exponent: int, modulus: int) -> int:
    """``base ** exponent mod modulus``; negative exponents go through the inverse."""
    if exponent < 0:
        return pow(mod_inv(base, modulus), -exponent, modulus)
    return pow(base, exponent, modulus)


def random_scalar(q: int, rng) -> int:
    """Uniform scalar in ``[1, q-1]``; zero is never returned."""
    return rng.randrange(1, q)


def _random_prime(bits: int, rng, attempts: int) -> int:
    for _ in range(attempts):
        candidate = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        if isprime(candidate):
            return candidate
    raise ParameterGenerationError(f"no {bits}-bit prime found in {attempts} attempts")


def generate_params(
    q_bits: int,
    p_bits: int,
    rng=None,
    *,
    hash_mode: HashMode | None = None,
    max_attempts: int = 100_000,
) -> GroupParams:
    """Sample a Schnorr group with a ``q_bits`` prime ``q`` dividing a ``p_bits`` prime ``p``.

    ``p`` is searched as ``2*r*q + 1``; ``g`` is ``k**((p-1)/q)`` for random
    ``k`` until it differs from 1.
    """
    if q_bits < 4:
        raise ValueError("q_bits must be at least 4")
    if p_bits <= q_bits:
        raise ValueError("p_bits must exceed q_bits")
    rng = default_rng(rng)
    lo_p, hi_p = 1 << (p_bits - 1), (1 << p_bits) - 1

    for _ in range(max_attempts):
        q = _random_prime(q_bits, rng, max_attempts)
        r_lo = -(-(lo_p - 1) // (2 * q))
        r_hi = (hi_p - 1) // (2 * q)
        if r_lo > r_hi:
            raise ParameterGenerationError(
                f"no p of {p_bits} bits has the form 2*r*q+1 for a {q_bits}-bit q"
            )
        # bounded search per q, then resample q; tiny ranges are scanned fully
        span = r_hi - r_lo + 1
        tries = min(span, 20 * p_bits)
        for i in range(tries):
            r = rng.randint(r_lo, r_hi) if span > tries else r_lo + i
            p = 2 * r * q + 1
            if lo_p <= p <= hi_p and isprime(p):
                break
        else:
            continue
        while True:
            k = rng.randint(2, p - 1)
            g = pow(k, (p - 1) // q, p)
            if g > 1:
                return GroupParams(p, q, g, hash_mode or HashMode.real())
    raise ParameterGenerationError(f"parameter search exhausted after {max_attempts} attempts")


def validate_params(params: GroupParams, size: str = "toy") -> ValidationReport:
    """List every violated group invariant. ``size="standard"`` adds the bit-length bounds."""
    p, q, g = params.p, params.q, params.g
    bad = []
    if p < 3 or not isprime(p):
        bad.append("p prime")
    if q < 2 or not isprime(q):
        bad.append("q prime")
    if q < 1 or (p - 1) % q:
        bad.append("q divides p−1")
    if not 1 < g < p:
        bad.append("1 < g < p")
    if g == 1:
        bad.append("g ≠ 1")
    if p > 1 and g % p and pow(g, q, p) != 1:
        bad.append("g^q ≡ 1 (mod p)")
    if size == "standard":
        if not (1 << 511) < p < (1 << 512):
            bad.append("p in (2^511, 2^512)")
        if not (1 << 159) < q < (1 << 160):
            bad.append("q in (2^159, 2^160)")
    elif size != "toy":
        raise ValueError(f"unknown size class {size!r}")
    return ValidationReport(tuple(bad))


def keypair_from_secret(params: GroupParams, x: int) -> KeyPair:
    if not 1 <= x < params.q:
        raise ValueError("private key must lie in [1, q-1]")
    return KeyPair(x, params.gexp(x))


def keypair_gen(params: GroupParams, rng=None) -> KeyPair:
    return keypair_from_secret(params, random_scalar(params.q, default_rng(rng)))


def hash_input(domain: str, call_tag: str, group_inputs: Iterable[int], message: bytes) -> bytes:
    """Framing: tag, 0x00, then each element's hex followed by 0x00, then the message."""
    parts = [f"{domain}/{call_tag}".encode("utf-8"), b"\x00"]
    for element in group_inputs:
        parts.append(encode_int(element).encode("ascii"))
        parts.append(b"\x00")
    parts.append(bytes(message))
    return b"".join(parts)


def hash_to_zq(
    call_tag: str,
    group_inputs: Sequence[int],
    message: bytes,
    params: GroupParams,
) -> int:
    mode = params.hash_mode
    if mode.variant == "fixture":
        return mode.lookup(call_tag) % params.q
    data = hash_input(mode.domain, call_tag, group_inputs, message)
    digest = hashlib.new(mode.digest, data).digest()
    return int.from_bytes(digest, "big") % params.q
