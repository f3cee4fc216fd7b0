"""Shamir sharing over Z_q: polynomials, share evaluation and Lagrange weights at zero."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NotInvertibleError, ShareError
from .group import default_rng, mod_inv

__all__ = [
    "SecretPolynomial",
    "poly_sample",
    "poly_eval",
    "lagrange_at_zero",
    "lagrange_coefficients",
    "reconstruct_at_zero",
    "check_uids",
]


@dataclass(frozen=True)
class SecretPolynomial:
    """``f(x) = a_0 + a_1 x + ... + a_{t-1} x^{t-1}`` over Z_q; ``a_0`` is the secret."""

    coefficients: tuple[int, ...]
    q: int

    def __post_init__(self):
        if not self.coefficients:
            raise ValueError("a polynomial needs at least the constant term")
        object.__setattr__(self, "coefficients", tuple(c % self.q for c in self.coefficients))

    @property
    def threshold(self) -> int:
        return len(self.coefficients)

    @property
    def secret(self) -> int:
        return self.coefficients[0]

    def __call__(self, u: int) -> int:
        return poly_eval(self, u)


def poly_sample(t: int, secret: int, q: int, rng=None) -> SecretPolynomial:
    if t < 1:
        raise ValueError("threshold must be at least 1")
    if not 1 <= secret < q:
        raise ValueError("secret must lie in [1, q-1]")
    rng = default_rng(rng)
    return SecretPolynomial((secret, *(rng.randrange(q) for _ in range(t - 1))), q)


def poly_eval(poly: SecretPolynomial, u: int) -> int:
    acc = 0
    for coefficient in reversed(poly.coefficients):
        acc = (acc * u + coefficient) % poly.q
    return acc


def check_uids(uids: Iterable[int], q: int) -> tuple[int, ...]:
    """Reject zero and duplicate identities (both taken mod q)."""
    uids = tuple(uids)
    seen = set()
    for u in uids:
        r = u % q
        if r == 0:
            raise ShareError("member identity 0 (mod q) is not allowed")
        if r in seen:
            raise ShareError(f"duplicate member identity {u} (mod q)")
        seen.add(r)
    return uids


def lagrange_at_zero(i: int, subset: Iterable[int], q: int) -> int:
    """Weight of member ``i``'s share when interpolating the subset at x = 0."""
    subset = tuple(subset)
    if i not in subset:
        raise ShareError(f"uid {i} is not in the subset")
    num, den = 1, 1
    for j in subset:
        if j == i:
            continue
        num = num * -j % q
        den = den * (i - j) % q
    try:
        return num * mod_inv(den, q) % q
    except NotInvertibleError:
        raise ShareError(f"uids in {subset} collide modulo {q}") from None


def lagrange_coefficients(subset: Sequence[int], q: int) -> dict[int, int]:
    check_uids(subset, q)
    return {i: lagrange_at_zero(i, subset, q) for i in subset}


def reconstruct_at_zero(shares: Sequence[tuple[int, int]], q: int) -> int:
    if not shares:
        raise ShareError("need at least one share")
    uids = check_uids([u for u, _ in shares], q)
    return sum(value * lagrange_at_zero(u, uids, q) for u, value in shares) % q
