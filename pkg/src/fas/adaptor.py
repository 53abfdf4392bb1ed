"""Schnorr signatures and Schnorr adaptor signatures for the discrete-log relation.

A signature is ``(h, s)`` with ``h = H(vk || g^r || m)`` and ``s = r + h*delta``.
A pre-signature on statement ``X`` hashes ``g^r * X`` instead; adding the
witness ``x`` (``X = g^x``) to ``s`` completes it, and subtracting the
pre-signature from the completed one recovers ``x``.
"""
from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass

from .errors import DecodeError, InvalidStatement, PreSigInvalid, WitnessMismatch
from .group import (
    GENERATOR,
    ORDER,
    SCALAR_BYTES,
    Point,
    base_mul,
    decode_scalar,
    encode_scalar,
    multiexp,
    random_nonzero_scalar,
    random_scalar,
)

HASH_TAG = b"FAS/Schnorr/v1"
SIGNATURE_BYTES = 2 * SCALAR_BYTES


def _lp(data: bytes) -> bytes:
    return struct.pack(">I", len(data)) + data


def challenge(vk: Point, R: Point, m: bytes) -> int:
    digest = hashlib.sha256(_lp(HASH_TAG) + _lp(vk.encode()) + _lp(R.encode()) + _lp(m)).digest()
    return int.from_bytes(digest, "big") % ORDER


@dataclass(frozen=True)
class SigningKey:
    delta: int

    def __post_init__(self):
        if not 0 < self.delta < ORDER:
            raise ValueError("signing key must be in [1, p)")

    def verifying_key(self) -> "VerifyingKey":
        return VerifyingKey(base_mul(self.delta))

    def to_bytes(self) -> bytes:
        return encode_scalar(self.delta)

    @classmethod
    def from_bytes(cls, data: bytes) -> "SigningKey":
        return cls(decode_scalar(data))


@dataclass(frozen=True)
class VerifyingKey:
    point: Point

    def to_bytes(self) -> bytes:
        return self.point.encode()

    @classmethod
    def from_bytes(cls, data: bytes) -> "VerifyingKey":
        pt = Point.decode(data)
        if pt.is_identity():
            raise DecodeError("verifying key is the identity")
        return cls(pt)


@dataclass(frozen=True)
class _ScalarPair:
    h: int
    s: int

    def to_bytes(self) -> bytes:
        return encode_scalar(self.h) + encode_scalar(self.s)

    @classmethod
    def from_bytes(cls, data: bytes):
        if len(data) != SIGNATURE_BYTES:
            raise DecodeError(f"expected {SIGNATURE_BYTES} bytes, got {len(data)}")
        return cls(decode_scalar(data[:SCALAR_BYTES]), decode_scalar(data[SCALAR_BYTES:]))


class Signature(_ScalarPair):
    pass


class PreSignature(_ScalarPair):
    @property
    def s_tilde(self) -> int:
        return self.s


def keygen(rng) -> tuple[SigningKey, VerifyingKey]:
    sk = SigningKey(random_nonzero_scalar(rng))
    return sk, sk.verifying_key()


def _commitment(vk: Point, h: int, s: int) -> Point:
    # g^s / vk^h
    return multiexp([GENERATOR, vk], [s, -h % ORDER])


def sign(sk: SigningKey, m: bytes, rng) -> Signature:
    vk = sk.verifying_key().point
    r = random_scalar(rng)
    h = challenge(vk, base_mul(r), m)
    return Signature(h, (r + h * sk.delta) % ORDER)


def verify(vk: VerifyingKey, m: bytes, sig) -> bool:
    try:
        if isinstance(sig, (bytes, bytearray)):
            sig = Signature.from_bytes(bytes(sig))
        if not (0 <= sig.h < ORDER and 0 <= sig.s < ORDER):
            return False
    except DecodeError:
        return False
    R = _commitment(vk.point, sig.h, sig.s)
    return challenge(vk.point, R, m) == sig.h


def _statement(X) -> Point:
    if isinstance(X, Point):
        return X
    try:
        return Point.decode(bytes(X))
    except (DecodeError, TypeError) as exc:
        raise InvalidStatement(str(exc)) from exc


def pre_sign(sk: SigningKey, m: bytes, X, rng) -> PreSignature:
    X = _statement(X)
    vk = sk.verifying_key().point
    r = random_scalar(rng)
    h = challenge(vk, base_mul(r) + X, m)
    return PreSignature(h, (r + h * sk.delta) % ORDER)


def pre_verify(vk: VerifyingKey, m: bytes, X, pre_sig) -> bool:
    try:
        X = _statement(X)
        if isinstance(pre_sig, (bytes, bytearray)):
            pre_sig = PreSignature.from_bytes(bytes(pre_sig))
        if not (0 <= pre_sig.h < ORDER and 0 <= pre_sig.s < ORDER):
            return False
    except (DecodeError, InvalidStatement):
        return False
    R = _commitment(vk.point, pre_sig.h, pre_sig.s)
    return challenge(vk.point, R + X, m) == pre_sig.h


def adapt(vk: VerifyingKey, m: bytes, X, w: int, pre_sig: PreSignature) -> Signature:
    X = _statement(X)
    if not pre_verify(vk, m, X, pre_sig):
        raise PreSigInvalid("pre-signature does not verify for this statement")
    if base_mul(w) != X:
        raise WitnessMismatch("g^w does not match the statement")
    return Signature(pre_sig.h, (pre_sig.s + w) % ORDER)


def extract(pre_sig: PreSignature, sig: Signature, X) -> int | None:
    """Witness ``s - s~`` if it opens ``X``, else ``None``."""
    X = _statement(X)
    if pre_sig.h != sig.h:
        return None
    w = (sig.s - pre_sig.s) % ORDER
    if base_mul(w) != X:
        return None
    return w
