"""DDH inner-product functional encryption with a public functional-key algorithm.

msk = s, mpk = g^s; Enc(x; r) = (g^r, g^x * mpk^r); sk_y = <s, y>;
pk_y = prod k_i^y_i = g^{sk_y}. Decryption recovers <x, y> by a bounded
discrete log, so only inner products in [0, B] come back.
"""
from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from typing import Sequence

from .errors import DecodeError, LengthMismatch, ParamError
from .group import (
    GENERATOR,
    ORDER,
    POINT_BYTES,
    SECP256K1,
    GroupDescriptor,
    Point,
    base_mul,
    batch_base_mul,
    batch_mul,
    bsgs_dlog,
    inner_product,
    multiexp,
    random_scalar,
)

SUPPORTED_SECURITY = 128


@dataclass(frozen=True)
class IpfeParams:
    ell: int
    bound: int
    group: GroupDescriptor = SECP256K1
    security: int = SUPPORTED_SECURITY

    def digest(self) -> bytes:
        return hashlib.sha256(
            b"FAS/ipfe-params/v1" + self.group.digest()
            + struct.pack(">IQ", self.ell, self.bound) + struct.pack(">H", self.security)
        ).digest()


def gen(security: int = SUPPORTED_SECURITY, ell: int = 1, bound: int = 0) -> IpfeParams:
    if security != SUPPORTED_SECURITY:
        raise ParamError(f"only {SUPPORTED_SECURITY}-bit security (secp256k1) is available")
    if ell < 1:
        raise ParamError("vector length must be at least 1")
    if not 0 <= bound < ORDER:
        raise ParamError("bound must satisfy 0 <= B < p")
    return IpfeParams(ell=ell, bound=bound, security=security)


@dataclass(frozen=True)
class MasterSecretKey:
    s: tuple[int, ...]


@dataclass(frozen=True)
class MasterPublicKey:
    k: tuple[Point, ...]

    def __len__(self):
        return len(self.k)

    def to_bytes(self) -> bytes:
        return b"".join(p.encode() for p in self.k)

    @classmethod
    def from_bytes(cls, data: bytes) -> "MasterPublicKey":
        if not data or len(data) % POINT_BYTES:
            raise DecodeError("master public key length is not a multiple of 33")
        return cls(tuple(Point.decode(data[i:i + POINT_BYTES]) for i in range(0, len(data), POINT_BYTES)))


@dataclass(frozen=True)
class Ciphertext:
    ct0: Point
    ct1: tuple[Point, ...]

    def __len__(self):
        return len(self.ct1)

    def to_bytes(self) -> bytes:
        return struct.pack(">I", len(self.ct1)) + self.ct0.encode() + b"".join(c.encode() for c in self.ct1)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Ciphertext":
        if len(data) < 4:
            raise DecodeError("truncated ciphertext")
        (n,) = struct.unpack(">I", data[:4])
        if len(data) != 4 + POINT_BYTES * (n + 1):
            raise DecodeError("ciphertext length does not match its header")
        pts = [Point.decode(data[i:i + POINT_BYTES]) for i in range(4, len(data), POINT_BYTES)]
        return cls(pts[0], tuple(pts[1:]))


def _check_len(vec: Sequence[int], ell: int, what: str):
    if len(vec) != ell:
        raise LengthMismatch(f"{what} has length {len(vec)}, expected {ell}")


def setup_with(params: IpfeParams, s: Sequence[int]) -> tuple[MasterPublicKey, MasterSecretKey]:
    """Deterministic setup from explicit coins (the msk vector itself)."""
    _check_len(s, params.ell, "setup coins")
    s = tuple(v % ORDER for v in s)
    return MasterPublicKey(tuple(batch_base_mul(s))), MasterSecretKey(s)


def setup(params: IpfeParams, rng) -> tuple[MasterPublicKey, MasterSecretKey]:
    return setup_with(params, [random_scalar(rng) for _ in range(params.ell)])


def encrypt_with(mpk: MasterPublicKey, x: Sequence[int], r: int) -> Ciphertext:
    _check_len(x, len(mpk.k), "message")
    r %= ORDER
    masks = batch_mul(mpk.k, [r] * len(mpk.k))
    gx = batch_base_mul(x)
    return Ciphertext(base_mul(r), tuple(a + b for a, b in zip(gx, masks)))


def encrypt_with_secret(msk: MasterSecretKey, x: Sequence[int], r: int) -> Ciphertext:
    """Same ciphertext as :func:`encrypt_with` under ``g^s``, via fixed-base ``g^{x_i + s_i r}``."""
    _check_len(x, len(msk.s), "message")
    r %= ORDER
    return Ciphertext(base_mul(r), tuple(batch_base_mul([xi + si * r for xi, si in zip(x, msk.s)])))


def encrypt(mpk: MasterPublicKey, x: Sequence[int], rng) -> Ciphertext:
    return encrypt_with(mpk, x, random_scalar(rng))


def keygen(msk: MasterSecretKey, y: Sequence[int]) -> int:
    _check_len(y, len(msk.s), "function")
    return inner_product(msk.s, y)


def pubkeygen(mpk: MasterPublicKey, y: Sequence[int]) -> Point:
    _check_len(y, len(mpk.k), "function")
    return multiexp(mpk.k, y)


def precompute_ct1y(ct: Ciphertext, y: Sequence[int]) -> Point:
    """The key-independent part of decryption; the buyer can run it offline."""
    _check_len(y, len(ct.ct1), "function")
    return multiexp(ct.ct1, y)


def decrypt(sk_y: int, ct: Ciphertext, y: Sequence[int], bound: int, ct1y: Point | None = None) -> int:
    """Recover <x, y> in [0, bound]; raises DlogOutOfRange otherwise."""
    if ct1y is None:
        ct1y = precompute_ct1y(ct, y)
    else:
        _check_len(y, len(ct.ct1), "function")
    d = ct1y - ct.ct0 * sk_y
    return bsgs_dlog(GENERATOR, d, bound)
