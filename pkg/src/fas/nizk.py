"""Pluggable NIZK arguments for advertisement well-formedness.

The language: there are setup coins ``s``, encryption coins ``r`` and a
message ``x`` such that ``mpk = g^s``, ``ct = Enc(mpk, (x, 0..0); r)`` and the
application relation accepts ``(X, x)``.

Two backends ship:

``dev`` (id 0x01)
    A trusted attester. Prove re-runs the relation and signs the statement
    digest with a key created at setup. Anyone holding that key can attest
    to anything, so every serialization carries the ``INSECURE-DEV`` label.

``sigma`` (id 0x02)
    A Fiat-Shamir proof of knowledge for the linear relations above, paired
    with a Pedersen-style vector commitment as the application relation.
    It only supports relations that expose commitment bases.
"""
from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field
from typing import Protocol, Sequence

from . import adaptor, ipfe
from .errors import DecodeError, ParamError, RelationUnsatisfied
from .group import (
    GENERATOR,
    ORDER,
    SCALAR_BYTES,
    Point,
    base_mul,
    decode_scalar,
    encode_scalar,
    hash_to_point,
    make_rng,
    multiexp,
    random_scalar,
)

DEV = 0x01
SIGMA = 0x02
BACKENDS = {"dev": DEV, "sigma": SIGMA}
BACKEND_NAMES = {v: k for k, v in BACKENDS.items()}
INSECURE_LABEL = b"INSECURE-DEV"
SIGMA_LABEL = b"SIGMA-FS"


def _lp(data: bytes) -> bytes:
    return struct.pack(">I", len(data)) + data


def _read_lp(data: bytes, off: int) -> tuple[bytes, int]:
    if off + 4 > len(data):
        raise DecodeError("truncated length prefix")
    (n,) = struct.unpack_from(">I", data, off)
    off += 4
    if off + n > len(data):
        raise DecodeError("truncated field")
    return data[off:off + n], off + n


# -- application relations ---------------------------------------------------

class AppRelation(Protocol):
    name: str

    def check(self, X: bytes, x: Sequence[int]) -> bool: ...

    def statement(self, x: Sequence[int]) -> bytes: ...

    def sample(self, rng, ell: int, high: int = ORDER) -> tuple[bytes, list[int]]: ...


def _merkle_leaf(v: int) -> bytes:
    return hashlib.sha256(b"\x00" + encode_scalar(v % ORDER)).digest()


def merkle_root(x: Sequence[int]) -> bytes:
    """SHA-256 Merkle root over the 32-byte scalar encodings; odd nodes move up unchanged."""
    if not x:
        raise ValueError("empty vector")
    level = [_merkle_leaf(v) for v in x]
    while len(level) > 1:
        nxt = [hashlib.sha256(b"\x01" + level[i] + level[i + 1]).digest()
               for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return level[0]


class MerkleRelation:
    name = "merkle-sha256"

    def statement(self, x):
        return merkle_root(x)

    def check(self, X, x):
        try:
            return bool(x) and merkle_root(x) == bytes(X)
        except (TypeError, ValueError):
            return False

    def sample(self, rng, ell, high=ORDER):
        x = [rng.randrange(high) for _ in range(ell)]
        return self.statement(x), x


class PedersenRelation:
    """``X = sum x_i * H_i`` with nothing-up-my-sleeve bases ``H_i``."""

    name = "pedersen-vector"
    TAG = b"FAS/pedersen/v1"

    def bases(self, ell: int) -> list[Point]:
        return [hash_to_point(self.TAG, i) for i in range(ell)]

    def commit(self, x) -> Point:
        return multiexp(self.bases(len(x)), x)

    def statement(self, x):
        return self.commit(x).encode()

    def check(self, X, x):
        if not x:
            return False
        try:
            return Point.decode(bytes(X)) == self.commit(x)
        except (DecodeError, TypeError):
            return False

    def sample(self, rng, ell, high=ORDER):
        x = [rng.randrange(high) for _ in range(ell)]
        return self.statement(x), x


def example_relation_merkle() -> MerkleRelation:
    return MerkleRelation()


def example_relation_pedersen() -> PedersenRelation:
    return PedersenRelation()


RELATIONS = {"merkle": MerkleRelation, "pedersen": PedersenRelation}


# -- statements and witnesses ----------------------------------------------------

@dataclass(frozen=True)
class NizkStatement:
    """``ell`` is the message length; slots of ``ct`` past it must encrypt 0."""

    X: bytes
    params_digest: bytes
    mpk: ipfe.MasterPublicKey
    ct: ipfe.Ciphertext
    ell: int
    relation: str

    def digest(self) -> bytes:
        return hashlib.sha256(
            _lp(b"FAS/nizk-statement/v1") + _lp(self.relation.encode()) + _lp(bytes(self.X))
            + _lp(self.params_digest) + struct.pack(">I", self.ell)
            + _lp(self.mpk.to_bytes()) + _lp(self.ct.to_bytes())
        ).digest()


@dataclass(frozen=True)
class NizkWitness:
    r0: tuple[int, ...]
    r1: int
    x: tuple[int, ...]


def pad(x: Sequence[int], length: int) -> list[int]:
    return list(x) + [0] * (length - len(x))


def check_relation(stmt: NizkStatement, wit: NizkWitness, relation: AppRelation) -> bool:
    L = len(stmt.mpk)
    if len(wit.r0) != L or len(wit.x) != stmt.ell or stmt.ell > L or len(stmt.ct) != L:
        return False
    if relation.name != stmt.relation:
        return False
    params = ipfe.IpfeParams(ell=L, bound=0)
    mpk, msk = ipfe.setup_with(params, wit.r0)
    if mpk != stmt.mpk:
        return False
    if ipfe.encrypt_with_secret(msk, pad(wit.x, L), wit.r1) != stmt.ct:
        return False
    return relation.check(stmt.X, wit.x)


# -- crs and proofs ---------------------------------------------------------------

@dataclass(frozen=True)
class Crs:
    backend: int
    public: bytes
    # dev backend only; never part of the serialized crs
    secret: adaptor.SigningKey | None = field(default=None, compare=False, repr=False)

    @property
    def label(self) -> bytes:
        return INSECURE_LABEL if self.backend == DEV else SIGMA_LABEL

    @property
    def insecure(self) -> bool:
        return self.backend == DEV

    def to_bytes(self) -> bytes:
        return bytes([self.backend]) + _lp(self.label) + _lp(self.public)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Crs":
        if not data or data[0] not in BACKEND_NAMES:
            raise DecodeError("unknown nizk backend")
        label, off = _read_lp(data, 1)
        public, off = _read_lp(data, off)
        if off != len(data):
            raise DecodeError("trailing bytes after crs")
        crs = cls(data[0], public)
        if label != crs.label:
            raise DecodeError("crs label does not match its backend")
        return crs

    def with_secret(self, secret: bytes) -> "Crs":
        sk = adaptor.SigningKey.from_bytes(secret)
        if self.backend != DEV or sk.verifying_key().to_bytes() != self.public:
            raise ParamError("attester secret does not belong to this crs")
        return Crs(self.backend, self.public, sk)


@dataclass(frozen=True)
class Proof:
    backend: int
    payload: bytes

    def to_bytes(self) -> bytes:
        return bytes([self.backend]) + _lp(self.payload)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Proof":
        if not data:
            raise DecodeError("empty proof")
        payload, off = _read_lp(data, 1)
        if off != len(data):
            raise DecodeError("trailing bytes after proof")
        return cls(data[0], payload)


def setup(security: int = 128, rng=None, backend: str = "dev") -> Crs:
    """For ``dev`` the returned crs carries the attester key in ``secret``."""
    if security != 128:
        raise ParamError("only 128-bit security is available")
    if backend not in BACKENDS:
        raise ParamError(f"unknown backend {backend!r}")
    rng = rng or make_rng()
    if backend == "dev":
        sk, vk = adaptor.keygen(rng)
        return Crs(DEV, vk.to_bytes(), sk)
    return Crs(SIGMA, rng.getrandbits(256).to_bytes(32, "big"))


def setup_with_trapdoor(security: int = 128, rng=None, backend: str = "dev"):
    """Adaptive-ZK setup: ``(crs, td)``. Only the dev backend has a usable trapdoor."""
    if backend != "dev":
        raise ParamError("simulation trapdoors exist only for the dev backend")
    crs = setup(security, rng, backend)
    return Crs(crs.backend, crs.public), crs.secret


def _attest_msg(stmt: NizkStatement) -> bytes:
    return INSECURE_LABEL + stmt.digest()


def simulate(crs: Crs, td: adaptor.SigningKey, stmt: NizkStatement, rng=None) -> Proof:
    """Accepting proof without a witness, using the trapdoor."""
    sig = adaptor.sign(td, _attest_msg(stmt), rng or make_rng())
    return Proof(DEV, INSECURE_LABEL + sig.to_bytes())


def prove(crs: Crs, stmt: NizkStatement, wit: NizkWitness, relation: AppRelation, rng=None) -> Proof:
    if not check_relation(stmt, wit, relation):
        raise RelationUnsatisfied("witness does not re-derive the statement")
    rng = rng or make_rng()
    if crs.backend == DEV:
        if crs.secret is None:
            raise ParamError("dev crs has no attester key loaded")
        return simulate(crs, crs.secret, stmt, rng)
    if crs.backend == SIGMA:
        return Proof(SIGMA, _sigma_prove(crs, stmt, wit, relation, rng))
    raise ParamError("unknown backend")


def verify(crs: Crs, stmt: NizkStatement, proof, relation: AppRelation | None = None) -> bool:
    try:
        if isinstance(proof, (bytes, bytearray)):
            proof = Proof.from_bytes(bytes(proof))
        if proof.backend != crs.backend:
            return False
        if crs.backend == DEV:
            p = proof.payload
            if not p.startswith(INSECURE_LABEL):
                return False
            vk = adaptor.VerifyingKey.from_bytes(crs.public)
            return adaptor.verify(vk, _attest_msg(stmt), p[len(INSECURE_LABEL):])
        if crs.backend == SIGMA:
            return _sigma_verify(crs, stmt, proof.payload, relation)
    except DecodeError:
        return False
    return False


# -- sigma backend ------------------------------------------------------------------

def _sigma_bases(stmt: NizkStatement, relation) -> list[Point]:
    if relation is None or not hasattr(relation, "bases") or relation.name != stmt.relation:
        raise ParamError("the sigma backend needs a relation with commitment bases")
    return relation.bases(stmt.ell)


def _sigma_challenge(crs: Crs, stmt: NizkStatement, A, B, C, D) -> int:
    h = hashlib.sha256()
    h.update(_lp(b"FAS/nizk-sigma/v1") + _lp(crs.public) + stmt.digest())
    for p in (*A, B, *C, D):
        h.update(p.encode())
    return int.from_bytes(h.digest(), "big") % ORDER


def _sigma_prove(crs, stmt, wit, relation, rng) -> bytes:
    H = _sigma_bases(stmt, relation)
    k = stmt.mpk.k
    L, ell = len(k), stmt.ell
    a_s = [random_scalar(rng) for _ in range(L)]
    a_r = random_scalar(rng)
    a_x = [random_scalar(rng) for _ in range(ell)]
    A = [base_mul(a) for a in a_s]
    B = base_mul(a_r)
    C = [base_mul(a_x[i] if i < ell else 0) + k[i] * a_r for i in range(L)]
    D = multiexp(H, a_x)
    c = _sigma_challenge(crs, stmt, A, B, C, D)
    z_s = [(a + c * s) % ORDER for a, s in zip(a_s, wit.r0)]
    z_r = (a_r + c * wit.r1) % ORDER
    z_x = [(a + c * v) % ORDER for a, v in zip(a_x, wit.x)]
    return encode_scalar(c) + b"".join(encode_scalar(z) for z in (*z_s, z_r, *z_x))


def _sigma_verify(crs, stmt, payload, relation) -> bool:
    H = _sigma_bases(stmt, relation)
    k, ct = stmt.mpk.k, stmt.ct
    L, ell = len(k), stmt.ell
    if len(ct) != L or ell > L or len(payload) != SCALAR_BYTES * (L + ell + 2):
        return False
    vals = [decode_scalar(payload[i:i + SCALAR_BYTES]) for i in range(0, len(payload), SCALAR_BYTES)]
    c, z_s, z_r, z_x = vals[0], vals[1:L + 1], vals[L + 1], vals[L + 2:]
    X = Point.decode(bytes(stmt.X))
    nc = -c % ORDER
    A = [multiexp([GENERATOR, k[i]], [z_s[i], nc]) for i in range(L)]
    B = multiexp([GENERATOR, ct.ct0], [z_r, nc])
    C = [multiexp([GENERATOR, k[i], ct.ct1[i]], [z_x[i] if i < ell else 0, z_r, nc]) for i in range(L)]
    D = multiexp([*H, X], [*z_x, nc])
    return _sigma_challenge(crs, stmt, A, B, C, D) == c
