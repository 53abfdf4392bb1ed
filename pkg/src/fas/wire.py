"""Binary message envelopes.

Every envelope is ``magic(4) || version(1) || mode(1)`` followed by its
fields, each prefixed with a 4-byte big-endian length. Field order is fixed
per message type.
"""
from __future__ import annotations

import struct
from typing import Sequence

from . import ipfe, nizk
from .adaptor import PreSignature, Signature, VerifyingKey
from .errors import DecodeError, EnvelopeError
from .group import ORDER, POINT_BYTES, SCALAR_BYTES, Point, decode_scalar, encode_scalar
from .protocol import WEAK_AUX, Advertisement, AuxInfo, Mode, PublicParams, SellerState

VERSION = 1

PARAMS = b"PARM"
ADVT = b"ADVT"
FUNC_REQ = b"FREQ"
AUX = b"AUXI"
PRESIG = b"PSIG"
SIG = b"ASIG"
STATE = b"SSTA"
TRANSCRIPT = b"TRNS"

MAGICS = (PARAMS, ADVT, FUNC_REQ, AUX, PRESIG, SIG, STATE, TRANSCRIPT)
HEADER_BYTES = 6

# size of a group element when stored as two uncompressed coordinates
WIDE_POINT_BYTES = 64


def encode(magic: bytes, mode: Mode | None, fields: Sequence[bytes]) -> bytes:
    if magic not in MAGICS:
        raise EnvelopeError(f"unknown magic {magic!r}")
    out = [magic, bytes([VERSION, mode.code if mode else 0])]
    for f in fields:
        out.append(struct.pack(">I", len(f)))
        out.append(bytes(f))
    return b"".join(out)


def decode(data: bytes, magic: bytes | None = None, mode: Mode | None = None):
    """Split an envelope into ``(magic, mode, fields)``, checking the header."""
    data = bytes(data)
    if len(data) < HEADER_BYTES:
        raise EnvelopeError("truncated envelope header")
    got, version, mcode = data[:4], data[4], data[5]
    if got not in MAGICS:
        raise EnvelopeError(f"unknown magic {got!r}")
    if magic is not None and got != magic:
        raise EnvelopeError(f"expected a {magic.decode()} envelope, got {got.decode()}")
    if version != VERSION:
        raise EnvelopeError(f"unsupported envelope version {version}")
    env_mode = None
    if mcode:
        try:
            env_mode = Mode.from_code(mcode)
        except ValueError as exc:
            raise EnvelopeError(str(exc)) from None
    if mode is not None and env_mode is not mode:
        raise EnvelopeError(f"envelope mode {env_mode} does not match {mode}")
    fields, off = [], HEADER_BYTES
    while off < len(data):
        if off + 4 > len(data):
            raise EnvelopeError("truncated field length")
        (n,) = struct.unpack_from(">I", data, off)
        off += 4
        if off + n > len(data):
            raise EnvelopeError("truncated field")
        fields.append(data[off:off + n])
        off += n
    return got, env_mode, fields


def payload_size(data: bytes) -> int:
    """Bytes of field content, excluding the header and length prefixes."""
    return sum(len(f) for f in decode(data)[2])


def _expect(fields, n, what):
    if len(fields) != n:
        raise EnvelopeError(f"{what} envelope has {len(fields)} fields, expected {n}")


def encode_vector(v: Sequence[int]) -> bytes:
    return b"".join(encode_scalar(a % ORDER) for a in v)


def decode_vector(data: bytes) -> list[int]:
    if len(data) % SCALAR_BYTES:
        raise DecodeError("vector length is not a multiple of 32")
    return [decode_scalar(data[i:i + SCALAR_BYTES]) for i in range(0, len(data), SCALAR_BYTES)]


# -- typed messages -------------------------------------------------------------

def encode_params(pp: PublicParams) -> bytes:
    ip = pp.ipfe_params
    return encode(PARAMS, pp.mode, [
        pp.crs.to_bytes(), struct.pack(">IH", ip.ell, ip.security),
        encode_scalar(ip.bound), pp.relation_name.encode(),
    ])


def decode_params(data: bytes) -> PublicParams:
    _, mode, f = decode(data, PARAMS)
    _expect(f, 4, "params")
    try:
        crs = nizk.Crs.from_bytes(f[0])
        if len(f[1]) != 6:
            raise DecodeError("bad ipfe header")
        ell, security = struct.unpack(">IH", f[1])
        ip = ipfe.gen(security, ell, decode_scalar(f[2]))
        rel = f[3].decode()
    except (DecodeError, ValueError) as exc:
        raise EnvelopeError(f"malformed params: {exc}") from None
    if rel not in nizk.RELATIONS:
        raise EnvelopeError(f"unknown relation {rel!r}")
    return PublicParams(crs, ip, mode, rel)


def encode_advt(mode: Mode, X: bytes, advt: Advertisement) -> bytes:
    return encode(ADVT, mode, [bytes(X), advt.mpk.to_bytes(), advt.ct.to_bytes(), advt.proof.to_bytes()])


def decode_advt(data: bytes, mode: Mode | None = None) -> tuple[bytes, Advertisement]:
    _, _, f = decode(data, ADVT, mode)
    _expect(f, 4, "advertisement")
    try:
        advt = Advertisement(ipfe.MasterPublicKey.from_bytes(f[1]), ipfe.Ciphertext.from_bytes(f[2]),
                             nizk.Proof.from_bytes(f[3]))
    except DecodeError as exc:
        raise EnvelopeError(f"malformed advertisement: {exc}") from None
    return f[0], advt


def encode_request(mode: Mode, y: Sequence[int], buyer_vk: VerifyingKey, m: bytes) -> bytes:
    return encode(FUNC_REQ, mode, [encode_vector(y), buyer_vk.to_bytes(), bytes(m)])


def decode_request(data: bytes, mode: Mode | None = None):
    """Returns ``(y, buyer_vk, m)``."""
    _, _, f = decode(data, FUNC_REQ, mode)
    _expect(f, 3, "request")
    try:
        return decode_vector(f[0]), VerifyingKey.from_bytes(f[1]), f[2]
    except DecodeError as exc:
        raise EnvelopeError(f"malformed request: {exc}") from None


def encode_aux(mode: Mode, aux: AuxInfo) -> bytes:
    if aux.aux_y is None:
        return encode(AUX, mode, [b"", b""])
    return encode(AUX, mode, [aux.aux_y.encode(), encode_scalar(aux.pi_y)])


def decode_aux(data: bytes, mode: Mode | None = None) -> AuxInfo:
    _, _, f = decode(data, AUX, mode)
    _expect(f, 2, "aux")
    if f == [b"", b""]:
        return WEAK_AUX
    try:
        return AuxInfo(Point.decode(f[0]), decode_scalar(f[1]))
    except DecodeError as exc:
        raise EnvelopeError(f"malformed aux: {exc}") from None


def encode_presig(mode: Mode, pre: PreSignature) -> bytes:
    return encode(PRESIG, mode, [pre.to_bytes()])


def decode_presig(data: bytes, mode: Mode | None = None) -> PreSignature:
    _, _, f = decode(data, PRESIG, mode)
    _expect(f, 1, "pre-signature")
    try:
        return PreSignature.from_bytes(f[0])
    except DecodeError as exc:
        raise EnvelopeError(f"malformed pre-signature: {exc}") from None


def encode_sig(mode: Mode, sig: Signature) -> bytes:
    return encode(SIG, mode, [sig.to_bytes()])


def decode_sig(data: bytes, mode: Mode | None = None) -> Signature:
    _, _, f = decode(data, SIG, mode)
    _expect(f, 1, "signature")
    try:
        return Signature.from_bytes(f[0])
    except DecodeError as exc:
        raise EnvelopeError(f"malformed signature: {exc}") from None


def encode_state(mode: Mode, st: SellerState, x: Sequence[int]) -> bytes:
    t = encode_vector(st.t) if st.t is not None else b""
    return encode(STATE, mode, [encode_vector(st.msk.s), t, encode_vector(x)])


def decode_state(data: bytes, mode: Mode | None = None) -> tuple[SellerState, list[int]]:
    _, m, f = decode(data, STATE, mode)
    _expect(f, 3, "state")
    try:
        t = tuple(decode_vector(f[1])) if m is Mode.STRONG else None
        return SellerState(ipfe.MasterSecretKey(tuple(decode_vector(f[0]))), t), decode_vector(f[2])
    except DecodeError as exc:
        raise EnvelopeError(f"malformed state: {exc}") from None


# -- size accounting -------------------------------------------------------------

def aux_payload_bytes(point_bytes: int = POINT_BYTES) -> int:
    return point_bytes + SCALAR_BYTES


def advt_group_elements(ell: int, mode: Mode) -> int:
    """mpk plus ct0 plus ct1 for a length-``ell`` vector."""
    L = ell + 1 if mode is Mode.STRONG else ell
    return 2 * L + 1


def advt_bytes(ell: int, mode: Mode, point_bytes: int = POINT_BYTES) -> int:
    """Group-element bytes of an advertisement, ignoring the proof and framing."""
    return advt_group_elements(ell, mode) * point_bytes
