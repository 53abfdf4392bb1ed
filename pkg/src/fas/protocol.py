"""Functional adaptor signatures for inner products.

A seller advertises an encryption of ``x`` and sells ``<x, y>`` for a
buyer-chosen ``y``. The buyer pre-signs a payment against an adaptor
statement that equals ``g^{sk_y}``. Publishing the completed signature
hands the buyer ``sk_y`` and with it the inner product.

Two modes:

* ``STRONG``: the IPFE instance has one extra slot. The message is
  ``(x, 0)``, the seller keeps random coins ``t`` and answers each request
  with ``pi_y = <t, y>`` and ``aux_y = pk`` for ``(y, pi_y)``. Pre-signing
  takes one round trip.
* ``WEAK``: no extra slot and no aux round. The buyer derives the adaptor
  statement from ``mpk`` and ``y`` alone.
"""
from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass
from typing import Sequence

from . import adaptor, ipfe, nizk
from .adaptor import PreSignature, Signature, SigningKey, VerifyingKey
from .errors import (
    AuxInvalid,
    BoundExceeded,
    ExtractFailed,
    LengthMismatch,
    ModeError,
    ParamError,
    RelationUnsatisfied,
)
from .group import ORDER, Point, base_mul, inner_product, make_rng, random_scalar


class Mode(enum.Enum):
    STRONG = "strong"
    WEAK = "weak"

    @property
    def code(self) -> int:
        return 1 if self is Mode.STRONG else 2

    @classmethod
    def from_code(cls, code: int) -> "Mode":
        for m in cls:
            if m.code == code:
                return m
        raise ValueError(f"unknown mode code {code}")


@dataclass(frozen=True)
class PublicParams:
    crs: nizk.Crs
    ipfe_params: ipfe.IpfeParams
    mode: Mode
    relation_name: str = "merkle"

    @property
    def ell(self) -> int:
        """Length of the seller's vector (the IPFE instance may be one longer)."""
        return self.ipfe_params.ell - (1 if self.mode is Mode.STRONG else 0)

    @property
    def bound(self) -> int:
        return self.ipfe_params.bound

    @property
    def relation(self) -> nizk.AppRelation:
        return nizk.RELATIONS[self.relation_name]()

    def digest(self) -> bytes:
        return hashlib.sha256(
            b"FAS/pp/v1" + self.crs.to_bytes() + self.ipfe_params.digest()
            + bytes([self.mode.code]) + self.relation_name.encode()
        ).digest()


@dataclass(frozen=True)
class Advertisement:
    mpk: ipfe.MasterPublicKey
    ct: ipfe.Ciphertext
    proof: nizk.Proof


@dataclass(frozen=True)
class SellerState:
    msk: ipfe.MasterSecretKey
    t: tuple[int, ...] | None = None


@dataclass(frozen=True)
class AuxInfo:
    """``(aux_y, pi_y)``; both ``None`` in weak mode."""

    aux_y: Point | None
    pi_y: int | None


WEAK_AUX = AuxInfo(None, None)


def setup(security: int = 128, ell: int = 1, bound: int = 0, mode: Mode = Mode.STRONG, rng=None,
          backend: str = "dev", relation: str = "merkle") -> PublicParams:
    if ell < 1:
        raise ParamError("vector length must be at least 1")
    if relation not in nizk.RELATIONS:
        raise ParamError(f"unknown relation {relation!r}")
    mode = Mode(mode)
    rng = rng or make_rng()
    crs = nizk.setup(security, rng, backend)
    L = ell + 1 if mode is Mode.STRONG else ell
    return PublicParams(crs, ipfe.gen(security, L, bound), mode, relation)


def _check_vec(v: Sequence[int], ell: int, what: str):
    if len(v) != ell:
        raise LengthMismatch(f"{what} has length {len(v)}, expected {ell}")


def nizk_statement(pp: PublicParams, X: bytes, mpk, ct) -> nizk.NizkStatement:
    return nizk.NizkStatement(bytes(X), pp.ipfe_params.digest(), mpk, ct, pp.ell, pp.relation.name)


def ad_gen(pp: PublicParams, X: bytes, x: Sequence[int], rng=None) -> tuple[Advertisement, SellerState]:
    _check_vec(x, pp.ell, "x")
    rel = pp.relation
    if not rel.check(X, x):
        raise RelationUnsatisfied("x is not a witness for X")
    rng = rng or make_rng()
    L = pp.ipfe_params.ell
    s = [random_scalar(rng) for _ in range(L)]
    r = random_scalar(rng)
    mpk, msk = ipfe.setup_with(pp.ipfe_params, s)
    ct = ipfe.encrypt_with_secret(msk, nizk.pad(x, L), r)
    stmt = nizk_statement(pp, X, mpk, ct)
    proof = nizk.prove(pp.crs, stmt, nizk.NizkWitness(tuple(s), r, tuple(x)), rel, rng)
    t = tuple(random_scalar(rng) for _ in range(pp.ell)) if pp.mode is Mode.STRONG else None
    return Advertisement(mpk, ct, proof), SellerState(msk, t)


def ad_verify(pp: PublicParams, X: bytes, advt: Advertisement) -> bool:
    L = pp.ipfe_params.ell
    if len(advt.mpk) != L or len(advt.ct) != L:
        return False
    return nizk.verify(pp.crs, nizk_statement(pp, X, advt.mpk, advt.ct), advt.proof, pp.relation)


def extended(y: Sequence[int], pi_y: int) -> list[int]:
    """``(y, pi_y)``: the function vector over the padded IPFE instance."""
    return [*y, pi_y % ORDER]


def functional_key(pp: PublicParams, st: SellerState, y: Sequence[int]) -> int:
    """The IPFE key the seller releases through the adapted signature."""
    _check_vec(y, pp.ell, "y")
    if pp.mode is Mode.WEAK:
        return ipfe.keygen(st.msk, y)
    if st.t is None:
        raise ModeError("seller state has no compiler coins")
    return ipfe.keygen(st.msk, extended(y, inner_product(st.t, y)))


def aux_gen(pp: PublicParams, advt: Advertisement, st: SellerState, y: Sequence[int]) -> AuxInfo:
    if pp.mode is Mode.WEAK:
        return WEAK_AUX
    _check_vec(y, pp.ell, "y")
    if st.t is None:
        raise ModeError("seller state has no compiler coins")
    # g^{sk} is a single exponentiation; pubkeygen would cost a multiexp over all slots
    return AuxInfo(base_mul(functional_key(pp, st, y)), inner_product(st.t, y))


def aux_verify(pp: PublicParams, advt: Advertisement, y: Sequence[int], aux: AuxInfo) -> bool:
    if pp.mode is Mode.WEAK:
        return True
    _check_vec(y, pp.ell, "y")
    if aux.aux_y is None or aux.pi_y is None or not 0 <= aux.pi_y < ORDER:
        return False
    return ipfe.pubkeygen(advt.mpk, extended(y, aux.pi_y)) == aux.aux_y


def adaptor_statement(pp: PublicParams, advt: Advertisement, y: Sequence[int], aux: AuxInfo) -> Point:
    _check_vec(y, pp.ell, "y")
    if pp.mode is Mode.WEAK:
        return ipfe.pubkeygen(advt.mpk, y)
    if aux.aux_y is None:
        raise AuxInvalid("strong mode needs aux_y")
    return aux.aux_y


def f_pre_sign(pp: PublicParams, advt: Advertisement, buyer_sk: SigningKey, m: bytes, X: bytes,
               y: Sequence[int], aux: AuxInfo = WEAK_AUX, rng=None, check_aux: bool = True) -> PreSignature:
    """``check_aux=False`` skips the aux re-check for callers that already ran it."""
    if pp.mode is Mode.STRONG and check_aux and not aux_verify(pp, advt, y, aux):
        raise AuxInvalid("aux does not match the advertisement")
    stmt = adaptor_statement(pp, advt, y, aux)
    return adaptor.pre_sign(buyer_sk, m, stmt, rng or make_rng())


def f_pre_verify(pp: PublicParams, advt: Advertisement, buyer_vk: VerifyingKey, m: bytes, X: bytes,
                 y: Sequence[int], aux: AuxInfo, pre_sig: PreSignature) -> bool:
    if not aux_verify(pp, advt, y, aux):
        return False
    try:
        stmt = adaptor_statement(pp, advt, y, aux)
    except AuxInvalid:
        return False
    return adaptor.pre_verify(buyer_vk, m, stmt, pre_sig)


def adapt(pp: PublicParams, advt: Advertisement, st: SellerState, buyer_vk: VerifyingKey, m: bytes,
          X: bytes, x: Sequence[int] | None, y: Sequence[int], aux: AuxInfo,
          pre_sig: PreSignature) -> Signature:
    """Complete the buyer's pre-signature with the functional key for ``y``.

    The key is recomputed from the seller state, so a buyer echoing a wrong
    ``pi_y`` gets :class:`PreSigInvalid`. When ``x`` is given the seller
    refuses (:class:`BoundExceeded`) to sell an inner product outside
    ``[0, B]``.
    """
    _check_vec(y, pp.ell, "y")
    if x is not None:
        _check_vec(x, pp.ell, "x")
        v = sum((a % ORDER) * (b % ORDER) for a, b in zip(x, y))
        if v > pp.bound:
            raise BoundExceeded(f"<x, y> = {v} exceeds the bound {pp.bound}")
    if pp.mode is Mode.STRONG and st.t is None:
        raise ModeError("strong-mode adapt needs the compiler coins t")
    sk = functional_key(pp, st, y)
    return adaptor.adapt(buyer_vk, m, base_mul(sk), sk, pre_sig)


def decrypt_vector(pp: PublicParams, y: Sequence[int], aux: AuxInfo) -> list[int]:
    _check_vec(y, pp.ell, "y")
    if pp.mode is Mode.WEAK:
        return list(y)
    if aux.pi_y is None:
        raise AuxInvalid("strong mode needs pi_y")
    return extended(y, aux.pi_y)


def precompute_ext(pp: PublicParams, advt: Advertisement, y: Sequence[int], aux: AuxInfo) -> Point:
    """Offline half of extraction; pass the result to :func:`f_ext` as ``ct1y``."""
    return ipfe.precompute_ct1y(advt.ct, decrypt_vector(pp, y, aux))


def f_ext(pp: PublicParams, advt: Advertisement, pre_sig: PreSignature, sig: Signature, X: bytes,
          y: Sequence[int], aux: AuxInfo, ct1y: Point | None = None) -> int:
    stmt = adaptor_statement(pp, advt, y, aux)
    z = adaptor.extract(pre_sig, sig, stmt)
    if z is None:
        raise ExtractFailed("signature does not open the adaptor statement")
    return ipfe.decrypt(z, advt.ct, decrypt_vector(pp, y, aux), pp.bound, ct1y)


__all__ = [
    "Mode", "PublicParams", "Advertisement", "SellerState", "AuxInfo", "WEAK_AUX",
    "setup", "ad_gen", "ad_verify", "aux_gen", "aux_verify", "f_pre_sign", "f_pre_verify",
    "adapt", "f_ext", "functional_key", "adaptor_statement", "precompute_ext", "extended",
    "nizk_statement", "decrypt_vector",
]
