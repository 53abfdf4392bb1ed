"""Functional adaptor signatures over secp256k1.

Sell inner products ``<x, y>`` of a committed vector against Schnorr
payments: the signature that pays the seller also hands the buyer the
functional key needed to decrypt exactly ``<x, y>``.
"""
from .protocol import (
    WEAK_AUX,
    Advertisement,
    AuxInfo,
    Mode,
    PublicParams,
    SellerState,
    ad_gen,
    ad_verify,
    adapt,
    aux_gen,
    aux_verify,
    f_ext,
    f_pre_sign,
    f_pre_verify,
    setup,
)

__version__ = "0.1.0"
