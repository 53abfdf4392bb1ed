"""Passphrase-sealed blobs for secrets at rest (scrypt + AES-256-GCM)."""
from __future__ import annotations

import os

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM
from cryptography.hazmat.primitives.kdf.scrypt import Scrypt

from .errors import FasError

MAGIC = b"FASK"
VERSION = 1
SALT_BYTES = 16
NONCE_BYTES = 12
SCRYPT_N = 2**15


class SealError(FasError):
    """Wrong passphrase or a tampered sealed file."""


def _key(passphrase: str, salt: bytes, n: int) -> bytes:
    return Scrypt(salt=salt, length=32, n=n, r=8, p=1).derive(passphrase.encode())


def seal(plaintext: bytes, passphrase: str, n: int = SCRYPT_N) -> bytes:
    salt, nonce = os.urandom(SALT_BYTES), os.urandom(NONCE_BYTES)
    log_n = n.bit_length() - 1
    header = MAGIC + bytes([VERSION, log_n]) + salt
    return header + nonce + AESGCM(_key(passphrase, salt, n)).encrypt(nonce, plaintext, header)


def unseal(blob: bytes, passphrase: str) -> bytes:
    hlen = len(MAGIC) + 2 + SALT_BYTES
    if len(blob) < hlen + NONCE_BYTES + 16 or blob[:4] != MAGIC or blob[4] != VERSION:
        raise SealError("not a sealed state file")
    log_n = blob[5]
    if not 10 <= log_n <= 20:
        raise SealError("unsupported key-derivation cost")
    header, salt = blob[:hlen], blob[6:hlen]
    nonce, body = blob[hlen:hlen + NONCE_BYTES], blob[hlen + NONCE_BYTES:]
    try:
        return AESGCM(_key(passphrase, salt, 1 << log_n)).decrypt(nonce, body, header)
    except InvalidTag:
        raise SealError("wrong passphrase or corrupted state file") from None
