"""Generic seal/sign plumbing used where the protocol treats crypto as opaque:
hybrid public-key encryption over G1 and ECDSA signatures (P-256, RFC 6979
deterministic nonces)."""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import Optional

import hashlib

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import hashes, serialization
from cryptography.hazmat.primitives.asymmetric import ec
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from . import algebra as alg

_KEM_TAG = b"HEEZ-KEM-v1"
_CURVE = ec.SECP256R1()
_P256_ORDER = 0xFFFFFFFF00000000FFFFFFFFFFFFFFFFBCE6FAADA7179E84F3B9CAC2FC632551


class SealError(Exception):
    pass


@dataclass(frozen=True)
class KemKeyPair:
    """ElGamal-style key-encapsulation pair over G1."""

    sk: int
    pk: alg.G1Element

    @classmethod
    def generate(cls, rng: Optional[Random] = None) -> "KemKeyPair":
        sk = alg.random_scalar(rng)
        return cls(sk, sk * alg.G1_GENERATOR)


def hybrid_encrypt(pk: alg.G1Element, plaintext: bytes, rng: Optional[Random] = None) -> bytes:
    """Encrypt to a G1 public key: fresh encapsulation point plus AES-GCM body."""
    eph = alg.random_scalar(rng)
    c1 = eph * alg.G1_GENERATOR
    shared = (eph * pk).serialize()
    key = hashlib.sha256(_KEM_TAG + shared).digest()
    body = AESGCM(key).encrypt(b"\x00" * 12, plaintext, None)
    return c1.serialize() + body


def hybrid_decrypt(sk: int, blob: bytes) -> bytes:
    if len(blob) < alg.G1_ENC_BYTES + 16:
        raise SealError("sealed blob too short")
    c1 = alg.G1Element.deserialize(blob[: alg.G1_ENC_BYTES])
    shared = (sk * c1).serialize()
    key = hashlib.sha256(_KEM_TAG + shared).digest()
    try:
        return AESGCM(key).decrypt(b"\x00" * 12, blob[alg.G1_ENC_BYTES :], None)
    except Exception as exc:  # cryptography raises its own InvalidTag
        raise SealError("seal integrity check failed") from exc


class EcdsaKeyPair:
    """Deterministic-nonce ECDSA over P-256 with compressed-point public keys."""

    def __init__(self, private_key: ec.EllipticCurvePrivateKey):
        self._key = private_key
        self.public_bytes = self._key.public_key().public_bytes(
            serialization.Encoding.X962, serialization.PublicFormat.CompressedPoint
        )

    @classmethod
    def generate(cls, rng: Optional[Random] = None) -> "EcdsaKeyPair":
        if rng is None:
            return cls(ec.generate_private_key(_CURVE))
        secret = rng.randrange(1, _P256_ORDER)
        return cls(ec.derive_private_key(secret, _CURVE))

    def sign(self, data: bytes) -> bytes:
        return self._key.sign(data, ec.ECDSA(hashes.SHA256(), deterministic_signing=True))


def ecdsa_verify(public_bytes: bytes, signature: bytes, data: bytes) -> bool:
    try:
        pub = ec.EllipticCurvePublicKey.from_encoded_point(_CURVE, public_bytes)
        pub.verify(signature, data, ec.ECDSA(hashes.SHA256()))
        return True
    except (InvalidSignature, ValueError):
        return False
