"""Algebraic substrate: pairing-friendly groups, hashing into them, and randomness.

All protocol layers are written against :class:`SystemParams` and the element
wrappers below, so the concrete curve (a 254-bit Barreto-Naehrig curve at the
~128-bit level) stays swappable behind this module.

Canonical encodings, used everywhere communication cost is accounted:
  G1 element -- 33 bytes: flag byte (0x00 identity / 0x02 even y / 0x03 odd y)
                followed by the 32-byte big-endian x coordinate.
  G2 element -- 65 bytes: flag byte followed by both 32-byte coordinates of x.
  Scalar     -- 32 bytes big-endian.
"""

from __future__ import annotations

import hashlib
import secrets
from dataclasses import dataclass, field
from random import Random
from typing import Iterable, Sequence, TypeAlias, Union

from gmpy2 import invert, mpz

from . import _bn254 as _bn

Scalar: TypeAlias = int

#: Prime order of G1, G2 and GT.
GROUP_ORDER: int = int(_bn.R)

G1_ENC_BYTES = 33
G2_ENC_BYTES = 65
SCALAR_ENC_BYTES = 32

_H2G_TAG = b"HEEZ-H2G-v1"
_H2S_TAG = b"HEEZ-H2S-v1"

_pairing_ops = 0


class InvalidElementError(ValueError):
    """Raised when bytes or coordinates do not describe a valid group element."""


def pairing_op_count() -> int:
    """Number of Miller-loop evaluations since the last reset (benchmark hook)."""
    return _pairing_ops


def reset_pairing_op_count() -> None:
    global _pairing_ops
    _pairing_ops = 0


class G1Element:
    """Immutable point in the order-q group G1 (additive notation)."""

    __slots__ = ("_pt",)

    def __init__(self, pt):
        self._pt = pt

    def __add__(self, other: "G1Element") -> "G1Element":
        return G1Element(_bn.g1_add(self._pt, other._pt))

    def __sub__(self, other: "G1Element") -> "G1Element":
        return G1Element(_bn.g1_add(self._pt, _bn.g1_neg(other._pt)))

    def __neg__(self) -> "G1Element":
        return G1Element(_bn.g1_neg(self._pt))

    def __rmul__(self, n: int) -> "G1Element":
        return G1Element(_bn.g1_mul(self._pt, n))

    __mul__ = __rmul__

    def __eq__(self, other) -> bool:
        return isinstance(other, G1Element) and self._pt == other._pt

    def __hash__(self) -> int:
        return hash(("G1", None if self._pt is None else (int(self._pt[0]), int(self._pt[1]))))

    def __repr__(self) -> str:
        return f"G1Element({self.serialize().hex()})"

    def is_identity(self) -> bool:
        return self._pt is None

    def is_valid(self) -> bool:
        """Full membership check (curve equation; the G1 cofactor is one)."""
        return _bn.g1_is_on_curve(self._pt)

    def serialize(self) -> bytes:
        if self._pt is None:
            return b"\x00" * G1_ENC_BYTES
        x, y = self._pt
        flag = 0x03 if y & 1 else 0x02
        return bytes([flag]) + int(x).to_bytes(32, "big")

    @classmethod
    def deserialize(cls, data: bytes) -> "G1Element":
        if len(data) != G1_ENC_BYTES:
            raise InvalidElementError(f"G1 encoding must be {G1_ENC_BYTES} bytes")
        flag = data[0]
        if flag == 0x00:
            if any(data[1:]):
                raise InvalidElementError("nonzero payload on identity flag")
            return cls(None)
        if flag not in (0x02, 0x03):
            raise InvalidElementError("bad G1 flag byte")
        x = mpz(int.from_bytes(data[1:], "big"))
        if x >= _bn.P:
            raise InvalidElementError("G1 x coordinate out of range")
        y = _bn.fp_sqrt((x * x * x + _bn.B1) % _bn.P)
        if y is None:
            raise InvalidElementError("G1 x coordinate not on curve")
        if (y & 1) != (flag == 0x03):
            y = (-y) % _bn.P
        return cls((x, y))


class G2Element:
    """Immutable point in the order-q group G2 (additive notation)."""

    __slots__ = ("_pt",)

    def __init__(self, pt):
        self._pt = pt

    def __add__(self, other: "G2Element") -> "G2Element":
        return G2Element(_bn.g2_add(self._pt, other._pt))

    def __sub__(self, other: "G2Element") -> "G2Element":
        return G2Element(_bn.g2_add(self._pt, _bn.g2_neg(other._pt)))

    def __neg__(self) -> "G2Element":
        return G2Element(_bn.g2_neg(self._pt))

    def __rmul__(self, n: int) -> "G2Element":
        return G2Element(_bn.g2_mul(self._pt, n))

    __mul__ = __rmul__

    def __eq__(self, other) -> bool:
        return isinstance(other, G2Element) and self._pt == other._pt

    def __hash__(self) -> int:
        if self._pt is None:
            return hash(("G2", None))
        (x0, x1), (y0, y1) = self._pt
        return hash(("G2", int(x0), int(x1), int(y0), int(y1)))

    def __repr__(self) -> str:
        return f"G2Element({self.serialize().hex()})"

    def is_identity(self) -> bool:
        return self._pt is None

    def is_on_curve(self) -> bool:
        return _bn.g2_is_on_curve(self._pt)

    def is_valid(self) -> bool:
        """Full membership check: twist equation plus order-q subgroup test."""
        return _bn.g2_in_subgroup(self._pt)

    def serialize(self) -> bytes:
        if self._pt is None:
            return b"\x00" * G2_ENC_BYTES
        (x0, x1), (y0, y1) = self._pt
        parity = (y0 if y0 != 0 else y1) & 1
        flag = 0x03 if parity else 0x02
        return bytes([flag]) + int(x0).to_bytes(32, "big") + int(x1).to_bytes(32, "big")

    @classmethod
    def deserialize(cls, data: bytes) -> "G2Element":
        if len(data) != G2_ENC_BYTES:
            raise InvalidElementError(f"G2 encoding must be {G2_ENC_BYTES} bytes")
        flag = data[0]
        if flag == 0x00:
            if any(data[1:]):
                raise InvalidElementError("nonzero payload on identity flag")
            return cls(None)
        if flag not in (0x02, 0x03):
            raise InvalidElementError("bad G2 flag byte")
        x = (mpz(int.from_bytes(data[1:33], "big")), mpz(int.from_bytes(data[33:], "big")))
        if x[0] >= _bn.P or x[1] >= _bn.P:
            raise InvalidElementError("G2 x coordinate out of range")
        rhs = _bn.fq2_add(_bn.fq2_mul(_bn.fq2_sqr(x), x), _bn.B2)
        y = _bn.fq2_sqrt(rhs)
        if y is None:
            raise InvalidElementError("G2 x coordinate not on twist")
        parity = (y[0] if y[0] != 0 else y[1]) & 1
        if parity != (flag == 0x03):
            y = _bn.fq2_neg(y)
        return cls((x, y))


class GTElement:
    """Element of the multiplicative target group GT."""

    __slots__ = ("_val",)

    def __init__(self, val):
        self._val = val

    def __mul__(self, other: "GTElement") -> "GTElement":
        return GTElement(_bn.fq12_mul(self._val, other._val))

    def __pow__(self, e: int) -> "GTElement":
        return GTElement(_bn.fq12_pow(self._val, e % GROUP_ORDER))

    def __eq__(self, other) -> bool:
        return isinstance(other, GTElement) and self._val == other._val

    def __hash__(self) -> int:
        return hash(("GT", self.serialize()))

    def __repr__(self) -> str:
        return f"GTElement({hashlib.sha256(self.serialize()).hexdigest()[:16]}...)"

    def inverse(self) -> "GTElement":
        return GTElement(_bn.fq12_inv(self._val))

    def is_identity(self) -> bool:
        return self._val == _bn.FQ12_ONE

    def serialize(self) -> bytes:
        out = bytearray()
        for c in _bn._fq12_to_coeffs(self._val):
            out += int(c[0]).to_bytes(32, "big") + int(c[1]).to_bytes(32, "big")
        return bytes(out)


#: Generator of G1 (the paper-facing base point P).
G1_GENERATOR = G1Element(_bn.G1_GEN)
#: Generator of G2 (the paper-facing base point g).
G2_GENERATOR = G2Element(_bn.G2_GEN)
#: Identity elements.
G1_IDENTITY = G1Element(None)
G2_IDENTITY = G2Element(None)
GT_IDENTITY = GTElement(_bn.FQ12_ONE)


def pairing(a: G1Element, b: G2Element) -> GTElement:
    """Bilinear map e: G1 x G2 -> GT.

    Raises :class:`InvalidElementError` if either input fails its membership
    check (for G2 the cheap curve test; ``is_valid`` offers the full subgroup
    test for untrusted deserialized points).
    """
    global _pairing_ops
    if not a.is_valid():
        raise InvalidElementError("left pairing input not in G1")
    if not b.is_on_curve():
        raise InvalidElementError("right pairing input not on the G2 twist")
    _pairing_ops += 1
    return GTElement(_bn.pairing(a._pt, b._pt))


def pairing_check(pairs: Sequence[tuple[G1Element, G2Element]]) -> bool:
    """True iff the product of e(a_i, b_i) over all pairs is the GT identity.

    One shared final exponentiation; this is the cheap way to test equality of
    two pairings: e(a, b) == e(c, d)  <=>  pairing_check([(a, b), (-c, d)]).
    """
    global _pairing_ops
    raw = []
    for a, b in pairs:
        if not a.is_valid():
            raise InvalidElementError("left pairing input not in G1")
        if not b.is_on_curve():
            raise InvalidElementError("right pairing input not on the G2 twist")
        raw.append((a._pt, b._pt))
    _pairing_ops += len(raw)
    return _bn.pairing_check(raw)


def g1_multi_sum(points: Iterable[G1Element], scalars: Iterable[int]) -> G1Element:
    """sum(s_i * P_i) computed jointly (much faster than term-by-term)."""
    return G1Element(_bn.g1_msm([p._pt for p in points], list(scalars)))


class G1FixedBase:
    """Precomputed window table for many multiplications of one G1 base."""

    def __init__(self, base: G1Element):
        if base.is_identity():
            raise InvalidElementError("fixed-base table needs a non-identity point")
        self._table = _bn.G1WindowTable(base._pt)
        self.base = base

    def mul(self, n: int) -> G1Element:
        return G1Element(self._table.mul(n))


def hash_to_group(data: bytes) -> G1Element:
    """Deterministic map {0,1}* -> G1 via try-and-increment, never the identity."""
    for ctr in range(2**32):
        digest = hashlib.sha256(_H2G_TAG + ctr.to_bytes(4, "big") + data).digest()
        x = mpz(int.from_bytes(digest, "big") % _bn.P)
        y = _bn.fp_sqrt((x * x * x + _bn.B1) % _bn.P)
        if y is not None:
            if (y & 1) != (digest[0] & 1):
                y = (-y) % _bn.P
            return G1Element((x, y))
    raise RuntimeError("unreachable: no curve point found")


def hash_to_scalar(pt: G1Element) -> Scalar:
    """Deterministic map G1 -> Z_q*, via a digest of the canonical encoding."""
    v = int.from_bytes(hashlib.sha256(_H2S_TAG + pt.serialize()).digest(), "big") % GROUP_ORDER
    return v if v != 0 else 1


def hash_bytes_to_scalar(data: bytes, tag: bytes = b"HEEZ-B2S-v1") -> Scalar:
    """Companion map for byte strings, same reduction rule as hash_to_scalar."""
    v = int.from_bytes(hashlib.sha256(tag + data).digest(), "big") % GROUP_ORDER
    return v if v != 0 else 1


def random_scalar(rng: Union[Random, None] = None) -> Scalar:
    """Uniform element of Z_q* by rejection sampling; seeded via an explicit Random."""
    nbits = GROUP_ORDER.bit_length()
    while True:
        v = rng.getrandbits(nbits) if rng is not None else secrets.randbits(nbits)
        if 1 <= v < GROUP_ORDER:
            return v


def scalar_inverse(a: Scalar) -> Scalar:
    """a^-1 mod q; raises ZeroDivisionError for a = 0 mod q."""
    return int(invert(a % GROUP_ORDER, _bn.R))


def encode_scalar(a: Scalar) -> bytes:
    return (a % GROUP_ORDER).to_bytes(SCALAR_ENC_BYTES, "big")


def decode_scalar(data: bytes) -> Scalar:
    if len(data) != SCALAR_ENC_BYTES:
        raise ValueError(f"scalar encoding must be {SCALAR_ENC_BYTES} bytes")
    return int.from_bytes(data, "big")


@dataclass(frozen=True)
class SystemParams:
    """Published cryptographic parameters every participant works against."""

    group1_descriptor: str
    group2_descriptor: str
    target_group_descriptor: str
    prime_order: int
    g1: G1Element
    g2: G2Element

    def pair(self, a: G1Element, b: G2Element) -> GTElement:
        return pairing(a, b)

    def hash_to_group(self, data: bytes) -> G1Element:
        return hash_to_group(data)

    def hash_to_scalar(self, pt: G1Element) -> Scalar:
        return hash_to_scalar(pt)

    def random_scalar(self, rng: Union[Random, None] = None) -> Scalar:
        return random_scalar(rng)


def system_params() -> SystemParams:
    """The published parameter set for the default curve."""
    return SystemParams(
        group1_descriptor="bn254-g1",
        group2_descriptor="bn254-g2",
        target_group_descriptor="bn254-gt",
        prime_order=GROUP_ORDER,
        g1=G1_GENERATOR,
        g2=G2_GENERATOR,
    )
