"""Lightweight 16-bit-word stream cipher: eight chained keyed permutations with
feedback registers and an LFSR.

The construction processes one 16-bit word per step through eight keyed b16
stages.  A four-round initialization whitens eight nonce words into the state
registers; the ninth register holds an LFSR seeded from the last init output
with bit 7 forced to one.  Encryption chains modular additions, decryption
inverts the chain; both sides apply the identical state update so they stay in
lockstep.

Byte-stream container format ("EBK1"): 4-byte magic, 16-byte IV, ciphertext as
big-endian 16-bit words, and a 2-byte big-endian trailer giving the number of
meaningful bits in the final word (zero for an empty stream); sub-word tails
are zero-padded before encryption.
"""

from __future__ import annotations

import hashlib
from typing import Iterable, NamedTuple, Sequence

MASK16 = 0xFFFF

#: 4-bit S-box applied to each nibble (the PRESENT S-box).
SBOX = (0xC, 0x5, 0x6, 0xB, 0x9, 0x0, 0xA, 0xD, 0x3, 0xE, 0xF, 0x8, 0x4, 0x7, 0x1, 0x2)
SBOX_INV = tuple(SBOX.index(i) for i in range(16))


def _permute_bit(i: int) -> int:
    # wire permutation: bit i -> bit 4i mod 15, bit 15 fixed
    return (4 * i) % 15 if i < 15 else 15


def _build_tables():
    s_table = []
    for x in range(1 << 16):
        s_table.append(
            SBOX[x & 0xF]
            | (SBOX[(x >> 4) & 0xF] << 4)
            | (SBOX[(x >> 8) & 0xF] << 8)
            | (SBOX[(x >> 12) & 0xF] << 12)
        )
    perm_lo = [0] * 256
    perm_hi = [0] * 256
    for b in range(256):
        lo = hi = 0
        for i in range(8):
            if b >> i & 1:
                lo |= 1 << _permute_bit(i)
                hi |= 1 << _permute_bit(i + 8)
        perm_lo[b] = lo
        perm_hi[b] = hi
    sp_table = [perm_lo[v & 0xFF] | perm_hi[v >> 8] for v in s_table]
    inv_sp = [0] * (1 << 16)
    inv_s = [0] * (1 << 16)
    for x in range(1 << 16):
        inv_sp[sp_table[x]] = x
        inv_s[s_table[x]] = x
    return tuple(s_table), tuple(sp_table), tuple(inv_s), tuple(inv_sp)


_S, _SP, _INV_S, _INV_SP = _build_tables()


def _rotl16(v: int, r: int) -> int:
    return ((v << r) | (v >> (16 - r))) & MASK16 if r else v


def b16_encrypt(block: int, key: int) -> int:
    """Keyed 16-bit permutation: 4 SPN rounds, final round without the wire mix."""
    x = block & MASK16
    x = _SP[x] ^ key
    x = _SP[x] ^ _rotl16(key, 1)
    x = _SP[x] ^ _rotl16(key, 2)
    return _S[x] ^ _rotl16(key, 3)


def b16_decrypt(block: int, key: int) -> int:
    """Exact inverse of :func:`b16_encrypt` under the same key."""
    x = _INV_S[(block & MASK16) ^ _rotl16(key, 3)]
    x = _INV_SP[x ^ _rotl16(key, 2)]
    x = _INV_SP[x ^ _rotl16(key, 1)]
    return _INV_SP[x ^ key]


class SubKeys(NamedTuple):
    """Eight 16-bit stage keys, split big-endian from a 128-bit master key."""

    k1: int
    k2: int
    k3: int
    k4: int
    k5: int
    k6: int
    k7: int
    k8: int

    @classmethod
    def from_master_key(cls, key: bytes) -> "SubKeys":
        if len(key) != 16:
            raise ValueError("master key must be 16 bytes")
        return cls(*(int.from_bytes(key[i : i + 2], "big") for i in range(0, 16, 2)))


class CipherState(NamedTuple):
    """The nine-register machine state; produce only via init or a cipher step."""

    state1: int
    state2: int
    state3: int
    state4: int
    state5: int
    state6: int
    state7: int
    state8: int
    lfsr: int
    round_counter: int


def lfsr_step(lfsr: int) -> int:
    """One clock of the 16-bit Fibonacci LFSR with taps {16, 14, 13, 11}."""
    bit = (lfsr ^ (lfsr >> 2) ^ (lfsr >> 3) ^ (lfsr >> 5)) & 1
    return (lfsr >> 1) | (bit << 15)


def init(nonces: Sequence[int], keys: SubKeys) -> CipherState:
    """Four XOR-chained whitening rounds over eight nonce words.

    The LFSR register is the final round's last output with bit 7 forced high.
    """
    if len(nonces) != 8:
        raise ValueError("init requires exactly 8 nonce words")
    s1, s2, s3, s4, s5, s6, s7, s8 = (n & MASK16 for n in nonces)
    k1, k2, k3, k4, k5, k6, k7, k8 = keys
    out = 0
    for _ in range(4):
        v12 = b16_encrypt(((s1 ^ s3) ^ s5) ^ s7, k1)
        v23 = b16_encrypt(v12 ^ s2, k2)
        v34 = b16_encrypt(v23 ^ s3, k3)
        v45 = b16_encrypt(v34 ^ s4, k4)
        v56 = b16_encrypt(v45 ^ s5, k5)
        v67 = b16_encrypt(v56 ^ s6, k6)
        v78 = b16_encrypt(v67 ^ s7, k7)
        out = b16_encrypt(v78 ^ s8, k8)
        s1 ^= out
        s2 ^= v12
        s3 ^= v23
        s4 ^= v34
        s5 ^= v45
        s6 ^= v56
        s7 ^= v67
        s8 ^= v78
    return CipherState(s1, s2, s3, s4, s5, s6, s7, s8, out | 0x0080, 0)


def _update_states(s, v12, v23, v34, v45, v56, v67, v78, lfsr):
    s1, s2, s3, s4, s5, s6, s7, s8 = s
    n2 = (v12 + v56 + s6) & MASK16
    n4 = (v12 + v45 + s8) & MASK16
    n3 = (v23 + n4 + s1) & MASK16  # reads the fresh state4
    n5 = (v23 + lfsr) & MASK16
    n6 = (v12 + v45 + s7) & MASK16
    n7 = (v23 + v67) & MASK16
    n8 = v45
    n1 = (v34 + v23 + v78 + s5) & MASK16
    return n1, n2, n3, n4, n5, n6, n7, n8


def encrypt_word(state: CipherState, pt: int, keys: SubKeys) -> tuple[int, CipherState]:
    """Encrypt one word and advance the state."""
    s = state[:8]
    k1, k2, k3, k4, k5, k6, k7, k8 = keys
    v12 = b16_encrypt((pt + s[0]) & MASK16, k1)
    v23 = b16_encrypt((v12 + s[1]) & MASK16, k2)
    v34 = b16_encrypt((v23 + s[2]) & MASK16, k3)
    v45 = b16_encrypt((v34 + s[3]) & MASK16, k4)
    v56 = b16_encrypt((v45 + s[4]) & MASK16, k5)
    v67 = b16_encrypt((v56 + s[5]) & MASK16, k6)
    v78 = b16_encrypt((v67 + s[6]) & MASK16, k7)
    ct = b16_encrypt((v78 + s[7]) & MASK16, k8)
    lf = lfsr_step(state.lfsr)
    new = _update_states(s, v12, v23, v34, v45, v56, v67, v78, lf)
    return ct, CipherState(*new, lf, state.round_counter + 1)


def decrypt_word(state: CipherState, ct: int, keys: SubKeys) -> tuple[int, CipherState]:
    """Invert one word and apply the identical state update."""
    s = state[:8]
    k1, k2, k3, k4, k5, k6, k7, k8 = keys
    v78 = (b16_decrypt(ct, k8) - s[7]) & MASK16
    v67 = (b16_decrypt(v78, k7) - s[6]) & MASK16
    v56 = (b16_decrypt(v67, k6) - s[5]) & MASK16
    v45 = (b16_decrypt(v56, k5) - s[4]) & MASK16
    v34 = (b16_decrypt(v45, k4) - s[3]) & MASK16
    v23 = (b16_decrypt(v34, k3) - s[2]) & MASK16
    v12 = (b16_decrypt(v23, k2) - s[1]) & MASK16
    pt = (b16_decrypt(v12, k1) - s[0]) & MASK16
    lf = lfsr_step(state.lfsr)
    new = _update_states(s, v12, v23, v34, v45, v56, v67, v78, lf)
    return pt, CipherState(*new, lf, state.round_counter + 1)


def _split_iv(iv: bytes) -> tuple[int, ...]:
    if len(iv) != 16:
        raise ValueError("IV must be 16 bytes")
    return tuple(int.from_bytes(iv[i : i + 2], "big") for i in range(0, 16, 2))


def encrypt_stream(key: bytes, iv: bytes, words: Iterable[int]) -> list[int]:
    """Initialize from (key, IV) and encrypt a word sequence; length-preserving."""
    keys = SubKeys.from_master_key(key)
    state = init(_split_iv(iv), keys)
    k1, k2, k3, k4, k5, k6, k7, k8 = keys
    s1, s2, s3, s4, s5, s6, s7, s8 = state[:8]
    lf = state.lfsr
    out = []
    append = out.append
    for pt in words:
        v12 = b16_encrypt((pt + s1) & MASK16, k1)
        v23 = b16_encrypt((v12 + s2) & MASK16, k2)
        v34 = b16_encrypt((v23 + s3) & MASK16, k3)
        v45 = b16_encrypt((v34 + s4) & MASK16, k4)
        v56 = b16_encrypt((v45 + s5) & MASK16, k5)
        v67 = b16_encrypt((v56 + s6) & MASK16, k6)
        v78 = b16_encrypt((v67 + s7) & MASK16, k7)
        append(b16_encrypt((v78 + s8) & MASK16, k8))
        bit = (lf ^ (lf >> 2) ^ (lf >> 3) ^ (lf >> 5)) & 1
        lf = (lf >> 1) | (bit << 15)
        n4 = (v12 + v45 + s8) & MASK16
        s1, s2, s3, s4, s5, s6, s7, s8 = (
            (v34 + v23 + v78 + s5) & MASK16,
            (v12 + v56 + s6) & MASK16,
            (v23 + n4 + s1) & MASK16,
            n4,
            (v23 + lf) & MASK16,
            (v12 + v45 + s7) & MASK16,
            (v23 + v67) & MASK16,
            v45,
        )
    return out


def decrypt_stream(key: bytes, iv: bytes, words: Iterable[int]) -> list[int]:
    """Inverse of :func:`encrypt_stream` under the same (key, IV)."""
    keys = SubKeys.from_master_key(key)
    state = init(_split_iv(iv), keys)
    k1, k2, k3, k4, k5, k6, k7, k8 = keys
    s1, s2, s3, s4, s5, s6, s7, s8 = state[:8]
    lf = state.lfsr
    out = []
    append = out.append
    for ct in words:
        v78 = (b16_decrypt(ct, k8) - s8) & MASK16
        v67 = (b16_decrypt(v78, k7) - s7) & MASK16
        v56 = (b16_decrypt(v67, k6) - s6) & MASK16
        v45 = (b16_decrypt(v56, k5) - s5) & MASK16
        v34 = (b16_decrypt(v45, k4) - s4) & MASK16
        v23 = (b16_decrypt(v34, k3) - s3) & MASK16
        v12 = (b16_decrypt(v23, k2) - s2) & MASK16
        append((b16_decrypt(v12, k1) - s1) & MASK16)
        bit = (lf ^ (lf >> 2) ^ (lf >> 3) ^ (lf >> 5)) & 1
        lf = (lf >> 1) | (bit << 15)
        n4 = (v12 + v45 + s8) & MASK16
        s1, s2, s3, s4, s5, s6, s7, s8 = (
            (v34 + v23 + v78 + s5) & MASK16,
            (v12 + v56 + s6) & MASK16,
            (v23 + n4 + s1) & MASK16,
            n4,
            (v23 + lf) & MASK16,
            (v12 + v45 + s7) & MASK16,
            (v23 + v67) & MASK16,
            v45,
        )
    return out


MAGIC = b"EBK1"


def encrypt_bytes(key: bytes, iv: bytes, data: bytes) -> bytes:
    """Seal a byte string into an EBK1 container (zero-padded to whole words)."""
    tail_bits = 0 if not data else (16 if len(data) % 2 == 0 else 8)
    padded = data + b"\x00" * (len(data) % 2)
    words = [int.from_bytes(padded[i : i + 2], "big") for i in range(0, len(padded), 2)]
    ct = encrypt_stream(key, iv, words)
    body = b"".join(w.to_bytes(2, "big") for w in ct)
    return MAGIC + iv + body + tail_bits.to_bytes(2, "big")


def decrypt_bytes(key: bytes, container: bytes) -> bytes:
    """Open an EBK1 container back to the original byte string."""
    if len(container) < 22 or container[:4] != MAGIC:
        raise ValueError("not an EBK1 container")
    iv = container[4:20]
    body, trailer = container[20:-2], container[-2:]
    if len(body) % 2:
        raise ValueError("truncated EBK1 body")
    tail_bits = int.from_bytes(trailer, "big")
    words = [int.from_bytes(body[i : i + 2], "big") for i in range(0, len(body), 2)]
    pt = decrypt_stream(key, iv, words)
    raw = b"".join(w.to_bytes(2, "big") for w in pt)
    if tail_bits == 0:
        if words:
            raise ValueError("trailer claims empty stream but body is non-empty")
        return b""
    if tail_bits not in (8, 16) or not words:
        raise ValueError("invalid bit-length trailer")
    return raw[:-1] if tail_bits == 8 else raw


def key_confirmation_tag(key: bytes, iv: bytes) -> bytes:
    """8-byte tag proving knowledge of (key, IV) without revealing them."""
    return hashlib.sha256(b"EBK-CONFIRM" + key + iv).digest()[:8]
