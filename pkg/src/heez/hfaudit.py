"""Storage and integrity auditing: block tagging under a per-file audit key,
off-chain delivery to the storage node, ledger anchoring, and the
challenge/proof/verify protocol with third-party auditors.

Files are split into near-equal logical blocks and further into segments of at
most 30 bytes so every segment doubles as a scalar below the group order.  A
segment's authentication tag is

    phi_i = x * (H(F_i) + F_i * u)

for the per-file secret x with public y = x * g and a random per-file base u.
An aggregate proof over challenged segments (sigma = sum nu_i phi_i,
mu = sum nu_i F_i) verifies through one pairing comparison,

    e(sigma, g) == e(sum nu_i H(F_i) + mu * u, y),

which follows from the tag equation by bilinearity: both sides equal
e(sum nu_i (H(F_i) + F_i u), g)^x.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from random import Random
from typing import Iterable, Optional, Sequence

from . import ledger as led
from . import sealing
from .algebra import (
    G1Element,
    G2Element,
    G2_GENERATOR,
    G1FixedBase,
    GROUP_ORDER,
    Scalar,
    SystemParams,
    g1_multi_sum,
    hash_to_group,
    pairing_check,
    random_scalar,
)

Q = GROUP_ORDER

#: Segments this size or smaller decode directly into scalars below q.
SEGMENT_BYTES = 30

#: Build a fixed-base table for u when a file has at least this many segments.
_WINDOW_THRESHOLD = 16


class AuditError(Exception):
    pass


class UnregisteredUserError(AuditError):
    pass


class HashMismatchError(AuditError):
    """A delivered block disagrees with its authentication tag."""


class MissingBlockError(AuditError):
    pass


class ChallengeRangeError(AuditError):
    pass


class LedgerRecordMissing(AuditError):
    pass


class InsufficientCandidatesError(AuditError):
    pass


# -- registration and setup -----------------------------------------------------


def register(participant_id: str, ca: led.CertificateAuthority, role: str = "user",
             public_keys: Optional[dict] = None, approved: bool = True) -> led.IdentityRecord:
    """Enroll a participant with the consortium CA (idempotent on repeats)."""
    return ca.register(participant_id, role, public_keys, approved)


@dataclass(frozen=True)
class AuditKeyPair:
    """Single-use audit keypair: secret x, public y = x * g."""

    x: Scalar
    y: G2Element


def setup(params: SystemParams, rng: Optional[Random] = None) -> AuditKeyPair:
    x = params.random_scalar(rng)
    return AuditKeyPair(x, x * params.g2)


# -- file splitting ---------------------------------------------------------------


@dataclass(frozen=True)
class FileBlocks:
    """Logical blocks plus the flat list of scalar-sized segments they map to."""

    chunks: tuple          # logical blocks, near-equal byte lengths
    segments: tuple        # flat <=30-byte pieces; the auditable units
    scalars: tuple         # big-endian integer value of each segment
    block_spans: tuple     # (start, end) segment range of each logical block

    @property
    def n_blocks(self) -> int:
        return len(self.chunks)

    @property
    def n_segments(self) -> int:
        return len(self.segments)

    def join(self) -> bytes:
        return b"".join(self.chunks)


def split_file(data: bytes, n: int) -> FileBlocks:
    """Split into n near-equal blocks, sub-chunked to scalar-sized segments."""
    if not data:
        raise AuditError("cannot split an empty file")
    if n < 1:
        raise AuditError("block count must be at least 1")
    base, extra = divmod(len(data), n)
    chunks = []
    pos = 0
    for i in range(n):
        size = base + (1 if i < extra else 0)
        chunks.append(data[pos : pos + size])
        pos += size
    segments, spans = [], []
    for chunk in chunks:
        start = len(segments)
        if chunk:
            for j in range(0, len(chunk), SEGMENT_BYTES):
                segments.append(chunk[j : j + SEGMENT_BYTES])
        else:
            segments.append(b"")  # keep one auditable unit per block
        spans.append((start, len(segments)))
    scalars = tuple(int.from_bytes(seg, "big") for seg in segments)
    return FileBlocks(tuple(chunks), tuple(segments), scalars, tuple(spans))


# -- tags ---------------------------------------------------------------------


@dataclass(frozen=True)
class BlockTagSet:
    tags: tuple      # one G1 tag per segment
    u: G1Element     # per-file random base
    y: G2Element     # audit public key the tags verify against


def gen_tags(blocks: FileBlocks, keys: AuditKeyPair, u: G1Element) -> BlockTagSet:
    """phi_i = x * (H(F_i) + F_i * u) for every segment."""
    x = keys.x
    u_table = G1FixedBase(u) if blocks.n_segments >= _WINDOW_THRESHOLD else None
    tags = []
    for seg, f_i in zip(blocks.segments, blocks.scalars):
        h_term = x * hash_to_group(seg)
        exp = (x * f_i) % Q
        u_term = u_table.mul(exp) if u_table else exp * u
        tags.append(h_term + u_term)
    return BlockTagSet(tuple(tags), u, keys.y)


def tag_identity_holds(seg: bytes, f_i: int, tag: G1Element, u: G1Element,
                       y: G2Element) -> bool:
    """Per-segment check e(phi_i, g) == e(H(F_i) + F_i u, y)."""
    return pairing_check([(tag, G2_GENERATOR), (-(hash_to_group(seg) + f_i * u), y)])


# -- delivery and storage --------------------------------------------------------


@dataclass(frozen=True)
class DeliveryMessage:
    """Off-chain transfer to the storage node.

    The owner's identity and the tag base u travel sealed to the node's public
    key; (g || u) is signed under the owner's registered signature key."""

    tags: BlockTagSet
    blocks: FileBlocks
    n: int
    y: G2Element
    sealed_owner: bytes     # {ID, u} under the node's KEM key
    owner_signature: bytes  # ECDSA over g || u under the owner's key


def make_delivery(owner_id: str, blocks: FileBlocks, tags: BlockTagSet,
                  keys: AuditKeyPair, cspt_kem_pk: G1Element,
                  owner_sign: sealing.EcdsaKeyPair,
                  rng: Optional[Random] = None) -> DeliveryMessage:
    ident = owner_id.encode() + b"\x00" + tags.u.serialize()
    sealed = sealing.hybrid_encrypt(cspt_kem_pk, ident, rng)
    signed = owner_sign.sign(G2_GENERATOR.serialize() + tags.u.serialize())
    return DeliveryMessage(tags, blocks, blocks.n_blocks, keys.y, sealed, signed)


@dataclass
class StorageRecord:
    """Node-local entry: owner, file, audit keypair for this engagement, tx id."""

    owner_id: str
    blocks: FileBlocks
    c_mpk: G1Element
    c_msk: Scalar
    ic_m: int
    tags: BlockTagSet


@dataclass
class CsptNode:
    """Combined cloud/IoT storage provider wired to the audit channel."""

    node_id: str
    kem: sealing.KemKeyPair
    ledger: led.Ledger
    audit_channel: str
    records: dict = field(default_factory=dict)  # ic_m -> StorageRecord

    def record_for(self, ic_m: int) -> StorageRecord:
        try:
            return self.records[ic_m]
        except KeyError:
            raise MissingBlockError(f"no storage record for transaction {ic_m}") from None


def _batch_coefficients(delivery: DeliveryMessage, count: int) -> list:
    seed = hashlib.sha256(b"HEEZ-STORE-BATCH" + delivery.sealed_owner).digest()
    return [
        int.from_bytes(hashlib.sha256(seed + i.to_bytes(4, "big")).digest()[:16], "big") | 1
        for i in range(count)
    ]


def store(delivery: DeliveryMessage, cspt: CsptNode,
          rng: Optional[Random] = None) -> tuple[int, StorageRecord]:
    """Validate a delivery, anchor it on the audit channel, and keep it locally.

    Validation recomputes every segment hash and checks the batched tag
    identity; a single corrupted block makes the batch equation fail.
    """
    ident = sealing.hybrid_decrypt(cspt.kem.sk, delivery.sealed_owner)
    owner_id, _, u_bytes = ident.partition(b"\x00")
    owner = owner_id.decode()
    if not cspt.ledger.registry.is_registered(owner):
        raise UnregisteredUserError(f"sender {owner!r} is not registered")
    u = G1Element.deserialize(u_bytes)
    owner_keys = cspt.ledger.registry.get(owner).public_keys
    if "ecdsa" in owner_keys and not sealing.ecdsa_verify(
            owner_keys["ecdsa"], delivery.owner_signature,
            G2_GENERATOR.serialize() + u.serialize()):
        raise AuditError("owner signature over (g || u) does not verify")

    blocks, tags = delivery.blocks, delivery.tags
    if len(tags.tags) != blocks.n_segments:
        raise HashMismatchError("tag count does not match segment count")
    hashes = [hash_to_group(seg) for seg in blocks.segments]
    rho = _batch_coefficients(delivery, blocks.n_segments)
    lhs = g1_multi_sum(tags.tags, rho)
    h_part = g1_multi_sum(hashes, rho)
    mu = sum(r_i * f_i for r_i, f_i in zip(rho, blocks.scalars)) % Q
    rhs = h_part + mu * u
    if not pairing_check([(lhs, G2_GENERATOR), (-rhs, delivery.y)]):
        raise HashMismatchError("recomputed segment hashes disagree with the tags")

    c_pair = sealing.KemKeyPair.generate(rng)
    owner_kem_pk = owner_keys.get("kem")
    sealed_c_mpk = (
        sealing.hybrid_encrypt(G1Element.deserialize(owner_kem_pk), c_pair.pk.serialize(), rng)
        if owner_kem_pk is not None else c_pair.pk.serialize()
    )
    payload = encode_storage_announcement(hashes, blocks.n_blocks, delivery.y, u, sealed_c_mpk)
    ic_m = cspt.ledger.submit(cspt.audit_channel, cspt.node_id, payload,
                              record_type="storage-announcement")
    record = StorageRecord(owner, blocks, c_pair.pk, c_pair.sk, ic_m, tags)
    cspt.records[ic_m] = record
    return ic_m, record


def encode_storage_announcement(hashes: Sequence[G1Element], n_blocks: int,
                                y: G2Element, u: G1Element, sealed_c_mpk: bytes) -> bytes:
    out = len(hashes).to_bytes(4, "big") + n_blocks.to_bytes(4, "big")
    out += y.serialize() + u.serialize()
    out += len(sealed_c_mpk).to_bytes(2, "big") + sealed_c_mpk
    for h in hashes:
        out += h.serialize()
    return out


@dataclass(frozen=True)
class PublicAuditData:
    """The verifier's view, reconstructed from the ledger record."""

    block_hashes: tuple
    n_blocks: int
    y: G2Element
    u: G1Element


def decode_storage_announcement(payload: bytes) -> PublicAuditData:
    n_seg = int.from_bytes(payload[0:4], "big")
    n_blocks = int.from_bytes(payload[4:8], "big")
    pos = 8
    y = G2Element.deserialize(payload[pos : pos + 65]); pos += 65
    u = G1Element.deserialize(payload[pos : pos + 33]); pos += 33
    sealed_len = int.from_bytes(payload[pos : pos + 2], "big"); pos += 2 + sealed_len
    hashes = []
    for _ in range(n_seg):
        hashes.append(G1Element.deserialize(payload[pos : pos + 33])); pos += 33
    return PublicAuditData(tuple(hashes), n_blocks, y, u)


def load_public_audit_data(ledger: led.Ledger, channel: str, caller: str,
                           ic_m: int) -> PublicAuditData:
    for tx in ledger.query(channel, caller):
        if tx.tx_id == ic_m and tx.record_type == "storage-announcement":
            return decode_storage_announcement(tx.payload)
    raise LedgerRecordMissing(f"no storage announcement with id {ic_m}")


# -- challenge / proof / verify ----------------------------------------------------


@dataclass(frozen=True)
class AuditChallenge:
    m: int
    indices: tuple          # distinct segment indices, derivation order
    coefficients: tuple     # nu_i in Z_q*
    tpa_nonces: dict        # fresh per-TPA nonce bytes
    sd_bl: bytes
    sd_ra: bytes
    iu_m: Optional[int] = None  # ledger id once the challenge is recorded


def _prf_stream(seed: bytes, label: bytes):
    counter = 0
    while True:
        yield hashlib.sha256(label + seed + counter.to_bytes(8, "big")).digest()
        counter += 1


def gen_challenge(m: int, n_segments: int, sd_bl: bytes, sd_ra: bytes,
                  tpa_set: Sequence[str] = ()) -> AuditChallenge:
    """Deterministic challenge: indices from sd_bl, coefficients from sd_ra."""
    if not 1 <= m <= n_segments:
        raise ChallengeRangeError(f"M must satisfy 1 <= M <= {n_segments}, got {m}")
    indices, seen = [], set()
    for block in _prf_stream(sd_bl, b"HEEZ-CHAL-BL"):
        idx = int.from_bytes(block[:8], "big") % n_segments
        if idx not in seen:
            seen.add(idx)
            indices.append(idx)
            if len(indices) == m:
                break
    coefficients = []
    for block in _prf_stream(sd_ra, b"HEEZ-CHAL-RA"):
        v = int.from_bytes(block, "big") % Q
        if v != 0:
            coefficients.append(v)
            if len(coefficients) == m:
                break
    nonces = {
        tpa: hashlib.sha256(b"HEEZ-CHAL-NONCE" + sd_ra + tpa.encode()).digest()[:16]
        for tpa in tpa_set
    }
    return AuditChallenge(m, tuple(indices), tuple(coefficients), nonces, sd_bl, sd_ra)


@dataclass(frozen=True)
class AuditProof:
    sigma: G1Element   # sum nu_i * phi_i
    mu: Scalar         # sum nu_i * F_i mod q


def gen_proof(challenge: AuditChallenge, blocks: FileBlocks, tags: BlockTagSet) -> AuditProof:
    """Aggregate the challenged segments and their tags."""
    try:
        challenged_tags = [tags.tags[i] for i in challenge.indices]
        challenged_scalars = [blocks.scalars[i] for i in challenge.indices]
    except IndexError:
        raise MissingBlockError("challenge indexes a segment the prover does not hold") from None
    sigma = g1_multi_sum(challenged_tags, challenge.coefficients)
    mu = sum(nu * f for nu, f in zip(challenge.coefficients, challenged_scalars)) % Q
    return AuditProof(sigma, mu)


def verify_proof(challenge: AuditChallenge, proof: AuditProof,
                 public: PublicAuditData) -> bool:
    """e(sigma, g) == e(sum nu_i H(F_i) + mu u, y)."""
    try:
        hashes = [public.block_hashes[i] for i in challenge.indices]
    except IndexError:
        raise LedgerRecordMissing("challenge indexes a hash the ledger does not hold") from None
    rhs = g1_multi_sum(hashes, challenge.coefficients) + proof.mu * public.u
    return pairing_check([(proof.sigma, G2_GENERATOR), (-rhs, public.y)])


# -- auditor selection -------------------------------------------------------------


@dataclass
class AuditAssignment:
    """Selected auditors split between data-task and tag-task verification."""

    dt: tuple
    lt: tuple
    vo_dt: Optional[bool] = None
    vo_lt: Optional[bool] = None

    @property
    def selected(self) -> tuple:
        return self.dt + self.lt


def select_tpas(candidates: Sequence[str], mode: str, k: int,
                stats: Optional[dict] = None,
                neighbors: Optional[Sequence[str]] = None,
                rng: Optional[Random] = None) -> AuditAssignment:
    """Pick k auditors: by recorded latency under complete information, by
    uniform sampling from self-reported neighbors otherwise."""
    if len(candidates) < k:
        raise InsufficientCandidatesError(f"need {k} auditors, have {len(candidates)}")
    if mode == "complete":
        if stats is None:
            raise AuditError("complete mode needs recorded latency stats")
        chosen = sorted(candidates, key=lambda c: (stats.get(c, float("inf")), c))[:k]
    elif mode == "incomplete":
        pool = list(neighbors if neighbors is not None else candidates)
        if len(pool) < k:
            raise InsufficientCandidatesError("not enough self-reported neighbors")
        chosen = (rng or Random()).sample(pool, k)
    else:
        raise AuditError(f"unknown selection mode {mode!r}")
    return AuditAssignment(dt=tuple(chosen[0::2]), lt=tuple(chosen[1::2]))
