"""Simulated permissioned ledger and the credential-management layer.

An in-process single-sequencer stand-in for a consortium blockchain: isolated
channels with append-only record books, a certificate-authority registry with
admin approval, attribute validation for identity claims, and admin-gated
writes for third-party-auditor credential records.

Transaction ids are globally unique and monotonically increasing, so the id
sets of two channels are always disjoint.  Timestamps come from an injected
logical clock so runs replay deterministically.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

ROLES = frozenset({"user", "CSPT", "TPA", "IV", "CP", "SP", "admin"})

#: Record type whose submission is restricted to the admin role.
TPA_CREDENTIAL_RECORD = "tpa-credential"


class LedgerError(Exception):
    pass


class DuplicateChannelError(LedgerError):
    pass


class NonParticipantError(LedgerError):
    pass


class UnauthorizedWriteError(LedgerError):
    pass


class NotApprovedError(LedgerError):
    pass


class MalformedClaimError(LedgerError):
    pass


class BindingError(LedgerError):
    """A stored payload no longer matches its recorded digest."""


@dataclass(frozen=True)
class IdentityRecord:
    participant_id: str
    role: str
    public_keys: dict
    approved: bool = True


class CertificateAuthority:
    """Fabric-CA stand-in: enrolls participants and shares identities."""

    def __init__(self):
        self._records: dict[str, IdentityRecord] = {}

    def register(self, participant_id: str, role: str, public_keys: Optional[dict] = None,
                 approved: bool = True) -> IdentityRecord:
        """Enroll a participant; idempotent for an identical repeat registration."""
        if role not in ROLES:
            raise LedgerError(f"unknown role {role!r}")
        if not approved:
            raise NotApprovedError(f"registration of {participant_id!r} not approved")
        existing = self._records.get(participant_id)
        if existing is not None:
            return existing
        record = IdentityRecord(participant_id, role, dict(public_keys or {}), True)
        self._records[participant_id] = record
        return record

    def is_registered(self, participant_id: str) -> bool:
        return participant_id in self._records

    def get(self, participant_id: str) -> IdentityRecord:
        try:
            return self._records[participant_id]
        except KeyError:
            raise NonParticipantError(f"{participant_id!r} is not registered") from None

    def role_of(self, participant_id: str) -> str:
        return self.get(participant_id).role

    def all_ids(self) -> list[str]:
        return sorted(self._records)


@dataclass(frozen=True)
class LedgerTransaction:
    tx_id: int
    channel: str
    submitter: str
    payload: bytes
    timestamp: int
    record_type: str = "generic"

    @property
    def digest(self) -> bytes:
        return hashlib.sha256(self.payload).digest()


@dataclass
class Channel:
    """Isolated ledger partition with its own membership and record book."""

    name: str
    participants: frozenset
    anchor_node: str
    contract_module: str = ""
    record_book: list = field(default_factory=list)
    _digests: list = field(default_factory=list)

    def is_member(self, participant_id: str) -> bool:
        return participant_id in self.participants


class Ledger:
    """Single-sequencer append-only ledger over named channels."""

    def __init__(self, registry: CertificateAuthority, clock: Optional[Callable[[], int]] = None):
        self.registry = registry
        self._channels: dict[str, Channel] = {}
        self._next_id = 0
        if clock is None:
            counter = iter(range(10**18))
            clock = lambda: next(counter)
        self._clock = clock

    # -- channels ---------------------------------------------------------

    def create_channel(self, name: str, participants: Iterable[str], anchor: str,
                       contract_module: str = "") -> Channel:
        if name in self._channels:
            raise DuplicateChannelError(f"channel {name!r} already exists")
        members = frozenset(participants)
        for pid in members:
            self.registry.get(pid)  # must be registered
        if anchor not in members:
            raise LedgerError("anchor node must be a channel participant")
        channel = Channel(name=name, participants=members, anchor_node=anchor,
                          contract_module=contract_module)
        self._channels[name] = channel
        return channel

    def channel(self, name: str) -> Channel:
        try:
            return self._channels[name]
        except KeyError:
            raise LedgerError(f"no channel named {name!r}") from None

    def add_participant(self, name: str, participant_id: str) -> None:
        """Membership change, modeled as a channel reconfiguration."""
        self.registry.get(participant_id)
        ch = self.channel(name)
        ch.participants = ch.participants | {participant_id}

    # -- writes and reads ---------------------------------------------------

    def submit(self, channel_name: str, submitter: str, payload: bytes,
               record_type: str = "generic") -> int:
        """Append a transaction; returns its globally unique id."""
        channel = self.channel(channel_name)
        if not channel.is_member(submitter):
            raise NonParticipantError(f"{submitter!r} is not a participant of {channel_name!r}")
        if record_type == TPA_CREDENTIAL_RECORD and self.registry.role_of(submitter) != "admin":
            raise UnauthorizedWriteError("only the admin peer may submit TPA credential records")
        tx = LedgerTransaction(
            tx_id=self._next_id,
            channel=channel_name,
            submitter=submitter,
            payload=bytes(payload),
            timestamp=self._clock(),
            record_type=record_type,
        )
        self._next_id += 1
        channel.record_book.append(tx)
        channel._digests.append(tx.digest)
        return tx.tx_id

    def query(self, channel_name: str, caller: str, predicate=None) -> list:
        """Read-only view ordered by id, restricted to channel members."""
        channel = self.channel(channel_name)
        if not channel.is_member(caller):
            raise NonParticipantError(f"{caller!r} may not read channel {channel_name!r}")
        out = []
        for tx, digest in zip(channel.record_book, channel._digests):
            if hashlib.sha256(tx.payload).digest() != digest:
                raise BindingError(f"transaction {tx.tx_id} payload no longer matches its digest")
            if predicate is None or predicate(tx):
                out.append(tx)
        return out

    def get_transaction(self, channel_name: str, caller: str, tx_id: int) -> LedgerTransaction:
        for tx in self.query(channel_name, caller):
            if tx.tx_id == tx_id:
                return tx
        raise LedgerError(f"transaction {tx_id} not found on {channel_name!r}")

    # -- export / import ------------------------------------------------------

    def export_records(self) -> str:
        """Line-delimited dump: id, channel, submitter, record type, hex payload, timestamp."""
        lines = []
        for name in sorted(self._channels):
            for tx in self._channels[name].record_book:
                lines.append(
                    f"{tx.tx_id}\t{tx.channel}\t{tx.submitter}\t{tx.record_type}"
                    f"\t{tx.payload.hex()}\t{tx.timestamp}"
                )
        lines.sort(key=lambda line: int(line.split("\t", 1)[0]))
        return "\n".join(lines) + ("\n" if lines else "")

    def import_records(self, dump: str) -> int:
        """Load an exported dump verbatim into existing channels; returns count."""
        count = 0
        for line in dump.splitlines():
            if not line.strip():
                continue
            tx_id, channel_name, submitter, record_type, payload_hex, timestamp = line.split("\t")
            channel = self.channel(channel_name)
            tx = LedgerTransaction(
                tx_id=int(tx_id),
                channel=channel_name,
                submitter=submitter,
                payload=bytes.fromhex(payload_hex),
                timestamp=int(timestamp),
                record_type=record_type,
            )
            channel.record_book.append(tx)
            channel._digests.append(tx.digest)
            self._next_id = max(self._next_id, tx.tx_id + 1)
            count += 1
        return count


# -- identity validation -----------------------------------------------------


@dataclass(frozen=True)
class AttributeClaim:
    """Declared attribute values plus a digest of the supporting documents."""

    values: tuple
    documents_digest: bytes


@dataclass(frozen=True)
class IdentityPolicy:
    """Inclusive per-position value ranges; an empty policy accepts everything."""

    ranges: dict = field(default_factory=dict)


def validate_identity(claim: AttributeClaim, policy: IdentityPolicy) -> bool:
    """Deterministic acceptance predicate used by the identity validator."""
    if not isinstance(claim.values, tuple) or not all(isinstance(v, int) for v in claim.values):
        raise MalformedClaimError("claim values must be a tuple of integers")
    if not isinstance(claim.documents_digest, (bytes, bytearray)) or len(claim.documents_digest) != 32:
        raise MalformedClaimError("documents digest must be 32 bytes")
    for idx, (lo, hi) in policy.ranges.items():
        if idx >= len(claim.values) or not lo <= claim.values[idx] <= hi:
            return False
    return True
