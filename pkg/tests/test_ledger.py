"""Ledger tests: channel isolation, append-only replay, role gating, claims."""

import hashlib
import random

import pytest

from heez import ledger as led


def make_registry():
    ca = led.CertificateAuthority()
    ca.register("alice", "user")
    ca.register("bob", "user")
    ca.register("cspt-1", "CSPT")
    ca.register("tpa-1", "TPA")
    ca.register("boss", "admin")
    ca.register("iv-1", "IV")
    ca.register("cp-1", "CP")
    ca.register("sp-1", "SP")
    return ca


def make_ledger():
    ca = make_registry()
    ledger = led.Ledger(ca)
    everyone = ca.all_ids()
    ledger.create_channel("audit", everyone, anchor="cspt-1")
    ledger.create_channel("credential", everyone, anchor="boss")
    return ledger


def test_two_isolated_channels():
    ledger = make_ledger()
    a = ledger.submit("audit", "alice", b"store")
    c = ledger.submit("credential", "boss", b"cred")
    audit_ids = {tx.tx_id for tx in ledger.query("audit", "alice")}
    cred_ids = {tx.tx_id for tx in ledger.query("credential", "alice")}
    assert a in audit_ids and c in cred_ids
    assert audit_ids.isdisjoint(cred_ids)


def test_duplicate_channel_name_rejected():
    ledger = make_ledger()
    with pytest.raises(led.DuplicateChannelError):
        ledger.create_channel("audit", ["alice"], anchor="alice")


def test_fresh_channel_is_empty():
    ledger = make_ledger()
    assert ledger.query("audit", "bob") == []


def test_submit_ids_monotone():
    ledger = make_ledger()
    k = ledger.submit("audit", "alice", b"one")
    assert ledger.submit("audit", "alice", b"two") == k + 1


def test_non_participant_rejected():
    ledger = make_ledger()
    ledger.registry.register("mallory", "user")
    with pytest.raises(led.NonParticipantError):
        ledger.submit("audit", "mallory", b"x")
    with pytest.raises(led.NonParticipantError):
        ledger.query("audit", "mallory")


def test_tpa_record_role_matrix():
    ledger = make_ledger()
    accepted, rejected = [], []
    for who in ("alice", "bob", "cspt-1", "tpa-1", "iv-1", "cp-1", "sp-1", "boss"):
        try:
            ledger.submit("credential", who, b"tpa cred", record_type=led.TPA_CREDENTIAL_RECORD)
            accepted.append(who)
        except led.UnauthorizedWriteError:
            rejected.append(who)
    assert accepted == ["boss"]
    assert set(rejected) == {"alice", "bob", "cspt-1", "tpa-1", "iv-1", "cp-1", "sp-1"}
    # ordinary records are open to any participant
    ledger.submit("credential", "tpa-1", b"plain")


def test_query_order_and_predicate():
    ledger = make_ledger()
    for i in range(3):
        ledger.submit("audit", "alice" if i % 2 == 0 else "bob", bytes([i]))
    txs = ledger.query("audit", "bob")
    assert [tx.payload for tx in txs] == [b"\x00", b"\x01", b"\x02"]
    assert [tx.tx_id for tx in txs] == sorted(tx.tx_id for tx in txs)
    only_alice = ledger.query("audit", "bob", predicate=lambda tx: tx.submitter == "alice")
    assert all(tx.submitter == "alice" for tx in only_alice)
    assert len(only_alice) == 2


def test_cross_channel_isolation_fuzzed():
    ledger = make_ledger()
    rng = random.Random(616)
    for step in range(1000):
        name = rng.choice(["audit", "credential"])
        ledger.submit(name, rng.choice(["alice", "bob", "cspt-1"]), rng.randbytes(4))
        if step % 97 == 0 or step == 999:
            audit_ids = {tx.tx_id for tx in ledger.query("audit", "alice")}
            cred_ids = {tx.tx_id for tx in ledger.query("credential", "alice")}
            assert audit_ids.isdisjoint(cred_ids)
            assert all(tx.channel == "audit" for tx in ledger.query("audit", "alice"))
            assert all(tx.channel == "credential" for tx in ledger.query("credential", "alice"))


def test_replay_reconstructs_record_book_bit_exact():
    log = []
    rng = random.Random(17)
    ledger = make_ledger()
    for _ in range(50):
        name = rng.choice(["audit", "credential"])
        submitter = rng.choice(["alice", "bob", "boss"])
        payload = rng.randbytes(rng.randrange(0, 20))
        log.append((name, submitter, payload))
        ledger.submit(name, submitter, payload)
    replayed = make_ledger()
    for name, submitter, payload in log:
        replayed.submit(name, submitter, payload)
    for name in ("audit", "credential"):
        assert ledger.channel(name).record_book == replayed.channel(name).record_book


def test_export_import_round_trip():
    ledger = make_ledger()
    for i in range(5):
        ledger.submit("audit", "alice", bytes([i]) * 3)
        ledger.submit("credential", "boss", bytes([i]), record_type=led.TPA_CREDENTIAL_RECORD)
    dump = ledger.export_records()
    fresh = make_ledger()
    assert fresh.import_records(dump) == 10
    assert fresh.export_records() == dump
    for name in ("audit", "credential"):
        assert fresh.channel(name).record_book == ledger.channel(name).record_book


def test_binding_digest_checked_on_read():
    ledger = make_ledger()
    ledger.submit("audit", "alice", b"committed bytes")
    book = ledger.channel("audit").record_book
    tampered = led.LedgerTransaction(book[0].tx_id, "audit", "alice", b"different", book[0].timestamp)
    book[0] = tampered
    with pytest.raises(led.BindingError):
        ledger.query("audit", "alice")


def test_registration_idempotent():
    ca = led.CertificateAuthority()
    first = ca.register("zed", "user", {"pk": b"\x01"})
    second = ca.register("zed", "user", {"pk": b"\x01"})
    assert first is second
    assert ca.is_registered("zed")


def test_registration_not_approved():
    ca = led.CertificateAuthority()
    with pytest.raises(led.NotApprovedError):
        ca.register("shady", "user", approved=False)
    assert not ca.is_registered("shady")


def test_registration_unknown_role():
    ca = led.CertificateAuthority()
    with pytest.raises(led.LedgerError):
        ca.register("x", "overlord")


def test_identity_visible_to_peers():
    ca = make_registry()
    record = ca.get("alice")
    assert record.participant_id == "alice"
    assert "alice" in ca.all_ids()


def test_validate_identity_ranges():
    digest = hashlib.sha256(b"docs").digest()
    policy = led.IdentityPolicy(ranges={0: (18, 120), 1: (0, 1)})
    assert led.validate_identity(led.AttributeClaim((30, 1), digest), policy)
    assert not led.validate_identity(led.AttributeClaim((17, 1), digest), policy)
    assert not led.validate_identity(led.AttributeClaim((30,), digest), policy)  # missing attr


def test_validate_identity_empty_policy_accepts():
    digest = hashlib.sha256(b"docs").digest()
    assert led.validate_identity(led.AttributeClaim((), digest), led.IdentityPolicy())
    assert led.validate_identity(led.AttributeClaim((1, 2, 3), digest), led.IdentityPolicy())


def test_validate_identity_malformed():
    with pytest.raises(led.MalformedClaimError):
        led.validate_identity(led.AttributeClaim(("x",), hashlib.sha256(b"d").digest()),
                              led.IdentityPolicy())
    with pytest.raises(led.MalformedClaimError):
        led.validate_identity(led.AttributeClaim((1,), b"short"), led.IdentityPolicy())


def test_anchor_must_be_member():
    ledger = make_ledger()
    with pytest.raises(led.LedgerError):
        ledger.create_channel("side", ["alice"], anchor="bob")
