"""Audit protocol tests: tagging identities, storage validation, challenge
determinism, proof aggregation against a naive oracle, and soundness sweeps."""

import random

import pytest

from heez import algebra as alg
from heez import hfaudit as hf
from heez import ledger as led
from heez import sealing

Q = alg.GROUP_ORDER
PARAMS = alg.system_params()


@pytest.fixture()
def world():
    """Registry, ledger with an audit channel, and a storage node."""
    ca = led.CertificateAuthority()
    owner_sign = sealing.EcdsaKeyPair.generate(random.Random(1))
    owner_kem = sealing.KemKeyPair.generate(random.Random(2))
    hf.register("alice", ca, "user", {"ecdsa": owner_sign.public_bytes,
                                      "kem": owner_kem.pk.serialize()})
    hf.register("cspt-1", ca, "CSPT")
    hf.register("tpa-1", ca, "TPA")
    ledger = led.Ledger(ca)
    ledger.create_channel("audit", ["alice", "cspt-1", "tpa-1"], anchor="cspt-1")
    node = hf.CsptNode("cspt-1", sealing.KemKeyPair.generate(random.Random(3)),
                       ledger, "audit")
    return ca, ledger, node, owner_sign, owner_kem


def make_file(seed, size, n):
    rng = random.Random(seed)
    data = rng.randbytes(size)
    blocks = hf.split_file(data, n)
    keys = hf.setup(PARAMS, rng)
    u = alg.random_scalar(rng) * alg.G1_GENERATOR
    tags = hf.gen_tags(blocks, keys, u)
    return data, blocks, keys, u, tags


# -- registration ---------------------------------------------------------------


def test_register_approved_queryable(world):
    ca = world[0]
    rec = hf.register("newbie", ca, "user")
    assert ca.get("newbie") == rec


def test_register_unapproved_rejected(world):
    ca = world[0]
    with pytest.raises(led.NotApprovedError):
        hf.register("shady", ca, "user", approved=False)


def test_register_duplicate_idempotent(world):
    ca = world[0]
    first = hf.register("dup", ca, "user")
    assert hf.register("dup", ca, "user") is first


# -- setup -----------------------------------------------------------------------


def test_setup_public_key_definition():
    keys = hf.setup(PARAMS, random.Random(10))
    e = alg.pairing(alg.G1_GENERATOR, alg.G2_GENERATOR)
    assert alg.pairing(alg.G1_GENERATOR, keys.y) == e ** keys.x


def test_setup_keys_distinct():
    a = hf.setup(PARAMS, random.Random(11))
    b = hf.setup(PARAMS, random.Random(12))
    assert a.x != b.x
    assert 1 <= a.x < Q


# -- split_file --------------------------------------------------------------------


def test_split_single_block():
    blocks = hf.split_file(b"hello world", 1)
    assert blocks.chunks == (b"hello world",)
    assert blocks.join() == b"hello world"


def test_split_join_round_trip():
    rng = random.Random(13)
    for n in (2, 7, 16):
        data = rng.randbytes(rng.randrange(n, 400))
        assert hf.split_file(data, n).join() == data


def test_split_near_equal_sizes():
    blocks = hf.split_file(bytes(100), 4)
    assert [len(c) for c in blocks.chunks] == [25, 25, 25, 25]


def test_split_remainder_distribution():
    blocks = hf.split_file(bytes(10), 3)
    assert [len(c) for c in blocks.chunks] == [4, 3, 3]


def test_split_large_block_subchunked():
    data = bytes(range(100)) * 2  # 200 bytes, n=2 -> 100-byte chunks
    blocks = hf.split_file(data, 2)
    assert blocks.n_blocks == 2
    assert blocks.n_segments == 8  # 100 -> 30+30+30+10, twice
    assert all(len(s) <= hf.SEGMENT_BYTES for s in blocks.segments)
    assert blocks.block_spans == ((0, 4), (4, 8))
    assert all(s < Q for s in blocks.scalars)


def test_split_empty_file_rejected():
    with pytest.raises(hf.AuditError):
        hf.split_file(b"", 4)


# -- tags ------------------------------------------------------------------------


def test_tag_identity_every_segment():
    _, blocks, keys, u, tags = make_file(20, 90, 3)
    for seg, f_i, tag in zip(blocks.segments, blocks.scalars, tags.tags):
        assert hf.tag_identity_holds(seg, f_i, tag, u, keys.y)


def test_tag_identity_fails_on_modified_block():
    _, blocks, keys, u, tags = make_file(21, 90, 3)
    tampered = bytes([blocks.segments[0][0] ^ 1]) + blocks.segments[0][1:]
    f_i = int.from_bytes(tampered, "big")
    assert not hf.tag_identity_holds(tampered, f_i, tags.tags[0], u, keys.y)


def test_tags_match_independent_recomputation():
    _, blocks, keys, u, tags = make_file(22, 75, 3)
    assert len(tags.tags) == 3
    for seg, f_i, tag in zip(blocks.segments, blocks.scalars, tags.tags):
        # standalone oracle: two separate scalar multiplications, then add
        expected = keys.x * alg.hash_to_group(seg) + ((keys.x * f_i) % Q) * u
        assert tag == expected


def test_tags_windowed_path_matches_direct():
    # above the table threshold the fixed-base path must agree with direct muls
    _, blocks, keys, u, tags = make_file(23, 30 * 20, 20)
    assert blocks.n_segments >= hf._WINDOW_THRESHOLD
    idx = 17
    expected = keys.x * alg.hash_to_group(blocks.segments[idx]) \
        + ((keys.x * blocks.scalars[idx]) % Q) * u
    assert tags.tags[idx] == expected


# -- store -------------------------------------------------------------------------


def deliver(world, seed=30, size=90, n=3, owner="alice"):
    ca, ledger, node, owner_sign, owner_kem = world
    data, blocks, keys, u, tags = make_file(seed, size, n)
    delivery = hf.make_delivery(owner, blocks, tags, keys, node.kem.pk,
                                owner_sign, random.Random(seed))
    return data, blocks, keys, u, tags, delivery


def test_store_honest_delivery(world):
    ca, ledger, node, _, _ = world
    data, blocks, keys, u, tags, delivery = deliver(world)
    ic_m, record = hf.store(delivery, node, random.Random(31))
    assert record.owner_id == "alice"
    assert record.ic_m == ic_m
    txs = ledger.query("audit", "tpa-1")
    assert len(txs) == 1 and txs[0].tx_id == ic_m
    public = hf.decode_storage_announcement(txs[0].payload)
    assert len(public.block_hashes) == blocks.n_segments
    assert public.block_hashes == tuple(alg.hash_to_group(s) for s in blocks.segments)
    assert public.y == keys.y and public.u == u


def test_store_unregistered_sender(world):
    ca, ledger, node, owner_sign, _ = world
    data, blocks, keys, u, tags = make_file(32, 60, 2)
    delivery = hf.make_delivery("ghost", blocks, tags, keys, node.kem.pk,
                                owner_sign, random.Random(32))
    with pytest.raises(hf.UnregisteredUserError):
        hf.store(delivery, node)


def test_store_corrupted_block_hash_mismatch(world):
    ca, ledger, node, owner_sign, _ = world
    data, blocks, keys, u, tags, delivery = deliver(world, seed=33)
    bad_seg = bytes([blocks.segments[1][0] ^ 0x80]) + blocks.segments[1][1:]
    segments = list(blocks.segments)
    segments[1] = bad_seg
    scalars = list(blocks.scalars)
    scalars[1] = int.from_bytes(bad_seg, "big")
    corrupted = hf.FileBlocks(blocks.chunks, tuple(segments), tuple(scalars), blocks.block_spans)
    bad_delivery = hf.DeliveryMessage(tags, corrupted, delivery.n, delivery.y,
                                      delivery.sealed_owner, delivery.owner_signature)
    with pytest.raises(hf.HashMismatchError):
        hf.store(bad_delivery, node)


def test_storage_announcement_codec_round_trip(world):
    _, blocks, keys, u, tags = make_file(34, 100, 4)
    hashes = [alg.hash_to_group(s) for s in blocks.segments]
    payload = hf.encode_storage_announcement(hashes, 4, keys.y, u, b"sealed")
    public = hf.decode_storage_announcement(payload)
    assert public.block_hashes == tuple(hashes)
    assert public.n_blocks == 4 and public.y == keys.y and public.u == u


def test_load_public_audit_data_missing(world):
    ca, ledger, node, _, _ = world
    with pytest.raises(hf.LedgerRecordMissing):
        hf.load_public_audit_data(ledger, "audit", "tpa-1", 999)


# -- challenges -----------------------------------------------------------------


def test_challenge_all_blocks():
    ch = hf.gen_challenge(16, 16, b"a", b"b")
    assert sorted(ch.indices) == list(range(16))


def test_challenge_deterministic():
    a = hf.gen_challenge(8, 16, b"\x07", b"\x07", ("tpa-1",))
    b = hf.gen_challenge(8, 16, b"\x07", b"\x07", ("tpa-1",))
    assert a == b


def test_challenge_frozen_index_set():
    # evaluated once from the documented PRF rule and pinned
    ch = hf.gen_challenge(8, 16, sd_bl=b"\x07", sd_ra=b"\x07")
    assert ch.indices == (6, 5, 7, 11, 8, 15, 9, 3)
    assert all(1 <= nu < Q for nu in ch.coefficients)


def test_challenge_rejects_bad_m():
    with pytest.raises(hf.ChallengeRangeError):
        hf.gen_challenge(17, 16, b"a", b"b")
    with pytest.raises(hf.ChallengeRangeError):
        hf.gen_challenge(0, 16, b"a", b"b")


def test_challenge_per_tpa_nonces_distinct():
    ch = hf.gen_challenge(2, 8, b"x", b"y", ("tpa-1", "tpa-2"))
    assert ch.tpa_nonces["tpa-1"] != ch.tpa_nonces["tpa-2"]
    assert len(ch.tpa_nonces["tpa-1"]) == 16


# -- proofs ------------------------------------------------------------------------


def test_proof_single_block_unit_coefficient():
    _, blocks, keys, u, tags = make_file(40, 60, 2)
    ch = hf.AuditChallenge(1, (1,), (1,), {}, b"", b"")
    proof = hf.gen_proof(ch, blocks, tags)
    assert proof.sigma == tags.tags[1]
    assert proof.mu == blocks.scalars[1]


def test_proof_honest_verifies():
    _, blocks, keys, u, tags = make_file(41, 200, 4)
    ch = hf.gen_challenge(4, blocks.n_segments, b"s1", b"s2")
    proof = hf.gen_proof(ch, blocks, tags)
    public = hf.PublicAuditData(tuple(alg.hash_to_group(s) for s in blocks.segments),
                                4, keys.y, u)
    assert hf.verify_proof(ch, proof, public)


def test_proof_frozen_vector():
    # seeded 4-block file; aggregate pinned after checking a naive loop oracle
    _, blocks, keys, u, tags = make_file(1234, 4 * 24, 4)
    ch = hf.gen_challenge(3, blocks.n_segments, b"\x01", b"\x02")
    proof = hf.gen_proof(ch, blocks, tags)
    naive_sigma = alg.G1_IDENTITY
    naive_mu = 0
    for nu, idx in zip(ch.coefficients, ch.indices):
        naive_sigma = naive_sigma + nu * tags.tags[idx]
        naive_mu = (naive_mu + nu * blocks.scalars[idx]) % Q
    assert proof.sigma == naive_sigma and proof.mu == naive_mu
    assert proof.sigma.serialize().hex() == (
        "021b098b3c6cd6e4e2bb428396e38e39beee71a338fecb3c4d6686e3dac34dcb1c")
    assert alg.encode_scalar(proof.mu).hex() == (
        "1e678aed54aec95dc83076d72902eaf5c486d159250392c91838075ff7550fb9")


def test_proof_missing_block():
    _, blocks, keys, u, tags = make_file(42, 60, 2)
    ch = hf.AuditChallenge(1, (9,), (1,), {}, b"", b"")
    with pytest.raises(hf.MissingBlockError):
        hf.gen_proof(ch, blocks, tags)


def test_verify_rejects_mu_shift():
    _, blocks, keys, u, tags = make_file(43, 90, 3)
    ch = hf.gen_challenge(2, blocks.n_segments, b"s", b"t")
    proof = hf.gen_proof(ch, blocks, tags)
    public = hf.PublicAuditData(tuple(alg.hash_to_group(s) for s in blocks.segments),
                                3, keys.y, u)
    assert not hf.verify_proof(ch, hf.AuditProof(proof.sigma, (proof.mu + 1) % Q), public)


def test_soundness_single_corruption_sweep():
    # n=16, M=8: corrupting any challenged segment at the prover is detected
    data, blocks, keys, u, tags = make_file(44, 16 * 24, 16)
    assert blocks.n_segments == 16
    ch = hf.gen_challenge(8, 16, b"sweep", b"sweep")
    public = hf.PublicAuditData(tuple(alg.hash_to_group(s) for s in blocks.segments),
                                16, keys.y, u)
    honest = hf.gen_proof(ch, blocks, tags)
    assert hf.verify_proof(ch, honest, public)
    for pos in ch.indices:
        scalars = list(blocks.scalars)
        scalars[pos] = (scalars[pos] + 1) % Q  # substituted block content
        forged = hf.FileBlocks(blocks.chunks, blocks.segments, tuple(scalars),
                               blocks.block_spans)
        proof = hf.gen_proof(ch, forged, tags)
        assert not hf.verify_proof(ch, proof, public)


def test_completeness_random_sample():
    rng = random.Random(45)
    for trial in range(25):
        size = rng.randrange(30, 400)
        n = rng.randrange(1, 9)
        _, blocks, keys, u, tags = make_file(rng.random(), size, n)
        m = rng.randrange(1, blocks.n_segments + 1)
        ch = hf.gen_challenge(m, blocks.n_segments,
                              rng.randbytes(8), rng.randbytes(8))
        proof = hf.gen_proof(ch, blocks, tags)
        public = hf.PublicAuditData(tuple(alg.hash_to_group(s) for s in blocks.segments),
                                    n, keys.y, u)
        assert hf.verify_proof(ch, proof, public)


# -- auditor selection ---------------------------------------------------------


def test_select_all_candidates():
    out = hf.select_tpas(["a", "b", "c"], "complete", 3, stats={"a": 1, "b": 2, "c": 3})
    assert set(out.selected) == {"a", "b", "c"}


def test_select_complete_lowest_latency():
    out = hf.select_tpas(["a", "b", "c"], "complete", 2, stats={"a": 5, "b": 9, "c": 1})
    assert set(out.selected) == {"c", "a"}


def test_select_incomplete_seeded_reproducible():
    out1 = hf.select_tpas(list("abcdef"), "incomplete", 3,
                          neighbors=list("abcd"), rng=random.Random(9))
    out2 = hf.select_tpas(list("abcdef"), "incomplete", 3,
                          neighbors=list("abcd"), rng=random.Random(9))
    assert out1.selected == out2.selected
    assert set(out1.selected) <= set("abcd")


def test_select_insufficient():
    with pytest.raises(hf.InsufficientCandidatesError):
        hf.select_tpas(["a"], "complete", 2, stats={"a": 1})


def test_assignment_splits_dt_lt():
    out = hf.select_tpas(list("abcd"), "complete", 4,
                         stats={c: i for i, c in enumerate("abcd")})
    assert len(out.dt) == 2 and len(out.lt) == 2
    assert set(out.dt) | set(out.lt) == {"a", "b", "c", "d"}
