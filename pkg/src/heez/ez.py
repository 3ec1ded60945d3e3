"""Hybrid credential scheme: multi-base commitments bound by an identity
validator's ECDSA signature, non-interactive Schnorr proofs of the opening,
short-signature credential issuance, and self-blinded unlinkable presentation
with a two-message challenge-response.

Group placement (the pairing is asymmetric): user keys, commitments and
credentials live in G1; the certificate provider's public key and everything
the service provider rescales during presentation live in G2.  The credential

    sigma = (h(C) + sk_cp)^-1 * pk_u

verifies through   e(sigma, h(C)*g + pk_cp) == e(pk_u, g),   and stays valid
after every element is multiplied by a fresh blinding factor b, which is what
makes repeated presentations unlinkable.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import Callable, Optional, Sequence

from . import ledger as led
from . import sealing
from .algebra import (
    G1Element,
    G2Element,
    G1_GENERATOR,
    G2_GENERATOR,
    GROUP_ORDER,
    Scalar,
    hash_to_group,
    hash_to_scalar,
    pairing_check,
    random_scalar,
    scalar_inverse,
)

Q = GROUP_ORDER


class EzError(Exception):
    pass


class AttributeCountError(EzError):
    pass


class InvalidBlindingError(EzError):
    pass


class IvValidationRefused(EzError):
    """The identity validator's attribute predicate rejected the claim."""


class IvSignatureInvalid(EzError):
    pass


class ProofInvalid(EzError):
    """Raised with the protocol's rejection message."""

    def __init__(self, detail: str = ""):
        super().__init__("u not verify" + (f" ({detail})" if detail else ""))


class NonInvertibleDenominator(EzError):
    """h(C) + sk_cp vanished mod q; abort and re-key."""


class ChallengeMismatch(EzError):
    pass


class PairingCheckFailed(EzError):
    pass


class PokFailed(EzError):
    pass


# -- keys and bases -----------------------------------------------------------


@dataclass(frozen=True)
class CommitmentBases:
    """Pairwise-distinct G1 bases; index 0 anchors user keys, 1..n carry attributes."""

    points: tuple

    @property
    def p0(self) -> G1Element:
        return self.points[0]

    def attribute_base(self, i: int) -> G1Element:
        """Base for the i-th attribute (1-indexed like the protocol)."""
        return self.points[i]

    def max_attributes(self) -> int:
        return len(self.points) - 1


def commitment_bases(n: int) -> CommitmentBases:
    """Derive P_0..P_n by hashing a fixed label; deterministic across parties."""
    pts = tuple(hash_to_group(b"HEEZ-BASE-%d" % i) for i in range(n + 1))
    if len(set(pts)) != len(pts):
        raise EzError("derived bases collide")
    return CommitmentBases(pts)


@dataclass(frozen=True)
class UserKeyPair:
    sk: Scalar
    pk: G1Element  # sk * P_0


def user_keygen(bases: CommitmentBases, rng: Optional[Random] = None) -> UserKeyPair:
    sk = random_scalar(rng)
    return UserKeyPair(sk, sk * bases.p0)


@dataclass(frozen=True)
class CpKeyPair:
    sk: Scalar
    pk: G2Element  # sk * g


def cp_keygen(rng: Optional[Random] = None) -> CpKeyPair:
    sk = random_scalar(rng)
    return CpKeyPair(sk, sk * G2_GENERATOR)


# -- commitment ---------------------------------------------------------------


@dataclass(frozen=True)
class Opening:
    r: Scalar
    attrs: tuple


@dataclass(frozen=True)
class Commitment:
    point: G1Element
    opening: Opening  # retained by the committer, never transmitted


def commit(attrs: Sequence[Scalar], r: Scalar, user_pk: G1Element,
           bases: CommitmentBases) -> Commitment:
    """C = r*pk_u + sum(v_i * P_i); attributes may be zero, r must not be."""
    if not 1 <= r < Q:
        raise EzError("commitment randomness must lie in Z_q*")
    if len(attrs) > bases.max_attributes():
        raise AttributeCountError(
            f"{len(attrs)} attributes exceed the {bases.max_attributes()} available bases")
    point = r * user_pk
    for i, v in enumerate(attrs, start=1):
        point = point + (v % Q) * bases.attribute_base(i)
    return Commitment(point, Opening(r, tuple(v % Q for v in attrs)))


@dataclass(frozen=True)
class IvSignature:
    """Identity validator's ECDSA signature over the canonical commitment bytes."""

    der: bytes
    signer_public: bytes


def iv_issue(commitment: Commitment, claim: led.AttributeClaim, policy: led.IdentityPolicy,
             iv_keys: sealing.EcdsaKeyPair) -> IvSignature:
    """Cross-examine the claim against the policy, then sign the commitment."""
    if not led.validate_identity(claim, policy):
        raise IvValidationRefused("attribute claim rejected")
    return IvSignature(iv_keys.sign(commitment.point.serialize()), iv_keys.public_bytes)


def iv_verify(commitment_point: G1Element, sig: IvSignature) -> bool:
    return sealing.ecdsa_verify(sig.signer_public, sig.der, commitment_point.serialize())


# -- proof of opening -----------------------------------------------------------


@dataclass(frozen=True)
class AttributeProofPart:
    a_point: G1Element   # w_i * P_i
    t: Scalar            # s_i * v_i + w_i
    masked_value: G1Element  # v_i * P_i


@dataclass(frozen=True)
class SchnorrOpeningProof:
    a_point: G1Element   # w * pk_u
    t: Scalar            # s * r + w
    masked_r: G1Element  # r * pk_u
    parts: tuple


def prove_opening(commitment: Commitment, user_keys: UserKeyPair,
                  bases: CommitmentBases, rng: Optional[Random] = None) -> SchnorrOpeningProof:
    """Non-interactive Schnorr proof of the commitment opening (hash challenges)."""
    r, attrs = commitment.opening.r, commitment.opening.attrs
    w = random_scalar(rng)
    a_point = w * user_keys.pk
    s = hash_to_scalar(a_point)
    t = (s * r + w) % Q
    parts = []
    for i, v in enumerate(attrs, start=1):
        w_i = random_scalar(rng)
        base = bases.attribute_base(i)
        a_i = w_i * base
        s_i = hash_to_scalar(a_i)
        parts.append(AttributeProofPart(a_i, (s_i * v + w_i) % Q, v * base))
    return SchnorrOpeningProof(a_point, t, r * user_keys.pk, tuple(parts))


def verify_opening(proof: SchnorrOpeningProof, commitment_point: G1Element,
                   user_pk: G1Element, bases: CommitmentBases) -> bool:
    """Check every Schnorr equation and that the masked terms rebuild C."""
    s = hash_to_scalar(proof.a_point)
    if proof.t * user_pk != proof.a_point + s * proof.masked_r:
        return False
    rebuilt = proof.masked_r
    for i, part in enumerate(proof.parts, start=1):
        s_i = hash_to_scalar(part.a_point)
        if part.t * bases.attribute_base(i) != part.a_point + s_i * part.masked_value:
            return False
        rebuilt = rebuilt + part.masked_value
    return rebuilt == commitment_point


# -- credential issuance and verification ---------------------------------------


@dataclass(frozen=True)
class Credential:
    sigma: G1Element   # (h(C) + sk_cp)^-1 * pk_u
    cp_public: G2Element


def cp_issue(commitment_point: G1Element, iv_sig: IvSignature, proof: SchnorrOpeningProof,
             cp_keys: CpKeyPair, user_pk: G1Element, bases: CommitmentBases) -> Credential:
    """Certificate provider path: verify the IV signature and the opening proof,
    then sign the commitment onto the user's public key."""
    if not iv_verify(commitment_point, iv_sig):
        raise IvSignatureInvalid("identity validator signature does not verify")
    if not verify_opening(proof, commitment_point, user_pk, bases):
        raise ProofInvalid("opening proof")
    denom = (hash_to_scalar(commitment_point) + cp_keys.sk) % Q
    if denom == 0:
        raise NonInvertibleDenominator("h(C) + sk_cp = 0 mod q")
    return Credential(scalar_inverse(denom) * user_pk, cp_keys.pk)


def user_verify(commitment_point: G1Element, credential: Credential,
                user_pk: G1Element) -> bool:
    """e(sigma, h(C)*g + pk_cp) == e(pk_u, g)."""
    h_c = hash_to_scalar(commitment_point)
    rhs_g2 = h_c * G2_GENERATOR + credential.cp_public
    return pairing_check([(credential.sigma, rhs_g2), (-user_pk, G2_GENERATOR)])


# -- blinded presentation ---------------------------------------------------------


@dataclass(frozen=True)
class BlindedPresentation:
    """Everything transmitted to the service provider; all of it rescaled by b."""

    sigma: G1Element      # b * sigma
    pk_u: G1Element       # b * pk_u
    pk_cp: G2Element      # b * pk_cp
    p_prime: G2Element    # b * g
    c_prime: Scalar       # b * h(C)
    r_point: G1Element    # r' * P_0
    s_prime: Scalar       # h(r_point)
    t_prime: Scalar       # s' * (b * sk_u) + r'

    def transmitted_fields(self) -> dict:
        return {
            "sigma": self.sigma, "pk_u": self.pk_u, "pk_cp": self.pk_cp,
            "p_prime": self.p_prime, "c_prime": self.c_prime,
            "r_point": self.r_point, "s_prime": self.s_prime, "t_prime": self.t_prime,
        }


def blind(credential: Credential, commitment_point: G1Element, user_keys: UserKeyPair,
          b: Scalar, bases: CommitmentBases, rng: Optional[Random] = None,
          literal_key_derivation: bool = False) -> BlindedPresentation:
    """Self-blind the credential with factor b and attach a proof of the blinded key.

    ``literal_key_derivation`` keeps the (broken) reading in which the blinded
    public key picks up a second factor of b; it exists to demonstrate that the
    printed verification equations reject it.
    """
    if not 1 <= b < Q:
        raise InvalidBlindingError("blinding factor must lie in Z_q*")
    sk_b = (b * user_keys.sk) % Q
    pk_b = (b * sk_b % Q) * bases.p0 if literal_key_derivation else sk_b * bases.p0
    r_prime = random_scalar(rng)
    r_point = r_prime * bases.p0
    s_prime = hash_to_scalar(r_point)
    return BlindedPresentation(
        sigma=b * credential.sigma,
        pk_u=pk_b,
        pk_cp=b * credential.cp_public,
        p_prime=b * G2_GENERATOR,
        c_prime=(b * hash_to_scalar(commitment_point)) % Q,
        r_point=r_point,
        s_prime=s_prime,
        t_prime=(s_prime * sk_b + r_prime) % Q,
    )


@dataclass
class SpChallengeState:
    """Service-provider session state for one presentation."""

    lam: Scalar
    sigma_bar: G2Element   # lam * pk_cp (true key)
    challenge: G2Element   # lam * pk_cp' (blinded key from the presentation)


def sp_challenge(presentation: BlindedPresentation, cp_public: G2Element,
                 rng: Optional[Random] = None) -> SpChallengeState:
    """Fresh lambda per presentation; the challenge goes back to the user."""
    lam = random_scalar(rng)
    return SpChallengeState(lam, lam * cp_public, lam * presentation.pk_cp)


def user_respond(challenge: G2Element, b: Scalar) -> G2Element:
    """Strip the blinding factor from the challenged key: b^-1 * challenge."""
    if not 1 <= b < Q:
        raise InvalidBlindingError("blinding factor must lie in Z_q*")
    return scalar_inverse(b) * challenge


def sp_finish(state: SpChallengeState, response: G2Element,
              presentation: BlindedPresentation, bases: CommitmentBases,
              policy_hook: Optional[Callable[[BlindedPresentation], bool]] = None) -> bool:
    """Accept iff the challenge response, the pairing equation, and the key
    proof all hold; each failure raises its own error code."""
    if response != state.sigma_bar:
        raise ChallengeMismatch("blinded key response does not match lambda * pk_cp")
    rhs_g2 = presentation.c_prime * G2_GENERATOR + presentation.pk_cp
    if not pairing_check([(presentation.sigma, rhs_g2), (-presentation.pk_u, presentation.p_prime)]):
        raise PairingCheckFailed("blinded credential equation failed")
    if presentation.t_prime * bases.p0 != presentation.r_point + presentation.s_prime * presentation.pk_u:
        raise PokFailed("proof of blinded secret key failed")
    if policy_hook is not None and not policy_hook(presentation):
        raise PokFailed("presentation policy hook rejected")
    return True


# -- wire formats (communication-cost accounting) --------------------------------


def encode_credential(commitment_point: G1Element, iv_sig: IvSignature,
                      credential: Credential) -> bytes:
    """Tagged credential container: C, DER ECDSA signature, sigma, pk_cp."""
    body = commitment_point.serialize()
    body += len(iv_sig.der).to_bytes(2, "big") + iv_sig.der
    body += credential.sigma.serialize()
    body += credential.cp_public.serialize()
    return b"\x01" + body


def encode_presentation(presentation: BlindedPresentation) -> bytes:
    """Canonical presentation message; its size is the accounting unit."""
    from .algebra import encode_scalar

    out = presentation.sigma.serialize()
    out += presentation.pk_u.serialize()
    out += presentation.pk_cp.serialize()
    out += presentation.p_prime.serialize()
    out += encode_scalar(presentation.c_prime)
    out += presentation.r_point.serialize()
    out += encode_scalar(presentation.s_prime)
    out += encode_scalar(presentation.t_prime)
    return out
