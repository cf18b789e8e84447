//! Signing, verification and hashing.
//!
//! Signatures are secp256k1 ECDSA over the SHA-256 digest of the message. A
//! DER-encoded ECDSA signature is at most 72 bytes long; on the wire it is
//! zero-padded to exactly [`SIGNATURE_LEN`] so per-message byte counts do not
//! depend on the signed content.

use std::fmt;
use std::sync::LazyLock;

use secp256k1::{ecdsa, All, Message, PublicKey, Secp256k1, SecretKey};
use serde::{Serialize, Serializer};
use sha2::{Digest as _, Sha256};

pub const SIGNATURE_LEN: usize = 72;
pub const DIGEST_LEN: usize = 32;
pub const PUBLIC_KEY_LEN: usize = 33;

/// Name of the hash function, recorded in run metadata.
pub const HASH_ALGORITHM: &str = "sha256";
pub const SIGNATURE_SCHEME: &str = "ecdsa-secp256k1-der-padded72";

static CONTEXT: LazyLock<Secp256k1<All>> = LazyLock::new(Secp256k1::new);

#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Digest(pub [u8; DIGEST_LEN]);

impl Digest {
    pub const ZERO: Digest = Digest([0; DIGEST_LEN]);

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({})", &self.to_hex()[..16])
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for Digest {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

pub fn digest(bytes: &[u8]) -> Digest {
    Digest(Sha256::digest(bytes).into())
}

/// Digest over several byte slices, equivalent to hashing their concatenation.
pub fn digest_parts<'a>(parts: impl IntoIterator<Item = &'a [u8]>) -> Digest {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p);
    }
    Digest(h.finalize().into())
}

/// Fixed-length wire signature.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature(pub [u8; SIGNATURE_LEN]);

impl Signature {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn from_slice(bytes: &[u8]) -> Option<Signature> {
        bytes.try_into().ok().map(Signature)
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Signature({}..)", hex::encode(&self.0[..8]))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    EcdsaLike,
}

#[derive(Clone)]
pub struct KeyPair {
    secret: SecretKey,
    public: PublicKey,
    pub scheme: Scheme,
}

impl fmt::Debug for KeyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KeyPair")
            .field("public", &hex::encode(self.public_bytes()))
            .finish_non_exhaustive()
    }
}

impl KeyPair {
    /// Derives a key pair from a seed and a label.
    pub fn derive(seed: u64, label: &str) -> KeyPair {
        let mut counter = 0u32;
        loop {
            let d = digest_parts([
                b"nbchain-key".as_slice(),
                &seed.to_le_bytes(),
                label.as_bytes(),
                &counter.to_le_bytes(),
            ]);
            // An out-of-range scalar has probability ~2^-128.
            if let Ok(secret) = SecretKey::from_slice(&d.0) {
                let public = PublicKey::from_secret_key(&CONTEXT, &secret);
                return KeyPair {
                    secret,
                    public,
                    scheme: Scheme::EcdsaLike,
                };
            }
            counter += 1;
        }
    }

    pub fn secret_bytes(&self) -> [u8; 32] {
        self.secret.secret_bytes()
    }

    pub fn public_bytes(&self) -> [u8; PUBLIC_KEY_LEN] {
        self.public.serialize()
    }

    pub fn public(&self) -> PublicBytes {
        PublicBytes(self.public_bytes())
    }

    pub fn sign(&self, message: &[u8]) -> Signature {
        sign(&self.secret_bytes(), message)
    }
}

/// Compressed SEC1 public key bytes.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PublicBytes(pub [u8; PUBLIC_KEY_LEN]);

impl fmt::Debug for PublicBytes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PublicBytes({}..)", hex::encode(&self.0[..8]))
    }
}

/// Signs `message` with a 32-byte secret scalar.
///
/// Panics if `secret` is not a valid scalar; keys come from [`KeyPair`].
pub fn sign(secret: &[u8; 32], message: &[u8]) -> Signature {
    let sk = SecretKey::from_slice(secret).expect("invalid secret key");
    let msg = Message::from_digest(digest(message).0);
    let der = CONTEXT.sign_ecdsa(&msg, &sk).serialize_der();
    let mut out = [0u8; SIGNATURE_LEN];
    out[..der.len()].copy_from_slice(&der);
    Signature(out)
}

/// Verifies a wire signature. Any malformed input yields `false`.
pub fn verify(public: &[u8], message: &[u8], sig: &[u8]) -> bool {
    if sig.len() != SIGNATURE_LEN || sig[0] != 0x30 {
        return false;
    }
    let der_len = sig[1] as usize + 2;
    if der_len > SIGNATURE_LEN || sig[der_len..].iter().any(|&b| b != 0) {
        return false;
    }
    let Ok(sig) = ecdsa::Signature::from_der(&sig[..der_len]) else {
        return false;
    };
    let Ok(pk) = PublicKey::from_slice(public) else {
        return false;
    };
    let msg = Message::from_digest(digest(message).0);
    CONTEXT.verify_ecdsa(&msg, &sig, &pk).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    #[test]
    fn sign_verify_roundtrip() {
        let kp = KeyPair::derive(1, "peer0");
        let m = b"reading 450 ppm";
        let s = kp.sign(m);
        assert!(verify(&kp.public_bytes(), m, &s.0));
    }

    #[test]
    fn bit_flip_in_message_fails() {
        let kp = KeyPair::derive(1, "peer0");
        let m = b"reading 450 ppm".to_vec();
        let s = kp.sign(&m);
        let mut m2 = m.clone();
        m2[3] ^= 1;
        assert!(!verify(&kp.public_bytes(), &m2, &s.0));
    }

    #[test]
    fn other_key_fails() {
        let a = KeyPair::derive(1, "peer0");
        let b = KeyPair::derive(1, "peer1");
        let s = a.sign(b"m");
        assert!(!verify(&b.public_bytes(), b"m", &s.0));
    }

    #[test]
    fn short_signature_fails() {
        let kp = KeyPair::derive(1, "ue0");
        let s = kp.sign(b"m");
        assert!(!verify(&kp.public_bytes(), b"m", &s.0[..71]));
    }

    #[test]
    fn distinct_seeds_distinct_keys() {
        assert_ne!(
            KeyPair::derive(1, "ue0").public_bytes(),
            KeyPair::derive(2, "ue0").public_bytes()
        );
    }

    #[test]
    fn empty_digest_is_stable() {
        assert_eq!(
            digest(b"").to_hex(),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
        assert_eq!(digest(b"abc"), digest(b"abc"));
        assert_eq!(digest_parts([b"ab".as_slice(), b"c"]), digest(b"abc"));
    }

    #[test]
    fn no_collisions_in_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut seen = HashSet::new();
        let mut inputs = HashSet::new();
        for _ in 0..100_000 {
            let len = rng.gen_range(0..48);
            let m: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
            if inputs.insert(m.clone()) {
                assert!(seen.insert(digest(&m)), "collision");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn signature_is_always_72_bytes(len in 0usize..10_000, seed in any::<u64>()) {
            let kp = KeyPair::derive(seed, "p");
            let m = vec![0xA5u8; len];
            let s = kp.sign(&m);
            prop_assert_eq!(s.0.len(), SIGNATURE_LEN);
            prop_assert!(verify(&kp.public_bytes(), &m, &s.0));
        }

        #[test]
        fn any_single_byte_mutation_fails(
            m in proptest::collection::vec(any::<u8>(), 1..64),
            which in 0usize..3,
            pos in any::<prop::sample::Index>(),
            delta in 1u8..=255,
        ) {
            let kp = KeyPair::derive(3, "k");
            let mut sig = kp.sign(&m).0.to_vec();
            let mut msg = m.clone();
            let mut pk = kp.public_bytes().to_vec();
            match which {
                0 => { let i = pos.index(msg.len()); msg[i] = msg[i].wrapping_add(delta); }
                1 => { let i = pos.index(sig.len()); sig[i] = sig[i].wrapping_add(delta); }
                _ => { let i = pos.index(pk.len()); pk[i] = pk[i].wrapping_add(delta); }
            }
            prop_assert!(!verify(&pk, &msg, &sig));
        }
    }
}
