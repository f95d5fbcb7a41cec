//! Key reduction, shift selection and database encryption.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::symbols::Interpretation;
use crate::error::{Error, Result};

/// Bob's full final key and the subset of positions Alice knows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObliviousKey {
    pub bob_key: Vec<u8>,
    pub alice_known: BTreeMap<usize, u8>,
}

impl ObliviousKey {
    pub fn len(&self) -> usize {
        self.bob_key.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bob_key.is_empty()
    }

    pub fn known_count(&self) -> usize {
        self.alice_known.len()
    }

    pub fn known_indices(&self) -> Vec<usize> {
        self.alice_known.keys().copied().collect()
    }

    /// Known positions whose value disagrees with Bob's key.
    pub fn mismatches(&self) -> Vec<usize> {
        self.alice_known
            .iter()
            .filter(|(&j, &bit)| self.bob_key[j] != bit)
            .map(|(&j, _)| j)
            .collect()
    }
}

/// XORs the `k` substrings of length `n` together.
///
/// Raw qubit `t` belongs to substring `t / n` at position `t % n`. Alice knows
/// final position `j` when all `k` contributing raw bits are conclusive.
pub fn reduce_key(raw_bits: &[u8], interpretations: &[Interpretation], n: usize, k: usize) -> Result<ObliviousKey> {
    let expected = n * k;
    if raw_bits.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: raw_bits.len(),
        });
    }
    if interpretations.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: interpretations.len(),
        });
    }
    let mut bob_key = vec![0u8; n];
    let mut alice: Vec<Option<u8>> = vec![Some(0); n];
    for (t, (&bit, interp)) in raw_bits.iter().zip(interpretations).enumerate() {
        let j = t % n;
        bob_key[j] ^= bit & 1;
        alice[j] = match (alice[j], interp.conclusive_bit()) {
            (Some(acc), Some(b)) => Some(acc ^ b),
            _ => None,
        };
    }
    let alice_known = alice
        .into_iter()
        .enumerate()
        .filter_map(|(j, v)| v.map(|b| (j, b)))
        .collect();
    Ok(ObliviousKey { bob_key, alice_known })
}

/// Alice picks a known position `j` uniformly and announces `s = (j − i) mod N`.
pub fn query_shift<R: Rng + ?Sized>(key: &ObliviousKey, target: usize, rng: &mut R) -> Result<(usize, usize)> {
    let n = key.len();
    if target >= n {
        return Err(Error::InvalidParameter(format!("target {target} outside [0, {n})")));
    }
    if key.alice_known.is_empty() {
        return Err(Error::EmptyKnownSet);
    }
    let pick = rng.random_range(0..key.alice_known.len());
    let j = *key.alice_known.keys().nth(pick).expect("pick is in range");
    Ok((j, cyclic_shift(j, target, n)))
}

/// `(j − i) mod n`
pub fn cyclic_shift(j: usize, i: usize, n: usize) -> usize {
    (j + n - i % n) % n
}

/// `C[n] = X[n] ⊕ K[(n + s) mod N]`
pub fn encrypt_database(database: &[u8], key: &[u8], shift: usize) -> Result<Vec<u8>> {
    if database.len() != key.len() {
        return Err(Error::LengthMismatch {
            expected: key.len(),
            actual: database.len(),
        });
    }
    let n = key.len();
    Ok(database
        .iter()
        .enumerate()
        .map(|(idx, &x)| (x ^ key[(idx + shift) % n]) & 1)
        .collect())
}

/// Alice's decryption of `C[i]` with the key bit she knows at `j = i + s`.
pub fn decrypt_bit(ciphertext: &[u8], target: usize, known_bit: u8) -> u8 {
    (ciphertext[target] ^ known_bit) & 1
}
