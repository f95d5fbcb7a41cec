use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::adversaries::{AliceStrategy, BobStrategy};
use crate::error::{Error, Result};
use crate::protocol::{run_protocol_with, ProtocolConfig};
use crate::rng;
use crate::stats::{proportion, Estimate};

/// Combines several oblivious keys with relative shifts chosen by Alice.
///
/// String `i` is shifted so that its first known position lands on the first
/// known position of string 0. The result is the set of positions, in string-0
/// coordinates, known in every shifted string.
pub fn multi_string_combine(known: &[Vec<usize>], n: usize) -> Result<Vec<usize>> {
    if known.is_empty() {
        return Err(Error::InvalidParameter("at least one string is required".into()));
    }
    if known.iter().any(|s| s.is_empty()) {
        return Err(Error::EmptyKnownSet);
    }
    if let Some(&j) = known.iter().flatten().find(|&&j| j >= n) {
        return Err(Error::InvalidParameter(format!("known index {j} outside [0, {n})")));
    }
    let sets: Vec<BTreeSet<usize>> = known.iter().map(|s| s.iter().copied().collect()).collect();
    let anchor = *sets[0].first().expect("non-empty");
    let offsets: Vec<usize> = sets
        .iter()
        .map(|s| (*s.first().expect("non-empty") + n - anchor) % n)
        .collect();
    Ok(sets[0]
        .iter()
        .copied()
        .filter(|&j| sets.iter().zip(&offsets).all(|(s, &o)| s.contains(&((j + o) % n))))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombineReport {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    /// Final known-bit count → trials.
    pub distribution: BTreeMap<usize, u64>,
    /// Known-bit count of the individual (successful) strings → strings.
    pub input_distribution: BTreeMap<usize, u64>,
    pub p_exactly_one: Estimate,
}

/// Generates `m` honest strings per trial and combines them.
pub fn combine_experiment(m: usize, n: usize, k: usize, trials: usize, seed: u64) -> Result<CombineReport> {
    if m == 0 || trials == 0 {
        return Err(Error::InvalidParameter("m and trials must be positive".into()));
    }
    let config = ProtocolConfig::new(n, k).with_seed(seed);
    config.validate()?;
    let db = vec![0u8; n];
    let mut distribution = BTreeMap::new();
    let mut input_distribution = BTreeMap::new();
    for t in 0..trials {
        let mut rng = rng::stream(seed, t as u64);
        let mut strings = Vec::with_capacity(m);
        for _ in 0..m {
            let tr = run_protocol_with(&config, &db, 0, AliceStrategy::Honest, BobStrategy::Honest, &mut rng)?;
            let known = tr.key.known_indices();
            *input_distribution.entry(known.len()).or_insert(0) += 1;
            strings.push(known);
        }
        let count = multi_string_combine(&strings, n)?.len();
        *distribution.entry(count).or_insert(0) += 1;
    }
    let exactly_one = distribution.get(&1).copied().unwrap_or(0);
    Ok(CombineReport {
        m,
        n,
        k,
        trials,
        distribution,
        input_distribution,
        p_exactly_one: proportion(exactly_one, trials as u64),
    })
}
