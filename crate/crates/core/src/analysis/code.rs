use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::SpectrumCertificate;
use crate::construction::TwoWeightSet;
use crate::error::{Error, Result};
use crate::field::{BaseField, Elem};
use crate::projective::Space;

pub const DEFAULT_SPOT_CHECKS: usize = 128;

/// The projective linear code whose columns are the points of a set.
#[derive(Clone, Debug)]
pub struct CodeArtifact {
    pub q: u32,
    /// `k` rows of length `n`, GF(q) digits.
    pub generator: Vec<Vec<u32>>,
    /// Nonzero weights only.
    pub weights: BTreeMap<u64, u64>,
    pub spot_checks: usize,
    base: BaseField,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeSummary {
    pub nk: [usize; 2],
    pub weights: BTreeMap<u64, u64>,
}

impl CodeArtifact {
    pub fn length(&self) -> usize {
        self.generator.first().map_or(0, Vec::len)
    }

    pub fn dimension(&self) -> usize {
        self.generator.len()
    }

    pub fn summary(&self) -> CodeSummary {
        CodeSummary {
            nk: [self.length(), self.dimension()],
            weights: self.weights.clone(),
        }
    }

    /// `message · G`.
    pub fn codeword(&self, message: &[u32]) -> Result<Vec<u32>> {
        if message.len() != self.dimension() || message.iter().any(|&m| m >= self.q) {
            return Err(Error::InvalidParams(format!(
                "message must be {} digits below {}",
                self.dimension(),
                self.q
            )));
        }
        let bf = &self.base;
        Ok((0..self.length())
            .map(|j| {
                message
                    .iter()
                    .zip(&self.generator)
                    .fold(0, |acc, (&m, row)| bf.add(acc, bf.mul(m, row[j])))
            })
            .collect())
    }

    pub fn weight(&self, message: &[u32]) -> Result<u64> {
        Ok(self.codeword(message)?.iter().filter(|&&c| c != 0).count() as u64)
    }
}

/// Builds the generator matrix and derives the weight enumerator from the
/// hyperplane spectrum. Random codewords are then evaluated directly and
/// matched to the hyperplane they vanish on.
pub fn export_code(
    space: &Space,
    set: &TwoWeightSet,
    cert: &SpectrumCertificate,
    counts: &[u32],
    spot_checks: usize,
    seed: u64,
) -> Result<CodeArtifact> {
    let k = space.vector_len() as usize;
    let len = set.len();
    let q = space.q();
    let bf = space.base().clone();

    let columns: Vec<Vec<u32>> = set.points.indices().iter().map(|&i| space.point_coords(i)).collect();
    let generator: Vec<Vec<u32>> = (0..k).map(|r| columns.iter().map(|c| c[r]).collect()).collect();
    let rank = bf.rank(&generator);
    if rank < k {
        return Err(Error::Verification(format!("generator matrix has rank {rank} < {k}")));
    }

    let mut weights = BTreeMap::new();
    for (&size, &count) in &cert.histogram {
        *weights.entry(len as u64 - size as u64).or_insert(0) += count * (q as u64 - 1);
    }
    weights.retain(|_, c| *c > 0);
    check_moments(&weights, len as u128, q as u128, k as u32)?;

    let code = CodeArtifact {
        q,
        generator,
        weights,
        spot_checks,
        base: bf,
    };
    spot_check(space, &code, counts, spot_checks, seed)?;
    Ok(code)
}

/// First three power moments of a projective code of length `len` and
/// dimension `k` with no zero columns.
fn check_moments(weights: &BTreeMap<u64, u64>, len: u128, q: u128, k: u32) -> Result<()> {
    let a0: u128 = weights.values().map(|&c| c as u128).sum();
    let a1: u128 = weights.iter().map(|(&w, &c)| w as u128 * c as u128).sum();
    let a2: u128 = weights.iter().map(|(&w, &c)| (w as u128).pow(2) * c as u128).sum();
    let m0 = q.pow(k) - 1;
    let m1 = len * (q - 1) * q.pow(k - 1);
    let m2 = len * (q - 1) * q.pow(k - 2) * ((q - 1) * len + 1);
    if (a0, a1, a2) != (m0, m1, m2) {
        return Err(Error::Verification(format!(
            "power moments ({a0}, {a1}, {a2}) differ from ({m0}, {m1}, {m2})"
        )));
    }
    Ok(())
}

/// Key of a nonzero digit vector up to GF(q)^* scaling.
fn projective_key(bf: &BaseField, v: &[u32]) -> Option<u64> {
    let last = *v.iter().rev().find(|&&c| c != 0)?;
    let s = bf.inv(last);
    Some(v.iter().rev().fold(0u64, |acc, &c| acc * bf.q() as u64 + bf.mul(c, s) as u64))
}

fn spot_check(space: &Space, code: &CodeArtifact, counts: &[u32], checks: usize, seed: u64) -> Result<()> {
    let bf = &code.base;
    let k = code.dimension();
    // canonical form of a unit vector is the vector itself
    let units: Vec<(Elem, Elem)> = (0..k)
        .map(|i| {
            let mut e = vec![0; k];
            e[i] = 1;
            let pt = space.point_from_coords(&e)?;
            Ok((pt.x, pt.y))
        })
        .collect::<Result<_>>()?;
    // functional values on the unit vectors -> hyperplane index
    let mut by_values = HashMap::with_capacity(space.hyperplane_count() as usize);
    for h in 0..space.hyperplane_count() {
        let (a, b) = space.rep(h);
        let vals: Vec<u32> = units.iter().map(|&(x, y)| space.pairing(a, b, x, y)).collect();
        by_values.insert(projective_key(bf, &vals).expect("nonzero functional"), h);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = code.length() as u64;
    for _ in 0..checks {
        let msg: Vec<u32> = loop {
            let m: Vec<u32> = (0..k).map(|_| rng.gen_range(0..code.q)).collect();
            if m.iter().any(|&c| c != 0) {
                break m;
            }
        };
        let w = code.weight(&msg)?;
        let h = by_values[&projective_key(bf, &msg).expect("nonzero")];
        let expected = len - counts[h as usize] as u64;
        if w != expected || !code.weights.contains_key(&w) {
            return Err(Error::Verification(format!(
                "codeword {msg:?} has weight {w}, hyperplane {h} predicts {expected}"
            )));
        }
    }
    Ok(())
}
