use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cover_data::{GroupElement, PrymDatum};
use crate::error::Result;

use super::{alpha, characters, eigen_dim_of_alpha, neg_residue};

/// Per-character data of a Prym datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenspaceEntry {
    pub n: GroupElement,
    pub alpha: Vec<u32>,
    /// `dim H^0(omega)_n`.
    pub d: u32,
    /// Dimension of the `n`-part of the `H`-anti-invariant differentials.
    pub d_minus: u32,
    /// `(d_minus(n), d_minus(-n))`.
    #[serde(rename = "type")]
    pub signature: (u32, u32),
}

/// All characters of a datum, sorted lexicographically by `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenspaceProfile {
    modulus: u32,
    num_points: usize,
    entries: Vec<EigenspaceEntry>,
    by_alpha: HashMap<Vec<u32>, usize>,
}

impl EigenspaceProfile {
    pub fn from_datum(datum: &PrymDatum) -> Result<EigenspaceProfile> {
        let matrix = datum.matrix();
        let modulus = matrix.modulus();
        let mut entries: Vec<EigenspaceEntry> = characters(matrix)?
            .into_iter()
            .map(|n| {
                let a = alpha(matrix, &n).values;
                let d = eigen_dim_of_alpha(&a, modulus);
                let d_minus = if datum.is_h_invariant(&n) { 0 } else { d };
                EigenspaceEntry {
                    n,
                    alpha: a,
                    d,
                    d_minus,
                    signature: (d_minus, 0),
                }
            })
            .collect();
        let by_alpha: HashMap<Vec<u32>, usize> = entries
            .iter()
            .enumerate()
            .map(|(k, e)| (e.alpha.clone(), k))
            .collect();
        let duals: Vec<usize> = entries
            .iter()
            .map(|e| {
                let neg: Vec<u32> = e.alpha.iter().map(|&a| neg_residue(a, modulus)).collect();
                by_alpha[&neg]
            })
            .collect();
        for k in 0..entries.len() {
            entries[k].signature.1 = entries[duals[k]].d_minus;
        }
        Ok(EigenspaceProfile {
            modulus,
            num_points: matrix.num_cols(),
            entries,
            by_alpha,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// `s`, the number of branch points.
    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn entries(&self) -> &[EigenspaceEntry] {
        &self.entries
    }

    /// Index of the character `-n` for the entry at `index`.
    pub fn dual_index(&self, index: usize) -> usize {
        let neg: Vec<u32> = self.entries[index]
            .alpha
            .iter()
            .map(|&a| neg_residue(a, self.modulus))
            .collect();
        self.by_alpha[&neg]
    }

    /// `2n = 0` as a character.
    pub fn is_self_dual(&self, index: usize) -> bool {
        self.dual_index(index) == index
    }

    /// One index per unordered pair `{n, -n}` (the smaller of the two).
    pub fn pair_representatives(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.entries.len()).filter(move |&k| k <= self.dual_index(k))
    }

    pub fn total_genus(&self) -> u64 {
        self.entries.iter().map(|e| e.d as u64).sum()
    }

    pub fn prym_dimension(&self) -> u64 {
        self.entries.iter().map(|e| e.d_minus as u64).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.entries).expect("profile serializes")
    }
}
