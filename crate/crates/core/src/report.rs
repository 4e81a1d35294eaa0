//! Machine-readable reports combining the invariants of one datum.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cover_data::{DatumFile, PrymDatum};
use crate::error::{Error, Result};
use crate::hasse_witt::{
    characters_with_unit_pairs, find_ordinary_point, hw_matrix, pair_product,
    scaled_row_candidates, scaled_row_identity_holds, OrdinarySearch,
};
use crate::hodge::{
    genus_total, h_cover_is_ramified, polarization_type, quotient_genus,
    quotient_genus_from_characters, EigenspaceEntry, EigenspaceProfile,
};
use crate::shimura::{classify_profile, SpecialityVerdict, Verdict};
use crate::GroupElement;

/// CSV header of search and analyze output.
pub const CSV_HEADER: &str = "N,m,s,rows-hash,|H|,g̃,g,l,dim_P_G,dim_Pf_lower,verdict,flags";

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub datum: DatumFile,
    pub genus_total: u64,
    pub quotient_genus: u64,
    pub prym_dimension: u64,
    pub polarization: Vec<u64>,
    pub h_order: usize,
    pub h_cover_ramified: bool,
    pub profile: Vec<EigenspaceEntry>,
    pub classification: SpecialityVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub char_p: Option<CharPSection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharPSection {
    pub prime: u64,
    pub max_ext_degree: u32,
    pub ordinary_point: OrdinarySearch,
}

impl ClassificationReport {
    /// All characteristic-zero invariants, cross-checked against the
    /// character sums. The datum must be irreducible.
    pub fn compute(datum: &PrymDatum) -> Result<ClassificationReport> {
        let matrix = datum.matrix();
        if !matrix.is_irreducible() {
            return Err(Error::Reducible(matrix.modulus()));
        }
        let profile = EigenspaceProfile::from_datum(datum)?;
        let g_total = genus_total(matrix)?;
        if profile.total_genus() != g_total {
            return Err(Error::Consistency(format!(
                "Riemann-Hurwitz genus {g_total} but eigenspaces sum to {}",
                profile.total_genus()
            )));
        }
        let g = quotient_genus(datum)?;
        let g_chars = quotient_genus_from_characters(datum)?;
        if g != g_chars {
            return Err(Error::Consistency(format!(
                "quotient genus {g} but invariant characters sum to {g_chars}"
            )));
        }
        let l = g_total - g;
        if profile.prym_dimension() != l {
            return Err(Error::Consistency(format!(
                "Prym dimension {l} but anti-invariant parts sum to {}",
                profile.prym_dimension()
            )));
        }
        Ok(ClassificationReport {
            datum: datum.to_file(),
            genus_total: g_total,
            quotient_genus: g,
            prym_dimension: l,
            polarization: polarization_type(datum)?,
            h_order: datum.h_elements().len(),
            h_cover_ramified: h_cover_is_ramified(datum)?,
            classification: classify_profile(&profile),
            profile: profile.entries().to_vec(),
            char_p: None,
        })
    }

    /// Adds the ordinary-point search at `p`.
    pub fn with_char_p(
        mut self,
        datum: &PrymDatum,
        p: u64,
        max_ext_degree: u32,
        max_points: u64,
    ) -> Result<ClassificationReport> {
        let ordinary_point = find_ordinary_point(datum, p, max_ext_degree, max_points)?;
        self.char_p = Some(CharPSection {
            prime: p,
            max_ext_degree,
            ordinary_point,
        });
        Ok(self)
    }

    pub fn verdict(&self) -> Verdict {
        self.classification.verdict
    }

    pub fn flags(&self) -> Vec<&'static str> {
        let mut flags = Vec::new();
        if self.classification.assumes_condition_star {
            flags.push("condition-star");
        }
        if !self.h_cover_ramified {
            flags.push("unramified");
        }
        if !self.classification.warnings.is_empty() {
            flags.push("warning");
        }
        flags
    }

    pub fn csv_row(&self) -> String {
        let flags = self.flags().join(";");
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.datum.modulus,
            self.datum.rows.len(),
            self.datum.rows.first().map_or(0, |r| r.len()),
            rows_hash(&self.datum.rows),
            self.h_order,
            self.genus_total,
            self.quotient_genus,
            self.prym_dimension,
            self.classification.dim_p_g,
            self.classification.dim_pf_lower,
            self.classification.verdict,
            flags
        )
    }
}

/// First 16 hex digits of SHA-256 over the rows, written as
/// space-separated integers with rows separated by `;`.
pub fn rows_hash(rows: &[Vec<i64>]) -> String {
    let text: Vec<String> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    let digest = Sha256::digest(text.join(";").as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Verdict counts in the fixed order of [`Verdict::ALL`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchSummary {
    pub total: u64,
    pub counts: Vec<(Verdict, u64)>,
}

impl SearchSummary {
    pub fn new() -> SearchSummary {
        SearchSummary {
            total: 0,
            counts: Verdict::ALL.iter().map(|&v| (v, 0)).collect(),
        }
    }

    pub fn record(&mut self, verdict: Verdict) {
        self.total += 1;
        for (v, c) in &mut self.counts {
            if *v == verdict {
                *c += 1;
            }
        }
    }

    pub fn footer_lines(&self) -> Vec<String> {
        let mut lines = vec![format!("# total {}", self.total)];
        lines.extend(self.counts.iter().map(|(v, c)| format!("# {v} {c}")));
        lines
    }

    pub fn to_json(&self) -> serde_json::Value {
        let counts: serde_json::Map<String, serde_json::Value> = self
            .counts
            .iter()
            .map(|(v, c)| (v.to_string(), (*c).into()))
            .collect();
        serde_json::json!({"summary": {"total": self.total, "verdicts": counts}})
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub left: GroupElement,
    pub right: GroupElement,
    pub identity_holds: bool,
    pub left_terms: usize,
    pub right_terms: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub datum: DatumFile,
    pub prime: u64,
    pub max_ext_degree: u32,
    pub ordinary_point: OrdinarySearch,
    pub product_identity: Vec<IdentityCheck>,
    pub scaled_row_identity: Vec<IdentityCheck>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// Ordinary-point search plus both identity suites over every eligible
    /// pair of characters (one representative per `{a, -a}`).
    pub fn compute(
        datum: &PrymDatum,
        p: u64,
        max_ext_degree: u32,
        max_points: u64,
    ) -> Result<VerificationReport> {
        let matrix = datum.matrix();
        let ordinary_point = find_ordinary_point(datum, p, max_ext_degree, max_points)?;
        let mut notes = Vec::new();

        let mut product_identity = Vec::new();
        if matrix.num_cols() == 4 {
            let reps = characters_with_unit_pairs(matrix)?;
            let products = reps
                .iter()
                .map(|a| pair_product(matrix, a, p))
                .collect::<Result<Vec<_>>>()?;
            for x in 0..reps.len() {
                for y in x + 1..reps.len() {
                    product_identity.push(IdentityCheck {
                        left: reps[x].clone(),
                        right: reps[y].clone(),
                        identity_holds: products[x] == products[y],
                        left_terms: products[x].len(),
                        right_terms: products[y].len(),
                    });
                }
            }
            if product_identity.is_empty() {
                notes.push("product identity: no eligible pairs".to_string());
            }
        } else {
            notes.push("product identity: needs s = 4".to_string());
        }

        let candidates = scaled_row_candidates(matrix)?;
        let block_terms = candidates
            .iter()
            .map(|n| {
                let block = hw_matrix(matrix, n, p)?;
                Ok(block.entries.iter().flatten().map(|e| e.len()).sum())
            })
            .collect::<Result<Vec<usize>>>()?;
        let mut scaled_row_identity = Vec::new();
        for x in 0..candidates.len() {
            for y in x + 1..candidates.len() {
                let (n, n2) = (&candidates[x], &candidates[y]);
                scaled_row_identity.push(IdentityCheck {
                    left: n.clone(),
                    right: n2.clone(),
                    identity_holds: scaled_row_identity_holds(matrix, n, n2, p)?,
                    left_terms: block_terms[x],
                    right_terms: block_terms[y],
                });
            }
        }
        if scaled_row_identity.is_empty() {
            notes.push("scaled row identity: no eligible pairs".to_string());
        }

        Ok(VerificationReport {
            datum: datum.to_file(),
            prime: p,
            max_ext_degree,
            ordinary_point,
            product_identity,
            scaled_row_identity,
            notes,
        })
    }
}
