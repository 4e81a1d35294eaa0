//! Speciality classification from the eigenspace profile.
//!
//! `dim P(G)` is the dimension of the PEL-type subvariety cut out by the
//! group action on the Prym family. `dim_Pf_lower` bounds from below the
//! dimension of the smallest special subvariety containing the image of
//! the family, by summing symmetric-space dimensions of the simple factors
//! the eigenspaces force.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cover_data::PrymDatum;
use crate::error::{Error, Result};
use crate::hodge::EigenspaceProfile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    SpecialPel,
    NotSpecialDim,
    NotSpecialS4,
    #[serde(rename = "NOT_SPECIAL_TYPE_1_S3")]
    NotSpecialType1S3,
    Inconclusive,
}

impl Verdict {
    pub const ALL: [Verdict; 5] = [
        Verdict::SpecialPel,
        Verdict::NotSpecialDim,
        Verdict::NotSpecialS4,
        Verdict::NotSpecialType1S3,
        Verdict::Inconclusive,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::SpecialPel => "SPECIAL_PEL",
            Verdict::NotSpecialDim => "NOT_SPECIAL_DIM",
            Verdict::NotSpecialS4 => "NOT_SPECIAL_S4",
            Verdict::NotSpecialType1S3 => "NOT_SPECIAL_TYPE_1_S3",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialityVerdict {
    pub verdict: Verdict,
    #[serde(rename = "dim_P_G")]
    pub dim_p_g: u64,
    #[serde(rename = "dim_Pf_lower")]
    pub dim_pf_lower: u64,
    #[serde(rename = "s_minus_3")]
    pub expected_z_dim: u64,
    /// Set when the verdict relies on injectivity of the mod-`p` Prym map.
    pub assumes_condition_star: bool,
    pub reasons: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// `sum_{ {n,-n}, 2n != 0 } d_n d_{-n} + sum_{2n = 0} d_n (d_n + 1) / 2`
/// with `d_n` the anti-invariant dimensions.
pub fn dim_p_g(profile: &EigenspaceProfile) -> u64 {
    let entries = profile.entries();
    profile
        .pair_representatives()
        .map(|k| {
            let e = &entries[k];
            let self_dual = profile.is_self_dual(k);
            let (a, b) = e.signature;
            if self_dual {
                a as u64 * (a as u64 + 1) / 2
            } else {
                a as u64 * b as u64
            }
        })
        .sum()
}

/// Symmetric-space dimension of the factor attached to an eigenspace of
/// type `(a, b)`: `ab` (unitary) or `a(a+1)/2` (symplectic, self-dual).
pub fn delta(a: u32, b: u32, self_dual: bool) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    if self_dual {
        a as u64 * (a as u64 + 1) / 2
    } else {
        a as u64 * b as u64
    }
}

/// Distinct factor classes: `(self_dual, {a, b})` over pairs `{n, -n}`
/// with nontrivial type. Classes of equal type are counted once.
pub fn factor_classes(profile: &EigenspaceProfile) -> BTreeSet<(bool, (u32, u32))> {
    let entries = profile.entries();
    profile
        .pair_representatives()
        .filter_map(|k| {
            let (a, b) = entries[k].signature;
            (a > 0 && b > 0).then(|| (profile.is_self_dual(k), (a.min(b), a.max(b))))
        })
        .collect()
}

pub fn dim_pf_lower(profile: &EigenspaceProfile) -> u64 {
    factor_classes(profile)
        .into_iter()
        .map(|(self_dual, (a, b))| delta(a, b, self_dual))
        .sum()
}

/// Dimension of the image of the family in the moduli space: `s - 3`.
pub fn expected_z_dim(s: usize) -> u64 {
    s.saturating_sub(3) as u64
}

/// Applies the rule chain. Reducible data are rejected.
pub fn classify(datum: &PrymDatum) -> Result<SpecialityVerdict> {
    let matrix = datum.matrix();
    if !matrix.is_irreducible() {
        return Err(Error::Reducible(matrix.modulus()));
    }
    let profile = EigenspaceProfile::from_datum(datum)?;
    Ok(classify_profile(&profile))
}

/// The rule chain on a precomputed profile.
pub fn classify_profile(profile: &EigenspaceProfile) -> SpecialityVerdict {
    let s = profile.num_points();
    let z = expected_z_dim(s);
    let pg = dim_p_g(profile);
    let classes = factor_classes(profile);
    let pf: u64 = classes.iter().map(|&(sd, (a, b))| delta(a, b, sd)).sum();
    let mut reasons = Vec::new();
    let mut warnings = Vec::new();
    let mut star = false;

    let verdict = if pg == z {
        reasons.push(format!(
            "pel-dimension: dim P(G) = {pg} = s-3, family equals P(G)"
        ));
        Verdict::SpecialPel
    } else if pf > z {
        reasons.push(format!("factor-dimension: dim P_f >= {pf} > s-3 = {z}"));
        Verdict::NotSpecialDim
    } else if s == 4 && pg > 1 {
        star = true;
        reasons.push(format!(
            "four-points: s = 4 and dim P(G) = {pg} > 1, product identity cannot hold"
        ));
        Verdict::NotSpecialS4
    } else if pg > z
        && classes
            .iter()
            .any(|&(_, t)| t == (1, z as u32) || t == (z as u32, 1))
    {
        star = true;
        reasons.push(format!(
            "type-1-s-3: dim P(G) = {pg} > s-3 with an eigenspace of type (1, {z})"
        ));
        Verdict::NotSpecialType1S3
    } else {
        if pg < z {
            warnings.push(format!(
                "dim P(G) = {pg} < s-3 = {z}; no rule applies to this case"
            ));
        }
        reasons.push("no-rule: none of the criteria decide this family".to_string());
        Verdict::Inconclusive
    };

    SpecialityVerdict {
        verdict,
        dim_p_g: pg,
        dim_pf_lower: pf,
        expected_z_dim: z,
        assumes_condition_star: star,
        reasons,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover_data::CoverMatrix;

    fn full(n: u32, row: &[u32]) -> PrymDatum {
        PrymDatum::full(CoverMatrix::new(n, vec![row.to_vec()]).unwrap()).unwrap()
    }

    fn profile(d: &PrymDatum) -> EigenspaceProfile {
        EigenspaceProfile::from_datum(d).unwrap()
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(1, 4, false), 4);
        assert_eq!(delta(2, 2, true), 3);
        assert_eq!(delta(0, 5, false), 0);
    }

    #[test]
    fn expected_dims() {
        assert_eq!(expected_z_dim(4), 1);
        assert_eq!(expected_z_dim(3), 0);
        assert_eq!(expected_z_dim(7), 4);
    }

    #[test]
    fn picard_family_is_special() {
        let d = full(3, &[1, 1, 2, 2]);
        assert_eq!(dim_p_g(&profile(&d)), 1);
        let v = classify(&d).unwrap();
        assert_eq!(v.verdict, Verdict::SpecialPel);
        assert!(!v.assumes_condition_star);
    }

    #[test]
    fn hyperelliptic_series() {
        // d = s/2 - 1 on the single self-dual character, dim = d(d+1)/2
        let expect = [
            (4, 1, Verdict::SpecialPel),
            (6, 3, Verdict::SpecialPel),
            (8, 6, Verdict::NotSpecialDim),
            (10, 10, Verdict::NotSpecialDim),
        ];
        for (s, dim, verdict) in expect {
            let v = classify(&full(2, &vec![1; s])).unwrap();
            assert_eq!((v.dim_p_g, v.verdict), (dim, verdict), "s = {s}");
            assert_eq!(v.dim_pf_lower, dim);
        }
    }

    #[test]
    fn four_points_rule() {
        // (1,2,3,4) mod 5: every nonzero character has d = 1, two pairs
        let v = classify(&full(5, &[1, 2, 3, 4])).unwrap();
        assert_eq!(v.dim_p_g, 2);
        assert_eq!(v.dim_pf_lower, 1);
        assert_eq!(v.verdict, Verdict::NotSpecialS4);
        assert!(v.assumes_condition_star);
    }

    #[test]
    fn reducible_rejected() {
        let m = CoverMatrix::new(2, vec![vec![1, 1, 1, 1], vec![1, 1, 1, 1]]).unwrap();
        let d = PrymDatum::full(m).unwrap();
        assert_eq!(classify(&d).unwrap_err(), Error::Reducible(2));
    }

    #[test]
    fn verdict_json_keys() {
        let v = classify(&full(3, &[1, 1, 2, 2])).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["verdict"], "SPECIAL_PEL");
        assert_eq!(json["dim_P_G"], 1);
        assert_eq!(json["dim_Pf_lower"], 1);
        assert_eq!(json["s_minus_3"], 1);
        assert_eq!(json["assumes_condition_star"], false);
        assert!(json.get("warnings").is_none());
        assert_eq!(
            serde_json::to_value(Verdict::NotSpecialType1S3).unwrap(),
            "NOT_SPECIAL_TYPE_1_S3"
        );
    }
}
