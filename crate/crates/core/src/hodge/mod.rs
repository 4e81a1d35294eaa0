//! Characteristic-zero invariants: eigenspace dimensions of holomorphic
//! differentials, genera, the `H`-anti-invariant part, Prym dimension and
//! polarization type.
//!
//! Characters of the deck group are written as vectors `n` in `(Z/N)^m`
//! acting through `n . col_j`. Two vectors give the same character exactly
//! when their alpha-vectors agree, so for reducible matrices the character
//! group is `(Z/N)^m` modulo the left annihilator of the matrix; for
//! irreducible ones it is all of `(Z/N)^m`.

mod differentials;
mod profile;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::cover_data::{CoverMatrix, GroupElement, PrymDatum, DEFAULT_MAX_GROUP_SIZE};
use crate::error::{Error, Result};

pub use differentials::{
    differential_basis, section_product_equal, DifferentialMonomial, FormIndex,
};
pub use profile::{EigenspaceEntry, EigenspaceProfile};

/// `alpha_j = sum_i n_i r_ij mod N`, lifted to `[0, N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlphaVector {
    pub character: GroupElement,
    pub values: Vec<u32>,
}

impl AlphaVector {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&a| a == 0)
    }
}

pub fn alpha(matrix: &CoverMatrix, n: &GroupElement) -> AlphaVector {
    let modulus = matrix.modulus() as u64;
    let values = alpha_integral(matrix, n)
        .into_iter()
        .map(|a| (a % modulus) as u32)
        .collect();
    AlphaVector {
        character: n.clone(),
        values,
    }
}

/// `sum_i n_i r_ij` as an integer, with `n_i` and `r_ij` taken in `[0, N)`.
pub fn alpha_integral(matrix: &CoverMatrix, n: &GroupElement) -> Vec<u64> {
    assert_eq!(
        n.rank(),
        matrix.num_rows(),
        "character length must equal the number of rows"
    );
    (0..matrix.num_cols())
        .map(|j| {
            n.coords()
                .iter()
                .zip(matrix.rows())
                .map(|(&ni, row)| ni as u64 * row[j] as u64)
                .sum()
        })
        .collect()
}

/// `[-a]_N` for a residue `a`.
pub(crate) fn neg_residue(a: u32, modulus: u32) -> u32 {
    (modulus - a) % modulus
}

/// Dimension of the `n`-eigenspace of holomorphic differentials,
/// `-1 + sum_j <-alpha_j / N>`, and `0` for the trivial character.
///
/// The matrix must be valid (columns summing to zero); then the sum of
/// fractional parts is an integer.
pub fn eigen_dim(matrix: &CoverMatrix, n: &GroupElement) -> u32 {
    eigen_dim_of_alpha(&alpha(matrix, n).values, matrix.modulus())
}

pub(crate) fn eigen_dim_of_alpha(alpha: &[u32], modulus: u32) -> u32 {
    if alpha.iter().all(|&a| a == 0) {
        return 0;
    }
    let scaled: u32 = alpha.iter().map(|&a| neg_residue(a, modulus)).sum();
    debug_assert_eq!(
        scaled % modulus,
        0,
        "fractional parts must sum to an integer"
    );
    scaled / modulus - 1
}

/// One representative per character, in lexicographic order: for each
/// distinct alpha-vector the smallest `n` producing it.
pub fn characters(matrix: &CoverMatrix) -> Result<Vec<GroupElement>> {
    let m = matrix.num_rows();
    let modulus = matrix.modulus();
    let space = (modulus as u64)
        .checked_pow(m as u32)
        .filter(|&x| x <= DEFAULT_MAX_GROUP_SIZE)
        .ok_or(Error::ResourceCap {
            what: "character space size",
            limit: DEFAULT_MAX_GROUP_SIZE,
        })?;
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut reps = Vec::new();
    let mut coords = vec![0u32; m];
    for _ in 0..space {
        let n = GroupElement::new(coords.clone());
        if seen.insert(alpha(matrix, &n).values) {
            reps.push(n);
        }
        for k in (0..m).rev() {
            coords[k] += 1;
            if coords[k] < modulus {
                break;
            }
            coords[k] = 0;
        }
    }
    Ok(reps)
}

/// `2 g - 2 = d (-2 + sum_j (1 - 1/m_j))` for a cover of degree `d` whose
/// branch points have ramification orders `m_j`. Each `d / m_j` must be an
/// integer.
fn riemann_hurwitz(degree: u64, orders: &[u32]) -> Result<u64> {
    let mut twice_minus_two: i64 = -2 * degree as i64;
    for &mj in orders {
        let mj = mj as u64;
        if !degree.is_multiple_of(mj) {
            return Err(Error::Consistency(format!(
                "ramification order {mj} does not divide degree {degree}"
            )));
        }
        twice_minus_two += (degree - degree / mj) as i64;
    }
    let twice = twice_minus_two + 2;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::Consistency(format!(
            "Riemann-Hurwitz gives non-integral or negative genus (2g = {twice})"
        )));
    }
    Ok(twice as u64 / 2)
}

/// Genus of the total space via Riemann-Hurwitz over the projective line.
pub fn genus_total(matrix: &CoverMatrix) -> Result<u64> {
    matrix.ensure_valid()?;
    let group = matrix.group_elements()?;
    riemann_hurwitz(group.len() as u64, &matrix.local_monodromy_orders())
}

/// Genus of the total space as the sum of all eigenspace dimensions.
pub fn genus_from_characters(matrix: &CoverMatrix) -> Result<u64> {
    matrix.ensure_valid()?;
    Ok(characters(matrix)?
        .iter()
        .map(|n| eigen_dim(matrix, n) as u64)
        .sum())
}

/// Genus of `C = C~/H` via Riemann-Hurwitz for the `G/H`-cover of the line.
pub fn quotient_genus(datum: &PrymDatum) -> Result<u64> {
    let orders = datum
        .matrix()
        .columns()
        .iter()
        .map(|c| datum.order_in_quotient(c))
        .collect::<Result<Vec<_>>>()?;
    riemann_hurwitz(datum.quotient_order() as u64, &orders)
}

/// Genus of `C~/H` as the sum of eigenspace dimensions over characters
/// trivial on `H`.
pub fn quotient_genus_from_characters(datum: &PrymDatum) -> Result<u64> {
    let matrix = datum.matrix();
    Ok(characters(matrix)?
        .iter()
        .filter(|n| datum.is_h_invariant(n))
        .map(|n| eigen_dim(matrix, n) as u64)
        .sum())
}

/// Dimension of the `n`-eigenspace inside the `H`-anti-invariant part:
/// all of it if `n` is nontrivial on `H`, nothing otherwise.
pub fn anti_invariant_dim(datum: &PrymDatum, n: &GroupElement) -> u32 {
    if datum.is_h_invariant(n) {
        0
    } else {
        eigen_dim(datum.matrix(), n)
    }
}

/// `l = g~ - g`.
pub fn prym_dimension(datum: &PrymDatum) -> Result<u64> {
    let total = genus_total(datum.matrix())?;
    let base = quotient_genus(datum)?;
    total.checked_sub(base).ok_or_else(|| {
        Error::Consistency(format!("quotient genus {base} exceeds total genus {total}"))
    })
}

/// `l` as the sum of anti-invariant eigenspace dimensions.
pub fn prym_dimension_from_characters(datum: &PrymDatum) -> Result<u64> {
    Ok(characters(datum.matrix())?
        .iter()
        .map(|n| anti_invariant_dim(datum, n) as u64)
        .sum())
}

/// True iff `C~ -> C` has branch points: some column has a nontrivial
/// multiple in `H`, i.e. its order drops in `G/H`.
pub fn h_cover_is_ramified(datum: &PrymDatum) -> Result<bool> {
    let orders = datum.matrix().local_monodromy_orders();
    for (j, col) in datum.matrix().columns().iter().enumerate() {
        if datum.order_in_quotient(col)? < orders[j] {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Polarization type `D = (1, ..., 1, |H|, ..., |H|)` of the Prym variety:
/// `1` occurs `g - 1` times for an unramified `C~ -> C` and `g` times
/// otherwise.
pub fn polarization_type(datum: &PrymDatum) -> Result<Vec<u64>> {
    if datum.h_elements().is_trivial() {
        return Ok(Vec::new());
    }
    let l = prym_dimension(datum)?;
    let g = quotient_genus(datum)?;
    let ones = if h_cover_is_ramified(datum)? {
        g
    } else {
        g.checked_sub(1).ok_or_else(|| {
            Error::Consistency("unramified cover of a genus-0 curve by nontrivial H".into())
        })?
    };
    if ones > l {
        return Err(Error::Consistency(format!(
            "polarization needs {ones} unit entries but l = {l}"
        )));
    }
    let h = datum.h_elements().len() as u64;
    let mut d = vec![1u64; ones as usize];
    d.resize(l as usize, h);
    Ok(d)
}

/// Signature `(a, b)` of the `n`-eigenspace of `H^1_-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EigenspaceType {
    pub a: u32,
    pub b: u32,
}

impl EigenspaceType {
    /// Type `(a, 0)` or `(0, b)`.
    pub fn is_trivial(&self) -> bool {
        self.a == 0 || self.b == 0
    }

    /// `{a, b}` as a sorted pair.
    pub fn unordered(&self) -> (u32, u32) {
        (self.a.min(self.b), self.a.max(self.b))
    }
}

pub fn eigenspace_type(datum: &PrymDatum, n: &GroupElement) -> EigenspaceType {
    let modulus = datum.matrix().modulus();
    EigenspaceType {
        a: anti_invariant_dim(datum, n),
        b: anti_invariant_dim(datum, &n.neg(modulus)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover_data::subgroup_closure;

    fn mat(n: u32, rows: &[&[u32]]) -> CoverMatrix {
        CoverMatrix::new(n, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn el(c: &[u32]) -> GroupElement {
        GroupElement::new(c.to_vec())
    }

    fn picard() -> CoverMatrix {
        mat(3, &[&[1, 1, 2, 2]])
    }

    fn hyperelliptic(s: usize) -> CoverMatrix {
        CoverMatrix::new(2, vec![vec![1; s]]).unwrap()
    }

    fn klein() -> CoverMatrix {
        mat(2, &[&[1, 1, 0, 0], &[0, 0, 1, 1]])
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(&picard(), &el(&[1])).values, vec![1, 1, 2, 2]);
        assert_eq!(alpha(&picard(), &el(&[2])).values, vec![2, 2, 1, 1]);
        assert!(alpha(&klein(), &el(&[0, 0])).is_zero());
        assert_eq!(alpha_integral(&picard(), &el(&[2])), vec![2, 2, 4, 4]);
    }

    #[test]
    fn eigen_dim_examples() {
        assert_eq!(eigen_dim(&picard(), &el(&[0])), 0);
        assert_eq!(eigen_dim(&picard(), &el(&[1])), 1);
        assert_eq!(eigen_dim(&hyperelliptic(6), &el(&[1])), 2);
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus_total(&hyperelliptic(4)).unwrap(), 1);
        assert_eq!(genus_total(&picard()).unwrap(), 2);
        assert_eq!(genus_total(&hyperelliptic(6)).unwrap(), 2);
        for m in [hyperelliptic(4), picard(), hyperelliptic(6), klein()] {
            assert_eq!(genus_total(&m).unwrap(), genus_from_characters(&m).unwrap());
        }
    }

    #[test]
    fn reducible_matrix_uses_character_classes() {
        let m = mat(2, &[&[1, 1, 1, 1], &[1, 1, 1, 1]]);
        assert_eq!(characters(&m).unwrap(), vec![el(&[0, 0]), el(&[0, 1])]);
        assert_eq!(genus_total(&m).unwrap(), 1);
        assert_eq!(genus_from_characters(&m).unwrap(), 1);
    }

    #[test]
    fn quotient_genus_examples() {
        let full = PrymDatum::full(picard()).unwrap();
        assert_eq!(quotient_genus(&full).unwrap(), 0);

        let d = subgroup_closure(&klein(), &[el(&[1, 0])], false).unwrap();
        assert_eq!(quotient_genus(&d).unwrap(), 0);
        assert_eq!(quotient_genus_from_characters(&d).unwrap(), 0);

        let full6 = PrymDatum::full(hyperelliptic(6)).unwrap();
        assert_eq!(quotient_genus(&full6).unwrap(), 0);
    }

    #[test]
    fn anti_invariant_examples() {
        let full = PrymDatum::full(picard()).unwrap();
        assert_eq!(anti_invariant_dim(&full, &el(&[0])), 0);
        assert_eq!(anti_invariant_dim(&full, &el(&[1])), 1);
        let d = subgroup_closure(&klein(), &[el(&[1, 0])], false).unwrap();
        assert_eq!(anti_invariant_dim(&d, &el(&[0, 1])), 0);
    }

    #[test]
    fn prym_dimension_examples() {
        let p = PrymDatum::full(picard()).unwrap();
        assert_eq!(prym_dimension(&p).unwrap(), 2);
        assert_eq!(prym_dimension_from_characters(&p).unwrap(), 2);
        let e = PrymDatum::full(hyperelliptic(4)).unwrap();
        assert_eq!(prym_dimension(&e).unwrap(), 1);
    }

    #[test]
    fn polarization_examples() {
        let e = PrymDatum::full(hyperelliptic(4)).unwrap();
        assert_eq!(polarization_type(&e).unwrap(), vec![2]);
        let p = PrymDatum::full(picard()).unwrap();
        assert_eq!(polarization_type(&p).unwrap(), vec![3, 3]);
        let h = PrymDatum::full(hyperelliptic(6)).unwrap();
        assert_eq!(polarization_type(&h).unwrap(), vec![2, 2]);
    }

    #[test]
    fn polarization_of_unramified_double_cover() {
        // (Z/2)^2 branched at 6 points with no column equal to (1,1), so
        // H = <(1,1)> acts freely: C~ -> C is etale, g(C) = 2, g(C~) = 3.
        let m = mat(2, &[&[1, 1, 0, 0, 1, 1], &[0, 0, 1, 1, 0, 0]]);
        let d = subgroup_closure(&m, &[el(&[1, 1])], false).unwrap();
        assert!(!h_cover_is_ramified(&d).unwrap());
        assert_eq!(quotient_genus(&d).unwrap(), 2);
        assert_eq!(genus_total(&m).unwrap(), 3);
        assert_eq!(polarization_type(&d).unwrap(), vec![1]);
    }

    #[test]
    fn type_examples() {
        let p = PrymDatum::full(picard()).unwrap();
        assert_eq!(
            eigenspace_type(&p, &el(&[1])),
            EigenspaceType { a: 1, b: 1 }
        );
        let h = PrymDatum::full(hyperelliptic(6)).unwrap();
        assert_eq!(
            eigenspace_type(&h, &el(&[1])),
            EigenspaceType { a: 2, b: 2 }
        );
        let d = subgroup_closure(&klein(), &[el(&[1, 0])], false).unwrap();
        let t = eigenspace_type(&d, &el(&[0, 1]));
        assert_eq!(t, EigenspaceType { a: 0, b: 0 });
        assert!(t.is_trivial());
    }
}
