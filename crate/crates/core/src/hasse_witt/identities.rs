use std::collections::HashMap;

use serde::{Serialize, Serializer};

use crate::cover_data::{CoverMatrix, GroupElement};
use crate::error::{Error, Result};
use crate::hodge::{alpha, characters, eigen_dim};

use super::{binomial_tops, check_prime, hw_entry, hw_matrix, upsilon, SparsePoly};

/// A `z_h`-adic valuation; `Infinite` for the zero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    fn from_option(v: Option<u32>) -> Valuation {
        v.map_or(Valuation::Infinite, |x| Valuation::Finite(x as u64))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => serializer.serialize_u64(*v),
            Valuation::Infinite => serializer.serialize_str("inf"),
        }
    }
}

fn check_pair(s: usize, i: usize, h: usize) -> Result<()> {
    if i == h || !(1..=s).contains(&i) || !(1..=s).contains(&h) {
        return Err(Error::Precondition(format!(
            "need distinct variable indices in 1..={s}, got ({i}, {h})"
        )));
    }
    Ok(())
}

/// Largest `r` such that `z_h^r` divides `poly` restricted to `z_i = 0`
/// (1-based indices).
pub fn divisibility_exponent(poly: &SparsePoly, i: usize, h: usize) -> Result<Valuation> {
    check_pair(poly.num_vars(), i, h)?;
    Ok(Valuation::from_option(
        poly.divisibility_exponent(i - 1, h - 1),
    ))
}

/// Divisibility exponents in the form used by the speciality arguments.
///
/// * `r`: exponent of `z_h` in `A_n |_{z_i = 0}` for a `1 x 1` block.
/// * `r_pair`: the same for `A_n A_{-n}` when both blocks are `1 x 1`.
/// * `u[h' - 1]`: exponent of `z_h` in `(A_{-n}^{-1} (A_n)_{h'h'}) |_{z_i = 0}`
///   when `n` has type `(s - 3, 1)`; `None` where a restriction vanishes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentProfile {
    pub r: Option<Valuation>,
    pub r_pair: Option<Valuation>,
    pub u: Option<Vec<Option<i64>>>,
}

struct Shape {
    d: u32,
    d_neg: u32,
    s: usize,
}

impl Shape {
    fn of(matrix: &CoverMatrix, n: &GroupElement) -> Shape {
        Shape {
            d: eigen_dim(matrix, n),
            d_neg: eigen_dim(matrix, &n.neg(matrix.modulus())),
            s: matrix.num_cols(),
        }
    }

    fn has_r(&self) -> bool {
        self.d == 1
    }

    fn has_pair(&self) -> bool {
        self.d == 1 && self.d_neg == 1
    }

    fn has_u(&self) -> bool {
        self.s >= 4 && self.d_neg == 1 && self.d as usize == self.s - 3
    }

    fn check(&self) -> Result<()> {
        if self.has_r() || self.has_u() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "eigenspace dimensions ({}, {}) admit no exponent formula",
                self.d, self.d_neg
            )))
        }
    }
}

/// Valuation of `binomial_sum(tops, degree)` restricted to `z_i = 0`, read
/// off the exponent bounds: the smallest admissible `l_h` is what the other
/// surviving variables cannot absorb.
fn closed_valuation(tops: &[u32], degree: i64, i: usize, h: usize) -> Valuation {
    let without_i: i64 = tops
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .map(|(_, &c)| c as i64)
        .sum();
    if degree < 0 || degree > without_i {
        return Valuation::Infinite;
    }
    let others = without_i - tops[h] as i64;
    Valuation::Finite((degree - others).max(0) as u64)
}

fn signed_difference(a: Valuation, b: Valuation) -> Option<i64> {
    Some(a.finite()? as i64 - b.finite()? as i64)
}

/// Exponents from the binomial exponent bounds alone (1-based `i`, `h`).
pub fn closed_form_exponents(
    matrix: &CoverMatrix,
    n: &GroupElement,
    p: u64,
    i: usize,
    h: usize,
) -> Result<ExponentProfile> {
    check_prime(p, matrix.modulus())?;
    let shape = Shape::of(matrix, n);
    check_pair(shape.s, i, h)?;
    shape.check()?;
    let (i0, h0) = (i - 1, h - 1);
    let neg = n.neg(matrix.modulus());
    let tops = binomial_tops(matrix, n, p)?;
    let tops_neg = binomial_tops(matrix, &neg, p)?;
    let top_degree = p as i64 - 1;

    let r = shape
        .has_r()
        .then(|| closed_valuation(&tops, top_degree, i0, h0));
    let r_pair = shape.has_pair().then(|| {
        closed_valuation(&tops, top_degree, i0, h0)
            + closed_valuation(&tops_neg, top_degree, i0, h0)
    });
    let u = shape.has_u().then(|| {
        let denominator = closed_valuation(&tops_neg, top_degree, i0, h0);
        (1..=shape.d)
            .map(|k| {
                let diag = closed_valuation(&tops, upsilon(shape.d, k, k, p), i0, h0);
                signed_difference(diag, denominator)
            })
            .collect()
    });
    Ok(ExponentProfile { r, r_pair, u })
}

/// The same exponents measured on the actual polynomials.
pub fn polynomial_exponents(
    matrix: &CoverMatrix,
    n: &GroupElement,
    p: u64,
    i: usize,
    h: usize,
) -> Result<ExponentProfile> {
    check_prime(p, matrix.modulus())?;
    let shape = Shape::of(matrix, n);
    check_pair(shape.s, i, h)?;
    shape.check()?;
    let neg = n.neg(matrix.modulus());

    let r = if shape.has_r() {
        Some(divisibility_exponent(&hw_entry(matrix, n, 1, 1, p)?, i, h)?)
    } else {
        None
    };
    let r_pair = if shape.has_pair() {
        let product = hw_entry(matrix, n, 1, 1, p)?.mul(&hw_entry(matrix, &neg, 1, 1, p)?);
        Some(divisibility_exponent(&product, i, h)?)
    } else {
        None
    };
    let u = if shape.has_u() {
        let block = hw_matrix(matrix, n, p)?;
        let denominator = divisibility_exponent(&hw_entry(matrix, &neg, 1, 1, p)?, i, h)?;
        let mut values = Vec::with_capacity(shape.d as usize);
        for k in 1..=shape.d {
            let diag = divisibility_exponent(block.entry(k, k), i, h)?;
            values.push(signed_difference(diag, denominator));
        }
        Some(values)
    } else {
        None
    };
    Ok(ExponentProfile { r, r_pair, u })
}

/// `A_a A_{-a}` for a character with `d(a) = d(-a) = 1`.
pub fn pair_product(matrix: &CoverMatrix, a: &GroupElement, p: u64) -> Result<SparsePoly> {
    check_prime(p, matrix.modulus())?;
    let na = a.neg(matrix.modulus());
    for x in [a, &na] {
        let d = eigen_dim(matrix, x);
        if d != 1 {
            return Err(Error::Precondition(format!(
                "character {x} has d = {d}, need 1"
            )));
        }
    }
    Ok(hw_entry(matrix, a, 1, 1, p)?.mul(&hw_entry(matrix, &na, 1, 1, p)?))
}

/// `A_a A_{-a} = A_{a'} A_{-a'}` for four branch points and `1 x 1` blocks.
pub fn product_identity_holds(
    matrix: &CoverMatrix,
    a: &GroupElement,
    a2: &GroupElement,
    p: u64,
) -> Result<bool> {
    if matrix.num_cols() != 4 {
        return Err(Error::Precondition(format!(
            "product identity needs s = 4, got {}",
            matrix.num_cols()
        )));
    }
    let lhs = pair_product(matrix, a, p)?;
    let rhs = pair_product(matrix, a2, p)?;
    Ok(lhs == rhs)
}

/// One class representative per pair `{a, -a}` with `d(a) = d(-a) = 1`.
pub fn characters_with_unit_pairs(matrix: &CoverMatrix) -> Result<Vec<GroupElement>> {
    let reps = characters(matrix)?;
    let modulus = matrix.modulus();
    let class_of: HashMap<Vec<u32>, GroupElement> = reps
        .iter()
        .map(|n| (alpha(matrix, n).values, n.clone()))
        .collect();
    Ok(reps
        .iter()
        .filter(|a| {
            let neg = &class_of[&alpha(matrix, &a.neg(modulus)).values];
            eigen_dim(matrix, a) == 1 && eigen_dim(matrix, neg) == 1 && *a <= neg
        })
        .cloned()
        .collect())
}

/// Class representatives of type `{1, s - 3}`, oriented so that
/// `d(-n) = 1`, one per pair `{n, -n}`.
pub fn scaled_row_candidates(matrix: &CoverMatrix) -> Result<Vec<GroupElement>> {
    if matrix.num_cols() < 4 {
        return Ok(Vec::new());
    }
    let reps = characters(matrix)?;
    let modulus = matrix.modulus();
    let class_of: HashMap<Vec<u32>, GroupElement> = reps
        .iter()
        .map(|n| (alpha(matrix, n).values, n.clone()))
        .collect();
    let mut out: Vec<GroupElement> = Vec::new();
    for n in &reps {
        let Ok(oriented) = orient(matrix, n) else {
            continue;
        };
        let rep = class_of[&alpha(matrix, &oriented).values].clone();
        let neg = class_of[&alpha(matrix, &rep.neg(modulus)).values].clone();
        if !out.contains(&rep) && !out.contains(&neg) {
            out.push(rep);
        }
    }
    Ok(out)
}

/// Returns `x` or `-x`, whichever has `d(x) = s - 3` and `d(-x) = 1`.
fn orient(matrix: &CoverMatrix, x: &GroupElement) -> Result<GroupElement> {
    let s = matrix.num_cols();
    if s < 4 {
        return Err(Error::Precondition(format!("need s >= 4, got {s}")));
    }
    let t = (s - 3) as u32;
    let neg = x.neg(matrix.modulus());
    let (d, dn) = (eigen_dim(matrix, x), eigen_dim(matrix, &neg));
    if d == t && dn == 1 {
        Ok(x.clone())
    } else if d == 1 && dn == t {
        Ok(neg)
    } else {
        Err(Error::Precondition(format!(
            "character {x} has type ({d}, {dn}), need {{1, {t}}}"
        )))
    }
}

/// `A_{-n'} (A_n)_{v,t} = A_{-n} (A_{n'})_{v,t}` for every entry, where both
/// characters have type `{1, s - 3}` oriented so that `d(-n) = d(-n') = 1`.
pub fn scaled_row_identity_holds(
    matrix: &CoverMatrix,
    n: &GroupElement,
    n2: &GroupElement,
    p: u64,
) -> Result<bool> {
    check_prime(p, matrix.modulus())?;
    let modulus = matrix.modulus();
    let n = orient(matrix, n)?;
    let n2 = orient(matrix, n2)?;
    let a = hw_entry(matrix, &n.neg(modulus), 1, 1, p)?;
    let a2 = hw_entry(matrix, &n2.neg(modulus), 1, 1, p)?;
    let block = hw_matrix(matrix, &n, p)?;
    let block2 = hw_matrix(matrix, &n2, p)?;
    for (row, row2) in block.entries.iter().zip(&block2.entries) {
        for (x, x2) in row.iter().zip(row2) {
            if a2.mul(x) != a.mul(x2) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
