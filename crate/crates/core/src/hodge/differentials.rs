use serde::{Deserialize, Serialize};

use crate::cover_data::{CoverMatrix, GroupElement};
use crate::error::{Error, Result};

use super::{alpha_integral, eigen_dim};

/// `z^nu * prod_i w_i^{e_i} * prod_j (z - z_j)^{b_j} * dz^k`.
///
/// For a basis form `omega_{n,nu}` the `w`-exponents are the coordinates of
/// `n` and `b_j = floor(-alpha_j / N)` with `alpha_j = sum_i n_i r_ij`
/// computed in the integers (so it may exceed `N`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DifferentialMonomial {
    pub character: GroupElement,
    pub nu: u32,
    pub w_exponents: Vec<u64>,
    pub z_power: u64,
    pub branch_exponents: Vec<i64>,
    pub dz_power: u32,
}

impl DifferentialMonomial {
    /// Product of two forms, brought to normal form.
    pub fn mul(&self, other: &DifferentialMonomial, matrix: &CoverMatrix) -> DifferentialMonomial {
        let modulus = matrix.modulus();
        let product = DifferentialMonomial {
            character: self.character.add(&other.character, modulus),
            nu: self.nu + other.nu,
            w_exponents: self
                .w_exponents
                .iter()
                .zip(&other.w_exponents)
                .map(|(a, b)| a + b)
                .collect(),
            z_power: self.z_power + other.z_power,
            branch_exponents: self
                .branch_exponents
                .iter()
                .zip(&other.branch_exponents)
                .map(|(a, b)| a + b)
                .collect(),
            dz_power: self.dz_power + other.dz_power,
        };
        product.normalized(matrix)
    }

    /// Reduces every `w`-exponent into `[0, N)` using
    /// `w_i^N = prod_j (z - z_j)^{r_ij}`.
    pub fn normalized(mut self, matrix: &CoverMatrix) -> DifferentialMonomial {
        let n = matrix.modulus() as u64;
        for (i, e) in self.w_exponents.iter_mut().enumerate() {
            let carry = *e / n;
            *e %= n;
            if carry > 0 {
                for (j, b) in self.branch_exponents.iter_mut().enumerate() {
                    *b += (carry * matrix.entry(i, j) as u64) as i64;
                }
            }
        }
        self
    }

    /// Equality as a (possibly quadratic) differential, ignoring the
    /// bookkeeping `nu` index.
    pub fn same_form(&self, other: &DifferentialMonomial) -> bool {
        self.w_exponents == other.w_exponents
            && self.z_power == other.z_power
            && self.branch_exponents == other.branch_exponents
            && self.dz_power == other.dz_power
    }
}

/// The basis `omega_{n,0}, ..., omega_{n,d(n)-1}` of the `n`-eigenspace of
/// holomorphic differentials. Empty when `d(n) = 0`.
pub fn differential_basis(matrix: &CoverMatrix, n: &GroupElement) -> Vec<DifferentialMonomial> {
    let d = eigen_dim(matrix, n);
    if d == 0 {
        return Vec::new();
    }
    let modulus = matrix.modulus() as i64;
    let branch: Vec<i64> = alpha_integral(matrix, n)
        .into_iter()
        .map(|a| (-(a as i64)).div_euclid(modulus))
        .collect();
    (0..d)
        .map(|nu| DifferentialMonomial {
            character: n.clone(),
            nu,
            w_exponents: n.coords().iter().map(|&c| c as u64).collect(),
            z_power: nu as u64,
            branch_exponents: branch.clone(),
            dz_power: 1,
        })
        .collect()
}

/// Selects `omega_{character, nu}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormIndex {
    pub character: GroupElement,
    pub nu: u32,
}

impl FormIndex {
    pub fn new(character: GroupElement, nu: u32) -> FormIndex {
        FormIndex { character, nu }
    }

    fn form(&self, matrix: &CoverMatrix) -> Result<DifferentialMonomial> {
        let d = eigen_dim(matrix, &self.character);
        if d == 0 || self.nu >= d {
            return Err(Error::Precondition(format!(
                "omega_({}, {}) does not exist: eigenspace has dimension {d}",
                self.character, self.nu
            )));
        }
        Ok(differential_basis(matrix, &self.character).swap_remove(self.nu as usize))
    }
}

/// Decides `omega_a . omega_b = omega_a2 . omega_b2` as quadratic
/// differentials. Both sides must have the same character sum.
pub fn section_product_equal(
    matrix: &CoverMatrix,
    left: (&FormIndex, &FormIndex),
    right: (&FormIndex, &FormIndex),
) -> Result<bool> {
    let modulus = matrix.modulus();
    let left_sum = left.0.character.add(&left.1.character, modulus);
    let right_sum = right.0.character.add(&right.1.character, modulus);
    if left_sum != right_sum {
        return Err(Error::NotComparable {
            left: left_sum.coords().to_vec(),
            right: right_sum.coords().to_vec(),
        });
    }
    let lhs = left.0.form(matrix)?.mul(&left.1.form(matrix)?, matrix);
    let rhs = right.0.form(matrix)?.mul(&right.1.form(matrix)?, matrix);
    Ok(lhs.same_form(&rhs))
}
