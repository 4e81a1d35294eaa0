//! Hasse-Witt matrices of abelian covers in characteristic `p`.
//!
//! For a prime `p = 1 + qN` the Hasse-Witt map preserves each character
//! eigenspace of `H^1(O)`. In a suitable basis the `(i, j)` entry of the
//! block for the character `n` is
//!
//! ```text
//! sum_{l_1 + ... + l_s = Y} prod_k C(c_k, l_k) z_k^{l_k},   c_k = q [-alpha_k]_N
//! ```
//!
//! with `Y = (d - i + 1)(p - 1) + (j - i)`, `d = d(n)` and `1 <= i, j <= d`.
//! The sign of the `j - i` term fixes the index convention: it is the one
//! that reproduces the Cartier-Manin matrix of `w^2 = f(z)` (entries
//! `[f^{(p-1)/2}]_{ip - j}`).

mod field;
mod identities;
mod poly;

use serde::{Deserialize, Serialize};

use crate::cover_data::{CoverMatrix, GroupElement, PrymDatum};
use crate::error::{Error, Result};
use crate::hodge::{alpha, anti_invariant_dim, characters, eigen_dim};

pub use field::{determinant, is_prime, ExtField, FieldElement};
pub use identities::{
    characters_with_unit_pairs, closed_form_exponents, divisibility_exponent, pair_product,
    polynomial_exponents, product_identity_holds, scaled_row_candidates, scaled_row_identity_holds,
    ExponentProfile, Valuation,
};
pub use poly::{Exponents, SparsePoly};

/// Upper end of the prime scan in [`choose_prime`].
pub const PRIME_SEARCH_LIMIT: u64 = 1 << 31;

/// Smallest prime `p >= max(lower, N + 1)` with `p = 1 mod N`.
pub fn choose_prime(modulus: u32, lower: u64) -> Result<u64> {
    if modulus < 2 {
        return Err(Error::Precondition(format!(
            "N must be >= 2, got {modulus}"
        )));
    }
    let n = modulus as u64;
    let start = lower.max(n + 1);
    // first candidate congruent to 1 mod N
    let mut p = start + (n + 1 - start % n) % n;
    while p < PRIME_SEARCH_LIMIT {
        if p % n == 1 && is_prime(p) {
            return Ok(p);
        }
        p += n;
    }
    Err(Error::ResourceCap {
        what: "prime search",
        limit: PRIME_SEARCH_LIMIT,
    })
}

/// Checks that `p` is a usable prime for modulus `N`.
pub fn check_prime(p: u64, modulus: u32) -> Result<u64> {
    if !is_prime(p) || p >= PRIME_SEARCH_LIMIT {
        return Err(Error::Precondition(format!(
            "{p} is not a prime below 2^31"
        )));
    }
    if p % modulus as u64 != 1 {
        return Err(Error::PrimeNotCongruent { p, modulus });
    }
    Ok((p - 1) / modulus as u64)
}

/// Degree of the `(i, j)` entry (1-based) of a `d x d` block.
pub fn upsilon(d: u32, i: u32, j: u32, p: u64) -> i64 {
    (d as i64 - i as i64 + 1) * (p as i64 - 1) + (j as i64 - i as i64)
}

/// `c_k = q [-alpha_k]_N`, all below `p`.
pub fn binomial_tops(matrix: &CoverMatrix, n: &GroupElement, p: u64) -> Result<Vec<u32>> {
    let q = check_prime(p, matrix.modulus())?;
    let modulus = matrix.modulus();
    Ok(alpha(matrix, n)
        .values
        .iter()
        .map(|&a| (q * ((modulus - a) % modulus) as u64) as u32)
        .collect())
}

/// Binomial coefficients `C(c, l)` mod `p` for `0 <= l <= c < p`.
struct Binomials {
    p: u64,
    fact: Vec<u64>,
    inv_fact: Vec<u64>,
}

impl Binomials {
    fn new(p: u64, top: u32) -> Binomials {
        let n = top as usize + 1;
        let mut fact = vec![1u64; n];
        for k in 1..n {
            fact[k] = field::mul_mod(fact[k - 1], k as u64, p);
        }
        let mut inv_fact = vec![1u64; n];
        inv_fact[n - 1] = field::inv_mod(fact[n - 1], p);
        for k in (1..n).rev() {
            inv_fact[k - 1] = field::mul_mod(inv_fact[k], k as u64, p);
        }
        Binomials { p, fact, inv_fact }
    }

    fn get(&self, c: u32, l: u32) -> u64 {
        if l > c {
            return 0;
        }
        let (c, l) = (c as usize, l as usize);
        field::mul_mod(
            field::mul_mod(self.fact[c], self.inv_fact[l], self.p),
            self.inv_fact[c - l],
            self.p,
        )
    }
}

/// `sum_{|l| = degree, l_k <= c_k} prod_k C(c_k, l_k) z^l` over `F_p`.
/// Every `c_k` must be below `p`; negative degrees give zero.
pub fn binomial_sum(tops: &[u32], degree: i64, p: u64) -> SparsePoly {
    let s = tops.len();
    let capacity: i64 = tops.iter().map(|&c| c as i64).sum();
    if degree < 0 || degree > capacity {
        return SparsePoly::zero(p, s);
    }
    assert!(
        tops.iter().all(|&c| (c as u64) < p),
        "binomial tops must be below p"
    );
    let binom = Binomials::new(p, tops.iter().copied().max().unwrap_or(0));
    // suffix[k] = sum of tops[k..]
    let mut suffix = vec![0i64; s + 1];
    for k in (0..s).rev() {
        suffix[k] = suffix[k + 1] + tops[k] as i64;
    }
    let mut terms = Vec::new();
    let mut e = Exponents::from_elem(0, s);
    fill(&mut terms, &mut e, 0, degree, 1 % p, tops, &suffix, &binom);
    SparsePoly::from_sorted_unchecked(p, s, terms)
}

#[allow(clippy::too_many_arguments)]
fn fill(
    out: &mut Vec<(Exponents, u64)>,
    e: &mut Exponents,
    k: usize,
    remaining: i64,
    coeff: u64,
    tops: &[u32],
    suffix: &[i64],
    binom: &Binomials,
) {
    if k == tops.len() {
        if remaining == 0 && coeff != 0 {
            out.push((e.clone(), coeff));
        }
        return;
    }
    let lo = (remaining - suffix[k + 1]).max(0);
    let hi = remaining.min(tops[k] as i64);
    for l in lo..=hi {
        e[k] = l as u32;
        let c = field::mul_mod(coeff, binom.get(tops[k], l as u32), binom.p);
        fill(out, e, k + 1, remaining - l, c, tops, suffix, binom);
    }
    e[k] = 0;
}

fn check_indices(d: u32, i: u32, j: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::Precondition(
            "character has a zero-dimensional eigenspace".into(),
        ));
    }
    if !(1..=d).contains(&i) || !(1..=d).contains(&j) {
        return Err(Error::Precondition(format!(
            "entry ({i}, {j}) outside a {d} x {d} block"
        )));
    }
    Ok(())
}

/// Entry `(i, j)` (1-based) of the Hasse-Witt block of the character `n`.
pub fn hw_entry(
    matrix: &CoverMatrix,
    n: &GroupElement,
    i: u32,
    j: u32,
    p: u64,
) -> Result<SparsePoly> {
    let tops = binomial_tops(matrix, n, p)?;
    let d = eigen_dim(matrix, n);
    check_indices(d, i, j)?;
    Ok(binomial_sum(&tops, upsilon(d, i, j, p), p))
}

/// The `d x d` Hasse-Witt block of one character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HwMatrix {
    pub character: GroupElement,
    pub d: u32,
    pub prime: u64,
    pub q: u64,
    /// `entries[i-1][j-1]`.
    pub entries: Vec<Vec<SparsePoly>>,
}

impl HwMatrix {
    /// Entry `(i, j)`, 1-based.
    pub fn entry(&self, i: u32, j: u32) -> &SparsePoly {
        &self.entries[i as usize - 1][j as usize - 1]
    }

    pub fn specialize(
        &self,
        field: &ExtField,
        point: &[FieldElement],
    ) -> Result<Vec<Vec<FieldElement>>> {
        check_point(field, point)?;
        Ok(self
            .entries
            .iter()
            .map(|row| row.iter().map(|e| e.evaluate(field, point)).collect())
            .collect())
    }

    /// Determinant of the block at a point of `T_s`.
    pub fn determinant_at(&self, field: &ExtField, point: &[FieldElement]) -> Result<FieldElement> {
        Ok(determinant(field, &self.specialize(field, point)?))
    }
}

pub fn hw_matrix(matrix: &CoverMatrix, n: &GroupElement, p: u64) -> Result<HwMatrix> {
    let q = check_prime(p, matrix.modulus())?;
    let tops = binomial_tops(matrix, n, p)?;
    let d = eigen_dim(matrix, n);
    check_indices(d, 1, 1)?;
    let entries = (1..=d)
        .map(|i| {
            (1..=d)
                .map(|j| binomial_sum(&tops, upsilon(d, i, j, p), p))
                .collect()
        })
        .collect();
    Ok(HwMatrix {
        character: n.clone(),
        d,
        prime: p,
        q,
        entries,
    })
}

fn check_point(field: &ExtField, point: &[FieldElement]) -> Result<()> {
    let k = field.degree() as usize;
    if point
        .iter()
        .any(|x| x.coeffs().len() != k || x.coeffs().iter().any(|&c| c >= field.characteristic()))
    {
        return Err(Error::Domain(format!(
            "point coordinates must be elements of F_{}^{}",
            field.characteristic(),
            k
        )));
    }
    for a in 0..point.len() {
        for b in a + 1..point.len() {
            if point[a] == point[b] {
                return Err(Error::Domain(format!(
                    "coordinates {} and {} coincide ({})",
                    a + 1,
                    b + 1,
                    point[a]
                )));
            }
        }
    }
    Ok(())
}

/// Evaluates at a point of `T_s` (pairwise distinct coordinates).
pub fn specialize(
    poly: &SparsePoly,
    field: &ExtField,
    point: &[FieldElement],
) -> Result<FieldElement> {
    if point.len() != poly.num_vars() {
        return Err(Error::Shape(format!(
            "point has {} coordinates, polynomial has {} variables",
            point.len(),
            poly.num_vars()
        )));
    }
    if field.characteristic() != poly.modulus() {
        return Err(Error::Domain("field characteristic differs from p".into()));
    }
    check_point(field, point)?;
    Ok(poly.evaluate(field, point))
}

/// Hasse-Witt blocks of every character with a nonzero anti-invariant
/// part, computed once for repeated ordinarity tests.
#[derive(Clone, Debug)]
pub struct OrdinarityTester {
    prime: u64,
    num_points: usize,
    blocks: Vec<HwMatrix>,
}

impl OrdinarityTester {
    pub fn new(datum: &PrymDatum, p: u64) -> Result<OrdinarityTester> {
        let matrix = datum.matrix();
        check_prime(p, matrix.modulus())?;
        let mut blocks = Vec::new();
        for n in characters(matrix)? {
            if anti_invariant_dim(datum, &n) > 0 {
                blocks.push(hw_matrix(matrix, &n, p)?);
            }
        }
        Ok(OrdinarityTester {
            prime: p,
            num_points: matrix.num_cols(),
            blocks,
        })
    }

    pub fn blocks(&self) -> &[HwMatrix] {
        &self.blocks
    }

    /// Every anti-invariant block is invertible at the point.
    pub fn is_ordinary_at(&self, field: &ExtField, point: &[FieldElement]) -> Result<bool> {
        if field.characteristic() != self.prime {
            return Err(Error::Domain("field characteristic differs from p".into()));
        }
        if point.len() != self.num_points {
            return Err(Error::Shape(format!(
                "point has {} coordinates, expected {}",
                point.len(),
                self.num_points
            )));
        }
        for block in &self.blocks {
            if field.is_zero(&block.determinant_at(field, point)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Prym-ordinarity of the fibre over `point`.
pub fn is_prym_ordinary_at(
    datum: &PrymDatum,
    p: u64,
    field: &ExtField,
    point: &[FieldElement],
) -> Result<bool> {
    OrdinarityTester::new(datum, p)?.is_ordinary_at(field, point)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum OrdinarySearch {
    Found {
        degree: u32,
        /// Defining polynomial of `F_{p^k}`, coefficients lowest first.
        field_modulus: Vec<u64>,
        point: Vec<FieldElement>,
        scanned: u64,
    },
    NotFound {
        scanned: u64,
    },
}

/// Scans `F_{p^k}^s` for `k = 1..=max_degree` in lexicographic order of
/// element indices and returns the first Prym-ordinary point of `T_s`.
/// At most `max_points` points of `T_s` are tested in total.
pub fn find_ordinary_point(
    datum: &PrymDatum,
    p: u64,
    max_degree: u32,
    max_points: u64,
) -> Result<OrdinarySearch> {
    let tester = OrdinarityTester::new(datum, p)?;
    let s = datum.matrix().num_cols();
    let mut scanned = 0u64;
    for k in 1..=max_degree {
        let field = ExtField::new(p, k)?;
        let size = field.size();
        if size < s as u64 {
            continue;
        }
        let elements: Vec<FieldElement> = (0..size).map(|x| field.from_index(x)).collect();
        let mut idx = vec![0u64; s];
        loop {
            if distinct(&idx) {
                if scanned >= max_points {
                    return Err(Error::ResourceCap {
                        what: "ordinary point scan",
                        limit: max_points,
                    });
                }
                scanned += 1;
                let point: Vec<FieldElement> =
                    idx.iter().map(|&x| elements[x as usize].clone()).collect();
                if tester.is_ordinary_at(&field, &point)? {
                    return Ok(OrdinarySearch::Found {
                        degree: k,
                        field_modulus: field.modulus().to_vec(),
                        point,
                        scanned,
                    });
                }
            }
            if !odometer(&mut idx, size) {
                break;
            }
        }
    }
    Ok(OrdinarySearch::NotFound { scanned })
}

fn distinct(idx: &[u64]) -> bool {
    (0..idx.len()).all(|a| (a + 1..idx.len()).all(|b| idx[a] != idx[b]))
}

fn odometer(idx: &mut [u64], base: u64) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < base {
            return true;
        }
        idx[k] = 0;
    }
    false
}

/// Text dump of one entry: header line then one line per term.
pub fn dump_entry(poly: &SparsePoly, n: &GroupElement, i: u32, j: u32) -> String {
    let coords: Vec<String> = n.coords().iter().map(|c| c.to_string()).collect();
    format!(
        "p={} s={} char={} i={} j={}\n{}",
        poly.modulus(),
        poly.num_vars(),
        coords.join(","),
        i,
        j,
        poly.dump_body()
    )
}
