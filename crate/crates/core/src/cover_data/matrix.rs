use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::group::{DeckGroup, DEFAULT_MAX_GROUP_SIZE};
use super::smith;

/// An element of `(Z/N)^m`, stored as residues in `[0, N)`.
///
/// Used both for deck transformations (elements of the column span) and,
/// through the dot-product pairing, for characters of the deck group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(Vec<u32>);

impl GroupElement {
    pub fn new(coords: Vec<u32>) -> Self {
        GroupElement(coords)
    }

    /// Reduces arbitrary integers into `[0, modulus)`.
    pub fn from_signed(coords: &[i64], modulus: u32) -> Self {
        GroupElement(coords.iter().map(|&c| reduce(c, modulus)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        GroupElement(vec![0; rank])
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &GroupElement, modulus: u32) -> GroupElement {
        debug_assert_eq!(self.rank(), other.rank());
        GroupElement(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| (a + b) % modulus)
                .collect(),
        )
    }

    pub fn neg(&self, modulus: u32) -> GroupElement {
        GroupElement(self.0.iter().map(|&a| (modulus - a) % modulus).collect())
    }

    pub fn scale(&self, k: u64, modulus: u32) -> GroupElement {
        let n = modulus as u64;
        GroupElement(
            self.0
                .iter()
                .map(|&a| ((a as u64 * (k % n)) % n) as u32)
                .collect(),
        )
    }

    /// The pairing `<n, h> = sum_i n_i h_i mod N`.
    pub fn dot(&self, other: &GroupElement, modulus: u32) -> u32 {
        let n = modulus as u64;
        (self
            .0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a as u64 * b as u64)
            .sum::<u64>()
            % n) as u32
    }

    /// Order of the element in `(Z/N)^m`.
    pub fn order(&self, modulus: u32) -> u32 {
        let g = self.0.iter().fold(modulus, |acc, &c| gcd(acc, c));
        modulus / g
    }

    /// Range check; used when an element arrives from outside.
    pub(crate) fn check_shape(&self, rank: usize, modulus: u32) -> Result<()> {
        if self.rank() != rank {
            return Err(Error::Shape(format!(
                "element {:?} has length {}, expected {}",
                self.0,
                self.rank(),
                rank
            )));
        }
        if self.0.iter().any(|&c| c >= modulus) {
            return Err(Error::Shape(format!(
                "element {:?} has coordinates outside [0, {})",
                self.0, modulus
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn reduce(value: i64, modulus: u32) -> u32 {
    value.rem_euclid(modulus as i64) as u32
}

pub(crate) fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// One violated rule found by [`CoverMatrix::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn push(&mut self, rule: &str, detail: String) {
        self.violations.push(Violation {
            rule: rule.to_string(),
            detail,
        });
        self.ok = false;
    }

    pub fn has(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

/// The `m x s` matrix over `Z/N` whose columns are the local monodromies of
/// an abelian cover of the projective line branched over `s` points.
///
/// Row `i` encodes the equation `w_i^N = prod_j (z - z_j)^{r_ij}` with
/// `r_ij` lifted to `[0, N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoverMatrix {
    modulus: u32,
    rows: Vec<Vec<u32>>,
}

impl CoverMatrix {
    /// Builds a matrix from residues. Entries are reduced mod `modulus`.
    ///
    /// Only the shape is checked here; the cover conditions (column sum,
    /// nonzero columns, `s >= 3`) are reported by [`CoverMatrix::validate`].
    pub fn new(modulus: u32, rows: Vec<Vec<u32>>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::Shape(format!("modulus must be >= 2, got {modulus}")));
        }
        if rows.is_empty() {
            return Err(Error::Shape("matrix needs at least one row".into()));
        }
        let s = rows[0].len();
        if s == 0 {
            return Err(Error::Shape("matrix needs at least one column".into()));
        }
        if rows.iter().any(|r| r.len() != s) {
            return Err(Error::Shape("rows have different lengths".into()));
        }
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x % modulus).collect())
            .collect();
        Ok(CoverMatrix { modulus, rows })
    }

    /// Like [`CoverMatrix::new`] but accepts arbitrary integers. The flag is
    /// true when at least one entry was outside `[0, N)` and got reduced.
    pub fn from_signed(modulus: u32, rows: &[Vec<i64>]) -> Result<(Self, bool)> {
        if modulus < 2 {
            return Err(Error::Shape(format!("modulus must be >= 2, got {modulus}")));
        }
        let mut reduced = false;
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| {
                        reduced |= x < 0 || x >= modulus as i64;
                        reduce(x, modulus)
                    })
                    .collect()
            })
            .collect();
        Ok((CoverMatrix::new(modulus, rows)?, reduced))
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(modulus: u32, columns: &[GroupElement]) -> Result<Self> {
        let m = columns.first().map(|c| c.rank()).unwrap_or(0);
        let rows = (0..m)
            .map(|i| columns.iter().map(|c| c.coords()[i]).collect())
            .collect();
        CoverMatrix::new(modulus, rows)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// `m`, the number of defining equations.
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// `s`, the number of branch points.
    pub fn num_cols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.rows[i][j]
    }

    pub fn column(&self, j: usize) -> GroupElement {
        GroupElement(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn columns(&self) -> Vec<GroupElement> {
        (0..self.num_cols()).map(|j| self.column(j)).collect()
    }

    /// Same matrix with columns reordered: column `k` of the result is
    /// column `perm[k]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> CoverMatrix {
        CoverMatrix {
            modulus: self.modulus,
            rows: self
                .rows
                .iter()
                .map(|r| perm.iter().map(|&k| r[k]).collect())
                .collect(),
        }
    }

    /// Checks every cover-matrix invariant and reports all violations.
    ///
    /// Rules: `column-sum` (the columns add up to the zero vector, i.e. the
    /// cover is unramified over infinity), `zero-column` (every `z_j` is a
    /// genuine branch point) and `branch-count` (`s >= 3`).
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport {
            ok: true,
            violations: Vec::new(),
        };
        let n = self.modulus as u64;
        for (i, row) in self.rows.iter().enumerate() {
            let sum = row.iter().map(|&x| x as u64).sum::<u64>() % n;
            if sum != 0 {
                report.push(
                    "column-sum",
                    format!("columns sum to {sum} (not 0) mod {n} in row {}", i + 1),
                );
            }
        }
        for j in 0..self.num_cols() {
            if self.column(j).is_zero() {
                report.push("zero-column", format!("column {} is zero", j + 1));
            }
        }
        if self.num_cols() < 3 {
            report.push(
                "branch-count",
                format!(
                    "s = {} but at least 3 branch points are needed",
                    self.num_cols()
                ),
            );
        }
        report
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.ok {
            Ok(())
        } else {
            let rules: Vec<_> = report
                .violations
                .iter()
                .map(|v| v.detail.as_str())
                .collect();
            Err(Error::InvalidMatrix(rules.join("; ")))
        }
    }

    /// The deck group `G`, the additive closure of the columns in `(Z/N)^m`.
    pub fn group_elements(&self) -> Result<DeckGroup> {
        self.group_elements_capped(DEFAULT_MAX_GROUP_SIZE)
    }

    pub fn group_elements_capped(&self, max_size: u64) -> Result<DeckGroup> {
        DeckGroup::closure(self.modulus, self.num_rows(), &self.columns(), max_size)
    }

    /// `m_j = N / gcd(N, r_1j, ..., r_mj)`, the order of column `j`.
    pub fn local_monodromy_orders(&self) -> Vec<u32> {
        (0..self.num_cols())
            .map(|j| self.column(j).order(self.modulus))
            .collect()
    }

    /// True iff the rows are linearly independent over `Z/N`, i.e. no
    /// nonzero `c` satisfies `c A = 0 (mod N)`.
    ///
    /// Brute force when `N^m <= 10^6`, Smith normal form otherwise.
    pub fn is_irreducible(&self) -> bool {
        let space = (self.modulus as u64).checked_pow(self.num_rows() as u32);
        match space {
            Some(size) if size <= 1_000_000 => self.is_irreducible_brute_force(),
            _ => self.is_irreducible_smith(),
        }
    }

    /// Scans every `c` in `(Z/N)^m`.
    pub fn is_irreducible_brute_force(&self) -> bool {
        let m = self.num_rows();
        let n = self.modulus;
        let mut c = vec![0u32; m];
        // odometer over (Z/N)^m \ {0}
        loop {
            let mut k = m;
            loop {
                if k == 0 {
                    return true;
                }
                k -= 1;
                c[k] += 1;
                if c[k] < n {
                    break;
                }
                c[k] = 0;
            }
            let annihilates = (0..self.num_cols()).all(|j| {
                c.iter()
                    .zip(&self.rows)
                    .map(|(&ci, row)| ci as u64 * row[j] as u64)
                    .sum::<u64>()
                    % n as u64
                    == 0
            });
            if annihilates {
                return false;
            }
        }
    }

    /// Invariant factors `d_1 | ... | d_m` of the integer lattice spanned by
    /// the lifted columns together with `N e_1, ..., N e_m`. The deck group
    /// is `Z^m` modulo that lattice's preimage, so `|G| = N^m / prod d_i`.
    pub fn lattice_invariant_factors(&self) -> Vec<i128> {
        let m = self.num_rows();
        let s = self.num_cols();
        let n = self.modulus as i128;
        let lifted: Vec<Vec<i128>> = (0..m)
            .map(|i| {
                let mut row: Vec<i128> = self.rows[i].iter().map(|&x| x as i128).collect();
                row.extend((0..m).map(|k| if k == i { n } else { 0 }));
                row
            })
            .collect();
        let factors = smith::invariant_factors(&lifted);
        debug_assert_eq!(factors.len(), m.min(s + m));
        factors
    }

    pub fn is_irreducible_smith(&self) -> bool {
        self.lattice_invariant_factors().iter().all(|&d| d == 1)
    }

    /// `|G|` read off the Smith normal form.
    pub fn group_order_smith(&self) -> u128 {
        let n = self.modulus as u128;
        let total = n.pow(self.num_rows() as u32);
        let index: u128 = self
            .lattice_invariant_factors()
            .iter()
            .map(|&d| d as u128)
            .product();
        total / index
    }
}
